"""Synthetic 1-D lobe deposition simulator.

Each step deposits one parabolic lobe on a lateral grid of ``G`` cells.
Thickness is reduced where the existing surface stands high, so later lobes
fill in lows (compensational stacking)::

    tau(x) = max(0, A * (1 - ((x - xc) / W)**2) - beta * (H(x) - min H))

Wells at fixed columns record the porosity of each deposited lobe as a
height-ordered segment. Porosity decays linearly from ``phi0`` at the lobe
base: ``phi(z) = phi0 * (1 - q * z)`` with ``z`` the relative height within
the lobe at that column.

All five raw parameters live in ``[0, 1]`` and are rescaled internally.
"""

import math
from dataclasses import dataclass

import numpy as np

from ..exceptions import CoherenceError, ConfigurationError
from ..trace import Simulator
from .welllogs import WellLog, WellLogSet

__all__ = [
    "EmissionSegment",
    "LobeParams",
    "LobeSimulator",
    "LobeState",
    "default_well_locations",
    "lobe_distance",
    "lobe_emit",
    "lobe_simulate",
    "make_synthetic_dataset",
]

GRID_SIZE = 64
DH = 0.05
COMPENSATION = 0.5
# thinner deposits are treated as none; keeps sample heights strictly increasing
MIN_THICKNESS = 1e-9

HALF_WIDTH = (4.0, 24.0)
AMPLITUDE = (0.2, 2.0)
POROSITY = (0.05, 0.35)
DECAY = (0.0, 0.5)


def _scale(v, lo_hi):
    lo, hi = lo_hi
    return lo + (hi - lo) * float(v)


@dataclass(frozen=True)
class LobeParams:
    """Physical lobe geometry decoded from a raw block in ``[0, 1]^5``."""

    center: float
    half_width: float
    amplitude: float
    base_porosity: float
    decay: float

    @classmethod
    def from_raw(cls, raw, grid_size=GRID_SIZE):
        c, w, a, p0, q = (float(v) for v in raw)
        return cls(
            center=c * (grid_size - 1),
            half_width=_scale(w, HALF_WIDTH),
            amplitude=_scale(a, AMPLITUDE),
            base_porosity=_scale(p0, POROSITY),
            decay=_scale(q, DECAY),
        )


@dataclass(frozen=True, eq=False)
class EmissionSegment:
    """Porosity samples one lobe left at one well over ``(base, top]``."""

    well_id: str
    base: float
    top: float
    heights: np.ndarray
    porosity: np.ndarray

    def __len__(self):
        return len(self.heights)

    def __eq__(self, other):
        if not isinstance(other, EmissionSegment):
            return NotImplemented
        return (
            self.well_id == other.well_id
            and self.base == other.base
            and self.top == other.top
            and np.array_equal(self.heights, other.heights)
            and np.array_equal(self.porosity, other.porosity)
        )


@dataclass(frozen=True, eq=False)
class LobeState:
    """Surface after ``step`` lobes plus the segments the last lobe left.

    ``parent`` links to the previous state so full well columns can be
    rebuilt without copying them on every step.
    """

    surface: np.ndarray
    step: int
    segments: tuple
    parent: "LobeState" = None

    def column(self, k):
        """Every ``(height, porosity)`` sample at well index ``k``, bottom to top."""
        parts = []
        node = self
        while node is not None and node.step > 0:
            parts.append(node.segments[k])
            node = node.parent
        parts.reverse()
        if not parts:
            return np.empty(0), np.empty(0)
        return (
            np.concatenate([s.heights for s in parts]),
            np.concatenate([s.porosity for s in parts]),
        )

    def __eq__(self, other):
        if not isinstance(other, LobeState):
            return NotImplemented
        return (
            self.step == other.step
            and np.array_equal(self.surface, other.surface)
            and self.segments == other.segments
        )

    __hash__ = None


def default_well_locations(n_wells=7, grid_size=GRID_SIZE):
    """Evenly spaced interior columns."""
    if n_wells < 1:
        raise ConfigurationError("need at least one well")
    margin = grid_size // 8
    xs = np.linspace(margin, grid_size - 1 - margin, n_wells)
    out = tuple(int(round(x)) for x in xs)
    if len(set(out)) != len(out):
        raise ConfigurationError(f"{n_wells} wells do not fit on a {grid_size}-cell grid")
    return out


def _segment(well_id, base, top, thickness, phi0, q, dh):
    if thickness <= 0.0:
        return EmissionSegment(well_id, base, base, np.empty(0), np.empty(0))
    m = max(1, math.ceil(thickness / dh - 1e-9))
    z = np.arange(1, m + 1) / m
    heights = base + thickness * z
    heights[-1] = top
    porosity = phi0 * (1.0 - q * z)
    heights.flags.writeable = False
    porosity.flags.writeable = False
    return EmissionSegment(well_id, base, top, heights, porosity)


def lobe_thickness(surface, params, compensation=COMPENSATION):
    """Deposited thickness at every cell for decoded ``params``."""
    x = np.arange(len(surface), dtype=float)
    shape = params.amplitude * (1.0 - ((x - params.center) / params.half_width) ** 2)
    relief = surface - surface.min()
    tau = np.maximum(0.0, shape - compensation * relief)
    tau[tau < MIN_THICKNESS] = 0.0
    return tau


def lobe_simulate(state, raw_params, wells, well_ids=None, dh=DH, compensation=COMPENSATION):
    """Deposit one lobe. Pure: ``state`` is never modified."""
    surface = state.surface
    params = LobeParams.from_raw(raw_params, len(surface))
    tau = lobe_thickness(surface, params, compensation)
    new_surface = surface + tau
    new_surface.flags.writeable = False
    if well_ids is None:
        well_ids = tuple(f"W{k + 1}" for k in range(len(wells)))
    segments = tuple(
        _segment(wid, float(surface[g]), float(new_surface[g]), float(tau[g]),
                 params.base_porosity, params.decay, dh)
        for wid, g in zip(well_ids, wells)
    )
    return LobeState(new_surface, state.step + 1, segments, state)


def lobe_emit(state_before, state_after, wells=None):
    """Segments deposited between two consecutive states."""
    if state_after.parent is not state_before and not (
        state_after.parent is not None and state_after.parent == state_before
    ):
        raise CoherenceError("state_after was not produced from state_before by one step")
    if wells is not None and len(wells) != len(state_after.segments):
        raise CoherenceError("well count does not match the simulated state")
    return state_after.segments


def lobe_distance(segment, log, length_normalized=False):
    """Euclidean distance between a generated segment and the observed log.

    The log is linearly interpolated at the segment heights. Heights above
    the top of the log compare against zero porosity (nothing was observed
    there); heights below its first sample use that first value. Empty
    segments contribute nothing.
    """
    n = len(segment)
    if n == 0:
        return 0.0
    if len(log) == 0:
        ref = np.zeros(n)
    else:
        ref = np.interp(segment.heights, log.heights, log.porosity)
        ref = np.where(segment.heights > log.heights[-1], 0.0, ref)
    diff = segment.porosity - ref
    d = math.sqrt(float(np.dot(diff, diff)))
    return d / math.sqrt(n) if length_normalized else d


class LobeSimulator(Simulator):
    """Sequential lobe simulator with ``n = 5`` uniform parameters per step.

    Parameters
    ----------
    horizon : int
        Number of lobes ``T``.
    wells : sequence of int, optional
        Grid columns of the wells. Defaults to seven evenly spaced columns.
    grid_size : int
        Lateral cells ``G``.
    terminal_penalty : bool
        Add ``|H_T(x) - top|`` per well to the distance of the final step,
        penalizing columns that end too low or too high.
    length_normalized : bool
        Divide each segment distance by the square root of its sample count.
    """

    param_dim = 5

    def __init__(self, horizon=10, wells=None, grid_size=GRID_SIZE, dh=DH,
                 compensation=COMPENSATION, terminal_penalty=False, length_normalized=False):
        if horizon < 1:
            raise ConfigurationError("horizon must be at least 1")
        self.horizon = int(horizon)
        self.grid_size = int(grid_size)
        self.wells = tuple(default_well_locations(7, grid_size) if wells is None else
                           (int(w) for w in wells))
        if not self.wells or any(not 0 <= g < self.grid_size for g in self.wells):
            raise ConfigurationError("well locations must lie on the grid")
        if len(set(self.wells)) != len(self.wells):
            raise ConfigurationError("well locations must be distinct")
        self.well_ids = tuple(f"W{k + 1}" for k in range(len(self.wells)))
        self.dh = float(dh)
        self.compensation = float(compensation)
        self.terminal_penalty = bool(terminal_penalty)
        self.length_normalized = bool(length_normalized)
        self.init_hyper = 0.0
        self.param_hyper = (0.0, 1.0)

    def __repr__(self):
        return (f"LobeSimulator(horizon={self.horizon}, wells={self.wells}, "
                f"grid_size={self.grid_size}, terminal_penalty={self.terminal_penalty})")

    def initialize(self):
        surface = np.full(self.grid_size, float(self.init_hyper))
        surface.flags.writeable = False
        return LobeState(surface, 0, (), None)

    def sample_params(self, rng):
        return rng.random(self.param_dim)

    def sample_site(self, rng, component):
        return float(rng.random())

    def prob_sample(self, params):
        u = np.asarray(params, dtype=float)
        return 0.0 if np.all((u >= 0) & (u <= 1)) else -np.inf

    def in_support(self, value, component=0):
        return 0.0 <= float(value) <= 1.0

    def simulate(self, state, params):
        return lobe_simulate(state, params, self.wells, self.well_ids, self.dh, self.compensation)

    def emit(self, state):
        return state.segments

    def distances(self, emission, data, step):
        out = np.empty(len(self.wells))
        for k, (segment, g) in enumerate(zip(emission, self.wells)):
            log = data.at(g)
            out[k] = lobe_distance(segment, log, self.length_normalized)
            if self.terminal_penalty and step == self.horizon:
                out[k] += abs(segment.top - log.top)
        return out

    def check_data(self, data):
        if not isinstance(data, WellLogSet):
            raise ConfigurationError("lobe simulator data must be a WellLogSet")
        unknown = set(data.locations) - set(self.wells)
        if unknown:
            raise ConfigurationError(
                f"data wells at columns {sorted(unknown)} are not simulator wells {self.wells}"
            )

    def columns(self, state):
        """Full ``(heights, porosity)`` record at every well."""
        return [state.column(k) for k in range(len(self.wells))]


def make_synthetic_dataset(sim, seed):
    """Forward-simulate hidden parameters and record the resulting well logs.

    Returns ``(logs, truth)`` where ``truth`` has shape ``(T, 5)``.
    """
    rng = np.random.Generator(np.random.Philox(seed))
    truth = np.array([sim.sample_params(rng) for _ in range(sim.horizon)])
    state = sim.initialize()
    for u in truth:
        state = sim.simulate(state, u)
    wells = []
    for k, (wid, g) in enumerate(zip(sim.well_ids, sim.wells)):
        h, p = state.column(k)
        wells.append(WellLog(wid, g, h, p))
    return WellLogSet(tuple(wells)), truth
