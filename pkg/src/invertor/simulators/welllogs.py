"""Well-log records and their CSV representation.

File format: UTF-8, LF line endings, header ``well_id,x,height_m,porosity``,
rows sorted by ``(well_id, height_m)``. A well with no samples has no rows.
"""

import csv
from dataclasses import dataclass

import numpy as np

from ..exceptions import ConfigurationError

__all__ = ["WellLog", "WellLogSet", "read_well_logs", "write_well_logs"]

HEADER = ["well_id", "x", "height_m", "porosity"]


@dataclass(frozen=True, eq=False)
class WellLog:
    """Height-ordered porosity samples measured at grid column ``x``."""

    well_id: str
    x: int
    heights: np.ndarray
    porosity: np.ndarray

    def __post_init__(self):
        h = np.array(self.heights, dtype=float).reshape(-1)
        p = np.array(self.porosity, dtype=float).reshape(-1)
        if h.shape != p.shape:
            raise ConfigurationError(f"well {self.well_id}: heights and porosity differ in length")
        if np.any(np.diff(h) <= 0):
            raise ConfigurationError(f"well {self.well_id}: heights must be strictly increasing")
        if np.any((p < 0) | (p > 1)):
            raise ConfigurationError(f"well {self.well_id}: porosity outside [0, 1]")
        h.flags.writeable = False
        p.flags.writeable = False
        object.__setattr__(self, "heights", h)
        object.__setattr__(self, "porosity", p)
        object.__setattr__(self, "x", int(self.x))

    @property
    def top(self):
        return float(self.heights[-1]) if len(self.heights) else 0.0

    def __len__(self):
        return len(self.heights)

    def __eq__(self, other):
        if not isinstance(other, WellLog):
            return NotImplemented
        return (
            self.well_id == other.well_id
            and self.x == other.x
            and np.array_equal(self.heights, other.heights)
            and np.array_equal(self.porosity, other.porosity)
        )


@dataclass(frozen=True, eq=False)
class WellLogSet:
    """The observed data: one :class:`WellLog` per well location."""

    wells: tuple

    def __post_init__(self):
        wells = tuple(self.wells)
        if not wells:
            raise ConfigurationError("a well-log set needs at least one well")
        ids = [w.well_id for w in wells]
        xs = [w.x for w in wells]
        if len(set(ids)) != len(ids) or len(set(xs)) != len(xs):
            raise ConfigurationError("well ids and locations must be unique")
        object.__setattr__(self, "wells", wells)
        object.__setattr__(self, "_by_x", {w.x: w for w in wells})

    def __len__(self):
        return len(self.wells)

    def __iter__(self):
        return iter(self.wells)

    @property
    def locations(self):
        return tuple(w.x for w in self.wells)

    def at(self, x):
        """The log at column ``x``, or an empty log if none was recorded there."""
        log = self._by_x.get(int(x))
        if log is None:
            return WellLog(f"x{int(x)}", int(x), [], [])
        return log

    def nonempty(self):
        return WellLogSet(tuple(w for w in self.wells if len(w))) if any(len(w) for w in self.wells) else self

    def __eq__(self, other):
        if not isinstance(other, WellLogSet):
            return NotImplemented
        return self.wells == other.wells


def _sort_key(well_id):
    # W2 before W10
    digits = "".join(c for c in well_id if c.isdigit())
    return (well_id.rstrip("0123456789"), int(digits) if digits else -1, well_id)


def write_well_logs(logs, path):
    """Write ``logs`` as CSV. Floats use shortest round-trip ``repr``."""
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(HEADER)
        for well in sorted(logs, key=lambda w: _sort_key(w.well_id)):
            for h, p in zip(well.heights, well.porosity):
                writer.writerow([well.well_id, well.x, repr(float(h)), repr(float(p))])


def read_well_logs(path):
    """Parse a well-log CSV into a :class:`WellLogSet`."""
    rows = {}
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header != HEADER:
            raise ConfigurationError(f"{path}: expected header {','.join(HEADER)}, got {header}")
        for lineno, row in enumerate(reader, start=2):
            if not row:
                continue
            if len(row) != 4:
                raise ConfigurationError(f"{path}:{lineno}: expected 4 fields, got {len(row)}")
            well_id, x, h, p = row
            try:
                entry = rows.setdefault(well_id, [int(x), [], []])
                if entry[0] != int(x):
                    raise ConfigurationError(f"{path}:{lineno}: well {well_id} changes location")
                entry[1].append(float(h))
                entry[2].append(float(p))
            except ValueError as exc:
                raise ConfigurationError(f"{path}:{lineno}: {exc}") from None
    if not rows:
        raise ConfigurationError(f"{path}: no well-log rows")
    wells = []
    for well_id in sorted(rows, key=_sort_key):
        x, h, p = rows[well_id]
        order = np.argsort(h, kind="stable")
        wells.append(WellLog(well_id, x, np.asarray(h)[order], np.asarray(p)[order]))
    return WellLogSet(tuple(wells))
