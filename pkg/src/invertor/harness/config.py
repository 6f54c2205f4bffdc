"""Experiment configuration files (YAML or JSON).

Example::

    simulator: lobe
    method: {kind: mh, iterations: 500}
    gamma: 1.0
    horizon: 10
    runs: 30
    base_seed: 0
    data_path: wells.csv
    output_dir: out/mh

Method hyperparameters may also sit at the top level next to a string
``method``. Relative paths resolve against the config file's directory.
"""

from dataclasses import asdict, dataclass, field
from pathlib import Path

import yaml

from ..exceptions import ConfigurationError
from ..inference.base import MethodSpec

__all__ = ["ExperimentConfig", "parse_config", "config_from_dict"]

SIMULATORS = ("lobe", "oracle")
METHOD_KEYS = ("iterations", "particles", "inner_sweeps", "mh_per_cycle", "cycles",
               "block_sites", "resampling")
REQUIRED = ("simulator", "method", "gamma", "horizon", "runs", "data_path", "output_dir")
OPTIONAL = ("base_seed", "parallel_chains", "terminal_penalty", "length_normalized", "wells",
            "grid_size", "record_params", "name")


@dataclass(frozen=True)
class ExperimentConfig:
    simulator: str
    method: MethodSpec
    gamma: float
    horizon: int
    runs: int
    data_path: Path
    output_dir: Path
    base_seed: int = 0
    parallel_chains: int = 1
    terminal_penalty: bool = None
    length_normalized: bool = False
    wells: tuple = None
    grid_size: int = 64
    record_params: bool = False
    name: str = None
    source: Path = field(default=None, compare=False)

    @property
    def label(self):
        return self.name or self.method.kind

    def as_dict(self):
        out = asdict(self)
        out["method"] = self.method.as_dict()
        out["data_path"] = str(self.data_path)
        out["output_dir"] = str(self.output_dir)
        out.pop("source")
        if self.wells is not None:
            out["wells"] = list(self.wells)
        return out


def _int(key, value, minimum):
    if isinstance(value, bool) or not isinstance(value, int):
        try:
            as_float = float(value)
        except (TypeError, ValueError):
            raise ConfigurationError(f"{key}: expected an integer, got {value!r}") from None
        if not as_float.is_integer():
            raise ConfigurationError(f"{key}: expected an integer, got {value!r}")
        value = int(as_float)
    if value < minimum:
        raise ConfigurationError(f"{key} must be >= {minimum}, got {value}")
    return value


def _float(key, value):
    try:
        out = float(value)
    except (TypeError, ValueError):
        raise ConfigurationError(f"{key}: expected a number, got {value!r}") from None
    if out != out or out in (float("inf"), float("-inf")):
        raise ConfigurationError(f"{key}: expected a finite number, got {value!r}")
    return out


def _bool(key, value):
    if isinstance(value, bool):
        return value
    raise ConfigurationError(f"{key}: expected true or false, got {value!r}")


def _method(raw, top_level):
    if isinstance(raw, str):
        fields = {"kind": raw}
        fields.update(top_level)
    elif isinstance(raw, dict):
        if top_level:
            key = next(iter(top_level))
            raise ConfigurationError(f"{key}: method settings belong inside the 'method' mapping")
        fields = dict(raw)
    else:
        raise ConfigurationError(f"method: expected a name or a mapping, got {raw!r}")
    unknown = set(fields) - {"kind", *METHOD_KEYS}
    if unknown:
        raise ConfigurationError(f"unknown method key {sorted(unknown)[0]!r}")
    if "kind" not in fields:
        raise ConfigurationError("method: missing required key 'kind'")
    for key in METHOD_KEYS[:5]:
        if key in fields:
            fields[key] = _int(key, fields[key], 1)
    if "block_sites" in fields:
        fields["block_sites"] = _bool("block_sites", fields["block_sites"])
    return MethodSpec(**fields)


def config_from_dict(raw, base_dir=None, source=None, check_paths=True):
    """Validate a mapping into an :class:`ExperimentConfig`."""
    if not isinstance(raw, dict):
        raise ConfigurationError("config must be a mapping")
    raw = dict(raw)
    top_method = {k: raw.pop(k) for k in METHOD_KEYS if k in raw}
    unknown = [k for k in raw if k not in REQUIRED + OPTIONAL]
    if unknown:
        raise ConfigurationError(f"unknown config key {unknown[0]!r}")
    for key in REQUIRED:
        if key not in raw:
            raise ConfigurationError(f"missing required key {key!r}")
    simulator = str(raw["simulator"]).lower()
    if simulator not in SIMULATORS:
        raise ConfigurationError(f"simulator: expected one of {SIMULATORS}, got {raw['simulator']!r}")
    method = _method(raw["method"], top_method)
    gamma = _float("gamma", raw["gamma"])
    if gamma < 0:
        raise ConfigurationError(f"gamma must be nonnegative, got {gamma}")
    base = Path(base_dir) if base_dir is not None else Path.cwd()
    data_path = (base / str(raw["data_path"])).resolve()
    output_dir = (base / str(raw["output_dir"])).resolve()
    if check_paths and not data_path.is_file():
        raise ConfigurationError(f"data_path: {data_path} does not exist")
    wells = raw.get("wells")
    if wells is not None:
        if not isinstance(wells, (list, tuple)) or not wells:
            raise ConfigurationError("wells: expected a nonempty list of grid columns")
        wells = tuple(_int("wells", w, 0) for w in wells)
    terminal = raw.get("terminal_penalty")
    if terminal is None:
        # on for lobe experiments, meaningless for the oracle
        terminal = simulator == "lobe"
    return ExperimentConfig(
        simulator=simulator,
        method=method,
        gamma=gamma,
        horizon=_int("horizon", raw["horizon"], 1),
        runs=_int("runs", raw["runs"], 1),
        data_path=data_path,
        output_dir=output_dir,
        base_seed=_int("base_seed", raw.get("base_seed", 0), 0),
        parallel_chains=_int("parallel_chains", raw.get("parallel_chains", 1), 1),
        terminal_penalty=_bool("terminal_penalty", terminal),
        length_normalized=_bool("length_normalized", raw.get("length_normalized", False)),
        wells=wells,
        grid_size=_int("grid_size", raw.get("grid_size", 64), 2),
        record_params=_bool("record_params", raw.get("record_params", False)),
        name=None if raw.get("name") is None else str(raw["name"]),
        source=source,
    )


def parse_config(path):
    """Read and validate a config file."""
    path = Path(path)
    if not path.is_file():
        raise ConfigurationError(f"config file {path} does not exist")
    try:
        raw = yaml.safe_load(path.read_text(encoding="utf-8"))
    except yaml.YAMLError as exc:
        raise ConfigurationError(f"{path}: cannot parse: {exc}") from None
    return config_from_dict(raw, base_dir=path.resolve().parent, source=path.resolve())
