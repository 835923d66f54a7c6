"""Scenario configuration: YAML document <-> typed dataclasses.

Angles are degrees in the document and stay degrees in these dataclasses;
they are converted to radians once, when a scenario is built from the
config.  The README lists every key.
"""

from __future__ import annotations

import copy
import math
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Any

import yaml

from . import constants
from .errors import ConfigError

SCENARIOS = ("orbit", "convergence", "entry", "compare")
FORMULATIONS = ("rv-euler", "spherical", "both")

# Reference near-polar orbit; speed is made exactly circular so the
# analytic oracle applies (7.562 km/s rounded).
ORBIT_SPHERICAL = {"r": 6971.0, "phi": 0.0, "theta": 0.0, "v": "circular", "gamma": 0.0, "psi": -172.223}


def _entry_rv_euler(r_e: float = constants.R_EARTH) -> dict:
    h = math.sqrt(2.0) / 2.0
    return {"r": r_e + 37.0, "ep_a": [0.0, 0.0, 0.0, 1.0], "v": 7.138, "ep_b": [0.0, 0.0, h, h]}


@dataclass
class Constants:
    mu: float = constants.MU_EARTH
    omega_e: float = constants.OMEGA_EARTH
    r_e: float = constants.R_EARTH


@dataclass
class Policy:
    kind: str = "h_aligned"  # h_aligned | custom
    seed_angle: float | None = None  # deg, rotation of the C_AE seed about r
    c_ae: list[list[float]] | None = None


@dataclass
class InitialState:
    """Exactly one of the three representations is set."""

    spherical: dict | None = None
    cartesian: dict | None = None
    rv_euler: dict | None = None
    policy: Policy = field(default_factory=Policy)


@dataclass
class Integrator:
    steps: int = 1000
    step_list: list[int] | None = None
    renormalize: bool = False
    t0: float = 0.0
    tf: float | str = "period"
    workers: int = 1


@dataclass
class Profile:
    times: list[float] = field(default_factory=lambda: [0.0])
    values: list[float] = field(default_factory=lambda: [0.0])  # deg


@dataclass
class Limits:
    aero_load_max: float = 0.1  # km/s^2
    q_min: float = 0.0  # Pa
    alpha_max: float = 40.0  # deg
    alpha_rate_max: float = 10.0  # deg/s
    sigma_rate_max: float = 30.0  # deg/s


@dataclass
class Entry:
    mass: float = 907.0  # kg
    reference_area_m2: float = 0.4839
    cl_alpha: float = 1.5  # 1/rad
    cd0: float = 0.05
    k_induced: float = 0.5
    rho0_kg_m3: float = 1.225
    scale_height: float = constants.SCALE_HEIGHT  # km
    h_floor: float = -1.0  # km
    v_min: float = constants.V_MIN  # km/s
    alpha: Profile = field(default_factory=lambda: Profile([0.0], [20.0]))
    sigma: Profile = field(default_factory=lambda: Profile([0.0], [0.0]))
    limits: Limits = field(default_factory=Limits)
    target_longitude: float = 25.15  # deg
    target_latitude: float = 0.0  # deg
    target_speed: float = 1.219  # km/s


@dataclass
class Compare:
    legs: list[str] = field(default_factory=lambda: ["rv-euler", "spherical"])


@dataclass
class ScenarioConfig:
    scenario: str = "orbit"
    formulation: str = "rv-euler"
    constants: Constants = field(default_factory=Constants)
    initial: InitialState = field(default_factory=InitialState)
    integrator: Integrator = field(default_factory=Integrator)
    entry: Entry | None = None
    compare: Compare | None = None

    def to_dict(self) -> dict:
        return _strip_none(asdict(self))


def _strip_none(obj):
    if isinstance(obj, dict):
        return {k: _strip_none(v) for k, v in obj.items() if v is not None}
    if isinstance(obj, list):
        return [_strip_none(v) for v in obj]
    return obj


def default_config(scenario: str = "orbit") -> ScenarioConfig:
    """Built-in configuration for each verb."""
    if scenario not in SCENARIOS:
        raise ConfigError("scenario", f"must be one of {SCENARIOS}, got {scenario!r}")
    cfg = ScenarioConfig(scenario=scenario)
    if scenario == "entry":
        cfg.initial = InitialState(rv_euler=_entry_rv_euler())
        cfg.integrator = Integrator(steps=2520, tf=25.2)
        cfg.entry = Entry()
    elif scenario == "compare":
        cfg.initial = InitialState(spherical=dict(ORBIT_SPHERICAL))
        cfg.integrator = Integrator(steps=10_000)
        cfg.compare = Compare()
    else:
        cfg.initial = InitialState(spherical=dict(ORBIT_SPHERICAL))
        if scenario == "convergence":
            cfg.formulation = "both"
            cfg.integrator = Integrator(step_list=[10, 100, 1000, 10_000])
    return cfg


# --- parsing -------------------------------------------------------------


def _mapping(node, path: str) -> dict:
    if node is None:
        return {}
    if not isinstance(node, dict):
        raise ConfigError(path, "expected a mapping")
    return node


def _reject_unknown(node: dict, allowed, path: str) -> None:
    extra = sorted(set(node) - set(allowed))
    if extra:
        raise ConfigError(f"{path}.{extra[0]}" if path else extra[0], "unknown key")


def _number(node, key: str, default, path: str, positive: bool = False, allow: tuple = ()) -> Any:
    value = node.get(key, default)
    if value in allow:
        return value
    if isinstance(value, bool) or not isinstance(value, (int, float)) or not math.isfinite(value):
        raise ConfigError(f"{path}.{key}", f"expected a finite number, got {value!r}")
    if positive and not value > 0:
        raise ConfigError(f"{path}.{key}", "must be positive")
    return float(value)


def _vector(node, key: str, n: int, path: str) -> list[float]:
    value = node.get(key)
    if not isinstance(value, list) or len(value) != n:
        raise ConfigError(f"{path}.{key}", f"expected a list of {n} numbers")
    return [_number({"x": x}, "x", None, f"{path}.{key}[{i}]") for i, x in enumerate(value)]


def _parse_constants(node, path="constants") -> Constants:
    node = _mapping(node, path)
    _reject_unknown(node, ("mu", "omega_e", "r_e"), path)
    d = Constants()
    return Constants(
        mu=_number(node, "mu", d.mu, path, positive=True),
        omega_e=_number(node, "omega_e", d.omega_e, path),
        r_e=_number(node, "r_e", d.r_e, path, positive=True),
    )


def _parse_initial(node, path="initial") -> InitialState:
    node = _mapping(node, path)
    _reject_unknown(node, ("spherical", "cartesian", "rv_euler", "policy"), path)
    present = [k for k in ("spherical", "cartesian", "rv_euler") if k in node]
    if len(present) != 1:
        raise ConfigError(path, "exactly one of spherical, cartesian, rv_euler is required")
    kind = present[0]
    sub = _mapping(node[kind], f"{path}.{kind}")
    p = f"{path}.{kind}"
    if kind == "spherical":
        _reject_unknown(sub, ("r", "phi", "theta", "v", "gamma", "psi"), p)
        values = {k: _number(sub, k, None, p) for k in ("r", "phi", "theta", "gamma", "psi")}
        values["v"] = _number(sub, "v", None, p, positive=True, allow=("circular",))
        if not values["r"] > 0:
            raise ConfigError(f"{p}.r", "must be positive")
        out = InitialState(spherical=values)
    elif kind == "cartesian":
        _reject_unknown(sub, ("r_vec", "v_vec"), p)
        out = InitialState(cartesian={"r_vec": _vector(sub, "r_vec", 3, p), "v_vec": _vector(sub, "v_vec", 3, p)})
    else:
        _reject_unknown(sub, ("r", "ep_a", "v", "ep_b"), p)
        out = InitialState(rv_euler={
            "r": _number(sub, "r", None, p, positive=True),
            "ep_a": _vector(sub, "ep_a", 4, p),
            "v": _number(sub, "v", None, p, positive=True),
            "ep_b": _vector(sub, "ep_b", 4, p),
        })
    out.policy = _parse_policy(node.get("policy"), f"{path}.policy")
    return out


def _parse_policy(node, path) -> Policy:
    node = _mapping(node, path)
    _reject_unknown(node, ("kind", "seed_angle", "c_ae"), path)
    kind = node.get("kind", "h_aligned")
    if kind not in ("h_aligned", "custom"):
        raise ConfigError(f"{path}.kind", "must be h_aligned or custom")
    if kind == "h_aligned":
        if "seed_angle" in node or "c_ae" in node:
            raise ConfigError(path, "seed_angle/c_ae only apply to the custom policy")
        return Policy()
    if ("seed_angle" in node) == ("c_ae" in node):
        raise ConfigError(path, "custom policy needs exactly one of seed_angle or c_ae")
    if "seed_angle" in node:
        return Policy("custom", seed_angle=_number(node, "seed_angle", None, path))
    rows = node["c_ae"]
    if not isinstance(rows, list) or len(rows) != 3:
        raise ConfigError(f"{path}.c_ae", "expected a 3x3 nested list")
    return Policy("custom", c_ae=[_vector({"row": row}, "row", 3, f"{path}.c_ae[{i}]") for i, row in enumerate(rows)])


def _int_steps(value, path) -> int:
    if isinstance(value, bool) or not isinstance(value, int) or value < 1:
        raise ConfigError(path, f"expected a positive integer, got {value!r}")
    return value


def _parse_integrator(node, path="integrator") -> Integrator:
    node = _mapping(node, path)
    _reject_unknown(node, ("steps", "step_list", "renormalize", "t0", "tf", "workers"), path)
    d = Integrator()
    step_list = node.get("step_list")
    if step_list is not None:
        if not isinstance(step_list, list) or not step_list:
            raise ConfigError(f"{path}.step_list", "expected a non-empty list of integers")
        step_list = [_int_steps(n, f"{path}.step_list[{i}]") for i, n in enumerate(step_list)]
    renorm = node.get("renormalize", False)
    if not isinstance(renorm, bool):
        raise ConfigError(f"{path}.renormalize", "expected true or false")
    out = Integrator(
        steps=_int_steps(node.get("steps", d.steps), f"{path}.steps"),
        step_list=step_list,
        renormalize=renorm,
        t0=_number(node, "t0", 0.0, path),
        tf=_number(node, "tf", "period", path, allow=("period",)),
        workers=_int_steps(node.get("workers", 1), f"{path}.workers"),
    )
    if out.tf != "period" and not out.tf > out.t0:
        raise ConfigError(f"{path}.tf", "must be greater than t0")
    return out


def _parse_profile(node, path, default: Profile) -> Profile:
    if node is None:
        return copy.deepcopy(default)
    node = _mapping(node, path)
    _reject_unknown(node, ("times", "values"), path)
    times, values = node.get("times"), node.get("values")
    if not isinstance(times, list) or not isinstance(values, list) or not times or len(times) != len(values):
        raise ConfigError(path, "times and values must be non-empty lists of equal length")
    times = [_number({"t": x}, "t", None, f"{path}.times[{i}]") for i, x in enumerate(times)]
    values = [_number({"x": x}, "x", None, f"{path}.values[{i}]") for i, x in enumerate(values)]
    if any(b <= a for a, b in zip(times, times[1:])):
        raise ConfigError(f"{path}.times", "must be strictly increasing")
    return Profile(times, values)


def _parse_entry(node, path="entry") -> Entry:
    node = _mapping(node, path)
    d = Entry()
    scalars = (
        "mass", "reference_area_m2", "cl_alpha", "cd0", "k_induced", "rho0_kg_m3", "scale_height",
        "h_floor", "v_min", "target_longitude", "target_latitude", "target_speed",
    )
    _reject_unknown(node, scalars + ("alpha", "sigma", "limits"), path)
    positive = {"mass", "reference_area_m2", "rho0_kg_m3", "scale_height", "v_min", "target_speed"}
    values = {k: _number(node, k, getattr(d, k), path, positive=k in positive) for k in scalars}
    lim_node = _mapping(node.get("limits"), f"{path}.limits")
    lim_keys = ("aero_load_max", "q_min", "alpha_max", "alpha_rate_max", "sigma_rate_max")
    _reject_unknown(lim_node, lim_keys, f"{path}.limits")
    dl = Limits()
    limits = Limits(**{
        k: _number(lim_node, k, getattr(dl, k), f"{path}.limits", positive=k != "q_min") for k in lim_keys
    })
    if limits.q_min < 0:
        raise ConfigError(f"{path}.limits.q_min", "must be non-negative")
    return Entry(
        **values,
        alpha=_parse_profile(node.get("alpha"), f"{path}.alpha", d.alpha),
        sigma=_parse_profile(node.get("sigma"), f"{path}.sigma", d.sigma),
        limits=limits,
    )


def _parse_compare(node, path="compare") -> Compare:
    node = _mapping(node, path)
    _reject_unknown(node, ("legs",), path)
    legs = node.get("legs", ["rv-euler", "spherical"])
    if not isinstance(legs, list) or len(legs) != 2 or any(leg not in ("rv-euler", "spherical") for leg in legs):
        raise ConfigError(f"{path}.legs", "expected two of rv-euler, spherical")
    return Compare(list(legs))


def config_from_dict(doc: dict) -> ScenarioConfig:
    """Validate a raw document; missing sections fall back to the verb's defaults."""
    doc = _mapping(doc, "<root>")
    _reject_unknown(doc, ("scenario", "formulation", "constants", "initial", "integrator", "entry", "compare"), "")
    scenario = doc.get("scenario", "orbit")
    if scenario not in SCENARIOS:
        raise ConfigError("scenario", f"must be one of {SCENARIOS}")
    base = default_config(scenario)
    formulation = doc.get("formulation", base.formulation)
    if formulation not in FORMULATIONS:
        raise ConfigError("formulation", f"must be one of {FORMULATIONS}")
    cfg = ScenarioConfig(
        scenario=scenario,
        formulation=formulation,
        constants=_parse_constants(doc.get("constants")),
        initial=_parse_initial(doc["initial"]) if "initial" in doc else base.initial,
        integrator=_parse_integrator(doc["integrator"]) if "integrator" in doc else base.integrator,
    )
    if scenario == "entry":
        cfg.entry = _parse_entry(doc.get("entry"))
        if "initial" not in doc:
            cfg.initial = InitialState(rv_euler=_entry_rv_euler(cfg.constants.r_e))
    elif "entry" in doc:
        raise ConfigError("entry", f"section only applies to the entry scenario, not {scenario}")
    if scenario == "compare":
        cfg.compare = _parse_compare(doc.get("compare"))
    elif "compare" in doc:
        raise ConfigError("compare", f"section only applies to the compare scenario, not {scenario}")
    return cfg


def load_config(path: str | Path) -> ScenarioConfig:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ConfigError(str(path), f"cannot read config: {exc.strerror}") from exc
    try:
        doc = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        raise ConfigError(str(path), f"invalid YAML: {exc}") from exc
    return config_from_dict(doc or {})


def dump_config(cfg: ScenarioConfig) -> str:
    return yaml.safe_dump(cfg.to_dict(), sort_keys=False)
