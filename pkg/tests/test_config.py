import math

import pytest
import yaml

from rveuler.config import SCENARIOS, config_from_dict, default_config, dump_config, load_config
from rveuler.errors import ConfigError
from rveuler.scenarios import final_time, initial_rv_euler, initial_spherical, orbit_oracle


@pytest.mark.parametrize("scenario", SCENARIOS)
def test_defaults_round_trip_through_yaml(scenario, tmp_path):
    cfg = default_config(scenario)
    path = tmp_path / "cfg.yaml"
    path.write_text(dump_config(cfg))
    assert load_config(path) == cfg


def test_orbit_defaults():
    cfg = default_config("orbit")
    assert final_time(cfg) == pytest.approx(5792.334, abs=1e-3)
    s = initial_spherical(cfg)
    assert s.v == pytest.approx(7.5618, abs=1e-4)
    assert math.degrees(orbit_oracle(cfg).inclination) == pytest.approx(97.777, abs=1e-9)


def test_entry_default_initial_state():
    st = initial_rv_euler(default_config("entry"))
    assert st.r == 6378.0 + 37.0 and st.v == 7.138
    assert st.ep_a.as_array().tolist() == [0.0, 0.0, 0.0, 1.0]
    assert st.ep_b.e3 == st.ep_b.eta == pytest.approx(math.sqrt(0.5))


@pytest.mark.parametrize(
    "doc, path",
    [
        ({"scenario": "orbit", "colour": 1}, "colour"),
        ({"scenario": "warp"}, "scenario"),
        ({"formulation": "polar"}, "formulation"),
        ({"integrator": {"steps": 0}}, "integrator.steps"),
        ({"integrator": {"steps": 10.5}}, "integrator.steps"),
        ({"integrator": {"tf": "forever"}}, "integrator.tf"),
        ({"integrator": {"step_list": [10, -1]}}, "integrator.step_list[1]"),
        ({"integrator": {"renormalize": "yes"}}, "integrator.renormalize"),
        ({"constants": {"mu": -1.0}}, "constants.mu"),
        ({"initial": {}}, "initial"),
        ({"initial": {"cartesian": {"r_vec": [1, 2], "v_vec": [0, 1, 0]}}}, "initial.cartesian.r_vec"),
        ({"initial": {"spherical": {"r": 7000, "phi": 0, "theta": 0, "v": -1, "gamma": 0, "psi": 0}}}, "initial.spherical.v"),
        (
            {"initial": {"cartesian": {"r_vec": [7000, 0, 0], "v_vec": [0, 7, 0]}, "policy": {"kind": "custom"}}},
            "initial.policy",
        ),
        ({"scenario": "entry", "entry": {"mass": 0}}, "entry.mass"),
        ({"scenario": "entry", "entry": {"alpha": {"times": [0, 0], "values": [1, 2]}}}, "entry.alpha.times"),
        ({"scenario": "entry", "entry": {"limits": {"q_min": -1}}}, "entry.limits.q_min"),
        ({"scenario": "orbit", "entry": {}}, "entry"),
        ({"scenario": "compare", "compare": {"legs": ["rv-euler"]}}, "compare.legs"),
    ],
)
def test_invalid_documents_name_the_field(doc, path):
    with pytest.raises(ConfigError) as info:
        config_from_dict(doc)
    assert info.value.path == path


def test_custom_policy_by_seed_angle():
    cfg = config_from_dict({
        "initial": {
            "cartesian": {"r_vec": [7000.0, 0.0, 0.0], "v_vec": [7.0, 0.0, 0.0]},
            "policy": {"kind": "custom", "seed_angle": 30.0},
        },
        "integrator": {"tf": 100.0},
    })
    st = initial_rv_euler(cfg)
    assert st.ep_b.as_array().tolist() == pytest.approx([0, 0, 0, 1], abs=1e-15)
    assert math.degrees(2 * math.atan2(st.ep_a.e1, st.ep_a.eta)) == pytest.approx(30.0)


def test_unbound_state_needs_numeric_end_time():
    cfg = config_from_dict({"initial": {"cartesian": {"r_vec": [7000.0, 0, 0], "v_vec": [0, 20.0, 0]}}})
    with pytest.raises(ConfigError):
        final_time(cfg)


def test_yaml_errors_are_config_errors(tmp_path):
    bad = tmp_path / "bad.yaml"
    bad.write_text("scenario: [orbit\n")
    with pytest.raises(ConfigError):
        load_config(bad)
    with pytest.raises(ConfigError):
        load_config(tmp_path / "missing.yaml")


def test_dump_is_plain_yaml():
    doc = yaml.safe_load(dump_config(default_config("entry")))
    assert doc["entry"]["alpha"] == {"times": [0.0], "values": [20.0]}
    assert "compare" not in doc
