from fractions import Fraction
import pytest
from chargedfock.runconfig import RunConfig, RunConfigBuilder
from chargedfock.scalar import FLOAT


def test_defaults():
    config = RunConfigBuilder().build()
    assert config == RunConfig()
    assert config.alpha() == Fraction(1, 2)
    assert config.lambda_value() == 0
    trunc = config.truncation()
    assert (trunc.level_cutoff, trunc.j_min, trunc.j_max) == (10, -2, 2)


def test_file_then_flags(tmp_path):
    path = tmp_path / "run.cfg"
    path.write_text("# sweep\nlevel_cutoff = 4\nlambda = 1/3  # weak\n\nalpha_multiplier=2\n")
    config = RunConfigBuilder().build(str(path), {"level_cutoff": 5, "lam": None, "seed": 9})
    assert config.level_cutoff == 5
    assert config.lam == "1/3"
    assert config.alpha_multiplier == 2
    assert config.seed == 9
    assert config.alpha() == 1


def test_unknown_keys_are_rejected(tmp_path):
    path = tmp_path / "run.cfg"
    path.write_text("levels = 4\n")
    with pytest.raises(ValueError):
        RunConfigBuilder().build(str(path))
    with pytest.raises(ValueError):
        RunConfigBuilder().build(overrides={"levels": 4})


def test_malformed_lines(tmp_path):
    path = tmp_path / "run.cfg"
    path.write_text("level_cutoff 4\n")
    with pytest.raises(ValueError):
        RunConfigBuilder().build(str(path))
    path.write_text("level_cutoff = four\n")
    with pytest.raises(ValueError):
        RunConfigBuilder().build(str(path))


def test_validation():
    with pytest.raises(ValueError):
        RunConfigBuilder().build(overrides={"arithmetic": "decimal"})
    with pytest.raises(ValueError):
        RunConfigBuilder().build(overrides={"arithmetic": FLOAT})
    with pytest.raises(ValueError):
        RunConfigBuilder().build(overrides={"level_cutoff": -1})
    with pytest.raises(ValueError):
        RunConfigBuilder().build(overrides={"m_list": "0,x"})
    with pytest.raises(ValueError):
        RunConfigBuilder().build(overrides={"inject_fault": "virasoro"})


def test_float_mode():
    config = RunConfigBuilder().build(overrides={"arithmetic": FLOAT, "tolerance": 1e-9, "alpha0": "1/sqrt(8)"})
    assert config.alpha() == pytest.approx(8 ** -0.5)


def test_m_values_and_dict():
    config = RunConfig(m_list="0, 1,-1")
    assert config.m_values() == [0, 1, -1]
    data = config.to_dict()
    assert data["lambda"] == "0"
    assert "lam" not in data


@pytest.mark.parametrize("overrides", [
    {"alpha0": "abc"},
    {"alpha0": "1/sqrt(2)"},
    {"alpha0": "0"},
    {"lam": "x + 1"},
    {"j_min": 2, "j_max": 1},
])
def test_parameters_are_checked_at_build_time(overrides):
    with pytest.raises(ValueError):
        RunConfigBuilder().build(overrides=overrides)
