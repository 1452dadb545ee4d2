"""Tests for settings loading and run-config parsing."""
import pytest

from src.core.config import (
    HeatBenchParams,
    Settings,
    SystemConfig,
    load_settings,
    parse_config,
    parse_lines,
    validate_parameters,
)
from src.core.errors import (
    ConfigError,
    ConfigParseError,
    DuplicateKeyError,
    TypeMismatchError,
    UnknownKeyError,
)


def test_minimal_config():
    config = parse_config("experiment=heat-bench\nk=1.0")
    assert config.experiment == "heat-bench"
    params = config.typed_parameters()
    assert isinstance(params, HeatBenchParams)
    assert params.k == 1.0
    assert params.n_x == HeatBenchParams().n_x


def test_comments_blank_lines_and_whitespace():
    text = "# heat run\n\n  experiment = heat-bench   # inline\nk= 2.5\n"
    assert parse_lines(text) == {"experiment": "heat-bench", "k": "2.5"}


def test_duplicate_key():
    with pytest.raises(DuplicateKeyError) as info:
        parse_config("experiment=heat-bench\nk=1.0\nk=2.0")
    assert info.value.code == "E_DUPLICATE_KEY"


def test_type_mismatch_names_key():
    with pytest.raises(TypeMismatchError) as info:
        parse_config("experiment=heat-bench\nk=abc")
    assert info.value.code == "E_TYPE_MISMATCH"
    assert "k" in info.value.message
    assert info.value.context["key"] == "k"


def test_unknown_key():
    with pytest.raises(UnknownKeyError) as info:
        parse_config("experiment=heat-bench\nsigma=0.2")
    assert info.value.context["key"] == "sigma"


def test_line_without_equals_names_line():
    with pytest.raises(ConfigParseError) as info:
        parse_config("experiment=heat-bench\nk 1.0")
    assert "line 2" in info.value.message


@pytest.mark.parametrize("text", ["k=1.0", "experiment=no-such-thing"])
def test_missing_or_unknown_experiment(text):
    with pytest.raises(ConfigError):
        parse_config(text)


def test_bad_seed():
    with pytest.raises(TypeMismatchError):
        parse_config("experiment=heat-bench\nseed=1.5")


def test_precedence_defaults_settings_file_flags():
    settings = Settings(
        system=SystemConfig(output_dir="from-settings", seed=4),
        experiments={"rcd-bench": {"power": 3.0, "n_x": 21, "T": 2.0}},
    )
    text = "experiment=rcd-bench\nn_x=31\nT=0.5"
    config = parse_config(text, {"T": "0.25", "seed": "9"}, settings)
    params = config.typed_parameters()
    assert params.power == 3.0      # settings block
    assert params.n_x == 31         # file beats settings
    assert params.T == 0.25         # flag beats file
    assert params.r == 0.05         # model default
    assert config.output_dir == "from-settings"
    assert config.seed == 9


def test_settings_block_keys_are_validated():
    settings = Settings(experiments={"heat-bench": {"bogus": 1}})
    with pytest.raises(UnknownKeyError):
        parse_config("experiment=heat-bench", settings=settings)


def test_literal_parameters_validated():
    with pytest.raises(TypeMismatchError):
        validate_parameters("rcd-bench", {"terminal": "digital"})
    assert validate_parameters("rcd-bench", {"terminal": "call"}).terminal == "call"


def test_load_settings_yaml_and_env(tmp_path, monkeypatch):
    path = tmp_path / "settings.yaml"
    path.write_text(
        "system:\n  log_level: DEBUG\n  output_dir: runs\n  seed: 3\n"
        "experiments:\n  heat-bench:\n    k: 0.5\n",
        encoding="utf-8",
    )
    settings = load_settings(str(path))
    assert settings.system.log_level == "DEBUG"
    assert settings.system.seed == 3
    assert settings.experiments["heat-bench"]["k"] == 0.5

    monkeypatch.setenv("LAB_OUTPUT_DIR", "elsewhere")
    monkeypatch.setenv("LAB_SEED", "12")
    settings = load_settings(str(path))
    assert settings.system.output_dir == "elsewhere"
    assert settings.system.seed == 12


def test_load_settings_bad_env_seed(tmp_path, monkeypatch):
    monkeypatch.setenv("LAB_SEED", "twelve")
    with pytest.raises(TypeMismatchError):
        load_settings(str(tmp_path / "absent.yaml"))


def test_missing_settings_file_gives_defaults(tmp_path):
    settings = load_settings(str(tmp_path / "absent.yaml"))
    assert settings.system.output_dir == "out"
    assert settings.experiments == {}
