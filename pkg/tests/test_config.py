import pytest
from pydantic import ValidationError

from src.utils import config as config_module
from src.utils.config import PROJECT_ROOT, RunConfig, load_configuration, resolve_path


@pytest.fixture
def fresh_config():
    yield
    load_configuration(reload=True)


def test_shipped_config_loads(fresh_config):
    cfg = load_configuration(reload=True)
    assert cfg["engine"]["max_degree"] >= 9
    assert cfg["report"]["include_runtimes"] is False
    assert resolve_path(cfg["pipeline"]["constants_file"]).exists()


def test_environment_overrides(fresh_config, monkeypatch, tmp_path):
    monkeypatch.setenv("CHOWGLUE_MAX_DEGREE", "10")
    monkeypatch.setenv("CHOWGLUE_WORKERS", "3")
    cfg = load_configuration(env_path=tmp_path / "absent.env", reload=True)
    assert cfg["engine"]["max_degree"] == 10
    assert cfg["engine"]["workers"] == 3
    monkeypatch.setenv("CHOWGLUE_WORKERS", "many")
    with pytest.raises(ValueError):
        load_configuration(env_path=tmp_path / "absent.env", reload=True)


def test_missing_config_file(fresh_config, tmp_path):
    with pytest.raises(FileNotFoundError):
        load_configuration(config_path=tmp_path / "none.yaml", reload=True)


def test_run_config_merges_flags_over_the_file():
    cfg = {"engine": {"max_degree": 11, "workers": 2}, "pipeline": {"constants_file": "data/other.yaml"}}
    run = RunConfig.from_config("verify", cfg, workers=4, max_degree=None)
    assert run.max_degree == 11
    assert run.workers == 4
    assert run.constants_file == PROJECT_ROOT / "data" / "other.yaml"
    assert run.include_runtimes is False


def test_verify_needs_degree_nine():
    with pytest.raises(ValidationError):
        RunConfig.from_config("verify", {"engine": {"max_degree": 8}})
    assert RunConfig.from_config("ideal", {"engine": {"max_degree": 3}}).max_degree == 3
    with pytest.raises(ValidationError):
        RunConfig.from_config("ideal", {"engine": {"workers": 0}})


def test_config_is_cached(fresh_config):
    first = load_configuration(reload=True)
    assert config_module.get_config() is first
