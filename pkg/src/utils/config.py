import yaml
import os
from dotenv import load_dotenv
from pathlib import Path
from typing import Optional

from pydantic import BaseModel, Field, model_validator

PROJECT_ROOT = Path(__file__).resolve().parent.parent.parent
DEFAULT_CONFIG_PATH = PROJECT_ROOT / "config" / "config.yaml"
ENV_PATH = PROJECT_ROOT / ".env"

_config = None

# env var -> (section, key, converter)
ENV_OVERRIDES = {
    "CHOWGLUE_MAX_DEGREE": ("engine", "max_degree", int),
    "CHOWGLUE_WORKERS": ("engine", "workers", int),
    "CHOWGLUE_LOG_LEVEL": ("logging", "level", str),
}


def load_configuration(config_path: Path = DEFAULT_CONFIG_PATH, env_path: Path = ENV_PATH,
                       reload: bool = False) -> dict:
    """Loads configuration from YAML, then applies .env / environment overrides."""
    global _config
    if _config is not None and not reload:
        return _config

    if env_path.exists():
        load_dotenv(dotenv_path=env_path)

    if not config_path.exists():
        raise FileNotFoundError(f"Configuration file not found at {config_path}")

    with open(config_path, 'r') as f:
        cfg = yaml.safe_load(f) or {}

    for section in ("engine", "pipeline", "report", "logging"):
        cfg.setdefault(section, {})
    for var, (section, key, conv) in ENV_OVERRIDES.items():
        value = os.getenv(var)
        if value:
            try:
                cfg[section][key] = conv(value)
            except ValueError:
                raise ValueError(f"Environment variable {var}={value!r} is not a valid {conv.__name__}") from None

    _config = cfg
    return _config


def get_config() -> dict:
    """Returns the loaded configuration."""
    if _config is None:
        return load_configuration()
    return _config


def resolve_path(path: str) -> Path:
    """Relative paths in the config are taken from the project root."""
    p = Path(path)
    return p if p.is_absolute() else PROJECT_ROOT / p


class RunConfig(BaseModel):
    """Validated settings for one CLI invocation (config file merged with flags)."""

    command: str
    max_degree: int = Field(12, ge=1)
    workers: int = Field(1, ge=1)
    track_cofactors: bool = True
    constants_file: Path = PROJECT_ROOT / "data" / "genus3_constants.yaml"
    report_path: Optional[Path] = None
    indent: int = Field(2, ge=0)
    include_runtimes: bool = False
    golden_report: Optional[Path] = None
    verbose: bool = False

    @model_validator(mode="after")
    def _verify_needs_degree_nine(self):
        if self.command == "verify" and self.max_degree < 9:
            raise ValueError("verify needs max_degree >= 9 (the degree of c9)")
        return self

    @classmethod
    def from_config(cls, command: str, cfg: Optional[dict] = None, **flags) -> "RunConfig":
        cfg = cfg if cfg is not None else get_config()
        engine = cfg.get("engine", {})
        pipeline = cfg.get("pipeline", {})
        values = {
            "command": command,
            "max_degree": engine.get("max_degree", 12),
            "workers": engine.get("workers", 1),
            "track_cofactors": engine.get("track_cofactors", True),
            "indent": cfg.get("report", {}).get("indent", 2),
            "include_runtimes": cfg.get("report", {}).get("include_runtimes", False),
        }
        if pipeline.get("constants_file"):
            values["constants_file"] = resolve_path(pipeline["constants_file"])
        if pipeline.get("golden_report"):
            values["golden_report"] = resolve_path(pipeline["golden_report"])
        values.update({k: v for k, v in flags.items() if v is not None})
        return cls(**values)
