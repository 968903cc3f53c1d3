from functools import lru_cache
from pathlib import Path
from typing import Optional

from pydantic import Field
from pydantic_settings import BaseSettings, SettingsConfigDict

BACKEND_DIR = Path(__file__).resolve().parent.parent
BUNDLED_RULES = BACKEND_DIR / "grammars" / "toy_yupik.rules"


class Settings(BaseSettings):
    """Toolkit defaults. Every field can be overridden with a POLYTOK_* variable or a .env file."""

    model_config = SettingsConfigDict(env_prefix="POLYTOK_", env_file=".env", extra="ignore")

    log_level: str = "INFO"
    log_file: Optional[Path] = None
    progress: bool = False

    unk_token: str = "<unk>"
    vocab_limit: int = Field(default=30000, ge=1)
    seed: int = Field(default=1, ge=0, lt=2**64)
    dev_count: int = Field(default=3500, ge=1)
    test_count: int = Field(default=3500, ge=1)

    bpe_min_frequency: int = Field(default=2, ge=1)

    mdl_threshold: float = Field(default=0.005, gt=0, lt=1)
    mdl_max_epochs: int = Field(default=20, ge=1)
    unseen_morph_penalty: float = Field(default=20.0, gt=0)

    rules_path: Path = BUNDLED_RULES
    digest_algorithm: str = "sha256"


@lru_cache
def get_settings() -> Settings:
    return Settings()
