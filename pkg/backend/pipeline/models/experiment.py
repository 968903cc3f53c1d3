from enum import Enum
from pathlib import Path
from typing import Dict, Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field, PositiveInt, model_validator

MAX_SEED = 2**64 - 1

SPLITS = ("train", "dev", "test")
SIDES = ("src", "tgt")


class Strategy(str, Enum):
    UNPARSED = "unparsed"
    RULE_BASED = "rule-based"
    MDL = "mdl"
    BPE = "bpe"

    @property
    def learned(self) -> bool:
        return self in (Strategy.MDL, Strategy.BPE)


class ExperimentConfig(BaseModel):
    """One cell of the experiment matrix. Outputs go to `out_dir / name`."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    name: str = Field(pattern=r"^[A-Za-z0-9][A-Za-z0-9._-]*$")
    strategy: Strategy
    merge_ops: Optional[PositiveInt] = None
    vocab_limit: PositiveInt = 30000
    seed: int = Field(default=1, ge=0, le=MAX_SEED)
    dev_count: PositiveInt = 3500
    test_count: PositiveInt = 3500
    source_path: Path
    target_path: Path
    out_dir: Path
    rules_path: Optional[Path] = None
    lowercase: bool = False
    segment_target: bool = False

    @model_validator(mode="after")
    def strategy_options(self):
        if self.strategy == Strategy.BPE and self.merge_ops is None:
            raise ValueError("merge_ops is required for the bpe strategy")
        if self.strategy != Strategy.BPE and self.merge_ops is not None:
            raise ValueError(f"merge_ops only applies to bpe, not {self.strategy.value}")
        if self.segment_target and not self.strategy.learned:
            raise ValueError(f"segment_target needs a learned strategy (mdl or bpe), not {self.strategy.value}")
        return self

    @property
    def run_dir(self) -> Path:
        return self.out_dir / self.name


class SplitStats(BaseModel):
    model_config = ConfigDict(frozen=True)

    lines: int = Field(ge=0)
    tokens: int = Field(ge=0)
    types: int = Field(ge=0)
    oov_rate: float = Field(ge=0, le=1)

    @property
    def tokens_per_line(self) -> float:
        return self.tokens / self.lines if self.lines else 0.0


class RunManifest(BaseModel):
    """What a run produced: its config, per-split statistics and a digest for every file in the run directory."""

    model_config = ConfigDict(frozen=True)

    config: ExperimentConfig
    digest_algorithm: str
    learn_inputs: Dict[str, str]
    vocab_sizes: Dict[str, int]
    # keyed "<split>.<side>", e.g. "dev.src"
    stats: Dict[str, SplitStats]
    artifacts: Dict[str, str]
    run_dir: Optional[Path] = Field(default=None, exclude=True)

    @model_validator(mode="after")
    def covers_every_split(self):
        missing = [f"{s}.{side}" for s in SPLITS for side in SIDES if f"{s}.{side}" not in self.stats]
        if missing:
            raise ValueError(f"missing statistics for {', '.join(missing)}")
        unknown = [f for f in self.learn_inputs.values() if f not in self.artifacts]
        if unknown:
            raise ValueError(f"learn inputs without a digest: {', '.join(unknown)}")
        return self

    def split_size(self, split_name: str) -> int:
        return self.stats[f"{split_name}.src"].lines


class ComparisonTable(BaseModel):
    model_config = ConfigDict(frozen=True)

    columns: Tuple[str, ...]
    rows: Tuple[Tuple[str, ...], ...]

    def column(self, name: str) -> list[str]:
        position = self.columns.index(name)
        return [row[position] for row in self.rows]
