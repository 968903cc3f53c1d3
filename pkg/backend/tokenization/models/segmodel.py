from enum import Enum
from typing import Dict, List, Tuple

from pydantic import BaseModel, ConfigDict, Field, PositiveInt, model_validator

MAX_SEED = 2**64 - 1


class Dampening(str, Enum):
    NONE = "none"
    LOG = "log"
    ONES = "ones"


class TrainConfig(BaseModel):
    model_config = ConfigDict(frozen=True)

    convergence_threshold: float = Field(default=0.005, gt=0, lt=1)
    max_epochs: PositiveInt = 20
    min_epochs: PositiveInt = 1
    seed: int = Field(default=1, ge=0, le=MAX_SEED)
    unseen_morph_penalty: float = Field(default=20.0, gt=0)
    dampening: Dampening = Dampening.NONE

    @model_validator(mode="after")
    def epochs_in_order(self):
        if self.min_epochs > self.max_epochs:
            raise ValueError(f"min_epochs ({self.min_epochs}) exceeds max_epochs ({self.max_epochs})")
        return self


class SegModel(BaseModel):
    """Morph lexicon plus the current analysis of every training word type."""

    model_config = ConfigDict(frozen=True)

    lexicon: Dict[str, PositiveInt]
    total_tokens: PositiveInt
    char_costs: Dict[str, float]
    boundary_cost: float
    analyses: Dict[str, Tuple[str, ...]]

    @model_validator(mode="after")
    def consistent(self):
        if not self.lexicon:
            raise ValueError("lexicon is empty")
        if sum(self.lexicon.values()) != self.total_tokens:
            raise ValueError(f"total_tokens {self.total_tokens} != sum of morph counts {sum(self.lexicon.values())}")
        for word, morphs in self.analyses.items():
            if "".join(morphs) != word:
                raise ValueError(f"analysis {' '.join(morphs)!r} does not spell {word!r}")
            missing = [m for m in morphs if m not in self.lexicon]
            if missing:
                raise ValueError(f"analysis of {word!r} uses morphs missing from the lexicon: {missing}")
        return self


class EpochRecord(BaseModel):
    epoch: int
    cost: float
    scratch_cost: float
    reverted: int


class TrainingHistory(BaseModel):
    initial_cost: float = 0.0
    epochs: List[EpochRecord] = []
    converged: bool = False
