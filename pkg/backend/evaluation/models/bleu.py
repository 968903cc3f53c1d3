from typing import Tuple

from pydantic import BaseModel, ConfigDict, Field, PositiveInt, model_validator


class NgramStats(BaseModel):
    """Additive BLEU sufficient statistics for one sentence or a whole corpus."""

    model_config = ConfigDict(frozen=True)

    matches: Tuple[int, ...]
    totals: Tuple[int, ...]
    hyp_len: int = Field(ge=0)
    ref_len: int = Field(ge=0)

    def __add__(self, other: "NgramStats") -> "NgramStats":
        return NgramStats(
            matches=tuple(a + b for a, b in zip(self.matches, other.matches)),
            totals=tuple(a + b for a, b in zip(self.totals, other.totals)),
            hyp_len=self.hyp_len + other.hyp_len,
            ref_len=self.ref_len + other.ref_len,
        )


class BleuReport(BaseModel):
    model_config = ConfigDict(frozen=True)

    precisions: Tuple[Tuple[int, int], ...]
    bp: float = Field(gt=0, le=1)
    hyp_len: int = Field(ge=0)
    ref_len: int = Field(ge=0)
    score: float = Field(ge=0, le=1)
    order: PositiveInt = 4

    @model_validator(mode="after")
    def one_precision_per_order(self):
        if len(self.precisions) != self.order:
            raise ValueError(f"expected {self.order} precisions, got {len(self.precisions)}")
        return self

    @property
    def precision_values(self) -> list[float]:
        return [matches / total if total else 0.0 for matches, total in self.precisions]

    @property
    def ratio(self) -> float:
        return self.hyp_len / self.ref_len if self.ref_len else 0.0
