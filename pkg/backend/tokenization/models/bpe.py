from typing import FrozenSet, Tuple

from pydantic import BaseModel, ConfigDict, PositiveInt, PrivateAttr, field_validator, model_validator

END_OF_WORD = "</w>"
CONTINUATION = "@@"
# appended to a word-final piece that itself ends in the continuation marker
FINAL_ESCAPE = "&"


class WordFreq(BaseModel):
    model_config = ConfigDict(frozen=True)

    word: str
    count: PositiveInt

    @field_validator("word")
    @classmethod
    def non_empty_single_word(cls, value: str) -> str:
        if not value or any(ch.isspace() for ch in value):
            raise ValueError(f"word must be non-empty and whitespace-free: {value!r}")
        return value


class MergeTable(BaseModel):
    """Ordered BPE merges. Symbols are characters, characters fused with </w>, or earlier merge results."""

    model_config = ConfigDict(frozen=True)

    merges: Tuple[Tuple[str, str], ...] = ()
    requested: PositiveInt
    alphabet: FrozenSet[str] = frozenset()

    _ranks: dict = PrivateAttr(default_factory=dict)

    @model_validator(mode="after")
    def check_lineage(self):
        if len(self.merges) > self.requested:
            raise ValueError(f"{len(self.merges)} merges exceed the {self.requested} requested")

        known = set(self.alphabet) | {ch + END_OF_WORD for ch in self.alphabet}
        seen = set()
        for left, right in self.merges:
            if (left, right) in seen:
                raise ValueError(f"duplicate merge ({left}, {right})")
            for symbol in (left, right):
                if not symbol or any(ch.isspace() for ch in symbol):
                    raise ValueError(f"symbol {symbol!r} is empty or contains whitespace")
                if symbol not in known:
                    raise ValueError(f"symbol {symbol!r} is neither in the alphabet nor produced by an earlier merge")
            seen.add((left, right))
            known.add(left + right)
        return self

    def model_post_init(self, __context) -> None:
        self._ranks = {pair: rank for rank, pair in enumerate(self.merges)}

    @property
    def ranks(self) -> dict:
        return self._ranks
