from typing import Tuple

from pydantic import BaseModel, ConfigDict, Field, PositiveInt, PrivateAttr, field_validator, model_validator

MAX_SEED = 2**64 - 1


class SentencePair(BaseModel):
    model_config = ConfigDict(frozen=True)

    index: int = Field(ge=0)
    source: str
    target: str

    @field_validator("source", "target")
    @classmethod
    def single_line(cls, value: str) -> str:
        if "\n" in value or "\r" in value:
            raise ValueError("sentence must not contain a line break")
        return value


class ParallelCorpus(BaseModel):
    """Aligned sentence pairs. Loaded corpora are indexed 0..n-1; splits keep the original indices."""

    model_config = ConfigDict(frozen=True)

    name: str
    pairs: Tuple[SentencePair, ...] = ()

    @model_validator(mode="after")
    def ordered_indices(self):
        for previous, current in zip(self.pairs, self.pairs[1:]):
            if current.index <= previous.index:
                raise ValueError(f"pair indices must be strictly increasing ({previous.index} then {current.index})")
        return self

    def __len__(self) -> int:
        return len(self.pairs)

    @property
    def indices(self) -> list[int]:
        return [pair.index for pair in self.pairs]

    @property
    def sources(self) -> list[str]:
        return [pair.source for pair in self.pairs]

    @property
    def targets(self) -> list[str]:
        return [pair.target for pair in self.pairs]


class SplitSpec(BaseModel):
    model_config = ConfigDict(frozen=True)

    dev_count: PositiveInt
    test_count: PositiveInt
    seed: int = Field(default=1, ge=0, le=MAX_SEED)


class Vocabulary(BaseModel):
    """Frequency-ranked token list truncated to `limit` entries."""

    model_config = ConfigDict(frozen=True)

    entries: Tuple[Tuple[str, PositiveInt], ...] = ()
    limit: PositiveInt
    unk_token: str = "<unk>"

    _tokens: frozenset = PrivateAttr(default=frozenset())

    @model_validator(mode="after")
    def check_entries(self):
        if len(self.entries) > self.limit:
            raise ValueError(f"{len(self.entries)} entries exceed the limit of {self.limit}")
        for (token_a, count_a), (token_b, count_b) in zip(self.entries, self.entries[1:]):
            if (-count_a, token_a) >= (-count_b, token_b):
                raise ValueError(f"entries out of order at '{token_b}'")
        tokens = {token for token, _ in self.entries}
        if self.unk_token in tokens:
            raise ValueError(f"unknown-token symbol '{self.unk_token}' must not be an entry")
        return self

    def model_post_init(self, __context) -> None:
        self._tokens = frozenset(token for token, _ in self.entries)

    def __contains__(self, token: str) -> bool:
        return token in self._tokens

    def __len__(self) -> int:
        return len(self.entries)


class CorpusStats(BaseModel):
    model_config = ConfigDict(frozen=True)

    lines: int
    tokens: int
    types: int

    @property
    def tokens_per_line(self) -> float:
        return self.tokens / self.lines if self.lines else 0.0
