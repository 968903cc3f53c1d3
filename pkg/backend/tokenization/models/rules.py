from enum import Enum
from typing import Dict, FrozenSet, Optional, Tuple

from pydantic import BaseModel, ConfigDict, PositiveInt, field_validator, model_validator

DEFAULT_CONSONANTS = frozenset("bcdfghjklmnpqrstvwxyz")


class JoinOp(str, Enum):
    PLAIN = "+"
    DROP_FINAL_CONSONANT = "-"
    DROP_FINAL_E = "~"

    @property
    def deletes(self) -> bool:
        return self is not JoinOp.PLAIN


def _check_form(value: str) -> str:
    if not value or any(ch.isspace() for ch in value):
        raise ValueError(f"form must be non-empty and whitespace-free: {value!r}")
    return value


class SuffixRule(BaseModel):
    model_config = ConfigDict(frozen=True)

    form: str
    join: JoinOp = JoinOp.PLAIN
    gloss: str
    terminal: bool = False

    @field_validator("form")
    @classmethod
    def postbase_form(cls, value: str) -> str:
        # "-mi" is postbase notation for "mi"
        if value.startswith("-") and len(value) > 1:
            value = value[1:]
        return _check_form(value)

    @model_validator(mode="after")
    def deleting_rules_consume(self):
        if self.join.deletes and len(self.form) < 2:
            raise ValueError(f"suffix '{self.form}' deletes a stem character, so its form needs at least 2 characters")
        return self

    @property
    def name(self) -> str:
        return f"{self.join.value}{self.form} ({self.gloss})"


class RuleSet(BaseModel):
    model_config = ConfigDict(frozen=True)

    bases: Dict[str, str]
    suffixes: Tuple[SuffixRule, ...] = ()
    max_suffixes: PositiveInt = 8
    consonants: FrozenSet[str] = DEFAULT_CONSONANTS

    @field_validator("bases")
    @classmethod
    def base_forms(cls, value: Dict[str, str]) -> Dict[str, str]:
        for form in value:
            _check_form(form)
        return value


class Analysis(BaseModel):
    """One parse of a word. Unresolved parses hold the whole word as their only morpheme."""

    model_config = ConfigDict(frozen=True)

    morphemes: Tuple[Tuple[str, str], ...]
    resolved: bool
    base: Optional[str] = None
    rules: Tuple[SuffixRule, ...] = ()

    @property
    def surfaces(self) -> list[str]:
        return [surface for surface, _ in self.morphemes]

    @property
    def glosses(self) -> Tuple[str, ...]:
        return tuple(gloss for _, gloss in self.morphemes)
