"""Punctuation-delimiting word tokenizer (the unparsed baseline).

Each mark in . , ! ? ; : " ( ) [ ] is its own token, as are the doubled
quotes '' and ``. English mode also splits the clitics n't 's 'd 'll 're 've 'm
("hadn't" -> "had n't") and, when detokenizing, glues any token starting with
an apostrophe to the word before it. Apostrophe-preserving mode keeps every
apostrophe inside its word, which is what Yup'ik orthography needs ("Yup'ik").
"""
import re
from typing import Sequence

from tokenization.models.word_tok import TokMode

PUNCTUATION = '.,!?;:"()[]'
_PUNCT_CLASS = re.escape(PUNCTUATION)

_PIECE_RE = re.compile(rf"''|``|[{_PUNCT_CLASS}]|(?:(?!''|``)[^{_PUNCT_CLASS}])+")
_NEGATION_RE = re.compile(r"^(.+?)(n't)$", re.IGNORECASE)
_CLITIC_RE = re.compile(r"^(.+?)('s|'d|'ll|'re|'ve|'m)$", re.IGNORECASE)

CLOSING = frozenset(".,!?;:)")
OPENING = frozenset("(")


def _split_clitic(word: str) -> list[str]:
    match = _NEGATION_RE.match(word) or _CLITIC_RE.match(word)
    if match:
        return [match.group(1), match.group(2)]
    return [word]


def tokenize(line: str, mode: TokMode = TokMode.ENGLISH) -> list[str]:
    tokens: list[str] = []
    for chunk in line.split():
        for piece in _PIECE_RE.findall(chunk):
            if mode == TokMode.ENGLISH and len(piece) > 1 and piece not in ("''", "``"):
                tokens.extend(_split_clitic(piece))
            else:
                tokens.append(piece)
    return tokens


def _attaches_left(token: str, mode: TokMode) -> bool:
    if token in CLOSING:
        return True
    if mode == TokMode.ENGLISH:
        return token.startswith("'") or token.lower() == "n't"
    return False


def detokenize(tokens: Sequence[str], mode: TokMode = TokMode.ENGLISH) -> str:
    parts: list[str] = []
    for i, token in enumerate(tokens):
        if i > 0 and not _attaches_left(token, mode) and tokens[i - 1] not in OPENING:
            parts.append(" ")
        parts.append(token)
    return "".join(parts)


def tokenize_lines(lines: Sequence[str], mode: TokMode = TokMode.ENGLISH, lowercase: bool = False) -> list[list[str]]:
    return [tokenize(line.lower() if lowercase else line, mode) for line in lines]
