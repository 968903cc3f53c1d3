import logging
from collections import Counter
from pathlib import Path
from typing import Iterable, Optional, Sequence

from pydantic import ValidationError

from corpus.models.corpus import Vocabulary
from utils.errors import ParseError
from utils.textio import read_lines, write_lines

logger = logging.getLogger(__name__)

VOCAB_HEADER = "#vocab v1"


def build_vocab(lines: Iterable[Sequence[str]], limit: int, unk_token: str = "<unk>") -> Vocabulary:
    """Keep the `limit` most frequent tokens; equal counts are ordered by ascending token."""
    counts: Counter = Counter()
    for tokens in lines:
        counts.update(tokens)
    # the unknown symbol is reserved, even if it already occurs in the text
    counts.pop(unk_token, None)

    ranked = sorted(counts.items(), key=lambda item: (-item[1], item[0]))
    kept = tuple(ranked[:limit])
    if len(ranked) > limit:
        logger.info(f"Vocabulary truncated from {len(ranked)} to {limit} types")
    return Vocabulary(entries=kept, limit=limit, unk_token=unk_token)


def apply_vocab(tokens: Sequence[str], vocab: Vocabulary) -> list[str]:
    return [token if token in vocab else vocab.unk_token for token in tokens]


def oov_rate(lines: Iterable[Sequence[str]], vocab: Vocabulary) -> float:
    total = 0
    unknown = 0
    for tokens in lines:
        total += len(tokens)
        unknown += sum(1 for token in tokens if token not in vocab)
    return unknown / total if total else 0.0


def save_vocab(vocab: Vocabulary, path: Path) -> None:
    write_lines(path, [VOCAB_HEADER] + [f"{token}\t{count}" for token, count in vocab.entries])


def load_vocab(path: Path, limit: Optional[int] = None, unk_token: str = "<unk>") -> Vocabulary:
    lines = read_lines(path)
    if not lines or lines[0] != VOCAB_HEADER:
        raise ParseError(path, 1, f"expected header '{VOCAB_HEADER}'")

    entries = []
    for line_no, line in enumerate(lines[1:], start=2):
        parts = line.split("\t")
        if len(parts) != 2 or not parts[0]:
            raise ParseError(path, line_no, "expected 'token<TAB>count'")
        try:
            count = int(parts[1])
        except ValueError:
            raise ParseError(path, line_no, f"count is not an integer: '{parts[1]}'")
        entries.append((parts[0], count))

    try:
        return Vocabulary(entries=tuple(entries), limit=limit or max(len(entries), 1), unk_token=unk_token)
    except ValidationError as e:
        raise ParseError(path, 1, f"invalid vocabulary: {e.errors()[0]['msg']}")
