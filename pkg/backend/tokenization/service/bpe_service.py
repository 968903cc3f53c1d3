import heapq
import logging
import re
from collections import Counter, defaultdict
from pathlib import Path
from typing import Iterable, Optional, Sequence

from pydantic import ValidationError
from tqdm import tqdm

from tokenization.models.bpe import CONTINUATION, END_OF_WORD, FINAL_ESCAPE, MergeTable, WordFreq
from utils.errors import InputError, ParseError, UsageError
from utils.textio import read_lines, write_lines

logger = logging.getLogger(__name__)

HEADER_RE = re.compile(r"^#bpe-merges v1 requested=(\d+) learned=(\d+)$")
# a final piece that would read as a continuation, and the same piece once escaped
_NEEDS_ESCAPE_RE = re.compile(rf"{re.escape(CONTINUATION)}{re.escape(FINAL_ESCAPE)}*$")
_ESCAPED_RE = re.compile(rf"{re.escape(CONTINUATION)}{re.escape(FINAL_ESCAPE)}+$")

Pair = tuple[str, str]


def word_freqs_from_lines(lines: Iterable[Sequence[str]]) -> list[WordFreq]:
    counts: Counter = Counter()
    for tokens in lines:
        counts.update(tokens)
    return [WordFreq(word=word, count=count) for word, count in sorted(counts.items())]


def _initial_symbols(word: str) -> list[str]:
    return list(word[:-1]) + [word[-1] + END_OF_WORD]


def _merge_pair(symbols: list[str], pair: Pair) -> list[str]:
    left, right = pair
    merged = []
    i = 0
    while i < len(symbols):
        if i < len(symbols) - 1 and symbols[i] == left and symbols[i + 1] == right:
            merged.append(left + right)
            i += 2
        else:
            merged.append(symbols[i])
            i += 1
    return merged


def _pop_best(heap: list, stats: Counter, merged: set) -> Optional[tuple[Pair, int]]:
    # heap entries go stale when a pair's count changes; only a live entry is trusted
    while heap:
        neg_freq, pair = heapq.heappop(heap)
        if pair in merged:
            continue
        if stats.get(pair) == -neg_freq:
            return pair, -neg_freq
    return None


def learn_merges(words: Sequence[WordFreq], n_merges: int, min_frequency: int = 2,
                 show_progress: bool = False) -> MergeTable:
    """Learn up to `n_merges` merges, always taking the most frequent adjacent pair.

    Equal frequencies go to the smaller (left, right) pair. Learning stops early
    once the best pair occurs fewer than `min_frequency` times.
    """
    if not words:
        raise InputError("Cannot learn BPE merges from an empty word list")
    if n_merges < 1:
        raise UsageError(f"Number of merges must be positive, got {n_merges}")

    freqs: Counter = Counter()
    for wf in words:
        freqs[wf.word] += wf.count
    vocab_words = sorted(freqs)
    counts = [freqs[word] for word in vocab_words]
    symbols = [_initial_symbols(word) for word in vocab_words]
    alphabet = frozenset(ch for word in vocab_words for ch in word)

    stats: Counter = Counter()
    index: defaultdict = defaultdict(set)
    for i, syms in enumerate(symbols):
        for pair in zip(syms, syms[1:]):
            stats[pair] += counts[i]
            index[pair].add(i)
    heap = [(-freq, pair) for pair, freq in stats.items()]
    heapq.heapify(heap)

    merges: list[Pair] = []
    merged: set = set()
    progress = tqdm(total=n_merges, desc="bpe merges", disable=not show_progress)
    while len(merges) < n_merges:
        best = _pop_best(heap, stats, merged)
        if best is None:
            logger.info("No adjacent pairs left to merge")
            break
        pair, freq = best
        if freq < min_frequency:
            logger.info(f"Stopping: best pair {pair} occurs {freq} times (< {min_frequency})")
            break

        merges.append(pair)
        merged.add(pair)
        logger.debug(f"merge {len(merges)}: {pair} ({freq})")

        changed = set()
        for i in index.pop(pair, ()):
            old = symbols[i]
            new = _merge_pair(old, pair)
            if len(new) == len(old):
                continue
            weight = counts[i]
            for p in zip(old, old[1:]):
                stats[p] -= weight
                changed.add(p)
            for p in zip(new, new[1:]):
                stats[p] += weight
                index[p].add(i)
                changed.add(p)
            symbols[i] = new

        for p in changed:
            count = stats[p]
            if count > 0 and p not in merged:
                heapq.heappush(heap, (-count, p))
            elif count <= 0:
                stats.pop(p, None)
        progress.update(1)
    progress.close()

    logger.info(f"Learned {len(merges)} of {n_merges} requested merges over {len(vocab_words)} word types")
    return MergeTable(merges=tuple(merges), requested=n_merges, alphabet=alphabet)


def _encode_symbols(word: str, table: MergeTable) -> list[str]:
    """Replay the merges in table order; a merge whose pair only appears after its turn is not applied."""
    symbols = _initial_symbols(word)
    ranks = table.ranks
    floor = -1
    while len(symbols) > 1:
        best_rank = None
        for pair in zip(symbols, symbols[1:]):
            rank = ranks.get(pair)
            if rank is not None and rank > floor and (best_rank is None or rank < best_rank):
                best_rank = rank
        if best_rank is None:
            break
        symbols = _merge_pair(symbols, table.merges[best_rank])
        floor = best_rank
    return symbols


def mark_continuations(pieces: Sequence[str]) -> list[str]:
    """Word pieces -> tokens: all but the last piece carry the continuation marker.

    A last piece ending in the marker (plus any escape characters) gets one more
    escape character, which `unsegment` removes again.
    """
    if not pieces:
        return []
    last = pieces[-1]
    if _NEEDS_ESCAPE_RE.search(last):
        last += FINAL_ESCAPE
    return [piece + CONTINUATION for piece in pieces[:-1]] + [last]


def apply_merges(word: str, table: MergeTable) -> list[str]:
    if not word:
        return []
    symbols = _encode_symbols(word, table)
    symbols[-1] = symbols[-1][:-len(END_OF_WORD)]
    return mark_continuations(symbols)


def segment_corpus(lines: Iterable[Sequence[str]], table: MergeTable) -> list[list[str]]:
    cache: dict[str, list[str]] = {}
    segmented = []
    for tokens in lines:
        out: list[str] = []
        for token in tokens:
            if token not in cache:
                cache[token] = apply_merges(token, table)
            out.extend(cache[token])
        segmented.append(out)
    return segmented


def unsegment_counted(tokens: Sequence[str]) -> tuple[list[str], int]:
    """Join continuation runs; also return how many runs dangled at the end of the line."""
    words: list[str] = []
    pending: list[str] = []
    for token in tokens:
        if token.endswith(CONTINUATION):
            pending.append(token[:-len(CONTINUATION)])
        else:
            if _ESCAPED_RE.search(token):
                token = token[:-len(FINAL_ESCAPE)]
            words.append("".join(pending) + token)
            pending = []
    if pending:
        words.append("".join(pending))
        return words, 1
    return words, 0


def unsegment(tokens: Sequence[str]) -> list[str]:
    words, dangling = unsegment_counted(tokens)
    if dangling:
        logger.warning(f"Line ended with a continuation marker: {' '.join(tokens[-3:])}")
    return words


def save_merges(table: MergeTable, path: Path) -> None:
    header = f"#bpe-merges v1 requested={table.requested} learned={len(table.merges)}"
    write_lines(path, [header] + [f"{left} {right}" for left, right in table.merges])


def load_merges(path: Path) -> MergeTable:
    lines = read_lines(path)
    match = HEADER_RE.match(lines[0]) if lines else None
    if match is None:
        raise ParseError(path, 1, "expected '#bpe-merges v1 requested=<N> learned=<M>'")
    requested, learned = int(match.group(1)), int(match.group(2))

    merges: list[Pair] = []
    produced: set = set()
    alphabet: set = set()
    for line_no, line in enumerate(lines[1:], start=2):
        parts = line.split(" ")
        if len(parts) != 2 or not parts[0] or not parts[1]:
            raise ParseError(path, line_no, "expected 'left right'")
        for symbol in parts:
            if symbol in produced:
                continue
            base = symbol[:-len(END_OF_WORD)] if symbol.endswith(END_OF_WORD) else symbol
            if len(base) != 1:
                raise ParseError(path, line_no, f"symbol '{symbol}' is not produced by an earlier merge")
            alphabet.add(base)
        merges.append((parts[0], parts[1]))
        produced.add(parts[0] + parts[1])

    if learned != len(merges):
        raise ParseError(path, 1, f"header announces {learned} merges, file holds {len(merges)}")
    try:
        return MergeTable(merges=tuple(merges), requested=requested, alphabet=frozenset(alphabet))
    except ValidationError as e:
        raise ParseError(path, 1, f"invalid merge table: {e.errors()[0]['msg']}")
