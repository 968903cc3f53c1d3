"""Minimum-description-length morph segmentation.

Cost of a model = lexicon cost + corpus cost, in bits:
  corpus  = sum over morph tokens of -log2(count(m) / total_tokens)
  lexicon = sum over morph types of (sum of character costs + boundary cost)
Character and boundary costs are -log2 relative frequencies estimated once from
the word types (each type counted once, one boundary per type) and then frozen.

Training is batch recursive splitting: every epoch visits the word types in a
seeded random order, drops the word's current analysis, and re-optimises it by
choosing, at each level, "keep whole" or the cheapest binary split, recursing
into both halves. A word whose new analysis would raise the total cost keeps
its old one.
"""
import logging
import math
import re
from collections import Counter
from pathlib import Path
from typing import Iterable, Optional, Sequence

from pydantic import ValidationError
from tqdm import tqdm

from tokenization.models.bpe import WordFreq
from tokenization.models.segmodel import Dampening, EpochRecord, SegModel, TrainConfig, TrainingHistory
from tokenization.service.bpe_service import mark_continuations
from utils.errors import InputError, InvariantError, ParseError
from utils.rng import XorShift64Star
from utils.textio import read_lines, write_lines

logger = logging.getLogger(__name__)

HEADER_RE = re.compile(r"^#segmodel v1 total=(\d+)$")
ANALYSES_HEADER = "#analyses"
TIE_TOLERANCE = 1e-9


def char_code_lengths(words: Iterable[str]) -> tuple[dict[str, float], float]:
    """Character costs and the boundary cost from a word-type list."""
    types = sorted(set(words))
    if not types:
        return {}, 0.0
    counts: Counter = Counter()
    for word in types:
        counts.update(word)
    total = sum(counts.values()) + len(types)
    costs = {ch: -math.log2(count / total) for ch, count in sorted(counts.items())}
    return costs, -math.log2(len(types) / total)


def _clogc(count: int) -> float:
    return count * math.log2(count) if count > 0 else 0.0


def _total_cost(tokens: int, clogc: float, lexicon_cost: float) -> float:
    corpus_cost = tokens * math.log2(tokens) - clogc if tokens > 0 else 0.0
    return corpus_cost + lexicon_cost


def morph_code_length(morph: str, char_costs: dict[str, float], boundary_cost: float) -> float:
    return sum(char_costs[ch] for ch in morph) + boundary_cost


def model_cost(model: SegModel) -> float:
    """Two-part code length of the model, recomputed from scratch."""
    clogc = math.fsum(_clogc(count) for count in model.lexicon.values())
    lexicon_cost = math.fsum(morph_code_length(m, model.char_costs, model.boundary_cost)
                             for m in sorted(model.lexicon))
    return _total_cost(model.total_tokens, clogc, lexicon_cost)


def dampen(count: int, dampening: Dampening) -> int:
    if dampening == Dampening.ONES:
        return 1
    if dampening == Dampening.LOG:
        return max(1, math.ceil(math.log2(count + 1)))
    return count


class MdlTrainer:
    def __init__(self, config: TrainConfig, show_progress: bool = False):
        self.config = config
        self.show_progress = show_progress
        self.history = TrainingHistory()

        self._counts: dict[str, int] = {}
        self._tokens = 0
        self._clogc = 0.0
        self._lexicon_cost = 0.0
        self._analyses: dict[str, tuple[str, ...]] = {}
        self._word_counts: dict[str, int] = {}
        self._char_costs: dict[str, float] = {}
        self._boundary_cost = 0.0
        self._code_lengths: dict[str, float] = {}

    # cost bookkeeping

    def _code_length(self, morph: str) -> float:
        if morph not in self._code_lengths:
            self._code_lengths[morph] = morph_code_length(morph, self._char_costs, self._boundary_cost)
        return self._code_lengths[morph]

    def cost(self) -> float:
        return _total_cost(self._tokens, self._clogc, self._lexicon_cost)

    def _cost_after(self, changes: dict[str, int]) -> float:
        tokens, clogc, lexicon_cost = self._tokens, self._clogc, self._lexicon_cost
        for morph, delta in changes.items():
            if delta == 0:
                continue
            old = self._counts.get(morph, 0)
            new = old + delta
            tokens += delta
            clogc += _clogc(new) - _clogc(old)
            if old == 0 and new > 0:
                lexicon_cost += self._code_length(morph)
            elif old > 0 and new == 0:
                lexicon_cost -= self._code_length(morph)
        return _total_cost(tokens, clogc, lexicon_cost)

    def _commit(self, changes: dict[str, int]) -> None:
        for morph, delta in changes.items():
            if delta == 0:
                continue
            old = self._counts.get(morph, 0)
            new = old + delta
            if new < 0:
                raise InvariantError(f"morph count for {morph!r} would become {new}")
            self._tokens += delta
            self._clogc += _clogc(new) - _clogc(old)
            if old == 0 and new > 0:
                self._lexicon_cost += self._code_length(morph)
            elif old > 0 and new == 0:
                self._lexicon_cost -= self._code_length(morph)
            if new:
                self._counts[morph] = new
            else:
                del self._counts[morph]

    def scratch_cost(self) -> float:
        clogc = math.fsum(_clogc(count) for count in self._counts.values())
        lexicon_cost = math.fsum(self._code_length(m) for m in sorted(self._counts))
        return _total_cost(self._tokens, clogc, lexicon_cost)

    # search

    def _optimize(self, construction: str, weight: int) -> list[str]:
        """Best analysis of `construction`, whose `weight` occurrences are currently counted whole."""
        if len(construction) == 1:
            return [construction]

        best_cost = self._cost_after({})
        best_changes = None
        best_split = 0
        for i in range(1, len(construction)):
            changes: Counter = Counter({construction: -weight})
            changes[construction[:i]] += weight
            changes[construction[i:]] += weight
            cost = self._cost_after(changes)
            if cost < best_cost:
                best_cost, best_changes, best_split = cost, changes, i

        if best_changes is None:
            return [construction]
        self._commit(best_changes)
        return (self._optimize(construction[:best_split], weight)
                + self._optimize(construction[best_split:], weight))

    def _reanalyze(self, word: str) -> bool:
        """Re-optimise one word type; returns False when the old analysis was kept."""
        weight = self._word_counts[word]
        old = self._analyses[word]
        before = self.cost()

        unsplit: Counter = Counter()
        for morph in old:
            unsplit[morph] -= weight
        unsplit[word] += weight
        self._commit(unsplit)

        new = tuple(self._optimize(word, weight))
        if new != old and self.cost() > before:
            restore: Counter = Counter()
            for morph in new:
                restore[morph] -= weight
            for morph in old:
                restore[morph] += weight
            self._commit(restore)
            return False

        self._analyses[word] = new
        return True

    # training

    def _initialize(self, words: Sequence[WordFreq]) -> None:
        merged: Counter = Counter()
        for wf in words:
            merged[wf.word] += wf.count
        self._word_counts = {word: dampen(count, self.config.dampening) for word, count in sorted(merged.items())}
        self._char_costs, self._boundary_cost = char_code_lengths(self._word_counts)
        self._code_lengths = {}
        self._counts, self._tokens, self._clogc, self._lexicon_cost = {}, 0, 0.0, 0.0
        self._commit(dict(self._word_counts))
        self._analyses = {word: (word,) for word in self._word_counts}

    def train(self, words: Sequence[WordFreq]) -> SegModel:
        if not words:
            raise InputError("Cannot train a segmentation model on an empty word list")

        config = self.config
        self._initialize(words)
        self.history = TrainingHistory(initial_cost=self.cost())
        logger.info(f"MDL training on {len(self._word_counts)} word types, initial cost {self.history.initial_cost:.3f} bits")

        rng = XorShift64Star(config.seed)
        order = list(self._word_counts)
        previous = self.history.initial_cost
        for epoch in tqdm(range(1, config.max_epochs + 1), desc="mdl epochs", disable=not self.show_progress):
            rng.shuffle(order)
            reverted = sum(1 for word in order if not self._reanalyze(word))
            cost = self.cost()
            record = EpochRecord(epoch=epoch, cost=cost, scratch_cost=self.scratch_cost(), reverted=reverted)
            self.history.epochs.append(record)
            if abs(record.cost - record.scratch_cost) > 1e-6:
                logger.warning(f"Epoch {epoch}: maintained cost drifted from recomputed cost by {record.cost - record.scratch_cost:.2e} bits")
            if reverted:
                logger.debug(f"Epoch {epoch}: kept the previous analysis of {reverted} words")

            reduction = (previous - cost) / previous if previous > 0 else 0.0
            logger.info(f"Epoch {epoch}: cost {cost:.3f} bits (relative reduction {reduction:.5f}), {len(self._counts)} morph types")
            previous = cost
            if epoch >= config.min_epochs and reduction < config.convergence_threshold:
                self.history.converged = True
                break

        return self.to_model()

    def to_model(self) -> SegModel:
        return SegModel(
            lexicon=dict(sorted(self._counts.items())),
            total_tokens=self._tokens,
            char_costs=dict(self._char_costs),
            boundary_cost=self._boundary_cost,
            analyses=dict(sorted(self._analyses.items())),
        )


def train(words: Sequence[WordFreq], config: TrainConfig) -> SegModel:
    return MdlTrainer(config).train(words)


def morph_cost(morph: str, model: SegModel, unseen_morph_penalty: float) -> float:
    count = model.lexicon.get(morph)
    if count:
        return -math.log2(count / model.total_tokens)
    return unseen_morph_penalty * len(morph)


def _better(candidate: tuple, incumbent: tuple) -> bool:
    # (cost, morph count, negated morph lengths); cost ties within tolerance fall through
    if candidate[0] < incumbent[0] - TIE_TOLERANCE:
        return True
    if candidate[0] > incumbent[0] + TIE_TOLERANCE:
        return False
    return candidate[1:] < incumbent[1:]


def segment_viterbi(word: str, model: SegModel, unseen_morph_penalty: float = 20.0) -> list[str]:
    """Cheapest segmentation; ties prefer fewer morphs, then the longest morphs from the left."""
    if not word:
        return []
    n = len(word)
    best: list[Optional[tuple]] = [None] * (n + 1)
    cut = [n] * (n + 1)
    best[n] = (0.0, 0, ())
    for i in range(n - 1, -1, -1):
        for j in range(i + 1, n + 1):
            rest_cost, rest_count, rest_lengths = best[j]
            candidate = (rest_cost + morph_cost(word[i:j], model, unseen_morph_penalty),
                         rest_count + 1,
                         (i - j,) + rest_lengths)
            if best[i] is None or _better(candidate, best[i]):
                best[i] = candidate
                cut[i] = j

    morphs = []
    i = 0
    while i < n:
        morphs.append(word[i:cut[i]])
        i = cut[i]
    return morphs


def segment_word(word: str, model: SegModel, unseen_morph_penalty: float = 20.0) -> list[str]:
    """Training words keep their stored analysis; anything else goes through Viterbi."""
    analysis = model.analyses.get(word)
    if analysis is not None:
        return list(analysis)
    return segment_viterbi(word, model, unseen_morph_penalty)


def segment_lines(lines: Iterable[Sequence[str]], model: SegModel, unseen_morph_penalty: float = 20.0) -> list[list[str]]:
    cache: dict[str, list[str]] = {}
    segmented = []
    for tokens in lines:
        out: list[str] = []
        for token in tokens:
            if token not in cache:
                morphs = segment_word(token, model, unseen_morph_penalty)
                cache[token] = mark_continuations(morphs)
            out.extend(cache[token])
        segmented.append(out)
    return segmented


def save_model(model: SegModel, path: Path) -> None:
    lines = [f"#segmodel v1 total={model.total_tokens}"]
    lines += [f"{count}\t{morph}" for morph, count in sorted(model.lexicon.items())]
    lines.append(ANALYSES_HEADER)
    lines += [f"{word}\t{' '.join(morphs)}" for word, morphs in sorted(model.analyses.items())]
    write_lines(path, lines)


def load_model(path: Path) -> SegModel:
    lines = read_lines(path)
    match = HEADER_RE.match(lines[0]) if lines else None
    if match is None:
        raise ParseError(path, 1, "expected '#segmodel v1 total=<N>'")
    total = int(match.group(1))

    lexicon: dict[str, int] = {}
    analyses: dict[str, tuple[str, ...]] = {}
    in_analyses = False
    for line_no, line in enumerate(lines[1:], start=2):
        if line == ANALYSES_HEADER:
            in_analyses = True
            continue
        parts = line.split("\t")
        if len(parts) != 2 or not parts[0] or not parts[1]:
            raise ParseError(path, line_no, "expected two tab-separated fields")
        if not in_analyses:
            if not parts[0].isdigit() or int(parts[0]) < 1:
                raise ParseError(path, line_no, f"morph count must be a positive integer, got '{parts[0]}'")
            if parts[1] in lexicon:
                raise ParseError(path, line_no, f"duplicate morph '{parts[1]}'")
            lexicon[parts[1]] = int(parts[0])
        else:
            if parts[0] in analyses:
                raise ParseError(path, line_no, f"duplicate analysis for '{parts[0]}'")
            analyses[parts[0]] = tuple(parts[1].split(" "))

    if not lexicon:
        raise ParseError(path, 1, "model has an empty lexicon")
    # without stored analyses the lexicon morphs stand in for the word types
    char_costs, boundary_cost = char_code_lengths(analyses or lexicon)
    uncovered = sorted({ch for morph in lexicon for ch in morph} - char_costs.keys())
    if uncovered:
        raise ParseError(path, 1, f"lexicon uses characters no analysed word contains: {''.join(uncovered)}")
    try:
        return SegModel(lexicon=lexicon, total_tokens=total, char_costs=char_costs,
                        boundary_cost=boundary_cost, analyses=analyses)
    except ValidationError as e:
        raise ParseError(path, 1, f"inconsistent model: {e.errors()[0]['msg']}")
