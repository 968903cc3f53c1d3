import logging
from collections import Counter
from pathlib import Path
from typing import Iterable, Optional, Sequence

from pydantic import ValidationError

from corpus.models.corpus import CorpusStats, ParallelCorpus, SentencePair, SplitSpec
from utils.errors import AlignmentError, ParseError, SplitSizeError
from utils.rng import XorShift64Star
from utils.textio import read_lines, write_lines

logger = logging.getLogger(__name__)


def load_parallel(source_path: Path, target_path: Path, name: Optional[str] = None) -> ParallelCorpus:
    """Zip two line-aligned UTF-8 files into a corpus. Blank lines are kept as empty sentences."""
    source_lines = read_lines(source_path)
    target_lines = read_lines(target_path)

    if len(source_lines) != len(target_lines):
        raise AlignmentError(len(source_lines), len(target_lines))

    paths = {"source": source_path, "target": target_path}
    pairs = []
    for i, (src, tgt) in enumerate(zip(source_lines, target_lines)):
        try:
            pairs.append(SentencePair(index=i, source=src.strip(), target=tgt.strip()))
        except ValidationError as e:
            error = e.errors()[0]
            raise ParseError(paths.get(error["loc"][0], source_path), i + 1, error["msg"])
    corpus = ParallelCorpus(name=name or Path(source_path).stem, pairs=tuple(pairs))
    logger.info(f"Loaded corpus '{corpus.name}' with {len(corpus)} pairs")
    return corpus


def save_corpus(corpus: ParallelCorpus, source_path: Path, target_path: Path) -> None:
    write_lines(source_path, corpus.sources)
    write_lines(target_path, corpus.targets)


def split(corpus: ParallelCorpus, spec: SplitSpec) -> tuple[ParallelCorpus, ParallelCorpus, ParallelCorpus]:
    """Draw dev and test without replacement; everything else is train. Each part keeps corpus order."""
    size = len(corpus)
    held_out = spec.dev_count + spec.test_count
    if held_out >= size:
        raise SplitSizeError(f"dev ({spec.dev_count}) + test ({spec.test_count}) must be smaller than the corpus ({size} pairs)")

    rng = XorShift64Star(spec.seed)
    drawn = rng.sample_indices(size, held_out)
    dev_positions = set(drawn[:spec.dev_count])
    test_positions = set(drawn[spec.dev_count:])

    train_pairs, dev_pairs, test_pairs = [], [], []
    for position, pair in enumerate(corpus.pairs):
        if position in dev_positions:
            dev_pairs.append(pair)
        elif position in test_positions:
            test_pairs.append(pair)
        else:
            train_pairs.append(pair)

    train = ParallelCorpus(name=f"{corpus.name}.train", pairs=tuple(train_pairs))
    dev = ParallelCorpus(name=f"{corpus.name}.dev", pairs=tuple(dev_pairs))
    test = ParallelCorpus(name=f"{corpus.name}.test", pairs=tuple(test_pairs))
    logger.info(f"Split '{corpus.name}' into train/dev/test = {len(train)}/{len(dev)}/{len(test)} (seed {spec.seed})")
    return train, dev, test


def corpus_stats(lines: Iterable[Sequence[str]]) -> CorpusStats:
    n_lines = 0
    counts: Counter = Counter()
    for tokens in lines:
        n_lines += 1
        counts.update(tokens)
    return CorpusStats(lines=n_lines, tokens=sum(counts.values()), types=len(counts))
