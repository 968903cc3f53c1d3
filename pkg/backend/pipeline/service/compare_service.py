import io
import logging
from pathlib import Path
from typing import Mapping, Optional, Sequence

from rich import box
from rich.console import Console
from rich.table import Table

from evaluation.service.bleu_service import corpus_bleu
from pipeline.models.experiment import SPLITS, ComparisonTable, RunManifest
from utils.errors import AlignmentError, ComparisonError, UsageError
from utils.textio import read_token_lines

logger = logging.getLogger(__name__)

HypothesisFiles = Mapping[tuple[str, str], Path]


def parse_hypothesis_option(value: str) -> tuple[tuple[str, str], Path]:
    """`RUN:SPLIT=PATH` -> ((run, split), path)."""
    key, sep, path = value.partition("=")
    run, colon, split_name = key.rpartition(":")
    if not sep or not colon or not run or not path:
        raise UsageError(f"expected RUN:SPLIT=PATH, got '{value}'")
    if split_name not in SPLITS:
        raise UsageError(f"unknown split '{split_name}' in '{value}' (expected one of {', '.join(SPLITS)})")
    return (run, split_name), Path(path)


def _bleu(manifest: RunManifest, split_name: str, hypothesis: Path) -> float:
    reference = read_token_lines(manifest.run_dir / f"{split_name}.tok.tgt")
    hyp_lines = read_token_lines(hypothesis)
    if len(hyp_lines) != len(reference):
        raise AlignmentError(len(hyp_lines), len(reference))
    return corpus_bleu(list(zip(hyp_lines, reference))).score


def compare_runs(manifests: Sequence[RunManifest], hypotheses: Optional[HypothesisFiles] = None) -> ComparisonTable:
    """One row per run: vocabulary sizes, source OOV rate and tokens per line per split, BLEU if hypotheses are given.

    BLEU references are the word-tokenized target side of each split.
    """
    hypotheses = hypotheses or {}
    if len(manifests) < 2:
        raise UsageError(f"compare needs at least 2 runs, got {len(manifests)}")

    names = [m.config.name for m in manifests]
    unknown = sorted({run for run, _ in hypotheses if run not in names})
    if unknown:
        raise UsageError(f"hypotheses given for unknown runs: {', '.join(unknown)}")

    first = manifests[0]
    for manifest in manifests[1:]:
        for split_name in SPLITS:
            if manifest.split_size(split_name) != first.split_size(split_name):
                raise ComparisonError(
                    f"{split_name} has {manifest.split_size(split_name)} lines in '{manifest.config.name}' "
                    f"but {first.split_size(split_name)} in '{first.config.name}'")

    bleu_splits = [s for s in SPLITS if any(split_name == s for _, split_name in hypotheses)]
    columns = ["run", "strategy", "merges", "vocab.src", "vocab.tgt"]
    for split_name in SPLITS:
        columns += [f"oov%.{split_name}", f"tok/line.{split_name}"]
    columns += [f"bleu.{split_name}" for split_name in bleu_splits]

    rows = []
    for manifest in manifests:
        config = manifest.config
        row = [config.name, config.strategy.value, str(config.merge_ops or "-"),
               str(manifest.vocab_sizes["src"]), str(manifest.vocab_sizes["tgt"])]
        for split_name in SPLITS:
            stats = manifest.stats[f"{split_name}.src"]
            row += [f"{100 * stats.oov_rate:.2f}", f"{stats.tokens_per_line:.2f}"]
        for split_name in bleu_splits:
            hypothesis = hypotheses.get((config.name, split_name))
            row.append(f"{100 * _bleu(manifest, split_name, hypothesis):.2f}" if hypothesis else "-")
        rows.append(tuple(row))

    logger.info(f"Compared {len(manifests)} runs")
    return ComparisonTable(columns=tuple(columns), rows=tuple(rows))


def render_table(table: ComparisonTable) -> str:
    rich_table = Table(box=box.SIMPLE_HEAD, show_edge=False)
    for column in table.columns:
        rich_table.add_column(column, justify="left" if column in ("run", "strategy") else "right", no_wrap=True)
    for row in table.rows:
        rich_table.add_row(*row)

    console = Console(file=io.StringIO(), width=max(80, 12 * len(table.columns) + 40), color_system=None)
    console.print(rich_table)
    return "\n".join(line.rstrip() for line in console.file.getvalue().splitlines())
