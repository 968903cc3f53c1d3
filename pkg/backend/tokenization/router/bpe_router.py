import logging
from pathlib import Path
from typing import Optional

import typer

from tokenization.service.bpe_service import (
    learn_merges,
    load_merges,
    save_merges,
    segment_corpus,
    unsegment_counted,
    word_freqs_from_lines,
)
from utils.cli import cli_errors, emit_lines, read_input_lines
from utils.config import get_settings
from utils.textio import read_token_lines

logger = logging.getLogger(__name__)

router = typer.Typer()


@router.command("bpe-learn")
def bpe_learn_command(
    input: Path = typer.Option(..., "--input", help="Tokenized training file"),
    merges: int = typer.Option(..., "--merges", min=1, help="Merge operations to learn (e.g. 10000, 15000, 30000)"),
    out: Path = typer.Option(..., help="Merge table to write"),
    min_frequency: Optional[int] = typer.Option(None, "--min-frequency", min=1, help="Stop when the best pair is rarer than this"),
):
    """Learn a BPE merge table from one language side."""
    settings = get_settings()
    with cli_errors():
        words = word_freqs_from_lines(read_token_lines(input))
        table = learn_merges(words, merges,
                             min_frequency=min_frequency or settings.bpe_min_frequency,
                             show_progress=settings.progress)
        save_merges(table, out)
        typer.echo(f"learned {len(table.merges)} of {merges} merges")


@router.command("bpe-apply")
def bpe_apply_command(
    table: Path = typer.Option(..., "--table", help="Merge table from bpe-learn"),
    input: Path = typer.Option(..., "--input", help="Tokenized file to segment"),
    out: Optional[Path] = typer.Option(None, help="Output file (stdout if omitted)"),
):
    """Segment every token with a learned merge table, marking non-final pieces with @@."""
    with cli_errors():
        merge_table = load_merges(table)
        segmented = segment_corpus(read_token_lines(input), merge_table)
        emit_lines([" ".join(tokens) for tokens in segmented], out)


@router.command("bpe-unsegment")
def bpe_unsegment_command(
    input: Optional[Path] = typer.Option(None, "--input", help="Segmented file (stdin if omitted)"),
    out: Optional[Path] = typer.Option(None, help="Output file (stdout if omitted)"),
):
    """Join @@-marked pieces back into words."""
    with cli_errors():
        restored = []
        dangling = 0
        for line in read_input_lines(input):
            words, flagged = unsegment_counted(line.split())
            dangling += flagged
            restored.append(" ".join(words))
        if dangling:
            logger.warning(f"{dangling} lines ended with a continuation marker")
        emit_lines(restored, out)
