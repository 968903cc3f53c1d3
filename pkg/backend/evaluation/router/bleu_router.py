import logging
from pathlib import Path

import typer

from evaluation.service.bleu_service import corpus_bleu, format_report
from utils.cli import cli_errors
from utils.errors import AlignmentError
from utils.textio import read_token_lines

logger = logging.getLogger(__name__)

router = typer.Typer()


@router.command("bleu")
def bleu_command(
    hyp: Path = typer.Option(..., "--hyp", help="Detokenized or tokenized system output"),
    ref: Path = typer.Option(..., "--ref", help="Reference translations, aligned line by line"),
    order: int = typer.Option(4, "--order", min=1, help="Highest n-gram order"),
):
    """Score a hypothesis file against one reference with corpus BLEU."""
    with cli_errors():
        hyp_lines = read_token_lines(hyp)
        ref_lines = read_token_lines(ref)
        if len(hyp_lines) != len(ref_lines):
            raise AlignmentError(len(hyp_lines), len(ref_lines))
        report = corpus_bleu(list(zip(hyp_lines, ref_lines)), order=order)
        logger.info(f"Scored {len(hyp_lines)} lines from {hyp}")
        typer.echo(format_report(report))
