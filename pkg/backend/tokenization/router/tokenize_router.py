from pathlib import Path
from typing import Optional

import typer

from tokenization.models.word_tok import TokMode
from tokenization.service.word_tok_service import detokenize, tokenize_lines
from utils.cli import cli_errors, emit_lines, read_input_lines

router = typer.Typer()


@router.command("tokenize")
def tokenize_command(
    input: Optional[Path] = typer.Option(None, "--input", help="Text file (stdin if omitted)"),
    out: Optional[Path] = typer.Option(None, help="Output file (stdout if omitted)"),
    mode: TokMode = typer.Option(TokMode.ENGLISH, help="english splits clitics; apostrophe-preserving never splits apostrophes"),
    lowercase: bool = typer.Option(False, "--lowercase", help="Lowercase before tokenizing"),
    detok: bool = typer.Option(False, "--detok", help="Detokenize space-separated tokens instead"),
):
    """Delimit punctuation (and English clitics), one tokenized line per input line."""
    with cli_errors():
        lines = read_input_lines(input)
        if detok:
            result = [detokenize(line.split(), mode) for line in lines]
        else:
            result = [" ".join(tokens) for tokens in tokenize_lines(lines, mode, lowercase)]
        emit_lines(result, out)
