import logging
from pathlib import Path
from typing import Optional

import typer

from corpus.models.corpus import SplitSpec
from corpus.service.corpus_service import load_parallel, save_corpus, split
from corpus.service.vocab_service import apply_vocab, build_vocab, save_vocab
from utils.cli import cli_errors, emit_lines
from utils.config import get_settings
from utils.textio import read_token_lines, write_lines

logger = logging.getLogger(__name__)

router = typer.Typer()


@router.command("split")
def split_command(
    source: Path = typer.Option(..., help="Source-language file, one sentence per line"),
    target: Path = typer.Option(..., help="Target-language file, aligned with --source"),
    out_dir: Path = typer.Option(..., "--out-dir", help="Directory receiving train/dev/test files"),
    dev: Optional[int] = typer.Option(None, min=1, help="Dev sentences (default from settings)"),
    test: Optional[int] = typer.Option(None, min=1, help="Test sentences (default from settings)"),
    seed: Optional[int] = typer.Option(None, min=0, help="Split seed"),
):
    """Split a parallel corpus into train/dev/test and write <split>.src / <split>.tgt files."""
    settings = get_settings()
    with cli_errors():
        corpus = load_parallel(source, target)
        spec = SplitSpec(dev_count=dev or settings.dev_count,
                         test_count=test or settings.test_count,
                         seed=settings.seed if seed is None else seed)
        parts = split(corpus, spec)
        for part_name, part in zip(("train", "dev", "test"), parts):
            save_corpus(part, out_dir / f"{part_name}.src", out_dir / f"{part_name}.tgt")
            write_lines(out_dir / f"{part_name}.ids", [str(i) for i in part.indices])
        typer.echo(f"train={len(parts[0])} dev={len(parts[1])} test={len(parts[2])}")


@router.command("vocab")
def vocab_command(
    input: Path = typer.Option(..., "--input", help="Tokenized file, tokens separated by spaces"),
    out: Path = typer.Option(..., help="Vocabulary file to write"),
    limit: Optional[int] = typer.Option(None, min=1, help="Maximum vocabulary size"),
    apply: Optional[Path] = typer.Option(None, help="Also replace out-of-vocabulary tokens in this file"),
    apply_out: Optional[Path] = typer.Option(None, "--apply-out", help="Where to write the --apply result (stdout if omitted)"),
):
    """Build a frequency-truncated vocabulary, optionally mapping a file onto it."""
    settings = get_settings()
    with cli_errors():
        vocab = build_vocab(read_token_lines(input), limit or settings.vocab_limit, settings.unk_token)
        save_vocab(vocab, out)
        logger.info(f"Wrote {len(vocab)} entries to {out}")
        if apply is not None:
            mapped = [" ".join(apply_vocab(tokens, vocab)) for tokens in read_token_lines(apply)]
            emit_lines(mapped, apply_out)
