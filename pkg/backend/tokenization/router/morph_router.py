import logging
from pathlib import Path
from typing import Optional

import typer

from tokenization.models.segmodel import Dampening, TrainConfig
from tokenization.service.bpe_service import word_freqs_from_lines
from tokenization.service.mdl_service import MdlTrainer, load_model, save_model, segment_lines
from tokenization.service.rule_morph_service import load_rules, tokenize_corpus
from utils.cli import cli_errors, emit_lines
from utils.config import get_settings
from utils.textio import read_token_lines

logger = logging.getLogger(__name__)

router = typer.Typer()


@router.command("morf-train")
def morf_train_command(
    input: Path = typer.Option(..., "--input", help="Tokenized training file"),
    out: Path = typer.Option(..., help="Segmentation model to write"),
    threshold: Optional[float] = typer.Option(None, min=0, max=1, help="Stop when an epoch reduces cost by less than this fraction"),
    max_epochs: Optional[int] = typer.Option(None, "--max-epochs", min=1),
    seed: Optional[int] = typer.Option(None, min=0, help="Seed for the word visiting order"),
    dampening: Dampening = typer.Option(Dampening.NONE, help="Word count dampening before training"),
):
    """Train an MDL morph segmentation model in batch mode."""
    settings = get_settings()
    with cli_errors():
        config = TrainConfig(
            convergence_threshold=threshold or settings.mdl_threshold,
            max_epochs=max_epochs or settings.mdl_max_epochs,
            seed=settings.seed if seed is None else seed,
            unseen_morph_penalty=settings.unseen_morph_penalty,
            dampening=dampening,
        )
        trainer = MdlTrainer(config, show_progress=settings.progress)
        model = trainer.train(word_freqs_from_lines(read_token_lines(input)))
        save_model(model, out)
        final = trainer.history.epochs[-1].cost if trainer.history.epochs else trainer.history.initial_cost
        typer.echo(f"{len(model.lexicon)} morphs, cost {trainer.history.initial_cost:.1f} -> {final:.1f} bits "
                   f"after {len(trainer.history.epochs)} epochs")


@router.command("morf-segment")
def morf_segment_command(
    model: Path = typer.Option(..., "--model", help="Model written by morf-train"),
    input: Path = typer.Option(..., "--input", help="Tokenized file to segment"),
    out: Optional[Path] = typer.Option(None, help="Output file (stdout if omitted)"),
    penalty: Optional[float] = typer.Option(None, help="Bits per character for morphs missing from the lexicon"),
):
    """Segment every token into morphs (stored analysis for training words, Viterbi otherwise)."""
    settings = get_settings()
    with cli_errors():
        seg_model = load_model(model)
        segmented = segment_lines(read_token_lines(input), seg_model, penalty or settings.unseen_morph_penalty)
        emit_lines([" ".join(tokens) for tokens in segmented], out)


@router.command("parse")
def parse_command(
    input: Path = typer.Option(..., "--input", help="Tokenized file to parse"),
    rules: Optional[Path] = typer.Option(None, help="Rule file (bundled toy grammar if omitted)"),
    out: Optional[Path] = typer.Option(None, help="Output file (stdout if omitted)"),
    emit_glosses: bool = typer.Option(False, "--emit-glosses", help="Emit surface|gloss tokens"),
):
    """Split words into morphemes with the rule-based parser; unresolved words pass through."""
    settings = get_settings()
    with cli_errors():
        rule_set = load_rules(rules or settings.rules_path)
        parsed = tokenize_corpus(read_token_lines(input), rule_set, emit_glosses=emit_glosses)
        emit_lines([" ".join(tokens) for tokens in parsed], out)
