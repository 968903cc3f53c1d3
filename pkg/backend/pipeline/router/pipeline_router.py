import logging
from pathlib import Path
from typing import List, Optional

import typer

from pipeline.models.experiment import Strategy
from pipeline.service.compare_service import compare_runs, parse_hypothesis_option, render_table
from pipeline.service.experiment_config_service import experiments_from_values, load_experiments
from pipeline.service.experiment_service import run_sweep
from pipeline.service.manifest_service import load_manifest, verify_manifest
from utils.cli import cli_errors
from utils.errors import UsageError

logger = logging.getLogger(__name__)

router = typer.Typer()


@router.command("run")
def run_command(
    config: Optional[Path] = typer.Option(None, "--config", help="Experiment file ([experiment] sections or YAML)"),
    strategy: Optional[Strategy] = typer.Option(None, help="Tokenization strategy when no --config is given"),
    source: Optional[Path] = typer.Option(None, help="Source-language corpus file"),
    target: Optional[Path] = typer.Option(None, help="Target-language corpus file"),
    out_dir: Optional[Path] = typer.Option(None, "--out-dir", help="Directory receiving one subdirectory per run"),
    merge_ops: Optional[List[int]] = typer.Option(None, "--merge-ops", min=1, help="BPE merge count; repeat for a sweep"),
    vocab_limit: Optional[int] = typer.Option(None, "--vocab-limit", min=1),
    seed: Optional[int] = typer.Option(None, min=0),
    dev: Optional[int] = typer.Option(None, min=1, help="Dev sentences"),
    test: Optional[int] = typer.Option(None, min=1, help="Test sentences"),
    rules: Optional[Path] = typer.Option(None, help="Rule file for the rule-based strategy"),
    lowercase: Optional[bool] = typer.Option(None, "--lowercase/--no-lowercase"),
    segment_target: Optional[bool] = typer.Option(None, "--segment-target/--no-segment-target",
                                                  help="Also learn a segmentation for the target side"),
    name: Optional[str] = typer.Option(None, help="Run name (default: strategy, plus merge count for bpe)"),
    jobs: int = typer.Option(1, min=1, help="Experiments to run concurrently"),
):
    """Run one experiment or a whole sweep: split, tokenize, segment, build vocabularies, write manifests."""
    overrides = {
        "strategy": strategy.value if strategy else None,
        "source_path": source,
        "target_path": target,
        "out_dir": out_dir,
        "merge_ops": merge_ops or None,
        "vocab_limit": vocab_limit,
        "seed": seed,
        "dev_count": dev,
        "test_count": test,
        "rules_path": rules,
        "lowercase": lowercase,
        "segment_target": segment_target,
        "name": name,
    }
    with cli_errors():
        if config is not None:
            configs = load_experiments(config, overrides=overrides)
        elif strategy is None or source is None or target is None or out_dir is None:
            raise UsageError("without --config, --strategy, --source, --target and --out-dir are required")
        else:
            configs = experiments_from_values({}, overrides=overrides)

        manifests = run_sweep(configs, jobs=jobs)
        for manifest in manifests:
            typer.echo(f"{manifest.config.name}\t{manifest.run_dir}\t{len(manifest.artifacts)} files")


@router.command("compare")
def compare_command(
    runs: List[Path] = typer.Argument(..., help="Run directories or their manifest files"),
    hyp: Optional[List[str]] = typer.Option(None, "--hyp", help="RUN:SPLIT=PATH hypothesis file for a BLEU column"),
):
    """Tabulate vocabulary size, OOV rate and tokens per line (and BLEU) across runs."""
    with cli_errors():
        hypotheses = dict(parse_hypothesis_option(value) for value in hyp or [])
        table = compare_runs([load_manifest(path) for path in runs], hypotheses)
        typer.echo(render_table(table))


@router.command("verify")
def verify_command(
    runs: List[Path] = typer.Argument(..., help="Run directories or their manifest files"),
):
    """Recompute artifact digests and check that nothing learned saw dev or test data."""
    with cli_errors():
        for path in runs:
            manifest = verify_manifest(path)
            typer.echo(f"{manifest.config.name}: ok ({len(manifest.artifacts)} files)")
