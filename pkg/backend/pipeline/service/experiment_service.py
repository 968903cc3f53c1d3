import logging
import shutil
import tempfile
from concurrent.futures import ThreadPoolExecutor
from contextlib import contextmanager
from pathlib import Path
from typing import Iterator, Optional, Sequence

from corpus.models.corpus import SplitSpec
from corpus.service.corpus_service import corpus_stats, load_parallel, split
from corpus.service.vocab_service import apply_vocab, build_vocab, oov_rate, save_vocab
from pipeline.models.experiment import SIDES, SPLITS, ExperimentConfig, RunManifest, SplitStats
from pipeline.service.manifest_service import MANIFEST_NAME, SIDE_MODES, digest_artifacts, save_manifest
from pipeline.service.strategy_service import learn_artifact, load_segmenter
from tokenization.service.word_tok_service import tokenize_lines
from utils.config import Settings, get_settings
from utils.errors import PipelineStageError, UsageError
from utils.textio import write_lines, write_token_lines

logger = logging.getLogger(__name__)


@contextmanager
def stage(name: str, experiment: str) -> Iterator[None]:
    logger.info(f"[{experiment}] {name}")
    try:
        yield
    except PipelineStageError:
        raise
    except Exception as e:
        raise PipelineStageError(name, e) from e


def _run_stages(config: ExperimentConfig, settings: Settings, work_dir: Path) -> RunManifest:
    with stage("load", config.name):
        corpus = load_parallel(config.source_path, config.target_path, name=config.name)

    with stage("split", config.name):
        spec = SplitSpec(dev_count=config.dev_count, test_count=config.test_count, seed=config.seed)
        parts = dict(zip(SPLITS, split(corpus, spec)))

    tokenized: dict[tuple[str, str], list[list[str]]] = {}
    with stage("tokenize", config.name):
        for split_name, part in parts.items():
            write_lines(work_dir / f"{split_name}.ids", [str(i) for i in part.indices])
            tokenized[split_name, "src"] = tokenize_lines(part.sources, SIDE_MODES["src"], config.lowercase)
            tokenized[split_name, "tgt"] = tokenize_lines(part.targets, SIDE_MODES["tgt"], config.lowercase)
            for side in SIDES:
                write_token_lines(work_dir / f"{split_name}.tok.{side}", tokenized[split_name, side])

    with stage("learn", config.name):
        artifacts = {side: learn_artifact(config, side, tokenized["train", side], work_dir, settings) for side in SIDES}

    segmented: dict[tuple[str, str], list[list[str]]] = {}
    with stage("segment", config.name):
        for side in SIDES:
            artifact = work_dir / artifacts[side] if artifacts[side] else None
            segmenter = load_segmenter(config.strategy, artifact, settings)
            for split_name in SPLITS:
                segmented[split_name, side] = segmenter(tokenized[split_name, side])

    with stage("vocab", config.name):
        vocabs = {side: build_vocab(segmented["train", side], config.vocab_limit, settings.unk_token) for side in SIDES}
        for side, vocab in vocabs.items():
            save_vocab(vocab, work_dir / f"vocab.{side}")

    stats: dict[str, SplitStats] = {}
    with stage("write", config.name):
        for (split_name, side), lines in segmented.items():
            vocab = vocabs[side]
            write_token_lines(work_dir / f"{split_name}.{side}", (apply_vocab(tokens, vocab) for tokens in lines))
            counted = corpus_stats(lines)
            stats[f"{split_name}.{side}"] = SplitStats(lines=counted.lines, tokens=counted.tokens,
                                                       types=counted.types, oov_rate=oov_rate(lines, vocab))

    with stage("manifest", config.name):
        manifest = RunManifest(
            config=config,
            digest_algorithm=settings.digest_algorithm,
            learn_inputs={side: f"train.tok.{side}" for side in SIDES},
            vocab_sizes={side: len(vocab) for side, vocab in vocabs.items()},
            stats=stats,
            artifacts=digest_artifacts(work_dir, settings.digest_algorithm),
        )
        save_manifest(manifest, work_dir / MANIFEST_NAME)
    return manifest


def run_experiment(config: ExperimentConfig, settings: Optional[Settings] = None) -> RunManifest:
    """Split, tokenize, segment and cap the vocabulary; write everything to `config.run_dir`.

    Work happens in a private staging directory next to the run directory, which
    replaces any earlier run only once every stage has succeeded. On failure the
    staging directory is removed and the error names the failing stage.
    """
    settings = settings or get_settings()
    with stage("prepare", config.name):
        config.out_dir.mkdir(parents=True, exist_ok=True)
        work_dir = Path(tempfile.mkdtemp(prefix=f".{config.name}.", dir=config.out_dir))

    try:
        manifest = _run_stages(config, settings, work_dir)
        with stage("publish", config.name):
            if config.run_dir.exists():
                shutil.rmtree(config.run_dir)
            work_dir.replace(config.run_dir)
    except BaseException:
        shutil.rmtree(work_dir, ignore_errors=True)
        raise

    train, dev, test = (manifest.split_size(s) for s in SPLITS)
    logger.info(f"[{config.name}] done: train/dev/test = {train}/{dev}/{test}, "
                f"vocab src/tgt = {manifest.vocab_sizes['src']}/{manifest.vocab_sizes['tgt']}")
    return manifest.model_copy(update={"run_dir": config.run_dir})


def run_sweep(configs: Sequence[ExperimentConfig], jobs: int = 1, settings: Optional[Settings] = None) -> list[RunManifest]:
    """Run independent experiments, up to `jobs` at a time; manifests come back in config order."""
    if jobs < 1:
        raise UsageError(f"jobs must be at least 1, got {jobs}")
    run_dirs = [c.run_dir.resolve() for c in configs]
    if len(set(run_dirs)) != len(run_dirs):
        raise UsageError("experiments in a sweep must write to distinct run directories")

    settings = settings or get_settings()
    if jobs == 1 or len(configs) < 2:
        return [run_experiment(config, settings) for config in configs]
    with ThreadPoolExecutor(max_workers=jobs) as executor:
        return list(executor.map(lambda config: run_experiment(config, settings), configs))
