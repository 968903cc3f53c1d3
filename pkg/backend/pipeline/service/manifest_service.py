"""Run manifests: `key: value` lines in a fixed order.

The first two lines name the format version and the digest algorithm; every
file of the run directory other than the manifest itself is listed as
`artifact.<file>: <hex digest>`, sorted by file name.
"""
import logging
from pathlib import Path
from typing import Optional

from pydantic import ValidationError

from corpus.service.corpus_service import load_parallel
from corpus.service.vocab_service import build_vocab, load_vocab
from pipeline.models.experiment import SIDES, SPLITS, RunManifest
from pipeline.service.strategy_service import artifact_name, load_segmenter
from services.file_hash_service import compute_file_hash
from tokenization.models.word_tok import TokMode
from tokenization.service.word_tok_service import tokenize_lines
from utils.config import Settings, get_settings
from utils.errors import InvariantError, ParseError
from utils.textio import read_lines, read_token_lines, write_lines

logger = logging.getLogger(__name__)

MANIFEST_NAME = "manifest.txt"
MANIFEST_VERSION = "1"

SIDE_MODES = {"src": TokMode.APOSTROPHE_PRESERVING, "tgt": TokMode.ENGLISH}


def digest_artifacts(run_dir: Path, algorithm: str) -> dict[str, str]:
    return {
        path.name: compute_file_hash(path, algorithm)
        for path in sorted(Path(run_dir).iterdir())
        if path.is_file() and path.name != MANIFEST_NAME
    }


def manifest_lines(manifest: RunManifest) -> list[str]:
    lines = [f"manifest_version: {MANIFEST_VERSION}", f"digest_algorithm: {manifest.digest_algorithm}"]
    for key, value in manifest.config.model_dump(mode="json", exclude_none=True).items():
        lines.append(f"config.{key}: {str(value).lower() if isinstance(value, bool) else value}")
    for side in SIDES:
        if side in manifest.learn_inputs:
            lines.append(f"learn_input.{side}: {manifest.learn_inputs[side]}")
    for side in SIDES:
        lines.append(f"vocab_size.{side}: {manifest.vocab_sizes[side]}")
    for split_name in SPLITS:
        for side in SIDES:
            stats = manifest.stats[f"{split_name}.{side}"]
            prefix = f"stats.{split_name}.{side}"
            lines += [f"{prefix}.lines: {stats.lines}",
                      f"{prefix}.tokens: {stats.tokens}",
                      f"{prefix}.types: {stats.types}",
                      f"{prefix}.oov_rate: {stats.oov_rate:.6f}"]
    lines += [f"artifact.{name}: {digest}" for name, digest in sorted(manifest.artifacts.items())]
    return lines


def save_manifest(manifest: RunManifest, path: Path) -> None:
    write_lines(path, manifest_lines(manifest))


def _manifest_path(path: Path) -> Path:
    path = Path(path)
    return path / MANIFEST_NAME if path.is_dir() else path


def load_manifest(path: Path) -> RunManifest:
    """Read a manifest file, or the manifest inside a run directory."""
    path = _manifest_path(path)
    values: dict[str, str] = {}
    for line_no, line in enumerate(read_lines(path), start=1):
        key, sep, value = line.partition(": ")
        if not sep or not key:
            raise ParseError(path, line_no, "expected 'key: value'")
        if key in values:
            raise ParseError(path, line_no, f"duplicate key '{key}'")
        values[key] = value

    if values.pop("manifest_version", None) != MANIFEST_VERSION:
        raise ParseError(path, 1, f"expected 'manifest_version: {MANIFEST_VERSION}'")

    config: dict[str, str] = {}
    learn_inputs: dict[str, str] = {}
    vocab_sizes: dict[str, str] = {}
    stats: dict[str, dict[str, str]] = {}
    artifacts: dict[str, str] = {}
    for key, value in values.items():
        section, _, rest = key.partition(".")
        if section == "config":
            config[rest] = value
        elif section == "learn_input":
            learn_inputs[rest] = value
        elif section == "vocab_size":
            vocab_sizes[rest] = value
        elif section == "stats":
            split_side, _, field = rest.rpartition(".")
            stats.setdefault(split_side, {})[field] = value
        elif section == "artifact":
            artifacts[rest] = value
        elif key != "digest_algorithm":
            raise ParseError(path, 1, f"unknown key '{key}'")

    try:
        return RunManifest(
            config=config,
            digest_algorithm=values.get("digest_algorithm", ""),
            learn_inputs=learn_inputs,
            vocab_sizes=vocab_sizes,
            stats=stats,
            artifacts=artifacts,
            run_dir=path.parent,
        )
    except ValidationError as e:
        error = e.errors()[0]
        raise ParseError(path, 1, f"invalid {'.'.join(str(p) for p in error['loc'])}: {error['msg']}")


def check_digests(manifest: RunManifest, run_dir: Path) -> list[str]:
    problems = []
    current = digest_artifacts(run_dir, manifest.digest_algorithm)
    for name, digest in manifest.artifacts.items():
        if name not in current:
            problems.append(f"{name} is missing")
        elif current[name] != digest:
            problems.append(f"{name} does not match its recorded digest")
    problems += [f"{name} is not listed in the manifest" for name in current if name not in manifest.artifacts]
    return problems


def check_leakage(manifest: RunManifest, run_dir: Path, settings: Settings) -> list[str]:
    """Rebuild every learn input and vocabulary from the train ids alone and compare with the run's files."""
    config = manifest.config
    problems = []

    ids = {s: [int(i) for i in read_lines(run_dir / f"{s}.ids")] for s in SPLITS}
    for i, first in enumerate(SPLITS):
        for second in SPLITS[i + 1:]:
            shared = set(ids[first]) & set(ids[second])
            if shared:
                problems.append(f"{len(shared)} sentences are in both {first} and {second}")
    for split_name in SPLITS:
        if len(ids[split_name]) != manifest.split_size(split_name):
            problems.append(f"{split_name}.ids has {len(ids[split_name])} lines, the manifest says {manifest.split_size(split_name)}")

    corpus = load_parallel(config.source_path, config.target_path, name=config.name)
    if sorted(i for s in SPLITS for i in ids[s]) != list(range(len(corpus))):
        problems.append("train, dev and test do not partition the corpus")
        return problems

    for side in SIDES:
        raw = [corpus.pairs[i].source if side == "src" else corpus.pairs[i].target for i in ids["train"]]
        expected = tokenize_lines(raw, SIDE_MODES[side], config.lowercase)
        learn_input = manifest.learn_inputs.get(side, f"train.tok.{side}")
        if read_token_lines(run_dir / learn_input) != expected:
            problems.append(f"{learn_input} is not the tokenized train split")
            continue

        artifact = artifact_name(config, side)
        segmenter = load_segmenter(config.strategy, run_dir / artifact if artifact else None, settings)
        rebuilt = build_vocab(segmenter(expected), config.vocab_limit, settings.unk_token)
        saved = load_vocab(run_dir / f"vocab.{side}", limit=config.vocab_limit, unk_token=settings.unk_token)
        if rebuilt.entries != saved.entries:
            problems.append(f"vocab.{side} was not built from the train split alone")
    return problems


def verify_manifest(path: Path, settings: Optional[Settings] = None) -> RunManifest:
    """Recompute every digest and rerun the leakage check; raise InvariantError listing what failed."""
    settings = settings or get_settings()
    manifest = load_manifest(path)
    run_dir = manifest.run_dir

    problems = check_digests(manifest, run_dir)
    if not problems:
        problems = check_leakage(manifest, run_dir, settings)
    if problems:
        raise InvariantError(f"{run_dir}: " + "; ".join(problems))

    logger.info(f"Verified {len(manifest.artifacts)} artifacts in {run_dir}")
    return manifest
