import logging
import shutil
from functools import partial
from pathlib import Path
from typing import Callable, Optional, Sequence

from pipeline.models.experiment import ExperimentConfig, Strategy
from tokenization.models.segmodel import TrainConfig
from tokenization.service.bpe_service import learn_merges, load_merges, save_merges, segment_corpus, word_freqs_from_lines
from tokenization.service.mdl_service import MdlTrainer, load_model, save_model, segment_lines
from tokenization.service.rule_morph_service import load_rules, tokenize_corpus
from utils.config import Settings

logger = logging.getLogger(__name__)

Segmenter = Callable[[Sequence[Sequence[str]]], list[list[str]]]

GRAMMAR_NAME = "grammar.rules"


def segments_side(config: ExperimentConfig, side: str) -> bool:
    if side == "src":
        return config.strategy != Strategy.UNPARSED
    return config.segment_target


def artifact_name(config: ExperimentConfig, side: str) -> Optional[str]:
    if not segments_side(config, side):
        return None
    if config.strategy == Strategy.BPE:
        return f"merges.{side}"
    if config.strategy == Strategy.MDL:
        return f"segmodel.{side}"
    return GRAMMAR_NAME


def learn_artifact(config: ExperimentConfig, side: str, train_lines: Sequence[Sequence[str]],
                   run_dir: Path, settings: Settings) -> Optional[str]:
    """Write the segmentation artifact for one side, learned from the train split only."""
    name = artifact_name(config, side)
    if name is None:
        return None
    path = run_dir / name

    if config.strategy == Strategy.BPE:
        table = learn_merges(word_freqs_from_lines(train_lines), config.merge_ops,
                             min_frequency=settings.bpe_min_frequency,
                             show_progress=settings.progress)
        save_merges(table, path)
        logger.info(f"[{config.name}] learned {len(table.merges)} merges for {side}")
    elif config.strategy == Strategy.MDL:
        train_config = TrainConfig(convergence_threshold=settings.mdl_threshold,
                                   max_epochs=settings.mdl_max_epochs,
                                   seed=config.seed,
                                   unseen_morph_penalty=settings.unseen_morph_penalty)
        model = MdlTrainer(train_config, show_progress=settings.progress).train(word_freqs_from_lines(train_lines))
        save_model(model, path)
        logger.info(f"[{config.name}] trained a {len(model.lexicon)}-morph segmentation model for {side}")
    else:
        # rule-based runs carry a copy of their grammar
        rules_path = config.rules_path or settings.rules_path
        load_rules(rules_path)
        shutil.copyfile(rules_path, path)
    return name


def load_segmenter(strategy: Strategy, artifact: Optional[Path], settings: Settings) -> Segmenter:
    if artifact is None:
        return lambda lines: [list(tokens) for tokens in lines]
    if strategy == Strategy.BPE:
        return partial(segment_corpus, table=load_merges(artifact))
    if strategy == Strategy.MDL:
        return partial(segment_lines, model=load_model(artifact), unseen_morph_penalty=settings.unseen_morph_penalty)
    return partial(tokenize_corpus, rules=load_rules(artifact))
