from typing import Optional

import typer

from corpus.router import corpus_router
from evaluation.router import bleu_router
from pipeline.router import pipeline_router
from tokenization.router import bpe_router, morph_router, tokenize_router
from utils.config import get_settings
from utils.logging_config import setup_logging

app = typer.Typer(
    help="Preprocessing and evaluation toolkit for machine translation of polysynthetic languages.",
    no_args_is_help=True,
    add_completion=False,
)


@app.callback()
def main(
    log_level: Optional[str] = typer.Option(None, "--log-level", help="Override POLYTOK_LOG_LEVEL (DEBUG, INFO, WARNING, ...)"),
):
    settings = get_settings()
    if log_level:
        settings = settings.model_copy(update={"log_level": log_level})
    setup_logging(settings)


# Include CLI routers
for router in (
    corpus_router.router,
    tokenize_router.router,
    bpe_router.router,
    morph_router.router,
    bleu_router.router,
    pipeline_router.router,
):
    app.registered_commands.extend(router.registered_commands)


if __name__ == "__main__":
    app()
