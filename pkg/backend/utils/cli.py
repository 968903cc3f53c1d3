import logging
import sys
from contextlib import contextmanager
from pathlib import Path
from typing import Iterator, Optional

import typer
from pydantic import ValidationError

from utils.errors import ToolkitError, UsageError
from utils.textio import read_lines, write_lines

logger = logging.getLogger(__name__)


@contextmanager
def cli_errors() -> Iterator[None]:
    """Turn toolkit errors raised by a command into a logged message and the matching exit code."""
    try:
        yield
    except ToolkitError as e:
        logger.error(e.detail)
        raise typer.Exit(code=e.exit_code)
    except ValidationError as e:
        error = e.errors()[0]
        logger.error(f"Invalid value for {'.'.join(str(p) for p in error['loc'])}: {error['msg']}")
        raise typer.Exit(code=UsageError.exit_code)


def read_input_lines(path: Optional[Path]) -> list[str]:
    if path is None:
        return [line.rstrip("\r\n") for line in sys.stdin]
    return read_lines(path)


def emit_lines(lines: list[str], out: Optional[Path]) -> None:
    if out is None:
        for line in lines:
            typer.echo(line)
        return
    write_lines(out, lines)
