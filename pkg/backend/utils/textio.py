from pathlib import Path
from typing import Iterable, Sequence

from utils.errors import CorpusDecodeError, InputError


def read_lines(path: Path) -> list[str]:
    """Read a UTF-8 file one line per entry; CR before LF is dropped, decode errors carry the line number."""
    path = Path(path)
    if not path.is_file():
        raise InputError(f"File not found: {path}")

    raw = path.read_bytes()
    chunks = raw.split(b"\n")
    if chunks and chunks[-1] == b"":
        chunks.pop()

    lines = []
    for line_no, chunk in enumerate(chunks, start=1):
        try:
            text = chunk.decode("utf-8")
        except UnicodeDecodeError as e:
            raise CorpusDecodeError(path, line_no, e.reason) from e
        lines.append(text[:-1] if text.endswith("\r") else text)
    return lines


def write_lines(path: Path, lines: Iterable[str]) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="\n") as f:
        for line in lines:
            f.write(line)
            f.write("\n")


def read_token_lines(path: Path) -> list[list[str]]:
    return [line.split() for line in read_lines(path)]


def write_token_lines(path: Path, lines: Iterable[Sequence[str]]) -> None:
    write_lines(path, (" ".join(tokens) for tokens in lines))
