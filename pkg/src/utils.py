# src/utils.py
from pathlib import Path
from typing import List

from src.errors import TraceError


def content_lines(text: str) -> List[str]:
    """
    Non-blank lines with `#` comments removed.

    Examples:
        >>> content_lines("3\\n# note\\n\\n9  # second")
        ['3', '9']
    """
    out = []
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if line:
            out.append(line)
    return out


def split_literals(line: str, width: int, where: str = "line") -> List[str]:
    """
    Split a `;`-separated list of element literals.

    Raises:
        TraceError: If the number of literals is not `width`
    """
    parts = [p.strip() for p in line.split(";")]
    if len(parts) != width or any(not p for p in parts):
        raise TraceError(f"{where}: expected {width} literal(s), got '{line}'")
    return parts


def plural(n: int, word: str) -> str:
    """
    Examples:
        >>> plural(1, "input")
        '1 input'
        >>> plural(2, "output")
        '2 outputs'
    """
    return f"{n} {word}" if n == 1 else f"{n} {word}s"


def read_text(path: str | Path) -> str:
    return Path(path).read_text(encoding="utf-8")


def write_text(path: str | Path, text: str) -> None:
    Path(path).write_text(text, encoding="utf-8")
