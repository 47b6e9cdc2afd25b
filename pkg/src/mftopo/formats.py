"""File loading and line-record rendering.

Input files are recognised by their header keyword (``poset``, ``hybrid``,
``tree``, ``cover``).  Output records are ``key=value`` pairs in a fixed
field order, one record per line.
"""

from __future__ import annotations

import enum
from fractions import Fraction
from pathlib import Path

from .errors import InputError, ParseError
from .hybrid import parse_hybrid
from .interval import parse_union
from .order import parse_poset
from .trees import parse_tree

INTERVAL = "interval"
TREE_FAMILIES = {"full-binary": "family full-binary", "comb": "family comb spine=0"}


def read_text(path: str) -> str:
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from None


def header(text: str) -> str:
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if line:
            return line.split()[0]
    raise ParseError("empty input", 1)


def parse_cover(text: str) -> tuple[str, list]:
    """``cover <name>`` then one ``open <union>`` line per member, where a
    union is ``+``-joined intervals such as ``[0,1/2)+(1/3,1]``."""
    name, sets = None, []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        kw, _, rest = line.partition(" ")
        if kw == "cover":
            if name is not None or not rest.strip():
                raise ParseError("expected a single 'cover <name>' header", lineno)
            name = rest.strip()
        elif kw == "open":
            try:
                sets.append(parse_union(rest.replace(" ", "")))
            except ParseError as exc:
                raise ParseError(exc.args[0].split(": ", 1)[-1], lineno) from None
        else:
            raise ParseError(f"unknown keyword {kw!r}", lineno)
    if name is None:
        raise ParseError("missing 'cover <name>' header", 1)
    return name, sets


PARSERS = {"poset": parse_poset, "hybrid": parse_hybrid, "tree": parse_tree,
           "cover": parse_cover}


def load(path: str):
    """Parse a file by its header; returns ``(kind, object)``."""
    text = read_text(path)
    kind = header(text)
    if kind not in PARSERS:
        raise ParseError(f"unknown file kind {kind!r}", 1)
    return kind, PARSERS[kind](text)


def load_tree(source: str):
    """A tree file path or a built-in family name."""
    if source in TREE_FAMILIES:
        return parse_tree(f"tree {source}\n{TREE_FAMILIES[source]}\n")
    kind, obj = load(source)
    if kind != "tree":
        raise InputError(f"{source} is a {kind} file, not a tree")
    return obj


# ---------------------------------------------------------------- rendering

def render_value(v) -> str:
    if v is None:
        return "-"
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, Fraction):
        return str(v)
    if isinstance(v, (frozenset, set)):
        return ",".join(sorted(render_value(x) for x in v)) or "{}"
    if isinstance(v, tuple):
        if all(isinstance(x, int) or x == "*" for x in v):
            return ".".join(map(str, v)) if v else "ε"
        return "(" + ",".join(render_value(x) for x in v) + ")"
    if isinstance(v, list):
        return "[" + ",".join(render_value(x) for x in v) + "]"
    if isinstance(v, enum.Enum):
        return str(v.value)
    return str(v)


def record(fields: dict) -> str:
    """One line; values never contain newlines, ``None`` fields are dropped."""
    return " ".join(f"{k}={render_value(v)}" for k, v in fields.items() if v is not None)


def human(fields: dict) -> str:
    width = max((len(k) for k in fields), default=0)
    return "\n".join(f"{k.ljust(width)}  {render_value(v)}"
                     for k, v in fields.items() if v is not None) + "\n"
