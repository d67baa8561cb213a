""".pwl map files: one "X Y" pair per line, rationals as "a/b" or bare integers.

Lines starting with '#' and blank lines are ignored. Writing always emits
the canonical form, so write(read(file)) is a bit-exact fixed point.
"""

from __future__ import annotations

import re
from fractions import Fraction
from pathlib import Path

from .core import PLMap
from .errors import ParseError

_RATIONAL = re.compile(r"^-?\d+(/\d+)?$")


def _parse_rational(token: str, lineno: int) -> Fraction:
    if not _RATIONAL.match(token):
        raise ParseError(f"not an integer or a/b rational: {token!r}", lineno)
    try:
        return Fraction(token)
    except ZeroDivisionError:
        raise ParseError(f"zero denominator: {token!r}", lineno) from None


def parse_map_text(text: str) -> PLMap:
    points = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        tokens = line.split()
        if len(tokens) != 2:
            raise ParseError(f"expected 'X Y', got {line!r}", lineno)
        points.append((_parse_rational(tokens[0], lineno),
                       _parse_rational(tokens[1], lineno)))
    if not points:
        raise ParseError("no data lines")
    return PLMap(tuple(points))


def read_map(path) -> PLMap:
    return parse_map_text(Path(path).read_text(encoding="utf-8"))


def dump_map_text(f: PLMap) -> str:
    return "".join(f"{x} {y}\n" for x, y in f.points)


def write_map(f: PLMap, path) -> None:
    Path(path).write_text(dump_map_text(f), encoding="utf-8")
