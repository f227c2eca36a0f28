"""A line-based text format (``.homc``) for two-mode optical circuits.

Grammar, one statement per line; ``#`` starts a comment and blank lines are
ignored::

    input one_port
    input two_port theta=<NUMBER>
    bs sign=(+|-)
    sbs branch=(sym|anti)
    phase mode=(1|2) theta=<NUMBER>

``NUMBER`` is a decimal literal with an optional ``pi`` suffix (``0.5pi``).
The input declaration must come first and appear exactly once; at least one
element must follow. The first error aborts parsing.

Example, a Mach-Zehnder interferometer with both stages in the + basis::

    input one_port
    bs sign=+
    bs sign=+
"""

from __future__ import annotations

import cmath
import math
import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional, Union

from .core_optics import (
    SQRT2,
    BasisSign,
    BeamSplitter,
    Branch,
    ModePair,
    PhaseShift,
    apply_element,
    superposed_bs,
)
from .errors import EvaluationError, ParseError
from .scenarios import ScenarioResult

_NUMBER_RE = re.compile(r"[+-]?(?:\d+(?:\.\d*)?|\.\d+)(?:[eE][+-]?\d+)?")


@dataclass(frozen=True)
class Angle:
    """An angle literal, kept as written so ``0.5pi`` renders back as ``0.5pi``."""

    coeff: float
    pi: bool = False

    @property
    def radians(self) -> float:
        return self.coeff * math.pi if self.pi else self.coeff

    def __str__(self) -> str:
        text = repr(float(self.coeff))
        if text.endswith(".0"):
            text = text[:-2]
        if text == "-0":
            text = "0"
        return text + ("pi" if self.pi else "")


def parse_angle(text: str) -> Angle:
    """Parse ``1.25``, ``-0.5pi``, ``2pi`` or a bare ``pi``; raise ValueError otherwise."""
    raw = text.strip()
    body, is_pi = (raw[:-2], True) if raw.endswith("pi") else (raw, False)
    if is_pi and body in ("", "+", "-"):
        body += "1"
    if not _NUMBER_RE.fullmatch(body):
        raise ValueError(f"invalid number {text!r}")
    angle = Angle(float(body), is_pi)
    if not math.isfinite(angle.radians):
        raise ValueError(f"angle {text!r} is not finite")
    return angle


@dataclass(frozen=True)
class Span:
    line: int
    column: int = 1


@dataclass(frozen=True)
class InputDecl:
    kind: str  # "one_port" or "two_port"
    theta: Optional[Angle] = None
    span: Optional[Span] = field(default=None, compare=False)


@dataclass(frozen=True)
class BsStmt:
    sign: BasisSign
    span: Optional[Span] = field(default=None, compare=False)


@dataclass(frozen=True)
class SbsStmt:
    branch: Branch
    span: Optional[Span] = field(default=None, compare=False)


@dataclass(frozen=True)
class PhaseStmt:
    mode: int
    theta: Angle
    span: Optional[Span] = field(default=None, compare=False)


Element = Union[BsStmt, SbsStmt, PhaseStmt]


@dataclass(frozen=True)
class CircuitAst:
    input: InputDecl
    elements: tuple[Element, ...]


# keyword -> ordered field names
_FIELDS = {
    "bs": ("sign",),
    "sbs": ("branch",),
    "phase": ("mode", "theta"),
}


class _Line:
    """Tokens of one source line with their 1-based columns."""

    def __init__(self, number: int, text: str):
        self.number = number
        self.text = text
        self.tokens = [(m.group(), m.start() + 1) for m in re.finditer(r"\S+", text)]

    def error(self, column: int, message: str, token: str = "") -> ParseError:
        return ParseError(self.number, column, message, token)

    def end_column(self) -> int:
        return len(self.text.rstrip()) + 1


def _fields(line: _Line, tokens, names) -> dict:
    """Collect ``key=value`` tokens, each of ``names`` exactly once."""
    found: dict = {}
    for tok, col in tokens:
        key, eq, value = tok.partition("=")
        if not eq:
            raise line.error(col, "expected key=value field", tok)
        if key not in names:
            raise line.error(col, f"unknown field {key!r}", tok)
        if key in found:
            raise line.error(col, f"duplicate field {key!r}", tok)
        if not value:
            raise line.error(col + len(key) + 1, f"missing value for {key!r}", tok)
        found[key] = (value, col + len(key) + 1)
    for name in names:
        if name not in found:
            raise line.error(line.end_column(), f"missing field {name!r}")
    return found


def _angle(line: _Line, value: str, col: int) -> Angle:
    try:
        return parse_angle(value)
    except ValueError:
        raise line.error(col, "bad number", value) from None


def _parse_element(line: _Line) -> Element:
    (keyword, kcol), rest = line.tokens[0], line.tokens[1:]
    if keyword not in _FIELDS:
        raise line.error(kcol, f"unknown keyword {keyword!r}", keyword)
    f = _fields(line, rest, _FIELDS[keyword])
    span = Span(line.number, kcol)
    if keyword == "bs":
        value, col = f["sign"]
        if value not in ("+", "-"):
            raise line.error(col, "sign must be + or -", value)
        return BsStmt(BasisSign.coerce(value), span)
    if keyword == "sbs":
        value, col = f["branch"]
        if value not in ("sym", "anti"):
            raise line.error(col, "branch must be sym or anti", value)
        return SbsStmt(Branch.coerce(value), span)
    value, col = f["mode"]
    if value not in ("1", "2"):
        raise line.error(col, "mode must be 1 or 2", value)
    theta = _angle(line, *f["theta"])
    return PhaseStmt(int(value), theta, span)


def _parse_input(line: _Line) -> InputDecl:
    (_, kcol), rest = line.tokens[0], line.tokens[1:]
    if not rest:
        raise line.error(line.end_column(), "missing input kind (one_port or two_port)")
    (kind, col), rest = rest[0], rest[1:]
    span = Span(line.number, kcol)
    if kind == "one_port":
        if rest:
            tok, tcol = rest[0]
            raise line.error(tcol, "one_port takes no fields", tok)
        return InputDecl("one_port", None, span)
    if kind == "two_port":
        f = _fields(line, rest, ("theta",))
        return InputDecl("two_port", _angle(line, *f["theta"]), span)
    raise line.error(col, "input kind must be one_port or two_port", kind)


def parse_circuit(source: str) -> CircuitAst:
    """Parse circuit text into an AST, raising :class:`ParseError` on the first problem."""
    if source.startswith("\ufeff"):
        source = source[1:]
    lines = [ln[:-1] if ln.endswith("\r") else ln for ln in source.split("\n")]
    decl: Optional[InputDecl] = None
    elements: list = []
    for number, text in enumerate(lines, start=1):
        body = text.split("#", 1)[0]
        line = _Line(number, body)
        if not line.tokens:
            continue
        keyword, col = line.tokens[0]
        if keyword == "input":
            if decl is not None:
                raise line.error(col, "duplicate input declaration", keyword)
            decl = _parse_input(line)
            continue
        if decl is None:
            raise line.error(col, "missing input declaration", keyword)
        elements.append(_parse_element(line))
    if decl is None:
        raise ParseError(1, 1, "missing input declaration")
    if not elements:
        text = lines[decl.span.line - 1].split("#", 1)[0]
        raise ParseError(decl.span.line, len(text.rstrip()) + 1, "circuit has no elements")
    return CircuitAst(decl, tuple(elements))


def load_circuit(path) -> CircuitAst:
    """Read and parse a ``.homc`` file (UTF-8, LF or CRLF)."""
    return parse_circuit(Path(path).read_text(encoding="utf-8"))


def format_circuit(ast: CircuitAst) -> str:
    """Canonical text: single spaces, fixed field order, LF endings, trailing newline."""
    if ast.input.kind == "one_port":
        out = ["input one_port"]
    else:
        out = [f"input two_port theta={ast.input.theta}"]
    for el in ast.elements:
        if isinstance(el, BsStmt):
            out.append(f"bs sign={'+' if el.sign > 0 else '-'}")
        elif isinstance(el, SbsStmt):
            out.append(f"sbs branch={'sym' if el.branch is Branch.SYMMETRIC else 'anti'}")
        else:
            out.append(f"phase mode={el.mode} theta={el.theta}")
    return "\n".join(out) + "\n"


def evaluate_circuit(ast: CircuitAst) -> ScenarioResult:
    """Fold the circuit's elements over its input amplitudes."""
    if ast.input.kind == "one_port":
        v = ModePair(SQRT2, 0.0)
    else:
        v = ModePair(1.0, cmath.exp(1j * ast.input.theta.radians))
    try:
        for el in ast.elements:
            if isinstance(el, BsStmt):
                v = apply_element(BeamSplitter(el.sign), v)
            elif isinstance(el, SbsStmt):
                v = superposed_bs(el.branch, v)
            else:
                v = apply_element(PhaseShift(el.mode, el.theta.radians), v)
    except ValueError as exc:
        raise EvaluationError(str(exc)) from exc
    return ScenarioResult.from_output("circuit", v.relabel(("out1", "out2")))
