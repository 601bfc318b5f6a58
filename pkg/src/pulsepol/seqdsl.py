"""Text format for pulse sequences (.pseq files).

Grammar (whitespace-separated tokens):

    seq   := item*
    item  := pulse | delay | group
    group := "[" item+ "]" "^" INT
    pulse := "(" angle ")" "_" phase
    angle := "pi" | "pi/2" | FLOAT "deg"
    phase := ["-"] ("X" | "Y") | FLOAT "deg"
    delay := "~" ("tau/4" | "tau/2" | "tau" | FLOAT "ns")

The format is canonical: every token must read back exactly as this
module would print it ("(180deg)_X" is rejected in favour of "(pi)_X"),
which makes parse and render exact inverses. Symbolic tau delays lower
to seconds once a pulse spacing is bound; chirps have no text form.
"""

import re
from dataclasses import dataclass

import numpy as np

from .sequence import Chirp, Delay, Pulse, PulseSequence

_AXIS_BY_DEG = {0.0: "X", 90.0: "Y", 180.0: "-X", 270.0: "-Y"}
_DEG_BY_AXIS = {v: k for k, v in _AXIS_BY_DEG.items()}
_TAU_FRACTIONS = {"tau/4": 0.25, "tau/2": 0.5, "tau": 1.0}
_TOKEN_BY_FRACTION = {v: k for k, v in _TAU_FRACTIONS.items()}

_FLOAT_RE = r"[-+]?(?:\d+\.?\d*|\.\d+)(?:[eE][-+]?\d+)?"
_PULSE_RE = re.compile(
    rf"^\((?P<angle>pi/2|pi|(?P<adeg>{_FLOAT_RE})deg)\)"
    rf"_(?P<phase>-?[XY]|(?P<pdeg>{_FLOAT_RE})deg)$"
)
_DELAY_RE = re.compile(rf"^~(?:(?P<tau>tau/4|tau/2|tau)|(?P<ns>{_FLOAT_RE})ns)$")
_CLOSE_RE = re.compile(r"^\]\^(?P<exp>\d+)$")


class SeqSyntaxError(ValueError):
    """Parse failure with 1-based line and column of the offending token."""

    def __init__(self, message, line, col):
        super().__init__(f"line {line}, col {col}: {message}")
        self.line = line
        self.col = col


@dataclass(frozen=True)
class AstPulse:
    angle_deg: float
    phase_deg: float


@dataclass(frozen=True)
class AstDelay:
    kind: str  # "tau" or "ns"
    value: float  # fraction of tau, or nanoseconds


@dataclass(frozen=True)
class AstGroup:
    items: tuple
    exponent: int


@dataclass(frozen=True)
class SeqAst:
    items: tuple = ()


def _fmt_float(x):
    x = float(x)
    return str(int(x)) if x.is_integer() else repr(x)


def _fmt_angle(deg):
    if abs(deg - 180.0) < 1e-9:
        return "pi"
    if abs(deg - 90.0) < 1e-9:
        return "pi/2"
    return _fmt_float(deg) + "deg"


def _fmt_phase(deg):
    axis = _AXIS_BY_DEG.get(deg)
    if axis is not None:
        return axis
    for ref, name in _AXIS_BY_DEG.items():
        if abs(deg - ref) < 1e-9:
            return name
    return _fmt_float(deg) + "deg"


def _render_item(item):
    if isinstance(item, AstPulse):
        return f"({_fmt_angle(item.angle_deg)})_{_fmt_phase(item.phase_deg)}"
    if isinstance(item, AstDelay):
        if item.kind == "tau":
            return "~" + _TOKEN_BY_FRACTION[item.value]
        return f"~{_fmt_float(item.value)}ns"
    if isinstance(item, AstGroup):
        inner = " ".join(_render_item(i) for i in item.items)
        return f"[ {inner} ]^{item.exponent}"
    raise TypeError(f"not a sequence AST item: {item!r}")


def render(ast):
    """Canonical text for an AST; parse(render(ast)) returns ``ast``."""
    return " ".join(_render_item(i) for i in ast.items)


def _tokens(text):
    for lineno, line in enumerate(text.splitlines(), start=1):
        for m in re.finditer(r"\S+", line):
            yield m.group(0), lineno, m.start() + 1


def parse(text):
    """Parse canonical sequence text into a :class:`SeqAst`.

    Raises:
        SeqSyntaxError: on unknown tokens, unbalanced groups, zero
            exponents, or tokens not in canonical form.
    """
    stack = [[]]
    opens = []
    for tok, line, col in _tokens(text):
        if tok == "[":
            stack.append([])
            opens.append((line, col))
            continue
        m = _CLOSE_RE.match(tok)
        if m:
            if len(stack) == 1:
                raise SeqSyntaxError("unmatched ']'", line, col)
            exponent = int(m.group("exp"))
            if exponent < 1:
                raise SeqSyntaxError("group exponent must be >= 1", line, col)
            items = stack.pop()
            opens.pop()
            if not items:
                raise SeqSyntaxError("empty group", line, col)
            node = AstGroup(tuple(items), exponent)
            if _render_item(node).split()[-1] != tok:
                raise SeqSyntaxError(
                    f"non-canonical exponent token {tok!r}", line, col)
            stack[-1].append(node)
            continue
        m = _PULSE_RE.match(tok)
        if m:
            angle = m.group("angle")
            if angle == "pi":
                adeg = 180.0
            elif angle == "pi/2":
                adeg = 90.0
            else:
                adeg = float(m.group("adeg"))
            phase = m.group("phase")
            pdeg = _DEG_BY_AXIS.get(phase)
            if pdeg is None:
                pdeg = float(m.group("pdeg"))
            node = AstPulse(adeg, pdeg)
            if _render_item(node) != tok:
                raise SeqSyntaxError(
                    f"non-canonical pulse token {tok!r} "
                    f"(expected {_render_item(node)!r})", line, col)
            stack[-1].append(node)
            continue
        m = _DELAY_RE.match(tok)
        if m:
            if m.group("tau"):
                node = AstDelay("tau", _TAU_FRACTIONS[m.group("tau")])
            else:
                node = AstDelay("ns", float(m.group("ns")))
            if _render_item(node) != tok:
                raise SeqSyntaxError(
                    f"non-canonical delay token {tok!r} "
                    f"(expected {_render_item(node)!r})", line, col)
            stack[-1].append(node)
            continue
        if tok.startswith("(") and "_" in tok:
            raise SeqSyntaxError(f"unknown phase token in {tok!r}", line, col)
        raise SeqSyntaxError(f"unrecognised token {tok!r}", line, col)
    if opens:
        line, col = opens[-1]
        raise SeqSyntaxError("unclosed '['", line, col)
    return SeqAst(tuple(stack[0]))


def _flatten(items, out):
    for item in items:
        if isinstance(item, AstGroup):
            for _ in range(item.exponent):
                _flatten(item.items, out)
        else:
            out.append(item)


def lower(ast, tau=None, rabi=None, name="dsl"):
    """Instantiate an AST as a :class:`PulseSequence`.

    ``tau`` (seconds) binds symbolic delays; ``rabi`` (rad/s) sets the
    drive amplitude of every pulse. Either may be omitted when unused.
    """
    flat = []
    _flatten(ast.items, flat)
    elements = []
    for item in flat:
        if isinstance(item, AstPulse):
            if rabi is None:
                raise ValueError("pulses present: a Rabi frequency binding "
                                 "is required")
            elements.append(Pulse(np.deg2rad(item.angle_deg),
                                  np.deg2rad(item.phase_deg), rabi))
        else:
            if item.kind == "tau":
                if tau is None:
                    raise ValueError("symbolic delays present: a tau binding "
                                     "is required")
                elements.append(Delay(item.value * tau))
            else:
                elements.append(Delay(item.value * 1e-9))
    return PulseSequence(tuple(elements), name=name, tau=tau or 0.0,
                         rabi=rabi or 0.0)


def _delay_item(duration, seq):
    if seq.tau and seq.timing == "ideal":
        frac = duration / seq.tau
        for ref in _TOKEN_BY_FRACTION:
            if abs(frac - ref) < 1e-12:
                return AstDelay("tau", ref)
    return AstDelay("ns", round(duration / 1e-9, 6))


def _pulse_item(pulse):
    adeg = round(float(np.rad2deg(pulse.angle)), 9)
    pdeg = round(float(np.rad2deg(pulse.phase)) % 360.0, 9)
    if pdeg == 360.0:
        pdeg = 0.0
    return AstPulse(adeg, pdeg)


def sequence_to_ast(seq):
    """AST for a sequence, grouping identical repeated blocks.

    Chirp elements have no text form and raise ``ValueError``.
    """
    if any(isinstance(e, Chirp) for e in seq.elements):
        raise ValueError("chirp elements have no DSL representation")

    def items_for(elements):
        return tuple(
            _pulse_item(e) if isinstance(e, Pulse) else _delay_item(e.duration, seq)
            for e in elements
        )

    n, c, p = len(seq.elements), seq.cycle_len, seq.prefix_len
    if c and seq.reps >= 1 and p + c * seq.reps <= n:
        block = seq.elements[p:p + c]
        uniform = all(
            seq.elements[p + k * c:p + (k + 1) * c] == block
            for k in range(seq.reps)
        )
        if uniform:
            items = items_for(seq.elements[:p])
            items += (AstGroup(items_for(block), seq.reps),)
            items += items_for(seq.elements[p + c * seq.reps:])
            return SeqAst(items)
    return SeqAst(items_for(seq.elements))


def sequence_to_text(seq):
    """Canonical text rendering of a sequence."""
    return render(sequence_to_ast(seq))
