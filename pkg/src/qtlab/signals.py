"""Eventually periodic subsets of the line and half line.

A Signal denotes the exact set of time points at which a predicate holds.  On
the full line the set is purely periodic: ``x`` belongs iff ``x mod period`` is
in ``pattern``.  On the half line a finite ``prefix`` describes ``[0,
transient)`` and the pattern repeats from ``transient`` on.  All endpoints are
rationals, so every boolean combination, slice and shift stays exact.

``canonicalize`` produces the representative form: the minimal period (1 for
constants), then the minimal transient at which the tail already matches the
periodic extension.  When the prefix disagrees with that extension at a single
point there is no smallest rational transient strictly above it; the canonical
form then uses the next period multiple, which keeps the form deterministic,
idempotent and independent of the input representation.  Two Signals denote
the same set iff their canonical forms are structurally equal.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Optional

from .intervals import (
    Interval,
    IntervalSet,
    RationalLike,
    TextFormatError,
    format_interval_list,
    format_rational,
    parse_interval_list,
    parse_rational,
    rat,
)


class SignalError(ValueError):
    """Signal representation that violates its invariants."""


class DomainError(ValueError):
    """Operation applied outside a signal's time domain, or across domains."""


class TimeDomain(Enum):
    FULL_LINE = "line"
    HALF_LINE = "halfline"


class Triviality(Enum):
    """Outcome of comparing a truth signal with the four trivial predicates."""

    TRUE = "True"
    FALSE = "False"
    P = "P"
    NOT_P = "NotP"
    NONE = "None"

    def __str__(self) -> str:
        return self.value


def _right_open(lo: Fraction, hi: Fraction) -> IntervalSet:
    if lo >= hi:
        return IntervalSet.EMPTY
    return IntervalSet._wrap((Interval(lo, hi, True, False),))


def _lcm(a: Fraction, b: Fraction) -> Fraction:
    return Fraction(math.lcm(a.numerator, b.numerator), math.gcd(a.denominator, b.denominator))


def _cyclic_shift(pattern: IntervalSet, d: Fraction, p: Fraction) -> IntervalSet:
    """Shift a pattern within the cyclic window [0, p)."""
    d = d % p
    if d == 0 or pattern.is_empty:
        return pattern
    moved = pattern.shift(d)
    w = _right_open(Fraction(0), p)
    return moved.intersection(w).union(moved.intersection(w.shift(p)).shift(-p))


def _minimal_tail(p: Fraction, pattern: IntervalSet) -> tuple[Fraction, IntervalSet]:
    """Minimal period of a pattern, constants collapsing to period 1.

    Any period of a non-constant set is an integer multiple of the smallest
    one, so dividing by integers is exhaustive; an invariant pattern cannot
    hide a sub-period past m = component count + 1.
    """
    if pattern.is_empty:
        return Fraction(1), IntervalSet.EMPTY
    if pattern == _right_open(Fraction(0), p):
        return Fraction(1), _right_open(Fraction(0), Fraction(1))
    while True:
        for m in range(2, len(pattern.components) + 2):
            q = p / m
            if _cyclic_shift(pattern, q, p) == pattern:
                p, pattern = q, pattern.intersection(_right_open(Fraction(0), q))
                break
        else:
            return p, pattern


@dataclass(frozen=True)
class Signal:
    """An eventually periodic rational point set over a time domain."""

    domain: TimeDomain
    period: Fraction
    pattern: IntervalSet
    transient: Fraction = Fraction(0)
    prefix: IntervalSet = field(default_factory=lambda: IntervalSet.EMPTY)

    def __post_init__(self) -> None:
        object.__setattr__(self, "period", rat(self.period))
        object.__setattr__(self, "transient", rat(self.transient))
        if self.period <= 0:
            raise SignalError(f"period must be positive, got {self.period}")
        if self.transient < 0:
            raise SignalError(f"transient must be nonnegative, got {self.transient}")
        if self.domain is TimeDomain.FULL_LINE and (self.transient != 0 or self.prefix):
            raise SignalError("full-line signals are purely periodic: transient 0, empty prefix")
        if not self.pattern.difference(_right_open(Fraction(0), self.period)).is_empty:
            raise SignalError("pattern escapes [0, period)")
        if not self.prefix.difference(_right_open(Fraction(0), self.transient)).is_empty:
            raise SignalError("prefix escapes [0, transient)")

    # ------------------------------------------------------------ constructors

    @classmethod
    def constant(cls, domain: TimeDomain, value: bool) -> "Signal":
        pattern = _right_open(Fraction(0), Fraction(1)) if value else IntervalSet.EMPTY
        return cls(domain, Fraction(1), pattern)

    # ------------------------------------------------------------- point model

    def contains(self, x: RationalLike) -> bool:
        x = rat(x)
        if self.domain is TimeDomain.HALF_LINE:
            if x < 0:
                raise DomainError(f"{x} is outside the half line")
            if x < self.transient:
                return self.prefix.contains(x)
            return self.pattern.contains((x - self.transient) % self.period)
        return self.pattern.contains(x % self.period)

    def slice(self, a: RationalLike, b: RationalLike) -> IntervalSet:
        """The exact point set of the signal within [a, b]."""
        a, b = rat(a), rat(b)
        if a > b:
            raise ValueError(f"empty window [{a}, {b}]")
        if self.domain is TimeDomain.HALF_LINE and a < 0:
            raise DomainError("window escapes the half line")
        pieces: list[Interval] = []
        anchor = self.transient
        if self.domain is TimeDomain.HALF_LINE and a < anchor:
            pieces.extend(self.prefix.components)
        lo = max(a, anchor) if self.domain is TimeDomain.HALF_LINE else a
        if lo <= b:
            k0 = math.floor((lo - anchor) / self.period)
            k1 = math.floor((b - anchor) / self.period)
            for k in range(k0, k1 + 1):
                pieces.extend(self.pattern.shift(anchor + k * self.period).components)
        window = IntervalSet._wrap((Interval(a, b, True, True),))
        return IntervalSet(pieces).intersection(window)

    def shift(self, d: RationalLike) -> "Signal":
        """Translate the denoted set by d. Full line only: the half line has an origin."""
        if self.domain is not TimeDomain.FULL_LINE:
            raise DomainError("shift is a full-line operation")
        return Signal(
            TimeDomain.FULL_LINE,
            self.period,
            _cyclic_shift(self.pattern, rat(d), self.period),
        )

    # ---------------------------------------------------------- normalization

    def tail_extension(self) -> "Signal":
        """The unique full-line periodic set the signal eventually agrees with,
        in canonical form (minimal period, phase anchored at 0)."""
        p0, pat0 = _minimal_tail(self.period, self.pattern)
        pat_ext = _cyclic_shift(pat0, self.transient % p0, p0)
        return Signal(TimeDomain.FULL_LINE, p0, pat_ext)

    def canonicalize(self) -> "Signal":
        ext = self.tail_extension()
        if self.domain is TimeDomain.FULL_LINE:
            return ext
        p0 = ext.period
        T = self.transient
        if T == 0:
            dis = IntervalSet.EMPTY
        else:
            dis = self.slice(0, T).symmetric_difference(ext.slice(0, T))
        if dis.is_empty:
            tc = Fraction(0)
        else:
            last = dis.components[-1]
            if last.upper_closed:
                # Disagreement at the point itself: any transient strictly above
                # works and none is least, so snap up to the period grid.
                tc = (math.floor(last.upper / p0) + 1) * p0
            else:
                tc = last.upper
        prefix = self.slice(0, tc).intersection(_right_open(Fraction(0), tc)) if tc > 0 else IntervalSet.EMPTY
        pattern = ext.slice(tc, tc + p0).intersection(
            IntervalSet._wrap((Interval(tc, tc + p0, True, False),))
        ).shift(-tc)
        return Signal(TimeDomain.HALF_LINE, p0, pattern, tc, prefix)

    def _rebase(self, transient: Fraction, period: Fraction) -> "Signal":
        """Re-express with a larger transient and an integer multiple period."""
        if self.domain is TimeDomain.FULL_LINE:
            pattern = self.slice(0, period).intersection(_right_open(Fraction(0), period))
            return Signal(TimeDomain.FULL_LINE, period, pattern)
        prefix = (
            self.slice(0, transient).intersection(_right_open(Fraction(0), transient))
            if transient > 0
            else IntervalSet.EMPTY
        )
        pattern = self.slice(transient, transient + period).intersection(
            IntervalSet._wrap((Interval(transient, transient + period, True, False),))
        ).shift(-transient)
        return Signal(TimeDomain.HALF_LINE, period, pattern, transient, prefix)


def align(a: Signal, b: Signal) -> tuple[Signal, Signal]:
    """Re-express both signals with the lcm period and the max transient."""
    aligned = align_many([a, b])
    return aligned[0], aligned[1]


def align_many(signals: list[Signal]) -> list[Signal]:
    if not signals:
        raise ValueError("nothing to align")
    domain = signals[0].domain
    if any(s.domain is not domain for s in signals):
        raise DomainError("cannot align signals over different domains")
    period = signals[0].period
    for s in signals[1:]:
        period = _lcm(period, s.period)
    transient = max(s.transient for s in signals)
    return [s._rebase(transient, period) for s in signals]


def combine(op: str, a: Signal, b: Optional[Signal] = None) -> Signal:
    """Pointwise boolean combination; the result is canonical."""
    if op == "not":
        if b is not None:
            raise ValueError("not takes a single signal")
        pattern = _right_open(Fraction(0), a.period).difference(a.pattern)
        prefix = _right_open(Fraction(0), a.transient).difference(a.prefix)
        return Signal(a.domain, a.period, pattern, a.transient, prefix).canonicalize()
    if b is None:
        raise ValueError(f"{op} takes two signals")
    if op == "and":
        fn = IntervalSet.intersection
    elif op == "or":
        fn = IntervalSet.union
    else:
        raise ValueError(f"unknown boolean operation {op!r}")
    aa, bb = align(a, b)
    return Signal(
        aa.domain,
        aa.period,
        fn(aa.pattern, bb.pattern),
        aa.transient,
        fn(aa.prefix, bb.prefix),
    ).canonicalize()


def equal(a: Signal, b: Signal, eventually: bool = False) -> bool:
    """Exact equality of denoted sets; with ``eventually``, equality of tails."""
    if a.domain is not b.domain:
        raise DomainError("cannot compare signals over different domains")
    if eventually:
        return a.tail_extension() == b.tail_extension()
    return a.canonicalize() == b.canonicalize()


def classify_trivial(s: Signal, p_atom: Signal, eventually: bool = False) -> Triviality:
    """Compare s against True, False, P and not P, in that precedence order."""
    candidates = (
        (Triviality.TRUE, Signal.constant(s.domain, True)),
        (Triviality.FALSE, Signal.constant(s.domain, False)),
        (Triviality.P, p_atom),
        (Triviality.NOT_P, combine("not", p_atom)),
    )
    for tag, candidate in candidates:
        if equal(s, candidate, eventually):
            return tag
    return Triviality.NONE


# ------------------------------------------------------------------ file format
#
# Line oriented UTF-8, # starts a comment, keys in any order:
#   domain line|halfline
#   period <rational>
#   pattern <interval-list>        subset of [0, period); {} allowed
#   transient <rational>           half line only, default 0
#   prefix <interval-list>         half line only, default {}

def format_signal(s: Signal) -> str:
    lines = [
        f"domain {s.domain.value}",
        f"period {format_rational(s.period)}",
        f"pattern {format_interval_list(s.pattern)}",
    ]
    if s.domain is TimeDomain.HALF_LINE:
        lines.append(f"transient {format_rational(s.transient)}")
        lines.append(f"prefix {format_interval_list(s.prefix)}")
    return "\n".join(lines) + "\n"


def parse_signal(text: str) -> Signal:
    entries: dict[str, str] = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, _, value = line.partition(" ")
        value = value.strip()
        if key in entries:
            raise TextFormatError(f"line {lineno}: duplicate key {key!r}")
        if not value:
            raise TextFormatError(f"line {lineno}: key {key!r} has no value")
        entries[key] = value

    known = {"domain", "period", "pattern", "transient", "prefix"}
    for key in entries:
        if key not in known:
            raise TextFormatError(f"unknown key {key!r}")
    for key in ("domain", "period", "pattern"):
        if key not in entries:
            raise TextFormatError(f"missing key {key!r}")

    try:
        domain = TimeDomain(entries["domain"])
    except ValueError:
        raise TextFormatError(f"domain must be line or halfline, got {entries['domain']!r}") from None
    if domain is TimeDomain.FULL_LINE:
        for key in ("transient", "prefix"):
            if key in entries:
                raise TextFormatError(f"key {key!r} only applies to halfline signals")

    period = parse_rational(entries["period"])
    pattern = parse_interval_list(entries["pattern"])
    transient = parse_rational(entries.get("transient", "0"))
    prefix = parse_interval_list(entries.get("prefix", "{}"))
    try:
        return Signal(domain, period, pattern, transient, prefix)
    except SignalError as exc:
        raise TextFormatError(str(exc)) from exc
