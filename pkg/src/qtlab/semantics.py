"""The evaluation engine: exact truth signals for every operator.

Each temporal operator computes its output over one fundamental window: one
aligned period on the full line, transient plus aligned periods on the half
line.  The window is cut at critical points (operand component endpoints,
shifted by one time unit for the metric operators), the predicate is decided
exactly at every critical point and at one rational midpoint per gap, and the
truth set is assembled from those samples.  Output truth values only change at
critical points, which the differential oracle checks rather than this module
assuming it silently.

Pointwise decisions never approximate: until and since reduce to a first
failure point of the left operand read off the representation, the metric
operators to slices of the operand over the open unit window.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Mapping, Optional, Sequence

from .formulas import (
    And,
    Atom,
    Count,
    DiamondFuture,
    DiamondPast,
    FalseConst,
    Formula,
    Implies,
    Not,
    Or,
    Pnueli,
    Since,
    TrueConst,
    Until,
)
from .intervals import Interval, IntervalSet
from .signals import DomainError, Signal, TimeDomain, align, align_many, combine


class EvalError(ValueError):
    pass


class UnboundAtomError(EvalError):
    def __init__(self, name: str):
        super().__init__(f"atom {name!r} is not bound in the environment")
        self.name = name


@dataclass(frozen=True, eq=False)
class Env:
    """Binding of atom names to signals over one shared time domain."""

    domain: TimeDomain
    bindings: Mapping[str, Signal]

    def __post_init__(self) -> None:
        object.__setattr__(self, "bindings", dict(self.bindings))
        for name, sig in self.bindings.items():
            if sig.domain is not self.domain:
                raise DomainError(f"binding {name!r} lives on {sig.domain.value}, "
                                  f"environment on {self.domain.value}")

    def signal(self, name: str) -> Signal:
        try:
            return self.bindings[name]
        except KeyError:
            raise UnboundAtomError(name) from None


def _open_set(a: Fraction, b: Fraction) -> IntervalSet:
    if a >= b:
        return IntervalSet.EMPTY
    return IntervalSet._wrap((Interval(a, b, False, False),))


def _half_open(a: Fraction, b: Fraction) -> IntervalSet:
    """[a, b)"""
    if a >= b:
        return IntervalSet.EMPTY
    return IntervalSet._wrap((Interval(a, b, True, False),))


def _left_open(a: Fraction, b: Fraction) -> IntervalSet:
    """(a, b]"""
    if a >= b:
        return IntervalSet.EMPTY
    return IntervalSet._wrap((Interval(a, b, False, True),))


def _endpoints(sets: Iterable[IntervalSet]) -> set[Fraction]:
    return {e for s in sets for c in s for e in (c.lower, c.upper) if e is not None}


def _inf_strictly_after(s: Signal, t: Fraction) -> Optional[Fraction]:
    """inf of the signal's points strictly above t; None when there are none.

    A window one period past max(t, transient) decides emptiness: an empty
    full tail period means an empty tail.
    """
    horizon = max(t, s.transient) + s.period
    for comp in s.slice(t, horizon):
        if comp.is_point and comp.lower == t:
            continue
        return comp.lower
    return None


def _sup_strictly_before(s: Signal, t: Fraction) -> Optional[Fraction]:
    """sup of the signal's points strictly below t, scanning a bounded window.

    On the half line the window is the whole past [0, t); on the full line one
    period suffices by periodicity.  None means no point below t at all.
    """
    lo = Fraction(0) if s.domain is TimeDomain.HALF_LINE else t - s.period
    if lo >= t:
        return None
    for comp in reversed(s.slice(lo, t).components):
        if comp.is_point and comp.lower == t:
            continue
        return comp.upper
    return None


def _sweep(
    domain: TimeDomain,
    period: Fraction,
    t_bound: Fraction,
    events: Iterable[Fraction],
    decide: Callable[[Fraction], bool],
) -> Signal:
    """Assemble a signal by deciding at critical points and gap midpoints."""
    if domain is TimeDomain.FULL_LINE:
        crit = sorted({e % period for e in events} | {Fraction(0), period})
    else:
        hi = t_bound + period
        crit = sorted({e for e in events if 0 <= e <= hi} | {Fraction(0), hi})
    pieces: list[Interval] = []
    for i, c in enumerate(crit):
        if decide(c):
            pieces.append(Interval.point(c))
        if i + 1 < len(crit):
            nxt = crit[i + 1]
            if decide((c + nxt) / 2):
                pieces.append(Interval(c, nxt, False, False))
    truth = IntervalSet(pieces)
    if domain is TimeDomain.FULL_LINE:
        pattern = truth.intersection(_half_open(Fraction(0), period))
        return Signal(domain, period, pattern).canonicalize()
    hi = t_bound + period
    prefix = truth.intersection(_half_open(Fraction(0), t_bound))
    pattern = truth.intersection(_half_open(t_bound, hi)).shift(-t_bound)
    return Signal(domain, period, pattern, t_bound, prefix).canonicalize()


# -------------------------------------------------------------- metric family

def diamond_unit_future(x: Signal) -> Signal:
    """Truth signal of: the operand holds somewhere in (t, t+1)."""

    def decide(t: Fraction) -> bool:
        return not x.slice(t, t + 1).intersection(_open_set(t, t + 1)).is_empty

    return _sweep(x.domain, x.period, x.transient, _future_events(x), decide)


def count_unit(x: Signal, n: int) -> Signal:
    """Truth signal of: at least n witness points of the operand in (t, t+1)."""
    if n < 1:
        raise EvalError("counting index must be at least 1")

    def decide(t: Fraction) -> bool:
        return x.slice(t, t + 1).count_at_least(Interval(t, t + 1, False, False), n)

    return _sweep(x.domain, x.period, x.transient, _future_events(x), decide)


def _future_events(*signals: Signal) -> set[Fraction]:
    s0 = signals[0]
    if s0.domain is TimeDomain.FULL_LINE:
        base = _endpoints([s.slice(0, s0.period) for s in signals])
        return {e % s0.period for e in base} | {(e - 1) % s0.period for e in base}
    hi = s0.transient + s0.period
    base = _endpoints([s.slice(0, hi + 1) for s in signals])
    return base | {e - 1 for e in base}


def diamond_unit_past(x: Signal) -> Signal:
    """Truth signal of: the operand holds somewhere in (t-1, t), clipped to the domain."""
    if x.domain is TimeDomain.FULL_LINE:
        base = _endpoints([x.slice(0, x.period)])
        events = {e % x.period for e in base} | {(e + 1) % x.period for e in base}
        t_bound = Fraction(0)
    else:
        t_bound = x.transient + 1
        base = _endpoints([x.slice(0, t_bound + x.period)])
        events = base | {e + 1 for e in base}

    def decide(t: Fraction) -> bool:
        if x.domain is TimeDomain.HALF_LINE and t <= 0:
            return False
        lo = max(Fraction(0), t - 1) if x.domain is TimeDomain.HALF_LINE else t - 1
        return not x.slice(lo, t).intersection(_open_set(t - 1, t)).is_empty

    return _sweep(x.domain, x.period, t_bound, events, decide)


def pnueli_unit(operands: Sequence[Signal]) -> Signal:
    """Truth signal of: strictly increasing witnesses in (t, t+1), one per operand.

    Decision per point: decompose the open window into the elementary regions
    of the joint refinement and scan left to right, placing the next needed
    witness greedily.  A point region hosts at most one witness; an open
    region hosts any run of operands that all hold on it, density providing
    room for strictly increasing placements.
    """
    if not operands:
        raise EvalError("a run modality needs at least one operand")
    xs = align_many(list(operands))
    x0 = xs[0]

    def decide(t: Fraction) -> bool:
        window = _open_set(t, t + 1)
        slices = [x.slice(t, t + 1).intersection(window) for x in xs]
        cuts = sorted(c for c in _endpoints(slices) if t < c < t + 1)
        j = 0
        prev = t
        for cut in cuts + [t + 1]:
            if prev < cut:  # open region (prev, cut)
                mid = (prev + cut) / 2
                while j < len(slices) and slices[j].contains(mid):
                    j += 1
            if j == len(slices):
                return True
            if cut < t + 1 and slices[j].contains(cut):  # point region {cut}
                j += 1
            prev = cut
        return j == len(slices)

    return _sweep(x0.domain, x0.period, x0.transient, _future_events(*xs), decide)


# ------------------------------------------------------------- order family

def until(x: Signal, y: Signal) -> Signal:
    """Strict non-matching until: a future witness of y with x holding on the
    whole open interior.

    Pointwise: let c be the first point strictly after t where x fails.  The
    witness range is (t, c]; with no failure at all it degrades to "y nonempty
    in the remaining domain", read off the representation.
    """
    xx, yy = align(x, y)
    not_x = combine("not", xx)

    def decide(t: Fraction) -> bool:
        c = _inf_strictly_after(not_x, t)
        if c is None:
            return _inf_strictly_after(yy, t) is not None
        if c == t:
            return False
        return not yy.slice(t, c).intersection(_left_open(t, c)).is_empty

    return _sweep(xx.domain, xx.period, xx.transient, _order_events(xx, yy), decide)


def since(x: Signal, y: Signal) -> Signal:
    """Mirror image of until into the past; on the half line witnesses range
    over [0, t), so the origin can carry one."""
    xx, yy = align(x, y)
    not_x = combine("not", xx)
    if xx.domain is TimeDomain.HALF_LINE:
        t_bound = xx.transient + xx.period
    else:
        t_bound = Fraction(0)

    def decide(t: Fraction) -> bool:
        if xx.domain is TimeDomain.HALF_LINE and t == 0:
            return False
        c = _sup_strictly_before(not_x, t)
        if c is None:
            if xx.domain is TimeDomain.HALF_LINE:
                return not yy.slice(0, t).intersection(_half_open(Fraction(0), t)).is_empty
            return not yy.pattern.is_empty
        return not yy.slice(c, t).intersection(_half_open(c, t)).is_empty

    return _sweep(xx.domain, xx.period, t_bound, _order_events(xx, yy, t_bound), decide)


def _order_events(x: Signal, y: Signal, t_bound: Optional[Fraction] = None) -> set[Fraction]:
    if x.domain is TimeDomain.FULL_LINE:
        base = _endpoints([x.slice(0, x.period), y.slice(0, y.period)])
        return {e % x.period for e in base}
    hi = (x.transient if t_bound is None else t_bound) + x.period
    return _endpoints([x.slice(0, hi + x.period), y.slice(0, hi + y.period)])


# ------------------------------------------------------------------- evaluate

def evaluate(f: Formula, env: Env) -> Signal:
    """The canonical truth signal of a formula under an environment."""
    if isinstance(f, TrueConst):
        return Signal.constant(env.domain, True)
    if isinstance(f, FalseConst):
        return Signal.constant(env.domain, False)
    if isinstance(f, Atom):
        return env.signal(f.name).canonicalize()
    if isinstance(f, Not):
        return combine("not", evaluate(f.operand, env))
    if isinstance(f, And):
        return combine("and", evaluate(f.left, env), evaluate(f.right, env))
    if isinstance(f, Or):
        return combine("or", evaluate(f.left, env), evaluate(f.right, env))
    if isinstance(f, Implies):
        return combine("or", combine("not", evaluate(f.left, env)), evaluate(f.right, env))
    if isinstance(f, Until):
        return until(evaluate(f.left, env), evaluate(f.right, env))
    if isinstance(f, Since):
        return since(evaluate(f.left, env), evaluate(f.right, env))
    if isinstance(f, DiamondFuture):
        return diamond_unit_future(evaluate(f.operand, env))
    if isinstance(f, DiamondPast):
        return diamond_unit_past(evaluate(f.operand, env))
    if isinstance(f, Count):
        return count_unit(evaluate(f.operand, env), f.n)
    if isinstance(f, Pnueli):
        return pnueli_unit([evaluate(a, env) for a in f.args])
    raise TypeError(f"not a formula: {f!r}")
