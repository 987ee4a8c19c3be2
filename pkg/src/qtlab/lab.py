"""Builtin grid models, semantic formula enumeration, and turnkey checks.

The models bind one atom P to a pure point grid: multiples of 1/k on the whole
line, or multiples of 2/3 (respectively 2/(2n-1)) on the half line.

Enumeration works by semantic closure: seed with the constants and the atom,
close under the boolean connectives, then per nesting level apply the chosen
logic's modalities to the current representatives and close again.  Two
formulas with the same truth signal on the dedup environment collapse to the
first one found, so the emitted list carries exactly one representative per
distinct truth set.  The budget caps how many candidate evaluations are spent,
with a truncation flag when it runs out.  Everything is deterministic:
no randomness, fixed iteration orders, append-only representative list.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Set, Tuple

from .formulas import (
    And,
    Atom,
    Count,
    FalseConst,
    Formula,
    Not,
    Or,
    Pnueli,
    Since,
    TrueConst,
    Until,
    DiamondFuture,
    DiamondPast,
    format_formula,
)
from .intervals import Interval, IntervalSet, format_interval_list
from .semantics import (
    Env,
    diamond_unit_future,
    diamond_unit_past,
    evaluate,
    pnueli_unit,
    since,
    until,
)
from .signals import Signal, TimeDomain, Triviality, classify_trivial, combine

DEFAULT_BUDGET = 5000


class LabError(ValueError):
    pass


# ------------------------------------------------------------------- models

_MK_RE = re.compile(r"\Amk:(\d+)\Z")
_THM3_RE = re.compile(r"\Athm3:(\d+)\Z")


def builtin_model(spec: str) -> Env:
    """Environment for a named model: `mk:<k>`, `thm2`, or `thm3:<n>`.

    Binds the single atom P.  mk:k puts P at every multiple of 1/k over the
    whole line; thm2 at every nonnegative multiple of 2/3; thm3:n at every
    nonnegative multiple of 2/(2n-1).
    """
    point_zero = IntervalSet([Interval.point(Fraction(0))])
    m = _MK_RE.match(spec)
    if m:
        k = int(m.group(1))
        if k < 1:
            raise LabError(f"mk index must be at least 1, got {k}")
        sig = Signal(TimeDomain.FULL_LINE, Fraction(1, k), point_zero)
        return Env(TimeDomain.FULL_LINE, {"P": sig})
    if spec == "thm2":
        sig = Signal(TimeDomain.HALF_LINE, Fraction(2, 3), point_zero)
        return Env(TimeDomain.HALF_LINE, {"P": sig})
    m = _THM3_RE.match(spec)
    if m:
        n = int(m.group(1))
        if n < 2:
            raise LabError(f"thm3 index must be at least 2, got {n}")
        sig = Signal(TimeDomain.HALF_LINE, Fraction(2, 2 * n - 1), point_zero)
        return Env(TimeDomain.HALF_LINE, {"P": sig})
    raise LabError(f"unknown model spec {spec!r} (expected mk:<k>, thm2, thm3:<n>)")


# -------------------------------------------------------------- enumeration

@dataclass(frozen=True)
class Logic:
    """Modality set: until/since always; unit diamonds when `diamonds`;
    run modalities Pn2..Pn<pnueli_max> when pnueli_max >= 2."""

    diamonds: bool = False
    pnueli_max: int = 0


def parse_logic(text: str) -> Logic:
    if text == "tl":
        return Logic(False, 0)
    if text == "qtl":
        return Logic(True, 0)
    m = re.match(r"\Aqtl\+p(\d+)\Z", text)
    if m:
        cap = int(m.group(1))
        if cap < 1:
            raise LabError(f"run-modality cap must be at least 1, got {cap}")
        return Logic(True, cap)
    raise LabError(f"unknown logic {text!r} (expected tl, qtl, qtl+p<m>)")


@dataclass(frozen=True)
class EnumerationResult:
    formulas: Tuple[Formula, ...]
    truncated: bool
    # deterministic sample of candidates dropped by dedup, for spot checks
    pruned: Tuple[Formula, ...]


_PRUNED_CAP = 64


class _Enumeration:
    def __init__(self, env: Env, budget: int):
        self.env = env
        self.budget = budget
        self.spent = 0
        self.truncated = False
        self.reps: List[Formula] = []
        self.sigs: List[Signal] = []
        self.seen: Dict[Signal, int] = {}
        self.pruned: List[Formula] = []
        self.closed_upto = 0
        self.tried_modal: Set[Tuple] = set()

    def spend(self) -> bool:
        if self.spent >= self.budget:
            self.truncated = True
            return False
        self.spent += 1
        return True

    def admit(self, formula: Formula, sig: Signal) -> None:
        if sig in self.seen:
            if len(self.pruned) < _PRUNED_CAP:
                self.pruned.append(formula)
            return
        self.seen[sig] = len(self.reps)
        self.reps.append(formula)
        self.sigs.append(sig)

    def boolean_closure(self) -> None:
        old = self.closed_upto
        while True:
            n = len(self.reps)
            for i in range(old, n):
                if not self.spend():
                    return
                self.admit(Not(self.reps[i]), combine("not", self.sigs[i]))
            for i in range(n):
                for j in range(max(i, old), n):
                    for ctor, op in ((And, "and"), (Or, "or")):
                        if not self.spend():
                            return
                        self.admit(ctor(self.reps[i], self.reps[j]),
                                   combine(op, self.sigs[i], self.sigs[j]))
            old = n
            self.closed_upto = n
            if len(self.reps) == n:
                return

    def modal_layer(self, logic: Logic) -> None:
        base = len(self.reps)

        def once(key: Tuple) -> bool:
            if key in self.tried_modal:
                return False
            self.tried_modal.add(key)
            return True

        for i in range(base):
            for j in range(base):
                if once(("U", i, j)):
                    if not self.spend():
                        return
                    self.admit(Until(self.reps[i], self.reps[j]),
                               until(self.sigs[i], self.sigs[j]))
                if once(("S", i, j)):
                    if not self.spend():
                        return
                    self.admit(Since(self.reps[i], self.reps[j]),
                               since(self.sigs[i], self.sigs[j]))
        if logic.diamonds:
            for i in range(base):
                if once(("F1", i)):
                    if not self.spend():
                        return
                    self.admit(DiamondFuture(self.reps[i]),
                               diamond_unit_future(self.sigs[i]))
                if once(("O1", i)):
                    if not self.spend():
                        return
                    self.admit(DiamondPast(self.reps[i]),
                               diamond_unit_past(self.sigs[i]))
        for width in range(2, logic.pnueli_max + 1):
            for idxs in itertools.permutations(range(base), width):
                if not once(("Pn", width) + idxs):
                    continue
                if not self.spend():
                    return
                self.admit(Pnueli(tuple(self.reps[i] for i in idxs)),
                           pnueli_unit([self.sigs[i] for i in idxs]))


def enumerate_formulas(logic: Logic, depth: int, dedup_env: Env,
                       budget: int = DEFAULT_BUDGET) -> EnumerationResult:
    """Semantic representatives of all formulas over atom P up to the given
    modal nesting depth, deduplicated by truth signal on dedup_env."""
    if budget <= 0:
        raise LabError("budget must be positive")
    if depth < 0:
        raise LabError("depth must be nonnegative")
    state = _Enumeration(dedup_env, budget)
    seeds = [
        (TrueConst(), Signal.constant(dedup_env.domain, True)),
        (FalseConst(), Signal.constant(dedup_env.domain, False)),
        (Atom("P"), dedup_env.signal("P").canonicalize()),
    ]
    for formula, sig in seeds:
        if not state.spend():
            break
        state.admit(formula, sig)
    if not state.truncated:
        state.boolean_closure()
    for _ in range(depth):
        if state.truncated:
            break
        state.modal_layer(logic)
        if not state.truncated:
            state.boolean_closure()
    return EnumerationResult(tuple(state.reps), state.truncated, tuple(state.pruned))


# ------------------------------------------------------------------ reports

@dataclass(frozen=True)
class ReportEntry:
    formula: Formula
    text: str
    classification: Triviality
    eventually: bool
    # shown for nontrivial entries: a window past the transient and the truth
    # set inside it, demonstrating the set matches none of the four constants
    witness: Optional[Tuple[Interval, IntervalSet]]


@dataclass(frozen=True)
class TrivializationReport:
    entries: Tuple[ReportEntry, ...]
    truncated: bool = False

    def render(self) -> str:
        lines = [f"{e.text}\t{e.classification}\t{int(e.eventually)}"
                 for e in self.entries]
        total = len(self.entries)
        nontrivial = sum(e.classification is Triviality.NONE for e in self.entries)
        lines.append(f"total {total} trivial {total - nontrivial} "
                     f"nontrivial {nontrivial} truncated {int(self.truncated)}")
        return "".join(line + "\n" for line in lines)


def trivialization_report(env: Env, formulas: Sequence[Formula],
                          eventually: bool, truncated: bool = False) -> TrivializationReport:
    p = env.signal("P")
    entries = []
    for f in formulas:
        sig = evaluate(f, env)
        cls = classify_trivial(sig, p, eventually)
        witness = None
        if cls is Triviality.NONE:
            lo = sig.transient
            hi = sig.transient + 2 * sig.period
            window = Interval(lo, hi, True, False)
            truth = sig.slice(lo, hi).intersection(
                IntervalSet([Interval(lo, hi, True, False)]))
            witness = (window, truth)
        entries.append(ReportEntry(f, format_formula(f), cls, eventually, witness))
    return TrivializationReport(tuple(entries), truncated)


# ------------------------------------------------------------ turnkey checks

@dataclass(frozen=True)
class PaperCheckReport:
    name: str
    lines: Tuple[str, ...]
    passed: bool

    def render(self) -> str:
        body = [f"check {self.name}"] + list(self.lines)
        body.append("PASS" if self.passed else "FAIL")
        return "".join(line + "\n" for line in body)


def _count_formula(n: int) -> Formula:
    return Count(n, Atom("P"))


def _enumeration_evidence(env: Env, logic: Logic, eventually: bool,
                          budget: int, label: str) -> Tuple[List[str], bool]:
    enum = enumerate_formulas(logic, 2, env, budget)
    report = trivialization_report(env, enum.formulas, eventually, enum.truncated)
    bad = [e for e in report.entries if e.classification is Triviality.NONE]
    mode = "eventually" if eventually else "exactly"
    lines = [f"enumerated {len(report.entries)} {label} formulas to depth 2, "
             f"nontrivial {len(bad)}, truncated {int(enum.truncated)}"]
    for e in bad:
        lines.append(f"nontrivial witness: {e.text}")
    ok = not bad
    lines.append(f"all enumerated formulas {mode} trivial: {'yes' if ok else 'no'}")
    return lines, ok


def paper_check(name: str, budget: int = DEFAULT_BUDGET) -> PaperCheckReport:
    """Named end-to-end separation checks; see the acceptance suite."""
    if name == "pnueli":
        env = builtin_model("thm2")
        sig = evaluate(_count_formula(2), env)
        cls = classify_trivial(sig, env.signal("P"), eventually=True)
        lines = [f"C2(P) on thm2 eventually classifies: {cls}"]
        lines.append(f"C2(P) tail pattern: {format_interval_list(sig.pattern)} "
                     f"period {sig.period} transient {sig.transient}")
        ok1 = cls is Triviality.NONE
        more, ok2 = _enumeration_evidence(env, parse_logic("qtl"), True, budget, "qtl")
        return PaperCheckReport(name, tuple(lines + more), ok1 and ok2)

    m = re.match(r"\Ahierarchy:(\d+)\Z", name)
    if m:
        n = int(m.group(1))
        if n < 2:
            raise LabError(f"hierarchy index must be at least 2, got {n}")
        env = builtin_model(f"thm3:{n}")
        sig = evaluate(_count_formula(n), env)
        width = Fraction(1, 2 * n - 1)
        lines = []
        vals = []
        constant = True
        for k in range(6):
            probes = {sig.contains(k + width * q) for q in
                      (Fraction(1, 4), Fraction(1, 2), Fraction(3, 4))}
            if len(probes) != 1:
                constant = False
                lines.append(f"C{n}(P) not constant on ({k},{k}+{width})")
                vals.append(None)
                continue
            val = probes.pop()
            vals.append(val)
            lines.append(f"C{n}(P) on ({k},{k}+{width}): {'true' if val else 'false'}")
        alternates = constant and all(
            vals[k] is not None and vals[k + 1] is not None and vals[k] != vals[k + 1]
            for k in range(5))
        if constant and vals[0] is not None and vals[1] is not None:
            lines.append(f"orientation even={'true' if vals[0] else 'false'} "
                         f"odd={'true' if vals[1] else 'false'}")
        lines.append(f"alternation over six intervals: {'yes' if alternates else 'no'}")
        more, ok2 = _enumeration_evidence(env, Logic(True, n - 1), True, budget,
                                          f"qtl+p{n - 1}")
        return PaperCheckReport(name, tuple(lines + more), alternates and ok2)

    m = re.match(r"\Acounting:(\d+)\Z", name)
    if m:
        k = int(m.group(1))
        if k < 2:
            raise LabError(f"counting index must be at least 2, got {k}")
        lines = []
        oks = []
        for idx, want in ((k, Triviality.NOT_P), (k + 1, Triviality.TRUE)):
            env = builtin_model(f"mk:{idx}")
            cls = classify_trivial(evaluate(_count_formula(k), env),
                                   env.signal("P"), eventually=False)
            lines.append(f"C{k}(P) on mk:{idx}: {cls}")
            oks.append(cls is want)
        return PaperCheckReport(name, tuple(lines), all(oks))

    m = re.match(r"\Atriviality:(\d+)\Z", name)
    if m:
        k = int(m.group(1))
        if k < 2:
            raise LabError(f"triviality index must be at least 2, got {k}")
        env = builtin_model(f"mk:{k}")
        lines, ok = _enumeration_evidence(env, parse_logic("qtl"), False, budget, "qtl")
        return PaperCheckReport(name, tuple(lines), ok)

    raise LabError(f"unknown check {name!r} "
                   "(expected pnueli, hierarchy:<n>, counting:<k>, triviality:<k>)")
