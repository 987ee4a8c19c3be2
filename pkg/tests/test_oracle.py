"""Oracle checks: region decomposition, pointwise queries, engine agreement."""

from fractions import Fraction as F

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qtlab.formulas import metrics, parse_formula
from qtlab.intervals import Interval, IntervalError, IntervalSet
from qtlab.oracle import (
    AgreementReport,
    PointwiseSession,
    RegionDecomposition,
    agreement_check,
    compare_pointwise,
    critical_points,
    pointwise_eval,
    region_decomposition,
    sample_points,
)
from qtlab.semantics import Env, evaluate
from qtlab.signals import DomainError, Signal, TimeDomain

from gen import random_formula, random_signal

LINE = TimeDomain.FULL_LINE
HALF = TimeDomain.HALF_LINE


def grid_line(k):
    return Signal(LINE, F(1, k), IntervalSet([Interval.point(F(0))]))


def thm2_signal():
    return Signal(HALF, F(2, 3), IntervalSet([Interval.point(F(0))]))


def test_region_decomposition_tags_unit_grid():
    decomp = region_decomposition([grid_line(2)], 0, 1)
    assert isinstance(decomp, RegionDecomposition)
    assert decomp.window == Interval(F(0), F(1), True, True)
    assert [r.interval for r in decomp.regions] == [
        Interval.point(F(0)),
        Interval(F(0), F(1, 2), False, False),
        Interval.point(F(1, 2)),
        Interval(F(1, 2), F(1), False, False),
        Interval.point(F(1)),
    ]
    assert [r.values for r in decomp.regions] == [
        (True,), (False,), (True,), (False,), (True,),
    ]


def test_region_decomposition_joint_refinement():
    s = Signal(LINE, F(1), IntervalSet([Interval(F(0), F(1, 2), True, False)]))
    decomp = region_decomposition([s, grid_line(3)], 0, F(1, 2))
    cuts = [r.interval.lower for r in decomp.regions if r.interval.is_point]
    assert cuts == [F(0), F(1, 3), F(1, 2)]
    # tags carry one value per signal, in argument order
    assert decomp.regions[1].values == (True, False)


def test_region_decomposition_rejects_bad_windows():
    with pytest.raises(IntervalError):
        region_decomposition([grid_line(2)], F(1, 3), F(1, 3))
    with pytest.raises(IntervalError):
        region_decomposition([grid_line(2)], 1, 0)
    with pytest.raises(DomainError):
        region_decomposition([thm2_signal()], -1, 1)


@settings(max_examples=60, deadline=None)
@given(st.randoms(use_true_random=False), st.sampled_from([LINE, HALF]))
def test_signals_are_constant_on_their_regions(rng, domain):
    sigs = [random_signal(rng, domain) for _ in range(2)]
    hi = max(s.transient for s in sigs) + 2 * max(s.period for s in sigs)
    for reg in region_decomposition(sigs, 0, hi).regions:
        iv = reg.interval
        if iv.is_point:
            probes = [iv.lower]
        else:
            a, b = iv.lower, iv.upper
            probes = [a + (b - a) * F(k, 4) for k in (1, 2, 3)]
        for s, tagged in zip(sigs, reg.values):
            assert {s.contains(p) for p in probes} == {tagged}


@settings(max_examples=30, deadline=None)
@given(st.randoms(use_true_random=False), st.sampled_from([LINE, HALF]))
def test_formula_truth_is_constant_on_translate_refined_regions(rng, domain):
    f = random_formula(rng, modal_budget=2, size=4)
    depth, atoms = metrics(f)
    env = Env(domain, {"P": random_signal(rng, domain),
                       "Q": random_signal(rng, domain)})
    sigs = [env.bindings[a] for a in sorted(atoms)] or [env.bindings["P"]]
    hi = max(s.transient for s in sigs) + 2 * max(s.period for s in sigs) + depth
    cuts = set()
    for s in sigs:
        for comp in s.slice(0, hi + depth):
            for e in (comp.lower, comp.upper):
                for k in range(-depth, depth + 1):
                    if 0 < e + k < hi:
                        cuts.add(e + k)
    session = PointwiseSession(f, env)
    prev = F(0)
    for c in sorted(cuts) + [hi]:
        if prev < c:
            probes = [prev + (c - prev) * F(k, 4) for k in (1, 2, 3)]
            assert len({session.eval(f, p) for p in probes}) == 1
        prev = c


def test_pointwise_count_on_two_thirds_grid():
    env = Env(HALF, {"P": thm2_signal()})
    f = parse_formula("C2(P)")
    assert pointwise_eval(f, env, F(1, 6)) is False
    assert pointwise_eval(f, env, F(7, 6)) is True
    assert pointwise_eval(f, env, F(0)) is False
    assert pointwise_eval(f, env, F(1, 2)) is True


def test_pointwise_diamond_is_true_everywhere_on_unit_grid():
    env = Env(LINE, {"P": grid_line(2)})
    f = parse_formula("F1 P")
    for t in sample_points(evaluate(f, env), count=20, seed=3):
        assert pointwise_eval(f, env, t) is True


def test_pointwise_until_reaches_grid_point():
    env = Env(LINE, {"P": grid_line(3)})
    f = parse_formula("!P U P")
    assert pointwise_eval(f, env, F(0)) is True
    g = parse_formula("P U true")
    assert pointwise_eval(g, env, F(0)) is False


def test_pointwise_since_on_half_line_origin():
    env = Env(HALF, {"P": thm2_signal()})
    f = parse_formula("true S P")
    assert pointwise_eval(f, env, F(0)) is False  # no past at the origin
    assert pointwise_eval(f, env, F(1, 10)) is True


def test_pointwise_pnueli_matches_hand_count():
    env = Env(LINE, {"P": grid_line(2)})
    assert pointwise_eval(parse_formula("Pn2(P, !P)"), env, F(0)) is True
    assert pointwise_eval(parse_formula("Pn3(P, P, P)"), env, F(0)) is False
    # two grid points fit in the open window away from the grid
    assert pointwise_eval(parse_formula("Pn2(P, P)"), env, F(1, 4)) is True
    # but not when the window boundary sits on the grid
    assert pointwise_eval(parse_formula("Pn2(P, P)"), env, F(0)) is False


def test_session_memo_is_consistent():
    env = Env(HALF, {"P": thm2_signal()})
    f = parse_formula("C2(P) U !P")
    session = PointwiseSession(f, env)
    a = session.eval(f, F(1, 3))
    b = session.eval(f, F(1, 3))
    assert a == b == pointwise_eval(f, env, F(1, 3))


def test_sample_points_cover_critical_points_first():
    s = evaluate(parse_formula("C2(P)"), Env(HALF, {"P": thm2_signal()}))
    pts = sample_points(s, count=50, seed=7)
    assert len(pts) == 50
    assert pts == sorted(set(pts))
    for c in critical_points(s):
        assert c in pts
    assert sample_points(s, count=50, seed=7) == pts
    assert sample_points(s, count=0, seed=7) == []
    # a tight budget keeps the critical points and drops the fill
    tight = sample_points(s, count=len(critical_points(s)), seed=7)
    assert tight == critical_points(s)


def test_agreement_report_format():
    env = Env(LINE, {"P": grid_line(2)})
    f = parse_formula("F1 P")
    report = agreement_check(f, env, samples=3, seed=0)
    assert isinstance(report, AgreementReport)
    assert report.passed and report.total == 3
    text = report.render()
    assert text.splitlines()[0] == "t=-2 engine=1 oracle=1"
    assert text.splitlines()[-1] == "agreement 3/3"


def test_agreement_zero_samples_is_vacuous():
    env = Env(LINE, {"P": grid_line(2)})
    report = agreement_check(parse_formula("F1 P"), env, samples=0, seed=0)
    assert report.passed and report.total == 0
    assert report.render() == "agreement 0/0\n"


def test_agreement_at_every_critical_point_of_long_window():
    env = Env(HALF, {"P": thm2_signal()})
    f = parse_formula("C2(P)")
    sig = evaluate(f, env)
    decomp = region_decomposition([env.bindings["P"], sig], 0, 4)
    pts = []
    for reg in decomp.regions:
        iv = reg.interval
        pts.append(iv.lower if iv.is_point else (iv.lower + iv.upper) / 2)
    report = compare_pointwise(f, env, sig, pts)
    assert report.passed, report.render()


def test_disagreement_is_reported_not_hidden():
    env = Env(LINE, {"P": grid_line(2)})
    f = parse_formula("F1 P")
    wrong = Signal.constant(LINE, False)
    report = compare_pointwise(f, env, wrong, [F(0), F(1, 4)])
    assert not report.passed
    assert report.agreements == 0
    assert report.render().endswith("agreement 0/2\n")


def test_oracle_module_never_imports_the_engine_at_load():
    import subprocess
    import sys

    code = ("import sys; import qtlab.oracle; "
            "sys.exit(1 if 'qtlab.semantics' in sys.modules else 0)")
    assert subprocess.run([sys.executable, "-c", code]).returncode == 0


@settings(max_examples=25, deadline=None)
@given(st.randoms(use_true_random=False), st.sampled_from([LINE, HALF]))
def test_engine_and_oracle_agree_on_random_input(rng, domain):
    f = random_formula(rng, modal_budget=2, size=5)
    env = Env(domain, {"P": random_signal(rng, domain),
                       "Q": random_signal(rng, domain)})
    report = agreement_check(f, env, samples=20, seed=rng.randint(0, 10 ** 6))
    assert report.passed, report.render()
