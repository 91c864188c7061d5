"""Acceptance criteria, one test each, at the stated tolerances and time budgets.

Every test records a single PASS/FAIL line; the lines are printed as they
happen (visible with ``-s``) and again in the terminal summary.
"""

import filecmp
import math
import random
import time
from fractions import Fraction

from conftest import ACCEPTANCE_LINES, event_of, one_atom_traces

from cslab import bks
from cslab.cli import main
from cslab.constructions import (brouwer1948_r, direct_checking, heyting_pair, sqrt2_drift, standard_drift,
                                 standard_two_winged, two_sided_checking)
from cslab.creal import apart, check_modulus, coincide_up_to, constant, dyadic_embed, eventually_constant
from cslab.errors import Exhausted
from cslab.logic.formula import parse
from cslab.logic.search import check_axiom_suite, countermodel_search, exists_G_implies, forall_G_decided
from cslab.logic.formula import Atom
from cslab.logic.semantics import monotonicity_violations
from cslab.numeric import as_interval, dyadic, pair, unpair
from cslab.omega import difference_quotient, omega, sum_omega, tangency_search, tangent_abscissa
from cslab.scenario import shipped_scenarios
from cslab.subject import Judgment, Kind, build_trace, validate_schedule

ZERO = constant(0)


def record(n, ok, detail, elapsed):
    line = f"criterion {n}: {'PASS' if ok else 'FAIL'} ({elapsed:.2f}s) {detail}"
    ACCEPTANCE_LINES.append(line)
    print(line)
    return ok


def test_criterion_1_pairing_bijectivity():
    t0 = time.perf_counter()
    bad_round = [p for p in range(65536) if pair(*unpair(p)) != p]
    seen = {}
    collisions = 0
    for n in range(256):
        for k in range(256):
            p = pair(n, k)
            collisions += p in seen
            seen[p] = (n, k)
    bad_inverse = [nk for p, nk in seen.items() if unpair(p) != nk]
    dt = time.perf_counter() - t0
    ok = not bad_round and not collisions and not bad_inverse and dt < 1
    assert record(1, ok, f"round-trip failures {len(bad_round)}, collisions {collisions}", dt)


def test_criterion_2_schedule_sweep_soundness():
    t0 = time.perf_counter()
    H = 10
    problems = []
    for trace in one_atom_traces(H):
        r = brouwer1948_r(trace, "A")
        for p in range(2 * H + 1):
            upto = H if r.available(H) is False else 2 * H
            if check_modulus(r, p, upto):
                problems.append(("modulus", p, trace.schedule.events))
        v = apart(ZERO, r, H)
        ev = event_of(trace)
        if ev and ev[1] in (Kind.AFFIRM, Kind.REFUTE):
            side = "right" if ev[1] is Kind.AFFIRM else "left"
            if not (v.is_established and v.certificate.side == side):
                problems.append(("verdict", str(v), ev))
        elif not (v.is_unknown and v.depth == H):
            problems.append(("verdict", str(v), ev))
    dt = time.perf_counter() - t0
    ok = not problems and dt < 10
    assert record(2, ok, f"31 schedules, {len(problems)} problems", dt), problems


def test_criterion_3_heyting_parity_dichotomy():
    t0 = time.perf_counter()
    H = 10
    bound = H - 2  # "within 2**-(H-2) of 0", read as coincide_up_to at that precision
    first, second = [], []
    for trace in one_atom_traces(H, kinds=(Kind.REFUTE, Kind.DOUBLENEG)):
        _, s = heyting_pair(trace, "A")
        ev = event_of(trace)
        even = ev is not None and ev[0] % 2 == 0
        if apart(ZERO, s, H).is_established != even:
            first.append(ev)
        if coincide_up_to(s, ZERO, bound) != (not even):
            second.append(ev)
    dt = time.perf_counter() - t0
    ok = not first and not second
    detail = (f"apart-iff-even failures {len(first)}; within-iff-odd-or-absent failures {len(second)}"
              f" at {sorted(set((e[0], e[1].value) for e in second))}")
    assert record(3, ok, detail, dt), detail


def test_criterion_4_checking_number_equivalence():
    t0 = time.perf_counter()
    H = 10
    drift = standard_two_winged()
    mismatches, not_apart = [], []
    for trace in one_atom_traces(H):
        c = two_sided_checking(drift, trace, "A")
        r = brouwer1948_r(trace, "A")
        if c.available_prefix(3 * H) != r.available_prefix(3 * H):
            mismatches.append(event_of(trace))
        ev = event_of(trace)
        if ev and ev[1] in (Kind.AFFIRM, Kind.REFUTE):
            for d in (standard_drift(), drift):
                if not apart(d.kernel, direct_checking(d, trace, "A"), H).is_established:
                    not_apart.append((ev, d.label))
    dt = time.perf_counter() - t0
    ok = not mismatches and not not_apart
    assert record(4, ok, f"{len(mismatches)} prefix mismatches, {len(not_apart)} missing apartness", dt)


def _random_fixture(rng):
    H = rng.randint(2, 12)
    members = rng.sample(range(1, 21), rng.randint(0, 5))
    stages = {0: 0}
    stages.update({n: rng.randint(1, H) for n in members})
    return H, stages


def test_criterion_5_bks_clause_suite():
    t0 = time.perf_counter()
    H = 10
    failures = []
    for trace in one_atom_traces(H):
        for kind in Kind:
            target = Judgment("A", kind)
            alpha = bks.alpha_from_trace(trace, target)
            rep = bks.verify_bks_clauses(alpha, trace, target)
            rep_star = bks.verify_bks_clauses(bks.dedup(alpha), trace, target)
            if not rep.passed or rep.outcomes() != rep_star.outcomes():
                failures.append(("clauses", event_of(trace), kind))

    rng = random.Random(20240917)
    family = [bks.BinarySeq(tuple(rng.randint(0, 1) for _ in range(64))) for _ in range(64)]
    beta = bks.zigzag_merge(family, pair(63, 63) + 1)
    if any(beta[pair(x, k)] != family[x][k] for x in range(64) for k in range(64)):
        failures.append(("zigzag",))

    for _ in range(200):
        H, stages = _random_fixture(rng)
        trace = build_trace(validate_schedule(bks.fixture_schedule(stages, H)))
        for enum in (bks.species_enumerator(trace), bks.cs_enumerate(trace)):
            for n in range(21):
                if enum.enumerates(n) != (n in stages):
                    failures.append(("enumerator", stages, n))

    for H2 in range(1, 11):
        for trace in one_atom_traces(H2):
            alpha = bks.bks_plus_from_conditional(bks.conditional_prefix(trace, "A", sqrt2_drift()))
            affirmed = any(e.judgment.kind is Kind.AFFIRM for e in trace.schedule.events)
            if (1 in alpha.values) != affirmed:
                failures.append(("bks+", H2, event_of(trace)))
    dt = time.perf_counter() - t0
    ok = not failures and dt < 30
    assert record(5, ok, f"{len(failures)} failures", dt), failures[:5]


def test_criterion_6_omega_geometry():
    t0 = time.perf_counter()
    tol = Fraction(1, 10 ** 6)
    slope = math.sqrt(2) / 4
    problems = []
    for nu in range(1, 11):
        for x in (dyadic(nu), -dyadic(nu), 2 * dyadic(nu), -2 * dyadic(nu)):
            if omega(nu, x) != 0:
                problems.append(("endpoint", nu, x))
        if omega(nu, 3 * dyadic(nu + 1)) != dyadic(nu + 1):
            problems.append(("maximum", nu))
        x, s = tangency_search(nu)
        if abs(float(as_interval(s).mid) - slope) > 1e-6:
            problems.append(("slope", nu, float(as_interval(s).mid)))
        if abs(x - Fraction(4, 3) * dyadic(nu)) > tol or tangent_abscissa(nu) != Fraction(4, 3) * dyadic(nu):
            problems.append(("abscissa", nu, float(x)))
    q = as_interval(difference_quotient(sum_omega, 0, Fraction(2, 3)))
    if abs(float(q.lo) - slope) > 1e-6 or abs(float(q.hi) - slope) > 1e-6:
        problems.append(("difference quotient", float(q.mid)))
    dt = time.perf_counter() - t0
    ok = not problems and dt < 5
    assert record(6, ok, f"nu <= 10, {len(problems)} problems", dt), problems


def _neighbours(rng):
    prefix = [rng.randint(1, 4) for _ in range(rng.randint(1, 5))]
    m = rng.randrange(len(prefix))
    bumped = list(prefix)
    bumped[m] += 1
    # raising the first term raises the value, raising a later one lowers it
    return prefix, bumped, ("right" if m == 0 else "left")


def test_criterion_7_dyadic_embedding():
    t0 = time.perf_counter()
    problems = []
    for terms, tail, want in (([1], 1, Fraction(1, 2)), ([2], 1, Fraction(3, 4)), ([1], 2, Fraction(1, 6))):
        x = dyadic_embed(eventually_constant(terms, tail))
        if abs(x.approximant(42) - want) > dyadic(40):
            problems.append((terms, tail))
    rng = random.Random(7)
    for _ in range(100):
        a, b, side = _neighbours(rng)
        v = apart(dyadic_embed(eventually_constant(a)), dyadic_embed(eventually_constant(b)), 64)
        if not (v.is_established and v.certificate.side == side):
            problems.append((a, b, str(v)))
    dt = time.perf_counter() - t0
    ok = not problems
    assert record(7, ok, f"3 values, 100 neighbour pairs, {len(problems)} problems", dt), problems


def test_criterion_8_stage_logic():
    t0 = time.perf_counter()
    problems = []
    for n_atoms in (1, 2):
        for H in range(1, 7):
            rep = check_axiom_suite(H, n_atoms, branching=False)
            if not rep.trace_ok:
                problems.append(("trace", n_atoms, H, rep.failures[:2]))
    targets = {"exists-G-implies": exists_G_implies(Atom("B"), 4),
               "forall-G-decided": forall_G_decided(Atom("A"), 4)}
    for name, phi in targets.items():
        try:
            model, w = countermodel_search(phi, 31, "all")
        except Exhausted:
            problems.append(("no countermodel", name))
            continue
        if model.size > 31:
            problems.append(("too large", name, model.size))
        if monotonicity_violations(model, phi):
            problems.append(("monotonicity", name))
    try:
        countermodel_search(parse("~~(A | ~A)"), 31)
        problems.append(("countermodel for a valid formula",))
    except Exhausted:
        pass
    dt = time.perf_counter() - t0
    ok = not problems and dt < 60
    assert record(8, ok, f"{len(problems)} problems", dt), problems


def test_criterion_9_end_to_end(tmp_path, capsys):
    t0 = time.perf_counter()
    files = shipped_scenarios()
    codes = {f.name: main(["run", str(f)]) for f in files}
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    main(["omega-csv", "--nu-max", "4", "--samples", "1000", "--out", str(a)])
    main(["omega-csv", "--nu-max", "4", "--samples", "1000", "--out", str(b)])
    capsys.readouterr()
    same = filecmp.cmp(a, b, shallow=False)
    dt = time.perf_counter() - t0
    failed = [n for n, c in codes.items() if c != 0]
    ok = len(files) >= 12 and not failed and same
    assert record(9, ok, f"{len(files)} scenarios, failing {failed}, csv identical {same}", dt)
