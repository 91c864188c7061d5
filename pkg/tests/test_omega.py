import math
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from cslab.constructions import trace_of
from cslab.errors import DegenerateInterval
from cslab.numeric import Interval, as_interval, dyadic
from cslab.omega import (Z_eval, Z_function, bump_index, difference_quotient, omega, sum_omega, tangency_search,
                         tangent_abscissa)
from cslab.subject import Judgment

F = Fraction


def float_omega(nu, x):
    """Floating-point oracle written from the closed form."""
    a = abs(x)
    if not 2.0 ** -nu <= a <= 2.0 ** (1 - nu):
        return 0.0
    return math.sqrt(max(3 * 2.0 ** -nu * a - a * a - 2.0 ** (1 - 2 * nu), 0.0))


def test_omega_one_values():
    assert omega(1, F(1, 2)) == 0
    assert omega(1, F(3, 4)) == F(1, 4)
    v = omega(1, F(2, 3))
    assert isinstance(v, Interval)
    assert v.lo ** 2 <= F(1, 18) <= v.hi ** 2
    assert v.width <= dyadic(40)
    assert abs(float(v.mid) - math.sqrt(2) / 6) < 1e-12


def test_omega_outside_support_and_symmetry():
    assert omega(1, F(1, 4)) == 0 and omega(1, F(3, 2)) == 0
    assert omega(2, F(-3, 8)) == omega(2, F(3, 8)) == F(1, 8)
    with pytest.raises(ValueError):
        omega(0, F(1, 2))


@settings(max_examples=200)
@given(st.integers(1, 8), st.fractions(-1, 1, max_denominator=1 << 12))
def test_omega_matches_float_oracle(nu, x):
    assert abs(float(as_interval(omega(nu, x)).mid) - float_omega(nu, float(x))) < 1e-9


@settings(max_examples=200)
@given(st.fractions(-1, 1, max_denominator=1 << 12))
def test_at_most_one_bump_nonzero(x):
    nonzero = [nu for nu in range(1, 20) if omega(nu, x) != 0]
    assert len(nonzero) <= 1
    assert sum_omega(x) == (omega(nonzero[0], x) if nonzero else 0)
    if nonzero:
        assert bump_index(x) == nonzero[0]


def test_sum_truncation():
    assert sum_omega(F(3, 8)) == F(1, 8)
    assert sum_omega(F(3, 8), nu_max=1) == 0
    assert sum_omega(0) == 0 and sum_omega(1) == 0


def test_z_examples():
    x2 = F(3, 8)
    undecided = trace_of(6)
    assert Z_eval(undecided, "A", x2, 6) == F(1, 8)
    assert Z_eval(undecided, "A", x2, 1) == 0
    decided = trace_of(6, (2, Judgment.affirm("A")))
    assert Z_eval(decided, "A", F(3, 4), 6) == F(1, 4)
    assert Z_eval(decided, "A", x2, 6) == 0
    assert Z_function(decided, "A")(F(3, 16)) == 0
    refuted = trace_of(6, (3, Judgment.refute("A")))
    assert Z_eval(refuted, "A", x2, 6) == F(1, 8)
    assert Z_eval(refuted, "A", F(3, 16), 6) == 0


def test_tangency_nu_one_and_two():
    for nu, want in ((1, F(2, 3)), (2, F(1, 3))):
        x, s = tangency_search(nu)
        assert tangent_abscissa(nu) == want
        assert abs(x - want) < F(1, 10 ** 9)
        assert abs(float(as_interval(s).mid) - math.sqrt(2) / 4) < 1e-9


def test_tangent_touches_bump():
    # at the touch point the bump equals the tangent line
    for nu in range(1, 8):
        x = tangent_abscissa(nu)
        y = as_interval(omega(nu, x))
        assert y.lo ** 2 <= x * x / 8 <= y.hi ** 2


def test_difference_quotient():
    q = as_interval(difference_quotient(sum_omega, 0, F(3, 4)))
    assert q.lo == q.hi == F(1, 3)
    with pytest.raises(DegenerateInterval):
        difference_quotient(sum_omega, F(1, 2), F(1, 2))
    with pytest.raises(ValueError):
        tangency_search(1, F(1, 1 << 50))
