import math
import random
from fractions import Fraction

import pytest

from arithcurve.arithdiv import (
    ArithmeticDivisor,
    PowerProduct,
    deg_arith,
    deg_finite,
    is_effective,
    principal_divisor,
)
from arithcurve.errors import BoundExceeded, SearchExhausted
from arithcurve.lattice import enumerate_points, enumerate_points_naive
from arithcurve.minkowski import (
    class_group,
    enumerate_theta,
    minkowski_constant,
    principal_generator,
    reduce_to_theta,
    short_section,
)
from arithcurve.quadfield import (
    FractionalIdeal,
    make_field,
    primes_over,
    principal_ideal,
)

from oracles import reduced_form_class_number


def test_minkowski_constant_values():
    assert minkowski_constant(make_field(-1)).value == pytest.approx(
        math.log(4 / math.pi), abs=1e-12
    )
    assert minkowski_constant(make_field(5)).value == pytest.approx(
        0.5 * math.log(5), abs=1e-12
    )
    assert minkowski_constant(make_field(-5)).value == pytest.approx(
        math.log(2 / math.pi * math.sqrt(20)), abs=1e-12
    )


def test_short_section_boundary_gaussian():
    F = make_field(-1)
    ck = minkowski_constant(F).value
    x = short_section(ArithmeticDivisor.green_only(F, (ck, ck)))
    assert abs(x.norm()) == 1  # only units fit in the boundary disk


def test_short_section_with_pole():
    F = make_field(-1)
    P2 = primes_over(F, 2)[0]
    ck = minkowski_constant(F).value
    div = ArithmeticDivisor(F, {P2: -1}, (ck + math.log(2),) * 2)
    x = short_section(div)
    # x must cancel the pole: ord_P2(x) >= 1, so (1+i) divides x
    assert P2.ideal.contains(x)
    assert is_effective(div + principal_divisor(PowerProduct.of(x)))


def test_short_section_real_boundary():
    F = make_field(5)
    ck = minkowski_constant(F).value
    x = short_section(ArithmeticDivisor.green_only(F, (ck, ck)))
    assert abs(x.norm()) == 1


def test_short_section_exhausted():
    F = make_field(-1)
    with pytest.raises(SearchExhausted):
        short_section(ArithmeticDivisor.green_only(F, (-1.0, -1.0)))


def test_theta_sets():
    F = make_field(-1)
    assert [dict(E.coeffs) for E in enumerate_theta(F).divisors] == [{}]
    F5n = make_field(-5)
    theta = enumerate_theta(F5n).divisors
    P2 = primes_over(F5n, 2)[0]
    assert [dict(E.coeffs) for E in theta] == [{}, {P2: 1}]
    # Q(sqrt5): no prime has log norm below C_K = 0.8047
    assert [dict(E.coeffs) for E in enumerate_theta(make_field(5)).divisors] == [{}]


def test_theta_degree_bound_and_effectivity():
    for m in (-1, -5, -23, -47, 5, 13):
        F = make_field(m)
        ck = minkowski_constant(F).value
        for E in enumerate_theta(F).divisors:
            assert is_effective(E)
            assert deg_finite(E.coeffs) <= ck + 1e-12


def test_reduce_to_theta_trivial():
    F = make_field(-1)
    x, E = reduce_to_theta(F, ArithmeticDivisor.zero(F))
    assert not E.coeffs


def test_reduce_to_theta_split_five():
    F = make_field(-1)
    P5 = primes_over(F, 5)[0]
    x, E = reduce_to_theta(F, ArithmeticDivisor(F, {P5: 1}, (0.0, 0.0)))
    assert not E.coeffs  # h = 1: reduction reaches the zero divisor


def test_reduce_to_theta_nonprincipal():
    F = make_field(-5)
    P2 = primes_over(F, 2)[0]
    x, E = reduce_to_theta(F, ArithmeticDivisor(F, {P2: 1}, (0.0, 0.0)))
    assert dict(E.coeffs) == {P2: 1}  # the non-principal class must remain


def test_reduce_to_theta_random_membership():
    rng = random.Random(17)
    for m in (-1, -5, 5):
        F = make_field(m)
        theta = enumerate_theta(F).divisors
        keys = {tuple(sorted((P.p, P.index, int(c)) for P, c in E.coeffs.items())) for E in theta}
        for _ in range(5):
            coeffs = {}
            for p in rng.sample([2, 3, 5, 7], k=2):
                for P in primes_over(F, p):
                    coeffs[P] = Fraction(rng.randint(-2, 2))
            div = ArithmeticDivisor(F, coeffs, (0.0, 0.0))
            x, E = reduce_to_theta(F, div)
            key = tuple(sorted((P.p, P.index, int(c)) for P, c in E.coeffs.items()))
            assert key in keys


def test_class_numbers_examples():
    assert class_group(make_field(-1))[0] == 1
    assert class_group(make_field(-5))[0] == 2
    assert class_group(make_field(-23))[0] == 3


def test_class_number_oracle_small():
    for m in (-1, -2, -3, -7, -11, -13, -15, -21, -30):
        F = make_field(m)
        assert class_group(F)[0] == reduced_form_class_number(F.disc), m


def test_class_group_bound():
    with pytest.raises(BoundExceeded):
        class_group(make_field(-501), bound=500)


def test_principal_generator_real_field():
    # generator search normalizes into the fundamental-unit strip
    F = make_field(2)
    P7 = primes_over(F, 7)[0]
    g = principal_generator(P7.ideal)
    assert g is not None
    assert principal_ideal(g) == P7.ideal
    F5 = make_field(5)
    P11 = primes_over(F5, 11)[0]
    g = principal_generator(P11.ideal)
    assert g is not None and abs(g.norm()) == 11


def test_principal_generator_negative():
    F = make_field(-5)
    P2 = primes_over(F, 2)[0]
    assert principal_generator(P2.ideal) is None
    assert principal_generator(P2.ideal**2) is not None


def _random_ideal(F, rng):
    while True:
        a = rng.randint(-6, 6)
        b = rng.randint(-6, 6)
        if a or b:
            break
    I = principal_ideal(F.element(a, b))
    for p in rng.sample([2, 3, 5], k=rng.randint(0, 2)):
        I = I * rng.choice(primes_over(F, p)).ideal
    return I


def test_enumeration_completeness_50_random():
    rng = random.Random(59)
    fields = [make_field(m) for m in (-1, 2, -5, 5, 13)]
    total_points = 0
    for _ in range(50):
        F = rng.choice(fields)
        I = _random_ideal(F, rng)
        root = math.sqrt(float(I.norm()))
        if F.is_real:
            radii = (root * rng.uniform(0.5, 2.5), root * rng.uniform(0.5, 2.5))
        else:
            r = root * rng.uniform(0.5, 2.0)
            radii = (r, r)
        fast = {(x.a, x.b) for x in enumerate_points(I, radii)}
        naive = {(x.a, x.b) for x in enumerate_points_naive(I, radii)}
        assert fast == naive
        total_points += len(fast)
    assert total_points > 50  # the boxes were not all empty
