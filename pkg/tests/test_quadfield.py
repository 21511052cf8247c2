import math
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from arithcurve.errors import DegenerateM, NotPrime, NotSquarefree, ZeroElement
from arithcurve.quadfield import (
    FractionalIdeal,
    abs_embed,
    factor_rational_prime,
    make_field,
    primes_over,
    principal_ideal,
    support_primes,
    valuation,
)

from oracles import trace_form_discriminant

FIELDS = [make_field(m) for m in (-1, 2, -5, 5, 13, -3, -7, 3)]


@pytest.mark.parametrize(
    "m,disc,r1,r2",
    [(-1, -4, 0, 1), (5, 5, 2, 0), (2, 8, 2, 0), (-5, -20, 0, 1), (13, 13, 2, 0)],
)
def test_make_field_invariants(m, disc, r1, r2):
    F = make_field(m)
    assert (F.disc, F.r1, F.r2) == (disc, r1, r2)
    assert F.r1 + 2 * F.r2 == 2
    assert trace_form_discriminant(F) == disc


def test_omega_descriptor():
    assert make_field(5).omega_desc == "(1+sqrt(5))/2"
    assert make_field(2).omega_desc == "sqrt(2)"


def test_make_field_rejections():
    with pytest.raises(DegenerateM):
        make_field(0)
    with pytest.raises(DegenerateM):
        make_field(1)
    for bad in (4, 8, 12, -4, 18):
        with pytest.raises(NotSquarefree):
            make_field(bad)


def test_factor_two_in_gaussian_integers():
    F = make_field(-1)
    [(P, e)] = factor_rational_prime(F, 2)
    assert P.kind == "ramified" and e == 2 and P.residue_norm == 2
    assert P.ideal == FractionalIdeal.from_elements(F, [F.element(1, 1)])
    assert P.ideal**2 == principal_ideal(F.element(2))


def test_factor_five_in_gaussian_integers():
    F = make_field(-1)
    factors = factor_rational_prime(F, 5)
    assert [P.kind for P, _ in factors] == ["split", "split"]
    assert all(P.residue_norm == 5 for P, _ in factors)
    prod = factors[0][0].ideal * factors[1][0].ideal
    assert prod == principal_ideal(F.element(5))


def test_factor_three_in_gaussian_integers():
    F = make_field(-1)
    [(P, e)] = factor_rational_prime(F, 3)
    assert P.kind == "inert" and P.residue_norm == 9 and e == 1


def test_factor_rejects_composites():
    with pytest.raises(NotPrime):
        factor_rational_prime(make_field(-1), 6)


def test_kind_matches_kronecker_symbol():
    for F in FIELDS:
        for p in (2, 3, 5, 7, 11, 13):
            kinds = {P.kind for P in primes_over(F, p)}
            if F.disc % p == 0:
                assert kinds == {"ramified"}
            elif p == 2:
                assert kinds == ({"split"} if F.disc % 8 == 1 else {"inert"})
            else:
                symbol = pow(F.disc % p, (p - 1) // 2, p)
                assert kinds == ({"split"} if symbol == 1 else {"inert"})


def test_valuation_examples():
    F = make_field(-1)
    P2 = primes_over(F, 2)[0]
    assert valuation(P2, F.element(1, 1)) == 1
    assert valuation(P2, F.element(1)) == 0
    assert valuation(P2, F.element(2)) == 2
    assert valuation(P2, F.element(Fraction(1, 2))) == -2


def test_abs_embed_examples():
    F = make_field(-1)
    v = abs_embed(F, F.element(1, 1))
    assert v[0] == pytest.approx(math.sqrt(2), abs=1e-14)
    assert v[0] == v[1]
    G = make_field(2)
    w = abs_embed(G, G.element(1, 1))
    assert w[0] == pytest.approx(1 + math.sqrt(2), abs=1e-14)
    assert w[1] == pytest.approx(math.sqrt(2) - 1, abs=1e-14)
    assert abs_embed(G, G.one()) == (1.0, 1.0)


def test_abs_embed_rejects_zero():
    F = make_field(2)
    with pytest.raises(ZeroElement):
        abs_embed(F, F.element(0))


def _random_element(F, rng, span=9):
    while True:
        a = rng.randint(-span, span)
        b = rng.randint(-span, span)
        if a or b:
            return F.element(a, b)


def test_product_of_norms_200_random():
    rng = random.Random(1)
    for _ in range(200):
        F = rng.choice(FIELDS)
        x = _random_element(F, rng)
        prod = math.prod(abs_embed(F, x))
        absn = abs(float(x.norm()))
        assert abs(prod - absn) / absn < 1e-10


@settings(max_examples=60, deadline=None)
@given(
    m=st.sampled_from([-1, 2, -5, 5]),
    ax=st.integers(-9, 9),
    bx=st.integers(-9, 9),
    ay=st.integers(-9, 9),
    by=st.integers(-9, 9),
)
def test_valuation_additivity(m, ax, bx, ay, by):
    F = make_field(m)
    x = F.element(ax, bx)
    y = F.element(ay, by)
    if x.is_zero() or y.is_zero():
        return
    for p in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47):
        for P in primes_over(F, p):
            assert valuation(P, x * y) == valuation(P, x) + valuation(P, y)


def test_principal_ideal_reconstruction_exact():
    rng = random.Random(7)
    for _ in range(40):
        F = rng.choice(FIELDS)
        x = _random_element(F, rng)
        if rng.random() < 0.4:
            x = x * Fraction(1, rng.randint(1, 6))
        recon = FractionalIdeal.unit_ideal(F)
        for P in support_primes(x):
            recon = recon * P.ideal ** valuation(P, x)
        assert recon == principal_ideal(x)


def test_ideal_norm_multiplicative():
    rng = random.Random(3)
    for _ in range(60):
        F = rng.choice(FIELDS)
        I = principal_ideal(_random_element(F, rng, 6))
        J = principal_ideal(_random_element(F, rng, 6))
        assert (I * J).norm() == I.norm() * J.norm()


def test_ideal_inverse():
    rng = random.Random(5)
    for _ in range(30):
        F = rng.choice(FIELDS)
        I = principal_ideal(_random_element(F, rng, 6))
        assert I * I.inverse() == FractionalIdeal.unit_ideal(F)


def test_norm_valuation_consistency():
    # sum over P of ord_P(x) log N(P) = log |N(x)|
    rng = random.Random(11)
    for _ in range(40):
        F = rng.choice(FIELDS)
        x = _random_element(F, rng)
        total = sum(
            valuation(P, x) * math.log(P.residue_norm) for P in support_primes(x)
        )
        assert total == pytest.approx(math.log(abs(float(x.norm()))), abs=1e-10)


def test_hnf_invariants():
    rng = random.Random(13)
    for _ in range(40):
        F = rng.choice(FIELDS)
        I = principal_ideal(_random_element(F, rng, 6)) * rng.choice(
            [P.ideal for P in primes_over(F, rng.choice([2, 3, 5]))]
        )
        assert I.a > 0 and I.d > 0 and 0 <= I.b < I.a
        mat = I.hnf_matrix()
        assert mat[1][0] == 0
