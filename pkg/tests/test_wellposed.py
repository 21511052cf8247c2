import math

import numpy as np
import pytest

from arithcurve.errors import QuadratureFailure
from arithcurve.wellposed import (
    GramSystem,
    fekete_limit,
    fubini_study,
    gram_matrix,
    radial_table_model,
    report_from_grams,
    sin_theta_profile,
    smallest_monomial_scan,
    sup_norm_monomial,
    wellposed_report,
)


def fs_diagonal(n, k):
    return math.factorial(k) * math.factorial(n - k) / math.factorial(n + 1)


def test_gram_normalization():
    G = gram_matrix(fubini_study(), 0)
    assert G.gram[0, 0] == pytest.approx(1.0, rel=1e-11)


def test_gram_beta_integral_example():
    G = gram_matrix(fubini_study(), 2)
    assert G.gram[1, 1] == pytest.approx(1 / 6, rel=1e-10)


def test_gram_off_diagonal_zero():
    G = gram_matrix(fubini_study(), 4)
    off = G.gram - np.diag(np.diag(G.gram))
    assert np.abs(off).max() == 0.0


def test_gram_diagonal_closed_form():
    model = fubini_study()
    for n in range(1, 13):
        G = gram_matrix(model, n)
        for k in range(n + 1):
            assert G.gram[k, k] == pytest.approx(fs_diagonal(n, k), rel=1e-9)


def test_gram_requires_degree_in_range():
    with pytest.raises(ValueError):
        gram_matrix(fubini_study(n_max=4), 5)


def test_model_mass_validation():
    with pytest.raises(ValueError):
        radial_table_model([(1.0, 0.0), (0.5, 0.0)], n_max=4)  # radii must increase
    # a density that does not integrate to one is rejected
    from arithcurve.wellposed import RadialModel

    with pytest.raises(ValueError):
        RadialModel(green=lambda r: 0.0, density=lambda r: 1.0 / (1 + r * r) ** 2 * 2)


def test_sin_theta_orthogonal_and_perturbed():
    G = gram_matrix(fubini_study(), 3)
    prof = sin_theta_profile(G)
    assert all(v == pytest.approx(1.0, abs=1e-12) for v in prof.values())
    hand = GramSystem(n=2, sigma_n=(0, 1), gram=np.array([[1.0, 0.5], [0.5, 1.0]]))
    prof2 = sin_theta_profile(hand)
    assert prof2[0] == pytest.approx(math.sqrt(3) / 2, rel=1e-12)
    singular = GramSystem(
        n=2, sigma_n=(0, 1), gram=np.array([[1.0, 1.0], [1.0, 1.0]])
    )
    prof3 = sin_theta_profile(singular)
    assert min(prof3.values()) == pytest.approx(0.0, abs=1e-6)


def test_wellposed_report_fubini_study():
    rep = wellposed_report(fubini_study(), range(1, 13))
    assert all(rep.basis_ok)
    assert all(v == 1 for v in rep.lattice_index)
    assert all(v == pytest.approx(1.0, abs=1e-10) for v in rep.min_sin_root)
    assert rep.conditions == {
        "basis": True,
        "integral_index": True,
        "volume_ratio": True,
    }
    assert "finite-n" in rep.note


def test_wellposed_report_radial_bump_still_orthogonal():
    from arithcurve.wellposed import RadialModel

    model = RadialModel(
        green=lambda r: math.log1p(r * r) + 0.3 * math.exp(-((r - 1.0) ** 2)),
        density=lambda r: (1.0 + r * r) ** -2,
        n_max=8,
        name="bumped",
    )
    rep = wellposed_report(model, range(1, 7))
    assert rep.conditions["volume_ratio"]
    assert all(v == pytest.approx(1.0, abs=1e-10) for v in rep.min_sin_root)


@pytest.mark.filterwarnings("ignore::scipy.integrate.IntegrationWarning")
def test_table_model_needs_relaxed_quadrature():
    # piecewise-linear profiles cannot reach 1e-11 split/joint agreement,
    # but pass with an explicitly relaxed tolerance
    rs = np.linspace(0.0, 60.0, 2001)
    table = [(float(r), math.log1p(r * r)) for r in rs]
    model = radial_table_model(table, n_max=4)
    with pytest.raises(QuadratureFailure):
        gram_matrix(model, 2)
    G = gram_matrix(model, 2, tol=1e-5)
    assert G.gram[1, 1] == pytest.approx(1 / 6, rel=1e-4)


def test_wellposed_report_flags_decaying_angles():
    # synthetic non-orthogonal Gram sequence with sin(theta) ~ e^(-c n)
    grams = []
    for n in range(1, 11):
        rho = math.sqrt(1.0 - math.exp(-2 * 0.8 * n))
        G = np.array([[1.0, rho], [rho, 1.0]])
        grams.append(GramSystem(n=n, sigma_n=(0, 1), gram=G))
    rep = report_from_grams(grams)
    assert not rep.conditions["volume_ratio"]
    assert rep.liminf_estimate < 0.7


def test_fekete_limit_powers():
    res = fekete_limit([2.0**n for n in range(1, 12)])
    assert res.limit == pytest.approx(2.0, rel=1e-12)
    assert not res.violations


def test_fekete_limit_flags_violation():
    seq = [2.0**n for n in range(1, 12)]
    seq[5] *= 10.0  # a_6 now violates a_6 <= a_3 * a_3
    res = fekete_limit(seq)
    assert any(n + m == 6 for n, m, _ in res.violations)


def test_fekete_min_monomial_square_limit():
    model = fubini_study()
    seq = [smallest_monomial_scan(model, n).integer_norm ** 2 for n in range(1, 21)]
    res = fekete_limit(seq)
    assert not res.violations
    assert res.limit == pytest.approx(0.5, abs=1e-9)  # attained at even n


def test_sup_norm_closed_form():
    model = fubini_study()
    for n in (2, 5, 9, 12):
        for k in range(n + 1):
            closed = math.sqrt(k**k * (n - k) ** (n - k) / n**n)
            assert sup_norm_monomial(model, n, k) == pytest.approx(closed, rel=1e-9)


def test_smallest_monomial_scan_examples():
    model = fubini_study()
    scan0 = smallest_monomial_scan(model, 0)
    assert scan0.k_star == 0 and scan0.integer_norm == 1.0
    scan2 = smallest_monomial_scan(model, 2)
    assert scan2.k_star == 1
    assert scan2.integer_norm == pytest.approx(0.5, rel=1e-10)
    scan3 = smallest_monomial_scan(model, 3)
    assert scan3.x_star == pytest.approx(1.5, abs=1e-6)
    assert scan3.real_norm == pytest.approx(2.0**-1.5, rel=1e-9)
    assert scan3.real_norm <= scan3.integer_norm


def test_norm_continuity_in_exponent():
    # modulus-of-continuity sampling on x -> |z^x| sup norm: Lipschitz on
    # interior boxes, h|log h| modulus at the endpoints
    model = fubini_study()
    n = 6
    xs = np.linspace(1.0, n - 1.0, 101)
    h = xs[1] - xs[0]
    logs = [math.log(sup_norm_monomial(model, n, x)) for x in xs]
    L = 0.5 * math.log(n - 1.0)  # max slope of the log norm on [1, n-1]
    assert np.abs(np.diff(logs)).max() <= L * h * 1.05
    for step in (0.1, 0.01, 0.001):
        gap = abs(math.log(sup_norm_monomial(model, n, step)))
        assert gap <= 0.5 * step * (abs(math.log(step)) + math.log(n) + 1.0) * 1.1
