"""Linearization, characteristic polynomials, eigenvalue certification, H1."""

import random
from fractions import Fraction

import pytest

from sdefi import systems
from sdefi.algebra import CRational, LaurentPoly, VField
from sdefi import exactla
from sdefi.exactla import as_matrix, char_poly, det, nullspace, poly_eval, rank, rref
from sdefi.ito import SdeSystem, stratonovich_drift
from sdefi.spectral import (
    NotApplicableError,
    aligned_spectra,
    eigenvalues,
    h1_check,
    jacobian_at_origin,
    linearization,
    roots,
)


# -- oracle: det(xI - A) via cofactor expansion over the polynomial ring -------------


def charpoly_oracle(m):
    """Characteristic polynomial computed symbolically, no Faddeev-LeVerrier."""
    n = len(m)
    x = LaurentPoly.variable(1, 0)
    entries = [[x - LaurentPoly.const(1, m[i][j]) if i == j
                else -LaurentPoly.const(1, m[i][j]) for j in range(n)] for i in range(n)]

    def poly_det(rows, cols):
        if len(rows) == 1:
            return entries[rows[0]][cols[0]]
        acc = LaurentPoly.zero(1)
        r0 = rows[0]
        for k, c in enumerate(cols):
            minor = poly_det(rows[1:], cols[:k] + cols[k + 1:])
            term = entries[r0][c] * minor
            acc = acc + (term if k % 2 == 0 else -term)
        return acc

    p = poly_det(list(range(n)), list(range(n)))
    return [p.coeff([k]) for k in range(n + 1)]


def rand_matrix(rng, n):
    return as_matrix([[Fraction(rng.randint(-4, 4), rng.randint(1, 3))
                       for _ in range(n)] for _ in range(n)])


def test_char_poly_matches_cofactor_oracle():
    rng = random.Random(1729)
    for _ in range(30):
        n = rng.randint(1, 4)
        m = rand_matrix(rng, n)
        assert char_poly(m) == charpoly_oracle(m)


def test_char_poly_constant_term_is_signed_det():
    rng = random.Random(13)
    for _ in range(10):
        n = rng.randint(1, 4)
        m = rand_matrix(rng, n)
        p = char_poly(m)
        sign = CRational(1 if n % 2 == 0 else -1)
        assert p[0] == sign * det(m)
        assert p[n] == CRational(1)  # monic


# -- exact linear algebra invariants -------------------------------------------------


def test_rref_nullspace_rank():
    rng = random.Random(87)
    for _ in range(25):
        rows, cols = rng.randint(1, 5), rng.randint(1, 5)
        m = [[CRational(Fraction(rng.randint(-3, 3), rng.randint(1, 3)))
              for _ in range(cols)] for _ in range(rows)]
        r = rank(m)
        ns = nullspace(m)
        assert len(ns) == cols - r
        for v in ns:
            image = [sum((m[i][j] * v[j] for j in range(cols)), CRational(0))
                     for i in range(rows)]
            assert all(x.is_zero() for x in image)
        rr, pivots = rref(m)
        assert len(pivots) == r


def test_inverse_round_trip():
    rng = random.Random(5150)
    hits = 0
    while hits < 10:
        m = rand_matrix(rng, rng.randint(1, 4))
        if det(m).is_zero():
            continue
        inv = exactla.inverse(m)
        assert exactla.mat_eq(exactla.mat_mul(m, inv), exactla.identity(len(m)))
        hits += 1


# -- the worked three-species linearization -------------------------------------------


EX2_NOISE_JAC = [[1, -2, 0], [0, 2, -1], [-1, 0, 1]]


def test_noise_jacobian_char_poly_frozen():
    m = as_matrix(EX2_NOISE_JAC)
    # det(xI - A) = x^3 - 4x^2 + 5x = x (x^2 - 4x + 5), ascending coefficients
    assert char_poly(m) == [CRational(0), CRational(5), CRational(-4), CRational(1)]


def test_noise_jacobian_eigenvalues_with_exact_zero():
    eig = eigenvalues(as_matrix(EX2_NOISE_JAC))
    vals = sorted(eig.values, key=lambda z: (z.real, z.imag))
    assert abs(vals[0]) < 1e-12
    assert abs(vals[1] - (2 - 1j)) < 1e-10
    assert abs(vals[2] - (2 + 1j)) < 1e-10
    # zero root comes from exact stripping, complex pair from rationalization
    assert eig.all_exact()
    zero_witness = eig.exact[[abs(v) < 1e-12 for v in eig.values].index(True)]
    assert zero_witness is not None and zero_witness.is_zero()


def test_corrected_linearization_matrix():
    sys = systems.cyclic_exchange(a=2, b=3)
    data = linearization(sys)
    # A0 = Df(0) - (1/2) Dg(0)^2, entry by entry for a=2, b=3
    expect = [
        [Fraction(3, 2), Fraction(3), Fraction(-1)],
        [Fraction(-1, 2), Fraction(1), Fraction(3, 2)],
        [Fraction(-1), Fraction(-4), Fraction(-1, 2)],
    ]
    for i in range(3):
        for j in range(3):
            assert data.A0[i][j] == CRational(expect[i][j])
    # columns sum to zero: the conserved total forces a zero eigenvalue
    for j in range(3):
        col = sum((data.A0[i][j] for i in range(3)), CRational(0))
        assert col.is_zero()


def test_corrected_matrix_matches_drift_correction_jacobian():
    # A0 must equal the Jacobian at 0 of the Stratonovich-corrected drift
    for sys in (systems.cyclic_exchange(), systems.gbm(), systems.lotka_volterra()):
        data = linearization(sys)
        jac = jacobian_at_origin(stratonovich_drift(sys))
        assert exactla.mat_eq(data.A0, jac)


def test_eigenvalue_sum_and_product_invariants():
    rng = random.Random(404)
    for _ in range(15):
        n = rng.randint(1, 4)
        m = rand_matrix(rng, n)
        eig = eigenvalues(m)
        tr = complex(exactla.trace(m))
        assert abs(sum(eig.values) - tr) < 1e-8 * (1 + abs(tr))
        d = complex(det(m))
        prod = 1 + 0j
        for v in eig.values:
            prod *= v
        assert abs(prod - d) < 1e-8 * (1 + abs(d))


def test_repeated_roots_multiset():
    # (x - 1)^2 (x + 2), ascending: -2 ... expand: (x^2-2x+1)(x+2) = x^3 - 3x + 2
    p = [CRational(2), CRational(-3), CRational(0), CRational(1)]
    eig = roots(p)
    vals = sorted(v.real for v in eig.values)
    assert abs(vals[0] + 2) < 1e-10
    assert abs(vals[1] - 1) < 1e-10 and abs(vals[2] - 1) < 1e-10
    assert eig.all_exact()


def test_linearization_requires_vanishing_analytic_drift():
    with pytest.raises(NotApplicableError):
        linearization(systems.two_body())  # Laurent drift: pole at the origin
    names = ("x1",)
    affine = SdeSystem(VField((LaurentPoly(1, {(0,): 1, (1,): 1}),)), (), names)
    with pytest.raises(NotApplicableError):
        linearization(affine)  # f(0) != 0


# -- simultaneous diagonalizability ----------------------------------------------------


def _linear_system(a_rows, g_rows_list):
    n = len(a_rows)
    names = tuple(f"x{i+1}" for i in range(n))

    def field(rows):
        comps = []
        for i in range(n):
            terms = {}
            for j in range(n):
                if rows[i][j]:
                    e = [0] * n
                    e[j] = 1
                    terms[tuple(e)] = Fraction(rows[i][j])
            comps.append(LaurentPoly(n, terms))
        return VField(tuple(comps))

    return SdeSystem(field(a_rows), tuple(field(g) for g in g_rows_list), names)


def test_h1_holds_for_commuting_diagonalizable_pair():
    sys = _linear_system([[1, 0], [0, -2]], [[[3, 0], [0, 5]]])
    assert h1_check(linearization(sys)).verdict == "holds"
    # same non-diagonal matrix twice commutes with itself
    sys2 = systems.coupled_exchange_linear()
    assert h1_check(linearization(sys2)).verdict == "holds"


def test_h1_fails_on_noncommuting_or_nilpotent():
    noncomm = _linear_system([[0, 1], [0, 0]], [])  # nilpotent drift Jacobian
    st = h1_check(linearization(noncomm))
    assert st.verdict == "fails"
    sysc = systems.cyclic_exchange()
    st2 = h1_check(linearization(sysc))
    assert st2.verdict == "fails"
    assert st2.witness  # names the failing commutator or matrix


def test_commutator_oracle():
    # brute-force [A, B] for the fixture h1 accepts
    a = as_matrix([[1, 0], [0, -2]])
    b = as_matrix([[3, 0], [0, 5]])
    comm = exactla.mat_sub(exactla.mat_mul(a, b), exactla.mat_mul(b, a))
    assert exactla.is_zero_matrix(comm)


# -- aligned spectra for the weak resonance function -----------------------------------


def test_aligned_spectra_diagonal_exact():
    sys = systems.lotka_volterra()  # Df(0) = diag(1, 2), quadratic noise
    data = linearization(sys)
    out = aligned_spectra(data)
    assert out is not None
    lam, mus, exact = out
    assert exact
    got = sorted((complex(e) for e in lam.exact if e is not None),
                 key=lambda z: (z.real, z.imag))
    assert got == [1 + 0j, 2 + 0j]
    for mu in mus:
        assert all(e is not None and e.is_zero() for e in mu.exact)


def test_aligned_spectra_numeric_pairing():
    # A = [[0,1],[1,0]] drives both drift and noise; on a shared eigenvector,
    # corrected eigenvalue lam = mu0 - mu^2/2 must hold pairwise.
    sys = systems.coupled_exchange_linear()
    data = linearization(sys)
    out = aligned_spectra(data)
    assert out is not None
    lam, mus, exact = out
    mu = mus[0]
    for lam_j, mu_j in zip(lam.values, mu.values):
        assert abs(lam_j - (mu_j - 0.5 * mu_j ** 2)) < 1e-8
