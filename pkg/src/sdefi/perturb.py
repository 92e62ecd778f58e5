"""Construction of a linear noise that destroys all low-degree weak integrals.

Given an ODE drift f with f(0) = 0 and invertible Jacobian A = Df(0), pick
0 < u < 1 and set

    P = Q diag(u^{a_1}, ..., u^{a_n}) Q^{-1},    a_1 = 1, a_k = 2 (a_1 + ... + a_{k-1}),

where Q diagonalizes A (columns = eigenvectors, order matched to the sorted
eigenvalue tuple).  The exponents grow as (1, 2, 6, 18, ...): a_{k+1} = 3 a_k
from the second term on, which keeps all pairwise sums distinct.  The plan is
accepted only if the degree-l obstruction

    E(l) = 2 <lam, l> + sum_i l_i (l_i - 1) mu_i^2 + sum_{i != j} l_i l_j mu_i mu_j

is nonzero for every 0 < |l|_1 <= L (mu_i = u^{a_i}); then the perturbed
system dX = f dt + (P X) dB has no polynomial weak integral through degree L.
If some E(l) vanishes, fresh u values from a seeded sequence are tried.

Verification is independent: the weak-integral search is run on an exactly
rational lift of P, so PASS means an exact kernel computation found nothing.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import exactla
from .algebra import CRational, LaurentPoly, VField, default_var_names
from .exactla import Matrix
from .ito import SdeSystem
from .spectral import Eigenvalues, eigenvalues, jacobian_at_origin, value_at_origin


class PerturbationError(RuntimeError):
    """No admissible construction (singular/defective Jacobian, or no good u)."""


def recurrence_exponents(n: int) -> tuple[int, ...]:
    """a_1 = 1, a_k = 2 * (a_1 + ... + a_{k-1}): 1, 2, 6, 18, 54, ..."""
    exps: list[int] = []
    for _ in range(n):
        exps.append(1 if not exps else 2 * sum(exps))
    return tuple(exps)


@dataclass(frozen=True)
class PerturbationPlan:
    u: Fraction
    exponents: tuple[int, ...]
    mu: tuple[Fraction, ...]
    eigenvalues: Eigenvalues          # drift spectrum, order matches Q columns
    Q: np.ndarray
    P: np.ndarray
    P_exact: Matrix                   # CRational lift actually used for verification
    exact_route: bool                 # True: P_exact is Q diag(mu) Q^-1 computed exactly
    residual_min: float               # min |E(l)| over the accepted scan
    L: int
    det_Df: CRational

    def noise_field(self) -> VField:
        """The linear diffusion x -> P x as an exact vector field."""
        n = len(self.P_exact)
        comps = []
        for i in range(n):
            terms = {}
            for j in range(n):
                if not self.P_exact[i][j].is_zero():
                    e = [0] * n
                    e[j] = 1
                    terms[tuple(e)] = self.P_exact[i][j]
            comps.append(LaurentPoly(n, terms))
        return VField(tuple(comps))

    def to_dict(self) -> dict:
        return {
            "u": str(self.u),
            "exponents": list(self.exponents),
            "mu": [str(m) for m in self.mu],
            "eigenvalues": [[v.real, v.imag] for v in self.eigenvalues.values],
            "eigenvalues_exact": [str(e) if e is not None else None
                                  for e in self.eigenvalues.exact],
            "Q": [[[z.real, z.imag] for z in row] for row in self.Q.tolist()],
            "P": [[[z.real, z.imag] for z in row] for row in self.P.tolist()],
            "P_exact": [[str(x) for x in row] for row in self.P_exact],
            "exact_route": self.exact_route,
            "residual_min": self.residual_min,
            "L": self.L,
            "det_Df": str(self.det_Df),
        }


def _as_u_fraction(u) -> Fraction:
    """Read u exactly; floats go through their decimal literal (0.37 -> 37/100)."""
    if isinstance(u, Fraction):
        f = u
    elif isinstance(u, float):
        f = Fraction(repr(u))
    else:
        f = Fraction(u)
    if not 0 < f < 1:
        raise PerturbationError(f"u must lie in (0, 1), got {f}")
    return f


def _obstruction_values(lam, mu: list[Fraction], L: int):
    """Yield (l, E(l), scale) over 0 < |l|_1 <= L; exact when lam is exact."""
    from .resonance import _bounded_nonneg  # same bounded enumeration

    n = len(mu)
    exact = all(e is not None for e in lam.exact)
    max_lam = max(abs(v) for v in lam.values)
    max_mu = max(float(m) for m in mu)
    for l in _bounded_nonneg(n, L):
        if not any(l):
            continue
        if exact:
            e_val = CRational(0)
            for lam_i, li in zip(lam.exact, l):
                e_val = e_val + lam_i * (2 * li)
            for i in range(n):
                e_val = e_val + CRational(mu[i] * mu[i] * (l[i] * (l[i] - 1)))
                for j in range(n):
                    if j != i:
                        e_val = e_val + CRational(mu[i] * mu[j] * (l[i] * l[j]))
            val = abs(complex(e_val))
            is_zero = e_val.is_zero()
        else:
            e_num = sum(2 * v * li for v, li in zip(lam.values, l))
            for i in range(n):
                e_num += float(mu[i] * mu[i]) * l[i] * (l[i] - 1)
                for j in range(n):
                    if j != i:
                        e_num += float(mu[i] * mu[j]) * l[i] * l[j]
            val = abs(e_num)
            is_zero = False
        l1 = sum(l)
        scale = 1.0 + 2 * l1 * max_lam + (l1 * max_mu) ** 2
        yield l, val, is_zero, scale


def _exact_eigvecs(a: Matrix, eig: Eigenvalues) -> Matrix | None:
    """Columns of Q as exact eigenvectors, or None if any eigenspace is not 1-dim."""
    n = len(a)
    cols: list[list[CRational]] = []
    for lam in eig.exact:
        shifted = [[a[i][j] - (lam if i == j else CRational(0)) for j in range(n)]
                   for i in range(n)]
        ns = exactla.nullspace(shifted)
        if len(ns) != 1:
            return None
        cols.append(ns[0])
    return [[cols[j][i] for j in range(n)] for i in range(n)]


def build_perturbation(drift: VField, u=Fraction(37, 100), L: int = 8,
                       seed: int = 0, max_retries: int = 20) -> PerturbationPlan:
    """Construct P for the drift, retrying fresh u values until E(l) != 0 through L."""
    n = drift.dim
    f0 = value_at_origin(drift)
    if any(not c.is_zero() for c in f0):
        raise PerturbationError("drift does not vanish at the origin")
    a = jacobian_at_origin(drift)
    det_a = exactla.det(a)
    if det_a.is_zero():
        raise PerturbationError("drift Jacobian at the origin is singular")
    eig = eigenvalues(a)
    scale = max(1.0, max(abs(v) for v in eig.values))
    for i in range(n):
        for j in range(i + 1, n):
            if abs(eig.values[i] - eig.values[j]) <= 1e-9 * scale:
                raise PerturbationError(
                    f"repeated eigenvalue near {eig.values[i]:.6g}: "
                    "defective/defect-prone Jacobians are not supported")

    exponents = recurrence_exponents(n)
    rng = random.Random(seed)
    candidates = [_as_u_fraction(u)]
    while len(candidates) < 1 + max_retries:
        c = Fraction(rng.randint(11, 989), 1000)
        if c not in candidates:
            candidates.append(c)

    chosen: Fraction | None = None
    chosen_mu: list[Fraction] | None = None
    residual_min = float("inf")
    last_bad = None
    for cand in candidates:
        mu = [cand ** k for k in exponents]
        ok = True
        worst = float("inf")
        for l, val, is_zero, scale_l in _obstruction_values(eig, mu, L):
            worst = min(worst, val)
            if is_zero or val <= 1e-12 * scale_l:
                ok = False
                last_bad = (cand, l)
                break
        if ok:
            chosen, chosen_mu, residual_min = cand, mu, worst
            break
    if chosen is None:
        raise PerturbationError(
            f"no admissible u in {len(candidates)} tries; last failure u={last_bad[0]} "
            f"at l={last_bad[1]}")

    exact_route = eig.all_exact()
    q_exact = _exact_eigvecs(a, eig) if exact_route else None
    if q_exact is not None:
        lam_diag = [[CRational(m) if i == j else CRational(0)
                     for j in range(n)] for i, m in enumerate(chosen_mu)]
        p_exact = exactla.mat_mul(exactla.mat_mul(q_exact, lam_diag),
                                  exactla.inverse(q_exact))
        q_float = exactla.mat_to_complex(q_exact)
        p_float = exactla.mat_to_complex(p_exact)
        exact_route = True
    else:
        exact_route = False
        vals, vecs = np.linalg.eig(exactla.mat_to_complex(a))
        order: list[int] = []
        used: set[int] = set()
        for target in eig.values:
            j = min((jj for jj in range(n) if jj not in used),
                    key=lambda jj: abs(vals[jj] - target))
            order.append(j)
            used.add(j)
        q_float = vecs[:, order]
        p_float = q_float @ np.diag([float(m) for m in chosen_mu]) @ np.linalg.inv(q_float)
        p_exact = [[CRational(Fraction(z.real), Fraction(z.imag)) for z in row]
                   for row in p_float.tolist()]

    return PerturbationPlan(u=chosen, exponents=exponents, mu=tuple(chosen_mu),
                            eigenvalues=eig, Q=q_float, P=p_float, P_exact=p_exact,
                            exact_route=exact_route, residual_min=residual_min,
                            L=L, det_Df=det_a)


@dataclass(frozen=True)
class PerturbVerdict:
    passed: bool
    dmin: int
    dmax: int
    found: tuple[LaurentPoly, ...]

    def to_dict(self) -> dict:
        return {"passed": self.passed, "window": [self.dmin, self.dmax],
                "found": [str(p) for p in self.found]}


def verify_perturbation(drift: VField, plan: PerturbationPlan, D: int = 4) -> PerturbVerdict:
    """Exact weak-integral search over [1, D] on the perturbed system; PASS iff empty."""
    from .search import find_first_integrals

    sys = SdeSystem(drift=drift, diffusions=(plan.noise_field(),),
                    var_names=default_var_names(drift.dim))
    basis = find_first_integrals(sys, "weak", 1, D)
    return PerturbVerdict(passed=(len(basis) == 0), dmin=1, dmax=D, found=basis.basis)
