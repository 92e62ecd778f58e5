"""Degree-bounded search for first integrals as exact nullspaces.

The generator (or the pathwise-conservation operators) is linear in the
candidate, so restricting candidates to a finite monomial window turns
"L Phi == 0" into an exact linear system over the complex rationals: one
column per candidate monomial, one row per monomial appearing in any image.
Kernel vectors are candidate integrals; every one is re-verified through
the symbolic checks before being returned, and constants are quotiented out.

A window [dmin, dmax] with dmin < 0 means Laurent candidates: the positive
part of an exponent vector may total at most max(dmax, 0), the negative
part at least min(dmin, 0), and the total degree must lie in the window.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import exactla
from .algebra import CRational, LaurentPoly, dot, gradient, grlex_key
from .ito import IntegralVerdict, SdeSystem, check_strong, check_weak, stratonovich_drift, weak_generator_apply
from .resonance import ResonanceReport


class WindowOverflowError(RuntimeError):
    """Generator image left the widened output window (cap exceeded)."""


@dataclass(frozen=True)
class MonomialBasis:
    dim: int
    dmin: int
    dmax: int
    monomials: tuple[tuple, ...]  # graded-lex ascending

    def __len__(self) -> int:
        return len(self.monomials)

    def index(self, e) -> int:
        return self.monomials.index(tuple(e))


def monomial_basis(dim: int, dmin: int, dmax: int) -> MonomialBasis:
    """All exponent vectors in the window, graded-lex ascending.

    The constant monomial is included iff 0 lies in [dmin, dmax].
    """
    if dmin > dmax:
        raise ValueError(f"empty window [{dmin}, {dmax}]")
    pos_budget = max(dmax, 0)
    neg_budget = -min(dmin, 0)

    def rec(idx: int, pos_left: int, neg_left: int):
        if idx == dim:
            yield ()
            return
        for t in range(-neg_left, pos_left + 1):
            p = pos_left - t if t > 0 else pos_left
            q = neg_left + t if t < 0 else neg_left
            for rest in rec(idx + 1, p, q):
                yield (t,) + rest

    monos = [e for e in rec(0, pos_budget, neg_budget) if dmin <= sum(e) <= dmax]
    monos.sort(key=grlex_key)
    return MonomialBasis(dim, dmin, dmax, tuple(monos))


@dataclass(frozen=True)
class OperatorMatrix:
    """Exact matrix of a conservation operator over monomial bases.

    Column j holds the coefficients of op(input_monomials[j]) over
    output_monomials (a graded-lex-sorted superset of everything appearing,
    including the inputs themselves, so degree-preserving operators come out
    literally diagonal).
    """

    kind: str
    input_monomials: tuple[tuple, ...]
    output_monomials: tuple[tuple, ...]
    entries: dict  # (row, col) -> CRational

    @property
    def shape(self) -> tuple[int, int]:
        return len(self.output_monomials), len(self.input_monomials)

    def to_dense(self) -> list:
        rows, cols = self.shape
        m = exactla.zeros(rows, cols)
        for (r, c), v in self.entries.items():
            m[r][c] = v
        return m

    def entry(self, out_e, in_e) -> CRational:
        r = self.output_monomials.index(tuple(out_e))
        c = self.input_monomials.index(tuple(in_e))
        return self.entries.get((r, c), CRational(0))


def _operator(sys: SdeSystem, kind: str, noise_index: int | None):
    if kind == "weak":
        return lambda p: weak_generator_apply(sys, p)
    if kind == "strong_drift":
        corrected = stratonovich_drift(sys)
        return lambda p: dot(gradient(p), corrected)
    if kind == "strong_diff":
        if noise_index is None or not 0 <= noise_index < sys.noise_dim:
            raise ValueError("strong_diff requires a valid noise_index")
        g = sys.diffusions[noise_index]
        return lambda p: dot(gradient(p), g)
    raise ValueError(f"unknown operator kind {kind!r}")


def operator_matrix(sys: SdeSystem, basis: MonomialBasis, kind: str,
                    noise_index: int | None = None, widen_cap: int = 10) -> OperatorMatrix:
    """Apply one conservation operator to every basis monomial, exactly.

    The output window is widened to absorb the degree growth of the
    coefficients; a single application always lands in a finite window, and
    widen_cap guards against a window more than `cap` degrees beyond the input.
    """
    if basis.dim != sys.dim:
        raise ValueError("basis dim != system dim")
    op = _operator(sys, kind, noise_index)
    images = [op(LaurentPoly.monomial(sys.dim, e)) for e in basis.monomials]
    out_set = set(basis.monomials)
    for img in images:
        out_set.update(img.support())
    degs = [sum(e) for e in out_set]
    if degs and (max(degs) > basis.dmax + widen_cap or min(degs) < basis.dmin - widen_cap):
        raise WindowOverflowError(
            f"operator image spans degrees [{min(degs)}, {max(degs)}], "
            f"more than {widen_cap} beyond window [{basis.dmin}, {basis.dmax}]")
    output = tuple(sorted(out_set, key=grlex_key))
    row_of = {e: i for i, e in enumerate(output)}
    entries: dict = {}
    for c, img in enumerate(images):
        for e, coeff in img.terms():
            entries[(row_of[e], c)] = coeff
    label = kind if noise_index is None else f"{kind}_{noise_index + 1}"
    return OperatorMatrix(label, basis.monomials, output, entries)


@dataclass(frozen=True)
class IntegralBasis:
    mode: str
    dmin: int
    dmax: int
    basis: tuple[LaurentPoly, ...]
    independence_rank: int
    verdicts: tuple[IntegralVerdict, ...]

    def __len__(self) -> int:
        return len(self.basis)


def find_first_integrals(sys: SdeSystem, mode: str, dmin: int, dmax: int,
                         widen_cap: int = 10) -> IntegralBasis:
    """All first integrals (mode "strong" or "weak") inside a monomial window.

    Returns a normalized exact kernel basis: leading graded-lex coefficient 1,
    constants quotiented out, every element re-verified symbolically.
    """
    if mode not in ("strong", "weak"):
        raise ValueError(f"unknown mode {mode!r}")
    full = monomial_basis(sys.dim, dmin, dmax)
    zero_exp = (0,) * sys.dim
    monos = tuple(e for e in full.monomials if e != zero_exp)
    basis = MonomialBasis(sys.dim, dmin, dmax, monos)
    if not monos:
        return IntegralBasis(mode, dmin, dmax, (), 0, ())

    if mode == "weak":
        mats = [operator_matrix(sys, basis, "weak", widen_cap=widen_cap)]
    else:
        mats = [operator_matrix(sys, basis, "strong_drift", widen_cap=widen_cap)]
        for i in range(sys.noise_dim):
            mats.append(operator_matrix(sys, basis, "strong_diff", noise_index=i,
                                        widen_cap=widen_cap))
    stacked: list = []
    for m in mats:
        stacked.extend(m.to_dense())

    if not stacked:  # no noise and somehow no rows: everything is conserved
        kernel = [[CRational(1 if i == j else 0) for j in range(len(monos))]
                  for i in range(len(monos))]
    else:
        kernel = exactla.nullspace(stacked)

    polys = []
    for vec in kernel:
        p = LaurentPoly(sys.dim, {e: c for e, c in zip(monos, vec) if not c.is_zero()})
        if p.is_zero:
            continue
        _, lead = p.leading_term()
        polys.append(p.scale(CRational(1) / lead))
    polys.sort(key=lambda p: grlex_key(p.leading_term()[0]))

    checker = check_weak if mode == "weak" else check_strong
    verdicts = []
    for p in polys:
        v = checker(sys, p)
        if not v.holds:
            raise AssertionError(
                f"internal error: kernel element failed exact re-verification: {p}")
        verdicts.append(v)

    rank = independence_rank(polys) if polys else 0
    return IntegralBasis(mode, dmin, dmax, tuple(polys), rank, tuple(verdicts))


def independence_rank(polys, trials: int = 5, seed: int = 0) -> int:
    """Functional independence: max numeric Jacobian rank at random rational points.

    Points have nonzero rational coordinates (hence pole-free for Laurent
    candidates); the rank uses an SVD cutoff of 1e-8 relative to the largest
    singular value, maximized over `trials` sample points.
    """
    polys = list(polys)
    if not polys:
        return 0
    dim = polys[0].dim
    grads = [[p.differentiate(j) for j in range(dim)] for p in polys]
    rng = random.Random(seed)
    best = 0
    found_sample = False
    for _ in range(trials):
        point = None
        for _attempt in range(100):
            cand = [Fraction(rng.choice([-1, 1]) * rng.randint(1, 9), rng.randint(1, 9))
                    for _ in range(dim)]
            if all(c != 0 for c in cand):
                point = cand
                break
        if point is None:
            continue
        found_sample = True
        jac = np.array([[complex(g.evaluate_exact(point)) for g in row] for row in grads])
        sv = np.linalg.svd(jac, compute_uv=False)
        if sv.size and sv[0] > 0:
            best = max(best, int(np.sum(sv > 1e-8 * sv[0])))
    if not found_sample:
        raise RuntimeError("no pole-free sample point found after 100 tries")
    return best


@dataclass(frozen=True)
class CountBoundVerdict:
    rank: int
    s_min: int
    consistent: bool
    certified: bool
    note: str

    def to_dict(self) -> dict:
        return {"rank": self.rank, "s_min": self.s_min, "consistent": self.consistent,
                "certified": self.certified, "note": self.note}


def count_bound_check(sys: SdeSystem, basis: IntegralBasis,
                      report: ResonanceReport) -> CountBoundVerdict:
    """Cross-check: found independent strong integrals must number <= s_min."""
    if report.s_min is None:
        raise ValueError("resonance report carries no strong-side lattice ranks")
    rank = basis.independence_rank
    consistent = rank <= report.s_min
    if not consistent:
        note = ("BOUND VIOLATED: more independent integrals than the lattice rank allows"
                + ("" if report.s_min_certified else " (report is K-bounded; ranks may be understated)"))
    else:
        note = "consistent" if report.s_min_certified else \
            "consistent (K-bounded report: s_min is a lower bound of the true rank)"
    return CountBoundVerdict(rank, report.s_min, consistent, report.s_min_certified, note)
