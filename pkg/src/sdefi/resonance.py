"""Resonance lattices and non-integrability verdicts.

Given eigenvalue tuples from the linearization, this module enumerates
resonance vectors

    S = { k : <lam, k> = 0, k != 0 }

over the nonnegative lattice (analytic integrals) or the full integer
lattice (rational/Laurent integrals), bounded by an order K, and computes
exact ranks of what was found.  Two genuine certificates exist:

* half-plane: if the spectrum lies strictly inside an open half-plane
  through 0, no nonnegative resonance exists at any order, so an empty
  scan is complete, not just empty-up-to-K;
* positive-definiteness of the weak resonance function
  q(k) = <lam, k> + (1/2) sum_i |<mu^i, k>|^2, which is > 0 for all k
  whenever every lam_j is real and positive.

Everything else is honestly K-bounded, and every verdict carries an
epistemic status: `certified` or `bounded(K, tol)`.  Membership tests are
exact whenever the eigenvalues themselves are certified complex rationals.
"""

from __future__ import annotations

import cmath
from dataclasses import dataclass, field
from fractions import Fraction

from . import exactla
from .algebra import CRational
from .ito import SdeSystem
from .spectral import Eigenvalues, SpectralData, aligned_spectra, h1_check, linearization

HALF = Fraction(1, 2)

NO_STRONG_ANALYTIC = "NO_STRONG_ANALYTIC"
STRONG_COUNT_AT_MOST = "STRONG_COUNT_AT_MOST"
NO_WEAK_ANALYTIC = "NO_WEAK_ANALYTIC"
NO_WEAK_RATIONAL = "NO_WEAK_RATIONAL"
INCONCLUSIVE = "INCONCLUSIVE"

THM_STRONG_EXCLUSION = "nonresonant-spectrum-excludes-strong-integrals"
THM_STRONG_COUNT = "resonance-lattice-rank-bounds-strong-integrals"
THM_WEAK_FUNCTION = "weak-resonance-function-excludes-weak-integrals"
THM_QUADRATIC_NOISE = "nonresonant-drift-with-quadratic-noise-excludes-weak-integrals"
THM_QUADRATIC_NOISE_Z = "nonresonant-drift-with-quadratic-noise-excludes-rational-integrals"


# -- value normalization ---------------------------------------------------------

def _normalize_values(values) -> tuple[tuple[complex, ...], tuple[CRational | None, ...]]:
    if isinstance(values, Eigenvalues):
        return values.values, values.exact
    floats: list[complex] = []
    exacts: list[CRational | None] = []
    for v in values:
        if isinstance(v, (int, Fraction)):
            v = CRational(v)
        if isinstance(v, CRational):
            floats.append(complex(v))
            exacts.append(v)
        else:
            floats.append(complex(v))
            exacts.append(None)
    return tuple(floats), tuple(exacts)


# -- lattice enumeration -----------------------------------------------------------

def _bounded_nonneg(n: int, budget: int):
    if n == 1:
        for t in range(budget + 1):
            yield (t,)
        return
    for t in range(budget + 1):
        for rest in _bounded_nonneg(n - 1, budget - t):
            yield (t,) + rest


def _bounded_signed(n: int, budget: int):
    if n == 1:
        for t in range(-budget, budget + 1):
            yield (t,)
        return
    for t in range(-budget, budget + 1):
        for rest in _bounded_signed(n - 1, budget - abs(t)):
            yield (t,) + rest


def _l1(k) -> int:
    return sum(abs(t) for t in k)


def enumerate_resonances(values, K: int = 10, tol: float = 1e-9,
                         lattice: str = "zplus") -> list[tuple]:
    """All k with 0 < |k|_1 <= K and <values, k> = 0 (exact) or ~0 (within tol).

    lattice: "zplus" (nonnegative entries) or "z" (signed entries).
    The test is exact whenever every value carries an exact witness;
    otherwise |<lam,k>| <= tol * (1 + |k|_1 * max|lam_j|).
    """
    if K < 0:
        raise ValueError(f"window bound K must be nonnegative, got {K}")
    floats, exacts = _normalize_values(values)
    n = len(floats)
    if n == 0:
        return []
    if lattice not in ("zplus", "z"):
        raise ValueError(f"unknown lattice {lattice!r}")
    gen = _bounded_nonneg if lattice == "zplus" else _bounded_signed
    exact_mode = all(e is not None for e in exacts)
    maxmod = max(abs(v) for v in floats)
    out: list[tuple] = []
    for k in gen(n, K):
        if not any(k):
            continue
        if exact_mode:
            s = CRational(0)
            for e, ki in zip(exacts, k):
                if ki:
                    s = s + e * ki
            if s.is_zero():
                out.append(k)
        else:
            s = sum(v * ki for v, ki in zip(floats, k))
            if abs(s) <= tol * (1.0 + _l1(k) * maxmod):
                out.append(k)
    out.sort(key=lambda k: (_l1(k), k))
    return out


def lattice_rank(vectors) -> int:
    """Exact rank over Q of a set of integer vectors."""
    vecs = [list(v) for v in vectors]
    if not vecs:
        return 0
    return exactla.rank(exactla.as_matrix(vecs))


def halfplane_certificate(values) -> float | None:
    """Direction theta with Re(e^{i theta} lam_j) > eps for all j, or None.

    When it exists, 0 lies strictly outside the convex hull of the spectrum,
    so <lam, k> = 0 has no nonzero nonnegative solution at any order: an
    empty nonnegative scan is complete.  Margin eps = 1e-9 * max|lam_j|.
    """
    floats, _ = _normalize_values(values)
    if not floats:
        return None
    maxmod = max(abs(v) for v in floats)
    if maxmod == 0.0:
        return None
    eps = 1e-9 * maxmod
    if any(abs(v) <= eps for v in floats):
        return None
    angles = sorted(cmath.phase(v) for v in floats)
    n = len(angles)
    # largest circular gap between consecutive spectrum directions
    best_gap, best_idx = -1.0, 0
    for j in range(n):
        nxt = angles[(j + 1) % n] + (2 * cmath.pi if j == n - 1 else 0.0)
        gap = nxt - angles[j]
        if gap > best_gap:
            best_gap, best_idx = gap, j
    if best_gap <= cmath.pi:
        return None
    arc_start = angles[(best_idx + 1) % n] + (2 * cmath.pi if best_idx == n - 1 else 0.0)
    mid = arc_start + (2 * cmath.pi - best_gap) / 2.0
    theta = -mid
    margin = min((cmath.exp(1j * theta) * v).real for v in floats)
    return theta if margin > eps else None


# -- weak resonance function -------------------------------------------------------

@dataclass(frozen=True)
class WeakResonanceResult:
    violations: tuple[tuple, ...]
    certificate: str  # "positive-definite" | "bounded"
    exact: bool
    K: int
    tol: float


def weak_resonance_test(lam, mus, K: int = 10, tol: float = 1e-9) -> WeakResonanceResult:
    """Zeros of q(k) = <lam,k> + (1/2) sum_i |<mu^i,k>|^2 over 0 < |k|_1 <= K.

    lam and each mu^i must be aligned to a single shared eigenvector order.
    If every lam_j is real and positive, q > 0 everywhere and the scan is
    skipped (certificate "positive-definite").
    """
    lam_f, lam_e = _normalize_values(lam)
    mus_norm = [_normalize_values(m) for m in mus]
    n = len(lam_f)
    if any(len(mf) != n for mf, _ in mus_norm):
        raise ValueError("mu tuple length differs from lam")

    lam_exact_all = all(e is not None for e in lam_e)
    if lam_exact_all:
        positive = all(e.is_real() and e.re > 0 for e in lam_e)
    else:
        maxmod = max([abs(v) for v in lam_f], default=0.0)
        positive = all(abs(v.imag) <= tol * max(1.0, maxmod) and v.real > tol * max(1.0, maxmod)
                       for v in lam_f)
    if positive:
        return WeakResonanceResult((), "positive-definite", lam_exact_all, K, tol)

    exact_mode = lam_exact_all and all(all(e is not None for e in me) for _, me in mus_norm)
    max_lam = max([abs(v) for v in lam_f], default=0.0)
    max_mu = max([abs(v) for mf, _ in mus_norm for v in mf], default=0.0)
    violations: list[tuple] = []
    for k in _bounded_nonneg(n, K):
        if not any(k):
            continue
        if exact_mode:
            q = CRational(0)
            for e, ki in zip(lam_e, k):
                if ki:
                    q = q + e * ki
            for _, me in mus_norm:
                s = CRational(0)
                for e, ki in zip(me, k):
                    if ki:
                        s = s + e * ki
                q = q + CRational(s.abs2() * HALF)
            if q.is_zero():
                violations.append(k)
        else:
            q = sum(v * ki for v, ki in zip(lam_f, k))
            for mf, _ in mus_norm:
                s = sum(v * ki for v, ki in zip(mf, k))
                q += 0.5 * (s.real * s.real + s.imag * s.imag)
            scale = 1.0 + _l1(k) * max_lam + 0.5 * len(mus_norm) * (_l1(k) * max_mu) ** 2
            if abs(q) <= tol * scale:
                violations.append(k)
    violations.sort(key=lambda k: (_l1(k), k))
    return WeakResonanceResult(tuple(violations), "bounded", exact_mode, K, tol)


# -- report -------------------------------------------------------------------------

@dataclass(frozen=True)
class EpistemicStatus:
    certified: bool
    K: int | None = None
    tol: float | None = None

    def to_dict(self) -> dict:
        if self.certified:
            return {"kind": "certified"}
        return {"kind": "bounded", "K": self.K, "tol": self.tol}

    def __str__(self) -> str:
        return "certified" if self.certified else f"bounded(K={self.K}, tol={self.tol:g})"


def _certified() -> EpistemicStatus:
    return EpistemicStatus(True)


def _bounded(K: int, tol: float) -> EpistemicStatus:
    return EpistemicStatus(False, K, tol)


@dataclass(frozen=True)
class ScanResult:
    """One eigenvalue tuple scanned against one lattice."""

    label: str
    lattice: str
    eigenvalues: Eigenvalues
    vectors: tuple[tuple, ...]
    rank: int
    complete: bool       # True: the vector list is the whole lattice, not a K-window
    degenerate: bool     # all-zero tuple: everything resonates
    K: int
    tol: float

    def to_dict(self) -> dict:
        return {
            "label": self.label,
            "lattice": self.lattice,
            "eigenvalues": [[v.real, v.imag] for v in self.eigenvalues.values],
            "eigenvalues_exact": [str(e) if e is not None else None for e in self.eigenvalues.exact],
            "vectors": [list(k) for k in self.vectors],
            "rank": self.rank,
            "complete": self.complete,
            "degenerate": self.degenerate,
            "K": self.K,
            "tol": self.tol,
        }


@dataclass(frozen=True)
class Verdict:
    code: str
    theorem: str
    hypotheses_checked: tuple[str, ...]
    status: EpistemicStatus
    detail: str
    count_bound: int | None = None

    def to_dict(self) -> dict:
        d = {
            "code": self.code,
            "theorem": self.theorem,
            "hypotheses_checked": list(self.hypotheses_checked),
            "epistemic_status": self.status.to_dict(),
            "detail": self.detail,
        }
        if self.count_bound is not None:
            d["count_bound"] = self.count_bound
        return d


@dataclass
class ResonanceReport:
    dim: int
    noise_dim: int
    K: int
    tol: float
    hypotheses: dict
    scans: list[ScanResult] = field(default_factory=list)
    s_min: int | None = None
    s_min_certified: bool = False
    weak: WeakResonanceResult | None = None
    verdicts: list[Verdict] = field(default_factory=list)

    def verdict_codes(self) -> list[str]:
        return [v.code for v in self.verdicts]

    def find(self, code: str) -> Verdict | None:
        for v in self.verdicts:
            if v.code == code:
                return v
        return None

    def to_dict(self) -> dict:
        return {
            "dim": self.dim,
            "noise_dim": self.noise_dim,
            "K": self.K,
            "tol": self.tol,
            "hypotheses": dict(self.hypotheses),
            "scans": [s.to_dict() for s in self.scans],
            "s_min": self.s_min,
            "s_min_certified": self.s_min_certified,
            "weak_violations": [list(k) for k in self.weak.violations] if self.weak else None,
            "weak_certificate": self.weak.certificate if self.weak else None,
            "verdicts": [v.to_dict() for v in self.verdicts],
        }


def _scan(label: str, eig: Eigenvalues, lattice: str, K: int, tol: float) -> ScanResult:
    n = len(eig)
    all_zero = all(e is not None and e.is_zero() for e in eig.exact) or \
        all(v == 0 for v in eig.values)
    if all_zero:
        # everything resonates; sample the first shell, rank is exactly n
        if lattice == "zplus":
            sample = tuple(tuple(1 if j == i else 0 for j in range(n)) for i in range(n))
        else:
            sample = tuple(tuple(s if j == i else 0 for j in range(n))
                           for i in range(n) for s in (-1, 1))
        return ScanResult(label, lattice, eig, sample, n, True, True, K, tol)
    vectors = tuple(enumerate_resonances(eig, K, tol, lattice))
    complete = False
    if n == 1:
        complete = True  # k * lam = 0 with lam != 0 forces k = 0, any lattice
    elif lattice == "zplus" and not vectors and halfplane_certificate(eig) is not None:
        complete = True
    return ScanResult(label, lattice, eig, vectors, lattice_rank(vectors), complete, False, K, tol)


def nonintegrability_report(sys: SdeSystem, K: int = 10, tol: float = 1e-9,
                            include_z: bool = True) -> ResonanceReport:
    """Scan all linearization spectra and emit every verdict whose hypotheses verify.

    Raises NotApplicableError (via linearization) when the drift is not
    analytic-and-vanishing at the origin.
    """
    data = linearization(sys)
    h1 = h1_check(data)
    m = sys.noise_dim
    g_zero = all(data.g_zero_at_origin)
    g_h2 = all(data.g_higher_order)
    hypotheses = {
        "drift_vanishes_at_origin": True,
        "noise_vanishes_at_origin": g_zero,
        "noise_quadratic_order": g_h2,
        "simultaneously_diagonalizable": h1.verdict,
        "h1_witness": h1.witness,
    }
    report = ResonanceReport(dim=sys.dim, noise_dim=m, K=K, tol=tol, hypotheses=hypotheses)
    verdicts: list[Verdict] = []

    # strong side: spectra of A0 and every Dg_i over the nonnegative lattice
    strong_scans: list[ScanResult] = []
    if g_zero and data.lam is not None:
        tuples = [("A0", data.lam)] + [(f"Dg_{i + 1}", data.mu[i]) for i in range(m)]
        strong_hyp = ("f(0) = 0", "g_i(0) = 0 for every i")
        for label, eig in tuples:
            strong_scans.append(_scan(label, eig, "zplus", K, tol))
        report.scans.extend(strong_scans)
        report.s_min = min(s.rank for s in strong_scans)
        report.s_min_certified = all(s.complete for s in strong_scans)

        empty_certified = [s for s in strong_scans if s.complete and not s.vectors]
        empty_bounded = [s for s in strong_scans if not s.vectors]
        if empty_certified:
            s0 = empty_certified[0]
            verdicts.append(Verdict(
                NO_STRONG_ANALYTIC, THM_STRONG_EXCLUSION, strong_hyp, _certified(),
                f"spectrum of {s0.label} has no nonnegative resonance at any order "
                f"(half-plane certificate)"))
        elif empty_bounded:
            s0 = empty_bounded[0]
            verdicts.append(Verdict(
                NO_STRONG_ANALYTIC, THM_STRONG_EXCLUSION, strong_hyp, _bounded(K, tol),
                f"spectrum of {s0.label} has no nonnegative resonance with |k|_1 <= {K}"))
        count_status = _certified() if report.s_min_certified else _bounded(K, tol)
        verdicts.append(Verdict(
            STRONG_COUNT_AT_MOST, THM_STRONG_COUNT, strong_hyp, count_status,
            f"independent strong integrals number at most s_min = {report.s_min}",
            count_bound=report.s_min))

    # weak side, quadratic-noise route: spectrum of Df over both lattices
    if g_h2:
        quad_hyp = ("f(0) = 0", "g_i = O(|x|^2) for every i")
        scan_zp = _scan("Df", data.mu0, "zplus", K, tol)
        report.scans.append(scan_zp)
        if not scan_zp.vectors and not scan_zp.degenerate:
            status = _certified() if scan_zp.complete else _bounded(K, tol)
            how = "half-plane certificate" if scan_zp.complete else f"scan up to |k|_1 <= {K}"
            verdicts.append(Verdict(
                NO_WEAK_ANALYTIC, THM_QUADRATIC_NOISE, quad_hyp, status,
                f"drift spectrum carries no nonnegative resonance ({how})"))
        if include_z:
            scan_z = _scan("Df", data.mu0, "z", K, tol)
            report.scans.append(scan_z)
            if not scan_z.vectors and not scan_z.degenerate:
                status = _certified() if scan_z.complete else _bounded(K, tol)
                verdicts.append(Verdict(
                    NO_WEAK_RATIONAL, THM_QUADRATIC_NOISE_Z, quad_hyp, status,
                    "drift spectrum carries no signed integer resonance "
                    + ("at any order" if scan_z.complete else f"with |k|_1 <= {K}")))

    # weak side, resonance-function route: needs aligned spectra under H1
    if g_zero and m > 0 and h1.verdict == "holds":
        aligned = aligned_spectra(data)
        if aligned is not None:
            lam_a, mus_a, exact_a = aligned
            wr = weak_resonance_test(lam_a, mus_a, K, tol)
            report.weak = wr
            if not wr.violations:
                h3 = ("f(0) = 0", "g_i(0) = 0 for every i",
                      "Df(0), Dg_i(0) simultaneously diagonalizable")
                if wr.certificate == "positive-definite":
                    status, how = _certified(), "q(k) > 0 for every k (real positive spectrum)"
                else:
                    status, how = _bounded(K, tol), f"q(k) != 0 for 0 < |k|_1 <= {K}"
                verdicts.append(Verdict(NO_WEAK_ANALYTIC, THM_WEAK_FUNCTION, h3, status, how))

    if not verdicts:
        found = sum(len(s.vectors) for s in report.scans)
        nviol = len(report.weak.violations) if report.weak else 0
        verdicts.append(Verdict(
            INCONCLUSIVE, "", (), _bounded(K, tol),
            f"no criterion fired: {found} resonance vectors found, "
            f"{nviol} weak-resonance violations"))
    report.verdicts = verdicts
    return report
