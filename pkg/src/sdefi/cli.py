"""Command-line surface: system-file ingestion, dispatch, verdict reporting.

System files are JSON with exact rational coefficients:

    {
      "dim": 1, "noise_dim": 1, "var_names": ["x1"],
      "drift":     [ [ {"c": ["1/1", "0/1"], "e": [1]} ] ],
      "diffusion": [ [ [ {"c": ["1/1", "0/1"], "e": [1]} ] ] ]
    }

Each scalar component is a list of terms {c: [re, im], e: exponent vector};
coefficients must be integer-or-fraction strings ("1", "-3/2"); decimals are
rejected so every downstream identity test stays exact.  A builtin name from
`sdefi.systems` (e.g. "gbm") is accepted wherever a system file is expected.

Exit codes: 0 = analysis completed (verdicts live inside the report),
2 = input error, 3 = internal numeric failure.
"""

from __future__ import annotations

import argparse
import json
import os
import re
import sys as _sys
from fractions import Fraction
from pathlib import Path

from .algebra import (
    CRational,
    DimensionMismatch,
    LaurentPoly,
    PoleError,
    VField,
    to_text,
    parse_poly_text,
)
from .ito import ConstantCandidateError, IntegralVerdict, SdeSystem, check_strong, check_weak
from .mc import SimConfig, conservation_test, simulate_paths
from .perturb import PerturbationError, build_perturbation, verify_perturbation
from .resonance import nonintegrability_report
from .search import WindowOverflowError, count_bound_check, find_first_integrals
from .spectral import NotApplicableError, RootFindingError, h1_check, linearization
from . import systems as _builtin

_COEFF_STR_RE = re.compile(r"^[+-]?\d+(?:/\d+)?$")


class InputFormatError(ValueError):
    """A system/candidate file violates the input contract."""


# -- system (de)serialization ----------------------------------------------------


def _parse_coeff_pair(c, where: str) -> CRational:
    if (not isinstance(c, list)) or len(c) != 2 or not all(isinstance(s, str) for s in c):
        raise InputFormatError(f"{where}: c must be a [re, im] pair of strings, got {c!r}")
    parts = []
    for s in c:
        if not _COEFF_STR_RE.match(s.strip()):
            raise InputFormatError(
                f"{where}: coefficient {s!r} is not an exact rational "
                f"(write 1/2, not 0.5)")
        try:
            parts.append(Fraction(s.strip()))
        except ZeroDivisionError:
            raise InputFormatError(f"{where}: zero denominator in {s!r}") from None
    return CRational(parts[0], parts[1])


def _parse_component(terms, dim: int, where: str) -> LaurentPoly:
    if not isinstance(terms, list):
        raise InputFormatError(f"{where}: expected a list of terms")
    seen: dict[tuple, str] = {}
    parsed = []
    for t_idx, t in enumerate(terms):
        here = f"{where}, term {t_idx + 1}"
        if not isinstance(t, dict) or set(t) != {"c", "e"}:
            raise InputFormatError(f"{here}: each term is an object with exactly c and e")
        e = t["e"]
        if (not isinstance(e, list)) or len(e) != dim or \
                not all(isinstance(k, int) and not isinstance(k, bool) for k in e):
            raise InputFormatError(f"{here}: e must be a list of {dim} integers")
        key = tuple(e)
        if key in seen:
            raise InputFormatError(
                f"{here}: duplicate exponent vector {list(key)} (first at {seen[key]}); "
                f"merge the coefficients instead")
        seen[key] = here
        parsed.append((key, _parse_coeff_pair(t["c"], here)))
    return LaurentPoly(dim, parsed)


def parse_system_dict(d) -> SdeSystem:
    if not isinstance(d, dict):
        raise InputFormatError("top level must be a JSON object")
    required = {"dim", "noise_dim", "var_names", "drift", "diffusion"}
    if set(d) != required:
        missing = required - set(d)
        extra = set(d) - required
        bits = []
        if missing:
            bits.append(f"missing {sorted(missing)}")
        if extra:
            bits.append(f"unknown {sorted(extra)}")
        raise InputFormatError("system file keys: " + "; ".join(bits))
    dim, m = d["dim"], d["noise_dim"]
    if not isinstance(dim, int) or isinstance(dim, bool) or dim < 1:
        raise InputFormatError(f"dim must be a positive integer, got {dim!r}")
    if not isinstance(m, int) or isinstance(m, bool) or m < 0:
        raise InputFormatError(f"noise_dim must be a nonnegative integer, got {m!r}")
    names = d["var_names"]
    if (not isinstance(names, list)) or len(names) != dim or \
            not all(isinstance(s, str) and s.isidentifier() for s in names):
        raise InputFormatError(f"var_names must be {dim} identifier strings")
    if len(set(names)) != dim:
        raise InputFormatError("var_names must be distinct")
    drift = d["drift"]
    if not isinstance(drift, list) or len(drift) != dim:
        raise InputFormatError(f"drift must list {dim} components, got {len(drift) if isinstance(drift, list) else type(drift).__name__}")
    f = VField(tuple(_parse_component(c, dim, f"drift component {i + 1}")
                     for i, c in enumerate(drift)))
    diffusion = d["diffusion"]
    if not isinstance(diffusion, list) or len(diffusion) != m:
        raise InputFormatError(f"diffusion must list {m} noise fields")
    gs = []
    for gi, field in enumerate(diffusion):
        if not isinstance(field, list) or len(field) != dim:
            raise InputFormatError(f"diffusion field {gi + 1} must list {dim} components")
        gs.append(VField(tuple(_parse_component(c, dim, f"diffusion {gi + 1} component {i + 1}")
                               for i, c in enumerate(field))))
    return SdeSystem(f, tuple(gs), tuple(names))


def parse_system(path: str | Path) -> SdeSystem:
    text = Path(path).read_text(encoding="utf-8")
    try:
        d = json.loads(text)
    except json.JSONDecodeError as e:
        raise InputFormatError(f"{path}: malformed JSON: {e}") from None
    return parse_system_dict(d)


def _coeff_pair(c: CRational) -> list[str]:
    def s(q: Fraction) -> str:
        return f"{q.numerator}/{q.denominator}"

    return [s(c.re), s(c.im)]


def _component_terms(p: LaurentPoly) -> list[dict]:
    return [{"c": _coeff_pair(c), "e": list(e)} for e, c in p.terms()]


def serialize_system(sys: SdeSystem) -> dict:
    """Canonical dict form: terms ascending graded-lex, explicit denominators."""
    return {
        "dim": sys.dim,
        "noise_dim": sys.noise_dim,
        "var_names": list(sys.var_names),
        "drift": [_component_terms(p) for p in sys.drift],
        "diffusion": [[_component_terms(p) for p in g] for g in sys.diffusions],
    }


def load_system(arg: str) -> SdeSystem:
    """A path to a JSON system file, or the name of a builtin example."""
    if os.path.isfile(arg):
        return parse_system(arg)
    if arg in _builtin.REGISTRY:
        return _builtin.REGISTRY[arg]()
    raise InputFormatError(
        f"{arg!r} is neither a readable file nor a builtin system "
        f"(builtins: {', '.join(sorted(_builtin.REGISTRY))})")


def parse_candidate(spec: str, var_names) -> tuple[str, LaurentPoly]:
    """NAME=POLY inline text, bare POLY text, or a path to a file holding either."""
    text = spec
    if os.path.isfile(spec):
        text = Path(spec).read_text(encoding="utf-8").strip()
    name = "phi"
    if "=" in text:
        name, text = (part.strip() for part in text.split("=", 1))
        if not name.isidentifier():
            raise InputFormatError(f"candidate name {name!r} is not an identifier")
    try:
        poly = parse_poly_text(text, var_names)
    except ValueError as e:
        raise InputFormatError(f"candidate {spec!r}: {e}") from None
    return name, poly


# -- report rendering --------------------------------------------------------------


def _fmt(x: float) -> str:
    return f"{x:.6g}"


def _verdict_dict(name: str, v: IntegralVerdict, names) -> dict:
    return {
        "candidate": name,
        "mode": v.mode,
        "holds": v.holds,
        "residuals": {rn: to_text(rp, names) for rn, rp in v.residuals},
    }


def _verdict_text(name: str, v: IntegralVerdict, names) -> list[str]:
    out = [f"candidate {name}: {v.mode} first integral: {'YES' if v.holds else 'NO'}"]
    for rn, rp in v.residuals:
        out.append(f"  residual[{rn}] = {to_text(rp, names)}")
    return out


def _resonance_text(rep) -> list[str]:
    lines = [f"resonance scan: dim={rep.dim} noise={rep.noise_dim} K={rep.K} tol={rep.tol:g}"]
    lines.append("hypotheses:")
    for k, v in rep.hypotheses.items():
        lines.append(f"  {k}: {v}")
    if rep.scans:
        lines.append("scans:")
        for s in rep.scans:
            tag = "complete" if s.complete else f"|k|_1<={s.K}"
            extra = " (degenerate: all eigenvalues zero)" if s.degenerate else ""
            lines.append(f"  {s.label} [{s.lattice}] resonances={len(s.vectors)} "
                         f"rank={s.rank} [{tag}]{extra}")
    if rep.s_min is not None:
        kind = "certified" if rep.s_min_certified else "lower bound (K-window)"
        lines.append(f"s_min = {rep.s_min} ({kind})")
    if rep.weak is not None:
        if rep.weak.violations:
            ks = ", ".join(str(list(k)) for k in rep.weak.violations[:8])
            lines.append(f"weak-resonance roots: {ks}"
                         + (" ..." if len(rep.weak.violations) > 8 else ""))
        else:
            lines.append(f"weak-resonance function: no roots "
                         f"({rep.weak.certificate or 'window scan'})")
    lines.append("verdicts:")
    for v in rep.verdicts:
        head = f"  {v.code} [{v.status}]"
        if v.theorem:
            head += f" via {v.theorem}"
        lines.append(head)
        if v.hypotheses_checked:
            lines.append(f"    hypotheses: {'; '.join(v.hypotheses_checked)}")
        lines.append(f"    {v.detail}")
    return lines


def _basis_dict(basis, names) -> dict:
    return {
        "mode": basis.mode,
        "window": [basis.dmin, basis.dmax],
        "count": len(basis),
        "basis": [to_text(p, names) for p in basis.basis],
        "independence_rank": basis.independence_rank,
    }


def _basis_text(basis, names) -> list[str]:
    lines = [f"{basis.mode} search on window [{basis.dmin}, {basis.dmax}]: "
             f"{len(basis)} integral(s), independence rank {basis.independence_rank}"]
    for i, p in enumerate(basis.basis):
        lines.append(f"  [{i + 1}] {to_text(p, names)}")
    return lines


def _mat_strs(m) -> list[list[str]]:
    return [[str(x) for x in row] for row in m]


def _eig_dict(eig) -> dict:
    return {
        "values": [[v.real, v.imag] for v in eig.values],
        "exact": [str(e) if e is not None else None for e in eig.exact],
    }


def _linearization_dict(data, h1) -> dict:
    spectra = {"Df": _eig_dict(data.mu0)}
    for i, mu in enumerate(data.mu):
        if mu is not None:
            spectra[f"Dg_{i + 1}"] = _eig_dict(mu)
    if data.lam is not None:
        spectra["A0"] = _eig_dict(data.lam)
    return {
        "applicable": True,
        "A_f": _mat_strs(data.A_f),
        "A_g": [_mat_strs(m) if m is not None else None for m in data.A_g],
        "A0": _mat_strs(data.A0) if data.A0 is not None else None,
        "char_polys": {k: [str(c) for c in v] for k, v in data.char_polys.items()},
        "spectra": spectra,
        "noise_vanishes_at_origin": list(data.g_zero_at_origin),
        "noise_quadratic_order": list(data.g_higher_order),
        "h1": {"verdict": h1.verdict, "witness": h1.witness},
    }


def _print_report(report: dict, text_lines: list[str], output: str):
    if output == "json":
        print(json.dumps(report, indent=2))
    else:
        print("\n".join(text_lines))


# -- subcommands -------------------------------------------------------------------


def _cmd_check(args, mode: str) -> int:
    sys = load_system(args.system)
    name, phi = parse_candidate(args.candidate, sys.var_names)
    v = check_strong(sys, phi) if mode == "strong" else check_weak(sys, phi)
    _print_report(_verdict_dict(name, v, sys.var_names),
                  _verdict_text(name, v, sys.var_names), args.output)
    return 0


def _cmd_search(args) -> int:
    sys = load_system(args.system)
    if args.dmin > args.dmax:
        raise InputFormatError(f"--dmin {args.dmin} exceeds --dmax {args.dmax}")
    basis = find_first_integrals(sys, args.mode, args.dmin, args.dmax)
    _print_report(_basis_dict(basis, sys.var_names),
                  _basis_text(basis, sys.var_names), args.output)
    return 0


def _cmd_resonance(args) -> int:
    sys = load_system(args.system)
    rep = nonintegrability_report(sys, K=args.kbound, tol=args.tol,
                                  include_z=args.lattice == "both")
    _print_report(rep.to_dict(), _resonance_text(rep), args.output)
    return 0


def _cmd_analyze(args) -> int:
    sys = load_system(args.system)
    names = sys.var_names
    report: dict = {"system": serialize_system(sys)}
    lines: list[str] = [f"system: dim={sys.dim} noise={sys.noise_dim} "
                        f"vars={', '.join(names)}"]

    try:
        data = linearization(sys)
        h1 = h1_check(data)
        report["linearization"] = _linearization_dict(data, h1)
        lines.append(f"linearization at origin: ok (H1 {h1.verdict})")
    except NotApplicableError as e:
        report["linearization"] = {"applicable": False, "reason": str(e)}
        lines.append(f"linearization at origin: not applicable ({e})")

    if report["linearization"]["applicable"]:
        rep = nonintegrability_report(sys, K=args.kbound, tol=args.tol)
        report["resonance"] = rep.to_dict()
        lines.append("")
        lines.extend(_resonance_text(rep))
    else:
        rep = None
        report["resonance"] = {"applicable": False,
                               "reason": report["linearization"]["reason"]}

    report["search"] = {}
    lines.append("")
    for mode in ("strong", "weak"):
        basis = find_first_integrals(sys, mode, args.dmin, args.dmax)
        report["search"][mode] = _basis_dict(basis, names)
        lines.extend(_basis_text(basis, names))
        if mode == "strong" and rep is not None and rep.s_min is not None:
            cb = count_bound_check(sys, basis, rep)
            report["count_bound"] = cb.to_dict()
            lines.append(f"count bound: rank {cb.rank} <= s_min {cb.s_min}? "
                         f"{'yes' if cb.consistent else 'NO'} ({cb.note})")

    if args.candidate:
        report["candidates"] = []
        lines.append("")
        for spec in args.candidate:
            name, phi = parse_candidate(spec, names)
            for checker in (check_strong, check_weak):
                v = checker(sys, phi)
                report["candidates"].append(_verdict_dict(name, v, names))
                lines.extend(_verdict_text(name, v, names))

    if args.simulate:
        if args.seed is None:
            raise InputFormatError("--simulate needs --seed (runs must be reproducible)")
        x0 = _parse_x0(args.x0, sys.dim)
        cfg = SimConfig(x0=x0, h=args.step, T=args.horizon, N=args.paths,
                        seed=args.seed, R=args.radius, max_workers=_workers())
        ens = simulate_paths(sys, cfg)
        sim: dict = _ensemble_dict(ens)
        sim_lines = _ensemble_text(ens)
        if args.candidate:
            sim["candidates"] = []
            for spec in args.candidate:
                name, phi = parse_candidate(spec, names)
                rep_c = conservation_test(ens, phi, "weak")
                sim["candidates"].append({"candidate": name, **rep_c.to_dict()})
                sim_lines.append(_conservation_line(name, rep_c))
        report["simulation"] = sim
        lines.append("")
        lines.extend(sim_lines)

    _print_report(report, lines, args.output)
    return 0


def _cmd_perturb(args) -> int:
    sys = load_system(args.system)
    try:
        u = Fraction(args.u)
    except (ValueError, ZeroDivisionError):
        raise InputFormatError(f"--u {args.u!r} is not a rational in (0,1)") from None
    plan = build_perturbation(sys.drift, u=u, L=args.lbound, seed=args.seed)
    verdict = verify_perturbation(sys.drift, plan, D=args.degree)
    report = {"plan": plan.to_dict(), "verification": verdict.to_dict()}
    lines = [
        f"perturbation built for dim-{len(plan.exponents)} drift "
        f"(det Df(0) = {plan.det_Df})",
        f"  u = {plan.u}, exponents = {list(plan.exponents)}",
        f"  target noise spectrum mu = {[str(m) for m in plan.mu]}",
        f"  drift spectrum: " + ", ".join(
            str(e) if e is not None else f"{v.real:.6g}{v.imag:+.6g}i"
            for v, e in zip(plan.eigenvalues.values, plan.eigenvalues.exact)),
        f"  route: {'exact eigenvectors' if plan.exact_route else 'numeric eigenvectors, exact lift'}",
        f"  min |E(l)| over 0 < |l|_1 <= {plan.L}: {_fmt(plan.residual_min)}",
        f"verification: weak search on window [{verdict.dmin}, {verdict.dmax}] -> "
        + ("PASS (no weak integral survives)" if verdict.passed
           else f"FAIL ({len(verdict.found)} weak integral(s) survive)"),
    ]
    for p in verdict.found:
        lines.append(f"  survivor: {to_text(p, sys.var_names)}")
    _print_report(report, lines, args.output)
    return 0


def _parse_x0(arg: str | None, dim: int) -> tuple[float, ...]:
    if arg is None:
        return (1.0,) * dim
    try:
        vals = tuple(float(s) for s in arg.split(","))
    except ValueError:
        raise InputFormatError(f"--x0 {arg!r} must be comma-separated numbers") from None
    if len(vals) != dim:
        raise InputFormatError(f"--x0 needs {dim} coordinates, got {len(vals)}")
    return vals


def _workers() -> int:
    raw = os.environ.get("SDEFI_THREADS", "")
    if not raw:
        return 1
    try:
        return max(1, int(raw))
    except ValueError:
        raise InputFormatError(f"SDEFI_THREADS={raw!r} is not an integer") from None


def _ensemble_dict(ens) -> dict:
    import numpy as np

    cfg = ens.config
    keep = ~ens.excluded
    mean = (np.mean(ens.final[keep], axis=0).tolist() if keep.any()
            else [float("nan")] * ens.final.shape[1])
    return {
        "paths": cfg.N, "h": cfg.h, "T": cfg.t_end, "steps": cfg.n_steps,
        "seed": cfg.seed, "radius": cfg.R,
        "n_used": ens.n_used, "n_pole": ens.n_pole, "n_overflow": ens.n_overflow,
        "n_exited": int(ens.exited.sum()),
        "final_mean": mean,
    }


def _ensemble_text(ens) -> list[str]:
    d = _ensemble_dict(ens)
    return [
        f"simulated {d['paths']} paths, {d['steps']} steps of h={_fmt(d['h'])} "
        f"(T={_fmt(d['T'])}, seed={d['seed']})",
        f"  usable={d['n_used']} poles={d['n_pole']} overflow={d['n_overflow']} "
        f"exited={d['n_exited']}",
        f"  mean final state: [{', '.join(_fmt(v) for v in d['final_mean'])}]",
    ]


def _conservation_line(name: str, rep) -> str:
    if rep.mode == "weak":
        stat = (f"mean={_fmt(rep.mean)} phi0={_fmt(rep.phi0)} delta={_fmt(rep.delta)} "
                f"stderr={_fmt(rep.stderr)} threshold={_fmt(rep.threshold)}")
    else:
        stat = (f"max_dev={_fmt(rep.max_dev)} phi0={_fmt(rep.phi0)} "
                f"threshold={_fmt(rep.threshold)}")
    return (f"  candidate {name} [{rep.mode}] {stat} -> "
            f"{'PASS' if rep.passed else 'FAIL'}")


def _cmd_simulate(args) -> int:
    sys = load_system(args.system)
    x0 = _parse_x0(args.x0, sys.dim)
    cfg = SimConfig(x0=x0, h=args.step, T=args.horizon, N=args.paths,
                    seed=args.seed, R=args.radius, max_workers=_workers())
    ens = simulate_paths(sys, cfg)
    report = _ensemble_dict(ens)
    lines = _ensemble_text(ens)
    if args.candidate:
        report["candidates"] = []
        for spec in args.candidate:
            name, phi = parse_candidate(spec, sys.var_names)
            rep = conservation_test(ens, phi, args.mode)
            report["candidates"].append({"candidate": name, **rep.to_dict()})
            lines.append(_conservation_line(name, rep))
    _print_report(report, lines, args.output)
    return 0


# -- argument parsing ----------------------------------------------------------------


def _add_common(p: argparse.ArgumentParser):
    p.add_argument("system", help="system JSON file or builtin name")
    p.add_argument("--output", choices=("json", "text"), default="text")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="sdefi",
        description="Decide, certify, or refute strong/weak first integrals "
                    "of polynomial and Laurent SDE systems.")
    sub = ap.add_subparsers(dest="command", required=True)

    for mode in ("strong", "weak"):
        p = sub.add_parser(f"check-{mode}",
                           help=f"exact {mode}-conservation check of a candidate")
        _add_common(p)
        p.add_argument("--candidate", required=True,
                       help="polynomial text, NAME=POLY, or a file holding either")

    p = sub.add_parser("search", help="all first integrals inside a degree window")
    _add_common(p)
    p.add_argument("--mode", choices=("strong", "weak"), required=True)
    p.add_argument("--dmin", type=int, required=True)
    p.add_argument("--dmax", type=int, required=True)

    p = sub.add_parser("resonance", help="linearize and scan resonance lattices")
    _add_common(p)
    p.add_argument("--kbound", type=int, default=10)
    p.add_argument("--tol", type=float, default=1e-9)
    p.add_argument("--lattice", choices=("zplus", "both"), default="both",
                   help="'both' adds the signed-integer scan for rational/Laurent candidates")

    p = sub.add_parser("analyze",
                       help="combined report: linearization, resonance, bounded search, "
                            "candidate checks, optional simulation")
    _add_common(p)
    p.add_argument("--kbound", type=int, default=10)
    p.add_argument("--tol", type=float, default=1e-9)
    p.add_argument("--dmin", type=int, default=1)
    p.add_argument("--dmax", type=int, default=4)
    p.add_argument("--candidate", action="append", default=[],
                   help="NAME=POLY (repeatable)")
    p.add_argument("--simulate", action="store_true",
                   help="cross-check candidates by Monte Carlo (needs --seed)")
    p.add_argument("--paths", type=int, default=2000)
    p.add_argument("--step", type=float, default=1e-3)
    p.add_argument("--horizon", type=float, default=1.0)
    p.add_argument("--radius", type=float, default=1e6)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--x0", default=None, help="comma-separated start point (default all 1s)")

    p = sub.add_parser("perturb",
                       help="construct a linear noise destroying all weak integrals")
    _add_common(p)
    p.add_argument("--u", default="37/100", help="base ratio in (0,1), exact rational")
    p.add_argument("--lbound", type=int, default=8,
                   help="obstruction scan bound on |l|_1")
    p.add_argument("--degree", type=int, default=4,
                   help="verification window [1, degree] for the weak search")
    p.add_argument("--seed", type=int, default=0)

    p = sub.add_parser("simulate", help="Euler-Maruyama ensemble with frozen exits")
    _add_common(p)
    p.add_argument("--paths", type=int, default=10000)
    p.add_argument("--step", type=float, default=1e-3)
    p.add_argument("--horizon", type=float, default=1.0)
    p.add_argument("--radius", type=float, default=1e6)
    p.add_argument("--seed", type=int, required=True,
                   help="required: runs must be reproducible, no wall-clock default")
    p.add_argument("--x0", default=None, help="comma-separated start point (default all 1s)")
    p.add_argument("--candidate", action="append", default=[],
                   help="NAME=POLY to test along the ensemble (repeatable)")
    p.add_argument("--mode", choices=("weak", "strong"), default="weak",
                   help="conservation mode for --candidate checks")

    return ap


_DISPATCH = {
    "check-strong": lambda a: _cmd_check(a, "strong"),
    "check-weak": lambda a: _cmd_check(a, "weak"),
    "search": _cmd_search,
    "resonance": _cmd_resonance,
    "analyze": _cmd_analyze,
    "perturb": _cmd_perturb,
    "simulate": _cmd_simulate,
}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:  # argparse exits 2 on bad flags; keep main() int-valued
        return int(e.code or 0)
    try:
        return _DISPATCH[args.command](args)
    except (InputFormatError, NotApplicableError, ConstantCandidateError,
            DimensionMismatch, WindowOverflowError, OSError) as e:
        print(f"error: {e}", file=_sys.stderr)
        return 2
    except ValueError as e:
        print(f"error: {e}", file=_sys.stderr)
        return 2
    except (RootFindingError, PerturbationError, PoleError, ArithmeticError,
            AssertionError, RuntimeError) as e:
        print(f"internal failure: {e}", file=_sys.stderr)
        return 3


if __name__ == "__main__":
    _sys.exit(main())
