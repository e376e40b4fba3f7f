"""Command-line front end.

Every subcommand prints a short human-readable report and can also write the
same results as JSON (``--json``) or flattened CSV (``--csv``); file writes
are atomic (temp file + rename).  The JSON envelope always carries
``"schema": 1`` plus the command, its parameters, a results object, a
``status`` of ``"ok"`` or ``"fail"``, and a timestamp (the one field golden
files should ignore).

Exit codes: 0 success; 2 a certificate, tolerance, or fit-quality check
failed; 3 a capacity cap refused the requested size; 64 usage errors and
invalid parameter domains.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
import tempfile
from datetime import datetime, timezone
from fractions import Fraction
from typing import Any

import numpy as np
from scipy.special import zeta as _riemann_zeta

from zetakms import acceptance, action, arith, bc, boundary, cantor, gas, words
from zetakms.errors import (CapacityError, DomainError, FitQualityError,
                            WorkbenchError)

EXIT_OK = 0
EXIT_CHECK_FAILED = 2
EXIT_CAPACITY = 3
EXIT_USAGE = 64


class _Parser(argparse.ArgumentParser):
    """Argument parser whose usage errors exit with code 64."""

    def error(self, message: str) -> None:  # noqa: A003 - argparse API
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _fraction(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a fraction: {text!r}")


def _parse_word(text: str, g: int):
    """Parse a letter word (``a..z`` generators, ``A..Z`` inverses) against
    rank ``g``, converting grammar errors to `DomainError` (exit 64)."""
    try:
        return words.parse_word(text, g)
    except ValueError as exc:
        raise DomainError(str(exc))


def _int_list(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(part) for part in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a comma-separated int list:"
                                         f" {text!r}")


def _profile_args(profile: str) -> dict[str, Any]:
    """Representation kwargs for the tolerance profile."""
    if profile == "strict":
        return {"clip_threshold": 0.9, "strict": True}
    return {}


def _tail_scale(profile: str) -> float:
    return 0.5 if profile == "strict" else 1.0


def build_parser() -> _Parser:
    parser = _Parser(prog="zetakms",
                     description="numerical workbench for zeta-function"
                                 " quantum statistical mechanics")
    parser.add_argument("--json", metavar="PATH",
                        help="write the result envelope as JSON")
    parser.add_argument("--csv", metavar="PATH",
                        help="write flattened results as CSV")
    parser.add_argument("--profile", choices=("desk", "strict"),
                        default="desk",
                        help="tolerance profile: strict halves analytic"
                             " tails and escalates heavy clipping to errors")
    sub = parser.add_subparsers(dest="command", required=True,
                                parser_class=_Parser)

    p = sub.add_parser("arith", help="Dirichlet series against zeta ratios")
    p.add_argument("--identity", required=True,
                   choices=("liouville", "mobius", "abs-mobius"))
    p.add_argument("--beta", type=float, required=True)
    p.add_argument("--N", type=int, required=True)

    p = sub.add_parser("bc", help="Bost-Connes style representation checks")
    bc_sub = p.add_subparsers(dest="bc_command", required=True,
                              parser_class=_Parser)
    q = bc_sub.add_parser("gibbs", help="Gibbs state of a group element,"
                                        " two routes")
    q.add_argument("--r", type=_fraction, required=True)
    q.add_argument("--beta", type=float, required=True)
    q.add_argument("--N", type=int, required=True)
    q = bc_sub.add_parser("kms", help="plain and twisted KMS residuals")
    q.add_argument("--n", type=int, required=True)
    q.add_argument("--beta", type=float, required=True)
    q.add_argument("--N", type=int, required=True)
    q.add_argument("--r", type=_fraction, default=None,
                   help="optional group twist on the right factor")
    q = bc_sub.add_parser("certificate",
                          help="twisted commutator norms across sizes")
    q.add_argument("--n", type=int, required=True)
    q.add_argument("--sizes", type=_int_list, default=(100, 1000, 10000))

    p = sub.add_parser("gas", help="supersymmetric squarefree gas")
    gas_sub = p.add_subparsers(dest="gas_command", required=True,
                               parser_class=_Parser)
    q = gas_sub.add_parser("relations", help="exact isometry relations")
    q.add_argument("--N", type=int, required=True)
    q.add_argument("--max-gen", dest="n_max", type=int, default=30)
    q = gas_sub.add_parser("witten", help="graded partition function")
    q.add_argument("--beta", type=float, required=True)
    q.add_argument("--N", type=int, required=True)
    q = gas_sub.add_parser("certificate",
                           help="twisted commutator norms across sizes")
    q.add_argument("--n", type=int, required=True)
    q.add_argument("--sizes", type=_int_list, default=(100, 1000, 10000))

    p = sub.add_parser("cantor", help="tree-boundary spectral triple")
    c_sub = p.add_subparsers(dest="cantor_command", required=True,
                             parser_class=_Parser)
    q = c_sub.add_parser("zeta", help="truncated vs closed-form zeta")
    q.add_argument("--g", type=int, required=True)
    q.add_argument("--depth", type=int, required=True)
    q.add_argument("--s", type=float, required=True)
    q = c_sub.add_parser("gibbs", help="Gibbs state vs zeta quotient")
    q.add_argument("--g", type=int, required=True)
    q.add_argument("--depth", type=int, required=True)
    q.add_argument("--beta", type=float, required=True)
    q.add_argument("--word", type=str, required=True)
    q = c_sub.add_parser("grading", help="commutant and grading scan")
    q.add_argument("--g", type=int, required=True)
    q.add_argument("--depth", type=int, required=True)
    q.add_argument("--no-scan", action="store_true")

    p = sub.add_parser("boundary", help="boundary crossed product")
    b_sub = p.add_subparsers(dest="boundary_command", required=True,
                             parser_class=_Parser)
    q = b_sub.add_parser("kms", help="Patterson-Sullivan KMS residual")
    q.add_argument("--g", type=int, default=2)
    q.add_argument("--beta", type=float, default=None,
                   help="default: the critical log(2g-1)")
    q = b_sub.add_parser("evolution", help="dual-route time evolution")
    q.add_argument("--g", type=int, default=2)
    q.add_argument("--depth", type=int, default=4)
    q.add_argument("--cap", type=int, default=3)
    q.add_argument("--gamma", type=str, required=True)
    q.add_argument("--t", type=float, default=0.7)
    q = b_sub.add_parser("rn", help="mass-ratio vs busemann, exact")
    q.add_argument("--g", type=int, default=2)
    q.add_argument("--gamma", type=str, required=True)
    q.add_argument("--depth", type=int, required=True)
    q = b_sub.add_parser("type3", help="twisted commutator certificate")
    q.add_argument("--g", type=int, default=2)
    q.add_argument("--gamma", type=str, required=True)
    q.add_argument("--caps", type=_int_list, default=(1, 2, 3))
    q.add_argument("--mode", choices=("signed", "absolute"),
                   default="signed")

    p = sub.add_parser("action", help="spectral-action slope fit")
    p.add_argument("--system", choices=("bc_tilde", "cantor"), required=True)
    p.add_argument("--f", choices=("gaussian", "exp_abs", "signed_exp"),
                   default="gaussian")
    p.add_argument("--lam-min", type=float, required=True)
    p.add_argument("--lam-max", type=float, required=True)
    p.add_argument("--points", type=int, default=12)
    p.add_argument("--N", type=int, default=None)
    p.add_argument("--g", type=int, default=None)
    p.add_argument("--depth", type=int, default=None)

    p = sub.add_parser("suite", help="run the acceptance criteria")
    p.add_argument("--criteria", type=_int_list, default=None,
                   help="comma-separated subset, e.g. 1,4,9")
    return parser


def _cmd_arith(args) -> tuple[dict[str, Any], bool, list[str]]:
    table = arith.sieve(args.N)
    coeff = {"liouville": table.liouville,
             "mobius": table.mobius,
             "abs-mobius": table.squarefree}[args.identity]
    sv = arith.dirichlet_series(coeff.astype(np.float64), args.beta)
    z_b = float(_riemann_zeta(args.beta))
    z_2b = float(_riemann_zeta(2.0 * args.beta))
    ref = {"liouville": z_2b / z_b, "mobius": 1.0 / z_b,
           "abs-mobius": z_b / z_2b}[args.identity]
    tol = (_tail_scale(args.profile) * sv.tail_bound
           + acceptance.ROUNDOFF_FACTOR * (abs(sv.value) + abs(ref)))
    err = abs(sv.value - ref)
    ok = err <= tol
    results = {"identity": args.identity, "beta": args.beta, "N": args.N,
               "value": sv.value.real, "reference": ref, "error": err,
               "tolerance": tol, "tail_bound": sv.tail_bound, "passed": ok}
    lines = [f"{args.identity} beta={args.beta} N={args.N}:"
             f" value={sv.value.real:.10f} reference={ref:.10f}",
             f"  |error|={err:.3e} tolerance={tol:.3e}"
             f" -> {'PASS' if ok else 'FAIL'}"]
    return results, ok, lines


def _cmd_bc(args) -> tuple[dict[str, Any], bool, list[str]]:
    if args.bc_command == "gibbs":
        rep = bc.bc_representation(args.N, **_profile_args(args.profile))
        trace = bc.gibbs_state(bc.e(args.r), args.beta, rep)
        moebius = bc.gibbs_state_mobius_form(args.r, args.beta, rep)
        gap = abs(trace.value - moebius.value)
        tail = trace.tail_bound + moebius.tail_bound
        tol = tail + 64.0 * np.finfo(np.float64).eps * (
            abs(trace.value) + abs(moebius.value))
        ok = gap <= tol
        results = {"r": str(args.r), "beta": args.beta, "N": args.N,
                   "value": trace.value.real,
                   "tail_bound": tail,
                   "trace_route": trace.value.real,
                   "mobius_route": moebius.value.real,
                   "route_gap": gap, "tolerance": tol, "passed": ok}
        lines = [f"gibbs r={args.r} beta={args.beta}:"
                 f" trace={trace.value.real:.10f}"
                 f" mobius={moebius.value.real:.10f}",
                 f"  route gap={gap:.3e} -> {'PASS' if ok else 'FAIL'}"]
        return results, ok, lines
    if args.bc_command == "kms":
        rep = bc.bc_representation(args.N, **_profile_args(args.profile))
        b_mono = (bc.mu_star(args.n) if args.r is None
                  else bc.monomial(x=bc.e(args.r).coeffs, n=1, m=args.n))
        plain = bc.kms_residual(bc.mu(args.n), b_mono, args.beta, rep)
        twisted = bc.twisted_kms_residual(bc.mu(args.n), b_mono, args.beta,
                                          rep)
        ok = plain <= 1e-6 and twisted <= 1e-6
        results = {"n": args.n, "beta": args.beta, "N": args.N,
                   "r": None if args.r is None else str(args.r),
                   "plain_residual": plain, "twisted_residual": twisted,
                   "tolerance": 1e-6, "passed": ok}
        lines = [f"kms n={args.n} beta={args.beta}: plain={plain:.3e}"
                 f" twisted={twisted:.3e} -> {'PASS' if ok else 'FAIL'}"]
        return results, ok, lines
    cert = bc.twisted_commutator_certificate(args.n, args.sizes)
    ok = (cert.twisted_bounded and cert.untwisted_increasing
          and cert.lipschitz_increasing)
    results = {"n": args.n, "sizes": list(cert.sizes),
               "expected_twisted": cert.expected_twisted,
               "twisted_norms": list(cert.twisted_norms),
               "untwisted_norms": list(cert.untwisted_norms),
               "lipschitz_norms": list(cert.lipschitz_norms), "passed": ok}
    lines = [f"certificate n={args.n}: twisted={cert.twisted_norms}"
             f" (target log {args.n} = {cert.expected_twisted:.6f})",
             f"  untwisted={cert.untwisted_norms}"
             f" lipschitz={cert.lipschitz_norms}"
             f" -> {'PASS' if ok else 'FAIL'}"]
    return results, ok, lines


def _cmd_gas(args) -> tuple[dict[str, Any], bool, list[str]]:
    if args.gas_command == "relations":
        suite = gas.relation_suite(args.N, n_max=args.n_max)
        ok = suite.all_passed
        results = {"N": args.N, "n_max": args.n_max,
                   "checks": len(suite.checks),
                   "failures": [c.relation_id for c in suite.failures],
                   "passed": ok}
        lines = [f"relations N={args.N} n<={args.n_max}:"
                 f" {len(suite.checks)} checks,"
                 f" {len(suite.failures)} failures"
                 f" -> {'PASS' if ok else 'FAIL'}"]
        return results, ok, lines
    if args.gas_command == "witten":
        fb = gas.fermionic_basis(args.N)
        sv = gas.witten_index(args.beta, fb)
        ref = 1.0 / float(_riemann_zeta(args.beta))
        err = abs(sv.value - ref)
        tol = _tail_scale(args.profile) * sv.tail_bound + 1e-10
        ok = err <= tol
        results = {"beta": args.beta, "N": args.N, "value": sv.value.real,
                   "reference": ref, "error": err, "tolerance": tol,
                   "passed": ok}
        lines = [f"witten beta={args.beta} N={args.N}:"
                 f" value={sv.value.real:.10f} 1/zeta={ref:.10f}",
                 f"  |error|={err:.3e} tolerance={tol:.3e}"
                 f" -> {'PASS' if ok else 'FAIL'}"]
        return results, ok, lines
    cert = gas.gas_twisted_certificate(args.n, args.sizes)
    ok = cert.twisted_bounded and cert.lipschitz_increasing
    results = {"n": args.n, "sizes": list(cert.sizes),
               "twisted_norms": list(cert.twisted_norms),
               "untwisted_norms": list(cert.untwisted_norms),
               "lipschitz_norms": list(cert.lipschitz_norms), "passed": ok}
    lines = [f"gas certificate n={args.n}: twisted={cert.twisted_norms}"
             f" -> {'PASS' if ok else 'FAIL'}"]
    return results, ok, lines


def _cmd_cantor(args) -> tuple[dict[str, Any], bool, list[str]]:
    if args.cantor_command == "zeta":
        sv = cantor.dirac_zeta(args.s, args.g, args.depth)
        closed = cantor.dirac_zeta_closed_form(args.s, args.g)
        err = abs(sv.value - closed)
        tol = max(_tail_scale(args.profile) * sv.tail_bound, 1e-14)
        ok = err <= tol
        results = {"g": args.g, "depth": args.depth, "s": args.s,
                   "truncated": sv.value.real, "closed_form": closed.real,
                   "error": err, "tail_bound": sv.tail_bound,
                   "abscissa": cantor.zeta_abscissa(args.g),
                   "residue_at_abscissa": cantor.residue_at_abscissa(args.g),
                   "passed": ok}
        lines = [f"zeta g={args.g} depth={args.depth} s={args.s}:"
                 f" truncated={sv.value.real:.12f}"
                 f" closed={closed.real:.12f}",
                 f"  |error|={err:.3e} tail={sv.tail_bound:.3e}"
                 f" -> {'PASS' if ok else 'FAIL'}"]
        return results, ok, lines
    if args.cantor_command == "gibbs":
        word = _parse_word(args.word, args.g)
        tree = cantor.build_filtration(args.g, args.depth)
        basis = cantor.gram_schmidt_basis(tree)
        a = cantor.indicator(word, tree)
        rep = cantor.gibbs_equals_zeta(a, args.beta, basis)
        ok = rep.residual <= 1e-10
        results = {"g": args.g, "depth": args.depth, "beta": args.beta,
                   "word": words.format_word(word),
                   "eigenbasis_route": rep.eigenbasis_value.real,
                   "zeta_route": rep.zeta_quotient_value.real,
                   "residual": rep.residual, "passed": ok}
        lines = [f"gibbs word={words.format_word(word)}"
                 f" beta={args.beta}: eigen={rep.eigenbasis_value.real:.12f}"
                 f" zeta={rep.zeta_quotient_value.real:.12f}",
                 f"  residual={rep.residual:.3e}"
                 f" -> {'PASS' if ok else 'FAIL'}"]
        return results, ok, lines
    rep = cantor.grading_obstruction_check(args.g, args.depth,
                                           scan=not args.no_scan)
    ok = rep.commutant_matches and rep.obstruction_holds
    results = {"g": args.g, "depth": args.depth,
               "commutant_dim": rep.commutant_dim,
               "expected_commutant_dim": rep.expected_commutant_dim,
               "candidates_scanned": rep.candidates_scanned,
               "min_anticommutator_norm": rep.min_anticommutator_norm,
               "passed": ok}
    lines = [f"grading g={args.g} depth={args.depth}:"
             f" commutant={rep.commutant_dim}"
             f" (expected {rep.expected_commutant_dim})",
             f"  scanned={rep.candidates_scanned}"
             f" min anticommutator norm={rep.min_anticommutator_norm}"
             f" -> {'PASS' if ok else 'FAIL'}"]
    return results, ok, lines


def _cmd_boundary(args) -> tuple[dict[str, Any], bool, list[str]]:
    if args.boundary_command == "kms":
        delta = math.log(2 * args.g - 1)
        beta = delta if args.beta is None else args.beta
        a = boundary.unitary_monomial((0,), args.g)
        b = boundary.unitary_monomial((1,), args.g)
        res = boundary.ps_kms_residual(a, b, beta)
        at_critical = abs(beta - delta) < 1e-12
        ok = res <= 1e-10 if at_critical else res > 1e-3
        results = {"g": args.g, "beta": beta, "critical_beta": delta,
                   "residual": res, "at_critical": at_critical,
                   "passed": ok}
        lines = [f"kms g={args.g} beta={beta:.6f}"
                 f" (critical {delta:.6f}): residual={res:.3e}"
                 f" -> {'PASS' if ok else 'FAIL'}"]
        return results, ok, lines
    if args.boundary_command == "evolution":
        gamma = _parse_word(args.gamma, args.g)
        space = boundary.BoundarySpace(g=args.g, depth=args.depth,
                                       group_cap=args.cap)
        res = boundary.time_evolution_residual(
            boundary.unitary_monomial(gamma, args.g), args.t, space)
        ok = res <= 1e-10
        results = {"g": args.g, "depth": args.depth, "cap": args.cap,
                   "gamma": words.format_word(gamma), "t": args.t,
                   "residual": res, "passed": ok}
        lines = [f"evolution gamma={words.format_word(gamma)}"
                 f" t={args.t}: residual={res:.3e}"
                 f" -> {'PASS' if ok else 'FAIL'}"]
        return results, ok, lines
    if args.boundary_command == "rn":
        gamma = _parse_word(args.gamma, args.g)
        dev = boundary.rn_equals_busemann(gamma, args.depth, args.g)
        ok = dev == 0
        results = {"g": args.g, "gamma": words.format_word(gamma),
                   "depth": args.depth, "max_deviation": str(dev),
                   "passed": ok}
        lines = [f"rn gamma={words.format_word(gamma)}"
                 f" depth={args.depth}: exact deviation={dev}"
                 f" -> {'PASS' if ok else 'FAIL'}"]
        return results, ok, lines
    gamma = _parse_word(args.gamma, args.g)
    cert = boundary.type3_triple_certificate(gamma, args.caps, args.g,
                                             dirac_mode=args.mode)
    ok = (cert.twisted_bounded and cert.twisted_constant
          and cert.parity_is_homomorphism)
    results = {"g": args.g, "gamma": words.format_word(gamma),
               "caps": list(cert.group_caps), "dirac_mode": cert.dirac_mode,
               "twisted_norms": list(cert.twisted_norms),
               "untwisted_norms": list(cert.untwisted_norms),
               "untwisted_increasing": cert.untwisted_increasing,
               "passed": ok}
    lines = [f"type3 gamma={words.format_word(gamma)}"
             f" mode={cert.dirac_mode}: twisted={cert.twisted_norms}"
             f" plain={cert.untwisted_norms}"
             f" -> {'PASS' if ok else 'FAIL'}"]
    return results, ok, lines


def _cmd_action(args) -> tuple[dict[str, Any], bool, list[str]]:
    f = {"gaussian": action.gaussian, "exp_abs": action.exp_abs,
         "signed_exp": action.signed_exp}[args.f]()
    grid = np.geomspace(args.lam_min, args.lam_max, args.points)
    rep = action.asymptotic_slope(args.system, f, grid, N=args.N, g=args.g,
                                  depth=args.depth)
    ok = (rep.expected_dimension is None
          or abs(rep.slope - rep.expected_dimension) <= 0.02)
    results = {"system": args.system, "f": args.f,
               "lambda_min": args.lam_min, "lambda_max": args.lam_max,
               "points": args.points, "slope": rep.slope,
               "r_squared": rep.r_squared, "coefficient": rep.coefficient,
               "expected_dimension": rep.expected_dimension,
               "expected_coefficient": rep.expected_coefficient,
               "oscillation_period": rep.oscillation_period,
               "harmonic_amplitudes": list(rep.harmonic_amplitudes),
               "passed": ok}
    lines = [f"slope {args.system} f={args.f}: slope={rep.slope:.4f}"
             f" (expected {rep.expected_dimension})"
             f" r2={rep.r_squared:.6f}",
             f"  coefficient={rep.coefficient:.4f}"
             f" (predicted {rep.expected_coefficient:.4f})"
             f" -> {'PASS' if ok else 'FAIL'}"]
    return results, ok, lines


def _cmd_suite(args) -> tuple[dict[str, Any], bool, list[str]]:
    results = acceptance.run_all(args.criteria)
    ok = all(r.passed for r in results)
    lines = []
    for r in results:
        mark = "PASS" if r.passed else "FAIL"
        lines.append(f"criterion {r.index:2d} {mark}  {r.name}: {r.detail}")
    lines.append(f"suite: {sum(r.passed for r in results)}/{len(results)}"
                 f" criteria passed")
    payload = {"criteria": [
        {"index": r.index, "name": r.name, "passed": r.passed,
         "detail": r.detail,
         "checks": [{"label": c.label, "passed": c.passed, "info": c.info}
                    for c in r.checks]}
        for r in results], "passed": ok}
    return payload, ok, lines


_DISPATCH = {
    "arith": _cmd_arith,
    "bc": _cmd_bc,
    "gas": _cmd_gas,
    "cantor": _cmd_cantor,
    "boundary": _cmd_boundary,
    "action": _cmd_action,
    "suite": _cmd_suite,
}


def _atomic_write(path: str, text: str) -> None:
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".zetakms-")
    try:
        with os.fdopen(fd, "w") as handle:
            handle.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _flatten(prefix: str, value: Any, rows: list[tuple[str, str]]) -> None:
    if isinstance(value, dict):
        for key, item in value.items():
            _flatten(f"{prefix}.{key}" if prefix else str(key), item, rows)
    elif isinstance(value, (list, tuple)):
        for i, item in enumerate(value):
            _flatten(f"{prefix}[{i}]", item, rows)
    else:
        rows.append((prefix, "" if value is None else str(value)))


def _emit(args, envelope: dict[str, Any], lines: list[str]) -> None:
    for line in lines:
        print(line)
    if args.json:
        _atomic_write(args.json, json.dumps(envelope, indent=2,
                                            sort_keys=True) + "\n")
    if args.csv:
        rows: list[tuple[str, str]] = []
        _flatten("", envelope["results"], rows)
        buf = io.StringIO()
        writer = csv.writer(buf)
        writer.writerow(("key", "value"))
        writer.writerows(rows)
        _atomic_write(args.csv, buf.getvalue())


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        results, ok, lines = _DISPATCH[args.command](args)
    except CapacityError as exc:
        print(f"capacity: {exc}", file=sys.stderr)
        return EXIT_CAPACITY
    except DomainError as exc:
        print(f"invalid request: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except FitQualityError as exc:
        print(f"fit quality: {exc}", file=sys.stderr)
        return EXIT_CHECK_FAILED
    except WorkbenchError as exc:
        print(f"computation failed: {exc}", file=sys.stderr)
        return EXIT_CHECK_FAILED
    envelope = {
        "schema": 1,
        "command": args.command,
        "params": {k: v for k, v in sorted(vars(args).items())
                   if k not in ("json", "csv") and not callable(v)},
        "results": results,
        "status": "ok" if ok else "fail",
        "generated_at": datetime.now(timezone.utc).isoformat(),
    }
    envelope["params"] = _jsonable(envelope["params"])
    envelope["results"] = _jsonable(envelope["results"])
    _emit(args, envelope, lines)
    return EXIT_OK if ok else EXIT_CHECK_FAILED


def _jsonable(value: Any) -> Any:
    if isinstance(value, dict):
        return {str(k): _jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    if isinstance(value, Fraction):
        return str(value)
    if isinstance(value, np.bool_):
        return bool(value)
    if isinstance(value, (np.integer,)):
        return int(value)
    if isinstance(value, (np.floating,)):
        return float(value)
    if isinstance(value, complex):
        return {"re": value.real, "im": value.imag}
    return value


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
