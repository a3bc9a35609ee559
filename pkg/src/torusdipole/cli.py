"""Command-line interface: ``torusdipole <command> ...``.

Exit codes: 0 success, 1 failed check or computation error, 2 usage error.
"""

from __future__ import annotations

import argparse
import csv
import logging
import math
import sys
from pathlib import Path

import numpy as np

from torusdipole import __version__
from torusdipole import analytics, integrals, sweep
from torusdipole.operators import BasisKind, BasisSpec, Geometry, assemble_hamiltonian, assemble_t3
from torusdipole.spectral import eigendecompose, expectations_t3, lambda_vectors

log = logging.getLogger("torusdipole")


class UsageError(Exception):
    pass


def _range(text: str) -> tuple[float, float, int]:
    parts = text.split(":")
    if len(parts) != 3:
        raise argparse.ArgumentTypeError(f"expected lo:hi:steps, got {text!r}")
    try:
        lo, hi, steps = float(parts[0]), float(parts[1]), int(parts[2])
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None
    if hi <= lo or steps < 2:
        raise argparse.ArgumentTypeError(f"range {text!r} needs hi > lo and steps >= 2")
    return lo, hi, steps


def _g(x: float) -> str:
    return f"{x:.12g}"


def _open_out(path: str | None):
    if path is None or path == "-":
        return sys.stdout, False
    Path(path).parent.mkdir(parents=True, exist_ok=True)
    return open(path, "w", newline=""), True


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------

def _iln2_adaptive(a: float, n: int) -> float:
    import scipy.integrate

    value, _ = scipy.integrate.quad(lambda t: math.cos(n * t) * math.log(a + math.cos(t)) ** 2, 0, 2 * math.pi,
                                    epsabs=1e-14, epsrel=1e-13, limit=500)
    return value / (2 * math.pi)


def cmd_integrals(args) -> int:
    kinds = {
        "In": (integrals.fourier_integral_In, integrals.In_quad),
        "Iln": (integrals.log_integral_Iln, integrals.Iln_quad),
        "Iln2": (integrals.log2_integral_Iln2, _iln2_adaptive),
        "K2": (lambda a, n: integrals.kernel_K2(n, a).imag, lambda a, n: integrals.K2_quad(n, a).imag),
    }
    closed, oracle = kinds[args.kind]
    writer = csv.writer(sys.stdout, lineterminator="\n")
    writer.writerow(["n", "closed_form", "oracle", "abs_diff"])
    for n in range(-args.n_max, args.n_max + 1):
        c = closed(args.a, n)
        if args.oracle:
            o = oracle(args.a, n)
            writer.writerow([n, _g(c), _g(o), _g(abs(c - o))])
        else:
            writer.writerow([n, _g(c), "", ""])
    return 0


def cmd_matrix(args) -> int:
    geometry = Geometry(args.a, L_over_R=args.L_over_R)
    basis = BasisSpec(args.m, args.n_max, BasisKind(args.basis))
    op = assemble_hamiltonian(geometry, basis, args.i) if args.operator == "h" else assemble_t3(geometry, basis, args.i)
    fh, close = _open_out(args.out)
    try:
        fh.write(f"# operator={args.operator} basis={args.basis} a={args.a!r} m={args.m} n_max={args.n_max} "
                 f"i={args.i!r} L_over_R={args.L_over_R!r}\n")
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["row", "col", "re", "im"])
        mat = np.asarray(op.entries, dtype=complex)
        for r in range(mat.shape[0]):
            for c in range(mat.shape[1]):
                writer.writerow([r, c, _g(mat[r, c].real), _g(mat[r, c].imag)])
    finally:
        if close:
            fh.close()
    return 0


def cmd_spectrum(args) -> int:
    geometry = Geometry(args.a, L_over_R=args.L_over_R)
    # the parity basis keeps zero-current degenerate pairs unmixed
    kind = BasisKind.PARITY if args.i == 0 else BasisKind.LAMBDA
    basis = BasisSpec(args.m, args.n_max, kind)
    if not 1 <= args.levels <= basis.dim:
        raise UsageError(f"--levels must lie in 1..{basis.dim}")
    sol = eigendecompose(assemble_hamiltonian(geometry, basis, args.i))
    t3 = expectations_t3(sol, assemble_t3(geometry, basis, args.i))
    fh, close = _open_out(args.out)
    try:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["eta", "energy", "t3"])
        for eta in range(args.levels):
            writer.writerow([eta, _g(sol.eigenvalues[eta]), _g(t3[eta])])
    finally:
        if close:
            fh.close()
    if args.coeffs:
        vecs = lambda_vectors(sol)
        with open(args.coeffs, "w", newline="") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(["eta", "n", "re", "im"])
            for eta in range(args.levels):
                for j, n in enumerate(range(-args.n_max, args.n_max + 1)):
                    v = complex(vecs[j, eta])
                    writer.writerow([eta, n, _g(v.real), _g(v.imag)])
    return 0


def cmd_perturbation(args) -> int:
    geometry = Geometry(args.a, L_over_R=args.L_over_R)
    lo, hi, steps = args.i_range
    writer = csv.writer(sys.stdout, lineterminator="\n")
    writer.writerow(["i", "A_I", "delta_I", "eps_I", "ratio", "alpha_plus", "alpha_minus", "theta_plus", "theta_minus"])
    for x in np.linspace(lo, hi, steps):
        p = analytics.exact_two_level_params(geometry, args.n, args.m, float(x))
        sol = analytics.two_level_solve(p.eps_I, p.delta_I)
        writer.writerow([_g(x), _g(p.A_I), _g(p.delta_I), _g(p.eps_I), _g(p.ratio), _g(sol.alpha_plus),
                         _g(sol.alpha_minus), _g(sol.theta_plus), _g(sol.theta_minus)])
    k = analytics.k_coefficients(args.a, args.n, args.m, args.L_over_R)
    sys.stdout.write("\n# summary (large-a forms)\n")
    writer.writerow(["k1", _g(k.k1)])
    writer.writerow(["k2", _g(k.k2)])
    writer.writerow(["k3", _g(k.k3)])
    if k.k3 < 0:
        writer.writerow(["x_d", _g(analytics.divergence_current(k))])
    else:
        i_max, r_max = analytics.peak_current_and_ratio(k)
        writer.writerow(["i_max", _g(i_max)])
        writer.writerow(["ratio_max", _g(r_max)])
    return 0


def cmd_sweep(args) -> int:
    config = sweep.parse_config(args.config)
    if args.out:
        config = sweep.replace(config, out=args.out)
    if args.dump_config:
        sys.stdout.write(sweep.dump_config(config))
        return 0
    result = sweep.run_sweep(config, jobs=args.jobs)
    paths = sweep.export_csv(result, config.out)
    for line in result.diagnostics:
        print(line, file=sys.stderr)
    print(f"wrote {len(paths)} files to {config.out}")
    return 1 if any(c.error for c in result.cells.values()) else 0


def cmd_verify(args) -> int:
    from torusdipole import checks

    selected = args.only or None
    results = checks.run_all(selected, jobs=args.jobs)
    for res in results:
        print(res.line())
    failed = [r for r in results if not r.passed]
    print(f"{len(results) - len(failed)}/{len(results)} criteria passed")
    return 1 if failed else 0


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="torusdipole", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    p.add_argument("-v", "--verbose", action="store_true", help="debug logging")
    p.add_argument("--dump-config", metavar="FILE", dest="dump_config_file", help="parse a sweep config, print the normalized form and exit")
    sub = p.add_subparsers(dest="command")

    s = sub.add_parser("integrals", help="tabulate an integral family against its oracle")
    s.add_argument("--a", type=float, required=True)
    s.add_argument("--n-max", type=int, required=True)
    s.add_argument("--kind", choices=["In", "Iln", "Iln2", "K2"], default="In",
                   help="K2 values are printed as their imaginary part")
    s.add_argument("--oracle", action="store_true", help="fill the oracle and abs_diff columns")
    s.set_defaults(func=cmd_integrals)

    def geometry_args(s):
        s.add_argument("--a", type=float, required=True)
        s.add_argument("--m", type=int, default=0)
        s.add_argument("--n-max", type=int, default=60)
        s.add_argument("--i", type=float, default=0.0, help="current in units of I_0")
        s.add_argument("--L-over-R", type=float, default=8.0)

    s = sub.add_parser("matrix", help="write an operator matrix as CSV")
    geometry_args(s)
    s.add_argument("--basis", choices=["lambda", "parity"], default="lambda")
    s.add_argument("--operator", choices=["h", "t3"], default="h")
    s.add_argument("--out", default="-")
    s.set_defaults(func=cmd_matrix)

    s = sub.add_parser("spectrum", help="lowest levels with dipole expectations")
    geometry_args(s)
    s.add_argument("--levels", type=int, default=11)
    s.add_argument("--out", default="-")
    s.add_argument("--coeffs", metavar="PATH", help="also write Lambda-basis coefficients")
    s.set_defaults(func=cmd_spectrum)

    s = sub.add_parser("perturbation", help="two-level model of the (+n, -n) pair")
    s.add_argument("--a", type=float, required=True)
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--m", type=int, default=0)
    s.add_argument("--i-range", type=_range, default=(0.0, 1.0, 11), help="lo:hi:steps")
    s.add_argument("--L-over-R", type=float, default=8.0)
    s.set_defaults(func=cmd_perturbation)

    s = sub.add_parser("sweep", help="current sweep over (a, m) cells")
    s.add_argument("--config", required=True)
    s.add_argument("--out")
    s.add_argument("--jobs", type=int, default=1)
    s.add_argument("--dump-config", action="store_true", help="print the normalized config and exit")
    s.set_defaults(func=cmd_sweep)

    s = sub.add_parser("verify", help="run the acceptance checks and print a pass/fail report")
    s.add_argument("--only", type=int, nargs="*", help="criterion numbers to run")
    s.add_argument("--jobs", type=int, default=1)
    s.set_defaults(func=cmd_verify)
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        if args.dump_config_file:
            sys.stdout.write(sweep.dump_config(sweep.parse_config(args.dump_config_file)))
            return 0
        if args.command is None:
            parser.print_usage(sys.stderr)
            return 2
        return args.func(args)
    except (UsageError, sweep.ConfigError, integrals.DomainError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (ValueError, ArithmeticError, OSError, integrals.QuadratureError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
