"""Command-line driver: ``clusterent <command> [options]``.

Exit status 0 on success, 1 when a gradient certificate fails, 2 on usage
errors.
"""

import argparse
import csv
import sys

import numpy as np

from . import divergence, graphs, separable, thermal
from .tensor_core import DensityOp

FMT = "{:.9f}"


def _f(x):
    return FMT.format(x)


def _write_csv(path, header, rows):
    out = open(path, "w", newline="", encoding="utf-8") if path != "-" else sys.stdout
    try:
        w = csv.writer(out, lineterminator="\n")
        w.writerow(header)
        for r in rows:
            w.writerow([repr(float(x)) for x in r])
    finally:
        if out is not sys.stdout:
            out.close()


def _graph(args):
    return graphs.make_graph(args.graph)


def _print_certificate(cert):
    print(f"samples = {cert.samples} (seed {cert.seed})")
    print(f"min_gradient = {_f(cert.min_gradient)}")
    if cert.analytic_min is not None:
        print(f"max_overlap = {_f(cert.max_overlap)}")
        print(f"analytic_min = {_f(cert.analytic_min)}")
        print(f"closed_form_error = {cert.max_closed_form_error:.3e}")
    print("PASS" if cert.passed else "FAIL")
    return 0 if cert.passed else 1


def cmd_ree(args):
    g = _graph(args)
    e, cert = divergence.ree_pure_cluster(g, samples=args.samples, seed=args.seed, restarts=args.restarts)
    print(f"graph = {args.graph} (N={g.n})")
    print(f"E = {_f(e)}")
    print(f"predicted = {separable.predicted_entanglement(g)}")
    return _print_certificate(cert)


def cmd_sweep(args):
    g = _graph(args)
    grid = np.linspace(args.omega_min, args.omega_max, args.steps)
    rows = thermal.thermal_entanglement_curve(g, grid, J=args.J, k_B=args.kB, workers=args.threads)
    _write_csv(
        args.out,
        ["omega", "temperature", "entanglement_bits", "min_ppt_eig"],
        [(r.omega, r.temperature, r.entanglement_bits, r.min_ppt_eig) for r in rows],
    )
    return 0


def cmd_critical(args):
    cp = thermal.critical_temperature(args.J, args.kB)
    print(f"omega_c = {_f(cp.omega_c)}, T_c = {_f(cp.T_c)} (J={args.J:g}, kB={args.kB:g})")
    return 0


def _candidate(spec, g):
    if spec == "dephase":
        return separable.closest_separable_pure(g)
    ref = graphs.thermal_state(g, thermal.OMEGA_C)
    if spec == "thermal-critical":
        return ref
    if spec.startswith("mix:"):
        lam = float(spec[4:])
        if not 0.0 <= lam <= 1.0:
            raise ValueError("mixing weight must lie in [0, 1]")
        rho = separable.closest_separable_pure(g)
        return DensityOp((1 - lam) * rho.matrix + lam * ref.matrix, check_psd=False)
    raise ValueError(f"unknown candidate {spec!r}")


def cmd_gradient(args):
    g = _graph(args)
    if args.omega >= 1.0:
        sigma = graphs.cluster_state(g).projector()
    else:
        sigma = graphs.thermal_state(g, args.omega)
    rho = _candidate(args.candidate, g)
    cert = divergence.gradient_scan(sigma, rho, samples=args.samples, seed=args.seed, restarts=args.restarts)
    print(f"graph = {args.graph}, candidate = {args.candidate}, omega = {args.omega:g}")
    return _print_certificate(cert)


def cmd_overlap(args):
    g = _graph(args)
    value, prod = separable.max_product_overlap(
        graphs.cluster_state(g), restarts=args.restarts, seed=args.seed, workers=args.threads
    )
    print(f"max_overlap = {_f(value)}")
    print(f"predicted = {_f(separable.predicted_max_overlap(g))}")
    for q, (t, p) in enumerate(zip(prod.theta, prod.phi), 1):
        print(f"qubit {q}: theta = {_f(t)}, phi = {_f(p)}")
    return 0


def cmd_lambda_star(args):
    res = thermal.lambda_star(args.omega)
    print(f"omega = {_f(res.omega)}")
    print(f"lambda_star = {_f(res.lambda_star)}")
    print(f"objective_at_min = {_f(res.objective_at_min)}")
    print(f"formula_value = {_f(res.formula_value)}")
    if res.flat_interval is not None:
        lo, hi = res.flat_interval
        print(f"flat_interval = [{_f(lo)}, {_f(hi)}]")
    return 0


def cmd_surface(args):
    table = separable.overlap_surface(args.resolution)
    _write_csv(args.out, ["a", "b", "two_trace"], table)
    return 0


def cmd_spectrum(args):
    g = _graph(args)
    levels, counts = graphs.spectrum(g, args.J)
    for e, c in zip(levels, counts):
        print(f"{_f(e)} {c}")
    return 0


def cmd_factorize(args):
    rep = separable.factorization_check(args.k, trials=args.trials, seed=args.seed)
    print(f"k = {rep.k}, trials = {rep.trials}")
    print(f"max_deviation = {_f(rep.max_deviation)}")
    print(f"worst: joint = {_f(rep.joint_overlap)}, factored = {_f(rep.factored_overlap)}")
    print(f"max_joint_overlap = {_f(rep.max_joint_overlap)} (bound {_f(2.0 ** (-(rep.k + 2) / 2))})")
    return 0


def build_parser():
    p = argparse.ArgumentParser(prog="clusterent", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    def graph_arg(sp):
        sp.add_argument("--graph", required=True, help="chain:N, lattice:RxC or file:<path>")

    def seed_args(sp, samples=None):
        sp.add_argument("--seed", type=int, default=0)
        if samples is not None:
            sp.add_argument("--samples", type=int, default=samples)

    def threads(sp):
        sp.add_argument("--threads", type=int, default=1)

    sp = sub.add_parser("ree", help="entanglement of a pure cluster and its certificate")
    graph_arg(sp)
    seed_args(sp, 1000)
    sp.add_argument("--restarts", type=int, default=64)
    sp.set_defaults(func=cmd_ree)

    sp = sub.add_parser("sweep", help="thermal entanglement curve as CSV")
    graph_arg(sp)
    sp.add_argument("--omega-min", type=float, default=thermal.OMEGA_C)
    sp.add_argument("--omega-max", type=float, default=1.0)
    sp.add_argument("--steps", type=int, default=50)
    sp.add_argument("--out", default="-")
    sp.add_argument("--J", type=float, default=1.0)
    sp.add_argument("--kB", type=float, default=1.0)
    threads(sp)
    sp.set_defaults(func=cmd_sweep)

    sp = sub.add_parser("critical", help="critical omega and temperature")
    sp.add_argument("--J", type=float, default=1.0)
    sp.add_argument("--kB", type=float, default=1.0)
    sp.set_defaults(func=cmd_critical)

    sp = sub.add_parser("gradient", help="gradient certificate at a candidate state")
    graph_arg(sp)
    sp.add_argument("--candidate", default="dephase", help="dephase, thermal-critical or mix:<lambda>")
    sp.add_argument("--omega", type=float, default=1.0, help="thermal parameter of the target (1 = pure)")
    sp.add_argument("--restarts", type=int, default=64)
    seed_args(sp, 1000)
    sp.set_defaults(func=cmd_gradient)

    sp = sub.add_parser("overlap", help="maximum overlap with a product state")
    graph_arg(sp)
    sp.add_argument("--restarts", type=int, default=64)
    seed_args(sp)
    threads(sp)
    sp.set_defaults(func=cmd_overlap)

    sp = sub.add_parser("lambda-star", help="optimal mixing weight for the 2-qubit thermal cluster")
    sp.add_argument("--omega", type=float, required=True)
    sp.set_defaults(func=cmd_lambda_star)

    sp = sub.add_parser("surface", help="2-qubit overlap surface as CSV")
    sp.add_argument("--resolution", type=int, default=201)
    sp.add_argument("--out", default="-")
    sp.set_defaults(func=cmd_surface)

    sp = sub.add_parser("spectrum", help="Hamiltonian levels and degeneracies")
    graph_arg(sp)
    sp.add_argument("--J", type=float, default=1.0)
    sp.set_defaults(func=cmd_spectrum)

    sp = sub.add_parser("factorize", help="check the chain overlap factorisation")
    sp.add_argument("--k", type=int, required=True)
    sp.add_argument("--trials", type=int, default=1000)
    seed_args(sp)
    sp.set_defaults(func=cmd_factorize)
    return p


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "threads", 1) < 1:
        parser.error("--threads must be at least 1")
    try:
        return args.func(args)
    except (ValueError, IndexError, OSError) as exc:
        print(f"clusterent {args.command}: error: {exc}", file=sys.stderr)
        return 2
    except ArithmeticError as exc:
        print(f"clusterent {args.command}: {exc}", file=sys.stderr)
        print("FAIL")
        return 1


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
