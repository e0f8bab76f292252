"""Command-line front end: norms | spectrum | simulate | distribution | nonnuclear.

Measures are given inline (--measure '{"atoms":[{"x":0.5,"w":1.0}]}') or via
--measure-file.  Every run echoes its fully resolved configuration as JSON on
stderr and writes the result to --out (default stdout).  All floating output
is printed with 17 significant digits; identical flags produce byte-identical
output, independent of --threads (randomness is keyed per draw, threads only
chunk the work).
"""

from __future__ import annotations

import argparse
import sys

import numpy as np

from . import klbasis, measure, nonnuclear, quadform, spectral

_ERR_EXIT = 1


def _fmt_float(v: float) -> str:
    if v != v:
        return '"nan"'
    if v in (float("inf"), float("-inf")):
        return f'"{v}"'
    return format(float(v), ".17g")


def render_json(obj, indent: int = 0) -> str:
    """Deterministic JSON with floats at 17 significant digits."""
    pad = "  " * indent
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = ",\n".join(
            f'{pad}  "{k}": {render_json(v, indent + 1)}' for k, v in obj.items()
        )
        return "{\n" + items + "\n" + pad + "}"
    if isinstance(obj, (list, tuple, np.ndarray)):
        seq = list(obj)
        if not seq:
            return "[]"
        items = ",\n".join(f"{pad}  {render_json(v, indent + 1)}" for v in seq)
        return "[\n" + items + "\n" + pad + "]"
    if isinstance(obj, bool) or isinstance(obj, np.bool_):
        return "true" if obj else "false"
    if obj is None:
        return "null"
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return _fmt_float(float(obj))
    import json as _json

    return _json.dumps(str(obj))


def _write_out(text: str, out_path) -> None:
    if out_path:
        with open(out_path, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _csv_rows(header: list[str], rows: list[list]) -> str:
    def cell(v):
        if isinstance(v, (float, np.floating)):
            return format(float(v), ".17g")
        return str(v)

    lines = [",".join(header)]
    lines.extend(",".join(cell(c) for c in row) for row in rows)
    return "\n".join(lines) + "\n"


def _load_measure(args) -> measure.SignedMeasure:
    if getattr(args, "measure", None) and getattr(args, "measure_file", None):
        raise ValueError("give either --measure or --measure-file, not both")
    if getattr(args, "measure", None):
        return measure.loads(args.measure)
    if getattr(args, "measure_file", None):
        with open(args.measure_file) as fh:
            return measure.loads(fh.read())
    raise ValueError("a measure is required (--measure or --measure-file)")


def _echo_config(args) -> None:
    cfg = {k: v for k, v in sorted(vars(args).items()) if k != "func"}
    sys.stderr.write(render_json({"resolved_config": cfg}) + "\n")


def _add_measure_flags(p):
    p.add_argument("--measure", help="inline measure JSON")
    p.add_argument("--measure-file", help="path to measure JSON file")


def _add_common_flags(p):
    p.add_argument("--format", choices=["json", "csv"], default="json")
    p.add_argument("--out", help="output path (default stdout)")
    p.add_argument("--threads", type=int, default=1)
    p.add_argument("--seed", type=int, default=0)


def _trace_and_hs(rho) -> tuple[float, float]:
    trace = float(np.sum(klbasis.coeff_diag(rho, 512)))
    return trace, spectral.hs_norm_sq(rho)


def cmd_norms(args) -> int:
    rho = _load_measure(args)
    result = {"dstar_norm": measure.dstar_norm(rho), "m_norm_sq": measure.m_norm_sq(rho)}
    if args.format == "csv":
        _write_out(_csv_rows(["quantity", "value"], [[k, v] for k, v in result.items()]), args.out)
    else:
        _write_out(render_json(result) + "\n", args.out)
    return 0


def cmd_spectrum(args) -> int:
    rho = _load_measure(args)
    trace, hs = _trace_and_hs(rho)
    result: dict = {}
    if args.method in ("shooting", "both"):
        spec = spectral.find_eigenvalues(rho, args.bc, args.m_max, args.lambda_max)
        result = {
            "positive": spec.positive, "negative": spec.negative,
            "method": args.method, "window": args.lambda_max,
            "trace_estimate": trace, "hs_norm_sq": hs,
            "window_exhausted_pos": spec.window_exhausted_pos,
            "window_exhausted_neg": spec.window_exhausted_neg,
            "multiplicity_suspected": spec.multiplicity_suspected,
        }
    if args.method in ("galerkin", "both"):
        gal = spectral.galerkin_boundary_eigenvalues(rho, count=args.galerkin_modes,
                                                     m_max=args.m_max)
        if args.method == "galerkin":
            result = {"positive": gal.positive, "negative": gal.negative,
                      "method": "galerkin", "window": None,
                      "trace_estimate": trace, "hs_norm_sq": hs}
        else:
            result["galerkin_positive"] = gal.positive
            result["galerkin_negative"] = gal.negative
            diffs = []
            for a, b in ((result["positive"], gal.positive), (result["negative"], gal.negative)):
                k = min(len(a), len(b))
                if k:
                    diffs.append(np.max(np.abs((np.asarray(a[:k]) - np.asarray(b[:k])) / np.asarray(a[:k]))))
            result["agreement_max_rel_diff"] = float(max(diffs)) if diffs else None
    if args.format == "csv":
        rows = [["positive", i + 1, v] for i, v in enumerate(result["positive"])]
        rows += [["negative", i + 1, v] for i, v in enumerate(result["negative"])]
        _write_out(_csv_rows(["sign", "index", "lambda"], rows), args.out)
    else:
        _write_out(render_json(result) + "\n", args.out)
    return 0


def cmd_simulate(args) -> int:
    rho = _load_measure(args)
    ens = klbasis.sample_normals(args.seed, args.draws, args.modes, threads=args.threads)
    vals = klbasis.tau_truncated(rho, ens, args.modes - 1)
    ms = quadform.sample_moments(vals)
    if args.dump_samples:
        klbasis.write_values_csv(args.dump_samples, vals)
    result = {"mean": ms.mean, "variance": ms.variance, "second_moment": ms.second_moment,
              "sample_size": ms.sample_size, "se_mean": ms.se_mean, "se_second": ms.se_second}
    if args.format == "csv":
        _write_out(_csv_rows(["quantity", "value"],
                             [[k, v] for k, v in result.items()]), args.out)
    else:
        _write_out(render_json(result) + "\n", args.out)
    return 0


def _auto_window(rho, m_max: int) -> float:
    dens = [abs(v) for v in rho.values if v != 0.0]
    win = 0.0
    if dens:
        win = np.pi**2 * (m_max + 1.0) ** 2 / min(dens)
    if rho.atoms:
        win = max(win, 16.0 * len(rho.atoms) / min(a for a, _ in rho.atoms if a > 0))
    return max(win, 100.0)


def cmd_distribution(args) -> int:
    rho = _load_measure(args)
    if rho.is_zero:
        result = {"degenerate": True, "mean": 0.0, "variance": 0.0, "second_moment": 0.0,
                  "weights_used": 0, "tail_trace": 0.0, "cdf_grid": []}
        _write_out(render_json(result) + "\n", args.out)
        return 0
    atomic = all(v == 0.0 for v in rho.values)
    if atomic and args.lambda_max is None:
        spec = spectral.find_full_atomic_spectrum(rho, args.bc)
    else:
        window = args.lambda_max if args.lambda_max is not None else _auto_window(rho, args.m_max)
        spec = spectral.find_eigenvalues(rho, args.bc, args.m_max, window)
    series = quadform.series_from_spectrum(spec, rho)
    analytic = quadform.analytic_moments(series)
    exact = quadform.measure_moments(rho)
    s_series = quadform.sample_series(series, args.draws, args.seed, threads=args.threads)
    ens = klbasis.sample_normals(args.seed, args.draws, args.modes, threads=args.threads)
    s_path = klbasis.tau_truncated(rho, ens, args.modes - 1)
    ks = quadform.compare_laws(s_path, s_series)
    sd = np.sqrt(max(analytic.variance, 1e-30))
    xs = np.linspace(analytic.mean - 5 * sd, analytic.mean + 5 * sd, args.cdf_points)
    ps, used_mc = quadform.cdf_grid(series, xs)
    mc_series = quadform.sample_moments(s_series)
    mc_path = quadform.sample_moments(s_path)
    result = {
        "mean": analytic.mean, "variance": analytic.variance,
        "second_moment": analytic.second_moment,
        "weights_used": series.truncation, "tail_trace": series.tail_shift,
        "cdf_grid": [[float(x), float(p)] for x, p in zip(xs, ps)],
        "cdf_mc_fallback": used_mc,
        "ks": {"statistic": ks.statistic, "threshold": ks.threshold,
               "alpha": ks.alpha, "passed": ks.passed},
        "moments": {
            "measure": {"mean": exact.mean, "second_moment": exact.second_moment},
            "series_analytic": {"mean": analytic.mean, "second_moment": analytic.second_moment},
            "mc_series": {"mean": mc_series.mean, "second_moment": mc_series.second_moment,
                          "se_mean": mc_series.se_mean, "se_second": mc_series.se_second},
            "mc_path": {"mean": mc_path.mean, "second_moment": mc_path.second_moment,
                        "se_mean": mc_path.se_mean, "se_second": mc_path.se_second},
        },
    }
    if args.format == "csv":
        _write_out(_csv_rows(["x", "p"], [[x, p] for x, p in result["cdf_grid"]]), args.out)
    else:
        _write_out(render_json(result) + "\n", args.out)
    return 0


def cmd_nonnuclear(args) -> int:
    if args.kind == "table":
        n_list = [int(s) for s in args.n_list.split(",")]
        rows = nonnuclear.comb_eigenvalue_table(n_list, args.m_max)
        if args.format == "json":
            _write_out(render_json(rows) + "\n", args.out)
        else:
            _write_out(_csv_rows(["n", "m", "lambda", "gap_to_2pim"],
                                 [[r["n"], r["m"], r["lambda"], r["gap_to_2pim"]] for r in rows]),
                       args.out)
    elif args.kind == "omega":
        n_list = [int(s) for s in args.n_list.split(",")]
        rows = nonnuclear.omega_convergence_report(n_list)
        if args.format == "csv":
            _write_out(_csv_rows(["n", "sup_gap"], [[r["n"], r["sup_gap"]] for r in rows]), args.out)
        else:
            _write_out(render_json(rows) + "\n", args.out)
    elif args.kind == "majorization":
        rep = nonnuclear.majorization_check(args.N, args.n, args.m_max)
        _write_out(render_json(rep.to_json_dict()) + "\n", args.out)
    elif args.kind == "choose-nu":
        ev = nonnuclear.choose_nu(args.n_max, margin=args.margin)
        _write_out(render_json(ev.to_json_dict()) + "\n", args.out)
    else:  # pragma: no cover - argparse restricts choices
        raise ValueError(f"unknown kind {args.kind}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="wienerquad", description=__doc__)
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("norms", help="dual-space norm and squared second-chaos norm")
    _add_measure_flags(p)
    _add_common_flags(p)
    p.set_defaults(func=cmd_norms)

    p = sub.add_parser("spectrum", help="signed eigenvalues of the boundary problem")
    _add_measure_flags(p)
    _add_common_flags(p)
    p.add_argument("--bc", choices=["dirichlet", "neumann"], default="neumann")
    p.add_argument("--m-max", type=int, default=8)
    p.add_argument("--lambda-max", type=float, default=200.0)
    p.add_argument("--method", choices=["shooting", "galerkin", "both"], default="shooting")
    p.add_argument("--galerkin-modes", type=int, default=200)
    p.set_defaults(func=cmd_spectrum)

    p = sub.add_parser("simulate", help="Monte Carlo of the quadratic functional (path route)")
    _add_measure_flags(p)
    _add_common_flags(p)
    p.add_argument("--draws", type=int, default=10000)
    p.add_argument("--modes", type=int, default=512)
    p.add_argument("--dump-samples", help="write per-draw values CSV here")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("distribution", help="spectrum -> chi-square series -> moments/CDF/KS")
    _add_measure_flags(p)
    _add_common_flags(p)
    p.add_argument("--bc", choices=["dirichlet", "neumann"], default="neumann")
    p.add_argument("--m-max", type=int, default=64)
    p.add_argument("--lambda-max", type=float, default=None)
    p.add_argument("--draws", type=int, default=10000)
    p.add_argument("--modes", type=int, default=512)
    p.add_argument("--cdf-points", type=int, default=21)
    p.set_defaults(func=cmd_distribution)

    p = sub.add_parser("nonnuclear", help="comb weight tables and evidence reports")
    _add_common_flags(p)
    p.add_argument("--kind", choices=["table", "omega", "majorization", "choose-nu"],
                   required=True)
    p.add_argument("--n-list", default="50,100")
    p.add_argument("--m-max", type=int, default=3)
    p.add_argument("--N", type=int, default=1)
    p.add_argument("--n", type=int, default=50)
    p.add_argument("--n-max", type=int, default=3)
    p.add_argument("--margin", type=float, default=0.05)
    p.set_defaults(func=cmd_nonnuclear)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    _echo_config(args)
    try:
        return args.func(args)
    except (ValueError, RuntimeError, OSError) as exc:
        sys.stdout.write(render_json({"error": str(exc)}) + "\n")
        return _ERR_EXIT


if __name__ == "__main__":
    sys.exit(main())
