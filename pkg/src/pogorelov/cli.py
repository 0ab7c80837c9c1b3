"""Command-line front end.

Every subcommand writes its artifacts plus a run manifest (parameters and
SHA-256 digests of the outputs) and is bytewise reproducible: the same
arguments always produce identical files. Exit codes: 0 success, 1 failed
verification or cross-check, 2 usage or parameter error.
"""
from __future__ import annotations

import argparse
import sys

import numpy as np

from . import __version__, assembly, curvature, embedding, lemma_lab, profile
from . import regularity, serialize, verify
from .exceptions import PogorelovError


def _manifest(args, out_paths, extra=None):
    params = {k: v for k, v in sorted(vars(args).items()) if k != "func"}
    if extra:
        params.update(extra)
    serialize.write_manifest(str(out_paths[0]) + ".manifest.json",
                             args.cmd, params, out_paths)


def _cmd_profile(args) -> int:
    p = profile.make_pogorelov_profile(args.a)
    out = args.out or ("profile_table.csv" if args.format == "csv" else "profile_report.json")
    if args.format == "csv":
        rho = np.linspace(0.0, p.a, args.grid, endpoint=False)
        rows = zip(rho, p.eval(rho, 0), p.eval(rho, 1), p.eval(rho, 2), p.eval(rho, 3))
        serialize.write_csv(out, ["rho", "f", "f1", "f2", "f3"],
                            (tuple(map(float, r)) for r in rows))
    else:
        rep = profile.smoothness_report(p, 0.5 * p.a)
        win = profile.embeddable_window(p, grid_n=args.grid)
        doc = {
            "a": p.a,
            "flat_radius": p.flat_radius,
            "embeddable_window": [[lo, hi] for lo, hi in win],
            "smoothness_at": rep.rho0,
            "orders": [
                {"order": row.order, "left": row.left_exact, "right": row.right_exact,
                 "jump": row.jump, "fd_left": row.left_fd, "fd_right": row.right_fd,
                 "fd_error": row.fd_error}
                for row in rep.rows
            ],
        }
        serialize.write_json(out, doc)
    _manifest(args, [out])
    return 0


def _cmd_curvature(args) -> int:
    p = profile.make_pogorelov_profile(args.a)
    table = curvature.curvature_table(p, n=args.grid)
    if args.check_closed_form:
        # off-dyadic samples: on exact binary fractions the two evaluation
        # paths can round identically, which would under-report the error
        k = np.arange(args.grid, dtype=float)
        rhos = p.flat_radius + (p.a - p.flat_radius) * (k + 0.6180339887498949) / (args.grid + 1)
        table = curvature.curvature_table(p, rhos=rhos)
        scale = float(np.max(np.abs(table.K_formula)))
        rel = float(np.max(table.abs_err)) / scale
        print(f"max relative discrepancy (closed form vs -f''/f): {serialize.fmt17(rel)}")
        return 0 if rel <= 1e-9 else 1
    out = args.out or ("curvature_table.csv" if args.format == "csv" else "curvature_report.json")
    if args.format == "csv":
        serialize.write_csv(out, ["rho", "K_formula", "K_closed", "K_fd", "abs_err"],
                            table.rows())
    else:
        c1, c2 = curvature.expansion_fit(p, 1e-3 * p.a)
        doc = {
            "a": p.a,
            "expansion": {"c1_fit": c1, "c2_fit": c2,
                          "c1_expected": curvature.EXPANSION_C1_COEFF * p.a ** 3,
                          "c2_oracle": curvature.EXPANSION_C2_COEFF * p.a ** 2},
            "lower_bound_window": curvature.lower_bound_window(p, 0.75),
            "first_zero": curvature.first_zero_past_branch(p),
            "table_max_abs_err": float(np.max(table.abs_err)),
        }
        serialize.write_json(out, doc)
    _manifest(args, [out])
    return 0


def _cmd_embed(args) -> int:
    p = profile.make_pogorelov_profile(args.a)
    rho_max = args.rho_max if args.rho_max is not None else 0.7 * p.a
    curve = embedding.integrate_profile(p, rho_max, tol=args.tol)
    default = {"obj": "surface.obj", "csv": "curve_table.csv", "json": "embed_report.json"}
    out = args.out or default[args.format]
    if args.format == "obj":
        mesh = embedding.build_mesh(curve, n_theta=args.n_theta)
        embedding.write_obj(mesh, out)
    elif args.format == "csv":
        embedding.write_curve_csv(curve, out)
    else:
        jump = embedding.jump_analysis(curve)
        res = embedding.induced_metric_residual(p, curve)
        scan = embedding.mean_curvature_scan(curve)
        mesh = embedding.build_mesh(curve, n_theta=args.n_theta)
        doc = {
            "a": p.a,
            "rho_max": curve.rho_max,
            "quad_error": curve.quad_error,
            "zpp_jump": {"left": jump.left, "right": jump.right,
                         "jump": jump.jump, "converged": jump.converged},
            "isometry_residual": {"max_E_minus_1": res.max_E, "max_F": res.max_F,
                                  "max_G_minus_f2": res.max_G},
            "mean_curvature": {
                "constant_sign": scan.constant_sign,
                "sign_changes": [list(ch) for ch in scan.sign_changes],
                "branch_flagged": scan.branch_flagged,
            },
            "mesh": {"vertices": int(mesh.vertices.shape[0]),
                     "faces": int(mesh.faces.shape[0]),
                     "euler_characteristic": mesh.euler_characteristic()},
        }
        serialize.write_json(out, doc)
    _manifest(args, [out])
    return 0


def _cmd_assemble(args) -> int:
    field = assembly.make_metric_field(args.n_max)
    out = args.out or ("field_grid.csv" if args.format == "csv" else "layout.json")
    if args.format == "csv":
        assembly.write_grid_csv(field, out, resolution=args.grid)
    else:
        serialize.write_json(out, field.layout.to_dict())
    _manifest(args, [out])
    return 0


def _cmd_regularity(args) -> int:
    field = assembly.make_metric_field(args.n_max)
    report = regularity.estimate_norm_table(field, grid_n=args.grid)
    out = args.out or ("norm_table.csv" if args.format == "csv" else "regularity_report.json")
    if args.format == "csv":
        report.to_csv(out)
    else:
        hi = min(40, args.n_max)
        report = regularity.decay_fit(report, n_range=(min(5, args.n_max), hi))
        table = regularity.cauchy_check(report)
        doc = report.to_dict()
        doc["claimed_orders"] = {
            "sup_dev": verify.CLAIMED_DECAY_ORDERS[0],
            "sup_D1": verify.CLAIMED_DECAY_ORDERS[1],
            "sup_D2": verify.CLAIMED_DECAY_ORDERS[2],
            "lip_D2": verify.CLAIMED_DECAY_ORDERS[3],
        }
        doc["cauchy"] = table.to_dict()
        serialize.write_json(out, doc)
    _manifest(args, [out])
    return 0


def _cmd_lemmas(args) -> int:
    out = args.out or "lemmas_report.json"
    suite = lemma_lab.run_convex_suite([args.seed], 100, c=1.0, b=0.3)
    fits = []
    for sample in (lemma_lab.cylinder_ruling(), lemma_lab.cone_ruling(),
                   lemma_lab.tangent_developable_ruling()):
        fit = lemma_lab.ruling_curvature_fit(sample)
        fits.append({"surface": sample.surface, "A": fit.A, "B": fit.B,
                     "max_residual": fit.max_residual, "K_max": sample.K_max})
    sweep = []
    for c in np.linspace(0.0, 0.3, 31):
        s = lemma_lab.sagitta(1.0, float(c))
        sweep.append({"c": float(c), "sagitta": float(s),
                      "lower_ok": s.lower_ok, "upper_ok": s.upper_ok})
    discs = {
        "planar": lemma_lab.planar_disc(),
        "cylinder": lemma_lab.cylinder_patch(),
        "sphere_cap": lemma_lab.sphere_cap(),
    }
    detect = {label: len(lemma_lab.affine_segment_detect(d, tol=args.tol))
              for label, d in discs.items()}
    doc = {
        "convex": {"n_cases": len(suite.checks), "n_failed": len(suite.failures),
                   "max_ratio": suite.max_ratio, "seed": args.seed},
        "rulings": fits,
        "sagitta_sweep": sweep,
        "affine_chords_detected": detect,
    }
    serialize.write_json(out, doc)
    outputs = [out]
    if suite.failures:
        archive = str(out) + ".failures.json"
        lemma_lab.archive_failures(suite.checks, suite.cases, archive)
        outputs.append(archive)
    _manifest(args, outputs)
    return 0 if not suite.failures else 1


def _cmd_verify(args) -> int:
    report = verify.run_all("quick" if args.quick else "full")
    out = args.out or "verify_report.json"
    serialize.write_json(out, report.to_dict())
    _manifest(args, [out])
    print(verify.render_text(report))
    return 0 if report.passed else 1


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="pogorelov",
        description="Radial bump metrics, their C^{1,1} surface-of-revolution "
                    "embeddings, and the numerical labs around them.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="cmd", required=True)

    sp = sub.add_parser("profile", help="radial profile table and smoothness report")
    sp.add_argument("--a", type=float, default=1.0)
    sp.add_argument("--grid", type=int, default=1024)
    sp.add_argument("--format", choices=("csv", "json"), default="json")
    sp.add_argument("--out", default=None)
    sp.set_defaults(func=_cmd_profile)

    sp = sub.add_parser("curvature", help="Gauss curvature table and expansion report")
    sp.add_argument("--a", type=float, default=1.0)
    sp.add_argument("--grid", type=int, default=256)
    sp.add_argument("--check-closed-form", action="store_true",
                    help="print max relative discrepancy of the closed form and exit")
    sp.add_argument("--format", choices=("csv", "json"), default="json")
    sp.add_argument("--out", default=None)
    sp.set_defaults(func=_cmd_curvature)

    sp = sub.add_parser("embed", help="surface of revolution: mesh, curve, or report")
    sp.add_argument("--a", type=float, default=1.0)
    sp.add_argument("--rho-max", type=float, default=None,
                    help="outer sample radius (default 0.7 a)")
    sp.add_argument("--n-theta", type=int, default=64)
    sp.add_argument("--tol", type=float, default=1e-10)
    sp.add_argument("--format", choices=("obj", "csv", "json"), default="json")
    sp.add_argument("--out", default=None)
    sp.set_defaults(func=_cmd_embed)

    sp = sub.add_parser("assemble", help="disc layout and sampled metric field")
    sp.add_argument("--n-max", type=int, default=40)
    sp.add_argument("--grid", type=int, default=256)
    sp.add_argument("--format", choices=("csv", "json"), default="json")
    sp.add_argument("--out", default=None)
    sp.set_defaults(func=_cmd_assemble)

    sp = sub.add_parser("regularity", help="per-disc norm table and decay fits")
    sp.add_argument("--n-max", type=int, default=40)
    sp.add_argument("--grid", type=int, default=96)
    sp.add_argument("--format", choices=("csv", "json"), default="json")
    sp.add_argument("--out", default=None)
    sp.set_defaults(func=_cmd_regularity)

    sp = sub.add_parser("lemmas", help="convex bound, ruling law, sagitta, affine chords")
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--tol", type=float, default=1e-9)
    sp.add_argument("--out", default=None)
    sp.set_defaults(func=_cmd_lemmas)

    sp = sub.add_parser("verify", help="run the acceptance checks")
    sp.add_argument("--quick", action="store_true",
                    help="reduced resolution for a fast pass")
    sp.add_argument("--out", default=None)
    sp.set_defaults(func=_cmd_verify)

    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except PogorelovError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
