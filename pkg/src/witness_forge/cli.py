"""Command-line front end with seeded, replayable JSON/CSV reports.

Every command embeds its configuration, tolerances, and the library
version in the report so a run can be reproduced exactly; with a fixed
seed the output is byte-identical apart from the timestamp field.

Exit codes: 0 success, 1 usage or I/O error, 2 the input is not a witness
(counterexample embedded in the report), 3 convergence failure (partial
results embedded).
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
import time
from typing import Optional

import numpy as np

from . import __version__, catalog, constraints, decomposable
from . import extremality, facegeom, io as wio, maps_and_spa, realform
from .errors import ConvergenceFailure, NotAWitness, WitnessForgeError
from .hilbert import Dims, HermitianOp
from .zerofinder import default_threads, find_zeros


def _parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="witness-forge",
        description="construct, search for, and certify extremal "
                    "entanglement witnesses")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, dims=False):
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--restarts", type=int, default=None)
        p.add_argument("--tol-zero", type=float, default=1e-9)
        p.add_argument("--tol-svd", type=float, default=1e-8)
        p.add_argument("--out", default=None)
        if dims:
            p.add_argument("--na", type=int, default=3)
            p.add_argument("--nb", type=int, default=3)

    p = sub.add_parser("find-extremal", help="face descent to an extremal "
                                             "witness")
    common(p, dims=True)
    p.add_argument("--max-steps", type=int, default=60)

    p = sub.add_parser("certify", help="extremality certificate from the "
                                       "zero set")
    common(p)
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--quartic", choices=["on", "off"], default="on")

    p = sub.add_parser("zeros", help="multistart zero search")
    common(p)
    p.add_argument("--in", dest="infile", required=True)

    p = sub.add_parser("spa", help="structural approximation parameters")
    common(p)
    p.add_argument("--in", dest="infile", required=True)

    p = sub.add_parser("catalog", help="emit an analytic witness")
    common(p)
    p.add_argument("--name", required=True)
    p.add_argument("--a", type=float, default=1.0)
    p.add_argument("--b", type=float, default=0.0)
    p.add_argument("--c", type=float, default=1.0)
    p.add_argument("--theta", type=float, default=0.0)

    p = sub.add_parser("face-geometry", help="simplex statistics of a "
                                             "zero set")
    common(p)
    p.add_argument("--in", dest="infile", required=True)

    p = sub.add_parser("decompose", help="partial decomposition over the "
                                         "zero set")
    common(p)
    p.add_argument("--in", dest="infile", required=True)

    p = sub.add_parser("real-form", help="embed into a real witness")
    common(p)
    p.add_argument("--in", dest="infile", required=True)
    return parser


def _config_dict(args) -> dict:
    cfg = {k: v for k, v in sorted(vars(args).items())
           if k not in ("out",)}
    cfg["threads"] = default_threads()
    return cfg


def _report(args, result: dict, path: Optional[str]) -> None:
    doc = {
        "command": args.command,
        "version": __version__,
        "config": _config_dict(args),
        "timestamp": time.strftime("%Y-%m-%dT%H:%M:%S"),
        "result": result,
    }
    text = json.dumps(doc, indent=1, sort_keys=True)
    if path:
        with open(path, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)


def _load_complex(path) -> HermitianOp:
    loaded = wio.load_witness(path)
    if isinstance(loaded, realform.RealWitness):
        raise WitnessForgeError("expected a complex witness file")
    return loaded[0]


def _zero_summary(zs) -> list:
    out = []
    for z in zs:
        out.append({
            "phi_re": z.point.phi.real.tolist(),
            "phi_im": z.point.phi.imag.tolist(),
            "chi_re": z.point.chi.real.tolist(),
            "chi_im": z.point.chi.imag.tolist(),
            "kind": z.kind,
            "hessian_kernel_dim": z.kernel_dim,
        })
    return out


def _cmd_find_extremal(args) -> dict:
    descent = extremality.find_extremal(
        dims=Dims(args.na, args.nb), rng_seed=args.seed,
        restarts=args.restarts, max_steps=args.max_steps,
        eps_zero=args.tol_zero)
    cert = descent.certificate
    if args.out:
        wio.save_witness(args.out, descent.final)
    return {
        "terminated": descent.terminated,
        "kernel_dim": cert.kernel_dim,
        "extremal": cert.extremal,
        "zero_count": cert.zero_count,
        "quartic_count": cert.quartic_count,
        "witness": wio.witness_to_dict(descent.final),
        "steps": [{
            "t_c": s.t_c,
            "trigger": s.trigger,
            "kernel_dim": s.kernel_dim,
            "zero_count": len(s.zeros),
            "witness": wio.witness_to_dict(s.witness),
        } for s in descent.steps],
    }


def _cmd_certify(args) -> dict:
    omega = _load_complex(args.infile)
    zs = find_zeros(omega, restarts=args.restarts, seed=args.seed,
                    eps_zero=args.tol_zero)
    cert = extremality.certify(omega, list(zs), quartic=args.quartic == "on",
                               eps_svd=args.tol_svd)
    return {
        "extremal": cert.extremal,
        "kernel_dim": cert.kernel_dim,
        "face_dim": cert.face_dim,
        "zero_count": cert.zero_count,
        "quartic_count": cert.quartic_count,
        "spectral_gap": cert.spectral_gap,
        "continuum": zs.continuum,
        "zeros": _zero_summary(zs),
    }


def _cmd_zeros(args) -> dict:
    omega = _load_complex(args.infile)
    zs = find_zeros(omega, restarts=args.restarts, seed=args.seed,
                    eps_zero=args.tol_zero, raise_on_negative=True)
    return {
        "p_star": zs.min_value,
        "continuum": zs.continuum,
        "count": len(zs),
        "zeros": _zero_summary(zs),
    }


def _cmd_spa(args) -> dict:
    omega = _load_complex(args.infile)
    result = maps_and_spa.spa(omega)
    return {
        "p1": result.p1, "p2": result.p2,
        "lambda1": result.lambda1, "lambda2": result.lambda2,
        "spa_of_omega_is_ppt": result.spa_of_omega_is_ppt,
        "spa_of_pt_is_ppt": result.spa_of_pt_is_ppt,
    }


def _cmd_catalog(args) -> dict:
    entry = catalog.by_name(args.name, a=args.a, b=args.b, c=args.c,
                            theta=args.theta)
    if args.out:
        wio.save_witness(args.out, entry.witness)
    return {
        "name": entry.name,
        "trace": entry.witness.trace,
        "analytic_zero_count": len(entry.analytic_zeros),
        "witness": wio.witness_to_dict(entry.witness),
    }


def _cmd_face_geometry(args) -> dict:
    dims, points = wio.load_zeros(args.infile)
    face = facegeom.face_from_zeros(points)
    n = face.order
    vol = facegeom.cm_volume(face)
    reg = facegeom.v_reg(n, np.sqrt(2.0)) if n >= 1 else 0.0
    closest = facegeom.closest_state(face)
    row = {
        "vertices": len(face.vertices),
        "volume": vol,
        "v_reg": reg,
        "volume_ratio": vol / reg if reg else 0.0,
        "center_distance": facegeom.center_distance(face),
        "r_m": facegeom.r_m(dims),
        "d_min": closest.d_min,
        "rank": closest.rank,
        "interior": closest.interior,
    }
    if args.out:
        with open(args.out, "w", newline="") as fh:
            writer = csv.DictWriter(fh, fieldnames=list(row))
            writer.writeheader()
            writer.writerow(row)
    return row


def _cmd_decompose(args) -> dict:
    omega = _load_complex(args.infile)
    zs = find_zeros(omega, restarts=args.restarts, seed=args.seed,
                    eps_zero=args.tol_zero)
    if not len(zs):
        raise ConvergenceFailure("no zeros found; nothing to decompose over")
    split = decomposable.partial_decompose(omega, zs.points)
    result = {
        "zero_count": len(zs),
        "rho1_min_eig": split.rho1_min_eig,
        "sigma1_min_eig": split.sigma1_min_eig,
        "residual": split.residual,
        "remainder_norm": split.remainder.norm(),
        "rho1": wio.witness_to_dict(split.rho1),
        "sigma1": wio.witness_to_dict(split.sigma1),
    }
    if args.out:
        wio.save_witness(
            args.out, omega,
            decomposable.DecompWitness(rho=split.rho1, sigma=split.sigma1))
    return result


def _cmd_real_form(args) -> dict:
    omega = _load_complex(args.infile)
    w = realform.to_real(omega)
    if args.out:
        wio.save_real_witness(args.out, w)
    return wio.real_witness_to_dict(w)


_COMMANDS = {
    "find-extremal": _cmd_find_extremal,
    "certify": _cmd_certify,
    "zeros": _cmd_zeros,
    "spa": _cmd_spa,
    "catalog": _cmd_catalog,
    "face-geometry": _cmd_face_geometry,
    "decompose": _cmd_decompose,
    "real-form": _cmd_real_form,
}


def main(argv=None) -> int:
    args = _parser().parse_args(argv)
    # Commands whose --out is an artifact file (witness JSON, CSV, ...)
    # print their report to stdout; the others treat --out as the report
    # destination.
    artifact_out = {"catalog", "decompose", "real-form", "face-geometry",
                    "find-extremal"}
    out = None if args.command in artifact_out else args.out
    try:
        result = _COMMANDS[args.command](args)
    except NotAWitness as exc:
        result = {"error": "not a witness", "message": str(exc),
                  "min_value": exc.value}
        if exc.certificate is not None:
            p = exc.certificate
            result["counterexample"] = {
                "phi_re": p.phi.real.tolist(),
                "phi_im": p.phi.imag.tolist(),
                "chi_re": p.chi.real.tolist(),
                "chi_im": p.chi.imag.tolist(),
            }
        _report(args, result, out)
        return 2
    except ConvergenceFailure as exc:
        _report(args, {"error": "convergence failure",
                       "message": str(exc)}, out)
        return 3
    except (OSError, ValueError, KeyError, json.JSONDecodeError,
            WitnessForgeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    _report(args, result, out)
    return 0


if __name__ == "__main__":
    sys.exit(main())
