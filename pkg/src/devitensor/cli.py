"""
Command-line interface.

    devitensor <decompose|multipoles|classify|young|check> --input PATH [PATH ...]
               --format {voigt6,kelvin6,full81,matrix3,json} [--json] [--seed N] ...

Exit codes: 0 success, 1 invalid input, 2 numerical failure or failed check.
"""

import argparse
import json
import sys
import warnings
from concurrent.futures import ProcessPoolExecutor

import numpy as np

from . import __version__
from .errors import DevitensorError, NumericalError, ValidationError
from .multipole import TOL_REC, TOL_ROOT, multipoles
from .second_order import TOL_GAP, classify_eigen_multipole, decompose2
from .spectral import eigentensors, kelvin_map
from .stiffness import TOL_ACCEPT, TOL_REPAIR, as_stiffness, decompose_stiffness, youngs_modulus
from .symmetry import (
    TOL_DIR,
    TOL_MIRROR,
    TOL_ZERO,
    PlaneVariant,
    analyze_stiffness,
    mirror_residual,
)
from .tensor import norm
from .tensorfile import FORMATS, parse_tensor_file

EXIT_OK = 0
EXIT_INVALID = 1
EXIT_NUMERICAL = 2

DEFAULT_DIRECTIONS = ((1.0, 0.0, 0.0), (0.0, 1.0, 0.0), (0.0, 0.0, 1.0), (1.0, 1.0, 1.0))


def _plain(obj):
    """Convert numpy values to JSON-friendly Python objects."""
    if isinstance(obj, dict):
        return {str(k): _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return _plain(obj.tolist())
    if isinstance(obj, (np.floating, float)):
        return float(obj) + 0.0
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, np.bool_):
        return bool(obj)
    return obj


def _stiffness(tensor, args):
    if tensor.ndim != 4:
        raise ValidationError("this command needs a stiffness tensor (voigt6, kelvin6, full81)")
    # a loosened --tol-sym widens the repair band; accepted input is always symmetrized
    return as_stiffness(tensor, min(args.tol_sym, TOL_ACCEPT), max(args.tol_sym, TOL_REPAIR))


def _mp_kwargs(args, scale):
    return dict(
        seed=args.seed,
        tol_zero=args.tol_zero,
        scale=scale,
        tol_rec=TOL_REC,
        tol_root=args.tol_root,
    )


def cmd_decompose(tensor, args):
    if tensor.ndim == 2:
        dec = decompose2(tensor)
        return {
            "kind": "second_order",
            "d": dec.d,
            "dvec": dec.dvec,
            "D": dec.D,
        }
    C = _stiffness(tensor, args)
    dec = decompose_stiffness(C, args.tol_sym, max(args.tol_sym, 1e-8))
    eig = eigentensors(C)
    return {
        "kind": "stiffness",
        "decomposition": dec.to_dict(),
        "orthogonal_form": {
            "d": dec.d,
            "dhat": dec.dhat,
            "D_sym": dec.D_sym,
            "D_asym": dec.D_asym,
            "part_norms": {k: norm(v) for k, v in dec.parts().items()},
        },
        "eigenstiffnesses": eig.eigenstiffnesses,
        "positive_definite": bool(eig.eigenstiffnesses[-1] > 0.0),
    }


def cmd_multipoles(tensor, args):
    if tensor.ndim == 2:
        scale = max(norm(tensor), np.finfo(float).tiny)
        D = decompose2(tensor).D
        mp = multipoles(D, **_mp_kwargs(args, scale))
        rel = classify_eigen_multipole(tensor, mp=mp, tol_gap=args.tol_gap, seed=args.seed)
        frame = rel.eigen.vectors
        out = {
            "kind": "second_order",
            "multipoles": mp.to_dict(),
            "case": rel.case.value,
            "eigenvalues": rel.eigen.values,
            "eigenvectors": frame.T,
            "eigenframe_directions": None if mp.is_zero else mp.directions @ frame,
        }
        if rel.case.value == "generic":
            out["bisector_residual"] = rel.bisector_residual
        return out
    C = _stiffness(tensor, args)
    dec = decompose_stiffness(C, args.tol_sym, max(args.tol_sym, 1e-8))
    scale = norm(C)
    return {
        "kind": "stiffness",
        "multipoles": {
            name: multipoles(T, **_mp_kwargs(args, scale)).to_dict()
            for name, T in (("D", dec.D), ("Dhat", dec.Dhat), ("D4", dec.D4))
        },
    }


def _analysis(C, args):
    return analyze_stiffness(
        C, seed=args.seed, tol_mirror=args.tol_mirror, tol_dir=args.tol_dir, tol_zero=args.tol_zero
    )


def cmd_classify(tensor, args):
    C = _stiffness(tensor, args)
    res = _analysis(C, args)
    return {"kind": "stiffness", **res.to_dict()}


def cmd_young(tensor, args):
    C = _stiffness(tensor, args)
    dec = decompose_stiffness(C, args.tol_sym, max(args.tol_sym, 1e-8))
    dirs = args.direction or DEFAULT_DIRECTIONS
    samples = []
    for d in dirs:
        d = np.asarray(d, dtype=float)
        n = np.linalg.norm(d)
        if n == 0.0:
            raise ValidationError("direction must be nonzero")
        d = d / n
        samples.append({"direction": d, "E": youngs_modulus(dec, d)})
    return {"kind": "stiffness", "reference_E": 1.0 / (2.0 * dec.mu + dec.lam), "samples": samples}


def _check(name, value, tol):
    return {"name": name, "value": float(value), "tol": float(tol), "passed": bool(value <= tol)}


def cmd_check(tensor, args):
    checks = []
    if tensor.ndim == 2:
        scale = max(norm(tensor), np.finfo(float).tiny)
        dec = decompose2(tensor)
        checks.append(_check("second_order_reconstruction", norm(dec.reconstruct() - tensor) / scale, 1e-12))
        mp = multipoles(dec.D, **_mp_kwargs(args, scale))
        checks.append(_check("multipole_reconstruction", norm(mp.tensor() - dec.D) / scale, 1e-8))
        rel = classify_eigen_multipole(tensor, mp=mp, tol_gap=args.tol_gap)
        eig = rel.eigen
        checks.append(_check("eigen_reconstruction", norm(eig.reconstruct() - dec.D) / scale, 1e-10))
        if rel.case.value == "generic":
            checks.append(_check("bisector_property", rel.bisector_residual, 1e-8))
    else:
        C = _stiffness(tensor, args)
        scale = max(norm(C), np.finfo(float).tiny)
        dec = decompose_stiffness(C, args.tol_sym, max(args.tol_sym, 1e-8))
        checks.append(_check("roundtrip", norm(dec.reconstruct() - C) / scale, 1e-10))
        parts = dec.parts().values()
        checks.append(_check("pythagoras", abs(sum(norm(p) ** 2 for p in parts) - scale**2) / scale**2, 1e-9))
        checks.append(_check("kelvin_norm", abs(np.linalg.norm(kelvin_map(C)) - scale) / scale, 1e-12))
        eig = eigentensors(C)
        checks.append(_check("eigentensor_reconstruction", norm(eig.reconstruct() - C) / scale, 1e-9))
        for name, T in (("D", dec.D), ("Dhat", dec.Dhat), ("D4", dec.D4)):
            mp = multipoles(T, **_mp_kwargs(args, scale))
            checks.append(_check(f"multipole_reconstruction_{name}", norm(mp.tensor() - T) / scale, 1e-8))
        res = _analysis(C, args)
        if res.planes.variant is PlaneVariant.FINITE:
            worst = max((mirror_residual(C, m) for m in res.planes.normals), default=0.0)
            checks.append(_check("mirror_soundness", worst, 100.0 * args.tol_mirror))
    return {"kind": "check", "checks": checks, "passed": all(c["passed"] for c in checks)}


COMMANDS = {
    "decompose": cmd_decompose,
    "multipoles": cmd_multipoles,
    "classify": cmd_classify,
    "young": cmd_young,
    "check": cmd_check,
}


def _fmt(x):
    if isinstance(x, float):
        return f"{x:.10g}"
    if isinstance(x, list):
        if x and isinstance(x[0], list):
            A = np.asarray(x, dtype=float)
            if A.ndim > 2:
                # order 4 as a 9x9 matrix with rows (i, j) and columns (k, l)
                A = A.reshape(A.shape[0] * A.shape[1], -1)
            return "\n" + "\n".join("    " + "  ".join(f"{v:>14.8g}" for v in row) for row in A)
        return "(" + ", ".join(_fmt(v) for v in x) + ")"
    return str(x)


def render_text(report, indent=""):
    lines = []
    for key, value in report.items():
        if isinstance(value, dict):
            lines.append(f"{indent}{key}:")
            lines.append(render_text(value, indent + "  "))
        elif isinstance(value, list) and value and isinstance(value[0], dict):
            lines.append(f"{indent}{key}:")
            for item in value:
                lines.append(indent + "  - " + ", ".join(f"{k}={_fmt(v)}" for k, v in item.items()))
        else:
            lines.append(f"{indent}{key}: {_fmt(value)}")
    return "\n".join(lines)


def run_one(args, path):
    """Run the selected command on one input; returns (exit code, report or error dict)."""
    try:
        tf = parse_tensor_file(path, args.format, args.tol_sym, args.voigt_convention)
        report = COMMANDS[args.command](tf.tensor, args)
        report = {"input": str(path), "name": tf.name, "units": tf.units, "command": args.command, **report}
        code = EXIT_OK
        if args.command == "check" and not report["passed"]:
            code = EXIT_NUMERICAL
        return code, _plain(report)
    except ValidationError as exc:
        return EXIT_INVALID, {"input": str(path), "error": type(exc).__name__, "message": str(exc)}
    except (NumericalError, DevitensorError) as exc:
        return EXIT_NUMERICAL, {"input": str(path), "error": type(exc).__name__, "message": str(exc)}


def _run_star(item):
    return run_one(*item)


def build_parser():
    p = argparse.ArgumentParser(
        prog="devitensor",
        description="Deviatoric and multipole decomposition of tensors; anisotropy of stiffness tensors.",
    )
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    p.add_argument("command", choices=sorted(COMMANDS))
    p.add_argument("--input", "-i", nargs="+", required=True, metavar="PATH")
    p.add_argument("--format", "-f", required=True, choices=FORMATS)
    p.add_argument("--json", action="store_true", help="emit JSON instead of text")
    p.add_argument("--seed", type=int, default=0, help="root-finder restart seed (default 0)")
    p.add_argument("--voigt-convention", choices=("stress", "strain"), default="stress")
    p.add_argument(
        "--direction",
        nargs=3,
        type=float,
        action="append",
        metavar=("X", "Y", "Z"),
        help="direction for 'young' (repeatable, normalized automatically)",
    )
    p.add_argument("--jobs", "-j", type=int, default=1, help="worker processes for several inputs")
    tol = p.add_argument_group("tolerances")
    tol.add_argument("--tol-sym", type=float, default=TOL_ACCEPT)
    tol.add_argument("--tol-mirror", type=float, default=TOL_MIRROR)
    tol.add_argument("--tol-dir", type=float, default=TOL_DIR)
    tol.add_argument("--tol-zero", type=float, default=TOL_ZERO)
    tol.add_argument("--tol-root", type=float, default=TOL_ROOT)
    tol.add_argument("--tol-gap", type=float, default=TOL_GAP)
    return p


def _format_warning(message, category, filename, lineno, line=None):
    return f"devitensor: warning: {message}\n"


def main(argv=None):
    args = build_parser().parse_args(argv)
    warnings.formatwarning = _format_warning
    items = [(args, path) for path in args.input]
    if args.jobs > 1 and len(items) > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            results = list(pool.map(_run_star, items))
    else:
        results = [run_one(*item) for item in items]
    code = max(c for c, _ in results)
    reports = [r for _, r in results]
    for r in reports:
        if "error" in r:
            print(f"devitensor: {r['input']}: {r['error']}: {r['message']}", file=sys.stderr)
    if args.json:
        payload = reports[0] if len(reports) == 1 else reports
        sys.stdout.write(json.dumps(payload, sort_keys=True, indent=2) + "\n")
    else:
        for r in reports:
            if "error" not in r:
                print(render_text(r))
    return code


if __name__ == "__main__":
    sys.exit(main())
