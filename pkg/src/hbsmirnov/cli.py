"""Command-line front end: ``hbsmirnov <command> [--input FILE] [--output FILE] ...``.

Each run reads one JSON document and writes one JSON document.  Exit codes:
0 all certificates pass, 1 negative verdict, 2 invalid input, 3 numerical failure.
"""
from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from . import jsonout
from .battery import exit_code, run_battery
from .boundary import BoundaryGrid, as_function, parse_function_spec, parse_poly
from .config import RunConfig
from .errors import HbError, InvalidInput, NumericalError
from .poly import Poly
from .pythagoras import mate, pair_from_a1
from .space import decompose, gram_matrix, hb_norm, is_cyclic, is_multiplier, kernel_eval
from .smirnov import SmirnovFactorization, factor_h2, factor_hb, verify

SCHEMA_ID = "hbsmirnov/v1"
COMMANDS = (
    "mate", "decompose", "check-multiplier", "check-cyclic", "kernel",
    "factor", "factor-hb", "verify", "selftest",
)


# ---------------------------------------------------------------------------
# input helpers
# ---------------------------------------------------------------------------

def _need(doc, key):
    if not isinstance(doc, dict) or key not in doc:
        raise InvalidInput(f"input needs a '{key}' field")
    return doc[key]


def _fn(obj):
    if isinstance(obj, dict) and "type" not in obj and "coeffs" in obj:
        return as_function(parse_poly(obj))
    return parse_function_spec(obj)


def _rational_b(obj):
    from .rational import RationalFn

    f = _fn(obj)
    if isinstance(f, RationalFn):
        return f
    poly = getattr(f, "taylor", None)
    if poly is None or f.tailMass:
        raise InvalidInput("b must be a rational function or a polynomial")
    return RationalFn.from_poly(Poly(poly))


def _point(obj, what):
    try:
        re, im = obj
        return complex(float(re), float(im))
    except (TypeError, ValueError) as exc:
        raise InvalidInput(f"{what} must be a [re, im] pair") from exc


def _pair(doc, cfg):
    """Pythagorean pair from 'b', or from a prescribed boundary polynomial 'a1'."""
    if "b" in doc:
        return mate(_rational_b(doc["b"]), snap_tol=cfg.tolerances["snapTol"])
    if "a1" in doc:
        a1 = parse_poly(doc["a1"])
        if a1.is_zero():
            raise InvalidInput("a1 must be a nonzero polynomial")
        return pair_from_a1(a1)
    raise InvalidInput("input needs 'b' (rational function) or 'a1' (polynomial)")


# ---------------------------------------------------------------------------
# commands; each returns (result, exit_code)
# ---------------------------------------------------------------------------

def cmd_mate(doc, cfg):
    pair = mate(_rational_b(_need(doc, "b")), snap_tol=cfg.tolerances["snapTol"])
    c = pair.certificates
    ok = c["mateResidual"] <= cfg.tolerances["mate"] and c["a0"] > 0 and c["outerMargin"] >= 0
    return {"pair": pair, "pass": ok}, 0 if ok else 3


def cmd_decompose(doc, cfg):
    pair = _pair(doc, cfg)
    d = decompose(_fn(_need(doc, "f")), pair, cfg.tolerances["membership"], BoundaryGrid(cfg.gridSize))
    return {"a1": pair.a1, "N": pair.N, "decomposition": d, "hbNorm": hb_norm(d), "pass": True}, 0


def cmd_check_multiplier(doc, cfg):
    pair = _pair(doc, cfg)
    cert = is_multiplier(_fn(_need(doc, "phi")), pair, cfg.tolerances["membership"],
                         BoundaryGrid(cfg.gridSize))
    return {"a1": pair.a1, "multiplier": cert, "pass": cert.verdict}, 0 if cert.verdict else 1


def cmd_check_cyclic(doc, cfg):
    pair = _pair(doc, cfg)
    cert = is_cyclic(_fn(_need(doc, "psi")), pair, cfg.tolerances["membership"],
                     BoundaryGrid(cfg.gridSize))
    out = {"a1": pair.a1, "cyclicity": cert, "routesAgree": cert.routesAgree, "pass": cert.verdict}
    return out, 0 if cert.verdict else 1


def cmd_kernel(doc, cfg):
    b = _rational_b(_need(doc, "b"))
    if "points" in doc:
        pts = [_point(p, "point") for p in doc["points"]]
        if any(abs(p) >= 1 for p in pts):
            raise InvalidInput("kernel points must lie in the open unit disk")
        G = gram_matrix(b, pts)
        eig = float(np.min(np.linalg.eigvalsh((G + G.conj().T) / 2))) if pts else 0.0
        return {"gram": [[complex(x) for x in row] for row in G], "minEigenvalue": eig,
                "pass": eig >= -1e-9}, 0
    lam, z = _point(_need(doc, "lambda"), "lambda"), _point(_need(doc, "z"), "z")
    if abs(lam) >= 1 or abs(z) >= 1:
        raise InvalidInput("kernel points must lie in the open unit disk")
    return {"value": complex(kernel_eval(b, lam, z)), "pass": True}, 0


def cmd_factor(doc, cfg):
    h, p = _fn(_need(doc, "h")), parse_poly(_need(doc, "p"))
    fact = factor_h2(h, p, BoundaryGrid(cfg.gridSize), cfg.tolerances["factorization"], cfg.adaptive)
    out = {"input": {"h": doc["h"], "p": doc["p"]}, "factorization": fact, "pass": fact.passed}
    return out, 0 if fact.passed else 3


def cmd_factor_hb(doc, cfg):
    pair = _pair(doc, cfg)
    f = _fn(_need(doc, "f"))
    shortcut = doc.get("shortcut", True)
    if not isinstance(shortcut, bool):
        raise InvalidInput("shortcut must be true or false")
    res = factor_hb(f, pair, BoundaryGrid(cfg.gridSize), cfg.tolerances["factorization"], cfg.adaptive,
                    shortcut)
    out = {"a1": pair.a1, "N": pair.N, "result": res, "pass": res.passed}
    return out, 0 if res.passed else 3


def cmd_verify(doc, cfg):
    """Accepts the document written by ``factor`` (or its 'result' part)."""
    body = doc.get("result", doc) if isinstance(doc, dict) else doc
    inp, fact_doc = _need(body, "input"), _need(body, "factorization")
    h = _fn(_need(inp, "h"))
    try:
        fact = SmirnovFactorization.from_json(fact_doc)
    except (KeyError, TypeError, ValueError) as exc:
        raise InvalidInput(f"malformed factorization: {exc}") from exc
    report = verify(fact, h, cfg.tolerances["factorization"])
    return {"report": report, "pass": report.passed}, 0 if report.passed else 1


def cmd_selftest(doc, cfg, log=sys.stderr):
    crits = run_battery(cfg)
    for c in crits:
        print(c.line(), file=log)
    code = exit_code(crits)
    return {"criteria": crits, "pass": code == 0}, code


HANDLERS = {
    "mate": cmd_mate,
    "decompose": cmd_decompose,
    "check-multiplier": cmd_check_multiplier,
    "check-cyclic": cmd_check_cyclic,
    "kernel": cmd_kernel,
    "factor": cmd_factor,
    "factor-hb": cmd_factor_hb,
    "verify": cmd_verify,
    "selftest": cmd_selftest,
}


# ---------------------------------------------------------------------------
# dispatch
# ---------------------------------------------------------------------------

def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--grid", type=int, default=None, metavar="N", help="grid size (power of two)")
    common.add_argument("--tol", type=float, default=None, metavar="X", help="loosen tolerances to X")
    common.add_argument("--adaptive", action="store_true", help="double the grid on resolution failures")
    common.add_argument("--input", metavar="FILE", help="read JSON from FILE instead of stdin")
    common.add_argument("--output", metavar="FILE", help="write JSON to FILE instead of stdout")
    parser = argparse.ArgumentParser(prog="hbsmirnov", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        sub.add_parser(name, parents=[common])
    return parser


def _config(args):
    cfg = RunConfig(gridSize=args.grid or RunConfig().gridSize, adaptive=args.adaptive,
                    outputPath=args.output)
    if args.tol is not None:
        cfg = cfg.with_tol(args.tol)
    return cfg


def _read_input(args, stdin):
    if args.command == "selftest" and args.input is None:
        return {}
    try:
        text = open(args.input, encoding="utf-8").read() if args.input else stdin.read()
    except OSError as exc:
        raise InvalidInput(f"cannot read input: {exc}") from exc
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InvalidInput(f"malformed JSON: {exc}") from exc


def run(argv=None, stdin=None, stdout=None, stderr=None):
    """Execute one command; returns (document, exit code) and writes the document."""
    stdin, stdout, stderr = stdin or sys.stdin, stdout or sys.stdout, stderr or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return None, 2 if exc.code else 0
    doc = {"schema": SCHEMA_ID, "command": args.command}
    try:
        cfg = _config(args)
        data = _read_input(args, stdin)
        handler = HANDLERS[args.command]
        if args.command == "selftest":
            result, code = handler(data, cfg, log=stderr)
        else:
            result, code = handler(data, cfg)
        doc["config"] = {"gridSize": cfg.gridSize, "adaptive": cfg.adaptive, "tolerances": cfg.tolerances}
        doc["result"] = result
    except HbError as exc:
        doc["error"] = {"kind": exc.kind, "detail": exc.detail}
        code = exc.exit_code
    except (np.linalg.LinAlgError, FloatingPointError, OverflowError) as exc:
        doc["error"] = {"kind": "NumericalError", "detail": str(exc)}
        code = NumericalError.exit_code
    except (ValueError, TypeError, KeyError, ZeroDivisionError) as exc:
        doc["error"] = {"kind": "InvalidInput", "detail": f"{type(exc).__name__}: {exc}"}
        code = InvalidInput.exit_code
    text = jsonout.dumps(doc)
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        stdout.write(text)
    return doc, code


def main(argv=None):
    _, code = run(argv)
    return code


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
