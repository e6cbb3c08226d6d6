"""jacobi-gmd: command-line access to the connection, fields, series and checks."""
from __future__ import annotations

import argparse
import json
import os
import random
import sys
from dataclasses import dataclass
from fractions import Fraction

from . import gauss_manin as gm
from . import jacobi_series as js
from . import vector_fields as vf
from .algebra import DELTA_POLY, parse_ring

COMMANDS = ("gm", "fields", "bracket", "series", "act", "serre", "tau-locus", "verify")
DEFAULT_ORDER = 20


@dataclass
class CliConfig:
    command: str
    order: int = DEFAULT_ORDER
    format: str = "json"
    out: str | None = None

    def __post_init__(self):
        if self.command not in COMMANDS:
            raise ValueError(f"unknown command {self.command!r}")
        if self.order < 0:
            raise ValueError("order must be >= 0")
        if self.format not in ("json", "text"):
            raise ValueError("format must be json or text")


def _default_order():
    env = os.environ.get("JACOBI_GMD_ORDER")
    if env is None:
        return DEFAULT_ORDER
    try:
        return int(env)
    except ValueError:
        return DEFAULT_ORDER


def _order(s):
    n = int(s)
    if n < 0:
        raise argparse.ArgumentTypeError("order must be >= 0")
    return n


def _rationals(s):
    try:
        return [Fraction(x) for x in s.split(",")]
    except (ValueError, ZeroDivisionError) as e:
        raise argparse.ArgumentTypeError(str(e)) from None


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--order", type=_order, default=None)
    common.add_argument("--format", choices=("json", "text"), default="json")
    common.add_argument("--out", default=None)

    p = argparse.ArgumentParser(prog="jacobi-gmd", description=__doc__)
    sub = p.add_subparsers(dest="command", required=True)
    g = sub.add_parser("gm", parents=[common], help="Gauss-Manin connection matrix")
    g.add_argument("--basis", choices=("omega", "alpha"), default="alpha")
    sub.add_parser("fields", parents=[common], help="R_tau and R_z")
    sub.add_parser("bracket", parents=[common], help="[R_tau, R_z]")
    s = sub.add_parser("series", parents=[common], help="q-expansions")
    s.add_argument("name", choices=js.SERIES_NAMES)
    a = sub.add_parser("act", parents=[common], help="group action on a point")
    a.add_argument("--point", type=_rationals, default=[Fraction(1), Fraction(1), 0, 0, 0])
    a.add_argument("--group", type=_rationals, default=[Fraction(2), 0, 0],
                   help="k,k',v")
    r = sub.add_parser("serre", parents=[common], help="Serre and Serre-Jacobi derivatives")
    r.add_argument("--expr", action="append", default=None)
    sub.add_parser("tau-locus", parents=[common], help="constant matrices along the tau-locus")
    sub.add_parser("verify", parents=[common], help="run every check")
    return p


# -- commands -----------------------------------------------------------------

def run_gm(basis):
    if basis not in ("omega", "alpha"):
        raise ValueError(basis)
    M = gm.build_B() if basis == "omega" else gm.build_A()
    return {"basis": basis, "matrix": M.to_json()}


def run_fields():
    return {"R_tau": vf.R_tau().to_json(), "R_z": vf.R_z().to_json()}


def run_bracket():
    br = vf.lie_bracket(vf.R_tau(), vf.R_z())
    return {"bracket": br.to_json(), "zero": br.is_zero()}


def run_series(name, order):
    if name not in js.SERIES_NAMES:
        raise KeyError(name)
    obj = js.named_series(name, order)
    signs = js.PINNED_SIGNS.as_dict()
    if name == "tuple":
        return {"name": name, "order": order, "signs": signs,
                "series": {f: getattr(obj, f).to_json() for f in ("a", "b", "c", "t1", "t2", "t3")}}
    return {"name": name, "signs": signs, **obj.to_json()}


def run_act(point, group):
    if len(point) != 5 or len(group) != 3:
        raise ValueError("point needs five values and group three")
    g = gm.GroupElement(*group)
    return {"point": [str(x) for x in point],
            "group": {"k": str(g.k), "kp": str(g.kp), "v": str(g.v)},
            "result": [str(x) for x in gm.group_act(point, g)]}


SERRE_TABLE = (("S", "t1"), ("S", "t2"), ("S", "t3"), ("J", "a"), ("J", "b"), ("J", "c"), ("J", "t1"))


def run_serre(exprs=None):
    rows = []
    items = SERRE_TABLE if not exprs else [tuple(e.split(":", 1)) if ":" in e else ("J", e) for e in exprs]
    for kind, text in items:
        if kind not in ("S", "J"):
            raise ValueError(f"unknown derivative kind {kind!r}")
        f = vf.GradedPoly.of(parse_ring(text))
        out = vf.serre_derivative(f) if kind == "S" else vf.serre_jacobi(f)
        rows.append({"kind": kind, "input": f.to_json(), "output": out.to_json()})
    return {"derivatives": rows}


def run_tau_locus():
    c_tau, c_z = gm.tau_locus_constants()
    def fmt(M):
        return [[str(x) for x in r] for r in M]
    return {"C_tau": fmt(c_tau), "C_z": fmt(c_z)}


def _group_axioms(n=50, seed=0):
    rng = random.Random(seed)
    def q():
        return Fraction(rng.randint(-9, 9), rng.randint(1, 5))
    def nz():
        x = q()
        return x if x else Fraction(1)
    checked = 0
    while checked < n:
        t = [q() for _ in range(5)]
        if DELTA_POLY.evaluate(t) == 0:
            continue
        g1 = gm.GroupElement(nz(), q(), q())
        g2 = gm.GroupElement(nz(), q(), q())
        if gm.group_act(t, gm.IDENTITY_ELEMENT) != tuple(t):
            return False
        if gm.group_act(gm.group_act(t, g1), g2) != gm.group_act(t, g1 * g2):
            return False
        if not g1.preserves_pairing():
            return False
        checked += 1
    return True


def symbolic_checks():
    """(name, thunk) pairs in reporting order."""
    def cross():
        return gm.build_A() == gm.change_basis(gm.build_B(), gm.frame_change())

    def flat():
        return gm.is_flat(gm.build_A()) and gm.is_flat(gm.build_B())

    def round_trip():
        A = gm.build_A()
        ok = True
        for C, closed in ((gm.C_TAU, vf.R_tau_closed()), (gm.C_Z, vf.R_z_closed())):
            v = vf.solve_modular(C, A)
            want = gm.mat(C)
            ok = ok and v == closed and gm.contract(A, v) == want
        return ok

    def bracket():
        return vf.lie_bracket(vf.R_tau_closed(), vf.R_z_closed()).is_zero()

    def tau():
        c_tau, c_z = gm.tau_locus_constants()
        f = lambda M: tuple(tuple(Fraction(x) for x in r) for r in M)
        return c_tau == f(gm.C_TAU) and c_z == f(gm.C_Z)

    return (
        ("A=change_basis(B,S)", cross),
        ("curvature=0", flat),
        ("solve_modular round-trip", round_trip),
        ("bracket=0", bracket),
        ("tau-locus constants", tau),
        ("group action axioms", _group_axioms),
    )


def run_verify(order):
    checks = []
    for name, fn in symbolic_checks():
        try:
            ok = bool(fn())
            err = None
        except Exception as e:  # a broken build should be reported, not crash the run
            ok, err = False, f"{type(e).__name__}: {e}"
        checks.append({"name": name, "ok": ok, **({"error": err} if err else {})})
    series = js.verify_all(order)
    for name in js.RESIDUAL_NAMES:
        e = series["residuals"][name]
        entry = {"name": f"series {name}", "ok": e["ok"]}
        if not e["ok"]:
            entry["first_nonzero"] = e["first_nonzero"]
            entry["coefficient"] = e["coefficient"]
        checks.append(entry)
    failing = [c["name"] for c in checks if not c["ok"]]
    report = {
        "order": order,
        "signs": series["signs"],
        "sign_solutions": [s.as_dict() for s in js.pin_signs(min(order, 5))] if order >= 1 else None,
        "curvature_sign": gm.CURVATURE_SIGN,
        "checks": checks,
        "ok": not failing,
        "first_failure": failing[0] if failing else None,
    }
    return report, (0 if not failing else 1)


# -- output -------------------------------------------------------------------

def _text(obj, prefix=""):
    lines = []
    if isinstance(obj, dict):
        for k, v in obj.items():
            lines += _text(v, f"{prefix}.{k}" if prefix else str(k))
    elif isinstance(obj, list) and obj and isinstance(obj[0], (dict, list)):
        for i, v in enumerate(obj):
            lines += _text(v, f"{prefix}[{i}]")
    elif isinstance(obj, list):
        lines.append(f"{prefix} = [" + ", ".join(str(x) for x in obj) + "]")
    else:
        lines.append(f"{prefix} = {obj}")
    return lines


def render(obj, fmt):
    if fmt == "json":
        return json.dumps(obj, indent=2, sort_keys=False) + "\n"
    return "\n".join(_text(obj)) + "\n"


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    cfg = CliConfig(args.command, args.order if args.order is not None else _default_order(),
                    args.format, args.out)
    status = 0
    try:
        if cfg.command == "gm":
            obj = run_gm(args.basis)
        elif cfg.command == "fields":
            obj = run_fields()
        elif cfg.command == "bracket":
            obj = run_bracket()
        elif cfg.command == "series":
            obj = run_series(args.name, cfg.order)
        elif cfg.command == "act":
            obj = run_act(args.point, args.group)
        elif cfg.command == "serre":
            obj = run_serre(args.expr)
        elif cfg.command == "tau-locus":
            obj = run_tau_locus()
        else:
            obj, status = run_verify(cfg.order)
    except (ValueError, KeyError, ArithmeticError) as e:
        print(f"jacobi-gmd: error: {e}", file=sys.stderr)
        return 2
    text = render(obj, cfg.format)
    if cfg.out:
        with open(cfg.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    if status:
        print(f"jacobi-gmd: check failed: {obj['first_failure']}", file=sys.stderr)
    return status


if __name__ == "__main__":
    sys.exit(main())
