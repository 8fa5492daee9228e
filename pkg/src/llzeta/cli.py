"""Command line: point evaluation, grid sweeps, residues, monodromies, abscissae, verification suites."""

import argparse
from concurrent.futures import ThreadPoolExecutor
import csv
import io
import json
import math
import sys
import time

import numpy as np

from . import __version__
from .analytic import monodromy_a_formula, monodromy_a_numeric, monodromy_z_formula, monodromy_z_numeric, residue_formula, residue_numeric
from .contour import ContourSpec, eval_zeta_k
from .errors import LLZetaError
from .series import PeriodicParams, abscissa_estimate
from .verify import SUITES, run_suite

CSV_FIELDS = ("re_s", "im_s", "re", "im", "err", "method", "pole", "re_residue", "im_residue")

# config key -> value parser; None keeps the raw value
_OPTIONS = {
    "k": int, "a": None, "z": None, "s": None, "s_grid": None, "tol": float, "rho": float, "ray_len": float,
    "nodes": int, "trunc_N": int, "order_M": int, "format": None, "out": None, "seed": int, "jobs": int,
    "method": None, "j": int, "p_block": int, "l": int, "variable": None, "coef": None, "lam": None,
}
_DEFAULTS = {"k": 1, "a": "0", "z": "0", "tol": 1e-10, "format": "json", "seed": 0, "jobs": 4, "method": "auto",
             "j": 1, "p_block": 0, "l": 0, "variable": "z", "trunc_N": 100000, "coef": "ones", "lam": "log"}


class UsageError(Exception):
    pass


def _num(x):
    return float(repr(float(x)))


def _complex(text, field):
    try:
        return complex(text.strip().replace("i", "j"))
    except ValueError:
        raise UsageError(f"{field}: cannot parse {text!r} as a complex number") from None


def _list(text, field):
    return [t for t in str(text).split(",") if t.strip()]


def params_from(cfg):
    k = cfg["k"]
    if k < 1:
        raise UsageError("k: must be a positive integer")
    a = _list(cfg["a"], "a")
    z = [_complex(t, "z") for t in _list(cfg["z"], "z")]
    if len(a) == 1:
        a = a * k
    if len(z) == 1:
        z = z * k
    if len(a) != k:
        raise UsageError(f"a: expected {k} entries, got {len(a)}")
    if len(z) != k:
        raise UsageError(f"z: expected {k} entries, got {len(z)}")
    try:
        return PeriodicParams(k, tuple(x.strip() for x in a), tuple(z))
    except (ValueError, ZeroDivisionError) as e:
        raise UsageError(f"a: {e}") from None


def contour_spec(cfg):
    kw = {}
    if cfg.get("rho") is not None:
        kw["rho"] = cfg["rho"]
    if cfg.get("ray_len") is not None:
        kw["ray_len"] = cfg["ray_len"]
    if cfg.get("nodes") is not None:
        kw["circle_nodes"] = kw["ray_nodes"] = cfg["nodes"]
    if not kw:
        return None
    try:
        return ContourSpec(**kw)
    except ValueError as e:
        raise UsageError(f"rho: {e}") from None


def parse_grid(text):
    """"remin:remax:n,immin:immax:n" -> (re values, im values)."""
    try:
        parts = [p.split(":") for p in text.split(",")]
        (r0, r1, rn), (i0, i1, im) = parts
        rn, im = int(rn), int(im)
        r0, r1, i0, i1 = map(float, (r0, r1, i0, i1))
    except ValueError:
        raise UsageError(f"s_grid: expected remin:remax:n,immin:immax:n, got {text!r}") from None
    if rn < 1 or im < 1 or not all(map(math.isfinite, (r0, r1, i0, i1))):
        raise UsageError("s_grid: bounds must be finite and counts positive")
    return np.linspace(r0, r1, rn), np.linspace(i0, i1, im)


def _record(s, res):
    rec = {"re_s": _num(s.real), "im_s": _num(s.imag)}
    if res.is_pole:
        r = complex(res.residue)
        rec.update(re=None, im=None, err=_num(res.err), method=res.method, pole=True,
                   re_residue=_num(r.real), im_residue=_num(r.imag))
    else:
        v = complex(res.value)
        rec.update(re=_num(v.real), im=_num(v.imag), err=_num(res.err), method=res.method, pole=False,
                   re_residue=None, im_residue=None)
    return rec


def _evaluate_points(cfg, points):
    p = params_from(cfg)
    spec = contour_spec(cfg)
    method = cfg["method"]
    if method not in ("auto", "series", "contour"):
        raise UsageError("method: must be auto, series or contour")

    def one(s):
        return _record(s, eval_zeta_k(p, s, cfg["tol"], spec=spec, method=method))

    with ThreadPoolExecutor(max_workers=max(1, cfg["jobs"])) as ex:
        return list(ex.map(one, points))  # map keeps input order


def cmd_eval(cfg):
    if cfg.get("s") is None:
        raise UsageError("s: required for eval")
    points = [_complex(t, "s") for t in _list(cfg["s"], "s")]
    return _evaluate_points(cfg, points)


def cmd_grid(cfg):
    if cfg.get("s_grid") is None:
        raise UsageError("s_grid: required for grid")
    re, im = parse_grid(cfg["s_grid"])
    points = [complex(x, y) for x in re for y in im]  # row-major: Re s outer
    return _evaluate_points(cfg, points)


def cmd_residue(cfg):
    p = params_from(cfg)
    f = residue_formula(p)
    n = residue_numeric(p, tol=min(cfg["tol"], 1e-12))
    return [{"quantity": "residue", "re": _num(n.real), "im": _num(n.imag), "err": _num(abs(n - f)),
             "method": "contour", "re_formula": _num(f.real), "im_formula": _num(f.imag)}]


def cmd_monodromy(cfg):
    p = params_from(cfg)
    if cfg.get("s") is None:
        raise UsageError("s: required for monodromy")
    out = []
    for s in (_complex(t, "s") for t in _list(cfg["s"], "s")):
        if cfg["variable"] == "z":
            f = monodromy_z_formula(p, s, cfg["j"], cfg["p_block"])
            r = monodromy_z_numeric(p, s, cfg["j"], cfg["p_block"])
            n, method = r.value, r.method
        elif cfg["variable"] == "a":
            f = monodromy_a_formula(p, s, cfg["j"], cfg["l"])
            n = monodromy_a_numeric(p, s, cfg["j"], cfg["l"])
            # the contour difference is a closed loop, so it carries 2 pi i times the closed form
            res = n / (2j * math.pi)
            out.append({"re_s": _num(s.real), "im_s": _num(s.imag), "re": _num(n.real), "im": _num(n.imag),
                        "re_over_2pii": _num(res.real), "im_over_2pii": _num(res.imag), "err": _num(abs(res - f)),
                        "method": "contour", "re_formula": _num(f.real), "im_formula": _num(f.imag)})
            continue
        else:
            raise UsageError("variable: must be z or a")
        out.append({"re_s": _num(s.real), "im_s": _num(s.imag), "re": _num(n.real), "im": _num(n.imag),
                    "err": _num(abs(n - f)), "method": method, "re_formula": _num(f.real), "im_formula": _num(f.imag)})
    return out


_COEFS = {"ones": lambda n: np.ones(n.size), "alternating": lambda n: np.where(n % 2 == 1, 1.0, -1.0)}
_LAMS = {"log": lambda n: np.log(n), "linear": lambda n: n.astype(np.float64), "sqrt": lambda n: np.sqrt(n)}


def cmd_abscissa(cfg):
    try:
        a, lam = _COEFS[cfg["coef"]], _LAMS[cfg["lam"]]
    except KeyError as e:
        raise UsageError(f"coef/lam: unknown family {e.args[0]!r}") from None
    N = cfg["trunc_N"]
    if N < 100:
        raise UsageError("trunc_N: need at least 100 terms")
    est = abscissa_estimate(a, lam, N)
    coarse = abscissa_estimate(a, lam, N // 10)
    # drift between the N/10 and N windows stands in for an error estimate
    drift = abs(est.sigma - coarse.sigma) if math.isfinite(est.sigma) and math.isfinite(coarse.sigma) else math.inf
    return [{"quantity": "abscissa", "sigma": _num(est.sigma), "branch": est.branch, "n_max": N,
             "err": _num(drift), "method": "series"}]


def _write(records, cfg, stream):
    if cfg["format"] == "csv":
        buf = io.StringIO()
        w = csv.DictWriter(buf, fieldnames=CSV_FIELDS if set(records[0]) <= set(CSV_FIELDS) else list(records[0]),
                           lineterminator="\n", extrasaction="ignore")
        w.writeheader()
        for r in records:
            w.writerow({k: ("" if v is None else v) for k, v in r.items()})
        stream.write(buf.getvalue())
    elif cfg["format"] == "json":
        for r in records:
            stream.write(json.dumps(r, sort_keys=True) + "\n")
    else:
        raise UsageError("format: must be json or csv")


def build_parser():
    ap = argparse.ArgumentParser(prog="llzeta", description=__doc__)
    ap.add_argument("--version", action="version", version=__version__)
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--config", help="JSON file mirroring the flags; flags win")
        p.add_argument("--k", type=int)
        p.add_argument("--a", help='comma list; "p/q" entries are exact rationals')
        p.add_argument("--z", help="comma list of complex numbers")
        p.add_argument("--tol", type=float)
        p.add_argument("--rho", type=float)
        p.add_argument("--ray-len", dest="ray_len", type=float)
        p.add_argument("--nodes", type=int)
        p.add_argument("--trunc-N", dest="trunc_N", type=int)
        p.add_argument("--order-M", dest="order_M", type=int)
        p.add_argument("--format", choices=("json", "csv"))
        p.add_argument("--out")
        p.add_argument("--seed", type=int)
        p.add_argument("--jobs", type=int)
        return p

    e = common(sub.add_parser("eval", help="evaluate zeta_k at points"))
    e.add_argument("--s", help="comma list of complex points")
    e.add_argument("--method", choices=("auto", "series", "contour"))
    g = common(sub.add_parser("grid", help="rectangular s-grid sweep"))
    g.add_argument("--s-grid", dest="s_grid")
    g.add_argument("--method", choices=("auto", "series", "contour"))
    common(sub.add_parser("residue", help="residue at s = 1, formula and circle integral"))
    m = common(sub.add_parser("monodromy", help="z- or a-monodromy, formula and numeric"))
    m.add_argument("--s")
    m.add_argument("--variable", choices=("z", "a"))
    m.add_argument("--j", type=int)
    m.add_argument("--p-block", dest="p_block", type=int)
    m.add_argument("--l", type=int)
    a = common(sub.add_parser("abscissa", help="abscissa of convergence estimate"))
    a.add_argument("--coef", choices=sorted(_COEFS))
    a.add_argument("--lam", choices=sorted(_LAMS))
    v = common(sub.add_parser("verify", help="run a seeded property suite"))
    v.add_argument("suite", choices=sorted(SUITES))
    return ap


def resolve_config(ns):
    """Defaults < config file < flags."""
    cfg = dict(_DEFAULTS)
    if getattr(ns, "config", None):
        try:
            with open(ns.config) as fh:
                data = json.load(fh)
        except (OSError, json.JSONDecodeError) as e:
            raise UsageError(f"config: {e}") from None
        for key, val in data.items():
            key = key.replace("-", "_")
            if key not in _OPTIONS:
                raise UsageError(f"{key}: unknown config field")
            conv = _OPTIONS[key]
            if isinstance(val, list):
                val = ",".join(str(x) for x in val)
            try:
                cfg[key] = conv(val) if conv is not None and val is not None else val
            except (TypeError, ValueError):
                raise UsageError(f"{key}: bad value {val!r}") from None
    for key in _OPTIONS:
        val = getattr(ns, key, None)
        if val is not None:
            cfg[key] = val
    if not cfg["tol"] > 0:
        raise UsageError("tol: must be positive")
    for key in ("a", "z", "s"):
        if cfg.get(key) is not None:
            cfg[key] = str(cfg[key])
    return cfg


_COMMANDS = {"eval": cmd_eval, "grid": cmd_grid, "residue": cmd_residue, "monodromy": cmd_monodromy,
             "abscissa": cmd_abscissa}


def _manifest(cfg, command, records, wall):
    errs = [r["err"] for r in records if r.get("err") is not None]
    methods = {}
    for r in records:
        methods[r.get("method")] = methods.get(r.get("method"), 0) + 1
    return {"command": command, "config": cfg, "version": __version__, "records": len(records),
            "methods": methods, "poles": sum(1 for r in records if r.get("pole")),
            "max_err": max(errs) if errs else None, "wall_time_s": wall}


def main(argv=None):
    ap = build_parser()
    ns = ap.parse_args(argv)
    try:
        cfg = resolve_config(ns)
        t0 = time.perf_counter()
        if ns.command == "verify":
            rep = run_suite(ns.suite, cfg["seed"], getattr(ns, "tol", None), N=ns.trunc_N, M=ns.order_M)
            out = open(cfg["out"], "w") if cfg.get("out") else sys.stdout
            try:
                for line in rep.lines():
                    out.write(line + "\n")
                out.write(f"{ns.suite} seed={cfg['seed']}: {'PASS' if rep.passed else 'FAIL'} "
                          f"({len(rep.checks)} checks, max defect {rep.max_defect:.3e})\n")
            finally:
                if out is not sys.stdout:
                    out.close()
            return 0 if rep.passed else 1
        records = _COMMANDS[ns.command](cfg)
        wall = time.perf_counter() - t0
        if cfg.get("out"):
            with open(cfg["out"], "w", newline="") as fh:
                _write(records, cfg, fh)
            with open(cfg["out"] + ".manifest.json", "w") as fh:
                json.dump(_manifest(cfg, ns.command, records, wall), fh, indent=2, sort_keys=True)
        else:
            _write(records, cfg, sys.stdout)
            sys.stderr.write(json.dumps(_manifest(cfg, ns.command, records, wall), sort_keys=True) + "\n")
        return 0
    except UsageError as e:
        ap.error(str(e))
    except LLZetaError as e:
        sys.stderr.write(f"llzeta: {type(e).__name__}: {e}\n")
        return 3


if __name__ == "__main__":
    sys.exit(main())
