"""Command line: verification sweeps and single evaluations.

    wskernels verify --config run.json [--suite theorem11] [--jobs 4] [--out reports/]
    wskernels eval coeff_C rho=0 mu=0.2 d=1

Exit codes: 0 all pass, 1 some record failed, 2 bad input, 3 numerical error.
"""
from __future__ import annotations

import argparse
import csv
import io
import itertools
import json
import math
import os
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np

from . import closed_forms as cf
from . import kernels as kn
from . import special as spc
from .errors import (ConfigError, InputError, NumericalError, RangeError, SingularityError,
                     UnknownEvaluator)
from .kernels import OrderPair

SUITES = ("theorem11", "cor13", "theorem15", "prop32", "lemma43", "appendix", "theorem16",
          "realline")
TOLERANCES = {
    "theorem11": 1e-3, "cor13": 1e-3, "theorem15": 1e-3, "prop32": 1e-8, "lemma43": 1e-4,
    "appendix": 1e-3, "theorem16": 1e-3, "realline": 1e-4,
}
ABS_FLOOR = 1e-9
ALIASES = {"ρ": "rho", "μ": "mu", "ν": "nu", "θ": "theta", "σ": "sigma", "κ": "k"}

DEFAULT_GRIDS = {
    "theorem11": {"rho": [0.3], "mu": [0.1, "0.2j"], "d": [0, 1], "y": [1.5, 3.0], "theta": [0.7]},
    "cor13": {"rho": [0.3], "mu": [0.1], "d": [0, 1, 0.5]},
    "theorem15": {"mu": ["0.15j", "0.3j"], "d": [0], "y": [1.2, 3.0], "theta": [0.4]},
    "prop32": {"rho": [0.3], "mu": [0.1], "d": [1], "u": ["0.4+0.3j", "-0.5j", "1.5+1j"]},
    "lemma43": {"nu": [0.25, "0.3+0.1j"], "m": [0, 1, 2], "y": [1.0], "theta": [0.0]},
    "appendix": {"rho": [0.3], "mu": [0.1], "d": [0, 0.5], "m": [1, 2], "trig": ["cos", "sin"],
                 "y": [1.3, 2.6], "theta": [0.5]},
    "theorem16": {"k": [2.5, 3.0, 5.0], "h": [1.0]},
    "realline": {"kind": ["reg_D", "reg_M"], "t": [0.3, 0.7], "y": [3.0], "sign": [1]},
}
INTEGER_KEYS = {"m", "sign"}
STRING_KEYS = {"trig", "kind"}


# --------------------------------------------------------------------------
# parsing


def parse_number(v):
    """Numbers from JSON or the command line: 0.3, "0.2j", "1/2", [re, im]."""
    if isinstance(v, bool):
        raise ConfigError(f"not a number: {v!r}")
    if isinstance(v, (int, float, complex)):
        return v
    if isinstance(v, (list, tuple)) and len(v) == 2:
        return complex(float(v[0]), float(v[1]))
    if isinstance(v, str):
        s = v.strip().replace(" ", "").replace("i", "j")
        if "/" in s:
            num, den = s.split("/", 1)
            return float(num) / float(den)
        try:
            return int(s)
        except ValueError:
            pass
        try:
            return float(s)
        except ValueError:
            pass
        try:
            return complex(s)
        except ValueError:
            pass
    raise ConfigError(f"not a number: {v!r}")


def _canonical(key: str) -> str:
    return ALIASES.get(key, key)


@dataclass
class RunConfig:
    suites: dict
    quad: dict = field(default_factory=dict)
    seed: int = 0
    jitter: float = 0.0
    skip_invalid: bool = True

    @classmethod
    def from_json(cls, doc: dict, suite: str | None = None) -> "RunConfig":
        if not isinstance(doc, dict):
            raise ConfigError("config must be a JSON object")
        unknown = set(doc) - {"suites", "quad", "seed", "jitter", "skip_invalid"}
        if unknown:
            raise ConfigError(f"unknown config keys: {sorted(unknown)}")
        grids = doc.get("suites", {})
        if not isinstance(grids, dict):
            raise ConfigError("'suites' must map suite names to grids")
        for name in grids:
            if name not in SUITES:
                raise ConfigError(f"unknown suite {name!r}")
        if suite is not None and suite != "all":
            if suite not in SUITES:
                raise ConfigError(f"unknown suite {suite!r}")
            grids = {suite: grids.get(suite, {})}
        elif suite == "all" or "suites" not in doc:
            grids = {s: grids.get(s, {}) for s in SUITES}
        parsed = {}
        for name, grid in grids.items():
            if not isinstance(grid, dict):
                raise ConfigError(f"grid for {name} must be an object")
            parsed[name] = {}
            # keys the config leaves out fall back to the default grid
            merged = dict(DEFAULT_GRIDS[name])
            merged.update({_canonical(k): v for k, v in grid.items()})
            for key, values in merged.items():
                if not isinstance(values, list):
                    raise ConfigError(f"grid entry {name}.{key} must be a list")
                k = _canonical(key)
                if k in STRING_KEYS:
                    parsed[name][k] = [str(v) for v in values]
                else:
                    parsed[name][k] = [parse_number(v) for v in values]
        seed = doc.get("seed", 0)
        if not isinstance(seed, int):
            raise ConfigError("seed must be an integer")
        quad = doc.get("quad", {})
        from .quadrature import QuadConfig

        try:
            QuadConfig(**quad)
        except TypeError as exc:
            raise ConfigError(f"bad quad overrides: {exc}") from None
        return cls(parsed, quad, seed, float(doc.get("jitter", 0.0)),
                   bool(doc.get("skip_invalid", True)))


# --------------------------------------------------------------------------
# records


@dataclass
class VerificationRecord:
    suite: str
    params: dict
    lhs: complex | None
    rhs: complex | None
    abs_err: float | None
    rel_err: float | None
    err_estimate: float | None
    status: str
    wall_time: float
    reason: str = ""


def _param_key(params: dict):
    out = []
    for k in sorted(params):
        v = params[k]
        if isinstance(v, str):
            out.append((k, 0, 0.0, v))
        else:
            c = complex(v)
            out.append((k, c.real, c.imag, ""))
    return tuple(out)


def _fmt(v) -> str:
    if isinstance(v, str):
        return v
    c = complex(v)
    if c.imag == 0:
        return repr(float(c.real)) if isinstance(v, (float, complex)) else str(v)
    return f"{c.real!r}{c.imag:+}j"


def _expand(name: str, grid: dict, rng, jitter: float):
    keys = sorted(grid)
    points = []
    for combo in itertools.product(*(grid[k] for k in keys)):
        params = dict(zip(keys, combo))
        if jitter:
            for k in keys:
                v = params[k]
                if k in INTEGER_KEYS or k in STRING_KEYS or k == "d" or isinstance(v, int):
                    continue
                params[k] = v + jitter * float(rng.uniform(-1, 1))
        points.append(params)
    return points


def _pair(p):
    return OrderPair.of(p.get("mu", 0.0), p.get("d", 0))


def _target(p):
    return cf.TargetPoint(float(p.get("y", 1.0)), float(p.get("theta", 0.0)) % (2 * math.pi))


def _validate(suite: str, p: dict):
    """Strip and domain checks done before any numerics; raises InputError."""
    from .quadrature import _check_strip

    if suite == "theorem11":
        _check_strip("J", p["rho"], _pair(p), 0, p["y"])
    elif suite == "cor13":
        _check_strip("J", p["rho"], _pair(p), 0, 2.0)
    elif suite == "theorem15":
        _check_strip("M", 0.0, _pair(p), 0, p["y"])
    elif suite == "lemma43":
        _check_strip("unit", p["nu"], OrderPair(0, 0), int(p["m"]), p["y"])
    elif suite == "appendix":
        _check_strip("J", p["rho"], _pair(p), int(p["m"]), p["y"])
    elif suite == "theorem16":
        if not abs(complex(p["k"])) > 2:
            raise RangeError("need |k| > 2")
    elif suite == "realline":
        if p["kind"] not in ("reg_D", "reg_M"):
            raise ConfigError(f"unknown real-line kind {p['kind']!r}")
        if p["kind"] == "reg_D" and not p["y"] > 2:
            raise RangeError("reg_D check runs at y > 2")


def _evaluate_point(suite: str, p: dict, quad: dict):
    """Returns (lhs, rhs, err_estimate)."""
    from . import quadrature as qd
    from . import transforms as tr

    cfg = qd.QuadConfig(**quad)
    if suite == "theorem11":
        r = qd.lhs_double_integral("J", p["rho"], _pair(p), _target(p), cfg=cfg)
        return r.value, cf.rhs_general_WS(p["rho"], _pair(p), _target(p)), r.err_estimate
    if suite == "cor13":
        t = cf.TargetPoint(2.0, 0.0)
        r = qd.lhs_double_integral("J", p["rho"], _pair(p), t, cfg=cfg)
        return r.value, cf.rhs_cor13(p["rho"], _pair(p)), r.err_estimate
    if suite == "theorem15":
        r = qd.lhs_double_integral("M", 0.0, _pair(p), _target(p), cfg=cfg)
        return r.value, cf.rhs_special_WS(_pair(p), _target(p)), r.err_estimate
    if suite == "prop32":
        u = complex(p["u"])
        return (cf.prop32_lhs(p["rho"], _pair(p), u), cf.rhs_prop32(p["rho"], _pair(p), u), 0.0)
    if suite == "lemma43":
        r = qd.lhs_double_integral("unit", p["nu"], OrderPair(0, 0), _target(p), cfg=cfg,
                                   twist=int(p["m"]))
        return r.value, cf.rhs_lemma43(p["nu"], int(p["m"]), _target(p)), r.err_estimate
    if suite == "appendix":
        mode = cf.AppendixMode(int(p["m"]), p["trig"])
        r = qd.lhs_double_integral("J", p["rho"], _pair(p), _target(p), mode=mode, cfg=cfg,
                                   check_tol=False)
        return r.value, cf.rhs_appendix(p["rho"], _pair(p), mode, _target(p)), r.err_estimate
    if suite == "theorem16":
        h = tr.TestFunction.gaussian(float(p.get("h", 1.0)))
        return tr.lhs_theorem16(h, p["k"]), tr.rhs_theorem16(h, p["k"]), 0.0
    if suite == "realline":
        nu = 2j * float(p["t"])
        kind = "D" if p["kind"] == "reg_D" else "M"
        sign = int(p.get("sign", 1))
        r = tr.real_line_integral(kind, nu, float(p["y"]), sign)
        return r.value, cf.rhs_real_line(p["kind"], nu, float(p["y"]), sign), r.err_estimate
    raise ConfigError(f"unknown suite {suite!r}")


def _run_point(args):
    suite, params, quad, skip_invalid = args
    start = time.perf_counter()
    try:
        _validate(suite, params)
    except InputError as exc:
        if skip_invalid:
            return VerificationRecord(suite, params, None, None, None, None, None,
                                      "skipped-singular", time.perf_counter() - start,
                                      "strip")
        raise
    try:
        lhs, rhs, est = _evaluate_point(suite, params, quad)
    except SingularityError as exc:
        return VerificationRecord(suite, params, None, None, None, None, None,
                                  "skipped-singular", time.perf_counter() - start, str(exc))
    except NumericalError as exc:
        return VerificationRecord(suite, params, None, None, None, None, None, "fail",
                                  time.perf_counter() - start, f"{type(exc).__name__}: {exc}")
    lhs, rhs = complex(lhs), complex(rhs)
    abs_err = abs(lhs - rhs)
    # exact zeros (parity cases) are judged on the absolute error alone
    rel_err = abs_err / abs(rhs) if rhs != 0 else None
    floor = ABS_FLOOR if rhs != 0 else max(ABS_FLOOR, float(est or 0.0))
    ok = (rel_err is not None and rel_err <= TOLERANCES[suite]) or abs_err <= floor
    return VerificationRecord(suite, params, lhs, rhs, abs_err, rel_err, float(est or 0.0),
                              "pass" if ok else "fail", time.perf_counter() - start)


def run_suite(config: RunConfig, jobs: int = 1):
    """All records in deterministic order plus a per-suite summary."""
    rng = np.random.default_rng(config.seed)
    tasks = []
    for name in sorted(config.suites):
        points = _expand(name, config.suites[name], rng, config.jitter)
        points.sort(key=_param_key)
        tasks.extend((name, p, config.quad, config.skip_invalid) for p in points)
    if jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            records = list(pool.map(_run_point, tasks))
    else:
        records = [_run_point(t) for t in tasks]
    summary = {}
    for name in sorted(config.suites):
        recs = [r for r in records if r.suite == name]
        rels = [r.rel_err for r in recs if r.rel_err is not None and r.status != "skipped-singular"]
        summary[name] = {
            "records": len(recs),
            "pass": sum(r.status == "pass" for r in recs),
            "fail": sum(r.status == "fail" for r in recs),
            "skipped": sum(r.status == "skipped-singular" for r in recs),
            "max_rel_err": max(rels) if rels else None,
            "tolerance": TOLERANCES[name],
        }
    return records, summary


# --------------------------------------------------------------------------
# reports

CSV_HEADER = ["suite", "params", "lhs_re", "lhs_im", "rhs_re", "rhs_im", "abs_err", "rel_err",
              "err_est", "status", "ms"]


def _num(v):
    return "" if v is None else repr(float(v))


def records_csv(records) -> str:
    """Flat CSV; the ms column is left blank so reruns compare byte for byte."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_HEADER)
    for r in records:
        params = ";".join(f"{k}={_fmt(r.params[k])}" for k in sorted(r.params))
        lhs = complex(r.lhs) if r.lhs is not None else None
        rhs = complex(r.rhs) if r.rhs is not None else None
        w.writerow([
            r.suite, params,
            _num(lhs.real if lhs is not None else None), _num(lhs.imag if lhs is not None else None),
            _num(rhs.real if rhs is not None else None), _num(rhs.imag if rhs is not None else None),
            _num(r.abs_err), _num(r.rel_err), _num(r.err_estimate), r.status, "",
        ])
    return buf.getvalue()


def _jsonable(v):
    if isinstance(v, complex):
        return [v.real, v.imag]
    if isinstance(v, float) and not math.isfinite(v):
        return str(v)
    return v


def _param_json(v):
    if isinstance(v, (str, int)):
        return v
    c = complex(v)
    return c.real if c.imag == 0 else [c.real, c.imag]


def records_json(records, summary, config: RunConfig) -> str:
    recs = []
    for r in records:
        d = asdict(r)
        d["params"] = {k: _param_json(v) for k, v in sorted(r.params.items())}
        for k in ("lhs", "rhs", "abs_err", "rel_err", "err_estimate"):
            d[k] = _jsonable(d[k]) if d[k] is not None else None
        d["wall_time_ms"] = round(d.pop("wall_time") * 1000, 3)
        recs.append(d)
    doc = {"seed": config.seed, "jitter": config.jitter, "quad": config.quad,
           "summary": summary, "records": recs}
    return json.dumps(doc, indent=2, sort_keys=True, default=str)


# --------------------------------------------------------------------------
# eval


def _c(p, key, default=None):
    if key in p:
        return p[key]
    if default is not None:
        return default
    raise ConfigError(f"missing parameter {key!r}")


def _pair_from(p):
    return OrderPair.of(_c(p, "mu"), _c(p, "d", 0))


def _target_from(p):
    return cf.TargetPoint(float(_c(p, "y").real if isinstance(_c(p, "y"), complex) else _c(p, "y")),
                          float(p.get("theta", 0.0)))


def _kernel_eval(fn):
    return lambda p: fn(_pair_from(p), complex(_c(p, "z")))


EVALUATORS = {
    "gamma": lambda p: spc.gamma(complex(_c(p, "z"))),
    "rgamma": lambda p: spc.rgamma(complex(_c(p, "z"))),
    "log_gamma": lambda p: spc.log_gamma(complex(_c(p, "z"))),
    "hyp2f1": lambda p: spc.hyp2f1(_c(p, "a"), _c(p, "b"), _c(p, "c"), complex(_c(p, "z"))),
    "bessel_j": lambda p: spc.bessel_j(_c(p, "nu"), complex(_c(p, "z"))),
    "hankel": lambda p: spc.hankel(int(_c(p, "kind")), _c(p, "nu"), complex(_c(p, "z"))),
    "bessel_k": lambda p: spc.bessel_k(_c(p, "nu"), float(_c(p, "x"))),
    "kernel_J": _kernel_eval(kn.kernel_J),
    "kernel_boldJ": _kernel_eval(kn.kernel_boldJ),
    "kernel_P": _kernel_eval(kn.kernel_P),
    "kernel_R": _kernel_eval(kn.kernel_R),
    "kernel_M": _kernel_eval(kn.kernel_M),
    "y_factor": lambda p: kn.y_factor(complex(_c(p, "z"))),
    "phase_factor": lambda p: kn.phase_factor(complex(_c(p, "z"))),
    "coeff_C": lambda p: cf.coeff_C(_c(p, "rho"), _pair_from(p)),
    "rhs_general_WS": lambda p: cf.rhs_general_WS(_c(p, "rho"), _pair_from(p), _target_from(p)),
    "rhs_prop32": lambda p: cf.rhs_prop32(_c(p, "rho"), _pair_from(p), complex(_c(p, "u"))),
    "prop32_lhs": lambda p: cf.prop32_lhs(_c(p, "rho"), _pair_from(p), complex(_c(p, "u"))),
    "rhs_cor13": lambda p: cf.rhs_cor13(_c(p, "rho"), _pair_from(p)),
    "rhs_special_WS": lambda p: cf.rhs_special_WS(_pair_from(p), _target_from(p)),
    "rhs_lemma43": lambda p: cf.rhs_lemma43(_c(p, "nu"), int(_c(p, "m", 0)), _target_from(p)),
    "rhs_appendix": lambda p: cf.rhs_appendix(
        _c(p, "rho"), _pair_from(p), cf.AppendixMode(int(_c(p, "m")), str(_c(p, "trig"))),
        _target_from(p)),
    "appendix_corollary": lambda p: cf.appendix_corollary(
        _c(p, "rho"), _pair_from(p), cf.AppendixMode(int(_c(p, "m")), str(_c(p, "trig")))),
    "rhs_real_line": lambda p: cf.rhs_real_line(
        str(_c(p, "kind")), _c(p, "nu"), float(_c(p, "y")), int(p.get("sign", 1)), p.get("rho")),
    "ode_residual": lambda p: cf.ode_residual(_c(p, "rho"), _pair_from(p), complex(_c(p, "u"))),
}
_STRING_PARAMS = {"trig", "kind"}


def eval_one(name: str, assignments: list[str]) -> dict:
    """Evaluate a named public function from key=value strings."""
    if name not in EVALUATORS:
        raise UnknownEvaluator(f"unknown evaluator {name!r}; known: {', '.join(sorted(EVALUATORS))}")
    params = {}
    for item in assignments:
        if "=" not in item:
            raise ConfigError(f"expected key=value, got {item!r}")
        key, value = item.split("=", 1)
        key = _canonical(key.strip())
        if key in _STRING_PARAMS and not (key == "kind" and name == "hankel"):
            params[key] = value.strip()
        else:
            params[key] = parse_number(value)
    result = EVALUATORS[name](params)
    out = {"evaluator": name}
    if isinstance(result, tuple):
        value, err = result
        out["err_estimate"] = float(err)
    else:
        value = result
    if isinstance(value, dict):
        out["value"] = {k: _jsonable(complex(v)) for k, v in value.items()}
        return out
    value = complex(np.asarray(value).item())
    out["value_re"] = value.real
    out["value_im"] = value.imag
    return out


# --------------------------------------------------------------------------
# entry point


def _default_jobs() -> int:
    env = os.environ.get("WS_KERNELS_JOBS")
    if env is None:
        return 1
    try:
        n = int(env)
    except ValueError:
        raise ConfigError(f"WS_KERNELS_JOBS must be an integer, got {env!r}") from None
    if n < 1:
        raise ConfigError("WS_KERNELS_JOBS must be >= 1")
    return n


def _build_parser():
    ap = argparse.ArgumentParser(prog="wskernels", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)
    v = sub.add_parser("verify", help="run verification suites from a JSON config")
    v.add_argument("--config", required=True, type=Path)
    v.add_argument("--suite", default=None, help="one of " + ", ".join(SUITES + ("all",)))
    v.add_argument("--jobs", type=int, default=None)
    v.add_argument("--out", type=Path, default=None, help="directory for report.json and report.csv")
    e = sub.add_parser("eval", help="evaluate one public function")
    e.add_argument("name")
    e.add_argument("params", nargs="*", help="key=value assignments")
    return ap


def _verify(args) -> int:
    try:
        doc = json.loads(args.config.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config is not valid JSON: {exc}") from None
    config = RunConfig.from_json(doc, args.suite)
    jobs = args.jobs if args.jobs is not None else _default_jobs()
    if jobs < 1:
        raise ConfigError("--jobs must be >= 1")
    records, summary = run_suite(config, jobs)
    if args.out is not None:
        args.out.mkdir(parents=True, exist_ok=True)
        (args.out / "report.csv").write_text(records_csv(records), encoding="utf-8")
        (args.out / "report.json").write_text(records_json(records, summary, config),
                                               encoding="utf-8")
    for name, s in summary.items():
        worst = "-" if s["max_rel_err"] is None else f"{s['max_rel_err']:.2e}"
        print(f"{name:10s} pass {s['pass']}/{s['records']}  fail {s['fail']}  "
              f"skipped {s['skipped']}  max_rel_err {worst}  tol {s['tolerance']:.0e}")
    return 1 if any(s["fail"] for s in summary.values()) else 0


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        if args.command == "verify":
            code = _verify(args)
        else:
            print(json.dumps(eval_one(args.name, args.params), sort_keys=True))
            code = 0
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        code = 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        code = 2
    except NumericalError as exc:
        print(f"numerical error: {type(exc).__name__}: {exc}", file=sys.stderr)
        code = 3
    raise SystemExit(code)


if __name__ == "__main__":
    main()
