"""Command-line front end: value tables, curve sampling and verification suites."""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import math
import sys

import numpy as np
from scipy import integrate

from . import bessel_core as bc
from . import exp_extremal as ee
from . import hilbert_forms as hf
from . import periodic_opuc as po
from . import radial_measures as rm
from .freq_laplace import eval_majorant, eval_minorant

log = logging.getLogger("beurling")

EXIT_VERIFY = 1
EXIT_USAGE = 2
EXIT_NUMERIC = 3


class UsageError(ValueError):
    pass


# ---------------------------------------------------------------------------
# parsing helpers
# ---------------------------------------------------------------------------

def _floats(items):
    out = []
    for item in items or []:
        for part in str(item).split(","):
            part = part.strip()
            if part:
                out.append(float(part))
    return out


def _grid(spec):
    # "start:stop:num" or a comma list
    if spec is None:
        return None
    if ":" in spec:
        a, b, n = spec.split(":")
        n = int(n)
        if n < 1:
            raise UsageError("grid needs at least one point")
        return np.linspace(float(a), float(b), n)
    vals = _floats([spec])
    if not vals:
        raise UsageError("grid is empty")
    return np.array(vals)


def _measure(text):
    if text is None:
        return None
    try:
        d = json.loads(text) if isinstance(text, str) else text
    except json.JSONDecodeError as exc:
        raise UsageError(f"measure is not valid JSON: {exc}") from None
    return rm.MeasureSpec.from_dict(d)


def _circle(text):
    if text is None:
        return po.lebesgue()
    d = json.loads(text) if isinstance(text, str) else text
    return po.CircleMeasure.from_dict(d)


def _apply_config(args, parser):
    if not getattr(args, "config", None):
        return args
    try:
        with open(args.config) as fh:
            cfg = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise UsageError(f"cannot read config {args.config}: {exc}") from None
    if not isinstance(cfg, dict):
        raise UsageError("config must be a JSON object")
    known = set(vars(args))
    for key, val in cfg.items():
        dest = key.replace("-", "_")
        if dest == "lambda":
            dest = "lam"
        if dest not in known:
            raise UsageError(f"unknown config key {key!r}")
        if dest in ("measure", "circle") and not isinstance(val, str):
            val = json.dumps(val)
        if dest == "lam" and not isinstance(val, list):
            val = [val]
        if dest == "lam":
            val = [str(v) for v in val]
        setattr(args, dest, val)
    return args


def _emit(rows, header, fmt, path):
    if fmt == "json":
        text = json.dumps([dict(zip(header, r)) for r in rows], indent=1) + "\n"
    else:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(header)
        for r in rows:
            w.writerow([repr(v) if isinstance(v, float) else v for v in r])
        text = buf.getvalue()
    if path:
        with open(path, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


# ---------------------------------------------------------------------------
# values
# ---------------------------------------------------------------------------

def cmd_values(args):
    order = bc.as_order(args.nu)
    if args.N < 1:
        raise UsageError("N must be positive")
    if not args.delta > 0:
        raise UsageError("delta must be positive")
    side = args.side
    m = _measure(args.measure)
    rows = []
    if m is not None:
        if args.lam:
            raise UsageError("give either --lambda or --measure")
        v = rm.value_mu(m, order, args.N, args.delta, side)
        rows.append([order.nu, args.N, args.delta, m.to_json(), side, v])
        header = ["nu", "N", "delta", "measure", "side", "value"]
    else:
        lams = _floats(args.lam)
        if not lams:
            raise UsageError("lambda grid is empty")
        if any(not lam > 0 for lam in lams):
            raise UsageError("lambda values must be positive")
        for lam in lams:
            try:
                v = ee.value(ee.ExtremalValueQuery(order, args.N, args.delta, lam, side))
            except ArithmeticError as exc:
                log.warning("lambda=%g omitted: %s", lam, exc)
                continue
            rows.append([order.nu, args.N, args.delta, lam, side, v])
        if not rows:
            raise ArithmeticError("no value could be computed")
        header = ["nu", "N", "delta", "lambda", "side", "value"]
    _emit(rows, header, args.format, args.output)
    return 0


# ---------------------------------------------------------------------------
# sample
# ---------------------------------------------------------------------------

def _single_lambda(args):
    lams = _floats(args.lam)
    if len(lams) != 1 or not lams[0] > 0:
        raise UsageError("this target needs exactly one positive --lambda")
    return lams[0]


def cmd_sample(args):
    x = _grid(args.grid)
    if x is None:
        raise UsageError("--grid is required")
    t = args.target
    lower = True  # target lies below the reference
    if t in ("minorant", "majorant"):
        order = bc.as_order(args.nu)
        lam = _single_lambda(args)
        lower = t == "minorant"
        pts = np.zeros((len(x), args.N))
        pts[:, 0] = x
        if args.N == 1 and args.delta == 2.0:
            f = eval_minorant if lower else eval_majorant
            tgt = np.asarray(f(order, lam, x))
        else:
            tgt = np.asarray(ee.eval_extremal_radial(order, args.N, args.delta, lam, pts,
                                                     "minus" if lower else "plus"))
        ref = np.exp(-lam * np.abs(x))
    elif t == "G_mu":
        order = bc.as_order(args.nu)
        m = _measure(args.measure)
        if m is None:
            raise UsageError("G_mu needs --measure")
        lower = args.side == "minus"
        r = np.abs(x)
        ref = np.asarray(rm.G_mu(m, r))
        pts = np.zeros((len(x), args.N))
        pts[:, 0] = x
        tgt = np.full_like(ref, np.nan)
        ok = r > 0
        tgt[ok] = rm.eval_subordinated(m, order, args.N, args.delta, pts[ok], args.side)
    elif t in ("trig_min", "trig_maj"):
        lam = _single_lambda(args)
        lower = t == "trig_min"
        basis = po.build_basis(_circle(args.circle), args.n)
        p = po.extremal_trig(basis, lam, "minus" if lower else "plus")
        tgt = p(x)
        ref = np.asarray(po.f_lambda(lam, x))
    elif t == "h_sigma":
        s = _measure(args.measure)
        if s is None:
            raise UsageError("h_sigma needs --measure")
        lower = args.side == "minus"
        basis = po.build_basis(_circle(args.circle), args.n)
        p = po.extremal_trig_sigma(basis, s, args.side)
        tgt = p(x)
        ref = np.asarray(po.h_sigma(s, x))
    else:
        raise UsageError(f"unknown target {t!r}")
    gap = ref - tgt if lower else tgt - ref
    rows = []
    for xi, a, b, g in zip(x, np.atleast_1d(tgt), np.atleast_1d(ref), np.atleast_1d(gap)):
        if not (math.isfinite(a) and math.isfinite(b)):
            log.warning("x=%g omitted: non-finite value", xi)
            continue
        rows.append([float(xi), float(a), float(b), float(g)])
    _emit(rows, ["x", "target", "reference", "gap"], args.format, args.output)
    return 0


# ---------------------------------------------------------------------------
# verify
# ---------------------------------------------------------------------------

def _suite_bessel(rng):
    x = np.linspace(0.0, 40.0, 801)
    yield "A_half_is_cos", float(np.max(np.abs(bc.eval_A(-0.5, x) - np.cos(x)))), 1e-12
    yield "B_half_is_sin", float(np.max(np.abs(bc.eval_B(-0.5, x) - np.sin(x)))), 1e-12
    for nu in (0.0, 1.0, 2.5):
        z = bc.zeros(nu, "A", 30).zeros
        yield f"A_zeros_residual_nu={nu}", float(np.max(np.abs(bc.eval_A(nu, z)))), 1e-12
        xs = rng.uniform(0.5, 30.0, 20)
        h = 1e-5
        fd = (bc.eval_A(nu, xs + h) - bc.eval_A(nu, xs - h)) / (2 * h)
        yield f"A_prime_is_minus_B_nu={nu}", float(np.max(np.abs(fd + bc.eval_B(nu, xs)))), 1e-8
        k0 = float(bc.kernel_diag(nu, 0.0))
        yield f"K_at_origin_nu={nu}", abs(k0 - 1.0 / (2 * math.pi * (nu + 1))), 1e-14


def _suite_exp(rng):
    for lam in (0.1, 1.0, 10.0):
        a = ee.value_min_base(-0.5, lam)
        ref = 2 / lam - math.pi / math.sinh(math.pi * lam / 2)
        yield f"closed_min_lambda={lam}", abs(a / ref - 1), 1e-10
        a = ee.value_max_base(-0.5, lam)
        ref = math.pi / math.tanh(math.pi * lam / 2) - 2 / lam
        yield f"closed_max_lambda={lam}", abs(a / ref - 1), 1e-10
    for nu in (0.0, 1.0):
        for side in ("minus", "plus"):
            a = ee.value_base(nu, 1.0, side, method="zeros")
            b = ee.value_base(nu, 1.0, side, method="integral")
            yield f"zeros_vs_integral_nu={nu}_{side}", abs(a / b - 1), 1e-9
    x = np.linspace(-50, 50, 2001)
    for nu in (-0.5, 0.0, 1.0):
        e = np.exp(-np.abs(x))
        yield f"minorant_below_nu={nu}", max(float(np.max(eval_minorant(nu, 1.0, x) - e)), 0.0), 1e-10
        yield f"majorant_above_nu={nu}", max(float(np.max(e - eval_majorant(nu, 1.0, x))), 0.0), 1e-10
        z = bc.zeros(nu, "A", 10).zeros
        yield f"minorant_interpolates_nu={nu}", float(np.max(np.abs(eval_minorant(nu, 1.0, z) - np.exp(-z)))), 1e-9
    k = 2.0
    a = ee.value(ee.ExtremalValueQuery(0.0, 3, 1.0, 1.5, "minus"))
    b = k ** 2 * ee.value(ee.ExtremalValueQuery(0.0, 3, k, 1.5 * k, "minus"))
    yield "scaling_law_N=3", abs(a / b - 1), 1e-10


def _suite_radial(rng):
    r = np.array([0.3, 0.8, 2.7])
    for a in (-1.5, 0.0, 0.5):
        m = rm.power(a)
        q = np.array([sum(integrate.quad(lambda t, rr=rr: (math.exp(-t * rr) - math.exp(-t)) * t ** a,
                                         lo, hi, epsabs=0, epsrel=1e-11, limit=200)[0]
                          for lo, hi in ((0.0, 1.0), (1.0, np.inf))) for rr in r])
        yield f"G_mu_closed_alpha={a}", float(np.max(np.abs(rm.G_mu(m, r) / q - 1))), 1e-8
    m = rm.power(0.0)
    lhs = rm.value_mu(m, 0.0, 2, 1.3, "minus")
    for k in (0.5, 2.0):
        rhs = k ** 2 * rm.value_mu(rm.rescale_measure(m, 1 / k), 0.0, 2, k * 1.3, "minus")
        yield f"rescale_law_kappa={k}", abs(lhs / rhs - 1), 1e-8
    z = bc.zeros(0.0, "A", 10).zeros
    v = rm.eval_subordinated(m, 0.0, 1, 2.0, z[:, None], "minus")
    yield "subordinated_touches_at_zeros", float(np.max(np.abs(v - rm.G_mu(m, z)))), 1e-7
    a = rm.value_mu(m, 0.0, 1, 2.0, "minus")
    b = rm.value_mu(m, 0.0, 1, 2.0, "minus", method="closed")
    yield "value_mu_quad_vs_closed", abs(a / b - 1), 1e-9


def _suite_hilbert(rng):
    for N, a in ((1, -0.5), (2, 0.5), (3, 1.0)):
        spec = hf.FormSpec((N - 2) / 2, 0, rm.power(a))
        rho = 1.7
        y = np.zeros(N)
        y[0] = rho
        q = integrate.quad(lambda t: hf.poisson_ft(N, t, y) * t ** a, 0, np.inf, epsabs=0, epsrel=1e-12)[0]
        yield f"Q_r0_closed_vs_quad_N={N}", abs(hf.Q_radial(spec, N, rho) / q - 1), 1e-7
    cfg = hf.PointConfig(1, [[0.0], [1.0], [2.5], [3.6], [5.0]], 1.0)
    rep = hf.verify_bounds(hf.FormSpec(-0.5, 0, rm.atoms([(1.0, 1.0)])), cfg, seed=int(rng.integers(1 << 31)))
    yield "bounds_N=1_atom", max(-rep.min_eigenvalue - rep.U_minus, rep.max_eigenvalue - rep.U_plus, 0.0), 1e-8
    pts = []
    while len(pts) < 8:
        p = rng.uniform(0, 5, 2)
        if all(np.linalg.norm(p - q) >= 1 for q in pts):
            pts.append(p)
    rep = hf.verify_bounds(hf.FormSpec(0.0, 0, rm.power(0.5)), hf.PointConfig(2, pts, 1.0),
                           seed=int(rng.integers(1 << 31)))
    yield "bounds_N=2_power", max(-rep.min_eigenvalue - rep.U_minus, rep.max_eigenvalue - rep.U_plus, 0.0), 1e-8


def _suite_periodic(rng):
    L = po.lebesgue()
    for n in (2, 5):
        b = po.build_basis(L, n)
        yield f"lebesgue_monomials_n={n}", float(np.max(np.abs(b.coeffs - np.eye(n + 2)))), 1e-12
        yield f"lebesgue_kernel_n={n}", float(np.max(np.abs(b.b_kernel - (n + 1)))), 1e-12
    S = po.sphere_measure(3)
    yield "sphere_mass", abs(S.moments(1)[0] - 1.0), 1e-10
    for n in (4, 8):
        b = po.build_basis(S, n)
        c = S.moments(n + 1)
        err = 0.0
        for k in range(-n, n + 1):
            W = np.zeros(2 * n + 1)
            W[k + n] = 1.0
            for ns in "AB":
                err = max(err, abs(po.quadrature(b, W, ns) - c[abs(k)]))
        yield f"sphere_quadrature_n={n}", err, 1e-9
    th = np.linspace(-0.5, 0.5, 2001)
    for n in (2, 4):
        b = po.build_basis(L, n)
        for lam in (0.5, 2.0):
            lo, res = po.extremal_trig(b, lam, "minus", return_residual=True)
            hi = po.extremal_trig(b, lam, "plus")
            f = po.f_lambda(lam, th)
            yield f"trig_one_sided_n={n}_lambda={lam}", max(float(np.max(lo(th) - f)), float(np.max(f - hi(th))), 0.0), 1e-9
            ref = sum(po.f_lambda(lam, k / (n + 1)) for k in range(n + 1)) / (n + 1)
            yield f"trig_majorant_value_n={n}_lambda={lam}", abs(hi.integral(L) - ref), 1e-9
            yield f"trig_dropped_equation_n={n}_lambda={lam}", res, 1e-8
    s = rm.log_measure()
    for t in (0.1, 0.25, 0.4):
        yield f"h_sigma_log_theta={t}", abs(po.h_sigma(s, t) + math.log(abs(2 * math.sin(math.pi * t))) - math.log(2)), 1e-7


SUITES = {
    "bessel": _suite_bessel,
    "exp": _suite_exp,
    "radial": _suite_radial,
    "hilbert": _suite_hilbert,
    "periodic": _suite_periodic,
}


def run_suite(name, seed=0, tol=None):
    """List of result dicts for one suite."""
    rng = np.random.default_rng(seed)
    out = []
    for check, err, t in SUITES[name](rng):
        t = t if tol is None else tol
        out.append({"suite": name, "check": check, "error": float(err), "tol": t,
                    "pass": bool(math.isfinite(err) and err <= t)})
    return out


def cmd_verify(args):
    names = list(SUITES) if args.suite == "all" else [args.suite]
    results = []
    for name in names:
        results.extend(run_suite(name, seed=args.seed, tol=args.tol))
    text = "".join(json.dumps(r, sort_keys=True) + "\n" for r in results)
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    failed = [r["check"] for r in results if not r["pass"]]
    for f in failed:
        log.error("FAILED %s", f)
    return EXIT_VERIFY if failed else 0


# ---------------------------------------------------------------------------
# entry point
# ---------------------------------------------------------------------------

def build_parser():
    p = argparse.ArgumentParser(prog="beurling", description=__doc__)
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--config", help="JSON file whose keys override flags")
        sp.add_argument("--output", "-o", help="output path (default stdout)")
        sp.add_argument("--seed", type=int, default=0)

    v = sub.add_parser("values", help="table of extremal error values")
    common(v)
    v.add_argument("--nu", type=float, default=-0.5)
    v.add_argument("--N", type=int, default=1)
    v.add_argument("--delta", type=float, default=2.0)
    v.add_argument("--lambda", dest="lam", action="append", help="value or comma list; repeatable")
    v.add_argument("--measure", help="measure as JSON, e.g. '{\"kind\":\"power\",\"alpha\":0}'")
    v.add_argument("--side", choices=("minus", "plus"), default="minus")
    v.add_argument("--format", choices=("csv", "json"), default="csv")
    v.set_defaults(func=cmd_values)

    s = sub.add_parser("sample", help="sample a one-sided approximation on a grid")
    common(s)
    s.add_argument("--target", required=True,
                   choices=("minorant", "majorant", "G_mu", "trig_min", "trig_maj", "h_sigma"))
    s.add_argument("--nu", type=float, default=-0.5)
    s.add_argument("--N", type=int, default=1)
    s.add_argument("--delta", type=float, default=2.0)
    s.add_argument("--lambda", dest="lam", action="append")
    s.add_argument("--measure")
    s.add_argument("--circle", help="circle measure as JSON (default lebesgue)")
    s.add_argument("--n", type=int, default=4, help="trigonometric degree")
    s.add_argument("--side", choices=("minus", "plus"), default="minus")
    s.add_argument("--grid", help="start:stop:num or comma list")
    s.add_argument("--format", choices=("csv", "json"), default="csv")
    s.set_defaults(func=cmd_sample)

    r = sub.add_parser("verify", help="run invariant checks")
    common(r)
    r.add_argument("suite", choices=(*SUITES, "all"))
    r.add_argument("--tol", type=float, default=None, help="override every tolerance")
    r.set_defaults(func=cmd_verify)
    return p


def main(argv=None):
    logging.basicConfig(level=logging.WARNING, format="%(levelname)s: %(message)s", stream=sys.stderr)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else 0
    try:
        _apply_config(args, parser)
        return args.func(args)
    except (UsageError, ValueError, KeyError, TypeError) as exc:
        log.error("%s", exc)
        return EXIT_USAGE
    except ArithmeticError as exc:
        log.error("numeric failure: %s", exc)
        return EXIT_NUMERIC
    except RuntimeError as exc:
        log.error("numeric failure: %s", exc)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
