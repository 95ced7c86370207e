"""Catalog of scalar functions with numerically verified property flags.

The flags encode the hypothesis classes of the inequality checks: monotone
convex/concave, the sign of f(0), log-convexity and sub/super-multiplicativity.
A flag is only shipped if :func:`verify_flags` confirms it on the function's
working interval.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError
from .matcore import Interval
from .tolerances import FUN_BASE

FLAGS = (
    "convex",
    "concave",
    "increasing",
    "decreasing",
    "nonneg",
    "f0_le_0",
    "f0_ge_0",
    "log_convex",
    "log_concave",
    "submultiplicative",
    "supermultiplicative",
)

HALF_LINE = Interval(0.0, math.inf)
OPEN_HALF_LINE = Interval(0.0, math.inf, lo_closed=False)
REAL_LINE = Interval()


@dataclass(frozen=True, eq=False)
class ScalarFunction:
    name: str
    fn: object
    domain: Interval
    working: tuple
    flags: frozenset
    exponent: float | None = None
    description: str = ""

    def __call__(self, t):
        with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
            return self.fn(np.asarray(t, dtype=float))

    def has(self, *flags):
        return all(f in self.flags for f in flags)

    @property
    def monotone(self):
        return bool(self.flags & {"increasing", "decreasing"})

    def __repr__(self):
        return f"ScalarFunction({self.name!r})"


def _power(p):
    def fn(t):
        return np.power(t, p)

    return fn


def _entry(name, fn, domain, working, flags, exponent=None, description=""):
    return ScalarFunction(name, fn, domain, tuple(working), frozenset(flags), exponent, description)


_POWER_FLAGS = {"nonneg", "f0_le_0", "f0_ge_0", "increasing", "log_concave",
                "submultiplicative", "supermultiplicative"}


def _build():
    entries = [
        _entry("pow0.5", _power(0.5), HALF_LINE, (0, 4), _POWER_FLAGS | {"concave"}, 0.5, "t^0.5"),
        _entry("linear", _power(1.0), HALF_LINE, (0, 4), _POWER_FLAGS | {"convex", "concave"}, 1.0, "t"),
        _entry("pow1.5", _power(1.5), HALF_LINE, (0, 4), _POWER_FLAGS | {"convex"}, 1.5, "t^1.5"),
        _entry("square", _power(2.0), HALF_LINE, (0, 4), _POWER_FLAGS | {"convex"}, 2.0, "t^2"),
        _entry("cube", _power(3.0), HALF_LINE, (0, 4), _POWER_FLAGS | {"convex"}, 3.0, "t^3"),
        _entry("sqrt", np.sqrt, HALF_LINE, (0, 4), _POWER_FLAGS | {"concave"}, 0.5, "sqrt(t)"),
        _entry("log1p", np.log1p, HALF_LINE, (0, 4),
               {"concave", "increasing", "nonneg", "f0_le_0", "f0_ge_0", "log_concave"},
               description="log(1+t)"),
        _entry("expm1", np.expm1, HALF_LINE, (0, 4),
               {"convex", "increasing", "nonneg", "f0_le_0", "f0_ge_0", "log_concave"},
               description="e^t - 1"),
        _entry("exp", np.exp, REAL_LINE, (0, 2),
               {"convex", "increasing", "nonneg", "f0_ge_0", "log_convex", "log_concave"},
               description="e^t"),
        _entry("inv", lambda t: 1.0 / t, OPEN_HALF_LINE, (0.1, 4),
               {"convex", "decreasing", "nonneg", "log_convex"}, -1.0, "1/t"),
        _entry("abs", np.abs, REAL_LINE, (-4, 4),
               {"convex", "nonneg", "f0_le_0", "f0_ge_0", "submultiplicative",
                "supermultiplicative"},
               description="|t|"),
        # control: no convexity or monotonicity claims
        _entry("control", lambda t: t - t**3, Interval(0.0, 1.0), (0, 1),
               {"nonneg", "f0_le_0", "f0_ge_0"}, description="t - t^3 on [0, 1]"),
    ]
    return {e.name: e for e in entries}


_CATALOG = _build()


def catalog():
    """All catalog functions, in a fixed order."""
    return list(_CATALOG.values())


def get(name):
    if isinstance(name, ScalarFunction):
        return name
    try:
        return _CATALOG[name]
    except KeyError:
        raise KeyError(f"unknown function {name!r}; known: {', '.join(_CATALOG)}") from None


def names():
    return list(_CATALOG)


@dataclass
class FlagReport:
    function: str
    interval: tuple
    results: dict = field(default_factory=dict)

    @property
    def declared_ok(self):
        f = get(self.function)
        return all(self.results[flag] for flag in f.flags)

    def failing_declared(self):
        f = get(self.function)
        return sorted(flag for flag in f.flags if not self.results[flag])


def _midpoint_slack(values, grid_vals_mid):
    # (f(s) + f(t)) / 2 - f((s + t) / 2) over all grid pairs
    return (values[:, None] + values[None, :]) / 2 - grid_vals_mid


def verify_flags(f, interval=None, grid=200):
    """Check every flag numerically on ``grid`` equispaced points of ``interval``.

    Convexity and log-convexity use the midpoint test over all grid pairs,
    monotonicity compares neighbours, (sub/super)multiplicativity compares
    f(st) with f(s)f(t) wherever st lies in the domain.
    """
    f = get(f)
    lo, hi = interval if interval is not None else f.working
    t = np.linspace(lo, hi, grid)
    v = f(t)
    if not np.all(np.isfinite(v)):
        raise DomainError(f"{f.name} is not finite on the grid over [{lo}, {hi}]")
    tol = FUN_BASE * (1.0 + float(np.max(np.abs(v))))
    mid = f((t[:, None] + t[None, :]) / 2)
    slack = _midpoint_slack(v, mid)

    res = {}
    res["convex"] = bool(np.all(slack >= -tol))
    res["concave"] = bool(np.all(slack <= tol))
    dv = np.diff(v)
    res["increasing"] = bool(np.all(dv >= -tol))
    res["decreasing"] = bool(np.all(dv <= tol))
    res["nonneg"] = bool(np.all(v >= -tol))
    if 0.0 in f.domain:
        f0 = float(f(0.0))
        res["f0_le_0"] = f0 <= tol
        res["f0_ge_0"] = f0 >= -tol
    else:
        res["f0_le_0"] = res["f0_ge_0"] = False

    pos = v > 0
    if pos.sum() >= 2:
        tp = t[pos]
        lv = np.log(v[pos])
        ltol = FUN_BASE * (1.0 + float(np.max(np.abs(lv))))
        with np.errstate(divide="ignore"):
            lmid = np.log(f((tp[:, None] + tp[None, :]) / 2))
        lslack = _midpoint_slack(lv, lmid)
        res["log_convex"] = bool(np.all(lslack >= -ltol)) and bool(pos.all())
        res["log_concave"] = bool(np.all(lslack <= ltol))
    else:
        res["log_convex"] = res["log_concave"] = False

    st = t[:, None] * t[None, :]
    inside = f.domain.mask(st)
    fst = np.where(inside, f(np.where(inside, st, lo)), 0.0)
    prod = v[:, None] * v[None, :]
    mtol = FUN_BASE * (1.0 + np.maximum(np.abs(fst), np.abs(prod)))
    res["submultiplicative"] = bool(np.all((fst <= prod + mtol) | ~inside))
    res["supermultiplicative"] = bool(np.all((fst >= prod - mtol) | ~inside))
    return FlagReport(f.name, (float(lo), float(hi)), res)


def eligible(required=(), any_of=(), exclude=("control",)):
    """Catalog functions carrying every flag in ``required`` and at least one of ``any_of``."""
    out = []
    for f in catalog():
        if f.name in exclude:
            continue
        if not f.has(*required):
            continue
        if any_of and not any(flag in f.flags for flag in any_of):
            continue
        out.append(f)
    return out
