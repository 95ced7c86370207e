"""The check registry: stable names, operand samplers and evaluation hooks."""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .. import ensembles, funcat, posmaps
from ..errors import ConfigError
from ..tolerances import MAJ_BASE
from . import checks

ALPHA_GRID = (0.0, 0.25, 0.5, 0.75, 1.0)
POWER_GRID = (0.0, 0.5, 1.0, 1.5, 2.0)
MAP_VARIANTS = ("compression", "schur", "conjugation_mixture", "composition")


@dataclass
class TrialConfig:
    dims: tuple = (1, 6)
    trials: int = 200
    seed: int = 0
    ensemble: object = "gue"
    tol: float = MAJ_BASE
    alpha: float | None = None
    func: str | None = None
    enforce: bool = True
    relation: str | None = None

    def validate(self):
        lo, hi = self.dims
        if not (1 <= lo <= hi <= 16):
            raise ConfigError(f"dims must satisfy 1 <= min <= max <= 16, got {self.dims}")
        if self.trials < 1:
            raise ConfigError("trials must be >= 1")
        if self.alpha is not None and not 0.0 <= self.alpha <= 1.0:
            raise ConfigError("alpha must lie in [0, 1]")
        if not (self.tol > 0 and math.isfinite(self.tol)):
            raise ConfigError("tol must be a positive number")
        ensembles.parse_ensemble(self.ensemble)
        if self.func is not None:
            funcat.get(self.func)
        return self


def _kind(f):
    d = f.domain
    if d.lo == 0 and not d.lo_closed:
        return "pd"
    if d.lo >= 0:
        return "psd"
    return "herm"


@dataclass(frozen=True)
class Entry:
    """A registered check.

    ``params`` maps each perturbable input to its constraint kind, used by the
    hill-climb to re-project perturbed inputs: "herm", "psd", "pd" (spectrum
    clipped into the operand interval), "contraction", "unit" (a scalar in
    [0, 1]) or "projection".
    """

    name: str
    evaluate: object  # (inputs, cfg) -> CheckOutcome
    sample: object  # (rng, n, cfg, f, trial) -> inputs
    pool: tuple = ()
    params: dict = field(default_factory=dict)
    gate: bool = True
    interval: object = None  # (f, cfg) -> (lo, hi) of operands
    sum_bounded: bool = False  # operands A, B only need A + B inside the interval
    accepts: tuple = ()  # further functions allowed when requested explicitly

    def admits(self, fname):
        return not self.pool or fname in self.pool or fname in self.accepts

    def functions(self, cfg):
        if not self.pool:
            return [None]
        if cfg.func is not None:
            return [funcat.get(cfg.func)]
        return [funcat.get(n) for n in self.pool]

    def operand_interval(self, f):
        if self.interval is not None:
            return self.interval(f)
        if f is None:
            return (0.0, 4.0)
        return tuple(float(x) for x in f.working)


# ---------------------------------------------------------------------------
# samplers
# ---------------------------------------------------------------------------

def _draw(rng, n, cfg, kind, interval):
    return ensembles.draw(rng, n, cfg.ensemble, kind, interval)


def _pair(kind_of=None):
    def sample(rng, n, cfg, f, trial, interval):
        kind = kind_of(f) if kind_of else (_kind(f) if f is not None else "psd")
        return {"A": _draw(rng, n, cfg, kind, interval), "B": _draw(rng, n, cfg, kind, interval)}

    return sample


def bound_sum(inputs, hi):
    """Scale A and B jointly so that lambda_max(A + B) <= hi."""
    top = float(np.linalg.eigvalsh(inputs["A"] + inputs["B"])[-1])
    if top > hi:
        inputs = dict(inputs, A=inputs["A"] * (hi / top), B=inputs["B"] * (hi / top))
    return inputs


def _sum_pair(rng, n, cfg, f, trial, interval):
    out = _pair()(rng, n, cfg, f, trial, interval)
    out["B"] = out["B"] * rng.uniform()  # vary the relative size of the summands
    return bound_sum(out, interval[1])


def _alpha(rng, cfg, trial):
    if cfg.alpha is not None:
        return float(cfg.alpha)
    i = trial % (len(ALPHA_GRID) + 1)
    return float(ALPHA_GRID[i]) if i < len(ALPHA_GRID) else float(rng.uniform())


def _sample_eq2(rng, n, cfg, f, trial, interval):
    return {"A": _draw(rng, n, cfg, _kind(f), interval), "X": ensembles.random_contraction(rng, n)}


def _sample_map(rng, n, cfg, f, trial, interval):
    variant = MAP_VARIANTS[trial % len(MAP_VARIANTS)]
    return {
        "A": _draw(rng, n, cfg, _kind(f), interval),
        "map": posmaps.random_map(rng, n, variant),
    }


def _sample_herm_pair(rng, n, cfg, f, trial, interval):
    return {"A": _draw(rng, n, cfg, "herm", (-4.0, 4.0)), "B": _draw(rng, n, cfg, "herm", (-4.0, 4.0))}


def _sample_powers(rng, n, cfg, f, trial, interval):
    out = _pair(lambda f: "psd")(rng, n, cfg, f, trial, interval)
    i = trial % (len(POWER_GRID) + 1)
    out["r"] = float(POWER_GRID[i]) if i < len(POWER_GRID) else float(rng.uniform(0, 2))
    return out


def _sample_alpha_pair(kind_of=None):
    base = _pair(kind_of)

    def sample(rng, n, cfg, f, trial, interval):
        out = base(rng, n, cfg, f, trial, interval)
        out["alpha"] = _alpha(rng, cfg, trial)
        return out

    return sample


def _sample_projection(rng, n, cfg, f, trial, interval):
    out = _pair(lambda f: "psd")(rng, n, cfg, f, trial, interval)
    out["E"] = ensembles.random_projection(rng, n, int(rng.integers(1, n + 1)))
    return out


def _sample_product(rng, n, cfg, f, trial, interval):
    m = int(rng.integers(2, 5))
    return {"As": [_draw(rng, n, cfg, "pd", interval) for _ in range(m)]}


# ---------------------------------------------------------------------------
# evaluators
# ---------------------------------------------------------------------------

def _with_f(fn, *keys, **extra):
    def evaluate(inp, cfg):
        kw = {k: inp[k] for k in extra.get("optional", ()) if k in inp}
        return fn(inp["func"], *[inp[k] for k in keys], base=cfg.tol, enforce=cfg.enforce, **kw)

    return evaluate


def _plain(fn, *keys):
    def evaluate(inp, cfg):
        return fn(*[inp[k] for k in keys], base=cfg.tol)

    return evaluate


def _thm2_1(inp, cfg):
    return checks.check_thm2_1(inp["func"], inp["A"], inp["B"], branch=inp.get("branch"), base=cfg.tol,
                               enforce=cfg.enforce)


def _eq2(inp, cfg):
    return checks.check_eq2(inp["func"], inp["A"], inp["X"], branch=inp.get("branch"), base=cfg.tol,
                            enforce=cfg.enforce)


def _thm3_3(name):
    def evaluate(inp, cfg):
        relation = inp.get("relation", cfg.relation)
        return checks.check_thm3_3(inp["func"], inp["A"], inp["B"], inp["alpha"], relation=relation,
                                   base=cfg.tol, enforce=cfg.enforce, name=name)

    return evaluate


def _names(**flags):
    return tuple(f.name for f in funcat.eligible(**flags))


PSD2 = {"A": "psd", "B": "psd"}
PD2 = {"A": "pd", "B": "pd"}

_ENTRIES = [
    Entry("eq2", _eq2, _sample_eq2,
          _names(required=("convex", "f0_le_0"), any_of=("increasing", "decreasing")),
          {"A": "psd", "X": "contraction"}),
    Entry("thm2_1", _thm2_1, _sum_pair,
          _names(required=("concave", "f0_ge_0"), any_of=("increasing", "decreasing")), PSD2,
          sum_bounded=True,
          accepts=_names(required=("convex", "f0_le_0"), any_of=("increasing", "decreasing"))),
    Entry("ineq1", _with_f(checks.check_ineq1, "A", "B"), _sum_pair,
          _names(required=("convex", "f0_le_0"), any_of=("increasing", "decreasing")), PSD2,
          sum_bounded=True),
    Entry("rotfeld", _with_f(checks.check_rotfeld, "A", "B"), _sum_pair,
          _names(required=("concave", "f0_ge_0", "nonneg"), any_of=("increasing", "decreasing")), PSD2,
          sum_bounded=True),
    Entry("mccarthy", _with_f(checks.check_mccarthy, "A", "B"), _sum_pair,
          tuple(f.name for f in funcat.catalog() if (f.exponent or 0) > 1), PSD2, sum_bounded=True),
    Entry("cor2_2", _with_f(checks.check_cor2_2, "A", "B"), _sum_pair,
          _names(required=("nonneg", "increasing", "concave")), PSD2, sum_bounded=True),
    Entry("thm2_4", _with_f(checks.check_thm2_4, "map", "A"), _sample_map,
          _names(any_of=("convex", "concave")), {"A": "operand"}),
    Entry("prop2_5", _plain(checks.check_prop2_5, "A", "B"), _sample_herm_pair, (),
          {"A": "herm", "B": "herm"}, interval=lambda f: (-4.0, 4.0)),
    Entry("cor2_6", _plain(checks.check_cor2_6, "A", "B"), _sample_herm_pair, (),
          {"A": "herm", "B": "herm"}, interval=lambda f: (-4.0, 4.0)),
    Entry("prop2_7", _with_f(checks.check_prop2_7, "A", "B"), _pair(lambda f: "psd"),
          _names(required=("submultiplicative", "convex")), PSD2, interval=lambda f: (0.0, 2.0)),
    Entry("hadamard_powers", _plain(checks.check_hadamard_powers, "A", "B", "r"), _sample_powers, (),
          PSD2),
    Entry("lemma3_1", _plain(checks.check_lemma3_1, "A", "B"), _pair(lambda f: "pd"), (), PD2),
    Entry("thm3_2", _with_f(checks.check_thm3_2, "A", "B", "alpha"), _sample_alpha_pair(),
          _names(required=("convex",)), {"A": "operand", "B": "operand", "alpha": "unit"}),
    Entry("thm3_3", _thm3_3("thm3_3"), _sample_alpha_pair(lambda f: "pd"),
          _names(any_of=("log_convex", "log_concave")), {"A": "pd", "B": "pd", "alpha": "unit"}),
    Entry("prop3_4_consequence", _thm3_3("prop3_4_consequence"), _sample_alpha_pair(lambda f: "pd"),
          _names(any_of=("log_convex", "log_concave"), required=()), {"A": "pd", "B": "pd", "alpha": "unit"}),
    Entry("thm4_1", _plain(checks.check_thm4_1, "A", "B"), _pair(lambda f: "psd"), (), PSD2),
    Entry("cor4_2", _plain(checks.check_cor4_2, "A", "B"), _pair(lambda f: "pd"), (), PD2),
    Entry("thm4_3", _plain(checks.check_thm4_3, "A", "B"), _pair(lambda f: "psd"), (), PSD2),
    Entry("fact1", _plain(checks.check_fact1, "A", "B", "E"), _sample_projection, (), PSD2),
    Entry("fact2", _plain(checks.check_fact2, "A", "B", "E"), _sample_projection, (), PSD2),
    Entry("prop4_4", _plain(checks.check_prop4_4, "As"), _sample_product, (), {"As": "pd"}),
    Entry("kosem", _with_f(checks.check_kosem, "A", "B"), _pair(),
          tuple(f.name for f in funcat.eligible(required=("nonneg", "concave"))
                if f.domain.lo == 0 and f.domain.hi == math.inf), PSD2, sum_bounded=True),
    Entry("bk_conjecture_probe", _plain(checks.check_bk_probe, "A", "B"), _pair(lambda f: "psd"), (),
          PSD2, gate=False),
]

REGISTRY = {e.name: e for e in _ENTRIES}
NAMES = tuple(REGISTRY)


def get(name):
    try:
        return REGISTRY[name]
    except KeyError:
        raise ConfigError(f"unknown check {name!r}; run --list for the registry") from None


def operand_kind(entry, key, f):
    kind = entry.params.get(key, "fixed")
    if kind == "operand":
        return _kind(f) if f is not None else "herm"
    return kind
