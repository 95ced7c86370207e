"""Random trials, replay from payloads, and margin-minimising counterexample search."""
from __future__ import annotations

import zlib
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace

import numpy as np

from .. import funcat
from ..errors import DomainError, NumericError, PreconditionError
from ..matcore import hermitian_part
from .outcome import FAIL, PASS, CheckOutcome, decode_inputs
from .registry import TrialConfig, bound_sum, get, operand_kind

MAX_RECORDED_FAILS = 50


def trial_rng(seed, name, trial):
    """Per-trial generator: a fixed function of (master seed, check name, trial index)."""
    return np.random.default_rng(np.random.SeedSequence([int(seed) & (2**64 - 1), zlib.crc32(name.encode()), trial]))


def trial_inputs(name, cfg, trial, n=None):
    """Sampled inputs of one trial; ``n`` overrides the drawn order."""
    entry = get(name)
    rng = trial_rng(cfg.seed, name, trial)
    lo, hi = cfg.dims
    drawn = int(rng.integers(lo, hi + 1))
    n = drawn if n is None else int(n)
    fs = entry.functions(cfg)
    f = fs[trial % len(fs)]
    inputs = entry.sample(rng, n, cfg, f, trial, entry.operand_interval(f))
    if f is not None:
        inputs = {"func": f.name, **inputs}
    return inputs


def evaluate(name, inputs, cfg):
    return get(name).evaluate(inputs, cfg)


def run_trial(name, cfg, trial):
    return evaluate(name, trial_inputs(name, cfg, trial), cfg)


@dataclass
class Summary:
    """Aggregate of one check over many trials (min-margin reduction, order independent)."""

    check: str
    trials: int = 0
    passes: int = 0
    fails: int = 0
    inconclusives: int = 0
    errors: int = 0
    diagnostics_failed: int = 0
    worst: CheckOutcome | None = None
    worst_trial: int | None = None
    fail_records: list = field(default_factory=list)
    error_records: list = field(default_factory=list)
    diagnostic_records: list = field(default_factory=list)

    def add(self, trial, outcome):
        self.trials += 1
        status = outcome.status
        if status == PASS:
            self.passes += 1
        elif status == FAIL:
            self.fails += 1
            if len(self.fail_records) < MAX_RECORDED_FAILS:
                self.fail_records.append((trial, outcome))
        else:
            self.inconclusives += 1
        diag = outcome.diagnostics_failed()
        if diag:
            self.diagnostics_failed += 1
            if len(self.diagnostic_records) < MAX_RECORDED_FAILS:
                self.diagnostic_records.append((trial, diag))
        if self.worst is None or (outcome.slack, trial) < (self.worst.slack, self.worst_trial):
            self.worst, self.worst_trial = outcome, trial

    def add_error(self, trial, exc):
        self.trials += 1
        self.errors += 1
        if len(self.error_records) < MAX_RECORDED_FAILS:
            self.error_records.append((trial, f"{type(exc).__name__}: {exc}"))

    def to_dict(self):
        d = {
            "check": self.check,
            "trials": self.trials,
            "passes": self.passes,
            "fails": self.fails,
            "inconclusives": self.inconclusives,
            "errors": self.errors,
            "diagnostics_failed": self.diagnostics_failed,
            "min_margin": None if self.worst is None else self.worst.margin,
            "min_slack": None if self.worst is None else self.worst.slack,
            "worst_trial": self.worst_trial,
            "worst": None if self.worst is None else self.worst.to_dict(),
            "failures": [{"trial": t, **o.to_dict()} for t, o in self.fail_records],
            "error_records": [{"trial": t, "error": e} for t, e in self.error_records],
            "diagnostic_records": [
                {"trial": t, "components": [c.to_dict() for c in cs]} for t, cs in self.diagnostic_records
            ],
        }
        return d


def _run_chunk(args):
    name, cfg, trials = args
    out = []
    for t in trials:
        try:
            out.append((t, run_trial(name, cfg, t), None))
        except (DomainError, NumericError) as exc:
            out.append((t, None, exc))
    return out


def run_check(name, cfg=None, workers=1, trial_offset=0):
    """Run ``cfg.trials`` random trials of one check; results do not depend on ``workers``."""
    cfg = (cfg or TrialConfig()).validate()
    get(name)
    trials = list(range(trial_offset, trial_offset + cfg.trials))
    summary = Summary(name)
    if workers > 1 and len(trials) > 1:
        chunks = [trials[i::workers] for i in range(workers)]
        with ProcessPoolExecutor(workers) as pool:
            results = [r for chunk in pool.map(_run_chunk, [(name, cfg, c) for c in chunks]) for r in chunk]
        results.sort(key=lambda r: r[0])
    else:
        results = _run_chunk((name, cfg, trials))
    for t, outcome, exc in results:
        if exc is not None:
            summary.add_error(t, exc)
        else:
            summary.add(t, outcome)
    return summary


def replay(payload, cfg=None):
    """Re-evaluate an outcome from its serialized dict (as stored in reports)."""
    cfg = cfg or TrialConfig()
    cfg = replace(cfg, relation=payload.get("inputs", {}).get("relation", cfg.relation))
    inputs = decode_inputs(payload["inputs"])
    return evaluate(payload["check"], inputs, cfg)


# ---------------------------------------------------------------------------
# counterexample search
# ---------------------------------------------------------------------------

def _project(M, kind, interval):
    lo, hi = interval
    if kind in ("herm", "psd", "pd"):
        H = hermitian_part(M)
        w, V = np.linalg.eigh(H)
        floor = lo if kind == "herm" else max(lo, 0.0)
        if kind == "pd":
            floor = max(floor, 1e-3 * max(hi, 1.0))
        w = np.clip(w, floor, hi)
        return hermitian_part((V * w) @ V.conj().T)
    if kind == "contraction":
        s = np.linalg.norm(M, 2)
        return M / s if s > 1 else M
    if kind == "projection":
        H = hermitian_part(M)
        w, V = np.linalg.eigh(H)
        keep = V[:, w > 0.5]
        return keep @ keep.conj().T
    return M


def _perturb(rng, inputs, entry, f, step, interval):
    out = dict(inputs)
    for key in entry.params:
        kind = operand_kind(entry, key, f)
        val = inputs.get(key)
        if val is None:
            continue
        if kind == "unit":
            out[key] = float(np.clip(val + step * rng.standard_normal(), 0.0, 1.0))
        elif isinstance(val, list):
            out[key] = [_project(M + step * _noise(rng, M), kind, interval) for M in val]
        else:
            out[key] = _project(val + step * _noise(rng, val), kind, interval)
    if entry.sum_bounded:
        out = bound_sum(out, interval[1])
    return out


def _noise(rng, M):
    return (rng.standard_normal(M.shape) + 1j * rng.standard_normal(M.shape)) / np.sqrt(2)


@dataclass
class SearchResult:
    check: str
    best: CheckOutcome | None
    evaluations: int
    found_at: int | None  # evaluation index of the first fail, if any
    random_phase: int
    climb_steps: int

    @property
    def found(self):
        return self.found_at is not None

    def to_dict(self):
        return {
            "check": self.check,
            "found": self.found,
            "found_at": self.found_at,
            "evaluations": self.evaluations,
            "random_phase": self.random_phase,
            "climb_steps": self.climb_steps,
            "best": None if self.best is None else self.best.to_dict(),
        }


def _violates(outcome):
    """A search hit: a failing gate, or a failing component of a non-gating probe."""
    if outcome.status == FAIL:
        return True
    return not any(c.gate for c in outcome.components) and outcome.slack < -1


def search_counterexample(name, cfg=None, budget=10_000, step=0.2, decay=0.998, restarts=5):
    """Minimise the decisive slack of a check; stops at the first violation.

    Half of the budget (at least one evaluation) goes to independent random
    trials. The rest is split between hill-climbs started from the ``restarts``
    best random inputs: Gaussian perturbation of every operand with a decaying
    step, re-projected onto its constraint set, accepting only improvements.
    Deterministic given ``cfg.seed``.
    """
    cfg = (cfg or TrialConfig()).validate()
    entry = get(name)
    random_phase = max(1, budget // 2)
    pool, evals = [], 0  # (slack, trial, outcome, inputs)
    for t in range(random_phase):
        evals += 1
        try:
            inputs = trial_inputs(name, cfg, t)
            out = evaluate(name, inputs, cfg)
        except (DomainError, NumericError):
            continue
        if _violates(out):
            return SearchResult(name, out, evals, evals, random_phase, 0)
        pool.append((out.slack, t, out, inputs))
        pool.sort(key=lambda r: r[:2])
        del pool[restarts:]
    climb = budget - random_phase
    if not pool:
        return SearchResult(name, None, evals, None, random_phase, 0)
    overall = pool[0][2]
    if climb <= 0:
        return SearchResult(name, overall, evals, None, random_phase, 0)
    rng = np.random.default_rng(np.random.SeedSequence([int(cfg.seed), 0x5EA2C4]))
    steps_done = 0
    share = [climb // len(pool) + (1 if i < climb % len(pool) else 0) for i in range(len(pool))]
    for (_, _, best, best_inputs), steps in zip(pool, share):
        f = funcat.get(best_inputs["func"]) if "func" in best_inputs else None
        interval = entry.operand_interval(f)
        scale = step
        for _ in range(steps):
            evals += 1
            steps_done += 1
            scale *= decay
            cand = _perturb(rng, best_inputs, entry, f, scale, interval)
            try:
                out = evaluate(name, cand, cfg)
            except (DomainError, NumericError, PreconditionError):
                continue
            if out.slack < best.slack:
                best, best_inputs = out, cand
                if _violates(out):
                    return SearchResult(name, out, evals, evals, random_phase, steps_done)
        if best.slack < overall.slack:
            overall = best
    return SearchResult(name, overall, evals, None, random_phase, steps_done)
