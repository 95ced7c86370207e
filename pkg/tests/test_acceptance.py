"""The ten acceptance criteria, each at its stated scale and tolerance.

Every test carries a ``criterion`` mark; conftest.py prints one PASS/FAIL line per
criterion at the end of the run.
"""
import json
import os
import time

import numpy as np
import pytest

from eigineq import ensembles
from eigineq.majorize import fan_dominance_check
from eigineq.matcore import eigh
from eigineq.posmaps import naimark_dilate
from eigineq.theorems import checks
from eigineq.theorems.outcome import FAIL, PASS, Certificate
from eigineq.theorems.registry import NAMES, TrialConfig
from eigineq.theorems.runner import replay, run_check, run_trial, search_counterexample, trial_inputs

WORKERS = max(1, min(4, os.cpu_count() or 1))
SUITES = [n for n in NAMES if n not in ("fact1", "bk_conjecture_probe")]
ENSEMBLES = ("gue", "pd:1e4")  # well-conditioned and kappa = 1e4
S2 = np.sqrt(2.0)


def _opnorm(M):
    return np.linalg.norm(M, 2) if M.size else 0.0


# ---------------------------------------------------------------------------
# 1. eigensolver fidelity
# ---------------------------------------------------------------------------

def _hermitian_corpus(count=1000, seed=0):
    rng = np.random.default_rng(seed)
    kinds = ("gue", "wishart", "pd:1e4", "projections")
    out = []
    for i in range(count):
        n = int(rng.integers(1, 9))
        M = ensembles.draw(rng, n, kinds[i % 4], "herm")
        out.append(M * 10.0 ** rng.uniform(-3, 3))
    return out


@pytest.mark.criterion(1, "eigensolver fidelity (1000 Hermitian, n <= 8, < 5 s)")
@pytest.mark.parametrize("method", ["lapack", "jacobi"])
def test_eigensolver_fidelity(method, detail):
    mats = _hermitian_corpus()
    worst_rec = worst_unit = 0.0
    t0 = time.perf_counter()
    for A in mats:
        n = A.shape[0]
        w, V = eigh(A, method=method)
        rec = _opnorm(A - (V * w) @ V.conj().T)
        unit = _opnorm(V.conj().T @ V - np.eye(n))
        # strictest reading of ||A||_inf: the largest entry modulus
        assert rec <= 1e-11 * n * (1 + np.max(np.abs(A))), (n, rec)
        assert unit <= 1e-10 * n, (n, unit)
        assert np.all(np.diff(w) <= 0)
        worst_rec = max(worst_rec, rec / (n * (1 + np.max(np.abs(A)))))
        worst_unit = max(worst_unit, unit / n)
    elapsed = time.perf_counter() - t0
    detail(f"{method}: {elapsed:.2f}s, max rec/(n(1+|A|)) {worst_rec:.1e}, max unit/n {worst_unit:.1e}")
    assert elapsed < 5.0


# ---------------------------------------------------------------------------
# 2. the 2x2 counterexample to a single unitary
# ---------------------------------------------------------------------------

@pytest.mark.criterion(2, "2x2 pair: single unitary fails by 0.20711, two witnesses certify")
def test_two_by_two_pair(detail):
    A, B = np.diag([1.0, 0.0]), np.full((2, 2), 0.5)
    out = checks.check_thm2_1("square", A, B)
    single = out.component("single_unitary")
    expected = (1 - 1 / S2) - (1 - 1 / S2) ** 2
    assert not single.holds and single.worst_k == 2
    assert abs(-single.margin - expected) <= 1e-6
    assert abs(-single.margin - 0.20711) <= 1e-5  # the rounded value
    assert out.status == PASS
    assert out.certificates
    for cert in out.certificates:
        assert cert.lambda_min("lapack") >= -1e-10
        assert cert.lambda_min("jacobi") >= -1e-10
    detail(f"violation {-single.margin:.8f} at k={single.worst_k}; "
           f"certificate min eig {min(c.lambda_min() for c in out.certificates):.2e}")


# ---------------------------------------------------------------------------
# 3. theorem suites
# ---------------------------------------------------------------------------

@pytest.mark.criterion(3, "21 theorem suites x 1000 trials x 2 ensembles, zero fails, < 120 s")
def test_theorem_suites(detail):
    t0 = time.perf_counter()
    bad = []
    total = 0
    for ens in ENSEMBLES:
        cfg = TrialConfig(trials=1000, dims=(1, 6), ensemble=ens, tol=1e-8)
        for name in SUITES:
            s = run_check(name, cfg, workers=WORKERS)
            total += s.trials
            if s.fails or s.errors:
                bad.append((ens, name, s.fails, s.errors, s.error_records[:1]))
    elapsed = time.perf_counter() - t0
    detail(f"{total} trials, {len(bad)} suites with fails/errors, {elapsed:.1f}s")
    assert not bad, bad
    assert total == 2 * 21 * 1000
    assert elapsed < 120.0


# ---------------------------------------------------------------------------
# 4. determinant equality at k = n
# ---------------------------------------------------------------------------

def _log_spectrum_sums(A, B):
    w, V = np.linalg.eigh(A)
    logA = (V * np.log(w)) @ V.conj().T
    sqA = (V * np.sqrt(w)) @ V.conj().T
    w, V = np.linalg.eigh(B)
    logB = (V * np.log(w)) @ V.conj().T
    x = np.linalg.eigvalsh((logA + logB + (logA + logB).conj().T) / 2)
    M = sqA @ B @ sqA
    y = np.log(np.linalg.eigvalsh((M + M.conj().T) / 2))
    return x.sum(), y.sum()


@pytest.mark.criterion(4, "log-majorization determinant equality within 1e-8 n")
def test_lemma3_1_determinant(detail):
    worst = 0.0
    for ens in ENSEMBLES:
        cfg = TrialConfig(trials=1000, dims=(1, 6), ensemble=ens)
        for t in range(cfg.trials):
            inp = trial_inputs("lemma3_1", cfg, t)
            A, B = inp["A"], inp["B"]
            n = A.shape[0]
            sx, sy = _log_spectrum_sums(A, B)
            assert abs(sx - sy) <= 1e-8 * n, (ens, t, sx - sy)
            out = checks.check_lemma3_1(A, B)
            det = out.component("determinant")
            assert det.holds and abs(det.margin) <= 1e-8 * n
            worst = max(worst, abs(sx - sy) / n)
    detail(f"max |gap|/n {worst:.1e}")


# ---------------------------------------------------------------------------
# 5. witness soundness
# ---------------------------------------------------------------------------

@pytest.mark.criterion(5, "every unitary witness and PSD certificate re-verified by Jacobi")
def test_witness_soundness(detail):
    count = worst_u = 0
    worst_c = np.inf
    for ens in ENSEMBLES:
        cfg = TrialConfig(trials=100, dims=(1, 6), ensemble=ens)
        for name in NAMES:
            for t in range(cfg.trials):
                out = run_trial(name, cfg, t)
                for cert in out.certificates:
                    # re-read from the serialized payload, as a report consumer would
                    cert = Certificate.from_dict(json.loads(json.dumps(cert.to_dict())))
                    for U in cert.unitaries():
                        n = U.shape[0]
                        dev = _opnorm(U.conj().T @ U - np.eye(n))
                        assert dev <= 1e-10 * n, (name, t, dev)
                        worst_u = max(worst_u, dev / n)
                    lam = cert.lambda_min(method="jacobi")
                    bound = -1e-10 * (1 + cert.operand_norm())
                    assert lam >= bound, (name, t, cert.name, lam)
                    worst_c = min(worst_c, lam / (1 + cert.operand_norm()))
                    count += 1
    detail(f"{count} certificates, max unitarity/n {worst_u:.1e}, min scaled eig {worst_c:.1e}")
    assert count > 1000


# ---------------------------------------------------------------------------
# 6. Fan dominance
# ---------------------------------------------------------------------------

@pytest.mark.criterion(6, "prec_w on singular values agrees with all Ky Fan norms on 1000 pairs")
def test_fan_dominance(detail):
    rng = np.random.default_rng(6)
    verdicts = []
    for i in range(1000):
        n = int(rng.integers(1, 7))
        A = ensembles.ginibre(rng, n)
        if i % 3 == 0:
            # near the boundary: a unitary rotation of A, slightly rescaled
            U = ensembles.haar_unitary(rng, n)
            B = U @ A * (1 + rng.choice([-1, 1]) * 10.0 ** rng.uniform(-6, -1))
        else:
            B = ensembles.ginibre(rng, n) * rng.uniform(0.5, 2.0)
        by_majorization, by_norms = fan_dominance_check(A, B)
        assert by_majorization == by_norms, i
        verdicts.append(by_majorization)
    detail(f"{sum(verdicts)} dominated, {len(verdicts) - sum(verdicts)} not")
    assert 0 < sum(verdicts) < len(verdicts)


# ---------------------------------------------------------------------------
# 7-8. counterexample search
# ---------------------------------------------------------------------------

@pytest.mark.criterion(7, "control function breaks thm2_1 (concave slot) and thm3_2 within 10000, replays")
@pytest.mark.parametrize("name", ["thm2_1", "thm3_2"])
def test_hypothesis_necessity(name, detail):
    cfg = TrialConfig(dims=(2, 2), func="control", enforce=False, seed=0)
    res = search_counterexample(name, cfg, budget=10_000)
    assert res.found and res.evaluations <= 10_000
    if name == "thm2_1":
        assert res.best.inputs["branch"] == "concave"
    payload = json.loads(json.dumps(res.to_dict()))["best"]
    again = replay(payload, cfg)
    assert again.status == FAIL
    assert again.margin == pytest.approx(res.best.margin, abs=1e-12)
    detail(f"{name}: found at evaluation {res.found_at}, margin {res.best.margin:.3e}")


@pytest.mark.criterion(8, "entrywise order in place of wlog fails for exp within 50000 steps")
def test_entrywise_replacement_fails(detail):
    cfg = TrialConfig(dims=(2, 2), func="exp", relation="entrywise", seed=0)
    res = search_counterexample("thm3_3", cfg, budget=50_000)
    assert res.found and res.evaluations <= 50_000
    payload = json.loads(json.dumps(res.to_dict()))["best"]
    assert replay(payload, cfg).status == FAIL
    # the same (A, B, alpha) satisfies the log-majorization form
    inputs = dict(payload["inputs"])
    inputs.pop("relation", None)
    assert replay({**payload, "inputs": inputs}, TrialConfig(func="exp")).status == PASS
    detail(f"found at evaluation {res.found_at}, margin {res.best.margin:.3e}")


# ---------------------------------------------------------------------------
# 9. conjecture probe
# ---------------------------------------------------------------------------

@pytest.mark.criterion(9, "conjecture probe: 10000 trials, n <= 6, zero violations")
def test_bk_probe(detail):
    cfg = TrialConfig(trials=10_000, dims=(1, 6))
    s = run_check("bk_conjecture_probe", cfg, workers=WORKERS)
    detail(f"{s.trials} trials, {s.inconclusives} violations, min margin {s.worst.margin:.3e}")
    assert s.trials == 10_000 and s.errors == 0 and s.fails == 0
    assert s.inconclusives == 0


# ---------------------------------------------------------------------------
# 10. Naimark dilation
# ---------------------------------------------------------------------------

def _resolution(rng, n, k):
    if rng.random() < 0.25:
        # rank-deficient: spectral projections of a random Hermitian, grouped
        w, V = np.linalg.eigh(ensembles.gue(rng, n))
        labels = rng.integers(0, k, size=n)
        return [(V[:, labels == i]) @ V[:, labels == i].conj().T for i in range(k)]
    Ps = [ensembles.wishart(rng, n) for _ in range(k)]
    w, V = np.linalg.eigh(sum(Ps))
    S = (V / np.sqrt(w)) @ V.conj().T
    return [(S @ P @ S + (S @ P @ S).conj().T) / 2 for P in Ps]


@pytest.mark.criterion(10, "Naimark dilation: 500 resolutions, invariants within 10x, dim <= nm")
def test_naimark(detail):
    rng = np.random.default_rng(10)
    worst = 0.0
    for _ in range(500):
        n, k = int(rng.integers(1, 5)), int(rng.integers(1, 5))
        effects = _resolution(rng, n, k)
        d = naimark_dilate(effects)
        N = d.dimension
        assert N <= n * k
        Ps, J = d.projections, d.embedding
        unit = 10 * 1e-10 * N
        errs = [_opnorm(P - P.conj().T) for P in Ps]
        errs += [_opnorm(P @ P - P) for P in Ps]
        errs += [_opnorm(Ps[i] @ Ps[j]) for i in range(k) for j in range(k) if i != j]
        errs.append(_opnorm(sum(Ps) - np.eye(N)))
        assert max(errs) <= unit, errs
        for P, E in zip(Ps, effects):
            eig = 10 * 1e-11 * n * (1 + _opnorm(E))
            assert _opnorm(J.conj().T @ P @ J - E) <= eig
        worst = max(worst, max(errs) / N)
    detail(f"max invariant error/N {worst:.1e}")
