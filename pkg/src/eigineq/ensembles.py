"""Random matrix ensembles for the trial runner.

All generators take a ``numpy.random.Generator`` and return complex arrays.
"""
from __future__ import annotations

import numpy as np

from .errors import ConfigError

ENSEMBLES = ("hermitian_gaussian", "psd_wishart", "pd_conditioned", "projections")


def ginibre(rng, rows, cols=None):
    """Complex Gaussian matrix with E|g_ij|^2 = 1."""
    cols = rows if cols is None else cols
    return (rng.standard_normal((rows, cols)) + 1j * rng.standard_normal((rows, cols))) / np.sqrt(2)


def haar_unitary(rng, n):
    Z = ginibre(rng, n)
    Q, R = np.linalg.qr(Z)
    d = np.diagonal(R)
    return Q * (d / np.abs(d))


def random_isometry(rng, m, n):
    """m x n matrix with orthonormal columns, Haar distributed."""
    return haar_unitary(rng, m)[:, :n]


def random_contraction(rng, n):
    G = ginibre(rng, n)
    return G * (rng.uniform(0.2, 1.0) / np.linalg.norm(G, 2))


def random_projection(rng, n, rank):
    W = random_isometry(rng, n, rank)
    return W @ W.conj().T


def random_correlation(rng, n, rank=None):
    """PSD matrix with unit diagonal."""
    rank = n if rank is None else rank
    G = ginibre(rng, n, rank)
    C = G @ G.conj().T
    d = 1.0 / np.sqrt(np.real(np.diagonal(C)))
    C = d[:, None] * C * d[None, :]
    C = (C + C.conj().T) / 2
    np.fill_diagonal(C, 1.0)
    return C


def gue(rng, n):
    G = ginibre(rng, n)
    return (G + G.conj().T) / 2


def wishart(rng, n):
    G = ginibre(rng, n)
    return G @ G.conj().T / n


def pd_conditioned(rng, n, kappa):
    """Haar eigenbasis, log-uniform spectrum in [1/kappa, 1]."""
    Q = haar_unitary(rng, n)
    lam = np.exp(rng.uniform(-np.log(kappa), 0.0, n))
    M = (Q * lam) @ Q.conj().T
    return (M + M.conj().T) / 2


def _affine_into(H, lo, hi, rng):
    """Map the spectrum of H into [lo, hi] (shift by -lambda_min, then scale)."""
    w = np.linalg.eigvalsh(H)
    n = H.shape[0]
    width = (hi - lo) * rng.uniform(0.25, 1.0)
    if w[-1] - w[0] <= 1e-12 * (1 + abs(w[-1])):
        return np.eye(n) * (lo + width)
    M = (H - w[0] * np.eye(n)) * (width / (w[-1] - w[0])) + lo * np.eye(n)
    return (M + M.conj().T) / 2


def parse_ensemble(token):
    """Parse a CLI ensemble token: gue | wishart | pd:KAPPA | projections (or the long names)."""
    if isinstance(token, tuple):
        return token
    s = str(token)
    if s in ("gue", "hermitian_gaussian"):
        return ("hermitian_gaussian", None)
    if s in ("wishart", "psd_wishart"):
        return ("psd_wishart", None)
    if s == "projections":
        return ("projections", None)
    if s.startswith("pd:") or s.startswith("pd_conditioned:"):
        try:
            kappa = float(s.split(":", 1)[1])
        except ValueError:
            raise ConfigError(f"bad condition number in ensemble {s!r}") from None
        if kappa < 1:
            raise ConfigError("condition number must be >= 1")
        return ("pd_conditioned", kappa)
    raise ConfigError(f"unknown ensemble {s!r}")


def draw(rng, n, ensemble, kind="herm", interval=(0.0, 4.0)):
    """One operand of order n from ``ensemble``, adapted to ``kind``.

    kind is "herm" (spectrum inside interval), "psd" or "pd". The interval is
    the working interval of the function under test; unbounded ends are
    replaced by +-4.
    """
    name, kappa = parse_ensemble(ensemble)
    lo, hi = interval
    lo = -4.0 if not np.isfinite(lo) else lo
    hi = 4.0 if not np.isfinite(hi) else hi
    if kind in ("psd", "pd"):
        lo = max(lo, 0.0)
    pd_floor = max(lo, 0.1 * min(1.0, hi)) if kind == "pd" else lo
    if name == "hermitian_gaussian":
        return _affine_into(gue(rng, n), pd_floor, hi, rng)
    if name == "psd_wishart":
        M = wishart(rng, n)
        top = np.linalg.eigvalsh(M)[-1]
        M = M * min(1.0, (hi - lo) / top) + lo * np.eye(n)
        if kind == "pd" and lo == 0.0:
            M = M * (1 - 1e-3) + 1e-3 * min(1.0, hi) * np.eye(n)
        return (M + M.conj().T) / 2
    if name == "pd_conditioned":
        M = pd_conditioned(rng, n, kappa)
        if lo > 0 and kind != "pd":
            M = M + lo * np.eye(n)
        return M * min(1.0, hi)
    if name == "projections":
        P = random_projection(rng, n, int(rng.integers(0, n + 1)))
        if kind == "pd":
            P = (P + 0.1 * np.eye(n)) / 1.1
        if lo > 0:
            P = P + lo * np.eye(n)
        return P * min(1.0, hi / max(1.0, lo + 1.0))
    raise ConfigError(f"unknown ensemble {name!r}")
