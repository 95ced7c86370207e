"""Majorization relations between sorted spectra, Ky Fan norms, and alignment witnesses."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DomainError
from .matcore import (
    as_matrix,
    eigh,
    eigvals,
    hermitian,
    hermitian_part,
    matrix_abs,
    unitarity_deviation,
)
from .tolerances import MAJ_BASE, PSD_BASE, tau_maj, tau_psd

RELATIONS = (
    "prec_w",
    "prec",
    "prec_sup_w",
    "prec_wlog",
    "prec_sup_wlog",
    "entrywise_down",
    "entrywise_up",
)


@dataclass(frozen=True)
class Verdict:
    """Outcome of one relation test.

    ``margin`` is the smallest defining slack over k (absolute; in log units when
    ``scale == "log"``); ``worst_k`` is the 1-based index attaining it.
    """

    relation: str
    holds: bool
    margin: float
    worst_k: int
    tol: float
    scale: str = "linear"

    def to_dict(self):
        return {
            "relation": self.relation,
            "holds": self.holds,
            "margin": self.margin,
            "worst_k": self.worst_k,
            "tol": self.tol,
            "scale": self.scale,
        }


def spectrum(values):
    """Real vector sorted non-increasingly."""
    v = np.asarray(values, dtype=float).ravel()
    if not np.all(np.isfinite(v)):
        raise DomainError("spectrum has non-finite entries")
    return np.sort(v)[::-1]


def _worst(d):
    k = int(np.argmin(d))
    return float(d[k]), k + 1


def _nonneg(v, label):
    # tiny negative values are rounding of zero eigenvalues
    floor = PSD_BASE * (1.0 + float(np.max(np.abs(v), initial=0.0)))
    if np.any(v < -floor):
        raise DomainError(f"log relation needs nonnegative entries ({label} has {v.min():.3e})")
    return np.clip(v, 0.0, None)


def relate(x, y, relation, base=MAJ_BASE):
    """Test ``x <relation> y``.

    prec_w / prec: descending partial sums of x bounded by those of y (prec also
    needs equal totals). prec_sup_w: ascending partial sums of x dominate those
    of y. prec_wlog / prec_sup_wlog: the same with partial products of
    nonnegative entries, computed on logarithms when every entry is safely
    positive and directly as products otherwise (zeros are legal then).
    entrywise_down / entrywise_up: x_k <= y_k for the sorted vectors, reporting
    the index in descending resp. ascending order.
    """
    if relation not in RELATIONS:
        raise DomainError(f"unknown relation {relation!r}")
    xd, yd = spectrum(x), spectrum(y)
    if xd.shape != yd.shape:
        raise DomainError(f"length mismatch: {xd.size} vs {yd.size}")
    n = xd.size
    scale = "linear"
    if relation in ("prec_w", "prec"):
        d = np.cumsum(yd) - np.cumsum(xd)
        tol = tau_maj(xd, yd, base=base)
        if relation == "prec":
            d = d.copy()
            d[-1] = -abs(d[-1])
        margin, k = _worst(d)
    elif relation == "prec_sup_w":
        d = np.cumsum(xd[::-1]) - np.cumsum(yd[::-1])
        tol = tau_maj(xd, yd, base=base)
        margin, k = _worst(d)
    elif relation in ("prec_wlog", "prec_sup_wlog"):
        xd, yd = _nonneg(xd, "x"), _nonneg(yd, "y")
        floor = PSD_BASE * (1.0 + max(xd[0], yd[0]))
        if relation == "prec_sup_wlog":
            xs, ys = xd[::-1], yd[::-1]
        else:
            xs, ys = xd, yd
        if xs.min() > floor and ys.min() > floor:
            lx, ly = np.log(xs), np.log(ys)
            tol = tau_maj(lx, ly, base=base)
            scale = "log"
            if relation == "prec_wlog":
                d = np.cumsum(ly) - np.cumsum(lx)
            else:
                d = np.cumsum(lx) - np.cumsum(ly)
        else:
            px, py = np.cumprod(xs), np.cumprod(ys)
            tol = tau_maj(px, py, base=base)
            d = py - px if relation == "prec_wlog" else px - py
        margin, k = _worst(d)
    else:
        d = yd - xd
        tol = tau_maj(xd, yd, base=base)
        margin, k = _worst(d)
        if relation == "entrywise_up":
            k = n + 1 - k
    return Verdict(relation, bool(margin >= -tol), margin, k, float(tol), scale)


def kyfan_norm(M, k):
    """Sum of the k largest singular values; k = 1 is the operator norm."""
    M = as_matrix(M)
    s = np.linalg.svd(M, compute_uv=False)
    if not 1 <= k <= s.size:
        raise DomainError(f"Ky Fan index {k} out of range 1..{s.size}")
    return float(np.sum(s[:k]))


def fan_dominance_check(A, B, base=MAJ_BASE):
    """(weak majorization of lambda(|A|) by lambda(|B|), Ky Fan ordering for every k).

    The two booleans are computed along different routes and must agree.
    """
    A, B = as_matrix(A, square=True), as_matrix(B, square=True)
    if A.shape != B.shape:
        raise DomainError(f"shape mismatch {A.shape} vs {B.shape}")
    la, lb = eigvals(matrix_abs(A)), eigvals(matrix_abs(B))
    wmaj = relate(la, lb, "prec_w", base=base).holds
    tol = tau_maj(la, lb, base=base)
    n = A.shape[0]
    all_kyfan = all(kyfan_norm(A, k) <= kyfan_norm(B, k) + tol for k in range(1, n + 1))
    return wmaj, all_kyfan


@dataclass(frozen=True, eq=False)
class Witness:
    """A unitary W with W P W* <= Q, plus its PSD certificate."""

    unitary: np.ndarray
    verdict: Verdict
    certificate: float  # smallest eigenvalue of Q - W P W*
    cert_tol: float
    unitarity: float

    @property
    def certified(self):
        n = self.unitary.shape[0]
        return self.certificate >= -self.cert_tol and self.unitarity <= 1e-10 * n


@dataclass(frozen=True)
class Refusal:
    """No unitary W with W P W* <= Q exists; ``index`` is where the sorted spectra cross."""

    verdict: Verdict
    index: int

    def __bool__(self):
        return False


def psd_certificate(P, Q, W):
    """(lambda_min(Q - W P W*), tau_psd of the larger operand) for the claim W P W* <= Q."""
    D = hermitian_part(Q - W @ P @ W.conj().T)
    return float(np.linalg.eigvalsh(D)[0]), max(tau_psd(P), tau_psd(Q))


def align_witness(P, Q, base=MAJ_BASE):
    """Unitary W = Q_vecs P_vecs* realising W P W* <= Q when lambda(P) <= lambda(Q) entrywise.

    By Weyl monotonicity such a unitary exists exactly when the sorted spectra
    are ordered entrywise, so a :class:`Refusal` is a genuine non-existence.
    """
    P, Q = hermitian(P), hermitian(Q)
    if P.shape != Q.shape:
        raise DomainError(f"shape mismatch {P.shape} vs {Q.shape}")
    dp, dq = eigh(P), eigh(Q)
    verdict = relate(dp.eigenvalues, dq.eigenvalues, "entrywise_down", base=base)
    if not verdict.holds:
        return Refusal(verdict, verdict.worst_k)
    W = dq.eigenvectors @ dp.eigenvectors.conj().T
    cert, tol = psd_certificate(P, Q, W)
    return Witness(W, verdict, cert, tol, unitarity_deviation(W))
