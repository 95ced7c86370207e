"""Dense complex matrix core: Hermitian eigendecomposition, spectral calculus,
Kronecker/Hadamard products, compressions and unitary completion.

Every matrix is a 2-D ``complex128`` numpy array. Real symmetric input is
promoted with zero imaginary part.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import DomainError, NumericError, SingularityError
from .tolerances import (
    DOMAIN_SLACK,
    opnorm,
    tau_psd,
    tau_sym,
    tau_unit,
)

SWEEP_FACTOR = 100  # Jacobi iteration cap: 100 * n**2 sweeps
ROUNDING_FLOOR = 8 * np.finfo(float).eps  # relative size of eigenvalue rounding noise


def as_matrix(M, square=False):
    """Return ``M`` as a finite 2-D complex array."""
    M = np.array(M, dtype=complex, copy=True)
    if M.ndim == 0:
        M = M.reshape(1, 1)
    if M.ndim != 2 or 0 in M.shape:
        raise DomainError(f"expected a non-empty 2-D matrix, got shape {M.shape}")
    if not np.all(np.isfinite(M)):
        raise DomainError("matrix has non-finite entries")
    if square and M.shape[0] != M.shape[1]:
        raise DomainError(f"expected a square matrix, got shape {M.shape}")
    return M


def hermitian_part(M):
    M = np.asarray(M)
    return (M + M.conj().T) / 2


def hermitian(A):
    """Validate that ``A`` is Hermitian within tau_sym and return its exact Hermitian part."""
    A = as_matrix(A, square=True)
    dev = float(np.max(np.abs(A - A.conj().T)))
    if dev > tau_sym(A):
        raise DomainError(f"matrix is not Hermitian (deviation {dev:.3e})")
    return hermitian_part(A)


def identity(n):
    return np.eye(n, dtype=complex)


def unitarity_deviation(U):
    U = np.asarray(U)
    n = U.shape[0]
    I = np.eye(n)
    return max(opnorm(U @ U.conj().T - I), opnorm(U.conj().T @ U - I))


def is_unitary(U, tol=None):
    U = np.asarray(U)
    if U.ndim != 2 or U.shape[0] != U.shape[1]:
        return False
    return unitarity_deviation(U) <= (tau_unit(U.shape[0]) if tol is None else tol)


# ---------------------------------------------------------------------------
# eigendecomposition
# ---------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class SpectralDecomposition:
    """Eigenvalues in non-increasing order and the matching unitary of eigenvectors."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    def reconstruct(self):
        Q = self.eigenvectors
        return (Q * self.eigenvalues) @ Q.conj().T

    def __iter__(self):
        yield self.eigenvalues
        yield self.eigenvectors


def _jacobi_eigh(A):
    """Cyclic complex Jacobi rotations; eigenvalues unsorted."""
    A = A.copy()
    n = A.shape[0]
    V = np.eye(n, dtype=complex)
    if n == 1:
        return A.real.diagonal().copy(), V
    scale = np.linalg.norm(A)
    tol = np.finfo(float).eps * max(scale, np.finfo(float).tiny)
    cap = SWEEP_FACTOR * n * n
    for _ in range(cap):
        off = np.linalg.norm(A - np.diag(np.diagonal(A)))
        if off <= tol:
            return A.real.diagonal().copy(), V
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = A[p, q]
                mag = abs(apq)
                if mag <= tol * 1e-3:
                    continue
                phase = apq / mag
                theta = (A[q, q].real - A[p, p].real) / (2.0 * mag)
                t = math.copysign(1.0, theta) / (abs(theta) + math.sqrt(1.0 + theta * theta))
                c = 1.0 / math.sqrt(1.0 + t * t)
                s = t * c
                # J = diag(1, conj(phase)) @ [[c, s], [-s, c]] on coordinates (p, q)
                J = np.array([[c, s], [-s * np.conj(phase), c * np.conj(phase)]])
                idx = [p, q]
                A[:, idx] = A[:, idx] @ J
                A[idx, :] = J.conj().T @ A[idx, :]
                A[p, q] = A[q, p] = 0.0
                A[p, p] = A[p, p].real
                A[q, q] = A[q, q].real
                V[:, idx] = V[:, idx] @ J
    raise NumericError(f"Jacobi eigensolver did not converge within the cap of {cap} sweeps")


def _canonical(w, V, scale):
    """Sort descending, fix eigenvector phases, and order tied columns lexicographically."""
    order = np.argsort(-w, kind="stable")
    w = w[order]
    V = V[:, order]
    n = len(w)
    # phase: the first entry of (rounded) maximal modulus becomes real positive
    for j in range(n):
        col = V[:, j]
        mags = np.round(np.abs(col), 12)
        i = int(np.argmax(mags))
        ph = col[i] / abs(col[i])
        V[:, j] = col / ph
    tie = 1e-13 * (1.0 + scale)
    start = 0
    while start < n:
        stop = start + 1
        while stop < n and w[stop - 1] - w[stop] <= tie:
            stop += 1
        if stop - start > 1:
            block = V[:, start:stop]
            keys = [
                tuple(np.round(np.concatenate([block[:, j].real, block[:, j].imag]), 10))
                for j in range(block.shape[1])
            ]
            perm = sorted(range(len(keys)), key=lambda j: keys[j], reverse=True)
            V[:, start:stop] = block[:, perm]
        start = stop
    return w, V


def eigh(A, method="lapack"):
    """Hermitian eigendecomposition with eigenvalues in non-increasing order.

    ``method="lapack"`` uses numpy's divide-and-conquer driver; ``method="jacobi"``
    runs the in-package cyclic Jacobi solver, which serves as an independent
    second route for verification. Ties are resolved deterministically:
    eigenvectors are phase-normalised and tied columns are ordered by the
    lexicographic order of their rounded coordinates.
    """
    A = hermitian(A)
    if method == "lapack":
        try:
            w, V = np.linalg.eigh(A)
        except np.linalg.LinAlgError as exc:  # pragma: no cover - LAPACK failure
            raise NumericError(f"LAPACK eigensolver did not converge: {exc}") from exc
    elif method == "jacobi":
        w, V = _jacobi_eigh(A)
    else:
        raise ValueError(f"unknown eigensolver {method!r}")
    w, V = _canonical(np.asarray(w, dtype=float), V, opnorm(A))
    return SpectralDecomposition(w, V)


def eigvals(A):
    """Eigenvalues of a Hermitian matrix, non-increasing."""
    A = hermitian(A)
    return np.linalg.eigvalsh(A)[::-1].copy()


def singular_values(M):
    return np.linalg.svd(as_matrix(M), compute_uv=False)


# ---------------------------------------------------------------------------
# spectral calculus
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Interval:
    lo: float = -math.inf
    hi: float = math.inf
    lo_closed: bool = True
    hi_closed: bool = True

    def __contains__(self, t):
        lo_ok = t >= self.lo if self.lo_closed else t > self.lo
        hi_ok = t <= self.hi if self.hi_closed else t < self.hi
        return bool(lo_ok and hi_ok)

    def mask(self, w):
        w = np.asarray(w, dtype=float)
        lo_ok = w >= self.lo if self.lo_closed else w > self.lo
        hi_ok = w <= self.hi if self.hi_closed else w < self.hi
        return lo_ok & hi_ok

    def admit(self, w, slack=DOMAIN_SLACK):
        """Clamp values lying within ``slack`` of a closed endpoint; raise on anything else."""
        w = np.asarray(w, dtype=float).copy()
        if self.lo_closed:
            bad = w < self.lo - slack
        else:
            bad = w <= self.lo
        if self.hi_closed:
            bad |= w > self.hi + slack
        else:
            bad |= w >= self.hi
        if np.any(bad):
            raise DomainError(
                f"eigenvalue {float(w[bad][0]):.6g} outside the domain {self}"
            )
        lo = self.lo if self.lo_closed else -math.inf
        hi = self.hi if self.hi_closed else math.inf
        return np.clip(w, lo, hi)

    def __str__(self):
        return f"{'[' if self.lo_closed else '('}{self.lo:g}, {self.hi:g}{']' if self.hi_closed else ')'}"


REAL_LINE = Interval()


def _snap(w, domain, floor):
    """Move eigenvalues within rounding distance of a finite closed endpoint onto it.

    Functions like sqrt have unbounded slope at 0, so a rounded zero eigenvalue
    of 1e-17 would otherwise become 3e-9 after the map.
    """
    if domain.lo_closed and math.isfinite(domain.lo):
        w = np.where(np.abs(w - domain.lo) <= floor, domain.lo, w)
    if domain.hi_closed and math.isfinite(domain.hi):
        w = np.where(np.abs(w - domain.hi) <= floor, domain.hi, w)
    return w


def spectral_map(A, g, domain=REAL_LINE):
    """Return Q diag(g(lambda)) Q* for Hermitian ``A``; ``g`` is vectorised over eigenvalues."""
    A = hermitian(A)
    w, V = np.linalg.eigh(A)
    w = domain.admit(_snap(w, domain, ROUNDING_FLOOR * len(w) * opnorm(A)))
    gw = np.asarray(g(w))
    if not np.all(np.isfinite(gw)):
        raise DomainError("function is not finite on the spectrum")
    return hermitian_part((V * gw) @ V.conj().T)


def apply_function(f, A):
    """f(A) by spectral calculus.

    ``f`` is either a catalog :class:`~eigineq.funcat.ScalarFunction` (whose
    domain is enforced) or a plain vectorised callable defined on the real line.
    """
    domain = getattr(f, "domain", REAL_LINE)
    return spectral_map(A, f, domain)


def matrix_abs(M):
    """|M| = (M* M)^{1/2}, computed from the singular value decomposition of M."""
    M = as_matrix(M)
    if M.shape[0] != M.shape[1]:
        raise DomainError(f"matrix_abs needs a square matrix, got shape {M.shape}")
    _, s, Vh = np.linalg.svd(M)
    return hermitian_part((Vh.conj().T * s) @ Vh)


def _psd_spectrum(P, strict):
    P = hermitian(P)
    w, V = np.linalg.eigh(P)
    tol = tau_psd(P)
    if w[0] < -tol:
        raise DomainError(f"matrix is not positive semidefinite (eigenvalue {w[0]:.3e})")
    if strict and w[0] <= tol:
        raise SingularityError(
            f"matrix is not positive definite (smallest eigenvalue {w[0]:.3e} <= {tol:.3e})"
        )
    # eigenvalues below the rounding floor of the solver are zeros of the exact
    # matrix; keeping them would turn 1e-17 into 1e-17**r for fractional r
    floor = ROUNDING_FLOOR * len(w) * opnorm(P)
    return np.where(w <= floor, 0.0, w), V


def _rebuild(w, V):
    return hermitian_part((V * w) @ V.conj().T)


def sqrt_psd(P):
    w, V = _psd_spectrum(P, strict=False)
    return _rebuild(np.sqrt(w), V)


def power_psd(P, r):
    """P**r for PSD P (r >= 0; 0**0 = 1) or PD P (r < 0)."""
    w, V = _psd_spectrum(P, strict=r < 0)
    if r == 0:
        return identity(len(w))
    return _rebuild(w**r, V)


def log_pd(P):
    w, V = _psd_spectrum(P, strict=True)
    return _rebuild(np.log(w), V)


def inv_pd(P):
    w, V = _psd_spectrum(P, strict=True)
    return _rebuild(1.0 / w, V)


def exp_h(H):
    H = hermitian(H)
    w, V = np.linalg.eigh(H)
    return _rebuild(np.exp(w), V)


def pinv_sqrt_psd(P):
    """(P^+)^{1/2} together with the orthogonal projection onto range(P)."""
    w, V = _psd_spectrum(P, strict=False)
    keep = w > 0.0  # eigenvalues at rounding level are already zeroed
    inv = np.zeros_like(w)
    inv[keep] = 1.0 / np.sqrt(w[keep])
    return _rebuild(inv, V), _rebuild(keep.astype(float), V), int(keep.sum())


# ---------------------------------------------------------------------------
# structural products and compressions
# ---------------------------------------------------------------------------

def kron(A, B):
    return np.kron(as_matrix(A), as_matrix(B))


def hadamard(A, B):
    A, B = as_matrix(A), as_matrix(B)
    if A.shape != B.shape:
        raise DomainError(f"Hadamard product needs equal shapes, got {A.shape} and {B.shape}")
    return A * B


def check_isometry(W):
    W = as_matrix(W)
    rows, cols = W.shape
    if cols > rows:
        raise DomainError(f"an isometry needs cols <= rows, got shape {W.shape}")
    dev = opnorm(W.conj().T @ W - np.eye(cols))
    if dev > tau_unit(rows):
        raise DomainError(f"W*W deviates from the identity by {dev:.3e}")
    return W


def compress(M, W):
    """W* M W, the compression of the square matrix M onto the range of the isometry W."""
    M = as_matrix(M, square=True)
    W = check_isometry(W)
    if W.shape[0] != M.shape[0]:
        raise DomainError(f"isometry has {W.shape[0]} rows but the matrix has order {M.shape[0]}")
    return W.conj().T @ M @ W


def coordinate_isometry(m, indices):
    W = np.zeros((m, len(indices)), dtype=complex)
    for j, i in enumerate(indices):
        W[i, j] = 1.0
    return W


def hadamard_isometry(n):
    """Isometry with columns e_i (x) e_i: compress(kron(A, B), W) == hadamard(A, B)."""
    return coordinate_isometry(n * n, [i * n + i for i in range(n)])


def complete_to_unitary(R):
    """Extend a co-isometric block row R (n x N, R R* = I) to an N x N unitary.

    The first n rows of the result are R itself; the remaining rows come from the
    complete Householder QR factorisation of R*, which is deterministic.
    """
    R = as_matrix(R)
    n, N = R.shape
    if n > N:
        raise DomainError(f"block row has more rows than columns: {R.shape}")
    dev = opnorm(R @ R.conj().T - np.eye(n))
    if dev > tau_unit(N):
        raise DomainError(f"R R* deviates from the identity by {dev:.3e}")
    Q, _ = np.linalg.qr(R.conj().T, mode="complete")
    V = np.empty((N, N), dtype=complex)
    V[:n] = R
    V[n:] = Q[:, n:].conj().T
    return V


# ---------------------------------------------------------------------------
# compound matrices (products of singular values of matrix products)
# ---------------------------------------------------------------------------

@lru_cache(maxsize=None)
def _subsets(n, k):
    return np.array(list(itertools.combinations(range(n), k)), dtype=int)


def compound(M, k):
    """k-th compound matrix: all k x k minors, rows/columns in lexicographic subset order."""
    M = as_matrix(M, square=True)
    n = M.shape[0]
    if not 1 <= k <= n:
        raise DomainError(f"compound order {k} out of range for order {n}")
    S = _subsets(n, k)
    blocks = M[S[:, None, :, None], S[None, :, None, :]]
    return np.linalg.det(blocks)


def _compound_from_svd(M, k):
    U, s, Vh = np.linalg.svd(M)
    S = _subsets(M.shape[0], k)
    return compound(U, k) * np.prod(s[S], axis=1) @ compound(Vh, k)


def product_singular_values(factors):
    """Singular values of factors[0] @ factors[1] @ ... with high relative accuracy.

    The partial products s_1 ... s_k are the operator norms of the k-th
    compounds, which are multiplicative (Cauchy-Binet). Each compound is built
    from the factor's own singular value decomposition, so tiny singular values
    of the product are not swamped by rounding relative to its norm.
    """
    factors = [as_matrix(F, square=True) for F in factors]
    n = factors[0].shape[0]
    partial = np.empty(n)
    for k in range(1, n + 1):
        C = _compound_from_svd(factors[0], k)
        for F in factors[1:]:
            C = C @ _compound_from_svd(F, k)
        partial[k - 1] = opnorm(C)
    s = np.empty(n)
    prev = 1.0
    for k in range(n):
        s[k] = partial[k] / prev if prev > 0 else 0.0
        prev = partial[k]
    return s


# ---------------------------------------------------------------------------
# matrix JSON
# ---------------------------------------------------------------------------

def to_json(M):
    """Matrix JSON: {"n", "re", "im"} for square matrices, {"rows", "cols", ...} otherwise."""
    M = np.asarray(M, dtype=complex)
    if M.ndim != 2:
        M = M.reshape(1, 1) if M.ndim == 0 else M
    out = {}
    if M.shape[0] == M.shape[1]:
        out["n"] = int(M.shape[0])
    else:
        out["rows"], out["cols"] = int(M.shape[0]), int(M.shape[1])
    out["re"] = M.real.tolist()
    out["im"] = M.imag.tolist()
    return out


def from_json(obj, hermitian_required=True):
    """Parse matrix JSON; rejects malformed or (when required) non-Hermitian input."""
    if not isinstance(obj, dict) or "re" not in obj:
        raise DomainError("matrix JSON needs an object with 're' (and optional 'im')")
    try:
        re = np.array(obj["re"], dtype=float)
        im = np.array(obj.get("im", np.zeros_like(re)), dtype=float)
    except (TypeError, ValueError) as exc:
        raise DomainError(f"matrix JSON entries are not numeric: {exc}") from exc
    if re.ndim != 2 or re.shape != im.shape:
        raise DomainError("matrix JSON 're'/'im' must be equal-shape 2-D arrays")
    if "n" in obj and re.shape != (obj["n"], obj["n"]):
        raise DomainError(f"matrix JSON declares n={obj['n']} but has shape {re.shape}")
    M = as_matrix(re + 1j * im)
    if hermitian_required:
        hermitian(M)
    return M
