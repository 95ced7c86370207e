"""Positive unital maps and the Naimark dilation of a resolution of the identity.

A map is an immutable value of one of four variants (compression, Schur
multiplier by a correlation matrix, mixture of unitary conjugations, and
composition). :func:`naimark_dilate` turns PSD effects summing to the identity
into a total family of orthogonal projections on a larger space whose
compressions give back the effects, and :func:`dilate_map_on_algebra` uses it
to represent a map on the commutative algebra generated by one Hermitian
matrix as a *-representation followed by a compression.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import ensembles
from .errors import DomainError
from .matcore import (
    ROUNDING_FLOOR,
    _snap,
    as_matrix,
    check_isometry,
    complete_to_unitary,
    compress,
    from_json,
    hadamard,
    hermitian,
    hermitian_part,
    identity,
    is_unitary,
    sqrt_psd,
    to_json,
    unitarity_deviation,
)
from .tolerances import CLUSTER_GAP, opnorm, tau_eig, tau_psd, tau_sym, tau_unit


class PositiveUnitalMap:
    """Base class; subclasses implement ``_apply`` and the (de)serialisation hooks."""

    tag = None
    input_dim: int
    output_dim: int

    def apply(self, A):
        A = as_matrix(A, square=True)
        if A.shape[0] != self.input_dim:
            raise DomainError(
                f"{self.tag} map expects order {self.input_dim}, got {A.shape[0]}"
            )
        return hermitian_part(self._apply(A)) if _is_herm(A) else self._apply(A)

    __call__ = apply

    def to_dict(self):
        return {"variant": self.tag, **self._payload()}

    @staticmethod
    def from_dict(obj):
        try:
            cls = _VARIANTS[obj["variant"]]
        except KeyError:
            raise DomainError(f"unknown map descriptor {obj!r:.80}") from None
        return cls._from_payload(obj)


def _is_herm(A):
    return float(np.max(np.abs(A - A.conj().T))) <= tau_sym(A)


class Compression(PositiveUnitalMap):
    tag = "compression"

    def __init__(self, isometry):
        self.isometry = check_isometry(isometry)
        self.input_dim, self.output_dim = self.isometry.shape

    def _apply(self, A):
        return compress(A, self.isometry)

    def _payload(self):
        return {"isometry": to_json(self.isometry)}

    @classmethod
    def _from_payload(cls, obj):
        return cls(from_json(obj["isometry"], hermitian_required=False))


class SchurMultiplier(PositiveUnitalMap):
    tag = "schur"

    def __init__(self, correlation):
        C = hermitian(correlation)
        if np.max(np.abs(np.diagonal(C) - 1.0)) > tau_sym(C):
            raise DomainError("correlation matrix needs a unit diagonal")
        lam = np.linalg.eigvalsh(C)[0]
        if lam < -tau_psd(C):
            raise DomainError(f"correlation matrix is not PSD (eigenvalue {lam:.3e})")
        self.correlation = C
        self.input_dim = self.output_dim = C.shape[0]

    def _apply(self, A):
        return hadamard(self.correlation, A)

    def _payload(self):
        return {"correlation": to_json(self.correlation)}

    @classmethod
    def _from_payload(cls, obj):
        return cls(from_json(obj["correlation"]))


class ConjugationMixture(PositiveUnitalMap):
    tag = "conjugation_mixture"

    def __init__(self, weights, unitaries):
        w = np.asarray(weights, dtype=float)
        Us = [as_matrix(U, square=True) for U in unitaries]
        if len(w) != len(Us) or not Us:
            raise DomainError("need one weight per unitary")
        if np.any(w < 0) or abs(w.sum() - 1.0) > 1e-12 * len(w):
            raise DomainError("weights must be nonnegative and sum to 1")
        n = Us[0].shape[0]
        for U in Us:
            if U.shape != (n, n) or not is_unitary(U):
                raise DomainError("conjugation mixture needs unitaries of one order")
        self.weights = w
        self.unitaries = Us
        self.input_dim = self.output_dim = n

    def _apply(self, A):
        return sum(wi * U @ A @ U.conj().T for wi, U in zip(self.weights, self.unitaries))

    def _payload(self):
        return {"weights": self.weights.tolist(), "unitaries": [to_json(U) for U in self.unitaries]}

    @classmethod
    def _from_payload(cls, obj):
        return cls(obj["weights"], [from_json(U, hermitian_required=False) for U in obj["unitaries"]])


class Composition(PositiveUnitalMap):
    """``maps[0]`` is applied first."""

    tag = "composition"

    def __init__(self, maps):
        maps = list(maps)
        if not maps:
            raise DomainError("empty composition")
        for a, b in zip(maps, maps[1:]):
            if a.output_dim != b.input_dim:
                raise DomainError(f"cannot compose {a.tag} ({a.output_dim}) with {b.tag} ({b.input_dim})")
        self.maps = maps
        self.input_dim = maps[0].input_dim
        self.output_dim = maps[-1].output_dim

    def _apply(self, A):
        for phi in self.maps:
            A = phi.apply(A)
        return A

    def _payload(self):
        return {"maps": [phi.to_dict() for phi in self.maps]}

    @classmethod
    def _from_payload(cls, obj):
        return cls([PositiveUnitalMap.from_dict(d) for d in obj["maps"]])


_VARIANTS = {cls.tag: cls for cls in (Compression, SchurMultiplier, ConjugationMixture, Composition)}


def identity_map(n):
    return Compression(identity(n))


def random_map(rng, m, variant=None):
    """A random positive unital map on M_m (a compression may shrink the order)."""
    variant = variant or rng.choice(list(_VARIANTS))
    if variant == "compression":
        return Compression(ensembles.random_isometry(rng, m, int(rng.integers(1, m + 1))))
    if variant == "schur":
        return SchurMultiplier(ensembles.random_correlation(rng, m, int(rng.integers(1, m + 1))))
    if variant == "conjugation_mixture":
        k = int(rng.integers(1, 4))
        return ConjugationMixture(rng.dirichlet(np.ones(k)), [ensembles.haar_unitary(rng, m) for _ in range(k)])
    if variant == "composition":
        first = random_map(rng, m, "schur")
        return Composition([first, random_map(rng, m, "compression")])
    raise DomainError(f"unknown map variant {variant!r}")


# ---------------------------------------------------------------------------
# map property checks
# ---------------------------------------------------------------------------

def unitality_deviation(phi):
    return opnorm(phi.apply(identity(phi.input_dim)) - identity(phi.output_dim))


def positivity_margin(phi, rng, samples=100):
    """Smallest of lambda_min(phi(P)) + tau_psd over random PSD samples (>= 0 means positive)."""
    worst = np.inf
    for _ in range(samples):
        G = ensembles.ginibre(rng, phi.input_dim, int(rng.integers(1, phi.input_dim + 1)))
        P = G @ G.conj().T
        out = phi.apply(P)
        worst = min(worst, float(np.linalg.eigvalsh(out)[0]) + tau_psd(P))
    return worst


def linearity_deviation(phi, rng, samples=10):
    worst = 0.0
    m = phi.input_dim
    for _ in range(samples):
        A, B = ensembles.gue(rng, m), ensembles.gue(rng, m)
        a, b = rng.standard_normal(2)
        lhs = phi.apply(a * A + b * B)
        rhs = a * phi.apply(A) + b * phi.apply(B)
        worst = max(worst, opnorm(lhs - rhs) / tau_eig(a * A + b * B))
    return worst  # in units of tau_eig


# ---------------------------------------------------------------------------
# Naimark dilation
# ---------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class NaimarkDilation:
    """Block unitary V on the dilation space, the projections P_i = R_i R_i*, and the embedding."""

    unitary: np.ndarray
    projections: list
    embedding: np.ndarray
    effects: list

    @property
    def dimension(self):
        return self.unitary.shape[0]

    def compressions(self):
        return [compress(P, self.embedding) for P in self.projections]

    def invariant_errors(self):
        """Largest deviations of every defining property (operator norms)."""
        Ps = self.projections
        N = self.dimension
        err = {
            "unitary": unitarity_deviation(self.unitary),
            "hermitian": max(opnorm(P - P.conj().T) for P in Ps),
            "idempotent": max(opnorm(P @ P - P) for P in Ps),
            "orthogonal": max(
                [opnorm(Ps[i] @ Ps[j]) for i in range(len(Ps)) for j in range(len(Ps)) if i != j],
                default=0.0,
            ),
            "total": opnorm(sum(Ps) - np.eye(N)),
            "compression": max(opnorm(C - A) for C, A in zip(self.compressions(), self.effects)),
        }
        return err

    def verify(self, factor=10.0):
        """True when every invariant holds within ``factor`` times its base tolerance."""
        err = self.invariant_errors()
        N = self.dimension
        unit = factor * tau_unit(N)
        eig = factor * max(tau_eig(A) for A in self.effects)
        return all(err[k] <= unit for k in ("unitary", "hermitian", "idempotent", "orthogonal", "total")) and (
            err["compression"] <= eig
        )


def naimark_dilate(effects):
    """Dilate PSD effects A_1..A_k (sum = I_n) to orthogonal projections on C^{kn}.

    The block row (A_1^{1/2} ... A_k^{1/2}) is co-isometric; completing it to a
    unitary V and keeping the i-th block column of V gives R_i, and P_i = R_i R_i*
    compresses to A_i on the first summand.
    """
    effects = [hermitian(A) for A in effects]
    if not effects:
        raise DomainError("need at least one effect")
    n = effects[0].shape[0]
    for A in effects:
        if A.shape != (n, n):
            raise DomainError("effects must share one order")
        lam = np.linalg.eigvalsh(A)[0]
        if lam < -tau_psd(A):
            raise DomainError(f"effect is not PSD (eigenvalue {lam:.3e})")
    k = len(effects)
    dev = opnorm(sum(effects) - np.eye(n))
    if dev > tau_unit(k * n):
        raise DomainError(f"effects do not sum to the identity (deviation {dev:.3e})")
    row = np.hstack([sqrt_psd(A) for A in effects])
    V = complete_to_unitary(row)
    projections = []
    for i in range(k):
        cols = V[:, i * n:(i + 1) * n]
        projections.append(cols @ cols.conj().T)
    embedding = np.zeros((k * n, n), dtype=complex)
    embedding[:n, :n] = np.eye(n)
    return NaimarkDilation(V, projections, embedding, effects)


@dataclass(frozen=True, eq=False)
class Representation:
    """pi(sum_i c_i E_i) = sum_i c_i P_i on the algebra generated by one Hermitian matrix."""

    values: np.ndarray
    spectral_projections: list
    projections: list

    def __call__(self, g):
        """pi(g(A)) for a vectorised scalar function g (or a catalog function)."""
        vals = self.values
        domain = getattr(g, "domain", None)  # catalog functions carry their domain
        if domain is not None:
            floor = ROUNDING_FLOOR * len(vals) * float(np.max(np.abs(vals)))
            vals = domain.admit(_snap(vals, domain, floor))
        gv = np.asarray(g(vals), dtype=complex)
        return sum(c * P for c, P in zip(gv, self.projections))

    def table(self):
        return list(zip(self.values.tolist(), self.spectral_projections, self.projections))


def spectral_clusters(A, gap=CLUSTER_GAP):
    """(cluster eigenvalues, spectral projections) merging eigenvalues closer than gap*(1+||A||)."""
    A = hermitian(A)
    w, V = np.linalg.eigh(A)
    w, V = w[::-1], V[:, ::-1]
    thresh = gap * (1.0 + opnorm(A))
    groups = [[0]]
    for i in range(1, len(w)):
        if w[groups[-1][-1]] - w[i] <= thresh:
            groups[-1].append(i)
        else:
            groups.append([i])
    values = np.array([w[g].mean() for g in groups])
    projs = [V[:, g] @ V[:, g].conj().T for g in groups]
    return values, projs


def dilate_map_on_algebra(phi, A):
    """Dilation and representation with phi(X) = compress(pi(X)) on the algebra generated by A.

    When phi maps every spectral projection of A to a projection no dilation is
    needed and the original space is returned with pi = phi.
    """
    values, E = spectral_clusters(A)
    effects = [phi.apply(Ei) for Ei in E]
    n = phi.output_dim
    if all(opnorm(X @ X - X) <= tau_unit(n) for X in effects):
        dil = NaimarkDilation(identity(n), effects, identity(n), effects)
    else:
        dil = naimark_dilate(effects)
    return dil, Representation(values, E, dil.projections)


def algebra_contract_error(phi, A, dil, rep, degrees=range(4)):
    """max over g(t) = t^d of ||compress(pi(g(A))) - phi(g(A))||, in units of 10 tau_eig."""
    A = hermitian(A)
    worst = 0.0
    for d in degrees:
        gA = np.linalg.matrix_power(A, d)
        lhs = compress(rep(lambda t, d=d: t**d), dil.embedding)
        rhs = phi.apply(gA)
        worst = max(worst, opnorm(lhs - rhs) / (10 * tau_eig(gA)))
    return worst
