"""Check outcomes: the components a check is made of, PSD certificates, and
(de)serialisation of the inputs so any outcome can be replayed."""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..majorize import Verdict
from ..matcore import from_json, hermitian_part, to_json, unitarity_deviation
from ..posmaps import PositiveUnitalMap
from ..tolerances import PSD_BASE, opnorm

PASS, FAIL, INCONCLUSIVE = "pass", "fail", "inconclusive"


@dataclass(frozen=True)
class Component:
    """One comparison inside a check.

    ``exact`` components have both sides computable and may produce a fail;
    non-exact ones (optimisation bounds) can only make the outcome
    inconclusive. Components with ``gate=False`` are diagnostics: they are
    reported but never change the status.
    """

    name: str
    relation: str
    holds: bool
    margin: float
    tol: float
    worst_k: int = 1
    exact: bool = True
    gate: bool = True

    @property
    def slack(self):
        """margin / tol: the component fails exactly when slack < -1."""
        return self.margin / self.tol

    def to_dict(self):
        return {
            "name": self.name,
            "relation": self.relation,
            "holds": self.holds,
            "margin": self.margin,
            "tol": self.tol,
            "worst_k": self.worst_k,
            "exact": self.exact,
            "gate": self.gate,
        }


def from_verdict(name, v: Verdict, exact=True, gate=True):
    return Component(name, v.relation, v.holds, float(v.margin), float(v.tol), int(v.worst_k), exact, gate)


def scalar_component(name, lhs, rhs, tol, relation="le", exact=True, gate=True):
    """Component for the scalar claim lhs <= rhs."""
    margin = float(rhs - lhs)
    return Component(name, relation, margin >= -tol, margin, float(tol), 1, exact, gate)


# ---------------------------------------------------------------------------
# PSD certificates for witness unitaries
# ---------------------------------------------------------------------------

def _side(terms):
    return sum(c * (M if U is None else U @ M @ U.conj().T) for c, U, M in terms)


@dataclass(frozen=True, eq=False)
class Certificate:
    """The claim sum(lhs) <= sum(rhs), each term (coef, U or None, M) meaning coef * U M U*."""

    name: str
    lhs: tuple
    rhs: tuple

    def unitaries(self):
        return [U for _, U, _ in self.lhs + self.rhs if U is not None]

    def operand_norm(self):
        return max(opnorm(M) for _, _, M in self.lhs + self.rhs)

    def tol(self):
        return PSD_BASE * (1.0 + self.operand_norm())

    def difference(self):
        return hermitian_part(_side(self.rhs) - _side(self.lhs))

    def lambda_min(self, method="lapack"):
        D = self.difference()
        if method == "lapack":
            return float(np.linalg.eigvalsh(D)[0])
        from ..matcore import eigh  # the in-package Jacobi route

        return float(eigh(D, method=method).eigenvalues[-1])

    def unitarity(self):
        return max((unitarity_deviation(U) for U in self.unitaries()), default=0.0)

    def component(self):
        lam, tol = self.lambda_min(), self.tol()
        return Component(f"{self.name}_certificate", "psd", lam >= -tol, lam, tol)

    def to_dict(self):
        def enc(terms):
            return [
                {"coef": float(c), "unitary": None if U is None else to_json(U), "matrix": to_json(M)}
                for c, U, M in terms
            ]

        return {"name": self.name, "lhs": enc(self.lhs), "rhs": enc(self.rhs)}

    @classmethod
    def from_dict(cls, d):
        def dec(terms):
            return tuple(
                (
                    t["coef"],
                    None if t["unitary"] is None else from_json(t["unitary"], hermitian_required=False),
                    from_json(t["matrix"]),
                )
                for t in terms
            )

        return cls(d["name"], dec(d["lhs"]), dec(d["rhs"]))


# ---------------------------------------------------------------------------
# outcome
# ---------------------------------------------------------------------------

@dataclass(eq=False)
class CheckOutcome:
    check: str
    components: list
    inputs: dict
    certificates: list = field(default_factory=list)
    notes: list = field(default_factory=list)

    def _ranked(self):
        gates = [c for c in self.components if c.gate] or list(self.components)
        return min(gates, key=lambda c: c.slack)

    @property
    def decisive(self):
        return self._ranked()

    @property
    def status(self):
        gates = [c for c in self.components if c.gate]
        if any(c.exact and not c.holds for c in gates):
            return FAIL
        if any(not c.holds for c in gates):
            return INCONCLUSIVE
        return PASS

    @property
    def margin(self):
        return self.decisive.margin

    @property
    def tol(self):
        return self.decisive.tol

    @property
    def slack(self):
        return self.decisive.slack

    @property
    def worst_k(self):
        return self.decisive.worst_k

    def component(self, name):
        for c in self.components:
            if c.name == name:
                return c
        raise KeyError(name)

    def diagnostics_failed(self):
        return [c for c in self.components if not c.gate and not c.holds]

    def to_dict(self, with_inputs=True):
        d = {
            "check": self.check,
            "status": self.status,
            "margin": self.margin,
            "tol": self.tol,
            "worst_k": self.worst_k,
            "decisive": self.decisive.name,
            "components": [c.to_dict() for c in self.components],
            "notes": list(self.notes),
        }
        if with_inputs:
            d["inputs"] = encode_inputs(self.inputs)
            d["witnesses"] = [c.to_dict() for c in self.certificates]
        return d


# ---------------------------------------------------------------------------
# input payloads
# ---------------------------------------------------------------------------

def encode_inputs(inputs):
    out = {}
    for key, val in inputs.items():
        out[key] = _encode(val)
    return out


def _encode(val):
    if isinstance(val, np.ndarray) and val.ndim == 2:
        return to_json(val)
    if isinstance(val, PositiveUnitalMap):
        return val.to_dict()
    if isinstance(val, (list, tuple)):
        return [_encode(v) for v in val]
    if isinstance(val, (np.floating, np.integer)):
        return val.item()
    return val


def decode_inputs(payload):
    return {key: _decode(val) for key, val in payload.items()}


def _decode(val):
    if isinstance(val, dict) and "re" in val:
        return from_json(val, hermitian_required=False)
    if isinstance(val, dict) and "variant" in val:
        return PositiveUnitalMap.from_dict(val)
    if isinstance(val, list):
        return [_decode(v) for v in val]
    return val
