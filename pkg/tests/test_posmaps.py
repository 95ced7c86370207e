import numpy as np
import pytest

from eigineq import posmaps
from eigineq.ensembles import gue, haar_unitary, random_correlation, random_isometry, wishart
from eigineq.errors import DomainError
from eigineq.matcore import coordinate_isometry, eigvals, hadamard, opnorm
from eigineq.posmaps import (
    Composition,
    Compression,
    ConjugationMixture,
    PositiveUnitalMap,
    SchurMultiplier,
    dilate_map_on_algebra,
    naimark_dilate,
)
from eigineq.tolerances import tau_eig, tau_unit

VARIANTS = ["compression", "schur", "conjugation_mixture", "composition"]


@pytest.mark.parametrize("variant", VARIANTS)
def test_random_maps_are_positive_unital_linear(variant):
    rng = np.random.default_rng(0)
    for m in (1, 3, 5):
        phi = posmaps.random_map(rng, m, variant)
        assert posmaps.unitality_deviation(phi) <= tau_unit(m)
        assert posmaps.positivity_margin(phi, rng, samples=100) >= 0
        assert posmaps.linearity_deviation(phi, rng) <= 10


def test_apply_examples():
    rng = np.random.default_rng(1)
    A = gue(rng, 3)
    assert np.allclose(SchurMultiplier(np.ones((3, 3))).apply(A), A)
    phi = Compression(coordinate_isometry(2, [0]))
    assert np.allclose(phi.apply(np.diag([1.0, 2.0])), [[1.0]])
    U = haar_unitary(rng, 3)
    mix = ConjugationMixture([0.25, 0.75], [np.eye(3), U])
    assert np.allclose(mix.apply(A), 0.25 * A + 0.75 * U @ A @ U.conj().T)
    C = random_correlation(rng, 3)
    W = random_isometry(rng, 3, 2)
    comp = Composition([SchurMultiplier(C), Compression(W)])
    assert np.allclose(comp.apply(A), W.conj().T @ hadamard(C, A) @ W)
    assert np.allclose(comp(np.eye(3)), np.eye(2))


def test_apply_order_mismatch():
    with pytest.raises(DomainError):
        SchurMultiplier(np.eye(3)).apply(np.eye(2))


def test_correlation_validation():
    with pytest.raises(DomainError, match="diagonal"):
        SchurMultiplier(np.diag([1.0, 2.0]))
    with pytest.raises(DomainError, match="PSD"):
        SchurMultiplier(np.array([[1.0, 2.0], [2.0, 1.0]]))


@pytest.mark.parametrize("variant", VARIANTS)
def test_map_json_roundtrip(variant):
    rng = np.random.default_rng(2)
    phi = posmaps.random_map(rng, 3, variant)
    back = PositiveUnitalMap.from_dict(phi.to_dict())
    A = gue(rng, 3)
    assert np.allclose(back.apply(A), phi.apply(A))
    with pytest.raises(DomainError):
        PositiveUnitalMap.from_dict({"variant": "mystery"})


def test_naimark_examples():
    d = naimark_dilate([np.eye(2)])
    assert d.dimension == 2
    assert np.allclose(d.projections[0], np.eye(2))

    d = naimark_dilate([np.eye(1) / 2, np.eye(1) / 2])
    assert d.dimension == 2
    for P in d.projections:
        assert np.allclose(np.abs(P), 0.5)
        assert np.isclose(np.trace(P).real, 1.0)
    assert np.allclose([C[0, 0] for C in d.compressions()], [0.5, 0.5])
    assert d.verify()

    d = naimark_dilate([np.diag([1.0, 0.0]), np.diag([0.0, 1.0])])
    assert d.verify()
    for P in d.projections:
        # block-diagonal w.r.t. the two summands
        assert np.allclose(P[:2, 2:], 0)
    assert np.allclose(d.compressions()[0], np.diag([1.0, 0.0]))


def test_naimark_errors():
    with pytest.raises(DomainError, match="sum"):
        naimark_dilate([np.eye(2) / 2])
    with pytest.raises(DomainError, match="PSD"):
        naimark_dilate([np.diag([2.0, 1.0]), np.diag([-1.0, 0.0])])
    with pytest.raises(DomainError):
        naimark_dilate([])


def test_naimark_random_resolutions():
    rng = np.random.default_rng(3)
    for _ in range(50):
        n, k = int(rng.integers(1, 5)), int(rng.integers(1, 5))
        Ps = [wishart(rng, n) for _ in range(k)]
        S = sum(Ps)
        w, V = np.linalg.eigh(S)
        Sm = (V / np.sqrt(w)) @ V.conj().T
        effects = [Sm @ P @ Sm for P in Ps]
        effects = [(E + E.conj().T) / 2 for E in effects]
        d = naimark_dilate(effects)
        assert d.verify()
        assert d.dimension == k * n


def test_dilate_identity_map_is_trivial():
    A = gue(np.random.default_rng(4), 3)
    dil, rep = dilate_map_on_algebra(posmaps.identity_map(3), A)
    assert dil.dimension == 3
    assert np.allclose(rep(lambda t: t), A)


def test_dilate_schur_on_diagonal():
    C = random_correlation(np.random.default_rng(5), 2)
    phi = SchurMultiplier(C)
    dil, rep = dilate_map_on_algebra(phi, np.diag([1.0, 3.0]))
    # E_i are coordinate projections and C o E_i = E_i
    for Ei, Pi in zip(rep.spectral_projections, rep.projections):
        assert np.allclose(phi.apply(Ei), Ei)
    assert posmaps.algebra_contract_error(phi, np.diag([1.0, 3.0]), dil, rep) <= 1


@pytest.mark.parametrize("variant", VARIANTS)
def test_dilation_contract_random(variant):
    rng = np.random.default_rng(6)
    for m in (1, 2, 4):
        phi = posmaps.random_map(rng, m, variant)
        A = gue(rng, m)
        dil, rep = dilate_map_on_algebra(phi, A)
        assert dil.verify()
        assert dil.dimension <= phi.output_dim * m
        assert posmaps.algebra_contract_error(phi, A, dil, rep) <= 1


def test_clusters_merge_near_degenerate():
    A = np.diag([1.0, 1.0 + 1e-12, 2.0])
    values, projs = posmaps.spectral_clusters(A)
    assert len(values) == 2
    assert np.allclose(sum(projs), np.eye(3))
    assert np.isclose(np.trace(projs[1]).real, 2.0)


def test_representation_is_multiplicative():
    rng = np.random.default_rng(7)
    phi = posmaps.random_map(rng, 3, "schur")
    A = gue(rng, 3)
    dil, rep = dilate_map_on_algebra(phi, A)
    p1, p2 = rep(lambda t: t), rep(lambda t: t**2)
    assert opnorm(p1 @ p1 - p2) <= 10 * tau_eig(p2)
    assert eigvals(rep(lambda t: np.ones_like(t)))[-1] > 1 - 1e-10
