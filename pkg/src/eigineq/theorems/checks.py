"""One predicate per inequality.

Every check returns a :class:`CheckOutcome` built from components: spectral
comparisons via :func:`relate`, PSD certificates for constructed witness
unitaries, and scalar comparisons. Checks taking a function enforce its
hypothesis flags unless ``enforce=False`` (used by the counterexample search to
deliberately drop hypotheses).
"""
from __future__ import annotations

import numpy as np

from .. import funcat
from ..errors import DomainError, NumericError, PreconditionError
from ..majorize import Refusal, align_witness, relate
from ..matcore import (
    ROUNDING_FLOOR,
    apply_function,
    as_matrix,
    compress,
    eigvals,
    hadamard,
    hermitian,
    identity,
    inv_pd,
    log_pd,
    matrix_abs,
    pinv_sqrt_psd,
    power_psd,
    product_singular_values,
    spectral_map,
    sqrt_psd,
)
from ..posmaps import dilate_map_on_algebra
from ..tolerances import MAJ_BASE, PSD_BASE, opnorm, tau_eig, tau_maj, tau_psd, tau_unit
from .outcome import Certificate, CheckOutcome, Component, from_verdict, scalar_component

CONSEQUENCE_NOTE = "consequence-level certificate"


def _require(f, enforce, label, all_of=(), any_of=()):
    if not enforce:
        return
    missing = [flag for flag in all_of if not f.has(flag)]
    if any_of and not any(f.has(flag) for flag in any_of):
        missing.append(" or ".join(any_of))
    if missing:
        raise PreconditionError(f"{label} needs {', '.join(missing)}; {f.name} lacks it")


def _psd_operand(M, label, strict=False):
    M = hermitian(M)
    lam = float(np.linalg.eigvalsh(M)[0])
    if lam < -tau_psd(M):
        raise DomainError(f"{label} must be positive semidefinite (eigenvalue {lam:.3e})")
    if strict and lam <= tau_psd(M):
        raise DomainError(f"{label} must be positive definite (eigenvalue {lam:.3e})")
    return M


def _witness(name, P, Q, base, gate=True):
    """Components (and certificate) for the claim W P W* <= Q for some unitary W."""
    w = align_witness(P, Q, base=base)
    comps = [from_verdict(f"{name}_entrywise", w.verdict, gate=gate)]
    certs = []
    if not isinstance(w, Refusal):
        cert = Certificate(name, ((1.0, w.unitary, P),), ((1.0, None, Q),))
        certs.append(cert)
        comps.append(cert.component())
    return comps, certs, w


def _outcome(check, comps, inputs, certs=(), notes=()):
    return CheckOutcome(check, list(comps), inputs, list(certs), list(notes))


# ---------------------------------------------------------------------------
# convexity under contractions and sums
# ---------------------------------------------------------------------------

def _branch_of(f, branch):
    if branch is not None:
        return branch
    if f.has("convex") and not f.has("concave"):
        return "convex"
    return "concave"


def check_eq2(f, A, X, branch=None, base=MAJ_BASE, enforce=True):
    """lambda(f(X A X*)) <= lambda(X f(A) X*) for monotone convex f with f(0) <= 0
    (reversed for monotone concave f with f(0) >= 0), X a contraction."""
    f = funcat.get(f)
    branch = _branch_of(f, branch)
    if branch == "convex":
        _require(f, enforce, "eq2 (convex)", ("convex", "f0_le_0"), ("increasing", "decreasing"))
    else:
        _require(f, enforce, "eq2 (concave)", ("concave", "f0_ge_0"), ("increasing", "decreasing"))
    A = hermitian(A)
    X = as_matrix(X, square=True)
    n = A.shape[0]
    if X.shape != A.shape:
        raise DomainError(f"contraction has shape {X.shape}, operand order {n}")
    if opnorm(X) > 1 + tau_unit(n):
        raise DomainError(f"X is not a contraction (norm {opnorm(X):.6g})")
    lhs = apply_function(f, X @ A @ X.conj().T)
    rhs = X @ apply_function(f, A) @ X.conj().T
    rhs = (rhs + rhs.conj().T) / 2
    P, Q = (lhs, rhs) if branch == "convex" else (rhs, lhs)
    comps, certs, _ = _witness("eq2", P, Q, base)
    return _outcome("eq2", comps, {"func": f.name, "A": A, "X": X, "branch": branch}, certs)


def _sqrt_ratio(f):
    """g(t) = sqrt(f(t) / t) on t > 0, so that g(S) S g(S) = f(S) on the range of S."""

    def g(t):
        out = np.zeros_like(t)
        pos = t > 0
        out[pos] = np.sqrt(np.maximum(f(t[pos]) / t[pos], 0.0))
        return out

    return g


def _split(f, A, B, S):
    """The decomposition f(S) = M_A + M_B with M_A unitarily comparable to f(A).

    X = A^{1/2} S^{+1/2} + (I - Pi) and Y = B^{1/2} S^{+1/2} satisfy
    X*X + Y*Y = I even when S = A + B is singular (Pi = range projection), and
    M_A = f(S)^{1/2} X*X f(S)^{1/2} = g(S) A g(S) + f(0)(I - Pi),
    M_B = g(S) B g(S) with g(t) = sqrt(f(t)/t).
    """
    n = S.shape[0]
    Sih, Pi, rank = pinv_sqrt_psd(S)
    Ah, Bh = sqrt_psd(A), sqrt_psd(B)
    I = identity(n)
    X = Ah @ Sih + (I - Pi)
    Y = Bh @ Sih
    dev = opnorm(X.conj().T @ X + Y.conj().T @ Y - I)
    w = np.linalg.eigvalsh(S)
    kept = w[w > ROUNDING_FLOOR * n * opnorm(S)]
    cond = (w[-1] / kept[0]) if kept.size else 1.0
    if dev > tau_unit(n) * (1.0 + cond):
        raise NumericError(f"X*X + Y*Y deviates from the identity by {dev:.3e}")
    g = spectral_map(S, _sqrt_ratio(f), f.domain)
    f0 = float(f(0.0)) if rank < n else 0.0
    MA = g @ A @ g + f0 * (I - Pi)
    MB = g @ B @ g
    return (MA + MA.conj().T) / 2, (MB + MB.conj().T) / 2, rank


def _sum_construction(f, A, B, branch, base, prefix=""):
    """Components, certificates and (U, V) for f(A+B) vs U f(A) U* + V f(B) V*."""
    S = A + B
    fA, fB, fS = apply_function(f, A), apply_function(f, B), apply_function(f, S)
    MA, MB, rank = _split(f, A, B, S)
    comps, certs, unitaries = [], [], []
    for label, fM, M in (("A", fA, MA), ("B", fB, MB)):
        if branch == "convex":
            P, Q = fM, M  # W f(M) W* <= M_M, U = W
        else:
            P, Q = M, fM  # W M_M W* <= f(M), U = W*
        c, k, w = _witness(f"{prefix}step_{label}", P, Q, base)
        comps += c
        certs += k
        if isinstance(w, Refusal):
            unitaries.append(None)
        else:
            unitaries.append(w.unitary if branch == "convex" else w.unitary.conj().T)
    U, V = unitaries
    if U is not None and V is not None:
        if branch == "convex":
            cert = Certificate(f"{prefix}sum", ((1.0, U, fA), (1.0, V, fB)), ((1.0, None, fS),))
        else:
            cert = Certificate(f"{prefix}sum", ((1.0, None, fS),), ((1.0, U, fA), (1.0, V, fB)))
        certs.append(cert)
        comps.append(cert.component())
    return comps, certs, (U, V), (fA, fB, fS), rank


def _kyfan_sums(fA, fB, fS, base):
    """min over k of [sum_k f(A) + sum_k f(B) - sum_k f(A+B)] (Ky Fan norms of PSD values)."""
    a = np.cumsum(np.sort(np.abs(eigvals(fA)))[::-1])
    b = np.cumsum(np.sort(np.abs(eigvals(fB)))[::-1])
    s = np.cumsum(np.sort(np.abs(eigvals(fS)))[::-1])
    d = a + b - s
    k = int(np.argmin(d))
    return float(d[k]), k + 1, tau_maj(a, b, s, base=base)


def rotfeld_component(fA, fB, fS, base):
    margin, k, tol = _kyfan_sums(fA, fB, fS, base)
    return Component("rotfeld", "kyfan", margin >= -tol, margin, tol, k)


def trace_component(fA, fB, fS, base, name="trace"):
    lhs = float(np.trace(fA).real + np.trace(fB).real)
    rhs = float(np.trace(fS).real)
    return scalar_component(name, lhs, rhs, tau_maj([lhs, rhs], base=base))


def check_thm2_1(f, A, B, branch=None, base=MAJ_BASE, enforce=True, name=None):
    """Two-witness form of f(A+B) <= U f(A) U* + V f(B) V* (concave branch) and of
    U f(A) U* + V f(B) V* <= f(A+B) (convex branch), built from explicit
    contractions; the single-unitary form is reported as a diagnostic."""
    f = funcat.get(f)
    branch = _branch_of(f, branch)
    if branch == "concave":
        _require(f, enforce, "thm2_1", ("concave", "f0_ge_0"), ("increasing", "decreasing"))
    else:
        _require(f, enforce, "ineq1", ("convex", "f0_le_0"), ("increasing", "decreasing"))
    A, B = _psd_operand(A, "A"), _psd_operand(B, "B")
    comps, certs, _, (fA, fB, fS), rank = _sum_construction(f, A, B, branch, base)
    n = A.shape[0]
    if branch == "concave":
        comps.append(rotfeld_component(fA, fB, fS, base))
        single = relate(eigvals(fS), eigvals(fA + fB), "entrywise_down", base=base)
    else:
        tname = "mccarthy" if (f.exponent or 0) > 1 else "trace"
        comps.append(trace_component(fA, fB, fS, base, tname))
        single = relate(eigvals(fA + fB), eigvals(fS), "entrywise_down", base=base)
    comps.append(from_verdict("single_unitary", single, gate=False))
    if rank < n:
        eps = PSD_BASE * (1.0 + opnorm(A + B))
        shift = identity(n) * (eps / 2)
        c2, k2, *_ = _sum_construction(f, A + shift, B + shift, branch, base, prefix="shifted_")
        comps += c2
        certs += k2
    name = name or ("thm2_1" if branch == "concave" else "ineq1")
    return _outcome(name, comps, {"func": f.name, "A": A, "B": B, "branch": branch}, certs)


def check_ineq1(f, A, B, base=MAJ_BASE, enforce=True):
    return check_thm2_1(f, A, B, branch="convex", base=base, enforce=enforce, name="ineq1")


def check_rotfeld(f, A, B, base=MAJ_BASE, enforce=True):
    """Ky Fan norms: ||f(A+B)||_(k) <= ||f(A)||_(k) + ||f(B)||_(k) for every k."""
    f = funcat.get(f)
    _require(f, enforce, "rotfeld", ("concave", "f0_ge_0", "nonneg"), ("increasing", "decreasing"))
    A, B = _psd_operand(A, "A"), _psd_operand(B, "B")
    fA, fB, fS = apply_function(f, A), apply_function(f, B), apply_function(f, A + B)
    return _outcome("rotfeld", [rotfeld_component(fA, fB, fS, base)], {"func": f.name, "A": A, "B": B})


def check_mccarthy(f, A, B, base=MAJ_BASE, enforce=True):
    """tr A^p + tr B^p <= tr (A+B)^p for p > 1."""
    f = funcat.get(f)
    if enforce and not (f.exponent is not None and f.exponent > 1):
        raise PreconditionError(f"mccarthy needs a power t^p with p > 1, got {f.name}")
    A, B = _psd_operand(A, "A"), _psd_operand(B, "B")
    fA, fB, fS = apply_function(f, A), apply_function(f, B), apply_function(f, A + B)
    comp = trace_component(fA, fB, fS, base, "mccarthy")
    return _outcome("mccarthy", [comp], {"func": f.name, "A": A, "B": B})


def check_cor2_2(f, A, B, base=MAJ_BASE, enforce=True):
    """U f(A) U* - V f(B) V* <= f(|A - B|), through the chain
    f(A) ~< f(|A-B| + B) <= S f(|A-B|) S* + T f(B) T*."""
    f = funcat.get(f)
    _require(f, enforce, "cor2_2", ("nonneg", "increasing", "concave"))
    A, B = _psd_operand(A, "A"), _psd_operand(B, "B")
    C = matrix_abs(A - B)
    fA, fC, fB = apply_function(f, A), apply_function(f, C), apply_function(f, B)
    fCB = apply_function(f, C + B)
    comps, certs, w = _witness("weyl_step", fA, fCB, base)
    c2, k2, (S, T), *_ = _sum_construction(f, C, B, "concave", base, prefix="inner_")
    comps += c2
    certs += k2
    if not isinstance(w, Refusal) and S is not None and T is not None:
        U = S.conj().T @ w.unitary
        V = S.conj().T @ T
        cert = Certificate("difference", ((1.0, U, fA), (-1.0, V, fB)), ((1.0, None, fC),))
        certs.append(cert)
        comps.append(cert.component())
    return _outcome("cor2_2", comps, {"func": f.name, "A": A, "B": B}, certs)


# ---------------------------------------------------------------------------
# positive unital maps and Hadamard products
# ---------------------------------------------------------------------------

def check_thm2_4(f, phi, A, base=MAJ_BASE, enforce=True):
    """lambda(f(Phi(A))) <_w lambda(Phi(f(A))) for convex f (<^w for concave), entrywise
    with a witness when f is also monotone; plus the dilation identity
    Phi(f(A)) = (pi(f(A)))_E on the algebra generated by A."""
    f = funcat.get(f)
    _require(f, enforce, "thm2_4", any_of=("convex", "concave"))
    A = hermitian(A)
    fPhiA = apply_function(f, phi.apply(A))
    PhifA = phi.apply(apply_function(f, A))
    L, R = eigvals(fPhiA), eigvals(PhifA)
    comps, certs = [], []
    # a function with neither flag (only allowed unenforced) is tested as convex
    convex = f.has("convex") or (not enforce and not f.has("concave"))
    concave = f.has("concave")
    monotone = f.monotone
    if convex:
        comps.append(from_verdict("convex_weak", relate(L, R, "prec_w", base=base)))
        if monotone:
            c, k, _ = _witness("convex_monotone", fPhiA, PhifA, base)
            comps += c
            certs += k
    if concave:
        comps.append(from_verdict("concave_weak", relate(L, R, "prec_sup_w", base=base)))
        if monotone:
            c, k, _ = _witness("concave_monotone", PhifA, fPhiA, base)
            comps += c
            certs += k
    dil, rep = dilate_map_on_algebra(phi, A)
    err = opnorm(compress(rep(f), dil.embedding) - PhifA)
    comps.append(scalar_component("dilation", err, 0.0, 10 * tau_eig(apply_function(f, A))))
    return _outcome("thm2_4", comps, {"func": f.name, "map": phi, "A": A}, certs)


def _embed(M):
    n = M.shape[0]
    Z = np.zeros((2 * n, 2 * n), dtype=complex)
    Z[:n, n:] = M.conj().T
    Z[n:, :n] = M
    return Z


def check_prop2_5(A, B, base=MAJ_BASE):
    """lambda(|A o B|) <_w lambda(|A| o |B|) for Hermitian A, B."""
    A, B = hermitian(A), hermitian(B)
    L = eigvals(matrix_abs(hadamard(A, B)))
    R = eigvals(hadamard(matrix_abs(A), matrix_abs(B)))
    comp = from_verdict("weak", relate(L, R, "prec_w", base=base))
    return _outcome("prop2_5", [comp], {"A": A, "B": B}, notes=[CONSEQUENCE_NOTE])


def check_cor2_6(A, B, base=MAJ_BASE):
    """||A o B|| <= || |A| o |B| || in every Ky Fan norm, directly and through the
    2x2 block embedding [[0, M*], [M, 0]]."""
    A, B = hermitian(A), hermitian(B)
    comps = []
    for label, (X, Y) in (("direct", (A, B)), ("embedded", (_embed(A), _embed(B)))):
        s = np.cumsum(np.linalg.svd(hadamard(X, Y), compute_uv=False))
        t = np.cumsum(np.linalg.svd(hadamard(matrix_abs(X), matrix_abs(Y)), compute_uv=False))
        d = t - s
        k = int(np.argmin(d))
        tol = tau_maj(s, t, base=base)
        comps.append(Component(label, "kyfan", bool(d[k] >= -tol), float(d[k]), tol, k + 1))
    return _outcome("cor2_6", comps, {"A": A, "B": B})


def check_prop2_7(f, A, B, base=MAJ_BASE, enforce=True):
    """lambda(f(A o B)) <_w lambda(f(A) o f(B)) for submultiplicative convex f,
    entrywise with a witness when f is monotone."""
    f = funcat.get(f)
    _require(f, enforce, "prop2_7", ("submultiplicative", "convex"))
    A, B = _psd_operand(A, "A"), _psd_operand(B, "B")
    lhs = apply_function(f, hadamard(A, B))
    rhs = hadamard(apply_function(f, A), apply_function(f, B))
    comps = [from_verdict("weak", relate(eigvals(lhs), eigvals(rhs), "prec_w", base=base))]
    certs = []
    if f.monotone:
        c, certs, _ = _witness("monotone", lhs, rhs, base)
        comps += c
    return _outcome("prop2_7", comps, {"func": f.name, "A": A, "B": B}, certs)


def check_hadamard_powers(A, B, r, base=MAJ_BASE):
    """A^r o B^r <= (A o B)^r for r in [0, 1] and >= for r in [1, 2], as PSD certificates."""
    r = float(r)
    if not 0.0 <= r <= 2.0:
        raise PreconditionError(f"hadamard_powers needs r in [0, 2], got {r}")
    A, B = _psd_operand(A, "A"), _psd_operand(B, "B")
    left = hadamard(power_psd(A, r), power_psd(B, r))
    right = power_psd(hadamard(A, B), r)
    certs = []
    if r <= 1.0:
        certs.append(Certificate("concave_power", ((1.0, None, left),), ((1.0, None, right),)))
    if r >= 1.0:
        certs.append(Certificate("convex_power", ((1.0, None, right),), ((1.0, None, left),)))
    return _outcome("hadamard_powers", [c.component() for c in certs], {"A": A, "B": B, "r": r}, certs)


# ---------------------------------------------------------------------------
# log-convexity
# ---------------------------------------------------------------------------

def _gram_spectrum(F, G):
    """Eigenvalues of (F G)* (F G) = G* F* F G, from product singular values."""
    return product_singular_values([F, G]) ** 2


def check_lemma3_1(A, B, base=MAJ_BASE):
    """lambda(log A + log B) < lambda(log(A^{1/2} B A^{1/2})), with the k = n equality."""
    A, B = _psd_operand(A, "A", strict=True), _psd_operand(B, "B", strict=True)
    n = A.shape[0]
    x = eigvals(log_pd(A) + log_pd(B))
    # A^{1/2} B A^{1/2} = (B^{1/2} A^{1/2})* (B^{1/2} A^{1/2})
    y = np.log(_gram_spectrum(sqrt_psd(B), sqrt_psd(A)))
    comps = [from_verdict("majorization", relate(x, y, "prec", base=base))]
    gap = abs(float(np.sum(x) - np.sum(y)))
    comps.append(scalar_component("determinant", gap, 0.0, 1e-8 * n))
    return _outcome("lemma3_1", comps, {"A": A, "B": B})


def _mean(A, B, alpha):
    alpha = float(alpha)
    if not 0.0 <= alpha <= 1.0:
        raise DomainError(f"alpha must lie in [0, 1], got {alpha}")
    return alpha * A + (1 - alpha) * B


def check_thm3_2(f, A, B, alpha, base=MAJ_BASE, enforce=True):
    """lambda(f(aA + (1-a)B)) <_w lambda(a f(A) + (1-a) f(B)) for convex f; entrywise
    with a witness when f is also monotone."""
    f = funcat.get(f)
    _require(f, enforce, "thm3_2", ("convex",))
    A, B = hermitian(A), hermitian(B)
    lhs = apply_function(f, _mean(A, B, alpha))
    rhs = _mean(apply_function(f, A), apply_function(f, B), alpha)
    comps = [from_verdict("weak", relate(eigvals(lhs), eigvals(rhs), "prec_w", base=base))]
    certs = []
    if f.monotone:
        c, certs, _ = _witness("monotone", lhs, rhs, base)
        comps += c
    return _outcome("thm3_2", comps, {"func": f.name, "A": A, "B": B, "alpha": float(alpha)}, certs)


def check_thm3_3(f, A, B, alpha, relation=None, base=MAJ_BASE, enforce=True, name="thm3_3"):
    """lambda(f(aA + (1-a)B)) <_wlog lambda(f(A)^a f(B)^{1-a}) for log-convex f
    (<^wlog for log-concave f); the right spectrum is that of the PSD
    symmetrisation f(A)^{a/2} f(B)^{1-a} f(A)^{a/2}.

    ``relation="entrywise"`` replaces the log-majorization by entrywise
    dominance of the sorted spectra (which does not hold in general).
    """
    f = funcat.get(f)
    _require(f, enforce, name, any_of=("log_convex", "log_concave"))
    if name == "prop3_4_consequence":
        _require(f, enforce, name, any_of=("increasing", "decreasing"))
    A, B = hermitian(A), hermitian(B)
    alpha = float(alpha)
    fM = apply_function(f, _mean(A, B, alpha))
    fA, fB = apply_function(f, A), apply_function(f, B)
    for label, M in (("f(A)", fA), ("f(B)", fB)):
        lam = float(np.linalg.eigvalsh(M)[0])
        if lam <= 0:
            raise DomainError(f"{label} has a non-positive eigenvalue {lam:.3e}; log relations need f > 0")
    L = eigvals(fM)
    # f(A)^{a/2} f(B)^{1-a} f(A)^{a/2} = G* G with G = f(B)^{(1-a)/2} f(A)^{a/2}
    R = _gram_spectrum(power_psd(fB, (1 - alpha) / 2), power_psd(fA, alpha / 2))
    comps = []
    inputs = {"func": f.name, "A": A, "B": B, "alpha": alpha}
    if relation == "entrywise":
        comps.append(from_verdict("entrywise", relate(L, R, "entrywise_down", base=base)))
        inputs["relation"] = "entrywise"
    else:
        if f.has("log_convex") or not enforce:
            comps.append(from_verdict("log_convex", relate(L, R, "prec_wlog", base=base)))
        if f.has("log_concave"):
            comps.append(from_verdict("log_concave", relate(L, R, "prec_sup_wlog", base=base)))
    return _outcome(name, comps, inputs)


def check_prop3_4_consequence(f, A, B, alpha, base=MAJ_BASE, enforce=True):
    """The log-majorization implied by a unitary-orbit bound for log-convex or
    log-concave f; the unitary itself is not constructed, so only the
    <_wlog (resp. <^wlog) consequence is checked."""
    return check_thm3_3(f, A, B, alpha, base=base, enforce=enforce, name="prop3_4_consequence")


# ---------------------------------------------------------------------------
# arithmetic-geometric means
# ---------------------------------------------------------------------------

def _sqrt_abs_spectrum(A, B):
    """lambda(sqrt|AB|) = sqrt of the singular values of AB (high relative accuracy)."""
    return np.sqrt(product_singular_values([A, B]))


def check_thm4_1(A, B, base=MAJ_BASE):
    """prod_{j<=k} lambda_up(sqrt|AB|) <= prod_{j<=k} lambda_up((A+B)/2)."""
    A, B = _psd_operand(A, "A"), _psd_operand(B, "B")
    v = relate(eigvals((A + B) / 2), _sqrt_abs_spectrum(A, B), "prec_sup_wlog", base=base)
    return _outcome("thm4_1", [from_verdict("ascending_products", v)], {"A": A, "B": B})


def check_cor4_2(A, B, base=MAJ_BASE):
    """prod_{j<=k} lambda(sqrt|AB|) >= prod_{j<=k} lambda(2 (A^-1 + B^-1)^-1)."""
    A, B = _psd_operand(A, "A", strict=True), _psd_operand(B, "B", strict=True)
    H = 2 * inv_pd(inv_pd(A) + inv_pd(B))
    v = relate(eigvals(H), _sqrt_abs_spectrum(A, B), "prec_wlog", base=base)
    return _outcome("cor4_2", [from_verdict("descending_products", v)], {"A": A, "B": B})


def check_thm4_3(A, B, base=MAJ_BASE):
    """|AB| <= U (A^2 + B^2)/2 U* with the alignment witness."""
    A, B = _psd_operand(A, "A"), _psd_operand(B, "B")
    P = matrix_abs(A @ B)
    Q = (A @ A + B @ B) / 2
    comps, certs, _ = _witness("amgm", P, Q, base)
    return _outcome("thm4_3", comps, {"A": A, "B": B}, certs)


def check_bk_probe(A, B, base=MAJ_BASE):
    """Conjecture probe lambda(sqrt|AB|) <_w lambda((A+B)/2); never a correctness gate."""
    A, B = _psd_operand(A, "A"), _psd_operand(B, "B")
    v = relate(_sqrt_abs_spectrum(A, B), eigvals((A + B) / 2), "prec_w", base=base)
    return _outcome("bk_conjecture_probe", [from_verdict("conjecture", v, gate=False)], {"A": A, "B": B},
                    notes=["conjecture probe"])


def check_amgm(A, B, base=MAJ_BASE):
    """All four mean comparisons for one pair; returns a dict of outcomes."""
    out = {"thm4_1": check_thm4_1(A, B, base), "thm4_3": check_thm4_3(A, B, base),
           "bk_conjecture_probe": check_bk_probe(A, B, base)}
    try:
        out["cor4_2"] = check_cor4_2(A, B, base)
    except DomainError:
        pass
    return out


def _projection(E):
    E = hermitian(E)
    if opnorm(E @ E - E) > tau_unit(E.shape[0]) * 10:
        raise DomainError("E is not an orthogonal projection")
    return E


def maximize_product_norm(A, B, E, starts=64, iters=200, seed=0):
    """Lower bound for max ||Ah|| ||Bh|| over unit h in range(E).

    Seeded with h = EBg/||EBg|| (g a top right singular vector of AEB), which
    already attains ||AEB|| by the Cauchy-Schwarz argument, then refined by a
    fixed-point ascent from that seed and from ``starts`` random unit vectors.
    """
    w, V = np.linalg.eigh(E)
    W = V[:, w > 0.5]
    if W.shape[1] == 0:
        return 0.0
    Ma = W.conj().T @ A @ A @ W
    Mb = W.conj().T @ B @ B @ W

    _, _, Vh = np.linalg.svd(A @ E @ B)
    h = E @ B @ Vh[0].conj()
    rng = np.random.default_rng(seed)
    r = W.shape[1]
    Z = rng.standard_normal((r, starts)) + 1j * rng.standard_normal((r, starts))
    if np.linalg.norm(h) > 0:
        Z = np.column_stack([W.conj().T @ h, Z])
    Z = Z / np.linalg.norm(Z, axis=0)

    def values(Z):
        a = np.maximum(np.real(np.sum(Z.conj() * (Ma @ Z), axis=0)), 0.0)
        b = np.maximum(np.real(np.sum(Z.conj() * (Mb @ Z), axis=0)), 0.0)
        return np.sqrt(a * b), a, b

    val, a, b = values(Z)
    active = (a > 0) & (b > 0)
    for _ in range(iters):
        if not active.any():
            break
        with np.errstate(divide="ignore", invalid="ignore"):
            step = Ma @ Z / np.where(active, a, 1.0) + Mb @ Z / np.where(active, b, 1.0)
        nrm = np.linalg.norm(step, axis=0)
        ok = active & (nrm > 0)
        cand = np.where(ok, step / np.where(nrm > 0, nrm, 1.0), Z)
        new, a2, b2 = values(cand)
        better = ok & (new > val * (1 + 1e-15))
        Z = np.where(better, cand, Z)
        val = np.where(better, new, val)
        a, b = np.where(better, a2, a), np.where(better, b2, b)
        active = better & (a > 0) & (b > 0)
    return float(val.max())


def check_fact1(A, B, E, base=MAJ_BASE):
    """||AEB|| <= max_{h in range E} ||Ah|| ||Bh||; the maximum is only bounded below,
    so a miss is inconclusive, never a fail."""
    A, B, E = _psd_operand(A, "A"), _psd_operand(B, "B"), _projection(E)
    lhs = opnorm(A @ E @ B)
    rhs = maximize_product_norm(A, B, E)
    comp = scalar_component("norm_bound", lhs, rhs, tau_maj([lhs, rhs], base=base), exact=False)
    return _outcome("fact1", [comp], {"A": A, "B": B, "E": E})


def check_fact2(A, B, E, base=MAJ_BASE):
    """||AEB|| >= lambda_k(|AB|) where corank E = k - 1."""
    A, B, E = _psd_operand(A, "A"), _psd_operand(B, "B"), _projection(E)
    n = A.shape[0]
    rank = int(round(float(np.trace(E).real)))
    k = n - rank + 1
    lhs = opnorm(A @ E @ B)
    if k > n:
        sk = 0.0
    else:
        sk = float(product_singular_values([A, B])[k - 1])
    comp = scalar_component("corank_bound", sk, lhs, tau_maj([lhs, sk], base=base))
    comp = Component(comp.name, comp.relation, comp.holds, comp.margin, comp.tol, k)
    return _outcome("fact2", [comp], {"A": A, "B": B, "E": E})


def check_prop4_4(As, base=MAJ_BASE):
    """tr|A_1...A_m|^{1/m} <= tr mean(A_i), tr|A_1...A_m| <= tr mean(A_i^m), and the
    Horn log-majorization in between."""
    As = [_psd_operand(A, f"A_{i + 1}", strict=True) for i, A in enumerate(As)]
    m = len(As)
    if m < 1:
        raise DomainError("need at least one factor")
    s = product_singular_values(As)
    lam = np.prod([eigvals(A) for A in As], axis=0)
    comps = [from_verdict("horn", relate(s ** (1.0 / m), lam ** (1.0 / m), "prec_wlog", base=base))]
    t1 = float(np.sum(s ** (1.0 / m)))
    r1 = float(sum(np.trace(A).real for A in As) / m)
    comps.append(scalar_component("trace_root", t1, r1, tau_maj([t1, r1], base=base)))
    t2 = float(np.sum(s))
    r2 = float(sum(np.sum(eigvals(A) ** m) for A in As) / m)
    comps.append(scalar_component("trace_power", t2, r2, tau_maj([t2, r2], base=base)))
    return _outcome("prop4_4", comps, {"As": list(As)})


def check_kosem(f, A, B, base=MAJ_BASE, enforce=True):
    """lambda(f(A+B)) <_w lambda(f(A) + f(B)) for nonnegative concave f."""
    f = funcat.get(f)
    _require(f, enforce, "kosem", ("nonneg", "concave"))
    if enforce and not (f.domain.lo == 0 and f.domain.hi == np.inf):
        raise PreconditionError("kosem needs f defined on [0, inf)")
    A, B = _psd_operand(A, "A"), _psd_operand(B, "B")
    L = eigvals(apply_function(f, A + B))
    R = eigvals(apply_function(f, A) + apply_function(f, B))
    return _outcome("kosem", [from_verdict("weak", relate(L, R, "prec_w", base=base))],
                    {"func": f.name, "A": A, "B": B})


# ---------------------------------------------------------------------------
# grouped entry points
# ---------------------------------------------------------------------------

check_eq2_contraction = check_eq2


def check_hadamard_family(A, B, r=None, f=None, base=MAJ_BASE, enforce=True):
    """Hadamard-product checks for one pair: the power comparison when ``r`` is
    given, the submultiplicative comparison when ``f`` is given, otherwise the
    two absolute-value comparisons. Returns a dict of outcomes."""
    out = {}
    if r is not None:
        out["hadamard_powers"] = check_hadamard_powers(A, B, r, base)
    if f is not None:
        out["prop2_7"] = check_prop2_7(f, A, B, base, enforce)
    if not out:
        out["prop2_5"] = check_prop2_5(A, B, base)
        out["cor2_6"] = check_cor2_6(A, B, base)
    return out


def check_facts_4(A, B, E, base=MAJ_BASE):
    """Both operator-norm facts for one (A, B, E); returns a dict of outcomes."""
    return {"fact1": check_fact1(A, B, E, base), "fact2": check_fact2(A, B, E, base)}
