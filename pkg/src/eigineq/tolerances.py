"""The single tolerance policy used by every comparison in the package.

All thresholds are relative to the size of the operands involved; absolute-zero
tests are never used.
"""
import numpy as np

SYM_BASE = 1e-12
UNIT_BASE = 1e-10
EIG_BASE = 1e-11
PSD_BASE = 1e-10
MAJ_BASE = 1e-8
FUN_BASE = 1e-9
DOMAIN_SLACK = 1e-10
CLUSTER_GAP = 1e-8


def opnorm(M):
    M = np.asarray(M)
    if M.size == 0:
        return 0.0
    return float(np.linalg.norm(M, 2))


def tau_sym(A):
    return SYM_BASE * (1.0 + float(np.max(np.abs(A), initial=0.0)))


def tau_unit(n):
    return UNIT_BASE * n


def tau_eig(A):
    A = np.asarray(A)
    return EIG_BASE * A.shape[0] * (1.0 + opnorm(A))


def tau_psd(P):
    return PSD_BASE * (1.0 + opnorm(P))


def tau_maj(*vectors, base=MAJ_BASE):
    scale = 0.0
    for v in vectors:
        v = np.asarray(v, dtype=float)
        if v.size:
            scale = max(scale, float(np.max(np.abs(v))))
    return base * (1.0 + scale)


def as_dict(base=MAJ_BASE):
    """Tolerance bases, for run reports."""
    return {
        "tau_sym": SYM_BASE,
        "tau_unit": UNIT_BASE,
        "tau_eig": EIG_BASE,
        "tau_psd": PSD_BASE,
        "tau_maj": base,
        "tau_fun": FUN_BASE,
        "tau_dom": DOMAIN_SLACK,
        "cluster_gap": CLUSTER_GAP,
    }
