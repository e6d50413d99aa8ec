"""Operator algebra for the three-level transmon and the cavity x transmon space.

Internal basis ordering is (|a>, |b>, |c>) for the qutrit; the 6-dimensional
joint space is cavity{|0>,|1>} (x) transmon. The Gell-Mann layer applies the
permutation (|c>, |b>, |a>) so that the closed-form resonant solution of the
coefficient equations holds literally (ground state a8 = -2/sqrt(3), probe
coupling entering through lambda_1, polarisation through lambda_2).
"""

from __future__ import annotations

import numpy as np

from .params import SystemParams

LEVELS = ("a", "b", "c")
_INDEX = {"a": 0, "b": 1, "c": 2}

# position of each internal level in the Gell-Mann basis ordering (c, b, a)
GM_ORDER = ("c", "b", "a")
_GM_PERM = np.array([_INDEX[l] for l in GM_ORDER])  # gm position -> internal index

HERMITICITY_TOL = 1e-10
TRACE_TOL = 1e-8
EIGENVALUE_TOL = 1e-8


class NumericalConsistencyError(RuntimeError):
    """A quantity violated a numerical invariant it is supposed to satisfy."""


def sigma(i: str, j: str, dim: int = 3) -> np.ndarray:
    """Matrix unit |i><j| on the qutrit, tensored with the cavity identity if dim=6."""
    if i not in _INDEX or j not in _INDEX:
        raise ValueError(f"unknown level label: {i!r}, {j!r} (expected one of {LEVELS})")
    if dim not in (3, 6):
        raise ValueError(f"dim must be 3 or 6, got {dim}")
    op = np.zeros((3, 3), dtype=complex)
    op[_INDEX[i], _INDEX[j]] = 1.0
    if dim == 6:
        op = np.kron(np.eye(2, dtype=complex), op)
    return op


def cavity_lowering() -> np.ndarray:
    """Annihilation operator of the two-level source cavity on the joint space."""
    a = np.array([[0.0, 1.0], [0.0, 0.0]], dtype=complex)
    return np.kron(a, np.eye(3, dtype=complex))


def hamiltonian(p: SystemParams, dim: int = 3) -> np.ndarray:
    """System Hamiltonian Delta_c|c><c| + Delta_b|b><b| + Omega_p(|b><c| + h.c.)."""
    h = (
        p.delta_c * sigma("c", "c")
        + p.delta_b * sigma("b", "b")
        + p.omega_p * (sigma("b", "c") + sigma("c", "b"))
    )
    if dim == 6:
        h = np.kron(np.eye(2, dtype=complex), h)
    return h


def lowering_b(p: SystemParams, dim: int = 3) -> np.ndarray:
    """Decay channel operator L_b = sqrt(gamma_b)|a><b|."""
    return np.sqrt(p.gamma_b) * sigma("a", "b", dim)


def lowering_c(p: SystemParams, dim: int = 3) -> np.ndarray:
    """Decay channel operator L_c = sqrt(gamma_c)|b><c|."""
    return np.sqrt(p.gamma_c) * sigma("b", "c", dim)


def y_operator(p: SystemParams, dim: int = 3) -> np.ndarray:
    """Polarisation observable y = i sqrt(gamma_c) (|b><c| - |c><b|).

    The overall sign (equivalently the complex-conjugate phase convention of
    the measured quadrature) is fixed so that a single control photon induces
    a positive mean displacement of the probe.
    """
    return 1j * np.sqrt(p.gamma_c) * (sigma("b", "c", dim) - sigma("c", "b", dim))


def dissipator(r: np.ndarray, rho: np.ndarray) -> np.ndarray:
    """Lindblad increment D[r]rho = (2 r rho r+ - rho r+r - r+r rho)/2."""
    if r.shape != rho.shape:
        raise ValueError(f"dimension mismatch: {r.shape} vs {rho.shape}")
    rdr = r.conj().T @ r
    return r @ rho @ r.conj().T - 0.5 * (rho @ rdr + rdr @ rho)


def meas_superop(r: np.ndarray, rho: np.ndarray) -> np.ndarray:
    """Measurement (innovation) increment H[r]rho = r rho + rho r+ - Tr[.] rho."""
    if r.shape != rho.shape:
        raise ValueError(f"dimension mismatch: {r.shape} vs {rho.shape}")
    s = r @ rho + rho @ r.conj().T
    return s - np.trace(s) * rho


def polarisation(rho: np.ndarray, p: SystemParams) -> float:
    """Expectation <y> = Tr[y rho], asserted real to 1e-10."""
    dim = rho.shape[0]
    val = np.trace(y_operator(p, dim) @ rho)
    if abs(val.imag) > HERMITICITY_TOL:
        raise NumericalConsistencyError(
            f"<y> has imaginary part {val.imag:.3e} beyond tolerance"
        )
    return float(val.real)


def validate_density_matrix(rho: np.ndarray, trace_one: bool = True) -> None:
    """Raise if rho is not Hermitian, unit trace (optionally) and positive."""
    if np.max(np.abs(rho - rho.conj().T)) > HERMITICITY_TOL:
        raise NumericalConsistencyError("density matrix is not Hermitian to 1e-10")
    if trace_one and abs(np.trace(rho).real - 1.0) > TRACE_TOL:
        raise NumericalConsistencyError(
            f"trace deviates from 1 by {abs(np.trace(rho).real - 1.0):.3e}"
        )
    evals = np.linalg.eigvalsh(0.5 * (rho + rho.conj().T))
    if evals.min() < -EIGENVALUE_TOL:
        raise NumericalConsistencyError(
            f"negative eigenvalue {evals.min():.3e} below tolerance"
        )


# --- Gell-Mann parameterization -------------------------------------------

def _gm_matrices() -> np.ndarray:
    lam = np.zeros((8, 3, 3), dtype=complex)
    lam[0] = [[0, 1, 0], [1, 0, 0], [0, 0, 0]]
    lam[1] = [[0, -1j, 0], [1j, 0, 0], [0, 0, 0]]
    lam[2] = [[1, 0, 0], [0, -1, 0], [0, 0, 0]]
    lam[3] = [[0, 0, 1], [0, 0, 0], [1, 0, 0]]
    lam[4] = [[0, 0, -1j], [0, 0, 0], [1j, 0, 0]]
    lam[5] = [[0, 0, 0], [0, 0, 1], [0, 1, 0]]
    lam[6] = [[0, 0, 0], [0, 0, -1j], [0, 1j, 0]]
    lam[7] = np.diag([1, 1, -2]) / np.sqrt(3)
    return lam


GELL_MANN = _gm_matrices()


def _permute_to_gm(rho: np.ndarray) -> np.ndarray:
    return rho[np.ix_(_GM_PERM, _GM_PERM)]


def _permute_from_gm(rho: np.ndarray) -> np.ndarray:
    inv = np.argsort(_GM_PERM)
    return rho[np.ix_(inv, inv)]


def gm_decompose(rho: np.ndarray) -> np.ndarray:
    """Coefficients a_i = Tr[lambda_i rho] in the (c, b, a) ordering.

    The input is given in the internal (a, b, c) ordering. Coefficients are
    complex in general; they are real for Hermitian input.
    """
    if rho.shape != (3, 3):
        raise ValueError("gm_decompose expects a 3x3 matrix")
    rp = _permute_to_gm(np.asarray(rho, dtype=complex))
    return np.array([np.trace(l @ rp) for l in GELL_MANN])


def gm_compose(a: np.ndarray, traceful: bool = True) -> np.ndarray:
    """Rebuild a matrix from Gell-Mann coefficients, in internal ordering.

    traceful=True adds the I/3 term (physical rho_11-type blocks);
    traceful=False omits it (traceless rho_01-type coherence blocks).
    """
    a = np.asarray(a, dtype=complex)
    if a.shape != (8,):
        raise ValueError("expected 8 Gell-Mann coefficients")
    rp = 0.5 * np.tensordot(a, GELL_MANN, axes=(0, 0))
    if traceful:
        rp = rp + np.eye(3, dtype=complex) / 3.0
    return _permute_from_gm(rp)


# --- superoperator (vectorized) helpers -----------------------------------

def spre(op: np.ndarray) -> np.ndarray:
    """Matrix acting on vec(rho) (row-major) implementing op @ rho."""
    d = op.shape[0]
    return np.kron(op, np.eye(d, dtype=complex))


def spost(op: np.ndarray) -> np.ndarray:
    """Matrix acting on vec(rho) (row-major) implementing rho @ op."""
    d = op.shape[0]
    return np.kron(np.eye(d, dtype=complex), op.T)


def dissipator_superop(r: np.ndarray) -> np.ndarray:
    rdr = r.conj().T @ r
    return spre(r) @ spost(r.conj().T) - 0.5 * (spre(rdr) + spost(rdr))


def commutator_superop(op: np.ndarray) -> np.ndarray:
    """vec form of rho -> [op, rho]."""
    return spre(op) - spost(op)


def liouvillian(h: np.ndarray, collapse_ops: list[np.ndarray]) -> np.ndarray:
    """vec form of the deterministic Lindblad generator."""
    lv = -1j * commutator_superop(h)
    for c in collapse_ops:
        lv = lv + dissipator_superop(c)
    return lv
