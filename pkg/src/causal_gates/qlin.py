"""Dense linear algebra for one and two qubits.

States and operators are plain ``numpy`` arrays.  Two-qubit objects use the
A-major basis order ``|ij> = |i>_A (x) |j>_B``.
"""

from __future__ import annotations

from typing import Literal

import numpy as np

Axis = Literal["x", "y", "z"]
Side = Literal["A", "B"]

NORM_TOL = 1e-12
HERMITIAN_TOL = 1e-12
PSD_FLOOR = -1e-10

SQRT2 = np.sqrt(2.0)

I2 = np.eye(2, dtype=complex)
SIGMA_X = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=complex)
PAULI = {"x": SIGMA_X, "y": SIGMA_Y, "z": SIGMA_Z}

KET_0 = np.array([1, 0], dtype=complex)
KET_1 = np.array([0, 1], dtype=complex)
KET_X = np.array([1, 1], dtype=complex) / SQRT2
KET_XBAR = np.array([1, -1], dtype=complex) / SQRT2
KET_Y = np.array([1, 1j], dtype=complex) / SQRT2
KET_YBAR = np.array([1, -1j], dtype=complex) / SQRT2

# eigenbases ordered (+1, -1)
AXIS_BASIS = {
    "z": (KET_0, KET_1),
    "x": (KET_X, KET_XBAR),
    "y": (KET_Y, KET_YBAR),
}


class DimensionError(ValueError):
    pass


class NotHermitianError(ValueError):
    pass


def ket(amplitudes, tol: float = NORM_TOL) -> np.ndarray:
    """Validate and return a normalized ket of dimension 2 or 4."""
    v = np.asarray(amplitudes, dtype=complex).reshape(-1)
    if v.size not in (2, 4):
        raise DimensionError(f"ket dimension must be 2 or 4, got {v.size}")
    norm2 = float(np.vdot(v, v).real)
    if abs(norm2 - 1.0) > tol:
        raise ValueError(f"ket is not normalized (|v|^2 = {norm2!r})")
    return v


def projector(psi: np.ndarray) -> np.ndarray:
    psi = np.asarray(psi, dtype=complex)
    return np.outer(psi, psi.conj())


def is_hermitian(h: np.ndarray, tol: float = HERMITIAN_TOL) -> bool:
    h = np.asarray(h)
    return h.ndim == 2 and h.shape[0] == h.shape[1] and bool(np.allclose(h, h.conj().T, rtol=0, atol=tol))


def check_hermitian(h, tol: float = HERMITIAN_TOL) -> np.ndarray:
    h = np.asarray(h, dtype=complex)
    if h.ndim != 2 or h.shape[0] != h.shape[1] or h.shape[0] not in (2, 4):
        raise DimensionError(f"expected a 2x2 or 4x4 matrix, got shape {h.shape}")
    if not is_hermitian(h, tol):
        raise NotHermitianError("matrix is not Hermitian")
    return h


def density(matrix, tol: float = HERMITIAN_TOL, psd_floor: float = PSD_FLOOR) -> np.ndarray:
    """Validate a density operator: Hermitian, unit trace, PSD."""
    rho = check_hermitian(matrix, tol)
    tr = np.trace(rho)
    if abs(tr - 1.0) > tol:
        raise ValueError(f"trace is {tr.real!r}, expected 1")
    lo = np.linalg.eigvalsh(rho)[0]
    if lo < psd_floor:
        raise ValueError(f"matrix has negative eigenvalue {lo!r}")
    return rho


def is_density(matrix, tol: float = 1e-10) -> bool:
    try:
        density(matrix, tol=tol, psd_floor=-tol)
    except ValueError:
        return False
    return True


def tensor(a, b) -> np.ndarray:
    """Kronecker product of two single-qubit kets or operators, A-major."""
    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)
    if a.ndim != b.ndim or a.ndim not in (1, 2):
        raise DimensionError("operands must both be kets or both be operators")
    if a.shape[0] != 2 or b.shape[0] != 2 or (a.ndim == 2 and (a.shape[1] != 2 or b.shape[1] != 2)):
        raise DimensionError(f"tensor expects single-qubit operands, got {a.shape} and {b.shape}")
    return np.kron(a, b)


def _blocks(w: np.ndarray) -> np.ndarray:
    w = np.asarray(w, dtype=complex)
    if w.shape != (4, 4):
        raise DimensionError(f"expected a 4x4 operator, got shape {w.shape}")
    # indices (a, b, a', b')
    return w.reshape(2, 2, 2, 2)


def partial_trace(rho, subsystem: Side) -> np.ndarray:
    """Trace out ``subsystem`` and return the 2x2 operator on the other side."""
    t = _blocks(rho)
    if subsystem == "A":
        return np.einsum("ijik->jk", t)
    if subsystem == "B":
        return np.einsum("ijkj->ik", t)
    raise ValueError(f"unknown subsystem {subsystem!r}")


def partial_transpose(w, subsystem: Side = "B", tol: float = HERMITIAN_TOL) -> np.ndarray:
    check_hermitian(w, tol)
    t = _blocks(w)
    if subsystem == "B":
        out = t.transpose(0, 3, 2, 1)
    elif subsystem == "A":
        out = t.transpose(2, 1, 0, 3)
    else:
        raise ValueError(f"unknown subsystem {subsystem!r}")
    return out.reshape(4, 4).copy()


def eig_hermitian(h, tol: float = HERMITIAN_TOL) -> list[tuple[float, np.ndarray]]:
    """Eigenpairs sorted by ascending eigenvalue."""
    h = check_hermitian(h, tol)
    vals, vecs = np.linalg.eigh(h)
    return [(float(vals[k]), vecs[:, k].copy()) for k in range(len(vals))]


def eigenvalues(h, tol: float = HERMITIAN_TOL) -> np.ndarray:
    return np.linalg.eigvalsh(check_hermitian(h, tol))


def trace_norm(h) -> float:
    h = np.asarray(h, dtype=complex)
    return float(np.sum(np.abs(np.linalg.eigvalsh((h + h.conj().T) / 2))))


def trace_distance(p, q) -> float:
    """Half the trace norm of ``p - q``.

    Also accepted for Hermitian inputs that are not positive, where the value
    is no longer bounded by one.
    """
    p = np.asarray(p, dtype=complex)
    q = np.asarray(q, dtype=complex)
    if p.shape != q.shape:
        raise DimensionError(f"shape mismatch {p.shape} vs {q.shape}")
    return 0.5 * trace_norm(p - q)


def states_equal(p, q, tol: float = 1e-9) -> bool:
    return trace_distance(p, q) <= tol


def kets_equal(phi, psi, tol: float = 1e-9) -> bool:
    """Equality of pure states up to global phase."""
    return states_equal(projector(phi), projector(psi), tol)


def pauli_correlation(w, i: Axis, j: Axis) -> float:
    if i not in PAULI or j not in PAULI:
        raise ValueError(f"invalid axis pair ({i!r}, {j!r})")
    w = np.asarray(w, dtype=complex)
    return float(np.trace(w @ np.kron(PAULI[i], PAULI[j])).real)


def bloch_component(w, side: Side, axis: Axis) -> float:
    """Local expectation of the Pauli ``axis`` on one side of a 4x4 operator."""
    other = "B" if side == "A" else "A"
    return float(np.trace(partial_trace(w, other) @ PAULI[axis]).real)


def embed(op, side: Side) -> np.ndarray:
    """Dress a single-qubit operator with the identity on the other side."""
    op = np.asarray(op, dtype=complex)
    if side == "A":
        return np.kron(op, I2)
    if side == "B":
        return np.kron(I2, op)
    raise ValueError(f"unknown side {side!r}")


def canonical_phase(psi: np.ndarray, tol: float = 1e-12) -> np.ndarray:
    """Fix the global phase so the first nonzero amplitude is real positive."""
    psi = np.asarray(psi, dtype=complex)
    for amp in psi:
        if abs(amp) > tol:
            return psi * (abs(amp) / amp)
    return psi


# Basis states and fixtures used throughout.

PSI_MINUS = (np.kron(KET_0, KET_1) - np.kron(KET_1, KET_0)) / SQRT2
PSI_PLUS = (np.kron(KET_0, KET_1) + np.kron(KET_1, KET_0)) / SQRT2
PHI_MINUS = (np.kron(KET_0, KET_0) - np.kron(KET_1, KET_1)) / SQRT2
PHI_PLUS = (np.kron(KET_0, KET_0) + np.kron(KET_1, KET_1)) / SQRT2
SINGLET = projector(PSI_MINUS)
MAXIMALLY_MIXED_2 = I2 / 2
MAXIMALLY_MIXED_4 = np.eye(4, dtype=complex) / 4


# Seeded random objects.

def random_unitary(dim: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-random unitary via QR of a Ginibre matrix."""
    z = (rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))) / SQRT2
    q, r = np.linalg.qr(z)
    d = np.diag(r)
    return q * (d / np.abs(d))


def random_ket(dim: int, rng: np.random.Generator) -> np.ndarray:
    v = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
    return v / np.linalg.norm(v)


def random_density(dim: int, rng: np.random.Generator, rank: int | None = None) -> np.ndarray:
    rank = dim if rank is None else rank
    g = rng.standard_normal((dim, rank)) + 1j * rng.standard_normal((dim, rank))
    rho = g @ g.conj().T
    rho = (rho + rho.conj().T) / 2
    return rho / np.trace(rho).real


def random_isometry(rows: int, cols: int, rng: np.random.Generator) -> np.ndarray:
    """``rows x cols`` matrix with orthonormal columns."""
    g = rng.standard_normal((rows, cols)) + 1j * rng.standard_normal((rows, cols))
    q, r = np.linalg.qr(g)
    d = np.diag(r)
    return q * (d / np.abs(d))


def random_kraus(n_ops: int, rng: np.random.Generator, dim: int = 2) -> list[np.ndarray]:
    """Random trace-preserving Kraus set from a Stinespring isometry."""
    v = random_isometry(n_ops * dim, dim, rng)
    return [v[k * dim:(k + 1) * dim, :] for k in range(n_ops)]


def random_hermitian_unit_trace(dim: int, rng: np.random.Generator) -> np.ndarray:
    g = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    h = (g + g.conj().T) / 2
    tr = np.trace(h).real
    return h + (1 - tr) / dim * np.eye(dim)
