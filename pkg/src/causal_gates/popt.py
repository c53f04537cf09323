"""Operators that are positive on pure product states (POPT).

``S``, the partial transpose of the singlet projector, is such an operator
but has a negative eigenvalue.  It satisfies all three singlet scenario
constraints at once, so admitting it as a joint state restores a common
solution.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize

from . import families, gates, qlin, timeorder
from .families import PhaseFamily

POPT_FLOOR = -1e-9


def build_S() -> np.ndarray:
    return qlin.partial_transpose(qlin.SINGLET, "B")


def bloch_ket(theta, phi) -> np.ndarray:
    """``cos(theta/2)|0> + e^{i phi} sin(theta/2)|1>``; broadcasts over arrays."""
    theta = np.asarray(theta, dtype=float)
    phi = np.asarray(phi, dtype=float)
    return np.stack([np.cos(theta / 2) + 0j, np.exp(1j * phi) * np.sin(theta / 2)], axis=-1)


def _bloch_ket_grad(theta: float, phi: float) -> tuple[np.ndarray, np.ndarray]:
    d_theta = np.array([-0.5 * np.sin(theta / 2), 0.5 * np.exp(1j * phi) * np.cos(theta / 2)])
    d_phi = np.array([0.0, 1j * np.exp(1j * phi) * np.sin(theta / 2)])
    return d_theta, d_phi


def product_value(w: np.ndarray, angles) -> float:
    ta, pa, tb, pb = angles
    v = np.kron(bloch_ket(ta, pa), bloch_ket(tb, pb))
    return float(np.vdot(v, w @ v).real)


def product_gradient(w: np.ndarray, angles) -> np.ndarray:
    ta, pa, tb, pb = angles
    a, b = bloch_ket(ta, pa), bloch_ket(tb, pb)
    da_t, da_p = _bloch_ket_grad(ta, pa)
    db_t, db_p = _bloch_ket_grad(tb, pb)
    wv = w @ np.kron(a, b)
    derivs = (np.kron(da_t, b), np.kron(da_p, b), np.kron(a, db_t), np.kron(a, db_p))
    # d<v|W|v> = 2 Re <dv|W v> for Hermitian W
    return np.array([2 * np.vdot(dv, wv).real for dv in derivs])


@dataclass
class PoptResult:
    popt: bool
    min_product_value: float
    argmin: np.ndarray  # product ket, 4 amplitudes
    angles: tuple[float, float, float, float]
    gradient_norm: float


def _grid_values(w: np.ndarray, n: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    theta = np.linspace(0, np.pi, n)
    phi = np.linspace(0, 2 * np.pi, n, endpoint=False)
    tt, pp = np.meshgrid(theta, phi, indexing="ij")
    kets = bloch_ket(tt, pp).reshape(-1, 2)  # (n*n, 2)
    t = w.reshape(2, 2, 2, 2)
    # B-side operator for each A ket, then its expectation for each B ket
    ops_b = np.einsum("ni,ijkl,nk->njl", kets.conj(), t, kets)
    outer_b = np.einsum("mj,ml->mjl", kets.conj(), kets)
    ops_b, outer_b = ops_b.reshape(len(kets), 4), outer_b.reshape(len(kets), 4)
    # real part of ops_b @ outer_b.T as a single real product
    left = np.hstack([ops_b.real, -ops_b.imag])
    right = np.hstack([outer_b.real, outer_b.imag])
    values = left @ right.T
    return values, tt.reshape(-1), pp.reshape(-1)


def _smallest_entries(values: np.ndarray, k: int) -> np.ndarray:
    """Flat indices of the ``k`` smallest entries, ties broken by index.

    Every one of them sits in a row whose minimum is at most the ``k``-th
    smallest row minimum, so only those rows are searched.
    """
    row_min = values.min(axis=1)
    cutoff = np.partition(row_min, k - 1)[k - 1]
    rows = np.flatnonzero(row_min <= cutoff)
    sub = values[rows]
    flat = (rows[:, None] * values.shape[1] + np.arange(values.shape[1])).ravel()
    order = np.lexsort((flat, sub.ravel()))
    return flat[order[:k]]


def is_popt(
    w,
    floor: float = POPT_FLOOR,
    grid: int = 32,
    restarts: int = 20,
    seeds_from_grid: int = 4,
    seed: int = 0,
) -> PoptResult:
    """Minimize ``<a,b|w|a,b>`` over product kets.

    A ``grid**4`` sweep over Bloch angles seeds the refinement from its best
    points, alongside ``restarts`` random starts.  All starts are refined
    together by alternating exact minimization (with one side fixed the other
    side's optimum is the lowest eigenvector of a 2x2 operator), and the best
    one is polished by Newton steps in angle coordinates.
    """
    w = qlin.check_hermitian(w, 1e-10)
    if w.shape != (4, 4):
        raise qlin.DimensionError("is_popt expects a 4x4 operator")
    values, tt, pp = _grid_values(w, grid)
    flat = _smallest_entries(values, seeds_from_grid)
    ia, ib = np.unravel_index(flat, values.shape)
    starts = [np.column_stack([tt[ia], pp[ia], tt[ib], pp[ib]])]
    rng = np.random.default_rng(seed)
    starts.append(rng.uniform([0, 0, 0, 0], [np.pi, 2 * np.pi, np.pi, 2 * np.pi], size=(restarts, 4)))
    x0 = np.vstack(starts)

    a, b = _alternate(w, bloch_ket(x0[:, 0], x0[:, 1]), bloch_ket(x0[:, 2], x0[:, 3]))
    vals = np.einsum("ni,ij,nj->n", (a[:, :, None] * b[:, None, :]).reshape(-1, 4).conj(), w,
                     (a[:, :, None] * b[:, None, :]).reshape(-1, 4)).real
    best = int(np.argmin(vals))
    x = _polish(w, np.concatenate([_angles(a[best]), _angles(b[best])]))
    val = product_value(w, x)
    grad = float(np.linalg.norm(product_gradient(w, x)))
    ta, pa, tb, pb = (float(c) for c in x)
    argmin = np.kron(bloch_ket(ta, pa), bloch_ket(tb, pb))
    return PoptResult(val >= floor, val, argmin, (ta, pa, tb, pb), grad)


def _angles(v: np.ndarray) -> np.ndarray:
    v = qlin.canonical_phase(v)
    theta = 2 * np.arccos(np.clip(abs(v[0]), 0.0, 1.0))
    phi = float(np.angle(v[1])) % (2 * np.pi) if abs(v[1]) > 1e-15 else 0.0
    return np.array([theta, phi])


def _alternate(w: np.ndarray, a: np.ndarray, b: np.ndarray, iters: int = 500, tol: float = 1e-15):
    """Batched block-coordinate descent over starts ``a, b`` of shape (n, 2)."""
    t = w.reshape(2, 2, 2, 2)
    prev = None
    for _ in range(iters):
        m_b = np.einsum("nj,ijkl,nl->nik", b.conj(), t, b)
        a = np.linalg.eigh(m_b)[1][:, :, 0]
        m_a = np.einsum("ni,ijkl,nk->njl", a.conj(), t, a)
        lam, vecs = np.linalg.eigh(m_a)
        b = vecs[:, :, 0]
        if prev is not None and np.max(np.abs(prev - lam[:, 0])) <= tol:
            break
        prev = lam[:, 0]
    return a, b


def _polish(w: np.ndarray, x: np.ndarray, target: float = 1e-12) -> np.ndarray:
    """Newton steps with a finite-difference Hessian of the analytic gradient."""
    for _ in range(20):
        g = product_gradient(w, x)
        if np.linalg.norm(g) <= target:
            break
        h = np.empty((4, 4))
        eps = 1e-6
        for k in range(4):
            dx = np.zeros(4)
            dx[k] = eps
            h[:, k] = (product_gradient(w, x + dx) - product_gradient(w, x - dx)) / (2 * eps)
        h = (h + h.T) / 2
        step = np.linalg.lstsq(h, g, rcond=1e-10)[0]
        trial = x - step
        if np.linalg.norm(product_gradient(w, trial)) < np.linalg.norm(g) and product_value(
            w, trial
        ) <= product_value(w, x) + 1e-14:
            x = trial
        else:
            res = minimize(
                lambda y: product_value(w, y),
                x,
                jac=lambda y: product_gradient(w, y),
                method="BFGS",
                options={"gtol": target, "maxiter": 200},
            )
            if product_value(w, res.x) <= product_value(w, x) + 1e-14:
                x = res.x
            break
    return x


def certify_popt(w, floor: float = POPT_FLOOR) -> bool:
    """Positive semidefinite operators are POPT outright; otherwise search."""
    w = qlin.check_hermitian(w, 1e-10)
    if np.linalg.eigvalsh(w)[0] >= floor:
        return True
    return is_popt(w, floor).popt


def generalized_membership(f: PhaseFamily, w, tol: float = families.MEMBERSHIP_TOL, floor: float = POPT_FLOOR) -> bool:
    """Family membership with positivity relaxed to POPT.

    The plane and diagonal conditions are read through Alice's measurement in
    the family's local basis: the nonselective post-measurement operator must
    be the family centre.  For positive ``w`` this is the same as support in
    the plane with diagonal ``(1/2, 1/2)``.
    """
    w = np.asarray(w, dtype=complex)
    if not qlin.is_hermitian(w, tol) or abs(np.trace(w) - 1) > tol:
        return False
    basis = gates.ProjectiveMeasurement(f.alice_basis)
    measured = gates.nonselective(basis, w, "A")
    if np.abs(measured - f.target()).max() > tol:
        return False
    if abs(families.coherence(f, w)) > 0.5 + tol:
        return False
    return certify_popt(w, floor)


@dataclass
class ScenarioConsistency:
    scenario: str
    family: str
    passed: bool
    correlation: float
    local_A: float
    local_B: float


def scenario_consistency_report(w) -> list[ScenarioConsistency]:
    """Evaluate ``w`` against the three singlet scenario constraints."""
    w = np.asarray(w, dtype=complex)
    out = []
    for scen, fam in zip(timeorder.theorem1_scenarios(), (families.A1, families.A2, families.A3)):
        sig = families.correlation_signature(fam, w)
        out.append(
            ScenarioConsistency(
                scenario=scen.name,
                family=fam.label,
                passed=timeorder.omega_constraint(scen)(w),
                correlation=sig.correlation,
                local_A=sig.local_A,
                local_B=sig.local_B,
            )
        )
    return out
