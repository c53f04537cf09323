"""Brute-force cross-checks, kept independent of the closed-form code paths."""

from __future__ import annotations

import numpy as np
from scipy.optimize import lsq_linear


def phase_grid_projectors(e1: np.ndarray, e2: np.ndarray, n: int) -> list[np.ndarray]:
    out = []
    for k in range(n):
        phase = 2 * np.pi * k / n
        v = (e1 + np.exp(1j * phase) * e2) / np.sqrt(2)
        out.append(np.outer(v, v.conj()))
    return out


def _realify(m: np.ndarray) -> np.ndarray:
    return np.concatenate([m.real.ravel(), m.imag.ravel()])


class HullOracle:
    """Nonnegative least-squares fit of ``w`` by a fixed set of unit-trace generators.

    Trace is matched automatically because every generator and ``w`` have unit
    trace; a sum-to-one row is still appended to pin it.
    """

    def __init__(self, generators: list[np.ndarray]):
        a = np.column_stack([_realify(g) for g in generators])
        self.design = np.vstack([a, np.ones((1, a.shape[1]))])
        # The residual splits exactly into the part orthogonal to the
        # generators' span plus an NNLS problem inside that span.
        u, s, _ = np.linalg.svd(self.design, full_matrices=False)
        self.span = u[:, s > 1e-12 * s[0]]
        self.reduced = self.span.T @ self.design

    def residual(self, w) -> float:
        b = np.concatenate([_realify(np.asarray(w, dtype=complex)), [1.0]])
        inside = self.span.T @ b
        outside = float(np.linalg.norm(b - self.span @ inside))
        # bounded least squares; the residual is recomputed from the weights
        # rather than trusted from the solver
        fit = lsq_linear(self.reduced, inside, bounds=(0, np.inf), method="bvls", tol=1e-14)
        return float(np.hypot(outside, np.linalg.norm(self.reduced @ fit.x - inside)))


def nnls_hull_residual(w: np.ndarray, generators: list[np.ndarray]) -> float:
    return HullOracle(generators).residual(w)


def nnls_membership(e1, e2, w, n: int = 720, threshold: float = 1e-8) -> bool:
    return nnls_hull_residual(w, phase_grid_projectors(e1, e2, n)) <= threshold


def product_grid_minimum(w: np.ndarray, n: int = 24) -> float:
    """Smallest ``<a,b|w|a,b>`` over a Bloch-angle grid, by direct loops over A."""
    thetas = np.linspace(0, np.pi, n)
    phis = np.linspace(0, 2 * np.pi, n, endpoint=False)
    kets = [np.array([np.cos(t / 2), np.exp(1j * p) * np.sin(t / 2)]) for t in thetas for p in phis]
    kb = np.array(kets)
    best = np.inf
    for a in kets:
        vs = (a[None, :, None] * kb[:, None, :]).reshape(-1, 4)
        vals = np.einsum("ni,ij,nj->n", vs.conj(), w, vs).real
        best = min(best, float(vals.min()))
    return best


def partial_trace_by_summation(rho: np.ndarray, traced: str) -> np.ndarray:
    """Reduced state by explicit index summation."""
    out = np.zeros((2, 2), dtype=complex)
    for i in range(2):
        for j in range(2):
            for k in range(2):
                if traced == "A":
                    out[i, j] += rho[2 * k + i, 2 * k + j]
                else:
                    out[i, j] += rho[2 * i + k, 2 * j + k]
    return out
