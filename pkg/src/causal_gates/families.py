"""Phase families of joint states allowed by each singlet scenario, and their
intersections.

Each family is the convex hull of ``(|e1> + e^{i phase}|e2>)/sqrt(2)`` over a
full phase circle, where ``e1 = a (x) b`` and ``e2 = a' (x) b'`` come from
Alice's measurement basis ``{a, a'}`` and Bob's post-gate conditional states.
In the orthonormal basis ``{e1, e2}`` the hull is exactly the set of unit-trace
operators supported on the plane with diagonal ``(1/2, 1/2)`` and coherence of
modulus at most ``1/2``.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import qlin
from .qlin import KET_0, KET_1, KET_X, KET_XBAR, KET_Y, KET_YBAR

MEMBERSHIP_TOL = 1e-9
TWO_PI = 2 * np.pi


@dataclass(frozen=True, eq=False)
class PhaseFamily:
    label: str
    local_pairs: tuple  # ((a, b), (a_perp, b_perp))
    phase_symbol: str
    axis: qlin.Axis
    correlation: float  # required value of <sigma_axis (x) sigma_axis>

    @property
    def basis_pair(self) -> tuple[np.ndarray, np.ndarray]:
        (a, b), (a2, b2) = self.local_pairs
        return np.kron(a, b), np.kron(a2, b2)

    @property
    def alice_basis(self) -> tuple[np.ndarray, np.ndarray]:
        return self.local_pairs[0][0], self.local_pairs[1][0]

    def plane_projector(self) -> np.ndarray:
        e1, e2 = self.basis_pair
        return qlin.projector(e1) + qlin.projector(e2)

    def target(self) -> np.ndarray:
        """The uniform phase mixture: centre of the family."""
        e1, e2 = self.basis_pair
        return 0.5 * (qlin.projector(e1) + qlin.projector(e2))


A1 = PhaseFamily("A1", ((KET_0, KET_1), (KET_1, KET_0)), "alpha", "z", -1.0)
A2 = PhaseFamily("A2", ((KET_X, KET_XBAR), (KET_XBAR, KET_X)), "beta", "x", -1.0)
A3 = PhaseFamily("A3", ((KET_Y, KET_Y), (KET_YBAR, KET_YBAR)), "delta", "y", +1.0)
FAMILIES = {f.label: f for f in (A1, A2, A3)}

# A3 with the y-correlation sign flipped; used only as a control.
A3_ANTI = PhaseFamily("A3-anti", ((KET_Y, KET_YBAR), (KET_YBAR, KET_Y)), "delta", "y", -1.0)


def family_state(f: PhaseFamily, phase: float) -> np.ndarray:
    e1, e2 = f.basis_pair
    phase = float(phase) % TWO_PI
    return (e1 + np.exp(1j * phase) * e2) / qlin.SQRT2


def family_projectors(f: PhaseFamily, n: int) -> np.ndarray:
    """Projectors of ``n`` equally spaced phases, shape ``(n, 4, 4)``."""
    e1, e2 = f.basis_pair
    phases = TWO_PI * np.arange(n) / n
    kets = (e1[None, :] + np.exp(1j * phases)[:, None] * e2[None, :]) / qlin.SQRT2
    return np.einsum("ni,nj->nij", kets, kets.conj())


def coherence(f: PhaseFamily, w) -> np.ndarray:
    e1, e2 = f.basis_pair
    return np.einsum("i,...ij,j->...", e1.conj(), np.asarray(w, dtype=complex), e2)


def _plane_constraints(f: PhaseFamily, w: np.ndarray, tol: float) -> np.ndarray:
    p = f.plane_projector()
    e1, e2 = f.basis_pair
    off_plane = np.abs(w - p @ w @ p).max(axis=(-2, -1))
    d1 = np.einsum("i,...ij,j->...", e1.conj(), w, e1)
    d2 = np.einsum("i,...ij,j->...", e2.conj(), w, e2)
    return (off_plane <= tol) & (np.abs(d1 - 0.5) <= tol) & (np.abs(d2 - 0.5) <= tol)


def membership(f: PhaseFamily, w, tol: float = MEMBERSHIP_TOL):
    """Exact convex-hull membership.

    ``w`` may be a single 4x4 operator or a stack ``(..., 4, 4)``; the result
    is a bool or a bool array accordingly.
    """
    w = np.asarray(w, dtype=complex)
    herm = (w + np.swapaxes(w, -1, -2).conj()) / 2
    ok = np.abs(w - herm).max(axis=(-2, -1)) <= tol
    ok &= np.abs(np.trace(w, axis1=-2, axis2=-1) - 1) <= tol
    ok &= _plane_constraints(f, w, tol)
    ok &= np.abs(coherence(f, w)) <= 0.5 + tol
    ok &= np.linalg.eigvalsh(herm)[..., 0] >= -tol
    return bool(ok) if np.ndim(ok) == 0 else ok


@dataclass(frozen=True)
class CorrelationSignature:
    axis: str
    correlation: float
    local_A: float
    local_B: float


def correlation_signature(f: PhaseFamily, w) -> CorrelationSignature:
    return CorrelationSignature(
        axis=f.axis,
        correlation=qlin.pauli_correlation(w, f.axis, f.axis),
        local_A=qlin.bloch_component(w, "A", f.axis),
        local_B=qlin.bloch_component(w, "B", f.axis),
    )


# Linear-constraint view of the families over real 16-dim Hermitian space.

def _hermitian_basis() -> np.ndarray:
    mats = []
    for j in range(4):
        m = np.zeros((4, 4), dtype=complex)
        m[j, j] = 1
        mats.append(m)
    for j in range(4):
        for k in range(j + 1, 4):
            m = np.zeros((4, 4), dtype=complex)
            m[j, k] = m[k, j] = 1
            mats.append(m)
            m = np.zeros((4, 4), dtype=complex)
            m[j, k], m[k, j] = -1j, 1j
            mats.append(m)
    return np.array(mats)


HERM_BASIS = _hermitian_basis()


def to_matrix(v: np.ndarray) -> np.ndarray:
    return np.einsum("k,kij->ij", v, HERM_BASIS)


def _linear_constraints(f: PhaseFamily) -> tuple[np.ndarray, np.ndarray]:
    """Rows ``M`` and right-hand side ``r`` with ``M v = r`` iff the plane and
    diagonal constraints hold for ``w = to_matrix(v)``."""
    p = f.plane_projector()
    e1, e2 = f.basis_pair
    rows, rhs = [], []
    # w - P w P = 0, entrywise real and imaginary parts
    images = np.array([b - p @ b @ p for b in HERM_BASIS])  # (16, 4, 4)
    flat = images.reshape(16, 16).T
    for row in flat:
        rows.extend([row.real, row.imag])
        rhs.extend([0.0, 0.0])
    for e in (e1, e2):
        rows.append(np.array([np.vdot(e, b @ e).real for b in HERM_BASIS]))
        rhs.append(0.5)
    return np.array(rows), np.array(rhs)


@dataclass
class Intersection:
    pair: tuple[str, str]
    rank: int
    dimension: int  # dimension of the affine solution set; -1 if inconsistent
    members: list = field(default_factory=list)
    center: np.ndarray | None = None
    directions: list = field(default_factory=list)

    @property
    def is_point(self) -> bool:
        return self.dimension == 0 and len(self.members) == 1


def pairwise_intersection(f: PhaseFamily, g: PhaseFamily, tol: float = MEMBERSHIP_TOL) -> Intersection:
    """Intersect two families analytically.

    The plane and diagonal constraints of both families form a real linear
    system over Hermitian 4x4 operators.  Full rank (16) certifies a single
    candidate point, which is then tested against both coherence discs and
    positivity.  A positive-dimensional solution set is returned as a face:
    ``center`` plus ``directions``, still subject to the disc constraints.
    """
    mf, rf = _linear_constraints(f)
    mg, rg = _linear_constraints(g)
    m = np.vstack([mf, mg])
    r = np.concatenate([rf, rg])
    sol, *_ = np.linalg.lstsq(m, r, rcond=None)
    s = np.linalg.svd(m, compute_uv=False)
    rank = int(np.sum(s > 1e-10 * s[0]))
    pair = (f.label, g.label)
    if np.abs(m @ sol - r).max() > 1e-10:
        return Intersection(pair, rank, -1)
    center = to_matrix(sol)
    if rank == 16:
        members = [center] if (membership(f, center, tol) and membership(g, center, tol)) else []
        return Intersection(pair, rank, 0, members, center)
    _, _, vt = np.linalg.svd(m)
    null = vt[rank:]
    return Intersection(pair, rank, 16 - rank, [], center, [to_matrix(v) for v in null])


@dataclass
class TripleCertificate:
    empty: bool
    witness_gap: float
    pair_member: np.ndarray | None
    grid_points_checked: int
    counterexamples: int
    control_nonempty: bool


def mixture_grid(f: PhaseFamily, n_phase: int, n_mix: int) -> np.ndarray:
    """Two-element mixtures ``l P(p1) + (1-l) P(p2)`` over a phase x phase x weight grid."""
    proj = family_projectors(f, n_phase)
    lam = np.linspace(0.0, 1.0, n_mix)
    mixes = (
        lam[None, None, :, None, None] * proj[:, None, None]
        + (1 - lam)[None, None, :, None, None] * proj[None, :, None]
    )
    return mixes.reshape(-1, 4, 4)


def triple_intersection_empty(n_phase: int = 25, n_mix: int = 16, grid_tol: float = 1e-6) -> TripleCertificate:
    """Certify that no state lies in all three families.

    ``A1 & A2`` is a single point; its correlation on A3's axis is compared
    with the value A3 requires, giving the gap.  A dense mixture grid of each
    family is then screened against the other two, and the certificate is
    rerun with A3's correlation sign flipped as a control.
    """
    inter = pairwise_intersection(A1, A2)
    member = inter.members[0] if inter.is_point else None
    if member is None:
        gap = 0.0
        empty = False
    else:
        sig = correlation_signature(A3, member)
        gap = abs(A3.correlation - sig.correlation)
        empty = not membership(A3, member)

    checked = 0
    hits = 0
    fams = (A1, A2, A3)
    for k, f in enumerate(fams):
        grid = mixture_grid(f, n_phase, n_mix)
        checked += len(grid)
        others = [g for j, g in enumerate(fams) if j != k]
        in_all = membership(others[0], grid, grid_tol) & membership(others[1], grid, grid_tol)
        hits += int(np.count_nonzero(in_all))

    control = member is not None and membership(A3_ANTI, member)
    return TripleCertificate(empty and hits == 0, gap, member, checked, hits, control)
