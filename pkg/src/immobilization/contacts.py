"""Contact sets, the penetration matrix, and the immobilization test.

A contact set puts one point p_i on each face F_i. Its barycentric matrix
Lam satisfies P = V Lam, where P has columns (1, p_i); Lam is column
stochastic with a zero diagonal. The penetration matrix is
A = sum_i k_i p_i^T, and the contact set immobilizes the simplex exactly
when A is symmetric and almost positive definite (every pair of eigenvalues
has a positive sum).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import BadStochastic, ConsistencyError, NotSymmetric, OffFace
from .geometry import NormalFan, Simplex, homogeneous, normals_from_vertices
from .linalg import deflated_contraction, jacobi_eigh
from .tolerances import DEFAULT, Tolerances


@dataclass(frozen=True)
class ContactSet:
    P: np.ndarray
    Lam: np.ndarray
    strict: bool = True
    boundary: tuple = ()

    @property
    def n(self) -> int:
        return self.P.shape[0] - 1

    @property
    def points(self) -> np.ndarray:
        """(n+1, n) array, contact point p_i in row i."""
        return self.P[1:].T.copy()

    def to_json(self) -> dict:
        return {"points": self.points.tolist()}


def _interiority(Lam, tol):
    m = Lam.shape[0]
    boundary = tuple((i, j) for j in range(m) for i in range(m)
                     if i != j and Lam[i, j] <= tol)
    return not boundary, boundary


def contacts_from_points(s: Simplex, points, tol: Tolerances = DEFAULT,
                         check_plane: bool = True) -> ContactSet:
    """Encode contact points, point i on the hyperplane of face i.

    ``check_plane=False`` skips the hyperplane test; the resulting Lam then
    need not have a zero diagonal. Used for the special point sets that relax
    the face constraint.
    """
    pts = np.asarray(points, dtype=float)
    if pts.shape != (s.n + 1, s.n):
        raise ValueError(f"expected {s.n + 1} points in R^{s.n}, got shape {pts.shape}")
    P = homogeneous(pts)
    if check_plane:
        f = normals_from_vertices(s)
        N, kappa = f.normals, f.kappa
        scale = max(1.0, s.diameter)
        for i in range(s.n + 1):
            knorm = np.linalg.norm(N[i])
            dist = abs(N[i] @ pts[i] + kappa[i]) / knorm
            if dist > tol.plane * scale:
                raise OffFace(i, dist)
    Lam = np.linalg.solve(s.V, P)
    if check_plane:
        np.fill_diagonal(Lam, 0.0)
    strict, boundary = _interiority(Lam, tol.interior)
    return ContactSet(P, Lam, strict, boundary)


def contacts_from_barycentric(s: Simplex, Lam, tol: Tolerances = DEFAULT) -> ContactSet:
    Lam = np.array(Lam, dtype=float)
    m = s.n + 1
    if Lam.shape != (m, m):
        raise BadStochastic(f"expected a {m}x{m} barycentric matrix, got {Lam.shape}")
    colsum = Lam.sum(axis=0)
    if np.any(np.abs(colsum - 1.0) > tol.stochastic):
        raise BadStochastic(f"column sums deviate from 1 (max {np.abs(colsum - 1).max():.3g})")
    if np.any(np.abs(np.diag(Lam)) > tol.stochastic):
        raise BadStochastic("diagonal of the barycentric matrix must be zero")
    np.fill_diagonal(Lam, 0.0)
    P = s.V @ Lam
    P[0] = 1.0
    strict, boundary = _interiority(Lam, tol.interior)
    return ContactSet(P, Lam, strict, boundary)


@dataclass(frozen=True)
class PenetrationMatrix:
    A: np.ndarray
    symmetric_defect: float
    symmetric: bool
    eigenvalues: np.ndarray | None = None
    eigenvectors: np.ndarray | None = field(default=None, repr=False)

    @property
    def n(self) -> int:
        return self.A.shape[0]

    @property
    def min_pair_sum(self) -> float | None:
        if self.eigenvalues is None:
            return None
        return float(self.eigenvalues[0] + self.eigenvalues[1])


def penetration_matrix(f: NormalFan, c: ContactSet, tol: Tolerances = DEFAULT) -> PenetrationMatrix:
    if f.n != c.n:
        raise ValueError(f"dimension mismatch: fan n={f.n}, contacts n={c.n}")
    N, pts = f.normals, c.points
    A = np.zeros((f.n, f.n))
    for k, p in zip(N, pts):
        A += np.outer(k, p)
    defect = float(np.abs(A - A.T).max())
    symmetric = bool(defect <= tol.sym * np.abs(A).max())
    if not symmetric:
        return PenetrationMatrix(A, defect, False)
    w, Q = jacobi_eigh(0.5 * (A + A.T))
    return PenetrationMatrix(A, defect, True, w, Q)


def is_almost_positive_definite(m: PenetrationMatrix, tol: Tolerances = DEFAULT) -> bool:
    """True when the two smallest eigenvalues (hence every pair) sum positive."""
    if not m.symmetric:
        raise NotSymmetric(f"penetration matrix is not symmetric (defect {m.symmetric_defect:.3g})")
    return bool(m.min_pair_sum > tol.apd * np.linalg.norm(m.A, 2))


@dataclass(frozen=True)
class Verdict:
    symmetric: bool
    almost_positive_definite: bool
    immobilizes: bool
    margin: float | None
    eigenvalues: np.ndarray | None
    symmetric_defect: float
    strict: bool = True
    boundary: tuple = ()

    def to_json(self) -> dict:
        return {
            "symmetric": self.symmetric,
            "apd": self.almost_positive_definite,
            "immobilizes": self.immobilizes,
            "margin": self.margin,
            "eigenvalues": None if self.eigenvalues is None else self.eigenvalues.tolist(),
            "symmetric_defect": self.symmetric_defect,
            "strict_interior": self.strict,
        }


def verdict_from_matrix(m: PenetrationMatrix, volume: float, tol: Tolerances = DEFAULT) -> Verdict:
    apd = bool(m.symmetric and is_almost_positive_definite(m, tol))
    margin = None if m.min_pair_sum is None else m.min_pair_sum / (2.0 * volume)
    return Verdict(m.symmetric, apd, m.symmetric and apd, margin, m.eigenvalues,
                   m.symmetric_defect)


def immobilizes(s: Simplex, c: ContactSet, tol: Tolerances = DEFAULT) -> Verdict:
    """Decide whether the contact set immobilizes the simplex.

    Contacts on face boundaries still get a verdict; ``strict`` is cleared and
    the offending (i, j) barycentric entries are listed in ``boundary``.
    For n <= 3 symmetry alone implies almost positive definiteness on strictly
    interior contacts; a clear numerical contradiction raises ConsistencyError.
    """
    f = normals_from_vertices(s)
    m = penetration_matrix(f, c, tol)
    v = verdict_from_matrix(m, s.volume, tol)
    if s.n <= 3 and c.strict and m.symmetric and m.min_pair_sum < -tol.sym * np.abs(m.A).max():
        raise ConsistencyError(
            f"symmetric A with interior contacts in n={s.n} has min pair sum {m.min_pair_sum:.3g}")
    return Verdict(v.symmetric, v.almost_positive_definite, v.immobilizes, v.margin,
                   v.eigenvalues, v.symmetric_defect, c.strict, c.boundary)


@dataclass(frozen=True)
class LinkCheck:
    ok: bool
    similarity_residual: float
    block_residual: float

    def __bool__(self):
        return self.ok

    @property
    def residual(self) -> float:
        return max(self.similarity_residual, self.block_residual)


def spectral_link_check(s: Simplex, c: ContactSet, rtol: float = 1e-9) -> LinkCheck:
    """Relate A to the barycentric matrix through K P^T.

    Checks K P^T = -n vol K Lam^T K^{-1} (so A shares the spectrum of
    -n vol Lam apart from the eigenvalue -n vol) and that K P^T has first
    column (-n vol, 0, ..., 0) with A as its lower-right block.
    """
    f = normals_from_vertices(s)
    n, nvol = s.n, s.n * s.volume
    KPt = f.K @ c.P.T
    # K Lam^T K^{-1} = (K^{-T} Lam K^T)^T
    similar = -nvol * np.linalg.solve(f.K.T, c.Lam @ f.K.T).T
    scale = max(np.abs(KPt).max(), nvol)
    sim_res = float(np.abs(KPt - similar).max() / scale)
    A = f.normals.T @ c.points
    first_col = np.zeros(n + 1)
    first_col[0] = -nvol
    block_res = float(max(np.abs(KPt[:, 0] - first_col).max(),
                          np.abs(KPt[1:, 1:] - A).max()) / scale)
    return LinkCheck(sim_res <= rtol and block_res <= rtol, sim_res, block_res)


@dataclass(frozen=True)
class SpectrumReport:
    ones_residual: float
    max_deflated_norm: float
    radius_estimate: float
    n_iter: int
    threshold: float

    @property
    def contraction(self) -> bool:
        return self.max_deflated_norm <= self.threshold

    @property
    def ok(self) -> bool:
        return self.ones_residual <= 1e-12 and self.contraction


def stochastic_spectrum_bound(Lam, seed: int = 0, n_iter: int = 256, n_vectors: int = 32,
                              threshold: float = 0.99, tol: Tolerances = DEFAULT) -> SpectrumReport:
    """Evidence that Lam has the simple eigenvalue 1 and all others inside the unit disc.

    Iterating Lam on the zero-sum hyperplane is a fixed-budget power method:
    a final norm below ``threshold`` indicates the subdominant spectral radius
    is below one, though it does not prove it for nearly defective spectra.
    """
    L = np.asarray(Lam, dtype=float)
    m = L.shape[0]
    if L.ndim != 2 or L.shape != (m, m):
        raise BadStochastic("barycentric matrix must be square")
    if m < 3:
        raise BadStochastic("need m >= 3: for m = 2 the only such matrix is the swap, "
                            "which has eigenvalue -1")
    if np.any(np.abs(np.diag(L)) > tol.stochastic):
        raise BadStochastic("diagonal must be zero")
    off = L[~np.eye(m, dtype=bool)]
    if np.any(off <= 0):
        raise BadStochastic("off-diagonal entries must be positive")
    ones = np.ones(m)
    ones_residual = float(np.abs(L.T @ ones - ones).max())
    if ones_residual > tol.stochastic:
        raise BadStochastic(f"columns do not sum to 1 (residual {ones_residual:.3g})")
    logs = deflated_contraction(L, np.random.default_rng(seed), n_vectors, n_iter)
    worst = float(logs.max())
    return SpectrumReport(ones_residual, float(np.exp(worst)), float(np.exp(worst / n_iter)),
                          n_iter, threshold)
