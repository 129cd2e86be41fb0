"""Simplices in homogeneous coordinates and their dual normal fans.

A simplex with vertices v_0..v_n in R^n is stored as the (n+1)x(n+1) matrix
V whose column j is (1, v_j). Its normal fan is the matrix K whose column i
is (kappa_i, k_i), where k_i is the outward normal of the face F_i opposite
v_i, scaled so that ``K.T @ V == V @ K.T == -n vol I``. With this scaling
|k_i| is the (n-1)-volume of F_i and the normals sum to zero.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateSimplex, InvalidFan, NonNegativeKappaSum, NonPositiveRadicand
from .tolerances import DEFAULT, Tolerances


def homogeneous(points):
    """Stack points of R^n as columns (1, p) of an (n+1)-row matrix."""
    pts = np.atleast_2d(np.asarray(points, dtype=float))
    return np.vstack([np.ones(pts.shape[0]), pts.T])


@dataclass(frozen=True)
class Simplex:
    V: np.ndarray
    swapped: bool = False

    @property
    def n(self) -> int:
        return self.V.shape[0] - 1

    @property
    def vertices(self) -> np.ndarray:
        """(n+1, n) array, one vertex per row."""
        return self.V[1:].T.copy()

    @property
    def det(self) -> float:
        return float(np.linalg.det(self.V))

    @property
    def volume(self) -> float:
        return self.det / math.factorial(self.n)

    @property
    def diameter(self) -> float:
        v = self.vertices
        return float(max(np.linalg.norm(a - b) for a in v for b in v))

    def to_json(self) -> dict:
        return {"n": self.n, "vertices": self.vertices.tolist()}


@dataclass(frozen=True)
class NormalFan:
    K: np.ndarray
    swapped: bool = False

    @property
    def n(self) -> int:
        return self.K.shape[0] - 1

    @property
    def normals(self) -> np.ndarray:
        """(n+1, n) array whose row i is k_i."""
        return self.K[1:].T.copy()

    @property
    def kappa(self) -> np.ndarray:
        return self.K[0].copy()

    def scaled(self, factor: float) -> NormalFan:
        return NormalFan(self.K * factor, self.swapped)

    def to_json(self) -> dict:
        return {"n": self.n, "normals": self.normals.tolist(), "kappa": self.kappa.tolist()}

    @classmethod
    def from_parts(cls, normals, kappa) -> NormalFan:
        normals = np.asarray(normals, dtype=float)
        return cls(np.vstack([np.asarray(kappa, dtype=float), normals.T]))


class FanVerdict(enum.Enum):
    VALID = "valid"
    DEPENDENT_SUBSET = "dependent_subset"
    MIXED_SIGNS = "mixed_signs"


@dataclass(frozen=True)
class FanValidity:
    independent: tuple
    dependency_coeffs: np.ndarray
    verdict: FanVerdict
    dependent_index: int | None = None

    @property
    def valid(self) -> bool:
        return self.verdict is FanVerdict.VALID


def make_simplex(vertices, tol: Tolerances = DEFAULT) -> Simplex:
    """Build a positively oriented simplex from n+1 points of R^n.

    If the points are negatively oriented, vertices 0 and 1 are exchanged and
    ``swapped`` is set on the result.
    """
    pts = np.asarray(vertices, dtype=float)
    if pts.ndim != 2 or pts.shape[0] != pts.shape[1] + 1:
        raise ValueError(f"expected n+1 points in R^n, got array of shape {pts.shape}")
    if pts.shape[1] < 2:
        raise ValueError("dimension must be at least 2")
    V = homogeneous(pts)
    d = np.linalg.det(V)
    scale = float(np.prod(np.linalg.norm(V, axis=0)))
    if not np.isfinite(d) or abs(d) <= tol.degeneracy * scale:
        raise DegenerateSimplex(f"vertices span a degenerate simplex (det {d:.3g})")
    swapped = d < 0
    if swapped:
        V = V[:, [1, 0, *range(2, V.shape[1])]]
    return Simplex(V, swapped)


def normals_from_vertices(s: Simplex) -> NormalFan:
    n = s.n
    # K^T V = -n vol I  <=>  K = -n vol V^{-T}
    K = -n * s.volume * np.linalg.solve(s.V.T, np.eye(n + 1))
    return NormalFan(K)


def vertices_from_normals(f: NormalFan, tol: Tolerances = DEFAULT) -> Simplex:
    """Recover the simplex from a normalized fan.

    Taking determinants of K^T V = -n vol I gives
    -(n-1)! det K = (-n vol)^n, so the scale is the real n-th root of the
    radicand, which is negative; the radicand therefore has sign (-1)^n.
    """
    check = validate_normal_fan(f.normals, tol)
    if not check.valid:
        raise InvalidFan(f"normal fan is invalid: {check.verdict.value}"
                         + (f" (subset without k_{check.dependent_index})"
                            if check.dependent_index is not None else ""))
    n = f.n
    radicand = -math.factorial(n - 1) * np.linalg.det(f.K)
    if (-1) ** n * radicand <= 0:
        raise NonPositiveRadicand(
            f"-(n-1)! det K = {radicand:.6g} has the wrong sign for n={n}")
    c = -abs(radicand) ** (1.0 / n)
    V = c * np.linalg.solve(f.K.T, np.eye(n + 1))
    if not np.allclose(V[0], 1.0, rtol=0, atol=1e-8):
        raise InvalidFan("fan is not normalized (kappa sum != -n vol); use rescale_fan")
    V[0] = 1.0
    return Simplex(V, f.swapped)


def face_volume(s: Simplex, i: int) -> float:
    """(n-1)-volume of the face opposite vertex i, from its Gram determinant."""
    if not 0 <= i <= s.n:
        raise IndexError(i)
    v = np.delete(s.vertices, i, axis=0)
    E = (v[1:] - v[0]).T
    gram = np.linalg.det(E.T @ E)
    return math.sqrt(max(gram, 0.0)) / math.factorial(s.n - 1)


def validate_normal_fan(normals, tol: Tolerances = DEFAULT) -> FanValidity:
    """Check that n+1 normals in R^n bound a simplex.

    Every n of them must be independent, and the one-dimensional dependency
    sum(lam_i k_i) = 0 must have non-zero coefficients of one sign.
    """
    N = np.asarray(normals, dtype=float)
    m, n = N.shape
    if m != n + 1:
        raise ValueError(f"expected n+1 normals in R^n, got shape {N.shape}")
    independent = []
    for i in range(m):
        sv = np.linalg.svd(np.delete(N, i, axis=0), compute_uv=False)
        independent.append(bool(sv[0] > 0 and sv[-1] > tol.rank * sv[0]))
    lam = np.linalg.svd(N.T)[2][-1]
    lam = lam / lam[np.argmax(np.abs(lam))]
    if lam.sum() > 0:
        lam = lam / lam.sum()
    if not all(independent):
        return FanValidity(tuple(independent), lam, FanVerdict.DEPENDENT_SUBSET,
                           independent.index(False))
    if np.all(lam > 0) or np.all(lam < 0):
        return FanValidity(tuple(independent), lam, FanVerdict.VALID)
    return FanValidity(tuple(independent), lam, FanVerdict.MIXED_SIGNS)


def rescale_fan(normals, contact_points, tol: Tolerances = DEFAULT) -> NormalFan:
    """Normalize outward normals given at contact points into a NormalFan.

    Each normal is first multiplied by the magnitude of its dependency
    coefficient so that the normals sum to zero; then a single positive factor
    makes sum(kappa) = -n vol of the simplex bounded by the contact planes.
    When that simplex is negatively oriented, labels 0 and 1 are exchanged.
    """
    N = np.asarray(normals, dtype=float)
    P = np.asarray(contact_points, dtype=float)
    check = validate_normal_fan(N, tol)
    if not check.valid:
        raise InvalidFan(f"normal fan is invalid: {check.verdict.value}")
    N = N * np.abs(check.dependency_coeffs)[:, None]
    kappa = -np.einsum("ij,ij->i", N, P)
    total = kappa.sum()
    if total >= 0:
        raise NonNegativeKappaSum(
            f"sum of kappa is {total:.6g}; the contact planes do not enclose the body")
    K = np.vstack([kappa, N.T])
    # K^T V = (sum kappa) I holds for any scaling of the normals
    V = total * np.linalg.solve(K.T, np.eye(K.shape[0]))
    swapped = np.linalg.det(V) < 0
    if swapped:
        order = [1, 0, *range(2, K.shape[0])]
        K, V = K[:, order], V[:, order]
    n = K.shape[0] - 1
    vol = np.linalg.det(V) / math.factorial(n)
    return NormalFan(K * (-n * vol / total), swapped)
