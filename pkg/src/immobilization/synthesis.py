"""Constructing immobilizing contact sets.

Three constructions live here: face centroids, centred sets (contacts whose
normal lines meet in a common point z), and two-face displacements that move
a symmetric contact set inside its face hyperplanes while keeping the
penetration matrix symmetric.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

import numpy as np

from .contacts import ContactSet, contacts_from_barycentric, contacts_from_points
from .errors import BadInput, LeftFace, NotCentredFeasible, NotInSpace
from .geometry import NormalFan, Simplex, normals_from_vertices
from .tolerances import DEFAULT, Tolerances


def centroid_contacts(s: Simplex) -> ContactSet:
    n = s.n
    Lam = (np.ones((n + 1, n + 1)) - np.eye(n + 1)) / n
    return contacts_from_barycentric(s, Lam)


@dataclass(frozen=True)
class CentredWitness:
    z: np.ndarray
    mu: np.ndarray
    t: np.ndarray

    def to_json(self) -> dict:
        return {"z": self.z.tolist(), "mu": self.mu.tolist(), "t": self.t.tolist()}


def centred_barycentric(f: NormalFan, mu) -> np.ndarray:
    """Barycentric matrix of the contact set centred at the point with weights mu.

    lam_ij = mu_i - mu_j (k_i . k_j) / |k_j|^2; the diagonal vanishes and each
    column sums to one because the normals sum to zero.
    """
    N = f.normals
    gram = N @ N.T
    sq = np.diag(gram)
    Lam = np.asarray(mu, dtype=float)[:, None] - gram * (np.asarray(mu) / sq)[None, :]
    np.fill_diagonal(Lam, 0.0)
    return Lam


def centred_contacts(s: Simplex, z, tol: Tolerances = DEFAULT):
    """Contact set whose normal lines all pass through ``z``.

    Returns ``(contacts, witness)``. Contact j is ``z + t_j k_j`` with
    ``t_j = n vol mu_j / |k_j|^2``, where mu are the barycentric weights of z.
    Raises NotCentredFeasible when some t_j or off-diagonal lam_ij is not
    positive; violations are listed as ``("t", j)`` or ``("lam", i, j)``.
    """
    z = np.asarray(z, dtype=float)
    if z.shape != (s.n,):
        raise ValueError(f"z must be a point of R^{s.n}")
    f = normals_from_vertices(s)
    N = f.normals
    mu = np.linalg.solve(s.V, np.concatenate([[1.0], z]))
    sq = np.einsum("ij,ij->i", N, N)
    t = s.n * s.volume * mu / sq
    Lam = centred_barycentric(f, mu)
    violations = [("t", j) for j in range(s.n + 1) if not t[j] > 0]
    violations += [("lam", i, j) for j in range(s.n + 1) for i in range(s.n + 1)
                   if i != j and not Lam[i, j] > 0]
    if violations:
        raise NotCentredFeasible(z, violations)
    # Lam is exactly stochastic up to rounding; snap column sums
    Lam /= Lam.sum(axis=0)
    contacts = contacts_from_barycentric(s, Lam, tol)
    return contacts, CentredWitness(z, mu, t)


def centred_feasible_witness(s: Simplex) -> CentredWitness:
    """Centre weighted by face volumes, mu_i = |k_i| / sum |k_l|.

    Then lam_ij = |k_j| (|k_i||k_j| - k_i.k_j) / (|k_j|^2 sum|k_l|), which is
    positive by Cauchy-Schwarz since no two normals are parallel.
    """
    f = normals_from_vertices(s)
    norms = np.linalg.norm(f.normals, axis=1)
    mu = norms / norms.sum()
    z = (s.V @ mu)[1:]
    t = s.n * s.volume * mu / norms ** 2
    return CentredWitness(z, mu, t)


@dataclass(frozen=True)
class DisplacementBasis:
    projected: np.ndarray
    pairs: tuple

    @property
    def n(self) -> int:
        return self.projected.shape[-1]

    def generator(self, i: int, j: int) -> np.ndarray:
        """n x (n+1) displacement moving p_i along k_ij and p_j along k_ji."""
        if i == j:
            raise ValueError("generator needs two distinct faces")
        i, j = min(i, j), max(i, j)
        dP = np.zeros((self.n, self.n + 1))
        dP[:, i] = self.projected[i, j]
        dP[:, j] = self.projected[j, i]
        return dP

    @property
    def generators(self) -> dict:
        return {ij: self.generator(*ij) for ij in self.pairs}

    def matrix(self) -> np.ndarray:
        """Columns are the vectorized generators, in ``pairs`` order."""
        return np.column_stack([self.generator(i, j).ravel(order="F") for i, j in self.pairs])


def displacement_basis(f: NormalFan) -> DisplacementBasis:
    """Project each normal k_j perpendicular to every other normal k_i."""
    N = f.normals
    m = N.shape[0]
    proj = np.zeros((m, m, N.shape[1]))
    for i in range(m):
        ki = N[i]
        for j in range(m):
            if i != j:
                proj[i, j] = N[j] - (ki @ N[j]) / (ki @ ki) * ki
    return DisplacementBasis(proj, tuple(combinations(range(m), 2)))


def displacement_space_rank(b: DisplacementBasis, rtol: float = 1e-10) -> int:
    sv = np.linalg.svd(b.matrix(), compute_uv=False)
    return int(np.sum(sv > rtol * sv[0]))


def displacement_dependency(b: DisplacementBasis, rtol: float = 1e-10) -> np.ndarray:
    """Null space of the generator set, as columns, each scaled to unit mean."""
    M = b.matrix()
    _, sv, Vt = np.linalg.svd(M)
    rank = int(np.sum(sv > rtol * sv[0]))
    null = Vt[rank:].T
    return null / null.mean(axis=0)


def _normalize_coeffs(coeffs):
    out = {}
    for (i, j), t in dict(coeffs).items():
        if i == j:
            raise ValueError(f"coefficient key ({i}, {j}) needs distinct faces")
        key = (min(i, j), max(i, j))
        out[key] = out.get(key, 0.0) + float(t)
    return out


def displacement_matrix(b: DisplacementBasis, coeffs) -> np.ndarray:
    dP = np.zeros((b.n, b.n + 1))
    for (i, j), t in _normalize_coeffs(coeffs).items():
        dP += t * b.generator(i, j)
    return dP


def apply_displacement(s: Simplex, c: ContactSet, coeffs, tol: Tolerances = DEFAULT) -> ContactSet:
    """Move contacts by sum of t_ij * DeltaP_ij.

    Each contact stays in its face hyperplane and symmetry of A is preserved;
    a contact whose barycentric coordinates turn negative raises LeftFace.
    """
    b = displacement_basis(normals_from_vertices(s))
    dP = displacement_matrix(b, coeffs)
    moved = contacts_from_points(s, c.points + dP.T, tol)
    off = moved.Lam + np.eye(s.n + 1)
    i, j = np.unravel_index(np.argmin(off), off.shape)
    if off[i, j] < -tol.interior:
        raise LeftFace(int(j), float(off[i, j]))
    return moved


def wedge_defect(f: NormalFan, dP) -> float:
    """Size of sum_i k_i ^ dp_i, the antisymmetric part of sum k_i dp_i^T."""
    B = f.normals.T @ np.asarray(dP, dtype=float).T
    return float(np.abs(B - B.T).max())


def symmetry_projection_coords(f: NormalFan, dP, tol: float = 1e-9) -> dict:
    """Coordinates of a face-parallel displacement over the generators DeltaP_ij.

    The generators have one dependency (all coefficients equal), so the
    minimum-norm solution is returned. Raises NotInSpace if dP does not keep A
    symmetric, and BadInput if some column is not parallel to its face.
    """
    dP = np.asarray(dP, dtype=float)
    n = f.n
    if dP.shape != (n, n + 1):
        raise BadInput(f"displacement must be {n}x{n + 1}, got {dP.shape}")
    N = f.normals
    scale = max(np.abs(dP).max(), np.finfo(float).tiny)
    for i in range(n + 1):
        if abs(N[i] @ dP[:, i]) > tol * np.linalg.norm(N[i]) * scale:
            raise BadInput(f"column {i} is not parallel to face {i}")
    b = displacement_basis(f)
    M = b.matrix()
    target = dP.ravel(order="F")
    coef, *_ = np.linalg.lstsq(M, target, rcond=1e-10)
    residual = float(np.abs(M @ coef - target).max())
    if residual > tol * scale:
        raise NotInSpace(wedge_defect(f, dP), residual)
    return dict(zip(b.pairs, coef.tolist()))
