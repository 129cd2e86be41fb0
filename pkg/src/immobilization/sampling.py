"""Random instances for property sweeps and the acceptance corpus."""

from __future__ import annotations

import numpy as np
from scipy.optimize import linprog

from .contacts import ContactSet, contacts_from_barycentric
from .errors import DegenerateSimplex, LeftFace
from .geometry import Simplex, make_simplex, normals_from_vertices
from .synthesis import apply_displacement, centroid_contacts, displacement_basis


def random_simplex(rng, n: int, max_cond: float = 1e4) -> Simplex:
    """Gaussian vertices, rejecting badly conditioned draws."""
    while True:
        pts = rng.standard_normal((n + 1, n)) * rng.uniform(0.5, 3.0) + rng.uniform(-2, 2, n)
        try:
            s = make_simplex(pts)
        except DegenerateSimplex:
            continue
        if np.linalg.cond(s.V) <= max_cond:
            return s


def random_barycentric(rng, n: int, floor: float = 0.02) -> np.ndarray:
    """Column-stochastic (n+1)x(n+1) matrix with zero diagonal, entries >= floor."""
    L = rng.uniform(floor, 1.0, (n + 1, n + 1))
    np.fill_diagonal(L, 0.0)
    return L / L.sum(axis=0)


def random_contacts(rng, s: Simplex) -> ContactSet:
    return contacts_from_barycentric(s, random_barycentric(rng, s.n))


def random_coeffs(rng, n: int, scale: float = 1.0) -> dict:
    return {(i, j): float(rng.standard_normal() * scale)
            for i in range(n + 1) for j in range(i + 1, n + 1)}


def random_symmetric_contacts(rng, s: Simplex, scale: float = 1.0, shrink: float = 0.5,
                              max_tries: int = 60):
    """Centroids moved by a random in-span displacement, kept strictly interior.

    The displacement is shrunk by ``shrink`` until every contact stays inside
    its face. Returns ``(contacts, coeffs)``.
    """
    f = normals_from_vertices(s)
    b = displacement_basis(f)
    base = centroid_contacts(s)
    # step size comparable to the simplex, independent of the normals' scale
    typical = np.mean([np.linalg.norm(b.generator(i, j)) for i, j in b.pairs])
    coeffs = random_coeffs(rng, s.n, scale * s.diameter / typical)
    for _ in range(max_tries):
        try:
            c = apply_displacement(s, base, coeffs)
        except LeftFace:
            c = None
        if c is not None and c.strict:
            return c, coeffs
        coeffs = {k: v * shrink for k, v in coeffs.items()}
    return base, {k: 0.0 for k in coeffs}


def low_pair_sum_contacts(s: Simplex, rng=None, rounds: int = 20, blend: float = 0.03) -> ContactSet:
    """Symmetric contact set pushed towards a small eigenvalue pair sum.

    Symmetric-A contact sets form a polytope in barycentric coordinates
    (column sums 1, zero diagonal, non-negative, A - A^T = 0, all linear).
    The pair sum is concave in A, so each round minimizes its linearization
    over the polytope and steps halfway to that vertex. The result is blended
    with the centroid set to stay strictly interior. Used to build
    non-immobilizing symmetric examples for n >= 4.
    """
    f = normals_from_vertices(s)
    N, X = f.normals, s.V[1:]
    n, m = s.n, s.n + 1
    idx = [(i, j) for j in range(m) for i in range(m) if i != j]
    # A as a linear function of each off-diagonal barycentric entry
    units = [np.outer(N[j], X[:, i]) for i, j in idx]
    eq = [[float(jj == j) for _, jj in idx] for j in range(m)]
    eq += [[U[a, b] - U[b, a] for U in units] for a in range(n) for b in range(a + 1, n)]
    rhs = [1.0] * m + [0.0] * (len(eq) - m)
    centroid = (np.ones((m, m)) - np.eye(m)) / n
    L = centroid
    for _ in range(rounds):
        A = N.T @ L.T @ X.T
        _, Q = np.linalg.eigh(0.5 * (A + A.T))
        grad = np.array([Q[:, 0] @ U @ Q[:, 0] + Q[:, 1] @ U @ Q[:, 1] for U in units])
        if rng is not None:
            grad = grad + 0.1 * np.abs(grad).max() * rng.standard_normal(grad.size)
        res = linprog(grad, A_eq=np.array(eq), b_eq=rhs, bounds=(0, None), method="highs")
        if not res.success:
            break
        vertex = np.zeros((m, m))
        for (i, j), x in zip(idx, res.x):
            vertex[i, j] = x
        L = 0.5 * (L + vertex)
    L = (1 - blend) * L + blend * centroid
    # the LP solver meets equalities only to ~1e-7; project back exactly
    E = np.array(eq)
    x = np.array([L[i, j] for i, j in idx])
    x -= E.T @ np.linalg.lstsq(E @ E.T, E @ x - rhs, rcond=None)[0]
    for (i, j), v in zip(idx, x):
        L[i, j] = v
    return contacts_from_barycentric(s, L)
