"""A 4-simplex whose contact set gives a symmetric but not almost positive
definite penetration matrix, so symmetry alone does not imply immobilization
once n >= 4.

The reference normals below use the cross-product scaling
|k_i| = (n-1)! vol(F_i), i.e. K^T V = -det(V) I, which is (n-1)! = 6 times
the library's normalization; the reference matrix A is at the same scale.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction as Fr

import numpy as np

from .contacts import ContactSet, Verdict, contacts_from_barycentric, immobilizes, penetration_matrix
from .geometry import NormalFan, Simplex, make_simplex, normals_from_vertices

VERTICES = [
    [Fr(-5, 12), -1, 0, -3],
    [Fr(-83, 36), 0, 0, 1],
    [1, 1, 0, -3],
    [Fr(35, 18), 0, -1, 1],
    [Fr(35, 18), 0, 1, 1],
]

# column j holds the barycentric weights of contact j
BARYCENTRIC_COLUMNS = [
    [0, Fr(3, 10), Fr(2, 5), Fr(3, 20), Fr(3, 20)],
    [Fr(1, 10), 0, Fr(1, 10), Fr(2, 5), Fr(2, 5)],
    [Fr(2, 5), Fr(2, 5), 0, Fr(1, 10), Fr(1, 10)],
    [Fr(1, 10), Fr(7, 10), Fr(1, 10), 0, Fr(1, 10)],
    [Fr(1, 10), Fr(7, 10), Fr(1, 10), Fr(1, 10), 0],
]

REFERENCE_NORMALS = [
    [0, 34, 0, Fr(17, 2)],
    [16, Fr(-34, 3), 0, Fr(-119, 18)],
    [0, -34, 0, Fr(17, 2)],
    [-8, Fr(17, 3), 34, Fr(-187, 36)],
    [-8, Fr(17, 3), -34, Fr(-187, 36)],
]

REFERENCE_A_DIAGONAL = [Fr(238, 5), Fr(136, 5), Fr(34, 5), Fr(-68, 5)]


def _f(rows):
    return np.array([[float(Fr(x)) for x in row] for row in rows])


def reference_scale(n: int) -> float:
    return float(math.factorial(n - 1))


@dataclass(frozen=True)
class WorkedExample:
    simplex: Simplex
    fan: NormalFan
    contacts: ContactSet
    verdict: Verdict
    A_reference_scale: np.ndarray
    normals_reference_scale: np.ndarray
    normals_error: float
    A_error: float

    @property
    def reproduced(self) -> bool:
        v = self.verdict
        return (self.normals_error <= 1e-9 and self.A_error <= 1e-9 and v.symmetric
                and not v.almost_positive_definite and not v.immobilizes)


def build() -> WorkedExample:
    s = make_simplex(_f(VERTICES))
    fan = normals_from_vertices(s)
    c = contacts_from_barycentric(s, _f(BARYCENTRIC_COLUMNS).T)
    scale = reference_scale(s.n)
    normals = fan.normals * scale
    A = penetration_matrix(fan.scaled(scale), c).A
    return WorkedExample(
        simplex=s,
        fan=fan,
        contacts=c,
        verdict=immobilizes(s, c),
        A_reference_scale=A,
        normals_reference_scale=normals,
        normals_error=float(np.abs(normals - _f(REFERENCE_NORMALS)).max()),
        A_error=float(np.abs(A - np.diag([float(x) for x in REFERENCE_A_DIAGONAL])).max()),
    )
