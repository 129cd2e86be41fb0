"""Brute-force check of immobilization through the penetration function.

phi(g) = sum_i (g(p_i) - p_i) . k_i is minus the total normal penetration of
the contacts under a rigid motion g. The contacts immobilize the simplex iff
phi restricted to rotations has a strict local maximum at the identity.
Writing rotations as exp(S) for skew S gives psi(S) = tr(A^T (exp S - I)).

``falsify`` uses these functions, not the algebraic verdict, to either
construct an escaping rotation or collect evidence that none exists nearby.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import expm

from .contacts import ContactSet
from .errors import ZeroTranslation
from .geometry import NormalFan, Simplex, normals_from_vertices, vertices_from_normals
from .tolerances import DEFAULT, Tolerances


@dataclass(frozen=True)
class RigidMotion:
    R: np.ndarray
    a: np.ndarray

    @property
    def n(self) -> int:
        return self.R.shape[0]

    @property
    def G(self) -> np.ndarray:
        n = self.n
        G = np.zeros((n + 1, n + 1))
        G[0, 0] = 1.0
        G[1:, 0] = self.a
        G[1:, 1:] = self.R
        return G

    def __call__(self, x):
        return np.asarray(x) @ self.R.T + self.a

    @classmethod
    def rotation(cls, R) -> RigidMotion:
        R = np.asarray(R, dtype=float)
        return cls(R, np.zeros(R.shape[0]))

    @classmethod
    def translation(cls, a) -> RigidMotion:
        a = np.asarray(a, dtype=float)
        return cls(np.eye(a.shape[0]), a)


@dataclass(frozen=True)
class SkewGenerator:
    S: np.ndarray

    @property
    def n(self) -> int:
        return self.S.shape[0]

    @property
    def coords(self) -> dict:
        n = self.n
        return {(i, j): float(self.S[i, j]) for i in range(n) for j in range(i + 1, n)}

    @classmethod
    def from_coords(cls, n: int, coords) -> SkewGenerator:
        S = np.zeros((n, n))
        for (i, j), c in dict(coords).items():
            S[i, j] += c
            S[j, i] -= c
        return cls(S)

    @classmethod
    def from_matrix(cls, M) -> SkewGenerator:
        M = np.asarray(M, dtype=float)
        U = np.triu(M, 1)
        return cls(U - U.T)

    @classmethod
    def basis(cls, n: int, i: int, j: int) -> SkewGenerator:
        """+1 at (i, j), -1 at (j, i)."""
        return cls.from_coords(n, {(i, j): 1.0})

    def exp(self) -> np.ndarray:
        return rotation_exp(self.S)


def rotation_exp(S, drift_tol: float = 1e-12) -> np.ndarray:
    """exp(S) for skew S, re-projected onto SO(n) if it drifts."""
    R = expm(np.asarray(S, dtype=float))
    n = R.shape[0]
    if np.abs(R.T @ R - np.eye(n)).max() > drift_tol:
        U, _, Vt = np.linalg.svd(R)
        R = U @ Vt
    return R


def expm_minus_identity(S) -> np.ndarray:
    """exp(S) - I without the cancellation of subtracting I.

    exp([[S, I], [0, 0]]) carries phi_1(S) = sum S^k / (k+1)! in its upper
    right block, and exp(S) - I = S phi_1(S).
    """
    S = np.asarray(S, dtype=float)
    n = S.shape[0]
    M = np.zeros((2 * n, 2 * n))
    M[:n, :n] = S
    M[:n, n:] = np.eye(n)
    return S @ expm(M)[:n, n:]


def phi(f: NormalFan, c: ContactSet, g: RigidMotion) -> float:
    pts = c.points
    return float(np.sum((g(pts) - pts) * f.normals))


def psi(A, S) -> float:
    if hasattr(A, "A"):
        A = A.A
    if isinstance(S, SkewGenerator):
        S = S.S
    return float(np.sum(np.asarray(A) * expm_minus_identity(S)))


def equalizing_translation(f: NormalFan, c: ContactSet, R) -> RigidMotion:
    """The unique translation after R making every normal penetration equal.

    Solves K^T (0, a) = b with b_i = phi(R)/(n+1) - (R p_i - p_i) . k_i,
    whose solution is (0, a) = -V b / (n vol) since K^T V = -n vol I.
    """
    R = np.asarray(R, dtype=float)
    n = f.n
    pts, N = c.points, f.normals
    disp = np.einsum("ij,ij->i", pts @ R.T - pts, N)
    b = disp.sum() / (n + 1) - disp
    V = vertices_from_normals(f).V
    a_tilde = V @ b / f.kappa.sum()
    return RigidMotion(R, a_tilde[1:])


def translation_penetration(f: NormalFan, a) -> int:
    """Index of a contact that a translation by ``a`` pushes into the body."""
    a = np.asarray(a, dtype=float)
    if not np.any(a):
        raise ZeroTranslation("translation vector is zero")
    d = f.normals @ a
    return int(np.argmin(d))


class OracleVerdict(enum.Enum):
    CONFIRM = "confirm_immobilizing"
    REFUTE = "refute_with_witness"
    INCONCLUSIVE = "inconclusive"


@dataclass(frozen=True)
class OracleConfig:
    epsilon: float = 1e-3
    n_random: int = 256
    seed: int = 0

    @classmethod
    def from_json(cls, d: dict) -> OracleConfig:
        return cls(float(d.get("epsilon", cls.epsilon)), int(d.get("n_random", cls.n_random)),
                   int(d.get("seed", cls.seed)))


@dataclass(frozen=True)
class OracleReport:
    verdict: OracleVerdict
    samples: int
    worst_psi: float
    witness: SkewGenerator | None = None
    witness_psi: float | None = None
    reason: str = ""
    near_zero: bool = False
    eigen_generator_psi: list = field(default_factory=list)

    @property
    def refuted(self) -> bool:
        return self.verdict is OracleVerdict.REFUTE

    @property
    def confirmed(self) -> bool:
        return self.verdict is OracleVerdict.CONFIRM

    def to_json(self) -> dict:
        out = {
            "verdict": self.verdict.value,
            "samples": self.samples,
            "worst_psi": self.worst_psi,
            "reason": self.reason,
            "near_zero": self.near_zero,
            "witness": None,
            "witness_psi": self.witness_psi,
        }
        if self.witness is not None:
            out["witness"] = [{"i": i, "j": j, "c": v} for (i, j), v in self.witness.coords.items()]
        return out


def _plane_generator(u, v):
    return np.outer(u, v) - np.outer(v, u)


def falsify(s: Simplex, c: ContactSet, config: OracleConfig = OracleConfig(),
            tol: Tolerances = DEFAULT) -> OracleReport:
    """Search for a rotation that frees the simplex, or gather evidence there is none.

    1. If A has an antisymmetric part W, psi(eps W/|W|) = eps |W|^2/|W| + O(eps^2)
       is positive for small eps: shrink eps until it is.
    2. If A is symmetric but some eigenvalue pair (l_i, l_j) of A has a
       negative sum, the rotation in the plane of their eigenvectors gives
       psi = (cos eps - 1)(l_i + l_j) > 0.
    3. Otherwise every rotation plane is penalized. Confirmation checks psi < 0
       on all coordinate generators of A's eigenbasis (a complete test of the
       quadratic term) and on ``n_random`` random directions of norm eps.

    Pair sums within 1e-9 |A| of zero are reported as inconclusive: psi
    vanishes identically along that plane.
    """
    f = normals_from_vertices(s)
    n = s.n
    A = f.normals.T @ c.points
    anorm = np.linalg.norm(A, 2)
    W = 0.5 * (A - A.T)
    wnorm = np.linalg.norm(W)
    eps = config.epsilon

    if np.abs(A - A.T).max() > tol.sym * np.abs(A).max():
        S = W / wnorm
        e = eps
        for _ in range(80):
            val = psi(A, e * S)
            if val > 0:
                return OracleReport(OracleVerdict.REFUTE, 1, val, SkewGenerator(e * S), val,
                                    "antisymmetric part gives a first-order escape")
            e *= 0.5
        return OracleReport(OracleVerdict.INCONCLUSIVE, 80, val, SkewGenerator(e * S), val,
                            "antisymmetric part too small to resolve")

    w, Q = np.linalg.eigh(0.5 * (A + A.T))
    pair = w[0] + w[1]
    S_low = eps * _plane_generator(Q[:, 0], Q[:, 1])
    if abs(pair) <= 1e-9 * anorm:
        val = psi(A, S_low)
        return OracleReport(OracleVerdict.INCONCLUSIVE, 1, val, SkewGenerator(S_low), val,
                            "degenerate eigenvalue pair: psi vanishes along its plane",
                            near_zero=True)
    if pair < 0:
        val = psi(A, S_low)
        if val >= 0:
            return OracleReport(OracleVerdict.REFUTE, 1, val, SkewGenerator(S_low), val,
                                "eigenvalue pair with negative sum")
        return OracleReport(OracleVerdict.INCONCLUSIVE, 1, val, SkewGenerator(S_low), val,
                            "negative pair sum but psi did not turn non-negative")

    rng = np.random.default_rng(config.seed)
    directions = []
    eigen_psi = []
    for i in range(n):
        for j in range(i + 1, n):
            Sij = eps * _plane_generator(Q[:, i], Q[:, j])
            eigen_psi.append(psi(A, Sij))
            directions.append(Sij)
            directions.append(eps * SkewGenerator.basis(n, i, j).S)
    for _ in range(config.n_random):
        X = rng.standard_normal((n, n))
        X = X - X.T
        directions.append(eps * X / np.linalg.norm(X))
    values = np.array([psi(A, S) for S in directions])
    k = int(np.argmax(values))
    worst = float(values[k])
    if worst >= 0:
        return OracleReport(OracleVerdict.REFUTE, len(values), worst,
                            SkewGenerator(directions[k]), worst,
                            "sampled rotation does not penetrate", eigen_generator_psi=eigen_psi)
    return OracleReport(OracleVerdict.CONFIRM, len(values), worst, None, None,
                        "psi < 0 on every eigen-plane generator and sampled direction",
                        eigen_generator_psi=eigen_psi)
