"""Small dense linear-algebra kernels."""

from __future__ import annotations

import numpy as np


def jacobi_eigh(A, tol=1e-13, max_sweeps=50):
    """Eigen-decomposition of a real symmetric matrix by cyclic Jacobi sweeps.

    Parameters
    ----------
    A : (n, n) array_like
        Symmetric input; only its symmetric part is used.
    tol : float
        Stop once the off-diagonal Frobenius norm is at most ``tol * ||A||_F``.
    max_sweeps : int
        Upper bound on the number of full cyclic sweeps.

    Returns
    -------
    w : (n,) ndarray
        Eigenvalues in ascending order.
    Q : (n, n) ndarray
        Orthogonal matrix whose columns are the matching eigenvectors.
    """
    a = np.array(A, dtype=float)
    a = 0.5 * (a + a.T)
    n = a.shape[0]
    Q = np.eye(n)
    scale = np.linalg.norm(a)
    if scale == 0.0:
        return np.zeros(n), Q
    for _ in range(max_sweeps):
        off = np.linalg.norm(a - np.diag(np.diag(a)))
        if off <= tol * scale:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                if apq == 0.0:
                    continue
                theta = (a[q, q] - a[p, p]) / (2.0 * apq)
                t = np.sign(theta) / (abs(theta) + np.sqrt(theta * theta + 1.0))
                if theta == 0.0:
                    t = 1.0
                c = 1.0 / np.sqrt(t * t + 1.0)
                s = t * c
                rp, rq = a[p].copy(), a[q].copy()
                a[p], a[q] = c * rp - s * rq, s * rp + c * rq
                cp, cq = a[:, p].copy(), a[:, q].copy()
                a[:, p], a[:, q] = c * cp - s * cq, s * cp + c * cq
                qp, qq = Q[:, p].copy(), Q[:, q].copy()
                Q[:, p], Q[:, q] = c * qp - s * qq, s * qp + c * qq
    w = np.diag(a).copy()
    order = np.argsort(w)
    return w[order], Q[:, order]


def deflated_contraction(L, rng, n_vectors=32, n_iter=256):
    """Log-norms of ``L^k x`` for random zero-sum unit vectors ``x``.

    For a column-stochastic ``L`` the zero-sum hyperplane is invariant and
    carries every eigenvalue except the unit one, so the norms decay like the
    subdominant spectral radius to the power ``n_iter``. Iterates are
    renormalized each step to avoid underflow and re-centred so rounding
    cannot feed the unit eigenvalue.
    """
    L = np.asarray(L, dtype=float)
    m = L.shape[0]
    X = rng.standard_normal((m, n_vectors))
    X -= X.mean(axis=0)
    X /= np.linalg.norm(X, axis=0)
    log_growth = np.zeros(n_vectors)
    for _ in range(n_iter):
        X = L @ X
        X -= X.mean(axis=0)
        nrm = np.linalg.norm(X, axis=0)
        nrm[nrm == 0.0] = np.finfo(float).tiny
        log_growth += np.log(nrm)
        X /= nrm
    return log_growth
