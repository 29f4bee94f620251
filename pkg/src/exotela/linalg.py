"""Small dense symmetric eigensolver (cyclic Jacobi)."""

import math

import numpy as np

from .errors import ConvergenceError

#: Relative off-diagonal threshold used to declare convergence.
JACOBI_RTOL = 1e-13


def _off_norm(m):
    return math.sqrt(sum(x * x for i, row in enumerate(m)
                         for j, x in enumerate(row) if i != j))


def jacobi_eigh(a, rtol=JACOBI_RTOL, max_sweeps=60):
    """Eigen-decomposition of a small real symmetric matrix.

    Cyclic Jacobi rotations are applied until the Frobenius norm of the
    off-diagonal part drops below ``rtol * ||a||_F``.

    Parameters
    ----------
    a : (n, n) array_like
        Symmetric matrix.  Only the symmetric part is used.
    rtol : float, optional
        Relative convergence threshold.
    max_sweeps : int, optional
        Upper bound on the number of full sweeps.

    Returns
    -------
    w : (n,) ndarray
        Eigenvalues in ascending order.
    v : (n, n) ndarray
        Orthonormal eigenvectors, column ``v[:, i]`` belongs to ``w[i]``.
    """
    a = np.array(a, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError("jacobi_eigh expects a square matrix")
    a = 0.5 * (a + a.T)
    n = a.shape[0]
    scale = float(np.linalg.norm(a))
    if scale == 0.0:
        return np.zeros(n), np.eye(n)
    threshold = rtol * scale
    negligible = 1e-3 * threshold / n
    # Plain lists: for n <= 6 Python scalars beat numpy call overhead.
    m = a.tolist()
    v = np.eye(n).tolist()

    for _ in range(max_sweeps):
        off = _off_norm(m)
        if off < threshold:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = m[p][q]
                if abs(apq) <= negligible:
                    continue
                theta = (m[q][q] - m[p][p]) / (2.0 * apq)
                t = 1.0 / (abs(theta) + math.sqrt(theta * theta + 1.0))
                if theta < 0.0:
                    t = -t
                c = 1.0 / math.sqrt(t * t + 1.0)
                s = t * c
                for row in m:
                    xp, xq = row[p], row[q]
                    row[p] = c * xp - s * xq
                    row[q] = s * xp + c * xq
                mp, mq = m[p], m[q]
                for k in range(n):
                    xp, xq = mp[k], mq[k]
                    mp[k] = c * xp - s * xq
                    mq[k] = s * xp + c * xq
                mp[q] = mq[p] = 0.0
                for row in v:
                    xp, xq = row[p], row[q]
                    row[p] = c * xp - s * xq
                    row[q] = s * xp + c * xq
    else:
        off = _off_norm(m)
        if off >= threshold:
            raise ConvergenceError(
                f"Jacobi iteration did not converge (off-diagonal {off:.3e})"
            )

    w = np.array([m[i][i] for i in range(n)])
    order = np.argsort(w, kind="stable")
    return w[order], np.array(v)[:, order]
