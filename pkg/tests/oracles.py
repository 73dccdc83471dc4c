"""Independent reference computations.

Nothing here calls the package's triple products, brackets or coordinate
machinery; each oracle recomputes from matrices with plain numpy loops.
"""

import numpy as np


def power_iteration_norm(M, iters: int = 2000, seed: int = 0) -> float:
    """Largest singular value via power iteration on ``M* M``."""
    M = np.asarray(M, dtype=complex)
    v = np.random.default_rng(seed).standard_normal(M.shape[1]).astype(complex)
    v /= np.linalg.norm(v)
    s = 0.0
    for _ in range(iters):
        w = M.conj().T @ (M @ v)
        nw = np.linalg.norm(w)
        if nw == 0:
            return 0.0
        v = w / nw
        s = np.sqrt(nw)
    return float(s)


def row_reduce_rank(M, tol: float = 1e-9) -> int:
    """Rank by Gaussian elimination with partial pivoting."""
    A = np.array(M, dtype=complex)
    rows, cols = A.shape
    scale = max(np.abs(A).max(), 1.0)
    r = 0
    for c in range(cols):
        if r == rows:
            break
        p = r + int(np.argmax(np.abs(A[r:, c])))
        if abs(A[p, c]) <= tol * scale:
            continue
        A[[r, p]] = A[[p, r]]
        A[r + 1 :] -= np.outer(A[r + 1 :, c] / A[r, c], A[r])
        r += 1
    return r


def matrix_units(m: int, n: int) -> list:
    out = []
    for i in range(m):
        for j in range(n):
            E = np.zeros((m, n), dtype=complex)
            E[i, j] = 1
            out.append(E)
    return out


def rect_triple(a, b, c):
    return (a @ b.conj().T @ c + c @ b.conj().T @ a) / 2


def rect_box(a, b, m: int, n: int) -> np.ndarray:
    """Matrix of ``x -> {a,b,x}`` on row-major vec of ``m x n`` matrices."""
    return np.array([rect_triple(a, b, E).ravel() for E in matrix_units(m, n)]).T


def rect_g0_dim(m: int, n: int) -> int:
    """``dim span{E_i box E_j}`` for ``m x n`` matrices, by row reduction."""
    units = matrix_units(m, n)
    rows = [rect_box(a, b, m, n).ravel() for a in units for b in units]
    return row_reduce_rank(np.array(rows))


class RectTKK:
    """TKK bracket for ``m x n`` matrices with degree-zero parts as dense operators.

    Elements are ``(x, H, y)`` with ``x, y`` matrices and ``H`` a matrix on
    row-major vec.  The canonical basis is orthonormal, so the involution
    ``a box b -> b box a`` is the conjugate transpose.
    """

    def __init__(self, m: int, n: int):
        self.m, self.n = m, n

    def apply(self, H, x):
        return (H @ x.ravel()).reshape(self.m, self.n)

    def box(self, a, b):
        return rect_box(a, b, self.m, self.n)

    def bracket(self, z, w):
        x, H, y = z
        u, K, v = w
        mid = H @ K - K @ H + self.box(x, v) - self.box(u, y)
        return (self.apply(H, u) - self.apply(K, x), mid, self.apply(K.conj().T, y) - self.apply(H.conj().T, v))

    def theta(self, z):
        x, H, y = z
        return (y, -H.conj().T, x)

    @staticmethod
    def size(z) -> float:
        return float(sum(np.abs(t).max() for t in z))

    @staticmethod
    def sub(z, w):
        return tuple(a - b for a, b in zip(z, w))


def covering_pairs(leq) -> list:
    """Covering relation of a finite order given as a boolean matrix, by brute force."""
    n = len(leq)
    out = []
    for i in range(n):
        for j in range(n):
            if i == j or not leq[i][j]:
                continue
            if not any(k not in (i, j) and leq[i][k] and leq[k][j] for k in range(n)):
                out.append((i, j))
    return sorted(out)
