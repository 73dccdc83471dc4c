"""Finite-dimensional JB*-triples.

Supported spaces are the Cartan factors of types I-IV and finite
l-infinity sums of them.  Elements are complex coordinate vectors against
the canonical basis of their space; every function below also accepts a
stack of coordinate vectors along the leading axes, which is how the
verification suites evaluate thousands of samples at once.

Matrix factors use ``{a,b,c} = (a b* c + c b* a) / 2``.  The spin factor
is modelled on C^n with

    {x,y,z} = <x,y> z + <z,y> x - <x, conj z> conj y,
    ||x||^2 = <x,x> + sqrt(<x,x>^2 - |<x, conj x>|^2).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .numeric import (
    DEFAULT_TOL,
    RealLinearOp,
    Tolerance,
    random_orthogonal,
    random_unitary,
    spectral_norm,
)


class TripleSpace:
    """Base class for the supported JB*-triples."""

    dim: int
    max_rank: int
    rank_at_least_two: bool

    # -- to be provided by subclasses -------------------------------------
    def triple(self, a, b, c) -> np.ndarray:
        raise NotImplementedError

    def norm(self, x):
        raise NotImplementedError

    def config(self) -> dict:
        raise NotImplementedError

    def frame(self, rng: np.random.Generator) -> list[np.ndarray]:
        """A maximal family of mutually orthogonal minimal tripotents."""
        raise NotImplementedError

    def _random_tripotent(self, target_rank: int, rng: np.random.Generator) -> np.ndarray:
        raise NotImplementedError

    # -- shared ------------------------------------------------------------
    @cached_property
    def basis(self) -> np.ndarray:
        """Rows are the canonical basis vectors in coordinates."""
        return np.eye(self.dim, dtype=complex)

    def zero(self) -> np.ndarray:
        return np.zeros(self.dim, dtype=complex)

    def check(self, *elements) -> None:
        for x in elements:
            if np.shape(x)[-1] != self.dim:
                raise ValueError(f"element of length {np.shape(x)[-1]} does not belong to {self!r}")

    def random_element(self, rng: np.random.Generator, size=None) -> np.ndarray:
        shape = (self.dim,) if size is None else (*np.atleast_1d(size), self.dim)
        return (rng.standard_normal(shape) + 1j * rng.standard_normal(shape)) / np.sqrt(2)

    def random_unit(self, rng: np.random.Generator, size=None) -> np.ndarray:
        x = self.random_element(rng, size)
        return x / np.asarray(self.norm(x))[..., None]

    @property
    def parts(self) -> tuple["TripleSpace", ...]:
        return (self,)

    @cached_property
    def basis_scale(self) -> np.ndarray:
        """Trace-form lengths of the basis vectors (the basis is orthogonal for that form)."""
        return np.ones(self.dim)


def _antisym_pairs(n):
    return [(i, j) for i in range(n) for j in range(i + 1, n)]


def _sym_pairs(n):
    return [(i, j) for i in range(n) for j in range(i, n)]


class _MatrixSpace(TripleSpace):
    """Spaces realised as subspaces of rows x cols complex matrices."""

    rows: int
    cols: int

    @cached_property
    def basis_matrices(self) -> np.ndarray:
        raise NotImplementedError

    @cached_property
    def _unvec(self) -> np.ndarray:
        flat = self.basis_matrices.reshape(self.dim, -1)
        return np.linalg.pinv(flat)

    @cached_property
    def basis_scale(self):
        return np.linalg.norm(self.basis_matrices, axis=(1, 2))

    @cached_property
    def _flat_basis(self) -> np.ndarray:
        return self.basis_matrices.reshape(self.dim, -1)

    def to_matrix(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=complex)
        return (x @ self._flat_basis).reshape(*x.shape[:-1], self.rows, self.cols)

    def from_matrix(self, M) -> np.ndarray:
        M = np.asarray(M, dtype=complex)
        flat = M.reshape(*M.shape[:-2], self.rows * self.cols)
        return flat @ self._unvec

    def triple(self, a, b, c):
        A, B, C = self.to_matrix(a), self.to_matrix(b), self.to_matrix(c)
        Bs = np.conj(np.swapaxes(B, -1, -2))
        return self.from_matrix((A @ Bs @ C + C @ Bs @ A) / 2)

    def norm(self, x):
        M = self.to_matrix(x)
        if M.ndim == 2:
            return spectral_norm(M)
        return np.linalg.norm(M, ord=2, axis=(-2, -1))


@dataclass(frozen=True)
class CartanI(_MatrixSpace):
    """Type I: all ``m x n`` complex matrices."""

    m: int
    n: int

    def __post_init__(self):
        if self.m < 1 or self.n < 1:
            raise ValueError("CartanI needs m, n >= 1")

    rows = property(lambda self: self.m)
    cols = property(lambda self: self.n)
    dim = property(lambda self: self.m * self.n)
    max_rank = property(lambda self: min(self.m, self.n))
    rank_at_least_two = property(lambda self: min(self.m, self.n) >= 2)

    @cached_property
    def basis_matrices(self):
        E = np.zeros((self.dim, self.m, self.n), dtype=complex)
        for k, (i, j) in enumerate(itertools.product(range(self.m), range(self.n))):
            E[k, i, j] = 1
        return E

    def config(self):
        return {"type": "cartan1", "rows": self.m, "cols": self.n}

    def frame(self, rng):
        U, V = random_unitary(self.m, rng), random_unitary(self.n, rng)
        return [self.from_matrix(np.outer(U[:, k], V[:, k].conj())) for k in range(self.max_rank)]

    # the canonical basis is the matrix units in row-major order
    def to_matrix(self, x):
        x = np.asarray(x, dtype=complex)
        return x.reshape(*x.shape[:-1], self.m, self.n)

    def from_matrix(self, M):
        M = np.asarray(M, dtype=complex)
        return M.reshape(*M.shape[:-2], self.m * self.n)

    def _random_tripotent(self, target_rank, rng):
        G = self.to_matrix(self.random_element(rng))
        U, _, Vh = np.linalg.svd(G)
        r = target_rank
        return self.from_matrix(U[:, :r] @ Vh[:r, :])


@dataclass(frozen=True)
class CartanII(_MatrixSpace):
    """Type II: antisymmetric ``n x n`` matrices."""

    n: int

    def __post_init__(self):
        if self.n < 2:
            raise ValueError("CartanII needs n >= 2 (CartanII(1) is the zero space)")

    rows = property(lambda self: self.n)
    cols = property(lambda self: self.n)
    dim = property(lambda self: self.n * (self.n - 1) // 2)
    max_rank = property(lambda self: self.n // 2)
    rank_at_least_two = property(lambda self: self.n >= 4)

    @cached_property
    def basis_matrices(self):
        pairs = _antisym_pairs(self.n)
        E = np.zeros((len(pairs), self.n, self.n), dtype=complex)
        for k, (i, j) in enumerate(pairs):
            E[k, i, j], E[k, j, i] = 1, -1
        return E

    def config(self):
        return {"type": "cartan2", "n": self.n}

    def _block(self, U, k):
        u, v = U[:, 2 * k], U[:, 2 * k + 1]
        return self.from_matrix(np.outer(u, v) - np.outer(v, u))

    def frame(self, rng):
        U = random_unitary(self.n, rng)
        return [self._block(U, k) for k in range(self.max_rank)]

    def _random_tripotent(self, target_rank, rng):
        U = random_unitary(self.n, rng)
        return sum((self._block(U, k) for k in range(target_rank)), self.zero())


@dataclass(frozen=True)
class CartanIII(_MatrixSpace):
    """Type III: symmetric ``n x n`` matrices."""

    n: int

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("CartanIII needs n >= 1")

    rows = property(lambda self: self.n)
    cols = property(lambda self: self.n)
    dim = property(lambda self: self.n * (self.n + 1) // 2)
    max_rank = property(lambda self: self.n)
    rank_at_least_two = property(lambda self: self.n >= 2)

    @cached_property
    def basis_matrices(self):
        pairs = _sym_pairs(self.n)
        E = np.zeros((len(pairs), self.n, self.n), dtype=complex)
        for k, (i, j) in enumerate(pairs):
            E[k, i, j] += 1
            E[k, j, i] += 1
        return E

    def config(self):
        return {"type": "cartan3", "n": self.n}

    def frame(self, rng):
        U = random_unitary(self.n, rng)
        return [self.from_matrix(np.outer(U[:, k], U[:, k])) for k in range(self.n)]

    def _random_tripotent(self, target_rank, rng):
        # U_r U_r^T is symmetric with singular values in {0, 1}
        U = random_unitary(self.n, rng)[:, :target_rank]
        return self.from_matrix(U @ U.T)


@dataclass(frozen=True)
class Spin(TripleSpace):
    """Type IV: the spin factor on C^n."""

    n: int

    def __post_init__(self):
        if self.n < 2:
            raise ValueError("Spin needs n >= 2")

    dim = property(lambda self: self.n)
    max_rank = property(lambda self: 2)
    rank_at_least_two = property(lambda self: True)

    @staticmethod
    def inner(x, y):
        return np.sum(np.asarray(x) * np.conj(y), axis=-1)

    def triple(self, a, b, c):
        a, b, c = (np.asarray(t, dtype=complex) for t in (a, b, c))
        ab = self.inner(a, b)[..., None]
        cb = self.inner(c, b)[..., None]
        ac = np.sum(a * c, axis=-1)[..., None]
        return ab * c + cb * a - ac * np.conj(b)

    def norm(self, x):
        x = np.asarray(x, dtype=complex)
        xx = np.real(self.inner(x, x))
        # <x,x>^2 - |<x,conj x>|^2 = 2 ||Im(conj(x_i) x_j)||_F^2 (Lagrange identity);
        # the direct difference cancels catastrophically near unitaries.
        M = np.imag(np.conj(x)[..., :, None] * x[..., None, :])
        gap = np.sqrt(2.0) * np.linalg.norm(M, axis=(-2, -1))
        out = np.sqrt(xx + gap)
        return float(out) if out.ndim == 0 else out

    def config(self):
        return {"type": "spin", "n": self.n}

    def _pair(self, rng):
        O = random_orthogonal(self.n, rng)
        return O[:, 0], O[:, 1]

    def frame(self, rng):
        a, b = self._pair(rng)
        lam, mu = np.exp(2j * np.pi * rng.random(2))
        return [lam * (a + 1j * b) / 2, mu * (a - 1j * b) / 2]

    def _random_tripotent(self, target_rank, rng):
        a, b = self._pair(rng)
        lam = np.exp(2j * np.pi * rng.random())
        if target_rank == 0:
            return self.zero()
        if target_rank == 1:
            return lam * (a + 1j * b) / 2
        return lam * a.astype(complex)


@dataclass(frozen=True)
class Sum(TripleSpace):
    """Finite l-infinity sum; product coordinatewise, norm the max over parts."""

    parts_: tuple

    def __init__(self, parts):
        parts = tuple(make_space(p) for p in parts)
        if not parts:
            raise ValueError("Sum needs at least one part")
        object.__setattr__(self, "parts_", parts)

    @property
    def parts(self):
        return self.parts_

    dim = property(lambda self: sum(p.dim for p in self.parts_))
    max_rank = property(lambda self: sum(p.max_rank for p in self.parts_))
    rank_at_least_two = property(lambda self: all(p.rank_at_least_two for p in self.parts_))

    @property
    def part_flags(self) -> tuple[bool, ...]:
        return tuple(p.rank_at_least_two for p in self.parts_)

    @cached_property
    def basis_scale(self):
        return np.concatenate([p.basis_scale for p in self.parts_])

    @cached_property
    def offsets(self) -> list[int]:
        return list(np.cumsum([0] + [p.dim for p in self.parts_]))

    def split(self, x):
        x = np.asarray(x)
        return [x[..., lo:hi] for lo, hi in zip(self.offsets[:-1], self.offsets[1:])]

    def embed(self, index: int, x) -> np.ndarray:
        x = np.asarray(x, dtype=complex)
        out = np.zeros((*x.shape[:-1], self.dim), dtype=complex)
        out[..., self.offsets[index] : self.offsets[index + 1]] = x
        return out

    def triple(self, a, b, c):
        return np.concatenate(
            [p.triple(*t) for p, *t in zip(self.parts_, self.split(a), self.split(b), self.split(c))],
            axis=-1,
        )

    def norm(self, x):
        norms = [np.asarray(p.norm(xp)) for p, xp in zip(self.parts_, self.split(x))]
        out = np.max(np.stack(norms), axis=0)
        return float(out) if out.ndim == 0 else out

    def config(self):
        return {"type": "sum", "parts": [p.config() for p in self.parts_]}

    def frame(self, rng):
        return [self.embed(i, f) for i, p in enumerate(self.parts_) for f in p.frame(rng)]

    def _random_tripotent(self, target_rank, rng):
        caps = [p.max_rank for p in self.parts_]
        split = [0] * len(caps)
        for _ in range(target_rank):
            open_ = [i for i, c in enumerate(caps) if split[i] < c]
            split[open_[rng.integers(len(open_))]] += 1
        return np.concatenate(
            [p._random_tripotent(r, rng) for p, r in zip(self.parts_, split)]
        )

    def __repr__(self):
        return f"Sum({list(self.parts_)!r})"


_TYPES = {
    "cartan1": lambda d: CartanI(int(d["rows"]), int(d["cols"])),
    "cartan2": lambda d: CartanII(int(d["n"])),
    "cartan3": lambda d: CartanIII(int(d["n"])),
    "spin": lambda d: Spin(int(d["n"])),
    "sum": lambda d: Sum(d["parts"]),
}


def make_space(descriptor) -> TripleSpace:
    """Build a space from a descriptor object or a JSON-style config dict."""
    if isinstance(descriptor, TripleSpace):
        return descriptor
    if isinstance(descriptor, dict):
        kind = descriptor.get("type")
        if kind not in _TYPES:
            raise ValueError(f"unknown space type {kind!r}")
        try:
            return _TYPES[kind](descriptor)
        except KeyError as exc:
            raise ValueError(f"space config missing field {exc}") from None
    raise TypeError(f"cannot build a space from {descriptor!r}")


# ---------------------------------------------------------------------------
# Operations


def triple(space: TripleSpace, a, b, c) -> np.ndarray:
    space.check(a, b, c)
    return space.triple(a, b, c)


def triple_norm(space: TripleSpace, x):
    space.check(x)
    return space.norm(x)


def box_operator(space: TripleSpace, a, b) -> np.ndarray:
    """Complex matrix of ``x -> {a,b,x}`` in the coordinates of ``space``."""
    space.check(a, b)
    a, b = np.asarray(a, dtype=complex), np.asarray(b, dtype=complex)
    cols = space.triple(a[None], b[None], space.basis)
    return cols.T


def box_operators(space: TripleSpace, A, B) -> np.ndarray:
    """Stack of box matrices for paired rows of ``A`` and ``B``."""
    A, B = np.atleast_2d(A), np.atleast_2d(B)
    out = space.triple(A[:, None, :], B[:, None, :], space.basis[None, :, :])
    return np.swapaxes(out, -1, -2)


def operator_norm(space: TripleSpace, A) -> float:
    """Spectral norm of a complex-linear operator on ``space`` given by its coordinate matrix.

    Measured in trace-orthonormal coordinates, where every ``a box a`` is
    self-adjoint; the canonical type III basis is orthogonal but not normalised.
    """
    d = space.basis_scale
    return spectral_norm(d[:, None] * np.asarray(A) / d[None, :])


def orthonormal_matrix(space: TripleSpace, A) -> np.ndarray:
    d = space.basis_scale
    return d[:, None] * np.asarray(A) / d[None, :]


def q_operator(space: TripleSpace, e) -> RealLinearOp:
    """The conjugate-linear map ``x -> {e,x,e}``."""
    space.check(e)
    e = np.asarray(e, dtype=complex)
    cols = space.triple(e[None], space.basis, e[None])
    return RealLinearOp.from_conjugate(cols.T)


def jordan_identity_residual(space: TripleSpace, a, b, x, y, z):
    """Triple norm of ``{a,b,{x,y,z}} - {{a,b,x},y,z} + {x,{b,a,y},z} - {x,y,{a,b,z}}``."""
    space.check(a, b, x, y, z)
    T = space.triple
    r = T(a, b, T(x, y, z)) - T(T(a, b, x), y, z) + T(x, T(b, a, y), z) - T(x, y, T(a, b, z))
    return space.norm(r)


def is_tripotent(space: TripleSpace, e, tol: Tolerance = DEFAULT_TOL) -> bool:
    space.check(e)
    r = space.norm(space.triple(e, e, e) - e)
    return bool(r <= tol.algebraic * (1 + space.norm(e)))


def is_orthogonal(space: TripleSpace, a, b, tol: Tolerance = DEFAULT_TOL) -> bool:
    """``a`` and ``b`` are orthogonal when ``a box b`` vanishes."""
    space.check(a, b)
    bound = tol.algebraic * (1 + space.norm(a) * space.norm(b))
    return operator_norm(space, box_operator(space, a, b)) <= bound


def orthogonality_witnesses(space: TripleSpace, a, b) -> dict:
    """Norms of ``a box b``, ``{a,a,b}``, ``{b,b,a}`` and ``b box a``; all vanish together."""
    return {
        "box_ab": operator_norm(space, box_operator(space, a, b)),
        "aab": space.norm(space.triple(a, a, b)),
        "bba": space.norm(space.triple(b, b, a)),
        "box_ba": operator_norm(space, box_operator(space, b, a)),
    }


def triple_leq(space: TripleSpace, u, e, tol: Tolerance = DEFAULT_TOL) -> bool:
    """``u <= e`` iff ``e - u`` is a tripotent orthogonal to ``u``."""
    for name, t in (("u", u), ("e", e)):
        if not is_tripotent(space, t, tol):
            raise ValueError(f"{name} is not a tripotent")
    d = np.asarray(e) - np.asarray(u)
    return is_tripotent(space, d, tol) and is_orthogonal(space, d, u, tol)


def random_tripotent(space: TripleSpace, target_rank: int, seed) -> np.ndarray:
    if not 0 <= target_rank <= space.max_rank:
        raise ValueError(f"rank {target_rank} infeasible in {space!r} (max {space.max_rank})")
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    e = space._random_tripotent(target_rank, rng)
    if not is_tripotent(space, e):
        raise RuntimeError("generated element failed the tripotent check")
    return e


@dataclass(frozen=True)
class PeirceDecomposition:
    tripotent: np.ndarray
    P2: RealLinearOp
    P1: RealLinearOp
    P0: RealLinearOp
    subspace_dims: tuple[int, int, int]

    @property
    def projections(self):
        return (self.P2, self.P1, self.P0)


def peirce(space: TripleSpace, e, tol: Tolerance = DEFAULT_TOL) -> PeirceDecomposition:
    """Peirce projections of a tripotent from ``Q(e)`` and ``e box e``."""
    if not is_tripotent(space, e, tol):
        raise ValueError("Peirce decomposition needs a tripotent")
    Q = q_operator(space, e)
    Q2 = Q @ Q
    E = RealLinearOp.from_complex(box_operator(space, e, e))
    I = RealLinearOp.identity(space.dim)
    P2 = Q2
    P1 = (E - Q2).scale(2.0)
    P0 = I - E.scale(2.0) + Q2
    # projections: rank equals trace
    dims = tuple(int(round(np.trace(P.complex_matrix).real)) for P in (P2, P1, P0))
    return PeirceDecomposition(np.asarray(e), P2, P1, P0, dims)


def box_spectrum(space: TripleSpace, a) -> np.ndarray:
    return np.linalg.eigvals(box_operator(space, a, a))
