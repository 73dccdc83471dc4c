"""The TKK Lie algebra ``L(V) = V + V_0 + conj(V)`` of a JB*-triple.

Elements are triples ``(x, h, y)``.  ``x`` and ``y`` are coordinate vectors
of ``V`` (``y`` is read in the conjugate space, so the scalar ``lam`` acts
on it as ``conj(lam)``), and ``h`` is a :class:`V0Element`: an operator on
``V`` together with a list of generator pairs ``(a, b)`` with
``h = sum a box b``.  The generators are witnesses used by the natural map;
equality of degree-zero parts is equality of operators.

For linear algebra on the whole of ``L(V)`` each element has a complex
coordinate vector ``[x, c, conj(y)]`` where ``c`` are coordinates of ``h``
against a fixed basis of ``V_0`` made of box operators of basis vectors.
In these coordinates ``ad z`` is complex-linear and the involution is
conjugate-linear.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property, lru_cache

import numpy as np
import scipy.linalg

from . import jordan
from .jordan import TripleSpace, box_operator, box_operators, make_space
from .numeric import (
    DEFAULT_TOL,
    RealLinearOp,
    Tolerance,
    cvector_from_json,
    cvector_to_json,
    rank,
    spectral_norm,
)
from .report import Check, Report


@dataclass(frozen=True)
class _V0Basis:
    pairs: tuple  # basis index pairs (i, j) spanning V_0 via e_i box e_j
    B: np.ndarray  # vectorised basis operators as columns, shape (d*d, g0)
    B_pinv: np.ndarray
    span_rank: int  # rank of all d*d basis box operators
    table: np.ndarray  # table[i, j] = coordinates of e_i box e_j, exact unit vectors on basis pairs


@lru_cache(maxsize=None)
def _v0_basis(space: TripleSpace) -> _V0Basis:
    d = space.dim
    I, J = np.meshgrid(np.arange(d), np.arange(d), indexing="ij")
    ops = box_operators(space, space.basis[I.ravel()], space.basis[J.ravel()])
    cols = ops.reshape(d * d, d * d).T
    r = rank(cols)
    _, _, piv = scipy.linalg.qr(cols, pivoting=True, mode="economic")
    chosen = sorted(piv[:r])
    pairs = tuple((int(I.ravel()[k]), int(J.ravel()[k])) for k in chosen)
    B = cols[:, chosen]
    B_pinv = np.linalg.pinv(B)
    table = (B_pinv @ cols).T.reshape(d, d, r)
    for k, (i, j) in enumerate(pairs):
        table[i, j] = 0
        table[i, j, k] = 1
    return _V0Basis(pairs, B, B_pinv, r, table)


def _clean_pairs(pairs):
    return tuple((a, b) for a, b in pairs if a.any() and b.any())


class V0Element:
    """An element of ``V_0``: operator plus generator witnesses."""

    __slots__ = ("space", "generators", "op")

    # Generator lists longer than this multiple of dim V_0 are re-expressed
    # against the basis; nested brackets otherwise grow them geometrically.
    COMPRESS_FACTOR = 2

    def __init__(self, space: TripleSpace, generators, op=None, compress: bool = True):
        self.space = space
        gens = _clean_pairs(
            (np.asarray(a, dtype=complex), np.asarray(b, dtype=complex)) for a, b in generators
        )
        if op is None:
            op = _ops_sum(space, gens)
        self.op = np.asarray(op, dtype=complex)
        basis = _v0_basis(space)
        if compress and len(gens) > max(4, self.COMPRESS_FACTOR * len(basis.pairs)):
            gens = _coords_to_generators(space, basis.B_pinv @ self.op.reshape(-1))
        self.generators = gens

    @classmethod
    def zero(cls, space: TripleSpace) -> "V0Element":
        return cls(space, (), np.zeros((space.dim, space.dim), dtype=complex))

    @property
    def real_op(self) -> RealLinearOp:
        return RealLinearOp.from_complex(self.op)

    def __call__(self, x):
        """Apply to a vector or to rows of a stack of vectors."""
        return np.asarray(x) @ self.op.T

    def generator_residual(self) -> float:
        return spectral_norm(self.op - _ops_sum(self.space, self.generators))

    def __add__(self, other):
        return V0Element(self.space, self.generators + other.generators, self.op + other.op)

    def __neg__(self):
        return V0Element(self.space, tuple((-a, b) for a, b in self.generators), -self.op)

    def __sub__(self, other):
        return self + (-other)

    def scale(self, lam: complex) -> "V0Element":
        return V0Element(self.space, tuple((lam * a, b) for a, b in self.generators), lam * self.op)

    def __rmul__(self, lam):
        return self.scale(lam)

    def commutator(self, other: "V0Element") -> "V0Element":
        """``[h, k] = hk - kh``, generators from ``[a box b, c box d] = {a,b,c} box d - c box {b,a,d}``."""
        op = self.op @ other.op - other.op @ self.op
        if not (self.generators and other.generators):
            return V0Element(self.space, (), op)
        A, B = (np.array(t) for t in zip(*self.generators))
        C, D = (np.array(t) for t in zip(*other.generators))
        p, q = len(A), len(C)
        A, B = np.repeat(A, q, axis=0), np.repeat(B, q, axis=0)
        C, D = np.tile(C, (p, 1)), np.tile(D, (p, 1))
        T = self.space.triple
        first, second = T(A, B, C), T(B, A, D)
        gens = list(zip(first, D)) + list(zip(-C, second))
        return V0Element(self.space, gens, op)

    def equals(self, other: "V0Element", tol: Tolerance = DEFAULT_TOL) -> bool:
        scale = max(spectral_norm(self.op), spectral_norm(other.op))
        return spectral_norm(self.op - other.op) <= tol.algebraic * (1 + scale)

    def __repr__(self):
        return f"V0Element({len(self.generators)} generators, |op|={spectral_norm(self.op):.3g})"


def _ops_sum(space, gens) -> np.ndarray:
    d = space.dim
    if not gens:
        return np.zeros((d, d), dtype=complex)
    A = np.array([a for a, _ in gens])
    B = np.array([b for _, b in gens])
    return box_operators(space, A, B).sum(axis=0)


def _coords_to_generators(space, c):
    basis = _v0_basis(space)
    E = space.basis
    return tuple((ck * E[i], E[j]) for ck, (i, j) in zip(c, basis.pairs) if ck != 0)


def box(space: TripleSpace, a, b) -> V0Element:
    """The box operator ``x -> {a,b,x}`` as an element of ``V_0``."""
    space.check(a, b)
    return V0Element(space, [(a, b)], box_operator(space, a, b))


def natural(h: V0Element) -> V0Element:
    """``(sum a_j box b_j)^natural = sum b_j box a_j``."""
    return V0Element(h.space, tuple((b, a) for a, b in h.generators))


@dataclass(frozen=True, eq=False)
class TKKElement:
    algebra: "TKKAlgebra"
    x: np.ndarray
    h: V0Element
    y: np.ndarray

    def __add__(self, other):
        return TKKElement(self.algebra, self.x + other.x, self.h + other.h, self.y + other.y)

    def __sub__(self, other):
        return TKKElement(self.algebra, self.x - other.x, self.h - other.h, self.y - other.y)

    def __neg__(self):
        return TKKElement(self.algebra, -self.x, -self.h, -self.y)

    def scale(self, lam: complex) -> "TKKElement":
        """Complex scalar action; on the degree-one part it acts through ``conj(lam)``."""
        return TKKElement(self.algebra, lam * self.x, self.h.scale(lam), np.conj(lam) * self.y)

    def __rmul__(self, lam):
        return self.scale(lam)

    def __repr__(self):
        return f"TKKElement(x={np.round(self.x, 4)}, h={self.h!r}, y={np.round(self.y, 4)})"


class TKKAlgebra:
    """``L(V)`` for a finite-dimensional JB*-triple ``V``."""

    grading = (-1, 0, 1)

    def __init__(self, base, norm_samples: int = 96, norm_seed: int = 0):
        self.base = make_space(base)
        self._basis = _v0_basis(self.base)
        self._norm_samples = norm_samples
        self._norm_seed = norm_seed

    # -- dimensions and coordinates ----------------------------------------
    @property
    def g0_dim(self) -> int:
        return len(self._basis.pairs)

    @property
    def d(self) -> int:
        return self.base.dim

    @property
    def dim(self) -> int:
        """Complex dimension of L(V)."""
        return 2 * self.d + self.g0_dim

    def slices(self):
        d, g = self.d, self.g0_dim
        return {-1: slice(0, d), 0: slice(d, d + g), 1: slice(d + g, 2 * d + g)}

    @cached_property
    def canonical(self) -> bool:
        """``[g_-1, g_1]`` spans ``g_0``: rank of brackets of basis vectors equals ``dim V_0``."""
        E = self.base.basis
        cols = [
            self.bracket(self.element(x=E[i]), self.element(y=E[j])).h.op.reshape(-1)
            for i in range(self.d)
            for j in range(self.d)
        ]
        return rank(np.array(cols).T) == self.g0_dim

    def v0_coords(self, h: V0Element) -> np.ndarray:
        """Coordinates of ``h`` read off its generators (exact on basis generators)."""
        if not h.generators:
            return np.zeros(self.g0_dim, dtype=complex)
        A = np.array([a for a, _ in h.generators])
        B = np.array([b for _, b in h.generators])
        return np.einsum("ni,nj,ijk->k", A, np.conj(B), self._basis.table)

    def v0_membership_residual(self, h: V0Element) -> float:
        v = h.op.reshape(-1)
        return float(np.linalg.norm(v - self._basis.B @ (self._basis.B_pinv @ v)))

    def v0_from_coords(self, c) -> V0Element:
        c = np.asarray(c, dtype=complex)
        op = (self._basis.B @ c).reshape(self.d, self.d)
        return V0Element(self.base, _coords_to_generators(self.base, c), op)

    def to_vector(self, z: TKKElement) -> np.ndarray:
        return np.concatenate([z.x, self.v0_coords(z.h), np.conj(z.y)])

    def from_vector(self, v) -> TKKElement:
        v = np.asarray(v, dtype=complex)
        s = self.slices()
        return TKKElement(self, v[s[-1]].copy(), self.v0_from_coords(v[s[0]]), np.conj(v[s[1]]))

    def to_real(self, z: TKKElement) -> np.ndarray:
        v = self.to_vector(z)
        return np.concatenate([v.real, v.imag])

    def from_real(self, r) -> TKKElement:
        n = self.dim
        return self.from_vector(np.asarray(r[:n]) + 1j * np.asarray(r[n:]))

    # -- construction ------------------------------------------------------
    def element(self, x=None, h=None, y=None) -> TKKElement:
        x = self.base.zero() if x is None else np.asarray(x, dtype=complex)
        y = self.base.zero() if y is None else np.asarray(y, dtype=complex)
        h = V0Element.zero(self.base) if h is None else h
        self.base.check(x, y)
        return TKKElement(self, x, h, y)

    def zero(self) -> TKKElement:
        return self.element()

    def basis_elements(self) -> list[TKKElement]:
        """Complex basis of L(V) matching the coordinate vector layout."""
        return [self.from_vector(e) for e in np.eye(self.dim, dtype=complex)]

    def real_basis_elements(self) -> list[TKKElement]:
        n = self.dim
        return [self.from_real(e) for e in np.eye(2 * n)]

    def random_element(self, rng: np.random.Generator, scale: float = 1.0) -> TKKElement:
        g = self.g0_dim
        c = (rng.standard_normal(g) + 1j * rng.standard_normal(g)) / np.sqrt(2)
        return TKKElement(
            self,
            scale * self.base.random_element(rng),
            self.v0_from_coords(scale * c),
            scale * self.base.random_element(rng),
        )

    def same(self, other: "TKKAlgebra") -> bool:
        return self.base == other.base

    # -- Lie structure -----------------------------------------------------
    def bracket(self, z: TKKElement, w: TKKElement) -> TKKElement:
        """``[(x,h,y),(u,k,v)] = (h(u) - k(x), [h,k] + x box v - u box y, k#(y) - h#(v))``."""
        if not (z.algebra.same(self) and w.algebra.same(self)):
            raise ValueError("elements belong to a different algebra")
        x, h, y = z.x, z.h, z.y
        u, k, v = w.x, w.h, w.y
        middle = h.commutator(k) + box(self.base, x, v) - box(self.base, u, y)
        return TKKElement(self, h(u) - k(x), middle, natural(k)(y) - natural(h)(v))

    def theta(self, z: TKKElement) -> TKKElement:
        """The involution ``(x, h, y) -> (y, -h#, x)``."""
        return TKKElement(self, z.y.copy(), -natural(z.h), z.x.copy())

    @cached_property
    def norm_sample_set(self) -> np.ndarray:
        """Fixed seeded unit vectors of ``V`` on which operator norms on ``V_0`` are estimated.

        Complete tripotents (the extreme points of the unit ball) dominate the
        set; normalised basis vectors guarantee a nonzero estimate for every
        nonzero operator.
        """
        V = self.base
        rng = np.random.default_rng(self._norm_seed)
        rows = [e / V.norm(e) for e in V.basis]
        n_rest = max(self._norm_samples - len(rows), 0)
        for k in range(n_rest):
            kind = k % 3
            if kind == 0:
                frame = V.frame(rng)
                rows.append(sum(frame))
            elif kind == 1:
                rows.append(jordan.random_tripotent(V, int(rng.integers(1, V.max_rank + 1)), rng))
            else:
                rows.append(V.random_unit(rng))
        S = np.array(rows, dtype=complex)
        return S / np.asarray(V.norm(S))[:, None]

    def v0_norm(self, h: V0Element, samples=None) -> float:
        """Lower-bound estimate of the operator norm of ``h`` on ``(V, ||.||)``."""
        if not h.op.any():
            return 0.0
        S = self.norm_sample_set if samples is None else samples
        return float(np.max(self.base.norm(h(S))))

    def _vnorm(self, x) -> float:
        return float(self.base.norm(x)) if x.any() else 0.0

    def norm(self, z: TKKElement) -> float:
        return self._vnorm(z.x) + self.v0_norm(z.h) + self._vnorm(z.y)

    def real_indices(self, j: int) -> np.ndarray:
        """Positions of degree ``j`` inside the real coordinates of :meth:`to_real`."""
        s = self.slices()[j]
        idx = np.arange(s.start, s.stop)
        return np.concatenate([idx, idx + self.dim])

    def real_matrix(self, f, codomain: "TKKAlgebra | None" = None) -> np.ndarray:
        """Real matrix of a real-linear map ``f`` from this algebra to ``codomain``."""
        target = self if codomain is None else codomain
        cols = [target.to_real(f(self.from_real(e))) for e in np.eye(2 * self.dim)]
        return np.array(cols).T

    @cached_property
    def theta_matrix(self) -> np.ndarray:
        return self.real_matrix(self.theta)

    def ad(self, z: TKKElement) -> RealLinearOp:
        """Matrix of ``w -> [z, w]`` in the coordinates of :meth:`to_vector`."""
        cols = [self.to_vector(self.bracket(z, e)) for e in self.basis_elements()]
        return RealLinearOp.from_complex(np.array(cols).T)

    def ad_matrix(self, z: TKKElement) -> np.ndarray:
        return self.ad(z).complex_matrix


def build_tkk(space, **kwargs) -> TKKAlgebra:
    return TKKAlgebra(space, **kwargs)


def bracket(alg: TKKAlgebra, z, w) -> TKKElement:
    return alg.bracket(z, w)


def theta(alg: TKKAlgebra, z) -> TKKElement:
    return alg.theta(z)


def tkk_norm(alg: TKKAlgebra, z) -> float:
    return alg.norm(z)


def v0_norm(alg: TKKAlgebra, h: V0Element) -> float:
    return alg.v0_norm(h)


def ad(alg: TKKAlgebra, z) -> RealLinearOp:
    return alg.ad(z)


def jacobi_residual(alg: TKKAlgebra, z1, z2, z3) -> float:
    b = alg.bracket
    return alg.norm(b(b(z1, z2), z3) + b(b(z2, z3), z1) + b(b(z3, z1), z2))


def degree_leakage(alg: TKKAlgebra, M: np.ndarray, grading: str = "graded") -> float:
    """Largest block of ``M`` (on L(V) coordinates) that breaks the given grading."""
    s = alg.slices()
    worst = 0.0
    for i in (-1, 0, 1):
        for j in (-1, 0, 1):
            target = j if grading == "graded" else -j
            if i != target:
                worst = max(worst, spectral_norm(M[s[i], s[j]]))
    return worst


def lie_triple(alg: TKKAlgebra, a, b, c) -> np.ndarray:
    """``[[a, theta b], c]`` for ``a, b, c`` in ``V`` read at degree -1; returns the degree -1 part."""
    e = alg.element
    return alg.bracket(alg.bracket(e(x=a), alg.theta(e(x=b))), e(x=c)).x


def condition_a_residual(alg: TKKAlgebra, a) -> float:
    """``| ||[[a, theta a], a]|| - 1 |`` for ``a`` at degree -1 (caller normalises)."""
    a = np.asarray(a, dtype=complex)
    if not np.any(a):
        raise ValueError("condition (a) needs a nonzero element")
    z = alg.element(x=a)
    return abs(alg.norm(alg.bracket(alg.bracket(z, alg.theta(z)), z)) - 1.0)


def condition_c_singularity(alg: TKKAlgebra, a) -> float:
    """Smallest singular value of ``I - ad[a, theta a]`` restricted to degree -1.

    Computed in trace-orthonormal coordinates of ``V``; invertibility does not
    depend on that choice, but the size of the gap does.
    """
    a = np.asarray(a, dtype=complex)
    if not np.any(a):
        raise ValueError("condition (c) needs a nonzero element")
    z = alg.element(x=a)
    M = alg.ad_matrix(alg.bracket(z, alg.theta(z)))
    s = alg.slices()[-1]
    block = jordan.orthonormal_matrix(alg.base, np.eye(alg.d) - M[s, s])
    return float(np.linalg.svd(block, compute_uv=False)[-1])


def nondegeneracy_witness(alg: TKKAlgebra, a: TKKElement) -> tuple[float, float]:
    """``(||(ad a)^2||, ||a||)``: the first vanishing forces the second to vanish."""
    A = alg.ad_matrix(a)
    return spectral_norm(A @ A), alg.norm(a)


def structural_checks(alg: TKKAlgebra, samples: int = 100, seed=0, tol: Tolerance = DEFAULT_TOL) -> Report:
    """Residuals of the Lie-algebraic structure of ``L(V)`` on seeded samples."""
    rng = np.random.default_rng(seed)
    V = alg.base
    rep = Report()
    graded = rep.add(Check("gradedness", "[g_m, g_n] in g_(m+n)", 0.0))
    triple_law = rep.add(Check("triple_vs_bracket", "{a,b,c} = [[a, theta b], c]", tol.algebraic))
    auto = rep.add(Check("theta_automorphism", "theta[z,w] = [theta z, theta w]", tol.algebraic))
    invol = rep.add(Check("theta_involution", "theta^2 = id", tol.algebraic))
    jac = rep.add(Check("jacobi", "Jacobi identity", tol.algebraic))
    skew = rep.add(Check("alternating", "[z,z] = 0", tol.algebraic))
    const = rep.add(Check("norm_bound_constant", "||[X,Y]|| <= C ||X|| ||Y||", np.inf))
    canon = rep.add(Check("canonical", "[g_-1, g_1] = g_0", 0.0))
    canon.flag(alg.canonical)

    pure = {
        -1: lambda: alg.element(x=V.random_element(rng)),
        0: lambda: alg.element(h=alg.random_element(rng).h),
        1: lambda: alg.element(y=V.random_element(rng)),
    }
    s = alg.slices()
    C = 0.0
    for _ in range(samples):
        for i in (-1, 0, 1):
            for j in (-1, 0, 1):
                v = alg.to_vector(alg.bracket(pure[i](), pure[j]()))
                off = [np.max(np.abs(v[s[k]]), initial=0.0) for k in (-1, 0, 1) if k != i + j]
                graded.add(max(off))
        a, b, c = V.random_element(rng, 3)
        triple_law.add(V.norm(V.triple(a, b, c) - lie_triple(alg, a, b, c)))
        z, w, u = (alg.random_element(rng) for _ in range(3))
        auto.add(alg.norm(alg.theta(alg.bracket(z, w)) - alg.bracket(alg.theta(z), alg.theta(w))))
        invol.add(alg.norm(alg.theta(alg.theta(z)) - z))
        jac.add(jacobi_residual(alg, z, w, u))
        skew.add(alg.norm(alg.bracket(z, z)))
        C = max(C, alg.norm(alg.bracket(z, w)) / (alg.norm(z) * alg.norm(w)))
        const.add(C)
    const.notes["estimated_C"] = C
    return rep


def element_to_json(z: TKKElement) -> dict:
    return {
        "x": cvector_to_json(z.x),
        "h": {"generators": [[cvector_to_json(a), cvector_to_json(b)] for a, b in z.h.generators]},
        "y": cvector_to_json(z.y),
    }


def element_from_json(alg: TKKAlgebra, data: dict) -> TKKElement:
    V = alg.base
    try:
        x = cvector_from_json(data.get("x", [0.0] * V.dim))
        y = cvector_from_json(data.get("y", [0.0] * V.dim))
        gens = [(cvector_from_json(a), cvector_from_json(b)) for a, b in data.get("h", {}).get("generators", [])]
    except (TypeError, AttributeError) as exc:
        raise ValueError(f"malformed element encoding: {exc}") from None
    V.check(x, y, *(g for pair in gens for g in pair))
    return alg.element(x=x, h=V0Element(V, gens), y=y)
