"""Transport of triple isomorphisms to graded maps of TKK algebras.

A triple isomorphism ``phi: V -> W`` induces ``F(phi)(x, h, y) =
(phi x, phi h phi^-1, phi y)`` on ``L(V) -> L(W)``; the middle block is
computed from generators as ``sum phi(a) box phi(b)``.  A
:class:`GradedMap` is an arbitrary real-linear map between TKK algebras,
stored as a real matrix on the coordinates of
:meth:`TKKAlgebra.to_real`, with a declared grading.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from .algebra import TKKAlgebra, TKKElement, V0Element, build_tkk
from .jordan import CartanI, CartanII, CartanIII, Spin, Sum, TripleSpace, make_space
from .numeric import (
    COMPLEX_LINEAR,
    CONJUGATE_LINEAR,
    DEFAULT_TOL,
    GENERAL,
    RealLinearOp,
    Tolerance,
    compose_kind,
    infer_kind,
    k_matrix,
    random_orthogonal,
    random_unitary,
    rank,
    real_form,
    spectral_norm,
    to_complex,
    to_real,
)
from .report import Check, Report

GRADED = "graded"
NEGATIVELY_GRADED = "negatively_graded"

# "real_linear" is the external name of the general kind
_KIND_ALIASES = {"real_linear": GENERAL}


class InconsistencyError(ValueError):
    """A graded map does not arise from the triple map it restricts to."""


def _external_kind(kind: str) -> str:
    return "real_linear" if kind == GENERAL else kind


# ---------------------------------------------------------------------------
# Triple maps


@dataclass(eq=False)
class TripleMap:
    """A real-linear map between triple spaces, verified on demand."""

    domain: TripleSpace
    codomain: TripleSpace
    op: RealLinearOp
    verified: bool = field(default=False, init=False)
    residuals: dict = field(default_factory=dict, init=False)

    def __post_init__(self):
        self.domain = make_space(self.domain)
        self.codomain = make_space(self.codomain)
        if (self.op.n, self.op.m) != (self.domain.dim, self.codomain.dim):
            raise ValueError(
                f"operator {self.op.n}->{self.op.m} does not fit {self.domain!r} -> {self.codomain!r}"
            )

    @property
    def kind(self) -> str:
        return _external_kind(self.op.kind)

    def __call__(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=complex)
        if x.ndim == 1:
            return self.op(x)
        # contiguous rows keep batched products on the same code path as unmapped input
        return np.ascontiguousarray(self.op(x.T).T)

    def verify(self, samples: int = 50, seed=0, tol: Tolerance = DEFAULT_TOL) -> Report:
        """Bijectivity plus product preservation on every real basis triple and on random triples."""
        rep = Report()
        bij = rep.add(Check("bijective", "phi is a linear bijection", 0.0))
        bij.flag(self.domain.dim == self.codomain.dim and self.op.is_bijective(tol))
        prod = rep.add(Check("preserves_triple_product", "phi{a,b,c} = {phi a, phi b, phi c}", tol.algebraic))
        V = self.domain
        E = np.concatenate([V.basis, 1j * V.basis])
        n = len(E)
        ia, ib, ic = (g.ravel() for g in np.meshgrid(np.arange(n), np.arange(n), np.arange(n), indexing="ij"))
        prod.add(self.product_residual(E[ia], E[ib], E[ic]), len(ia))
        if samples:
            rng = np.random.default_rng(seed)
            a, b, c = (V.random_element(rng, samples) for _ in range(3))
            prod.add(self.product_residual(a, b, c), samples)
        self.residuals = {c.name: c.max_residual for c in rep.checks}
        self.verified = rep.passed
        return rep

    def product_residual(self, a, b, c) -> np.ndarray:
        W = self.codomain
        lhs = self(self.domain.triple(a, b, c))
        rhs = W.triple(self(a), self(b), self(c))
        return np.asarray(W.norm(lhs - rhs)) / (1.0 + np.asarray(W.norm(rhs)))

    def require_verified(self, tol: Tolerance = DEFAULT_TOL) -> "TripleMap":
        if not self.verified:
            rep = self.verify(tol=tol)
            if not rep.passed:
                failing = ", ".join(str(c) for c in rep.checks if not c.passed)
                raise ValueError(f"not a triple isomorphism: {failing}")
        return self

    def inverse(self) -> "TripleMap":
        return TripleMap(self.codomain, self.domain, self.op.inverse())

    def after(self, other: "TripleMap") -> "TripleMap":
        """``self o other``."""
        if other.codomain != self.domain:
            raise ValueError(f"cannot compose: {other.codomain!r} is not {self.domain!r}")
        return TripleMap(other.domain, self.codomain, self.op @ other.op)

    def to_json(self) -> dict:
        return {
            "kind": self.kind,
            "real_matrix": self.op.real_matrix.tolist(),
            "domain": self.domain.config(),
            "codomain": self.codomain.config(),
        }

    @classmethod
    def from_json(cls, data: dict) -> "TripleMap":
        # any "verified" flag in the file is ignored
        try:
            kind = _KIND_ALIASES.get(data["kind"], data["kind"])
            op = RealLinearOp(np.asarray(data["real_matrix"], dtype=float), kind)
            return cls(make_space(data["domain"]), make_space(data["codomain"]), op)
        except KeyError as exc:
            raise ValueError(f"morphism file missing field {exc}") from None


def identity_map(space) -> TripleMap:
    space = make_space(space)
    return TripleMap(space, space, RealLinearOp.identity(space.dim))


def linear_map(domain, codomain, A) -> TripleMap:
    """Complex-linear map given by its coordinate matrix."""
    return TripleMap(domain, codomain, RealLinearOp.from_complex(A))


def scalar_map(space, lam: complex) -> TripleMap:
    space = make_space(space)
    return linear_map(space, space, lam * np.eye(space.dim))


def _matrix_action(space, f) -> np.ndarray:
    """Coordinate matrix of ``X -> f(X)`` on a matrix space."""
    return np.array([space.from_matrix(f(M)) for M in space.basis_matrices]).T


def transpose_map(space) -> TripleMap:
    """``x -> x^t``; the codomain of type I ``m x n`` is type I ``n x m``."""
    space = make_space(space)
    if isinstance(space, Sum):
        parts = [transpose_map(p) for p in space.parts]
        return _direct_sum(parts)
    if isinstance(space, CartanI):
        target = CartanI(space.n, space.m)
        A = np.array([target.from_matrix(M.T) for M in space.basis_matrices]).T
        return linear_map(space, target, A)
    if isinstance(space, (CartanII, CartanIII)):
        return linear_map(space, space, _matrix_action(space, lambda M: M.T))
    raise ValueError(f"transpose is not defined on {space!r}")


def conjugation_map(space) -> TripleMap:
    """Coordinatewise conjugation; every canonical basis used here is real."""
    space = make_space(space)
    return TripleMap(space, space, RealLinearOp.conjugation(space.dim))


def random_automorphism(space, rng: np.random.Generator) -> TripleMap:
    """A random complex-linear triple automorphism.

    Type I ``x -> U x V``, types II/III ``x -> U x U^t``, spin ``x -> lam O x``
    with ``O`` real orthogonal; sums act partwise.
    """
    space = make_space(space)
    if isinstance(space, Sum):
        return _direct_sum([random_automorphism(p, rng) for p in space.parts])
    if isinstance(space, CartanI):
        U, V = random_unitary(space.m, rng), random_unitary(space.n, rng)
        return linear_map(space, space, _matrix_action(space, lambda M: U @ M @ V))
    if isinstance(space, (CartanII, CartanIII)):
        U = random_unitary(space.n, rng)
        return linear_map(space, space, _matrix_action(space, lambda M: U @ M @ U.T))
    if isinstance(space, Spin):
        lam = np.exp(2j * np.pi * rng.random())
        return linear_map(space, space, lam * random_orthogonal(space.n, rng))
    raise ValueError(f"no automorphisms for {space!r}")


def mixed_map(space, conjugate_parts) -> TripleMap:
    """On a sum: identity on some parts and conjugation on the others (real-linear)."""
    space = make_space(space)
    if not isinstance(space, Sum):
        raise ValueError("mixed maps need a sum of factors")
    return _direct_sum(
        [conjugation_map(p) if i in set(conjugate_parts) else identity_map(p) for i, p in enumerate(space.parts)]
    )


def _direct_sum(maps: list[TripleMap]) -> TripleMap:
    """Block-diagonal map between the sums of domains and codomains."""
    dom, cod = Sum([m.domain for m in maps]), Sum([m.codomain for m in maps])
    n, m = dom.dim, cod.dim
    R = np.zeros((2 * m, 2 * n))
    for k, f in enumerate(maps):
        i0, i1 = dom.offsets[k], dom.offsets[k + 1]
        o0, o1 = cod.offsets[k], cod.offsets[k + 1]
        Rk = f.op.real_matrix
        a, b = f.op.n, f.op.m
        rows = np.r_[o0:o1, m + o0 : m + o1]
        cols = np.r_[i0:i1, n + i0 : n + i1]
        R[np.ix_(rows, cols)] = Rk
        assert Rk.shape == (2 * b, 2 * a)
    kinds = {f.op.kind for f in maps}
    kind = kinds.pop() if len(kinds) == 1 else GENERAL
    return TripleMap(dom, cod, RealLinearOp(R, kind))


# ---------------------------------------------------------------------------
# Graded maps


@dataclass(frozen=True, eq=False)
class GradedMap:
    domain: TKKAlgebra
    codomain: TKKAlgebra
    matrix: np.ndarray
    grading: str = GRADED
    kind: str = GENERAL

    def __post_init__(self):
        M = np.asarray(self.matrix, dtype=float)
        if M.shape != (2 * self.codomain.dim, 2 * self.domain.dim):
            raise ValueError(f"matrix shape {M.shape} does not fit the algebras")
        if self.grading not in (GRADED, NEGATIVELY_GRADED):
            raise ValueError(f"unknown grading {self.grading!r}")
        object.__setattr__(self, "matrix", M)
        object.__setattr__(self, "kind", _KIND_ALIASES.get(self.kind, self.kind))
        RealLinearOp(M, self.kind)  # validates kind

    @cached_property
    def _blocks(self):
        A, B = self.domain, self.codomain
        return [
            (B.real_indices(t), [(A.real_indices(j), self.matrix[np.ix_(B.real_indices(t), A.real_indices(j))]) for j in (-1, 0, 1)])
            for t in (-1, 0, 1)
        ]

    @cached_property
    def _is_identity(self) -> bool:
        return self.domain.same(self.codomain) and np.array_equal(self.matrix, np.eye(len(self.matrix)))

    def __call__(self, z: TKKElement) -> TKKElement:
        if self._is_identity:
            return z
        # blockwise, so a zero degree contributes exact zeros
        r = self.domain.to_real(z)
        out = np.empty(2 * self.codomain.dim)
        for rows, blocks in self._blocks:
            out[rows] = sum(M @ r[cols] for cols, M in blocks)
        return self.codomain.from_real(out)

    def target_degree(self, j: int) -> int:
        return j if self.grading == GRADED else -j

    def block(self, j: int) -> RealLinearOp:
        """The block from degree ``j`` to its target degree, on real coordinates of ``V``.

        Degree one is stored through ``conj(y)``; the block is converted back
        to act on ``y`` itself.
        """
        t = self.target_degree(j)
        R = self.matrix[np.ix_(self.codomain.real_indices(t), self.domain.real_indices(j))]
        if j == 1:
            R = R @ k_matrix(R.shape[1] // 2)
        if t == 1:
            R = k_matrix(R.shape[0] // 2) @ R
        return RealLinearOp(R, infer_kind(R))

    def leakage(self, grading: str | None = None) -> float:
        """Largest off-grading block, in spectral norm."""
        grading = grading or self.grading
        worst = 0.0
        for j in (-1, 0, 1):
            for i in (-1, 0, 1):
                t = j if grading == GRADED else -j
                if i != t:
                    R = self.matrix[np.ix_(self.codomain.real_indices(i), self.domain.real_indices(j))]
                    worst = max(worst, spectral_norm(R))
        return worst

    def after(self, other: "GradedMap") -> "GradedMap":
        """``self o other``."""
        if not other.codomain.same(self.domain):
            raise ValueError("graded maps are not composable")
        grading = GRADED if self.grading == other.grading else NEGATIVELY_GRADED
        return GradedMap(other.domain, self.codomain, self.matrix @ other.matrix, grading, compose_kind(self.kind, other.kind))

    def scale(self, c: float) -> "GradedMap":
        return GradedMap(self.domain, self.codomain, c * self.matrix, self.grading, self.kind)

    def perturb_block(self, j: int, eps: float, rng: np.random.Generator) -> "GradedMap":
        """Add noise of spectral size ``eps`` to the block leaving degree ``j``."""
        rows = self.codomain.real_indices(self.target_degree(j))
        cols = self.domain.real_indices(j)
        N = rng.standard_normal((len(rows), len(cols)))
        M = self.matrix.copy()
        M[np.ix_(rows, cols)] += eps * N / spectral_norm(N)
        return GradedMap(self.domain, self.codomain, M, self.grading, GENERAL)

    def rank(self, tol: Tolerance = DEFAULT_TOL) -> int:
        return rank(self.matrix, tol)


def identity_graded(alg: TKKAlgebra) -> GradedMap:
    return GradedMap(alg, alg, np.eye(2 * alg.dim), GRADED, COMPLEX_LINEAR)


def theta_map(alg: TKKAlgebra) -> GradedMap:
    return GradedMap(alg, alg, alg.theta_matrix, NEGATIVELY_GRADED, CONJUGATE_LINEAR)


def f_object(space) -> TKKAlgebra:
    return build_tkk(space)


def _transport_element(phi: TripleMap, target: TKKAlgebra, z: TKKElement) -> TKKElement:
    gens = [(phi(a), phi(b)) for a, b in z.h.generators]
    return TKKElement(target, phi(z.x), V0Element(target.base, gens), phi(z.y))


def f_morphism(
    phi: TripleMap,
    domain: TKKAlgebra | None = None,
    codomain: TKKAlgebra | None = None,
    tol: Tolerance = DEFAULT_TOL,
) -> GradedMap:
    """``F(phi)``; the middle block is cross-checked against ``phi o h o phi^-1``."""
    phi.require_verified(tol)
    if not phi.op.is_bijective(tol):
        raise ValueError("phi is not bijective")
    domain = domain or build_tkk(phi.domain)
    codomain = codomain or build_tkk(phi.codomain)
    if domain.base != phi.domain or codomain.base != phi.codomain:
        raise ValueError("algebras do not match the map's spaces")
    M = domain.real_matrix(lambda z: _transport_element(phi, codomain, z), codomain)
    T = GradedMap(domain, codomain, M, GRADED, phi.op.kind)
    r = conjugation_residual(T, phi)
    if r > tol.algebraic:
        raise InconsistencyError(f"middle block differs from phi h phi^-1 by {r:.3e}")
    return T


def conjugation_residual(T: GradedMap, phi: TripleMap) -> float:
    """Max over a basis of ``V_0`` of ``||T_0 h - phi h phi^-1||`` on real matrices."""
    R = phi.op.real_matrix
    R_inv = np.linalg.inv(R)
    worst = 0.0
    for e in np.eye(T.domain.g0_dim):
        for c in (e, 1j * e):
            h = T.domain.v0_from_coords(c)
            image = T(T.domain.element(h=h)).h
            direct = R @ h.real_op.real_matrix @ R_inv
            worst = max(worst, spectral_norm(image.real_op.real_matrix - direct) / (1 + spectral_norm(direct)))
    return worst


def verify_graded_iso(
    T: GradedMap, samples: int = 50, seed=0, tol: Tolerance = DEFAULT_TOL, grading: str | None = None
) -> Report:
    """Bracket preservation, commuting with the involutions, grading and bijectivity."""
    grading = grading or T.grading
    rng = np.random.default_rng(seed)
    A, B = T.domain, T.codomain
    rep = Report()
    br = rep.add(Check("bracket_preservation", "T[z,w] = [Tz,Tw]", tol.algebraic))
    for _ in range(samples):
        z, w = A.random_element(rng), A.random_element(rng)
        br.add(B.norm(T(A.bracket(z, w)) - B.bracket(T(z), T(w))))
    inv = rep.add(Check("involution_commuting", "theta' T = T theta", tol.algebraic))
    inv.add(spectral_norm(B.theta_matrix @ T.matrix - T.matrix @ A.theta_matrix), 2 * A.dim)
    gr = rep.add(Check(f"{grading}", f"T is {grading.replace('_', ' ')}", tol.algebraic))
    gr.add(T.leakage(grading), 9)
    bij = rep.add(Check("bijective", "T is a linear bijection", 0.0))
    bij.flag(A.dim == B.dim and T.rank(tol) == 2 * A.dim)
    return rep


def _norm_with_samples(alg: TKKAlgebra, z: TKKElement, S) -> float:
    V = alg.base
    return float(V.norm(z.x) + alg.v0_norm(z.h, S) + V.norm(z.y))


def isometry_residual(T: GradedMap, samples: int = 50, seed=0) -> float:
    """Max of ``| ||Tz|| - ||z|| |`` over random ``z``.

    Degree-zero norms on the codomain are taken over the domain's sample set
    pushed through the degree -1 block and renormalised, so the comparison is
    exact whenever that block is isometric.
    """
    if T.grading != GRADED:
        raise ValueError("isometry transport needs a graded map")
    A, B = T.domain, T.codomain
    S = A.norm_sample_set
    if T._is_identity:
        S_out = S
    else:
        image = T.block(-1)(S.T).T
        norms = np.asarray(B.base.norm(image))
        if np.any(norms == 0):
            return float("inf")
        S_out = image / norms[:, None]
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(samples):
        z = A.random_element(rng)
        worst = max(worst, abs(_norm_with_samples(B, T(z), S_out) - _norm_with_samples(A, z, S)))
    return worst


def reconstruction_residual(T: GradedMap, F: GradedMap) -> float:
    """Max over real basis elements of ``||T z - F z||``."""
    B = T.codomain
    D = T.matrix - F.matrix
    return max(B.norm(B.from_real(col)) for col in D.T)


def recover_triple_map(T: GradedMap, tol: Tolerance = DEFAULT_TOL) -> TripleMap:
    """``phi = T`` restricted to degree -1, with ``T = F(phi)`` checked."""
    if T.grading != GRADED:
        raise ValueError("recovery needs a graded map")
    op = T.block(-1)
    phi = TripleMap(T.domain.base, T.codomain.base, op)
    rep = phi.verify(tol=tol)
    if not rep.passed:
        raise InconsistencyError(f"degree -1 block is not a triple isomorphism: {rep['preserves_triple_product']}")
    F = f_morphism(phi, T.domain, T.codomain, tol)
    r = reconstruction_residual(T, F)
    phi.residuals["reconstruction"] = r
    if r > tol.algebraic:
        raise InconsistencyError(f"T differs from F(phi) by {r:.3e}")
    return phi


def functor_laws(phi: TripleMap, psi: TripleMap, tol: Tolerance = DEFAULT_TOL) -> Report:
    """Residuals of ``F(psi o phi) = F psi o F phi`` and ``F id = id``."""
    if phi.codomain != psi.domain:
        raise ValueError("maps are not composable")
    A, B, C = build_tkk(phi.domain), build_tkk(phi.codomain), build_tkk(psi.codomain)
    rep = Report()
    comp = rep.add(Check("composition", "F(psi o phi) = F(psi) o F(phi)", tol.algebraic))
    lhs = f_morphism(psi.after(phi), A, C, tol)
    rhs = f_morphism(psi, B, C, tol).after(f_morphism(phi, A, B, tol))
    comp.add(spectral_norm(lhs.matrix - rhs.matrix), 2 * A.dim)
    ident = rep.add(Check("identity", "F(id) = id", 0.0))
    for alg in (A, B):
        F_id = f_morphism(identity_map(alg.base), alg, alg, tol)
        ident.add(float(np.max(np.abs(F_id.matrix - np.eye(2 * alg.dim)))), 2 * alg.dim)
    return rep


def conjugate_variant_check(T: GradedMap, samples: int = 50, seed=0, tol: Tolerance = DEFAULT_TOL) -> Report:
    """For a conjugate-linear graded ``T``: degree -1 preserves products and ``T`` is isometric."""
    if T.kind != CONJUGATE_LINEAR:
        raise ValueError(f"conjugate variant needs a conjugate-linear map, got {T.kind}")
    if T.grading != GRADED:
        raise ValueError("conjugate variant needs a graded map")
    rep = Report()
    inv = rep.add(Check("involution_commuting", "theta' T = T theta", tol.algebraic))
    inv.add(spectral_norm(T.codomain.theta_matrix @ T.matrix - T.matrix @ T.domain.theta_matrix))
    phi = TripleMap(T.domain.base, T.codomain.base, T.block(-1))
    prod = phi.verify(samples, seed, tol)["preserves_triple_product"]
    rep.add(prod)
    iso = rep.add(Check("isometry", "conjugate-linear T is a surjective isometry", tol.normative))
    iso.add(isometry_residual(T, samples, seed), samples)
    return rep


def transport_report(phi: TripleMap, samples: int = 50, seed=0, tol: Tolerance = DEFAULT_TOL) -> Report:
    """Everything checked about ``F(phi)``: morphism axioms, isometry, recovery and functor laws."""
    rep = Report()
    pre = phi.verify(samples, seed, tol)
    rep.extend(pre)
    if not pre.passed:
        return rep
    T = f_morphism(phi, tol=tol)
    rep.extend(verify_graded_iso(T, samples, seed, tol))
    iso = rep.add(Check("isometry", "F(phi) is a surjective isometry", tol.normative))
    iso.add(isometry_residual(T, samples, seed), samples)
    rec = rep.add(Check("recovery", "T = F(T restricted to V)", tol.algebraic))
    try:
        back = recover_triple_map(T, tol)
        rec.add(back.residuals["reconstruction"])
        rec.add(spectral_norm(back.op.real_matrix - phi.op.real_matrix))
    except InconsistencyError:
        rec.flag(False)
    laws = functor_laws(phi, phi.inverse(), tol)
    rep.extend(laws)
    return rep
