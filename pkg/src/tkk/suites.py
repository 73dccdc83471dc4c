"""Verification suites run by the command line and by the acceptance tests.

Each suite takes a space, a sample count, a seed and a tolerance and
returns a :class:`~tkk.report.Report`.  Seeds are derived per suite so
that the selection of suites does not change any individual result.
"""

from __future__ import annotations

import logging

import numpy as np
import scipy.linalg

from . import jordan
from .algebra import (
    V0Element,
    build_tkk,
    condition_a_residual,
    condition_c_singularity,
    natural,
    nondegeneracy_witness,
    structural_checks,
)
from .functor import (
    InconsistencyError,
    conjugate_variant_check,
    conjugation_map,
    f_morphism,
    functor_laws,
    identity_map,
    isometry_residual,
    mixed_map,
    random_automorphism,
    recover_triple_map,
    scalar_map,
    transpose_map,
    verify_graded_iso,
)
from .jordan import Sum, TripleSpace, make_space
from .numeric import DEFAULT_TOL, Tolerance, rank
from .order import (
    PosetError,
    build_poset,
    cross_check,
    extend_order_iso,
    lemma_suite,
    negatively_graded_extend,
    sub_tripotents,
)
from .report import Check, Report

log = logging.getLogger(__name__)

SUITES = ("jordan", "tkk", "functor", "lie", "atomic")

# ||a box a|| = ||a||^2 and its consequences go through two SVDs
NORM_IDENTITY = 1e-8
# condition (c) at norm 1/2 stays this far from singular
NEGATIVE_CONTROL_GAP = 0.2


def _rng(seed: int, salt: int) -> np.random.Generator:
    return np.random.default_rng([seed, salt])


def _frame_sum(space, frame, mask, phases):
    return sum((p * f for f, m, p in zip(frame, mask, phases) if m), space.zero())


# ---------------------------------------------------------------------------


def jordan_suite(space: TripleSpace, samples: int, seed: int, tol: Tolerance = DEFAULT_TOL) -> Report:
    V = make_space(space)
    rng = _rng(seed, 0)
    rep = Report()

    c = rep.add(Check("jordan_identity", "Jordan triple identity", tol.algebraic))
    a, b, x, y, z = (V.random_element(rng, samples) for _ in range(5))
    c.add(jordan.jordan_identity_residual(V, a, b, x, y, z), samples)

    ax = rep.add(Check("box_norm_axiom", "||a box a|| = ||a||^2", NORM_IDENTITY))
    sp = rep.add(Check("box_spectrum", "a box a is hermitian with nonnegative spectrum", NORM_IDENTITY))
    cube = rep.add(Check("cube_norm", "||{a,a,a}|| = ||a||^3", NORM_IDENTITY))
    D = V.basis_scale
    ops = jordan.box_operators(V, a, a)
    ops = D[None, :, None] * ops / D[None, None, :]
    na = np.asarray(V.norm(a))
    op_norms = np.linalg.norm(ops, ord=2, axis=(-2, -1))
    ax.add(np.abs(op_norms - na**2) / (1 + na**2), samples)
    herm = np.linalg.norm(ops - np.conj(np.swapaxes(ops, -1, -2)), ord=2, axis=(-2, -1))
    ev = np.linalg.eigvals(ops)
    neg = np.maximum(0.0, -ev.real).max(axis=-1)
    sp.add(np.maximum(herm, np.maximum(neg, np.abs(ev.imag).max(axis=-1))) / (1 + na**2), samples)
    cube.add(np.abs(np.asarray(V.norm(V.triple(a, a, a))) - na**3) / (1 + na**3), samples)

    pe = rep.add(Check("peirce_projections", "P_0 + P_1 + P_2 = I, P_k^2 = P_k", tol.algebraic))
    pr = rep.add(Check("peirce_rule", "{V_2(e), V_0(e), V} = {V_0(e), V_2(e), V} = 0", tol.algebraic))
    sr = rep.add(Check("tripotent_sum_rule", "e orthogonal to u implies e +- u tripotent", 0.0))
    order = rep.add(Check("triple_order_axioms", "tripotent order is reflexive, antisymmetric, transitive", 0.0))
    n_peirce = max(1, min(samples, 50))
    for _ in range(n_peirce):
        e = jordan.random_tripotent(V, int(rng.integers(0, V.max_rank + 1)), rng)
        P = jordan.peirce(V, e, tol)
        I = np.eye(2 * V.dim)
        mats = [p.real_matrix for p in P.projections]
        pe.add(np.linalg.norm(sum(mats) - I, 2))
        for M in mats:
            pe.add(np.linalg.norm(M @ M - M, 2), 0)
        u, w, t = V.random_element(rng, 3)
        x2, x0 = P.P2(u), P.P0(w)
        pr.add(V.norm(V.triple(x2, x0, t)))
        pr.add(V.norm(V.triple(x0, x2, t)), 0)

        f = V.frame(rng)
        ph = np.exp(2j * np.pi * rng.random(len(f)))
        m1 = rng.random(len(f)) < 0.5
        m2 = (rng.random(len(f)) < 0.5) & ~m1
        e1, e2 = _frame_sum(V, f, m1, ph), _frame_sum(V, f, m2, ph)
        sr.flag(jordan.is_tripotent(V, e1 + e2, tol) and jordan.is_tripotent(V, e1 - e2, tol))
        low, mid, top = e1, e1 + e2, _frame_sum(V, f, np.ones(len(f), bool), ph)
        leq = lambda p, q: jordan.triple_leq(V, p, q, tol)  # noqa: E731
        order.flag(leq(low, low) and leq(mid, mid))
        order.flag(leq(low, mid) and leq(mid, top) and leq(low, top), 0)
        if m2.any():
            order.flag(not leq(mid, low), 0)
    return rep


def _random_null_generators(space: TripleSpace, rng) -> list:
    """Generator list whose box operators sum to zero, from the kernel of the basis span."""
    d = space.dim
    idx = [(i, j) for i in range(d) for j in range(d)]
    E = space.basis
    cols = np.array([jordan.box_operator(space, E[i], E[j]).ravel() for i, j in idx]).T
    K = scipy.linalg.null_space(cols)
    if K.shape[1] == 0:
        return []
    c = K @ (rng.standard_normal(K.shape[1]) + 1j * rng.standard_normal(K.shape[1]))
    return [(ck * E[i], E[j]) for ck, (i, j) in zip(c, idx)]


def tkk_suite(space: TripleSpace, samples: int, seed: int, tol: Tolerance = DEFAULT_TOL) -> Report:
    V = make_space(space)
    alg = build_tkk(V)
    rng = _rng(seed, 1)
    rep = structural_checks(alg, samples, int(rng.integers(2**31)), tol)

    g0 = rep.add(Check("g0_dimension", "dim V_0 = rank of the span of box operators", 0.0))
    A, B = V.random_element(rng, 2 * alg.g0_dim + 4), V.random_element(rng, 2 * alg.g0_dim + 4)
    spanned = rank(jordan.box_operators(V, A, B).reshape(len(A), -1).T, tol)
    g0.flag(spanned == alg.g0_dim)
    g0.notes["g0_dim"] = alg.g0_dim

    nat = rep.add(Check("natural_well_defined", "h = 0 as an operator implies h^natural = 0", tol.algebraic))
    for _ in range(min(samples, 20)):
        gens = _random_null_generators(V, rng)
        if gens:
            h = V0Element(V, gens, compress=False)
            scale = 1 + sum(np.linalg.norm(a) * np.linalg.norm(b) for a, b in gens)
            nat.add(np.linalg.norm(natural(h).op, 2) / scale)
        else:
            nat.flag(True)

    nd = rep.add(Check("nondegeneracy_witness", "(ad a)^2 = 0 only for a = 0", 0.0))
    for _ in range(min(samples, 20)):
        for a in (alg.random_element(rng), alg.element(y=V.random_element(rng)), alg.element(x=V.random_element(rng))):
            sq, na = nondegeneracy_witness(alg, a)
            nd.flag(sq > tol.algebraic * na**2)

    ca = rep.add(Check("condition_a", "||[[a, theta a], a]|| = 1 for ||a|| = 1", NORM_IDENTITY))
    cc = rep.add(Check("condition_c", "I - ad[a, theta a] is singular on g_-1 for ||a|| = 1", tol.normative))
    neg = rep.add(Check("condition_c_negative_control", "singular gap stays open at ||a|| = 1/2", 0.0))
    for _ in range(samples):
        a = V.random_unit(rng)
        ca.add(condition_a_residual(alg, a))
        cc.add(condition_c_singularity(alg, a))
        gap = condition_c_singularity(alg, a / 2)
        neg.flag(gap >= NEGATIVE_CONTROL_GAP)
        neg.notes["min_gap"] = min(neg.notes.get("min_gap", np.inf), gap)
    return rep


def _standard_maps(V: TripleSpace, rng) -> dict:
    maps = {
        "identity": identity_map(V),
        "scalar": scalar_map(V, np.exp(2j * np.pi * rng.random())),
        "automorphism": random_automorphism(V, rng),
        "conjugation": conjugation_map(V),
    }
    try:
        maps["transpose"] = transpose_map(V)
    except ValueError:
        log.info("transpose not defined on %r", V)
    return maps


def functor_suite(space: TripleSpace, samples: int, seed: int, tol: Tolerance = DEFAULT_TOL) -> Report:
    V = make_space(space)
    rng = _rng(seed, 2)
    rep = Report()
    n = max(1, min(samples, 50))
    maps = _standard_maps(V, rng)
    fwd = rep.add(Check("graded_isomorphism", "F(phi) is a graded isomorphism commuting with involutions", tol.algebraic))
    iso = rep.add(Check("isometry", "F(phi) is a surjective isometry", NORM_IDENTITY))
    back = rep.add(Check("recovery", "T = F(phi) with phi the restriction of T to V", tol.algebraic))
    conj = rep.add(Check("conjugate_variant", "conjugate-linear T is an isometry preserving products", NORM_IDENTITY))
    laws = rep.add(Check("functor_laws", "F(psi o phi) = F(psi) o F(phi), F(id) = id", tol.algebraic))
    neg = rep.add(Check("perturbation_detected", "perturbed blocks fail verification and recovery", 0.0))
    for name, phi in maps.items():
        s = int(rng.integers(2**31))
        T = f_morphism(phi, tol=tol)
        r = verify_graded_iso(T, n, s, tol)
        fwd.add(max(c.max_residual for c in r.checks), n)
        fwd.flag(r.passed, 0)
        iso.add(isometry_residual(T, n, s), n)
        if phi.op.kind == "conjugate_linear":
            cr = conjugate_variant_check(T, n, s, tol)
            conj.add(max(c.max_residual for c in cr.checks), n)
            continue
        try:
            phi_back = recover_triple_map(T, tol)
            back.add(phi_back.residuals["reconstruction"])
            back.add(np.abs(phi_back.op.real_matrix - phi.op.real_matrix).max(), 0)
        except InconsistencyError as exc:
            back.flag(False)
            back.notes[name] = str(exc)
        for j in (-1, 0):
            bad = T.perturb_block(j, 1e-3, rng)
            rejected = not verify_graded_iso(bad, n, s, tol).passed
            try:
                recover_triple_map(bad, tol)
            except InconsistencyError:
                pass
            else:
                rejected = False
            neg.flag(rejected)
    names = list(maps)
    for k in range(len(names)):
        for m in range(len(names)):
            phi, psi = maps[names[k]], maps[names[m]]
            if phi.codomain != psi.domain:
                continue
            lr = functor_laws(phi, psi, tol)
            laws.add(max(c.max_residual for c in lr.checks), 1)
            laws.flag(lr.passed, 0)
    return rep


def lie_suite(space: TripleSpace, samples: int, seed: int, tol: Tolerance = DEFAULT_TOL) -> Report:
    V = make_space(space)
    alg = build_tkk(V)
    rng = _rng(seed, 3)
    rep = Report()
    rep.extend(cross_check(alg, samples, int(rng.integers(2**31)), tol))
    rep.extend(lemma_suite(alg, samples, int(rng.integers(2**31)), tol))
    po = rep.add(Check("poset_of_frame", "order on sub-tripotents of a frame is a Boolean lattice", 0.0))
    frame = V.frame(rng)[:3]
    nodes = sub_tripotents(alg, frame)
    try:
        H = build_poset(alg, nodes, tol)
        r = len(frame)
        po.flag(len(H.edges) == r * 2 ** (r - 1))
        po.notes["edges"] = len(H.edges)
    except PosetError as exc:
        po.flag(False)
        po.notes["error"] = str(exc)
    return rep


def atomic_suite(space: TripleSpace, samples: int, seed: int, tol: Tolerance = DEFAULT_TOL) -> Report:
    V = make_space(space)
    rng = _rng(seed, 4)
    rep = Report()
    parts = V.parts
    pre = rep.add(Check("atomic_precondition", "every factor has rank at least two", 0.0))
    pre.flag(all(p.rank_at_least_two for p in parts))
    if not pre.passed:
        return rep
    W = V if isinstance(V, Sum) else Sum([V])
    alg = build_tkk(W)
    candidates = {"automorphism": random_automorphism(W, rng)}
    try:
        candidates["transpose"] = transpose_map(W)
    except ValueError:
        pass
    if len(parts) > 1:
        candidates["mixed"] = mixed_map(W, [len(parts) - 1]).after(random_automorphism(W, rng))
    for name, phi in candidates.items():
        target = alg if phi.codomain == W else build_tkk(phi.codomain)
        for label, build in (("extend", extend_order_iso), ("negatively_graded_extend", negatively_graded_extend)):
            _, r = build(phi, alg, target, samples, int(rng.integers(2**31)), tol)
            for c in r.checks:
                c.name = f"{label}[{name}].{c.name}"
            rep.extend(r)
    return rep


_RUNNERS = {
    "jordan": jordan_suite,
    "tkk": tkk_suite,
    "functor": functor_suite,
    "lie": lie_suite,
    "atomic": atomic_suite,
}


def run_suites(space, suites, samples: int, seed: int, tol: Tolerance = DEFAULT_TOL) -> Report:
    V = make_space(space)
    rep = Report()
    for name in suites:
        if name not in _RUNNERS:
            raise ValueError(f"unknown suite {name!r}; choose from {', '.join(SUITES)}")
        log.info("running suite %s on %r", name, V)
        r = _RUNNERS[name](V, samples, seed, tol)
        for c in r.checks:
            c.name = f"{name}.{c.name}"
            log.debug("%s", c)
        rep.extend(r)
    return rep
