"""Acceptance criteria 1-12.

Each test records one PASS/FAIL line, printed in the pytest terminal
summary (or to stdout when this file is run as a script).
"""

import functools
import json
import tempfile
from pathlib import Path

import numpy as np

from conftest import ACCEPTANCE
from oracles import covering_pairs, rect_g0_dim, row_reduce_rank
from tkk import jordan
from tkk.algebra import build_tkk, condition_a_residual, condition_c_singularity, structural_checks
from tkk.cli import main as cli_main
from tkk.functor import (
    InconsistencyError,
    conjugate_variant_check,
    conjugation_map,
    f_morphism,
    functor_laws,
    identity_map,
    isometry_residual,
    linear_map,
    random_automorphism,
    recover_triple_map,
    scalar_map,
    transpose_map,
    verify_graded_iso,
)
from tkk.jordan import CartanI, CartanII, CartanIII, Spin, Sum
from tkk.order import build_poset, cross_check, extend_order_iso, lemma_suite, lie_leq, negatively_graded_extend, sub_tripotents

JORDAN_SPACES = [CartanI(2, 3), CartanII(4), CartanIII(3), Spin(4), Sum([CartanI(2, 2), Spin(3)])]
FACTORS = [CartanI(2, 3), CartanII(4), CartanIII(3), Spin(4)]
TKK_SPACES = [CartanI(2, 2), CartanI(2, 3), CartanIII(2), Spin(3), Sum([CartanI(1, 2), Spin(2)])]
SMALL_FACTORS = [CartanI(2, 2), CartanI(2, 3), CartanIII(2), Spin(3)]


def criterion(number: int, title: str):
    """The wrapped function returns ``(ok, detail)``; the line is recorded even on errors."""

    def wrap(fn):
        @functools.wraps(fn)
        def run():
            try:
                ok, detail = fn()
            except Exception as exc:
                ok, detail = False, f"{type(exc).__name__}: {exc}"
            line = f"criterion {number:2d} {'PASS' if ok else 'FAIL'}  {title}: {detail}"
            ACCEPTANCE[number] = line
            print(line)
            assert ok, line

        return run

    return wrap


@criterion(1, "Jordan triple identity")
def test_c01_jordan_identity():
    worst = {}
    for k, V in enumerate(JORDAN_SPACES):
        rng = np.random.default_rng([1, k])
        a, b, x, y, z = V.random_element(rng, (5, 1000))
        worst[repr(V)] = float(np.max(jordan.jordan_identity_residual(V, a, b, x, y, z)))
    m = max(worst.values())
    return m <= 1e-9, f"max residual {m:.2e} over 1000 5-tuples on each of {len(worst)} spaces"


@criterion(2, "JB*-axioms")
def test_c02_jb_star_axioms():
    norm_gap, spec_low, count = 0.0, 0.0, 0
    for k, V in enumerate(JORDAN_SPACES):
        rng = np.random.default_rng([2, k])
        A = V.random_element(rng, 1000)
        boxes = jordan.box_operators(V, A, A)
        norms = np.asarray(V.norm(A))
        for a_box, n in zip(boxes, norms):
            norm_gap = max(norm_gap, abs(jordan.operator_norm(V, a_box) - n**2))
            ev = np.linalg.eigvals(jordan.orthonormal_matrix(V, a_box))
            # hermitian with nonnegative spectrum: worst negative part and imaginary part
            spec_low = max(spec_low, float(np.max(-ev.real, initial=0.0)), float(np.max(np.abs(ev.imag))))
            count += 1
    ok = norm_gap <= 1e-8 and spec_low <= 1e-8
    return ok, f"| ||a box a|| - ||a||^2 | <= {norm_gap:.2e}, spectrum defect {spec_low:.2e} on {count} samples"


@criterion(3, "TKK structure")
def test_c03_tkk_structure():
    worst, failed = {}, []
    for k, V in enumerate(TKK_SPACES):
        rep = structural_checks(build_tkk(V), samples=500, seed=300 + k)
        for c in rep.checks:
            if c.name != "norm_bound_constant":
                worst[c.name] = max(worst.get(c.name, 0.0), c.max_residual)
        if not rep.passed:
            failed.append(repr(V))
    ok = not failed and worst["gradedness"] == 0.0 and all(
        worst[n] <= 1e-9 for n in ("jacobi", "theta_automorphism", "theta_involution", "triple_vs_bracket")
    )
    detail = ", ".join(f"{n} {worst[n]:.1e}" for n in ("gradedness", "jacobi", "theta_involution", "theta_automorphism", "triple_vs_bracket"))
    return ok, f"{detail} (500 samples on each of {len(TKK_SPACES)} algebras){' failing: ' + str(failed) if failed else ''}"


@criterion(4, "g0 dimension")
def test_c04_g0_dimension():
    V = CartanI(2, 2)
    g0 = build_tkk(V).g0_dim
    oracle = rect_g0_dim(2, 2)
    # second route through the package's own box operators
    E = V.basis
    stacked = np.array([jordan.box_operator(V, a, b).ravel() for a in E for b in E])
    via_package = row_reduce_rank(stacked)
    return g0 == oracle == via_package == 7, f"g0_dim {g0}, brute-force rank {oracle}, rank of package boxes {via_package}"


@criterion(5, "conditions (a) and (c)")
def test_c05_conditions():
    a_res, c_res, gap, neg = 0.0, 0.0, np.inf, 0
    for k, V in enumerate(FACTORS):
        alg = build_tkk(V)
        for a in V.random_unit(np.random.default_rng([5, k]), 100):
            a_res = max(a_res, condition_a_residual(alg, a))
            c_res = max(c_res, condition_c_singularity(alg, a))
            gap = min(gap, condition_c_singularity(alg, a / 2))
            neg += 1
    ok = a_res <= 1e-8 and c_res <= 1e-6 and gap >= 0.2
    return ok, f"(a) {a_res:.2e}, (c) {c_res:.2e}, half-norm controls min {gap:.3f} over {neg} vectors"


def _functor_pairs():
    rng = np.random.default_rng(6)
    pairs = []
    V = CartanI(2, 2)
    builders = [
        lambda W: random_automorphism(W, rng),
        lambda W: transpose_map(W),
        lambda W: scalar_map(W, np.exp(2j * np.pi * rng.random())),
    ]
    for k in range(20):
        W = V if k % 2 == 0 else CartanIII(2)
        phi, psi = builders[k % 3](W), builders[(k // 3) % 3](W)
        pairs.append((phi, psi))
    return pairs


@criterion(6, "functor laws")
def test_c06_functor_laws():
    exact = all(
        np.array_equal(f_morphism(identity_map(V), build_tkk(V), build_tkk(V)).matrix, np.eye(2 * build_tkk(V).dim))
        for V in SMALL_FACTORS + [CartanII(4)]
    )
    worst = 0.0
    for phi, psi in _functor_pairs():
        worst = max(worst, functor_laws(phi, psi)["composition"].max_residual)
    return exact and worst <= 1e-9, f"F(id) = id bitwise: {exact}; composition residual {worst:.2e} over 20 pairs"


def _constructed_isomorphisms():
    rng = np.random.default_rng(7)
    out = []
    for k in range(20):
        V = SMALL_FACTORS[k % len(SMALL_FACTORS)]
        choice = k // len(SMALL_FACTORS)
        if choice == 0:
            out.append(random_automorphism(V, rng))
        elif choice == 1 and not isinstance(V, Spin):
            out.append(transpose_map(V))
        elif choice == 2:
            out.append(scalar_map(V, np.exp(2j * np.pi * rng.random())).after(random_automorphism(V, rng)))
        else:
            out.append(random_automorphism(V, rng).after(random_automorphism(V, rng)))
    return out


@criterion(7, "graded isomorphisms forward and backward")
def test_c07_isomorphisms():
    rng = np.random.default_rng(70)
    fwd_ok, iso, rec, caught, negatives = True, 0.0, 0.0, 0, 0
    for k, phi in enumerate(_constructed_isomorphisms()):
        T = f_morphism(phi)
        fwd_ok &= verify_graded_iso(T, samples=30, seed=k).passed
        iso = max(iso, isometry_residual(T, samples=30, seed=k))
        back = recover_triple_map(T)
        rec = max(rec, back.residuals["reconstruction"], float(np.abs(back.op.real_matrix - phi.op.real_matrix).max()))
        for j in (-1, 0, 1):
            bad = T.perturb_block(j, 1e-3, rng)
            verified = verify_graded_iso(bad, samples=30, seed=k).passed
            try:
                recover_triple_map(bad)
                recovered = True
            except InconsistencyError:
                recovered = False
            caught += not verified and not recovered
            negatives += 1
    ok = fwd_ok and iso <= 1e-8 and rec <= 1e-9 and caught == negatives
    return ok, f"20 maps: verified {fwd_ok}, isometry {iso:.2e}, reconstruction {rec:.2e}; perturbed rejected {caught}/{negatives}"


@criterion(8, "conjugate-linear variant")
def test_c08_conjugate_variant():
    rng = np.random.default_rng(8)
    worst, passed = 0.0, True
    for V in SMALL_FACTORS:
        for phi in (conjugation_map(V), conjugation_map(V).after(random_automorphism(V, rng))):
            rep = conjugate_variant_check(f_morphism(phi), samples=50, seed=8)
            passed &= rep.passed
            worst = max(worst, max(c.max_residual for c in rep.checks))
    return passed and worst <= 1e-8, f"max residual {worst:.2e} over {2 * len(SMALL_FACTORS)} conjugate-linear maps"


@criterion(9, "triple-level and Lie-level predicates agree")
def test_c09_cross_checks():
    disagreements, positives = 0, {}
    for k, V in enumerate([CartanI(2, 2), *FACTORS]):
        rep = cross_check(V, sample_size=500, seed=900 + k)
        disagreements += sum(c.counterexamples for c in rep.checks)
        for c in rep.checks:
            positives[c.name] = positives.get(c.name, 0) + c.notes.get("positive_instances", 0)
    detail = ", ".join(f"{n} ({p} positive)" for n, p in positives.items())
    return disagreements == 0, f"{disagreements} disagreements on 500 samples per factor; {detail}"


@criterion(10, "order identities and partial order")
def test_c10_order_identities_and_poset():
    V = CartanI(2, 2)
    alg = build_tkk(V)
    rep = lemma_suite(alg, sample_size=100, seed=10)
    thin = [c.name for c in rep.checks if c.notes.get("nontrivial", 0) < 100]
    bad = [c.name for c in rep.checks if not c.passed or c.max_residual > 1e-9]
    frame = [V.from_matrix(np.diag([1, 0])), V.from_matrix(np.diag([0, 1]))]
    nodes = sub_tripotents(alg, frame)
    H = build_poset(alg, nodes)
    brute = covering_pairs([[jordan.triple_leq(V, a.x, b.x) for b in nodes] for a in nodes])
    lie_brute = covering_pairs([[i == j or lie_leq(alg, a, b) for j, b in enumerate(nodes)] for i, a in enumerate(nodes)])
    poset_ok = H.edges == brute == lie_brute and len(H.edges) == 4
    ok = not thin and not bad and poset_ok
    worst = max(c.max_residual for c in rep.checks)
    deg0 = rep["three_argument_identity"].notes.get("degree_zero_max_residual", float("nan"))
    detail = (
        f"{len(rep.checks)} checks, min nontrivial {min(c.notes.get('nontrivial', 0) for c in rep.checks)}, "
        f"max residual {worst:.2e}; diamond edges {H.edges}; "
        f"three-argument identity checked at degrees -1, 1 (degree 0 residual {deg0:.1f}, not claimed)"
    )
    if thin or bad:
        detail += f"; thin {thin}, failing {bad}"
    return ok, detail


@criterion(11, "extensions of order isomorphisms")
def test_c11_atomic_extensions():
    V = Sum([CartanI(2, 2), CartanI(2, 2)])
    alg = build_tkk(V)
    maps = {"transpose": transpose_map(V), "unitary": random_automorphism(V, np.random.default_rng(11))}
    summary, ok = [], True
    for name, phi in maps.items():
        for label, build in (("graded", extend_order_iso), ("negatively graded", negatively_graded_extend)):
            _, rep = build(phi, alg, alg, samples=200, seed=11)
            ext = rep["extends_delta"]
            ok &= rep.passed and ext.max_residual == 0.0 and ext.samples == 200
            worst = max(rep["involution_commuting"].max_residual, rep["bracket_preservation"].max_residual)
            summary.append(f"{name}/{label} ext {ext.max_residual:.0e} alg {worst:.1e} order cex {rep['order_preserved'].counterexamples}")
    return ok, "; ".join(summary)


@criterion(12, "CLI determinism and exit codes")
def test_c12_cli():
    with tempfile.TemporaryDirectory() as d:
        return _cli_round(Path(d))


def _cli_round(tmp: Path):
    space = tmp / "space.json"
    space.write_text(json.dumps(CartanI(2, 2).config()))
    A = np.eye(4, dtype=complex)
    A[0, 1] = 1e-3
    tampered = tmp / "tampered.json"
    tampered.write_text(json.dumps(linear_map(CartanI(2, 2), CartanI(2, 2), A).to_json()))
    args = ["verify", "--space", str(space), "--suites", "jordan,tkk,functor", "--samples", "20", "--seed", "42"]
    reports, codes = [], []
    for k in range(2):
        out = tmp / f"r{k}.json"
        codes.append(cli_main([*args, "--report", str(out)]))
        doc = json.loads(out.read_text())
        doc.pop("timestamp")
        reports.append(json.dumps(doc, sort_keys=True))
    fail_code = cli_main([*args, "--phi", str(tampered), "--report", str(tmp / "bad.json")])
    broken = tmp / "broken.json"
    broken.write_text("{")
    parse_code = cli_main(["verify", "--space", str(broken)])
    ok = reports[0] == reports[1] and codes == [0, 0] and fail_code == 1 and parse_code == 2
    return ok, f"identical reports {reports[0] == reports[1]}; exit codes pass {codes}, tampered {fail_code}, malformed {parse_code}"


if __name__ == "__main__":
    for name, fn in list(globals().items()):
        if name.startswith("test_c"):
            try:
                fn()
            except AssertionError:
                pass
