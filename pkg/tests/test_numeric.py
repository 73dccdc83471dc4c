import json

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from oracles import power_iteration_norm, row_reduce_rank
from tkk.numeric import (
    COMPLEX_LINEAR,
    CONJUGATE_LINEAR,
    GENERAL,
    RealLinearOp,
    Tolerance,
    cmatrix_from_json,
    cmatrix_to_json,
    complex_parts,
    cvector_from_json,
    cvector_to_json,
    infer_kind,
    k_matrix,
    op_compose,
    ops_equal,
    random_orthogonal,
    random_unitary,
    rank,
    real_form,
    real_form_conj,
    spectral_norm,
    to_complex,
    to_real,
)

seeds = st.integers(0, 2**32 - 1)


def cmat(rng, m, n):
    return rng.standard_normal((m, n)) + 1j * rng.standard_normal((m, n))


@given(seeds, st.integers(1, 6), st.integers(1, 6))
def test_spectral_norm_matches_power_iteration(seed, m, n):
    M = cmat(np.random.default_rng(seed), m, n)
    assert spectral_norm(M) == pytest.approx(power_iteration_norm(M), rel=1e-6)


def test_spectral_norm_edge_cases():
    assert spectral_norm(np.zeros((0, 3))) == 0.0
    assert spectral_norm(np.array([3.0, 4.0])) == 5.0
    with pytest.raises(ValueError):
        spectral_norm(np.array([[np.nan]]))


@given(seeds, st.integers(1, 6), st.integers(1, 6), st.integers(0, 6))
def test_rank_matches_row_reduction(seed, m, n, r):
    rng = np.random.default_rng(seed)
    r = min(r, m, n)
    M = cmat(rng, m, r) @ cmat(rng, r, n)
    assert rank(M) == row_reduce_rank(M) == r


def test_rank_of_zero_and_empty():
    assert rank(np.zeros((3, 3))) == 0
    assert rank(np.zeros((0, 0))) == 0


@given(seeds, st.integers(1, 5))
def test_real_coordinates_round_trip(seed, n):
    v = cmat(np.random.default_rng(seed), n, 1)[:, 0]
    assert np.array_equal(to_complex(to_real(v)), v)


@given(seeds, st.integers(1, 5), st.integers(1, 5))
def test_real_forms_act_like_complex_maps(seed, m, n):
    rng = np.random.default_rng(seed)
    A, v = cmat(rng, m, n), cmat(rng, n, 1)[:, 0]
    assert np.allclose(to_complex(real_form(A) @ to_real(v)), A @ v)
    assert np.allclose(to_complex(real_form_conj(A) @ to_real(v)), A @ v.conj())
    Ap, Bp = complex_parts(real_form(A) + real_form_conj(2 * A))
    assert np.allclose(Ap, A) and np.allclose(Bp, 2 * A)


@given(seeds)
def test_kind_inference_and_composition(seed):
    rng = np.random.default_rng(seed)
    A, B = cmat(rng, 3, 3), cmat(rng, 3, 3)
    lin, conj = RealLinearOp.from_complex(A), RealLinearOp.from_conjugate(B)
    assert infer_kind(lin.real_matrix) == COMPLEX_LINEAR
    assert infer_kind(conj.real_matrix) == CONJUGATE_LINEAR
    assert infer_kind(lin.real_matrix + conj.real_matrix) == GENERAL
    assert (lin @ conj).kind == CONJUGATE_LINEAR
    assert (conj @ conj).kind == COMPLEX_LINEAR
    v = cmat(rng, 3, 1)[:, 0]
    assert np.allclose((conj @ lin)(v), conj(lin(v)))
    assert ops_equal(op_compose(lin, lin.inverse()), RealLinearOp.identity(3))


def test_declared_kind_is_checked():
    R = real_form(np.eye(2)) + real_form_conj(np.eye(2))
    with pytest.raises(ValueError):
        RealLinearOp(R, COMPLEX_LINEAR)
    with pytest.raises(ValueError):
        RealLinearOp(np.eye(4), "antilinear")
    assert RealLinearOp(R, GENERAL).kind == GENERAL


def test_conjugation_matrix():
    v = np.array([1 + 2j, -3j])
    assert np.array_equal(to_complex(k_matrix(2) @ to_real(v)), v.conj())
    assert RealLinearOp.conjugation(2).kind == CONJUGATE_LINEAR


def test_tolerance_validation():
    Tolerance(1e-12, 1e-3)
    for bad in [(0, 1e-6), (1e-3, 1e-6), (1e-9, 1.0)]:
        with pytest.raises(ValueError):
            Tolerance(*bad)


@given(seeds)
def test_random_unitary_and_orthogonal(seed):
    rng = np.random.default_rng(seed)
    U, O = random_unitary(4, rng), random_orthogonal(4, rng)
    assert np.allclose(U.conj().T @ U, np.eye(4))
    assert np.allclose(O.T @ O, np.eye(4)) and np.isrealobj(O)


@given(seeds)
def test_json_round_trips(seed):
    rng = np.random.default_rng(seed)
    M = cmat(rng, 2, 3)
    assert np.array_equal(cmatrix_from_json(json.loads(json.dumps(cmatrix_to_json(M)))), M)
    v = M[0]
    assert np.array_equal(cvector_from_json(json.loads(json.dumps(cvector_to_json(v)))), v)
    op = RealLinearOp.from_conjugate(M[:, :2])
    back = RealLinearOp.from_json(json.loads(json.dumps(op.to_json())))
    assert back.kind == op.kind and np.array_equal(back.real_matrix, op.real_matrix)


def test_json_rejects_bad_input():
    with pytest.raises(ValueError):
        cmatrix_from_json({"rows": 2, "cols": 2, "data": [[1, 0]]})
    with pytest.raises(ValueError):
        cvector_from_json([[1, 2, 3]])
    with pytest.raises(ValueError):
        RealLinearOp.from_json({"kind": "general", "n": 5, "real_matrix": np.eye(4).tolist()})
    assert np.array_equal(cvector_from_json([1, 2]), np.array([1, 2], dtype=complex))
