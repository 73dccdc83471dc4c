"""Dense complex linear algebra shared by the rest of the package.

Every operator is stored as a real ``2m x 2n`` matrix acting on real
coordinates ``(re_1, ..., re_n, im_1, ..., im_n)``.  Complex-linear,
conjugate-linear and merely real-linear maps therefore share one
representation; ``kind`` records which of the three a map is.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

COMPLEX_LINEAR = "complex_linear"
CONJUGATE_LINEAR = "conjugate_linear"
GENERAL = "general"
KINDS = (COMPLEX_LINEAR, CONJUGATE_LINEAR, GENERAL)

_COMPOSE = {
    (COMPLEX_LINEAR, COMPLEX_LINEAR): COMPLEX_LINEAR,
    (COMPLEX_LINEAR, CONJUGATE_LINEAR): CONJUGATE_LINEAR,
    (CONJUGATE_LINEAR, COMPLEX_LINEAR): CONJUGATE_LINEAR,
    (CONJUGATE_LINEAR, CONJUGATE_LINEAR): COMPLEX_LINEAR,
}


@dataclass(frozen=True)
class Tolerance:
    """Tolerance policy.

    ``algebraic`` bounds relative residuals of identities; ``normative``
    bounds comparisons that go through norm estimation.
    """

    algebraic: float = 1e-9
    normative: float = 1e-6

    def __post_init__(self):
        if not (0 < self.algebraic <= self.normative < 1):
            raise ValueError(
                f"need 0 < algebraic <= normative < 1, got {self.algebraic}, {self.normative}"
            )


DEFAULT_TOL = Tolerance()


def _check_finite(M):
    M = np.asarray(M)
    if not np.all(np.isfinite(M)):
        raise ValueError("matrix has non-finite entries")
    return M


def spectral_norm(M) -> float:
    """Largest singular value of ``M`` (0 for empty matrices)."""
    M = _check_finite(M)
    if M.size == 0:
        return 0.0
    if M.ndim == 1:
        return float(np.linalg.norm(M))
    return float(np.linalg.svd(M, compute_uv=False)[0])


def rank(M, tol: Tolerance = DEFAULT_TOL) -> int:
    """Numerical rank: singular values above ``tol.algebraic`` times the largest."""
    M = _check_finite(M)
    if M.size == 0:
        return 0
    s = np.linalg.svd(np.atleast_2d(M), compute_uv=False)
    if s[0] == 0:
        return 0
    return int(np.sum(s > tol.algebraic * s[0]))


def to_real(v: np.ndarray) -> np.ndarray:
    """Complex vector (or stack of column vectors) to stacked real coordinates."""
    v = np.asarray(v, dtype=complex)
    return np.concatenate([v.real, v.imag], axis=0)


def to_complex(r: np.ndarray) -> np.ndarray:
    r = np.asarray(r, dtype=float)
    n = r.shape[0] // 2
    return r[:n] + 1j * r[n:]


def j_matrix(n: int) -> np.ndarray:
    """Real form of multiplication by ``i`` on complex dimension ``n``."""
    Z = np.zeros((n, n))
    eye = np.eye(n)
    return np.block([[Z, -eye], [eye, Z]])


def k_matrix(n: int) -> np.ndarray:
    """Real form of coordinatewise conjugation on complex dimension ``n``."""
    return np.diag(np.concatenate([np.ones(n), -np.ones(n)]))


def real_form(A: np.ndarray) -> np.ndarray:
    """Real matrix of the complex-linear map ``x -> A x``."""
    A = np.asarray(A, dtype=complex)
    return np.block([[A.real, -A.imag], [A.imag, A.real]])


def real_form_conj(A: np.ndarray) -> np.ndarray:
    """Real matrix of the conjugate-linear map ``x -> A conj(x)``."""
    A = np.asarray(A, dtype=complex)
    return np.block([[A.real, A.imag], [A.imag, -A.real]])


def complex_parts(R: np.ndarray):
    """Split a real matrix into ``(A, B)`` with ``R x = A x + B conj(x)``."""
    m, n = R.shape[0] // 2, R.shape[1] // 2
    R11, R12, R21, R22 = R[:m, :n], R[:m, n:], R[m:, :n], R[m:, n:]
    A = 0.5 * ((R11 + R22) + 1j * (R21 - R12))
    B = 0.5 * ((R11 - R22) + 1j * (R21 + R12))
    return A, B


def infer_kind(R: np.ndarray, tol: Tolerance = DEFAULT_TOL) -> str:
    A, B = complex_parts(R)
    scale = 1.0 + spectral_norm(R)
    if spectral_norm(B) <= tol.algebraic * scale:
        return COMPLEX_LINEAR
    if spectral_norm(A) <= tol.algebraic * scale:
        return CONJUGATE_LINEAR
    return GENERAL


@dataclass(frozen=True, eq=False)
class RealLinearOp:
    """A real-linear map ``C^n -> C^m`` held as a ``2m x 2n`` real matrix.

    The constructor checks that the declared ``kind`` is consistent with
    the matrix (commuting or anticommuting with ``J``) up to the algebraic
    tolerance; use the ``from_*`` helpers to build exactly structured maps.
    """

    real_matrix: np.ndarray
    kind: str = GENERAL
    n: int = field(init=False)
    m: int = field(init=False)

    def __post_init__(self):
        R = np.array(self.real_matrix, dtype=float)
        if R.ndim != 2 or R.shape[0] % 2 or R.shape[1] % 2:
            raise ValueError(f"real matrix must be 2m x 2n, got shape {R.shape}")
        _check_finite(R)
        if self.kind not in KINDS:
            raise ValueError(f"unknown kind {self.kind!r}")
        R.setflags(write=False)
        object.__setattr__(self, "real_matrix", R)
        object.__setattr__(self, "m", R.shape[0] // 2)
        object.__setattr__(self, "n", R.shape[1] // 2)
        if self.kind != GENERAL:
            A, B = complex_parts(R)
            off = B if self.kind == COMPLEX_LINEAR else A
            if spectral_norm(off) > DEFAULT_TOL.algebraic * (1.0 + spectral_norm(R)):
                raise ValueError(f"matrix is not {self.kind}")

    @classmethod
    def from_complex(cls, A) -> "RealLinearOp":
        return cls(real_form(A), COMPLEX_LINEAR)

    @classmethod
    def from_conjugate(cls, A) -> "RealLinearOp":
        """The conjugate-linear map ``x -> A conj(x)``."""
        return cls(real_form_conj(A), CONJUGATE_LINEAR)

    @classmethod
    def identity(cls, n: int) -> "RealLinearOp":
        return cls(np.eye(2 * n), COMPLEX_LINEAR)

    @classmethod
    def conjugation(cls, n: int) -> "RealLinearOp":
        return cls(k_matrix(n), CONJUGATE_LINEAR)

    @property
    def complex_matrix(self) -> np.ndarray:
        """The complex matrix of a complex-linear map."""
        if self.kind != COMPLEX_LINEAR:
            raise ValueError(f"{self.kind} map has no complex matrix")
        return complex_parts(self.real_matrix)[0]

    def parts(self):
        return complex_parts(self.real_matrix)

    def __call__(self, v) -> np.ndarray:
        """Apply to a complex vector (or to the columns of a complex matrix)."""
        return to_complex(self.real_matrix @ to_real(v))

    def __matmul__(self, other: "RealLinearOp") -> "RealLinearOp":
        return op_compose(self, other)

    def __add__(self, other: "RealLinearOp") -> "RealLinearOp":
        kind = self.kind if self.kind == other.kind else GENERAL
        return RealLinearOp(self.real_matrix + other.real_matrix, kind)

    def __sub__(self, other: "RealLinearOp") -> "RealLinearOp":
        kind = self.kind if self.kind == other.kind else GENERAL
        return RealLinearOp(self.real_matrix - other.real_matrix, kind)

    def scale(self, c: float) -> "RealLinearOp":
        return RealLinearOp(float(c) * self.real_matrix, self.kind)

    def inverse(self) -> "RealLinearOp":
        if self.m != self.n:
            raise ValueError("only square maps are invertible")
        return RealLinearOp(np.linalg.inv(self.real_matrix), self.kind)

    def is_bijective(self, tol: Tolerance = DEFAULT_TOL) -> bool:
        return self.m == self.n and rank(self.real_matrix, tol) == 2 * self.n

    def commutator_with_j(self) -> float:
        """``||R J - J R||``; zero exactly for complex-linear maps built from complex matrices."""
        R = self.real_matrix
        return spectral_norm(R @ j_matrix(self.n) - j_matrix(self.m) @ R)

    def to_json(self) -> dict:
        return {"kind": self.kind, "n": self.n, "m": self.m, "real_matrix": self.real_matrix.tolist()}

    @classmethod
    def from_json(cls, data: dict) -> "RealLinearOp":
        op = cls(np.asarray(data["real_matrix"], dtype=float), data.get("kind", GENERAL))
        if ("n" in data and data["n"] != op.n) or ("m" in data and data["m"] != op.m):
            raise ValueError("declared dimensions do not match real_matrix")
        return op

    def __repr__(self):
        return f"RealLinearOp({self.kind}, {self.n}->{self.m})"


def compose_kind(a: str, b: str) -> str:
    return _COMPOSE.get((a, b), GENERAL)


def op_compose(A: RealLinearOp, B: RealLinearOp) -> RealLinearOp:
    """``A o B``."""
    if B.m != A.n:
        raise ValueError(f"cannot compose {A!r} after {B!r}")
    kind = compose_kind(A.kind, B.kind)
    R = A.real_matrix @ B.real_matrix
    if kind == GENERAL:
        return RealLinearOp(R, GENERAL)
    # Re-symmetrise to wash out rounding accumulated along long chains.
    P, Q = complex_parts(R)
    R = real_form(P) if kind == COMPLEX_LINEAR else real_form_conj(Q)
    return RealLinearOp(R, kind)


def ops_equal(A: RealLinearOp, B: RealLinearOp, tol: Tolerance = DEFAULT_TOL) -> bool:
    if A.real_matrix.shape != B.real_matrix.shape:
        return False
    diff = spectral_norm(A.real_matrix - B.real_matrix)
    scale = max(spectral_norm(A.real_matrix), spectral_norm(B.real_matrix))
    return diff <= tol.algebraic * (1.0 + scale)


def cmatrix_to_json(M) -> dict:
    M = _check_finite(np.atleast_2d(np.asarray(M, dtype=complex)))
    return {
        "rows": M.shape[0],
        "cols": M.shape[1],
        "data": [[float(z.real), float(z.imag)] for z in M.ravel()],
    }


def cmatrix_from_json(data: dict) -> np.ndarray:
    rows, cols = int(data["rows"]), int(data["cols"])
    entries = data["data"]
    if len(entries) != rows * cols:
        raise ValueError(f"expected {rows * cols} entries, got {len(entries)}")
    M = np.array([complex(re, im) for re, im in entries], dtype=complex).reshape(rows, cols)
    return _check_finite(M)


def random_unitary(n: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-distributed unitary via QR with phase correction."""
    Z = (rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))) / np.sqrt(2)
    Q, R = np.linalg.qr(Z)
    d = np.diag(R)
    return Q * (d / np.abs(d))


def random_orthogonal(n: int, rng: np.random.Generator) -> np.ndarray:
    Q, R = np.linalg.qr(rng.standard_normal((n, n)))
    return Q * np.sign(np.diag(R))


def cvector_to_json(v) -> list:
    """Complex vector as a list of ``[re, im]`` pairs."""
    v = _check_finite(np.asarray(v, dtype=complex).ravel())
    return [[float(z.real), float(z.imag)] for z in v]


def cvector_from_json(data) -> np.ndarray:
    arr = np.asarray(data, dtype=float)
    if arr.ndim == 1:
        return _check_finite(arr.astype(complex))
    if arr.ndim != 2 or arr.shape[1] != 2:
        raise ValueError("complex vector must be a list of numbers or [re, im] pairs")
    return _check_finite(arr[:, 0] + 1j * arr[:, 1])
