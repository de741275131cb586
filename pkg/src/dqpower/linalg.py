"""Dense dual quaternion vectors and matrices.

Storage is a pair of float arrays: standard and dual parts, each with a
trailing quaternion axis of length 4.  Vectors are ``(n, 4)``, matrices
``(n, m, 4)``.  Both classes freeze their arrays on construction.
"""
from __future__ import annotations

import csv
import json
import math
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from . import _qarray as qa
from .dual import DualNumber, DualQuaternion, Quaternion, dn_sqrt
from .errors import DimensionMismatch, NotScalar

APPRECIABLE_TOL = 1e-12
HERMITIAN_TOL = 1e-10


def _frozen(a, shape_tail):
    a = np.array(a, dtype=float)
    if a.shape[-len(shape_tail):] != shape_tail:
        raise ValueError(f"bad trailing shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise ValueError("non-finite entries")
    a.setflags(write=False)
    return a


class DQVector:
    """Column vector of ``n >= 1`` dual quaternions."""

    __slots__ = ("st", "du")

    def __init__(self, st, du=None):
        st = _frozen(st, (4,))
        if st.ndim != 2 or st.shape[0] < 1:
            raise ValueError(f"expected (n, 4) with n >= 1, got {st.shape}")
        du = np.zeros_like(st) if du is None else _frozen(du, (4,))
        if du.shape != st.shape:
            raise DimensionMismatch(f"{st.shape} vs {du.shape}")
        du.setflags(write=False)
        object.__setattr__(self, "st", st)
        object.__setattr__(self, "du", du)

    def __setattr__(self, name, value):
        raise AttributeError("DQVector is immutable")

    @classmethod
    def from_entries(cls, entries: Iterable[DualQuaternion]) -> "DQVector":
        arr = np.array([e.as_array() for e in entries], dtype=float)
        return cls(arr[:, :4], arr[:, 4:])

    @classmethod
    def from_array(cls, a) -> "DQVector":
        """From an ``(n, 8)`` array of serialized dual quaternions."""
        a = np.asarray(a, dtype=float)
        if a.ndim != 2 or a.shape[1] != 8:
            raise ValueError(f"expected (n, 8), got {a.shape}")
        return cls(a[:, :4], a[:, 4:])

    @classmethod
    def basis(cls, n: int, i: int) -> "DQVector":
        st = np.zeros((n, 4))
        st[i, 0] = 1.0
        return cls(st)

    def as_array(self) -> np.ndarray:
        return np.concatenate([self.st, self.du], axis=1)

    def __len__(self):
        return self.st.shape[0]

    def __getitem__(self, i) -> DualQuaternion:
        return DualQuaternion(Quaternion.from_array(self.st[i]), Quaternion.from_array(self.du[i]))

    def __iter__(self):
        return (self[i] for i in range(len(self)))

    def __eq__(self, other):
        if not isinstance(other, DQVector):
            return NotImplemented
        return np.array_equal(self.st, other.st) and np.array_equal(self.du, other.du)

    __hash__ = None

    def __repr__(self):
        return f"DQVector(n={len(self)})"

    def appreciable(self) -> bool:
        return float(np.linalg.norm(self.st)) > APPRECIABLE_TOL

    def __add__(self, other: "DQVector") -> "DQVector":
        _same_shape(self, other)
        return DQVector(self.st + other.st, self.du + other.du)

    def __sub__(self, other: "DQVector") -> "DQVector":
        _same_shape(self, other)
        return DQVector(self.st - other.st, self.du - other.du)

    def scale(self, a: DualNumber) -> "DQVector":
        """``x * a`` for a dual number ``a``."""
        return DQVector(self.st * a.st, self.du * a.st + self.st * a.du)

    def right_mul(self, q: DualQuaternion) -> "DQVector":
        """``x * q``: every entry right-multiplied by ``q``."""
        qs, qd = q.st.as_array(), q.du.as_array()
        return DQVector(qa.qmul(self.st, qs), qa.qmul(self.st, qd) + qa.qmul(self.du, qs))

    def conj(self) -> "DQVector":
        """Entrywise conjugate (not the conjugate transpose)."""
        return DQVector(qa.qconj(self.st), qa.qconj(self.du))

    def isclose(self, other: "DQVector", tol: float = 1e-12) -> bool:
        _same_shape(self, other)
        return bool(
            np.max(np.abs(self.st - other.st), initial=0.0) <= tol
            and np.max(np.abs(self.du - other.du), initial=0.0) <= tol
        )


class DQMatrix:
    """Dense ``n x m`` dual quaternion matrix."""

    __slots__ = ("st", "du")

    def __init__(self, st, du=None):
        st = _frozen(st, (4,))
        if st.ndim != 3:
            raise ValueError(f"expected (n, m, 4), got {st.shape}")
        du = np.zeros_like(st) if du is None else _frozen(du, (4,))
        if du.shape != st.shape:
            raise DimensionMismatch(f"{st.shape} vs {du.shape}")
        du.setflags(write=False)
        object.__setattr__(self, "st", st)
        object.__setattr__(self, "du", du)

    def __setattr__(self, name, value):
        raise AttributeError("DQMatrix is immutable")

    @property
    def shape(self) -> tuple[int, int]:
        return self.st.shape[0], self.st.shape[1]

    @classmethod
    def zeros(cls, n: int, m: int | None = None) -> "DQMatrix":
        return cls(np.zeros((n, n if m is None else m, 4)))

    @classmethod
    def identity(cls, n: int) -> "DQMatrix":
        st = np.zeros((n, n, 4))
        st[np.arange(n), np.arange(n), 0] = 1.0
        return cls(st)

    @classmethod
    def diag(cls, values: Sequence[DualNumber]) -> "DQMatrix":
        n = len(values)
        st = np.zeros((n, n, 4))
        du = np.zeros((n, n, 4))
        for i, v in enumerate(values):
            st[i, i, 0] = v.st
            du[i, i, 0] = v.du
        return cls(st, du)

    @classmethod
    def real(cls, a, b=None) -> "DQMatrix":
        """Embed real matrices ``a + b*eps`` as dual quaternion matrices."""
        a = np.asarray(a, dtype=float)
        st = np.zeros(a.shape + (4,))
        st[..., 0] = a
        du = np.zeros_like(st)
        if b is not None:
            du[..., 0] = np.asarray(b, dtype=float)
        return cls(st, du)

    @classmethod
    def from_entries(cls, rows: Sequence[Sequence[DualQuaternion]]) -> "DQMatrix":
        arr = np.array([[e.as_array() for e in row] for row in rows], dtype=float)
        return cls(arr[..., :4], arr[..., 4:])

    def as_array(self) -> np.ndarray:
        """``(n, m, 8)`` array of serialized entries."""
        return np.concatenate([self.st, self.du], axis=-1)

    def __getitem__(self, ij) -> DualQuaternion:
        i, j = ij
        return DualQuaternion(Quaternion.from_array(self.st[i, j]), Quaternion.from_array(self.du[i, j]))

    def __eq__(self, other):
        if not isinstance(other, DQMatrix):
            return NotImplemented
        return np.array_equal(self.st, other.st) and np.array_equal(self.du, other.du)

    __hash__ = None

    def __repr__(self):
        return f"DQMatrix(shape={self.shape})"

    def appreciable(self) -> bool:
        return float(np.linalg.norm(self.st)) > APPRECIABLE_TOL

    def __add__(self, other: "DQMatrix") -> "DQMatrix":
        return mat_add(self, other)

    def __sub__(self, other: "DQMatrix") -> "DQMatrix":
        return mat_sub(self, other)

    def __matmul__(self, other):
        if isinstance(other, DQVector):
            return mat_vec(self, other)
        if isinstance(other, DQMatrix):
            return mat_mul(self, other)
        return NotImplemented

    def scale(self, a: DualNumber) -> "DQMatrix":
        return DQMatrix(self.st * a.st, self.du * a.st + self.st * a.du)

    @property
    def H(self) -> "DQMatrix":
        return mat_conj_transpose(self)

    def is_hermitian(self, tol: float = HERMITIAN_TOL) -> bool:
        n, m = self.shape
        if n != m:
            return False
        h = mat_conj_transpose(self)
        return bool(
            np.max(np.abs(self.st - h.st), initial=0.0) <= tol
            and np.max(np.abs(self.du - h.du), initial=0.0) <= tol
        )

    def hermitian_part(self) -> "DQMatrix":
        """``(Q + Q*) / 2``; the explicit way to obtain a Hermitian matrix."""
        h = mat_conj_transpose(self)
        return DQMatrix((self.st + h.st) / 2, (self.du + h.du) / 2)

    def isclose(self, other: "DQMatrix", tol: float = 1e-12) -> bool:
        if self.shape != other.shape:
            return False
        return bool(
            np.max(np.abs(self.st - other.st), initial=0.0) <= tol
            and np.max(np.abs(self.du - other.du), initial=0.0) <= tol
        )


def _same_shape(a, b):
    if a.st.shape != b.st.shape:
        raise DimensionMismatch(f"{a.st.shape} vs {b.st.shape}")


# -- norms ------------------------------------------------------------------


def vec_norm2(x: DQVector) -> DualNumber:
    """Dual-number 2-norm ``sqrt(sum |x_i|^2)``."""
    nst = float(np.linalg.norm(x.st))
    if nst > APPRECIABLE_TOL:
        # sum |x_i|^2 = ||x_st||^2 + 2 <x_st, x_du> eps
        return dn_sqrt(DualNumber(nst * nst, 2.0 * float(np.sum(x.st * x.du))))
    return DualNumber(0.0, float(np.linalg.norm(x.du)))


def vec_norm2R(x: DQVector) -> float:
    return math.sqrt(float(np.sum(x.st**2) + np.sum(x.du**2)))


def mat_normF(Q: DQMatrix) -> DualNumber:
    nst = float(np.linalg.norm(Q.st))
    if nst > APPRECIABLE_TOL:
        # sc(tr(Q_st^* Q_I)) is the Euclidean inner product of the two parts
        return DualNumber(nst, float(np.sum(Q.st * Q.du)) / nst)
    return DualNumber(0.0, float(np.linalg.norm(Q.du)))


def mat_normFstar(Q: DQMatrix) -> DualNumber:
    nst = float(np.linalg.norm(Q.st))
    ndu = float(np.linalg.norm(Q.du))
    if nst > APPRECIABLE_TOL:
        return DualNumber(nst, ndu * ndu / (2.0 * nst))
    return DualNumber(0.0, ndu)


def mat_normFR(Q: DQMatrix) -> float:
    return math.sqrt(float(np.sum(Q.st**2) + np.sum(Q.du**2)))


# -- products ---------------------------------------------------------------


def mat_vec(Q: DQMatrix, x: DQVector) -> DQVector:
    n, m = Q.shape
    if m != len(x):
        raise DimensionMismatch(f"matrix {Q.shape} times vector of length {len(x)}")
    return DQVector(qa.apply(Q.st, x.st), qa.apply(Q.st, x.du) + qa.apply(Q.du, x.st))


def mat_mul(A: DQMatrix, B: DQMatrix) -> DQMatrix:
    if A.shape[1] != B.shape[0]:
        raise DimensionMismatch(f"{A.shape} @ {B.shape}")
    As, Ai = qa.embed(A.st), qa.embed(A.du)
    Bs, Bi = qa.embed(B.st), qa.embed(B.du)
    return DQMatrix(qa.unembed(As @ Bs), qa.unembed(As @ Bi + Ai @ Bs))


def inner(x: DQVector, y: DQVector) -> DualQuaternion:
    """``x* y = sum_i conj(x_i) y_i``."""
    _same_shape(x, y)
    xs, xd = qa.qconj(x.st), qa.qconj(x.du)
    st = qa.qmul(xs, y.st).sum(axis=0)
    du = (qa.qmul(xs, y.du) + qa.qmul(xd, y.st)).sum(axis=0)
    return DualQuaternion(Quaternion.from_array(st), Quaternion.from_array(du))


def quadratic_form(x: DQVector, Q: DQMatrix, y: DQVector | None = None, tol: float = 1e-9) -> DualNumber:
    """``x* Q x`` as a dual number (Hermitian ``Q``); raises NotScalar otherwise."""
    y = x if y is None else y
    return inner(x, mat_vec(Q, y)).to_dual_number(tol)


def mat_conj_transpose(Q: DQMatrix) -> DQMatrix:
    return DQMatrix(qa.qconj(Q.st.transpose(1, 0, 2)), qa.qconj(Q.du.transpose(1, 0, 2)))


def mat_add(A: DQMatrix, B: DQMatrix) -> DQMatrix:
    if A.shape != B.shape:
        raise DimensionMismatch(f"{A.shape} vs {B.shape}")
    return DQMatrix(A.st + B.st, A.du + B.du)


def mat_sub(A: DQMatrix, B: DQMatrix) -> DQMatrix:
    if A.shape != B.shape:
        raise DimensionMismatch(f"{A.shape} vs {B.shape}")
    return DQMatrix(A.st - B.st, A.du - B.du)


def outer_arrays(us, ud, vs, vd):
    """Standard and dual parts of ``u v*`` from raw ``(n, 4)`` arrays."""
    vs_c, vd_c = qa.qconj(vs)[None, :, :], qa.qconj(vd)[None, :, :]
    us_, ud_ = us[:, None, :], ud[:, None, :]
    st = qa.qmul(us_, vs_c)
    du = qa.qmul(us_, vd_c) + qa.qmul(ud_, vs_c)
    return st, du


def rank_one(lam: DualNumber, u: DQVector, v: DQVector | None = None) -> DQMatrix:
    """``u * lam * v*`` (``v`` defaults to ``u``)."""
    v = u if v is None else v
    st, du = outer_arrays(u.st, u.du, v.st, v.du)
    return DQMatrix(lam.st * st, lam.st * du + lam.du * st)


# -- I/O --------------------------------------------------------------------


def write_matrix_json(Q: DQMatrix, path) -> None:
    n, m = Q.shape
    payload = {"n": n, "m": m, "entries": Q.as_array().reshape(n * m, 8).tolist()}
    Path(path).write_text(json.dumps(payload))


def read_matrix_json(path) -> DQMatrix:
    """Read ``{"n", "m", "entries": [[8 reals], ...]}`` (row-major)."""
    payload = json.loads(Path(path).read_text())
    n, m = int(payload["n"]), int(payload["m"])
    arr = np.asarray(payload["entries"], dtype=float)
    if arr.shape != (n * m, 8):
        raise ValueError(f"expected {n * m} entries of 8 reals, got shape {arr.shape}")
    arr = arr.reshape(n, m, 8)
    return DQMatrix(arr[..., :4], arr[..., 4:])


def write_vector_csv(x: DQVector, path) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        for row in x.as_array():
            w.writerow([repr(float(v)) for v in row])


def read_vector_csv(path) -> DQVector:
    with open(path, newline="") as fh:
        rows = [[float(v) for v in row] for row in csv.reader(fh) if row]
    return DQVector.from_array(np.asarray(rows, dtype=float).reshape(-1, 8))
