"""Dual numbers, quaternions and dual quaternions.

All three are immutable value types.  The module-level functions
(``dn_mul``, ``q_mul``, ``dq_mul``, ...) are the primary API; the arithmetic
operators on the classes delegate to them.

A dual number is ``a = st + du*eps`` with ``eps**2 == 0``.  Quaternions are
stored as ``[w, x, y, z]`` with the Hamilton product.  A dual quaternion is a
pair of quaternions ``st + du*eps``.
"""
from __future__ import annotations

import functools
import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .errors import DivisionUndefined, NotScalar, SqrtUndefined

UNIT_TOL = 1e-9


def _check_finite(*values: float) -> None:
    for v in values:
        if not math.isfinite(v):
            raise ValueError(f"non-finite component {v!r}")


@functools.total_ordering
@dataclass(frozen=True)
class DualNumber:
    """``st + du*eps``; ordered lexicographically (standard part first)."""

    st: float = 0.0
    du: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "st", float(self.st))
        object.__setattr__(self, "du", float(self.du))
        _check_finite(self.st, self.du)

    def appreciable(self) -> bool:
        return self.st != 0.0

    def __add__(self, other):
        other = _as_dual_number(other)
        if other is NotImplemented:
            return NotImplemented
        return dn_add(self, other)

    __radd__ = __add__

    def __sub__(self, other):
        other = _as_dual_number(other)
        if other is NotImplemented:
            return NotImplemented
        return dn_sub(self, other)

    def __rsub__(self, other):
        other = _as_dual_number(other)
        if other is NotImplemented:
            return NotImplemented
        return dn_sub(other, self)

    def __neg__(self):
        return DualNumber(-self.st, -self.du)

    def __mul__(self, other):
        if isinstance(other, DualQuaternion):
            return dq_scale(other, self)
        other = _as_dual_number(other)
        if other is NotImplemented:
            return NotImplemented
        return dn_mul(self, other)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = _as_dual_number(other)
        if other is NotImplemented:
            return NotImplemented
        return dn_div(self, other)

    def __rtruediv__(self, other):
        other = _as_dual_number(other)
        if other is NotImplemented:
            return NotImplemented
        return dn_div(other, self)

    def __abs__(self):
        return dn_abs(self)

    def __lt__(self, other):
        other = _as_dual_number(other)
        if other is NotImplemented:
            return NotImplemented
        return dn_cmp(self, other) < 0

    def isclose(self, other: "DualNumber", tol: float = 1e-12) -> bool:
        return abs(self.st - other.st) <= tol and abs(self.du - other.du) <= tol

    def to_list(self) -> list[float]:
        return [self.st, self.du]

    @classmethod
    def from_list(cls, values: Sequence[float]) -> "DualNumber":
        st, du = values
        return cls(st, du)

    def __str__(self):
        sign = "-" if self.du < 0 else "+"
        return f"{self.st:g} {sign} {abs(self.du):g}ε"


def _as_dual_number(x):
    if isinstance(x, DualNumber):
        return x
    if isinstance(x, (int, float, np.integer, np.floating)):
        return DualNumber(float(x), 0.0)
    return NotImplemented


ZERO_D = DualNumber(0.0, 0.0)
ONE_D = DualNumber(1.0, 0.0)


def dn_add(a: DualNumber, b: DualNumber) -> DualNumber:
    return DualNumber(a.st + b.st, a.du + b.du)


def dn_sub(a: DualNumber, b: DualNumber) -> DualNumber:
    return DualNumber(a.st - b.st, a.du - b.du)


def dn_mul(a: DualNumber, b: DualNumber) -> DualNumber:
    return DualNumber(a.st * b.st, a.st * b.du + a.du * b.st)


def dn_div(b: DualNumber, a: DualNumber) -> DualNumber:
    """Return ``b / a``.

    Defined when ``a`` is appreciable, or when both are infinitesimal and
    ``a`` is nonzero.  In the latter case the dual part of the quotient is
    arbitrary; it is fixed to 0 here.
    """
    if a.st != 0.0:
        ratio = b.st / a.st
        return DualNumber(ratio, b.du / a.st - ratio * (a.du / a.st))
    if b.st == 0.0 and a.du != 0.0:
        return DualNumber(b.du / a.du, 0.0)
    raise DivisionUndefined(f"cannot divide {b} by {a}")


def dn_abs(a: DualNumber) -> DualNumber:
    if a.st != 0.0:
        return DualNumber(abs(a.st), math.copysign(1.0, a.st) * a.du)
    return DualNumber(0.0, abs(a.du))


def dn_sqrt(a: DualNumber) -> DualNumber:
    # only the appreciable positive branch has a closed form
    if a.st <= 0.0:
        raise SqrtUndefined(f"square root needs a positive standard part, got {a}")
    r = math.sqrt(a.st)
    return DualNumber(r, a.du / (2.0 * r))


def dn_cmp(a: DualNumber, b: DualNumber) -> int:
    """Three-way comparison under the lexicographic total order."""
    if a.st != b.st:
        return 1 if a.st > b.st else -1
    if a.du != b.du:
        return 1 if a.du > b.du else -1
    return 0


@dataclass(frozen=True)
class Quaternion:
    w: float = 0.0
    x: float = 0.0
    y: float = 0.0
    z: float = 0.0

    def __post_init__(self):
        for name in ("w", "x", "y", "z"):
            object.__setattr__(self, name, float(getattr(self, name)))
        _check_finite(self.w, self.x, self.y, self.z)

    @classmethod
    def from_array(cls, a: Iterable[float]) -> "Quaternion":
        w, x, y, z = (float(v) for v in a)
        return cls(w, x, y, z)

    def as_array(self) -> np.ndarray:
        return np.array([self.w, self.x, self.y, self.z])

    def is_zero(self) -> bool:
        return self.w == 0.0 and self.x == 0.0 and self.y == 0.0 and self.z == 0.0

    def is_vector(self) -> bool:
        return self.w == 0.0

    def __add__(self, other):
        if not isinstance(other, Quaternion):
            return NotImplemented
        return q_add(self, other)

    def __sub__(self, other):
        if not isinstance(other, Quaternion):
            return NotImplemented
        return q_sub(self, other)

    def __neg__(self):
        return Quaternion(-self.w, -self.x, -self.y, -self.z)

    def __mul__(self, other):
        if isinstance(other, Quaternion):
            return q_mul(self, other)
        if isinstance(other, (int, float, np.integer, np.floating)):
            return q_scale(self, float(other))
        return NotImplemented

    def __rmul__(self, other):
        if isinstance(other, (int, float, np.integer, np.floating)):
            return q_scale(self, float(other))
        return NotImplemented

    def __truediv__(self, other):
        if isinstance(other, (int, float, np.integer, np.floating)):
            return q_scale(self, 1.0 / float(other))
        return NotImplemented

    def isclose(self, other: "Quaternion", tol: float = 1e-12) -> bool:
        return bool(np.all(np.abs(self.as_array() - other.as_array()) <= tol))


Q_ZERO = Quaternion(0.0, 0.0, 0.0, 0.0)
Q_ONE = Quaternion(1.0, 0.0, 0.0, 0.0)


def q_add(p: Quaternion, q: Quaternion) -> Quaternion:
    return Quaternion(p.w + q.w, p.x + q.x, p.y + q.y, p.z + q.z)


def q_sub(p: Quaternion, q: Quaternion) -> Quaternion:
    return Quaternion(p.w - q.w, p.x - q.x, p.y - q.y, p.z - q.z)


def q_scale(q: Quaternion, s: float) -> Quaternion:
    return Quaternion(q.w * s, q.x * s, q.y * s, q.z * s)


def q_mul(p: Quaternion, q: Quaternion) -> Quaternion:
    """Hamilton product ``[p0 q0 - p.q, p0 q + q0 p + p x q]``."""
    return Quaternion(
        p.w * q.w - p.x * q.x - p.y * q.y - p.z * q.z,
        p.w * q.x + q.w * p.x + p.y * q.z - p.z * q.y,
        p.w * q.y + q.w * p.y - p.x * q.z + p.z * q.x,
        p.w * q.z + q.w * p.z + p.x * q.y - p.y * q.x,
    )


def q_conj(q: Quaternion) -> Quaternion:
    return Quaternion(q.w, -q.x, -q.y, -q.z)


def q_norm(q: Quaternion) -> float:
    return math.sqrt(q.w * q.w + q.x * q.x + q.y * q.y + q.z * q.z)


def q_sc(q: Quaternion) -> float:
    """Scalar part, returned as the real number ``w``."""
    return q.w


def q_dot(p: Quaternion, q: Quaternion) -> float:
    """``sc(p* q)``, the Euclidean inner product of the 4-vectors."""
    return p.w * q.w + p.x * q.x + p.y * q.y + p.z * q.z


@dataclass(frozen=True)
class DualQuaternion:
    st: Quaternion = Q_ZERO
    du: Quaternion = Q_ZERO

    @classmethod
    def from_array(cls, a: Sequence[float]) -> "DualQuaternion":
        a = np.asarray(a, dtype=float)
        if a.shape != (8,):
            raise ValueError(f"expected 8 components, got shape {a.shape}")
        return cls(Quaternion.from_array(a[:4]), Quaternion.from_array(a[4:]))

    @classmethod
    def from_dual_number(cls, a: DualNumber) -> "DualQuaternion":
        return cls(Quaternion(a.st), Quaternion(a.du))

    def as_array(self) -> np.ndarray:
        return np.concatenate([self.st.as_array(), self.du.as_array()])

    def to_list(self) -> list[float]:
        """``[w_st, x_st, y_st, z_st, w_du, x_du, y_du, z_du]``"""
        return self.as_array().tolist()

    @classmethod
    def from_list(cls, values: Sequence[float]) -> "DualQuaternion":
        return cls.from_array(values)

    def appreciable(self) -> bool:
        return not self.st.is_zero()

    def is_unit(self, tol: float = UNIT_TOL) -> bool:
        return is_unit(self, tol)

    def __add__(self, other):
        if not isinstance(other, DualQuaternion):
            return NotImplemented
        return dq_add(self, other)

    def __sub__(self, other):
        if not isinstance(other, DualQuaternion):
            return NotImplemented
        return dq_sub(self, other)

    def __neg__(self):
        return DualQuaternion(-self.st, -self.du)

    def __mul__(self, other):
        if isinstance(other, DualQuaternion):
            return dq_mul(self, other)
        if isinstance(other, DualNumber):
            return dq_scale(self, other)
        if isinstance(other, (int, float, np.integer, np.floating)):
            return dq_scale(self, DualNumber(float(other)))
        return NotImplemented

    def __rmul__(self, other):
        if isinstance(other, (int, float, np.integer, np.floating)):
            return dq_scale(self, DualNumber(float(other)))
        return NotImplemented

    def __truediv__(self, other):
        if isinstance(other, DualNumber):
            return dq_div_dn(self, other)
        if isinstance(other, (int, float, np.integer, np.floating)):
            return dq_div_dn(self, DualNumber(float(other)))
        return NotImplemented

    def isclose(self, other: "DualQuaternion", tol: float = 1e-12) -> bool:
        return bool(np.all(np.abs(self.as_array() - other.as_array()) <= tol))

    def to_dual_number(self, tol: float = 1e-9) -> DualNumber:
        """Scalar parts as a dual number; raises if vector parts exceed ``tol``."""
        a = self.as_array()
        vec = max(np.max(np.abs(a[1:4])), np.max(np.abs(a[5:8])))
        if vec > tol:
            raise NotScalar(f"vector parts up to {vec:.3g} exceed {tol:g}")
        return DualNumber(a[0], a[4])


DQ_ZERO = DualQuaternion(Q_ZERO, Q_ZERO)
DQ_ONE = DualQuaternion(Q_ONE, Q_ZERO)


def dq_add(p: DualQuaternion, q: DualQuaternion) -> DualQuaternion:
    return DualQuaternion(q_add(p.st, q.st), q_add(p.du, q.du))


def dq_sub(p: DualQuaternion, q: DualQuaternion) -> DualQuaternion:
    return DualQuaternion(q_sub(p.st, q.st), q_sub(p.du, q.du))


def dq_mul(p: DualQuaternion, q: DualQuaternion) -> DualQuaternion:
    return DualQuaternion(
        q_mul(p.st, q.st),
        q_add(q_mul(p.st, q.du), q_mul(p.du, q.st)),
    )


def dq_scale(q: DualQuaternion, a: DualNumber) -> DualQuaternion:
    """``q * a`` for a dual number ``a`` (which commutes with ``q``)."""
    return DualQuaternion(
        q_scale(q.st, a.st),
        q_add(q_scale(q.du, a.st), q_scale(q.st, a.du)),
    )


def dq_conj(q: DualQuaternion) -> DualQuaternion:
    return DualQuaternion(q_conj(q.st), q_conj(q.du))


def dq_magnitude(q: DualQuaternion) -> DualNumber:
    if q.appreciable():
        n = q_norm(q.st)
        return DualNumber(n, q_dot(q.st, q.du) / n)
    return DualNumber(0.0, q_norm(q.du))


def dq_mag2star(q: DualQuaternion) -> DualNumber:
    if q.appreciable():
        n = q_norm(q.st)
        d = q_norm(q.du)
        return DualNumber(n, d * d / (2.0 * n))
    return DualNumber(0.0, q_norm(q.du))


def dq_div_dn(q: DualQuaternion, a: DualNumber) -> DualQuaternion:
    """Return ``q / a``.  The free dual part of the infinitesimal case is 0."""
    if a.st != 0.0:
        inv = 1.0 / a.st
        return DualQuaternion(
            q_scale(q.st, inv),
            q_sub(q_scale(q.du, inv), q_scale(q.st, a.du * inv * inv)),
        )
    if q.st.is_zero() and a.du != 0.0:
        return DualQuaternion(q_scale(q.du, 1.0 / a.du), Q_ZERO)
    raise DivisionUndefined(f"cannot divide dual quaternion by {a}")


def is_unit(q: DualQuaternion, tol: float = UNIT_TOL) -> bool:
    """``|st| = 1`` and ``st du* + du st* = 0``, each within ``tol``."""
    if abs(q_norm(q.st) - 1.0) > tol:
        return False
    # st du* + du st* is the real scalar 2 sc(st du*) = 2 <st, du>
    return abs(2.0 * q_dot(q.st, q.du)) <= tol
