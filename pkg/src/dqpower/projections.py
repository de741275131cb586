"""Projections onto unit dual quaternions and unit-norm dual quaternion vectors.

For an appreciable input the projection is the normalization ``q / |q|``,
written out explicitly so that no dual-number division is needed.
"""
from __future__ import annotations

import math

import numpy as np

from .dual import DualQuaternion, Quaternion
from .errors import ZeroInput
from .linalg import DQVector


def project_unit_dq(q: DualQuaternion) -> DualQuaternion:
    st, du = project_unit_dq_array(q.st.as_array(), q.du.as_array())
    return DualQuaternion(Quaternion.from_array(st), Quaternion.from_array(du))


def project_unit_dq_array(st, du):
    """Entrywise projection of ``(..., 4)`` arrays onto the unit dual quaternions.

    An entry with zero standard part maps to ``du/|du| + 0 eps``.
    """
    st = np.asarray(st, dtype=float)
    du = np.asarray(du, dtype=float)
    nst = np.linalg.norm(st, axis=-1, keepdims=True)
    ndu = np.linalg.norm(du, axis=-1, keepdims=True)
    if np.any((nst == 0) & (ndu == 0)):
        raise ZeroInput("cannot project the zero dual quaternion")
    app = nst > 0
    safe = np.where(app, nst, 1.0)
    u_st = st / safe
    w = du / safe
    # remove the component of du/|st| along u_st
    u_du = w - u_st * np.sum(u_st * w, axis=-1, keepdims=True)
    inf_st = du / np.where(ndu > 0, ndu, 1.0)
    return np.where(app, u_st, inf_st), np.where(app, u_du, 0.0)


def project_unit_vec(q: DQVector) -> DQVector:
    """Projection onto dual quaternion vectors with unit 2-norm."""
    st, du = project_unit_vec_arrays(q.st, q.du)
    return DQVector(st, du)


def project_unit_vec_arrays(st, du):
    nst = math.sqrt(float(np.vdot(st, st)))
    if nst > 0.0:
        u_st = st / nst
        w = du / nst
        return u_st, w - u_st * float(np.vdot(u_st, w))
    ndu = math.sqrt(float(np.vdot(du, du)))
    if ndu == 0.0:
        raise ZeroInput("cannot project the zero vector")
    return du / ndu, np.zeros_like(du)


def random_unit_dq(rng: np.random.Generator) -> DualQuaternion:
    return project_unit_dq(DualQuaternion.from_array(rng.standard_normal(8)))


def random_unit_vec(rng: np.random.Generator, n: int) -> DQVector:
    """Standard-normal components projected to unit 2-norm."""
    return project_unit_vec(DQVector.from_array(rng.standard_normal((n, 8))))


def random_pose_vec(rng: np.random.Generator, n: int) -> DQVector:
    """A vector whose entries are each unit dual quaternions."""
    g = rng.standard_normal((n, 8))
    st, du = project_unit_dq_array(g[:, :4], g[:, 4:])
    return DQVector(st, du)

