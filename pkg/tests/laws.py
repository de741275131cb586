"""Algebraic laws of the scalar, linear-algebra and projection layers.

Each law is a plain function of hypothesis-drawn arguments.  ``run_law``
executes it for a chosen number of examples so the same laws serve the
quick unit suite and the 10^4-case acceptance run.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np
from hypothesis import HealthCheck, assume, given, settings
from hypothesis import strategies as st

import strategies as S
from dqpower import _qarray as qa
from dqpower.dual import (
    DualNumber,
    DualQuaternion,
    Quaternion,
    dn_cmp,
    dn_div,
    dn_mul,
    dq_conj,
    dq_magnitude,
    dq_mul,
    is_unit,
    q_add,
    q_mul,
)
from dqpower.linalg import (
    inner,
    mat_normF,
    mat_vec,
    rank_one,
    vec_norm2,
    vec_norm2R,
)
from dqpower.projections import (
    project_unit_dq,
    project_unit_dq_array,
    project_unit_vec,
    random_unit_vec,
)


@dataclass(frozen=True)
class Law:
    name: str
    strategies: tuple
    check: Callable


def run_law(law: Law, max_examples: int) -> None:
    runner = settings(
        max_examples=max_examples,
        deadline=None,
        database=None,
        suppress_health_check=list(HealthCheck),
    )(given(*law.strategies)(law.check))
    runner()


def _close(a, b, tol):
    return bool(np.all(np.abs(np.asarray(a) - np.asarray(b)) <= tol))


# -- dual numbers and (dual) quaternions -----------------------------------


def div_mul_roundtrip(a: DualNumber, b: DualNumber):
    assume(abs(a.st) > 1e-3)
    r = dn_mul(dn_div(b, a), a)
    scale_st = max(1.0, abs(b.st))
    scale_du = max(1.0, abs(b.du), abs(b.st * a.du / a.st))
    assert abs(r.st - b.st) <= 1e-12 * scale_st
    assert abs(r.du - b.du) <= 1e-12 * scale_du


def self_conjugate_product(q: DualQuaternion):
    p = dq_mul(q, dq_conj(q)).as_array()
    n_st = np.linalg.norm(q.st.as_array())
    n_du = np.linalg.norm(q.du.as_array())
    scale = max(1.0, n_st * n_st, n_st * n_du)
    assert np.max(np.abs(p[[1, 2, 3, 5, 6, 7]])) <= 1e-12 * scale
    m = dq_magnitude(q)
    mm = dn_mul(m, m)
    assert abs(p[0] - mm.st) <= 1e-10 * scale
    assert abs(p[4] - mm.du) <= 1e-10 * scale


def conj_reverses_products(p: DualQuaternion, q: DualQuaternion):
    lhs = dq_conj(dq_mul(p, q)).as_array()
    rhs = dq_mul(dq_conj(q), dq_conj(p)).as_array()
    scale = max(1.0, np.linalg.norm(p.as_array()) * np.linalg.norm(q.as_array()))
    assert _close(lhs, rhs, 1e-12 * scale)


def unit_closure(p: DualQuaternion, q: DualQuaternion):
    assert is_unit(dq_mul(p, q), tol=1e-10)


def total_order(a: DualNumber, b: DualNumber, c: DualNumber):
    assert dn_cmp(a, b) == -dn_cmp(b, a)
    assert (dn_cmp(a, b) == 0) == (a == b)
    if dn_cmp(a, b) <= 0 and dn_cmp(b, c) <= 0:
        assert dn_cmp(a, c) <= 0


def quaternion_ring(p: Quaternion, q: Quaternion, r: Quaternion):
    scale = max(1.0, *(np.linalg.norm(x.as_array()) for x in (p, q, r))) ** 3
    assert _close(q_mul(q_mul(p, q), r).as_array(), q_mul(p, q_mul(q, r)).as_array(), 1e-12 * scale)
    assert _close(
        q_mul(p, q_add(q, r)).as_array(),
        q_add(q_mul(p, q), q_mul(p, r)).as_array(),
        1e-12 * scale,
    )


def commutator_is_cross_product(p: Quaternion, q: Quaternion):
    # pq - qp = 2 (0, p_vec x q_vec): nonzero unless the vector parts are parallel
    pa, qa_ = p.as_array(), q.as_array()
    diff = q_mul(p, q).as_array() - q_mul(q, p).as_array()
    want = np.concatenate([[0.0], 2 * np.cross(pa[1:], qa_[1:])])
    scale = max(1.0, np.linalg.norm(pa) * np.linalg.norm(qa_))
    assert _close(diff, want, 1e-12 * scale)


# -- vectors and matrices ----------------------------------------------------


def hermitian_normF_trace(Q):
    n = Q.shape[0]
    nst = float(np.linalg.norm(Q.st))
    assume(nst > 1e-6)
    # tr(Q_st Q_I) = sum_ij Q_st[i, j] Q_I[j, i]
    tr = qa.qmul(Q.st, Q.du.transpose(1, 0, 2)).sum(axis=(0, 1))
    # only the scalar part is real-valued in general: an off-diagonal pair
    # contributes a conj(b) + conj(a) b, whose vector part is -2 (a x b)
    scale = max(1.0, nst * float(np.linalg.norm(Q.du)))
    assert abs(mat_normF(Q).du - tr[0] / nst) <= 1e-10 * max(1.0, scale / nst)
    diag = qa.qmul(Q.st[range(n), range(n)], Q.du[range(n), range(n)]).sum(axis=0)
    assert np.max(np.abs(diag[1:])) <= 1e-10 * scale


def mat_vec_bound(Qx):
    Q, x = Qx
    bound = (np.linalg.norm(qa.embed(Q.st), 2) + np.linalg.norm(qa.embed(Q.du), 2)) * vec_norm2R(x)
    assert vec_norm2R(mat_vec(Q, x)) <= bound * (1 + 1e-12) + 1e-12


def inner_conj_symmetry(xy):
    x, y = xy
    a = inner(x, y).as_array()
    b = dq_conj(inner(y, x)).as_array()
    scale = max(1.0, vec_norm2R(x) * vec_norm2R(y))
    assert _close(a, b, 1e-12 * scale)


def rank_one_eigvec(lam: DualNumber, seed: int, n: int):
    u = random_unit_vec(np.random.default_rng(seed), n)
    y = mat_vec(rank_one(lam, u), u)
    want = u.scale(lam)
    scale = max(1.0, abs(lam.st), abs(lam.du))
    assert _close(y.as_array(), want.as_array(), 1e-10 * scale)


# -- projections ---------------------------------------------------------------


def _mag2(st_, du_):
    """``|d|^2`` as (standard, dual) arrays for ``d`` of shape ``(..., 4)``."""
    return np.sum(st_ * st_, axis=-1), 2 * np.sum(st_ * du_, axis=-1)


def _never_beaten(p_st, p_du, q_st, q_du, v_st, v_du):
    """No sample ``v`` is strictly closer to ``q`` than ``p`` under the total order."""
    n_st = float(np.linalg.norm(q_st, axis=-1).max())
    n_du = float(np.linalg.norm(q_du, axis=-1).max())
    tol_st = 1e-12 * max(1.0, n_st * n_st)
    tol_du = 1e-9 * max(1.0, n_st * n_du)
    a_st, a_du = _mag2(p_st - q_st, p_du - q_du)
    b_st, b_du = _mag2(v_st - q_st, v_du - q_du)
    worse_st = a_st > b_st + tol_st
    tie = np.abs(a_st - b_st) <= tol_st
    worse_du = tie & (a_du > b_du + tol_du)
    return not bool(np.any(worse_st | worse_du))


def feasible_samples(u_st, u_du, rng, k):
    """Three families of feasible points near and far from ``u``.

    Works for a single unit dual quaternion (width 4) and for a flattened
    unit-norm vector (width 4n): both sets read ``|st| = 1, <st, du> = 0``.
    """
    d = u_st.shape[-1]
    g = rng.standard_normal((k, 2 * d))
    far_st, far_du = project_unit_dq_array(g[:, :d], g[:, d:])
    near_st, near_du = project_unit_dq_array(u_st + 1e-2 * g[:, :d], u_du + 1e-2 * g[:, d:])
    # dual part moved inside the tangent constraint only
    t = g[:, d:] - u_st * (g[:, d:] @ u_st)[:, None]
    tan_st = np.broadcast_to(u_st, (k, d))
    tan_du = u_du + t
    return (
        np.concatenate([far_st, near_st, tan_st]),
        np.concatenate([far_du, near_du, tan_du]),
    )


def projection_optimal(q: DualQuaternion, seed: int):
    u = project_unit_dq(q)
    us, ud = u.st.as_array(), u.du.as_array()
    qs, qd = q.st.as_array(), q.du.as_array()
    vs, vd = feasible_samples(us, ud, np.random.default_rng(seed), 30)
    assert _never_beaten(us, ud, qs, qd, vs, vd)


def projection_dual_part_optimal(q: DualQuaternion, seed: int):
    qs, qd = q.st.as_array(), q.du.as_array()
    u = project_unit_dq(q)
    ud = u.du.as_array()
    n = np.linalg.norm(qs)
    assert abs(ud @ qs) <= 1e-10 * max(1.0, np.linalg.norm(qd))
    target = qd / n
    w = np.random.default_rng(seed).standard_normal((30, 4)) * max(1.0, np.linalg.norm(target))
    w -= np.outer(w @ qs, qs) / (n * n)
    best = np.sum((ud - target) ** 2)
    assert np.all(best <= np.sum((w - target) ** 2, axis=1) + 1e-10 * max(1.0, best))


def vector_projection_feasible(x):
    assume(float(np.linalg.norm(x.st)) > 1e-6)
    u = project_unit_vec(x)
    assert abs(float(np.sum(u.du * x.st))) <= 1e-9 * max(1.0, float(np.linalg.norm(x.st)))
    nrm = vec_norm2(u)
    assert abs(nrm.st - 1.0) <= 1e-10 and abs(nrm.du) <= 1e-10


def projection_idempotent(q: DualQuaternion, x):
    u = project_unit_dq(q)
    assert _close(project_unit_dq(u).as_array(), u.as_array(), 1e-10)
    assume(float(np.linalg.norm(x.st)) > 1e-6)
    v = project_unit_vec(x)
    assert _close(project_unit_vec(v).as_array(), v.as_array(), 1e-10)


_tie_prone = st.one_of(S.reals, st.sampled_from([0.0, 1.0, -1.0, 2.5]))
tie_prone_duals = st.builds(DualNumber, _tie_prone, _tie_prone)

SCALAR_LAWS = [
    Law("div_mul_roundtrip", (S.dual_numbers, S.dual_numbers), div_mul_roundtrip),
    Law("self_conjugate_product", (S.appreciable_dqs,), self_conjugate_product),
    Law("conj_reverses_products", (S.dual_quaternions, S.dual_quaternions), conj_reverses_products),
    Law("unit_closure", (S.unit_dqs, S.unit_dqs), unit_closure),
    Law("total_order", (tie_prone_duals, tie_prone_duals, tie_prone_duals), total_order),
    Law("quaternion_ring", (S.quaternions, S.quaternions, S.quaternions), quaternion_ring),
    Law("commutator_is_cross_product", (S.quaternions, S.quaternions), commutator_is_cross_product),
]

LINALG_LAWS = [
    Law("hermitian_normF_trace", (S.hermitian_matrices(),), hermitian_normF_trace),
    Law("mat_vec_bound", (S.matrix_vector_pairs(),), mat_vec_bound),
    Law("inner_conj_symmetry", (S.vector_pairs(),), inner_conj_symmetry),
    Law("rank_one_eigvec", (S.dual_numbers, S.seeds, S.sizes), rank_one_eigvec),
]

PROJECTION_LAWS = [
    Law("projection_optimal", (S.appreciable_dqs, S.seeds), projection_optimal),
    Law("projection_dual_part_optimal", (S.appreciable_dqs, S.seeds), projection_dual_part_optimal),
    Law("vector_projection_feasible", (S.dq_vectors(),), vector_projection_feasible),
    Law("projection_idempotent", (S.appreciable_dqs, S.dq_vectors()), projection_idempotent),
]

ALL_LAWS = SCALAR_LAWS + LINALG_LAWS + PROJECTION_LAWS
