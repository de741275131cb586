"""Vectorised quaternion kernels on numpy arrays whose last axis has length 4."""
import numpy as np


def qmul(p, q):
    """Hamilton product, broadcasting over leading axes."""
    p0, p1, p2, p3 = np.moveaxis(np.asarray(p), -1, 0)
    q0, q1, q2, q3 = np.moveaxis(np.asarray(q), -1, 0)
    return np.stack(
        [
            p0 * q0 - p1 * q1 - p2 * q2 - p3 * q3,
            p0 * q1 + q0 * p1 + p2 * q3 - p3 * q2,
            p0 * q2 + q0 * p2 - p1 * q3 + p3 * q1,
            p0 * q3 + q0 * p3 + p1 * q2 - p2 * q1,
        ],
        axis=-1,
    )


_CONJ = np.array([1.0, -1.0, -1.0, -1.0])


def qconj(q):
    return np.asarray(q) * _CONJ


def qdot(p, q):
    """``sc(p* q)`` elementwise over the leading axes."""
    return np.sum(np.asarray(p) * np.asarray(q), axis=-1)


def left_matrix(q):
    """Real 4x4 matrices ``L`` with ``L(q) @ p == q * p``."""
    q = np.asarray(q, dtype=float)
    w, x, y, z = np.moveaxis(q, -1, 0)
    rows = [
        [w, -x, -y, -z],
        [x, w, -z, y],
        [y, z, w, -x],
        [z, -y, x, w],
    ]
    return np.stack([np.stack(r, axis=-1) for r in rows], axis=-2)


def embed(Q):
    """Real ``(4n, 4m)`` matrix of an ``(n, m, 4)`` quaternion matrix.

    ``embed`` is an algebra homomorphism, so quaternion matrix products and
    matrix-vector products become real ones, and ``embed(Q*) == embed(Q).T``.
    """
    Q = np.asarray(Q, dtype=float)
    n, m = Q.shape[:2]
    return left_matrix(Q).transpose(0, 2, 1, 3).reshape(4 * n, 4 * m)


def unembed(R):
    """Inverse of :func:`embed`: the first column of every 4x4 block."""
    R = np.asarray(R)
    n, m = R.shape[0] // 4, R.shape[1] // 4
    return R.reshape(n, 4, m, 4)[:, :, :, 0].transpose(0, 2, 1).copy()


def _right_operand_map():
    # RIGHT[b, a, c] = coefficient of e_c in e_a * e_b
    e = np.eye(4)
    mul = np.array([[qmul(e[a], e[b]) for b in range(4)] for a in range(4)])
    return np.ascontiguousarray(mul.transpose(1, 0, 2).reshape(4, 16))


_RIGHT = _right_operand_map()


def right_operand(V):
    """``(4m, 4)`` matrix ``W`` with rows ``W[4j + a] = e_a V_j`` for ``V`` of shape ``(m, 4)``."""
    return (V @ _RIGHT).reshape(-1, 4)


def apply(Q, V):
    """``Q @ V`` for an ``(n, m, 4)`` quaternion matrix and ``V`` of shape ``(m, 4)`` or ``(m, r, 4)``.

    ``(Q V)_i = sum_{j,a} Q_ija (e_a V_j)``, so with ``W[j, a] = e_a V_j`` the
    whole product is one GEMM against ``Q.reshape(n, 4m)``.
    """
    V = np.asarray(V)
    n, m = Q.shape[:2]
    if V.ndim == 2:
        return Q.reshape(n, 4 * m) @ right_operand(V)
    r = V.shape[1]
    W = (V.reshape(m * r, 4) @ _RIGHT).reshape(m, r, 4, 4).transpose(0, 2, 1, 3).reshape(4 * m, 4 * r)
    return (Q.reshape(n, 4 * m) @ W).reshape(n, r, 4)
