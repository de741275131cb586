"""Power method, deflation, dual-part recovery and rank-one approximation
for dual quaternion Hermitian matrices.

Each power step is ``y_st = Q_st v_st`` and ``y_du = Q_st v_du + Q_du v_st``,
computed as two real GEMMs (see ``_qarray.apply``).
"""
from __future__ import annotations

import csv
import functools
import math
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from . import _qarray as qa
from .dual import ZERO_D, DualNumber, dn_cmp, dn_sqrt
from .errors import NoConvergence, NotHermitian, SingularSystem, ZeroStandardPart
from .linalg import APPRECIABLE_TOL, DQMatrix, DQVector, mat_normFR, outer_arrays
from .projections import project_unit_vec_arrays, random_unit_vec


@dataclass
class PowerConfig:
    max_iters: int = 5000
    tol: float = 1e-8
    seed: int = 0
    init: DQVector | None = None

    def __post_init__(self):
        if self.max_iters < 1:
            raise ValueError("max_iters must be >= 1")
        if not self.tol > 0:
            raise ValueError("tol must be positive")


class TraceRow(NamedTuple):
    iter: int
    residual_2R: float
    value: DualNumber


@dataclass
class EigenPair:
    value: DualNumber
    vector: DQVector
    iters: int
    trace: list[TraceRow] = field(default_factory=list)
    residual: float = math.nan
    converged: bool = True


@dataclass
class SpectrumResult:
    n: int
    pairs: list[EigenPair]
    deflation_residual: float

    @property
    def values(self) -> list[DualNumber]:
        return [p.value for p in self.pairs]

    def padded_values(self) -> list[DualNumber]:
        """Eigenvalues padded with ``0`` up to ``n``.

        The pairs not found by deflation have standard part below the
        deflation threshold.
        """
        return self.values + [ZERO_D] * (self.n - len(self.pairs))


def _check_hermitian(Q: DQMatrix) -> None:
    if not Q.is_hermitian():
        raise NotHermitian(f"matrix of shape {Q.shape} is not Hermitian")


def _initial_vector(n: int, cfg: PowerConfig):
    if cfg.init is not None:
        if len(cfg.init) != n:
            raise ValueError(f"initial vector has length {len(cfg.init)}, expected {n}")
        v = cfg.init
    else:
        v = random_unit_vec(np.random.default_rng(cfg.seed), n)
    vs, vd = project_unit_vec_arrays(v.st, v.du)
    return vs, vd


def power_method(Q: DQMatrix, cfg: PowerConfig | None = None) -> EigenPair:
    """Dominant eigenpair of a Hermitian dual quaternion matrix.

    Iterates ``y = Q v``, ``lam = v* y``, ``v <- y / ||y||_2`` and stops as
    soon as ``||y - v lam||_2R <= tol * ||Q||_FR``.  The returned pair is the
    one that passed the test, so ``iters`` counts the normalisation steps
    taken before it.  Raises :class:`NoConvergence` carrying the last pair
    when ``max_iters`` products did not suffice.
    """
    cfg = cfg or PowerConfig()
    _check_hermitian(Q)
    if not Q.appreciable():
        raise ZeroStandardPart("standard part of the matrix is zero")
    n = Q.shape[0]
    Qs = Q.st.reshape(n, 4 * n)
    # [Q_st | Q_du] against [W(v_du); W(v_st)] yields the dual part in one product
    Qsd = np.hstack([Qs, Q.du.reshape(n, 4 * n)])
    threshold = cfg.tol * mat_normFR(Q)
    vs, vd = _initial_vector(n, cfg)

    hist = np.empty((cfg.max_iters, 3))
    for k in range(cfg.max_iters):
        ws = qa.right_operand(vs)
        ys = Qs @ ws
        yd = Qsd @ np.vstack([qa.right_operand(vd), ws])
        # v* y is a dual number for Hermitian Q; only its scalar parts are kept
        lam_st = float(np.vdot(vs, ys))
        lam_du = float(np.vdot(vs, yd) + np.vdot(vd, ys))
        rs = ys - vs * lam_st
        rd = yd - vs * lam_du - vd * lam_st
        res = math.sqrt(float(np.vdot(rs, rs) + np.vdot(rd, rd)))
        hist[k] = res, lam_st, lam_du
        if res <= threshold:
            return EigenPair(DualNumber(lam_st, lam_du), _as_vector(vs, vd), k, _trace(hist[: k + 1]), res, True)
        if k + 1 == cfg.max_iters:
            break
        vs, vd = project_unit_vec_arrays(ys, yd)

    pair = EigenPair(DualNumber(lam_st, lam_du), _as_vector(vs, vd), cfg.max_iters, _trace(hist), res, False)
    raise NoConvergence(
        f"power method: residual {res:.3g} > {threshold:.3g} after {cfg.max_iters} iterations",
        result=pair,
    )


def _trace(hist) -> list[TraceRow]:
    return [TraceRow(k, float(r), DualNumber(a, b)) for k, (r, a, b) in enumerate(hist)]


def _as_vector(vs, vd) -> DQVector:
    return DQVector(np.reshape(vs, (-1, 4)), np.reshape(vd, (-1, 4)))


def recover_dual_part(Q: DQMatrix, v_st, lam_st: float | None = None, null_tol: float = 1e-7):
    """Dual parts of an eigenpair from a standard-part eigenvector.

    Solves ``lam_du = v_st* Q_du v_st`` and
    ``(Q_st - lam_st) v_du = lam_du v_st - Q_du v_st`` with ``sc(v_du* v_st) = 0``
    by minimum-norm least squares in the real embedding.  The three
    remaining null directions ``v_st * {i, j, k}`` are the gauge of unit dual
    quaternion right factors; any further rank loss raises SingularSystem.
    """
    vs = np.asarray(v_st.st if isinstance(v_st, DQVector) else v_st, dtype=float).reshape(-1)
    n = Q.shape[0]
    if vs.shape != (4 * n,):
        raise ValueError(f"standard-part vector must have {n} quaternion entries")
    Rs, Ri = qa.embed(Q.st), qa.embed(Q.du)
    if lam_st is None:
        lam_st = float(vs @ Rs @ vs)
    qi_v = Ri @ vs
    lam_du = float(vs @ qi_v)

    A = Rs - lam_st * np.eye(4 * n)
    sv = np.linalg.svd(A, compute_uv=False)
    scale = max(float(sv[0]), 1.0)
    nullity = int(np.sum(sv <= null_tol * scale))
    if nullity > 4:
        raise SingularSystem(
            f"eigenvalue {lam_st:.6g} has a {nullity}-dimensional real null space; "
            "the dual part is not determined by the standard part alone"
        )
    A_aug = np.vstack([A, vs[None, :]])
    b_aug = np.concatenate([lam_du * vs - qi_v, [0.0]])
    vd, *_ = np.linalg.lstsq(A_aug, b_aug, rcond=null_tol)
    return DualNumber(lam_st, lam_du), _as_vector(vs, vd)


def all_eigenpairs(
    Q: DQMatrix,
    cfg: PowerConfig | None = None,
    gamma: float | None = None,
    strict: bool = True,
) -> SpectrumResult:
    """All appreciable eigenpairs by repeated power method and deflation.

    Deflates ``Q_{k+1} = Q_k - lam_k u_k u_k*`` until
    ``||Q_{k+1,st}||_F <= gamma`` (default ``1e-6 ||Q_st||_F``) or ``n``
    pairs are found.  Sub-call ``k`` starts from seed ``cfg.seed + k``.
    With ``strict=False`` a non-converged sub-call contributes its last
    iterate (``converged=False``) instead of raising.
    """
    cfg = cfg or PowerConfig()
    _check_hermitian(Q)
    n = Q.shape[0]
    st = np.array(Q.st)
    du = np.array(Q.du)
    if gamma is None:
        gamma = 1e-6 * float(np.linalg.norm(st))
    pairs: list[EigenPair] = []
    resid = float(np.linalg.norm(st))
    for k in range(n):
        if resid <= gamma or resid <= APPRECIABLE_TOL:
            break
        sub = PowerConfig(cfg.max_iters, cfg.tol, cfg.seed + k, cfg.init if k == 0 else None)
        try:
            pair = power_method(DQMatrix(st, du), sub)
        except NoConvergence as exc:
            if strict:
                partial = SpectrumResult(n, _sorted(pairs + [exc.result]), resid)
                raise NoConvergence(f"deflation step {k}: {exc}", result=partial, index=k) from exc
            pair = exc.result
        pairs.append(pair)
        ost, odu = outer_arrays(pair.vector.st, pair.vector.du, pair.vector.st, pair.vector.du)
        lam = pair.value
        st = st - lam.st * ost
        du = du - (lam.st * odu + lam.du * ost)
        # rounding leaves Q_k slightly non-Hermitian; restore it explicitly
        st, du = _hermitian_arrays(st, du)
        resid = float(np.linalg.norm(st))
    return SpectrumResult(n, _sorted(pairs), resid)


def _hermitian_arrays(st, du):
    sth = qa.qconj(st.transpose(1, 0, 2))
    duh = qa.qconj(du.transpose(1, 0, 2))
    return (st + sth) / 2, (du + duh) / 2


def _sorted(pairs: list[EigenPair]) -> list[EigenPair]:
    key = functools.cmp_to_key(lambda a, b: dn_cmp(a.value, b.value))
    # sorted() is stable with reverse=True, so ties keep insertion order
    return sorted(pairs, key=key, reverse=True)


def best_rank_one(Q: DQMatrix, cfg: PowerConfig | None = None) -> tuple[DualNumber, DQVector]:
    """``(lam, u)`` minimising ``||Q - lam u u*||_F^2``: the dominant eigenpair."""
    pair = power_method(Q, cfg)
    return pair.value, pair.vector


def singular_values(
    A: DQMatrix, cfg: PowerConfig | None = None, gamma: float | None = None, strict: bool = True
) -> list[DualNumber]:
    """Appreciable singular values of ``A``: square roots of the eigenvalues of ``A* A``."""
    B = (A.H @ A).hermitian_part()
    if not B.appreciable():
        return []
    spec = all_eigenpairs(B, cfg, gamma, strict)
    cut = 1e-6 * float(np.linalg.norm(B.st)) if gamma is None else gamma
    return [dn_sqrt(v) for v in spec.values if v.st > cut]


def write_trace_csv(pair: EigenPair, path) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["iter", "residual_2R", "lambda_st", "lambda_du"])
        for row in pair.trace:
            w.writerow([row.iter, repr(row.residual_2R), repr(row.value.st), repr(row.value.du)])
