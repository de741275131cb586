"""Pose-graph SLAM as rank-one dual quaternion completion.

Conventions: poses ``q_i`` are unit dual quaternions, a measurement on arc
``(i, j)`` is ``q_i* q_j`` and the unknown vector is ``x = conj(q)``, so that
the consistent measurement matrix is ``Q0 = x x*``.  The solver alternates a
closed-form entrywise update of a unit-entry Hermitian matrix ``X1`` with a
rank-one update ``X2 = lam u u*`` under a growing quadratic penalty.
"""
from __future__ import annotations

import json
import math
import time
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import _qarray as qa
from .dual import DualNumber, DualQuaternion, dn_sqrt, dq_conj, dq_div_dn, dq_magnitude
from .eigen import PowerConfig, power_method
from .errors import InvalidSparsity, NoConvergence, NonPositiveLambda, NotUnitPose
from .linalg import DQMatrix, DQVector, mat_normF, mat_normFR, outer_arrays
from .projections import project_unit_dq_array, random_unit_vec

UNIT_CHECK_TOL = 1e-8


@dataclass(frozen=True)
class PoseGraph:
    """Directed measurement graph.

    ``meas[k]`` holds the 8 components of the measurement on ``arcs[k]``.
    Clean measurements must be unit; ``noise_level > 0`` lifts that check.
    """

    n: int
    arcs: tuple
    meas: np.ndarray
    noise_level: float = 0.0

    def __post_init__(self):
        arcs = tuple((int(i), int(j)) for i, j in self.arcs)
        meas = np.array(self.meas, dtype=float).reshape(len(arcs), 8)
        if len(set(arcs)) != len(arcs):
            raise ValueError("duplicate arcs")
        for i, j in arcs:
            if i == j or not (0 <= i < self.n and 0 <= j < self.n):
                raise ValueError(f"invalid arc ({i}, {j}) for n={self.n}")
        if not np.all(np.isfinite(meas)):
            raise ValueError("measurements must be finite")
        if self.noise_level == 0.0:
            bad = [a for a, m in zip(arcs, meas) if not DualQuaternion.from_array(m).is_unit(UNIT_CHECK_TOL)]
            if bad:
                raise NotUnitPose(f"measurements on arcs {bad[:5]} are not unit")
        meas.setflags(write=False)
        object.__setattr__(self, "arcs", arcs)
        object.__setattr__(self, "meas", meas)

    @property
    def measurements(self) -> dict:
        return {a: DualQuaternion.from_array(m) for a, m in zip(self.arcs, self.meas)}

    def observed(self):
        """Arc indicator ``(n, n)`` and measurement arrays ``(n, n, 4)`` x2."""
        mask = np.zeros((self.n, self.n))
        st = np.zeros((self.n, self.n, 4))
        du = np.zeros((self.n, self.n, 4))
        if self.arcs:
            ii, jj = np.array(self.arcs).T
            mask[ii, jj] = 1.0
            st[ii, jj] = self.meas[:, :4]
            du[ii, jj] = self.meas[:, 4:]
        return mask, st, du


@dataclass
class SlamConfig:
    rho0: float = 0.01
    rho1: float = 1.1
    k_max: int = 1000
    beta: float = 1e-5
    power_cfg: PowerConfig = field(default_factory=lambda: PowerConfig(max_iters=2000, tol=1e-10))
    seed: int = 0
    literal: bool = False

    def __post_init__(self):
        if not self.rho0 > 0:
            raise ValueError("rho0 must be positive")
        if not self.rho1 > 1:
            raise ValueError("rho1 must exceed 1")
        if not self.beta > 0:
            raise ValueError("beta must be positive")
        if self.k_max < 1:
            raise ValueError("k_max must be >= 1")


@dataclass
class SlamResult:
    X1: DQMatrix
    X2: DQMatrix
    lam: DualNumber
    u: DQVector
    x: DQVector
    iters: int
    gap_trace: list
    converged: bool = True

    @property
    def poses(self) -> DQVector:
        """Recovered poses, ``conj(x)``."""
        return self.x.conj()

    @property
    def gap(self) -> float:
        return self.gap_trace[-1][1] if self.gap_trace else math.nan


def _check_poses(q: DQVector) -> None:
    bad = [i for i in range(len(q)) if not q[i].is_unit(UNIT_CHECK_TOL)]
    if bad:
        raise NotUnitPose(f"poses {bad[:5]} are not unit dual quaternions")


def build_problem(poses: DQVector, arcs) -> PoseGraph:
    """Measurements ``q_i* q_j`` on every arc."""
    _check_poses(poses)
    arcs = [(int(i), int(j)) for i, j in arcs]
    if not arcs:
        return PoseGraph(len(poses), (), np.zeros((0, 8)))
    ii, jj = np.array(arcs).T
    cs, cd = qa.qconj(poses.st[ii]), qa.qconj(poses.du[ii])
    st = qa.qmul(cs, poses.st[jj])
    du = qa.qmul(cs, poses.du[jj]) + qa.qmul(cd, poses.st[jj])
    return PoseGraph(len(poses), tuple(arcs), np.hstack([st, du]))


def pose_matrix(poses: DQVector) -> DQMatrix:
    """``Q0 = x x*`` with ``x = conj(poses)``; entry ``(i, j)`` is ``q_i* q_j``."""
    x = poses.conj()
    return DQMatrix(*outer_arrays(x.st, x.du, x.st, x.du))


def add_noise(P: PoseGraph, level: float, rng: np.random.Generator) -> tuple[PoseGraph, float]:
    """Gaussian noise on all 8 components of every observed arc.

    The draw is rescaled so that ``||N||_FR / ||P_E(Q0)||_FR == level``, the
    norms taken over the observed entries.  Arcs ``(i, j)`` and ``(j, i)``
    receive independent draws.
    """
    if level < 0:
        raise ValueError("noise level must be non-negative")
    if level == 0 or not P.arcs:
        return P, 0.0
    N = rng.standard_normal(P.meas.shape)
    N *= level * np.linalg.norm(P.meas) / np.linalg.norm(N)
    noisy = P.meas + N
    realized = float(np.linalg.norm(noisy - P.meas) / np.linalg.norm(P.meas))
    return PoseGraph(P.n, P.arcs, noisy, noise_level=realized), realized


def _conjT(a):
    return qa.qconj(a.transpose(1, 0, 2))


def update_X1(P: PoseGraph, X2: DQMatrix, rho: float, literal: bool = False) -> DQMatrix:
    """Entrywise minimiser over Hermitian matrices with unit entries and unit diagonal.

    Both observations of a pair and both penalty entries are expressed in
    the ``(i, j)`` orientation (``q_ji`` and ``x2_ji`` enter conjugated) and
    the lower triangle is the conjugate of the upper one.  ``literal=True``
    evaluates the unconjugated formula on every off-diagonal entry instead;
    its output is symmetric rather than Hermitian.
    """
    if not rho > 0:
        raise ValueError("rho must be positive")
    n = P.n
    if X2.shape != (n, n):
        raise ValueError(f"X2 has shape {X2.shape}, expected {(n, n)}")
    mask, qs, qd = P.observed()
    if literal:
        flip = lambda a: a.transpose(1, 0, 2)
    else:
        flip = _conjT
    c = 1.0 / (mask + mask.T + 2 * rho)
    ms = c[..., None] * (qs + flip(qs) + rho * (X2.st + flip(X2.st)))
    md = c[..., None] * (qd + flip(qd) + rho * (X2.du + flip(X2.du)))
    # the diagonal is overwritten below; keep it projectable
    idx = np.arange(n)
    ms[idx, idx] = (1.0, 0.0, 0.0, 0.0)
    md[idx, idx] = 0.0
    us, ud = project_unit_dq_array(ms, md)
    if not literal:
        lower = np.tril_indices(n, -1)
        cs, cd = _conjT(us), _conjT(ud)
        us[lower] = cs[lower]
        ud[lower] = cd[lower]
    us[idx, idx] = (1.0, 0.0, 0.0, 0.0)
    ud[idx, idx] = 0.0
    return DQMatrix(us, ud)


def update_X2(X1: DQMatrix, cfg: PowerConfig | None = None):
    """Best rank-one approximation ``(lam u u*, lam, u)`` of ``X1``.

    A power method that runs out of iterations still contributes its last
    iterate.
    """
    try:
        pair = power_method(X1, cfg)
    except NoConvergence as exc:
        pair = exc.result
    lam, u = pair.value, pair.vector
    st, du = outer_arrays(u.st, u.du, u.st, u.du)
    return DQMatrix(lam.st * st, lam.st * du + lam.du * st), lam, u


def solve(P: PoseGraph, cfg: SlamConfig | None = None, strict: bool = True) -> SlamResult:
    """Two-block coordinate descent with penalty ``rho <- rho1 * rho``.

    Stops once ``||X1 - X2||_FR <= beta``.  After ``k_max`` sweeps raises
    :class:`NoConvergence` carrying the last iterate, unless ``strict`` is
    false.
    """
    cfg = cfg or SlamConfig()
    rng = np.random.default_rng(cfg.seed)
    u = random_unit_vec(rng, P.n)
    X2 = DQMatrix(*outer_arrays(u.st, u.du, u.st, u.du))
    rho = cfg.rho0
    pc = cfg.power_cfg
    trace = []
    converged = False
    for k in range(1, cfg.k_max + 1):
        X1 = update_X1(P, X2, rho, cfg.literal)
        X1e = X1.hermitian_part() if cfg.literal else X1
        X2, lam, u = update_X2(X1e, PowerConfig(pc.max_iters, pc.tol, pc.seed, init=u))
        rho *= cfg.rho1
        gap = mat_normFR(X1 - X2)
        trace.append((k, gap))
        if gap <= cfg.beta:
            converged = True
            break
    if lam.st <= 0:
        raise NonPositiveLambda(f"dominant eigenvalue {lam} is not positive")
    x = u.scale(dn_sqrt(lam))
    result = SlamResult(X1, X2, lam, u, x, k, trace, converged)
    if not converged and strict:
        raise NoConvergence(
            f"gap {trace[-1][1]:.3g} > beta={cfg.beta:g} after {cfg.k_max} iterations", result=result
        )
    return result


def _align(v: DQVector, i: int, literal: bool) -> DQVector:
    g = v[i]
    return v.right_mul(dq_div_dn(g if literal else dq_conj(g), dq_magnitude(g)))


def slam_errors(poses_true: DQVector, result: SlamResult, Q0: DQMatrix | None = None, literal: bool = False):
    """``(e_x, e_Q)`` for a solve against the true poses.

    Both ``x = conj(poses_true)`` and ``y = sqrt(lam) u`` are right-multiplied by
    ``conj(v_i) / |v_i|`` of their own entry ``i``, the entry of ``x`` with the
    largest 2^R magnitude.  ``literal=True`` drops the conjugate.
    """
    if Q0 is None:
        Q0 = pose_matrix(poses_true)
    e_Q = mat_normFR(Q0 - result.X2) / mat_normFR(Q0)
    x = poses_true.conj()
    i = int(np.argmax(np.sum(x.st**2, axis=1) + np.sum(x.du**2, axis=1)))
    xr = _align(x, i, literal)
    yr = _align(result.x, i, literal)
    e_x = _norm2R(yr - xr) / _norm2R(xr)
    return e_x, e_Q


def _norm2R(v: DQVector) -> float:
    return math.sqrt(float(np.sum(v.st**2) + np.sum(v.du**2)))


def objective(P: PoseGraph, X: DQMatrix) -> DualNumber:
    """``1/2 ||P_E(X - Q)||_F^2`` as a dual number."""
    mask, qs, qd = P.observed()
    R = DQMatrix((X.st - qs) * mask[..., None], (X.du - qd) * mask[..., None])
    f = mat_normF(R)
    return DualNumber(0.5 * f.st * f.st, f.st * f.du)


# -- problem generators -----------------------------------------------------


def random_poses(rng: np.random.Generator, n: int, max_translation: float = 1.0) -> DQVector:
    """Rigid poses: normalised Gaussian rotation, translation uniform in ``[0, a]^3``.

    The dual part is ``t r / 2`` for rotation ``r`` and pure quaternion ``t``.
    """
    r = rng.standard_normal((n, 4))
    r /= np.linalg.norm(r, axis=1, keepdims=True)
    t = np.zeros((n, 4))
    t[:, 1:] = max_translation * rng.random((n, 3))
    return DQVector(r, 0.5 * qa.qmul(t, r))


def random_arcs(n: int, s: float, rng: np.random.Generator) -> list[tuple[int, int]]:
    """``ceil(s n^2)`` distinct directed arcs drawn uniformly, no self-loops."""
    if n < 2:
        raise ValueError("n must be at least 2")
    if not 0 < s <= 1:
        raise InvalidSparsity(f"observation ratio must lie in (0, 1], got {s}")
    m = math.ceil(s * n * n - 1e-9)
    if m > n * (n - 1):
        raise InvalidSparsity(f"{m} arcs requested but only {n * (n - 1)} exist for n={n}")
    arcs: set = set()
    while len(arcs) < m:
        i, j = (int(v) for v in rng.integers(0, n, size=2))
        if i != j:
            arcs.add((i, j))
    return sorted(arcs)


def circle_arcs(n: int) -> list[tuple[int, int]]:
    """Both orientations of every edge of the ``n``-cycle."""
    if n < 3:
        raise ValueError("a circle needs at least 3 vertices")
    return sorted([(i, (i + 1) % n) for i in range(n)] + [((i + 1) % n, i) for i in range(n)])


@dataclass
class Trial:
    poses: DQVector
    problem: PoseGraph
    result: SlamResult
    e_x: float
    e_Q: float
    noise: float
    time_s: float


def simulate(
    n: int,
    s: float | None = None,
    noise: float = 0.0,
    seed: int = 0,
    cfg: SlamConfig | None = None,
    strict: bool = False,
) -> Trial:
    """One synthetic run: circle arcs when ``s`` is None, random arcs otherwise.

    Poses, arcs, noise and the solver start are all drawn from ``seed``.
    """
    rng = np.random.default_rng(seed)
    poses = random_poses(rng, n)
    arcs = circle_arcs(n) if s is None else random_arcs(n, s, rng)
    P, realized = add_noise(build_problem(poses, arcs), noise, rng)
    cfg = cfg or SlamConfig()
    cfg = SlamConfig(cfg.rho0, cfg.rho1, cfg.k_max, cfg.beta, cfg.power_cfg, seed, cfg.literal)
    t0 = time.perf_counter()
    res = solve(P, cfg, strict=strict)
    elapsed = time.perf_counter() - t0
    e_x, e_Q = slam_errors(poses, res)
    return Trial(poses, P, res, e_x, e_Q, realized, elapsed)


# -- I/O --------------------------------------------------------------------


def write_problem_json(P: PoseGraph, path) -> None:
    payload = {"n": P.n, "arcs": [list(a) for a in P.arcs], "measurements": P.meas.tolist()}
    Path(path).write_text(json.dumps(payload))


def read_problem_json(path) -> PoseGraph:
    payload = json.loads(Path(path).read_text())
    arcs = [tuple(a) for a in payload["arcs"]]
    meas = np.asarray(payload["measurements"], dtype=float)
    if meas.shape != (len(arcs), 8):
        raise ValueError(f"expected {len(arcs)} measurements of 8 reals, got shape {meas.shape}")
    unit = all(DualQuaternion.from_array(m).is_unit(UNIT_CHECK_TOL) for m in meas)
    # noisy problems are accepted; the level is unknown from the file alone
    return PoseGraph(int(payload["n"]), arcs, meas, noise_level=0.0 if unit else math.nan)


def write_gap_trace_csv(result: SlamResult, path) -> None:
    lines = ["iter,gap_FR"] + [f"{k},{g!r}" for k, g in result.gap_trace]
    Path(path).write_text("\n".join(lines) + "\n")

