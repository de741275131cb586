"""Dual quaternion Laplacians of undirected graphs, and graph generators."""
from __future__ import annotations

import csv
import math
from dataclasses import dataclass

import numpy as np

from . import _qarray as qa
from .eigen import SpectrumResult
from .errors import InvalidSparsity, NotUnitPose
from .linalg import DQMatrix, DQVector, mat_normFR, mat_vec, outer_arrays, vec_norm2R


@dataclass(frozen=True)
class Graph:
    """Undirected simple graph; edges are stored as sorted pairs ``(i, j)``, ``i < j``."""

    n: int
    edges: frozenset

    def __post_init__(self):
        norm = set()
        for i, j in self.edges:
            i, j = int(i), int(j)
            if i == j:
                raise ValueError(f"self-loop at vertex {i}")
            if not (0 <= i < self.n and 0 <= j < self.n):
                raise ValueError(f"edge ({i}, {j}) out of range for n={self.n}")
            norm.add((min(i, j), max(i, j)))
        object.__setattr__(self, "edges", frozenset(norm))

    @classmethod
    def from_edges(cls, n: int, edges) -> "Graph":
        edges = list(edges)
        seen = {(min(i, j), max(i, j)) for i, j in edges}
        if len(seen) != len(edges):
            raise ValueError("duplicate edges")
        return cls(n, frozenset(edges))

    def degrees(self) -> np.ndarray:
        deg = np.zeros(self.n)
        for i, j in self.edges:
            deg[i] += 1
            deg[j] += 1
        return deg

    def arcs(self) -> list[tuple[int, int]]:
        """Both orientations of every edge, sorted."""
        return sorted([(i, j) for i, j in self.edges] + [(j, i) for i, j in self.edges])


@dataclass(frozen=True)
class LaplacianBundle:
    L: DQMatrix
    D: np.ndarray
    A: DQMatrix


def laplacian(G: Graph, q: DQVector) -> LaplacianBundle:
    """``L = D - A`` with ``A_ij = q_i* q_j`` on edges."""
    if len(q) != G.n:
        raise ValueError(f"pose vector has length {len(q)}, graph has {G.n} vertices")
    bad = [i for i in range(G.n) if not q[i].is_unit()]
    if bad:
        raise NotUnitPose(f"poses {bad} are not unit dual quaternions")
    # conj(q_i) q_j for all pairs, masked to the edge set
    cs, cd = qa.qconj(q.st), qa.qconj(q.du)
    full_st, full_du = outer_arrays(cs, cd, cs, cd)
    mask = np.zeros((G.n, G.n))
    for i, j in G.edges:
        mask[i, j] = mask[j, i] = 1.0
    A_st = full_st * mask[..., None]
    A_du = full_du * mask[..., None]
    D = G.degrees()
    L_st = -A_st
    L_st[np.arange(G.n), np.arange(G.n), 0] += D
    return LaplacianBundle(DQMatrix(L_st, -A_du), D, DQMatrix(A_st, A_du))


def circle_graph(n: int) -> Graph:
    if n < 3:
        raise ValueError("a circle needs at least 3 vertices")
    return Graph(n, frozenset((i, (i + 1) % n) for i in range(n)))


def random_graph(n: int, s: float, rng: np.random.Generator) -> Graph:
    """Random graph with ``ceil(s n^2 / 2)`` distinct undirected edges.

    ``s = m / n^2`` counts both orientations of every edge, so the edge set
    symmetrised into arcs has ``m`` (rounded up to even) elements.
    """
    if n < 3:
        raise ValueError("n must be at least 3")
    if not 0 < s <= 1:
        raise InvalidSparsity(f"sparsity must lie in (0, 1], got {s}")
    k = math.ceil(s * n * n / 2 - 1e-9)
    if k > n * (n - 1) // 2:
        raise InvalidSparsity(f"{k} edges requested but only {n * (n - 1) // 2} exist for n={n}")
    edges: set = set()
    while len(edges) < k:
        i, j = (int(v) for v in rng.integers(0, n, size=2))
        if i != j:
            edges.add((min(i, j), max(i, j)))
    return Graph(n, frozenset(edges))


def spectrum_errors(L: DQMatrix, spec: SpectrumResult) -> tuple[float, float]:
    """``(e_lambda, e_L)``: mean eigen-residual and relative reconstruction error."""
    pairs = spec.pairs
    if not pairs:
        return 0.0, (1.0 if mat_normFR(L) > 0 else 0.0)
    e_lam = 0.0
    rec_st = np.zeros_like(L.st)
    rec_du = np.zeros_like(L.du)
    for p in pairs:
        u, lam = p.vector, p.value
        e_lam += vec_norm2R(mat_vec(L, u) - u.scale(lam))
        ost, odu = outer_arrays(u.st, u.du, u.st, u.du)
        rec_st += lam.st * ost
        rec_du += lam.st * odu + lam.du * ost
    e_lam /= len(pairs)
    e_L = mat_normFR(DQMatrix(L.st - rec_st, L.du - rec_du)) / mat_normFR(L)
    return e_lam, e_L


def write_edges_csv(G: Graph, path) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        for i, j in sorted(G.edges):
            w.writerow([i, j])


def read_edges_csv(path, n: int | None = None) -> Graph:
    with open(path, newline="") as fh:
        edges = [(int(r[0]), int(r[1])) for r in csv.reader(fh) if r]
    if n is None:
        n = 1 + max(max(e) for e in edges) if edges else 0
    return Graph.from_edges(n, edges)
