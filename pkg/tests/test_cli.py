import json

import numpy as np
import pytest

from builders import circle_laplacian
from dqpower.cli import main
from dqpower.dual import DualNumber
from dqpower.graphs import read_edges_csv
from dqpower.linalg import DQMatrix, read_matrix_json, read_vector_csv, write_matrix_json, write_vector_csv
from dqpower.slam import build_problem, circle_arcs, random_poses, write_problem_json


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out = capsys.readouterr()
    return code, out.out, out.err


@pytest.fixture
def diag_file(tmp_path):
    p = tmp_path / "diag.json"
    write_matrix_json(DQMatrix.diag([DualNumber(2, 1), DualNumber(1, 0)]), p)
    return p


def test_eig_diagonal(capsys, diag_file, tmp_path):
    code, out, _ = run(capsys, "eig", diag_file, "--out-dir", tmp_path / "o", "--trace-out", tmp_path / "t.csv")
    assert code == 0
    assert "lambda = 2 + 1ε" in out
    meta = json.loads((tmp_path / "o" / "eig.json").read_text())
    assert meta["converged"] and abs(meta["lambda"][0] - 2) < 1e-8
    assert len(read_vector_csv(tmp_path / "o" / "eigenvector.csv")) == 2
    assert (tmp_path / "t.csv").read_text().startswith("iter,residual_2R,lambda_st,lambda_du")


def test_eig_circle(capsys, tmp_path):
    L, _ = circle_laplacian(5, 0)
    write_matrix_json(L, tmp_path / "L.json")
    code, out, _ = run(capsys, "eig", tmp_path / "L.json")
    assert code == 0 and "lambda = 3.61803" in out


def test_exit_codes(capsys, tmp_path, diag_file):
    (tmp_path / "bad.json").write_text("{not json")
    assert run(capsys, "eig", tmp_path / "bad.json")[0] == 2
    assert run(capsys, "eig", tmp_path / "missing.json")[0] == 2
    st = np.zeros((2, 2, 4))
    st[0, 1, 0] = 1.0
    write_matrix_json(DQMatrix(st), tmp_path / "nh.json")
    assert run(capsys, "eig", tmp_path / "nh.json")[0] == 3
    assert run(capsys, "eigs-all", tmp_path / "nh.json")[0] == 3
    L, _ = circle_laplacian(6, 0)
    write_matrix_json(L, tmp_path / "L.json")
    code, out, err = run(capsys, "eig", tmp_path / "L.json", "--max-iters", 3)
    assert code == 4 and "lambda =" in out and "warning" in err
    assert run(capsys, "randgraph", "--n", 10, "--sparsity", 1.0)[0] == 2


def test_eigs_all(capsys, tmp_path):
    for n, want in ((6, [4, 3, 3, 1, 1]), (7, [3.8019, 3.8019, 2.4450, 2.4450, 0.7530, 0.7530])):
        L, _ = circle_laplacian(n, 1)
        write_matrix_json(L, tmp_path / "L.json")
        code, out, _ = run(capsys, "eigs-all", tmp_path / "L.json", "--out-dir", tmp_path / f"o{n}")
        assert code == 0 and "e_lambda" in out and "time per eigenvalue" in out
        spec = json.loads((tmp_path / f"o{n}" / "spectrum.json").read_text())
        np.testing.assert_allclose([v[0] for v in spec["eigenvalues"]], want, atol=1e-3)
        assert spec["e_L"] <= 1e-8


def test_eigs_all_zero_matrix(capsys, tmp_path):
    write_matrix_json(DQMatrix.zeros(3), tmp_path / "z.json")
    code, _, _ = run(capsys, "eigs-all", tmp_path / "z.json", "--out-dir", tmp_path / "o")
    assert code == 0
    assert json.loads((tmp_path / "o" / "spectrum.json").read_text())["eigenvalues"] == []


def test_eigs_all_partial(capsys, tmp_path):
    L, _ = circle_laplacian(6, 0)
    write_matrix_json(L, tmp_path / "L.json")
    assert run(capsys, "eigs-all", tmp_path / "L.json", "--max-iters", 5)[0] == 4
    code, out, _ = run(capsys, "eigs-all", tmp_path / "L.json", "--max-iters", 5, "--allow-partial")
    assert code == 0 and "not converged" in out


def test_generators(capsys, tmp_path):
    code, out, _ = run(capsys, "circle", "--n", 5, "--out-dir", tmp_path / "c")
    assert code == 0 and "poses" in out
    L = read_matrix_json(tmp_path / "c" / "laplacian.json")
    assert L.shape == (5, 5) and L.is_hermitian()
    q = read_vector_csv(tmp_path / "c" / "poses.csv")
    assert all(q[i].is_unit() for i in range(5))

    run(capsys, "randgraph", "--n", 10, "--sparsity", 0.5, "--seed", 3, "--out-dir", tmp_path / "r1")
    run(capsys, "randgraph", "--n", 10, "--sparsity", 0.5, "--seed", 3, "--out-dir", tmp_path / "r2")
    G = read_edges_csv(tmp_path / "r1" / "edges.csv", n=10)
    assert len(G.edges) >= 25
    for name in ("laplacian.json", "poses.csv", "edges.csv"):
        assert (tmp_path / "r1" / name).read_bytes() == (tmp_path / "r2" / name).read_bytes()


def test_slam_circle(capsys, tmp_path):
    code, out, _ = run(capsys, "slam", "--circle", 5, "--reps", 2, "--out-dir", tmp_path / "s")
    assert code == 0 and "mean:" in out
    m = json.loads((tmp_path / "s" / "metrics.json").read_text())
    assert len(m["reps"]) == 2 and m["mean_e_x"] <= 1e-4
    assert (tmp_path / "s" / "poses_rep1.csv").exists()
    assert (tmp_path / "s" / "gap_trace_rep0.csv").read_text().startswith("iter,gap_FR")


def test_slam_deterministic(capsys, tmp_path):
    for d in ("a", "b"):
        run(capsys, "slam", "--randgraph", 6, 0.5, "--noise", 0.05, "--reps", 1, "--seed", 9, "--out-dir", tmp_path / d)
    for name in ("poses_rep0.csv", "gap_trace_rep0.csv"):
        assert (tmp_path / "a" / name).read_bytes() == (tmp_path / "b" / name).read_bytes()


def test_slam_problem_file(capsys, tmp_path):
    q = random_poses(np.random.default_rng(0), 5)
    write_problem_json(build_problem(q, circle_arcs(5)), tmp_path / "p.json")
    write_vector_csv(q, tmp_path / "truth.csv")
    code, out, _ = run(capsys, "slam", "--problem", tmp_path / "p.json", "--truth", tmp_path / "truth.csv",
                       "--out-dir", tmp_path / "o")
    assert code == 0
    m = json.loads((tmp_path / "o" / "metrics.json").read_text())
    assert m["mean_e_x"] <= 1e-4 and m["mean_e_Q"] <= 1e-4
    assert len(read_vector_csv(tmp_path / "o" / "poses.csv")) == 5


def test_slam_budget(capsys):
    assert run(capsys, "slam", "--circle", 5, "--reps", 1, "--k-max", 2)[0] == 4
    assert run(capsys, "slam", "--circle", 5, "--reps", 1, "--k-max", 2, "--allow-partial")[0] == 0


def test_slam_bad_problem(capsys, tmp_path):
    (tmp_path / "p.json").write_text('{"n": 2, "arcs": [[0, 1]], "measurements": [[1, 0]]}')
    assert run(capsys, "slam", "--problem", tmp_path / "p.json")[0] == 2
