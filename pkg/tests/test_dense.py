import itertools
import os
import subprocess
import sys

import numpy as np
import pytest

from eqschubert import kernels
from eqschubert import permutation as perm
from eqschubert import positivity as pos
from eqschubert.dense import DenseEngine, DenseSpace, KernelOverflow
from eqschubert.expand import structure_constants
from eqschubert.polyring import NotDivisible, parse, t
from eqschubert.positivity import NotTranslationInvariant, to_alpha

BACKENDS = ["numpy"] + (["numba"] if kernels.HAVE_NUMBA else [])


@pytest.mark.parametrize("backend", BACKENDS)
def test_mul_and_divide_round_trip(backend):
    sp = DenseSpace(4, kernels.get_backend(backend))
    p = parse("(t_1 - 2*t_3)*(t_2 + t_4)^2 + 7*t_1*t_2*t_3")
    vec = sp.from_poly(p, 3)
    assert sp.to_poly(vec, 3) == p
    lin = sp.from_poly(t(2) - t(4), 1)
    prod = sp.mul(vec, 3, lin, 1)
    assert sp.to_poly(prod, 4) == p * (t(2) - t(4))
    assert np.array_equal(sp.divide_linear(prod, 4, 2, 4), vec)
    with pytest.raises(NotDivisible):
        sp.divide_linear(vec, 3, 1, 2)
    with pytest.raises(NotDivisible):
        sp.divide_linear(np.array([1], dtype=np.int64), 0, 1, 2)


@pytest.mark.parametrize("backend", BACKENDS)
def test_alpha_matrices_match_generic(backend):
    sp = DenseSpace(4, kernels.get_backend(backend))
    for expr in ("t_2 - t_1", "(t_4 - t_1)^3", "(t_3 - t_2)*(t_4 - t_2) + (t_2 - t_1)^2", "0"):
        p = parse(expr)
        d = p.total_degree() or 2
        vec = sp.from_poly(p, d)
        assert sp.alpha_to_poly(sp.to_alpha(vec, d), d) == to_alpha(p, 4).poly
    with pytest.raises(NotTranslationInvariant):
        sp.to_alpha(sp.from_poly(t(1) * t(2), 2), 2)


def test_numba_and_numpy_kernels_agree():
    if not kernels.HAVE_NUMBA:
        pytest.skip("numba not installed")
    rng = np.random.default_rng(0)
    sp = DenseSpace(4)
    a = rng.integers(-50, 50, size=sp.t.size(4))
    b = rng.integers(-50, 50, size=sp.t.size(2))
    table = sp.t.mul_table(4, 2)
    out1 = rng.integers(-9, 9, size=sp.t.size(6))
    out2 = out1.copy()
    nb, npk = kernels.Backend("numba"), kernels.Backend("numpy")
    assert nb.mul_acc(out1, a, b, table, -1) == npk.mul_acc(out2, a, b, table, -1) == kernels.OK
    assert np.array_equal(out1, out2)
    ranks = np.array([perm.rank_matrix(w) for w in perm.all_permutations(4)])
    assert np.array_equal(nb.bruhat_matrix(ranks), npk.bruhat_matrix(ranks))
    m = rng.integers(-3, 3, size=(5, 7))
    vec = rng.integers(-3, 3, size=7)
    r1, r2 = np.zeros(5, dtype=np.int64), np.zeros(5, dtype=np.int64)
    nb.matvec(m, 3.0, vec, r1)
    npk.matvec(m, 3.0, vec, r2)
    assert np.array_equal(r1, r2) and np.array_equal(r1, m @ vec)


@pytest.mark.parametrize("backend", BACKENDS)
def test_bruhat_matrix_matches_rank_criterion(backend):
    perms = perm.all_permutations(4)
    ranks = np.array([perm.rank_matrix(w) for w in perms])
    leq = kernels.get_backend(backend).bruhat_matrix(ranks)
    for (i, u), (j, w) in itertools.product(enumerate(perms), repeat=2):
        assert leq[i, j] == perm.bruhat_leq(u, w)


@pytest.mark.parametrize("backend", BACKENDS)
@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_dense_engine_matches_reference(tables, backend, n):
    eng = DenseEngine(n, backend, tables[n])
    for u, v in itertools.combinations_with_replacement(perm.all_permutations(n), 2):
        assert eng.structure_constants(u, v).coefficients == structure_constants(tables[n], u, v).coefficients


@pytest.mark.parametrize("backend", BACKENDS)
def test_overflow_guard_trips(backend, monkeypatch):
    sp = DenseSpace(3, kernels.get_backend(backend))
    big = sp.from_poly(parse("t_1 + t_2"), 1)
    monkeypatch.setattr(kernels, "LIMIT", 2.0)
    with pytest.raises(KernelOverflow):
        sp.mul(big, 1, big, 1)
    with pytest.raises(KernelOverflow):
        sp.divide_linear(sp.from_poly(parse("4*t_1 - 4*t_2"), 1), 1, 1, 2)


def test_sweep_falls_back_to_exact_arithmetic(monkeypatch):
    expected = pos.verify_all(4, engine="reference", sample_audit=False).to_json(timing=False)
    monkeypatch.setattr(kernels, "LIMIT", 40.0)
    calls = []
    real = pos._Worker._dense_alpha

    def spy(self, u, v):
        try:
            return real(self, u, v)
        except KernelOverflow:
            calls.append((u, v))
            raise

    monkeypatch.setattr(pos._Worker, "_dense_alpha", spy)
    got = pos.verify_all(4, engine="dense", sample_audit=False).to_json(timing=False)
    assert calls, "limit too loose to exercise the fallback"
    expected["engine"] = "dense"
    assert got == expected


def test_env_flag_selects_numpy():
    code = "from eqschubert import kernels; print(kernels.default_backend_name())"
    env = dict(os.environ, EQSCHUBERT_NUMBA="0")
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True)
    assert out.stdout.strip() == "numpy"
    env["EQSCHUBERT_NUMBA"] = "1"
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True)
    assert out.stdout.strip() == ("numba" if kernels.HAVE_NUMBA else "numpy")


@pytest.mark.parametrize("backend", BACKENDS)
def test_mul_acc_rejects_mismatched_shapes(backend):
    sp = DenseSpace(3)
    out = np.zeros(sp.t.size(3), dtype=np.int64)
    with pytest.raises(ValueError):
        kernels.get_backend(backend).mul_acc(out, np.ones(4, dtype=np.int64), np.ones(3, dtype=np.int64), sp.t.mul_table(2, 1))


def test_unknown_backend():
    with pytest.raises(ValueError):
        kernels.Backend("cuda")


def test_benchmark_script_runs(capsys):
    import importlib.util
    from pathlib import Path

    path = Path(__file__).parent.parent / "benchmarks" / "bench_kernels.py"
    spec = importlib.util.spec_from_file_location("bench_kernels", path)
    mod = importlib.util.module_from_spec(spec)
    spec.loader.exec_module(mod)
    assert mod.main(["--n", "3", "--repeats", "2", "--reference"]) == 0
    assert "reports agree: True" in capsys.readouterr().out
