import itertools
import os

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from sievekit import _accel, kernels


def brute_models(n_bits, clauses):
    out = []
    for mask in range(1 << n_bits):
        if all(not all((mask >> b) & 1 for b in body) or (mask >> head) & 1 for body, head in clauses):
            out.append(mask)
    return out


clause_lists = st.integers(1, 9).flatmap(
    lambda n: st.tuples(
        st.just(n),
        st.lists(st.tuples(st.frozensets(st.integers(0, n - 1), max_size=3), st.integers(0, n - 1)), max_size=12),
    )
)


@settings(max_examples=150, deadline=None)
@given(clause_lists)
def test_horn_models_match_brute_force(data):
    n, clauses = data
    want = brute_models(n, clauses)
    free = kernels.horn_models(n, clauses)
    assert [int(m) for m in free] == want


@settings(max_examples=60, deadline=None)
@given(clause_lists)
def test_horn_models_numpy_path_agrees(data):
    n, clauses = data
    with pytest.MonkeyPatch.context() as mp:
        mp.setenv(_accel.DISABLE_ENV, "1")
        assert not _accel.numba_enabled()
        slow = kernels.horn_models(n, clauses)
    fast = kernels.horn_models(n, clauses)
    assert np.array_equal(slow, fast)


def test_horn_models_no_clauses():
    assert list(kernels.horn_models(3, [])) == list(range(8))


def test_horn_models_rejects_too_many_bits():
    with pytest.raises(ValueError):
        kernels.horn_models(64, [])


def test_horn_numpy_chunks_span_boundary():
    # 17 free bits forces more than one chunk in the numpy path
    clauses = [((0,), 1)]
    with pytest.MonkeyPatch.context() as mp:
        mp.setenv(_accel.DISABLE_ENV, "1")
        slow = kernels.horn_models(17, clauses)
    fast = kernels.horn_models(17, clauses)
    assert len(slow) == 3 * (1 << 15)
    assert np.array_equal(slow, fast)


def brute_first_bad(comp):
    m = comp.shape[0]
    for h, g, f in itertools.product(range(m), repeat=3):
        if comp[h, g] < 0 or comp[g, f] < 0:
            continue
        if comp[h, comp[g, f]] != comp[comp[h, g], f]:
            return [h, g, f]
    return [-1, -1, -1]


tables = st.integers(1, 6).flatmap(
    lambda m: st.lists(st.lists(st.integers(-1, m - 1), min_size=m, max_size=m), min_size=m, max_size=m)
)


def _close_defined(comp):
    # keep only tables whose defined composites compose further, as a real category table would
    m = comp.shape[0]
    for h, g, f in itertools.product(range(m), repeat=3):
        if comp[h, g] >= 0 and comp[g, f] >= 0 and (comp[h, comp[g, f]] < 0) != (comp[comp[h, g], f] < 0):
            return False
    return True


@settings(max_examples=200, deadline=None)
@given(tables)
def test_first_nonassociative_all_paths(rows):
    comp = np.array(rows, dtype=np.int64)
    want = brute_first_bad(comp) if _close_defined(comp) else None
    got_nb = list(kernels.first_nonassociative(comp))
    with pytest.MonkeyPatch.context() as mp:
        mp.setenv(_accel.DISABLE_ENV, "1")
        got_np = list(kernels.first_nonassociative(comp))
    got_py = list(kernels._first_nonassociative_py(comp))
    assert got_nb == got_np == got_py
    if want is not None:
        assert got_nb == want


def test_cyclic_group_table_is_associative():
    n = 7
    comp = np.add.outer(np.arange(n), np.arange(n)) % n
    assert list(kernels.first_nonassociative(comp)) == [-1, -1, -1]


@given(st.integers(0, (1 << 63) - 1))
def test_mask_members_roundtrip(mask):
    assert sum(1 << i for i in kernels.mask_members(mask)) == mask


@pytest.mark.parametrize("value,enabled", [("1", False), ("true", False), ("0", True), ("", True)])
def test_env_flag(monkeypatch, value, enabled):
    monkeypatch.setenv(_accel.DISABLE_ENV, value)
    assert _accel.numba_enabled() is (enabled and _accel.numba is not None)


def test_benchmark_script_runs(capsys):
    import runpy

    path = os.path.join(os.path.dirname(__file__), "..", "benchmarks", "bench_kernels.py")
    bench = runpy.run_path(path)
    bench["main"](["--quick", "--repeat", "1"])
    rows = capsys.readouterr().out.splitlines()
    assert rows[0].split() == ["workload", "numba", "s", "numpy", "s", "speedup"]
    assert len(rows) == 5
