import os
import subprocess
import sys

import pytest
from hypothesis import given
from hypothesis import strategies as st

from linkwb import _kernels_py, kernels

BACKENDS = kernels.available_backends()
P = 32003


def test_backend_selected():
    assert kernels.BACKEND in BACKENDS
    assert "python" in BACKENDS


def test_compiled_backend_is_built():
    # the package ships the extension; a missing build is a packaging bug
    assert "cython" in BACKENDS, "Cython extension not built"


def test_pure_python_forced_by_env():
    code = "from linkwb import kernels; print(kernels.BACKEND)"
    env = dict(os.environ, LK_PURE_PYTHON="1")
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True)
    assert out.stdout.strip() == "python"


@st.composite
def sparse_vectors(draw, max_len=12):
    keys = draw(st.lists(st.integers(0, 10_000), max_size=max_len, unique=True))
    keys.sort(reverse=True)
    return [(k, k * 7 + 1, draw(st.integers(1, P - 1))) for k in keys]


@pytest.mark.skipif("cython" not in BACKENDS, reason="compiled backend unavailable")
@given(sparse_vectors(), sparse_vectors(), st.integers(1, P - 1), st.integers(0, 50))
def test_axpy_and_shift_agree(f, g, c, mk):
    cy = BACKENDS["cython"]
    py = _kernels_py
    assert cy.shift(f, mk, 7 * mk, c, P) == py.shift(f, mk, 7 * mk, c, P)
    for fs in (0, min(1, len(f))):
        for gs in (0, min(1, len(g))):
            a = cy.axpy(f, fs, g, gs, c, mk, 7 * mk, P)
            b = py.axpy(f, fs, g, gs, c, mk, 7 * mk, P)
            assert a == b
            assert all(t[2] for t in a)
            assert [t[0] for t in a] == sorted((t[0] for t in a), reverse=True)


def _dense_rows(data, ncols):
    return [row[:ncols] for row in data]


@pytest.mark.skipif("cython" not in BACKENDS, reason="compiled backend unavailable")
@given(st.integers(1, 6), st.lists(st.lists(st.integers(0, 6), min_size=6, max_size=6),
                                   max_size=7))
def test_rref_agrees(ncols, data):
    rows = _dense_rows(data, ncols)
    a = BACKENDS["cython"].rref(rows, ncols, 7)
    b = _kernels_py.rref(rows, ncols, 7)
    assert [list(r) for r in a[0]] == [list(r) for r in b[0]]
    assert list(a[1]) == list(b[1])
    assert BACKENDS["cython"].rank(rows, ncols, 7) == len(b[1])


def test_rref_against_oracle():
    from oracles import echelon

    rows = [[1, 2, 3], [2, 4, 6], [0, 1, 5], [3, 0, 1]]
    rows_o, piv_o = echelon(rows, 7)
    for impl in BACKENDS.values():
        r, piv = impl.rref(rows, 3, 7)
        assert [list(x) for x in r] == rows_o
        assert list(piv) == piv_o


def _run_gb(impl):
    from linkwb.ideals import GradedRing, buchberger

    saved = {n: getattr(kernels, n) for n in ("shift", "axpy", "reduce_vector", "rref", "rank")}
    try:
        for n in saved:
            setattr(kernels, n, getattr(impl, n))
        R = GradedRing.poly("x,y,z,t")
        G = buchberger([R.parse(s) for s in
                        ["x*y - z*t", "x^2*z - y*t^2", "y^3 - x*z*t", "x*z^2 + y*t^2"]])
        return [str(g) for g in G]
    finally:
        for n, f in saved.items():
            setattr(kernels, n, f)


def test_groebner_identical_across_backends():
    results = {name: _run_gb(impl) for name, impl in BACKENDS.items()}
    outs = list(results.values())
    assert all(o == outs[0] for o in outs)


def test_resolution_identical_across_backends():
    code = ("from linkwb.ideals import GradedRing; from linkwb.modules import FPModule;"
            "R=GradedRing.poly('x,y,z').quotient(['x^2','y*z']);"
            "M=FPModule.residue_field(R); r=M.resolution(4);"
            "print(r.betti_numbers(4), [str(r.d(i)) for i in (1,2,3)])")
    outs = set()
    for flag in ("0", "1"):
        env = dict(os.environ, LK_PURE_PYTHON=flag)
        res = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True,
                             text=True, check=True)
        outs.add(res.stdout)
    assert len(outs) == 1


def test_benchmark_script_runs(tmp_path):
    import json
    from pathlib import Path

    bench = Path(__file__).resolve().parents[1] / "benchmarks" / "bench_kernels.py"
    out = tmp_path / "bench.json"
    subprocess.run([sys.executable, str(bench), "--repeat", "1", "--json", str(out)],
                   check=True, capture_output=True, text=True)
    data = json.loads(out.read_text())
    assert "python" in data["micro"] and "python" in data["macro"]
    assert set(data["macro"]["python"]) == {"gb_4var", "resolution_k", "ext_tor_hypersurface"}
