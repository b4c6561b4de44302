import numpy as np
import pytest

from topt import kernels
from topt.optimizers.rm import _null_gens

BACKENDS = ["python"] + (["compiled"] if kernels.compiled_available() else [])


def test_pack_roundtrip(rng):
    for cols in (1, 63, 64, 65, 130):
        M = rng.integers(0, 2, (7, cols), dtype=np.uint8)
        assert np.array_equal(kernels.unpack_rows(kernels.pack_rows(M), cols), M)


@pytest.mark.parametrize("backend", BACKENDS)
def test_rref_is_reduced(backend, rng):
    for _ in range(20):
        M = rng.integers(0, 2, (rng.integers(1, 40), rng.integers(1, 90)), dtype=np.uint8)
        R, piv = kernels.rref(M, backend)
        assert len(R) == len(piv)
        assert list(piv) == sorted(piv)
        for r, p in enumerate(piv):
            assert R[r, p] == 1 and R[:, p].sum() == 1
        # same row space: stacking adds no rank
        both, _ = kernels.rref(np.vstack([R, M]), backend)
        assert len(both) == len(piv)


@pytest.mark.skipif(len(BACKENDS) < 2, reason="compiled kernels not built")
def test_backends_agree(rng):
    for _ in range(60):
        M = rng.integers(0, 2, (rng.integers(1, 30), rng.integers(1, 70)), dtype=np.uint8)
        a, pa = kernels.rref(M, "python")
        b, pb = kernels.rref(M, "compiled")
        assert np.array_equal(a, b) and np.array_equal(pa, pb)
    for _ in range(60):
        n, m = int(rng.integers(3, 9)), int(rng.integers(2, 30))
        A = rng.integers(0, 2, (n, m), dtype=np.uint8)
        ra = kernels.todd_scan(A, "python")
        rb = kernels.todd_scan(A, "compiled")
        assert ra[1:] == rb[1:]
        assert (ra[0] is None) == (rb[0] is None)
        if ra[0] is not None:
            assert ra[0][:2] == rb[0][:2] and np.array_equal(ra[0][2], rb[0][2])
    gens = _null_gens(4)
    for y0 in range(1, 2**15, 997):
        assert kernels.coset_min(y0, gens, "python") == kernels.coset_min(y0, gens, "compiled")


@pytest.mark.parametrize("backend", BACKENDS)
def test_coset_min_bruteforce(backend, rng):
    for _ in range(10):
        gens = rng.integers(0, 2**20, 6, dtype=np.uint64)
        y0 = int(rng.integers(0, 2**20))
        best = None
        for i in range(64):
            y = y0
            for k in range(6):
                if (i >> k) & 1:
                    y ^= int(gens[k])
            w = bin(y).count("1")
            if best is None or w < best[0]:
                best = (w, i)
        assert kernels.coset_min(y0, gens, backend) == best


def test_unknown_backend():
    with pytest.raises(ValueError):
        kernels.get_backend("fortran")


def test_pure_python_fallback_selected_by_env():
    import os
    import subprocess
    import sys

    code = (
        "from topt import kernels\n"
        "from topt.harness import compile_circuit\n"
        "from topt.circuit import parse\n"
        "assert kernels.BACKEND_NAME == 'python', kernels.BACKEND_NAME\n"
        "r = compile_circuit(parse('qubits 2\\nT q0\\nH q0\\nCNOT q0 q1\\nT q1\\nH q0'))\n"
        "print(r.T_after)\n"
    )
    env = dict(os.environ, TOPT_PURE_PYTHON="1")
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True)
    assert int(out.stdout) <= 2
