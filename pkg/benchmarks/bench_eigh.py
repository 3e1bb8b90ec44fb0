#!/usr/bin/env python3
"""Benchmark the Jacobi eigensolver: numba kernel vs pure-numpy fallback.

Usage:
    python3 benchmarks/bench_eigh.py [--dims 16,32,64,128,256] [--repeats 3]

The same Hermitian test matrices go through both sweep kernels; the
table reports the best-of-N wall time per backend and the worst
eigenvalue disagreement between them as a sanity check.
"""

import argparse
import time

import numpy as np

import gradedortho as go
from gradedortho import kernels


def random_hermitian(rng, n, cond=1e4):
    a = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    u, _ = np.linalg.qr(a)
    w = np.exp(rng.uniform(-0.5 * np.log(cond), 0.5 * np.log(cond), size=n))
    return go.hermitize((u * w) @ u.conj().T)[0]


def time_backend(backend, matrix, repeats):
    best = float("inf")
    values = None
    for _ in range(repeats):
        work = matrix.copy()
        vectors = np.eye(matrix.shape[0], dtype=np.complex128)
        target = 1e-13 * float(np.linalg.norm(matrix))
        start = time.perf_counter()
        kernels.jacobi_sweeps(work, vectors, target, 50, backend=backend)
        best = min(best, time.perf_counter() - start)
        values = np.sort(np.diag(work).real)
    return best, values


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--dims", default="16,32,64,128,256")
    parser.add_argument("--repeats", type=int, default=3)
    args = parser.parse_args()
    dims = [int(d) for d in args.dims.split(",")]

    if not kernels.HAVE_NUMBA:
        raise SystemExit("numba is not installed; nothing to compare")

    # compile outside the timed region
    warm = random_hermitian(np.random.default_rng(0), 4)
    time_backend("numba", warm, 1)

    rng = np.random.default_rng(42)
    print(f"{'dim':>5} {'numba [s]':>12} {'numpy [s]':>12} {'speedup':>9} {'max |dw|':>12}")
    for n in dims:
        matrix = random_hermitian(rng, n)
        t_numba, w_numba = time_backend("numba", matrix, args.repeats)
        t_numpy, w_numpy = time_backend("numpy", matrix, args.repeats)
        disagreement = float(np.max(np.abs(w_numba - w_numpy)))
        print(
            f"{n:>5} {t_numba:>12.6f} {t_numpy:>12.6f} "
            f"{t_numpy / t_numba:>8.1f}x {disagreement:>12.3e}"
        )


if __name__ == "__main__":
    main()
