"""Micro-benchmark for exact sparse series convolution (``jet_mul``)."""

from __future__ import annotations

import random
import time
from fractions import Fraction
from itertools import product

from .jets import Jet, jet_mul
from .operator import laplacian
from .solver import SolverConfig, build_uk
from .certificate import default_pk


def random_dense_jet(dim: int, N: int, rng: random.Random, bits: int = 16) -> Jet:
    coeffs = {}
    for gamma in product(range(N + 1), repeat=dim):
        if sum(gamma) <= N:
            coeffs[gamma] = Fraction(rng.getrandbits(bits) - (1 << (bits - 1)), rng.getrandbits(8) + 1)
    return Jet(dim, N, coeffs)


def time_mul(dim: int, N: int, repeat: int = 3, seed: int = 0) -> tuple[int, float]:
    """Best-of-``repeat`` seconds for one product of two dense jets; also returns the term count."""
    rng = random.Random(seed)
    a = random_dense_jet(dim, N, rng)
    b = random_dense_jet(dim, N, rng)
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        jet_mul(a, b)
        best = min(best, time.perf_counter() - t0)
    return len(a), best


def time_uk(K: int, N: int) -> float:
    L = laplacian(2, N)
    cfg = SolverConfig(N)
    t0 = time.perf_counter()
    for k in range(1, K + 1):
        build_uk(L, default_pk(k, 2), cfg)
    return time.perf_counter() - t0


def run(dims=(1, 2, 3), degrees=(4, 8, 12), repeat: int = 3) -> list[str]:
    lines = ["dim   N  terms   seconds/product"]
    for dim in dims:
        for N in degrees:
            terms, secs = time_mul(dim, N, repeat)
            lines.append(f"{dim:3d} {N:3d} {terms:6d}   {secs:.6f}")
    lines.append(f"laplacian u_1..u_10 at N=12: {time_uk(10, 12):.4f} s")
    return lines
