"""Shared brute-force oracles and instance generators.

Everything here is deliberately independent of the package internals: the
modular oracles run on plain ints, the matrix oracles on raw numpy arrays,
so they can arbitrate what the library computes.
"""

from __future__ import annotations

import numpy as np

from bcinv import CornerFrame, RingDescriptor


def zn_inner_inverses(n: int, b: int) -> list[int]:
    return [g for g in range(n) if (b * g * b) % n == b % n]


def zn_bc_inverse(n: int, a: int, b: int, c: int) -> int | None:
    """(b,c)-inverse in Z_n straight from the defining equations."""
    hits = []
    for y in range(n):
        in_bry = any((b * m * y) % n == y % n for m in range(n))
        in_yrc = any((y * m * c) % n == y % n for m in range(n))
        if (in_bry and in_yrc
                and (y * a * b) % n == b % n and (c * a * y) % n == c % n):
            hits.append(y)
    assert len(hits) <= 1, f"uniqueness violated in Z_{n} for {(a, b, c)}"
    return hits[0] if hits else None


def zn_group_inverse(n: int, x: int) -> int | None:
    hits = [y for y in range(n)
            if (x * y * x) % n == x % n and (y * x * y) % n == y % n
            and (x * y) % n == (y * x) % n]
    assert len(hits) <= 1
    return hits[0] if hits else None


def rel_err(x: np.ndarray, y: np.ndarray) -> float:
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    scale = 1.0 + max(np.linalg.norm(x), np.linalg.norm(y))
    return float(np.linalg.norm(x - y)) / scale


def random_rank_deficient(rng: np.random.Generator, n: int, r: int,
                          floor: float = 0.3) -> np.ndarray:
    """Random n x n matrix of rank exactly r with a conditioning floor."""
    while True:
        left = rng.standard_normal((n, r))
        right = rng.standard_normal((r, n))
        s_l = np.linalg.svd(left, compute_uv=False)
        s_r = np.linalg.svd(right, compute_uv=False)
        if s_l[-1] >= floor and s_r[-1] >= floor:
            return left @ right


def random_instance(rng: np.random.Generator, n: int, r: int,
                    core_floor: float = 0.05):
    """Float instance (a, b, c) with rank(b) = rank(c) = r and an inverse.

    Regenerates until the compressed core has comfortable conditioning, so
    every computation route stays well inside float accuracy.
    """
    ring = RingDescriptor.float_matrices(n)
    while True:
        b = random_rank_deficient(rng, n, r)
        c = random_rank_deficient(rng, n, r)
        a = rng.standard_normal((n, n))
        ub = np.linalg.svd(b)[0][:, :r]
        vc = np.linalg.svd(c)[2][:r, :]
        core = vc @ a @ ub
        s = np.linalg.svd(core, compute_uv=False)
        if s[-1] >= core_floor * max(s[0], 1.0):
            return ring.element(a), ring.element(b), ring.element(c)


def random_frame_instance(rng: np.random.Generator, n: int, r: int):
    a, b, c = random_instance(rng, n, r)
    return a, CornerFrame.make(b, c)


def m2f2_elements() -> list[np.ndarray]:
    out = []
    for bits in range(16):
        m = np.array([[(bits >> 3) & 1, (bits >> 2) & 1],
                      [(bits >> 1) & 1, bits & 1]], dtype=np.int64)
        out.append(m)
    return out


def m2f2_bc_inverse(a: np.ndarray, b: np.ndarray, c: np.ndarray) -> np.ndarray | None:
    """Defining-equation search over all 16 matrices of M_2(F_2)."""
    elems = m2f2_elements()

    def mm(*ms):
        out = ms[0]
        for m in ms[1:]:
            out = (out @ m) % 2
        return out

    hits = []
    for y in elems:
        in_bry = any((mm(b, m, y) == y).all() for m in elems)
        in_yrc = any((mm(y, m, c) == y).all() for m in elems)
        if (in_bry and in_yrc
                and (mm(y, a, b) == b % 2).all() and (mm(c, a, y) == c % 2).all()):
            hits.append(y)
    assert len(hits) <= 1
    return hits[0] if hits else None
