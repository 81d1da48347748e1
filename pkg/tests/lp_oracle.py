"""Enumeration references for small LPs and bounded integer programs."""

from __future__ import annotations

import itertools

import numpy as np
import scipy.sparse as sp

from uc_hybrid.milp import INF
from uc_hybrid.milp.model import MilpModel


def box_model(c, A, b, lo, hi, integer=None):
    """``min c@x, A@x <= b, lo <= x <= hi`` as a MilpModel."""
    c = np.asarray(c, float)
    n = len(c)
    A = np.asarray(A, float).reshape(-1, n)
    return MilpModel(
        c, sp.csr_matrix(A), np.full(A.shape[0], -INF), np.asarray(b, float), np.asarray(lo, float),
        np.asarray(hi, float), np.zeros(n, bool) if integer is None else np.asarray(integer, bool),
    )


def vertex_oracle(c, A, b, lo, hi):
    """min c@x s.t. A@x <= b, lo <= x <= hi by enumerating every basis of tight constraints."""
    c = np.asarray(c, float)
    n = len(c)
    A = np.asarray(A, float).reshape(-1, n)
    G = np.vstack([A, np.eye(n), -np.eye(n)])
    h = np.concatenate([b, hi, -np.asarray(lo, float)])
    best = None
    for rows in itertools.combinations(range(len(G)), n):
        M = G[list(rows)]
        if abs(np.linalg.det(M)) < 1e-10:
            continue
        x = np.linalg.solve(M, h[list(rows)])
        if np.all(G @ x <= h + 1e-8):
            val = float(c @ x)
            best = val if best is None else min(best, val)
    return best


def mixed_oracle(c, A, b, hi, integer):
    """Enumerate integer parts over ``0..hi``; continuous remainders go to the vertex oracle."""
    c, A, b, hi = (np.asarray(v, float) for v in (c, A, b, hi))
    integer = np.asarray(integer, bool)
    int_idx, cont_idx = np.flatnonzero(integer), np.flatnonzero(~integer)
    best = None
    for pt in itertools.product(*[range(int(hi[j]) + 1) for j in int_idx]):
        xi = np.array(pt, float)
        rest = b - A[:, int_idx] @ xi
        val = float(c[int_idx] @ xi)
        if len(cont_idx):
            v = vertex_oracle(c[cont_idx], A[:, cont_idx], rest, np.zeros(len(cont_idx)), hi[cont_idx])
            if v is None:
                continue
            val += v
        elif np.any(rest < -1e-9):
            continue
        best = val if best is None else min(best, val)
    return best


def random_box_lp(seed, n=5, m=5):
    rng = np.random.default_rng(seed)
    c = rng.integers(-5, 6, n).astype(float)
    A = rng.integers(-4, 5, (m, n)).astype(float)
    lo = rng.integers(-3, 1, n).astype(float)
    hi = lo + rng.integers(1, 5, n)
    x0 = rng.uniform(lo, hi)
    # even seeds are feasible around x0, odd seeds are left to chance
    slack = rng.integers(0, 3, m) if seed % 2 == 0 else rng.integers(-6, 3, m)
    b = np.floor(A @ x0) + slack
    return c, A, b, lo, hi


def random_mip(seed, n=4, m=3):
    rng = np.random.default_rng(1000 + seed)
    c = rng.integers(-6, 7, n).astype(float)
    A = rng.integers(-3, 5, (m, n)).astype(float)
    hi = rng.integers(1, 4, n).astype(float)
    b = rng.integers(0, 10, m).astype(float)
    integer = rng.random(n) < 0.75
    integer[0] = True
    return c, A, b, hi, integer
