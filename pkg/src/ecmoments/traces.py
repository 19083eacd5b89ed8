"""Fiberwise Frobenius traces and exact moment sums over whole families."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .families import CurveFamily, Fiber, compute_invariants, fiber_at
from .modular import LegendreTable, cached_legendre_table, prime_index_of

# elements per temporary block in the t-x sweep; bounds peak memory, not results
_CHUNK = 1 << 22


def trace_at(fam: CurveFamily, t: int, p: int, table: LegendreTable) -> int:
    """a_t(p) = -sum over x mod p of chi(x^3 + A x + B) for the fiber at t."""
    if table.p != p:
        raise ValueError("table is for p=%d, need p=%d" % (table.p, p))
    fib = fiber_at(fam, t, p)
    chi = table.chi
    acc = 0
    for x in range(p):
        acc += int(chi[(x * x % p * x + fib.A * x + fib.B) % p])
    return -acc


def point_count_oracle(fiber: Fiber) -> int:
    """Count affine (x, y) with y^2 = x^3 + A x + B mod p by exhaustive enumeration.

    Independent of the character machinery; trace_at must equal p minus this.
    """
    p, a, b = fiber.p, fiber.A, fiber.B
    squares = [y * y % p for y in range(p)]
    count = 0
    for x in range(p):
        count += squares.count((x * x % p * x + a * x + b) % p)
    return count


def _eval_poly_mod(coeffs: tuple[int, ...], ts: np.ndarray, p: int) -> np.ndarray:
    """Horner over a vector of arguments; coefficients pre-reduced into [0, p)."""
    acc = np.zeros(len(ts), dtype=np.int64)
    for c in reversed(coeffs):
        acc = (acc * ts + c % p) % p
    return acc


def traces_mod_p(fam: CurveFamily, p: int, table: LegendreTable | None = None) -> np.ndarray:
    """All traces a_t(p) for t = 0..p-1, as an int64 array."""
    if table is None:
        table = cached_legendre_table(p)
    elif table.p != p:
        raise ValueError("table is for p=%d, need p=%d" % (table.p, p))
    inv = compute_invariants(fam)
    ts = np.arange(p, dtype=np.int64)
    a = (-27 * _eval_poly_mod(inv.c4.coeffs, ts, p)) % p
    b = (-54 * _eval_poly_mod(inv.c6.coeffs, ts, p)) % p
    xs = np.arange(p, dtype=np.int64)
    cube = (xs * xs % p) * xs % p
    if p <= 46340:  # p^2 - 1 fits int32, halving the sweep's memory traffic
        dtype = np.int32
    else:
        dtype = np.int64
    a = a.astype(dtype)
    b = b.astype(dtype)
    xs = xs.astype(dtype)
    cube = cube.astype(dtype)
    chi = table.chi
    out = np.empty(p, dtype=np.int64)
    step = max(1, _CHUNK // p)
    for lo in range(0, p, step):
        hi = min(p, lo + step)
        idx = (a[lo:hi, None] * xs[None, :] + (cube[None, :] + b[lo:hi, None])) % p
        out[lo:hi] = chi[idx].sum(axis=1, dtype=np.int64)
    return -out


@dataclass(frozen=True)
class MomentRecord:
    """Exact power sums S_r = sum_t a_t(p)^r for one family at one prime."""

    family: str
    prime_index: int
    p: int
    sums: tuple[int, ...]

    @property
    def S(self) -> dict[int, int]:
        return {r: v for r, v in enumerate(self.sums, start=1)}

    @property
    def r_max(self) -> int:
        return len(self.sums)


def _exact_sum(arr: np.ndarray, bound: int) -> int:
    """Exact integer sum of arr whose entries satisfy |entry| <= bound.

    int64 input is summed in chunks short enough that no partial sum can
    wrap; chunk boundaries depend only on bound, so results are identical
    across runs (and would be under any order, the arithmetic being exact).
    """
    if arr.dtype == object:
        return sum(int(v) for v in arr)
    step = max(1, (1 << 62) // max(bound, 1))
    return sum(int(arr[lo : lo + step].sum(dtype=np.int64)) for lo in range(0, len(arr), step))


def _sums_from_traces(traces: np.ndarray, r_max: int) -> tuple[int, ...]:
    maxabs = int(np.abs(traces).max(initial=0))
    widen = maxabs > 1 and maxabs ** r_max >= 1 << 62  # power chain would overflow int64
    base = np.array([int(v) for v in traces], dtype=object) if widen else traces
    cur = base
    sums = []
    for r in range(1, r_max + 1):
        if r > 1:
            cur = cur * base
        sums.append(_exact_sum(cur, maxabs ** r))
    return tuple(sums)


def moment_sums(fam: CurveFamily, p: int, r_max: int = 7) -> MomentRecord:
    """Exact S_r = sum_t a_t(p)^r for r = 1..r_max, over all t mod p.

    Singular fibers contribute their raw character sums; nothing is skipped.
    """
    if not 1 <= r_max <= 8:
        raise ValueError("r_max must be in 1..8, got %r" % (r_max,))
    idx = prime_index_of(p)  # raises on composite p
    if p == 2:
        raise ValueError("p must be an odd prime")
    traces = traces_mod_p(fam, p)
    return MomentRecord(fam.name, idx, p, _sums_from_traces(traces, r_max))


@dataclass(frozen=True)
class SymSumRecord:
    p: int
    k: int
    value: float


def sym_sum(fam: CurveFamily, p: int, k: int) -> SymSumRecord:
    """sum over fibers of sin((k+1) theta_t) / sin(theta_t), cos(theta_t) = a_t / (2 sqrt p).

    Chebyshev recurrence U_0 = 1, U_1 = 2x, U_k = 2x U_{k-1} - U_{k-2}, with
    x clamped into [-1, 1] (singular fibers can poke past the Hasse bound).
    """
    if k < 0:
        raise ValueError("k must be nonnegative, got %r" % (k,))
    prime_index_of(p)
    if p == 2:
        raise ValueError("p must be an odd prime")
    traces = traces_mod_p(fam, p)
    x = np.clip(traces / (2.0 * math.sqrt(p)), -1.0, 1.0)
    u_prev = np.ones_like(x)
    if k == 0:
        return SymSumRecord(p, k, float(u_prev.sum()))
    u = 2.0 * x
    for _ in range(k - 1):
        u_prev, u = u, 2.0 * x * u - u_prev
    return SymSumRecord(p, k, float(u.sum()))
