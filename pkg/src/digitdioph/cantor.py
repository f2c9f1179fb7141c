"""Exact geometry of missing-digit sets C(b, D).

C(b, D) is the set of x in [0, 1] with some base-b expansion using only
digits from D. Points are Fractions; the interval kernel works on integer
numerators over a common denominator so the hot loops avoid Fraction.
"""
from __future__ import annotations

import bisect
import math
from collections import deque
from dataclasses import dataclass
from fractions import Fraction

from .errors import DomainError
from .params import normalize_digits


@dataclass(frozen=True)
class MissingDigitSet:
    b: int
    D: tuple[int, ...]

    def __post_init__(self):
        if not isinstance(self.b, int) or self.b < 3:
            raise DomainError("b must be an integer >= 3")
        object.__setattr__(self, "D", normalize_digits(self.b, self.D))

    @property
    def min_point(self) -> Fraction:
        return Fraction(self.D[0], self.b - 1)

    @property
    def max_point(self) -> Fraction:
        return Fraction(self.D[-1], self.b - 1)

    @property
    def gamma(self) -> float:
        return math.log(len(self.D)) / math.log(self.b)


@dataclass(frozen=True)
class Interval:
    lo: Fraction
    hi: Fraction
    open: bool = False

    def __post_init__(self):
        object.__setattr__(self, "lo", Fraction(self.lo))
        object.__setattr__(self, "hi", Fraction(self.hi))


def _edges(S: MissingDigitSet, y: Fraction):
    """Digit edges y -> b*y - d that stay inside [0, 1]."""
    by = S.b * y
    out = []
    lo = math.ceil(by - 1)
    for d in (lo, lo + 1):
        if d in S.D and 0 <= by - d <= 1:
            out.append((d, by - d))
    return out


def _alive_graph(S: MissingDigitSet, x: Fraction) -> dict[Fraction, list]:
    """Reachable states from x, pruned to those starting an infinite digit path."""
    graph: dict[Fraction, list] = {}
    todo = deque([x])
    while todo:
        y = todo.popleft()
        if y in graph:
            continue
        graph[y] = _edges(S, y)
        for _, z in graph[y]:
            if z not in graph:
                todo.append(z)
    changed = True
    while changed:
        changed = False
        for y in list(graph):
            kept = [(d, z) for d, z in graph[y] if z in graph]
            if not kept:
                del graph[y]
                changed = True
            elif len(kept) != len(graph[y]):
                graph[y] = kept
    return graph


def membership(S: MissingDigitSet, x) -> bool:
    """Whether x lies in C(b, D); both expansions of b-adic rationals are tried."""
    x = Fraction(x)
    if x < 0 or x > 1:
        return False
    return x in _alive_graph(S, x)


def _reaches(graph, src, dst) -> bool:
    seen, todo = {src}, [src]
    while todo:
        y = todo.pop()
        if y == dst:
            return True
        for _, z in graph.get(y, ()):
            if z not in seen:
                seen.add(z)
                todo.append(z)
    return False


def is_right_limit(S: MissingDigitSet, x) -> bool:
    """For x in C: whether points of C accumulate at x from the right.

    That happens exactly when some digit path from x cycles through a digit
    below max(D).
    """
    x = Fraction(x)
    graph = _alive_graph(S, x)
    top = S.D[-1]
    for y, edges in graph.items():
        for d, z in edges:
            if d != top and _reaches(graph, z, y):
                return True
    return False


def _options(S: MissingDigitSet, y: Fraction):
    # tight children in increasing order of value, then the first jump above y
    by = S.b * y
    opts = [("child", d) for d, _ in _edges(S, y)]
    k = bisect.bisect_right(S.D, math.floor(by))
    if k < len(S.D):
        opts.append(("jump", S.D[k]))
    return opts


def successor(S: MissingDigitSet, u, strict: bool = False) -> Fraction | None:
    """Least point of C that is >= u, or None.

    With ``strict`` the infimum of C over (u, 1] is returned. That infimum
    equals u itself when u is in C and C accumulates at u from the right.
    """
    u = Fraction(u)
    if u > 1:
        return None
    if u < 0:
        u = Fraction(0)
        strict = False
    if strict and membership(S, u) and is_right_limit(S, u):
        return u
    b, lowest = S.b, S.min_point
    stack = [(u, iter(_options(S, u)))]
    digits: list[int] = []
    on_path = {u}

    def compose(v: Fraction, ds) -> Fraction:
        for d in reversed(ds):
            v = (d + v) / b
        return v

    while stack:
        y, it = stack[-1]
        opt = next(it, None)
        if opt is None:
            stack.pop()
            on_path.discard(y)
            if digits:
                digits.pop()
            continue
        kind, d = opt
        if kind == "jump":
            return compose((d + lowest) / b, digits)
        child = b * y - d
        if child in on_path:
            if strict:
                continue
            return compose(child, digits + [d])
        on_path.add(child)
        digits.append(d)
        stack.append((child, iter(_options(S, child))))
    return None


def hits_scaled(b: int, digits, lo: int, hi: int, Q: int, closed: bool) -> bool:
    """Does the interval (lo/Q, hi/Q) (closed if asked) meet C(b, digits)?

    Numerators are integers. Each step rescales the interval by b around a
    digit, so a positive-width interval either leaves the hull of C or grows
    past it within about log_b(Q / width) steps.
    """
    bm1 = b - 1
    mn = digits[0] * Q
    mx = digits[-1] * Q
    stack = [(lo, hi)]
    while stack:
        lo, hi = stack.pop()
        L = lo * bm1
        H = hi * bm1
        if closed:
            if H < mn or L > mx:
                continue
            if L <= mn <= H or L <= mx <= H:
                return True
        else:
            if H <= mn or L >= mx:
                continue
            if L < mn < H or L < mx < H:
                return True
        first = (lo * b) // Q - 1
        last = (hi * b) // Q
        i = bisect.bisect_left(digits, first)
        while i < len(digits) and digits[i] <= last:
            d = digits[i]
            stack.append((lo * b - d * Q, hi * b - d * Q))
            i += 1
    return False


def interval_intersects(S: MissingDigitSet, I: Interval) -> bool:
    lo, hi = I.lo, I.hi
    if I.open and lo >= hi:
        return False
    if lo > hi:
        return False
    if lo == hi:
        return membership(S, lo)
    Q = lo.denominator * hi.denominator // math.gcd(lo.denominator, hi.denominator)
    return hits_scaled(S.b, S.D, lo.numerator * (Q // lo.denominator),
                       hi.numerator * (Q // hi.denominator), Q, closed=not I.open)


def _all_d_digits(S: MissingDigitSet, N: int, m: int) -> bool:
    if N < 0 or N >= S.b**m:
        return False
    for _ in range(m):
        N, d = divmod(N, S.b)
        if d not in S.D:
            return False
    return True


def endpoint_member(S: MissingDigitSet, x, m: int) -> bool:
    """x in E(m): x is an endpoint of a level-m basic interval of C."""
    x = Fraction(x)
    scaled = x * S.b**m
    if scaled.denominator != 1:
        return False
    N = scaled.numerator
    return _all_d_digits(S, N, m) or _all_d_digits(S, N - 1, m)


def adjacent_pairs(S: MissingDigitSet, m: int) -> int:
    """Number of m-digit D-strings y whose successor y + 1 is also a D-string."""
    if m == 0:
        return 0
    dset = set(S.D)
    # carry DP from the least significant digit while adding 1
    ways = {1: 1}
    for _ in range(m):
        nxt: dict[int, int] = {}
        for carry, cnt in ways.items():
            for y in S.D:
                s = y + carry
                if s % S.b in dset:
                    nxt[s // S.b] = nxt.get(s // S.b, 0) + cnt
        ways = nxt
    return ways.get(0, 0)


def endpoints_count(S: MissingDigitSet, m: int) -> int:
    """#E(m) = 2 (#D)^m minus shared endpoints of neighbouring basic intervals."""
    if m < 0:
        raise DomainError("m must be >= 0")
    return 2 * len(S.D) ** m - adjacent_pairs(S, m)


def _max_gap(S: MissingDigitSet) -> Fraction:
    spread = S.max_point - S.min_point
    gaps = [Fraction(e - d) - spread for d, e in zip(S.D, S.D[1:])]
    return max(gaps) / S.b


def _cell_runs_missing(S: MissingDigitSet, M: int) -> list[tuple[int, int]]:
    b = S.b
    gap = _max_gap(S)
    runs = []
    lo_p, hi_p = S.min_point, S.max_point
    # basic interval [v / b^j, (v+1) / b^j]
    stack = [(0, 0)]
    while stack:
        v, j = stack.pop()
        w = Fraction(1, b**j)
        left = v * w + lo_p * w
        right = v * w + hi_p * w
        if gap * w * M <= 1:
            # every cell meeting the hull of this piece touches C
            k0 = max(0, math.ceil(left * M) - 1)
            k1 = min(M - 1, math.floor(right * M))
            runs.append((k0, k1))
            continue
        for d in S.D:
            stack.append((v * b + d, j + 1))
    return runs


def _merge_count(runs) -> int:
    total, end = 0, -1
    for a, c in sorted(runs):
        if c <= end:
            continue
        total += c - max(a, end + 1) + 1
        end = c
    return total


def grid_count(A, cell) -> int:
    """Number of closed grid cells [k/M, (k+1)/M], 0 <= k < M, touching A.

    ``cell`` is 1/M (a Fraction or the integer M). A is a MissingDigitSet or
    a sequence of closed Intervals.
    """
    cell = Fraction(cell)
    if cell > 1:
        M = int(cell)
    else:
        if cell.numerator != 1:
            raise DomainError("cell must be 1/M")
        M = cell.denominator
    if isinstance(A, MissingDigitSet):
        return _merge_count(_cell_runs_missing(A, M))
    runs = []
    for I in A:
        if I.hi < 0 or I.lo > 1:
            continue
        lo, hi = max(I.lo, Fraction(0)), min(I.hi, Fraction(1))
        k0 = max(0, math.ceil(lo * M) - 1)
        k1 = min(M - 1, math.floor(hi * M))
        runs.append((k0, k1))
    return _merge_count(runs)
