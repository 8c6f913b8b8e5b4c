"""Atiyah's indecomposable unipotent bundles F_r and decomposition of unipotent bundles.

A unipotent bundle is identified by its profile s -> h0(F_s^dual (x) U) for
s = 1..rank.  The profile is additive in direct sums, so a candidate
partition predicts the profile from the table of h0(F_s^dual (x) F_r),
which is computed with the same engine, never assumed.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .cech import (CechBundle, TwoChartCover, dual, h0, h1, h1_generator, tensor, unitriangular_inverse)
from .laurent import Fn


def default_rank_bound(p: int) -> int:
    return 2 * p + 3


def make_Fr(cover: TwoChartCover, r: int, scalar: int = 1, cocycle: Fn | None = None) -> CechBundle:
    """F_r as an iterated extension: T = I + c*g*N with N the upper shift.

    Column k of T is the extension class of O by F_{k}; its image in
    H1(O) under F_k -> O (the last coordinate) is c*[g] != 0, and
    H1(F_k) -> H1(O) is an isomorphism, so every step is nonsplit.
    The postcondition h0 = 1 is checked.
    """
    if r < 1:
        raise ValueError("rank must be at least 1")
    ring = cover.ring
    if scalar % cover.field.q == 0 and cover.field.n == 1:
        raise ValueError("extension scalar must be nonzero")
    g = ring.scale(h1_generator(cover) if cocycle is None else cocycle, scalar)
    one = ring.const(1)
    T = [[one if i == j else (g if j == i + 1 else None) for j in range(r)] for i in range(r)]
    Tinv = unitriangular_inverse(ring, T, True)
    V = CechBundle(cover, T, Tinv, [0] * r, 0, check=False)
    if h0(V) != 1:
        raise RuntimeError(f"constructed F_{r} has h0 = {h0(V)}; the cocycle is probably a coboundary")
    return V


def is_unipotent(U: CechBundle) -> bool:
    """Upper unitriangular transition with all twists zero: a filtration by copies of O."""
    return U.is_unitriangular and all(t == 0 for t in U.twists)


class _FrCache:
    """Per-cover cache of F_r and of the table h0(F_s^dual (x) F_r)."""

    def __init__(self, cover: TwoChartCover):
        self.cover = cover
        self.fr: dict[int, CechBundle] = {}
        self.table: dict[tuple[int, int], int] = {}

    def F(self, r: int) -> CechBundle:
        if r not in self.fr:
            self.fr[r] = make_Fr(self.cover, r)
        return self.fr[r]

    def hom(self, s: int, r: int) -> int:
        key = (s, r)
        if key not in self.table:
            self.table[key] = h0(tensor(dual(self.F(s)), self.F(r)))
        return self.table[key]


_caches: dict[int, _FrCache] = {}


def _cache(cover: TwoChartCover) -> _FrCache:
    c = _caches.get(id(cover))
    if c is None or c.cover is not cover:
        c = _caches[id(cover)] = _FrCache(cover)
    return c


def profile(U: CechBundle, smax: int | None = None) -> tuple[int, ...]:
    """(h0(F_s^dual (x) U))_{s=1..smax}."""
    c = _cache(U.cover)
    smax = U.rank if smax is None else smax
    return tuple(h0(tensor(dual(c.F(s)), U)) for s in range(1, smax + 1))


def fr_profile(cover: TwoChartCover, r: int, smax: int) -> tuple[int, ...]:
    c = _cache(cover)
    return tuple(c.hom(s, r) for s in range(1, smax + 1))


def partitions(n: int, largest: int | None = None):
    """Partitions of n as non-increasing tuples."""
    largest = n if largest is None else largest
    if n == 0:
        yield ()
        return
    for k in range(min(n, largest), 0, -1):
        for rest in partitions(n - k, k):
            yield (k,) + rest


@dataclass(frozen=True)
class DecompositionType:
    parts: tuple[int, ...]  # non-increasing

    @property
    def rank(self) -> int:
        return sum(self.parts)

    def as_multiset(self) -> dict[int, int]:
        out: dict[int, int] = {}
        for r in self.parts:
            out[r] = out.get(r, 0) + 1
        return out

    def __str__(self):
        return "{" + ", ".join(str(r) for r in sorted(self.parts)) + "}"


def decomposition_type(U: CechBundle, bound: int | None = None) -> DecompositionType:
    """Unique partition (r_i) with U = sum of F_{r_i}, matched by invariant profile."""
    if not is_unipotent(U):
        raise ValueError("bundle is not presented as unipotent (unitriangular, zero twists)")
    r = U.rank
    bound = default_rank_bound(U.cover.field.p) if bound is None else bound
    if r > bound:
        raise ValueError(f"rank {r} exceeds the configured bound {bound}")
    prof = np.array(profile(U, r))
    table = {k: np.array(fr_profile(U.cover, k, r)) for k in range(1, r + 1)}
    hits = []
    for part in partitions(r):
        pred = sum((table[k] for k in part), np.zeros(r, dtype=np.int64))
        if np.array_equal(pred, prof):
            hits.append(part)
    if not hits:
        raise RuntimeError(f"no partition of {r} matches profile {tuple(prof)}")
    if len(hits) > 1:
        raise RuntimeError(f"profile {tuple(prof)} matches several partitions {hits}")
    return DecompositionType(hits[0])


def direct_sum_of_Fr(cover: TwoChartCover, parts) -> CechBundle:
    from .cech import direct_sum
    c = _cache(cover)
    V = None
    for r in parts:
        V = c.F(r) if V is None else direct_sum(V, c.F(r))
    if V is None:
        raise ValueError("empty partition")
    return V


@dataclass
class AtiyahReport:
    rank: int
    profile_a: tuple[int, ...]
    profile_b: tuple[int, ...]
    h0: int
    h1: int

    @property
    def consistent(self) -> bool:
        return self.profile_a == self.profile_b and self.h0 == 1


def verify_atiyah_uniqueness(cover: TwoChartCover, r: int) -> AtiyahReport:
    """Build F_r from cocycles g and -g + (coboundary) and compare profiles."""
    ring = cover.ring
    A = make_Fr(cover, r, 1)
    # u is regular off O and u^-1 is regular at O, so their sum is a coboundary
    g2 = ring.add(ring.neg(h1_generator(cover)), ring.add(ring.u_power(1), ring.u_power(-1)))
    B = make_Fr(cover, r, 1, cocycle=g2)
    pa, pb = profile(A), profile(B)
    rep = AtiyahReport(r, pa, pb, h0(A), h1(A)[0])
    if not rep.consistent:
        raise RuntimeError(f"F_{r} profiles differ: {pa} vs {pb}")
    return rep
