"""Ruled surfaces S = P(F) over an elliptic curve, through pushforward to E.

For a rank-2 bundle F of degree 0 with a sub line bundle O (the section D),
pi_* O_S(mD) = Sym^m F and R^1 pi_* O_S(mD) = 0 for m >= 0, so surface
cohomology of O_S(mD) (x) pi^* O(M) is bundle cohomology on E.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .cech import (CechBundle, TwoChartCover, direct_sum, global_sections, h0, h1,
                   leading_block, structure_sheaf, sym, sym_monomials, twist, unipotent_rank2)
from .elliptic import DivisorOnE, WeierstrassCurve
from .gf import FqPolynomial, field_create, mat_rank, poly_gcd
from .unipotent import DecompositionType, decomposition_type


class InconclusiveSampling(RuntimeError):
    pass


@dataclass
class RuledSurfaceModel:
    """S = P(F) with F in {split O+O, F2}; D is the section from the sub O spanned by e1."""

    cover: TwoChartCover
    kind: str  # "F2" or "split"

    def __post_init__(self):
        if self.kind not in ("F2", "split"):
            raise ValueError("kind must be 'F2' or 'split'")

    @classmethod
    def over(cls, curve: WeierstrassCurve, kind: str = "F2") -> "RuledSurfaceModel":
        return cls(TwoChartCover(curve), kind)

    @property
    def curve(self) -> WeierstrassCurve:
        return self.cover.curve

    @property
    def F(self) -> CechBundle:
        if self.kind == "F2":
            return unipotent_rank2(self.cover)
        O = structure_sheaf(self.cover)
        return direct_sum(O, O)

    def pushforward(self, m: int) -> CechBundle:
        """pi_* O_S(mD) = Sym^m F."""
        if m < 0:
            raise ValueError("m must be nonnegative")
        return sym(self.F, m)


def intersection(a1: int, b1: int, a2: int, b2: int) -> int:
    """(a1 D + b1 f).(a2 D + b2 f) with D^2 = 0, D.f = 1, f^2 = 0 (f a fiber)."""
    return a1 * b2 + a2 * b1


def section_count(S: RuledSurfaceModel, m: int, M: DivisorOnE | None = None) -> int:
    """h0(S, O(mD) (x) pi^*O(M)) = h0(E, Sym^m F (x) O(M))."""
    V = S.pushforward(m)
    if M is not None:
        V = twist(V, M)
    return h0(V)


def surface_h1(S: RuledSurfaceModel, m: int) -> int:
    return h1(S.pushforward(m))[0]


def pushforward_type(S: RuledSurfaceModel, m: int) -> DecompositionType:
    if S.kind != "F2":
        raise ValueError("pushforward_type is defined for the F2 model")
    return decomposition_type(S.pushforward(m))


def thickening_pushforward(S: RuledSurfaceModel, k: int) -> CechBundle:
    """pi_* O_{kD} = Sym^k F / O, the quotient by the image of the section e1^k."""
    if k < 1:
        raise ValueError("k must be at least 1")
    return leading_block(S.pushforward(k), 1, quotient=True)


def thickened_section_h1(S: RuledSurfaceModel, k: int) -> int:
    """h1(kD, O_{kD}), read from the pushforward (kD is finite over E)."""
    return h1(thickening_pushforward(S, k))[0]


def thickened_section_h1_by_filtration(S: RuledSurfaceModel, k: int) -> int:
    """Same number from 0 -> O_S -> O_S(kD) -> O_{kD} -> 0 and h2(O_S) = 0.

    Uses h0 of the quotient and h0, h1 of Sym^k F, not h1 of the quotient.
    """
    V = S.pushforward(k)
    a0, a1 = 1, 1
    b0, b1 = h0(V), h1(V)[0]
    c0 = h0(thickening_pushforward(S, k))
    return a0 - b0 + c0 - a1 + b1


def _binary_form_common_root(F, a: list[int], b: list[int]) -> bool:
    """Do two binary forms (coefficient of X^i Y^(m-i) at index i) share a root on P^1?"""
    m = len(a) - 1
    if not any(a) and not any(b):
        return True
    if a[m] == 0 and b[m] == 0:     # common root at [1:0]
        return True
    pa, pb = FqPolynomial(F, a), FqPolynomial(F, b)
    if pa.is_zero() or pb.is_zero():   # a nonzero form of degree m >= 1 has a root
        return m >= 1
    return poly_gcd(pa, pb).degree >= 1


def _forms_at_points(V: CechBundle, sections, ext: int):
    """Yield (point, form values) over E(GF(q^ext)) for each section."""
    F = V.cover.field
    ring = V.ring
    big = field_create(F.p, F.n * ext)
    emb = F.embedding_into(big)
    E = V.cover.curve if ext == 1 else V.cover.curve.base_extend(ext)
    for P in E.rational_points():
        vals = []
        for f1, f2 in sections:
            if P.infinity:
                # value in the twisted frame at O: the coefficient of pole order twist_i
                vals.append([int(emb[int(f.coeff_at_pole(d)[0, 0])]) for f, d in zip(f2, V.twists)])
            else:
                vals.append([ring.evaluate(f, P.x, P.y, field=big, embed=emb) for f in f1])
        yield P, big, vals


def pencil_basepoint_check(S: RuledSurfaceModel, m: int | None = None, sections=None,
                           max_extension: int = 2, bundle: CechBundle | None = None) -> bool:
    """True iff the two sections of O(mD) have no common zero at sampled points.

    Over each sampled point P of E the sections restrict to binary forms of
    degree m on the fiber; a common zero on the fiber is a common root, which
    a gcd detects over the algebraic closure.  Points of E are sampled over
    GF(q^d) for d <= max_extension.
    """
    p = S.cover.field.p
    m = p if m is None else m
    V = S.pushforward(m) if bundle is None else bundle
    if sections is None:
        sections = global_sections(V)
    if len(set(V.twists)) > 1:
        raise ValueError("fiber forms need a uniform twist")
    if len(sections) != 2:
        raise ValueError(f"expected a pencil (2 sections), got {len(sections)}")
    sampled = 0
    independent = False
    for d in range(1, max_extension + 1):
        if S.cover.field.q ** d > 4096:
            break
        for P, big, (va, vb) in _forms_at_points(V, sections, d):
            sampled += 1
            if not independent and mat_rank_big(big, va, vb) == 2:
                independent = True
            if V.rank == m + 1:
                a, b = _to_forms(va, m), _to_forms(vb, m)
                if _binary_form_common_root(big, a, b):
                    return False
            elif not any(va) and not any(vb):
                return False
    if sampled < 2:
        raise InconclusiveSampling("too few points sampled; enlarge the extension degree")
    if not independent:
        raise InconclusiveSampling("sections never independent at a sampled point")
    return True


def mat_rank_big(F, va, vb) -> int:
    return mat_rank(F, np.array([va, vb], dtype=np.int64))


def _to_forms(vals: list[int], m: int) -> list[int]:
    """Reorder Sym^m coordinates (monomials e1^a1 e2^a2) to coefficient-of-X^a1 lists."""
    monos = sym_monomials(2, m)
    out = [0] * (m + 1)
    for v, (a1, _a2) in zip(vals, monos):
        out[a1] = int(v)
    return out
