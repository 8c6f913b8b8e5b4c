"""Elliptic curves in long Weierstrass form over GF(p^n).

    y^2 + a1 x y + a3 y = x^3 + a2 x^2 + a4 x + a6

Covers the group law, point counting by x-enumeration, the
ordinary/supersingular test, Frobenius isogenies and Riemann-Roch spaces
L(D) for divisors with rational support.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field as dc_field
from functools import cached_property
from typing import Mapping, Sequence

import numpy as np

from .gf import FiniteField, FqPolynomial, field_create, mat_kernel

DEFAULT_ENUM_BOUND = 10 ** 6


def enum_bound() -> int:
    raw = os.environ.get("CHARP_MAX_FIELD_ENUM")
    return int(raw) if raw else DEFAULT_ENUM_BOUND


@dataclass(frozen=True)
class PointOnE:
    """Affine point (x, y) as field codes, or the point at infinity."""

    x: int = 0
    y: int = 0
    infinity: bool = False

    @classmethod
    def at_infinity(cls) -> "PointOnE":
        return cls(0, 0, True)

    def __repr__(self):
        return "O" if self.infinity else f"({self.x}, {self.y})"


O_POINT = PointOnE.at_infinity()


def _as_code(field: FiniteField, c) -> int:
    """Plain ints are element codes (0 <= c < q); other values go through field.code."""
    if isinstance(c, (int, np.integer)):
        if not 0 <= int(c) < field.q:
            raise ValueError(f"coefficient code {c} out of range for {field}")
        return int(c)
    return field.code(c)


class WeierstrassCurve:
    def __init__(self, field: FiniteField, a: Sequence):
        if len(a) != 5:
            raise ValueError("need the five coefficients a1, a2, a3, a4, a6")
        self.field = field
        self.a1, self.a2, self.a3, self.a4, self.a6 = (_as_code(field, c) for c in a)
        if self.discriminant == 0:
            raise ValueError("singular Weierstrass equation (discriminant 0)")

    @classmethod
    def from_ints(cls, p: int, coeffs: Sequence[int], n: int = 1) -> "WeierstrassCurve":
        return cls(field_create(p, n), list(coeffs))

    @property
    def coeffs(self) -> tuple[int, int, int, int, int]:
        return (self.a1, self.a2, self.a3, self.a4, self.a6)

    # -- invariants ---------------------------------------------------------
    @cached_property
    def b_invariants(self) -> tuple[int, int, int, int]:
        F = self.field
        m, a = F.mul, F.add
        a1, a2, a3, a4, a6 = self.coeffs
        b2 = a(m(a1, a1), m(4 % F.p, a2))
        b4 = a(m(2 % F.p, a4), m(a1, a3))
        b6 = a(m(a3, a3), m(4 % F.p, a6))
        b8 = F.sub(a(a(m(m(a1, a1), a6), m(m(4 % F.p, a2), a6)), F.sub(m(m(a2, a3), a3), m(m(a1, a3), a4))),
                   m(a4, a4))
        return int(b2), int(b4), int(b6), int(b8)

    @cached_property
    def discriminant(self) -> int:
        F = self.field
        m = F.mul
        b2, b4, b6, b8 = self.b_invariants
        t1 = m(m(m(b2, b2), b8), F.neg(1))
        t2 = m(m(m(b4, b4), b4), 8 % F.p)
        t3 = m(m(b6, b6), 27 % F.p)
        t4 = m(m(m(b2, b4), b6), 9 % F.p)
        return int(F.add(F.sub(F.sub(t1, t2), t3), t4))

    @cached_property
    def j_invariant(self) -> int:
        F = self.field
        b2, b4, _, _ = self.b_invariants
        c4 = F.sub(F.mul(b2, b2), F.mul(24 % F.p, b4))
        c4_cubed = F.mul(F.mul(c4, c4), c4)
        return int(F.mul(c4_cubed, F.inv(self.discriminant)))

    # -- equation -----------------------------------------------------------
    def lhs_rhs(self, x, y):
        F = self.field
        a1, a2, a3, a4, a6 = self.coeffs
        lhs = F.add(F.mul(y, y), F.mul(y, F.add(F.mul(a1, x), a3)))
        rhs = F.add(F.mul(F.add(F.mul(F.add(x, a2), x), a4), x), a6)
        return lhs, rhs

    def contains(self, P: PointOnE) -> bool:
        if P.infinity:
            return True
        lhs, rhs = self.lhs_rhs(P.x, P.y)
        return int(lhs) == int(rhs)

    def point(self, x, y) -> PointOnE:
        P = PointOnE(_as_code(self.field, x), _as_code(self.field, y))
        if not self.contains(P):
            raise ValueError(f"{P} is not on the curve")
        return P

    # -- group law ----------------------------------------------------------
    def neg(self, P: PointOnE) -> PointOnE:
        if P.infinity:
            return P
        F = self.field
        return PointOnE(P.x, int(F.sub(F.neg(P.y), F.add(F.mul(self.a1, P.x), self.a3))))

    def add(self, P: PointOnE, Q: PointOnE) -> PointOnE:
        for R in (P, Q):
            if not self.contains(R):
                raise ValueError(f"{R} is not on the curve")
        if P.infinity:
            return Q
        if Q.infinity:
            return P
        F = self.field
        a1, a2, a3, a4, a6 = self.coeffs
        if P.x == Q.x:
            if int(F.add(F.add(P.y, Q.y), F.add(F.mul(a1, Q.x), a3))) == 0:
                return O_POINT
            # tangent slope
            num = F.sub(F.add(F.add(F.mul(3 % F.p, F.mul(P.x, P.x)), F.mul(2 % F.p, F.mul(a2, P.x))), a4),
                        F.mul(a1, P.y))
            den = F.add(F.add(F.mul(2 % F.p, P.y), F.mul(a1, P.x)), a3)
        else:
            num = F.sub(Q.y, P.y)
            den = F.sub(Q.x, P.x)
        lam = F.mul(num, F.inv(int(den)))
        nu = F.sub(P.y, F.mul(lam, P.x))
        x3 = F.sub(F.sub(F.sub(F.add(F.mul(lam, lam), F.mul(a1, lam)), a2), P.x), Q.x)
        y3 = F.sub(F.sub(F.neg(F.mul(F.add(lam, a1), x3)), nu), a3)
        return PointOnE(int(x3), int(y3))

    def mul(self, k: int, P: PointOnE) -> PointOnE:
        if k < 0:
            return self.mul(-k, self.neg(P))
        R = O_POINT
        while k:
            if k & 1:
                R = self.add(R, P)
            P = self.add(P, P)
            k >>= 1
        return R

    # -- enumeration --------------------------------------------------------
    def _y_roots_count(self, xs: np.ndarray) -> np.ndarray:
        """Number of y in GF(q) solving the equation, for every x in xs."""
        F = self.field
        a1, a2, a3, a4, a6 = self.coeffs
        lin = F.add(F.mul(a1, xs), a3)
        rhs = F.add(F.mul(F.add(F.mul(F.add(xs, a2), xs), a4), xs), a6)
        if F.p == 2:
            out = np.ones_like(xs)
            nz = lin != 0
            if np.any(nz):
                l_nz = lin[nz]
                inv_l = F.inv(l_nz)
                z = F.mul(rhs[nz], F.mul(inv_l, inv_l))
                tr = F.trace_to_prime(z)
                out[nz] = np.where(tr == 0, 2, 0)
            return out
        disc = F.add(F.mul(lin, lin), F.mul(4 % F.p, rhs))
        sq = np.array([F.is_square(int(d)) for d in disc])
        return np.where(disc == 0, 1, np.where(sq, 2, 0))

    def count_points(self, extension_degree: int = 1, bound: int | None = None) -> int:
        """#E(GF(q^k)) including O, by enumerating x and counting quadratic roots."""
        bound = enum_bound() if bound is None else bound
        F = self.field
        q_big = F.q ** extension_degree
        if q_big > bound:
            raise ValueError(f"field of size {q_big} exceeds enumeration bound {bound}")
        curve = self if extension_degree == 1 else self.base_extend(extension_degree)
        xs = np.arange(curve.field.q, dtype=np.int64)
        return 1 + int(curve._y_roots_count(xs).sum())

    def base_extend(self, k: int) -> "WeierstrassCurve":
        big = field_create(self.field.p, self.field.n * k)
        table = self.field.embedding_into(big)
        return WeierstrassCurve(big, [int(table[c]) for c in self.coeffs])

    def rational_points(self) -> list[PointOnE]:
        """All points over the field, O first, then affine points sorted by (x, y)."""
        F = self.field
        if F.q > 4096:
            raise ValueError("point listing only supported for q <= 4096")
        pts = [O_POINT]
        ys = np.arange(F.q, dtype=np.int64)
        for x in range(F.q):
            lhs, rhs = self.lhs_rhs(np.full(F.q, x, dtype=np.int64), ys)
            for y in np.flatnonzero(lhs == rhs):
                pts.append(PointOnE(x, int(y)))
        return pts

    def trace_of_frobenius(self) -> int:
        return self.field.q + 1 - self.count_points()

    # -- Frobenius ----------------------------------------------------------
    def frobenius_twist(self, k: int = 1) -> "WeierstrassCurve":
        """E^(p^k): coefficients raised to the p^k-th power."""
        F = self.field
        return WeierstrassCurve(F, [F.power(c, F.p ** k) for c in self.coeffs])

    def hasse_invariant(self) -> int:
        """Coefficient of x^(p-1) in f^((p-1)/2), f the completed-square cubic (p odd)."""
        F = self.field
        if F.p == 2:
            raise ValueError("Hasse invariant via the cubic needs p odd")
        a1, a2, a3, a4, a6 = self.coeffs
        inv4 = F.inv(4 % F.p)
        # y' = y + (a1 x + a3)/2  gives  y'^2 = x^3 + a2 x^2 + a4 x + a6 + (a1 x + a3)^2 / 4
        lin = FqPolynomial(F, [a3, a1])
        f = FqPolynomial(F, [a6, a4, a2, 1]) + (lin * lin) * inv4
        g = FqPolynomial(F, [1])
        for _ in range((F.p - 1) // 2):
            g = g * f
        idx = F.p - 1
        return g.coeffs[idx] if idx < len(g.coeffs) else 0

    def is_supersingular(self) -> bool:
        if self.field.p >= 5:
            return self.hasse_invariant() == 0
        return self.trace_of_frobenius() % self.field.p == 0

    def is_supersingular_by_trace(self) -> bool:
        return self.trace_of_frobenius() % self.field.p == 0

    def __eq__(self, other):
        return isinstance(other, WeierstrassCurve) and self.field == other.field and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.field, self.coeffs))

    def __repr__(self):
        return f"WeierstrassCurve({self.field}, a={list(self.coeffs)})"


@dataclass(frozen=True)
class Isogeny:
    """Power of the relative Frobenius E -> E^(p^k); (x, y) -> (x^p, y^p) per step."""

    source: WeierstrassCurve
    target: WeierstrassCurve
    kind: str
    degree: int

    @classmethod
    def frobenius(cls, E: WeierstrassCurve, k: int = 1) -> "Isogeny":
        kind = "relative-Frobenius" if k == 1 else "composite-of-Frobenius"
        return cls(E, E.frobenius_twist(k), kind, E.field.p ** k)

    def __call__(self, P: PointOnE) -> PointOnE:
        if P.infinity:
            return P
        F = self.source.field
        e = self.degree
        Q = PointOnE(int(F.power(P.x, e)), int(F.power(P.y, e)))
        assert self.target.contains(Q)
        return Q


# ---------------------------------------------------------------------------
# divisors and Riemann-Roch spaces

@dataclass(frozen=True)
class DivisorOnE:
    curve: WeierstrassCurve
    coeffs: Mapping[PointOnE, int] = dc_field(default_factory=dict)

    def __post_init__(self):
        clean = {P: int(n) for P, n in dict(self.coeffs).items() if n}
        for P in clean:
            if not self.curve.contains(P):
                raise ValueError(f"support point {P} is not on the curve")
        object.__setattr__(self, "coeffs", clean)

    @property
    def degree(self) -> int:
        return sum(self.coeffs.values())

    def __add__(self, other: "DivisorOnE") -> "DivisorOnE":
        out = dict(self.coeffs)
        for P, n in other.coeffs.items():
            out[P] = out.get(P, 0) + n
        return DivisorOnE(self.curve, out)

    def __neg__(self) -> "DivisorOnE":
        return DivisorOnE(self.curve, {P: -n for P, n in self.coeffs.items()})

    def __sub__(self, other: "DivisorOnE") -> "DivisorOnE":
        return self + (-other)

    def group_sum(self) -> PointOnE:
        E = self.curve
        R = O_POINT
        for P, n in self.coeffs.items():
            R = E.add(R, E.mul(n, P))
        return R

    def __getitem__(self, P: PointOnE) -> int:
        return self.coeffs.get(P, 0)

    def __hash__(self):
        return hash((self.curve, tuple(sorted(self.coeffs.items(), key=repr))))

    def __eq__(self, other):
        return isinstance(other, DivisorOnE) and self.curve == other.curve and self.coeffs == other.coeffs


def multiple_of_origin(E: WeierstrassCurve, n: int) -> DivisorOnE:
    return DivisorOnE(E, {O_POINT: n})


class CoordRingElement:
    """c(x) + y d(x) in k[x, y]/(W), coefficients as FqPolynomials in x."""

    def __init__(self, curve: WeierstrassCurve, c: FqPolynomial, d: FqPolynomial):
        self.curve = curve
        self.c = c
        self.d = d

    def is_zero(self) -> bool:
        return self.c.is_zero() and self.d.is_zero()

    def pole_order_at_origin(self) -> int:
        if self.is_zero():
            raise ValueError("zero function has no pole order")
        pc = 2 * self.c.degree if not self.c.is_zero() else -1
        pd = 2 * self.d.degree + 3 if not self.d.is_zero() else -1
        return int(max(pc, pd))

    def local_series(self, P: PointOnE, prec: int) -> np.ndarray:
        xs, ys = local_expansion(self.curve, P, prec)
        F = self.curve.field
        cs = _series_eval_poly(F, self.c, xs, prec)
        ds = _series_eval_poly(F, self.d, xs, prec)
        return F.add(cs, _series_mul(F, ds, ys, prec))

    def order_at(self, P: PointOnE) -> int:
        if self.is_zero():
            raise ValueError("zero function has no order")
        if P.infinity:
            return -self.pole_order_at_origin()
        prec = self.pole_order_at_origin() + 2
        s = self.local_series(P, prec)
        nz = np.flatnonzero(s)
        assert nz.size, "order exceeds degree bound"
        return int(nz[0])

    def evaluate(self, P: PointOnE) -> int:
        F = self.curve.field
        return int(F.add(self.c(P.x), F.mul(P.y, self.d(P.x))))

    def __repr__(self):
        return f"({list(self.c.coeffs)}) + y*({list(self.d.coeffs)})"


@dataclass
class RationalFunction:
    num: CoordRingElement
    den: CoordRingElement

    def order_at(self, P: PointOnE) -> int:
        return self.num.order_at(P) - self.den.order_at(P)

    def __repr__(self):
        return f"[{self.num}] / [{self.den}]"


def _series_mul(F, a, b, prec):
    out = np.zeros(prec, dtype=np.int64)
    for i in np.flatnonzero(a[:prec]):
        n = prec - i
        out[i:] = F.add(out[i:], F.mul(int(a[i]), b[:n]))
    return out


def _series_eval_poly(F, poly: FqPolynomial, xs, prec):
    acc = np.zeros(prec, dtype=np.int64)
    for c in reversed(poly.coeffs):
        acc = _series_mul(F, acc, xs, prec)
        acc[0] = F.add(acc[0], c)
    return acc


def local_expansion(E: WeierstrassCurve, P: PointOnE, prec: int):
    """Power series of x and y in a local uniformizer at an affine point P.

    The uniformizer is x - x0 unless the tangent is vertical, then y - y0.
    """
    if P.infinity:
        raise ValueError("local_expansion handles affine points only")
    F = E.field
    a1, a2, a3, a4, a6 = E.coeffs
    wy = int(F.add(F.add(F.mul(2 % F.p, P.y), F.mul(a1, P.x)), a3))
    wx = int(F.sub(F.mul(a1, P.y), F.add(F.add(F.mul(3 % F.p, F.mul(P.x, P.x)), F.mul(2 % F.p, F.mul(a2, P.x))),
                                           a4)))
    xs = np.zeros(prec, dtype=np.int64)
    ys = np.zeros(prec, dtype=np.int64)
    xs[0], ys[0] = P.x, P.y

    def W(xv, yv):
        yy = _series_mul(F, yv, yv, prec)
        lin = F.add(F.mul(a1, xv), np.eye(1, prec, dtype=np.int64)[0] * a3)
        lhs = F.add(yy, _series_mul(F, yv, lin, prec))
        cubic = FqPolynomial(F, [a6, a4, a2, 1])
        return F.sub(lhs, _series_eval_poly(F, cubic, xv, prec))

    if wy != 0:
        if prec > 1:
            xs[1] = 1
        inv = F.inv(wy)
        for _ in range(prec):
            ys = F.sub(ys, F.mul(W(xs, ys), inv))
    else:
        if wx == 0:
            raise ValueError("singular point")
        if prec > 1:
            ys[1] = 1
        inv = F.inv(wx)
        for _ in range(prec):
            xs = F.sub(xs, F.mul(W(xs, ys), inv))
    return xs, ys


def _origin_basis(E: WeierstrassCurve, N: int) -> list[CoordRingElement]:
    """Monomial basis of L(N*O): 1, x, y, x^2, xy, ... with distinct pole orders."""
    F = E.field
    out = []
    for pole in range(0, N + 1):
        if pole == 1:
            continue
        if pole % 2 == 0:
            c = FqPolynomial(F, [0] * (pole // 2) + [1])
            out.append(CoordRingElement(E, c, FqPolynomial(F, [])))
        else:
            d = FqPolynomial(F, [0] * ((pole - 3) // 2) + [1])
            out.append(CoordRingElement(E, FqPolynomial(F, []), d))
    return out


def riemann_roch_space(E: WeierstrassCurve, D: DivisorOnE) -> list[RationalFunction]:
    """Basis of L(D) = {f : div(f) + D >= 0}.

    Poles at affine points are cleared by h = prod (x - x_P)^{n_P}; the
    numerators are then cut out of L(N*O) by linear order conditions.
    """
    F = E.field
    for P in D.coeffs:
        if not E.contains(P):
            raise ValueError(f"support point {P} is not rational on the curve")
    h_poly = FqPolynomial(F, [1])
    target: dict[PointOnE, int] = dict(D.coeffs)
    for P, n in D.coeffs.items():
        if P.infinity or n <= 0:
            continue
        h_poly = h_poly * _power(FqPolynomial(F, [F.neg(P.x), 1]), n)
        # div(x - x_P) = P + (-P) - 2 O
        mP = E.neg(P)
        target[P] = target.get(P, 0) - n
        target[mP] = target.get(mP, 0) - n
        target[O_POINT] = target.get(O_POINT, 0) + 2 * n
    h = CoordRingElement(E, h_poly, FqPolynomial(F, []))
    N = target.get(O_POINT, 0)
    if N < 0:
        return []
    basis = _origin_basis(E, N)
    rows = []
    for P, n in target.items():
        if P.infinity or n >= 0:
            continue
        need = -n
        series = [b.local_series(P, need) for b in basis]
        for k in range(need):
            rows.append([int(s[k]) for s in series])
    if rows:
        kernel = mat_kernel(F, np.array(rows, dtype=np.int64))
    else:
        kernel = [np.eye(len(basis), dtype=np.int64)[i] for i in range(len(basis))]
    out = []
    for v in kernel:
        c = FqPolynomial(F, [])
        d = FqPolynomial(F, [])
        for coef, b in zip(v, basis):
            if coef:
                c = c + b.c.scale(int(coef))
                d = d + b.d.scale(int(coef))
        out.append(RationalFunction(CoordRingElement(E, c, d), h))
    return out


def _power(poly: FqPolynomial, n: int) -> FqPolynomial:
    out = FqPolynomial(poly.field, [1])
    for _ in range(n):
        out = out * poly
    return out
