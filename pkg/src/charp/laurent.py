"""Function arithmetic on the overlap E minus {O, fiber of x over x0}.

Every regular function there is c(u) + y d(u) with c, d Laurent
polynomials in u = x - x0.  Monomials u^j and y u^j have pole orders 2j and
2j + 3 at O, so pole order at O is read off from the leading monomial.

Arrays have shape (B, L, D): B is a batch (parameter) axis, L runs over
exponents starting at ``off``, D over powers of an auxiliary parameter t
(D == 1 for ordinary, non-parametric coefficients).
"""

from __future__ import annotations

import numpy as np

from .gf import FiniteField


class LPoly:
    __slots__ = ("off", "arr")

    def __init__(self, off: int, arr: np.ndarray):
        self.off = off
        self.arr = arr

    @property
    def batch(self) -> int:
        return self.arr.shape[0]

    @property
    def tdim(self) -> int:
        return self.arr.shape[2]

    def is_zero(self) -> bool:
        return self.arr.shape[1] == 0 or not self.arr.any()

    def exponents(self) -> range:
        return range(self.off, self.off + self.arr.shape[1])

    def coeff(self, j: int) -> np.ndarray:
        """Coefficient slice (B, D) of u^j."""
        k = j - self.off
        if 0 <= k < self.arr.shape[1]:
            return self.arr[:, k, :]
        return np.zeros((self.arr.shape[0], self.arr.shape[2]), dtype=np.int64)

    def max_exp(self) -> int | None:
        nz = np.flatnonzero(self.arr.any(axis=(0, 2)))
        return None if nz.size == 0 else self.off + int(nz[-1])

    def min_exp(self) -> int | None:
        nz = np.flatnonzero(self.arr.any(axis=(0, 2)))
        return None if nz.size == 0 else self.off + int(nz[0])


def lp_zero(B: int = 1, D: int = 1) -> LPoly:
    return LPoly(0, np.zeros((B, 0, D), dtype=np.int64))


def lp_mono(j: int, coef: int = 1, B: int = 1, D: int = 1) -> LPoly:
    arr = np.zeros((B, 1, D), dtype=np.int64)
    arr[:, 0, 0] = coef
    return LPoly(j, arr)


def lp_trim(a: LPoly) -> LPoly:
    mask = a.arr.any(axis=(0, 2))
    nz = np.flatnonzero(mask)
    if nz.size == 0:
        return LPoly(0, np.zeros((a.arr.shape[0], 0, a.arr.shape[2]), dtype=np.int64))
    lo, hi = int(nz[0]), int(nz[-1]) + 1
    tmask = np.flatnonzero(a.arr.any(axis=(0, 1)))
    D = max(1, int(tmask[-1]) + 1) if tmask.size else 1
    return LPoly(a.off + lo, a.arr[:, lo:hi, :D])


def _embed(a: LPoly, off: int, L: int, D: int) -> np.ndarray:
    out = np.zeros((a.arr.shape[0], L, D), dtype=np.int64)
    if a.arr.shape[1]:
        s = a.off - off
        out[:, s:s + a.arr.shape[1], :a.arr.shape[2]] = a.arr
    return out


def lp_add(F: FiniteField, a: LPoly, b: LPoly, sign: int = 1) -> LPoly:
    B = max(a.batch, b.batch)
    if a.arr.shape[1] == 0 and sign == 1:
        return b if b.batch == B else LPoly(b.off, np.broadcast_to(b.arr, (B,) + b.arr.shape[1:]).copy())
    if b.arr.shape[1] == 0:
        return a if a.batch == B else LPoly(a.off, np.broadcast_to(a.arr, (B,) + a.arr.shape[1:]).copy())
    off = min(a.off, b.off) if a.arr.shape[1] else b.off
    end = max(a.off + a.arr.shape[1], b.off + b.arr.shape[1])
    D = max(a.tdim, b.tdim)
    A = _embed(a, off, end - off, D)
    Bv = _embed(b, off, end - off, D)
    res = F.add(A, Bv) if sign == 1 else F.sub(A, Bv)
    return lp_trim(LPoly(off, np.asarray(res, dtype=np.int64)))


def lp_neg(F: FiniteField, a: LPoly) -> LPoly:
    return LPoly(a.off, np.asarray(F.neg(a.arr), dtype=np.int64))


def lp_scale(F: FiniteField, a: LPoly, c: int) -> LPoly:
    return lp_trim(LPoly(a.off, np.asarray(F.mul(a.arr, c), dtype=np.int64)))


def lp_mul(F: FiniteField, a: LPoly, b: LPoly) -> LPoly:
    """Product where ``a`` has batch 1 (a fixed function) and ``b`` any batch."""
    if a.is_zero() or b.is_zero():
        return lp_zero(max(a.batch, b.batch), max(a.tdim, b.tdim))
    if a.batch != 1:
        if b.batch == 1:
            a, b = b, a
        else:
            raise ValueError("at most one batched factor")
    La, Da = a.arr.shape[1], a.arr.shape[2]
    Lb, Db = b.arr.shape[1], b.arr.shape[2]
    out = np.zeros((b.batch, La + Lb - 1, Da + Db - 1), dtype=np.int64)
    ii, kk = np.nonzero(a.arr[0])
    for i, k in zip(ii, kk):
        c = int(a.arr[0, i, k])
        seg = out[:, i:i + Lb, k:k + Db]
        term = b.arr if c == 1 else F.mul(b.arr, c)
        out[:, i:i + Lb, k:k + Db] = F.add(seg, term)
    return lp_trim(LPoly(a.off + b.off, out))


def lp_shift(a: LPoly, k: int) -> LPoly:
    return LPoly(a.off + k, a.arr)


class Fn:
    """Function c(u) + y d(u), possibly batched."""

    __slots__ = ("c", "d")

    def __init__(self, c: LPoly, d: LPoly):
        self.c = c
        self.d = d

    @property
    def batch(self) -> int:
        return max(self.c.batch, self.d.batch)

    @property
    def tdim(self) -> int:
        return max(self.c.tdim, self.d.tdim)

    def is_zero(self) -> bool:
        return self.c.is_zero() and self.d.is_zero()

    def max_pole(self) -> int | None:
        """Largest pole order at O among monomials present (None for zero)."""
        cands = []
        mc, md = self.c.max_exp(), self.d.max_exp()
        if mc is not None:
            cands.append(2 * mc)
        if md is not None:
            cands.append(2 * md + 3)
        return max(cands) if cands else None

    def coeff_at_pole(self, k: int) -> np.ndarray:
        """Coefficient (B, D) of the unique monomial of pole order k at O."""
        if k % 2 == 0:
            return self.c.coeff(k // 2)
        return self.d.coeff((k - 3) // 2)

    def monomials(self):
        """Yield (pole_order, coefficient slice) for every exponent slot present."""
        for j in self.c.exponents():
            yield 2 * j, self.c.coeff(j)
        for j in self.d.exponents():
            yield 2 * j + 3, self.d.coeff(j)

    def in_coordinate_ring(self) -> bool:
        mc, md = self.c.min_exp(), self.d.min_exp()
        return (mc is None or mc >= 0) and (md is None or md >= 0)

    def key(self):
        c, d = lp_trim(self.c), lp_trim(self.d)
        return (c.off, c.arr.tobytes(), c.arr.shape, d.off, d.arr.tobytes(), d.arr.shape)

    def __repr__(self):
        def fmt(lp, pre):
            terms = []
            for j in lp.exponents():
                v = lp.coeff(j)
                if v.any():
                    terms.append(f"{v[0].tolist() if v.shape[1] > 1 else int(v[0, 0])}*{pre}u^{j}")
            return terms
        t = fmt(self.c, "") + fmt(self.d, "y*")
        return " + ".join(t) if t else "0"


def pole_monomial(k: int, coef: int = 1, B: int = 1, D: int = 1) -> Fn:
    """The basis monomial with pole order k at O (u^(k/2) or y u^((k-3)/2))."""
    if k % 2 == 0:
        return Fn(lp_mono(k // 2, coef, B, D), lp_zero(B, D))
    return Fn(lp_zero(B, D), lp_mono((k - 3) // 2, coef, B, D))


def coordinate_ring_poles(bound: int) -> list[int]:
    """Pole orders of the monomial basis of L(bound * O): 0, 2, 3, ..., bound."""
    if bound < 0:
        return []
    return [0] + list(range(2, bound + 1))


class FunctionRing:
    """Arithmetic of k[x, y]/(W) localized at u = x - x0."""

    def __init__(self, curve, x0: int):
        self.curve = curve
        self.F = curve.field
        self.x0 = x0
        F = self.F
        a1, a2, a3, a4, a6 = curve.coeffs
        # y^2 = P(u) - R(u) y with x = u + x0
        X = np.array([x0, 1], dtype=np.int64)

        def pmul(a, b):
            out = np.zeros(len(a) + len(b) - 1, dtype=np.int64)
            for i, c in enumerate(a):
                out[i:i + len(b)] = F.add(out[i:i + len(b)], F.mul(int(c), b))
            return out

        def padd(a, b):
            n = max(len(a), len(b))
            return np.asarray(F.add(np.pad(a, (0, n - len(a))), np.pad(b, (0, n - len(b)))), dtype=np.int64)

        X2 = pmul(X, X)
        X3 = pmul(X2, X)
        P = padd(padd(padd(X3, F.mul(X2, a2)), F.mul(X, a4)), np.array([a6], dtype=np.int64))
        R = padd(F.mul(X, a1), np.array([a3], dtype=np.int64))
        self.P = lp_trim(LPoly(0, np.asarray(P, dtype=np.int64).reshape(1, -1, 1)))
        self.R = lp_trim(LPoly(0, np.asarray(R, dtype=np.int64).reshape(1, -1, 1)))

    # -- constructors -------------------------------------------------------
    def zero(self, B: int = 1, D: int = 1) -> Fn:
        return Fn(lp_zero(B, D), lp_zero(B, D))

    def const(self, c: int, B: int = 1, D: int = 1) -> Fn:
        if c == 0:
            return self.zero(B, D)
        return Fn(lp_mono(0, c, B, D), lp_zero(B, D))

    def u_power(self, k: int) -> Fn:
        return Fn(lp_mono(k), lp_zero())

    def y(self) -> Fn:
        return Fn(lp_zero(), lp_mono(0))

    def t_power(self, k: int, f: Fn) -> Fn:
        """Multiply a function by t^k (adds a parametric degree)."""
        def sh(lp):
            arr = np.zeros(lp.arr.shape[:2] + (lp.arr.shape[2] + k,), dtype=np.int64)
            arr[:, :, k:] = lp.arr
            return LPoly(lp.off, arr)
        return Fn(sh(f.c), sh(f.d))

    # -- arithmetic ---------------------------------------------------------
    def add(self, f: Fn, g: Fn) -> Fn:
        return Fn(lp_add(self.F, f.c, g.c), lp_add(self.F, f.d, g.d))

    def sub(self, f: Fn, g: Fn) -> Fn:
        return Fn(lp_add(self.F, f.c, g.c, -1), lp_add(self.F, f.d, g.d, -1))

    def neg(self, f: Fn) -> Fn:
        return Fn(lp_neg(self.F, f.c), lp_neg(self.F, f.d))

    def scale(self, f: Fn, c: int) -> Fn:
        return Fn(lp_scale(self.F, f.c, c), lp_scale(self.F, f.d, c))

    def mul(self, f: Fn, g: Fn) -> Fn:
        """Product; at most one of f, g may be batched."""
        F = self.F
        if f.batch != 1 and g.batch == 1:
            f, g = g, f
        cc = lp_mul(F, f.c, g.c)
        dd = lp_mul(F, f.d, g.d)
        cd = lp_add(F, lp_mul(F, f.c, g.d), lp_mul(F, f.d, g.c))
        if dd.is_zero():
            return Fn(cc, cd)
        c = lp_add(F, cc, lp_mul(F, self.P, dd))
        d = lp_add(F, cd, lp_mul(F, self.R, dd), -1)
        return Fn(c, d)

    def power(self, f: Fn, e: int) -> Fn:
        out = self.const(1)
        base = f
        while e:
            if e & 1:
                out = self.mul(out, base)
            base = self.mul(base, base)
            e >>= 1
        return out

    def frobenius(self, f: Fn) -> Fn:
        return self.power(f, self.F.p)

    def equal(self, f: Fn, g: Fn) -> bool:
        return self.sub(f, g).is_zero()

    def select(self, f: Fn, weights: np.ndarray) -> Fn:
        """Contract the batch axis of f against a weight vector (D == 1 only)."""
        F = self.F

        def contract(lp):
            if lp.arr.shape[1] == 0:
                return lp_zero()
            acc = np.zeros(lp.arr.shape[1:], dtype=np.int64)
            for b in np.flatnonzero(weights):
                acc = F.add(acc, F.mul(lp.arr[b], int(weights[b])))
            return lp_trim(LPoly(lp.off, np.asarray(acc, dtype=np.int64)[None]))
        return Fn(contract(f.c), contract(f.d))

    def evaluate(self, f: Fn, x: int, y: int, field=None, embed=None) -> int:
        """Value at an affine point, for f regular there (f in the coordinate ring).

        ``field``/``embed`` evaluate at a point over an extension: ``embed`` maps
        base-field codes into ``field``.
        """
        if not f.in_coordinate_ring():
            raise ValueError("function has poles on the affine chart")
        K = field or self.F
        emb = (lambda c: int(embed[c])) if embed is not None else (lambda c: int(c))
        u = int(K.sub(x, emb(self.x0)))

        def ev(lp):
            lp = lp_trim(lp)
            acc = 0
            for j in reversed(list(lp.exponents())):
                acc = int(K.add(K.mul(acc, u), emb(int(lp.coeff(j)[0, 0]))))
            upow = int(K.power(u, lp.off)) if lp.off > 0 else 1
            return int(K.mul(acc, upow)) if lp.arr.shape[1] else 0
        return int(K.add(ev(f.c), K.mul(y, ev(f.d))))

    def value_at_origin(self, f: Fn) -> int:
        """Value at O of a function regular at O: the constant coefficient."""
        mp = f.max_pole()
        if mp is not None and mp > 0:
            raise ValueError("function has a pole at O")
        return int(f.c.coeff(0)[0, 0])
