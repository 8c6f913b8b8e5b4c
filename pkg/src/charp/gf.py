"""Exact arithmetic in GF(p^n) and dense linear algebra over it.

Field elements are stored as integer codes: the code of
``c_0 + c_1 x + ... + c_{n-1} x^{n-1}`` is ``sum c_i p^i``.  Every
arithmetic routine accepts numpy integer arrays (vectorized) as well as
plain ints, so the higher layers can do row operations on whole arrays.

Extension fields use exp/log tables over a fixed generator; prime fields
use plain modular arithmetic.
"""

from __future__ import annotations

from functools import lru_cache
from typing import Iterable, Sequence

import numpy as np

_TABLE_LIMIT = 1024


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


def _prime_factors(n: int) -> list[int]:
    out = []
    f = 2
    while f * f <= n:
        if n % f == 0:
            out.append(f)
            while n % f == 0:
                n //= f
        f += 1
    if n > 1:
        out.append(n)
    return out


# ---------------------------------------------------------------------------
# polynomials over the prime field GF(p), as lists of ints (low degree first)

def _ptrim(a: list[int]) -> list[int]:
    while a and a[-1] == 0:
        a.pop()
    return a


def _pmod(a: list[int], m: list[int], p: int) -> list[int]:
    a = _ptrim([c % p for c in a])
    inv_lead = pow(m[-1], p - 2, p)
    dm = len(m) - 1
    while len(a) - 1 >= dm and a:
        c = a[-1] * inv_lead % p
        shift = len(a) - 1 - dm
        for i, mc in enumerate(m):
            a[shift + i] = (a[shift + i] - c * mc) % p
        _ptrim(a)
    return a


def _pmul(a: list[int], b: list[int], p: int) -> list[int]:
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] = (out[i + j] + x * y) % p
    return _ptrim(out)


def _pgcd(a: list[int], b: list[int], p: int) -> list[int]:
    a, b = _ptrim(list(a)), _ptrim(list(b))
    while b:
        a, b = b, _pmod(a, b, p)
    return a


def _ppowmod(base: list[int], e: int, m: list[int], p: int) -> list[int]:
    result = [1]
    base = _pmod(base, m, p)
    while e:
        if e & 1:
            result = _pmod(_pmul(result, base, p), m, p)
        base = _pmod(_pmul(base, base, p), m, p)
        e >>= 1
    return result


def is_irreducible_mod_p(f: Sequence[int], p: int) -> bool:
    """Rabin-style test: f monic of degree n is irreducible over GF(p)."""
    f = _ptrim([c % p for c in f])
    n = len(f) - 1
    if n < 1:
        return False
    if n == 1:
        return True
    x = [0, 1]
    xp = x
    for i in range(1, n // 2 + 1):
        xp = _ppowmod(xp, p, f, p)
        diff = list(xp) + [0] * max(0, 2 - len(xp))
        diff[1] = (diff[1] - 1) % p
        if len(_pgcd(f, diff, p)) > 1:
            return False
    return True


@lru_cache(maxsize=None)
def conway_free_modulus(p: int, n: int) -> tuple[int, ...]:
    """Smallest monic irreducible of degree n, ordered by its integer code."""
    for code in range(p ** n):
        coeffs = [(code // p ** i) % p for i in range(n)] + [1]
        if is_irreducible_mod_p(coeffs, p):
            return tuple(coeffs)
    raise ArithmeticError(f"no irreducible polynomial of degree {n} over GF({p})")


class FiniteField:
    """GF(p^n) with modulus given low-degree-first (monic, length n + 1)."""

    def __init__(self, p: int, n: int = 1, modulus: Sequence[int] | None = None):
        if not is_prime(p):
            raise ValueError(f"characteristic {p} is not prime")
        if n < 1:
            raise ValueError("extension degree must be >= 1")
        if modulus is None:
            modulus = conway_free_modulus(p, n) if n > 1 else (0, 1)
        modulus = tuple(int(c) % p for c in modulus)
        if len(modulus) != n + 1 or modulus[-1] != 1:
            raise ValueError("modulus must be monic of degree n")
        if not is_irreducible_mod_p(list(modulus), p):
            raise ValueError(f"modulus {modulus} is reducible over GF({p})")
        self.p = p
        self.n = n
        self.q = p ** n
        self.modulus = modulus
        if n > 1:
            self._build_tables()
        else:
            order = p - 1
            self.generator = next((g for g in range(1, p) if all(
                pow(g, order // f, p) != 1 for f in _prime_factors(order))), 1)

    # -- construction -------------------------------------------------------
    def _poly_mulmod_code(self, a: int, b: int) -> int:
        p, n = self.p, self.n
        da = [(a // p ** i) % p for i in range(n)]
        db = [(b // p ** i) % p for i in range(n)]
        r = _pmod(_pmul(_ptrim(da), _ptrim(db), p), list(self.modulus), p)
        return sum(c * p ** i for i, c in enumerate(r))

    def _build_tables(self) -> None:
        q = self.q
        order = q - 1
        factors = _prime_factors(order)
        gen = None
        for g in range(2, q):
            if all(self._code_pow(g, order // f) != 1 for f in factors):
                gen = g
                break
        assert gen is not None
        exp = np.zeros(2 * order, dtype=np.int64)
        log = np.zeros(q, dtype=np.int64)
        cur = 1
        for i in range(order):
            exp[i] = cur
            log[cur] = i
            cur = self._poly_mulmod_code(cur, gen)
        exp[order:] = exp[:order]
        self.generator = gen
        self._exp = exp
        self._log = log
        self._pw = np.array([self.p ** i for i in range(self.n)], dtype=np.int64)
        if q <= _TABLE_LIMIT:
            codes = np.arange(q, dtype=np.int64)
            self._add_table = self._digit_add(codes[:, None], codes[None, :], 1)
            self._mul_table = self._log_mul(codes[:, None], codes[None, :])
        else:
            self._add_table = None
            self._mul_table = None

    def _code_pow(self, a: int, e: int) -> int:
        r = 1
        while e:
            if e & 1:
                r = self._poly_mulmod_code(r, a)
            a = self._poly_mulmod_code(a, a)
            e >>= 1
        return r

    def _digit_add(self, a, b, sign: int):
        p = self.p
        if p == 2:
            return np.bitwise_xor(a, b)
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        out = np.zeros(np.broadcast(a, b).shape, dtype=np.int64)
        for w in self._pw:
            out += ((a // w % p + sign * (b // w % p)) % p) * w
        return out

    def _log_mul(self, a, b):
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        zero = (a == 0) | (b == 0)
        r = self._exp[(self._log[a] + self._log[b]) % (self.q - 1)]
        return np.where(zero, 0, r)

    # -- vectorized arithmetic on codes ------------------------------------
    def add(self, a, b):
        if self.n == 1:
            return (np.asarray(a, dtype=np.int64) + b) % self.p
        if self._add_table is not None:
            return self._add_table[a, b]
        return self._digit_add(a, b, 1)

    def neg(self, a):
        if self.n == 1:
            return (-np.asarray(a, dtype=np.int64)) % self.p
        return self._digit_add(np.zeros_like(np.asarray(a, dtype=np.int64)), a, -1)

    def sub(self, a, b):
        if self.n == 1:
            return (np.asarray(a, dtype=np.int64) - b) % self.p
        if self._add_table is not None:
            return self._add_table[a, self.neg(b)]
        return self._digit_add(a, b, -1)

    def mul(self, a, b):
        if self.n == 1:
            return (np.asarray(a, dtype=np.int64) * b) % self.p
        if self._mul_table is not None:
            return self._mul_table[a, b]
        return self._log_mul(a, b)

    def inv(self, a):
        a_arr = np.asarray(a, dtype=np.int64)
        if np.any(a_arr == 0):
            raise ZeroDivisionError("inverse of zero in finite field")
        if self.n == 1:
            out = np.vectorize(lambda v: pow(int(v), self.p - 2, self.p), otypes=[np.int64])(a_arr)
        else:
            out = self._exp[(self.q - 1 - self._log[a_arr]) % (self.q - 1)]
        return int(out) if np.ndim(out) == 0 else out

    def power(self, a, e: int):
        a_arr = np.asarray(a, dtype=np.int64)
        if self.n == 1:
            out = np.vectorize(lambda v: pow(int(v), e, self.p) if (v or e > 0) else (1 if e == 0 else 0),
                               otypes=[np.int64])(a_arr)
        else:
            if e < 0:
                a_arr = np.asarray(self.inv(a_arr))
                e = -e
            out = np.where(a_arr == 0, 1 if e == 0 else 0,
                           self._exp[(self._log[a_arr] * e) % (self.q - 1)])
        return int(out) if np.ndim(out) == 0 else out

    def frobenius(self, a):
        return self.power(a, self.p)

    # -- scalar helpers -----------------------------------------------------
    def __call__(self, value) -> "FqElement":
        return FqElement(self, self.code(value))

    def code(self, value) -> int:
        """Convert an int (embedding GF(p) ints) or coefficient sequence to a code."""
        if isinstance(value, FqElement):
            if value.field is not self and value.field != self:
                raise ValueError("element belongs to another field")
            return value.code
        if isinstance(value, (int, np.integer)):
            return int(value) % self.p
        coeffs = list(value)
        if len(coeffs) > self.n:
            raise ValueError("too many coefficients")
        return sum((int(c) % self.p) * self.p ** i for i, c in enumerate(coeffs))

    def coeffs(self, code: int) -> tuple[int, ...]:
        return tuple((code // self.p ** i) % self.p for i in range(self.n))

    def elements(self) -> Iterable["FqElement"]:
        return (FqElement(self, c) for c in range(self.q))

    def is_square(self, a: int) -> bool:
        if a == 0:
            return True
        if self.p == 2:
            return True
        if self.n == 1:
            return pow(a, (self.p - 1) // 2, self.p) == 1
        return int(self._log[a]) % 2 == 0

    def trace_to_prime(self, a):
        """Absolute trace GF(q) -> GF(p), vectorized; result is a code in [0, p)."""
        acc = np.zeros_like(np.asarray(a, dtype=np.int64))
        cur = np.asarray(a, dtype=np.int64)
        for _ in range(self.n):
            acc = self.add(acc, cur)
            cur = self.frobenius(cur)
        return acc

    def embedding_into(self, big: "FiniteField") -> np.ndarray:
        """Code table of a field embedding self -> big (requires n | big.n)."""
        if big.p != self.p or big.n % self.n:
            raise ValueError("no embedding between these fields")
        if self.n == 1:
            return np.arange(self.p, dtype=np.int64)
        # find a root of self.modulus inside big, smallest code first
        codes = np.arange(big.q, dtype=np.int64)
        val = np.zeros(big.q, dtype=np.int64)
        for c in reversed(self.modulus):
            val = big.add(big.mul(val, codes), c)
        root = int(np.flatnonzero(val == 0)[0])
        table = np.zeros(self.q, dtype=np.int64)
        for code in range(self.q):
            acc = 0
            for c in reversed(self.coeffs(code)):
                acc = int(big.add(big.mul(acc, root), c))
            table[code] = acc
        return table

    def __eq__(self, other):
        return isinstance(other, FiniteField) and (self.p, self.n, self.modulus) == (
            other.p, other.n, other.modulus)

    def __hash__(self):
        return hash((self.p, self.n, self.modulus))

    def __repr__(self):
        return f"GF({self.p}^{self.n})" if self.n > 1 else f"GF({self.p})"


@lru_cache(maxsize=None)
def field_create(p: int, n: int = 1, modulus: tuple[int, ...] | None = None) -> FiniteField:
    """Cached field constructor; modulus defaults to the smallest irreducible."""
    return FiniteField(p, n, modulus)


class FqElement:
    __slots__ = ("field", "code")

    def __init__(self, field: FiniteField, code: int):
        self.field = field
        self.code = int(code)

    def _other(self, other) -> int:
        return self.field.code(other)

    def __add__(self, other):
        return FqElement(self.field, int(self.field.add(self.code, self._other(other))))

    __radd__ = __add__

    def __sub__(self, other):
        return FqElement(self.field, int(self.field.sub(self.code, self._other(other))))

    def __rsub__(self, other):
        return FqElement(self.field, int(self.field.sub(self._other(other), self.code)))

    def __neg__(self):
        return FqElement(self.field, int(self.field.neg(self.code)))

    def __mul__(self, other):
        return FqElement(self.field, int(self.field.mul(self.code, self._other(other))))

    __rmul__ = __mul__

    def inverse(self):
        return FqElement(self.field, self.field.inv(self.code))

    def __truediv__(self, other):
        return self * FqElement(self.field, self._other(other)).inverse()

    def __pow__(self, e: int):
        return FqElement(self.field, self.field.power(self.code, e))

    def __eq__(self, other):
        if isinstance(other, FqElement):
            return self.field == other.field and self.code == other.code
        if isinstance(other, int):
            return self.code == self.field.code(other)
        return NotImplemented

    def __hash__(self):
        return hash(self.code)

    def __bool__(self):
        return self.code != 0

    def __int__(self):
        return self.code

    def __repr__(self):
        if self.field.n == 1:
            return str(self.code)
        terms = [f"{c}*z^{i}" if i else str(c) for i, c in enumerate(self.field.coeffs(self.code)) if c]
        return "(" + " + ".join(terms) + ")" if terms else "0"


# ---------------------------------------------------------------------------
# polynomials over GF(q) in one variable

class FqPolynomial:
    """Univariate polynomial with GF(q) coefficient codes, low degree first."""

    __slots__ = ("field", "coeffs")

    def __init__(self, field: FiniteField, coeffs: Iterable[int]):
        c = [int(v) for v in coeffs]
        while c and c[-1] == 0:
            c.pop()
        self.field = field
        self.coeffs = tuple(c)

    @property
    def degree(self) -> float:
        return len(self.coeffs) - 1 if self.coeffs else float("-inf")

    def is_zero(self) -> bool:
        return not self.coeffs

    def __add__(self, other: "FqPolynomial") -> "FqPolynomial":
        F = self.field
        n = max(len(self.coeffs), len(other.coeffs))
        a = list(self.coeffs) + [0] * (n - len(self.coeffs))
        b = list(other.coeffs) + [0] * (n - len(other.coeffs))
        return FqPolynomial(F, (int(F.add(x, y)) for x, y in zip(a, b)))

    def __neg__(self) -> "FqPolynomial":
        return FqPolynomial(self.field, (int(self.field.neg(c)) for c in self.coeffs))

    def __sub__(self, other: "FqPolynomial") -> "FqPolynomial":
        return self + (-other)

    def __mul__(self, other) -> "FqPolynomial":
        F = self.field
        if not isinstance(other, FqPolynomial):
            c = F.code(other)
            return FqPolynomial(F, (int(F.mul(x, c)) for x in self.coeffs))
        if not self.coeffs or not other.coeffs:
            return FqPolynomial(F, ())
        a = np.array(self.coeffs, dtype=np.int64)
        out = np.zeros(len(self.coeffs) + len(other.coeffs) - 1, dtype=np.int64)
        for j, c in enumerate(other.coeffs):
            if c:
                seg = out[j:j + len(a)]
                out[j:j + len(a)] = F.add(seg, F.mul(a, c))
        return FqPolynomial(F, out)

    def scale(self, code: int) -> "FqPolynomial":
        """Multiply by the element with the given code."""
        F = self.field
        return FqPolynomial(F, (int(F.mul(x, code)) for x in self.coeffs))

    def divmod(self, other: "FqPolynomial") -> tuple["FqPolynomial", "FqPolynomial"]:
        F = self.field
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        r = list(self.coeffs)
        db = len(other.coeffs) - 1
        inv_lead = F.inv(other.coeffs[-1])
        qc = [0] * max(0, len(r) - db)
        while len(r) - 1 >= db and r:
            c = int(F.mul(r[-1], inv_lead))
            s = len(r) - 1 - db
            qc[s] = c
            for i, oc in enumerate(other.coeffs):
                r[s + i] = int(F.sub(r[s + i], F.mul(c, oc)))
            while r and r[-1] == 0:
                r.pop()
        return FqPolynomial(F, qc), FqPolynomial(F, r)

    def monic(self) -> "FqPolynomial":
        if self.is_zero():
            return self
        return self * self.field.inv(self.coeffs[-1])

    def __call__(self, x):
        F = self.field
        acc = 0
        for c in reversed(self.coeffs):
            acc = F.add(F.mul(acc, x), c)
        return acc

    def __eq__(self, other):
        return isinstance(other, FqPolynomial) and self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def __repr__(self):
        return f"FqPolynomial({list(self.coeffs)})"


def poly_gcd(a: FqPolynomial, b: FqPolynomial) -> FqPolynomial:
    while not b.is_zero():
        a, b = b, a.divmod(b)[1]
    return a.monic()


# ---------------------------------------------------------------------------
# dense matrices

def rref(F: FiniteField, M) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form; pivots chosen as first nonzero in column order."""
    A = np.array(M, dtype=np.int64, copy=True)
    if A.ndim != 2:
        raise ValueError("rref expects a 2-d array")
    m, n = A.shape
    pivots: list[int] = []
    r = 0
    for c in range(n):
        if r == m:
            break
        nz = np.flatnonzero(A[r:, c])
        if nz.size == 0:
            continue
        piv = r + int(nz[0])
        if piv != r:
            A[[r, piv]] = A[[piv, r]]
        lead = int(A[r, c])
        if lead != 1:
            A[r] = F.mul(A[r], F.inv(lead))
        col = A[:, c].copy()
        col[r] = 0
        rows = np.flatnonzero(col)
        if rows.size:
            A[rows] = F.sub(A[rows], F.mul(col[rows, None], A[r][None, :]))
        pivots.append(c)
        r += 1
    return A, pivots


def mat_rank(F: FiniteField, M) -> int:
    M = np.asarray(M, dtype=np.int64)
    if M.size == 0:
        return 0
    return len(rref(F, M)[1])


def mat_kernel(F: FiniteField, M) -> list[np.ndarray]:
    """Basis of the right kernel {v : M v = 0}; one vector per free column."""
    M = np.asarray(M, dtype=np.int64)
    n = M.shape[1]
    if M.shape[0] == 0:
        return [np.eye(n, dtype=np.int64)[i] for i in range(n)]
    R, pivots = rref(F, M)
    free = [c for c in range(n) if c not in set(pivots)]
    basis = []
    for fcol in free:
        v = np.zeros(n, dtype=np.int64)
        v[fcol] = 1
        for i, pc in enumerate(pivots):
            v[pc] = F.neg(R[i, fcol])
        basis.append(v)
    return basis


def mat_mul(F: FiniteField, A, B) -> np.ndarray:
    A = np.asarray(A, dtype=np.int64)
    B = np.asarray(B, dtype=np.int64)
    if F.n == 1:
        return (A @ B) % F.p
    out = np.zeros((A.shape[0], B.shape[1]), dtype=np.int64)
    for k in range(A.shape[1]):
        out = F.add(out, F.mul(A[:, k:k + 1], B[k:k + 1, :]))
    return out


class FqMatrix:
    """Immutable dense matrix over GF(q), entries are element codes."""

    def __init__(self, field: FiniteField, entries):
        arr = np.array(entries, dtype=np.int64)
        if arr.ndim == 1 and arr.size == 0:
            arr = arr.reshape(0, 0)
        if arr.ndim != 2:
            raise ValueError("matrix entries must form a 2-d grid")
        arr.setflags(write=False)
        self.field = field
        self.entries = arr

    @property
    def rows(self) -> int:
        return self.entries.shape[0]

    @property
    def cols(self) -> int:
        return self.entries.shape[1]

    def rank(self) -> int:
        return mat_rank(self.field, self.entries)

    def kernel(self) -> list[np.ndarray]:
        return mat_kernel(self.field, self.entries)

    def __matmul__(self, other):
        if isinstance(other, FqMatrix):
            return FqMatrix(self.field, mat_mul(self.field, self.entries, other.entries))
        v = np.asarray(other, dtype=np.int64).reshape(-1, 1)
        return mat_mul(self.field, self.entries, v).ravel()

    def solve(self, b) -> np.ndarray | None:
        """One solution x of M x = b, or None when inconsistent."""
        b = np.asarray(b, dtype=np.int64).reshape(-1, 1)
        aug = np.hstack([self.entries, b])
        R, pivots = rref(self.field, aug)
        if self.cols in pivots:
            return None
        x = np.zeros(self.cols, dtype=np.int64)
        for i, pc in enumerate(pivots):
            x[pc] = R[i, -1]
        return x

    @classmethod
    def identity(cls, field: FiniteField, n: int) -> "FqMatrix":
        return cls(field, np.eye(n, dtype=np.int64))

    @classmethod
    def zeros(cls, field: FiniteField, rows: int, cols: int) -> "FqMatrix":
        return cls(field, np.zeros((rows, cols), dtype=np.int64))
