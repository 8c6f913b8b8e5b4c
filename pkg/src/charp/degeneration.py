"""The degeneration over A^1 (split bundle at t = 0, F2 for t != 0), its cone,
plurigenus tables and the non-Cohen-Macaulay certificate.

Plurigenera use the linear equivalence m(K + Delta + D) ~ mD on the surface,
valid when m is divisible by mbar * p (every coefficient of m*Delta is then
integral).  On the cone the r-th graded piece of the pluricanonical ring is
h0(S, O((m + r)D) (x) pi^*(r A)) with A = a*O.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import asdict, dataclass, field
from fractions import Fraction

from .cech import TwoChartCover, _triangular_system, sym, unipotent_rank2
from .elliptic import WeierstrassCurve, multiple_of_origin
from .gf import FqPolynomial
from .ruled import RuledSurfaceModel, section_count, thickened_section_h1


@dataclass
class FamilyConfig:
    curve: WeierstrassCurve
    mbar: Fraction | int = 1
    a: int = 1                      # degree of A in L = O_S(D) (x) pi^* A
    theta: str = "D"                # "D" or "pencil" (D replaced by (1/(mbar p)) sum G'_i)

    def __post_init__(self):
        self.mbar = Fraction(self.mbar)
        if self.mbar <= 0:
            raise ValueError("mbar must be positive")
        if self.a < 1:
            raise ValueError("ample degree a must be at least 1")
        if self.theta not in ("D", "pencil"):
            raise ValueError("theta must be 'D' or 'pencil'")
        c = self.delta_coefficient
        if not (0 < c < 1):
            raise ValueError(f"boundary coefficient {c} is not in (0, 1)")
        if self.step.denominator != 1:
            raise ValueError("mbar * p must be an integer")

    @property
    def p(self) -> int:
        return self.curve.field.p

    @property
    def delta_coefficient(self) -> Fraction:
        return 1 / (self.mbar * self.p)

    @property
    def n_members(self) -> int:
        """Delta has 2*mbar members of |pD|, each with coefficient 1/(mbar p)."""
        n = 2 * self.mbar
        if n.denominator != 1:
            raise ValueError("2 * mbar must be an integer")
        return int(n)

    @property
    def step(self) -> Fraction:
        return self.mbar * self.p

    def delta_class(self) -> Fraction:
        """Class of Delta as a multiple of D: 2 mbar * p * 1/(mbar p) = 2, so K + Delta ~ 0."""
        return self.n_members * self.p * self.delta_coefficient

    def valid_m(self, m_max: int) -> list[int]:
        s = int(self.step)
        return list(range(s, m_max + 1, s))

    def check_m(self, m: int):
        if m <= 0 or m % int(self.step):
            raise ValueError(f"m = {m} is not a positive multiple of mbar*p = {self.step}")
        # m * coefficient is integral for every boundary component
        assert (m * self.delta_coefficient).denominator == 1

    @property
    def cover(self) -> TwoChartCover:
        if not hasattr(self, "_cover"):
            self._cover = TwoChartCover(self.curve)
        return self._cover

    def surface(self, t: str) -> RuledSurfaceModel:
        if t not in ("zero", "generic"):
            raise ValueError("t must be 'zero' or 'generic'")
        return RuledSurfaceModel(self.cover, "split" if t == "zero" else "F2")


@dataclass
class ConeModel:
    """Y = P_Z(O + L) over Z = S with L = O_S(D) (x) pi^* (a O)."""

    cfg: FamilyConfig

    @property
    def a(self) -> int:
        return self.cfg.a

    def normal_bundle_degrees(self) -> dict[str, str]:
        return {"Z0": "L^-1", "Zinf": "L"}

    def graded_piece(self, t: str, m: int, r: int, method: str = "engine") -> int:
        """h0(Z, L^r(m D_Z)) = h0(S, O((m + r)D) (x) pi^*(r a O))."""
        if r == 0:
            return section_count(self.cfg.surface(t), m)
        if method == "closed":
            return (m + r + 1) * r * self.a
        S = self.cfg.surface(t)
        return section_count(S, m + r, multiple_of_origin(S.curve, r * self.a))


def surface_plurigenus(cfg: FamilyConfig, m: int, t: str = "generic") -> int:
    cfg.check_m(m)
    return section_count(cfg.surface(t), m)


def threefold_plurigenus(cone: ConeModel, cfg: FamilyConfig, m: int, t: str = "generic",
                         method: str = "auto") -> int:
    """Sum over r = 0..m of h0(Z, L^r(m D_Z))."""
    cfg.check_m(m)
    if method == "auto":
        method = "engine" if m <= 2 * cfg.p + 2 else "closed"
    return sum(cone.graded_piece(t, m, r, method) for r in range(m + 1))


# ---------------------------------------------------------------------------
# Smith normal form over GF(q)[t]

def _pdeg(f: FqPolynomial) -> float:
    return f.degree


def smith_normal_form(F, M: list[list[FqPolynomial]]) -> list[FqPolynomial]:
    """Invariant factors (monic, nonzero ones only) of a matrix over GF(q)[t]."""
    A = [list(row) for row in M]
    nr = len(A)
    nc = len(A[0]) if nr else 0
    diag = []
    k = 0
    while k < min(nr, nc):
        piv = None
        for i in range(k, nr):
            for j in range(k, nc):
                if not A[i][j].is_zero() and (piv is None or A[i][j].degree < A[piv[0]][piv[1]].degree):
                    piv = (i, j)
        if piv is None:
            break
        i, j = piv
        A[k], A[i] = A[i], A[k]
        for row in A:
            row[k], row[j] = row[j], row[k]
        done = False
        while not done:
            done = True
            d = A[k][k]
            for i in range(k + 1, nr):
                if not A[i][k].is_zero():
                    q, r = A[i][k].divmod(d)
                    A[i] = [A[i][c] - q * A[k][c] for c in range(nc)]
                    if not r.is_zero():
                        done = False
            for j in range(k + 1, nc):
                if not A[k][j].is_zero():
                    q, r = A[k][j].divmod(d)
                    for row in A:
                        row[j] = row[j] - q * row[k]
                    if not r.is_zero():
                        done = False
            if not done:
                # move a smaller remainder into the pivot position and repeat
                best = (k, k)
                for i in range(k, nr):
                    if not A[i][k].is_zero() and A[i][k].degree < A[best[0]][best[1]].degree:
                        best = (i, k)
                for j in range(k, nc):
                    if not A[k][j].is_zero() and A[k][j].degree < A[best[0]][best[1]].degree:
                        best = (k, j)
                i, j = best
                A[k], A[i] = A[i], A[k]
                for row in A:
                    row[k], row[j] = row[j], row[k]
                continue
            # divisibility: d must divide the rest of the matrix
            for i in range(k + 1, nr):
                bad = next((j for j in range(k + 1, nc) if not A[i][j].divmod(d)[1].is_zero()), None)
                if bad is not None:
                    A[k] = [A[k][c] + A[i][c] for c in range(nc)]
                    done = False
                    break
        diag.append(A[k][k].monic())
        k += 1
    return diag


@dataclass
class ParametricResult:
    m: int
    generic_rank: int
    special_rank: int
    invariant_factors: list = field(default_factory=list)


def parametric_cohomology(cfg: FamilyConfig, m: int) -> ParametricResult:
    """h0 of Sym^m of [[1, t g], [0, 1]] over k(t) and at t = 0, from the SNF of the condition matrix."""
    if m < 0:
        raise ValueError("m must be nonnegative")
    cover = cfg.cover
    ring = cover.ring
    one = ring.const(1)
    tg = ring.t_power(1, unipotent_rank2(cover).T[0][1])
    from .cech import CechBundle
    Ft = CechBundle(cover, [[one, tg], [None, one]], [[one, ring.neg(tg)], [None, one]], [0, 0], 0, check=False)
    V = sym(Ft, m)
    sysm = _triangular_system(V, 0)
    C = sysm.conditions
    F = cover.field
    B = sysm.params
    if C.shape[0] == 0:
        return ParametricResult(m, B, B, [])
    M = [[FqPolynomial(F, C[r, b, :]) for b in range(B)] for r in range(C.shape[0])]
    inv = smith_normal_form(F, M)
    generic = B - len(inv)
    special = B - sum(1 for d in inv if d.coeffs[0] != 0)
    return ParametricResult(m, generic, special, [list(d.coeffs) for d in inv])


# ---------------------------------------------------------------------------
# non-CM certificate

def non_cm_certificate(cfg: FamilyConfig) -> dict:
    """Verdict per fiber from the torsion test on R^1 of the pencil map.

    A torsion-free R^1 (a line bundle on P^1) forces h1(O) = 1 on the
    thickened fiber pD; a larger value exhibits a 0-dimensional associated
    point, i.e. the canonical model of that fiber is not Cohen-Macaulay.
    """
    p = cfg.p
    generic = thickened_section_h1(cfg.surface("generic"), p)
    special = thickened_section_h1(cfg.surface("zero"), 1)
    pred = 1
    return {
        "p": p,
        "torsion_free_prediction": pred,
        "fibers": {
            "t=0": {"h1": special, "fiber": "D0 (trivial fibration E x P^1)",
                    "torsion": special > pred, "verdict": "CM" if special <= pred else "not CM"},
            "t!=0": {"h1": generic, "fiber": f"{p}D1",
                     "torsion": generic > pred, "verdict": "CM" if generic <= pred else "not CM"},
        },
    }


# ---------------------------------------------------------------------------
# tables

@dataclass
class PlurigeneraRow:
    m: int
    P_m_t0: int
    P_m_generic: int
    jump: int
    threefold_P_m_t0: int
    threefold_P_m_generic: int
    expected_floor: int            # informational: floor(m/p) + 1
    expectation_holds: bool

    @property
    def threefold_jump(self) -> int:
        return self.threefold_P_m_t0 - self.threefold_P_m_generic


@dataclass
class PlurigeneraTable:
    p: int
    mbar: str
    a: int
    rows: list[PlurigeneraRow]

    COLUMNS = ("m", "P_m_t0", "P_m_generic", "jump", "threefold_P_m_t0", "threefold_P_m_generic")

    def to_dict(self) -> dict:
        return {"p": self.p, "mbar": self.mbar, "a": self.a,
                "rows": [asdict(r) for r in self.rows],
                "informational": "expected_floor = floor(m/p)+1 is a non-binding comparison"}

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\r\n")
        w.writerow(self.COLUMNS)
        for r in self.rows:
            w.writerow([getattr(r, c) for c in self.COLUMNS])
        return buf.getvalue()


def plurigenera_table(cfg: FamilyConfig, m_max: int) -> PlurigeneraTable:
    ms = cfg.valid_m(m_max)
    if not ms:
        raise ValueError("empty m-range")
    cone = ConeModel(cfg)
    rows = []
    for m in ms:
        s0 = surface_plurigenus(cfg, m, "zero")
        s1 = surface_plurigenus(cfg, m, "generic")
        y0 = threefold_plurigenus(cone, cfg, m, "zero")
        y1 = threefold_plurigenus(cone, cfg, m, "generic")
        exp = m // cfg.p + 1
        rows.append(PlurigeneraRow(m, s0, s1, s0 - s1, y0, y1, exp, exp == s1))
    return PlurigeneraTable(cfg.p, str(cfg.mbar), cfg.a, rows)
