"""Combinatorial lc / dlt checker for pairs (X, D + Delta), D reduced SNC.

Sufficient condition checked on every stratum D_J (J = () is X itself):
no component of D_J lies in supp(Delta), and mult_x(Delta|D_J) <= 1
(< 1 for dlt).  Multiplicities are supplied as upper-bound annotations.
A failed condition never means "not lc": the test is one-directional.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field, replace
from fractions import Fraction
from itertools import combinations
from typing import Iterable

DLT, LC, VIOLATED = "dlt", "lc", "condition-violated"


class AnnotationError(ValueError):
    pass


def _frac(v, base_symbol: str | None = None) -> Fraction:
    if isinstance(v, str) and base_symbol and base_symbol in v:
        raise AnnotationError(f"annotation {v!r} depends on the base parameter {base_symbol!r}")
    try:
        return Fraction(v)
    except (TypeError, ValueError) as exc:
        raise AnnotationError(f"not a rational number: {v!r}") from exc


@dataclass(frozen=True)
class Stratum:
    J: frozenset
    dim: int
    contains_delta_component: bool
    max_mult: Fraction


@dataclass(frozen=True)
class StratifiedPair:
    dimension: int
    divisors: tuple[str, ...]
    strata: dict                       # frozenset(J) -> Stratum
    delta: tuple[tuple[str, Fraction], ...] = ()

    def __post_init__(self):
        n = self.dimension
        names = set(self.divisors)
        if len(names) != len(self.divisors):
            raise AnnotationError("duplicate divisor names")
        for name, c in self.delta:
            if c <= 0:
                raise AnnotationError(f"delta coefficient of {name} must be positive")
        if frozenset() not in self.strata:
            raise AnnotationError("annotation for the ambient stratum J = [] is missing")
        for J, s in self.strata.items():
            if not J <= names:
                raise AnnotationError(f"stratum {sorted(J)} names unknown divisors")
            for k in range(len(J)):
                for sub in combinations(sorted(J), k):
                    if frozenset(sub) not in self.strata:
                        raise AnnotationError(f"stratum {sorted(sub)} missing below {sorted(J)}")
                    if self.strata[frozenset(sub)].dim <= s.dim:
                        raise AnnotationError("stratum dimensions must drop with |J|")
            if s.dim < 0 or s.dim > n:
                raise AnnotationError(f"bad dimension for {sorted(J)}")
            if s.max_mult < 0:
                raise AnnotationError("multiplicities are nonnegative")
            if s.dim == 0 and not s.contains_delta_component and s.max_mult != 0:
                raise AnnotationError(f"point stratum {sorted(J)} off supp(Delta) must have mult 0")
        for i in self.divisors:
            if frozenset([i]) not in self.strata:
                raise AnnotationError(f"divisor {i} has no stratum annotation")

    # -- I/O ------------------------------------------------------------------
    @classmethod
    def from_dict(cls, d: dict, base_symbol: str | None = None) -> "StratifiedPair":
        try:
            strata = {}
            for s in d["strata"]:
                J = frozenset(s["J"])
                if J in strata:
                    raise AnnotationError(f"stratum {sorted(J)} annotated twice")
                strata[J] = Stratum(J, int(s["dim"]), bool(s["contains_delta_component"]),
                                    _frac(s["max_mult"], base_symbol))
            delta = tuple((str(e["name"]), _frac(e["coeff"], base_symbol)) for e in d.get("delta", []))
            return cls(int(d["dimension"]), tuple(d["divisors"]), strata, delta)
        except (KeyError, TypeError) as exc:
            raise AnnotationError(f"malformed pair document: {exc}") from exc

    @classmethod
    def from_json(cls, text: str) -> "StratifiedPair":
        return cls.from_dict(json.loads(text))

    def to_dict(self) -> dict:
        strata = sorted(self.strata.values(), key=lambda s: (len(s.J), sorted(s.J)))
        return {
            "dimension": self.dimension,
            "divisors": list(self.divisors),
            "strata": [{"J": sorted(s.J), "dim": s.dim, "contains_delta_component": s.contains_delta_component,
                        "max_mult": str(s.max_mult)} for s in strata],
            "delta": [{"name": n, "coeff": str(c)} for n, c in self.delta],
        }

    def relabel(self, mapping: dict) -> "StratifiedPair":
        strata = {}
        for J, s in self.strata.items():
            nJ = frozenset(mapping[j] for j in J)
            strata[nJ] = replace(s, J=nJ)
        return StratifiedPair(self.dimension, tuple(mapping[d] for d in self.divisors), strata, self.delta)


def stratum_status(s: Stratum) -> str:
    if s.contains_delta_component or s.max_mult > 1:
        return VIOLATED
    return DLT if s.max_mult < 1 else LC


@dataclass
class CheckResult:
    verdict: str
    diagnostics: list = field(default_factory=list)
    note: str = ""


def check_condition(P: StratifiedPair, strict: bool | None = None) -> CheckResult:
    """Verdict from the stratum table.

    strict=None reports the best verdict; strict=True asks only for dlt,
    strict=False only for lc.  Violation means the sufficient condition
    fails: no conclusion about lc is drawn.
    """
    diags = []
    worst = DLT
    order = {DLT: 0, LC: 1, VIOLATED: 2}
    for s in sorted(P.strata.values(), key=lambda s: (len(s.J), sorted(s.J))):
        st = stratum_status(s)
        diags.append({"J": sorted(s.J), "dim": s.dim, "max_mult": str(s.max_mult),
                      "contains_delta_component": s.contains_delta_component, "status": st})
        if order[st] > order[worst]:
            worst = st
    if strict is True and worst != DLT:
        worst = VIOLATED
    elif strict is False and worst != VIOLATED:
        worst = LC
    note = {DLT: "", LC: "not dlt-strict",
            VIOLATED: "sufficient condition fails; no conclusion about lc"}[worst]
    return CheckResult(worst, diags, note)


# ---------------------------------------------------------------------------
# blow-ups

@dataclass(frozen=True)
class PointDatum:
    """A point x lying on exactly the divisors in J (general in D_J)."""

    J: frozenset
    mult_delta: Fraction | None = None    # None: use the stratum bound

    @property
    def mult_D(self) -> int:
        return len(self.J)


def _mult_delta(P: StratifiedPair, x: PointDatum) -> Fraction:
    s = P.strata.get(x.J)
    if s is None:
        raise AnnotationError(f"no stratum {sorted(x.J)} in the pair")
    if x.mult_delta is None:
        return s.max_mult
    if x.mult_delta > s.max_mult:
        raise AnnotationError("point multiplicity exceeds the stratum bound")
    return Fraction(x.mult_delta)


def discrepancy_first_blowup(P: StratifiedPair, x: PointDatum) -> Fraction:
    """a(D0, X, D + Delta) = (n - 1) - mult_x(D) - mult_x(Delta) for the blow-up of x."""
    if not 0 <= x.mult_D <= P.dimension:
        raise ValueError("mult_x(D) out of range")
    return Fraction(P.dimension - 1) - x.mult_D - _mult_delta(P, x)


@dataclass
class BlowupStep:
    center: PointDatum
    mult_D: int
    mult_delta: Fraction
    exceptional: str
    discrepancy: Fraction


def blowup_step(P: StratifiedPair, x: PointDatum, name: str | None = None) -> tuple[StratifiedPair, BlowupStep]:
    """Blow up x; D0 joins the boundary with coefficient 1.

    Conservative update: every new stratum D0 cap D'_J (J subset of the
    divisors through x) inherits the bound of D_J, and D0 itself the bound
    mult_x(Delta).  Old strata keep their bounds.
    """
    s = P.strata.get(x.J)
    if s is None:
        raise AnnotationError(f"no stratum {sorted(x.J)} in the pair")
    if stratum_status(s) == VIOLATED or stratum_status(P.strata[frozenset()]) == VIOLATED:
        raise ValueError("condition (1) fails at the center")
    n = P.dimension
    md = _mult_delta(P, x)
    a = discrepancy_first_blowup(P, x)
    k = 0
    while name is None or name in P.divisors:
        name = f"E{k}"
        k += 1
    strata = dict(P.strata)
    for r in range(len(x.J) + 1):
        for sub in combinations(sorted(x.J), r):
            J = frozenset(sub)
            d = n - 1 - len(J)
            if d < 0:
                continue
            old = P.strata[J]
            bound = min(old.max_mult, md) if J else md
            if d == 0 and not old.contains_delta_component:
                bound = Fraction(0)
            strata[J | {name}] = Stratum(J | {name}, d, old.contains_delta_component if J else False, bound)
    Q = StratifiedPair(n, P.divisors + (name,), strata, P.delta)
    before = check_condition(P).verdict
    after = check_condition(Q).verdict
    if before != VIOLATED and after == VIOLATED:
        raise AssertionError("blow-up broke condition (1); update rule is unsound")
    return Q, BlowupStep(x, x.mult_D, md, name, a)


def centers(P: StratifiedPair) -> list[PointDatum]:
    """One worst-case point per stratum of positive dimension, plus point strata."""
    return [PointDatum(J) for J in sorted(P.strata, key=lambda J: (len(J), sorted(J)))]


def _signature(P: StratifiedPair):
    return tuple(sorted((len(s.J), s.dim, s.contains_delta_component, s.max_mult) for s in P.strata.values()))


@dataclass
class ChainReport:
    depth: int
    nodes: int
    min_discrepancy: Fraction
    ok: bool
    strict: bool
    worst_chain: list = field(default_factory=list)


def explore_blowups(P: StratifiedPair, depth: int = 4, strict: bool = False) -> ChainReport:
    """All blow-up chains of length <= depth through worst points of each stratum.

    Non-strict: every discrepancy must be >= -1.  Strict: > -1, except at
    centers where mult(Delta) = 0 and D is SNC (log canonical centers of D).
    """
    seen: set = set()
    best = [Fraction(10 ** 9), []]
    ok = [True]
    nodes = [0]

    def rec(Q, d, chain):
        key = (_signature(Q), d)
        if key in seen:
            return
        seen.add(key)
        if d == 0:
            return
        for x in centers(Q):
            nodes[0] += 1
            Q2, step = blowup_step(Q, x)
            a = step.discrepancy
            snc_point = step.mult_delta == 0
            bad = a < -1 or (strict and a == -1 and not snc_point)
            if bad:
                ok[0] = False
            if a < best[0]:
                best[0], best[1] = a, chain + [(sorted(x.J), str(a))]
            rec(Q2, d - 1, chain + [(sorted(x.J), str(a))])

    if check_condition(P, strict=strict).verdict == VIOLATED:
        raise ValueError("chains are only explored from pairs satisfying the condition")
    rec(P, depth, [])
    return ChainReport(depth, nodes[0], best[0], ok[0], strict, best[1])


# ---------------------------------------------------------------------------
# families

@dataclass
class FamilyPair:
    fiber_divisor: str
    fibers: dict                  # fiber type -> StratifiedPair (with the fiber divisor in D)
    base_symbol: str = "t"

    @classmethod
    def from_dict(cls, d: dict) -> "FamilyPair":
        base = d.get("base_symbol", "t")
        fibers = {k: StratifiedPair.from_dict(v, base) for k, v in d["fibers"].items()}
        return cls(d["fiber_divisor"], fibers, base)


def family_check(FP: FamilyPair) -> dict:
    if "generic" not in FP.fibers:
        raise AnnotationError("family has no generic fiber row")
    out = {}
    for kind, P in FP.fibers.items():
        if FP.fiber_divisor not in P.divisors:
            raise AnnotationError(f"fiber divisor missing from the {kind} row")
        out[kind] = check_condition(P).verdict
    return out


def _subsets(items: Iterable[str]):
    items = sorted(items)
    for r in range(len(items) + 1):
        yield from combinations(items, r)


def paper_config(cfg, cone=None, k_inf: int | None = None) -> tuple[FamilyPair, dict]:
    """Annotated pair (Y, Delta_Y + Z0 + Z'_inf + D_Y + Y_t) on the 4-dimensional total space.

    Facts encoded: distinct members of the basepoint-free pencil |pD| are
    disjoint and miss D; members of |Z_inf| miss Z0 and are in general
    position, so at most dim(D_J) of them pass through a point of D_J.
    Z'_inf is (2/k) times a sum of k general members, with k the least
    value keeping every bound below 1.
    """
    c_g = cfg.delta_coefficient
    if c_g >= 1:
        raise AnnotationError("boundary coefficient must be < 1")
    n = 4
    boundary = ["Z0", "Yt"] + (["DY"] if cfg.theta == "D" else [])
    n_g = cfg.n_members + (int(cfg.mbar) if cfg.theta == "pencil" else 0)
    if k_inf is None:
        k_inf = 3
        while c_g + Fraction(2, k_inf) * min(n, k_inf) >= 1:
            k_inf += 1
    c_h = Fraction(2, k_inf)
    if c_h >= 1:
        raise AnnotationError("Z'_inf coefficient must be < 1")
    delta = [(f"G{i}", c_g) for i in range(n_g)] + [(f"H{j}", c_h) for j in range(k_inf)]
    strata = {}
    delta_only = Fraction(0)
    for sub in _subsets(boundary):
        J = frozenset(sub)
        d = n - len(J)
        g = c_g if "DY" not in J else Fraction(0)            # at most one pencil member, none on D_Y
        h = c_h * min(d, k_inf) if "Z0" not in J else Fraction(0)
        if d == 0:
            g = h = Fraction(0)
        strata[J] = Stratum(J, d, False, g + h)
        delta_only = max(delta_only, g)
    fibers = {kind: StratifiedPair(n, tuple(boundary), dict(strata), tuple(delta)) for kind in ("generic", "special")}
    info = {"p": cfg.p, "mbar": str(cfg.mbar), "delta_coefficient": str(c_g), "k_inf": k_inf,
            "z_inf_coefficient": str(c_h), "max_delta_annotation": str(delta_only),
            "max_total_annotation": str(max(s.max_mult for s in strata.values()))}
    return FamilyPair("Yt", fibers), info


def worked_examples() -> dict[str, StratifiedPair]:
    """Plane with one boundary line L and Delta = c * (transversal line), c = 1/2, 1, 3/2."""
    out = {}
    for name, c in (("half", Fraction(1, 2)), ("one", Fraction(1)), ("three_halves", Fraction(3, 2))):
        strata = {frozenset(): Stratum(frozenset(), 2, False, c),
                  frozenset(["L"]): Stratum(frozenset(["L"]), 1, False, c)}
        out[name] = StratifiedPair(2, ("L",), strata, (("M", c),))
    return out
