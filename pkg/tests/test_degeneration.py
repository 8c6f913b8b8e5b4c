import csv
import io
import json
from fractions import Fraction

import pytest

from charp.degeneration import (ConeModel, FamilyConfig, non_cm_certificate, parametric_cohomology,
                                plurigenera_table, smith_normal_form, surface_plurigenus,
                                threefold_plurigenus)
from charp.gf import FqPolynomial, field_create

from conftest import cover_for


def cfg_for(p, mbar=1, **kw):
    return FamilyConfig(cover_for(p).curve, Fraction(mbar), **kw)


def test_config_validation():
    with pytest.raises(ValueError):
        cfg_for(2, Fraction(1, 2))          # coefficient 1
    with pytest.raises(ValueError):
        cfg_for(3, 0)
    with pytest.raises(ValueError):
        cfg_for(3, 1, a=0)
    with pytest.raises(ValueError):
        cfg_for(5, Fraction(1, 3))          # mbar p not integral
    c = cfg_for(5, 2)
    assert c.delta_coefficient == Fraction(1, 10) and c.n_members == 4 and c.step == 10
    assert c.delta_class() == 2


def test_valid_m_and_check():
    c = cfg_for(3, 2)
    assert c.valid_m(20) == [6, 12, 18]
    assert c.valid_m(5) == []
    with pytest.raises(ValueError):
        c.check_m(3)
    c.check_m(12)


def test_smith_normal_form_small():
    F = field_create(3)
    P = lambda *c: FqPolynomial(F, c)
    # diag(t, t^2) after mixing
    M = [[P(0, 1), P(0, 1)], [P(0), P(0, 0, 1)]]
    inv = smith_normal_form(F, M)
    assert [d.coeffs for d in inv] == [P(0, 1).coeffs, P(0, 0, 1).coeffs]
    inv = smith_normal_form(F, [[P(2), P(1, 1)]])
    assert [d.coeffs for d in inv] == [P(1).coeffs]
    # divisibility needs the row-add step: diag(t, t+1) -> (1, t(t+1))
    inv = smith_normal_form(F, [[P(0, 1), P(0)], [P(0), P(1, 1)]])
    assert [d.degree for d in inv] == [0, 2]


def test_parametric_ranks(p):
    cfg = cfg_for(p)
    for m in range(0, p + 2):
        r = parametric_cohomology(cfg, m)
        assert r.generic_rank == surface_plurigenus_any(cfg, m, "generic")
        assert r.special_rank == m + 1
        assert r.generic_rank <= r.special_rank
        if m >= 1:
            assert r.generic_rank < r.special_rank
    assert parametric_cohomology(cfg, p).generic_rank == 2


def surface_plurigenus_any(cfg, m, t):
    from charp.ruled import section_count
    return section_count(cfg.surface(t), m)


def test_surface_and_threefold_plurigenera(p):
    cfg = cfg_for(p)
    cone = ConeModel(cfg)
    m = p
    s0, s1 = surface_plurigenus(cfg, m, "zero"), surface_plurigenus(cfg, m, "generic")
    assert (s0, s1) == (p + 1, 2)
    y0, y1 = threefold_plurigenus(cone, cfg, m, "zero"), threefold_plurigenus(cone, cfg, m, "generic")
    assert y0 - y1 == s0 - s1 >= p - 1


def test_graded_piece_closed_form_matches_engine(p):
    cone = ConeModel(cfg_for(p, a=2))
    for t in ("zero", "generic"):
        for r in (1, 2):
            assert cone.graded_piece(t, p, r, "engine") == cone.graded_piece(t, p, r, "closed")


def test_threefold_small_char2():
    cfg = cfg_for(2)
    assert threefold_plurigenus(ConeModel(cfg), cfg, 2, "zero") == 17


def test_table_and_serialization(p):
    cfg = cfg_for(p)
    tab = plurigenera_table(cfg, 2 * p)
    assert [r.m for r in tab.rows] == [p, 2 * p]
    for r in tab.rows:
        assert r.jump >= p - 1 and r.threefold_jump == r.jump
    doc = json.loads(tab.to_json())
    assert doc["p"] == p and len(doc["rows"]) == 2
    text = tab.to_csv()
    assert "\r\n" in text
    rows = list(csv.reader(io.StringIO(text)))
    assert rows[0][0] == "m" and int(rows[1][0]) == p
    with pytest.raises(ValueError):
        plurigenera_table(cfg, p - 1)


def test_non_cm_certificate(p):
    cert = non_cm_certificate(cfg_for(p))
    assert cert["fibers"]["t!=0"]["h1"] == 2 and cert["fibers"]["t!=0"]["verdict"] == "not CM"
    assert cert["fibers"]["t=0"]["h1"] == 1 and cert["fibers"]["t=0"]["verdict"] == "CM"
