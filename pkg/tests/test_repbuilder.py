"""Explicit global matrices versus the closed-form decompositions."""

import random

import pytest

from a4diff.gf import FieldSpec
from a4diff.ratlaurent import RatFunc
from a4diff.artin_schreier import symmetrize_h
from a4diff.ramification import analyze_branch_data
from a4diff.decomp import KGLabel, kG_decomposition, kH_decomposition
from a4diff.modulezoo import restrict_to_h, validate_group_rep
from a4diff.oracle import decompose_rep
from a4diff.repbuilder import BasisLabel, build_global_rep
from a4diff._families import (
    hkg_alpha,
    degenerate_orbit_alpha,
    generic_orbit_alpha,
)

from helpers import analyzed_random_datum

F = FieldSpec(m=8)
Z = F.zeta()
ONE = F.one()


def analyze(alpha):
    return analyze_branch_data(symmetrize_h(alpha))


def built(alpha):
    data = analyze(alpha)
    return data, build_global_rep(data)


def assert_matches_closed_forms(data, gr):
    assert gr.dim == data.genus
    solG = decompose_rep(gr.rep)
    assert solG.residual == "zero"
    assert dict(solG.multiplicities) == kG_decomposition(data).entries
    solH = decompose_rep(restrict_to_h(gr.rep))
    assert solH.residual == "zero"
    assert dict(solH.multiplicities) == kH_decomposition(data).entries


# ---------------------------------------------------------------- basics

def test_quintic_monomial_block_data():
    data, gr = built(RatFunc.monomial(F, 5))
    assert gr.dim == data.genus == 6
    keys = [(lab.place.key(), lab.family, lab.index) for lab in gr.labels]
    assert keys == [("inf", 1, 0), ("inf", 1, 1), ("inf", 1, 2),
                    ("inf", 2, 0), ("inf", 3, 0), ("inf", 3, 1)]
    sol = decompose_rep(gr.rep)
    assert dict(sol.multiplicities) == {
        KGLabel.even(2, 0, 2): 1,
        KGLabel.odd(3, 1, 1): 1,
        KGLabel.simple(0): 1,
    }


def test_quintic_monomial_generator_entries():
    _, gr = built(RatFunc.monomial(F, 5))
    pos = {(lab.family, lab.index): t for t, lab in enumerate(gr.labels)}
    sig, tau = gr.rep.sigma, gr.rep.tau
    # family 3 drops to family 1 under sigma, family 2 under tau
    assert sig.element(pos[(1, 0)], pos[(3, 0)]) == ONE
    assert tau.element(pos[(1, 0)], pos[(2, 0)]) == ONE
    # the corrected tail spreads theta under tau; here theta0 = lambda
    assert tau.element(pos[(1, 1)], pos[(3, 1)]) == Z
    assert sig.element(pos[(1, 1)], pos[(3, 1)]) == ONE
    # rho is a zeta-power diagonal on family 1 (epsilon = -1 at infinity)
    for i in range(3):
        assert gr.rep.rho.element(pos[(1, i)], pos[(1, i)]) == Z ** ((1 + i) % 3)


def test_labels_cover_each_point_once():
    data, gr = built(hkg_alpha(F, 2, 1))
    assert len(set(gr.labels)) == gr.dim
    per_place = {}
    for lab in gr.labels:
        per_place.setdefault(lab.place.key(), 0)
        per_place[lab.place.key()] += 1
    assert per_place["inf"] == gr.dim  # single branch point


def test_block_plan_records_theta_blocks():
    data, gr = built(hkg_alpha(F, 1, 1))
    entry = gr.block_plan[0]
    assert entry["kind"] == "special"
    assert entry["n"] == 12
    assert len(entry["Theta"]) == 12
    # Theta1 + Theta2 = I entrywise
    for p in range(12):
        for q in range(12):
            want = ONE.mask if p == q else 0
            assert entry["Theta1"][p][q] ^ entry["Theta2"][p][q] == want


def test_json_export_shape():
    _, gr = built(RatFunc.monomial(F, 5))
    obj = gr.to_json()
    assert obj["dim"] == 6
    assert len(obj["labels"]) == 6
    assert obj["labels"][0] == {"place": "inf", "family": 1, "index": 0}
    for key in ("sigma", "tau", "rho"):
        assert len(obj[key]) == 6
    assert obj["blocks"][0]["kind"] == "special"


# ------------------------------------------------------- closed families

@pytest.mark.parametrize("n,x", [(1, 1), (2, 1), (1, 2)])
def test_single_wild_point_family(n, x):
    data, gr = built(hkg_alpha(F, n, x))
    assert_matches_closed_forms(data, gr)


@pytest.mark.parametrize("n", [1, 2])
def test_degenerate_orbit_family(n):
    data, gr = built(degenerate_orbit_alpha(F, n))
    assert_matches_closed_forms(data, gr)
    sol = decompose_rep(gr.rep)
    assert sol.multiplicities[KGLabel.band(6 * n, ONE)] == 1


def test_generic_orbit_family():
    psi = F.element(9)
    data, gr = built(generic_orbit_alpha(F, 1, psi))
    assert_matches_closed_forms(data, gr)
    sol = decompose_rep(gr.rep)
    assert sol.multiplicities[KGLabel.band(6, psi ** 3)] == 1


# ------------------------------------------------------- random data

def test_random_data_match_and_validate():
    rnd = random.Random(1311)
    for trial in range(8):
        _, data = analyzed_random_datum(rnd, F)
        gr = build_global_rep(data)
        validate_group_rep(gr.rep)
        assert_matches_closed_forms(data, gr)


def test_fixed_point_free_data_use_index_one_sextet():
    rnd = random.Random(2218)
    seen = 0
    for trial in range(6):
        _, data = analyzed_random_datum(rnd, F, allow_inf=False,
                                        allow_zero=False)
        assert not data.special
        gr = build_global_rep(data)
        sextet = [e for e in gr.block_plan if e.get("index_one_sextet")]
        assert len(sextet) == 1
        index_one = [lab for lab in gr.labels if lab.index == 1
                     and lab.place.key() in sextet[0]["members"]]
        assert len(index_one) == 6
        assert_matches_closed_forms(data, gr)
        seen += 1
    assert seen == 6


def test_degenerate_biased_random_data():
    rnd = random.Random(77)
    for trial in range(4):
        _, data = analyzed_random_datum(rnd, F, degenerate_bias=0.6)
        gr = build_global_rep(data)
        assert_matches_closed_forms(data, gr)


# ------------------------------------------------------- label behavior

def test_basis_label_equality_and_repr():
    a = BasisLabel(analyze(RatFunc.monomial(F, 5)).special[0].place, 1, 2)
    b = BasisLabel(a.place, 1, 2)
    assert a == b and hash(a) == hash(b)
    assert repr(a) == "f[inf,1,2]"
    assert a != BasisLabel(a.place, 2, 2)
