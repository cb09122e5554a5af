import math
import random

import numpy as np
import pytest

from profsurf.diamond import (Ambient, DiamondInstance, Preimage, WitnessDefect,
                              check_index_conditions, check_modL_conditions, commutator_module,
                              constrained_epi_search, fj_scan, fj_witness, fj_witness_reduced,
                              induced_genus_requirement, lemma33_s, minimal_r, obstruction_scan,
                              quotient_assignment, r_inequality_holds)
from profsurf.fingroup import GroupAction, GroupError, cyclic, direct_product, product_set, symmetric
from profsurf.instances import DIAMONDS, c3xc3_ambient, c3xc3_characters
from profsurf.surface import SurfaceAssignment, first_surjection
from profsurf.wreath import TwistedWreath

from conftest import wreath_instances


def _c3xc3():
    C3 = cyclic(3)
    G = direct_product(C3, C3)
    x, e = C3.generators[0], C3.identity
    from profsurf.fingroup import ProductElement
    G1 = G.subgroup([ProductElement((x, e))])
    G2 = G.subgroup([ProductElement((e, x))])
    return G, G1, G2


def test_modL_examples():
    G, G1, G2 = _c3xc3()
    d = DiamondInstance(G, G.trivial_subgroup(), G1, G2)
    assert check_modL_conditions(d) == {"eq4": True, "eq5": True, "eq6": True, "all": True}
    C2 = cyclic(2)
    d = DiamondInstance(C2, C2.trivial_subgroup(), C2.whole(), C2.whole())
    r = check_modL_conditions(d)
    assert not r["eq5"] and not r["all"]
    S3 = symmetric(3)
    G0 = S3.subgroup(indices=[i for i in range(6) if S3.element_order(i) == 3])
    r = check_modL_conditions(DiamondInstance(S3, G0, S3.whole(), S3.whole()))
    assert r["eq4"] and not r["eq6"]


def test_instance_requires_normal_subgroups():
    S3 = symmetric(3)
    H = S3.subgroup(indices=[next(i for i in range(6) if S3.element_order(i) == 2)])
    with pytest.raises(GroupError):
        DiamondInstance(S3, H, H, S3.whole())


def test_index_conditions():
    amb = c3xc3_ambient()
    rep = check_index_conditions(amb)
    assert rep["all"] and rep["conditions"]["i"]
    assert rep["indices"] == {"N1NL:NL": 3, "N2NL:NL": 3, "Pi:NL": 3}
    assert check_modL_conditions(rep["mod_L"])["all"]
    # N1 = N2 = Pi gives [N1NL:NL] = [Pi:NL], which is 1 only when NL = Pi
    whole = Preimage.whole(amb.mu)
    rep = check_index_conditions(Ambient(amb.mu, whole, whole, whole))
    assert rep["indices"]["N1NL:NL"] == 1 and not rep["conditions"]["ii"]
    rep = check_index_conditions(Ambient(amb.mu, amb.N, whole, whole))
    assert rep["indices"]["N1NL:NL"] == rep["indices"]["Pi:NL"] == 3
    # L = Pi
    C1 = cyclic(1)
    triv = SurfaceAssignment(C1, [C1.identity] * 4)
    _, chi1, chi2, _ = c3xc3_characters()
    amb = Ambient(triv, Preimage.whole(triv), Preimage.kernel(chi1), Preimage.kernel(chi2))
    assert not check_index_conditions(amb)["conditions"]["iv"]


def test_fj_witness_shift_example():
    C2, C3 = cyclic(2), cyclic(3)
    G0 = C3.trivial_subgroup()
    W = TwistedWreath(C2, C3, G0, GroupAction.trivial(G0.as_group(), C2))
    group = W.group
    H1 = group.whole()
    for h2 in range(group.order):
        if W.alpha.map[h2] == C3.e:
            continue
        h1 = fj_witness(W, H1, h2)
        assert h1 in W.kernel.members and group.comm(h1, h2) != group.e
        vals = W.ind_of(group.elements[h1].a).values
        assert sum(v != C2.e for v in vals) == 1


def test_fj_witness_guards():
    C2, C3 = cyclic(2), cyclic(3)
    G0 = C3.trivial_subgroup()
    W = TwistedWreath(C2, C3, G0, GroupAction.trivial(G0.as_group(), C2))
    inside = next(iter(W.kernel.members))
    with pytest.raises(GroupError):
        fj_witness(W, W.group.whole(), inside)
    # abelian wreath product: G0 = G leaves no h2 outside G0
    Wab = TwistedWreath(C2, C3, C3.whole(), GroupAction.trivial(C3.whole().as_group(), C2))
    assert Wab.group.is_abelian
    rep = fj_scan(Wab)
    assert rep["pairs"] == 0 and not rep["defects"]


def _instances(limit_order):
    rng = random.Random(11)
    out = [x for x in wreath_instances() if x[0].order > 1 and x[0].order ** (x[1].order // x[2].order) * x[1].order <= limit_order]
    rng.shuffle(out)
    return out


def test_reduction_contained_in_every_normal_subgroup():
    """M(G1) lies in every normal H1 over G1, so the reduced search covers every H1."""
    checked = 0
    for A, G, G0, act in _instances(200)[:25]:
        W = TwistedWreath(A, G, G0, act)
        group = W.group
        for H1 in group.normal_subgroups():
            G1 = W.alpha.image_of(H1)
            mod = set(commutator_module(W, G1).tolist())
            codes = {W.code_of(h) // G.order for h in H1.members if h in W.kernel.members}
            assert mod <= codes
            checked += 1
    assert checked > 0


def test_reduced_and_explicit_scans_agree():
    for A, G, G0, act in _instances(400)[:30]:
        W = TwistedWreath(A, G, G0, act)
        explicit = fj_scan(W, explicit_cap=10 ** 4)
        reduced = fj_scan(W, explicit_cap=0)
        assert explicit["mode"] in ("explicit", "vacuous")
        assert reduced["mode"] in ("reduced", "vacuous")
        assert not explicit["defects"] and not reduced["defects"]
        assert (explicit["pairs"] == 0) == (reduced["pairs"] == 0)


def test_reduced_witness_commutes_nontrivially():
    C2, S3 = cyclic(2), symmetric(3)
    G0 = S3.trivial_subgroup()
    W = TwistedWreath(C2, S3, G0, GroupAction.trivial(G0.as_group(), C2))
    mod = commutator_module(W, S3.whole())
    for s in range(1, 6):
        f = fj_witness_reduced(W, mod, s)
        h1 = W.index_of(f * 6 + S3.e)
        h2 = W.index_of(W.ind_e * 6 + s)
        assert W.group.comm(h1, h2) != W.group.e
    with pytest.raises(WitnessDefect):
        fj_witness_reduced(W, np.array([W.ind_e]), 1)


def test_obstruction_scan_examples():
    amb, d = DIAMONDS["c3xc3"]()
    scan = obstruction_scan(d)
    assert scan["obstructed"] and not scan["vacuous"]
    assert scan["pairs"] == len(scan["witnesses"]) == 4
    with pytest.raises(GroupError):
        obstruction_scan(DiamondInstance(d.G, d.G0, d.G1, d.G2))


def test_trivial_abar_rejected():
    amb, d = DIAMONDS["c3xc3"]()
    C1 = cyclic(1)
    triv = DiamondInstance(d.G, d.G0, d.G1, d.G2, Abar=C1, action=GroupAction.trivial(d.G0.as_group(), C1))
    with pytest.raises(GroupError):
        obstruction_scan(triv)
    # with W = G the constrained search returns exactly the lift of mu itself
    W = triv.wreath()
    found = constrained_epi_search(W, amb.mu, quotient_assignment(amb))
    assert len(found.solutions) == 1
    assert [W.alpha.map[x] for x in found.solutions[0].idx] == list(amb.mu.idx)


def test_constrained_search_companions():
    amb, d = DIAMONDS["c3xc3"]()
    found = constrained_epi_search(d.wreath(), amb.mu, quotient_assignment(amb))
    assert found.pruned_by_order and not found.solutions
    amb, d = DIAMONDS["c3-q48"]()
    q = quotient_assignment(amb)
    assert q.target.order == 48
    found = constrained_epi_search(d.wreath(), amb.mu, q)
    assert not found.pruned_by_order and found.candidates == 4096 and not found.solutions
    amb, d = DIAMONDS["eq4-fails"]()
    assert not check_modL_conditions(d)["eq4"]
    found = constrained_epi_search(d.wreath(), amb.mu, quotient_assignment(amb))
    assert len(found.solutions) == 4


def test_minimal_r():
    assert minimal_r(1) == 2 and minimal_r(2) == 4 and minimal_r(3) == 5
    ys = list(np.linspace(2, 100, 2000)) + [math.exp(1 - math.log(2) / 3)]
    for a in (1, 2, 3, 5):
        r = minimal_r(a)
        assert r_inequality_holds(r, a, ys)
        assert not r_inequality_holds(r - 1, a, ys)


def test_numeric_helpers():
    assert lemma33_s(2, 3, 4) == 2 * 6 * 4
    assert induced_genus_requirement(2, 2) == 2 * 2 ** 6 * 8
