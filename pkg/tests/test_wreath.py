import itertools
import random

import numpy as np
import pytest

from profsurf.embedding import brute_solve, split_problem
from profsurf.fingroup import (GroupAction, GroupError, GroupHom, SemidirectProduct, cyclic,
                               direct_product, is_isomorphic, small_groups, symmetric)
from profsurf.instances import c3xc3_induced, order8_induced
from profsurf.surface import first_surjection
from profsurf.wreath import (IndElement, TwistedWreath, bfs_transversal, check_canonical_isomorphism,
                             induce_problem, last_transversal, restrict_solution)

from conftest import wreath_instances


def _wreath(A, G, G0, action=None):
    H = G0.as_group()
    return TwistedWreath(A, G, G0, action or GroupAction.trivial(H, A))


def test_order_examples():
    C2, C3 = cyclic(2), cyclic(3)
    W = _wreath(C2, C2, C2.trivial_subgroup())
    assert W.order == W.group.order == 8
    W = _wreath(C2, C3, C3.trivial_subgroup())
    assert W.group.order == 24 and W.kernel.order == 8


def test_full_subgroup_gives_semidirect_product():
    S3, C3 = symmetric(3), cyclic(3)
    for act in GroupAction.all_actions(S3, C3):
        G0 = S3.whole()
        H = G0.as_group()
        act0 = act.pullback(GroupHom(H, S3, list(H.generators)))
        W = TwistedWreath(C3, S3, G0, act0)
        assert W.m == 1
        assert is_isomorphic(W.group, SemidirectProduct(C3, S3, act).group)


def test_act_examples():
    C2, C3 = cyclic(2), cyclic(3)
    W = _wreath(C2, C3, C3.trivial_subgroup())
    a = C2.gen_indices[0]
    e = C2.e
    f = IndElement(W, (a, e, e))  # value a at the identity representative
    assert W.reps[0] == C3.e
    assert f.act(C3.e) == f
    const = IndElement(W, (e, e, e))
    assert all(const.act(s) == const for s in range(3))
    s = C3.gen_indices[0]
    g = f.act(s)
    # f^s(r) = f(s r): the value a moves to the representative s^-1
    assert sorted(g.values) == sorted(f.values)
    assert g.values[W.reps.index(C3.inv(s))] == a


def test_action_is_right_action():
    G = symmetric(3)
    A = cyclic(3)
    G0 = G.subgroup(indices=[next(i for i in range(6) if G.element_order(i) == 2)])
    for act in GroupAction.all_actions(G0.as_group(), A):
        W = TwistedWreath(A, G, G0, act)
        assert W.check_action()
        rng = random.Random(0)
        for _ in range(20):
            f = W.ind_of(rng.randrange(W.nind))
            s, t = rng.randrange(6), rng.randrange(6)
            assert f.act(s).act(t) == f.act(G.mul(s, t))


def test_equivariance_of_values():
    G = symmetric(3)
    A = cyclic(2)
    G0 = G.subgroup(indices=[next(i for i in range(6) if G.element_order(i) == 3)])
    W = _wreath(A, G, G0)
    for code in range(W.nind):
        f = W.ind_of(code)
        for sigma in range(6):
            for tau in G0.members:
                assert f.eval(G.mul(sigma, tau)) == W.act_index(f.eval(sigma), tau)


def test_shapiro_examples():
    C2 = cyclic(2)
    W = _wreath(C2, C2, C2.trivial_subgroup())
    dom = sorted(W.domain().members)
    assert len(dom) == 4
    pairs = list(itertools.product(dom, dom))
    assert W.check_shapiro_scalar(pairs) and W.check_shapiro()
    S3 = symmetric(3)
    G0 = S3.subgroup(indices=[next(i for i in range(6) if S3.element_order(i) == 2)])
    W = _wreath(cyclic(3), S3, G0)
    for sigma in G0.members:
        w = W.group.index(W.element([W.A.e] * W.m, sigma))
        assert W.sh_sd.group.elements[W.shapiro(w)].a == W.A.e
    a = W.A.gen_indices[0]
    vals = [W.A.e] * W.m
    vals[W.coset_of[S3.e]] = a
    w = W.group.index(W.element(vals, S3.e))
    x = W.sh_sd.group.elements[W.shapiro(w)]
    assert (x.a, x.b) == (a, W.h_of[S3.e])
    with pytest.raises(GroupError):
        W.shapiro(W.group.index(W.element([W.A.e] * W.m, next(s for s in range(6) if s not in G0.members))))


@pytest.mark.parametrize("seed", range(6))
def test_numeric_core_matches_generic_group(seed):
    rng = random.Random(seed)
    inst = [x for x in wreath_instances(max_a=3, max_g=6)]
    A, G, G0, act = rng.choice(inst)
    W = TwistedWreath(A, G, G0, act)
    assert W.closure_order() == W.group.order == W.expected_order()
    for _ in range(50):
        u, v = rng.randrange(W.group.order), rng.randrange(W.group.order)
        cu, cv = W.code_of(u), W.code_of(v)
        assert W.code_of(W.group.mul(u, v)) == int(W.mul_codes(np.int64(cu), np.int64(cv)))
    dom = sorted(W.domain().members)
    samples = [(rng.choice(dom), rng.choice(dom)) for _ in range(40)]
    assert W.check_shapiro_scalar(samples)
    codes = [W.code_of(d) for d in dom]
    assert list(W.shapiro_codes(codes)) == [W.shapiro(d) for d in dom]


def test_transversal_independence():
    S3, C3 = symmetric(3), cyclic(3)
    for G0 in S3.subgroups():
        for act in GroupAction.all_actions(G0.as_group(), C3):
            W1 = TwistedWreath(C3, S3, G0, act)
            W2 = TwistedWreath(C3, S3, G0, act, transversal=last_transversal(S3, G0))
            assert check_canonical_isomorphism(W1, W2)


def test_bad_transversal_rejected():
    S3 = symmetric(3)
    G0 = S3.trivial_subgroup()
    with pytest.raises(GroupError):
        _wreath(cyclic(2), S3, G0).__class__(cyclic(2), S3, G0,
                                             GroupAction.trivial(G0.as_group(), cyclic(2)),
                                             transversal=[0, 0, 1, 2, 3, 4])


def test_bfs_transversal_starts_at_identity():
    G = symmetric(3)
    for G0 in G.subgroups():
        reps = bfs_transversal(G, G0)
        assert reps[0] == G.e and len(reps) == G.order // G0.order


# -- induced problems --------------------------------------------------------


def test_order8_pipeline():
    ip = order8_induced()
    assert ip.problem.group.order == 8 and ip.table.index == 2
    sols = brute_solve(ip.problem, "all")
    assert len(sols) == 96
    for s in sols:
        r = restrict_solution(ip, s)
        closure = ip.target.group.closure(r.images)
        assert r.proper == (len(closure) == ip.target.group.order)
        assert r.proper and r.lifts_mu1 and r.relators_hold


def test_index_one_induction_is_original_problem():
    S3, C3 = symmetric(3), cyclic(3)
    mu = first_surjection(2, S3)
    act = GroupAction.all_actions(S3, C3)[-1]
    assert not act.is_trivial()
    G0 = S3.whole()
    H = G0.as_group()
    nu = GroupHom(H, S3, list(H.generators))
    ip = induce_problem(mu, G0, C3, act, nu=nu)
    assert ip.table.index == 1
    direct = split_problem(mu, C3, act)
    assert brute_solve(ip.problem, "count") == brute_solve(direct, "count")
    sol = brute_solve(ip.problem)
    r = restrict_solution(ip, sol)
    assert r.proper and r.lifts_mu1


def test_trivial_module_induction():
    C1, C2 = cyclic(1), cyclic(2)
    mu = first_surjection(2, C2)
    G0 = C2.trivial_subgroup()
    H = G0.as_group()
    ip = induce_problem(mu, G0, C1, GroupAction.trivial(C1, C1), nu=GroupHom(H, C1, [C1.identity]))
    assert ip.problem.kernel.order == 1
    sol = brute_solve(ip.problem)
    assert sol is not None and restrict_solution(ip, sol).proper


def test_c3xc3_induced_counts():
    ip = c3xc3_induced()
    assert ip.problem.group.order == 72
    assert ip.schreier.ngens == 10
    assert brute_solve(ip.problem, "count") == 900


def test_nu_must_be_well_defined():
    C2, C3 = cyclic(2), cyclic(3)
    x, e = C2.generators[0], C2.identity
    from profsurf.surface import SurfaceAssignment
    mu = SurfaceAssignment(C2, [x, e, e, e])
    # N = Pi with Schreier generators x1, y1, x2, y2; y1 lies in ker mu but is
    # asked to map to a nontrivial element, so no nu: C2 -> C3 exists
    c = C3.gen_indices[0]
    with pytest.raises(GroupError):
        induce_problem(mu, C2.whole(), C2, GroupAction.trivial(C3, C2), mu1=[C3.e, c, C3.e, C3.e])
    ip = induce_problem(mu, C2.whole(), C2, GroupAction.trivial(C3, C2), mu1=[C3.e] * 4)
    assert set(ip.nu.map) == {C3.e}
