import pytest
from hypothesis import given, settings, strategies as st
from sympy.combinatorics import Permutation, PermutationGroup

from profsurf.fingroup import (CapExceeded, FiniteGroup, GroupAction, GroupError, GroupHom, Perm,
                               SemidirectProduct, Subgroup, alternating, character_degrees, close,
                               commutator_subgroup_pair, cyclic, dihedral, direct_product,
                               enumerate_homs, is_isomorphic, normal_core, product_set, quaternion,
                               quotient, small_groups, symmetric, SDElement)


S3 = symmetric(3)


def order3(G):
    return G.subgroup(indices=[i for i in range(G.order) if G.element_order(i) == 3])


def order2(G):
    return G.subgroup(indices=[next(i for i in range(G.order) if G.element_order(i) == 2)])


# -- perms and closure -------------------------------------------------------


def test_perm_parse_roundtrip():
    p = Perm.parse("(1 2 3)(4 5)")
    assert str(p) == "(1 2 3)(4 5)"
    assert p.degree == 5
    assert str(Perm.parse("()")) == "()"
    with pytest.raises(ValueError):
        Perm.parse("(1 2")


def test_close_examples():
    assert close([Perm.parse("(1 2)")]).order == 2
    assert close([Perm.parse("(1 2)"), Perm.parse("(1 2 3)")]).order == 6
    assert close([Perm.identity(3)]).order == 1


def test_closure_cap():
    with pytest.raises(CapExceeded):
        FiniteGroup([Perm.parse("(1 2)"), Perm.parse("(1 2 3 4 5 6)")], cap=100)


perm_lists = st.lists(st.permutations(range(5)), min_size=1, max_size=3)


@settings(max_examples=40, deadline=None)
@given(perm_lists)
def test_closure_order_matches_sympy(gens):
    ours = FiniteGroup([Perm(list(g)) for g in gens])
    theirs = PermutationGroup([Permutation(list(g)) for g in gens])
    assert ours.order == theirs.order()


@settings(max_examples=30, deadline=None)
@given(perm_lists, st.data())
def test_table_is_a_group_law(gens, data):
    G = FiniteGroup([Perm(list(g)) for g in gens])
    n = G.order
    a, b, c = (data.draw(st.integers(0, n - 1)) for _ in range(3))
    assert G.mul(G.mul(a, b), c) == G.mul(a, G.mul(b, c))
    assert G.mul(a, G.inv(a)) == G.e
    assert G.mul(G.e, a) == a


def test_named_groups():
    assert [cyclic(n).order for n in (1, 2, 5)] == [1, 2, 5]
    assert symmetric(4).order == 24 and alternating(4).order == 12
    assert dihedral(4).order == 8 and quaternion().order == 8
    assert not is_isomorphic(dihedral(4), quaternion())
    assert is_isomorphic(dihedral(3), S3)


def test_small_group_catalogue_is_distinct():
    groups = small_groups(12)
    assert len(groups) == 24
    for i, G in enumerate(groups):
        for H in groups[:i]:
            assert not is_isomorphic(G, H), (G.name, H.name)


# -- semidirect products -----------------------------------------------------


def test_semidirect_trivial_action_is_abelian():
    C3, C2 = cyclic(3), cyclic(2)
    sd = SemidirectProduct(C3, C2, GroupAction.trivial(C2, C3))
    assert sd.group.order == 6 and sd.group.is_abelian


def test_semidirect_inversion_is_s3():
    C3, C2 = cyclic(3), cyclic(2)
    sd = SemidirectProduct(C3, C2, GroupAction.inversion(C2, C3))
    assert sd.group.order == 6 and not sd.group.is_abelian
    assert is_isomorphic(sd.group, S3)
    assert sd.kernel.order == 3
    assert all(sd.alpha.map[sd.beta.map[b]] == b for b in range(2))


def test_semidirect_trivial_kernel():
    C1, B = cyclic(1), S3
    sd = SemidirectProduct(C1, B, GroupAction.trivial(B, C1))
    assert sd.alpha.is_injective() and sd.alpha.is_surjective()


def test_semidirect_multiplication_convention():
    # (a1, b1)(a2, b2) = (a1^b2 a2, b1 b2)
    C3, C2 = cyclic(3), cyclic(2)
    sd = SemidirectProduct(C3, C2, GroupAction.inversion(C2, C3))
    a = C3.gen_indices[0]
    t, one = C2.gen_indices[0], C2.e
    prod = SDElement(a, one, sd) * SDElement(a, t, sd)
    # a^t = a^-1, so the kernel part cancels
    assert (prod.a, prod.b) == (C3.e, t)
    prod = SDElement(a, t, sd) * SDElement(a, one, sd)
    assert (prod.a, prod.b) == (C3.mul(a, a), t)


def test_all_actions_counts():
    # Hom(C2, Aut(C3)) has 2 elements, Hom(C3, Aut(C2 x C2) = S3) has 3
    assert len(GroupAction.all_actions(cyclic(2), cyclic(3))) == 2
    V = direct_product(cyclic(2), cyclic(2))
    assert len(GroupAction.all_actions(cyclic(3), V)) == 3


def test_bad_action_rejected():
    C3, C2 = cyclic(3), cyclic(2)
    with pytest.raises(GroupError):
        GroupAction.power(C3, C3, 2)  # squaring is not of order dividing 3


# -- lattice -----------------------------------------------------------------


def test_normal_core():
    H = order2(S3)
    assert normal_core(H).order == 1
    assert normal_core(order3(S3)).members == order3(S3).members
    assert normal_core(S3.whole()).order == 6


def test_product_set():
    N, H = order3(S3), order2(S3)
    assert product_set(N, N) == N.members
    assert len(product_set(N, H)) == 6
    assert product_set(H, S3.trivial_subgroup()) == H.members


def test_commutator_subgroup_pair():
    assert commutator_subgroup_pair(S3.whole(), S3.whole()).members == order3(S3).members
    V = direct_product(cyclic(2), cyclic(2))
    assert commutator_subgroup_pair(V.whole(), V.whole()).order == 1
    assert commutator_subgroup_pair(S3.whole(), S3.trivial_subgroup()).order == 1


@pytest.mark.parametrize("G, subs, normals", [
    (S3, 6, 3), (dihedral(4), 10, 6), (quaternion(), 6, 6), (alternating(4), 10, 3),
    (symmetric(4), 30, 4), (direct_product(cyclic(2), cyclic(2)), 5, 5), (cyclic(12), 6, 6),
])
def test_subgroup_and_normal_counts(G, subs, normals):
    assert len(G.subgroups()) == subs
    assert len(G.normal_subgroups()) == normals
    assert all(N.is_normal() for N in G.normal_subgroups())


def test_conjugacy_classes_s4():
    assert sorted(len(c) for c in symmetric(4).conjugacy_classes()) == [1, 3, 6, 6, 8]


# -- homomorphisms and quotients ---------------------------------------------


def test_enumerate_homs_examples():
    C4, C2, C3 = cyclic(4), cyclic(2), cyclic(3)
    assert len(enumerate_homs(C4, C2)) == 2
    assert len(enumerate_homs(C4, C2, surjective_only=True)) == 1
    assert len(enumerate_homs(S3, cyclic(1))) == 1
    assert len(enumerate_homs(C2, C3)) == 1


def test_hom_count_against_sympy_free_enumeration():
    # |Hom(S3, S3)| = 10: trivial, 3 onto the sign subgroups, 6 automorphisms
    assert len(enumerate_homs(S3, S3)) == 10


def test_grouphom_rejects_non_homomorphism():
    C4, C2 = cyclic(4), cyclic(2)
    with pytest.raises(GroupError):
        GroupHom(C2, C4, [C4.generators[0]])


def test_quotient_examples():
    Q, nat = quotient(S3, order3(S3))
    assert Q.order == 2 and nat.is_surjective()
    assert quotient(S3, S3.whole())[0].order == 1
    assert is_isomorphic(quotient(S3, S3.trivial_subgroup())[0], S3)
    with pytest.raises(GroupError):
        quotient(S3, order2(S3))


def test_kernel_image_preimage():
    Q, nat = quotient(S3, order3(S3))
    assert nat.kernel().members == order3(S3).members
    assert nat.preimage(Q.trivial_subgroup()).members == order3(S3).members
    assert nat.image().order == 2


# -- characters --------------------------------------------------------------


@pytest.mark.parametrize("G, degrees", [
    (S3, [1, 1, 2]), (quaternion(), [1, 1, 1, 1, 2]), (alternating(4), [1, 1, 1, 3]),
    (symmetric(4), [1, 1, 2, 3, 3]), (alternating(5), [1, 3, 3, 4, 5]), (cyclic(5), [1] * 5),
])
def test_character_degrees(G, degrees):
    assert character_degrees(G) == degrees


def test_subgroup_helpers():
    H = order2(S3)
    assert H.index == 3 and not H.is_normal()
    assert len(H.cosets()) == 3
    assert H.as_group().order == 2
    assert Subgroup(S3, frozenset([S3.e])) <= H
