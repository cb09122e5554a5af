import random

import pytest
from hypothesis import given, settings, strategies as st
from sympy import Matrix, ZZ
from sympy.matrices.normalforms import smith_normal_form

from profsurf.cosetenum import (abelianization_invariants, kernel_table, reidemeister_schreier,
                                relation_matrix, rewrite, smith_diagonal, todd_coxeter)
from profsurf.fingroup import CapExceeded, GroupError, cyclic, direct_product, symmetric
from profsurf.surface import SurfacePresentation, first_surjection, parse_word


def _rs(g, G, K=None):
    mu = first_surjection(g, G)
    K = K if K is not None else G.trivial_subgroup()
    t = todd_coxeter(g, by_hom=(mu, K))
    return t, reidemeister_schreier(t)


def test_index_examples():
    C2 = cyclic(2)
    mu = first_surjection(2, C2)
    assert todd_coxeter(2, by_hom=(mu, C2.whole())).index == 1
    assert kernel_table(mu).index == 2
    V = direct_product(C2, C2)
    assert kernel_table(first_surjection(2, V)).index == 4


def test_index_one_is_original_presentation():
    t, sp = _rs(2, cyclic(1))
    assert sp.ngens == 4 and sp.nrelators == 1


@pytest.mark.parametrize("g, n", [(2, 2), (2, 3), (3, 5), (2, 5)])
def test_schreier_counts(g, n):
    t, sp = _rs(g, cyclic(n))
    assert t.check()
    assert sp.ngens == n * (2 * g - 1) + 1
    assert sp.nrelators == n
    assert sp.predicted_genus == n * (g - 1) + 1
    ab = abelianization_invariants(sp)
    assert ab.torsion == [] and ab.free_rank == 2 * sp.predicted_genus


def test_rank_examples():
    assert abelianization_invariants(_rs(2, cyclic(1))[1]).free_rank == 4
    assert abelianization_invariants(_rs(2, cyclic(2))[1]).free_rank == 6
    assert abelianization_invariants(_rs(3, cyclic(5))[1]).free_rank == 22


def test_enumeration_from_words():
    labels = SurfacePresentation(2).labels
    # the normal closure of x1 has index 2 once y1 is added
    words = [parse_word(w, labels) for w in ("y1", "x2", "y2", "x1^2", "x1*x2*x1^-1", "x1*y2*x1^-1")]
    t = todd_coxeter(2, subgroup_words=words)
    assert t.index == 2 and t.check()
    whole = todd_coxeter(2, subgroup_words=[(1,), (2,), (3,), (4,)])
    assert whole.index == 1


def test_enumeration_of_schreier_generators_matches():
    S3 = symmetric(3)
    t, sp = _rs(2, S3)
    again = todd_coxeter(2, subgroup_words=sp.generators)
    assert again.index == t.index == 6


def test_cap_on_infinite_index():
    labels = SurfacePresentation(2).labels
    words = [parse_word("x1^2", labels)]
    with pytest.raises(CapExceeded):
        todd_coxeter(2, subgroup_words=words, max_cosets=200)


def test_exactly_one_subgroup_description():
    with pytest.raises(GroupError):
        todd_coxeter(2)


def test_rewrite_recovers_generators():
    t, sp = _rs(2, symmetric(3))
    for k, w in enumerate(sp.generators, start=1):
        assert rewrite(sp, t, w) == (k,)


def test_csv_shape():
    t, _ = _rs(2, cyclic(3))
    lines = t.to_csv().strip().splitlines()
    assert lines[0].startswith("coset,x1,x1^-1")
    assert len(lines) == 4


def _sympy_invariants(rows, ncols):
    m = Matrix(rows) if rows else Matrix.zeros(1, ncols)
    snf = smith_normal_form(m, domain=ZZ)
    return sorted(abs(int(snf[i, i])) for i in range(min(snf.shape)) if snf[i, i] != 0)


@settings(max_examples=60, deadline=None)
@given(st.lists(st.lists(st.integers(-6, 6), min_size=4, max_size=4), min_size=1, max_size=4))
def test_smith_matches_sympy(rows):
    assert sorted(smith_diagonal(rows)) == _sympy_invariants(rows, 4)


def test_smith_divisibility_chain():
    d = smith_diagonal([[2, 4, 4], [-6, 6, 12], [10, -4, -16]])
    assert d == [2, 6, 12]
    assert all(b % a == 0 for a, b in zip(d, d[1:]))


def test_relation_matrix_against_sympy_for_surface_subgroups():
    for G in (cyclic(4), symmetric(3)):
        _, sp = _rs(2, G)
        mat = relation_matrix(sp)
        assert sorted(smith_diagonal(mat)) == _sympy_invariants(mat, sp.ngens)
