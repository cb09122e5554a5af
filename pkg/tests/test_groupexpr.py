import pytest
from hypothesis import given, settings, strategies as st

from profsurf.fingroup import GroupError, is_isomorphic, symmetric
from profsurf.groupexpr import GroupExprError, elaborate, parse_group, pick_action


@pytest.mark.parametrize("text, order", [
    ("C5", 5), ("S4", 24), ("A4", 12), ("D4", 8), ("Q8", 8),
    ("product(C2, C2, C3)", 12),
    ("semidirect(C3, C2, action=inversion)", 6),
    ("semidirect(C7, C3, action=power(2))", 21),
    ("wreath(C2, C3, over=trivial)", 24),
    ("wreath(C2, S3, over=whole)", 12),
    ("wreath(C3, S3, over=index(1), action=index(1))", 3 ** 3 * 6),
    ("perm{(1 2), (1 2 3)}", 6),
    ("perm{(1 2 3 4)}", 4),
])
def test_orders(text, order):
    assert elaborate(text).order == order


def test_semidirect_inversion_is_s3():
    assert is_isomorphic(elaborate("semidirect(C3, C2, action=inversion)"), symmetric(3))


def test_cache_returns_same_object():
    assert elaborate("product(C3, C3)") is elaborate("product(C3,C3)")


@pytest.mark.parametrize("text, pos", [
    ("C0", 0), ("product(C3", 10), ("foo", 0), ("C3 C3", 3), ("perm{(1 2}", 5),
    ("semidirect(C3, C2, action=square)", 26), ("", 0),
])
def test_errors_carry_positions(text, pos):
    with pytest.raises(GroupExprError) as info:
        elaborate(text)
    assert info.value.pos == pos
    assert "position" in str(info.value)


def test_out_of_range_choices():
    with pytest.raises(GroupError):
        elaborate("semidirect(C3, C2, action=index(7))")
    with pytest.raises(GroupError):
        elaborate("wreath(C2, C3, over=index(9))")
    with pytest.raises(GroupError):
        elaborate("semidirect(C3, C3, action=power(2))")


def test_pick_action():
    C2, C3 = elaborate("C2"), elaborate("C3")
    assert pick_action("trivial", C2, C3).is_trivial()
    assert not pick_action("inversion", C2, C3).is_trivial()
    with pytest.raises(GroupExprError):
        pick_action("inversion x", C2, C3)


atoms = st.sampled_from(["C1", "C2", "C3", "S3", "D4", "Q8", "A4"])


def _exprs():
    return st.recursive(
        atoms,
        lambda inner: st.one_of(
            st.lists(inner, min_size=1, max_size=3).map(lambda xs: f"product({', '.join(xs)})"),
            st.tuples(inner, inner).map(lambda ab: f"semidirect({ab[0]}, {ab[1]}, action=trivial)"),
        ),
        max_leaves=4,
    )


@settings(max_examples=60, deadline=None)
@given(_exprs())
def test_roundtrip(text):
    expr = parse_group(text)
    assert parse_group(str(expr)) == expr
