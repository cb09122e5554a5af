import pytest
from hypothesis import given, settings, strategies as st

from profsurf.fingroup import GroupError, Perm, cyclic, direct_product, quaternion, symmetric
from profsurf.surface import (ParseError, SurfaceAssignment, SurfacePresentation,
                              collect_pair_to_front, enumerate_representations, evaluate,
                              first_surjection, hom_count_character_sum, hom_count_convolution,
                              joint_image, parse_word, relator, restore_pair)

S3 = symmetric(3)
P = Perm.parse


def test_relator_shape():
    # [x1, y1][x2, y2] with [x, y] = x^-1 y^-1 x y
    assert relator(2) == (-1, -2, 1, 2, -3, -4, 3, 4)
    assert SurfacePresentation(2).labels == ["x1", "y1", "x2", "y2"]


def test_parse_word():
    labels = SurfacePresentation(2).labels
    assert parse_word("x1*y1^-1", labels) == (1, -2)
    assert parse_word("[x1, y1]", labels) == (-1, -2, 1, 2)
    assert parse_word("x2^3", labels) == (3, 3, 3)
    with pytest.raises(ParseError):
        parse_word("x1**", labels)
    with pytest.raises(ParseError):
        parse_word("z9", labels)


def test_assignment_rejects_relator_violation():
    with pytest.raises(GroupError):
        SurfaceAssignment(S3, [P("(1 2)"), P("(1 2 3)")])


def test_evaluate_examples():
    asg = SurfaceAssignment(S3, [P("(1 2)"), P("(1 3)"), P("()"), P("()")], check=False)
    labels = SurfacePresentation(2).labels
    assert evaluate(parse_word("x1*y1", labels), asg) == P("(1 2)", 3) * P("(1 3)")
    C = cyclic(4)
    x = C.generators[0]
    ab = SurfaceAssignment(C, [x, x * x, x, x])
    assert evaluate(parse_word("[x1, y1]", labels), ab) == C.identity
    good = first_surjection(2, S3)
    assert good.relator_value() == S3.e


def test_enumeration_examples():
    assert enumerate_representations(1, S3, count_only=True) == 18
    assert enumerate_representations(1, cyclic(2), count_only=True) == 4
    n = enumerate_representations(2, S3, count_only=True)
    assert n == 486 == hom_count_character_sum(2, S3)
    # the listing agrees with the count
    assert len(enumerate_representations(1, S3)) == 18


@pytest.mark.parametrize("G", [cyclic(3), S3, quaternion(), direct_product(cyclic(2), cyclic(2))])
@pytest.mark.parametrize("g", [1, 2])
def test_hom_count_oracles_agree(G, g):
    brute = enumerate_representations(g, G, count_only=True)
    assert brute == hom_count_character_sum(g, G) == hom_count_convolution(g, G)


def test_surjective_counts():
    # surjections of Z^2 onto C2 x C2: ordered generating pairs, 6 of them
    V = direct_product(cyclic(2), cyclic(2))
    assert enumerate_representations(1, V, surjective_only=True, count_only=True) == 6
    assert enumerate_representations(1, S3, surjective_only=True, count_only=True) == 0


def _random_assignment(data, G, g):
    idx = [data.draw(st.integers(0, G.order - 1)) for _ in range(2 * g - 2)]
    # complete the last pair by search so the relator holds
    prefix = G.e
    for i in range(g - 1):
        prefix = G.mul(prefix, G.comm(idx[2 * i], idx[2 * i + 1]))
    need = G.inv(prefix)
    last = [(a, b) for a in range(G.order) for b in range(G.order) if G.comm(a, b) == need]
    if not last:
        return None
    a, b = data.draw(st.sampled_from(last))
    return SurfaceAssignment.from_indices(G, idx + [a, b])


@settings(max_examples=60, deadline=None)
@given(st.data())
def test_collect_and_restore(data):
    g = data.draw(st.integers(2, 4))
    asg = _random_assignment(data, S3, g)
    if asg is None:
        return
    j = data.draw(st.integers(2, g))
    start = data.draw(st.integers(1, j - 1))
    moved = collect_pair_to_front(asg, j, start=start)
    assert moved.relator_value() == S3.e
    assert moved.pair(start) == asg.pair(j)
    assert S3.closure(moved.idx) == S3.closure(asg.idx)
    assert restore_pair(moved, j, start=start).idx == asg.idx


def test_collect_is_rotation_for_commuting_pair():
    C = cyclic(3)
    x = C.generators[0]
    asg = SurfaceAssignment(C, [x, C.identity, x * x, x])
    moved = collect_pair_to_front(asg, 2)
    assert moved.images == asg.images[2:] + asg.images[:2]


def test_joint_image():
    C2 = cyclic(2)
    x, e = C2.generators[0], C2.identity
    a = SurfaceAssignment(C2, [x, e, e, e])
    b = SurfaceAssignment(C2, [e, e, x, e])
    assert joint_image([a, b]).group.order == 4
    assert joint_image([a, a]).group.order == 2
    triv = SurfaceAssignment(C2, [e] * 4)
    assert joint_image([a, triv]).group.order == 2
