"""Surface-group presentations, words and representations into finite groups.

Generators of the genus-``g`` presentation are numbered ``0 .. 2g-1`` in the
interleaved order ``x1, y1, x2, y2, ...``.  A word is a tuple of nonzero
ints: ``k+1`` is generator ``k`` and ``-(k+1)`` its inverse.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from functools import cached_property

from .fingroup import CapExceeded, FiniteGroup, GroupError, GroupHom, ProductElement, Subgroup

SEARCH_CAP = 10 ** 8


class ParseError(ValueError):
    def __init__(self, message, pos=None, text=None):
        self.pos = pos
        self.text = text
        where = f" at position {pos}" if pos is not None else ""
        super().__init__(f"{message}{where}")


# ---------------------------------------------------------------------------
# words
# ---------------------------------------------------------------------------


def free_reduce(word):
    out = []
    for letter in word:
        if out and out[-1] == -letter:
            out.pop()
        else:
            out.append(letter)
    return tuple(out)


def inverse(word):
    return tuple(-a for a in reversed(word))


def commutator(u, v):
    """``[u, v] = u^-1 v^-1 u v``."""
    return free_reduce(inverse(u) + inverse(v) + tuple(u) + tuple(v))


def conjugate(u, v):
    """``u^v = v^-1 u v``."""
    return free_reduce(inverse(v) + tuple(u) + tuple(v))


def power(u, k):
    base = tuple(u) if k >= 0 else inverse(u)
    return free_reduce(base * abs(k))


def relator(genus):
    w = ()
    for i in range(genus):
        w += commutator((2 * i + 1,), (2 * i + 2,))
    return w


def surface_labels(genus):
    out = []
    for i in range(1, genus + 1):
        out += [f"x{i}", f"y{i}"]
    return out


def format_word(word, labels):
    if not word:
        return "1"
    parts = []
    for a in word:
        name = labels[abs(a) - 1]
        parts.append(name if a > 0 else f"{name}^-1")
    return "*".join(parts)


_TOKEN = re.compile(r"\s*(?:(?P<int>\d+)|(?P<name>[A-Za-z_]\w*)|(?P<sym>[\^\*\[\]\(\),\-]))")


def _tokenize(text):
    pos = 0
    out = []
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        m = _TOKEN.match(text, pos)
        if not m:
            raise ParseError(f"unexpected character {text[pos:].lstrip()[:1]!r}", pos, text)
        kind = m.lastgroup
        start = m.start(kind)
        out.append((kind, m.group(kind), start))
        pos = m.end()
    out.append(("end", "", len(text)))
    return out


class _WordParser:
    def __init__(self, text, labels):
        self.text = text
        self.labels = {name: k for k, name in enumerate(labels)}
        self.toks = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.toks[self.i]

    def take(self, value=None):
        tok = self.toks[self.i]
        if value is not None and tok[1] != value:
            raise ParseError(f"expected {value!r}, found {tok[1] or 'end of input'!r}", tok[2], self.text)
        self.i += 1
        return tok

    def parse(self):
        w = self.word()
        tok = self.peek()
        if tok[0] != "end":
            raise ParseError(f"unexpected {tok[1]!r}", tok[2], self.text)
        return w

    def word(self):
        w = self.term()
        while self.peek()[1] == "*":
            self.take("*")
            w = free_reduce(w + self.term())
        return w

    def term(self):
        w = self.atom()
        while self.peek()[1] == "^":
            self.take("^")
            kind, val, pos = self.peek()
            if val == "-" or kind == "int":
                sign = 1
                if val == "-":
                    self.take("-")
                    sign = -1
                kind, val, pos = self.take()
                if kind != "int":
                    raise ParseError("expected an integer exponent", pos, self.text)
                w = power(w, sign * int(val))
            else:
                w = conjugate(w, self.atom())
        return w

    def atom(self):
        kind, val, pos = self.take()
        if kind == "int":
            if val != "1":
                raise ParseError(f"unexpected number {val}", pos, self.text)
            return ()
        if kind == "name":
            if val not in self.labels:
                raise ParseError(f"unknown generator {val!r}", pos, self.text)
            return (self.labels[val] + 1,)
        if val == "[":
            u = self.word()
            self.take(",")
            v = self.word()
            self.take("]")
            return commutator(u, v)
        if val == "(":
            u = self.word()
            self.take(")")
            return u
        raise ParseError(f"unexpected {val or 'end of input'!r}", pos, self.text)


def parse_word(text, labels):
    """Parse ``x1*y1^-1*[x2,y2]`` style words over ``labels``.

    ``u^k`` is a power, ``u^v`` the conjugate ``v^-1 u v`` and ``[u,v]`` the
    commutator ``u^-1 v^-1 u v``.
    """
    return _WordParser(text, labels).parse()


# ---------------------------------------------------------------------------
# presentations and assignments
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SurfacePresentation:
    genus: int

    def __post_init__(self):
        if self.genus < 1:
            raise GroupError("genus must be at least 1")

    @property
    def ngens(self):
        return 2 * self.genus

    @property
    def labels(self):
        return surface_labels(self.genus)

    @property
    def relator(self):
        return relator(self.genus)

    def parse(self, text):
        return parse_word(text, self.labels)

    def format(self, word):
        return format_word(word, self.labels)


class SurfaceAssignment:
    """Images ``(a1, b1, ..., ag, bg)`` of ``x1, y1, ...`` satisfying the relator."""

    def __init__(self, target, images, check=True):
        images = tuple(images)
        if not images or len(images) % 2:
            raise GroupError("need an even, nonzero number of images")
        self.target = target
        self.images = images
        self.idx = tuple(target.index(x) for x in images)
        if check and self.relator_value() != target.e:
            raise GroupError("images do not satisfy the surface relator")

    @classmethod
    def from_indices(cls, target, idx, check=True):
        return cls(target, [target.elements[i] for i in idx], check=check)

    @property
    def genus(self):
        return len(self.images) // 2

    @property
    def presentation(self):
        return SurfacePresentation(self.genus)

    def relator_value(self):
        return self.eval_index(relator(self.genus))

    def eval_index(self, word):
        G = self.target
        x = G.e
        for a in word:
            k = abs(a) - 1
            if k >= len(self.idx):
                raise GroupError(f"generator {k + 1} not in genus {self.genus}")
            g = self.idx[k]
            x = G.mul(x, g if a > 0 else G.inv(g))
        return x

    def evaluate(self, word):
        return self.target.elements[self.eval_index(word)]

    @cached_property
    def image(self):
        return Subgroup(self.target, self.target.closure(self.idx))

    def is_surjective(self):
        return self.image.order == self.target.order

    def pair(self, j):
        """Images of ``(x_j, y_j)``, 1-based."""
        return self.idx[2 * j - 2], self.idx[2 * j - 1]

    def then(self, hom):
        """Post-compose with a homomorphism out of the target."""
        return SurfaceAssignment(hom.target, [hom(x) for x in self.images], check=False)

    def __eq__(self, other):
        return (isinstance(other, SurfaceAssignment) and self.target is other.target
                and self.idx == other.idx)

    def __hash__(self):
        return hash(self.idx)

    def __repr__(self):
        return f"SurfaceAssignment(genus={self.genus}, images={[str(x) for x in self.images]})"


def evaluate(word, asg):
    return asg.evaluate(word)


# ---------------------------------------------------------------------------
# enumeration
# ---------------------------------------------------------------------------


def _comm_tables(G):
    T = G.cayley
    inv = G.inv_list
    n = G.order
    comm = [[T[T[inv[a]][inv[b]]][T[a][b]] for b in range(n)] for a in range(n)]
    by_value = {}
    for a in range(n):
        for b in range(n):
            by_value.setdefault(comm[a][b], []).append((a, b))
    return comm, by_value


def iter_representations(genus, target, cap=None):
    """Index tuples of every representation, in lexicographic order.

    The last pair is looked up from the commutator it must produce rather than
    enumerated, which is the relator-prefix pruning.
    """
    n = target.order
    if n ** (2 * genus) > (cap or SEARCH_CAP):
        raise CapExceeded(f"|G|^(2g) = {n}^{2 * genus} exceeds the search cap")
    T = target.cayley
    inv = target.inv_list
    comm, by_value = _comm_tables(target)

    def rec(k, prefix, acc):
        if k == genus - 1:
            for a, b in by_value.get(inv[prefix], ()):
                yield acc + (a, b)
            return
        for a in range(n):
            row = comm[a]
            for b in range(n):
                yield from rec(k + 1, T[prefix][row[b]], acc + (a, b))

    yield from rec(0, target.e, ())


def enumerate_representations(genus, target, surjective_only=False, count_only=False, cap=None):
    """All homomorphisms from the genus-``g`` surface group into ``target``.

    Returns a list of :class:`SurfaceAssignment`, or the count when
    ``count_only`` is set.
    """
    if genus < 1:
        raise GroupError("genus must be at least 1")
    if count_only and not surjective_only:
        n = target.order
        if n ** (2 * genus) > (cap or SEARCH_CAP):
            raise CapExceeded(f"|G|^(2g) = {n}^{2 * genus} exceeds the search cap")
        # count the final pair by lookup instead of materialising tuples
        T = target.cayley
        inv = target.inv_list
        comm, by_value = _comm_tables(target)
        sizes = {z: len(v) for z, v in by_value.items()}

        def rec(k, prefix):
            if k == genus - 1:
                return sizes.get(inv[prefix], 0)
            total = 0
            for a in range(n):
                row = comm[a]
                for b in range(n):
                    total += rec(k + 1, T[prefix][row[b]])
            return total

        return rec(0, target.e)
    span = {}
    out = []
    count = 0
    for tup in iter_representations(genus, target, cap):
        if surjective_only:
            key = frozenset(tup)
            full = span.get(key)
            if full is None:
                full = span[key] = len(target.closure(key)) == target.order
            if not full:
                continue
        count += 1
        if not count_only:
            out.append(SurfaceAssignment.from_indices(target, tup, check=False))
    return count if count_only else out


def first_surjection(genus, target, cap=None):
    """A deterministic surjection from the surface group, or ``None``.

    Places the target's generators on ``x1, x2, ...`` when there is room and
    otherwise takes the first surjective representation in search order.
    """
    gens = list(target.generators)
    if len(gens) <= genus:
        images = []
        for i in range(genus):
            images += [gens[i] if i < len(gens) else target.identity, target.identity]
        return SurfaceAssignment(target, images)
    span = {}
    for tup in iter_representations(genus, target, cap):
        key = frozenset(tup)
        if key not in span:
            span[key] = len(target.closure(key)) == target.order
        if span[key]:
            return SurfaceAssignment.from_indices(target, tup, check=False)
    return None


# ---------------------------------------------------------------------------
# generator moves
# ---------------------------------------------------------------------------


def collect_pair_to_front(asg, j, start=1):
    """Move pair ``j`` to position ``start``; conjugate pairs ``start..j-1`` by ``[a_j, b_j]``.

    This is the change of generators ``x_i -> x_i^c, y_i -> y_i^c`` (``c``
    the ``j``-th pair commutator) that keeps the surface relator intact:
    ``[x_j,y_j] (∏_{start<=i<j} [x_i,y_i])^c == ∏_{start<=i<=j} [x_i,y_i]``.
    Positions are 1-based.
    """
    g = asg.genus
    if not (1 <= start < j <= g):
        raise GroupError(f"pair index {j} out of range for start {start}, genus {g}")
    G = asg.target
    a, b = asg.pair(j)
    c = G.comm(a, b)
    idx = list(asg.idx)
    moved = [a, b]
    for i in range(start, j):
        x, y = asg.pair(i)
        moved += [G.conj(x, c), G.conj(y, c)]
    idx[2 * start - 2:2 * j] = moved
    return SurfaceAssignment.from_indices(G, idx, check=False)


def restore_pair(asg, j, start=1):
    """Inverse of :func:`collect_pair_to_front` with the same ``j`` and ``start``."""
    g = asg.genus
    if not (1 <= start < j <= g):
        raise GroupError(f"pair index {j} out of range for start {start}, genus {g}")
    G = asg.target
    a, b = asg.pair(start)
    cinv = G.inv(G.comm(a, b))
    idx = list(asg.idx)
    back = []
    for i in range(start + 1, j + 1):
        x, y = asg.pair(i)
        back += [G.conj(x, cinv), G.conj(y, cinv)]
    back += [a, b]
    idx[2 * start - 2:2 * j] = back
    return SurfaceAssignment.from_indices(G, idx, check=False)


# ---------------------------------------------------------------------------
# joint images
# ---------------------------------------------------------------------------


@dataclass
class JointImage:
    group: FiniteGroup
    assignment: SurfaceAssignment
    projections: list


def joint_image(asgs, cap=None):
    """Image of the diagonal map into the product of the targets.

    The kernel of the combined assignment is the intersection of the
    component kernels.
    """
    asgs = list(asgs)
    if not asgs:
        raise GroupError("need at least one assignment")
    g = asgs[0].genus
    if any(a.genus != g for a in asgs):
        raise GroupError("assignments have different genera")
    diag = [ProductElement(a.images[k] for a in asgs) for k in range(2 * g)]
    Q = FiniteGroup(diag, cap=cap)
    asg = SurfaceAssignment(Q, diag, check=False)
    projections = [GroupHom(Q, a.target, [q[i] for q in Q.generators]) for i, a in enumerate(asgs)]
    return JointImage(Q, asg, projections)


# ---------------------------------------------------------------------------
# counting oracles
# ---------------------------------------------------------------------------


def hom_count_character_sum(genus, G):
    """``|Hom(Π_g, G)| = |G|^(2g-1) Σ_χ χ(1)^(2-2g)`` (exact rational arithmetic)."""
    from fractions import Fraction
    from .fingroup import character_degrees
    if genus == 0:
        return 1
    total = sum(Fraction(1, d ** (2 * genus - 2)) for d in character_degrees(G))
    value = G.order ** (2 * genus - 1) * total
    if value.denominator != 1:
        raise ArithmeticError("character sum is not an integer")
    return int(value)


def hom_count_convolution(genus, G):
    """``|Hom(Π_g, G)|`` as the ``g``-fold convolution of the commutator
    distribution ``N(z) = #{(x, y) : [x, y] = z}`` evaluated at the identity."""
    n = G.order
    dist = [0] * n
    for x in range(n):
        for y in range(n):
            dist[G.comm(x, y)] += 1
    acc = [0] * n
    acc[G.e] = 1
    for _ in range(genus):
        nxt = [0] * n
        for u, cu in enumerate(acc):
            if cu:
                for z, cz in enumerate(dist):
                    if cz:
                        nxt[G.mul(u, z)] += cu * cz
        acc = nxt
    return acc[G.e]
