"""Finite groups given by generators and enumerated in full.

Every group here is small enough to list.  A :class:`FiniteGroup` closes a
generating set, sorts the elements deterministically and then works in index
space: element ``i`` is ``G.elements[i]``.  Any hashable carrier with ``*``,
``~`` and a ``sort_key()`` method can be used as an element; permutations
(:class:`Perm`) are the default carrier, direct products use
:class:`ProductElement` and semidirect products use :class:`SDElement`.
"""
from __future__ import annotations

import math
import os
from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from itertools import product

import numpy as np

DEFAULT_CAP = int(os.environ.get("PROFSURF_CAP", "20000"))
# groups at most this large get a full numpy Cayley table
TABLE_LIMIT = 5000


class GroupError(ValueError):
    pass


class HomomorphismError(GroupError):
    pass


class CapExceeded(RuntimeError):
    """An enumeration outgrew its configured budget."""


# ---------------------------------------------------------------------------
# carriers
# ---------------------------------------------------------------------------


class Perm:
    """A permutation of ``{0, ..., n-1}``; printed 1-based in cycle notation.

    Products compose left to right: ``(p * q)(i) == q(p(i))``.
    """

    __slots__ = ("images", "_hash")

    def __init__(self, images):
        images = tuple(int(i) for i in images)
        if sorted(images) != list(range(len(images))):
            raise GroupError(f"not a permutation: {images}")
        self.images = images
        self._hash = hash(images)

    @classmethod
    def _raw(cls, images):
        p = object.__new__(cls)
        p.images = images
        p._hash = hash(images)
        return p

    @classmethod
    def identity(cls, degree):
        return cls._raw(tuple(range(degree)))

    @classmethod
    def from_cycles(cls, cycles, degree=None):
        cycles = [tuple(c) for c in cycles]
        top = max((max(c) for c in cycles if c), default=1)
        degree = max(degree or 0, top)
        images = list(range(degree))
        for cyc in cycles:
            if len(set(cyc)) != len(cyc) or min(cyc, default=1) < 1:
                raise GroupError(f"bad cycle {cyc}")
            for a, b in zip(cyc, cyc[1:] + cyc[:1]):
                images[a - 1] = b - 1
        return cls(images)

    @classmethod
    def parse(cls, text, degree=None):
        """Parse cycle notation such as ``"(1 2)(3 4 5)"`` or ``"()"``."""
        text = text.strip()
        cycles = []
        pos = 0
        while pos < len(text):
            if text[pos].isspace():
                pos += 1
                continue
            if text[pos] != "(":
                raise GroupError(f"expected '(' at {pos} in {text!r}")
            end = text.find(")", pos)
            if end < 0:
                raise GroupError(f"unclosed cycle in {text!r}")
            body = text[pos + 1:end].replace(",", " ").split()
            try:
                cycles.append(tuple(int(t) for t in body))
            except ValueError:
                raise GroupError(f"bad cycle {text[pos:end + 1]!r}") from None
            pos = end + 1
        return cls.from_cycles(cycles, degree)

    @property
    def degree(self):
        return len(self.images)

    def __call__(self, i):
        return self.images[i]

    def __mul__(self, other):
        if not isinstance(other, Perm):
            return NotImplemented
        if len(other.images) != len(self.images):
            raise GroupError("degree mismatch")
        o = other.images
        return Perm._raw(tuple(o[i] for i in self.images))

    def __invert__(self):
        inv = [0] * len(self.images)
        for i, j in enumerate(self.images):
            inv[j] = i
        return Perm._raw(tuple(inv))

    def __pow__(self, k):
        result = Perm.identity(self.degree)
        base = self if k >= 0 else ~self
        for _ in range(abs(k)):
            result = result * base
        return result

    def __eq__(self, other):
        return isinstance(other, Perm) and self.images == other.images

    def __hash__(self):
        return self._hash

    def __lt__(self, other):
        return self.images < other.images

    def sort_key(self):
        return self.images

    def cycles(self):
        seen = set()
        out = []
        for start in range(len(self.images)):
            if start in seen or self.images[start] == start:
                continue
            cyc = [start]
            seen.add(start)
            nxt = self.images[start]
            while nxt != start:
                cyc.append(nxt)
                seen.add(nxt)
                nxt = self.images[nxt]
            out.append(tuple(c + 1 for c in cyc))
        return out

    def __str__(self):
        cyc = self.cycles()
        if not cyc:
            return "()"
        return "".join("(" + " ".join(map(str, c)) + ")" for c in cyc)

    def __repr__(self):
        return f"Perm('{self}', degree={self.degree})"


class ProductElement(tuple):
    """Element of a direct product: a tuple multiplied componentwise."""

    __slots__ = ()

    def __mul__(self, other):
        return ProductElement(a * b for a, b in zip(self, other))

    def __invert__(self):
        return ProductElement(~a for a in self)

    def sort_key(self):
        return tuple(a.sort_key() for a in self)

    def __str__(self):
        return "(" + ", ".join(str(a) for a in self) + ")"

    def __repr__(self):
        return f"ProductElement({tuple(self)!r})"


# ---------------------------------------------------------------------------
# groups
# ---------------------------------------------------------------------------


class FiniteGroup:
    """The closure of ``generators`` with a deterministic element order."""

    def __init__(self, generators, cap=None, name=None):
        gens = tuple(generators)
        if not gens:
            raise GroupError("need at least one generator")
        if isinstance(gens[0], Perm):
            d = max(g.degree for g in gens)
            # fix the extra points of shorter permutations
            gens = tuple(g if g.degree == d else Perm(list(g.images) + list(range(g.degree, d)))
                         for g in gens)
        cap = DEFAULT_CAP if cap is None else cap
        identity = gens[0] * ~gens[0]
        found = [identity]
        where = {identity: 0}
        parent = [(-1, -1)]
        cols = [[] for _ in gens]
        head = 0
        while head < len(found):
            x = found[head]
            for k, s in enumerate(gens):
                y = x * s
                j = where.get(y)
                if j is None:
                    j = len(found)
                    if j >= cap:
                        raise CapExceeded(f"group closure exceeds {cap} elements")
                    where[y] = j
                    found.append(y)
                    parent.append((head, k))
                cols[k].append(j)
            head += 1

        n = len(found)
        order = sorted(range(n), key=lambda p: found[p].sort_key())
        relabel = [0] * n
        for new, old in enumerate(order):
            relabel[old] = new
        self.elements = tuple(found[p] for p in order)
        self._index = {x: i for i, x in enumerate(self.elements)}
        self.generators = gens
        self.gen_indices = tuple(self._index[s] for s in gens)
        self.e = self._index[identity]
        self.identity = identity
        self.name = name
        self.cap = cap
        rl = np.asarray(relabel, dtype=np.int64)
        self._gen_cols = []
        for k in range(len(gens)):
            col = np.empty(n, dtype=np.int64)
            col[rl] = rl[np.asarray(cols[k], dtype=np.int64)]
            self._gen_cols.append(col)
        # BFS spanning tree (sorted labels): bfs order and (parent, generator)
        self._bfs = [relabel[p] for p in range(n)]
        self._tree = [(-1, -1)] * n
        for old in range(1, n):
            p, k = parent[old]
            self._tree[relabel[old]] = (relabel[p], k)

    # -- basics ------------------------------------------------------------

    @property
    def order(self):
        return len(self.elements)

    def __len__(self):
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def __contains__(self, x):
        return x in self._index

    def __getitem__(self, i):
        return self.elements[i]

    def index(self, x):
        try:
            return self._index[x]
        except KeyError:
            if isinstance(x, Perm) and isinstance(self.identity, Perm) and x.degree < self.identity.degree:
                return self.index(Perm(list(x.images) + list(range(x.degree, self.identity.degree))))
            raise GroupError(f"{x} is not an element of this group") from None

    def __repr__(self):
        label = self.name or "FiniteGroup"
        return f"<{label} of order {self.order}>"

    def gen_column(self, k):
        """Array ``c`` with ``c[i] == index(elements[i] * generators[k])``."""
        return self._gen_cols[k]

    @property
    def has_table(self):
        return self.order <= TABLE_LIMIT

    @cached_property
    def table(self):
        """Full Cayley table ``T[i, j] = index(x_i * x_j)``."""
        n = self.order
        if n > TABLE_LIMIT:
            raise CapExceeded(f"no Cayley table above {TABLE_LIMIT} elements")
        dtype = np.int16 if n < 2 ** 15 else np.int32
        t = np.empty((n, n), dtype=dtype)
        t[:, self.e] = np.arange(n, dtype=dtype)
        for y in self._bfs[1:]:
            p, k = self._tree[y]
            t[:, y] = self._gen_cols[k][t[:, p]]
        return t

    @cached_property
    def cayley(self):
        """The Cayley table as nested lists (fast scalar lookups)."""
        return self.table.tolist()

    @cached_property
    def inverses(self):
        if self.has_table:
            rows, cols = np.nonzero(self.table == self.e)
            inv = np.empty(self.order, dtype=np.int64)
            inv[rows] = cols
            return inv
        return np.asarray([self._index[~x] for x in self.elements], dtype=np.int64)

    @cached_property
    def inv_list(self):
        return self.inverses.tolist()

    def mul(self, i, j):
        if self.has_table:
            return self.cayley[i][j]
        return self._index[self.elements[i] * self.elements[j]]

    def inv(self, i):
        return self.inv_list[i]

    def power(self, i, k):
        if k < 0:
            i, k = self.inv(i), -k
        out = self.e
        for _ in range(k):
            out = self.mul(out, i)
        return out

    def conj(self, i, s):
        """``s^-1 i s``."""
        return self.mul(self.mul(self.inv(s), i), s)

    def comm(self, i, j):
        """``[i, j] = i^-1 j^-1 i j``."""
        return self.mul(self.mul(self.inv(i), self.inv(j)), self.mul(i, j))

    def word_to_tree(self, i):
        """Generator indices spelling element ``i`` along the BFS tree."""
        out = []
        while i != self.e:
            p, k = self._tree[i]
            out.append(k)
            i = p
        return out[::-1]

    @cached_property
    def element_orders(self):
        out = []
        for i in range(self.order):
            k, x = 1, i
            while x != self.e:
                x = self.mul(x, i)
                k += 1
            out.append(k)
        return out

    def element_order(self, i):
        return self.element_orders[i]

    @cached_property
    def exponent(self):
        return math.lcm(*self.element_orders)

    @cached_property
    def is_abelian(self):
        g = self.gen_indices
        return all(self.mul(a, b) == self.mul(b, a) for a in g for b in g)

    # -- subgroups -----------------------------------------------------------

    def closure(self, indices):
        """Index set of the subgroup generated by ``indices``."""
        gens = sorted({int(i) for i in indices} - {self.e})
        members = {self.e}
        frontier = [self.e]
        while frontier:
            nxt = []
            for x in frontier:
                for s in gens:
                    y = self.mul(x, s)
                    if y not in members:
                        members.add(y)
                        nxt.append(y)
            frontier = nxt
        return frozenset(members)

    def subgroup(self, generators=(), indices=()):
        idx = [self.index(x) for x in generators] + [int(i) for i in indices]
        return Subgroup(self, self.closure(idx))

    def whole(self):
        return Subgroup(self, frozenset(range(self.order)))

    def trivial_subgroup(self):
        return Subgroup(self, frozenset([self.e]))

    def normal_closure(self, indices):
        members = set(self.closure(indices))
        while True:
            extra = {self.conj(x, s) for x in members for s in self.gen_indices} - members
            if not extra:
                return frozenset(members)
            members = set(self.closure(members | extra))

    def conjugacy_classes(self):
        seen = set()
        classes = []
        for i in range(self.order):
            if i in seen:
                continue
            orbit = {i}
            frontier = [i]
            while frontier:
                nxt = []
                for x in frontier:
                    for s in self.gen_indices:
                        y = self.conj(x, s)
                        if y not in orbit:
                            orbit.add(y)
                            nxt.append(y)
                frontier = nxt
            seen |= orbit
            classes.append(frozenset(orbit))
        return classes

    def normal_subgroups(self, cap=5000):
        """All normal subgroups, built as joins of normal closures of classes."""
        if self.order > cap:
            raise CapExceeded(f"normal-subgroup enumeration capped at {cap}")
        atoms = {self.normal_closure([min(c)]) for c in self.conjugacy_classes()}
        found = set(atoms)
        frontier = list(atoms)
        while frontier:
            nxt = []
            for a in frontier:
                for b in atoms:
                    if b <= a:
                        continue
                    j = self._join_normal(a, b)
                    if j not in found:
                        found.add(j)
                        nxt.append(j)
            frontier = nxt
        out = [Subgroup(self, m) for m in found]
        out.sort(key=lambda h: (h.order, sorted(h.members)))
        return out

    def _join_normal(self, a, b):
        # the product of two normal subgroups is their join
        if self.has_table:
            rows = np.fromiter(a, dtype=np.int64)
            cols = np.fromiter(b, dtype=np.int64)
            return frozenset(np.unique(self.table[np.ix_(rows, cols)]).tolist())
        return frozenset(self.mul(x, y) for x in a for y in b)

    def subgroups(self):
        """Every subgroup (brute force, for small groups)."""
        cyclic = {self.closure([i]) for i in range(self.order)}
        found = set(cyclic)
        frontier = list(cyclic)
        while frontier:
            nxt = []
            for a in frontier:
                for c in cyclic:
                    if c <= a:
                        continue
                    j = self.closure(a | c)
                    if j not in found:
                        found.add(j)
                        nxt.append(j)
            frontier = nxt
        out = [Subgroup(self, m) for m in found]
        out.sort(key=lambda h: (h.order, sorted(h.members)))
        return out


@dataclass(frozen=True, eq=False)
class Subgroup:
    parent: FiniteGroup
    members: frozenset

    def __post_init__(self):
        if self.parent.order % len(self.members):
            raise GroupError("subset size does not divide the group order")

    def __eq__(self, other):
        return (isinstance(other, Subgroup) and self.parent is other.parent
                and self.members == other.members)

    def __hash__(self):
        return hash(self.members)

    def __len__(self):
        return len(self.members)

    def __contains__(self, x):
        return self.parent.index(x) in self.members

    def __le__(self, other):
        return self.members <= other.members

    def __repr__(self):
        return f"<Subgroup of order {self.order} in {self.parent!r}>"

    @property
    def order(self):
        return len(self.members)

    @property
    def index(self):
        return self.parent.order // self.order

    @property
    def elements(self):
        return [self.parent.elements[i] for i in sorted(self.members)]

    def is_normal(self):
        g = self.parent
        return all(g.conj(x, s) in self.members for x in self.members for s in g.gen_indices)

    def intersection(self, other):
        _same_parent(self, other)
        return Subgroup(self.parent, self.members & other.members)

    @cached_property
    def generator_indices(self):
        """A small generating set, chosen greedily in index order."""
        g = self.parent
        chosen = []
        span = frozenset([g.e])
        for i in sorted(self.members):
            if i not in span:
                chosen.append(i)
                span = g.closure(chosen)
                if len(span) == self.order:
                    break
        return tuple(chosen)

    def as_group(self, cap=None):
        g = self.parent
        gens = [g.elements[i] for i in self.generator_indices] or [g.identity]
        return FiniteGroup(gens, cap=cap or max(g.cap, g.order))

    def conjugate(self, s):
        g = self.parent
        return Subgroup(g, frozenset(g.conj(x, s) for x in self.members))

    def cosets(self):
        """Left cosets ``xH`` as sorted member tuples, ordered by least element."""
        g = self.parent
        seen = set()
        out = []
        for x in range(g.order):
            if x in seen:
                continue
            c = frozenset(g.mul(x, h) for h in self.members)
            seen |= c
            out.append(tuple(sorted(c)))
        return out


def _same_parent(h, k):
    if h.parent is not k.parent:
        raise GroupError("subgroups live in different groups")


# ---------------------------------------------------------------------------
# homomorphisms and actions
# ---------------------------------------------------------------------------


def _extend(source, target, images_idx):
    """Extend generator images to a map array, or ``None`` if inconsistent."""
    n = source.order
    m = [-1] * n
    m[source.e] = target.e
    for y in source._bfs[1:]:
        p, k = source._tree[y]
        m[y] = target.mul(m[p], images_idx[k])
    for k, img in enumerate(images_idx):
        col = source._gen_cols[k]
        for x in range(n):
            if m[col[x]] != target.mul(m[x], img):
                return None
    return m


class GroupHom:
    """A homomorphism of finite groups fixed by the images of the generators.

    Construction verifies every Cayley-graph edge, which certifies that the
    map respects multiplication.
    """

    def __init__(self, source, target, images, check=True):
        self.source = source
        self.target = target
        self.images = tuple(images)
        if len(self.images) != len(source.generators):
            raise HomomorphismError("need one image per source generator")
        idx = [target.index(x) for x in self.images]
        if check:
            m = _extend(source, target, idx)
            if m is None:
                raise HomomorphismError("generator images do not define a homomorphism")
        else:
            m = [-1] * source.order
            m[source.e] = target.e
            for y in source._bfs[1:]:
                p, k = source._tree[y]
                m[y] = target.mul(m[p], idx[k])
        self.map = m

    @classmethod
    def from_function(cls, source, target, fn):
        return cls(source, target, [fn(s) for s in source.generators])

    def __call__(self, x):
        return self.target.elements[self.map[self.source.index(x)]]

    def apply(self, i):
        return self.map[i]

    def image(self):
        return Subgroup(self.target, frozenset(self.map))

    def kernel(self):
        e = self.target.e
        return Subgroup(self.source, frozenset(i for i, v in enumerate(self.map) if v == e))

    def preimage(self, sub):
        return Subgroup(self.source, frozenset(i for i, v in enumerate(self.map) if v in sub.members))

    def image_of(self, sub):
        return Subgroup(self.target, frozenset(self.map[i] for i in sub.members))

    def is_surjective(self):
        return len(set(self.map)) == self.target.order

    def is_injective(self):
        return len(set(self.map)) == self.source.order

    def then(self, other):
        """``other ∘ self``."""
        return GroupHom(self.source, other.target, [other(x) for x in self.images], check=False)

    def __repr__(self):
        return f"<GroupHom {self.source!r} -> {self.target!r}>"


class GroupAction:
    """A right action of ``acting`` on ``module`` by automorphisms.

    ``table[k][a]`` is the index of ``a^k``; ``(a^k)^h == a^(kh)``.
    """

    def __init__(self, acting, module, table):
        self.acting = acting
        self.module = module
        self.table = [list(map(int, row)) for row in table]
        self._check()

    def _check(self):
        K, M = self.acting, self.module
        if len(self.table) != K.order or any(len(r) != M.order for r in self.table):
            raise GroupError("action table has the wrong shape")
        if self.table[K.e] != list(range(M.order)):
            raise GroupError("identity must act trivially")
        for k, row in enumerate(self.table):
            if sorted(row) != list(range(M.order)):
                raise GroupError("group element does not act bijectively")
            for s in M.gen_indices:
                for a in range(M.order):
                    if row[M.mul(a, s)] != M.mul(row[a], row[s]):
                        raise GroupError("group element does not act as an automorphism")
        for kk, g in enumerate(K.gen_indices):
            col = K.gen_column(kk)
            rg = self.table[g]
            for k in range(K.order):
                rk = self.table[k]
                rkg = self.table[col[k]]
                if any(rkg[a] != rg[rk[a]] for a in range(M.order)):
                    raise GroupError("action is not compatible with multiplication")

    @classmethod
    def from_generator_images(cls, acting, module, gen_maps):
        """``gen_maps[k]`` lists the images of ``module.generators`` under
        the ``k``-th generator of ``acting``."""
        if len(gen_maps) != len(acting.generators):
            raise GroupError("need one automorphism per acting generator")
        autos = []
        for imgs in gen_maps:
            try:
                h = GroupHom(module, module, imgs)
            except HomomorphismError:
                raise GroupError("generator does not act by an endomorphism") from None
            if not h.is_injective():
                raise GroupError("generator does not act bijectively")
            autos.append(h.map)
        K = acting
        table = [None] * K.order
        table[K.e] = list(range(module.order))
        for y in K._bfs[1:]:
            p, k = K._tree[y]
            table[y] = [autos[k][a] for a in table[p]]
        return cls(acting, module, table)

    @classmethod
    def trivial(cls, acting, module):
        return cls(acting, module, [list(range(module.order))] * acting.order)

    @classmethod
    def inversion(cls, acting, module):
        """Every generator of ``acting`` inverts the (abelian) module."""
        if not module.is_abelian:
            raise GroupError("inversion action needs an abelian module")
        maps = [[~x for x in module.generators] for _ in acting.generators]
        return cls.from_generator_images(acting, module, maps)

    @classmethod
    def power(cls, acting, module, k):
        """Every generator of ``acting`` acts by ``a -> a^k`` (abelian module)."""
        if not module.is_abelian:
            raise GroupError("power action needs an abelian module")
        maps = [[module.elements[module.power(module.index(x), k)] for x in module.generators]
                for _ in acting.generators]
        return cls.from_generator_images(acting, module, maps)

    @classmethod
    def componentwise(cls, base, n):
        """Diagonal action on ``module = base.module ** n`` (a ProductElement power)."""
        M = direct_product(*([base.module] * n))
        K = base.acting
        bm = base.module
        table = []
        for k in range(K.order):
            row = base.table[k]
            table.append([M.index(ProductElement(bm.elements[row[bm.index(c)]] for c in x))
                          for x in M.elements])
        return cls(K, M, table)

    def pullback(self, hom):
        """The action of ``hom.source`` through ``hom`` into ``acting``."""
        if hom.target is not self.acting:
            raise GroupError("homomorphism must land in the acting group")
        return GroupAction(hom.source, self.module, [self.table[hom.map[k]] for k in range(hom.source.order)])

    def act(self, a, k):
        """``a^k`` on indices."""
        return self.table[k][a]

    def is_trivial(self):
        ident = list(range(self.module.order))
        return all(row == ident for row in self.table)

    @staticmethod
    def all_actions(acting, module):
        """Every action of ``acting`` on ``module`` (homomorphisms into Aut)."""
        autos = [h for h in enumerate_homs(module, module) if h.is_injective()]
        perms = [Perm(h.map) for h in autos]
        aut = FiniteGroup(perms)
        out = []
        for h in enumerate_homs(acting, aut):
            table = [list(aut.elements[h.map[k]].images) for k in range(acting.order)]
            out.append(GroupAction(acting, module, table))
        return out


# ---------------------------------------------------------------------------
# constructions
# ---------------------------------------------------------------------------


def close(generators, cap=None, name=None):
    return FiniteGroup(generators, cap=cap, name=name)


def cyclic(n):
    if n < 1:
        raise GroupError("cyclic group needs n >= 1")
    if n == 1:
        return FiniteGroup([Perm.identity(1)], name="C1")
    return FiniteGroup([Perm(list(range(1, n)) + [0])], name=f"C{n}")


def symmetric(n):
    if n < 1:
        raise GroupError("symmetric group needs n >= 1")
    if n == 1:
        return FiniteGroup([Perm.identity(1)], name="S1")
    if n == 2:
        return FiniteGroup([Perm([1, 0])], name="S2")
    return FiniteGroup([Perm.from_cycles([(1, 2)], n), Perm(list(range(1, n)) + [0])], name=f"S{n}")


def alternating(n):
    if n < 1:
        raise GroupError("alternating group needs n >= 1")
    if n < 3:
        return FiniteGroup([Perm.identity(n)], name=f"A{n}")
    gens = [Perm.from_cycles([(1, 2, k)], n) for k in range(3, n + 1)]
    return FiniteGroup(gens, name=f"A{n}")


def dihedral(n):
    """Dihedral group of order ``2n``."""
    if n < 1:
        raise GroupError("dihedral group needs n >= 1")
    if n == 1:
        return FiniteGroup([Perm([1, 0])], name="D1")
    if n == 2:
        return FiniteGroup([Perm([1, 0, 2, 3]), Perm([0, 1, 3, 2])], name="D2")
    rot = Perm(list(range(1, n)) + [0])
    ref = Perm([(n - i) % n for i in range(n)])
    return FiniteGroup([rot, ref], name=f"D{n}")


def quaternion():
    """Q8 in its regular representation on 8 points."""
    i = Perm.from_cycles([(1, 2, 3, 4), (5, 6, 7, 8)])
    j = Perm.from_cycles([(1, 5, 3, 7), (2, 8, 4, 6)])
    return FiniteGroup([i, j], name="Q8")


def direct_product(*groups, cap=None):
    if not groups:
        raise GroupError("direct product of nothing")
    ids = [g.identity for g in groups]
    gens = []
    for pos, g in enumerate(groups):
        for s in g.generators:
            parts = list(ids)
            parts[pos] = s
            gens.append(ProductElement(parts))
    name = "x".join(g.name or "?" for g in groups)
    return FiniteGroup(gens, cap=cap, name=name)


def projection(product_group, factor, pos):
    """The coordinate map of a :func:`direct_product` onto ``factor``."""
    return GroupHom(product_group, factor, [s[pos] for s in product_group.generators])


@dataclass(frozen=True, eq=False)
class SDElement:
    """``(a, b)`` in ``A ⋊ B`` with ``(a1,b1)(a2,b2) = (a1^b2 a2, b1 b2)``."""

    a: int
    b: int
    sd: "SemidirectProduct" = field(compare=False, repr=False)

    def __eq__(self, other):
        return isinstance(other, SDElement) and self.a == other.a and self.b == other.b

    def __hash__(self):
        return hash((self.a, self.b))

    def __mul__(self, other):
        sd = self.sd
        A, B = sd.A, sd.B
        a = A.mul(sd.action.table[other.b][self.a], other.a)
        return SDElement(a, B.mul(self.b, other.b), sd)

    def __invert__(self):
        sd = self.sd
        binv = sd.B.inv(self.b)
        return SDElement(sd.A.inv(sd.action.table[binv][self.a]), binv, sd)

    def sort_key(self):
        return (self.a, self.b)

    def __str__(self):
        return f"[{self.sd.A.elements[self.a]}; {self.sd.B.elements[self.b]}]"


class SemidirectProduct:
    """``A ⋊ B`` with projection ``alpha``, section ``beta`` and embedding of ``A``."""

    def __init__(self, A, B, action, cap=None):
        if action.acting is not B or action.module is not A:
            raise GroupError("action must be of B on A")
        self.A, self.B, self.action = A, B, action
        gens = [SDElement(a, B.e, self) for a in A.gen_indices]
        gens += [SDElement(A.e, b, self) for b in B.gen_indices]
        self.group = FiniteGroup(gens, cap=cap, name=f"{A.name or 'A'}:{B.name or 'B'}")
        W = self.group
        self.alpha = GroupHom(W, B, [B.elements[s.b] for s in W.generators])
        self.beta = GroupHom(B, W, [SDElement(A.e, B.index(s), self) for s in B.generators])
        self.embed = GroupHom(A, W, [SDElement(A.index(s), B.e, self) for s in A.generators])
        self.kernel = self.alpha.kernel()

    def element(self, a, b):
        """The element with kernel part ``a`` and top part ``b`` (group elements)."""
        return SDElement(self.A.index(a), self.B.index(b), self)


def semidirect_product(A, B, action, cap=None):
    return SemidirectProduct(A, B, action, cap=cap)


def quotient(G, N):
    """``G/N`` as a permutation group on the right cosets, plus the natural map."""
    if N.parent is not G:
        raise GroupError("N must be a subgroup of G")
    if not N.is_normal():
        raise GroupError("N is not normal")
    coset_of = {}
    reps = []
    for x in range(G.order):
        if x in coset_of:
            continue
        c = len(reps)
        reps.append(x)
        for h in N.members:
            coset_of[G.mul(h, x)] = c
    perms = [Perm([coset_of[G.mul(r, s)] for r in reps]) for s in G.gen_indices]
    Q = FiniteGroup(perms, cap=max(G.cap, len(reps)))
    nat = GroupHom(G, Q, perms)
    return Q, nat


# ---------------------------------------------------------------------------
# lattice operations
# ---------------------------------------------------------------------------


def normal_core(H, G=None):
    """Intersection of all conjugates of ``H``: the largest normal subgroup inside it."""
    if G is not None and H.parent is not G:
        raise GroupError("H is not a subgroup of G")
    G = H.parent
    core = set(H.members)
    for s in range(G.order):
        core &= {G.conj(x, s) for x in H.members}
    return Subgroup(G, frozenset(core))


def product_set(H, K):
    """The set ``{hk}`` as parent indices."""
    _same_parent(H, K)
    G = H.parent
    return frozenset(G.mul(h, k) for h in H.members for k in K.members)


def product_subgroup(H, K):
    """``HK`` as a subgroup; raises unless it is one."""
    hk = product_set(H, K)
    if not (H.is_normal() or K.is_normal()):
        if hk != product_set(K, H):
            raise GroupError("HK is not a subgroup")
    return Subgroup(H.parent, hk)


def commutator_subgroup_pair(H, K):
    _same_parent(H, K)
    if not (H.is_normal() or K.is_normal()):
        raise GroupError("one of H, K must be normal")
    G = H.parent
    comms = {G.comm(h, k) for h in H.members for k in K.members}
    return Subgroup(G, G.closure(comms))


def enumerate_homs(source, target, surjective_only=False):
    """Every homomorphism ``source -> target``, in lexicographic order of the
    generator images."""
    orders = [source.element_order(i) for i in source.gen_indices]
    cands = [[t for t in range(target.order) if o % target.element_order(t) == 0] for o in orders]
    out = []
    for imgs in product(*cands):
        if surjective_only and len(target.closure(imgs)) != target.order:
            continue
        m = _extend(source, target, imgs)
        if m is None:
            continue
        h = GroupHom.__new__(GroupHom)
        h.source, h.target = source, target
        h.images = tuple(target.elements[i] for i in imgs)
        h.map = m
        out.append(h)
    return out


def find_isomorphism(G, H):
    """Some isomorphism ``G -> H`` found by search, or ``None``."""
    if G.order != H.order:
        return None
    if sorted(G.element_orders) != sorted(H.element_orders):
        return None
    orders = [G.element_order(i) for i in G.gen_indices]
    cands = [[t for t in range(H.order) if H.element_order(t) == o] for o in orders]
    for imgs in product(*cands):
        if len(H.closure(imgs)) != H.order:
            continue
        m = _extend(G, H, imgs)
        if m is not None and len(set(m)) == H.order:
            return GroupHom(G, H, [H.elements[i] for i in imgs], check=False)
    return None


def is_isomorphic(G, H):
    return find_isomorphism(G, H) is not None


def subgroup_from_words(G, words):
    """Subgroup generated by words (lists of (generator index, ±1))."""
    idx = []
    for w in words:
        x = G.e
        for k, sgn in w:
            g = G.gen_indices[k]
            x = G.mul(x, g if sgn > 0 else G.inv(g))
        idx.append(x)
    return Subgroup(G, G.closure(idx))


def small_groups(max_order=12):
    """A catalogue of small groups (all orders up to 8, several up to 12)."""
    C = cyclic
    out = [C(1), C(2), C(3), C(4), direct_product(C(2), C(2)), C(5), C(6), symmetric(3),
           C(7), C(8), direct_product(C(2), C(4)), direct_product(C(2), C(2), C(2)),
           dihedral(4), quaternion(), C(9), direct_product(C(3), C(3)), C(10), dihedral(5),
           C(11), C(12), direct_product(C(2), C(6)), alternating(4), dihedral(6)]
    c3, c4 = C(3), C(4)
    dic = SemidirectProduct(c3, c4, GroupAction.inversion(c4, c3)).group
    dic.name = "C3:C4"
    out.append(dic)
    return [g for g in out if g.order <= max_order]


def character_degrees(G, seed=12345):
    """Irreducible character degrees from the class algebra.

    The class sums act on the centre of the group algebra; a generic
    combination of their matrices has the central characters
    ``ω_j = |C_j| χ(g_j) / χ(1)`` as eigenvectors, and
    ``χ(1)^2 = |G| / Σ_j |ω_j|^2 / |C_j|``.
    """
    classes = G.conjugacy_classes()
    classes.sort(key=lambda c: (G.e not in c, min(c)))
    k = len(classes)
    where = np.empty(G.order, dtype=np.int64)
    for i, c in enumerate(classes):
        where[list(c)] = i
    T = G.table if G.has_table else None
    # coef[i][j][l] = #{x in C_i : x^-1 z_l in C_j}
    coef = np.zeros((k, k, k))
    for l, c in enumerate(classes):
        z = min(c)
        for i, ci in enumerate(classes):
            for x in ci:
                y = T[G.inv(x), z] if T is not None else G.mul(G.inv(x), z)
                coef[i, where[y], l] += 1
    rng = np.random.default_rng(seed)
    weights = rng.standard_normal(k)
    # (M_j)[l, i]: coefficient of class l in C_i * C_j
    M = np.einsum("j,ijl->li", weights, coef)
    vals, vecs = np.linalg.eig(M.T)
    sizes = np.array([len(c) for c in classes], dtype=float)
    degrees = []
    for t in range(k):
        w = vecs[:, t] / vecs[0, t]
        d2 = G.order / np.sum(np.abs(w) ** 2 / sizes)
        degrees.append(int(round(float(np.sqrt(d2.real)))))
    degrees.sort()
    if sum(d * d for d in degrees) != G.order:
        raise GroupError("character degree computation did not converge")
    return degrees
