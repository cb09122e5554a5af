"""Todd–Coxeter coset enumeration and Reidemeister–Schreier rewriting for
surface presentations, plus abelianization through Smith normal form."""
from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field

from .fingroup import CapExceeded, GroupError, Perm
from .surface import SurfacePresentation, format_word, free_reduce, inverse

COSET_CAP = 100_000


def _col(letter):
    k = abs(letter) - 1
    return 2 * k if letter > 0 else 2 * k + 1


class _Enumerator:
    """HLT enumeration with union-find coincidence processing."""

    def __init__(self, ngens, max_cosets):
        self.ncols = 2 * ngens
        self.table = [[None] * self.ncols]
        self.p = [0]
        self.max_cosets = max_cosets

    def rep(self, c):
        p = self.p
        root = c
        while p[root] != root:
            root = p[root]
        while p[c] != root:
            p[c], c = root, p[c]
        return root

    def define(self, c, x):
        d = len(self.table)
        if d >= self.max_cosets:
            raise CapExceeded(f"coset enumeration did not close within {self.max_cosets} cosets")
        self.table.append([None] * self.ncols)
        self.p.append(d)
        self.table[c][x] = d
        self.table[d][x ^ 1] = c

    def merge(self, k, l, queue):
        k, l = self.rep(k), self.rep(l)
        if k == l:
            return
        if l < k:
            k, l = l, k
        self.p[l] = k
        queue.append(l)

    def coincidence(self, a, b):
        t = self.table
        queue = []
        self.merge(a, b, queue)
        i = 0
        while i < len(queue):
            e = queue[i]
            i += 1
            for x in range(self.ncols):
                f = t[e][x]
                if f is None:
                    continue
                t[f][x ^ 1] = None
                e1, f1 = self.rep(e), self.rep(f)
                if t[e1][x] is not None:
                    self.merge(f1, t[e1][x], queue)
                elif t[f1][x ^ 1] is not None:
                    self.merge(e1, t[f1][x ^ 1], queue)
                else:
                    t[e1][x] = f1
                    t[f1][x ^ 1] = e1

    def scan_and_fill(self, c, word):
        t = self.table
        f, b = c, c
        i, j = 0, len(word) - 1
        while True:
            while i <= j and t[f][word[i]] is not None:
                f = t[f][word[i]]
                i += 1
            if i > j:
                if f != b:
                    self.coincidence(f, b)
                return
            while j >= i and t[b][word[j] ^ 1] is not None:
                b = t[b][word[j] ^ 1]
                j -= 1
            if j < i:
                self.coincidence(f, b)
                return
            if i == j:
                t[f][word[i]] = b
                t[b][word[i] ^ 1] = f
                return
            self.define(f, word[i])

    def run(self, relators, subgroup_words):
        rels = [[_col(a) for a in r] for r in relators if r]
        for w in subgroup_words:
            if w:
                self.scan_and_fill(0, [_col(a) for a in w])
        c = 0
        while c < len(self.table):
            if self.p[c] == c:
                for r in rels:
                    if self.p[c] != c:
                        break
                    self.scan_and_fill(c, r)
                if self.p[c] == c:
                    for x in range(self.ncols):
                        if self.table[c][x] is None:
                            self.define(c, x)
            c += 1
        live = [c for c in range(len(self.table)) if self.p[c] == c]
        return {c: self.table[c] for c in live}


def _standardize(rows, ncols, start=0):
    """Renumber cosets in breadth-first order of first appearance."""
    number = {start: 0}
    order = [start]
    head = 0
    while head < len(order):
        c = order[head]
        head += 1
        for x in range(ncols):
            d = rows[c][x]
            if d is None:
                raise GroupError("coset table is not closed")
            if d not in number:
                number[d] = len(order)
                order.append(d)
    return [[number[rows[c][x]] for x in range(ncols)] for c in order]


@dataclass
class CosetTable:
    """Closed coset table; ``rows[c][2k]`` is ``c·x_k`` and ``rows[c][2k+1]`` is ``c·x_k^-1``."""

    genus: int
    rows: list
    status: str = "closed"

    @property
    def index(self):
        return len(self.rows)

    @property
    def ngens(self):
        return 2 * self.genus

    def act(self, c, letter):
        return self.rows[c][_col(letter)]

    def trace(self, word, c=0):
        for a in word:
            c = self.act(c, a)
        return c

    def generator_perms(self):
        """The permutation action of each surface generator on the cosets."""
        return [Perm([row[2 * k] for row in self.rows]) for k in range(self.ngens)]

    def spanning_tree(self):
        """Breadth-first transversal: ``parent[c] = (coset, column)`` and representative words."""
        parent = {0: None}
        reps = {0: ()}
        order = [0]
        head = 0
        while head < len(order):
            c = order[head]
            head += 1
            for x in range(2 * self.ngens):
                d = self.rows[c][x]
                if d not in parent:
                    parent[d] = (c, x)
                    letter = x // 2 + 1 if x % 2 == 0 else -(x // 2 + 1)
                    reps[d] = reps[c] + (letter,)
                    order.append(d)
        return parent, reps

    def check(self):
        """Every entry defined, inverse columns consistent, relator closes at every coset."""
        from .surface import relator
        rel = relator(self.genus)
        for c, row in enumerate(self.rows):
            for x, d in enumerate(row):
                if self.rows[d][x ^ 1] != c:
                    return False
            if self.trace(rel, c) != c:
                return False
        return True

    def to_csv(self):
        labels = SurfacePresentation(self.genus).labels
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        head = ["coset"]
        for name in labels:
            head += [name, f"{name}^-1"]
        w.writerow(head)
        for c, row in enumerate(self.rows):
            w.writerow([c + 1] + [d + 1 for d in row])
        return buf.getvalue()


def todd_coxeter(pres, subgroup_words=None, by_hom=None, max_cosets=COSET_CAP):
    """Enumerate the cosets of a finite-index subgroup of the surface group.

    Give the subgroup either by generating ``subgroup_words`` or as
    ``by_hom=(assignment, K)``: the preimage of ``K`` under the assignment.
    """
    if isinstance(pres, int):
        pres = SurfacePresentation(pres)
    if (subgroup_words is None) == (by_hom is None):
        raise GroupError("give exactly one of subgroup_words and by_hom")
    if by_hom is not None:
        return _table_from_hom(pres, *by_hom, max_cosets=max_cosets)
    en = _Enumerator(pres.ngens, max_cosets)
    rows = en.run([pres.relator], [free_reduce(w) for w in subgroup_words])
    return CosetTable(pres.genus, _standardize(rows, 2 * pres.ngens))


def _table_from_hom(pres, asg, K, max_cosets=COSET_CAP):
    """Cosets of the preimage of ``K``: the orbit of ``K`` under right multiplication."""
    if asg.genus != pres.genus:
        raise GroupError("assignment genus does not match the presentation")
    G = asg.target
    members = frozenset(K.members) & asg.image.members
    start = members
    number = {start: 0}
    cosets = [start]
    moves = []
    for k in range(pres.ngens):
        g = asg.idx[k]
        moves += [g, G.inv(g)]
    rows = []
    head = 0
    while head < len(cosets):
        c = cosets[head]
        head += 1
        row = []
        for g in moves:
            d = frozenset(G.mul(x, g) for x in c)
            if d not in number:
                if len(cosets) >= max_cosets:
                    raise CapExceeded(f"more than {max_cosets} cosets")
                number[d] = len(cosets)
                cosets.append(d)
            row.append(number[d])
        rows.append(row)
    return CosetTable(pres.genus, _standardize(dict(enumerate(rows)), 2 * pres.ngens))


def kernel_table(asg, **kw):
    return todd_coxeter(asg.genus, by_hom=(asg, asg.target.trivial_subgroup()), **kw)


@dataclass
class SubgroupPresentation:
    """Schreier generators (as words in the ambient generators) and rewritten relators."""

    genus: int
    index: int
    generators: list  # words in the surface generators
    relators: list  # words in the Schreier generators (letters 1..len(generators))
    schreier_index: dict = field(default_factory=dict)  # (coset, gen) -> letter or None

    @property
    def ngens(self):
        return len(self.generators)

    @property
    def nrelators(self):
        return len(self.relators)

    @property
    def deficiency(self):
        return self.ngens - self.nrelators

    @property
    def predicted_genus(self):
        return self.index * (self.genus - 1) + 1

    def text(self):
        amb = SurfacePresentation(self.genus).labels
        names = [f"s{i + 1}" for i in range(self.ngens)]
        lines = [f"{names[i]} = {format_word(w, amb)}" for i, w in enumerate(self.generators)]
        lines += [f"r{i + 1}: {format_word(r, names)}" for i, r in enumerate(self.relators)]
        return "\n".join(lines)


def reidemeister_schreier(table):
    if table.status != "closed":
        raise GroupError("coset table is not closed")
    parent, reps = table.spanning_tree()
    sid = {}
    gens = []
    for c in range(table.index):
        for k in range(table.ngens):
            d = table.rows[c][2 * k]
            tree = parent.get(d) == (c, 2 * k) or parent.get(c) == (d, 2 * k + 1)
            if tree:
                sid[(c, k)] = None
            else:
                gens.append(free_reduce(reps[c] + (k + 1,) + inverse(reps[d])))
                sid[(c, k)] = len(gens)
    from .surface import relator
    rel = relator(table.genus)
    relators = []
    for c in range(table.index):
        cur = c
        out = []
        for a in rel:
            k = abs(a) - 1
            if a > 0:
                s = sid[(cur, k)]
                if s:
                    out.append(s)
                cur = table.rows[cur][2 * k]
            else:
                prev = table.rows[cur][2 * k + 1]
                s = sid[(prev, k)]
                if s:
                    out.append(-s)
                cur = prev
        if cur != c:
            raise GroupError("relator does not close in the coset table")
        relators.append(free_reduce(out))
    return SubgroupPresentation(table.genus, table.index, gens, relators, sid)


def rewrite(sp, table, word, coset=0):
    """Rewrite a word of the subgroup as a word in the Schreier generators."""
    cur = coset
    out = []
    for a in word:
        k = abs(a) - 1
        if a > 0:
            s = sp.schreier_index[(cur, k)]
            if s:
                out.append(s)
            cur = table.rows[cur][2 * k]
        else:
            prev = table.rows[cur][2 * k + 1]
            s = sp.schreier_index[(prev, k)]
            if s:
                out.append(-s)
            cur = prev
    if cur != coset:
        raise GroupError("word does not lie in the subgroup")
    return free_reduce(out)


# ---------------------------------------------------------------------------
# Smith normal form
# ---------------------------------------------------------------------------


def smith_diagonal(matrix):
    """Nonzero invariant factors ``d1 | d2 | ...`` of an integer matrix."""
    a = [list(map(int, row)) for row in matrix]
    m = len(a)
    n = len(a[0]) if m else 0
    diag = []
    t = 0
    while t < min(m, n):
        piv = None
        for i in range(t, m):
            for j in range(t, n):
                if a[i][j] and (piv is None or abs(a[i][j]) < abs(a[piv[0]][piv[1]])):
                    piv = (i, j)
        if piv is None:
            break
        i, j = piv
        a[t], a[i] = a[i], a[t]
        for row in a:
            row[t], row[j] = row[j], row[t]
        while True:
            changed = False
            for i in range(t + 1, m):
                q = a[i][t] // a[t][t]
                if q:
                    a[i] = [x - q * y for x, y in zip(a[i], a[t])]
                if a[i][t]:
                    a[t], a[i] = a[i], a[t]
                    changed = True
            for j in range(t + 1, n):
                q = a[t][j] // a[t][t]
                if q:
                    for row in a:
                        row[j] -= q * row[t]
                if a[t][j]:
                    for row in a:
                        row[t], row[j] = row[j], row[t]
                    changed = True
            if changed:
                continue
            bad = next(((i, j) for i in range(t + 1, m) for j in range(t + 1, n)
                        if a[i][j] % a[t][t]), None)
            if bad is None:
                break
            a[t] = [x + y for x, y in zip(a[t], a[bad[0]])]
        diag.append(abs(a[t][t]))
        t += 1
    return diag


@dataclass
class Abelianization:
    torsion: list
    free_rank: int

    @property
    def torsion_free(self):
        return not self.torsion


def relation_matrix(sp):
    rows = []
    for r in sp.relators:
        row = [0] * sp.ngens
        for a in r:
            row[abs(a) - 1] += 1 if a > 0 else -1
        rows.append(row)
    return rows


def abelianization_invariants(sp):
    mat = relation_matrix(sp)
    diag = smith_diagonal(mat) if mat and sp.ngens else []
    return Abelianization([d for d in diag if d > 1], sp.ngens - len(diag))
