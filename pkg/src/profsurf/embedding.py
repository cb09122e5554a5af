"""Finite split embedding problems for surface groups.

A problem is a surjection ``mu`` from the genus-``g`` surface group onto
``B`` together with a split epimorphism ``alpha: W -> B``.  A weak solution
lifts ``mu`` through ``alpha``; a proper solution is a surjective one.
"""
from __future__ import annotations

import math
import random
from dataclasses import dataclass, field

from .fingroup import (CapExceeded, FiniteGroup, GroupAction, GroupError, GroupHom, SDElement,
                       SemidirectProduct, Subgroup, direct_product, product_set, small_groups)
from .surface import SurfaceAssignment, collect_pair_to_front, restore_pair

STATE_CAP = 2_000_000


class PreconditionError(GroupError):
    pass


class CompletionFailure(RuntimeError):
    """The pigeonhole completion failed although the genus bound holds."""


@dataclass
class FSEP:
    mu: SurfaceAssignment
    group: FiniteGroup
    alpha: GroupHom
    beta: GroupHom
    A: FiniteGroup = None
    action: GroupAction = None
    sd: SemidirectProduct = None

    def __post_init__(self):
        if self.alpha.target is not self.mu.target or self.alpha.source is not self.group:
            raise GroupError("alpha must map the group onto the target of mu")
        if not self.mu.is_surjective():
            raise GroupError("mu is not surjective")
        if not self.alpha.is_surjective():
            raise GroupError("alpha is not surjective")
        B = self.B
        if any(self.alpha.map[self.beta.map[b]] != b for b in range(B.order)):
            raise GroupError("beta is not a section of alpha")
        self.kernel = self.alpha.kernel()

    @property
    def genus(self):
        return self.mu.genus

    @property
    def B(self):
        return self.mu.target

    def fibers(self):
        """``fibers[b]`` lists the group indices over ``b`` (sorted)."""
        out = [[] for _ in range(self.B.order)]
        for w, b in enumerate(self.alpha.map):
            out[b].append(w)
        return out

    def describe(self):
        return {
            "genus": self.genus,
            "B_order": self.B.order,
            "kernel_order": self.kernel.order,
            "group_order": self.group.order,
            "mu": [str(x) for x in self.mu.images],
        }


def split_problem(mu, A, action, cap=None):
    """The problem ``(mu, alpha: A ⋊ B -> B)`` for an action of ``B = mu.target`` on ``A``."""
    if action.acting is not mu.target or action.module is not A:
        raise GroupError("the action must be of mu's target on A")
    sd = SemidirectProduct(A, mu.target, action, cap=cap)
    return FSEP(mu, sd.group, sd.alpha, sd.beta, A=A, action=action, sd=sd)


@dataclass
class Solution:
    psi: SurfaceAssignment
    kind: str  # "weak" or "proper"
    path: str = "direct"
    details: dict = field(default_factory=dict)


def classify(e, psi):
    """Check a candidate against the problem; returns ``"weak"`` or ``"proper"``."""
    if psi.target is not e.group or psi.genus != e.genus:
        raise GroupError("candidate lives in the wrong group")
    if psi.relator_value() != e.group.e:
        raise GroupError("candidate violates the surface relator")
    if any(e.alpha.map[w] != b for w, b in zip(psi.idx, e.mu.idx)):
        raise GroupError("alpha∘psi differs from mu")
    return "proper" if len(e.group.closure(psi.idx)) == e.group.order else "weak"


def weak_solution(e):
    psi = e.mu.then(e.beta)
    return Solution(psi, classify(e, psi), path="section")


# ---------------------------------------------------------------------------
# brute-force oracle
# ---------------------------------------------------------------------------


class _Spans:
    """Interned subgroups with cached joins."""

    def __init__(self, G, start=()):
        self.G = G
        self.members = []
        self.gens = []
        self.ids = {}
        self.joins = {}
        self.root = self.intern(G.closure(start), tuple(sorted(set(start))))

    def intern(self, members, gens):
        sid = self.ids.get(members)
        if sid is None:
            sid = self.ids[members] = len(self.members)
            self.members.append(members)
            self.gens.append(gens)
        return sid

    def join(self, sid, a, b):
        key = (sid, a, b)
        out = self.joins.get(key)
        if out is None:
            mem = self.members[sid]
            if a in mem and b in mem:
                out = sid
            else:
                gens = self.gens[sid] + (a, b)
                out = self.intern(self.G.closure(gens), gens)
            self.joins[key] = out
        return out

    def is_full(self, sid):
        return len(self.members[sid]) == self.G.order


def brute_solve(e, want="existence", cap=STATE_CAP):
    """Exhaustive search over the alpha-fibres of the generator images.

    ``want`` is ``"existence"`` (first proper solution or ``None``),
    ``"count"`` (number of proper solutions) or ``"all"`` (list of them).
    Failed search states ``(pair, partial relator product, span so far)`` are
    remembered, which keeps the exhaustion exact but fast.
    """
    W = e.group
    T = W.cayley
    inv = W.inv_list
    fib = e.fibers()
    g = e.genus
    fx = [fib[e.mu.idx[2 * i]] for i in range(g)]
    fy = [fib[e.mu.idx[2 * i + 1]] for i in range(g)]
    last = {}
    for a in fx[-1]:
        for b in fy[-1]:
            last.setdefault(T[T[inv[a]][inv[b]]][T[a][b]], []).append((a, b))
    spans = _Spans(W)
    states = [0]

    def tick():
        states[0] += 1
        if states[0] > cap:
            raise CapExceeded(f"search visited more than {cap} states")

    if want == "existence":
        dead = set()

        def find(k, prefix, sid):
            if k == g - 1:
                for a, b in last.get(inv[prefix], ()):
                    if spans.is_full(spans.join(sid, a, b)):
                        return (a, b)
                return None
            key = (k, prefix, sid)
            if key in dead:
                return None
            tick()
            for a in fx[k]:
                for b in fy[k]:
                    c = T[T[inv[a]][inv[b]]][T[a][b]]
                    rest = find(k + 1, T[prefix][c], spans.join(sid, a, b))
                    if rest is not None:
                        return (a, b) + rest
            dead.add(key)
            return None

        tup = find(0, W.e, spans.root)
        if tup is None:
            return None
        psi = SurfaceAssignment.from_indices(W, tup, check=False)
        return Solution(psi, classify(e, psi), path="brute")

    if want == "count":
        memo = {}

        def count(k, prefix, sid):
            if k == g - 1:
                return sum(1 for a, b in last.get(inv[prefix], ())
                           if spans.is_full(spans.join(sid, a, b)))
            key = (k, prefix, sid)
            got = memo.get(key)
            if got is None:
                tick()
                got = 0
                for a in fx[k]:
                    for b in fy[k]:
                        c = T[T[inv[a]][inv[b]]][T[a][b]]
                        got += count(k + 1, T[prefix][c], spans.join(sid, a, b))
                memo[key] = got
            return got

        return count(0, W.e, spans.root)

    if want == "all":
        out = []

        def walk(k, prefix, sid, acc):
            if k == g - 1:
                for a, b in last.get(inv[prefix], ()):
                    if spans.is_full(spans.join(sid, a, b)):
                        tick()
                        out.append(acc + (a, b))
                return
            for a in fx[k]:
                for b in fy[k]:
                    tick()
                    c = T[T[inv[a]][inv[b]]][T[a][b]]
                    walk(k + 1, T[prefix][c], spans.join(sid, a, b), acc + (a, b))

        walk(0, W.e, spans.root, ())
        return [Solution(SurfaceAssignment.from_indices(W, t, check=False), "proper", path="brute")
                for t in out]
    raise ValueError(f"unknown mode {want!r}")


# ---------------------------------------------------------------------------
# pigeonhole solver
# ---------------------------------------------------------------------------


def genus_bound(a_order):
    return 2 * a_order ** 3


def sharper_bound(s, b_order, a_order):
    return s * b_order ** 2 * (a_order + 1)


def block_size(a_order, b_order):
    """Number of equal-image pairs the solver gathers: ``ceil(2|A|^2 / |B|)``."""
    return -(-2 * a_order ** 2 // b_order)


def pigeonhole_classes(asg):
    """Pair positions (1-based) grouped by their pair of images."""
    classes = {}
    for i in range(1, asg.genus + 1):
        classes.setdefault(asg.pair(i), []).append(i)
    return classes


def gather_block(asg, positions):
    """Move the pairs at ``positions`` (increasing) to the front, in order.

    Returns the new assignment and the list of ``(j, start)`` moves applied.
    """
    moves = []
    for start, j in enumerate(positions, start=1):
        if j != start:
            asg = collect_pair_to_front(asg, j, start=start)
            moves.append((j, start))
    return asg, moves


def _complete_block(e, asg, r, cap):
    """Choose new images for the first ``r`` pairs inside their alpha-fibres so
    the tuple satisfies the relator and generates the whole group.

    Exact breadth-first search over (partial relator product, span) states.
    """
    W = e.group
    T = W.cayley
    inv = W.inv_list
    fib = e.fibers()
    tail = asg.idx[2 * r:]
    tail_prod = W.e
    for i in range(0, len(tail), 2):
        tail_prod = T[tail_prod][W.comm(tail[i], tail[i + 1])]
    goal = inv[tail_prod]
    spans = _Spans(W, tail)
    choices = []
    for i in range(r):
        fa = fib[e.alpha.map[asg.idx[2 * i]]]
        fb = fib[e.alpha.map[asg.idx[2 * i + 1]]]
        choices.append([(a, b, T[T[inv[a]][inv[b]]][T[a][b]]) for a in fa for b in fb])
    layer = {(W.e, spans.root): None}
    history = []
    visited = 0
    for i in range(r):
        nxt = {}
        for state in layer:
            prefix, sid = state
            for a, b, c in choices[i]:
                key = (T[prefix][c], spans.join(sid, a, b))
                if key not in nxt:
                    nxt[key] = (state, a, b)
            visited += len(choices[i])
            if visited > cap:
                raise CapExceeded(f"block completion exceeded {cap} steps")
        history.append(nxt)
        layer = nxt
    final = next((s for s in layer if s[0] == goal and spans.is_full(s[1])), None)
    if final is None:
        return None
    picks = []
    state = final
    for i in range(r - 1, -1, -1):
        prev, a, b = history[i][state]
        picks.append((a, b))
        state = prev
    block = [x for pair in reversed(picks) for x in pair]
    return SurfaceAssignment.from_indices(W, block + list(tail), check=False)


def pigeonhole_solve(e, enforce_bound=True, fallback=True, cap=STATE_CAP):
    """Solve by gathering equal-image pairs to the front and completing on that block.

    Starting from the weak solution ``beta∘mu``, the ``g`` pairs are sorted
    into classes by their images; the largest class (ties: least image pair)
    supplies ``r = ceil(2|A|^2/|B|)`` pairs which are moved to the front by
    relator-preserving generator changes.  New images for the block are then
    searched inside the alpha-fibres, and the moves are undone to express the
    result on the original generators.  Without a block solution the exhaustive
    oracle is used when ``fallback`` is set; ``Solution.path`` records which
    route produced the answer.  Returns ``None`` when no proper solution exists.
    """
    a_order = e.kernel.order
    b_order = e.B.order
    g = e.genus
    bound_met = g >= genus_bound(a_order)
    if enforce_bound and not bound_met:
        raise PreconditionError(f"genus {g} is below the bound {genus_bound(a_order)}")
    weak = weak_solution(e)
    if weak.kind == "proper":
        weak.path = "weak"
        return weak
    r = block_size(a_order, b_order)
    classes = pigeonhole_classes(weak.psi)
    key = min(classes, key=lambda k: (-len(classes[k]), k))
    positions = classes[key][:min(r, len(classes[key]))]
    if bound_met and len(positions) < r:
        raise CompletionFailure("pigeonhole class smaller than r despite the bound")
    moved, moves = gather_block(weak.psi, positions)
    if any(moved.pair(i) != key for i in range(1, len(positions) + 1)):
        raise CompletionFailure("gathered block lost its common images")
    details = {"r": r, "block": len(positions), "positions": positions, "moves": moves,
               "bound_met": bound_met}
    block = _complete_block(e, moved, len(positions), cap)
    if block is not None:
        psi = block
        for j, start in reversed(moves):
            psi = restore_pair(psi, j, start=start)
        kind = classify(e, psi)
        if kind != "proper":
            raise CompletionFailure("completed tuple is not proper")
        return Solution(psi, kind, path="pigeonhole", details=details)
    if not fallback:
        if bound_met:
            raise CompletionFailure("block completion failed above the genus bound")
        return None
    sol = brute_solve(e, "existence", cap=cap)
    if sol is not None:
        sol.path = "fallback-brute"
        sol.details = details
    return sol


# ---------------------------------------------------------------------------
# power problems and counting
# ---------------------------------------------------------------------------


@dataclass
class PowerProblem:
    problem: FSEP
    projections: list  # GroupHom C^n ⋊ B -> C ⋊ B, one per coordinate

    def coordinate_kernels(self):
        return [p.kernel() for p in self.projections]

    def kernel_law_holds(self):
        """``K_i K_j == ker alpha`` for every pair ``i != j``."""
        ks = self.coordinate_kernels()
        target = self.problem.kernel.members
        return all(product_set(ks[i], ks[j]) == target
                   for i in range(len(ks)) for j in range(len(ks)) if i != j)


def power_problem(e, n, cap=None):
    """The componentwise problem with kernel ``C^n`` built from a split problem with kernel ``C``."""
    if n < 1:
        raise GroupError("n must be positive")
    if e.action is None:
        raise GroupError("power problems need a split problem with an explicit action")
    act = GroupAction.componentwise(e.action, n)
    big = split_problem(e.mu, act.module, act, cap=cap)
    C = e.A
    projections = []
    for i in range(n):
        imgs = []
        for s in big.group.generators:
            c = act.module.elements[s.a][i]
            imgs.append(SDElement(C.index(c), s.b, e.sd))
        projections.append(GroupHom(big.group, e.group, imgs))
    return PowerProblem(big, projections)


def subgroup_count_bound(d, index):
    return math.factorial(index) ** d


def count_subgroups_up_to_index(G, k):
    """Subgroups of index at most ``k``, found as point stabilisers of
    transitive actions on ``m <= k`` points."""
    from .fingroup import enumerate_homs, symmetric
    found = set()
    for m in range(1, k + 1):
        S = symmetric(m)
        for h in enumerate_homs(G, S):
            gens = [S.elements[h.map[s]] for s in G.gen_indices]
            orbit = {0}
            frontier = [0]
            while frontier:
                frontier = [p(x) for x in frontier for p in gens if p(x) not in orbit and not orbit.add(p(x))]
            if len(orbit) != m:
                continue
            stab = frozenset(x for x in range(G.order) if S.elements[h.map[x]].images[0] == 0)
            found.add(stab)
    return len(found)


def normal_generator_count(e):
    """Least number of elements whose normal closure in the group is the kernel."""
    W = e.group
    K = sorted(e.kernel.members)
    if len(K) == 1:
        return 0
    from itertools import combinations
    for s in range(1, len(K) + 1):
        for combo in combinations(K, s):
            if len(W.normal_closure(combo)) == len(K):
                return s
    return len(K)


# ---------------------------------------------------------------------------
# experiments
# ---------------------------------------------------------------------------


def first_surjection_or_none(genus, B):
    from .surface import first_surjection
    return first_surjection(genus, B)


def lemma23_frontier(A, B, action, max_genus, min_genus=1, cap=STATE_CAP):
    """Solvability per genus below and above the ``2|A|^3`` bound."""
    rows = []
    s = None
    for g in range(min_genus, max_genus + 1):
        mu = first_surjection_or_none(g, B)
        if mu is None:
            rows.append({"genus": g, "surjection": False})
            continue
        e = split_problem(mu, A, action)
        if s is None:
            s = normal_generator_count(e)
        sol = brute_solve(e, "existence", cap=cap)
        row = {
            "genus": g,
            "surjection": True,
            "bound": genus_bound(A.order),
            "bound_met": g >= genus_bound(A.order),
            "sharper_bound": sharper_bound(max(s, 1), B.order, A.order),
            "solvable": sol is not None,
        }
        if row["bound_met"]:
            ph = pigeonhole_solve(e, cap=cap)
            row["pigeonhole_path"] = ph.path if ph else None
        rows.append(row)
    return rows


def random_fsep(rng, max_order=12, max_genus=4, groups=None):
    """A random split problem with ``|A ⋊ B| <= max_order`` and genus ``<= max_genus``."""
    groups = groups or small_groups(max_order)
    pairs = [(a, b) for a in groups for b in groups if a.order * b.order <= max_order]
    while True:
        A, B = rng.choice(pairs)
        g = rng.randint(1, max_genus)
        mu = random_surjection(rng, g, B)
        if mu is None:
            continue
        actions = _actions(B, A)
        action = rng.choice(actions)
        return split_problem(mu, A, action)


_ACTIONS = {}


def _actions(B, A):
    key = (id(B), id(A))
    if key not in _ACTIONS:
        _ACTIONS[key] = GroupAction.all_actions(B, A)
    return _ACTIONS[key]


def random_surjection(rng, genus, B, tries=200):
    n = B.order
    for _ in range(tries):
        idx = [rng.randrange(n) for _ in range(2 * genus - 1)]
        prefix = B.e
        for i in range(genus - 1):
            prefix = B.mul(prefix, B.comm(idx[2 * i], idx[2 * i + 1]))
        a = idx[-1]
        need = B.inv(prefix)
        ys = [b for b in range(n) if B.comm(a, b) == need]
        if not ys:
            continue
        idx.append(rng.choice(ys))
        if len(B.closure(idx)) == n:
            return SurfaceAssignment.from_indices(B, idx)
    return None
