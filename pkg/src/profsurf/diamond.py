"""Finite-level diamond criteria.

Condition checkers for the diamond lemma, the commutator witness used in its
proof, an obstruction verifier for twisted wreath products, and the numeric
helpers behind the genus growth argument.

The ``Π/𝒩`` quotient in the non-solvability argument is written ``F/𝒩`` in
the source text; ``F`` is not defined there and is read as ``Π``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from itertools import product

import numpy as np

from .fingroup import (CapExceeded, FiniteGroup, GroupAction, GroupError, GroupHom, Subgroup,
                       _extend, product_set, quotient)
from .surface import SurfaceAssignment, joint_image
from .wreath import TwistedWreath

NORMAL_CAP = 5000
SEARCH_CAP = 10 ** 6


class WitnessDefect(RuntimeError):
    """No commutator witness although the hypotheses hold."""


# ---------------------------------------------------------------------------
# instances
# ---------------------------------------------------------------------------


@dataclass
class DiamondInstance:
    G: FiniteGroup
    G0: Subgroup
    G1: Subgroup
    G2: Subgroup
    Abar: FiniteGroup = None
    action: GroupAction = None  # of G0 (as a group on its own elements) on Abar
    name: str = ""

    def __post_init__(self):
        for s in (self.G0, self.G1, self.G2):
            if s.parent is not self.G:
                raise GroupError("subgroups must live in G")
        if not (self.G1.is_normal() and self.G2.is_normal()):
            raise GroupError("G1 and G2 must be normal in G")
        if self.action is not None and self.action.module is not self.Abar:
            raise GroupError("the action must be on Abar")

    def wreath(self, cap=None):
        if self.Abar is None:
            raise GroupError("instance has no Abar")
        return TwistedWreath(self.Abar, self.G, self.G0, self.action, cap=cap)


def check_modL_conditions(d):
    """The three conditions on ``G = Π/L``: ``G1, G2 not in G0``,
    ``(G:G0) > 2`` and ``(G1 G0 : G0) > 2``."""
    g0 = d.G0.members
    eq4 = not d.G1.members <= g0 and not d.G2.members <= g0
    eq5 = d.G.order // d.G0.order > 2
    eq6 = len(product_set(d.G1, d.G0)) // d.G0.order > 2
    return {"eq4": eq4, "eq5": eq5, "eq6": eq6, "all": eq4 and eq5 and eq6}


@dataclass(frozen=True)
class Preimage:
    """The subgroup of the surface group pulled back from ``subgroup`` of the target."""

    assignment: SurfaceAssignment
    subgroup: Subgroup

    @classmethod
    def kernel(cls, asg):
        return cls(asg, asg.target.trivial_subgroup())

    @classmethod
    def whole(cls, asg):
        return cls(asg, asg.target.whole())


@dataclass
class Ambient:
    """Subgroups of the genus-``g`` surface group given as preimages.

    ``mu`` fixes ``L = ker mu`` and ``G = Π/L``; ``mu1`` (optional) is an
    assignment of the whole surface group whose restriction to ``N`` is the
    map ``N -> G1`` of the original problem.
    """

    mu: SurfaceAssignment
    N: Preimage
    N1: Preimage
    N2: Preimage
    mu1: SurfaceAssignment = None

    def assignments(self):
        out = []
        for a in (self.mu, self.N.assignment, self.N1.assignment, self.N2.assignment, self.mu1):
            if a is not None and all(a is not b for b in out):
                out.append(a)
        return out

    def joint(self, cap=None):
        asgs = self.assignments()
        J = joint_image(asgs, cap=cap)
        pos = {id(a): i for i, a in enumerate(asgs)}
        return J, pos

    def in_joint(self, J, pos, pre):
        p = J.projections[pos[id(pre.assignment)]]
        return Subgroup(J.group, frozenset(q for q in range(J.group.order) if p.map[q] in pre.subgroup.members))


def check_index_conditions(amb, cap=None):
    """Conditions (i)-(iv) on ``L``, evaluated in the joint finite quotient.

    All subgroups are preimages, so they contain the kernel of the joint map
    and every index can be read off in the joint image ``Q``.
    """
    J, pos = amb.joint(cap=cap)
    Q = J.group
    mu_proj = J.projections[pos[id(amb.mu)]]
    L = mu_proj.kernel()
    N, N1, N2 = (amb.in_joint(J, pos, p) for p in (amb.N, amb.N1, amb.N2))
    for s, label in ((N1, "N1"), (N2, "N2")):
        if not s.is_normal():
            raise GroupError(f"{label} is not normal")
    NL = Subgroup(Q, product_set(N, L))
    n1nl = len(product_set(N1, NL))
    n2nl = len(product_set(N2, NL))
    idx = {
        "N1NL:NL": n1nl // NL.order,
        "N2NL:NL": n2nl // NL.order,
        "Pi:NL": Q.order // NL.order,
    }
    if amb.mu1 is not None:
        k1 = J.projections[pos[id(amb.mu1)]].kernel()
        cond1 = (L.members & N.members) <= k1.members
    else:
        cond1 = None
    conds = {
        "i": cond1,
        "ii": idx["N1NL:NL"] >= 3,
        "iii": idx["N2NL:NL"] >= 2,
        "iv": idx["Pi:NL"] >= 3,
    }
    ok = all(v for v in conds.values() if v is not None)
    G = amb.mu.target
    mod_L = DiamondInstance(G, mu_proj.image_of(N), mu_proj.image_of(N1), mu_proj.image_of(N2))
    return {"joint_order": Q.order, "indices": idx, "conditions": conds, "all": ok, "mod_L": mod_L}


# ---------------------------------------------------------------------------
# commutator witnesses
# ---------------------------------------------------------------------------


def _fj_hypotheses(W, H1, h2):
    if W.A.order == 1:
        raise GroupError("the module must be nontrivial")
    G = W.G
    group = W.group
    if H1.parent is not group:
        raise GroupError("H1 must be a subgroup of the wreath product")
    if not H1.is_normal():
        raise GroupError("H1 is not normal")
    if W.alpha.map[h2] in W.G0.members:
        raise GroupError("alpha(h2) lies in G0")
    G1 = W.alpha.image_of(H1)
    if len(product_set(G1, W.G0)) // W.G0.order <= 2:
        raise GroupError("(G1 G0 : G0) must exceed 2")
    return G1


def fj_witness(W, H1, h2, checked=False):
    """Some ``h1`` in ``H1 ∩ ker alpha`` with ``[h1, h2] != 1``.

    The hypotheses guarantee one exists; exhausting the candidates raises
    :class:`WitnessDefect`.  ``checked=True`` skips the per-``H1`` hypothesis
    checks (the caller has done them) but still checks ``h2``.
    """
    if checked:
        if W.alpha.map[h2] in W.G0.members:
            raise GroupError("alpha(h2) lies in G0")
    else:
        _fj_hypotheses(W, H1, h2)
    group = W.group
    cands = np.array(sorted(H1.members & W.kernel.members), dtype=np.int64)
    if group.has_table:
        T = group.table
        inv = group.inverses
        c = T[T[inv[cands], inv[h2]], T[cands, h2]]
        hit = np.nonzero(c != group.e)[0]
        if len(hit):
            return int(cands[hit[0]])
    else:
        for h1 in cands.tolist():
            if group.comm(h1, h2) != group.e:
                return h1
    raise WitnessDefect("no commutator witness under valid hypotheses")


def commutator_module(W, G1):
    """Codes of ``M(G1) = <f^-1 f^σ : f in Ind, σ in G1>`` inside ``Ind``.

    For abelian ``A`` every normal ``H1`` with ``alpha(H1) = G1`` contains
    ``M(G1)``: it holds ``[(f, 1), h] = f^-1 f^σ`` for ``h`` over ``σ``.
    """
    if not W.A.is_abelian:
        raise GroupError("the reduction needs an abelian module")
    gens = []
    base = W.generator_codes()
    ind_gens = [int(c) // W.G.order for c in base[:len(base) - len(W.G.gen_indices)]]
    inv = W._Ainv
    for s in sorted(G1.members):
        for f in ind_gens:
            fs = W.ind_tab[s][f]
            finv = int(inv[W.coords[f]] @ W._weights)
            gens.append(int(W.ind_mul(np.int64(finv), np.int64(fs))))
    seen = np.zeros(W.nind, dtype=bool)
    seen[W.ind_e] = True
    frontier = np.array([W.ind_e], dtype=np.int64)
    g = np.array(sorted(set(gens)) or [W.ind_e], dtype=np.int64)
    while len(frontier):
        new = np.unique(W.ind_mul(frontier[:, None], g[None, :]).ravel())
        new = new[~seen[new]]
        seen[new] = True
        frontier = new
    return np.nonzero(seen)[0]


def fj_witness_reduced(W, module_codes, sigma2):
    """A code ``f`` in ``M(G1)`` with ``f^σ2 != f``; then ``[(f,1), h2] != 1`` for
    every ``h2`` over ``σ2`` (abelian ``A``)."""
    moved = module_codes[W.ind_tab[sigma2][module_codes] != module_codes]
    if len(moved) == 0:
        raise WitnessDefect(f"no witness in M(G1) against {sigma2}")
    return int(moved[0])


def normal_subgroups_of_G(G):
    return G.normal_subgroups()


def fj_scan(W, explicit_cap=NORMAL_CAP):
    """Run the witness search over every qualifying ``(H1, h2)`` of ``W``.

    For ``|W| <= explicit_cap`` the normal subgroups of ``W`` are enumerated and
    :func:`fj_witness` is called for every ``H1`` and every ``h2``; beyond that
    the search runs on ``M(G1)`` for each normal ``G1`` of ``G``, which covers
    all ``H1`` over ``G1`` at once (abelian ``A``).  Returns a report dict.
    """
    G, G0 = W.G, W.G0
    qualifying = [G1 for G1 in normal_subgroups_of_G(G)
                  if len(product_set(G1, G0)) // G0.order > 2]
    report = {"order": W.expected_order(), "qualifying_G1": len(qualifying), "pairs": 0,
              "defects": [], "mode": None}
    if W.A.order == 1 or not qualifying:
        report["mode"] = "vacuous"
        return report
    outside = [s for s in range(G.order) if s not in G0.members]
    if W.expected_order() <= explicit_cap:
        report["mode"] = "explicit"
        group = W.group
        alpha = W.alpha
        h2s = [h for h in range(group.order) if alpha.map[h] not in G0.members]
        quals = {G1.members for G1 in qualifying}
        for H1 in group.normal_subgroups(cap=explicit_cap):
            if alpha.image_of(H1).members not in quals:
                continue
            _fj_hypotheses(W, H1, h2s[0])
            for h2 in h2s:
                report["pairs"] += 1
                try:
                    fj_witness(W, H1, h2, checked=True)
                except WitnessDefect as exc:
                    report["defects"].append(str(exc))
        return report
    report["mode"] = "reduced"
    for G1 in qualifying:
        mod = commutator_module(W, G1)
        for s in outside:
            report["pairs"] += 1
            try:
                fj_witness_reduced(W, mod, s)
            except WitnessDefect as exc:
                report["defects"].append(str(exc))
    return report


# ---------------------------------------------------------------------------
# obstruction and constrained search
# ---------------------------------------------------------------------------


def obstruction_scan(d, cap=NORMAL_CAP):
    """Every pair ``(H1, H2)`` of normal subgroups of ``W = Abar ≀_{G0} G`` with
    ``alpha(Hi) = Gi`` carries ``h2 in H2`` over a point outside ``G0`` and
    ``h1 in H1 ∩ ker alpha`` with ``[h1, h2] != 1``.  In that case no
    epimorphism onto ``W`` lifting ``mu`` kills ``N1 ∩ N2 ∩ L``.
    """
    if d.Abar is None or d.Abar.order == 1:
        raise GroupError("obstruction scan needs a nontrivial Abar")
    conds = check_modL_conditions(d)
    if not conds["all"]:
        raise GroupError(f"conditions fail: {conds}")
    W = d.wreath()
    if W.expected_order() > cap:
        raise CapExceeded(f"wreath product of order {W.expected_order()} exceeds {cap}")
    group = W.group
    alpha = W.alpha
    normals = group.normal_subgroups(cap=cap)
    H1s = [H for H in normals if alpha.image_of(H).members == d.G1.members]
    H2s = [H for H in normals if alpha.image_of(H).members == d.G2.members]
    witnesses = []
    defects = []
    for H1 in H1s:
        for H2 in H2s:
            h2 = next(h for h in sorted(H2.members) if alpha.map[h] not in d.G0.members)
            try:
                h1 = fj_witness(W, H1, h2)
            except WitnessDefect as exc:
                defects.append(str(exc))
                continue
            witnesses.append({"H1_order": H1.order, "H2_order": H2.order,
                              "h1": str(group.elements[h1]), "h2": str(group.elements[h2])})
    return {
        "wreath_order": group.order,
        "normal_subgroups": len(normals),
        "pairs": len(H1s) * len(H2s),
        "vacuous": not (H1s and H2s),
        "obstructed": not defects,
        "witnesses": witnesses,
        "defects": defects,
    }


@dataclass
class EpiSearch:
    solutions: list  # SurfaceAssignments into W
    pruned_by_order: bool
    candidates: int


def constrained_epi_search(W, mu, q, cap=SEARCH_CAP):
    """Proper solutions of ``(mu, alpha: W -> G)`` that factor through ``q``.

    ``q`` is a surjective assignment onto a finite quotient ``Q``; the images of
    the generators are searched in the alpha-fibres and kept when they extend
    to a homomorphism ``Q -> W`` that is onto.  ``|W|`` must divide ``|Q|`` for
    an epimorphism to exist, which prunes the search outright.
    """
    group = W.group
    G = W.G
    Q = q.target
    if mu.target is not G:
        raise GroupError("mu must land in the base group of W")
    if not q.is_surjective():
        raise GroupError("q must be onto its target")
    qgens = [Q.index(s) for s in Q.generators]
    if len(qgens) != len(q.idx) or any(a != b for a, b in zip(qgens, q.idx)):
        # rebuild Q on the images of the surface generators
        Q = FiniteGroup(q.images, cap=max(Q.order, Q.cap))
        q = SurfaceAssignment(Q, q.images, check=False)
    if _extend(Q, G, list(mu.idx)) is None:
        raise GroupError("mu does not factor through q")
    if Q.order % group.order:
        return EpiSearch([], True, 0)
    fib = [[] for _ in range(G.order)]
    for w, b in enumerate(W.alpha.map):
        fib[b].append(w)
    lists = [fib[b] for b in mu.idx]
    total = math.prod(len(x) for x in lists)
    if total > cap:
        raise CapExceeded(f"{total} candidate tuples exceed {cap}")
    out = []
    for tup in product(*lists):
        if _extend(Q, group, list(tup)) is None:
            continue
        if len(group.closure(tup)) == group.order:
            out.append(SurfaceAssignment.from_indices(group, tup, check=False))
    return EpiSearch(out, False, total)


def quotient_assignment(amb, cap=None):
    """``q: Π -> Π/𝒩`` with ``𝒩 = N1 ∩ N2 ∩ L`` (``N1``, ``N2`` normal)."""
    J, pos = amb.joint(cap=cap)
    Q = J.group
    L = J.projections[pos[id(amb.mu)]].kernel()
    N1 = amb.in_joint(J, pos, amb.N1)
    N2 = amb.in_joint(J, pos, amb.N2)
    calN = Subgroup(Q, L.members & N1.members & N2.members)
    Qbar, nat = quotient(Q, calN)
    imgs = [Qbar.elements[nat.map[i]] for i in J.assignment.idx]
    Qbar = FiniteGroup(imgs, cap=max(Qbar.order, Qbar.cap))
    return SurfaceAssignment(Qbar, imgs, check=False)


# ---------------------------------------------------------------------------
# numeric helpers
# ---------------------------------------------------------------------------


def minimal_r(a_order):
    """Least integer ``r`` with ``e^(r y) >= 2 |A|^(3y) y^3`` for all real ``y >= 2``.

    Taking logarithms, ``r >= 3 ln|A| + (ln 2 + 3 ln y)/y``.  The second term
    peaks where ``3 ln y = 3 - ln 2`` with value ``3/y``.
    """
    if a_order < 1:
        raise ValueError("a_order must be positive")
    ystar = math.exp(1 - math.log(2) / 3)
    peak = max((math.log(2) + 3 * math.log(y)) / y for y in (2.0, ystar))
    return math.ceil(3 * math.log(a_order) + peak)


def r_inequality_holds(r, a_order, ys):
    return all(math.exp(r * y) >= 2 * a_order ** (3 * y) * y ** 3 for y in ys)


def lemma33_s(r, index_H, index_D):
    """``s = r · [Π:H]! · [Π:D]``."""
    return r * math.factorial(index_H) * index_D


def induced_genus_requirement(a_order, y):
    """``2 |A|^(3y) y^3``: the genus the induced problem needs over ``y`` cosets."""
    return 2 * a_order ** (3 * y) * y ** 3
