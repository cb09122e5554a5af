"""Twisted wreath products, the Shapiro map and induction of embedding problems.

``A ≀_{G0} G = Ind ⋊ G`` where ``Ind`` holds the functions ``f: G -> A`` with
``f(σ τ) = f(σ)^τ`` for ``τ`` in ``G0``, and ``G`` acts by ``(f^σ)(σ') = f(σ σ')``.
A function is stored by its values on a fixed left transversal of ``G0``.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .cosetenum import reidemeister_schreier, todd_coxeter
from .embedding import FSEP
from .fingroup import (CapExceeded, FiniteGroup, GroupAction, GroupError, GroupHom, ProductElement,
                       SDElement, SemidirectProduct, Subgroup, direct_product)
from .surface import SurfaceAssignment


def bfs_transversal(G, G0):
    """Left coset representatives, each the first element of its coset in
    breadth-first order of the Cayley graph (so the identity represents ``G0``)."""
    seen = set()
    reps = []
    for x in G._bfs:
        if x in seen:
            continue
        reps.append(x)
        seen.update(G.mul(x, t) for t in G0.members)
    return reps


def last_transversal(G, G0):
    """The alternative choice: the largest index in each coset."""
    return [max(c) for c in G0.cosets()]


WREATH_CAP = 10 ** 6


class TwistedWreath:
    """``A ≀_{G0} G`` for an action of ``G0`` on ``A``.

    ``action.acting`` must be a group whose elements are the elements of ``G0``
    (for instance ``G0.as_group()``).

    Elements are coded as integers ``code(f) * |G| + σ`` where ``code(f)`` is
    the base-``|A|`` number formed by the values of ``f`` on the transversal;
    the order, the Shapiro identity and the transversal change are checked on
    these codes with numpy.  The generic :class:`FiniteGroup` (``.group``) is
    built on first use, for the small instances the lattice code needs.
    """

    def __init__(self, A, G, G0, action, transversal=None, cap=None):
        if isinstance(G0, FiniteGroup) or G0.parent is not G:
            raise GroupError("G0 must be a subgroup of G")
        if action.module is not A:
            raise GroupError("the action must be on A")
        H = action.acting
        try:
            h_of = {G.index(x): i for i, x in enumerate(H.elements)}
        except GroupError:
            raise GroupError("the acting group must consist of elements of G0") from None
        if set(h_of) != set(G0.members):
            raise GroupError("the acting group must be G0")
        self.A, self.G, self.G0, self.action, self.H = A, G, G0, action, H
        self.h_of = h_of
        self.cap = WREATH_CAP if cap is None else cap
        reps = list(transversal) if transversal is not None else bfs_transversal(G, G0)
        coset_of = [-1] * G.order
        for i, s in enumerate(reps):
            for t in G0.members:
                x = G.mul(s, t)
                if coset_of[x] != -1:
                    raise GroupError("transversal has two representatives in one coset")
                coset_of[x] = i
        if -1 in coset_of:
            raise GroupError("transversal misses a coset")
        self.reps = reps
        self.coset_of = coset_of
        m = self.m = len(reps)
        if self.expected_order() > self.cap:
            raise CapExceeded(f"wreath product of order {self.expected_order()} exceeds cap {self.cap}")
        # σ σ_i = σ_j τ
        self.perm = np.zeros((G.order, m), dtype=np.int64)
        self.twist = np.zeros((G.order, m), dtype=np.int64)
        for s in range(G.order):
            for i, r in enumerate(reps):
                x = G.mul(s, r)
                j = coset_of[x]
                self.perm[s, i] = j
                self.twist[s, i] = G.mul(G.inv(reps[j]), x)
        self._numeric()

    def act_index(self, a, t):
        """``a^t`` for ``t`` in ``G0`` (both indices)."""
        return self.action.table[self.h_of[t]][a]

    # -- integer model -------------------------------------------------------

    def _numeric(self):
        A, G, m = self.A, self.G, self.m
        n = A.order
        self.nind = n ** m
        self._weights = n ** np.arange(m, dtype=np.int64)
        codes = np.arange(self.nind, dtype=np.int64)
        self.coords = (codes[:, None] // self._weights[None, :]) % n
        self._At = np.asarray(A.table, dtype=np.int64)
        self._Ainv = np.asarray(A.inverses, dtype=np.int64)
        self._Gt = np.asarray(G.table, dtype=np.int64)
        act = np.zeros((G.order, n), dtype=np.int64)
        for t in self.G0.members:
            act[t] = self.action.table[self.h_of[t]]
        self._act = act
        tab = np.empty((G.order, self.nind), dtype=np.int64)
        for s in range(G.order):
            shifted = act[self.twist[s][None, :], self.coords[:, self.perm[s]]]
            tab[s] = shifted @ self._weights
        self.ind_tab = tab
        self.ind_e = int(np.full(m, A.e) @ self._weights)

    def encode(self, values):
        return int(np.asarray(values, dtype=np.int64) @ self._weights)

    def ind_mul(self, x, y):
        return self._At[self.coords[x], self.coords[y]] @ self._weights

    def mul_codes(self, u, v):
        """Vectorised product of element codes: ``(f, σ)(f', σ') = (f^σ' f', σσ')``."""
        nG = self.G.order
        a1, b1 = np.divmod(u, nG)
        a2, b2 = np.divmod(v, nG)
        return self.ind_mul(self.ind_tab[b2, a1], a2) * nG + self._Gt[b1, b2]

    def generator_codes(self):
        """One-coordinate generators of ``Ind`` followed by the generators of ``G``."""
        nG = self.G.order
        out = []
        for i in range(self.m):
            for k in self.A.gen_indices:
                if k == self.A.e:
                    continue
                vals = np.full(self.m, self.A.e)
                vals[i] = k
                out.append(self.encode(vals) * nG + self.G.e)
        out += [self.ind_e * nG + s for s in self.G.gen_indices]
        return np.array(out or [self.ind_e * nG + self.G.e], dtype=np.int64)

    def closure_order(self):
        """Size of the group generated by :meth:`generator_codes` (vectorised closure)."""
        gens = self.generator_codes()
        seen = np.zeros(self.nind * self.G.order, dtype=bool)
        start = self.ind_e * self.G.order + self.G.e
        seen[start] = True
        frontier = np.array([start], dtype=np.int64)
        while len(frontier):
            new = np.unique(self.mul_codes(frontier[:, None], gens[None, :]).ravel())
            new = new[~seen[new]]
            seen[new] = True
            frontier = new
        return int(seen.sum())

    def check_action(self):
        """Each ``σ`` acts on ``Ind`` by an automorphism, and ``f^(σσ') = (f^σ)^σ'``."""
        allx = np.arange(self.nind, dtype=np.int64)
        gens = self.generator_codes()[: -len(self.G.gen_indices) or None] // self.G.order
        for s in range(self.G.order):
            row = self.ind_tab[s]
            if len(np.unique(row)) != self.nind:
                return False
            for y in gens:
                if not np.array_equal(row[self.ind_mul(allx, y)], self.ind_mul(row, row[y])):
                    return False
        for s in range(self.G.order):
            for t in self.G.gen_indices:
                if not np.array_equal(self.ind_tab[t][self.ind_tab[s]], self.ind_tab[self._Gt[s, t]]):
                    return False
        return True

    @property
    def order(self):
        return self.closure_order() if self._group is None else self._group.order

    def expected_order(self):
        return self.A.order ** self.m * self.G.order

    # -- generic group (small instances) -------------------------------------

    _group = None

    def _build_group(self):
        if self._group is not None:
            return
        A, G = self.A, self.G
        ind = direct_product(*([A] * self.m), cap=max(self.cap, self.nind))
        ind.name = "Ind"
        ind_code = np.array([self.encode([A.index(c) for c in f]) for f in ind.elements], dtype=np.int64)
        code_to_idx = np.empty(self.nind, dtype=np.int64)
        code_to_idx[ind_code] = np.arange(self.nind)
        table = code_to_idx[self.ind_tab[:, ind_code]]
        self.ind = ind
        self._ind_code = ind_code
        self._code_to_idx = code_to_idx
        self.ind_action = GroupAction(G, ind, table.tolist())
        self.sd = SemidirectProduct(ind, G, self.ind_action, cap=max(self.cap, self.expected_order()))
        group = self.sd.group
        group.name = f"{A.name or 'A'} wr {G.name or 'G'}"
        self.alpha = self.sd.alpha
        self.beta = self.sd.beta
        self.embed = self.sd.embed
        self.kernel = self.sd.kernel
        self._group = group

    @property
    def group(self):
        self._build_group()
        return self._group

    def __getattr__(self, name):
        if name in ("ind", "ind_action", "sd", "alpha", "beta", "embed", "kernel", "_ind_code", "_code_to_idx"):
            self._build_group()
            return self.__dict__[name]
        raise AttributeError(name)

    @cached_property
    def sh_sd(self):
        return SemidirectProduct(self.A, self.H, self.action)

    def code_of(self, w):
        """Integer code of the group element with index ``w``."""
        x = self.group.elements[w]
        return int(self._ind_code[x.a]) * self.G.order + x.b

    def index_of(self, code):
        a, b = divmod(int(code), self.G.order)
        return self.group.index(SDElement(int(self._code_to_idx[a]), b, self.sd))

    def ind_element(self, values):
        return IndElement(self, tuple(int(v) for v in values))

    def ind_of(self, a):
        """The Ind element of the Ind-group index ``a``."""
        return IndElement(self, tuple(int(v) for v in self.coords[self._ind_code[a]]))

    def ind_index(self, values):
        return int(self._code_to_idx[self.encode(values)])

    def element(self, values, sigma):
        """The group element ``(f, σ)`` (values on the transversal, σ an index of G)."""
        return SDElement(self.ind_index(values), sigma, self.sd)

    def domain(self):
        """``Ind ⋊ G0 = alpha^-1(G0)`` as a subgroup of the wreath product."""
        return self.alpha.preimage(self.G0)

    def shapiro(self, w):
        """``Sh((f, σ)) = f(1) σ`` in ``A ⋊ G0``; ``w`` is an index or element of the group."""
        W = self.group
        x = W.elements[w] if isinstance(w, (int, np.integer)) else w
        if x.b not in self.G0.members:
            raise GroupError("the G-part lies outside G0")
        a = self.ind_of(x.a).eval(self.G.e)
        return self.sh_sd.group.index(SDElement(a, self.h_of[x.b], self.sh_sd))

    # -- exhaustive checks ---------------------------------------------------

    def _sh_data(self):
        G = self.G
        j0 = self.coset_of[G.e]
        t0 = G.mul(G.inv(self.reps[j0]), G.e)
        g0 = np.array(sorted(self.G0.members), dtype=np.int64)
        a = np.repeat(np.arange(self.nind, dtype=np.int64), len(g0))
        b = np.tile(g0, self.nind)
        hb = np.array([self.h_of.get(x, 0) for x in range(G.order)], dtype=np.int64)
        T = self.sh_sd.group
        # A ⋊ H is sorted by (a, b) and complete, so its index is a*|H| + b
        assert T.order == self.A.order * self.H.order
        sh = self._act[t0][self.coords[a, j0]] * self.H.order + hb[b]
        return a, b, sh, j0, t0, hb

    def shapiro_codes(self, codes):
        """Shapiro images (indices of ``A ⋊ G0``) of domain element codes."""
        a, b = np.divmod(np.asarray(codes, dtype=np.int64), self.G.order)
        if not np.isin(b, list(self.G0.members)).all():
            raise GroupError("the G-part lies outside G0")
        _, _, _, j0, t0, hb = self._sh_data()
        return self._act[t0][self.coords[a, j0]] * self.H.order + hb[b]

    def check_shapiro(self, chunk=512):
        """Exhaustively check ``Sh(uv) = Sh(u) Sh(v)`` on ``Ind ⋊ G0``, and surjectivity.

        ``uv`` comes from the wreath product's own action table; the right side
        uses the multiplication table of ``A ⋊ G0``.
        """
        a, b, sh, j0, t0, hb = self._sh_data()
        Tt = np.asarray(self.sh_sd.group.table, dtype=np.int64)
        cj = self.coords[:, j0]
        for start in range(0, len(a), chunk):
            au, bu = a[start:start + chunk, None], b[start:start + chunk, None]
            shifted = self.ind_tab[b[None, :], au]  # f_u ^ σ_v
            prod_j0 = self._At[cj[shifted], cj[a[None, :]]]
            lhs = self._act[t0][prod_j0] * self.H.order + hb[self._Gt[bu, b[None, :]]]
            rhs = Tt[sh[start:start + chunk, None], sh[None, :]]
            if not np.array_equal(lhs, rhs):
                return False
        return len(np.unique(sh)) == self.sh_sd.group.order

    def check_shapiro_scalar(self, samples):
        """Scalar check of the Shapiro identity on pairs of domain indices of ``.group``."""
        W = self.group
        T = self.sh_sd.group
        return all(self.shapiro(W.mul(u, v)) == T.mul(self.shapiro(u), self.shapiro(v)) for u, v in samples)


@dataclass(frozen=True)
class IndElement:
    wreath: TwistedWreath
    values: tuple  # A indices at the transversal

    def eval(self, sigma):
        W = self.wreath
        G = W.G
        j = W.coset_of[sigma]
        t = G.mul(G.inv(W.reps[j]), sigma)
        return W.act_index(self.values[j], t)

    def act(self, sigma):
        """``f^σ: σ' -> f(σ σ')``."""
        W = self.wreath
        return IndElement(W, tuple(self.eval(W.G.mul(sigma, r)) for r in W.reps))

    def index(self):
        return self.wreath.ind_index(self.values)


def canonical_map(W1, W2):
    """Codes of the map ``(f, σ) -> (f', σ)`` between wreath products on two
    transversals, ``f'`` holding the values of ``f`` on the second transversal."""
    if W1.A is not W2.A or W1.G is not W2.G or W1.G0.members != W2.G0.members:
        raise GroupError("different wreath data")
    G = W1.G
    vals = np.empty((W1.nind, W1.m), dtype=np.int64)
    for i, r in enumerate(W2.reps):
        j = W1.coset_of[r]
        t = G.mul(G.inv(W1.reps[j]), r)
        vals[:, i] = W1._act[t][W1.coords[:, j]]
    ind_map = vals @ W2._weights
    nG = G.order
    codes = np.arange(W1.nind * nG, dtype=np.int64)
    a, b = np.divmod(codes, nG)
    return ind_map[a] * nG + b


def check_canonical_isomorphism(W1, W2):
    """Certify the canonical map as an isomorphism: bijective, and compatible with
    right multiplication by every generator on every element."""
    phi = canonical_map(W1, W2)
    if len(np.unique(phi)) != len(phi):
        return False
    allx = np.arange(len(phi), dtype=np.int64)
    for s in W1.generator_codes():
        if not np.array_equal(phi[W1.mul_codes(allx, s)], W2.mul_codes(phi, phi[s])):
            return False
    return True


# ---------------------------------------------------------------------------
# induced problems
# ---------------------------------------------------------------------------


@dataclass
class InducedProblem:
    problem: FSEP
    wreath: TwistedWreath
    table: object  # CosetTable of N = mu^-1(G0)
    schreier: object  # SubgroupPresentation of N
    G1: FiniteGroup
    action1: GroupAction
    nu: GroupHom  # G0 (as H) -> G1
    mu1: list  # G1 indices of the Schreier generators
    rho: GroupHom  # A ⋊ G0 -> A ⋊ G1
    target: SemidirectProduct  # A ⋊ G1


def _nu_from_values(H, G1, pairs):
    """The map ``G0 -> G1`` forced by ``(h, g1)`` pairs, or an error when the
    pairs do not define a homomorphism."""
    gens = [ProductElement((H.elements[h], G1.elements[x])) for h, x in pairs] or \
           [ProductElement((H.identity, G1.identity))]
    graph = FiniteGroup(gens, cap=H.order * G1.order)
    images = {}
    for p in graph.elements:
        h = H.index(p[0])
        if images.setdefault(h, G1.index(p[1])) != G1.index(p[1]):
            raise GroupError("nu is not well defined: the kernel condition fails")
    if len(images) != H.order:
        raise GroupError("the Schreier generators do not map onto G0")
    return GroupHom(H, G1, [G1.elements[images[H.index(s)]] for s in H.generators])


def induce_problem(mu, G0, A, action1, nu=None, mu1=None, cap=None, max_cosets=None):
    """The problem ``(mu, alpha: A ≀_{G0} G -> G)`` induced from
    ``(mu1: N -> G1, A ⋊ G1 -> G1)`` with ``N = mu^-1(G0)``.

    Give ``nu: G0 -> G1`` (a hom from a group on the elements of ``G0``) or the
    values ``mu1`` of the Schreier generators of ``N`` (``nu`` is then derived
    and must be well defined).
    """
    G = mu.target
    G1 = action1.acting
    if action1.module is not A:
        raise GroupError("action1 must act on A")
    kw = {} if max_cosets is None else {"max_cosets": max_cosets}
    table = todd_coxeter(mu.genus, by_hom=(mu, G0), **kw)
    sp = reidemeister_schreier(table)
    gen_vals = [mu.eval_index(w) for w in sp.generators]
    if any(v not in G0.members for v in gen_vals):
        raise GroupError("mu(N) is not G0")
    if nu is None:
        if mu1 is None:
            raise GroupError("give nu or mu1")
        H = G0.as_group()
        mu1 = [G1.index(x) if not isinstance(x, int) else x for x in mu1]
        if len(mu1) != sp.ngens:
            raise GroupError(f"mu1 needs {sp.ngens} values")
        nu = _nu_from_values(H, G1, [(H.index(G.elements[v]), x) for v, x in zip(gen_vals, mu1)])
    else:
        H = nu.source
        if nu.target is not G1:
            raise GroupError("nu must land in the acting group of action1")
        mu1 = [nu.map[H.index(G.elements[v])] for v in gen_vals]
    action0 = action1.pullback(nu)
    W = TwistedWreath(A, G, G0, action0, cap=cap)
    fsep = FSEP(mu, W.group, W.alpha, W.beta)
    target = SemidirectProduct(A, G1, action1, cap=cap)
    rho_imgs = [SDElement(s.a, nu.map[s.b], target) for s in W.sh_sd.group.generators]
    rho = GroupHom(W.sh_sd.group, target.group, rho_imgs)
    return InducedProblem(fsep, W, table, sp, G1, action1, nu, mu1, rho, target)


@dataclass
class Restriction:
    images: list  # indices in A ⋊ G1, one per Schreier generator
    proper: bool
    lifts_mu1: bool
    relators_hold: bool


def restrict_solution(ip, psi):
    """``psi^ind = rho ∘ Sh ∘ psi|_N`` on the Schreier generators of ``N``."""
    if isinstance(psi, SurfaceAssignment):
        asg = psi
    else:
        asg = psi.psi
    W = ip.wreath
    Tg = ip.target.group
    out = []
    for word in ip.schreier.generators:
        v = asg.eval_index(word)
        if W.group.elements[v].b not in W.G0.members:
            raise GroupError("image of an N-generator lies outside Ind ⋊ G0")
        out.append(ip.rho.map[W.shapiro(v)])
    lifts = all(ip.target.alpha.map[x] == y for x, y in zip(out, ip.mu1))
    ok = True
    for rel in ip.schreier.relators:
        acc = Tg.e
        for letter in rel:
            x = out[abs(letter) - 1]
            acc = Tg.mul(acc, x if letter > 0 else Tg.inv(x))
        ok = ok and acc == Tg.e
    proper = len(Tg.closure(out)) == Tg.order
    return Restriction(out, proper, lifts, ok)
