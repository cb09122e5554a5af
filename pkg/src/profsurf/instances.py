"""Named desk-scale instances shared by the command line and the tests."""
from __future__ import annotations

from .diamond import Ambient, DiamondInstance, Preimage, check_index_conditions
from .embedding import FSEP, brute_solve
from .fingroup import GroupAction, GroupHom, ProductElement, cyclic, direct_product
from .surface import SurfaceAssignment, first_surjection
from .wreath import TwistedWreath, induce_problem


def _c3():
    C3 = cyclic(3)
    return C3, C3.generators[0], C3.identity


def c3xc3_characters():
    """Two independent surjections ``Π_2 -> C3`` and their joint map onto ``C3 x C3``."""
    C3, x, e = _c3()
    G = direct_product(C3, C3)
    chi1 = SurfaceAssignment(C3, [x, e, e, e])
    chi2 = SurfaceAssignment(C3, [e, e, x, e])
    mu = SurfaceAssignment(G, [ProductElement((a, b)) for a, b in zip(chi1.images, chi2.images)])
    return G, chi1, chi2, mu


def c3xc3_ambient():
    """``N1 = ker chi1``, ``N2 = ker chi2``, ``L = N1 ∩ N2`` and ``N`` the
    preimage of the diagonal; ``mu1 = chi1`` agrees with ``nu∘mu`` on ``N``."""
    G, chi1, chi2, mu = c3xc3_characters()
    C3 = chi1.target
    x = C3.generators[0]
    diag = G.subgroup([ProductElement((x, x))])
    return Ambient(mu, Preimage(mu, diag), Preimage.kernel(chi1), Preimage.kernel(chi2), mu1=chi1)


def c3xc3_induced(A=None, action1=None):
    """The induced problem over ``A ≀_Δ (C3 x C3)`` with ``nu: Δ -> C3`` the first coordinate."""
    amb = c3xc3_ambient()
    mu = amb.mu
    C3 = amb.mu1.target
    A = A or cyclic(2)
    action1 = action1 or GroupAction.trivial(C3, A)
    diag = amb.N.subgroup
    H = diag.as_group()
    nu = GroupHom(H, C3, [s[0] for s in H.generators])
    return induce_problem(mu, diag, A, action1, nu=nu)


def c3xc3_diamond(Abar=None, trivial_G0=False):
    amb = c3xc3_ambient()
    d = check_index_conditions(amb)["mod_L"]
    Abar = Abar or cyclic(2)
    G0 = d.G.trivial_subgroup() if trivial_G0 else d.G0
    act = GroupAction.trivial(G0.as_group(), Abar)
    name = "c3xc3-trivial-G0" if trivial_G0 else "c3xc3"
    return amb, DiamondInstance(d.G, G0, d.G1, d.G2, Abar=Abar, action=act, name=name)


def c3_q48_ambient():
    """``G = C3``, ``N = L``, ``N1 = ker(Π -> C2^3)``, ``N2 = ker(Π -> C2)``: the
    conditions hold and ``Π/(N1 ∩ N2 ∩ L)`` has order 48, a multiple of
    ``|C2 ≀ C3| = 24``, so the constrained search is a genuine one."""
    C3, x3, e3 = _c3()
    C2 = cyclic(2)
    x2, e2 = C2.generators[0], C2.identity
    V = direct_product(C2, C2, C2)
    v = lambda a, b, c: ProductElement(tuple(x2 if t else e2 for t in (a, b, c)))  # noqa: E731
    lam = SurfaceAssignment(C3, [x3, e3, e3, e3])
    chi1 = SurfaceAssignment(V, [v(1, 0, 0), v(0, 1, 0), v(0, 0, 1), v(0, 0, 0)])
    chi2 = SurfaceAssignment(C2, [e2, e2, e2, x2])
    return Ambient(lam, Preimage.kernel(lam), Preimage.kernel(chi1), Preimage.kernel(chi2))


def c3_q48_diamond():
    amb = c3_q48_ambient()
    d = check_index_conditions(amb)["mod_L"]
    C2 = cyclic(2)
    act = GroupAction.trivial(d.G0.as_group(), C2)
    return amb, DiamondInstance(d.G, d.G0, d.G1, d.G2, Abar=C2, action=act, name="c3-q48")


def solvable_companion():
    """``G = C2``, ``N = N1 = L = ker mu`` (so ``G1 <= G0`` and the first
    condition fails) and ``N2 = ker psi0`` for a proper solution ``psi0`` of
    ``(mu, C2 ≀_1 C2 -> C2)``; ``psi0`` factors through ``Π/(N1 ∩ N2 ∩ L)``."""
    C2 = cyclic(2)
    mu = first_surjection(2, C2)
    G0 = C2.trivial_subgroup()
    W = TwistedWreath(C2, C2, G0, GroupAction.trivial(G0.as_group(), C2))
    fsep = FSEP(mu, W.group, W.alpha, W.beta)
    psi0 = brute_solve(fsep).psi
    amb = Ambient(mu, Preimage.kernel(mu), Preimage.kernel(mu), Preimage.kernel(psi0))
    d = DiamondInstance(C2, G0, C2.trivial_subgroup(), C2.trivial_subgroup(), Abar=C2,
                        action=GroupAction.trivial(G0.as_group(), C2), name="eq4-fails")
    return amb, d, W


def order8_induced():
    """``g = 2``, ``G = C2``, ``G0 = 1``, ``G1 = 1``, ``A = C2``: the induced
    group ``C2 ≀ C2`` has order 8."""
    C1, C2 = cyclic(1), cyclic(2)
    mu = first_surjection(2, C2)
    G0 = C2.trivial_subgroup()
    H = G0.as_group()
    nu = GroupHom(H, C1, [C1.identity for _ in H.generators])
    return induce_problem(mu, G0, C2, GroupAction.trivial(C1, C2), nu=nu)


DIAMONDS = {
    "c3xc3": lambda: c3xc3_diamond(),
    "c3xc3-trivial-G0": lambda: c3xc3_diamond(trivial_G0=True),
    "c3-q48": c3_q48_diamond,
    "eq4-fails": lambda: solvable_companion()[:2],
}

INDUCED = {
    "order8": order8_induced,
    "c3xc3": c3xc3_induced,
}
