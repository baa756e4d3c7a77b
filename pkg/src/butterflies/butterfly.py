"""Butterflies between crossed modules of finite groups.

A butterfly from H to G is a group E with two wing homomorphisms into it and
two leg homomorphisms out of it; the NE-SW diagonal is a short exact sequence
and both wings are conjugation-equivariant.  Butterflies compose through a
pullback-then-cokernel construction and are the weak morphisms between
crossed modules; the flippable ones are exactly the equivalences.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import (
    ConstructionError,
    CooperatorFails,
    FractorConditionFailed,
    NotASection,
    NotComposable,
    NotFlippable,
)
from .fingroup import (
    FinGroup,
    GroupAction,
    GroupHom,
    Subgroup,
    direct_product,
    identity_hom,
    kernel,
    product_and_pullback,
    quotient,
)
from .report import ValidationReport
from .xmod import (
    CrossedModule,
    Strict2Group,
    TwoGroupFunctor,
    XModMorphism,
    XModTwoCell,
    cokernel_embedding,
    denormalize,
    kernel_embedding,
    validate_crossed_module,
    validate_two_group,
    validate_xmod_morphism,
    xmod_morphism,
)


@dataclass(frozen=True)
class Butterfly:
    """(E, kappa, iota, sigma, rho) between crossed modules dom and cod."""

    dom: CrossedModule
    cod: CrossedModule
    E: FinGroup
    kappa: GroupHom
    iota: GroupHom
    sigma: GroupHom
    rho: GroupHom

    def __post_init__(self):
        if self.kappa.dom != self.dom.G or self.kappa.cod != self.E:
            raise ValueError("kappa must map dom.G to E")
        if self.iota.dom != self.cod.G or self.iota.cod != self.E:
            raise ValueError("iota must map cod.G to E")
        if self.sigma.dom != self.E or self.sigma.cod != self.dom.G0:
            raise ValueError("sigma must map E to dom.G0")
        if self.rho.dom != self.E or self.rho.cod != self.cod.G0:
            raise ValueError("rho must map E to cod.G0")

    def __repr__(self) -> str:
        return f"Butterfly({self.dom!r} -> {self.cod!r}; E={self.E.name})"


def validate_butterfly(B: Butterfly) -> ValidationReport:
    """Check the wing commutativity and the four butterfly conditions.

    Also asserts the derived fact that the images of the two wings commute
    elementwise in E (existence of the cooperator).
    """
    report = ValidationReport(repr(B))
    E, H, G = B.E, B.dom.G, B.cod.G
    k, i, s, r = B.kappa.map, B.iota.map, B.sigma.map, B.rho.map
    for h in range(H.order):
        if s[k[h]] != B.dom.boundary.map[h]:
            report.add("left-wing", h, "sigma(kappa h) != boundary h")
    for g in range(G.order):
        if r[i[g]] != B.cod.boundary.map[g]:
            report.add("right-wing", g, "rho(iota g) != boundary g")
    for h in range(H.order):
        if r[k[h]] != 0:
            report.add("i-complex", h, "rho(kappa h) != 1")
    if not B.iota.is_injective:
        report.add("ii-extension", None, "iota is not injective")
    if not B.sigma.is_surjective:
        report.add("ii-extension", None, "sigma is not surjective")
    if frozenset(i) != frozenset(kernel(B.sigma).elements):
        report.add("ii-extension", None, "image(iota) != kernel(sigma)")
    for e in range(E.order):
        se = s[e]
        for h in range(H.order):
            if k[B.dom.act(se, h)] != E.conj(e, k[h]):
                report.add("iii-equivariance", (e, h), "kappa(sigma(e)|>h) != e kappa(h) e^-1")
    for e in range(E.order):
        re = r[e]
        for g in range(G.order):
            if i[B.cod.act(re, g)] != E.conj(e, i[g]):
                report.add("iv-equivariance", (e, g), "iota(rho(e)|>g) != e iota(g) e^-1")
    for h in range(H.order):
        for g in range(G.order):
            if E.table[k[h]][i[g]] != E.table[i[g]][k[h]]:
                report.add("cooperator", (h, g), "wing images do not commute elementwise")
    return report


def _checked(B: Butterfly, context: str) -> Butterfly:
    report = validate_butterfly(B)
    if not report.ok:
        raise ConstructionError(f"{context} produced an invalid butterfly:\n{report}")
    return B


@dataclass(frozen=True)
class ButterflyMorphism:
    """A 2-cell between parallel butterflies: a map of the middle groups
    commuting with both wings and both legs (hence an isomorphism)."""

    src: Butterfly
    dst: Butterfly
    f: GroupHom


def butterfly_morphism(src: Butterfly, dst: Butterfly, f: GroupHom) -> ButterflyMorphism:
    if src.dom != dst.dom or src.cod != dst.cod:
        raise ValueError("butterfly morphisms require parallel butterflies")
    if f.dom != src.E or f.cod != dst.E:
        raise ValueError("f must map the middle groups")
    if src.kappa.then(f) != dst.kappa:
        raise ConstructionError("kappa triangle does not commute")
    if src.iota.then(f) != dst.iota:
        raise ConstructionError("iota triangle does not commute")
    if f.then(dst.sigma) != src.sigma:
        raise ConstructionError("sigma triangle does not commute")
    if f.then(dst.rho) != src.rho:
        raise ConstructionError("rho triangle does not commute")
    if not f.is_isomorphism:
        raise ConstructionError("a butterfly morphism must be bijective")
    return ButterflyMorphism(src, dst, f)


# ---------------------------------------------------------------------------
# identity, composition, flips


def identity_butterfly(X: CrossedModule) -> Butterfly:
    """The identity butterfly: E is the arrow group of X, wings are the two
    kernel embeddings, legs are target and source."""
    T = denormalize(X)
    B = Butterfly(
        dom=X,
        cod=X,
        E=T.G1,
        kappa=cokernel_embedding(X),
        iota=kernel_embedding(X),
        sigma=T.c,
        rho=T.d,
    )
    return _checked(B, "identity_butterfly")


def _pullback_parts(B: Butterfly, B2: Butterfly):
    """Shared plumbing of compose/whiskering: pullback, kernel, quotient."""
    P, pr1, pr2 = product_and_pullback(B.rho, B2.sigma)
    pos = {pair: idx for idx, pair in enumerate(zip(pr1.map, pr2.map))}
    G = B.cod.G
    N = Subgroup(P, tuple(sorted({pos[(B.iota.map[g], B2.kappa.map[g])] for g in range(G.order)})))
    if not N.is_normal():
        raise ConstructionError("the middle-wing image is not normal in the pullback")
    Q, pr = quotient(P, N)
    return P, pr1, pr2, pos, N, Q, pr


def compose(B: Butterfly, B2: Butterfly) -> Butterfly:
    """Composition of butterflies via pullback over the middle object and
    cokernel of the anti-diagonal wing."""
    if B.cod != B2.dom:
        raise NotComposable(f"{B!r} and {B2!r} do not share the middle crossed module")
    P, pr1, pr2, pos, N, Q, pr = _pullback_parts(B, B2)
    H, K = B.dom.G, B2.cod.G
    kappa = GroupHom(H, Q, tuple(pr.map[pos[(B.kappa.map[h], 0)]] for h in range(H.order)))
    iota = GroupHom(K, Q, tuple(pr.map[pos[(0, B2.iota.map[k])]] for k in range(K.order)))
    sigma_map = [-1] * Q.order
    rho_map = [-1] * Q.order
    for idx in range(P.order):
        q = pr.map[idx]
        s_val, r_val = B.sigma.map[pr1.map[idx]], B2.rho.map[pr2.map[idx]]
        if sigma_map[q] not in (-1, s_val) or rho_map[q] not in (-1, r_val):
            raise ConstructionError("legs are not constant on cosets")
        sigma_map[q], rho_map[q] = s_val, r_val
    out = Butterfly(
        dom=B.dom,
        cod=B2.cod,
        E=Q,
        kappa=kappa,
        iota=iota,
        sigma=GroupHom(Q, B.dom.G0, tuple(sigma_map)),
        rho=GroupHom(Q, B2.cod.G0, tuple(rho_map)),
    )
    return _checked(out, "compose")


def is_flippable(B: Butterfly) -> bool:
    """Whether the other diagonal (kappa, rho) is also a short exact sequence."""
    return (
        B.kappa.is_injective
        and B.rho.is_surjective
        and frozenset(B.kappa.map) == frozenset(kernel(B.rho).elements)
    )


def flip(B: Butterfly) -> Butterfly:
    """The quasi-inverse of a flippable butterfly, obtained by twisting the wings."""
    if not is_flippable(B):
        raise NotFlippable(repr(B))
    out = Butterfly(
        dom=B.cod,
        cod=B.dom,
        E=B.E,
        kappa=B.iota,
        iota=B.kappa,
        sigma=B.rho,
        rho=B.sigma,
    )
    return _checked(out, "flip")


# ---------------------------------------------------------------------------
# morphism search


def _morphism_candidates(B: Butterfly, B2: Butterfly, find_all: bool) -> list[GroupHom]:
    if B.dom != B2.dom or B.cod != B2.cod or B.E.order != B2.E.order:
        return []
    E, E2 = B.E, B2.E
    n = E.order
    s1, r1, s2, r2 = B.sigma.map, B.rho.map, B2.sigma.map, B2.rho.map

    seed: dict[int, int] = {0: 0}
    for g in range(B.cod.G.order):
        a, b = B.iota.map[g], B2.iota.map[g]
        if seed.setdefault(a, b) != b:
            return []
    for h in range(B.dom.G.order):
        a, b = B.kappa.map[h], B2.kappa.map[h]
        if seed.setdefault(a, b) != b:
            return []

    def compatible(a: int, b: int) -> bool:
        return s2[b] == s1[a] and r2[b] == r1[a]

    if any(not compatible(a, b) for a, b in seed.items()):
        return []

    results: list[GroupHom] = []

    def close(f: list[int], used: set[int], queue: list[int]) -> bool:
        while queue:
            a = queue.pop()
            for x in range(n):
                if f[x] == -1:
                    continue
                for u, v in (
                    (E.table[a][x], E2.table[f[a]][f[x]]),
                    (E.table[x][a], E2.table[f[x]][f[a]]),
                ):
                    if f[u] == -1:
                        if v in used or not compatible(u, v):
                            return False
                        f[u] = v
                        used.add(v)
                        queue.append(u)
                    elif f[u] != v:
                        return False
        return True

    def extend(f: list[int], used: set[int]) -> bool:
        try:
            a = f.index(-1)
        except ValueError:
            results.append(GroupHom(E, E2, tuple(f)))
            return not find_all
        for b in range(n):
            if b in used or not compatible(a, b):
                continue
            f2, used2 = f[:], set(used)
            f2[a] = b
            used2.add(b)
            if close(f2, used2, [a]) and extend(f2, used2):
                return True
        return False

    f0 = [-1] * n
    used0: set[int] = set()
    for a, b in seed.items():
        if b in used0 and f0[a] != b:
            return []
        f0[a] = b
        used0.add(b)
    if close(f0, used0, list(seed.keys())):
        extend(f0, used0)
    return results


def isomorphic_butterflies(B: Butterfly, B2: Butterfly) -> ButterflyMorphism | None:
    """A witness morphism (necessarily iso) between parallel butterflies, or None."""
    found = _morphism_candidates(B, B2, find_all=False)
    if not found:
        return None
    return butterfly_morphism(B, B2, found[0])


def butterfly_morphisms(B: Butterfly, B2: Butterfly) -> list[ButterflyMorphism]:
    """Every morphism between the parallel butterflies, exhaustively."""
    return [butterfly_morphism(B, B2, f) for f in _morphism_candidates(B, B2, find_all=True)]


# ---------------------------------------------------------------------------
# split butterflies and morphisms of crossed modules


def _split_parts(P: XModMorphism):
    TG = denormalize(P.cod)
    EP, prH0, prG1 = product_and_pullback(P.p0, TG.c)
    pos = {pair: idx for idx, pair in enumerate(zip(prH0.map, prG1.map))}
    return TG, EP, prH0, prG1, pos


def split_from_morphism(P: XModMorphism) -> tuple[Butterfly, GroupHom]:
    """The split butterfly of a morphism: E is the pullback of p0 against the
    target map of the codomain 2-group; also returns the canonical section."""
    TG, EP, prH0, prG1, pos = _split_parts(P)
    H, G = P.dom.G, P.cod.G
    gbul = cokernel_embedding(P.cod)
    gemb = kernel_embedding(P.cod)
    bd = P.dom.boundary.map
    kappa = GroupHom(H, EP, tuple(pos[(bd[h], gbul.map[P.p.map[h]])] for h in range(H.order)))
    iota = GroupHom(G, EP, tuple(pos[(0, gemb.map[g])] for g in range(G.order)))
    B = Butterfly(
        dom=P.dom,
        cod=P.cod,
        E=EP,
        kappa=kappa,
        iota=iota,
        sigma=prH0,
        rho=prG1.then(TG.d),
    )
    section = GroupHom(
        P.dom.G0, EP, tuple(pos[(x, TG.e.map[P.p0.map[x]])] for x in range(P.dom.G0.order))
    )
    return _checked(B, "split_from_morphism"), section


def morphism_from_split(B: Butterfly, s: GroupHom) -> XModMorphism:
    """Recover a crossed module morphism from a split butterfly and a
    homomorphism section s of sigma: p0 = s;rho and p(h) = iota^-1(kappa(h)^-1 * s(boundary h))."""
    if s.dom != B.dom.G0 or s.cod != B.E:
        raise NotASection("section must map the base of dom into E")
    if s.then(B.sigma) != identity_hom(B.dom.G0):
        raise NotASection("s is not a section of sigma")
    iota_inv = {e: g for g, e in enumerate(B.iota.map)}
    E, H = B.E, B.dom.G
    bd = B.dom.boundary.map
    p_map = []
    for h in range(H.order):
        value = E.table[E.inv(B.kappa.map[h])][s.map[bd[h]]]
        if value not in iota_inv:
            raise ConstructionError("kappa(h)^-1 s(boundary h) escapes the iota image")
        p_map.append(iota_inv[value])
    return xmod_morphism(B.dom, B.cod, GroupHom(H, B.cod.G, tuple(p_map)), s.then(B.rho))


def reduced_compose(Q: XModMorphism, B: Butterfly) -> Butterfly:
    """Compose a morphism with a butterfly without the cokernel step: the
    middle group is the pullback of q0 against sigma."""
    if Q.cod != B.dom:
        raise NotComposable("the morphism must land in the butterfly's domain")
    E2, prK0, prE = product_and_pullback(Q.p0, B.sigma)
    pos = {pair: idx for idx, pair in enumerate(zip(prK0.map, prE.map))}
    K, G = Q.dom.G, B.cod.G
    bd = Q.dom.boundary.map
    kappa = GroupHom(K, E2, tuple(pos[(bd[k], B.kappa.map[Q.p.map[k]])] for k in range(K.order)))
    iota = GroupHom(G, E2, tuple(pos[(0, B.iota.map[g])] for g in range(G.order)))
    out = Butterfly(
        dom=Q.dom,
        cod=B.cod,
        E=E2,
        kappa=kappa,
        iota=iota,
        sigma=prK0,
        rho=prE.then(B.rho),
    )
    return _checked(out, "reduced_compose")


# ---------------------------------------------------------------------------
# the span of a butterfly


def span_of_butterfly(B: Butterfly) -> tuple[CrossedModule, XModMorphism, XModMorphism]:
    """The span (H <- [E] -> G): the middle crossed module is the cooperator
    phi: H x G -> E with the conjugation-through-sigma action; the left leg is
    a weak equivalence."""
    E, H, G = B.E, B.dom.G, B.cod.G
    k, i = B.kappa.map, B.iota.map
    for h in range(H.order):
        for g in range(G.order):
            if E.table[k[h]][i[g]] != E.table[i[g]][k[h]]:
                raise CooperatorFails(f"wing images do not commute at {(h, g)}")
    HxG, piH, piG = direct_product(H, G)
    pairs = list(zip(piH.map, piG.map))
    pos = {pair: idx for idx, pair in enumerate(pairs)}
    phi = GroupHom(HxG, E, tuple(E.table[k[h]][i[g]] for (h, g) in pairs))
    iota_inv = {e: g for g, e in enumerate(i)}
    perms = []
    for e in range(E.order):
        se = B.sigma.map[e]
        perm = []
        for (h, g) in pairs:
            h2 = B.dom.act(se, h)
            value = E.table[E.inv(k[h2])][E.conj(e, phi.map[pos[(h, g)]])]
            if value not in iota_inv:
                raise CooperatorFails(f"span action escapes the iota image at {(e, h, g)}")
            perm.append(pos[(h2, iota_inv[value])])
        perms.append(tuple(perm))
    middle = CrossedModule(HxG, E, phi, GroupAction(E, HxG, tuple(perms)), name=f"[{B.E.name}]")
    report = validate_crossed_module(middle)
    if not report.ok:
        raise ConstructionError(f"span middle is not a crossed module:\n{report}")
    left = xmod_morphism(middle, B.dom, piH, B.sigma)
    right = xmod_morphism(middle, B.cod, piG, B.rho)
    return middle, left, right


# ---------------------------------------------------------------------------
# butterfly morphisms from 2-cells, whiskering


def two_cell_image(cell: XModTwoCell) -> ButterflyMorphism:
    """The butterfly morphism E_P -> E_Q induced by a 2-cell: postcompose the
    arrow component with alpha at the base point."""
    BP, _ = split_from_morphism(cell.P)
    BQ, _ = split_from_morphism(cell.Q)
    TG, _, prH0, prG1, _ = _split_parts(cell.P)
    _, _, _, _, posQ = _split_parts(cell.Q)
    f_map = []
    for idx in range(BP.E.order):
        x, j = prH0.map[idx], prG1.map[idx]
        f_map.append(posQ[(x, TG.m[(j, cell.alpha[x])])])
    return butterfly_morphism(BP, BQ, GroupHom(BP.E, BQ.E, tuple(f_map)))


def _induced_on_quotient(parts_src, parts_dst, pair_image) -> GroupHom:
    P, pr1, pr2, pos, _, Q, pr = parts_src
    P2, q1, q2, pos2, _, Q2, pr2_ = parts_dst
    out = [-1] * Q.order
    for idx in range(P.order):
        target = pr2_.map[pos2[pair_image(pr1.map[idx], pr2.map[idx])]]
        if out[pr.map[idx]] not in (-1, target):
            raise ConstructionError("whiskered map is not constant on cosets")
        out[pr.map[idx]] = target
    return GroupHom(Q, Q2, tuple(out))


def whisker_right(f: ButterflyMorphism, B2: Butterfly) -> ButterflyMorphism:
    """The induced morphism compose(src, B2) -> compose(dst, B2)."""
    src, dst = compose(f.src, B2), compose(f.dst, B2)
    parts_src = _pullback_parts(f.src, B2)
    parts_dst = _pullback_parts(f.dst, B2)
    g = _induced_on_quotient(parts_src, parts_dst, lambda e, e2: (f.f.map[e], e2))
    return butterfly_morphism(src, dst, g)


def whisker_left(B: Butterfly, f: ButterflyMorphism) -> ButterflyMorphism:
    """The induced morphism compose(B, src) -> compose(B, dst)."""
    src, dst = compose(B, f.src), compose(B, f.dst)
    parts_src = _pullback_parts(B, f.src)
    parts_dst = _pullback_parts(B, f.dst)
    g = _induced_on_quotient(parts_src, parts_dst, lambda e, e2: (e, f.f.map[e2]))
    return butterfly_morphism(src, dst, g)


# ---------------------------------------------------------------------------
# fractors: the groupoid-level presentation


@dataclass(frozen=True)
class Fractor:
    """Two discrete fibrations out of the groupoids R => E and R[sigma] => E."""

    H2: Strict2Group
    G2: Strict2Group
    E: FinGroup
    R: Strict2Group
    Rsigma: Strict2Group
    left: TwoGroupFunctor
    right: TwoGroupFunctor


def _kernel_pair_groupoid(sigma: GroupHom) -> tuple[Strict2Group, GroupHom, GroupHom]:
    E = sigma.dom
    RS, pr1, pr2 = product_and_pullback(sigma, sigma)
    pos = {pair: idx for idx, pair in enumerate(zip(pr1.map, pr2.map))}
    e = GroupHom(E, RS, tuple(pos[(x, x)] for x in range(E.order)))
    i = GroupHom(RS, RS, tuple(pos[(pr2.map[a], pr1.map[a])] for a in range(RS.order)))
    m = {}
    for a in range(RS.order):
        for b in range(RS.order):
            if pr2.map[a] == pr1.map[b]:
                m[(a, b)] = pos[(pr1.map[a], pr2.map[b])]
    return Strict2Group(RS, E, pr1, pr2, e, m, i), pr1, pr2


def to_fractor(B: Butterfly) -> Fractor:
    """Present a butterfly as a pair of discrete fibrations over its middle group."""
    H2, G2 = denormalize(B.dom), denormalize(B.cod)
    E = B.E
    perms = tuple(
        tuple(B.dom.act(B.sigma.map[e], h) for h in range(B.dom.G.order)) for e in range(E.order)
    )
    wing = CrossedModule(B.dom.G, E, B.kappa, GroupAction(E, B.dom.G, perms))
    R = denormalize(wing)
    nH0, nE = B.dom.G0.order, E.order
    sigma_bar = GroupHom(
        R.G1, H2.G1,
        tuple(h * nH0 + B.sigma.map[e] for h in range(B.dom.G.order) for e in range(nE)),
    )
    Rsigma, pr1, pr2 = _kernel_pair_groupoid(B.sigma)
    iota_inv = {e: g for g, e in enumerate(B.iota.map)}
    nG0 = B.cod.G0.order
    rho_bar_map = []
    for a in range(Rsigma.G1.order):
        e1, e2 = pr1.map[a], pr2.map[a]
        g = iota_inv[E.table[e1][E.inv(e2)]]
        rho_bar_map.append(g * nG0 + B.rho.map[e2])
    rho_bar = GroupHom(Rsigma.G1, G2.G1, tuple(rho_bar_map))
    return Fractor(
        H2=H2,
        G2=G2,
        E=E,
        R=R,
        Rsigma=Rsigma,
        left=TwoGroupFunctor(R, H2, sigma_bar, B.sigma),
        right=TwoGroupFunctor(Rsigma, G2, rho_bar, B.rho),
    )


def _is_discrete_fibration_functor(F: TwoGroupFunctor) -> bool:
    """The target square is a pullback: arrows biject with (arrow below, object above)."""
    pairs = {
        (F.p1.map[a], F.dom.c.map[a]) for a in range(F.dom.G1.order)
    }
    wanted = {
        (b, x)
        for b in range(F.cod.G1.order)
        for x in range(F.dom.G0.order)
        if F.cod.c.map[b] == F.p0.map[x]
    }
    return len(pairs) == F.dom.G1.order and pairs == wanted


def validate_fractor(F: Fractor) -> ValidationReport:
    report = ValidationReport("fractor")
    from .xmod import validate_two_group_functor

    for T, label in ((F.R, "R"), (F.Rsigma, "Rsigma")):
        sub = validate_two_group(T)
        if not sub.ok:
            report.add("1-groupoid", label, f"{label} is not a groupoid: {sub.findings[0]}")
    for leg, label in ((F.left, "left"), (F.right, "right")):
        sub = validate_two_group_functor(leg)
        if not sub.ok:
            report.add("1-functor", label, f"{label} leg is not a functor: {sub.findings[0]}")
        if not _is_discrete_fibration_functor(leg):
            report.add("1-fibration", label, f"{label} leg is not a discrete fibration")
    sigma = F.left.p0
    if not sigma.is_surjective:
        report.add("2-surjection", None, "sigma is not surjective")
    arrows = {(F.Rsigma.d.map[a], F.Rsigma.c.map[a]) for a in range(F.Rsigma.G1.order)}
    wanted = {
        (e1, e2)
        for e1 in range(F.E.order)
        for e2 in range(F.E.order)
        if sigma.map[e1] == sigma.map[e2]
    }
    if arrows != wanted or F.Rsigma.G1.order != len(wanted):
        report.add("2-kernel-pair", None, "Rsigma is not the kernel pair of sigma")
    rho = F.right.p0
    for a in range(F.R.G1.order):
        if rho.map[F.R.d.map[a]] != rho.map[F.R.c.map[a]]:
            report.add("3-coequalizing", a, "rho does not coequalize the legs of R")
    return report


def check_fractor(F: Fractor) -> None:
    report = validate_fractor(F)
    for finding in report.findings:
        condition = int(finding.condition.split("-", 1)[0])
        raise FractorConditionFailed(condition, str(finding))


def from_fractor(F: Fractor) -> Butterfly:
    """Rebuild the butterfly: wings are recovered by lifting kernel arrows
    through the two discrete fibrations."""
    check_fractor(F)
    from .xmod import normalize

    dom, cod = normalize(F.H2), normalize(F.G2)
    sigma, rho = F.left.p0, F.right.p0
    kernel_H = kernel(F.H2.c).elements
    kappa_map = []
    for el in kernel_H:
        lifts = [
            a
            for a in range(F.R.G1.order)
            if F.left.p1.map[a] == el and F.R.c.map[a] == 0
        ]
        if len(lifts) != 1:
            raise FractorConditionFailed(1, f"no unique lift of kernel arrow {el}")
        kappa_map.append(F.R.d.map[lifts[0]])
    kernel_G = kernel(F.G2.c).elements
    iota_map = []
    for el in kernel_G:
        lifts = [
            a
            for a in range(F.Rsigma.G1.order)
            if F.right.p1.map[a] == el and F.Rsigma.c.map[a] == 0
        ]
        if len(lifts) != 1:
            raise FractorConditionFailed(1, f"no unique lift of kernel arrow {el}")
        iota_map.append(F.Rsigma.d.map[lifts[0]])
    B = Butterfly(
        dom=dom,
        cod=cod,
        E=F.E,
        kappa=GroupHom(dom.G, F.E, tuple(kappa_map)),
        iota=GroupHom(cod.G, F.E, tuple(iota_map)),
        sigma=sigma,
        rho=rho,
    )
    return _checked(B, "from_fractor")
