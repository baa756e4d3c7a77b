"""Weak morphisms of strict 2-groups and their dictionary with butterflies.

A monoidal functor (F0, F1, F2) is an ordinary functor between the underlying
groupoids together with comparison arrows F2(x,y) from F0(x)*F0(y) to
F0(x*y), natural in both arguments and associatively coherent.  Neither F0
nor F1 need preserve multiplication; a butterfly plus a set-theoretic section
of its surjective leg produces one, and conversely a monoidal functor is
assembled back into a butterfly whose middle group is a limit of triples.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .butterfly import Butterfly, validate_butterfly
from .errors import ConstructionError, GroupLawSearchFailed, NotAGroup, SectionInvalid
from .fingroup import GroupHom, construct_group, kernel
from .report import ValidationReport
from .xmod import Strict2Group, denormalize, normalize


@dataclass(frozen=True)
class MonoidalFunctor:
    """(F0, F1, F2) between strict 2-groups; F0 and F1 are bare functions."""

    dom: Strict2Group
    cod: Strict2Group
    F0: tuple[int, ...]
    F1: tuple[int, ...]
    F2: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        object.__setattr__(self, "F0", tuple(self.F0))
        object.__setattr__(self, "F1", tuple(self.F1))
        object.__setattr__(self, "F2", tuple(tuple(row) for row in self.F2))
        n0 = self.dom.G0.order
        if len(self.F0) != n0 or len(self.F1) != self.dom.G1.order:
            raise ValueError("F0/F1 must cover the domain")
        if len(self.F2) != n0 or any(len(row) != n0 for row in self.F2):
            raise ValueError("F2 must cover H0 x H0")

    def is_strict(self) -> bool:
        e, t = self.cod.e.map, self.dom.G0.table
        return all(
            self.F2[x][y] == e[self.F0[t[x][y]]]
            for x in range(self.dom.G0.order)
            for y in range(self.dom.G0.order)
        )


def check_monoidal(M: MonoidalFunctor) -> ValidationReport:
    """Functoriality, endpoint/naturality conditions on F2, normalization,
    and the associativity coherence (the factor-set cocycle identity)."""
    report = ValidationReport("monoidal functor")
    T, U = M.dom, M.cod
    F0, F1, F2 = M.F0, M.F1, M.F2
    for u in range(T.G1.order):
        if U.d.map[F1[u]] != F0[T.d.map[u]]:
            report.add("functor-source", u, "d(F1 u) != F0(d u)")
        if U.c.map[F1[u]] != F0[T.c.map[u]]:
            report.add("functor-target", u, "c(F1 u) != F0(c u)")
    for x in range(T.G0.order):
        if F1[T.e.map[x]] != U.e.map[F0[x]]:
            report.add("functor-unit", x, "F1(e x) != e(F0 x)")
    for (u, v), w in T.m.items():
        if F1[w] != U.m[(F1[u], F1[v])]:
            report.add("functor-composition", (u, v), "F1 does not preserve m")
    if not report.ok:
        return report
    t0, u0, u1 = T.G0.table, U.G0.table, U.G1.table
    for x in range(T.G0.order):
        for y in range(T.G0.order):
            arr = F2[x][y]
            if U.d.map[arr] != u0[F0[x]][F0[y]]:
                report.add("f2-source", (x, y), "d(F2) != F0(x)F0(y)")
            if U.c.map[arr] != F0[t0[x][y]]:
                report.add("f2-target", (x, y), "c(F2) != F0(xy)")
    if F0[0] != 0:
        report.add("normalization", 0, "F0(1) != 1")
    for x in range(T.G0.order):
        if F2[0][x] != U.e.map[F0[x]]:
            report.add("normalization", (0, x), "F2(1,x) is not an identity arrow")
        if F2[x][0] != U.e.map[F0[x]]:
            report.add("normalization", (x, 0), "F2(x,1) is not an identity arrow")
    if not report.ok:
        return report
    d, c = T.d.map, T.c.map
    for u in range(T.G1.order):
        for v in range(T.G1.order):
            lhs = U.m[(F2[d[u]][d[v]], F1[T.G1.table[u][v]])]
            rhs = U.m[(u1[F1[u]][F1[v]], F2[c[u]][c[v]])]
            if lhs != rhs:
                report.add("f2-naturality", (u, v), "F2 is not natural")
    e = U.e.map
    for x in range(T.G0.order):
        for y in range(T.G0.order):
            for z in range(T.G0.order):
                lhs = U.m[(u1[F2[x][y]][e[F0[z]]], F2[t0[x][y]][z])]
                rhs = U.m[(u1[e[F0[x]]][F2[y][z]], F2[x][t0[y][z]])]
                if lhs != rhs:
                    report.add("coherence", (x, y, z), "associativity coherence fails")
    return report


@dataclass(frozen=True)
class SetSection:
    """A normalized set-theoretic section of a butterfly's surjective leg."""

    of: Butterfly
    s: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "s", tuple(self.s))


def set_section(B: Butterfly, s) -> SetSection:
    s = tuple(s)
    if len(s) != B.dom.G0.order:
        raise SectionInvalid("section must be defined on all of H0")
    if s[0] != 0:
        raise SectionInvalid("section must be normalized: s(1) = 1")
    for x, e in enumerate(s):
        if B.sigma.map[e] != x:
            raise SectionInvalid(f"s({x}) is not in the sigma-fiber of {x}")
    return SetSection(B, s)


def all_set_sections(B: Butterfly) -> list[SetSection]:
    """Every normalized set-theoretic section of sigma."""
    fibers = [
        [e for e in range(B.E.order) if B.sigma.map[e] == x]
        for x in range(B.dom.G0.order)
    ]
    out = []
    for tail in itertools.product(*fibers[1:]):
        out.append(SetSection(B, (0,) + tail))
    return out


def identity_monoidal(T: Strict2Group) -> MonoidalFunctor:
    return MonoidalFunctor(
        T,
        T,
        tuple(range(T.G0.order)),
        tuple(range(T.G1.order)),
        tuple(
            tuple(T.e.map[T.G0.table[x][y]] for y in range(T.G0.order))
            for x in range(T.G0.order)
        ),
    )


def extract_monoidal(B: Butterfly, section: SetSection) -> MonoidalFunctor:
    """The weak morphism of a butterfly along a set-theoretic section.

    F0 = s;rho on objects; the arrow component F1(h, x) divides kappa(h) into
    the section, and F2 measures the failure of s to be multiplicative.
    """
    if section.of != B:
        raise SectionInvalid("section belongs to a different butterfly")
    s = section.s
    TH, TG = denormalize(B.dom), denormalize(B.cod)
    E, H0, G0 = B.E, B.dom.G0, B.cod.G0
    k, r = B.kappa.map, B.rho.map
    iota_inv = {e: g for g, e in enumerate(B.iota.map)}
    bd = B.dom.boundary.map
    F0 = tuple(r[s[x]] for x in range(H0.order))
    nG0 = G0.order
    F1 = []
    for h in range(B.dom.G.order):
        for x in range(H0.order):
            value = E.table[E.table[E.inv(k[h])][s[H0.table[bd[h]][x]]]][E.inv(s[x])]
            if value not in iota_inv:
                raise SectionInvalid("division escapes the iota image")
            F1.append(iota_inv[value] * nG0 + F0[x])
    F2 = []
    for x in range(H0.order):
        row = []
        for y in range(H0.order):
            xy = H0.table[x][y]
            value = E.table[E.table[s[x]][s[y]]][E.inv(s[xy])]
            if value not in iota_inv:
                raise SectionInvalid("section defect escapes the iota image")
            row.append(iota_inv[value] * nG0 + r[s[xy]])
        F2.append(tuple(row))
    M = MonoidalFunctor(TH, TG, F0, tuple(F1), tuple(F2))
    report = check_monoidal(M)
    if not report.ok:
        raise ConstructionError(f"extracted functor fails validation:\n{report}")
    return M


def butterfly_from_monoidal(M: MonoidalFunctor) -> Butterfly:
    """Assemble a butterfly from a normalized monoidal functor.

    The middle group lives on triples (y, g, x) with g an arrow from x to
    F0(y); multiplication composes g1*g2 with the comparison arrow F2(y1,y2),
    and associativity is exactly the coherence of F2.
    """
    report = check_monoidal(M)
    if not report.ok:
        raise GroupLawSearchFailed(f"functor is not monoidal:\n{report}")
    T, U = M.dom, M.cod
    dom, cod = normalize(T), normalize(U)
    triples = [
        (y, g, U.d.map[g])
        for y in range(T.G0.order)
        for g in range(U.G1.order)
        if M.F0[y] == U.c.map[g]
    ]
    pos = {t: i for i, t in enumerate(triples)}
    u1, t0, u0 = U.G1.table, T.G0.table, U.G0.table
    table = []
    for (y1, g1, x1) in triples:
        row = []
        for (y2, g2, x2) in triples:
            product = (
                t0[y1][y2],
                U.m[(u1[g1][g2], M.F2[y1][y2])],
                u0[x1][x2],
            )
            if product not in pos:
                raise GroupLawSearchFailed(f"product of triples leaves the limit at {product}")
            row.append(pos[product])
        table.append(row)
    try:
        P0 = construct_group(table, f"P0({T.G1.name}->{U.G1.name})")
    except NotAGroup as exc:
        raise GroupLawSearchFailed(f"triple multiplication is not a group law: {exc}") from exc
    if P0.relabeling is not None:
        raise GroupLawSearchFailed("limit identity was not the normalized triple")
    try:
        sigma = GroupHom(P0, T.G0, tuple(y for (y, _, _) in triples))
        rho = GroupHom(P0, U.G0, tuple(x for (_, _, x) in triples))
        kernel_H = kernel(T.c).elements
        kappa = GroupHom(
            dom.G,
            P0,
            tuple(pos[(T.d.map[h1], M.F1[T.i.map[h1]], 0)] for h1 in kernel_H),
        )
        kernel_G = kernel(U.c).elements
        iota = GroupHom(
            cod.G, P0, tuple(pos[(0, g1, U.d.map[g1])] for g1 in kernel_G)
        )
    except (ValueError, KeyError) as exc:
        raise GroupLawSearchFailed(f"structure maps fail on the limit: {exc}") from exc
    B = Butterfly(dom=dom, cod=cod, E=P0, kappa=kappa, iota=iota, sigma=sigma, rho=rho)
    final = validate_butterfly(B)
    if not final.ok:
        raise GroupLawSearchFailed(f"limit butterfly fails validation:\n{final}")
    return B


def canonical_limit_section(B: Butterfly, M: MonoidalFunctor) -> SetSection:
    """The section y -> (y, identity arrow at F0(y), F0(y)) of a limit butterfly."""
    U = M.cod
    triples = [
        (y, g, U.d.map[g])
        for y in range(M.dom.G0.order)
        for g in range(U.G1.order)
        if M.F0[y] == U.c.map[g]
    ]
    pos = {t: i for i, t in enumerate(triples)}
    return set_section(
        B, tuple(pos[(y, U.e.map[M.F0[y]], M.F0[y])] for y in range(M.dom.G0.order))
    )


def find_monoidal_natural_iso(M: MonoidalFunctor, N: MonoidalFunctor):
    """A monoidal natural isomorphism between parallel monoidal functors, or None.

    A family theta(x): F0(x) -> F0'(x), natural in x and compatible with the
    comparison arrows."""
    if M.dom != N.dom or M.cod != N.cod:
        return None
    T, U = M.dom, M.cod
    fibers = []
    for x in range(T.G0.order):
        fiber = [
            a
            for a in range(U.G1.order)
            if U.d.map[a] == M.F0[x] and U.c.map[a] == N.F0[x]
        ]
        if not fiber:
            return None
        fibers.append(fiber)
    u1 = U.G1.table
    t0 = T.G0.table
    for combo in itertools.product(*fibers):
        if any(
            U.m[(M.F1[u], combo[T.c.map[u]])] != U.m[(combo[T.d.map[u]], N.F1[u])]
            for u in range(T.G1.order)
        ):
            continue
        if any(
            U.m[(M.F2[x][y], combo[t0[x][y]])] != U.m[(u1[combo[x]][combo[y]], N.F2[x][y])]
            for x in range(T.G0.order)
            for y in range(T.G0.order)
        ):
            continue
        return combo
    return None
