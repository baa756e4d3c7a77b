"""Classification of group extensions H <- E <- G via butterflies and via
Schreier factor sets.

Extensions of H by G correspond to butterflies from the discrete crossed
module on H to the automorphism crossed module of G; equivalence classes are
counted twice, once as orbits of butterflies under butterfly morphisms and
once by the classical factor-set calculus, and the two answers must agree.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache

from .butterfly import (
    Butterfly,
    butterfly_morphisms,
    isomorphic_butterflies,
    validate_butterfly,
)
from .errors import BoundExceeded, ConstructionError, ShapeMismatch
from .fingroup import (
    DEFAULT_BOUND,
    FinGroup,
    GroupAction,
    GroupHom,
    all_homomorphisms,
    automorphism_group,
    cyclic_group,
    dicyclic_group,
    direct_product,
    identity_hom,
    isomorphism_search,
    kernel,
    semidirect_product,
    trivial_action,
    trivial_group,
    zero_hom,
)
from .xmod import CrossedModule

_ONE = trivial_group()


def discrete_xmod(H: FinGroup) -> CrossedModule:
    """D(H) = (0 -> H): trivial top group over H."""
    return CrossedModule(_ONE, H, zero_hom(_ONE, H), trivial_action(H, _ONE), name=f"D({H.name})")


@lru_cache(maxsize=None)
def aut_xmod(G: FinGroup, bound: int = DEFAULT_BOUND) -> CrossedModule:
    """A(G) = (inner: G -> Aut G, evaluation action)."""
    A, ev = automorphism_group(G, bound)
    pos = {p: i for i, p in enumerate(ev.act)}
    inner = GroupHom(
        G, A, tuple(pos[tuple(G.conj(g, a) for a in range(G.order))] for g in range(G.order))
    )
    return CrossedModule(G, A, inner, ev, name=f"A({G.name})")


def conjugation_xmod(G: FinGroup) -> CrossedModule:
    """(id: G -> G, conjugation)."""
    from .fingroup import conjugation_action

    return CrossedModule(G, G, identity_hom(G), conjugation_action(G), name=f"C({G.name})")


@dataclass(frozen=True)
class ExtensionDatum:
    """A short exact sequence H <- E <- G with explicit maps."""

    H: FinGroup
    G: FinGroup
    E: FinGroup
    iota: GroupHom
    sigma: GroupHom

    def __post_init__(self):
        if self.iota.dom != self.G or self.iota.cod != self.E:
            raise ValueError("iota must map G into E")
        if self.sigma.dom != self.E or self.sigma.cod != self.H:
            raise ValueError("sigma must map E onto H")
        if not self.iota.is_injective:
            raise ValueError("iota must be injective")
        if not self.sigma.is_surjective:
            raise ValueError("sigma must be surjective")
        if frozenset(self.iota.map) != frozenset(kernel(self.sigma).elements):
            raise ValueError("image(iota) must equal kernel(sigma)")

    def is_split(self) -> bool:
        ident = tuple(range(self.H.order))
        return any(s.then(self.sigma).map == ident for s in all_homomorphisms(self.H, self.E))


def butterfly_from_extension(X: ExtensionDatum, bound: int = DEFAULT_BOUND) -> Butterfly:
    """The butterfly D(H) -> A(G) of an extension; the Aut-leg is the
    conjugation representation and is uniquely determined."""
    dom = discrete_xmod(X.H)
    cod = aut_xmod(X.G, bound)
    iota_inv = {e: g for g, e in enumerate(X.iota.map)}
    pos = {p: i for i, p in enumerate(cod.action.act)}
    rho_map = []
    for e in range(X.E.order):
        perm = tuple(iota_inv[X.E.conj(e, X.iota.map[g])] for g in range(X.G.order))
        rho_map.append(pos[perm])
    B = Butterfly(
        dom=dom,
        cod=cod,
        E=X.E,
        kappa=zero_hom(_ONE, X.E),
        iota=X.iota,
        sigma=X.sigma,
        rho=GroupHom(X.E, cod.G0, tuple(rho_map)),
    )
    report = validate_butterfly(B)
    if not report.ok:
        raise ConstructionError(f"extension does not yield a butterfly:\n{report}")
    return B


def extension_from_butterfly(B: Butterfly) -> ExtensionDatum:
    """Forget the Aut-leg of a butterfly D(H) -> A(G)."""
    if B.dom.G.order != 1:
        raise ShapeMismatch("domain is not a discrete crossed module")
    if B.cod != aut_xmod(B.cod.G, bound=max(DEFAULT_BOUND, B.cod.G.order)):
        raise ShapeMismatch("codomain is not the automorphism crossed module of its top group")
    return ExtensionDatum(H=B.dom.G0, G=B.cod.G, E=B.E, iota=B.iota, sigma=B.sigma)


def extension_equivalences(X: ExtensionDatum, Y: ExtensionDatum) -> list[GroupHom]:
    """All isomorphisms E -> E' commuting with iota and sigma (fixing H and G)."""
    if X.H != Y.H or X.G != Y.G:
        return []
    out = []
    for theta in all_homomorphisms(X.E, Y.E):
        if not theta.is_isomorphism:
            continue
        if X.iota.then(theta) == Y.iota and theta.then(Y.sigma) == X.sigma:
            out.append(theta)
    return out


# ---------------------------------------------------------------------------
# Schreier factor sets


@dataclass(frozen=True)
class FactorSet:
    """Normalized Schreier data: phi into Aut(G) indices, f into G indices."""

    H: FinGroup
    G: FinGroup
    phi: tuple[int, ...]
    f: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        if len(self.phi) != self.H.order:
            raise ValueError("phi must be defined on H")
        if len(self.f) != self.H.order or any(len(row) != self.H.order for row in self.f):
            raise ValueError("f must be defined on H x H")


def validate_factor_set(fs: FactorSet, aut: FinGroup, ev: GroupAction) -> bool:
    """Normalization plus the two Schreier conditions."""
    H, G = fs.H, fs.G
    phi, f = fs.phi, fs.f
    if phi[0] != 0 or any(f[0][y] != 0 for y in range(H.order)) or any(
        f[x][0] != 0 for x in range(H.order)
    ):
        return False
    conj_pos = {p: i for i, p in enumerate(ev.act)}
    for x in range(H.order):
        for y in range(H.order):
            composed = tuple(ev.act[phi[x]][ev.act[phi[y]][g]] for g in range(G.order))
            conj_then = tuple(
                G.conj(f[x][y], ev.act[phi[H.table[x][y]]][g]) for g in range(G.order)
            )
            if composed != conj_then:
                return False
            if composed not in conj_pos:
                return False
    for x in range(H.order):
        for y in range(H.order):
            for z in range(H.order):
                lhs = G.table[ev.act[phi[x]][f[y][z]]][f[x][H.table[y][z]]]
                rhs = G.table[f[x][y]][f[H.table[x][y]][z]]
                if lhs != rhs:
                    return False
    return True


def factor_set_to_extension(fs: FactorSet, validated: bool = False) -> ExtensionDatum:
    """Schreier reconstruction: the twisted product on G x H.

    With validated=False the full group axioms are re-checked by
    construct_group; otherwise associativity is certified by the Schreier
    conditions and only the cheap checks run.
    """
    from .fingroup import construct_group

    H, G = fs.H, fs.G
    _, ev = automorphism_group(G, bound=max(DEFAULT_BOUND, G.order))
    nH = H.order
    idx = lambda g, x: g * nH + x
    table = [[0] * (G.order * nH) for _ in range(G.order * nH)]
    for g1 in range(G.order):
        for x1 in range(nH):
            row = table[idx(g1, x1)]
            for g2 in range(G.order):
                twisted = G.table[g1][ev.act[fs.phi[x1]][g2]]
                for x2 in range(nH):
                    row[idx(g2, x2)] = idx(G.table[twisted][fs.f[x1][x2]], H.table[x1][x2])
    if validated:
        E = FinGroup(table, f"E({G.name},{H.name})", _validated=True)
        if E.table[0][0] != 0:
            raise ConstructionError("reconstructed table lost the identity")
    else:
        E = construct_group(table, f"E({G.name},{H.name})")
        if E.relabeling is not None:
            raise ConstructionError("reconstructed identity was not at index 0")
    iota = GroupHom(G, E, tuple(idx(g, 0) for g in range(G.order)))
    sigma = GroupHom(E, H, tuple(x for g in range(G.order) for x in range(nH)))
    return ExtensionDatum(H=H, G=G, E=E, iota=iota, sigma=sigma)


def factor_set_of_extension(X: ExtensionDatum, section: tuple[int, ...]) -> FactorSet:
    """Read (phi, f) off an extension along a normalized set section of sigma."""
    G, E = X.G, X.E
    _, ev = automorphism_group(G, bound=max(DEFAULT_BOUND, G.order))
    pos = {p: i for i, p in enumerate(ev.act)}
    iota_inv = {e: g for g, e in enumerate(X.iota.map)}
    phi = []
    for x in range(X.H.order):
        perm = tuple(iota_inv[E.conj(section[x], X.iota.map[g])] for g in range(G.order))
        phi.append(pos[perm])
    f = []
    for x in range(X.H.order):
        row = []
        for y in range(X.H.order):
            value = E.table[E.table[section[x]][section[y]]][E.inv(section[X.H.table[x][y]])]
            row.append(iota_inv[value])
        f.append(tuple(row))
    return FactorSet(X.H, G, tuple(phi), tuple(f))


def enumerate_cocycles(H: FinGroup, G: FinGroup, bound: int = 16) -> list[FactorSet]:
    """All normalized pairs (phi, f) satisfying the Schreier conditions.

    Backtracking over the non-identity pairs of f with incremental checking
    of every cocycle triple whose inputs are already assigned.
    """
    if H.order * G.order > bound:
        raise BoundExceeded("enumerate_cocycles", H.order * G.order, bound)
    aut, ev = automorphism_group(G, bound=max(DEFAULT_BOUND, G.order))
    nH = H.order
    free = [(x, y) for x in range(1, nH) for y in range(1, nH)]
    slot = {p: i for i, p in enumerate(free)}

    def needed(x: int, y: int):
        return None if (x == 0 or y == 0) else slot[(x, y)]

    # bucket each cocycle triple by the last slot among its required f-values
    buckets: list[list[tuple[int, int, int]]] = [[] for _ in free]
    for a, b, c in itertools.product(range(1, nH), repeat=3):
        slots = {
            needed(b, c),
            needed(a, H.table[b][c]),
            needed(a, b),
            needed(H.table[a][b], c),
        }
        slots.discard(None)
        if slots:
            buckets[max(slots)].append((a, b, c))

    results: list[FactorSet] = []
    for phi_hom in all_homomorphisms(H, aut):
        phi = phi_hom.map
        # the first Schreier condition must already hold with some f; it fixes
        # nothing by itself, so check it per-assignment below via conjugation
        act = [ev.act[phi[x]] for x in range(nH)]
        fvals = [0] * len(free)

        def value(x: int, y: int) -> int:
            return 0 if (x == 0 or y == 0) else fvals[slot[(x, y)]]

        def triple_ok(a: int, b: int, c: int) -> bool:
            lhs = G.table[act[a][value(b, c)]][value(a, H.table[b][c])]
            rhs = G.table[value(a, b)][value(H.table[a][b], c)]
            return lhs == rhs

        def pair_ok(x: int, y: int) -> bool:
            composed = tuple(act[x][act[y][g]] for g in range(G.order))
            target = tuple(G.conj(value(x, y), act[H.table[x][y]][g]) for g in range(G.order))
            return composed == target

        def backtrack(k: int):
            if k == len(free):
                results.append(FactorSet(H, G, tuple(phi), _as_matrix(nH, value)))
                return
            x, y = free[k]
            for g in range(G.order):
                fvals[k] = g
                if pair_ok(x, y) and all(triple_ok(*t) for t in buckets[k]):
                    backtrack(k + 1)
            fvals[k] = 0

        backtrack(0)
    return results


def _as_matrix(nH: int, value) -> tuple[tuple[int, ...], ...]:
    return tuple(tuple(value(x, y) for y in range(nH)) for x in range(nH))


def twist_factor_set(fs: FactorSet, h: tuple[int, ...], ev: GroupAction, pos: dict) -> FactorSet:
    """The equivalent factor set obtained by changing the section by h: H -> G."""
    H, G = fs.H, fs.G
    phi2 = []
    for x in range(H.order):
        perm = tuple(G.conj(h[x], ev.act[fs.phi[x]][g]) for g in range(G.order))
        phi2.append(pos[perm])
    f2 = []
    for x in range(H.order):
        row = []
        for y in range(H.order):
            value = G.table[
                G.table[G.table[h[x]][ev.act[fs.phi[x]][h[y]]]][fs.f[x][y]]
            ][G.inv(h[H.table[x][y]])]
            row.append(value)
        f2.append(tuple(row))
    return FactorSet(H, G, tuple(phi2), tuple(f2))


def factor_set_oracle(H: FinGroup, G: FinGroup, bound: int = 16) -> list[list[FactorSet]]:
    """Equivalence classes of factor sets under section changes.

    Classes are orbits of the twisting action of normalized maps h: H -> G;
    the reconstruction of each class representative is re-validated as a
    genuine group.
    """
    cocycles = enumerate_cocycles(H, G, bound)
    _, ev = automorphism_group(G, bound=max(DEFAULT_BOUND, G.order))
    pos = {p: i for i, p in enumerate(ev.act)}
    index = {(fs.phi, fs.f): i for i, fs in enumerate(cocycles)}
    assigned = [-1] * len(cocycles)
    classes: list[list[FactorSet]] = []
    h_candidates = list(itertools.product(range(G.order), repeat=H.order - 1))
    for i, fs in enumerate(cocycles):
        if assigned[i] != -1:
            continue
        label = len(classes)
        members = []
        for tail in h_candidates:
            h = (0,) + tail
            twisted = twist_factor_set(fs, h, ev, pos)
            j = index[(twisted.phi, twisted.f)]
            if assigned[j] == -1:
                assigned[j] = label
                members.append(cocycles[j])
        classes.append(members)
        factor_set_to_extension(fs, validated=False)
    return classes


# ---------------------------------------------------------------------------
# two-route classification


@dataclass(frozen=True)
class ExtensionClass:
    representative: ExtensionDatum
    factor_set: FactorSet
    butterfly: Butterfly
    split: bool
    e_group: str
    count: int


def classify_extensions(H: FinGroup, G: FinGroup, bound: int = 16) -> list[ExtensionClass]:
    """Classify extensions of H by G on the butterfly side.

    Every cocycle is reconstructed into an extension and then a butterfly;
    classes are orbits under butterfly morphisms, found by backtracking
    search, independently of the coboundary calculus of the oracle.
    """
    if H.order * G.order > bound:
        raise BoundExceeded("classify_extensions", H.order * G.order, bound)
    cocycles = enumerate_cocycles(H, G, bound)
    reps: list[Butterfly] = []
    data: list[tuple[ExtensionDatum, FactorSet]] = []
    counts: list[int] = []
    for fs in cocycles:
        datum = factor_set_to_extension(fs, validated=True)
        B = butterfly_from_extension(datum)
        for k, rep in enumerate(reps):
            if isomorphic_butterflies(B, rep) is not None:
                counts[k] += 1
                break
        else:
            reps.append(B)
            data.append((datum, fs))
            counts.append(1)
    out = []
    for k, B in enumerate(reps):
        datum, fs = data[k]
        factor_set_to_extension(fs, validated=False)  # full re-validation per class
        out.append(
            ExtensionClass(
                representative=datum,
                factor_set=fs,
                butterfly=B,
                split=datum.is_split(),
                e_group=identify_group(datum.E),
                count=counts[k],
            )
        )
    return out


# ---------------------------------------------------------------------------
# naming small groups


@lru_cache(maxsize=None)
def standard_catalog(order: int) -> tuple[tuple[str, FinGroup], ...]:
    """Well-known groups of the given order, used only for display names."""
    groups: list[tuple[str, FinGroup]] = []

    def add(name: str, G: FinGroup):
        if G.order == order and not any(isomorphism_search(G, K, bound=32) for _, K in groups):
            groups.append((name, G))

    for parts in _abelian_factorizations(order):
        name = "x".join(f"Z{p}" for p in parts)
        G = cyclic_group(parts[0])
        for p in parts[1:]:
            G = direct_product(G, cyclic_group(p))[0]
        add(name, G)
    if order % 2 == 0 and order > 2:
        n = order // 2
        Zn = cyclic_group(n)
        inv = GroupAction(cyclic_group(2), Zn, (tuple(range(n)), tuple((-a) % n for a in range(n))))
        add(f"D{n}", semidirect_product(inv)[0])
    if order % 4 == 0 and order >= 8:
        add(f"Dic{order // 4}", dicyclic_group(order // 4))
    if order == 12:
        V4 = direct_product(cyclic_group(2), cyclic_group(2))[0]
        autV4, ev = automorphism_group(V4)
        three = next(i for i in range(6) if autV4.element_orders[i] == 3)
        rot = GroupHom(cyclic_group(3), autV4, (0, three, autV4.table[three][three]))
        act = GroupAction(cyclic_group(3), V4, tuple(ev.act[rot.map[x]] for x in range(3)))
        add("A4", semidirect_product(act)[0])
    if order == 16:
        Z8 = cyclic_group(8)
        for name, mult in (("SD16", 3), ("M16", 5)):
            act = GroupAction(
                cyclic_group(2), Z8, (tuple(range(8)), tuple((mult * a) % 8 for a in range(8)))
            )
            add(name, semidirect_product(act)[0])
        Z4 = cyclic_group(4)
        act = GroupAction(Z4, Z4, tuple(
            tuple(a if x % 2 == 0 else (-a) % 4 for a in range(4)) for x in range(4)
        ))
        add("Z4:Z4", semidirect_product(act)[0])
        D4 = standard_catalog(8)
        for name, K in D4:
            if name in ("D4", "Dic2"):
                pretty = "Q8" if name == "Dic2" else name
                add(f"{pretty}xZ2", direct_product(K, cyclic_group(2))[0])
    return tuple(groups)


def _abelian_factorizations(order: int, smallest: int = 2) -> list[tuple[int, ...]]:
    if order == 1:
        return [()]
    out = []
    d = smallest
    while d <= order:
        if order % d == 0:
            for rest in _abelian_factorizations(order // d, d):
                out.append((d,) + rest)
        d += 1
    return out


def identify_group(E: FinGroup) -> str:
    """A display name for E, via the catalog; Dic2 is reported as Q8."""
    if E.order == 1:
        return "1"
    for name, K in standard_catalog(E.order):
        if isomorphism_search(E, K, bound=max(32, E.order)) is not None:
            return "Q8" if name == "Dic2" else name
    return f"order{E.order}-unrecognized"
