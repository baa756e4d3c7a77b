"""Exact finite-group kernel: Cayley tables, homomorphisms, actions, limits.

Every group is a multiplication table over element indices 0..order-1 with
the identity pinned at index 0.  Constructed groups (quotients, pullbacks,
semidirect products) carry a canonical element order so that equal inputs
produce bit-identical outputs.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Optional, Sequence

from .errors import BoundExceeded, CodomainMismatch, NotAGroup, NotNormal

DEFAULT_BOUND = 24


class FinGroup:
    """A finite group given by its Cayley table, identity at index 0.

    Equality is table equality; sameness up to relabeling is decided by
    :func:`isomorphism_search`.
    """

    __slots__ = ("order", "table", "name", "element_labels", "inverse", "relabeling", "__dict__")

    def __init__(
        self,
        table: Sequence[Sequence[int]],
        name: str = "G",
        element_labels: Optional[Sequence[str]] = None,
        _validated: bool = False,
    ):
        self.table: tuple[tuple[int, ...], ...] = tuple(tuple(int(x) for x in row) for row in table)
        self.order = len(self.table)
        self.name = name
        self.element_labels = tuple(element_labels) if element_labels is not None else None
        self.relabeling: Optional[tuple[int, ...]] = None
        if not _validated:
            _check_group_table(self.table)
        self.inverse = _inverse_array(self.table)

    def mul(self, a: int, b: int) -> int:
        return self.table[a][b]

    def inv(self, a: int) -> int:
        return self.inverse[a]

    def conj(self, x: int, a: int) -> int:
        """x a x^-1."""
        return self.table[self.table[x][a]][self.inverse[x]]

    def elements(self) -> range:
        return range(self.order)

    def label(self, a: int) -> str:
        if self.element_labels is not None:
            return self.element_labels[a]
        return str(a)

    @cached_property
    def is_abelian(self) -> bool:
        t = self.table
        return all(t[a][b] == t[b][a] for a in range(self.order) for b in range(a))

    @cached_property
    def element_orders(self) -> tuple[int, ...]:
        orders = []
        for a in range(self.order):
            k, x = 1, a
            while x != 0:
                x = self.table[x][a]
                k += 1
            orders.append(k)
        return tuple(orders)

    def order_profile(self) -> tuple[tuple[int, int], ...]:
        counts: dict[int, int] = {}
        for o in self.element_orders:
            counts[o] = counts.get(o, 0) + 1
        return tuple(sorted(counts.items()))

    def __eq__(self, other: object) -> bool:
        return isinstance(other, FinGroup) and self.table == other.table

    def __hash__(self) -> int:
        return hash(self.table)

    def __repr__(self) -> str:
        return f"FinGroup({self.name!r}, order={self.order})"


def _check_group_table(table: tuple[tuple[int, ...], ...]) -> None:
    n = len(table)
    if n == 0:
        raise NotAGroup("empty table")
    full = set(range(n))
    for i, row in enumerate(table):
        if len(row) != n:
            raise NotAGroup(f"row {i} has length {len(row)}, expected {n}")
        if set(row) != full:
            raise NotAGroup(f"row {i} is not a permutation of 0..{n - 1}")
    for j in range(n):
        if {table[i][j] for i in range(n)} != full:
            raise NotAGroup(f"column {j} is not a permutation of 0..{n - 1}")
    for a in range(n):
        if table[0][a] != a or table[a][0] != a:
            raise NotAGroup("index 0 is not a two-sided identity")
    for a in range(n):
        ta = table[a]
        for b in range(n):
            tab = ta[b]
            tb = table[b]
            for c in range(n):
                if table[tab][c] != ta[tb[c]]:
                    raise NotAGroup(f"associativity fails at ({a},{b},{c})")


def _inverse_array(table: tuple[tuple[int, ...], ...]) -> tuple[int, ...]:
    n = len(table)
    inv = [0] * n
    for a in range(n):
        inv[a] = table[a].index(0)
    return tuple(inv)


def construct_group(
    table: Sequence[Sequence[int]],
    name: str = "G",
    element_labels: Optional[Sequence[str]] = None,
) -> FinGroup:
    """Validate a Cayley table, relocating the identity to index 0 if needed."""
    rows = [list(r) for r in table]
    n = len(rows)
    if n < 1:
        raise NotAGroup("table must have side >= 1")
    for i, row in enumerate(rows):
        if len(row) != n:
            raise NotAGroup(f"row {i} has length {len(row)}, expected {n}")
        for x in row:
            if not isinstance(x, int) or x < 0 or x >= n:
                raise NotAGroup(f"entry {x!r} in row {i} out of range")
    identity = None
    for e in range(n):
        if all(rows[e][a] == a and rows[a][e] == a for a in range(n)):
            identity = e
            break
    if identity is None:
        raise NotAGroup("no two-sided identity element")
    relabeling = None
    if identity != 0:
        # swap the identity into slot 0 and remember the permutation used
        perm = list(range(n))
        perm[0], perm[identity] = identity, 0
        rows = [[perm.index(rows[perm[a]][perm[b]]) for b in range(n)] for a in range(n)]
        if element_labels is not None:
            element_labels = [element_labels[perm[a]] for a in range(n)]
        relabeling = tuple(perm)
    group = FinGroup(rows, name, element_labels)
    group.relabeling = relabeling
    return group


# ---------------------------------------------------------------------------
# standard constructions used by tests, fixtures and the CLI


def trivial_group(name: str = "1") -> FinGroup:
    return FinGroup([[0]], name, ("1",), _validated=True)


def cyclic_group(n: int, name: Optional[str] = None) -> FinGroup:
    table = [[(a + b) % n for b in range(n)] for a in range(n)]
    labels = tuple(str(a) for a in range(n))
    return FinGroup(table, name or f"Z{n}", labels, _validated=True)


def symmetric_group(n: int) -> FinGroup:
    """S_n on tuples, identity first, remaining permutations in lex order."""
    perms = sorted(itertools.permutations(range(n)))
    index = {p: i for i, p in enumerate(perms)}
    table = [
        [index[tuple(p[q[i]] for i in range(n))] for q in perms]
        for p in perms
    ]
    labels = tuple("".join(map(str, p)) for p in perms)
    return FinGroup(table, f"S{n}", labels, _validated=True)


def dicyclic_group(n: int) -> FinGroup:
    """Dicyclic group of order 4n (n=2 gives the quaternion group)."""
    m = 2 * n
    idx = lambda a, e: a + m * e
    table = [[0] * (2 * m) for _ in range(2 * m)]
    for a in range(m):
        for b in range(m):
            table[idx(a, 0)][idx(b, 0)] = idx((a + b) % m, 0)
            table[idx(a, 0)][idx(b, 1)] = idx((b - a) % m, 1)
            table[idx(a, 1)][idx(b, 0)] = idx((a + b) % m, 1)
            table[idx(a, 1)][idx(b, 1)] = idx((b - a + n) % m, 0)
    return FinGroup(table, f"Dic{n}")


@dataclass(frozen=True)
class GroupHom:
    """A total multiplication-preserving map between element indices."""

    dom: FinGroup
    cod: FinGroup
    map: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "map", tuple(int(x) for x in self.map))
        if len(self.map) != self.dom.order:
            raise ValueError("map length does not match domain order")
        if any(x < 0 or x >= self.cod.order for x in self.map):
            raise ValueError("map value out of codomain range")
        t, u, m = self.dom.table, self.cod.table, self.map
        if m[0] != 0:
            raise ValueError("map does not preserve the identity")
        for a in range(self.dom.order):
            for b in range(self.dom.order):
                if m[t[a][b]] != u[m[a]][m[b]]:
                    raise ValueError(f"map is not multiplicative at ({a},{b})")

    def __call__(self, a: int) -> int:
        return self.map[a]

    def then(self, g: "GroupHom") -> "GroupHom":
        """Composite 'self first, then g'."""
        if g.dom is not self.cod and g.dom != self.cod:
            raise CodomainMismatch("cannot compose: middle groups differ")
        return GroupHom(self.dom, g.cod, tuple(g.map[x] for x in self.map))

    @property
    def is_injective(self) -> bool:
        return len(set(self.map)) == self.dom.order

    @property
    def is_surjective(self) -> bool:
        return len(set(self.map)) == self.cod.order

    @property
    def is_isomorphism(self) -> bool:
        return self.dom.order == self.cod.order and self.is_injective

    def inverse_hom(self) -> "GroupHom":
        if not self.is_isomorphism:
            raise ValueError("not an isomorphism")
        inv = [0] * self.cod.order
        for a, b in enumerate(self.map):
            inv[b] = a
        return GroupHom(self.cod, self.dom, tuple(inv))

    def image_set(self) -> frozenset[int]:
        return frozenset(self.map)


def identity_hom(G: FinGroup) -> GroupHom:
    return GroupHom(G, G, tuple(range(G.order)))


def zero_hom(G: FinGroup, H: FinGroup) -> GroupHom:
    return GroupHom(G, H, (0,) * G.order)


@dataclass(frozen=True)
class GroupAction:
    """Action of `actor` on `target` by automorphisms, one permutation per actor element."""

    actor: FinGroup
    target: FinGroup
    act: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        object.__setattr__(self, "act", tuple(tuple(p) for p in self.act))
        if len(self.act) != self.actor.order:
            raise ValueError("one permutation per actor element required")
        n = self.target.order
        full = set(range(n))
        for x, p in enumerate(self.act):
            if set(p) != full:
                raise ValueError(f"act[{x}] is not a permutation of the target")
        if self.act[0] != tuple(range(n)):
            raise ValueError("act[identity] must be the identity permutation")
        t = self.target.table
        for x, p in enumerate(self.act):
            for a in range(n):
                for b in range(n):
                    if p[t[a][b]] != t[p[a]][p[b]]:
                        raise ValueError(f"act[{x}] is not an automorphism at ({a},{b})")
        at = self.actor.table
        for x in range(self.actor.order):
            for y in range(self.actor.order):
                composed = tuple(self.act[x][self.act[y][a]] for a in range(n))
                if self.act[at[x][y]] != composed:
                    raise ValueError(f"act[{x}*{y}] != act[{x}] o act[{y}]")

    def __call__(self, x: int, a: int) -> int:
        return self.act[x][a]


def trivial_action(actor: FinGroup, target: FinGroup) -> GroupAction:
    p = tuple(range(target.order))
    return GroupAction(actor, target, (p,) * actor.order)


def conjugation_action(G: FinGroup) -> GroupAction:
    """The canonical action of G on itself by x a x^-1."""
    perms = tuple(tuple(G.conj(x, a) for a in range(G.order)) for x in range(G.order))
    return GroupAction(G, G, perms)


@dataclass(frozen=True)
class Subgroup:
    ambient: FinGroup
    elements: tuple[int, ...]

    def __post_init__(self):
        elems = tuple(sorted(set(int(x) for x in self.elements)))
        object.__setattr__(self, "elements", elems)
        if not elems or elems[0] != 0:
            raise ValueError("subgroup must contain the identity")
        s = set(elems)
        t = self.ambient.table
        for a in elems:
            if self.ambient.inv(a) not in s:
                raise ValueError(f"subgroup not closed under inverse at {a}")
            for b in elems:
                if t[a][b] not in s:
                    raise ValueError(f"subgroup not closed under product at ({a},{b})")

    @property
    def order(self) -> int:
        return len(self.elements)

    def __contains__(self, a: int) -> bool:
        return a in set(self.elements)

    def is_normal(self) -> bool:
        s = set(self.elements)
        G = self.ambient
        return all(G.conj(x, a) in s for x in range(G.order) for a in self.elements)

    def as_group(self, name: Optional[str] = None) -> tuple[FinGroup, GroupHom]:
        """The subgroup as a group in its own right plus the inclusion hom."""
        elems = self.elements
        pos = {e: i for i, e in enumerate(elems)}
        table = [[pos[self.ambient.table[a][b]] for b in elems] for a in elems]
        labels = tuple(self.ambient.label(e) for e in elems)
        grp = FinGroup(table, name or f"{self.ambient.name}|sub{len(elems)}", labels, _validated=True)
        return grp, GroupHom(grp, self.ambient, elems)


def subgroup_generated(G: FinGroup, gens: Iterable[int]) -> Subgroup:
    seen = {0}
    frontier = [0]
    gens = list(gens)
    while frontier:
        a = frontier.pop()
        for g in gens:
            b = G.table[a][g]
            if b not in seen:
                seen.add(b)
                frontier.append(b)
    return Subgroup(G, tuple(sorted(seen)))


def kernel(f: GroupHom) -> Subgroup:
    """The kernel subgroup {a : f(a) = 0}; always normal in the domain."""
    return Subgroup(f.dom, tuple(a for a in range(f.dom.order) if f.map[a] == 0))


def image_and_normal_closure(f: GroupHom) -> tuple[Subgroup, Subgroup]:
    """The image subgroup of f and its normal closure in the codomain."""
    img = Subgroup(f.cod, tuple(sorted(set(f.map))))
    G = f.cod
    conjugates = {G.conj(x, a) for x in range(G.order) for a in img.elements}
    return img, subgroup_generated(G, sorted(conjugates))


def quotient(G: FinGroup, N: Subgroup) -> tuple[FinGroup, GroupHom]:
    """Quotient by a normal subgroup, cosets ordered by minimal representative."""
    if N.ambient != G:
        raise NotNormal("subgroup is not a subgroup of the given group")
    if not N.is_normal():
        raise NotNormal(f"subgroup {N.elements} is not normal in {G.name}")
    coset_of = [-1] * G.order
    reps: list[int] = []
    for a in range(G.order):
        if coset_of[a] != -1:
            continue
        idx = len(reps)
        reps.append(a)
        for n in N.elements:
            coset_of[G.table[a][n]] = idx
    table = [[coset_of[G.table[ra][rb]] for rb in reps] for ra in reps]
    labels = tuple(f"[{G.label(r)}]" for r in reps)
    Q = FinGroup(table, f"{G.name}/N{N.order}", labels, _validated=True)
    return Q, GroupHom(G, Q, tuple(coset_of))


def product_and_pullback(f: GroupHom, g: GroupHom) -> tuple[FinGroup, GroupHom, GroupHom]:
    """The pullback {(a,c) : f(a)=g(c)} with its two projections.

    Taking both maps into the trivial group yields the direct product.
    """
    if f.cod != g.cod:
        raise CodomainMismatch(f"codomains differ: {f.cod.name} vs {g.cod.name}")
    A, C = f.dom, g.dom
    pairs = [(a, c) for a in range(A.order) for c in range(C.order) if f.map[a] == g.map[c]]
    pos = {p: i for i, p in enumerate(pairs)}
    table = [
        [pos[(A.table[a][a2], C.table[c][c2])] for (a2, c2) in pairs]
        for (a, c) in pairs
    ]
    labels = tuple(f"({A.label(a)},{C.label(c)})" for (a, c) in pairs)
    P = FinGroup(table, f"PB({A.name},{C.name})", labels, _validated=True)
    proj1 = GroupHom(P, A, tuple(a for (a, _) in pairs))
    proj2 = GroupHom(P, C, tuple(c for (_, c) in pairs))
    return P, proj1, proj2


def direct_product(A: FinGroup, B: FinGroup) -> tuple[FinGroup, GroupHom, GroupHom]:
    T = trivial_group()
    P, p1, p2 = product_and_pullback(zero_hom(A, T), zero_hom(B, T))
    P.name = f"{A.name}x{B.name}"
    return P, p1, p2


def klein_four() -> FinGroup:
    return direct_product(cyclic_group(2), cyclic_group(2))[0]


def semidirect_product(xi: GroupAction) -> tuple[FinGroup, GroupHom, GroupHom, GroupHom]:
    """G x| G0 with (a,x)(b,y) = (a*(x|>b), x*y).

    Returns the group plus the projection c, its section e, and the kernel
    inclusion g; the sequence G -> G x| G0 -> G0 is split exact.
    """
    G, G0 = xi.target, xi.actor
    n, n0 = G.order, G0.order
    idx = lambda a, x: a * n0 + x
    table = [[0] * (n * n0) for _ in range(n * n0)]
    for a in range(n):
        for x in range(n0):
            row = table[idx(a, x)]
            for b in range(n):
                ab = G.table[a][xi.act[x][b]]
                base = G0.table[x]
                for y in range(n0):
                    row[idx(b, y)] = idx(ab, base[y])
    labels = tuple(f"({G.label(a)},{G0.label(x)})" for a in range(n) for x in range(n0))
    S = FinGroup(table, f"{G.name}x|{G0.name}", labels, _validated=True)
    c = GroupHom(S, G0, tuple(x for _ in range(n) for x in range(n0)))
    e = GroupHom(G0, S, tuple(idx(0, x) for x in range(n0)))
    g = GroupHom(G, S, tuple(idx(a, 0) for a in range(n)))
    return S, c, e, g


# ---------------------------------------------------------------------------
# searches


def _generating_sequence(G: FinGroup) -> list[int]:
    gens: list[int] = []
    span = {0}
    for a in range(G.order):
        if a not in span:
            gens.append(a)
            span = set(subgroup_generated(G, gens).elements)
            if len(span) == G.order:
                break
    return gens


def _extend_hom(G: FinGroup, H: FinGroup, gens: Sequence[int], images: Sequence[int]) -> Optional[tuple[int, ...]]:
    """Grow a partial map on generators to a full map, or detect inconsistency."""
    m = [-1] * G.order
    m[0] = 0
    for g, h in zip(gens, images):
        if m[g] not in (-1, h):
            return None
        m[g] = h
    frontier = [0] + [g for g in gens]
    known = [a for a in frontier]
    while frontier:
        a = frontier.pop()
        for g, h in zip(gens, images):
            b = G.table[a][g]
            image = H.table[m[a]][h]
            if m[b] == -1:
                m[b] = image
                frontier.append(b)
                known.append(b)
            elif m[b] != image:
                return None
    if any(x == -1 for x in m):
        return None
    for a in range(G.order):
        for b in range(G.order):
            if m[G.table[a][b]] != H.table[m[a]][m[b]]:
                return None
    return tuple(m)


def all_homomorphisms(G: FinGroup, H: FinGroup) -> list[GroupHom]:
    """Every homomorphism G -> H, in a deterministic order."""
    gens = _generating_sequence(G)
    if not gens:
        return [zero_hom(G, H)]
    g_orders = [G.element_orders[g] for g in gens]
    candidates = [
        [b for b in range(H.order) if g_orders[i] % H.element_orders[b] == 0]
        for i in range(len(gens))
    ]
    found: list[GroupHom] = []
    for images in itertools.product(*candidates):
        m = _extend_hom(G, H, gens, images)
        if m is not None:
            found.append(GroupHom(G, H, m))
    return found


def isomorphism_search(
    G: FinGroup, H: FinGroup, bound: int = DEFAULT_BOUND
) -> Optional[GroupHom]:
    """A witness isomorphism G -> H, or None; order-profile pruned backtracking."""
    if G.order > bound or H.order > bound:
        raise BoundExceeded("isomorphism_search", max(G.order, H.order), bound)
    if G.order != H.order or G.order_profile() != H.order_profile():
        return None
    gens = _generating_sequence(G)
    if not gens:
        return identity_hom(G) if G == H else GroupHom(G, H, (0,))
    by_order: dict[int, list[int]] = {}
    for b in range(H.order):
        by_order.setdefault(H.element_orders[b], []).append(b)
    candidates = [by_order.get(G.element_orders[g], []) for g in gens]
    for images in itertools.product(*candidates):
        m = _extend_hom(G, H, gens, images)
        if m is not None and len(set(m)) == G.order:
            return GroupHom(G, H, m)
    return None


def automorphism_group(G: FinGroup, bound: int = DEFAULT_BOUND) -> tuple[FinGroup, GroupAction]:
    """Aut(G) as a group over the canonically ordered automorphism list.

    Multiplication is composition: (alpha * beta)(a) = alpha(beta(a)), so the
    evaluation action satisfies act[x*y] = act[x] o act[y].
    """
    if G.order > bound:
        raise BoundExceeded("automorphism_group", G.order, bound)
    gens = _generating_sequence(G)
    autos: list[tuple[int, ...]] = []
    if not gens:
        autos = [(0,)]
    else:
        by_order: dict[int, list[int]] = {}
        for b in range(G.order):
            by_order.setdefault(G.element_orders[b], []).append(b)
        candidates = [by_order.get(G.element_orders[g], []) for g in gens]
        for images in itertools.product(*candidates):
            m = _extend_hom(G, G, gens, images)
            if m is not None and len(set(m)) == G.order:
                autos.append(m)
    autos.sort()
    pos = {p: i for i, p in enumerate(autos)}
    n = len(autos)
    table = [[pos[tuple(p[q[a]] for a in range(G.order))] for q in autos] for p in autos]
    labels = tuple("id" if p == tuple(range(G.order)) else "f" + "".join(map(str, p)) for p in autos)
    A = FinGroup(table, f"Aut({G.name})", labels, _validated=True)
    ev = GroupAction(A, G, tuple(autos))
    return A, ev


def hom_to_action(rho: GroupHom, ev: GroupAction) -> GroupAction:
    """Turn a homomorphism into Aut(G) into an action via the evaluation action."""
    return GroupAction(rho.dom, ev.target, tuple(ev.act[rho.map[x]] for x in range(rho.dom.order)))
