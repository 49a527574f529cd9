"""Explicit finite groupoids, functors, isomorphism classes and exact cardinality.

A finite groupoid is stored as indexed tables: objects are ``0..n_objects-1``,
morphisms are ``0..n_morphisms-1`` with source/target object indices, an
identity morphism per object, an inverse per morphism, and a composition map
``compose(f, g)`` defined exactly when ``tgt(f) == src(g)`` (read "f then g").

Cardinality is the sum over isomorphism classes of ``1/|Aut|``, an exact
rational.  All operations here are pure; groupoids are immutable after
construction.
"""

from __future__ import annotations

import itertools
import os
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Sequence

Rational = Fraction

DEFAULT_SIZE_CAP = 5_000_000
SIZE_CAP_ENV = "SPANCALC_SIZE_CAP"


def size_cap() -> int:
    """Current cap on materialized object/morphism/table sizes."""
    raw = os.environ.get(SIZE_CAP_ENV)
    if raw is None:
        return DEFAULT_SIZE_CAP
    return int(raw)


class SizeCapError(RuntimeError):
    """Raised when a construction would exceed the configured size cap."""

    def __init__(self, what: str, needed: int):
        self.what = what
        self.needed = needed
        super().__init__(
            f"{what} needs {needed} entries, over the size cap {size_cap()} "
            f"(override with {SIZE_CAP_ENV})"
        )


def _check_cap(what: str, needed: int) -> None:
    if needed > size_cap():
        raise SizeCapError(what, needed)


def same_groupoid(a: "FiniteGroupoid", b: "FiniteGroupoid") -> bool:
    """Identity or full structural equality of the index tables."""
    return a is b or (a.n_objects == b.n_objects and a.src == b.src
                      and a.tgt == b.tgt and a.identity == b.identity
                      and a.inverse == b.inverse)


class UnionFind:
    def __init__(self, n: int):
        self.parent = list(range(n))

    def find(self, x: int) -> int:
        p = self.parent
        while p[x] != x:
            p[x] = p[p[x]]
            x = p[x]
        return x

    def union(self, x: int, y: int) -> None:
        rx, ry = self.find(x), self.find(y)
        if rx != ry:
            if rx > ry:
                rx, ry = ry, rx
            self.parent[ry] = rx


class FiniteGroupoid:
    """A groupoid with explicitly indexed objects and morphisms.

    ``compose`` may be a dict keyed by composable pairs ``(f, g) -> h`` or a
    callable; structured groupoids (action groupoids, products, pullbacks)
    use callables so that large composition tables are never materialized.
    """

    __slots__ = ("n_objects", "src", "tgt", "identity", "inverse",
                 "_compose_map", "_compose_fn", "_hom_index", "_from_index")

    def __init__(
        self,
        n_objects: int,
        src: Sequence[int],
        tgt: Sequence[int],
        identity: Sequence[int],
        inverse: Sequence[int],
        compose: dict[tuple[int, int], int] | Callable[[int, int], int],
    ):
        self.n_objects = n_objects
        self.src = tuple(src)
        self.tgt = tuple(tgt)
        self.identity = tuple(identity)
        self.inverse = tuple(inverse)
        if callable(compose):
            self._compose_map = None
            self._compose_fn = compose
        else:
            self._compose_map = compose
            self._compose_fn = None
        self._hom_index: dict[tuple[int, int], list[int]] | None = None
        self._from_index: list[list[int]] | None = None

    @property
    def n_morphisms(self) -> int:
        return len(self.src)

    def compose(self, f: int, g: int) -> int:
        """Composite "f then g"; requires tgt(f) == src(g)."""
        if self.tgt[f] != self.src[g]:
            raise ValueError(f"morphisms {f} (tgt {self.tgt[f]}) and {g} "
                             f"(src {self.src[g]}) are not composable")
        if self._compose_map is not None:
            return self._compose_map[(f, g)]
        return self._compose_fn(f, g)

    def _homs(self) -> dict[tuple[int, int], list[int]]:
        if self._hom_index is None:
            index: dict[tuple[int, int], list[int]] = {}
            for m in range(self.n_morphisms):
                index.setdefault((self.src[m], self.tgt[m]), []).append(m)
            self._hom_index = index
        return self._hom_index

    def hom(self, x: int, y: int) -> list[int]:
        return self._homs().get((x, y), [])

    def aut(self, x: int) -> list[int]:
        return self.hom(x, x)

    def mor_from(self, x: int) -> list[int]:
        if self._from_index is None:
            index: list[list[int]] = [[] for _ in range(self.n_objects)]
            for m in range(self.n_morphisms):
                index[self.src[m]].append(m)
            self._from_index = index
        return self._from_index[x]

    def __repr__(self) -> str:
        return (f"FiniteGroupoid({self.n_objects} objects, "
                f"{self.n_morphisms} morphisms)")

    # -- constructors ------------------------------------------------------

    @staticmethod
    def empty() -> "FiniteGroupoid":
        return FiniteGroupoid(0, (), (), (), (), {})

    @staticmethod
    def terminal() -> "FiniteGroupoid":
        return FiniteGroupoid(1, (0,), (0,), (0,), (0,), {(0, 0): 0})

    @staticmethod
    def discrete(n: int) -> "FiniteGroupoid":
        rng = tuple(range(n))
        return FiniteGroupoid(n, rng, rng, rng, rng,
                              {(i, i): i for i in range(n)})

    @staticmethod
    def from_group_table(table: Sequence[Sequence[int]]) -> "FiniteGroupoid":
        """One-object groupoid from a group multiplication table.

        ``table[a][b]`` is the product "a then b"; row/column 0 need not be
        the identity, it is located by inspection.
        """
        n = len(table)
        e = None
        for a in range(n):
            if all(table[a][b] == b and table[b][a] == b for b in range(n)):
                e = a
                break
        if e is None:
            raise ValueError("multiplication table has no identity")
        inv = [0] * n
        for a in range(n):
            for b in range(n):
                if table[a][b] == e:
                    inv[a] = b
                    break
        compose = {(a, b): table[a][b] for a in range(n) for b in range(n)}
        return FiniteGroupoid(1, (0,) * n, (0,) * n, (e,), tuple(inv), compose)

    @staticmethod
    def connected(class_size: int, group_table: Sequence[Sequence[int]]) -> "FiniteGroupoid":
        """Connected groupoid with ``class_size`` objects, all isomorphic,
        each with automorphism group given by ``group_table``."""
        n = len(group_table)
        m = class_size
        if m == 0:
            return FiniteGroupoid.empty()
        one = FiniteGroupoid.from_group_table(group_table)
        e = one.identity[0]
        # morphism (i, j, a): i -> j; (i,j,a) then (j,k,b) = (i,k, table[a][b])
        def mid(i: int, j: int, a: int) -> int:
            return (i * m + j) * n + a
        src = []
        tgt = []
        for i in range(m):
            for j in range(m):
                for _a in range(n):
                    src.append(i)
                    tgt.append(j)
        identity = tuple(mid(i, i, e) for i in range(m))
        inverse = []
        for i in range(m):
            for j in range(m):
                for a in range(n):
                    inverse.append(mid(j, i, one.inverse[a]))

        def comp(f: int, g: int) -> int:
            fa = f % n
            i = f // n // m
            gj = g // n
            ga = g % n
            k = gj % m
            return mid(i, k, group_table[fa][ga])

        return FiniteGroupoid(m, src, tgt, identity, tuple(inverse), comp)

    # -- JSON interchange --------------------------------------------------

    def to_json(self) -> dict:
        pairs = sum(
            len(self.mor_from(self.tgt[f])) for f in range(self.n_morphisms)
        )
        _check_cap("composition table serialization", pairs)
        compose = []
        for f in range(self.n_morphisms):
            for g in self.mor_from(self.tgt[f]):
                compose.append([f, g, self.compose(f, g)])
        return {
            "objects": self.n_objects,
            "morphisms": [{"src": self.src[m], "tgt": self.tgt[m]}
                          for m in range(self.n_morphisms)],
            "identity": list(self.identity),
            "compose": compose,
            "inverse": list(self.inverse),
        }

    @staticmethod
    def from_json(data: dict) -> "FiniteGroupoid":
        mor = data["morphisms"]
        compose = {(f, g): h for f, g, h in data["compose"]}
        return FiniteGroupoid(
            data["objects"],
            tuple(m["src"] for m in mor),
            tuple(m["tgt"] for m in mor),
            tuple(data["identity"]),
            tuple(data["inverse"]),
            compose,
        )


@dataclass(frozen=True)
class GroupoidFunctor:
    """A functor between finite groupoids, as object and morphism index maps."""

    domain: FiniteGroupoid
    codomain: FiniteGroupoid
    obj_map: tuple[int, ...]
    mor_map: tuple[int, ...]

    def obj(self, x: int) -> int:
        return self.obj_map[x]

    def mor(self, f: int) -> int:
        return self.mor_map[f]

    @staticmethod
    def identity(g: FiniteGroupoid) -> "GroupoidFunctor":
        return GroupoidFunctor(g, g, tuple(range(g.n_objects)),
                               tuple(range(g.n_morphisms)))

    def then(self, other: "GroupoidFunctor") -> "GroupoidFunctor":
        """Composite functor: self followed by other."""
        if not same_groupoid(self.codomain, other.domain):
            raise ValueError("functors not composable")
        return GroupoidFunctor(
            self.domain, other.codomain,
            tuple(other.obj_map[o] for o in self.obj_map),
            tuple(other.mor_map[m] for m in self.mor_map),
        )

    def validate(self) -> list[str]:
        """Check source/target preservation, identities and composites."""
        dom, cod = self.domain, self.codomain
        errors = []
        if len(self.obj_map) != dom.n_objects:
            errors.append("object map has wrong length")
        if len(self.mor_map) != dom.n_morphisms:
            errors.append("morphism map has wrong length")
        if errors:
            return errors
        for m in range(dom.n_morphisms):
            fm = self.mor_map[m]
            if cod.src[fm] != self.obj_map[dom.src[m]] or \
               cod.tgt[fm] != self.obj_map[dom.tgt[m]]:
                errors.append(f"morphism {m} image has wrong endpoints")
        for x in range(dom.n_objects):
            if self.mor_map[dom.identity[x]] != cod.identity[self.obj_map[x]]:
                errors.append(f"identity of object {x} not preserved")
        for f in range(dom.n_morphisms):
            for g in dom.mor_from(dom.tgt[f]):
                if self.mor_map[dom.compose(f, g)] != \
                        cod.compose(self.mor_map[f], self.mor_map[g]):
                    errors.append(f"composite of ({f}, {g}) not preserved")
                    if len(errors) > 20:
                        return errors
        return errors

    def to_json(self) -> dict:
        return {"objects": list(self.obj_map), "morphisms": list(self.mor_map)}

    @staticmethod
    def from_json(data: dict, domain: FiniteGroupoid,
                  codomain: FiniteGroupoid) -> "GroupoidFunctor":
        return GroupoidFunctor(domain, codomain,
                               tuple(data["objects"]), tuple(data["morphisms"]))


@dataclass(frozen=True)
class IsoClassTable:
    """Partition of a groupoid's objects into isomorphism classes.

    Classes are numbered in increasing order of their minimal object index,
    which is also the chosen representative.
    """

    class_of: tuple[int, ...]
    representative: tuple[int, ...]
    aut_order: tuple[int, ...]
    class_size: tuple[int, ...]

    @property
    def n_classes(self) -> int:
        return len(self.representative)


def iso_classes(g: FiniteGroupoid) -> IsoClassTable:
    """Isomorphism classes via union-find over morphism endpoints."""
    uf = UnionFind(g.n_objects)
    for m in range(g.n_morphisms):
        uf.union(g.src[m], g.tgt[m])
    roots: dict[int, int] = {}
    class_of = [0] * g.n_objects
    reps: list[int] = []
    sizes: list[int] = []
    for x in range(g.n_objects):
        r = uf.find(x)
        if r not in roots:
            roots[r] = len(reps)
            reps.append(x)
            sizes.append(0)
        class_of[x] = roots[r]
        sizes[roots[r]] += 1
    auts = [len(g.aut(rep)) for rep in reps]
    return IsoClassTable(tuple(class_of), tuple(reps), tuple(auts), tuple(sizes))


def cardinality(g: FiniteGroupoid) -> Rational:
    """Sum of 1/|Aut| over isomorphism classes, exact."""
    table = iso_classes(g)
    return sum((Fraction(1, a) for a in table.aut_order), Fraction(0))


def cardinality_alt(g: FiniteGroupoid) -> Rational:
    """Sum over objects of 1/(number of morphisms out of the object).

    Agrees with :func:`cardinality` on every valid groupoid; the two
    formulas serve as mutual oracles.
    """
    out_count = [0] * g.n_objects
    for m in range(g.n_morphisms):
        out_count[g.src[m]] += 1
    total = Fraction(0)
    for x in range(g.n_objects):
        if out_count[x] == 0:
            raise ValueError(f"object {x} has no morphisms, not even identity")
        total += Fraction(1, out_count[x])
    return total


def validate_groupoid(g: FiniteGroupoid, max_violations: int = 50) -> list[str]:
    """Check the groupoid axioms exhaustively; return violations (empty if valid).

    Violations are data, not errors: each entry names the broken axiom and
    the witnessing indices.
    """
    errors: list[str] = []

    def report(msg: str) -> bool:
        errors.append(msg)
        return len(errors) >= max_violations

    for x in range(g.n_objects):
        i = g.identity[x]
        if not (0 <= i < g.n_morphisms):
            if report(f"identity[{x}]={i} is not a morphism"):
                return errors
            continue
        if g.src[i] != x or g.tgt[i] != x:
            if report(f"identity of object {x} has endpoints "
                      f"({g.src[i]}, {g.tgt[i]})"):
                return errors
    for m in range(g.n_morphisms):
        if not (0 <= g.src[m] < g.n_objects and 0 <= g.tgt[m] < g.n_objects):
            if report(f"morphism {m} has out-of-range endpoints"):
                return errors

    # composability: defined exactly when tgt(f) == src(g)
    if g._compose_map is not None:
        for (f, h), r in g._compose_map.items():
            if g.tgt[f] != g.src[h]:
                if report(f"compose({f},{h}) defined but tgt({f})={g.tgt[f]} "
                          f"!= src({h})={g.src[h]}"):
                    return errors
        for f in range(g.n_morphisms):
            for h in g.mor_from(g.tgt[f]):
                if (f, h) not in g._compose_map:
                    if report(f"compose({f},{h}) undefined for a composable pair"):
                        return errors

    def comp_ok(f: int, h: int) -> int | None:
        try:
            r = g.compose(f, h)
        except Exception:
            errors.append(f"compose({f},{h}) raised for a composable pair")
            return None
        if not (0 <= r < g.n_morphisms) or g.src[r] != g.src[f] or \
                g.tgt[r] != g.tgt[h]:
            errors.append(f"compose({f},{h})={r} has wrong endpoints")
            return None
        return r

    for f in range(g.n_morphisms):
        ok = comp_ok(f, g.identity[g.tgt[f]])
        if ok is not None and ok != f:
            if report(f"compose({f}, id) != {f}"):
                return errors
        ok = comp_ok(g.identity[g.src[f]], f)
        if ok is not None and ok != f:
            if report(f"compose(id, {f}) != {f}"):
                return errors
        inv = g.inverse[f]
        if not (0 <= inv < g.n_morphisms) or g.src[inv] != g.tgt[f] or \
                g.tgt[inv] != g.src[f]:
            if report(f"inverse[{f}]={inv} has wrong endpoints"):
                return errors
            continue
        if g.compose(f, inv) != g.identity[g.src[f]]:
            if report(f"compose({f}, inverse) is not the identity"):
                return errors
        if g.compose(inv, f) != g.identity[g.tgt[f]]:
            if report(f"compose(inverse, {f}) is not the identity"):
                return errors
        if len(errors) >= max_violations:
            return errors

    for f in range(g.n_morphisms):
        for h in g.mor_from(g.tgt[f]):
            fh = g.compose(f, h)
            for k in g.mor_from(g.tgt[h]):
                if g.compose(fh, k) != g.compose(f, g.compose(h, k)):
                    if report(f"associativity fails on ({f},{h},{k})"):
                        return errors
    return errors


def full_inverse_image(v: GroupoidFunctor, x: int) -> FiniteGroupoid:
    """Full subgroupoid of the domain on objects mapping into the class of x."""
    cod = v.codomain
    if not (0 <= x < cod.n_objects):
        raise ValueError(f"object {x} is not in the codomain")
    cod_classes = iso_classes(cod)
    cls = cod_classes.class_of[x]
    objs = [a for a in range(v.domain.n_objects)
            if cod_classes.class_of[v.obj_map[a]] == cls]
    return _full_subgroupoid(v.domain, objs)


def _full_subgroupoid(g: FiniteGroupoid, objs: Sequence[int]) -> FiniteGroupoid:
    keep = set(objs)
    obj_index = {o: i for i, o in enumerate(objs)}
    mors = [m for m in range(g.n_morphisms)
            if g.src[m] in keep and g.tgt[m] in keep]
    mor_index = {m: i for i, m in enumerate(mors)}
    compose = {}
    for f in mors:
        for h in g.mor_from(g.tgt[f]):
            if h in mor_index:
                compose[(mor_index[f], mor_index[h])] = mor_index[g.compose(f, h)]
    return FiniteGroupoid(
        len(objs),
        tuple(obj_index[g.src[m]] for m in mors),
        tuple(obj_index[g.tgt[m]] for m in mors),
        tuple(mor_index[g.identity[o]] for o in objs),
        tuple(mor_index[g.inverse[m]] for m in mors),
        compose,
    )


def coproduct(g: FiniteGroupoid, h: FiniteGroupoid
              ) -> tuple[FiniteGroupoid, GroupoidFunctor, GroupoidFunctor]:
    """Disjoint union, with the two injection functors."""
    no, nm = g.n_objects, g.n_morphisms
    src = g.src + tuple(s + no for s in h.src)
    tgt = g.tgt + tuple(t + no for t in h.tgt)
    identity = g.identity + tuple(i + nm for i in h.identity)
    inverse = g.inverse + tuple(i + nm for i in h.inverse)

    def comp(f: int, k: int) -> int:
        if f < nm:
            return g.compose(f, k)
        return h.compose(f - nm, k - nm) + nm

    total = FiniteGroupoid(no + h.n_objects, src, tgt, identity, inverse, comp)
    inj_g = GroupoidFunctor(g, total, tuple(range(no)), tuple(range(nm)))
    inj_h = GroupoidFunctor(h, total,
                            tuple(range(no, no + h.n_objects)),
                            tuple(range(nm, nm + h.n_morphisms)))
    return total, inj_g, inj_h


def product(g: FiniteGroupoid, h: FiniteGroupoid
            ) -> tuple[FiniteGroupoid, GroupoidFunctor, GroupoidFunctor]:
    """Cartesian product, with the two projection functors.

    Objects and morphisms are pairs, composition is componentwise;
    cardinality multiplies.
    """
    _check_cap("product groupoid morphisms", g.n_morphisms * h.n_morphisms)
    nhm = h.n_morphisms
    nho = h.n_objects

    def oid(i: int, j: int) -> int:
        return i * nho + j

    def mid(f: int, k: int) -> int:
        return f * nhm + k

    src = []
    tgt = []
    for f in range(g.n_morphisms):
        for k in range(nhm):
            src.append(oid(g.src[f], h.src[k]))
            tgt.append(oid(g.tgt[f], h.tgt[k]))
    identity = tuple(mid(g.identity[i], h.identity[j])
                     for i in range(g.n_objects) for j in range(nho))
    inverse = tuple(mid(g.inverse[f], h.inverse[k])
                    for f in range(g.n_morphisms) for k in range(nhm))

    def comp(a: int, b: int) -> int:
        return mid(g.compose(a // nhm, b // nhm), h.compose(a % nhm, b % nhm))

    total = FiniteGroupoid(g.n_objects * nho, src, tgt, identity, inverse, comp)
    proj_g = GroupoidFunctor(
        total, g,
        tuple(i // nho for i in range(total.n_objects)),
        tuple(m // nhm for m in range(total.n_morphisms)))
    proj_h = GroupoidFunctor(
        total, h,
        tuple(i % nho for i in range(total.n_objects)),
        tuple(m % nhm for m in range(total.n_morphisms)))
    return total, proj_g, proj_h


def product_functor(f: GroupoidFunctor, g: GroupoidFunctor,
                    dom_prod: tuple[FiniteGroupoid, GroupoidFunctor, GroupoidFunctor] | None = None,
                    cod_prod: tuple[FiniteGroupoid, GroupoidFunctor, GroupoidFunctor] | None = None,
                    ) -> GroupoidFunctor:
    """The functor f x g between the given product groupoids."""
    if dom_prod is None:
        dom_prod = product(f.domain, g.domain)
    if cod_prod is None:
        cod_prod = product(f.codomain, g.codomain)
    dom = dom_prod[0]
    cod = cod_prod[0]
    ndo = g.domain.n_objects
    ndm = g.domain.n_morphisms
    nco = g.codomain.n_objects
    ncm = g.codomain.n_morphisms
    obj = tuple(f.obj_map[i // ndo] * nco + g.obj_map[i % ndo]
                for i in range(dom.n_objects))
    mor = tuple(f.mor_map[m // ndm] * ncm + g.mor_map[m % ndm]
                for m in range(dom.n_morphisms))
    return GroupoidFunctor(dom, cod, obj, mor)


def check_equivalence_certificate(f: GroupoidFunctor) -> bool:
    """True iff the functor is full, faithful and essentially surjective."""
    dom, cod = f.domain, f.codomain
    for x in range(dom.n_objects):
        for y in range(dom.n_objects):
            hom = dom.hom(x, y)
            images = {f.mor_map[m] for m in hom}
            if len(images) != len(hom):
                return False  # not faithful
            if len(images) != len(cod.hom(f.obj_map[x], f.obj_map[y])):
                return False  # not full
    cod_classes = iso_classes(cod)
    hit = {cod_classes.class_of[f.obj_map[x]] for x in range(dom.n_objects)}
    return len(hit) == cod_classes.n_classes


def transport_to_representatives(g: FiniteGroupoid, table: IsoClassTable
                                 ) -> list[int]:
    """For each object x, a morphism representative(class(x)) -> x.

    Found by breadth-first search along morphisms, composing as we go.
    """
    gamma: list[int | None] = [None] * g.n_objects
    adj: dict[int, list[int]] = {}
    for m in range(g.n_morphisms):
        adj.setdefault(g.src[m], []).append(m)
    for rep in table.representative:
        gamma[rep] = g.identity[rep]
        frontier = [rep]
        while frontier:
            nxt = []
            for x in frontier:
                for m in adj.get(x, []):
                    y = g.tgt[m]
                    if gamma[y] is None:
                        gamma[y] = g.compose(gamma[x], m)
                        nxt.append(y)
            frontier = nxt
    if any(v is None for v in gamma):
        raise ValueError("groupoid has objects unreachable from their class "
                         "representative; is it valid?")
    return gamma  # type: ignore[return-value]


def skeleton(g: FiniteGroupoid) -> tuple[FiniteGroupoid, GroupoidFunctor]:
    """One object per iso class with its automorphism group, plus the
    equivalence functor from ``g`` onto the skeleton."""
    table = iso_classes(g)
    gamma = transport_to_representatives(g, table)
    # skeleton morphisms: automorphisms of each representative
    mor_of: list[tuple[int, int]] = []  # (class, original aut morphism)
    index: dict[int, int] = {}
    for c, rep in enumerate(table.representative):
        for a in g.aut(rep):
            index[a] = len(mor_of)
            mor_of.append((c, a))
    src = tuple(c for c, _ in mor_of)
    identity = tuple(index[g.identity[rep]] for rep in table.representative)
    inverse = tuple(index[g.inverse[a]] for _, a in mor_of)

    def comp(f: int, h: int) -> int:
        return index[g.compose(mor_of[f][1], mor_of[h][1])]

    sk = FiniteGroupoid(table.n_classes, src, src, identity, inverse, comp)
    # functor: x -> class rep;  (f: x -> y) -> gamma_x ; f ; gamma_y^{-1}
    obj_map = tuple(table.class_of[x] for x in range(g.n_objects))
    mor_map = []
    for m in range(g.n_morphisms):
        a = g.compose(g.compose(gamma[g.src[m]], m), g.inverse[gamma[g.tgt[m]]])
        mor_map.append(index[a])
    return sk, GroupoidFunctor(g, sk, obj_map, tuple(mor_map))


# -- small group tables for tests and generators ---------------------------

def cyclic_table(n: int) -> list[list[int]]:
    return [[(a + b) % n for b in range(n)] for a in range(n)]


def symmetric_table(n: int) -> list[list[int]]:
    perms = list(itertools.permutations(range(n)))
    index = {p: i for i, p in enumerate(perms)}
    # entry [a][b] = "a then b" = b after a
    return [[index[tuple(perms[b][perms[a][i]] for i in range(n))]
             for b in range(len(perms))] for a in range(len(perms))]


def table_product(t1: Sequence[Sequence[int]],
                  t2: Sequence[Sequence[int]]) -> list[list[int]]:
    n1, n2 = len(t1), len(t2)
    return [[t1[a1][b1] * n2 + t2[a2][b2]
             for b1 in range(n1) for b2 in range(n2)]
            for a1 in range(n1) for a2 in range(n2)]
