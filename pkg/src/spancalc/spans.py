"""Spans of finite groupoids, weak pullbacks, and exact degroupoidification.

A span from X to Y is an apex groupoid with functors to Y (left leg) and X
(right leg); it degroupoidifies to a matrix over the isomorphism classes,
with entry at (class of y, class of x) equal to

    sum over apex classes [s] lying over ([x], [y]) of
        |Aut(x)|^(1-alpha) * |Aut(y)|^alpha / |Aut(s)|

computed in exact rational arithmetic.  Weak pullbacks implement span
composition; since equivalent spans induce equal matrices, large pullbacks
may be built in blockwise-skeletal form (one object per isomorphism class)
without changing any output.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Literal, Sequence

from .groupoid import (
    FiniteGroupoid,
    GroupoidFunctor,
    IsoClassTable,
    Rational,
    UnionFind,
    _check_cap,
    cardinality,
    coproduct,
    iso_classes,
    product,
    product_functor,
    same_groupoid as _same_groupoid,
    size_cap,
)

PullbackMode = Literal["auto", "literal", "skeletal"]

# "auto" prefers the literal pullback up to this size; skeletal output is
# exactly equivalent (equal matrices and cardinalities), just smaller
LITERAL_AUTO_THRESHOLD = 250_000


# -- numbers of the form sum of c_b * sqrt(b) -------------------------------

def _sqrt_decompose(n: int) -> tuple[int, int]:
    """n = a^2 * b with b squarefree; returns (a, b)."""
    a, b = 1, 1
    d = 2
    while d * d <= n:
        exp = 0
        while n % d == 0:
            n //= d
            exp += 1
        a *= d ** (exp // 2)
        if exp % 2:
            b *= d
        d += 1
    return a, b * n


class QSqrt:
    """Exact number of the form sum_b c_b sqrt(b), b squarefree positive."""

    __slots__ = ("terms",)

    def __init__(self, terms: dict[int, Fraction] | None = None):
        self.terms = {b: c for b, c in (terms or {}).items() if c != 0}

    @staticmethod
    def of(x: Fraction | int) -> "QSqrt":
        return QSqrt({1: Fraction(x)})

    @staticmethod
    def sqrt(n: int) -> "QSqrt":
        if n == 0:
            return QSqrt()
        a, b = _sqrt_decompose(n)
        return QSqrt({b: Fraction(a)})

    def __add__(self, other: "QSqrt | Fraction | int") -> "QSqrt":
        if isinstance(other, (int, Fraction)):
            other = QSqrt.of(other)
        out = dict(self.terms)
        for b, c in other.terms.items():
            out[b] = out.get(b, Fraction(0)) + c
        return QSqrt(out)

    __radd__ = __add__

    def __mul__(self, other: "QSqrt | Fraction | int") -> "QSqrt":
        if isinstance(other, (int, Fraction)):
            return QSqrt({b: c * other for b, c in self.terms.items()})
        out: dict[int, Fraction] = {}
        for b1, c1 in self.terms.items():
            for b2, c2 in other.terms.items():
                a, b = _sqrt_decompose(b1 * b2)
                out[b] = out.get(b, Fraction(0)) + c1 * c2 * a
        return QSqrt(out)

    __rmul__ = __mul__

    def __truediv__(self, k: Fraction | int) -> "QSqrt":
        return QSqrt({b: c / k for b, c in self.terms.items()})

    def __eq__(self, other: object) -> bool:
        if isinstance(other, (int, Fraction)):
            other = QSqrt.of(other)
        if not isinstance(other, QSqrt):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self) -> int:
        return hash(tuple(sorted(self.terms.items())))

    @property
    def is_rational(self) -> bool:
        return set(self.terms) <= {1}

    def as_fraction(self) -> Fraction:
        if not self.is_rational:
            raise ValueError(f"{self} is irrational")
        return self.terms.get(1, Fraction(0))

    def __repr__(self) -> str:
        if not self.terms:
            return "0"
        return " + ".join(
            (f"{c}" if b == 1 else f"{c}*sqrt({b})")
            for b, c in sorted(self.terms.items())
        )


def _aut_pow(n: int, exponent: Fraction) -> Fraction | QSqrt:
    """|Aut|^exponent, exact; half-integer exponents yield QSqrt values."""
    if exponent.denominator == 1:
        return Fraction(n) ** exponent.numerator
    if exponent.denominator == 2:
        k = exponent.numerator
        whole = Fraction(n) ** (k // 2)
        return QSqrt.sqrt(n) * whole if k % 2 else QSqrt.of(whole)
    raise ValueError(
        f"alpha exponent {exponent} unsupported: entries |Aut|^a are "
        "irrational except for integer and half-integer a")


# -- vectors and matrices ----------------------------------------------------

@dataclass(frozen=True)
class RationalVector:
    """Exact function on the isomorphism classes of a base groupoid."""

    base: FiniteGroupoid
    classes: IsoClassTable
    entries: tuple

    def __getitem__(self, c: int):
        return self.entries[c]

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, RationalVector):
            return NotImplemented
        return self.entries == other.entries


class RationalMatrix:
    """Dense exact matrix indexed by iso classes (rows: Y, cols: X)."""

    def __init__(self, n_rows: int, n_cols: int, data=None):
        self.n_rows = n_rows
        self.n_cols = n_cols
        self.data = data if data is not None else \
            [[Fraction(0)] * n_cols for _ in range(n_rows)]

    def __getitem__(self, rc: tuple[int, int]):
        return self.data[rc[0]][rc[1]]

    def __setitem__(self, rc: tuple[int, int], value) -> None:
        self.data[rc[0]][rc[1]] = value

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, RationalMatrix):
            return NotImplemented
        return (self.n_rows, self.n_cols) == (other.n_rows, other.n_cols) \
            and self.data == other.data

    def __add__(self, other: "RationalMatrix") -> "RationalMatrix":
        assert (self.n_rows, self.n_cols) == (other.n_rows, other.n_cols)
        return RationalMatrix(self.n_rows, self.n_cols, [
            [a + b for a, b in zip(ra, rb)]
            for ra, rb in zip(self.data, other.data)])

    def __sub__(self, other: "RationalMatrix") -> "RationalMatrix":
        return self + other.scale(-1)

    def scale(self, k) -> "RationalMatrix":
        return RationalMatrix(self.n_rows, self.n_cols,
                              [[a * k for a in row] for row in self.data])

    def __matmul__(self, other: "RationalMatrix") -> "RationalMatrix":
        assert self.n_cols == other.n_rows
        out = RationalMatrix(self.n_rows, other.n_cols)
        for i in range(self.n_rows):
            for k in range(self.n_cols):
                a = self.data[i][k]
                if a == 0:
                    continue
                for j in range(other.n_cols):
                    b = other.data[k][j]
                    if b != 0:
                        out.data[i][j] += a * b
        return out

    def apply(self, vec: Sequence) -> list:
        assert self.n_cols == len(vec)
        return [sum((row[j] * vec[j] for j in range(self.n_cols)),
                    Fraction(0)) for row in self.data]

    def transpose(self) -> "RationalMatrix":
        return RationalMatrix(self.n_cols, self.n_rows,
                              [list(col) for col in zip(*self.data)]
                              if self.data else [])

    def trace(self):
        assert self.n_rows == self.n_cols
        return sum((self.data[i][i] for i in range(self.n_rows)), Fraction(0))

    @staticmethod
    def identity(n: int) -> "RationalMatrix":
        out = RationalMatrix(n, n)
        for i in range(n):
            out.data[i][i] = Fraction(1)
        return out

    @staticmethod
    def kronecker(a: "RationalMatrix", b: "RationalMatrix") -> "RationalMatrix":
        out = RationalMatrix(a.n_rows * b.n_rows, a.n_cols * b.n_cols)
        for i in range(a.n_rows):
            for j in range(a.n_cols):
                for k in range(b.n_rows):
                    for l in range(b.n_cols):
                        out.data[i * b.n_rows + k][j * b.n_cols + l] = \
                            a.data[i][j] * b.data[k][l]
        return out

    def __repr__(self) -> str:
        return f"RationalMatrix({self.n_rows}x{self.n_cols})"


# -- spans -------------------------------------------------------------------

@dataclass(frozen=True)
class SpanOfGroupoids:
    """Apex groupoid with left leg into Y and right leg into X (a span X -> Y)."""

    apex: FiniteGroupoid
    left: GroupoidFunctor
    right: GroupoidFunctor

    @property
    def source(self) -> FiniteGroupoid:
        return self.right.codomain

    @property
    def target(self) -> FiniteGroupoid:
        return self.left.codomain

    def validate(self) -> list[str]:
        errors = []
        if self.left.domain is not self.apex:
            errors.append("left leg does not start at the apex")
        if self.right.domain is not self.apex:
            errors.append("right leg does not start at the apex")
        errors.extend("left leg: " + e for e in self.left.validate())
        errors.extend("right leg: " + e for e in self.right.validate())
        return errors


@dataclass(frozen=True)
class GroupoidOverX:
    """A groupoid equipped with a projection functor to a base groupoid."""

    total: FiniteGroupoid
    projection: GroupoidFunctor

    @property
    def base(self) -> FiniteGroupoid:
        return self.projection.codomain




# -- weak pullback -----------------------------------------------------------

class _PairGroupoid(FiniteGroupoid):
    """Groupoid whose morphisms are pairs (u, v) over listed objects.

    Used for both literal weak pullbacks (objects are triples (t, s, alpha))
    and their skeletal reductions; composition works componentwise through
    the two parent groupoids, so no composition table is materialized.
    """

    __slots__ = ("obj_data", "mor_data", "_mor_index", "T", "S")

    def __init__(self, T: FiniteGroupoid, S: FiniteGroupoid,
                 obj_data: list, mor_data: list[tuple[int, int, int]],
                 mor_target: list[int]):
        self.T = T
        self.S = S
        self.obj_data = obj_data
        self.mor_data = mor_data
        self._mor_index = {m: i for i, m in enumerate(mor_data)}
        src = tuple(o for o, _u, _v in mor_data)
        identity = []
        for o in range(len(obj_data)):
            t, s = self._end_of(o)
            identity.append(self._mor_index[(o, T.identity[t], S.identity[s])])
        inverse = tuple(
            self._mor_index[(mor_target[i], T.inverse[u], S.inverse[v])]
            for i, (_o, u, v) in enumerate(mor_data))
        super().__init__(len(obj_data), src, tuple(mor_target),
                         tuple(identity), inverse, self._compose_pairs)

    def _end_of(self, o: int) -> tuple[int, int]:
        raise NotImplementedError

    def _compose_pairs(self, f: int, g: int) -> int:
        o, u1, v1 = self.mor_data[f]
        _o2, u2, v2 = self.mor_data[g]
        return self._mor_index[(o, self.T.compose(u1, u2),
                                self.S.compose(v1, v2))]


class _PullbackGroupoid(_PairGroupoid):
    """Objects are (t, s, alpha) with alpha: f(t) -> g(s) in the base."""

    def _end_of(self, o: int) -> tuple[int, int]:
        t, s, _alpha = self.obj_data[o]
        return t, s


def _pullback_projection_sizes(f: GroupoidFunctor, g: GroupoidFunctor
                               ) -> tuple[int, int]:
    """Projected object and morphism counts of the literal weak pullback."""
    T, S, B = f.domain, g.domain, f.codomain
    out_t = [len(T.mor_from(t)) for t in range(T.n_objects)]
    out_s = [len(S.mor_from(s)) for s in range(S.n_objects)]
    n_obj = 0
    n_mor = 0
    for t in range(T.n_objects):
        for s in range(S.n_objects):
            h = len(B.hom(f.obj_map[t], g.obj_map[s]))
            n_obj += h
            n_mor += h * out_t[t] * out_s[s]
    return n_obj, n_mor


def weak_pullback(f: GroupoidFunctor, g: GroupoidFunctor,
                  mode: PullbackMode = "auto"
                  ) -> tuple[FiniteGroupoid, GroupoidFunctor, GroupoidFunctor]:
    """Weak pullback of the cospan f: T -> B <- S :g.

    Returns (P, P -> T, P -> S).  Objects of the literal pullback are
    triples (t, s, alpha) with alpha: f(t) -> g(s) an isomorphism in B;
    morphisms are pairs making the naturality square commute.

    In "skeletal" mode an equivalent groupoid with one object per
    isomorphism class is returned instead; projections still commute on the
    nose, so all degroupoidifications agree exactly.  "auto" picks literal
    when the projected size fits the cap.
    """
    if f.codomain is not g.codomain and not _same_groupoid(f.codomain, g.codomain):
        raise ValueError("cospan legs have different codomains")
    if mode == "auto":
        n_obj, n_mor = _pullback_projection_sizes(f, g)
        limit = min(size_cap(), LITERAL_AUTO_THRESHOLD)
        mode = "literal" if max(n_obj, n_mor) <= limit else "skeletal"
    if mode == "literal":
        return _weak_pullback_literal(f, g)
    return _weak_pullback_skeletal(f, g)


def _weak_pullback_literal(f: GroupoidFunctor, g: GroupoidFunctor):
    T, S, B = f.domain, g.domain, f.codomain
    n_obj, n_mor = _pullback_projection_sizes(f, g)
    _check_cap("weak pullback objects", n_obj)
    _check_cap("weak pullback morphisms", n_mor)

    obj_data: list[tuple[int, int, int]] = []
    obj_index: dict[tuple[int, int, int], int] = {}
    for t in range(T.n_objects):
        for s in range(S.n_objects):
            for alpha in B.hom(f.obj_map[t], g.obj_map[s]):
                obj_index[(t, s, alpha)] = len(obj_data)
                obj_data.append((t, s, alpha))

    mor_data: list[tuple[int, int, int]] = []
    mor_target: list[int] = []
    for o, (t, s, alpha) in enumerate(obj_data):
        for u in T.mor_from(t):
            fu_inv = B.inverse[f.mor_map[u]]
            left = B.compose(fu_inv, alpha)
            for v in S.mor_from(s):
                alpha2 = B.compose(left, g.mor_map[v])
                mor_data.append((o, u, v))
                mor_target.append(obj_index[(T.tgt[u], S.tgt[v], alpha2)])

    P = _PullbackGroupoid(T, S, obj_data, mor_data, mor_target)
    proj_t = GroupoidFunctor(P, T,
                             tuple(t for t, _s, _a in obj_data),
                             tuple(u for _o, u, _v in mor_data))
    proj_s = GroupoidFunctor(P, S,
                             tuple(s for _t, s, _a in obj_data),
                             tuple(v for _o, _u, v in mor_data))
    return P, proj_t, proj_s


def _orbits_two_sided(B: FiniteGroupoid, isos: list[int],
                      left_movers: list[int], right_movers: list[int]
                      ) -> list[list[int]]:
    """Orbits of hom-set elements under alpha -> l;alpha and alpha -> alpha;r.

    One-sided moves generate the full two-sided orbits, which keeps the
    scan linear in |isos| * (#left + #right).
    """
    index = {a: i for i, a in enumerate(isos)}
    uf = UnionFind(len(isos))
    for i, alpha in enumerate(isos):
        for l in left_movers:
            uf.union(i, index[B.compose(l, alpha)])
        for r in right_movers:
            uf.union(i, index[B.compose(alpha, r)])
    groups: dict[int, list[int]] = {}
    for i, alpha in enumerate(isos):
        groups.setdefault(uf.find(i), []).append(alpha)
    return [groups[root] for root in sorted(groups)]


def _weak_pullback_skeletal(f: GroupoidFunctor, g: GroupoidFunctor):
    T, S, B = f.domain, g.domain, f.codomain
    t_table = iso_classes(T)
    s_table = iso_classes(S)

    obj_data: list[tuple[int, int, int]] = []   # (t0, s0, alpha0)
    mor_data: list[tuple[int, int, int]] = []   # (obj, u, v)
    mor_target: list[int] = []
    for t0 in t_table.representative:
        aut_t = T.aut(t0)
        f_auts = [B.inverse[f.mor_map[u]] for u in aut_t]
        for s0 in s_table.representative:
            isos = B.hom(f.obj_map[t0], g.obj_map[s0])
            if not isos:
                continue
            aut_s = S.aut(s0)
            g_auts = [g.mor_map[v] for v in aut_s]
            g_lookup: dict[int, list[int]] = {}
            for v, gv in zip(aut_s, g_auts):
                g_lookup.setdefault(gv, []).append(v)
            for orbit in _orbits_two_sided(B, isos, f_auts, g_auts):
                alpha0 = min(orbit)
                o = len(obj_data)
                obj_data.append((t0, s0, alpha0))
                inv_a0 = B.inverse[alpha0]
                for u in aut_t:
                    beta = B.compose(B.compose(inv_a0, f.mor_map[u]), alpha0)
                    for v in g_lookup.get(beta, ()):
                        mor_data.append((o, u, v))
                        mor_target.append(o)

    P = _PullbackGroupoid(T, S, obj_data, mor_data, mor_target)
    proj_t = GroupoidFunctor(P, T,
                             tuple(t for t, _s, _a in obj_data),
                             tuple(u for _o, u, _v in mor_data))
    proj_s = GroupoidFunctor(P, S,
                             tuple(s for _t, s, _a in obj_data),
                             tuple(v for _o, _u, v in mor_data))
    return P, proj_t, proj_s


# -- span algebra ------------------------------------------------------------

def identity_span(x: FiniteGroupoid) -> SpanOfGroupoids:
    ident = GroupoidFunctor.identity(x)
    return SpanOfGroupoids(x, ident, ident)


def compose_spans(t: SpanOfGroupoids, s: SpanOfGroupoids,
                  mode: PullbackMode = "auto") -> SpanOfGroupoids:
    """Composite span "s then t": the spans' shared foot is t's source."""
    if not _same_groupoid(t.source, s.target):
        raise ValueError("spans are not composable: middle feet differ")
    P, proj_t, proj_s = weak_pullback(t.right, s.left, mode=mode)
    return SpanOfGroupoids(P, proj_t.then(t.left), proj_s.then(s.right))


def add_spans(s: SpanOfGroupoids, t: SpanOfGroupoids) -> SpanOfGroupoids:
    if not _same_groupoid(s.source, t.source) or \
            not _same_groupoid(s.target, t.target):
        raise ValueError("spans have different endpoints")
    total, inj_s, inj_t = coproduct(s.apex, t.apex)
    left = GroupoidFunctor(total, s.target,
                           s.left.obj_map + t.left.obj_map,
                           s.left.mor_map + t.left.mor_map)
    right = GroupoidFunctor(total, s.source,
                            s.right.obj_map + t.right.obj_map,
                            s.right.mor_map + t.right.mor_map)
    return SpanOfGroupoids(total, left, right)


def scalar_mul(lam: FiniteGroupoid, s: SpanOfGroupoids) -> SpanOfGroupoids:
    total, _proj_lam, proj_apex = product(lam, s.apex)
    return SpanOfGroupoids(total, proj_apex.then(s.left),
                           proj_apex.then(s.right))


def adjoint(s: SpanOfGroupoids) -> SpanOfGroupoids:
    return SpanOfGroupoids(s.apex, s.right, s.left)


def tensor_spans(s: SpanOfGroupoids, s2: SpanOfGroupoids) -> SpanOfGroupoids:
    apex_prod = product(s.apex, s2.apex)
    y_prod = product(s.target, s2.target)
    x_prod = product(s.source, s2.source)
    left = product_functor(s.left, s2.left, apex_prod, y_prod)
    right = product_functor(s.right, s2.right, apex_prod, x_prod)
    return SpanOfGroupoids(apex_prod[0], left, right)


def apply_span(s: SpanOfGroupoids, psi: GroupoidOverX,
               mode: PullbackMode = "auto") -> GroupoidOverX:
    """Apply the span to a groupoid over its source, landing over its target."""
    if not _same_groupoid(s.source, psi.base):
        raise ValueError("span source differs from the base of the groupoid")
    P, proj_apex, _proj_psi = weak_pullback(s.right, psi.projection, mode=mode)
    return GroupoidOverX(P, proj_apex.then(s.left))


# -- degroupoidification -----------------------------------------------------

def degroupoidify_vector(psi: GroupoidOverX, alpha: Fraction | int = 0
                         ) -> RationalVector:
    """Vector with entry |Aut(x)|^alpha * |full inverse image of x| per class."""
    alpha = Fraction(alpha)
    base_table = iso_classes(psi.base)
    total_table = iso_classes(psi.total)
    raw = [Fraction(0)] * base_table.n_classes
    for c, rep in enumerate(total_table.representative):
        cx = base_table.class_of[psi.projection.obj_map[rep]]
        raw[cx] += Fraction(1, total_table.aut_order[c])
    entries = []
    for cx in range(base_table.n_classes):
        factor = _aut_pow(base_table.aut_order[cx], alpha)
        entries.append(factor * raw[cx]
                       if isinstance(factor, QSqrt) else raw[cx] * factor)
    return RationalVector(psi.base, base_table, tuple(entries))


def degroupoidify_span(s: SpanOfGroupoids, alpha: Fraction | int = 0
                       ) -> RationalMatrix:
    """Exact matrix of the span at the given normalization convention."""
    alpha = Fraction(alpha)
    apex_table = iso_classes(s.apex)
    x_table = iso_classes(s.source)
    y_table = iso_classes(s.target)
    out = RationalMatrix(y_table.n_classes, x_table.n_classes)
    for c, rep in enumerate(apex_table.representative):
        cx = x_table.class_of[s.right.obj_map[rep]]
        cy = y_table.class_of[s.left.obj_map[rep]]
        wx = _aut_pow(x_table.aut_order[cx], 1 - alpha)
        wy = _aut_pow(y_table.aut_order[cy], alpha)
        term = (wx * wy) / apex_table.aut_order[c]
        if isinstance(term, QSqrt) and term.is_rational:
            term = term.as_fraction()
        out.data[cy][cx] = out.data[cy][cx] + term
    return out


def alpha_change_of_basis(g: FiniteGroupoid, exponent: int) -> RationalMatrix:
    """Diagonal matrix with entries |Aut(x)|^exponent over the classes of g."""
    table = iso_classes(g)
    out = RationalMatrix(table.n_classes, table.n_classes)
    for c in range(table.n_classes):
        out.data[c][c] = Fraction(table.aut_order[c]) ** exponent
    return out


def inner_product(phi: GroupoidOverX, psi: GroupoidOverX,
                  mode: PullbackMode = "auto"
                  ) -> tuple[FiniteGroupoid, Rational]:
    """Weak pullback of two groupoids over the same base, with its cardinality.

    The cardinality equals the alpha = 0 pairing
    sum over [x] of |Aut(x)| phi~([x]) psi~([x]).
    """
    if not _same_groupoid(phi.base, psi.base):
        raise ValueError("inner product requires the same base groupoid")
    P, _pt, _ps = weak_pullback(phi.projection, psi.projection, mode=mode)
    return P, cardinality(P)


class _TraceGroupoid(FiniteGroupoid):
    """Objects (s, alpha: p(s) -> q(s)); morphisms are apex morphisms."""

    __slots__ = ("obj_data", "mor_data", "_mor_index", "A")

    def __init__(self, A: FiniteGroupoid, obj_data, mor_data, mor_target):
        self.A = A
        self.obj_data = obj_data
        self.mor_data = mor_data
        self._mor_index = {m: i for i, m in enumerate(mor_data)}
        src = tuple(o for o, _u in mor_data)
        identity = tuple(self._mor_index[(o, A.identity[s])]
                         for o, (s, _a) in enumerate(obj_data))
        inverse = tuple(self._mor_index[(mor_target[i], A.inverse[u])]
                        for i, (_o, u) in enumerate(mor_data))
        super().__init__(len(obj_data), src, tuple(mor_target),
                         identity, inverse, self._compose_tr)

    def _compose_tr(self, f: int, g: int) -> int:
        o, u1 = self.mor_data[f]
        _o2, u2 = self.mor_data[g]
        return self._mor_index[(o, self.A.compose(u1, u2))]


def trace_span(s: SpanOfGroupoids, mode: PullbackMode = "auto"
               ) -> tuple[FiniteGroupoid, Rational]:
    """Trace groupoid of an endo-span, with its exact cardinality.

    Objects pair an apex object with a loop isomorphism p(s) -> q(s) in the
    base; the cardinality equals the matrix trace of the span at alpha = 0.
    """
    if not _same_groupoid(s.source, s.target):
        raise ValueError("trace needs a span with equal feet")
    A = s.apex
    B = s.source
    p, q = s.right, s.left

    if mode == "auto":
        n_obj = sum(len(B.hom(p.obj_map[a], q.obj_map[a]))
                    for a in range(A.n_objects))
        n_mor = sum(len(B.hom(p.obj_map[a], q.obj_map[a])) * len(A.mor_from(a))
                    for a in range(A.n_objects))
        limit = min(size_cap(), LITERAL_AUTO_THRESHOLD)
        mode = "literal" if max(n_obj, n_mor) <= limit else "skeletal"

    obj_data: list[tuple[int, int]] = []
    mor_data: list[tuple[int, int]] = []
    mor_target: list[int] = []
    if mode == "literal":
        obj_index: dict[tuple[int, int], int] = {}
        for a in range(A.n_objects):
            for alpha in B.hom(p.obj_map[a], q.obj_map[a]):
                obj_index[(a, alpha)] = len(obj_data)
                obj_data.append((a, alpha))
        for o, (a, alpha) in enumerate(obj_data):
            for u in A.mor_from(a):
                alpha2 = B.compose(B.compose(B.inverse[p.mor_map[u]], alpha),
                                   q.mor_map[u])
                mor_data.append((o, u))
                mor_target.append(obj_index[(A.tgt[u], alpha2)])
    else:
        table = iso_classes(A)
        for a0 in table.representative:
            isos = B.hom(p.obj_map[a0], q.obj_map[a0])
            if not isos:
                continue
            aut = A.aut(a0)
            index = {alpha: i for i, alpha in enumerate(isos)}
            uf = UnionFind(len(isos))
            for i, alpha in enumerate(isos):
                for u in aut:
                    alpha2 = B.compose(
                        B.compose(B.inverse[p.mor_map[u]], alpha),
                        q.mor_map[u])
                    uf.union(i, index[alpha2])
            groups: dict[int, list[int]] = {}
            for i, alpha in enumerate(isos):
                groups.setdefault(uf.find(i), []).append(alpha)
            for root in sorted(groups):
                alpha0 = min(groups[root])
                o = len(obj_data)
                obj_data.append((a0, alpha0))
                for u in aut:
                    if B.compose(B.compose(B.inverse[p.mor_map[u]], alpha0),
                                 q.mor_map[u]) == alpha0:
                        mor_data.append((o, u))
                        mor_target.append(o)

    tr = _TraceGroupoid(A, obj_data, mor_data, mor_target)
    return tr, cardinality(tr)


# -- JSON / CSV interchange --------------------------------------------------

def format_rational(x) -> str:
    if isinstance(x, QSqrt):
        if x.is_rational:
            x = x.as_fraction()
        else:
            return repr(x)
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


def parse_rational(text: str) -> Fraction:
    num, _, den = text.partition("/")
    return Fraction(int(num), int(den) if den else 1)


def matrix_to_json(m: RationalMatrix,
                   row_table: IsoClassTable | None = None,
                   col_table: IsoClassTable | None = None) -> dict:
    rows = list(row_table.representative) if row_table else list(range(m.n_rows))
    cols = list(col_table.representative) if col_table else list(range(m.n_cols))
    return {
        "rows": rows,
        "cols": cols,
        "entries": [[format_rational(x) for x in row] for row in m.data],
    }


def matrix_to_csv(m: RationalMatrix) -> str:
    return "\n".join(",".join(format_rational(x) for x in row)
                     for row in m.data) + "\n"


def span_to_json(s: SpanOfGroupoids) -> dict:
    return {
        "apex": s.apex.to_json(),
        "left": s.left.to_json(),
        "right": s.right.to_json(),
        "left_codomain": s.target.to_json(),
        "right_codomain": s.source.to_json(),
    }


def span_from_json(data: dict) -> SpanOfGroupoids:
    apex = FiniteGroupoid.from_json(data["apex"])
    target = FiniteGroupoid.from_json(data["left_codomain"])
    source = FiniteGroupoid.from_json(data["right_codomain"])
    left = GroupoidFunctor.from_json(data["left"], apex, target)
    right = GroupoidFunctor.from_json(data["right"], apex, source)
    return SpanOfGroupoids(apex, left, right)
