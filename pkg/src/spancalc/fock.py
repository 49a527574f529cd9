"""The truncated groupoid of finite sets, stuff types, and oscillator spans.

``E`` is materialized skeletally: one object per cardinality n with the
permutations of {0..n-1} as automorphisms.  Stuff types are groupoids over
E; their degroupoidified vectors are exponential generating functions with
exact rational coefficients.  The annihilation span has the identity
inclusion as left leg and "disjoint union with one fresh element" as right
leg; creation is its adjoint.  Truncation effects are confined to the last
row and column and are reported, never silently dropped.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction

from .groupoid import FiniteGroupoid, GroupoidFunctor, Rational, SizeCapError
from .spans import (
    GroupoidOverX,
    PullbackMode,
    RationalMatrix,
    RationalVector,
    SpanOfGroupoids,
    add_spans,
    adjoint,
    compose_spans,
    degroupoidify_span,
    degroupoidify_vector,
    identity_span,
    scalar_mul,
)

MAX_MATERIALIZED_N = 8


class _PermLevels:
    """Permutations of {0..n-1} for each n <= N, in lexicographic order."""

    def __init__(self, N: int):
        self.N = N
        self.perms: list[list[tuple[int, ...]]] = [
            list(itertools.permutations(range(n))) for n in range(N + 1)
        ]
        self.index: list[dict[tuple[int, ...], int]] = [
            {p: i for i, p in enumerate(level)} for level in self.perms
        ]
        self.offset = [0] * (N + 2)
        for n in range(N + 1):
            self.offset[n + 1] = self.offset[n] + len(self.perms[n])
        self._comp_table: list[list[int] | None] = [None] * (N + 1)

    def morphism(self, n: int, perm: tuple[int, ...]) -> int:
        return self.offset[n] + self.index[n][perm]

    def level_of(self, m: int) -> int:
        n = 0
        while self.offset[n + 1] <= m:
            n += 1
        return n

    def decode(self, m: int) -> tuple[int, tuple[int, ...]]:
        n = self.level_of(m)
        return n, self.perms[n][m - self.offset[n]]

    def comp(self, m1: int, m2: int) -> int:
        """Composite "m1 then m2" within one level, table-backed."""
        n = self.level_of(m1)
        table = self._comp_table[n]
        if table is None:
            perms = self.perms[n]
            size = len(perms)
            index = self.index[n]
            rng = range(n)
            table = [0] * (size * size)
            for a, p in enumerate(perms):
                base = a * size
                for b, q in enumerate(perms):
                    table[base + b] = index[tuple(q[p[i]] for i in rng)]
            self._comp_table[n] = table
        size = len(self.perms[n])
        off = self.offset[n]
        return off + table[(m1 - off) * size + (m2 - off)]


@dataclass(frozen=True)
class TruncatedE:
    """Finite-sets groupoid truncated at cardinality N (inclusive)."""

    N: int
    groupoid: FiniteGroupoid | None
    levels: _PermLevels | None

    @property
    def cardinality(self) -> Rational:
        """Sum of 1/n! for n <= N; needs no morphism materialization."""
        total = Fraction(0)
        fact = 1
        for n in range(self.N + 1):
            if n:
                fact *= n
            total += Fraction(1, fact)
        return total


def build_E(N: int, classes_only: bool = False) -> TruncatedE:
    """Skeletal groupoid of sets of size <= N and bijections.

    ``classes_only`` skips morphism materialization (any N); the full
    groupoid is limited to N <= 8 so that sum(n!) stays within the cap.
    """
    if classes_only:
        return TruncatedE(N, None, None)
    if N > MAX_MATERIALIZED_N:
        raise SizeCapError("truncated finite-sets groupoid", sum(
            _factorial(n) for n in range(N + 1)))
    levels = _PermLevels(N)
    n_mor = levels.offset[N + 1]
    src = []
    for n in range(N + 1):
        src.extend([n] * len(levels.perms[n]))
    identity = tuple(levels.morphism(n, tuple(range(n))) for n in range(N + 1))
    inverse = []
    for n in range(N + 1):
        for p in levels.perms[n]:
            inv = [0] * n
            for i, pi in enumerate(p):
                inv[pi] = i
            inverse.append(levels.morphism(n, tuple(inv)))

    groupoid = FiniteGroupoid(N + 1, tuple(src), tuple(src), identity,
                              tuple(inverse), levels.comp)
    return TruncatedE(N, groupoid, levels)


def _factorial(n: int) -> int:
    out = 1
    for k in range(2, n + 1):
        out *= k
    return out


@dataclass(frozen=True)
class StuffType:
    """A groupoid over the truncated finite-sets groupoid."""

    over: GroupoidOverX
    E: TruncatedE


@dataclass(frozen=True)
class PowerSeriesVector:
    """Coefficients c_0 .. c_N of a truncated power series, exact."""

    coefficients: tuple[Fraction, ...]

    def __str__(self) -> str:
        parts = []
        for n, c in enumerate(self.coefficients):
            z = "" if n == 0 else (" z" if n == 1 else f" z^{n}")
            parts.append(f"{c.numerator}/{c.denominator}{z}")
        return " + ".join(parts)


def generating_function(stuff: StuffType, alpha: Fraction | int = 0
                        ) -> PowerSeriesVector:
    vec = degroupoidify_vector(stuff.over, alpha)
    return PowerSeriesVector(tuple(vec.entries))


def psi_n(n: int, E: TruncatedE) -> StuffType:
    """The stuff type "being an n-element set": one class with n! automorphisms."""
    if n > E.N:
        raise ValueError(f"n={n} exceeds the truncation bound {E.N}")
    perms = list(itertools.permutations(range(n)))
    index = {p: i for i, p in enumerate(perms)}
    e = index[tuple(range(n))]
    inv = tuple(index[tuple(sorted(range(n), key=lambda i: p[i]))]
                for p in perms)

    def comp(f: int, g: int) -> int:
        p, q = perms[f], perms[g]
        return index[tuple(q[p[i]] for i in range(n))]

    total = FiniteGroupoid(1, (0,) * len(perms), (0,) * len(perms), (e,),
                           inv, comp)
    proj = GroupoidFunctor(
        total, E.groupoid, (n,),
        tuple(E.levels.morphism(n, p) for p in perms))
    return StuffType(GroupoidOverX(total, proj), E)


def two_colored_stuff(E: TruncatedE) -> StuffType:
    """Finite sets with a 2-coloring; generating function has entries 2^n/n!."""
    levels = E.levels
    objects: list[tuple[int, tuple[int, ...]]] = []
    obj_index: dict[tuple[int, tuple[int, ...]], int] = {}
    for n in range(E.N + 1):
        for coloring in itertools.product((0, 1), repeat=n):
            obj_index[(n, coloring)] = len(objects)
            objects.append((n, coloring))

    src: list[int] = []
    tgt: list[int] = []
    proj_mor: list[int] = []
    mor_offset: list[int] = []
    mor_data: list[tuple[int, int]] = []  # (object, perm index at its level)
    for o, (n, coloring) in enumerate(objects):
        mor_offset.append(len(mor_data))
        for a, p in enumerate(levels.perms[n]):
            # p maps the set to itself; the target coloring pulls back along
            # the inverse so that colors are preserved
            target = tuple(coloring[_inv_at(p, j)] for j in range(n))
            src.append(o)
            tgt.append(obj_index[(n, target)])
            proj_mor.append(levels.morphism(n, p))
            mor_data.append((o, a))
    mor_offset.append(len(mor_data))

    identity = tuple(mor_offset[o] + levels.index[objects[o][0]][
        tuple(range(objects[o][0]))] for o in range(len(objects)))
    inverse = []
    for o, a in mor_data:
        n, _coloring = objects[o]
        p = levels.perms[n][a]
        inv = tuple(sorted(range(n), key=lambda i: p[i]))
        inverse.append(mor_offset[tgt[mor_offset[o] + a]]
                       + levels.index[n][inv])

    def comp(f: int, g: int) -> int:
        o1, a1 = mor_data[f]
        o2, a2 = mor_data[g]
        n = objects[o1][0]
        p, q = levels.perms[n][a1], levels.perms[n][a2]
        return mor_offset[o1] + levels.index[n][
            tuple(q[p[i]] for i in range(n))]

    total = FiniteGroupoid(len(objects), tuple(src), tuple(tgt), identity,
                           tuple(inverse), comp)
    proj = GroupoidFunctor(total, E.groupoid,
                           tuple(n for n, _c in objects), tuple(proj_mor))
    return StuffType(GroupoidOverX(total, proj), E)


def _inv_at(p: tuple[int, ...], j: int) -> int:
    for i, pi in enumerate(p):
        if pi == j:
            return i
    raise ValueError


def _inclusion_functor(inner: TruncatedE, outer: TruncatedE) -> GroupoidFunctor:
    mor = []
    for n in range(inner.N + 1):
        for p in inner.levels.perms[n]:
            mor.append(outer.levels.morphism(n, p))
    return GroupoidFunctor(inner.groupoid, outer.groupoid,
                           tuple(range(inner.N + 1)), tuple(mor))


def _shift_functor(inner: TruncatedE, outer: TruncatedE) -> GroupoidFunctor:
    """Adds one fresh element: n -> n+1, permutations extended to fix it."""
    mor = []
    for n in range(inner.N + 1):
        for p in inner.levels.perms[n]:
            mor.append(outer.levels.morphism(n + 1, p + (n,)))
    return GroupoidFunctor(inner.groupoid, outer.groupoid,
                           tuple(range(1, inner.N + 2)), tuple(mor))


def annihilation_span(E: TruncatedE) -> SpanOfGroupoids:
    """Left leg the inclusion, right leg "add one element"; matrix d/dz."""
    inner = build_E(E.N - 1)
    return SpanOfGroupoids(inner.groupoid,
                           _inclusion_functor(inner, E),
                           _shift_functor(inner, E))


def creation_span(E: TruncatedE) -> SpanOfGroupoids:
    """The adjoint of annihilation; matrix is multiplication by z."""
    return adjoint(annihilation_span(E))


@dataclass(frozen=True)
class CcrReport:
    ok: bool
    block: int
    discrepancies: tuple[tuple[int, int, Fraction], ...]

    def __str__(self) -> str:
        status = "PASS" if self.ok else "FAIL"
        lines = [f"{status}: AA* - A*A = 1 on block {{0..{self.block - 1}}}^2"]
        for i, j, v in self.discrepancies:
            lines.append(f"  truncation boundary ({i},{j}): "
                         f"AA* - A*A - 1 = {v}")
        return "\n".join(lines)


def verify_ccr(E: TruncatedE, mode: PullbackMode = "auto") -> CcrReport:
    """Check matrix(AA*) - matrix(A*A) = identity away from the truncation.

    Both composites are built as spans (weak pullback) and degroupoidified;
    discrepancies can only sit in row/column N and are listed explicitly.
    """
    if E.N < 2:
        raise ValueError("need N >= 2 to see the commutation relation")
    A = annihilation_span(E)
    Astar = adjoint(A)
    m_aas = degroupoidify_span(compose_spans(A, Astar, mode=mode), 0)
    m_asa = degroupoidify_span(compose_spans(Astar, A, mode=mode), 0)
    diff = m_aas - m_asa
    ok = True
    discrepancies = []
    for i in range(E.N + 1):
        for j in range(E.N + 1):
            expected = Fraction(1) if i == j else Fraction(0)
            if diff.data[i][j] != expected:
                if i < E.N and j < E.N:
                    ok = False
                discrepancies.append((i, j, diff.data[i][j] - expected))
    return CcrReport(ok, E.N, tuple(discrepancies))


def _span_power(s: SpanOfGroupoids, k: int, base: FiniteGroupoid,
                mode: PullbackMode) -> SpanOfGroupoids:
    if k == 0:
        return identity_span(base)
    out = s
    for _ in range(k - 1):
        out = compose_spans(s, out, mode=mode)
    return out


NORMAL_ORDERED_EXPANSIONS: dict[int, list[tuple[int, int, int]]] = {
    # n: list of (coefficient, creation power j, annihilation power k)
    0: [(1, 0, 0)],
    1: [(1, 0, 1), (1, 1, 0)],
    2: [(1, 0, 2), (2, 1, 1), (1, 2, 0)],
    3: [(1, 0, 3), (3, 1, 2), (3, 2, 1), (1, 3, 0)],
}


def normal_ordered_power(n: int, E: TruncatedE,
                         mode: PullbackMode = "auto") -> SpanOfGroupoids:
    """The normal-ordered n-th power of the field span A + A*, n <= 3.

    Built from the expansion with all creation factors moved left, using
    span composition, coproduct for sums, and a discrete groupoid as the
    integer coefficient.
    """
    if n not in NORMAL_ORDERED_EXPANSIONS:
        raise ValueError(f"normal-ordered power {n} not tabulated (0..3)")
    A = annihilation_span(E)
    Astar = adjoint(A)
    base = E.groupoid
    total: SpanOfGroupoids | None = None
    for coeff, j, k in NORMAL_ORDERED_EXPANSIONS[n]:
        if j and k:
            term = compose_spans(_span_power(Astar, j, base, mode),
                                 _span_power(A, k, base, mode), mode=mode)
        elif j:
            term = _span_power(Astar, j, base, mode)
        else:
            term = _span_power(A, k, base, mode)
        if coeff != 1:
            term = scalar_mul(FiniteGroupoid.discrete(coeff), term)
        total = term if total is None else add_spans(total, term)
    return total


def field_span(E: TruncatedE) -> SpanOfGroupoids:
    """The field span A + A*; its matrix is tridiagonal."""
    A = annihilation_span(E)
    return add_spans(A, adjoint(A))
