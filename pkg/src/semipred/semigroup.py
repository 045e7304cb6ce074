"""Finite semigroups and groups given by Cayley tables.

Elements are the integers ``0 .. n-1``; a table is a tuple of rows so that
``table[a][b]`` is the product ``a*b``.  Everything here is immutable and
computed from the table on demand.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product
from typing import Iterable, Mapping, NamedTuple, Sequence

from .errors import (
    AssociativityError,
    MalformedTableError,
    NormalizationError,
    NotAGroupError,
    NotHomogroupError,
    NotSimpleError,
)

Table = tuple[tuple[int, ...], ...]


def _as_table(rows: Sequence[Sequence[int]], n: int | None = None) -> Table:
    if n is None:
        n = len(rows)
    if n < 1:
        raise MalformedTableError("table must have at least one element")
    if len(rows) != n:
        raise MalformedTableError(f"expected {n} rows, got {len(rows)}")
    out = []
    for a, row in enumerate(rows):
        if len(row) != n:
            raise MalformedTableError(f"row {a} has {len(row)} entries, expected {n}")
        for b, v in enumerate(row):
            if isinstance(v, bool) or not isinstance(v, int) or not 0 <= v < n:
                raise MalformedTableError(f"entry {v!r} not in [0, {n})", cell=(a, b))
        out.append(tuple(row))
    return tuple(out)


def first_associativity_failure(table: Table) -> tuple[int, int, int] | None:
    n = len(table)
    for a in range(n):
        row_a = table[a]
        for b in range(n):
            ab = row_a[b]
            row_b = table[b]
            for c in range(n):
                if table[ab][c] != row_a[row_b[c]]:
                    return (a, b, c)
    return None


@dataclass(frozen=True)
class Semigroup:
    """An associative Cayley table.  Construction verifies closure and associativity."""

    table: Table

    def __post_init__(self):
        table = _as_table(self.table)
        bad = first_associativity_failure(table)
        if bad is not None:
            raise AssociativityError(bad)
        object.__setattr__(self, "table", table)

    @property
    def size(self) -> int:
        return len(self.table)

    @property
    def elements(self) -> range:
        return range(len(self.table))

    def __len__(self) -> int:
        return len(self.table)

    def multiply(self, a: int, b: int) -> int:
        return multiply(self, a, b)

    def __str__(self) -> str:
        return format_table(self.table)


def semigroup_from_table(n: int, table: Sequence[Sequence[int]]) -> Semigroup:
    return Semigroup(_as_table(table, n))


def format_table(table: Sequence[Sequence[int]]) -> str:
    """Render a table in the Cayley file format (size line, then rows)."""
    lines = [str(len(table))]
    lines.extend(" ".join(str(v) for v in row) for row in table)
    return "\n".join(lines) + "\n"


def multiply(s: Semigroup, a: int, b: int) -> int:
    n = s.size
    if not (0 <= a < n and 0 <= b < n):
        raise IndexError(f"element ids ({a}, {b}) out of range for order {n}")
    return s.table[a][b]


def restrict(s: Semigroup, members: Iterable[int]) -> tuple[Semigroup, list[int]]:
    """The subsemigroup on ``members``, relabeled ``0..k-1`` in ascending id order.

    Returns the subsemigroup and the list mapping new ids to old ids.
    """
    old = sorted(set(members))
    new_of = {x: i for i, x in enumerate(old)}
    try:
        rows = [[new_of[s.table[x][y]] for y in old] for x in old]
    except KeyError:
        raise ValueError("subset is not closed under multiplication") from None
    return Semigroup(_as_table(rows)), old


# -- element subsets ---------------------------------------------------------


@dataclass(frozen=True)
class SubsetReport:
    members: frozenset[int]
    kind: str  # "kernel" | "reducible" | "idempotents"

    def __contains__(self, x: int) -> bool:
        return x in self.members

    def __len__(self) -> int:
        return len(self.members)

    def sorted(self) -> list[int]:
        return sorted(self.members)


def idempotents(s: Semigroup) -> SubsetReport:
    return SubsetReport(frozenset(a for a in s.elements if s.table[a][a] == a), "idempotents")


def reducible(s: Semigroup) -> SubsetReport:
    return SubsetReport(frozenset(v for row in s.table for v in row), "reducible")


def principal_ideal(s: Semigroup, a: int) -> frozenset[int]:
    """J(a) = {a} u Sa u aS u SaS."""
    t = s.table
    left = {t[x][a] for x in s.elements}
    right = {t[a][y] for y in s.elements}
    both = {t[x][r] for x in s.elements for r in right}
    return frozenset({a} | left | right | both)


def is_ideal(s: Semigroup, members: Iterable[int]) -> bool:
    m = set(members)
    t = s.table
    return all(t[x][a] in m and t[a][x] in m for a in m for x in s.elements)


def kernel(s: Semigroup) -> SubsetReport:
    """The minimal two-sided ideal, found as the smallest principal ideal."""
    ideals = [principal_ideal(s, a) for a in s.elements]
    smallest = min(ideals, key=len)
    # every ideal contains the kernel; principal ideals suffice to check this
    for other in ideals:
        if not smallest <= other:
            raise AssertionError("no principal ideal is contained in all others")
    return SubsetReport(smallest, "kernel")


def is_simple(s: Semigroup) -> bool:
    return len(kernel(s).members) == s.size


# -- groups ------------------------------------------------------------------


def is_quasigroup(s: Semigroup | Sequence[Sequence[int]]) -> bool:
    """Latin-square test.  Accepts raw (possibly non-associative) tables."""
    table = s.table if isinstance(s, Semigroup) else _as_table(s)
    n = len(table)
    full = set(range(n))
    if any(set(row) != full for row in table):
        return False
    return all({table[a][b] for a in range(n)} == full for b in range(n))


def two_sided_identity(table: Table) -> int | None:
    n = len(table)
    for e in range(n):
        if all(table[e][x] == x and table[x][e] == x for x in range(n)):
            return e
    return None


@dataclass(frozen=True)
class GroupView:
    base: Semigroup
    identity: int
    inverse: tuple[int, ...]

    def __post_init__(self):
        t = self.base.table
        e = self.identity
        n = self.base.size
        if not 0 <= e < n or any(t[e][x] != x or t[x][e] != x for x in range(n)):
            raise NotAGroupError(NotAGroupError.NO_IDENTITY)
        if len(self.inverse) != n:
            raise NotAGroupError(NotAGroupError.MISSING_INVERSE)
        for a, b in enumerate(self.inverse):
            if t[a][b] != e or t[b][a] != e:
                raise NotAGroupError(NotAGroupError.MISSING_INVERSE, a)
        if not is_quasigroup(self.base):
            raise NotAGroupError(NotAGroupError.NOT_LATIN)

    @property
    def size(self) -> int:
        return self.base.size

    @property
    def table(self) -> Table:
        return self.base.table

    def mul(self, a: int, b: int) -> int:
        return self.base.table[a][b]

    def inv(self, a: int) -> int:
        return self.inverse[a]


def as_group(s: Semigroup) -> GroupView:
    t = s.table
    e = two_sided_identity(t)
    if e is None:
        raise NotAGroupError(NotAGroupError.NO_IDENTITY)
    inverse = []
    for a in s.elements:
        for b in s.elements:
            if t[a][b] == e and t[b][a] == e:
                inverse.append(b)
                break
        else:
            raise NotAGroupError(NotAGroupError.MISSING_INVERSE, a)
    return GroupView(s, e, tuple(inverse))


# -- Rees matrix construction --------------------------------------------------


@dataclass(frozen=True)
class ReesSpec:
    """Group, index set sizes and the |I| x |Lambda| sandwich matrix.

    ``sandwich[i][mu]`` is the group element between a right factor in row
    ``mu`` of Lambda and a left factor in column ``i`` of I.
    """

    group: GroupView
    lambda_size: int
    i_size: int
    sandwich: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        if self.lambda_size < 1 or self.i_size < 1:
            raise ValueError("index sets must be nonempty")
        p = tuple(tuple(row) for row in self.sandwich)
        if len(p) != self.i_size or any(len(row) != self.lambda_size for row in p):
            raise ValueError(
                f"sandwich must have {self.i_size} rows and {self.lambda_size} columns"
            )
        g = self.group.size
        for i, row in enumerate(p):
            for mu, v in enumerate(row):
                if not 0 <= v < g:
                    raise MalformedTableError(f"sandwich entry {v} not a group element", cell=(i, mu))
        object.__setattr__(self, "sandwich", p)

    @property
    def order(self) -> int:
        return self.lambda_size * self.group.size * self.i_size

    def is_normalized(self) -> bool:
        e = self.group.identity
        return all(v == e for v in self.sandwich[0]) and all(row[0] == e for row in self.sandwich)


@dataclass(frozen=True)
class LabeledSemigroup:
    semigroup: Semigroup
    labels: tuple[tuple[int, int, int], ...]  # element id -> (lam, g, i)
    index: Mapping[tuple[int, int, int], int] = field(compare=False, repr=False, default=None)

    def __post_init__(self):
        if len(set(self.labels)) != len(self.labels) or len(self.labels) != self.semigroup.size:
            raise ValueError("labels must be a bijection onto the element ids")
        object.__setattr__(self, "index", {lab: x for x, lab in enumerate(self.labels)})

    def element(self, lam: int, g: int, i: int) -> int:
        return self.index[(lam, g, i)]


def rees_element_id(spec: ReesSpec, lam: int, g: int, i: int) -> int:
    return (lam * spec.group.size + g) * spec.i_size + i


def rees_construct(spec: ReesSpec) -> LabeledSemigroup:
    """Triples (lam, g, i) with (lam, g, i)(mu, h, j) = (lam, g * p[i][mu] * h, j)."""
    if not spec.is_normalized():
        raise NormalizationError("row 0 and column 0 of the sandwich matrix must be the identity")
    G = spec.group
    gm = G.table
    p = spec.sandwich
    labels = [
        (lam, g, i)
        for lam in range(spec.lambda_size)
        for g in range(G.size)
        for i in range(spec.i_size)
    ]
    index = {lab: x for x, lab in enumerate(labels)}
    rows = [
        [index[(lam, gm[gm[g][p[i][mu]]][h], j)] for (mu, h, j) in labels]
        for (lam, g, i) in labels
    ]
    return LabeledSemigroup(Semigroup(_as_table(rows)), tuple(labels))


class Coordinatization(NamedTuple):
    spec: ReesSpec
    labeled: LabeledSemigroup


def coordinatize_simple(s: Semigroup) -> Coordinatization:
    """Rees coordinates of a finite simple semigroup.

    The first index groups elements by the right ideal ``xS``, the last by the
    left ideal ``Sx``.  The basepoint is the smallest idempotent; it becomes
    (0, identity, 0) and the sandwich matrix comes out normalized.
    """
    if not is_simple(s):
        raise NotSimpleError("semigroup is not simple")
    t = s.table
    els = list(s.elements)
    e = min(idempotents(s).members)

    def classes(key):
        found: dict[frozenset[int], list[int]] = {}
        for x in els:
            found.setdefault(key(x), []).append(x)
        groups = sorted(found.values(), key=lambda c: (e not in c, min(c)))
        return {x: k for k, c in enumerate(groups) for x in c}, len(groups)

    lam_of, n_lam = classes(lambda x: frozenset(t[x]))
    i_of, n_i = classes(lambda x: frozenset(t[y][x] for y in els))
    cell = lambda lam, i: [x for x in els if lam_of[x] == lam and i_of[x] == i]  # noqa: E731

    H = cell(0, 0)
    # group ids: identity first, remaining members in ascending order
    g_old = [e] + [x for x in H if x != e]
    g_new = {x: k for k, x in enumerate(g_old)}
    group = as_group(Semigroup(_as_table([[g_new[t[x][y]] for y in g_old] for x in g_old])))

    # r[lam] in cell (lam, 0) with e*r = e; q[i] in cell (0, i) with q*e = e
    r = [next(x for x in cell(lam, 0) if t[e][x] == e) for lam in range(n_lam)]
    q = [next(x for x in cell(0, i) if t[x][e] == e) for i in range(n_i)]
    sandwich = tuple(tuple(g_new[t[q[i]][r[mu]]] for mu in range(n_lam)) for i in range(n_i))
    spec = ReesSpec(group, n_lam, n_i, sandwich)

    labels: list[tuple[int, int, int] | None] = [None] * s.size
    for lam in range(n_lam):
        for k, g in enumerate(g_old):
            for i in range(n_i):
                x = t[t[r[lam]][g]][q[i]]
                if labels[x] is not None:
                    raise AssertionError("coordinatization is not injective")
                labels[x] = (lam, k, i)
    return Coordinatization(spec, LabeledSemigroup(s, tuple(labels)))


def find_isomorphism(s1: Semigroup, s2: Semigroup) -> tuple[int, ...] | None:
    """Brute-force search for a bijection f with f(ab) = f(a)f(b); None if none exists."""
    from itertools import permutations

    n = s1.size
    if s2.size != n:
        return None
    t1, t2 = s1.table, s2.table
    for f in permutations(range(n)):
        if all(f[t1[a][b]] == t2[f[a]][f[b]] for a in range(n) for b in range(n)):
            return f
    return None


def idempotents_closed(s: Semigroup) -> bool:
    e = idempotents(s).members
    return all(s.table[x][y] in e for x in e for y in e)


def sandwich_is_trivial(s: Semigroup) -> bool:
    """Simple, and the normalized sandwich matrix is all identity."""
    if not is_simple(s):
        return False
    spec = coordinatize_simple(s).spec
    return all(v == spec.group.identity for row in spec.sandwich for v in row)


def is_rectangular_band_of_groups(s: Semigroup) -> bool:
    """Sandwich-matrix criterion, cross-checked against idempotent closure."""
    by_matrix = sandwich_is_trivial(s)
    by_idempotents = is_simple(s) and idempotents_closed(s)
    if by_matrix != by_idempotents:
        raise AssertionError(
            f"rectangular band criteria disagree: sandwich={by_matrix}, idempotents={by_idempotents}"
        )
    return by_matrix


# -- homogroups ----------------------------------------------------------------


class HomogroupResult(NamedTuple):
    is_homogroup: bool
    identity: int | None

    def __bool__(self) -> bool:
        return self.is_homogroup


def is_homogroup(s: Semigroup) -> HomogroupResult:
    sub, old = restrict(s, kernel(s).members)
    try:
        g = as_group(sub)
    except NotAGroupError:
        return HomogroupResult(False, None)
    return HomogroupResult(True, old[g.identity])


class CenterCheck(NamedTuple):
    holds: bool
    witness: int | None  # element failing to commute with e, or e itself if e*e != e

    def __bool__(self) -> bool:
        return self.holds


def verify_homogroup_center(s: Semigroup) -> CenterCheck:
    hg = is_homogroup(s)
    if not hg:
        raise NotHomogroupError("kernel is not a group")
    e = hg.identity
    t = s.table
    if t[e][e] != e:
        return CenterCheck(False, e)
    for x in s.elements:
        if t[e][x] != t[x][e]:
            return CenterCheck(False, x)
    return CenterCheck(True, None)


# -- named constructions -------------------------------------------------------


def from_operation(n: int, op) -> Semigroup:
    return Semigroup(_as_table([[op(a, b) for b in range(n)] for a in range(n)]))


def cyclic_group(n: int) -> Semigroup:
    return from_operation(n, lambda a, b: (a + b) % n)


def trivial_semigroup() -> Semigroup:
    return Semigroup(((0,),))


def left_zero(n: int) -> Semigroup:
    return from_operation(n, lambda a, b: a)


def right_zero(n: int) -> Semigroup:
    return from_operation(n, lambda a, b: b)


def null_semigroup(n: int) -> Semigroup:
    return from_operation(n, lambda a, b: 0)


def min_semilattice(n: int) -> Semigroup:
    return from_operation(n, min)


def rectangular_band(rows: int, cols: int) -> Semigroup:
    """Elements (r, c) numbered r*cols + c, with (r, c)(r', c') = (r, c')."""
    return from_operation(rows * cols, lambda a, b: (a // cols) * cols + b % cols)


def permutation_group(perms: Sequence[Sequence[int]]) -> Semigroup:
    """Cayley table of a closed set of permutations; ``a*b`` applies b first, then a."""
    perms = [tuple(p) for p in perms]
    index = {p: k for k, p in enumerate(perms)}
    return from_operation(
        len(perms), lambda a, b: index[tuple(perms[a][x] for x in perms[b])]
    )


def symmetric_group(k: int) -> Semigroup:
    from itertools import permutations

    return permutation_group(sorted(permutations(range(k))))


def dihedral_group(k: int) -> Semigroup:
    """Symmetries of a k-gon, order 2k."""
    rots = [tuple((x + s) % k for x in range(k)) for s in range(k)]
    refl = [tuple((s - x) % k for x in range(k)) for s in range(k)]
    return permutation_group(rots + refl)


def quaternion_group() -> Semigroup:
    # units +-1, +-i, +-j, +-k as (sign, axis) with axis 0 = real
    units = [(s, ax) for ax in range(4) for s in (1, -1)]
    mul_axes = {
        (1, 2): (1, 3), (2, 3): (1, 1), (3, 1): (1, 2),
        (2, 1): (-1, 3), (3, 2): (-1, 1), (1, 3): (-1, 2),
    }

    def op(a, b):
        (sa, xa), (sb, xb) = units[a], units[b]
        if xa == 0:
            sign, axis = 1, xb
        elif xb == 0:
            sign, axis = 1, xa
        elif xa == xb:
            sign, axis = -1, 0
        else:
            sign, axis = mul_axes[(xa, xb)]
        return units.index((sa * sb * sign, axis))

    return from_operation(8, op)


def direct_product(s1: Semigroup, s2: Semigroup) -> Semigroup:
    """Pairs (a, b) numbered a*|s2| + b."""
    m = s2.size
    t1, t2 = s1.table, s2.table
    return from_operation(
        s1.size * m, lambda x, y: t1[x // m][y // m] * m + t2[x % m][y % m]
    )


def all_triples_associative(table: Sequence[Sequence[int]]) -> bool:
    n = len(table)
    return all(
        table[table[a][b]][c] == table[a][table[b][c]] for a, b, c in product(range(n), repeat=3)
    )
