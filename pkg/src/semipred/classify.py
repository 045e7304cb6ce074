"""Quasi-identity checks, the simple/hard verdict, and exhaustive surveys.

A semigroup is "simple" here when both cancellation-transfer laws hold:

    left:   a*alpha == a*beta   implies  b*alpha == b*beta   for all a, b
    right:  alpha*a == beta*a   implies  alpha*b == beta*b   for all a, b

and "hard" otherwise.  Surveys run every structural check over all
semigroups of a given small order.
"""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from itertools import permutations, product
from typing import Iterator

from .errors import BudgetExceededError
from .semigroup import (
    Semigroup,
    Table,
    format_table,
    is_homogroup,
    is_rectangular_band_of_groups,
    kernel,
    reducible,
    restrict,
    verify_homogroup_center,
)

DEFAULT_MAX_ORDER = 4


@dataclass(frozen=True)
class QiResult:
    holds: bool
    side: str  # "left" | "right"
    witness: tuple[int, int, int, int] | None = None  # (a, b, alpha, beta)
    products: dict[str, int] | None = None

    def __bool__(self) -> bool:
        return self.holds


def _qi(s: Semigroup, side: str) -> QiResult:
    t = s.table
    if side == "left":
        mul = lambda x, y: t[x][y]  # noqa: E731
    else:
        mul = lambda x, y: t[y][x]  # noqa: E731
    els = s.elements
    for alpha, beta in product(els, repeat=2):
        if alpha == beta:
            continue
        a = next((x for x in els if mul(x, alpha) == mul(x, beta)), None)
        if a is None:
            continue
        b = next((x for x in els if mul(x, alpha) != mul(x, beta)), None)
        if b is not None:
            if side == "left":
                names = ("a*alpha", "a*beta", "b*alpha", "b*beta")
            else:
                names = ("alpha*a", "beta*a", "alpha*b", "beta*b")
            values = (mul(a, alpha), mul(a, beta), mul(b, alpha), mul(b, beta))
            return QiResult(False, side, (a, b, alpha, beta), dict(zip(names, values)))
    return QiResult(True, side)


def check_left_qi(s: Semigroup) -> QiResult:
    return _qi(s, "left")


def check_right_qi(s: Semigroup) -> QiResult:
    return _qi(s, "right")


def satisfies_qis(s: Semigroup) -> bool:
    return check_left_qi(s).holds and check_right_qi(s).holds


@dataclass(frozen=True)
class ClassificationReport:
    qi_left: QiResult
    qi_right: QiResult
    kernel: frozenset[int]
    reducible: frozenset[int]
    is_homogroup: bool
    kernel_identity: int | None
    is_rect_band_kernel: bool

    @property
    def verdict(self) -> str:
        return "simple" if self.qi_left.holds and self.qi_right.holds else "hard"

    @property
    def kernel_is_reducible(self) -> bool:
        return self.kernel == self.reducible


def kernel_is_rectangular_band(s: Semigroup) -> bool:
    sub, _ = restrict(s, kernel(s).members)
    return is_rectangular_band_of_groups(sub)


def classify(s: Semigroup) -> ClassificationReport:
    hg = is_homogroup(s)
    return ClassificationReport(
        qi_left=check_left_qi(s),
        qi_right=check_right_qi(s),
        kernel=kernel(s).members,
        reducible=reducible(s).members,
        is_homogroup=hg.is_homogroup,
        kernel_identity=hg.identity,
        is_rect_band_kernel=kernel_is_rectangular_band(s),
    )


# -- enumeration ---------------------------------------------------------------------------


def _consistent(t: list[list[int]], n: int, x: int, y: int) -> bool:
    """Every fully determined associativity triple touching cell (x, y) holds."""
    v = t[x][y]
    for c in range(n):
        # (x*y)*c  vs  x*(y*c)
        left, yc = t[v][c], t[y][c]
        if left >= 0 and yc >= 0:
            right = t[x][yc]
            if right >= 0 and left != right:
                return False
    for a in range(n):
        # (a*x)*y  vs  a*(x*y)
        ax = t[a][x]
        if ax >= 0:
            left, right = t[ax][y], t[a][v]
            if left >= 0 and right >= 0 and left != right:
                return False
    for a in range(n):
        for b in range(n):
            # (a*b)*y with a*b = x   vs  a*(b*y)
            if t[a][b] == x:
                by = t[b][y]
                if by >= 0:
                    right = t[a][by]
                    if right >= 0 and right != v:
                        return False
            # x*(b*c) with b*c = y   vs  (x*b)*c  ... here b, c range over (a, b)
            if t[a][b] == y:
                xa = t[x][a]
                if xa >= 0:
                    left = t[xa][b]
                    if left >= 0 and left != v:
                        return False
    return True


def _fill(n: int, prefix: tuple[int, ...] = ()) -> Iterator[Table]:
    t = [[-1] * n for _ in range(n)]
    cells = [(x, y) for x in range(n) for y in range(n)]
    for k, v in enumerate(prefix):
        x, y = cells[k]
        t[x][y] = v
        if not _consistent(t, n, x, y):
            return

    def rec(k: int):
        if k == len(cells):
            yield tuple(tuple(row) for row in t)
            return
        x, y = cells[k]
        for v in range(n):
            t[x][y] = v
            if _consistent(t, n, x, y):
                yield from rec(k + 1)
        t[x][y] = -1

    yield from rec(len(prefix))


def _fill_all(args: tuple[int, tuple[int, ...]]) -> list[Table]:
    n, prefix = args
    return list(_fill(n, prefix))


def canonical_form(table: Table) -> Table:
    """Lexicographically smallest table over all relabelings."""
    n = len(table)
    best = None
    for perm in permutations(range(n)):
        inv = [0] * n
        for old, new in enumerate(perm):
            inv[new] = old
        cand = tuple(tuple(perm[table[inv[a]][inv[b]]] for b in range(n)) for a in range(n))
        if best is None or cand < best:
            best = cand
    return best


def enumerate_semigroups(
    n: int,
    mode: str = "labeled",
    *,
    max_order: int = DEFAULT_MAX_ORDER,
    workers: int = 1,
) -> Iterator[Semigroup]:
    """Every associative table of order ``n``, in lexicographic order.

    ``mode="iso"`` keeps one table per isomorphism class: the one equal to
    its own canonical form.  With ``workers > 1`` the search is split by
    first row across processes; output order is unchanged.
    """
    if mode not in ("labeled", "iso"):
        raise ValueError(f"unknown mode {mode!r}")
    if n < 1:
        raise ValueError("order must be positive")
    if n > max_order:
        raise BudgetExceededError("order", max_order, n)
    if workers > 1:
        prefixes = [(n, row) for row in product(range(n), repeat=n)]
        with ProcessPoolExecutor(max_workers=workers) as pool:
            tables = (t for chunk in pool.map(_fill_all, prefixes) for t in chunk)
            yield from _emit(tables, mode)
    else:
        yield from _emit(_fill(n), mode)


def _emit(tables, mode: str) -> Iterator[Semigroup]:
    for table in tables:
        if mode == "iso" and canonical_form(table) != table:
            continue
        yield Semigroup(table)


def naive_semigroups(n: int) -> Iterator[Table]:
    """Filter all n^(n*n) tables by full associativity.  Reference for tiny n."""
    for flat in product(range(n), repeat=n * n):
        table = tuple(flat[k * n:(k + 1) * n] for k in range(n))
        if all(
            table[table[a][b]][c] == table[a][table[b][c]]
            for a in range(n) for b in range(n) for c in range(n)
        ):
            yield table


# -- survey checks -----------------------------------------------------------------------------


def qi_kernel_shape_holds(s: Semigroup) -> bool:
    """Both QIs  =>  Ker = Red and the kernel is a rectangular band of groups."""
    if not satisfies_qis(s):
        return True
    return kernel(s).members == reducible(s).members and kernel_is_rectangular_band(s)


def homogroup_qi_holds(s: Semigroup) -> bool:
    """Homogroup with Ker = Red  =>  both QIs."""
    if not is_homogroup(s) or kernel(s).members != reducible(s).members:
        return True
    return satisfies_qis(s)


def central_identity_holds(s: Semigroup) -> bool:
    """Homogroup  =>  kernel identity is idempotent and central."""
    if not is_homogroup(s):
        return True
    return verify_homogroup_center(s).holds


def converse_premise(s: Semigroup) -> bool:
    return kernel(s).members == reducible(s).members and kernel_is_rectangular_band(s)


def converse_holds(s: Semigroup) -> bool:
    """Ker = Red a rectangular band of groups  =>  both QIs."""
    return not converse_premise(s) or satisfies_qis(s)


@dataclass
class SurveyOutcome:
    order: int
    total_tables: int = 0
    qi_pass_count: int = 0
    homogroup_count: int = 0
    converse_premise_count: int = 0
    qi_kernel_shape_violations: list[Table] = field(default_factory=list)
    homogroup_qi_violations: list[Table] = field(default_factory=list)
    central_identity_violations: list[Table] = field(default_factory=list)
    converse_counterexamples: list[Table] = field(default_factory=list)
    mode: str = "labeled"

    @property
    def violations(self) -> int:
        return len(self.central_identity_violations) + len(self.qi_kernel_shape_violations) + len(
            self.homogroup_qi_violations
        )

    def to_dict(self) -> dict:
        tables = lambda ts: [format_table(t) for t in ts]  # noqa: E731
        return {
            "order": self.order,
            "mode": self.mode,
            "total_tables": self.total_tables,
            "qi_pass_count": self.qi_pass_count,
            "homogroup_count": self.homogroup_count,
            "converse_premise_count": self.converse_premise_count,
            "central_identity_violations": tables(self.central_identity_violations),
            "qi_kernel_shape_violations": tables(self.qi_kernel_shape_violations),
            "homogroup_qi_violations": tables(self.homogroup_qi_violations),
            "converse_counterexamples": tables(self.converse_counterexamples),
        }


def survey(
    n: int,
    mode: str = "labeled",
    *,
    max_order: int = DEFAULT_MAX_ORDER,
    workers: int = 1,
) -> SurveyOutcome:
    out = SurveyOutcome(order=n, mode=mode)
    for s in enumerate_semigroups(n, mode, max_order=max_order, workers=workers):
        out.total_tables += 1
        if satisfies_qis(s):
            out.qi_pass_count += 1
        if is_homogroup(s):
            out.homogroup_count += 1
        if converse_premise(s):
            out.converse_premise_count += 1
        if not qi_kernel_shape_holds(s):
            out.qi_kernel_shape_violations.append(s.table)
        if not homogroup_qi_holds(s):
            out.homogroup_qi_violations.append(s.table)
        if not central_identity_holds(s):
            out.central_identity_violations.append(s.table)
        if not converse_holds(s):
            out.converse_counterexamples.append(s.table)
    return out
