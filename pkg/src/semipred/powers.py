"""Finite direct powers of relational structures.

An element of the power with exponent ``N`` is an ``N``-tuple of base ids and
relations hold coordinatewise.  Equations over the power carry tuple
constants; projecting at a coordinate replaces each tuple by its entry there,
and the solution set over the power is the product of the solution sets of
the projections.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import product
from typing import Iterator, Mapping, Sequence

from .errors import BudgetExceededError, QiHoldsError, QiViolatedError
from .relational import (
    DEFAULT_MAX_CELLS,
    Atom,
    Const,
    EquationSystem,
    Equality,
    Relation,
    RelationalStructure,
    SolutionSet,
    Var,
    project_solutions,
    solve,
)
from .semigroup import Semigroup


@dataclass(frozen=True)
class PowerStructure:
    base: RelationalStructure
    exponent: int

    def __post_init__(self):
        if self.exponent < 1:
            raise ValueError("exponent must be at least 1")

    @property
    def universe_size(self) -> int:
        return self.base.universe_size ** self.exponent

    def elements(self) -> Iterator[tuple[int, ...]]:
        return product(range(self.base.universe_size), repeat=self.exponent)

    def holds(self, name: str, args: Sequence[Sequence[int]]) -> bool:
        return all(
            self.base.holds(name, [arg[i] for arg in args]) for i in range(self.exponent)
        )


def power(a: RelationalStructure, n: int) -> PowerStructure:
    return PowerStructure(a, n)


def _project_term(t, i: int, exponent: int | None):
    if isinstance(t, Const) and isinstance(t.value, tuple):
        if exponent is not None and len(t.value) != exponent:
            raise ValueError(f"ragged constant {t}: length {len(t.value)}, exponent {exponent}")
        if not 0 <= i < len(t.value):
            raise IndexError(f"coordinate {i} out of range for {t}")
        return Const(t.value[i])
    return t


def project_equation(atom: Atom, i: int, exponent: int | None = None) -> Atom:
    """Replace every tuple constant by its ``i``-th entry.

    Integer constants are read as diagonal elements and left unchanged.
    """
    if isinstance(atom, Equality):
        return Equality(_project_term(atom.lhs, i, exponent), _project_term(atom.rhs, i, exponent))
    return Relation(atom.name, tuple(_project_term(t, i, exponent) for t in atom.args))


def project_system(sys: EquationSystem, i: int, exponent: int | None = None) -> EquationSystem:
    return sys.with_atoms(project_equation(atom, i, exponent) for atom in sys.atoms)


def _check_exponent(p: PowerStructure, sys: EquationSystem) -> None:
    for c in sys.constants():
        if isinstance(c.value, tuple) and len(c.value) != p.exponent:
            raise ValueError(f"ragged constant {c}: exponent is {p.exponent}")


@dataclass(frozen=True)
class ProductSolutionSet:
    """Solutions over a power, stored as one base solution set per coordinate.

    A point assigns each variable an ``N``-tuple; iteration produces points in
    that form without materializing the whole product up front.
    """

    variables: tuple[str, ...]
    factors: tuple[SolutionSet, ...]

    @property
    def count(self) -> int:
        return math.prod(len(f) for f in self.factors)

    def __len__(self) -> int:
        return self.count

    def is_empty(self) -> bool:
        return any(f.is_empty() for f in self.factors)

    is_inconsistent = is_empty

    def __iter__(self) -> Iterator[tuple[tuple[int, ...], ...]]:
        for combo in product(*(sorted(f.points) for f in self.factors)):
            yield tuple(tuple(coord[k] for coord in combo) for k in range(len(self.variables)))

    def __contains__(self, point) -> bool:
        if isinstance(point, Mapping):
            point = tuple(point[v] for v in self.variables)
        return all(
            tuple(value[i] for value in point) in f.points for i, f in enumerate(self.factors)
        )

    def points(self) -> frozenset[tuple[tuple[int, ...], ...]]:
        return frozenset(self)

    def same_set(self, other: "ProductSolutionSet") -> bool:
        """Set equality without enumeration (empty products are all equal)."""
        if self.variables != other.variables:
            raise ValueError("solution sets over different variables")
        if self.is_empty() or other.is_empty():
            return self.is_empty() and other.is_empty()
        return all(f.points == g.points for f, g in zip(self.factors, other.factors))


def project_product(sol: ProductSolutionSet, variables: Sequence[str]) -> ProductSolutionSet:
    """Coordinatewise projection; the product of projections is the projection of the product."""
    return ProductSolutionSet(
        tuple(variables), tuple(project_solutions(f, variables) for f in sol.factors)
    )


def solve_power(
    p: PowerStructure,
    sys: EquationSystem,
    *,
    max_cells: int | None = DEFAULT_MAX_CELLS,
) -> ProductSolutionSet:
    """Solve each coordinate projection over the base and keep the product."""
    _check_exponent(p, sys)
    factors = tuple(
        solve(p.base, project_system(sys, i, p.exponent), max_cells=max_cells)
        for i in range(p.exponent)
    )
    return ProductSolutionSet(sys.variables, factors)


def solve_power_exhaustive(p: PowerStructure, sys: EquationSystem) -> frozenset:
    """Generate-and-test over tuple assignments in the power; reference only."""
    _check_exponent(p, sys)
    elements = list(p.elements())
    points = set()
    for point in product(elements, repeat=len(sys.variables)):
        env = dict(zip(sys.variables, point))
        if all(_holds_in_power(p, atom, env) for atom in sys.atoms):
            points.add(point)
    return frozenset(points)


def _value(t, env, exponent: int) -> tuple[int, ...]:
    if isinstance(t, Var):
        return env[t.name]
    if isinstance(t.value, tuple):
        return t.value
    return (t.value,) * exponent


def _holds_in_power(p: PowerStructure, atom: Atom, env) -> bool:
    args = [_value(t, env, p.exponent) for t in atom.args]
    if isinstance(atom, Equality):
        return args[0] == args[1]
    return p.holds(atom.name, args)


def holds_at(p: PowerStructure, atom: Atom, env: Mapping[str, Sequence[int]]) -> bool:
    return _holds_in_power(p, atom, {k: tuple(v) for k, v in env.items()})


def failing_coordinates(p: PowerStructure, atom: Atom, env: Mapping[str, Sequence[int]]) -> list[int]:
    env = {k: tuple(v) for k, v in env.items()}
    args = [_value(t, env, p.exponent) for t in atom.args]
    bad = []
    for i in range(p.exponent):
        coord = [a[i] for a in args]
        ok = coord[0] == coord[1] if isinstance(atom, Equality) else p.base.holds(atom.name, coord)
        if not ok:
            bad.append(i)
    return bad


def power_systems_equivalent(
    p: PowerStructure,
    s1: EquationSystem,
    s2: EquationSystem,
    *,
    max_cells: int | None = DEFAULT_MAX_CELLS,
) -> bool:
    variables = tuple(dict.fromkeys(s1.variables + s2.variables))
    v1 = solve_power(p, EquationSystem(s1.atoms, variables), max_cells=max_cells)
    v2 = solve_power(p, EquationSystem(s2.atoms, variables), max_cells=max_cells)
    return v1.same_set(v2)


# -- inconsistency witnesses -----------------------------------------------------------


@dataclass(frozen=True)
class ConsistencyReport:
    consistent: bool
    coordinate: int | None = None
    witness: EquationSystem | None = None

    def __bool__(self) -> bool:
        return self.consistent


def check_consistency(
    p: PowerStructure,
    sys: EquationSystem,
    *,
    max_cells: int | None = DEFAULT_MAX_CELLS,
) -> ConsistencyReport:
    """Find an inconsistent coordinate and a small subsystem already inconsistent there.

    The subsystem is the shortest inconsistent prefix of the projection, then
    pruned by dropping atoms one at a time while it stays inconsistent.
    """
    _check_exponent(p, sys)
    for i in range(p.exponent):
        proj = project_system(sys, i, p.exponent)
        if not solve(p.base, proj, max_cells=max_cells).is_empty():
            continue

        def inconsistent(idx: list[int]) -> bool:
            sub = proj.with_atoms(proj.atoms[k] for k in idx)
            return solve(p.base, sub, max_cells=max_cells).is_empty()

        k = 1
        while not inconsistent(list(range(k))):
            k += 1
        keep = list(range(k))
        for idx in list(keep):
            trial = [j for j in keep if j != idx]
            if inconsistent(trial):
                keep = trial
        witness = EquationSystem(tuple(sys.atoms[j] for j in keep))
        return ConsistencyReport(False, i, witness)
    return ConsistencyReport(True)


# -- decomposition into buckets ----------------------------------------------------------

S0 = "S_0"
GROUND = "ground"
M_TAGS = {
    "cvv": "S_cij",
    "vcv": "S_icj",
    "vvc": "S_ijc",
    "ccv": "S_cci",
    "cvc": "S_cic",
    "vcc": "S_icc",
}
GROUP_TAGS = {"vc": "I_ic", "cv": "I_ci"}


@dataclass(frozen=True)
class Bucket:
    tag: str
    variables: tuple[str, ...]
    atoms: tuple[tuple[int, Atom], ...]  # (position in the input system, atom)

    @property
    def key(self) -> tuple[str, tuple[str, ...]]:
        return (self.tag, self.variables)

    def __len__(self) -> int:
        return len(self.atoms)


def classify_atom(atom: Atom) -> tuple[str, tuple[str, ...]]:
    """Bucket key for an atom: its tag and the variables it involves."""
    pattern = "".join("v" if isinstance(t, Var) else "c" for t in atom.args)
    variables = tuple(t.name for t in atom.args if isinstance(t, Var))
    if isinstance(atom, Equality) or "c" not in pattern:
        return (S0, variables)
    if "v" not in pattern:
        return (GROUND, ())
    if atom.name == "M" and pattern in M_TAGS:
        return (M_TAGS[pattern], variables)
    if atom.name == "I" and pattern in GROUP_TAGS:
        return (GROUP_TAGS[pattern], variables)
    return (f"{atom.name}_{pattern}", variables)


def decompose(sys: EquationSystem) -> list[Bucket]:
    """Group atoms by constant/variable pattern and the variables involved.

    Buckets come back in order of their first atom.
    """
    members: dict[tuple[str, tuple[str, ...]], list[tuple[int, Atom]]] = {}
    for k, atom in enumerate(sys.atoms):
        members.setdefault(classify_atom(atom), []).append((k, atom))
    return [Bucket(tag, vs, tuple(items)) for (tag, vs), items in members.items()]


# -- reduction to a finite subsystem -------------------------------------------------------


def base_semigroup(p: PowerStructure) -> Semigroup:
    return Semigroup(p.base.multiplication_table())


def reduce_to_finite(
    p: PowerStructure,
    sys: EquationSystem,
    *,
    max_cells: int | None = DEFAULT_MAX_CELLS,
) -> EquationSystem:
    """Equivalent subsystem: first atom of every constant-bearing bucket plus distinct S_0 atoms.

    Needs both cancellation-transfer quasi-identities in the base semigroup.
    An inconsistent input is answered by its inconsistency witness instead.
    """
    from .classify import check_left_qi, check_right_qi

    s = base_semigroup(p)
    for check in (check_left_qi, check_right_qi):
        qi = check(s)
        if not qi.holds:
            raise QiViolatedError(f"{qi.side} quasi-identity fails; reduction is unsound", qi)
    report = check_consistency(p, sys, max_cells=max_cells)
    if not report.consistent:
        return sys.with_atoms(report.witness.atoms)
    keep: set[int] = set()
    for bucket in decompose(sys):
        if bucket.tag == S0:
            seen = set()
            for k, atom in bucket.atoms:
                if atom not in seen:
                    seen.add(atom)
                    keep.add(k)
        else:
            keep.add(bucket.atoms[0][0])
    return sys.with_atoms(sys.atoms[k] for k in sorted(keep))


def reduction_bound(sys: EquationSystem) -> int:
    """Number of non-S_0 buckets plus distinct S_0 atoms."""
    buckets = decompose(sys)
    s0 = {atom for b in buckets if b.tag == S0 for _, atom in b.atoms}
    return sum(1 for b in buckets if b.tag != S0) + len(s0)


# -- the non-Noetherian chain ---------------------------------------------------------------


@dataclass(frozen=True)
class ViolatingPoint:
    n: int  # satisfies the first n equations
    point: tuple[int, ...]
    failing_coordinate: int  # 0-based coordinate where equation n+1 fails


@dataclass(frozen=True)
class ChainReport:
    side: str  # "left" | "right"
    witness: tuple[int, int, int, int, int]  # (a, b, alpha, beta, c)
    exponent: int
    systems: tuple[EquationSystem, ...]  # prefixes S_1 .. S_N
    counts: tuple[int, ...]
    violating_points: tuple[ViolatingPoint, ...]

    def strictly_decreasing(self) -> bool:
        return all(c > 0 for c in self.counts) and all(
            x > y for x, y in zip(self.counts, self.counts[1:])
        )


def chain_equation(side: str, witness, n: int, exponent: int, corrected: bool = True) -> Relation:
    """The n-th equation (1-based) of the chain over a power of the given exponent.

    The corrected form uses the b-block first: coefficient ``[b]*n + [a]*rest``
    with right-hand side ``[b alpha]*n + [c]*rest`` (mirrored for the right
    quasi-identity).  ``corrected=False`` gives the a-block-first variant.
    """
    a, b, alpha, beta, c, b_alpha = witness
    rest = exponent - n
    if corrected:
        coef = (b,) * n + (a,) * rest
        rhs = (b_alpha,) * n + (c,) * rest
    else:
        coef = (a,) * n + (b,) * rest
        rhs = (c,) * n + (b_alpha,) * rest
    if side == "left":
        return Relation("M", (Const(coef), Var("x"), Const(rhs)))
    return Relation("M", (Var("x"), Const(coef), Const(rhs)))


def counterexample_chain(
    s: Semigroup,
    n_max: int,
    *,
    side: str | None = None,
    max_cells: int | None = DEFAULT_MAX_CELLS,
) -> ChainReport:
    """Strictly shrinking prefix chain over the power with exponent ``n_max + 1``.

    Prefix ``S_n`` keeps the first ``n`` equations; the point
    ``[alpha]*n + [beta]*rest`` satisfies ``S_n`` and breaks equation
    ``n + 1`` at coordinate ``n``.  The left quasi-identity is tried first
    unless ``side`` picks one.
    """
    from .classify import check_left_qi, check_right_qi
    from .relational import predicatize_semigroup

    if n_max < 0:
        raise ValueError("n_max must be nonnegative")
    N = n_max + 1
    sides = ("left", "right") if side is None else (side,)
    checks = {"left": check_left_qi, "right": check_right_qi}
    for side in sides:
        qi = checks[side](s)
        if not qi.holds:
            break
    else:
        raise QiHoldsError("quasi-identity holds; no counterexample chain exists")
    a, b, alpha, beta = qi.witness
    t = s.table
    if side == "left":
        c, b_alpha = t[a][alpha], t[b][alpha]
    else:
        c, b_alpha = t[alpha][a], t[alpha][b]
    full = (a, b, alpha, beta, c, b_alpha)

    p = PowerStructure(predicatize_semigroup(s), N)
    equations = [chain_equation(side, full, n, N) for n in range(1, N + 1)]
    systems = tuple(EquationSystem(tuple(equations[:n]), ("x",)) for n in range(1, N + 1))
    counts = tuple(solve_power(p, sub, max_cells=max_cells).count for sub in systems)

    points = []
    for n in range(1, N):
        point = (alpha,) * n + (beta,) * (N - n)
        env = {"x": point}
        if not all(holds_at(p, eq, env) for eq in equations[:n]):
            raise AssertionError(f"chain point for n={n} misses an early equation")
        bad = failing_coordinates(p, equations[n], env)
        if bad != [n]:
            raise AssertionError(f"chain point for n={n} fails at {bad}, expected [{n}]")
        points.append(ViolatingPoint(n, point, n))
    return ChainReport(side, full[:5], N, systems, counts, tuple(points))


def exponent_budget(exponent: int, max_exponent: int | None) -> None:
    if max_exponent is not None and exponent > max_exponent:
        raise BudgetExceededError("exponent", max_exponent, exponent)


__all__ = [
    "Bucket",
    "ChainReport",
    "ConsistencyReport",
    "PowerStructure",
    "ProductSolutionSet",
    "ViolatingPoint",
    "chain_equation",
    "check_consistency",
    "classify_atom",
    "counterexample_chain",
    "decompose",
    "power",
    "power_systems_equivalent",
    "project_equation",
    "project_product",
    "project_system",
    "reduce_to_finite",
    "reduction_bound",
    "solve_power",
    "solve_power_exhaustive",
]
