"""Relational structures, equation systems and an exact finite solver.

A semigroup becomes a relational structure with one ternary relation ``M``
(the graph of multiplication); a group additionally gets ``I`` (inverse
pairs) and ``E`` (the identity).  Equations are atoms over these relations
plus equality, with variables and element constants as arguments.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from itertools import product
from typing import Iterable, Iterator, Mapping, Sequence, Union

from .errors import BudgetExceededError, FormatError, UnknownVariableError
from .semigroup import GroupView, Semigroup

# -- terms and atoms -----------------------------------------------------------


@dataclass(frozen=True, order=True)
class Var:
    name: str

    def __str__(self) -> str:
        return self.name


@dataclass(frozen=True, order=True)
class Const:
    """An element reference: a base id, or a tuple of ids for a power element."""

    value: Union[int, tuple[int, ...]]

    def __str__(self) -> str:
        if isinstance(self.value, tuple):
            return "[" + ",".join(map(str, self.value)) + "]"
        return f"#{self.value}"


Term = Union[Var, Const]


@dataclass(frozen=True)
class Relation:
    name: str
    args: tuple[Term, ...]

    def __str__(self) -> str:
        return f"{self.name}({', '.join(map(str, self.args))})"


@dataclass(frozen=True)
class Equality:
    lhs: Term
    rhs: Term

    @property
    def args(self) -> tuple[Term, Term]:
        return (self.lhs, self.rhs)

    def __str__(self) -> str:
        return f"{self.lhs} = {self.rhs}"


Atom = Union[Relation, Equality]


def atom_variables(atom: Atom) -> list[str]:
    return [t.name for t in atom.args if isinstance(t, Var)]


def _ordered_vars(atoms: Iterable[Atom]) -> tuple[str, ...]:
    seen: dict[str, None] = {}
    for atom in atoms:
        for v in atom_variables(atom):
            seen.setdefault(v, None)
    return tuple(seen)


@dataclass(frozen=True)
class EquationSystem:
    atoms: tuple[Atom, ...]
    variables: tuple[str, ...] = ()

    def __post_init__(self):
        atoms = tuple(self.atoms)
        declared = tuple(dict.fromkeys(self.variables))
        occurring = _ordered_vars(atoms)
        missing = [v for v in occurring if v not in declared]
        object.__setattr__(self, "atoms", atoms)
        object.__setattr__(self, "variables", declared + tuple(missing))

    def __len__(self) -> int:
        return len(self.atoms)

    def __iter__(self) -> Iterator[Atom]:
        return iter(self.atoms)

    def __str__(self) -> str:
        return format_system(self)

    def with_atoms(self, atoms: Iterable[Atom]) -> "EquationSystem":
        """Same variable set, different atoms."""
        return EquationSystem(tuple(atoms), self.variables)

    def constants(self) -> list[Const]:
        return [t for atom in self.atoms for t in atom.args if isinstance(t, Const)]


def system(*atoms: Atom, variables: Sequence[str] = ()) -> EquationSystem:
    return EquationSystem(tuple(atoms), tuple(variables))


def M(x, y, z) -> Relation:
    return Relation("M", (term(x), term(y), term(z)))


def term(x) -> Term:
    """Coerce: str -> Var, int -> Const, list/tuple of ints -> tuple Const."""
    if isinstance(x, (Var, Const)):
        return x
    if isinstance(x, str):
        return Var(x)
    if isinstance(x, int):
        return Const(x)
    return Const(tuple(x))


# -- relational structures -----------------------------------------------------


@dataclass(frozen=True)
class RelationalStructure:
    universe_size: int
    relations: Mapping[str, tuple[int, frozenset[tuple[int, ...]]]]

    def __post_init__(self):
        n = self.universe_size
        if n < 1:
            raise ValueError("universe must be nonempty")
        for name, (arity, tuples) in self.relations.items():
            for tup in tuples:
                if len(tup) != arity or any(not 0 <= v < n for v in tup):
                    raise ValueError(f"relation {name}: bad tuple {tup}")
        object.__setattr__(self, "relations", dict(self.relations))

    def arity(self, name: str) -> int:
        try:
            return self.relations[name][0]
        except KeyError:
            raise KeyError(f"structure has no relation {name!r}") from None

    def holds(self, name: str, args: Sequence[int]) -> bool:
        return tuple(args) in self.relations[name][1]

    def multiplication_table(self) -> tuple[tuple[int, ...], ...]:
        """Recover the table from ``M`` when it is the graph of a binary operation."""
        n = self.universe_size
        rows = [[-1] * n for _ in range(n)]
        for a, b, c in self.relations["M"][1]:
            if rows[a][b] != -1:
                raise ValueError("M is not a function graph")
            rows[a][b] = c
        if any(v == -1 for row in rows for v in row):
            raise ValueError("M is not total")
        return tuple(tuple(r) for r in rows)


def predicatize_semigroup(s: Semigroup) -> RelationalStructure:
    n = s.size
    m = frozenset((a, b, s.table[a][b]) for a in range(n) for b in range(n))
    return RelationalStructure(n, {"M": (3, m)})


def predicatize_group(g: GroupView) -> RelationalStructure:
    n = g.size
    m = frozenset((a, b, g.table[a][b]) for a in range(n) for b in range(n))
    inv = frozenset((a, g.inverse[a]) for a in range(n))
    return RelationalStructure(n, {"M": (3, m), "I": (2, inv), "E": (1, frozenset({(g.identity,)}))})


# -- solution sets ---------------------------------------------------------------


@dataclass(frozen=True)
class SolutionSet:
    """Explicit solution set: ``points`` holds value tuples aligned with ``variables``."""

    variables: tuple[str, ...]
    points: frozenset[tuple]

    def __len__(self) -> int:
        return len(self.points)

    def __iter__(self):
        return iter(sorted(self.points))

    def __contains__(self, point) -> bool:
        if isinstance(point, Mapping):
            point = tuple(point[v] for v in self.variables)
        return tuple(point) in self.points

    @property
    def count(self) -> int:
        return len(self.points)

    def is_empty(self) -> bool:
        return not self.points

    is_inconsistent = is_empty

    def assignments(self) -> list[dict[str, object]]:
        return [dict(zip(self.variables, p)) for p in sorted(self.points)]


def project_solutions(sol: SolutionSet, variables: Sequence[str]) -> SolutionSet:
    variables = tuple(variables)
    pos = []
    for v in variables:
        if v not in sol.variables:
            raise UnknownVariableError(v)
        pos.append(sol.variables.index(v))
    return SolutionSet(variables, frozenset(tuple(p[k] for k in pos) for p in sol.points))


# -- solver ------------------------------------------------------------------------

DEFAULT_MAX_CELLS = 256


def check_budget(n_vars: int, universe: int, max_cells: int | None) -> None:
    if max_cells is not None and n_vars * universe > max_cells:
        raise BudgetExceededError("variables x universe", max_cells, n_vars * universe)


def _check_constants(a: RelationalStructure, sys: EquationSystem) -> None:
    for c in sys.constants():
        if not isinstance(c.value, int) or not 0 <= c.value < a.universe_size:
            raise ValueError(f"constant {c} is not an element of the structure")
    for atom in sys.atoms:
        if isinstance(atom, Relation) and a.arity(atom.name) != len(atom.args):
            raise ValueError(f"arity mismatch in {atom}")


def _atom_holds(a: RelationalStructure, atom: Atom, values: Sequence[int]) -> bool:
    if isinstance(atom, Equality):
        return values[0] == values[1]
    return a.holds(atom.name, values)


def solve(
    a: RelationalStructure,
    sys: EquationSystem,
    *,
    propagate: bool = True,
    max_cells: int | None = DEFAULT_MAX_CELLS,
) -> SolutionSet:
    """All assignments of the system's variables satisfying every atom.

    Backtracking in order of first occurrence.  With ``propagate`` set, any
    atom left with one unassigned variable narrows that variable's domain
    before the search branches on it.
    """
    variables = sys.variables
    check_budget(len(variables), a.universe_size, max_cells)
    _check_constants(a, sys)
    pos = {v: k for k, v in enumerate(variables)}
    # each atom as (atom, arg slots) where a slot is ("v", index) or ("c", value)
    compiled = [
        (atom, [("v", pos[t.name]) if isinstance(t, Var) else ("c", t.value) for t in atom.args])
        for atom in sys.atoms
    ]
    for atom, slots in compiled:
        if all(kind == "c" for kind, _ in slots):
            if not _atom_holds(a, atom, [v for _, v in slots]):
                return SolutionSet(variables, frozenset())
    watching: list[list[int]] = [[] for _ in variables]
    for k, (_, slots) in enumerate(compiled):
        for kind, v in slots:
            if kind == "v" and k not in watching[v]:
                watching[v].append(k)

    n = len(variables)
    universe = range(a.universe_size)
    assignment: list[int | None] = [None] * n
    domains: list[list[int]] = [list(universe) for _ in variables]
    results: set[tuple[int, ...]] = set()

    def values_of(slots):
        return [assignment[v] if kind == "v" else v for kind, v in slots]

    def narrow(var: int) -> list[int] | None:
        dom = domains[var]
        for k in watching[var]:
            atom, slots = compiled[k]
            free = {v for kind, v in slots if kind == "v" and assignment[v] is None}
            if free != {var}:
                continue
            kept = []
            for x in dom:
                assignment[var] = x
                if _atom_holds(a, atom, values_of(slots)):
                    kept.append(x)
            assignment[var] = None
            dom = kept
            if not dom:
                return None
        return dom

    def consistent(var: int) -> bool:
        for k in watching[var]:
            atom, slots = compiled[k]
            if all(kind == "c" or assignment[v] is not None for kind, v in slots):
                if not _atom_holds(a, atom, values_of(slots)):
                    return False
        return True

    def search(depth: int) -> None:
        if depth == n:
            results.add(tuple(assignment))
            return
        dom = narrow(depth) if propagate else domains[depth]
        if not dom:
            return
        for x in dom:
            assignment[depth] = x
            if consistent(depth):
                search(depth + 1)
        assignment[depth] = None

    search(0)
    return SolutionSet(variables, frozenset(results))


def solve_exhaustive(a: RelationalStructure, sys: EquationSystem) -> SolutionSet:
    """Plain generate-and-test over every assignment; reference for ``solve``."""
    _check_constants(a, sys)
    variables = sys.variables
    points = set()
    for point in product(range(a.universe_size), repeat=len(variables)):
        env = dict(zip(variables, point))
        if all(
            _atom_holds(a, atom, [env[t.name] if isinstance(t, Var) else t.value for t in atom.args])
            for atom in sys.atoms
        ):
            points.add(point)
    return SolutionSet(variables, frozenset(points))


def satisfies(a: RelationalStructure, sys: EquationSystem, env: Mapping[str, int]) -> bool:
    return all(
        _atom_holds(a, atom, [env[t.name] if isinstance(t, Var) else t.value for t in atom.args])
        for atom in sys.atoms
    )


def _common_variables(s1: EquationSystem, s2: EquationSystem) -> tuple[str, ...]:
    return tuple(dict.fromkeys(s1.variables + s2.variables))


def systems_equivalent(
    a: RelationalStructure,
    s1: EquationSystem,
    s2: EquationSystem,
    *,
    max_cells: int | None = DEFAULT_MAX_CELLS,
) -> bool:
    """Equal solution sets, with both systems read over the union of their variables."""
    variables = _common_variables(s1, s2)
    v1 = solve(a, EquationSystem(s1.atoms, variables), max_cells=max_cells)
    v2 = solve(a, EquationSystem(s2.atoms, variables), max_cells=max_cells)
    return v1.points == v2.points


# -- word equations ------------------------------------------------------------------


@dataclass(frozen=True)
class Token:
    kind: str  # "var" | "inv" | "const" | "one"
    value: Union[str, int, None] = None

    def __str__(self) -> str:
        if self.kind == "var":
            return str(self.value)
        if self.kind == "inv":
            return f"{self.value}^-1"
        if self.kind == "const":
            return f"#{self.value}"
        return "1"


Word = tuple[Token, ...]


@dataclass(frozen=True)
class WordEquationSystem:
    equations: tuple[tuple[Word, Word], ...]

    def variables(self) -> tuple[str, ...]:
        seen: dict[str, None] = {}
        for lhs, rhs in self.equations:
            for tok in lhs + rhs:
                if tok.kind in ("var", "inv"):
                    seen.setdefault(tok.value, None)
        return tuple(seen)

    def uses_group_tokens(self) -> bool:
        return any(tok.kind in ("inv", "one") for l, r in self.equations for tok in l + r)


@dataclass
class CompiledWords:
    system: EquationSystem
    projection: tuple[str, ...]

    def __iter__(self):
        return iter((self.system, self.projection))


def compile_word_equations(w: WordEquationSystem, lang: str = "group") -> CompiledWords:
    """Relational system whose solutions project onto those of the word system.

    Products are chained left to right with a fresh variable ``_tK`` per
    partial product; ``x^-1`` becomes ``I(x, _tK)`` (one fresh variable per
    inverted symbol); an identity side becomes ``E(...)``.
    """
    if lang not in ("semigroup", "group"):
        raise ValueError(f"unknown language {lang!r}")
    if lang == "semigroup" and w.uses_group_tokens():
        raise ValueError("inverse and identity tokens need the group language")
    atoms: list[Atom] = []
    counter = 0
    inverses: dict[str, Var] = {}
    identity_var: list[Var] = []

    def fresh() -> Var:
        nonlocal counter
        counter += 1
        return Var(f"_t{counter}")

    def resolve(tok: Token) -> Term:
        if tok.kind == "var":
            return Var(tok.value)
        if tok.kind == "const":
            return Const(tok.value)
        if tok.kind == "inv":
            if tok.value not in inverses:
                inverses[tok.value] = fresh()
                atoms.append(Relation("I", (Var(tok.value), inverses[tok.value])))
            return inverses[tok.value]
        if tok.kind == "one":
            if not identity_var:
                identity_var.append(fresh())
                atoms.append(Relation("E", (identity_var[0],)))
            return identity_var[0]
        raise ValueError(f"unknown token {tok!r}")

    def chain(word: Word, out: Term | None = None) -> Term:
        acc = resolve(word[0])
        for k, tok in enumerate(word[1:], start=2):
            nxt = resolve(tok)
            dest = out if (out is not None and k == len(word)) else fresh()
            atoms.append(Relation("M", (acc, nxt, dest)))
            acc = dest
        return acc

    def is_one(word: Word) -> bool:
        return len(word) == 1 and word[0].kind == "one"

    for lhs, rhs in w.equations:
        if not lhs or not rhs:
            raise ValueError("empty word")
        if is_one(rhs):
            atoms.append(Relation("E", (chain(lhs),)))
        elif is_one(lhs):
            atoms.append(Relation("E", (chain(rhs),)))
        elif len(lhs) > 1:
            chain(lhs, out=chain(rhs))
        elif len(rhs) > 1:
            chain(rhs, out=chain(lhs))
        else:
            atoms.append(Equality(resolve(lhs[0]), resolve(rhs[0])))

    projection = w.variables()
    return CompiledWords(EquationSystem(tuple(atoms), projection), projection)


def evaluate_word(g: GroupView, word: Word, env: Mapping[str, int]) -> int:
    """Direct evaluation of a word in a group; used as a reference."""
    acc = g.identity
    for tok in word:
        if tok.kind == "var":
            x = env[tok.value]
        elif tok.kind == "inv":
            x = g.inverse[env[tok.value]]
        elif tok.kind == "const":
            x = tok.value
        else:
            x = g.identity
        acc = g.table[acc][x]
    return acc


# -- text formats ----------------------------------------------------------------------

_IDENT = r"[A-Za-z_][A-Za-z0-9_']*"
_TERM_RE = re.compile(rf"\s*(?:(?P<var>{_IDENT})|#(?P<id>\d+)|\[(?P<tup>[\d\s,]*)\])\s*$")
_REL_RE = re.compile(rf"\s*(?P<name>{_IDENT})\s*\((?P<args>.*)\)\s*$")


def _strip_comment(line: str) -> str:
    # '#' followed by a digit is an element constant, anything else a comment
    return re.split(r"#(?!\d)", line, maxsplit=1)[0]


def parse_term(text: str, line: int | None = None) -> Term:
    m = _TERM_RE.match(text)
    if not m:
        raise FormatError(f"bad term {text.strip()!r}", line)
    if m.group("var"):
        return Var(m.group("var"))
    if m.group("id"):
        return Const(int(m.group("id")))
    parts = [p.strip() for p in m.group("tup").split(",")]
    if not parts or any(not p.isdigit() for p in parts):
        raise FormatError(f"bad tuple constant {text.strip()!r}", line)
    return Const(tuple(int(p) for p in parts))


def _split_args(text: str) -> list[str]:
    args, depth, cur = [], 0, []
    for ch in text:
        if ch == "[":
            depth += 1
        elif ch == "]":
            depth -= 1
        if ch == "," and depth == 0:
            args.append("".join(cur))
            cur = []
        else:
            cur.append(ch)
    args.append("".join(cur))
    return args


def parse_atom(text: str, line: int | None = None) -> Atom:
    m = _REL_RE.match(text)
    if m:
        args = tuple(parse_term(a, line) for a in _split_args(m.group("args")))
        return Relation(m.group("name"), args)
    if text.count("=") == 1:
        lhs, rhs = text.split("=")
        return Equality(parse_term(lhs, line), parse_term(rhs, line))
    raise FormatError(f"cannot parse atom {text.strip()!r}", line)


def parse_system(text: str) -> EquationSystem:
    """One atom per line: ``M(x, y, z)``, ``x = y``; constants ``#3`` or ``[0,1,1]``."""
    atoms = []
    for k, raw in enumerate(text.splitlines(), start=1):
        body = _strip_comment(raw).strip()
        if body:
            atoms.append(parse_atom(body, k))
    return EquationSystem(tuple(atoms))


def format_system(sys: EquationSystem) -> str:
    return "".join(f"{atom}\n" for atom in sys.atoms)


_TOKEN_RE = re.compile(rf"(?P<var>{_IDENT})(?P<inv>\s*\^\s*-1)?$|#(?P<id>\d+)$|(?P<one>1)$")


def parse_word(text: str, line: int | None = None) -> Word:
    tokens = []
    for piece in text.split("*"):
        piece = piece.strip()
        if not piece:
            raise FormatError("empty factor in word", line)
        m = _TOKEN_RE.match(piece)
        if not m:
            raise FormatError(f"unknown token {piece!r}", line)
        if m.group("var"):
            tokens.append(Token("inv" if m.group("inv") else "var", m.group("var")))
        elif m.group("id"):
            tokens.append(Token("const", int(m.group("id"))))
        else:
            tokens.append(Token("one"))
    return tuple(tokens)


def parse_words(text: str) -> WordEquationSystem:
    """``x^-1 * y^-1 * x * y = 1``, one equation per line."""
    eqs = []
    for k, raw in enumerate(text.splitlines(), start=1):
        body = _strip_comment(raw).strip()
        if not body:
            continue
        if body.count("=") != 1:
            raise FormatError("expected exactly one '='", k)
        lhs, rhs = body.split("=")
        eqs.append((parse_word(lhs, k), parse_word(rhs, k)))
    return WordEquationSystem(tuple(eqs))


def format_word(word: Word) -> str:
    return " * ".join(map(str, word))
