from itertools import product

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from semipred.errors import BudgetExceededError, FormatError, UnknownVariableError
from semipred.relational import (
    Const,
    Equality,
    EquationSystem,
    M,
    Relation,
    SolutionSet,
    Token,
    Var,
    WordEquationSystem,
    compile_word_equations,
    evaluate_word,
    parse_system,
    parse_words,
    predicatize_group,
    predicatize_semigroup,
    project_solutions,
    solve,
    solve_exhaustive,
    systems_equivalent,
)
from semipred.semigroup import Semigroup, as_group, cyclic_group, min_semilattice

from conftest import small_groups


class TestPredicatize:
    def test_trivial(self):
        a = predicatize_semigroup(Semigroup(((0,),)))
        assert a.relations["M"] == (3, {(0, 0, 0)})

    def test_min2(self, min2):
        a = predicatize_semigroup(min2)
        assert a.relations["M"][1] == {(0, 0, 0), (0, 1, 0), (1, 0, 0), (1, 1, 1)}

    def test_group_z2(self, z2):
        a = predicatize_group(as_group(z2))
        assert a.relations["I"][1] == {(0, 0), (1, 1)}
        assert a.relations["E"][1] == {(0,)}

    def test_group_s3(self, s3):
        a = predicatize_group(as_group(s3))
        assert len(a.relations["I"][1]) == 6
        assert len(a.relations["E"][1]) == 1

    def test_trivial_group(self):
        a = predicatize_group(as_group(Semigroup(((0,),))))
        assert a.relations == {"M": (3, {(0, 0, 0)}), "I": (2, {(0, 0)}), "E": (1, {(0,)})}

    @pytest.mark.parametrize("name", list(small_groups()))
    def test_sizes(self, name):
        g = small_groups()[name]
        a = predicatize_group(as_group(g))
        n = g.size
        assert len(a.relations["M"][1]) == n * n
        assert len(a.relations["I"][1]) == n
        assert len(a.relations["E"][1]) == 1

    def test_table_recovered(self, s3):
        assert predicatize_semigroup(s3).multiplication_table() == s3.table


class TestCompile:
    def test_product_is_single_atom(self):
        w = parse_words("x * y = z")
        compiled = compile_word_equations(w, "semigroup")
        assert compiled.system.atoms == (M("x", "y", "z"),)
        assert compiled.projection == ("x", "y", "z")

    def test_commutator_matches_six_atom_display(self):
        compiled = compile_word_equations(parse_words("x^-1 * y^-1 * x * y = 1"), "group")
        x, y = Var("x"), Var("y")
        x1, y1, z1, z2, z3 = (Var(f"_t{k}") for k in range(1, 6))
        assert compiled.system.atoms == (
            Relation("I", (x, x1)),
            Relation("I", (y, y1)),
            Relation("M", (x1, y1, z1)),
            Relation("M", (z1, x, z2)),
            Relation("M", (z2, y, z3)),
            Relation("E", (z3,)),
        )
        assert compiled.projection == ("x", "y")

    def test_commutator_over_s3_gives_commuting_pairs(self, s3):
        g = as_group(s3)
        commuting = {(a, b) for a in range(6) for b in range(6) if s3.table[a][b] == s3.table[b][a]}
        assert len(commuting) == 18
        compiled = compile_word_equations(parse_words("x^-1 * y^-1 * x * y = 1"), "group")
        sol = project_solutions(solve(predicatize_group(g), compiled.system), compiled.projection)
        assert set(sol.points) == commuting

    def test_group_tokens_need_group_language(self):
        with pytest.raises(ValueError):
            compile_word_equations(parse_words("x^-1 = y"), "semigroup")

    def test_empty_word(self):
        with pytest.raises(ValueError):
            compile_word_equations(WordEquationSystem((((), (Token("var", "x"),)),)))

    def test_unknown_token(self):
        with pytest.raises(FormatError):
            parse_words("x ** y = z")
        with pytest.raises(FormatError):
            parse_words("x + y = z")

    def test_equality_for_single_tokens(self):
        compiled = compile_word_equations(parse_words("x = #1"), "semigroup")
        assert compiled.system.atoms == (Equality(Var("x"), Const(1)),)

    def test_fresh_variables_deterministic(self):
        w = parse_words("x * y * z = y * x\nx^-1 * x^-1 = 1")
        c1 = compile_word_equations(w)
        c2 = compile_word_equations(w)
        assert c1.system == c2.system


# -- word oracle over all groups of order <= 6 ------------------------------------------

WORD_SYSTEMS = [
    "x^-1 * y^-1 * x * y = 1",
    "x * x = 1",
    "x * y = y * x",
    "x * y * x = y",
    "x * #1 = #1 * x",
    "x * x * x = 1\ny * y = 1",
    "x^-1 * y = y * x",
    "x = y^-1",
    "1 = x * y * x^-1",
    "x * 1 * y = y",
]


@pytest.mark.parametrize("text", WORD_SYSTEMS)
@pytest.mark.parametrize("name", list(small_groups()))
def test_compiled_words_match_functional_evaluation(name, text):
    g = as_group(small_groups()[name])
    if "#1" in text and g.size < 2:
        pytest.skip("constant out of range")
    w = parse_words(text)
    compiled = compile_word_equations(w, "group")
    got = project_solutions(solve(predicatize_group(g), compiled.system), compiled.projection)
    variables = w.variables()
    expected = set()
    for point in product(range(g.size), repeat=len(variables)):
        env = dict(zip(variables, point))
        if all(evaluate_word(g, l, env) == evaluate_word(g, r, env) for l, r in w.equations):
            expected.add(point)
    assert set(got.points) == expected


class TestSolve:
    def test_idempotents(self, min2):
        sol = solve(predicatize_semigroup(min2), parse_system("M(x, x, x)"))
        assert sol.points == {(0,), (1,)}

    def test_identity_forced(self, z2):
        sol = solve(predicatize_group(as_group(z2)), parse_system("E(x)\nM(x, x, y)"))
        assert sol.assignments() == [{"x": 0, "y": 0}]

    def test_constants(self, min2):
        # x*1 = 0: enumerate x in {0, 1}: 0*1 = 0 yes, 1*1 = 1 no
        expected = {(x,) for x in range(2) if min2.table[x][1] == 0}
        sol = solve(predicatize_semigroup(min2), parse_system("M(x, #1, #0)"))
        assert sol.points == expected == {(0,)}

    def test_inconsistent_is_empty(self, min2):
        sol = solve(predicatize_semigroup(min2), parse_system("M(x, #0, #1)"))
        assert sol.is_empty() and sol.is_inconsistent()

    def test_false_ground_atom(self, min2):
        sol = solve(predicatize_semigroup(min2), parse_system("M(#1, #1, #0)\nM(x, x, x)"))
        assert sol.is_empty()

    def test_budget(self, min2):
        sys_ = parse_system("M(a, b, c)\nM(c, d, e)")
        with pytest.raises(BudgetExceededError) as exc:
            solve(predicatize_semigroup(min2), sys_, max_cells=9)
        assert exc.value.limit == 9 and exc.value.actual == 10

    def test_bad_constant(self, min2):
        with pytest.raises(ValueError):
            solve(predicatize_semigroup(min2), parse_system("M(x, #5, x)"))

    def test_arity_mismatch(self, min2):
        with pytest.raises(ValueError):
            solve(predicatize_semigroup(min2), parse_system("M(x, x)"))

    def test_propagation_does_not_change_answer(self, s3):
        a = predicatize_semigroup(s3)
        sys_ = parse_system("M(x, y, z)\nM(z, x, #0)\nx = w")
        assert solve(a, sys_).points == solve(a, sys_, propagate=False).points


class TestProject:
    def test_identity_projection(self):
        sol = SolutionSet(("x", "y"), frozenset({(0, 0), (0, 1)}))
        assert project_solutions(sol, ("x", "y")) == sol

    def test_collapse(self):
        sol = SolutionSet(("x", "y"), frozenset({(0, 0), (0, 1)}))
        assert project_solutions(sol, ("x",)).points == {(0,)}

    def test_unknown(self):
        sol = SolutionSet(("x",), frozenset({(0,)}))
        with pytest.raises(UnknownVariableError):
            project_solutions(sol, ("q",))


class TestEquivalence:
    def test_self(self, min2):
        a = predicatize_semigroup(min2)
        s = parse_system("M(x, y, z)")
        assert systems_equivalent(a, s, s)

    def test_duplication(self, min2):
        a = predicatize_semigroup(min2)
        assert systems_equivalent(a, parse_system("M(x,x,x)"), parse_system("M(x,x,x)\nM(x,x,x)"))

    def test_right_identity_in_min2(self, min2):
        a = predicatize_semigroup(min2)
        # oracle: all four assignments of (x, y)
        lhs = {(x, y) for x in range(2) for y in range(2) if min2.table[x][1] == y}
        rhs = {(x, y) for x in range(2) for y in range(2) if x == y}
        assert lhs == rhs
        assert systems_equivalent(a, parse_system("M(x, #1, y)"), parse_system("x = y"))

    def test_union_of_variables(self, min2):
        a = predicatize_semigroup(min2)
        assert not systems_equivalent(a, parse_system("M(x, x, x)"), parse_system("M(y, y, y)\ny = #0"))


class TestDsl:
    def test_parse_atoms(self):
        s = parse_system("M(x, #1, [0,1])  # trailing comment\n# full comment\n\nx = y\n")
        assert s.atoms == (
            Relation("M", (Var("x"), Const(1), Const((0, 1)))),
            Equality(Var("x"), Var("y")),
        )
        assert s.variables == ("x", "y")

    def test_round_trip(self):
        text = "M(x, #1, [0,1,1])\nx = #0\nI(y, x)\nE(y)\n"
        assert str(parse_system(text)) == text

    def test_errors_carry_line(self):
        with pytest.raises(FormatError) as exc:
            parse_system("M(x, y, z)\nM(x, y z)")
        assert exc.value.line == 2
        with pytest.raises(FormatError):
            parse_system("x == y")


# -- properties ------------------------------------------------------------------------


SMALL = [Semigroup(t) for t in [((0,),), ((0, 0), (0, 1)), ((0, 1), (1, 0)), ((0, 0), (1, 1)),
                                ((0, 1, 0), (1, 0, 1), (0, 1, 0))]] + [
    cyclic_group(3), min_semilattice(3), cyclic_group(4), cyclic_group(6)]
VARS = ["x", "y", "z", "w"]


@st.composite
def systems_over(draw, n):
    terms = st.one_of(st.sampled_from(VARS).map(Var), st.integers(0, n - 1).map(Const))
    atom = st.one_of(
        st.tuples(terms, terms, terms).map(lambda a: Relation("M", a)),
        st.tuples(terms, terms).map(lambda a: Equality(*a)),
    )
    atoms = draw(st.lists(atom, min_size=0, max_size=6))
    return EquationSystem(tuple(atoms))


@st.composite
def structure_and_system(draw):
    s = draw(st.sampled_from(SMALL))
    return predicatize_semigroup(s), draw(systems_over(s.size))


@settings(max_examples=200, deadline=None)
@given(structure_and_system())
def test_solver_sound_and_complete(data):
    a, sys_ = data
    expected = solve_exhaustive(a, sys_)
    assert solve(a, sys_).points == expected.points
    assert solve(a, sys_, propagate=False).points == expected.points


@settings(max_examples=100, deadline=None)
@given(structure_and_system(), st.data())
def test_adding_an_atom_never_enlarges(data, more):
    a, sys_ = data
    extra = more.draw(systems_over(a.universe_size))
    if not extra.atoms:
        return
    variables = tuple(dict.fromkeys(sys_.variables + extra.variables))
    before = solve(a, EquationSystem(sys_.atoms, variables))
    after = solve(a, EquationSystem(sys_.atoms + extra.atoms[:1], variables))
    assert after.points <= before.points
