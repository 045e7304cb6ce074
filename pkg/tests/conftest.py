from itertools import permutations

import pytest

from semipred.semigroup import (
    ReesSpec,
    Semigroup,
    as_group,
    cyclic_group,
    rectangular_band,
    rees_construct,
)

MIN2_TABLE = ((0, 0), (0, 1))
LZ2_TABLE = ((0, 0), (1, 1))
Z2_TABLE = ((0, 1), (1, 0))
# Z2 = {0, 1} plus t = 2 with t*t = 0 and t acting as identity on {0, 1}
HG3_TABLE = ((0, 1, 0), (1, 0, 1), (0, 1, 0))


def s3_by_composition() -> Semigroup:
    """S3 built directly from permutation composition, independent of the library helper."""
    perms = list(permutations(range(3)))
    compose = lambda p, q: tuple(p[q[x]] for x in range(3))  # noqa: E731
    return Semigroup(tuple(tuple(perms.index(compose(p, q)) for q in perms) for p in perms))


@pytest.fixture
def min2():
    return Semigroup(MIN2_TABLE)


@pytest.fixture
def lz2():
    return Semigroup(LZ2_TABLE)


@pytest.fixture
def z2():
    return Semigroup(Z2_TABLE)


@pytest.fixture
def s3():
    return s3_by_composition()


@pytest.fixture
def hg3():
    return Semigroup(HG3_TABLE)


@pytest.fixture
def rb22():
    return rectangular_band(2, 2)


@pytest.fixture
def twisted_rees():
    """Rees semigroup over Z2 with |Lambda| = |I| = 2 and a non-identity sandwich entry."""
    spec = ReesSpec(as_group(cyclic_group(2)), 2, 2, ((0, 0), (0, 1)))
    return rees_construct(spec)


def small_groups():
    from semipred.semigroup import direct_product, symmetric_group

    groups = {f"Z{n}": cyclic_group(n) for n in range(1, 7)}
    groups["Z2xZ2"] = direct_product(cyclic_group(2), cyclic_group(2))
    groups["S3"] = symmetric_group(3)
    return groups


# acceptance lines, filled by tests/test_acceptance.py and echoed after the run
ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
