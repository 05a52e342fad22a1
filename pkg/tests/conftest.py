"""Shared fixtures: the golden relations and the two scalar fields.

Naming: sym6 is symmetric (three mutually incomparable classes of sizes 3, 2,
1); vee3 has two minimal elements below one maximal; crown6 condenses to four
classes {1}, {2,3}, {4}, {5,6} with the source classes {1} and {5,6} each
below both sink classes {2,3} and {4}, so the class comparability graph is a
4-cycle.  The *_block variants are the same relations relabelled into block
upper triangular form.
"""

import pytest

from sma import RATIONALS, Relation, gf

SYM6_PAIRS = [
    (1, 1), (1, 5), (1, 6), (2, 2), (2, 3), (3, 2), (3, 3), (4, 4),
    (5, 1), (5, 5), (5, 6), (6, 1), (6, 5), (6, 6),
]

SYM6_BLOCK_PAIRS = [
    (1, 1), (1, 2), (1, 3), (2, 1), (2, 2), (2, 3), (3, 1), (3, 2), (3, 3),
    (4, 4), (4, 5), (5, 4), (5, 5), (6, 6),
]

VEE3_PAIRS = [(1, 1), (1, 2), (2, 2), (3, 2), (3, 3)]

VEE3_BLOCK_PAIRS = [(1, 1), (1, 3), (2, 2), (2, 3), (3, 3)]

CROWN6_PAIRS = [
    (1, 1), (1, 2), (1, 3), (1, 4), (2, 2), (2, 3), (3, 2), (3, 3), (4, 4),
    (5, 2), (5, 3), (5, 4), (5, 5), (5, 6), (6, 2), (6, 3), (6, 4), (6, 5), (6, 6),
]

CROWN6_BLOCK_PAIRS = [
    (1, 1), (1, 4), (1, 5), (1, 6), (2, 2), (2, 3), (2, 4), (2, 5), (2, 6),
    (3, 2), (3, 3), (3, 4), (3, 5), (3, 6), (4, 4), (5, 5), (5, 6), (6, 5), (6, 6),
]


@pytest.fixture
def sym6():
    return Relation.from_pairs(6, SYM6_PAIRS)


@pytest.fixture
def sym6_block():
    return Relation.from_pairs(6, SYM6_BLOCK_PAIRS)


@pytest.fixture
def vee3():
    return Relation.from_pairs(3, VEE3_PAIRS)


@pytest.fixture
def vee3_block():
    return Relation.from_pairs(3, VEE3_BLOCK_PAIRS)


@pytest.fixture
def crown6():
    return Relation.from_pairs(6, CROWN6_PAIRS)


@pytest.fixture
def crown6_block():
    return Relation.from_pairs(6, CROWN6_BLOCK_PAIRS)


@pytest.fixture
def QQ():
    return RATIONALS


@pytest.fixture
def GF5():
    return gf(5)
