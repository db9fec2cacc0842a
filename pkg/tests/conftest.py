import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from koszulity.poset import GradedPoset

# the running examples: the diamond is Koszul, p_bad is the smallest
# incidence ring here that is not even quadratic (Ker mu_3 is nonzero but
# no quadratic relations exist to generate it)
DIAMOND_COVERS = [('0', 'a'), ('0', 'b'), ('a', '1'), ('b', '1')]
P_BAD_COVERS = [('0', 'a'), ('0', 'b'), ('a', 'c'), ('b', 'd'),
                ('c', '1'), ('d', '1')]
TAIL_COVERS = DIAMOND_COVERS + [('1', '2')]


@pytest.fixture
def diamond():
    return GradedPoset(['0', 'a', 'b', '1'], DIAMOND_COVERS)


@pytest.fixture
def p_bad():
    return GradedPoset(['0', 'a', 'b', 'c', 'd', '1'], P_BAD_COVERS)


@pytest.fixture
def tail_diamond():
    'Diamond with an extra top cover; length 3, nonzero Ker mu^{1,1}.'
    return GradedPoset(['0', 'a', 'b', '1', '2'], TAIL_COVERS)


def chain_poset(n):
    els = [f'x{i}' for i in range(n + 1)]
    return GradedPoset(els, [(els[i], els[i + 1]) for i in range(n)])


def antichain_poset(n):
    return GradedPoset([f'u{i}' for i in range(n)], [])
