"""
Pytest configuration and fixtures for ncclab tests.
"""
from pathlib import Path
from typing import List, Set

import pytest

from group_catalog import DEFAULT_CATALOG_PATH, load_catalog
from group_constructors import (
    alternating, cyclic, dicyclic, dihedral, smallgroup_20_3, smallgroup_24_3, symmetric,
)
from perm_group import Group


@pytest.fixture(scope="session")
def s4() -> Group:
    return symmetric(4)


@pytest.fixture(scope="session")
def a4() -> Group:
    return alternating(4)


@pytest.fixture(scope="session")
def d8() -> Group:
    """Dihedral group of order 8."""
    return dihedral(4)


@pytest.fixture(scope="session")
def q8() -> Group:
    return dicyclic(2)


@pytest.fixture(scope="session")
def z6() -> Group:
    return cyclic(6)


@pytest.fixture(scope="session")
def f20() -> Group:
    """SmallGroup(20,3)."""
    return smallgroup_20_3()


@pytest.fixture(scope="session")
def sl23() -> Group:
    """SmallGroup(24,3)."""
    return smallgroup_24_3()


@pytest.fixture(scope="session")
def catalog_entries():
    return load_catalog()


@pytest.fixture
def catalog_text() -> str:
    return Path(DEFAULT_CATALOG_PATH).read_text(encoding="utf-8")


def brute_force_subgroups(group: Group) -> Set[int]:
    """Every subgroup, as member bit-sets: cyclic subgroups closed under pairwise joins."""
    found = {group.subgroup_closure(1 << i).members for i in range(group.order)}
    pending = list(found)
    while pending:
        current = pending.pop()
        for other in list(found):
            joined = group.subgroup_closure(current | other).members
            if joined not in found:
                found.add(joined)
                pending.append(joined)
    return found


def brute_force_is_normal(group: Group, members: int) -> bool:
    """Conjugate every member by every element."""
    indices = [i for i in range(group.order) if (members >> i) & 1]
    for g in range(group.order):
        for x in indices:
            if not (members >> group.conjugate(x, g)) & 1:
                return False
    return True


def brute_force_normal_subgroups(group: Group) -> List[int]:
    return sorted(m for m in brute_force_subgroups(group) if brute_force_is_normal(group, m))
