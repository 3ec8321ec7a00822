"""
Isomorphism testing for small groups.

Fingerprints separate most non-isomorphic pairs cheaply; the rest are settled
by a backtracking search for images of a greedy generating set.
"""
from collections import Counter
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

import numpy as np
from tqdm import tqdm

from perm_group import Group, derived_series, mask_from_indices


@dataclass(frozen=True)
class Fingerprint:
    """Isomorphism invariants; equal fingerprints are necessary for isomorphism."""
    order: int
    class_sizes: Tuple[int, ...]
    order_histogram: Tuple[Tuple[int, int], ...]
    center_order: int
    derived_order: int
    derived_series: Tuple[int, ...]
    normal_count: int
    normal_orders: Tuple[int, ...]


def fingerprint(group: Group) -> Fingerprint:
    histogram = Counter(int(o) for o in group.element_orders)
    normals = group.normal_subgroups
    return Fingerprint(
        order=group.order,
        class_sizes=tuple(sorted(c.size for c in group.conjugacy_classes)),
        order_histogram=tuple(sorted(histogram.items())),
        center_order=group.center.order,
        derived_order=group.derived_subgroup.order,
        derived_series=tuple(s.order for s in derived_series(group)),
        normal_count=len(normals),
        normal_orders=tuple(sorted(n.order for n in normals)),
    )


def fingerprints(groups: Sequence[Group], show_progress: bool = True) -> List[Fingerprint]:
    iterator = groups
    if show_progress:
        iterator = tqdm(groups, desc="Fingerprinting", unit="group")
    return [fingerprint(group) for group in iterator]


def greedy_generating_set(group: Group) -> List[int]:
    """
    Generators added one at a time, each maximizing the closure so far.

    Ties go to the smallest element index, so the result is deterministic.
    """
    gens: List[int] = []
    closure = group.trivial_subgroup
    while not closure.is_whole():
        best, best_closure = None, None
        for candidate in range(group.order):
            if candidate in closure:
                continue
            grown = group.subgroup_closure(mask_from_indices(gens + [candidate]))
            if best_closure is None or grown.order > best_closure.order:
                best, best_closure = candidate, grown
                if grown.is_whole():
                    break
        gens.append(best)
        closure = best_closure
    return gens


def _profiles(group: Group) -> List[Tuple[int, int, int]]:
    """(element order, class size, centralizer order) per element."""
    class_size = np.zeros(group.order, dtype=np.int64)
    for c in group.conjugacy_classes:
        class_size[c.indices()] = c.size
    return [(int(group.element_orders[i]), int(class_size[i]), group.order // int(class_size[i]))
            for i in range(group.order)]


def _extend(a: Group, b: Group, gens: Sequence[int], images: Sequence[int]) -> Optional[np.ndarray]:
    """
    Extend gens -> images to a homomorphism on the subgroup the gens generate.

    Returns the partial map (-1 outside that subgroup) or None if the
    assignment is not a well-defined injective homomorphism.
    """
    phi = np.full(a.order, -1, dtype=np.int64)
    phi[a.identity] = b.identity
    queue = [a.identity]
    for x in queue:
        for g, image in zip(gens, images):
            y = a.multiply(g, x)
            value = b.multiply(image, int(phi[x]))
            if phi[y] < 0:
                phi[y] = value
                queue.append(y)
            elif phi[y] != value:
                return None
    mapped = phi[phi >= 0]
    if len(np.unique(mapped)) != len(mapped):
        return None
    return phi


def verify_isomorphism(a: Group, b: Group, phi: np.ndarray) -> bool:
    """True iff phi (element index map a -> b) is a bijective homomorphism."""
    if a.order != b.order or len(phi) != a.order:
        return False
    if not np.array_equal(np.sort(phi), np.arange(b.order)):
        return False
    return bool(np.array_equal(phi[a.table], b.table[np.ix_(phi, phi)]))


def find_isomorphism(a: Group, b: Group) -> Optional[np.ndarray]:
    """
    Search for an isomorphism a -> b.

    Returns:
        Array mapping element indices of a to element indices of b, verified
        against both multiplication tables, or None if the groups are not
        isomorphic
    """
    if fingerprint(a) != fingerprint(b):
        return None

    gens = greedy_generating_set(a)
    profiles_a = _profiles(a)
    profiles_b = _profiles(b)
    candidates = [[y for y in range(b.order) if profiles_b[y] == profiles_a[g]] for g in gens]

    images: List[int] = []

    def search(depth: int) -> Optional[np.ndarray]:
        for candidate in candidates[depth]:
            images.append(candidate)
            phi = _extend(a, b, gens[:depth + 1], images)
            if phi is not None:
                if depth + 1 == len(gens):
                    if verify_isomorphism(a, b, phi):
                        return phi
                else:
                    found = search(depth + 1)
                    if found is not None:
                        return found
            images.pop()
        return None

    if not gens:
        phi = np.array([b.identity], dtype=np.int64)
        return phi if verify_isomorphism(a, b, phi) else None
    return search(0)


def are_isomorphic(a: Group, b: Group) -> bool:
    return find_isomorphism(a, b) is not None
