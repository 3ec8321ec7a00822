"""
Permutation group engine: element tables, conjugacy classes and normal subgroups.

Composition convention: (p * q)(x) = p(q(x)), i.e. the right-hand factor acts
first. Every group is fully enumerated; its elements are kept sorted
lexicographically by image sequence and all element indices refer to that order.
Subsets of a group (subgroups, classes) are bit-sets stored as Python ints: bit i
is set when element i is a member.
"""
import math
import re
from dataclasses import dataclass
from functools import cached_property
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np
from sympy import isprime


DEFAULT_CAP = 20000


class GroupSizeError(ValueError):
    """Raised when a closure grows past the element cap."""


def mask_from_indices(indices: Iterable[int]) -> int:
    """Build a bit-set from element indices."""
    mask = 0
    for index in indices:
        mask |= 1 << int(index)
    return mask


def indices_from_mask(mask: int) -> List[int]:
    """Return the set bits of a bit-set in increasing order."""
    result = []
    while mask:
        low = mask & -mask
        result.append(low.bit_length() - 1)
        mask ^= low
    return result


def popcount(mask: int) -> int:
    return bin(mask).count('1')


_CYCLE_RE = re.compile(r'\(([^()]*)\)')


@dataclass(frozen=True, order=True)
class Permutation:
    """A bijection on the points 0..degree-1, stored as its image sequence."""
    images: Tuple[int, ...]

    def __post_init__(self):
        if sorted(self.images) != list(range(len(self.images))):
            raise ValueError(f"Not a permutation of 0..{len(self.images) - 1}: {self.images}")

    @classmethod
    def identity(cls, degree: int) -> 'Permutation':
        return cls(tuple(range(degree)))

    @classmethod
    def from_cycles(cls, cycles: Sequence[Sequence[int]], degree: int) -> 'Permutation':
        """
        Build a permutation from disjoint cycles.

        Args:
            cycles: Disjoint cycles, each a sequence of points
            degree: Number of points acted on

        Returns:
            The permutation sending each cycle entry to its successor
        """
        images = list(range(degree))
        touched = set()
        for cycle in cycles:
            for k, point in enumerate(cycle):
                if not 0 <= point < degree:
                    raise ValueError(f"Point {point} outside 0..{degree - 1}")
                if point in touched:
                    raise ValueError(f"Point {point} appears in more than one cycle")
                touched.add(point)
                images[point] = cycle[(k + 1) % len(cycle)]
        return cls(tuple(images))

    @classmethod
    def parse(cls, text: str, degree: Optional[int] = None) -> 'Permutation':
        """
        Parse cycle notation such as "(0 1 2)(3 4)"; "()" is the identity.

        Args:
            text: Cycle-notation string, points separated by spaces or commas
            degree: Number of points; defaults to one past the largest point

        Returns:
            Parsed Permutation
        """
        stripped = re.sub(r'\s+', ' ', text.strip())
        cycles = []
        position = 0
        for match in _CYCLE_RE.finditer(stripped):
            if stripped[position:match.start()].strip():
                raise ValueError(f"Malformed cycle notation at column {position + 1}: {text!r}")
            body = match.group(1).replace(',', ' ').split()
            try:
                cycles.append([int(token) for token in body])
            except ValueError:
                raise ValueError(f"Non-integer point in cycle notation: {text!r}")
            position = match.end()
        if stripped[position:].strip() or not stripped:
            raise ValueError(f"Malformed cycle notation: {text!r}")

        largest = max((point for cycle in cycles for point in cycle), default=0)
        if degree is None:
            degree = largest + 1
        return cls.from_cycles(cycles, degree)

    @property
    def degree(self) -> int:
        return len(self.images)

    def __mul__(self, other: 'Permutation') -> 'Permutation':
        return compose(self, other)

    def inverse(self) -> 'Permutation':
        images = [0] * len(self.images)
        for point, image in enumerate(self.images):
            images[image] = point
        return Permutation(tuple(images))

    def is_identity(self) -> bool:
        return all(point == image for point, image in enumerate(self.images))

    def cycles(self) -> List[Tuple[int, ...]]:
        """Non-trivial cycles, each starting at its smallest point, sorted by that point."""
        seen = set()
        result = []
        for start in range(len(self.images)):
            if start in seen or self.images[start] == start:
                continue
            cycle = [start]
            seen.add(start)
            point = self.images[start]
            while point != start:
                cycle.append(point)
                seen.add(point)
                point = self.images[point]
            result.append(tuple(cycle))
        return result

    def order(self) -> int:
        return math.lcm(1, *(len(cycle) for cycle in self.cycles()))

    def __str__(self) -> str:
        cycles = self.cycles()
        if not cycles:
            return "()"
        return "".join("(" + " ".join(str(point) for point in cycle) + ")" for cycle in cycles)


def compose(p: Permutation, q: Permutation) -> Permutation:
    """
    Compose two permutations: (p o q)(x) = p(q(x)).

    Raises:
        ValueError: If the degrees differ
    """
    if p.degree != q.degree:
        raise ValueError(f"Degree mismatch: {p.degree} != {q.degree}")
    return Permutation(tuple(p.images[point] for point in q.images))


@dataclass(frozen=True, eq=False)
class Subgroup:
    """A subgroup of a parent group, given by a membership bit-set."""
    parent: 'Group'
    members: int

    @property
    def order(self) -> int:
        return popcount(self.members)

    def indices(self) -> List[int]:
        return indices_from_mask(self.members)

    def elements(self) -> List[Permutation]:
        return [self.parent.elements[i] for i in self.indices()]

    def __contains__(self, index: int) -> bool:
        return bool((self.members >> int(index)) & 1)

    def __eq__(self, other: object) -> bool:
        return (isinstance(other, Subgroup) and other.parent is self.parent
                and other.members == self.members)

    def __hash__(self) -> int:
        return hash(self.members)

    def __repr__(self) -> str:
        return f"Subgroup(order={self.order}, of={self.parent.order})"

    def sort_key(self) -> Tuple[int, Tuple[int, ...]]:
        return self.order, tuple(self.indices())

    def is_trivial(self) -> bool:
        return self.members == 1 << self.parent.identity

    def is_whole(self) -> bool:
        return self.order == self.parent.order

    def is_subgroup_of(self, other: 'Subgroup') -> bool:
        return self.members & ~other.members == 0

    def is_normal(self) -> bool:
        """True if every generator of the parent conjugates the subgroup onto itself."""
        return self.parent.conjugates_mask(self.members) == self.members

    def is_abelian(self) -> bool:
        idx = np.array(self.indices())
        block = self.parent.table[np.ix_(idx, idx)]
        return bool(np.array_equal(block, block.T))

    def center(self) -> 'Subgroup':
        idx = np.array(self.indices())
        block = self.parent.table[np.ix_(idx, idx)]
        central = np.all(block == block.T, axis=1)
        return Subgroup(self.parent, mask_from_indices(idx[central]))

    def generators(self) -> List[int]:
        """A small generating set, chosen greedily in canonical element order."""
        gens: List[int] = []
        closure = self.parent.trivial_subgroup.members
        for index in self.indices():
            if closure == self.members:
                break
            if (closure >> index) & 1:
                continue
            gens.append(index)
            closure = self.parent.subgroup_closure(mask_from_indices(gens)).members
        return gens

    def derived_subgroup(self) -> 'Subgroup':
        """Normal closure inside this subgroup of the commutators of its generators."""
        gens = self.generators()
        seed = [self.parent.commutator(a, b) for a in gens for b in gens]
        return self.parent.normal_closure_by(gens, mask_from_indices(seed))


@dataclass(frozen=True, eq=False)
class ConjugacyClass:
    """A conjugacy class: minimal representative plus member bit-set."""
    parent: 'Group'
    representative: int
    members: int

    @property
    def size(self) -> int:
        return popcount(self.members)

    def indices(self) -> List[int]:
        return indices_from_mask(self.members)

    def __contains__(self, index: int) -> bool:
        return bool((self.members >> int(index)) & 1)

    def __repr__(self) -> str:
        return f"ConjugacyClass(rep={self.parent.elements[self.representative]}, size={self.size})"


class Group:
    """
    A fully enumerated permutation group.

    Construct with generate(). Elements, the Cayley table and all cached
    structure are read-only after construction, so a Group may be shared
    between workers.
    """

    def __init__(self, degree: int, generators: List[Permutation], elements: List[Permutation]):
        self.degree = degree
        self.generators = list(generators)
        self.elements = elements
        self._index: Dict[Tuple[int, ...], int] = {p.images: i for i, p in enumerate(elements)}
        self.identity = self._index[tuple(range(degree))]
        self.table = self._build_table()
        self.inverse = np.argmax(self.table == self.identity, axis=1)
        self.generator_indices = [self._index[g.images] for g in self.generators]

    def _build_table(self) -> np.ndarray:
        n = len(self.elements)
        images = np.array([p.images for p in self.elements], dtype=np.int64).reshape(n, self.degree)
        table = np.empty((n, n), dtype=np.int64)
        for i in range(n):
            # row j holds elements[i] o elements[j]
            products = images[i][images]
            table[i] = [self._index[tuple(row)] for row in products.tolist()]
        return table

    @property
    def order(self) -> int:
        return len(self.elements)

    def __len__(self) -> int:
        return len(self.elements)

    def __repr__(self) -> str:
        return f"Group(order={self.order}, degree={self.degree}, generators={len(self.generators)})"

    def index_of(self, perm: Permutation) -> int:
        try:
            return self._index[perm.images]
        except KeyError:
            raise ValueError(f"{perm} is not an element of this group")

    def multiply(self, a: int, b: int) -> int:
        return int(self.table[a, b])

    def commutator(self, a: int, b: int) -> int:
        """[a, b] = a^-1 b^-1 a b."""
        t = self.table
        return int(t[t[self.inverse[a], self.inverse[b]], t[a, b]])

    def conjugate(self, x: int, g: int) -> int:
        """g^-1 x g."""
        return int(self.table[self.table[self.inverse[g], x], g])

    def conjugates_mask(self, mask: int) -> int:
        """Union of the images of a set under conjugation by each generator."""
        idx = np.array(indices_from_mask(mask))
        if not self.generator_indices:
            return mask
        gens = np.array(self.generator_indices)
        conj = self.table[self.table[self.inverse[gens][:, None], idx[None, :]], gens[:, None]]
        return mask_from_indices(np.unique(conj))

    @cached_property
    def trivial_subgroup(self) -> Subgroup:
        return Subgroup(self, 1 << self.identity)

    @cached_property
    def whole(self) -> Subgroup:
        return Subgroup(self, (1 << self.order) - 1)

    @cached_property
    def element_orders(self) -> np.ndarray:
        n = self.order
        orders = np.zeros(n, dtype=np.int64)
        idx = np.arange(n)
        power = idx.copy()
        k = 1
        while True:
            hit = (power == self.identity) & (orders == 0)
            orders[hit] = k
            if orders.all():
                return orders
            power = self.table[power, idx]
            k += 1

    @cached_property
    def is_abelian(self) -> bool:
        return bool(np.array_equal(self.table, self.table.T))

    def subgroup_closure(self, seed: int) -> Subgroup:
        """Subgroup generated by the elements of a bit-set."""
        gens = np.array(indices_from_mask(seed), dtype=np.int64)
        members = np.zeros(self.order, dtype=bool)
        members[self.identity] = True
        frontier = np.array([self.identity], dtype=np.int64)
        while frontier.size and gens.size:
            products = self.table[np.ix_(frontier, gens)].ravel()
            fresh = np.unique(products[~members[products]])
            members[fresh] = True
            frontier = fresh
        return Subgroup(self, mask_from_indices(np.flatnonzero(members)))

    def normal_closure_by(self, ambient_gens: Sequence[int], seed: int) -> Subgroup:
        """Smallest subgroup containing seed that the given elements normalize."""
        closure = self.subgroup_closure(seed)
        if not ambient_gens:
            return closure
        gens = np.array(ambient_gens, dtype=np.int64)
        while True:
            idx = np.array(closure.indices(), dtype=np.int64)
            conj = self.table[self.table[self.inverse[gens][:, None], idx[None, :]], gens[:, None]]
            grown = closure.members | mask_from_indices(np.unique(conj))
            if grown == closure.members:
                return closure
            closure = self.subgroup_closure(grown)

    @cached_property
    def _class_data(self) -> Tuple[List[ConjugacyClass], np.ndarray]:
        class_of = np.full(self.order, -1, dtype=np.int64)
        classes: List[ConjugacyClass] = []
        for start in range(self.order):
            if class_of[start] >= 0:
                continue
            label = len(classes)
            class_of[start] = label
            orbit = [start]
            for x in orbit:
                for g in self.generator_indices:
                    y = self.conjugate(x, g)
                    if class_of[y] < 0:
                        class_of[y] = label
                        orbit.append(y)
            classes.append(ConjugacyClass(self, start, mask_from_indices(orbit)))
        return classes, class_of

    @property
    def conjugacy_classes(self) -> List[ConjugacyClass]:
        return self._class_data[0]

    def class_of(self, index: int) -> ConjugacyClass:
        return self.conjugacy_classes[int(self._class_data[1][index])]

    def centralizer(self, x: int) -> Subgroup:
        commuting = self.table[x, :] == self.table[:, x]
        return Subgroup(self, mask_from_indices(np.flatnonzero(commuting)))

    @cached_property
    def center(self) -> Subgroup:
        central = np.ones(self.order, dtype=bool)
        for g in self.generator_indices:
            central &= self.table[g, :] == self.table[:, g]
        return Subgroup(self, mask_from_indices(np.flatnonzero(central)))

    def normal_closure(self, seed: int) -> Subgroup:
        """Smallest normal subgroup containing seed: the subgroup generated by the classes it meets."""
        class_of = self._class_data[1]
        touched = set(int(class_of[i]) for i in indices_from_mask(seed))
        union = 0
        for label in touched:
            union |= self.conjugacy_classes[label].members
        return self.subgroup_closure(union)

    @cached_property
    def derived_subgroup(self) -> Subgroup:
        gens = self.generator_indices
        seed = [self.commutator(a, b) for a in gens for b in gens]
        return self.normal_closure(mask_from_indices(seed))

    def product_mask(self, first: int, second: int) -> int:
        """The product set NM of two subsets."""
        a = np.array(indices_from_mask(first), dtype=np.int64)
        b = np.array(indices_from_mask(second), dtype=np.int64)
        return mask_from_indices(np.unique(self.table[np.ix_(a, b)]))

    @cached_property
    def normal_subgroups(self) -> List[Subgroup]:
        """
        All normal subgroups, trivial and whole included, sorted by (order, members).

        Atoms are the normal closures of single classes; every normal subgroup
        is the join of the atoms it contains, and the join of two normal
        subgroups is their product set.
        """
        atoms = sorted({self.normal_closure(c.members).members for c in self.conjugacy_classes})
        found = {self.trivial_subgroup.members} | set(atoms)
        pending = list(found)
        while pending:
            current = pending.pop()
            for atom in atoms:
                if atom & ~current == 0:
                    continue
                joined = self.product_mask(current, atom)
                if joined not in found:
                    found.add(joined)
                    pending.append(joined)
        subgroups = [Subgroup(self, mask) for mask in found]
        subgroups.sort(key=Subgroup.sort_key)
        return subgroups


def generate(gens: Sequence[Permutation], cap: int = DEFAULT_CAP, degree: Optional[int] = None) -> Group:
    """
    Enumerate the group generated by permutations, breadth first.

    Args:
        gens: Generators, all of one degree
        cap: Maximum number of elements before giving up
        degree: Point count, required only when gens is empty (default 1)

    Returns:
        The generated Group with canonically sorted elements

    Raises:
        GroupSizeError: If the closure exceeds cap elements
        ValueError: If generator degrees differ
    """
    gens = list(gens)
    if gens:
        degree = gens[0].degree
        for g in gens:
            if g.degree != degree:
                raise ValueError(f"Degree mismatch among generators: {g.degree} != {degree}")
    elif degree is None:
        degree = 1

    identity = Permutation.identity(degree)
    seen = {identity.images}
    frontier = [identity]
    while frontier:
        next_frontier = []
        for p in frontier:
            for g in gens:
                q = compose(g, p)
                if q.images in seen:
                    continue
                seen.add(q.images)
                if len(seen) > cap:
                    raise GroupSizeError(f"Group exceeds element cap of {cap}")
                next_frontier.append(q)
        frontier = next_frontier

    elements = sorted(Permutation(images) for images in seen)
    return Group(degree, gens, elements)


def conjugacy_classes(group: Group) -> List[ConjugacyClass]:
    return group.conjugacy_classes


def centralizer(group: Group, x: int) -> Subgroup:
    return group.centralizer(x)


def center(group: Group) -> Subgroup:
    return group.center


def derived_subgroup(group: Group) -> Subgroup:
    return group.derived_subgroup


def is_perfect(group: Group) -> bool:
    """G' = G. Note the trivial group counts as perfect."""
    return group.derived_subgroup.is_whole()


def subgroup_closure(group: Group, seed: int) -> Subgroup:
    return group.subgroup_closure(seed)


def normal_closure(group: Group, seed: int) -> Subgroup:
    return group.normal_closure(seed)


def normal_subgroups(group: Group) -> List[Subgroup]:
    return group.normal_subgroups


def is_prime_power(n: int, p: int) -> bool:
    while n > 1 and n % p == 0:
        n //= p
    return n == 1


def maximal_normal_p_subgroup(group: Group, p: int) -> Subgroup:
    """
    O_p(G), the largest normal p-subgroup.

    Raises:
        ValueError: If p is not prime
    """
    if not isprime(p):
        raise ValueError(f"{p} is not prime")
    candidates = [n for n in group.normal_subgroups if is_prime_power(n.order, p)]
    return max(candidates, key=lambda n: n.order)


def derived_series(group: Group) -> List[Subgroup]:
    """G, G', G'', ... ending at the first repeated term."""
    series = [group.whole]
    while True:
        nxt = series[-1].derived_subgroup()
        if nxt == series[-1]:
            return series
        series.append(nxt)


def is_solvable(group: Group) -> bool:
    return derived_series(group)[-1].is_trivial()


def quotient_order(group: Group, normal: Subgroup) -> int:
    return group.order // normal.order
