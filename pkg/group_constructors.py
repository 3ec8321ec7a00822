"""
Constructors for the named groups and group-forming combinators.

Every constructor returns a fully enumerated perm_group.Group. Generator lists
are part of each constructor's contract because semidirect actions and
presentations refer to generators by position:

    cyclic(n)               [n-cycle]                       (none for n = 1)
    dihedral(n)             [rotation a, reflection b]
    dicyclic(n)             [a, b] with a^2n = 1, b^2 = a^n, b^-1 a b = a^-1
    symmetric(n)            [n-cycle, (0 1)]                (fewer for n < 3)
    alternating(n)          [(0 1 2), (0 1 3), ..., (0 1 n-1)]
    elementary_abelian(p,k) one p-cycle per factor
    direct_product(a, b)    a's generators, then b's
    semidirect_product      normal part's generators, then the acting group's
"""
import re
from dataclasses import dataclass
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np
from sympy import isprime

from perm_group import DEFAULT_CAP, Group, Permutation, generate


GeneratorWord = Tuple[Tuple[int, int], ...]


class InvalidActionError(ValueError):
    """Raised when a semidirect action does not define a homomorphism into Aut(N)."""


class PresentationError(ValueError):
    """Raised for malformed presentations or ones too large to search."""


def _cycle_permutation(points: Sequence[int], degree: int) -> Permutation:
    return Permutation.from_cycles([list(points)], degree)


def cyclic(n: int, cap: int = DEFAULT_CAP) -> Group:
    """Z_n acting regularly on n points."""
    if n < 1:
        raise ValueError(f"Cyclic group order must be positive, got {n}")
    if n == 1:
        return generate([], cap, degree=1)
    return generate([_cycle_permutation(range(n), n)], cap)


def dihedral(n: int, cap: int = DEFAULT_CAP) -> Group:
    """
    D_2n, the symmetries of a regular n-gon (order 2n).

    Args:
        n: Number of polygon vertices; n = 2 gives the Klein four group
        cap: Element cap

    Returns:
        Group generated by the rotation a and the reflection b
    """
    if n < 2:
        raise ValueError(f"Dihedral parameter must be at least 2, got {n}")
    if n == 2:
        # the 2-gon action is not faithful
        a = Permutation.from_cycles([[0, 1], [2, 3]], 4)
        b = Permutation.from_cycles([[0, 2], [1, 3]], 4)
        return generate([a, b], cap)
    rotation = Permutation(tuple((i + 1) % n for i in range(n)))
    reflection = Permutation(tuple((-i) % n for i in range(n)))
    return generate([rotation, reflection], cap)


def regular_representation(order: int, multiply: Callable[[int, int], int],
                           generator_elements: Sequence[int], cap: int = DEFAULT_CAP) -> Group:
    """
    Realize an abstractly given group by left multiplication on itself.

    Args:
        order: Number of abstract elements, labelled 0..order-1
        multiply: Abstract multiplication on labels
        generator_elements: Labels of the generators
        cap: Element cap

    Returns:
        Group on `order` points whose generator i is y -> g_i * y
    """
    gens = [Permutation(tuple(multiply(g, y) for y in range(order))) for g in generator_elements]
    return generate(gens, cap, degree=order)


def dicyclic(n: int, cap: int = DEFAULT_CAP) -> Group:
    """Dicyclic (generalized quaternion) group Q_4n; n = 2 gives Q8."""
    if n < 2:
        raise ValueError(f"Dicyclic parameter must be at least 2, got {n}")
    m = 2 * n

    # label i + m*j stands for a^i b^j, j in {0, 1}
    def multiply(x: int, y: int) -> int:
        i, j = x % m, x // m
        k, l = y % m, y // m
        exponent = i + (-k if j else k)
        if j and l:
            exponent += n
        return exponent % m + m * ((j + l) % 2)

    return regular_representation(4 * n, multiply, [1, m], cap)


def symmetric(n: int, cap: int = DEFAULT_CAP) -> Group:
    if n < 1:
        raise ValueError(f"Symmetric degree must be positive, got {n}")
    if n == 1:
        return generate([], cap, degree=1)
    transposition = _cycle_permutation([0, 1], n)
    if n == 2:
        return generate([transposition], cap)
    return generate([_cycle_permutation(range(n), n), transposition], cap)


def alternating(n: int, cap: int = DEFAULT_CAP) -> Group:
    if n < 1:
        raise ValueError(f"Alternating degree must be positive, got {n}")
    if n < 3:
        return generate([], cap, degree=n)
    return generate([_cycle_permutation([0, 1, k], n) for k in range(2, n)], cap)


def elementary_abelian(p: int, k: int, cap: int = DEFAULT_CAP) -> Group:
    """E(p^k) as k disjoint p-cycles."""
    if not isprime(p):
        raise ValueError(f"Elementary abelian group needs a prime, got {p}")
    if k < 1:
        raise ValueError(f"Elementary abelian rank must be positive, got {k}")
    degree = p * k
    gens = [_cycle_permutation(range(block * p, block * p + p), degree) for block in range(k)]
    return generate(gens, cap)


def _shifted(perm: Permutation, offset: int, degree: int) -> Permutation:
    images = list(range(degree))
    for point, image in enumerate(perm.images):
        images[point + offset] = image + offset
    return Permutation(tuple(images))


def direct_product(a: Group, b: Group, cap: int = DEFAULT_CAP) -> Group:
    """A x B acting on the disjoint union of both point sets."""
    degree = a.degree + b.degree
    gens = ([_shifted(g, 0, degree) for g in a.generators]
            + [_shifted(g, a.degree, degree) for g in b.generators])
    return generate(gens, cap, degree=degree)


def evaluate_word(group: Group, word: GeneratorWord) -> int:
    """Element index of a product of generator powers, read left to right."""
    result = group.identity
    for gen_index, exponent in word:
        if not 0 <= gen_index < len(group.generators):
            raise InvalidActionError(
                f"Generator a{gen_index} does not exist (group has {len(group.generators)})")
        base = group.generator_indices[gen_index]
        if exponent < 0:
            base = int(group.inverse[base])
        for _ in range(abs(exponent)):
            result = group.multiply(result, base)
    return result


def _extend_to_automorphism(group: Group, images: Sequence[int]) -> np.ndarray:
    """
    Extend generator images to a map on all elements and check it is an automorphism.

    Raises:
        InvalidActionError: If the map is not well defined, not multiplicative
            or not bijective
    """
    phi = np.full(group.order, -1, dtype=np.int64)
    phi[group.identity] = group.identity
    queue = [group.identity]
    for x in queue:
        for gen, image in zip(group.generator_indices, images):
            y = group.multiply(gen, x)
            value = group.multiply(image, int(phi[x]))
            if phi[y] < 0:
                phi[y] = value
                queue.append(y)
            elif phi[y] != value:
                raise InvalidActionError("Generator images do not extend to a homomorphism")
    if len(np.unique(phi)) != group.order:
        raise InvalidActionError("Generator images do not extend to a bijection")
    return phi


def semidirect_product(normal: Group, acting: Group, action: Sequence[Sequence[GeneratorWord]],
                       cap: int = DEFAULT_CAP) -> Group:
    """
    N x| H via the left regular representation of the pair multiplication
    (n1, h1)(n2, h2) = (n1 alpha_h1(n2), h1 h2).

    Args:
        normal: The normal factor N
        acting: The acting factor H
        action: One entry per generator of H; entry i lists, for every
            generator of N, the word it is sent to by that H generator
        cap: Element cap

    Returns:
        Group of order |N| * |H|

    Raises:
        InvalidActionError: If some entry is not an automorphism of N, or the
            assignment does not respect the relations of H
    """
    if len(action) != len(acting.generators):
        raise InvalidActionError(
            f"Action lists {len(action)} maps but the acting group has {len(acting.generators)} generators")

    automorphisms = []
    for position, block in enumerate(action):
        if len(block) != len(normal.generators):
            raise InvalidActionError(
                f"Map {position} gives {len(block)} images for {len(normal.generators)} generators")
        images = [evaluate_word(normal, word) for word in block]
        try:
            automorphisms.append(_extend_to_automorphism(normal, images))
        except InvalidActionError as e:
            raise InvalidActionError(f"Map {position} is not an automorphism: {e}")

    n, h = normal.order, acting.order
    alpha: List[Optional[np.ndarray]] = [None] * h
    alpha[acting.identity] = np.arange(n)
    queue = [acting.identity]
    for x in queue:
        for gen, automorphism in zip(acting.generator_indices, automorphisms):
            y = acting.multiply(gen, x)
            composite = automorphism[alpha[x]]
            if alpha[y] is None:
                alpha[y] = composite
                queue.append(y)
            elif not np.array_equal(alpha[y], composite):
                raise InvalidActionError(
                    "Action does not respect the relations of the acting group")

    gens = []
    # point x + n*y stands for the pair (x, y)
    for gen in normal.generator_indices:
        gens.append(Permutation(tuple(
            int(normal.table[gen, x]) + n * y for y in range(h) for x in range(n))))
    for gen, automorphism in zip(acting.generator_indices, automorphisms):
        gens.append(Permutation(tuple(
            int(automorphism[x]) + n * int(acting.table[gen, y]) for y in range(h) for x in range(n))))
    return generate(gens, cap, degree=n * h)


Word = Tuple[Tuple[str, int], ...]

_WORD_TOKEN = re.compile(r'\s*(?:([A-Za-z_]\w*)(?:\s*\^\s*(-?\d+))?|(1))\s*(\*)?')


@dataclass(frozen=True)
class Presentation:
    """Generators plus relations lhs = rhs, each side a word in the generators."""
    generators: Tuple[str, ...]
    relations: Tuple[Tuple[Word, Word], ...]

    @classmethod
    def parse(cls, text: str) -> 'Presentation':
        """
        Parse "x, y | x^4 = y^5 = 1, x^-1 y x = y^2", optionally inside < >.

        Chained equalities expand to consecutive pairs. Factors are separated
        by whitespace or '*'; a lone 1 is the identity.
        """
        body = text.strip()
        if body.startswith('<') and body.endswith('>'):
            body = body[1:-1]
        if '|' not in body:
            raise PresentationError(f"Presentation needs 'generators | relations': {text!r}")
        gen_part, rel_part = body.split('|', 1)
        generators = tuple(name.strip() for name in gen_part.split(',') if name.strip())
        if len(set(generators)) != len(generators):
            raise PresentationError(f"Repeated generator in {text!r}")

        relations = []
        for chunk in rel_part.split(','):
            if not chunk.strip():
                continue
            sides = [cls._parse_word(side, generators) for side in chunk.split('=')]
            if len(sides) < 2:
                raise PresentationError(f"Relation without '=': {chunk.strip()!r}")
            relations.extend(zip(sides, sides[1:]))
        return cls(generators, tuple(relations))

    @staticmethod
    def _parse_word(text: str, generators: Tuple[str, ...]) -> Word:
        factors = []
        position = 0
        stripped = text.strip()
        if not stripped:
            raise PresentationError("Empty word in relation")
        while position < len(stripped):
            match = _WORD_TOKEN.match(stripped, position)
            if not match or match.end() == position:
                raise PresentationError(f"Cannot parse word {text.strip()!r} at column {position + 1}")
            name, exponent, identity = match.group(1), match.group(2), match.group(3)
            if name is not None:
                if name not in generators:
                    raise PresentationError(f"Unknown generator {name!r}")
                factors.append((name, int(exponent) if exponent else 1))
            position = match.end()
        return tuple(factors)


PRESENTATION_V = "x, y | x^4 = y^5 = 1, x^-1 y x = y^2"
PRESENTATION_U = ("x, y, z | x^3 = y^4 = 1, y^2 = z^2, z^-1 y z = y^-1, "
                  "x^-1 y x = y^-1 z^-1, x^-1 z x = y^-1")


def dihedral_presentation(n: int) -> str:
    return f"a, b | a^{n} = b^2 = 1, b^-1 a b = a^-1"


def dicyclic_presentation(n: int) -> str:
    return f"a, b | a^{2 * n} = 1, b^2 = a^{n}, b^-1 a b = a^-1"


def _evaluate(group: Group, word: Word, assignment: Dict[str, int]) -> int:
    result = group.identity
    for name, exponent in word:
        base = assignment[name]
        if exponent < 0:
            base = int(group.inverse[base])
        for _ in range(abs(exponent)):
            result = group.multiply(result, base)
    return result


def find_presentation_witness(group: Group, presentation, max_generators: int = 3) -> Optional[Dict[str, int]]:
    """
    Search for generator images satisfying every relation and generating the group.

    Args:
        group: Group to test
        presentation: Presentation or its text form
        max_generators: Search budget; the search is exponential in this

    Returns:
        Mapping generator name -> element index, or None if no witness exists

    Raises:
        PresentationError: If the presentation has too many generators
    """
    if isinstance(presentation, str):
        presentation = Presentation.parse(presentation)
    names = presentation.generators
    if len(names) > max_generators:
        raise PresentationError(
            f"Presentation has {len(names)} generators; search budget is {max_generators}")

    # relations become checkable once their last generator is assigned
    position = {name: i for i, name in enumerate(names)}
    by_depth: List[List[Tuple[Word, Word]]] = [[] for _ in range(len(names) + 1)]
    for lhs, rhs in presentation.relations:
        used = [position[name] + 1 for name, _ in lhs + rhs]
        by_depth[max(used, default=0)].append((lhs, rhs))

    assignment: Dict[str, int] = {}

    def holds(depth: int) -> bool:
        return all(_evaluate(group, lhs, assignment) == _evaluate(group, rhs, assignment)
                   for lhs, rhs in by_depth[depth])

    def search(depth: int) -> bool:
        if depth == len(names):
            generated = group.subgroup_closure(sum(1 << i for i in set(assignment.values())))
            return generated.is_whole()
        for candidate in range(group.order):
            assignment[names[depth]] = candidate
            if holds(depth + 1) and search(depth + 1):
                return True
        del assignment[names[depth]]
        return False

    if not holds(0):
        return None
    if search(0):
        return dict(assignment)
    return None


def satisfies_presentation(group: Group, presentation, max_generators: int = 3) -> bool:
    """
    True iff the group is generated by elements satisfying the relations.

    At equal order this certifies the group is isomorphic to the presented one.
    """
    return find_presentation_witness(group, presentation, max_generators) is not None


def smallgroup_20_3(cap: int = DEFAULT_CAP) -> Group:
    """Z5 x| Z4 with the generator of Z4 acting as y -> y^2."""
    return semidirect_product(cyclic(5, cap), cyclic(4, cap), [[((0, 2),)]], cap)


def smallgroup_24_3(cap: int = DEFAULT_CAP) -> Group:
    """Q8 x| Z3 with the generator of Z3 cycling a -> b -> ab."""
    return semidirect_product(dicyclic(2, cap), cyclic(3, cap), [[((1, 1),), ((0, 1), (1, 1))]], cap)


if __name__ == "__main__":
    for name, group in [("SmallGroup(20,3)", smallgroup_20_3()), ("SmallGroup(24,3)", smallgroup_24_3())]:
        print(f"{name}: order {group.order}, center {group.center.order}, "
              f"classes {len(group.conjugacy_classes)}")
    print("V presentation:", satisfies_presentation(smallgroup_20_3(), PRESENTATION_V))
    print("U presentation:", satisfies_presentation(smallgroup_24_3(), PRESENTATION_U))
