"""
Unit tests for group_constructors.py
"""
from collections import Counter

import pytest

from group_constructors import (
    PRESENTATION_U, PRESENTATION_V, InvalidActionError, Presentation, PresentationError,
    alternating, cyclic, dicyclic, dicyclic_presentation, dihedral, dihedral_presentation,
    direct_product, elementary_abelian, evaluate_word, find_presentation_witness,
    regular_representation, satisfies_presentation, semidirect_product, smallgroup_20_3,
    smallgroup_24_3, symmetric,
)
from isomorphism import are_isomorphic
from perm_group import GroupSizeError


def order_histogram(group):
    return sorted(Counter(int(o) for o in group.element_orders).items())


class TestNamedGroups:
    """Test cases for the named families."""

    def test_cyclic_trivial(self):
        g = cyclic(1)
        assert g.order == 1
        assert g.generators == []

    def test_cyclic_six(self):
        g = cyclic(6)
        assert g.order == 6
        assert g.is_abelian
        assert len(g.generators) == 1
        assert sorted(g.element_orders.tolist()) == [1, 2, 3, 3, 6, 6]

    def test_cyclic_prime(self):
        g = cyclic(5)
        assert sorted(g.element_orders.tolist()) == [1, 5, 5, 5, 5]

    def test_cyclic_rejects_zero(self):
        with pytest.raises(ValueError):
            cyclic(0)

    def test_dihedral_eight(self, d8):
        assert d8.order == 8
        assert d8.center.order == 2

    def test_dihedral_klein_four(self):
        g = dihedral(2)
        assert g.order == 4
        assert g.is_abelian
        assert order_histogram(g) == [(1, 1), (2, 3)]

    def test_dihedral_rejects_one(self):
        with pytest.raises(ValueError):
            dihedral(1)

    def test_dihedral_three_is_s3(self):
        assert are_isomorphic(dihedral(3), symmetric(3))

    def test_dihedral_ten_class_count(self):
        assert len(dihedral(5).conjugacy_classes) == 4

    @pytest.mark.parametrize("n", [3, 4, 5, 6])
    def test_dihedral_presentation(self, n):
        assert satisfies_presentation(dihedral(n), dihedral_presentation(n))

    def test_q8(self, q8):
        assert q8.order == 8
        assert order_histogram(q8) == [(1, 1), (2, 1), (4, 6)]

    def test_dicyclic_twelve(self):
        g = dicyclic(3)
        assert g.order == 12
        assert len(g.conjugacy_classes) == 6

    @pytest.mark.parametrize("n", [2, 3, 4])
    def test_dicyclic_presentation(self, n):
        assert satisfies_presentation(dicyclic(n), dicyclic_presentation(n))

    def test_dicyclic_rejects_one(self):
        with pytest.raises(ValueError):
            dicyclic(1)

    def test_symmetric_and_alternating_orders(self):
        assert symmetric(1).order == 1
        assert symmetric(2).order == 2
        assert symmetric(3).order == 6
        assert symmetric(5).order == 120
        assert alternating(2).order == 1
        assert alternating(4).order == 12
        assert alternating(5).order == 60

    def test_s4_derived_is_a4(self, s4, a4):
        derived = {p.images for p in s4.derived_subgroup.elements()}
        assert derived == {p.images for p in a4.elements}

    def test_elementary_abelian(self):
        assert elementary_abelian(2, 1).order == 2
        klein = elementary_abelian(2, 2)
        assert klein.order == 4 and klein.is_abelian
        e9 = elementary_abelian(3, 2)
        assert order_histogram(e9) == [(1, 1), (3, 8)]

    def test_elementary_abelian_rejects_composite(self):
        with pytest.raises(ValueError):
            elementary_abelian(4, 2)

    def test_cap_applies(self):
        with pytest.raises(GroupSizeError):
            symmetric(7, cap=1000)


class TestProducts:
    """Test cases for direct and semidirect products."""

    def test_direct_product_degree_and_order(self, s4):
        g = direct_product(cyclic(3), s4)
        assert g.degree == 3 + 4
        assert g.order == 72
        assert len(g.generators) == 1 + len(s4.generators)

    def test_direct_product_with_trivial(self, d8):
        assert are_isomorphic(direct_product(cyclic(1), d8), d8)

    def test_z2_times_z3_is_z6(self):
        assert are_isomorphic(direct_product(cyclic(2), cyclic(3)), cyclic(6))

    def test_z2_times_z2_is_klein(self):
        assert are_isomorphic(direct_product(cyclic(2), cyclic(2)), elementary_abelian(2, 2))

    def test_evaluate_word(self, q8):
        a, b = q8.generator_indices
        assert evaluate_word(q8, ((0, 4),)) == q8.identity
        assert evaluate_word(q8, ((1, 2),)) == evaluate_word(q8, ((0, 2),))
        assert evaluate_word(q8, ((0, 1), (1, 1))) == q8.multiply(a, b)
        assert evaluate_word(q8, ((0, -1),)) == int(q8.inverse[a])
        with pytest.raises(InvalidActionError):
            evaluate_word(q8, ((2, 1),))

    def test_trivial_action_gives_direct_product(self):
        g = semidirect_product(cyclic(5), cyclic(4), [[((0, 1),)]])
        assert g.order == 20
        assert are_isomorphic(g, direct_product(cyclic(5), cyclic(4)))

    def test_order_20(self, f20):
        assert f20.order == 20
        assert f20.center.is_trivial()
        assert sum(1 for o in f20.element_orders if o == 2) == 5

    def test_order_24(self, sl23):
        assert sl23.order == 24
        assert sl23.center.order == 2
        assert sl23.center.order * 12 == sl23.order
        assert not are_isomorphic(sl23, symmetric(4))

    def test_generator_layout(self, sl23):
        # normal factor first, then the acting factor
        assert len(sl23.generators) == 3
        assert sl23.degree == 24

    def test_rejects_non_automorphism(self):
        with pytest.raises(InvalidActionError, match="automorphism"):
            semidirect_product(cyclic(6), cyclic(2), [[((0, 2),)]])

    def test_rejects_action_violating_relations(self):
        # y -> y^2 has order 4 in Aut(Z5) but the acting group is Z2
        with pytest.raises(InvalidActionError, match="relations"):
            semidirect_product(cyclic(5), cyclic(2), [[((0, 2),)]])

    def test_rejects_wrong_block_count(self):
        with pytest.raises(InvalidActionError):
            semidirect_product(cyclic(5), cyclic(4), [])
        with pytest.raises(InvalidActionError):
            semidirect_product(elementary_abelian(3, 2), cyclic(2), [[((0, 2),)]])

    def test_regular_representation_of_z4(self):
        g = regular_representation(4, lambda x, y: (x + y) % 4, [1])
        assert g.order == 4
        assert are_isomorphic(g, cyclic(4))


class TestPresentations:
    """Test cases for the presentation checker."""

    def test_parse(self):
        p = Presentation.parse("x, y | x^4 = y^5 = 1, x^-1 y x = y^2")
        assert p.generators == ("x", "y")
        assert len(p.relations) == 3
        assert p.relations[0] == ((("x", 4),), (("y", 5),))
        assert p.relations[2] == ((("x", -1), ("y", 1), ("x", 1)), (("y", 2),))

    def test_parse_angle_brackets_and_stars(self):
        p = Presentation.parse("< a | a*a*a = 1 >")
        assert p.relations == (((("a", 1), ("a", 1), ("a", 1)), ()),)

    def test_parse_errors(self):
        with pytest.raises(PresentationError):
            Presentation.parse("x, y")
        with pytest.raises(PresentationError):
            Presentation.parse("x | z^2 = 1")
        with pytest.raises(PresentationError):
            Presentation.parse("x | x^2")

    def test_cyclic_four(self):
        assert satisfies_presentation(cyclic(4), "x | x^4 = 1")

    def test_witness_must_generate(self):
        assert not satisfies_presentation(cyclic(4), "x | x^2 = 1")

    def test_order_20_satisfies_v(self, f20):
        witness = find_presentation_witness(f20, PRESENTATION_V)
        assert witness is not None
        assert f20.element_orders[witness["x"]] == 4
        assert f20.element_orders[witness["y"]] == 5

    def test_order_24_satisfies_u(self, sl23):
        assert satisfies_presentation(sl23, PRESENTATION_U)

    def test_s4_does_not_satisfy_u(self, s4):
        assert not satisfies_presentation(s4, PRESENTATION_U)

    def test_q8_is_not_dihedral(self, q8):
        assert not satisfies_presentation(q8, dihedral_presentation(4))

    def test_too_many_generators(self, q8):
        with pytest.raises(PresentationError, match="generators"):
            satisfies_presentation(q8, "a, b, c, d | a = b")

    def test_shortcuts(self):
        assert smallgroup_20_3().order == 20
        assert smallgroup_24_3().order == 24
