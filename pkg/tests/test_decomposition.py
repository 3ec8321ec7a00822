"""
Unit tests for decomposition.py
"""
import json

import pytest

from construction_parser import build, build_group
from decomposition import (
    DecompositionReport, KSet, abelian_kset, classes_in, decompose, dihedral_kset,
    find_n_decomposable, frobenius_identity_check, is_minimal_normal, is_x_decomposable,
    jing_property_check, kset, ncc, pq_kset, proper_normal_subgroups, quaternion_kset,
    shi_property_check,
)
from group_constructors import cyclic, dicyclic, dihedral, semidirect_product, symmetric
from perm_group import Permutation, Subgroup, mask_from_indices


def subgroup_of_order(group, order):
    (match,) = [n for n in group.normal_subgroups if n.order == order]
    return match


class TestKSet:
    def test_of_sorts_and_dedups(self):
        assert KSet.of([3, 1, 2, 3]).values == (1, 2, 3)

    def test_rejects_unsorted_or_nonpositive(self):
        with pytest.raises(ValueError):
            KSet((2, 1))
        with pytest.raises(ValueError):
            KSet((0, 1))

    def test_parse_and_str(self):
        assert KSet.parse("{1,2,3}") == KSet((1, 2, 3))
        assert KSet.parse("3, 1") == KSet((1, 3))
        assert str(KSet((1, 2, 4))) == "{1,2,4}"
        assert str(KSet()) == "{}"

    def test_parse_rejects_duplicates(self):
        with pytest.raises(ValueError):
            KSet.parse("1,1,2")


class TestNcc:
    """Test cases for ncc."""

    def test_trivial_subgroup(self, s4):
        assert ncc(s4, s4.trivial_subgroup) == 1

    def test_a4_in_s4(self, s4):
        assert ncc(s4, subgroup_of_order(s4, 12)) == 3

    def test_order_20_normal_subgroups(self, f20):
        assert ncc(f20, subgroup_of_order(f20, 5)) == 2
        assert ncc(f20, subgroup_of_order(f20, 10)) == 3

    def test_rejects_non_normal(self, s4):
        transposition = s4.index_of(Permutation.parse("(0 1)", 4))
        non_normal = Subgroup(s4, mask_from_indices([s4.identity, transposition]))
        with pytest.raises(ValueError, match="normal"):
            ncc(s4, non_normal)

    def test_fusion_sum(self, sl23):
        for normal in sl23.normal_subgroups:
            assert sum(c.size for c in classes_in(sl23, normal)) == normal.order

    def test_monotone_under_containment(self, d8):
        normals = d8.normal_subgroups
        for small in normals:
            for big in normals:
                if small.is_subgroup_of(big):
                    if small == big:
                        assert ncc(d8, small) == ncc(d8, big)
                    else:
                        assert ncc(d8, small) < ncc(d8, big)


class TestKsetOfGroups:
    """Test cases for K_G."""

    @pytest.mark.parametrize("text,expected", [
        ("C 6", (1, 2, 3)),
        ("D 4", (1, 2, 3)),
        ("Q 2", (1, 2, 3)),
        ("S 4", (1, 2, 3)),
        ("C 4", (1, 2)),
        ("D 6", (1, 2, 3, 4)),
        ("Q 3", (1, 2, 4)),
        ("C 1", ()),
        ("C 7", (1,)),
    ])
    def test_known_ksets(self, text, expected):
        assert kset(build_group(text)).values == expected

    def test_contains_one(self, catalog_entries):
        for entry in catalog_entries[:12]:
            assert 1 in kset(build(entry.expr))

    def test_is_x_decomposable(self, s4, q8):
        assert is_x_decomposable(s4, {1, 2, 3})
        assert not is_x_decomposable(q8, {1, 2})
        assert not is_x_decomposable(q8, {1, 2, 3, 4})
        assert is_x_decomposable(cyclic(11), [1])

    def test_own_kset_always_matches(self, sl23):
        assert is_x_decomposable(sl23, kset(sl23))

    def test_find_n_decomposable(self, s4):
        (klein,) = find_n_decomposable(s4, 2)
        assert klein.order == 4
        assert find_n_decomposable(s4, 5) == []
        assert find_n_decomposable(s4, 1) == [s4.trivial_subgroup]


class TestFormulaOracles:
    """Closed-form K-sets against direct computation."""

    def test_abelian(self):
        assert abelian_kset(6) == KSet((1, 2, 3))
        assert abelian_kset(7) == KSet((1,))
        assert abelian_kset(12) == KSet((1, 2, 3, 4, 6))
        assert abelian_kset(1) == KSet()
        with pytest.raises(ValueError):
            abelian_kset(0)

    @pytest.mark.parametrize("n", range(2, 61))
    def test_abelian_matches_cyclic(self, n):
        assert kset(cyclic(n)) == abelian_kset(n)

    def test_pq(self):
        assert pq_kset(7, 3) == KSet((1, 3))
        assert pq_kset(5, 2) == KSet((1, 3))
        assert pq_kset(13, 3) == KSet((1, 5))
        assert pq_kset(5, 2) == kset(dihedral(5))

    def test_pq_smallest(self):
        assert pq_kset(3, 2) == KSet((1, 2))
        assert pq_kset(3, 2) == kset(symmetric(3))

    def test_pq_matches_catalog(self, catalog_entries):
        nonabelian = [build(e.expr) for e in catalog_entries if e.order == 6]
        nonabelian = [g for g in nonabelian if not g.is_abelian]
        assert len(nonabelian) == 1
        assert kset(nonabelian[0]) == pq_kset(3, 2)

    @pytest.mark.parametrize("p,q", [(5, 3), (4, 2), (7, 5)])
    def test_pq_domain(self, p, q):
        with pytest.raises(ValueError):
            pq_kset(p, q)

    @pytest.mark.parametrize("p,q,r", [(5, 2, 4), (7, 2, 6), (7, 3, 2), (11, 2, 10), (13, 3, 3)])
    def test_pq_matches_semidirect(self, p, q, r):
        g = semidirect_product(cyclic(p), cyclic(q), [[((0, r),)]])
        assert g.order == p * q
        assert kset(g) == pq_kset(p, q)

    def test_dihedral_values(self):
        assert dihedral_kset(5) == KSet((1, 3))
        assert dihedral_kset(4) == KSet((1, 2, 3))
        assert dihedral_kset(6) == KSet((1, 2, 3, 4))
        with pytest.raises(ValueError):
            dihedral_kset(2)

    @pytest.mark.parametrize("n", range(3, 21))
    def test_dihedral_matches_direct(self, n):
        assert kset(dihedral(n)) == dihedral_kset(n)

    def test_quaternion_values(self):
        assert quaternion_kset(2) == KSet((1, 2, 3))
        assert quaternion_kset(3) == KSet((1, 2, 4))
        assert 4 in quaternion_kset(4)
        with pytest.raises(ValueError):
            quaternion_kset(1)

    @pytest.mark.parametrize("n", range(2, 13))
    def test_quaternion_matches_direct(self, n):
        assert kset(dicyclic(n)) == quaternion_kset(n)


class TestStructure:
    def test_odd_dihedral_normals_inside_rotations(self):
        g = dihedral(9)
        rotations = g.subgroup_closure(1 << g.generator_indices[0])
        for normal in proper_normal_subgroups(g):
            assert normal.is_subgroup_of(rotations)

    def test_odd_dicyclic_normals_inside_cyclic_part(self):
        g = dicyclic(5)
        cyclic_part = g.subgroup_closure(1 << g.generator_indices[0])
        for normal in proper_normal_subgroups(g):
            assert normal.is_subgroup_of(cyclic_part)

    def test_minimal_normal(self, s4):
        assert is_minimal_normal(s4, subgroup_of_order(s4, 4))
        assert not is_minimal_normal(s4, subgroup_of_order(s4, 12))
        assert not is_minimal_normal(s4, s4.trivial_subgroup)


class TestPropertySuites:
    """Test cases for the 2-/3-decomposable and Frobenius checks."""

    def test_shi_order_20(self, f20):
        report = shi_property_check(f20)
        assert report.passed
        assert {check.subgroup_order for check in report.checks} == {5}
        assert len(report.checks) == 5

    def test_shi_q8(self, q8):
        report = shi_property_check(q8)
        assert report.passed
        assert {check.subgroup_order for check in report.checks} == {2}

    def test_shi_vacuous(self):
        report = shi_property_check(cyclic(9))
        assert report.checks == []
        assert report.passed

    def test_jing_s4(self, s4):
        report = jing_property_check(s4)
        assert report.passed
        assert {check.subgroup_order for check in report.checks} == {12}

    def test_jing_order_20(self, f20):
        report = jing_property_check(f20)
        assert report.passed
        assert {check.subgroup_order for check in report.checks} == {10}

    def test_jing_z6(self, z6):
        report = jing_property_check(z6)
        assert report.passed
        assert {check.subgroup_order for check in report.checks} == {3}

    def test_failures_are_listed(self, s4, mocker):
        mocker.patch("decomposition.has_prime_power_orders", return_value=False)
        report = jing_property_check(s4)
        assert not report.passed
        assert [f.assertion for f in report.failures()] == ["prime-power element orders"]

    def test_frobenius_order_20(self, f20):
        report = frobenius_identity_check(f20)
        assert report.applicable
        assert report.passed
        assert report.checks[0].detail == "20 vs 5*4"

    def test_frobenius_not_applicable(self, d8, s4):
        assert not frobenius_identity_check(d8).applicable
        assert not frobenius_identity_check(s4).applicable


class TestDecompositionReport:
    """Test cases for the report payload."""

    def test_text_lines(self, q8):
        lines = decompose(q8).to_text_lines()
        assert lines[0] == "group order=8 abelian=no perfect=no"
        assert lines[1] == "N0 order=1 ncc=1 sizes=1 reps=()"
        assert lines[-1] == "K = {1,2,3}"
        assert len(lines) == 2 + 5

    def test_trivial_group(self):
        report = decompose(cyclic(1))
        assert report.entries == []
        assert report.to_text_lines()[-1] == "K = {}"

    def test_fusion_sum_in_entries(self, sl23):
        for entry in decompose(sl23).entries:
            assert sum(entry.class_sizes) == entry.order
            assert len(entry.class_reps) == entry.ncc

    def test_json_lines_parse_and_round_trip(self, s4):
        report = decompose(s4, label="g24_S4")
        lines = report.to_json_lines()
        records = [json.loads(line) for line in lines]
        assert records[0]["record"] == "group"
        assert records[-1] == {"record": "kset", "kset": [1, 2, 3]}
        assert DecompositionReport.from_json_lines(lines) == report

    def test_json_matches_text_numbers(self, d8):
        report = decompose(d8)
        text = report.to_text_lines()[1:-1]
        records = [json.loads(line) for line in report.to_json_lines()[1:-1]]
        for line, record in zip(text, records):
            assert f"order={record['order']} ncc={record['ncc']}" in line

    def test_print_report(self, z6, capsys):
        decompose(z6).print_report()
        out = capsys.readouterr().out
        assert out.strip().endswith("K = {1,2,3}")
