"""
Tests for the compact-orbit classification of maximal parabolics
"""
import pytest

from parabolics import (
    classification_row,
    classification_table,
    classification_types,
    compact_orbit_roots,
    flag_dimension,
    variety_name,
)
from rootsys import CartanType, build_root_system


@pytest.mark.parametrize(
    "label,expected",
    [
        ("A4", [1, 2, 3, 4]),
        ("B3", [1]),
        ("C3", [3]),
        ("D3", [1, 2, 3]),
        ("D4", [1, 3, 4]),
        ("D5", [1, 4, 5]),
        ("E6", [1, 6]),
        ("E7", [7]),
        ("E8", []),
        ("F4", []),
        ("G2", []),
    ],
)
def test_compact_orbit_roots(label, expected):
    rs = build_root_system(CartanType.parse(label))
    assert compact_orbit_roots(rs) == expected


class TestFlagDimension:
    @pytest.mark.parametrize("n,i", [(4, 1), (4, 2), (6, 3)])
    def test_grassmannians(self, n, i):
        rs = build_root_system(CartanType("A", n))
        assert flag_dimension(rs, i) == i * (n + 1 - i)

    def test_quadrics(self):
        assert flag_dimension(build_root_system(CartanType("B", 4)), 1) == 7
        assert flag_dimension(build_root_system(CartanType("D", 5)), 1) == 8

    def test_spinor_and_lagrangian(self):
        assert flag_dimension(build_root_system(CartanType("D", 5)), 5) == 10
        assert flag_dimension(build_root_system(CartanType("C", 4)), 4) == 10

    def test_exceptional(self):
        assert flag_dimension(build_root_system(CartanType("E", 6)), 1) == 16
        assert flag_dimension(build_root_system(CartanType("E", 7)), 7) == 27


class TestVarietyNames:
    def test_names(self):
        assert variety_name(CartanType("A", 3), 2) == "grassmannian G(2,4)"
        assert variety_name(CartanType("D", 4), 4) == "spinor variety"
        assert variety_name(CartanType("E", 6), 6) == "Cayley plane"
        assert variety_name(CartanType("C", 3), 3) == "Lagrangian grassmannian"
        assert variety_name(CartanType("E", 8), 1) is None


class TestClassificationTable:
    def test_row(self):
        row = classification_row(CartanType("E", 7))
        assert row["compact_orbit_roots"] == [7]
        assert row["flag_dimensions"] == {"7": 27}
        assert row["varieties"] == {"7": "Freudenthal variety"}

    def test_types_start_at_d3(self):
        labels = [t.label for t in classification_types(3)]
        assert "D3" in labels
        assert "D2" not in labels
        assert "G2" in labels

    def test_table_covers_exceptional_types(self):
        rows = classification_table(8)
        labels = {row["type"] for row in rows}
        assert {"E6", "E7", "E8", "F4", "G2"} <= labels
        assert all(row["compact_orbit_roots"] == [] for row in rows if row["type"] in ("E8", "F4", "G2"))


DIAGRAM_AUTOMORPHISMS = [
    ("A5", {1: 5, 2: 4, 3: 3, 4: 2, 5: 1}),
    ("D5", {1: 1, 2: 2, 3: 3, 4: 5, 5: 4}),
    ("D4", {1: 3, 2: 2, 3: 4, 4: 1}),
    ("E6", {1: 6, 2: 2, 3: 5, 4: 4, 5: 3, 6: 1}),
]


@pytest.mark.parametrize("label,sigma", DIAGRAM_AUTOMORPHISMS, ids=[a[0] for a in DIAGRAM_AUTOMORPHISMS])
class TestDiagramAutomorphisms:
    def test_preserves_cartan_matrix(self, label, sigma):
        rs = build_root_system(CartanType.parse(label))
        for i in range(1, rs.rank + 1):
            for j in range(1, rs.rank + 1):
                assert rs.cartan_matrix[sigma[i] - 1][sigma[j] - 1] == rs.cartan_matrix[i - 1][j - 1]

    def test_classification_is_invariant(self, label, sigma):
        rs = build_root_system(CartanType.parse(label))
        nodes = compact_orbit_roots(rs)
        assert sorted(sigma[i] for i in nodes) == nodes
        for i in nodes:
            assert flag_dimension(rs, sigma[i]) == flag_dimension(rs, i)
