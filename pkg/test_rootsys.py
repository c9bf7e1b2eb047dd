"""
Unit tests for exact root systems
"""
from fractions import Fraction

import numpy as np
import pytest

from errors import InputError, LatticeError
from rootsys import (
    SO4_TYPE,
    BasisTag,
    CartanType,
    LatticeVector,
    build_root_system,
    cartan_type_from,
    coweight_quotient_invariants,
    dominant_representative,
    dot,
    first_axis_coweight,
    orthogonal_type,
    pair,
    standard_weights,
    weyl_orbit,
)

ROOT_COUNTS = {
    ("A", 1): 2,
    ("A", 3): 12,
    ("B", 3): 18,
    ("C", 3): 18,
    ("D", 4): 24,
    ("E", 6): 72,
    ("E", 7): 126,
    ("E", 8): 240,
    ("F", 4): 48,
    ("G", 2): 12,
}


class TestCartanType:
    def test_parse_label(self):
        t = CartanType.parse("e6")
        assert t == CartanType("E", 6)
        assert t.label == "E6"

    @pytest.mark.parametrize(
        "family,rank", [("E", 5), ("E", 9), ("F", 3), ("G", 3), ("B", 1), ("D", 2), ("X", 2), ("A", 0)]
    )
    def test_invalid_types_rejected(self, family, rank):
        with pytest.raises(InputError):
            CartanType(family, rank)

    def test_unparseable_label(self):
        with pytest.raises(InputError):
            CartanType.parse("E")

    def test_simply_laced(self):
        assert CartanType("D", 4).is_simply_laced
        assert not CartanType("F", 4).is_simply_laced


class TestBuildRootSystem:
    @pytest.mark.parametrize("key,count", ROOT_COUNTS.items())
    def test_root_count(self, key, count):
        rs = build_root_system(CartanType(*key))
        assert len(rs.roots) == count
        assert len(rs.positive_roots) == count // 2

    def test_roots_closed_under_negation(self):
        rs = build_root_system(CartanType("E", 6))
        for beta in rs.roots:
            assert tuple(-a for a in beta) in rs.roots

    def test_cartan_matrix_g2(self):
        rs = build_root_system(CartanType("G", 2))
        assert rs.cartan_matrix[0][1] * rs.cartan_matrix[1][0] == 3
        assert rs.cartan_matrix[0][0] == 2 and rs.cartan_matrix[1][1] == 2

    def test_fundamental_weights_dual_to_coroots(self):
        rs = build_root_system(CartanType("B", 3))
        for i, lam in enumerate(rs.fundamental_weights):
            for j in range(rs.rank):
                assert dot(lam, rs.simple_coroot(j)) == (1 if i == j else 0)

    def test_fundamental_coweights_dual_to_roots(self):
        rs = build_root_system(CartanType("C", 3))
        for i, cow in enumerate(rs.fundamental_coweights):
            for j, alpha in enumerate(rs.simple_roots):
                assert dot(cow, alpha) == (1 if i == j else 0)

    def test_weyl_vector_is_half_positive_sum(self):
        rs = build_root_system(CartanType("F", 4))
        half = tuple(Fraction(0) for _ in range(rs.ambient_dim))
        for beta in rs.positive_roots:
            half = tuple(a + b / 2 for a, b in zip(half, beta))
        assert rs.weyl_vector == half

    @pytest.mark.parametrize(
        "key,coefficients",
        [
            (("B", 3), (1, 2, 2)),
            (("C", 3), (2, 2, 1)),
            (("D", 4), (1, 2, 1, 1)),
            (("E", 8), (2, 3, 4, 6, 5, 4, 3, 2)),
            (("G", 2), (3, 2)),
        ],
    )
    def test_highest_root_coefficients(self, key, coefficients):
        rs = build_root_system(CartanType(*key))
        assert rs.root_coefficients(rs.highest_root) == coefficients

    def test_not_a_cartan_type(self):
        with pytest.raises(InputError):
            build_root_system("E6")


class TestBasisConversions:
    def test_coweight_round_trip(self):
        rs = build_root_system(CartanType("D", 4))
        v = LatticeVector((1, 0, "1/2", 0), BasisTag.FUNDAMENTAL_COWEIGHT)
        back = rs.to_basis(LatticeVector(rs.to_ambient(v)), BasisTag.FUNDAMENTAL_COWEIGHT)
        assert back == v

    def test_central_vector_has_no_weight_coordinates(self):
        rs = build_root_system(CartanType("A", 2))
        with pytest.raises(LatticeError):
            rs.to_basis(LatticeVector((1, 1, 1)), BasisTag.FUNDAMENTAL_WEIGHT)

    def test_wrong_length(self):
        rs = build_root_system(CartanType("A", 2))
        with pytest.raises(LatticeError):
            rs.to_ambient(LatticeVector((1, 0), BasisTag.AMBIENT))

    def test_float_coordinates_refused(self):
        with pytest.raises(InputError):
            LatticeVector((0.5, 1))

    def test_node_out_of_range(self):
        rs = build_root_system(CartanType("A", 2))
        with pytest.raises(InputError):
            rs.fundamental_coweight(3)

    def test_pair_checks_argument_kinds(self):
        rs = build_root_system(CartanType("A", 2))
        with pytest.raises(LatticeError):
            pair(rs, rs.fundamental_coweight(1), rs.fundamental_coweight(1))
        assert pair(rs, rs.fundamental_weight(1), rs.fundamental_coweight(1)) == Fraction(2, 3)


class TestWeylOrbit:
    def test_minuscule_orbit_sizes(self):
        rs = build_root_system(CartanType("E", 6))
        assert len(weyl_orbit(rs, rs.fundamental_coweight(1))) == 27
        rs = build_root_system(CartanType("D", 4))
        assert len(weyl_orbit(rs, rs.fundamental_coweight(4))) == 8

    def test_orbit_keeps_basis(self):
        rs = build_root_system(CartanType("A", 3))
        orbit = weyl_orbit(rs, rs.fundamental_coweight(2))
        assert len(orbit) == 6
        assert all(v.basis == BasisTag.FUNDAMENTAL_COWEIGHT for v in orbit)

    def test_dominant_representative(self):
        rs = build_root_system(CartanType("A", 2))
        v = LatticeVector((0, 0, -1))
        assert dominant_representative(rs, v) == LatticeVector((0, 0, -1))
        assert dominant_representative(rs, LatticeVector((-1, 0, 0))) == LatticeVector((0, 0, -1))
        assert rs.is_dominant(rs.to_ambient(dominant_representative(rs, LatticeVector((0, 1, 0)))))


class TestStandardWeights:
    def test_type_a_weights(self):
        rs = build_root_system(CartanType("A", 3))
        assert len(standard_weights(rs)) == 4

    def test_type_b_has_zero_weight(self):
        rs = build_root_system(CartanType("B", 2))
        weights = standard_weights(rs)
        assert len(weights) == 5
        assert any(w.is_zero() for w in weights)

    def test_exceptional_types_refused(self):
        with pytest.raises(InputError):
            standard_weights(build_root_system(CartanType("E", 6)))


class TestCoweightQuotient:
    @pytest.mark.parametrize(
        "key,invariants",
        [(("A", 3), [4]), (("D", 4), [2, 2]), (("D", 5), [4]), (("E", 6), [3]), (("E", 8), []), (("B", 3), [2])],
    )
    def test_invariant_factors(self, key, invariants):
        rs = build_root_system(CartanType(*key))
        assert coweight_quotient_invariants(rs) == invariants


class TestSO4Type:
    def test_orthogonal_type(self):
        assert orthogonal_type(2) is SO4_TYPE
        assert orthogonal_type(4) == CartanType("D", 4)
        with pytest.raises(InputError):
            orthogonal_type(1)

    def test_roots_are_two_orthogonal_pairs(self):
        rs = build_root_system(SO4_TYPE)
        assert rs.roots == {
            (Fraction(a), Fraction(b)) for a, b in [(1, -1), (-1, 1), (1, 1), (-1, -1)]
        }
        assert rs.cartan_matrix == ((2, 0), (0, 2))

    def test_first_axis_differs_from_first_coweight(self):
        so4 = build_root_system(SO4_TYPE)
        assert so4.to_ambient(so4.fundamental_coweight(1)) == (Fraction(1, 2), Fraction(-1, 2))
        assert first_axis_coweight(so4).coordinates == (1, 0)
        d5 = build_root_system(CartanType("D", 5))
        assert d5.to_ambient(d5.fundamental_coweight(1)) == first_axis_coweight(d5).coordinates

    def test_parsed_from_label(self):
        assert cartan_type_from("A1xA1", 2) is SO4_TYPE
        assert cartan_type_from("d", 4) == CartanType("D", 4)
        with pytest.raises(InputError):
            cartan_type_from("D", 2)


def random_vector(rng, rs, basis, bound=3):
    return LatticeVector(tuple(int(x) for x in rng.integers(-bound, bound + 1, size=rs.rank)), basis)


class TestWeylGroupProperties:
    @pytest.mark.parametrize("key", [("A", 3), ("B", 3), ("C", 3), ("D", 4), ("G", 2)])
    def test_orbit_idempotent(self, key):
        rs = build_root_system(CartanType(*key))
        rng = np.random.default_rng(5)
        for _ in range(3):
            orbit = weyl_orbit(rs, random_vector(rng, rs, BasisTag.FUNDAMENTAL_COWEIGHT, bound=1))
            members = sorted(orbit, key=lambda v: v.coordinates)
            for member in members[:: max(1, len(members) // 6)]:
                assert weyl_orbit(rs, member) == orbit
            assert sum(rs.is_dominant(rs.to_ambient(v)) for v in orbit) == 1

    @pytest.mark.parametrize("key", [("A", 5), ("B", 4), ("C", 4), ("D", 5), ("E", 6), ("E", 8), ("F", 4), ("G", 2)])
    def test_simple_reflections_preserve_roots(self, key):
        rs = build_root_system(CartanType(*key))
        for i in range(rs.rank):
            assert {rs.reflect(beta, i) for beta in rs.roots} == rs.roots
