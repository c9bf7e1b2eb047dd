"""
Tests for the dynamical r-matrix, the CDYBE residual and the loop projections
"""
import numpy as np
import pytest

from ellfun import EllipticContext, rho, sigma
from errors import InputError, PoleProximityError
from rmatrix import (
    DynamicalPoint,
    LaurentElement,
    R_operator,
    TensorOperator,
    antisymmetry_residual,
    build_sl_rep,
    casimir,
    cdybe_residual,
    cdybe_sweep,
    dyn_derivative,
    felder_r,
    finite_difference_derivative,
    leg_embed,
    parse_algebra,
    projection_check,
    residue_at_zero,
    sample_dynamical_point,
    sample_spectral_points,
    scaled,
    split_loop_element,
    swap_operator,
)


@pytest.fixture
def ctx():
    return EllipticContext(1j)


@pytest.fixture
def sl2():
    return build_sl_rep(2)


@pytest.fixture
def sl3():
    return build_sl_rep(3)


@pytest.fixture
def rng():
    return np.random.default_rng(11)


class TestRepresentation:
    @pytest.mark.parametrize("n", [2, 3, 4])
    def test_cartan_basis_is_orthonormal(self, n):
        rep = build_sl_rep(n)
        gram = np.array([[rep.form_pairing(a, b) for b in rep.cartan_basis] for a in rep.cartan_basis])
        assert np.allclose(gram, np.eye(n - 1))
        assert all(abs(np.trace(x)) < 1e-14 for x in rep.cartan_basis)

    @pytest.mark.parametrize("n", [2, 3])
    def test_casimir_is_swap_minus_trace_part(self, n):
        rep = build_sl_rep(n)
        expected = swap_operator(n) - np.eye(n * n) / n
        assert np.allclose(casimir(rep), expected)

    def test_parse_algebra(self):
        assert parse_algebra("sl3").dim_V == 3
        assert parse_algebra("sln:4").rank == 3
        with pytest.raises(InputError):
            parse_algebra("so3")
        with pytest.raises(InputError):
            parse_algebra("slx")
        with pytest.raises(InputError):
            build_sl_rep(1)


class TestTensorOperator:
    def test_leg_embed_matches_kron(self, rng):
        a = rng.normal(size=(2, 2))
        b = rng.normal(size=(2, 2))
        op = TensorOperator(2, np.kron(a, b))
        identity = np.eye(2)
        assert np.allclose(leg_embed(op, (1, 2)).matrix, np.kron(np.kron(a, b), identity))
        assert np.allclose(leg_embed(op, (1, 3)).matrix, np.kron(np.kron(a, identity), b))
        assert np.allclose(leg_embed(op, (3, 1)).matrix, np.kron(np.kron(b, identity), a))
        assert np.allclose(leg_embed(op, (2, 3)).matrix, np.kron(identity, np.kron(a, b)))

    def test_leg_embed_two_factors_swaps(self, rng):
        a = rng.normal(size=(3, 3))
        b = rng.normal(size=(3, 3))
        embedded = leg_embed(TensorOperator(2, np.kron(a, b)), (2, 1), n_factors=2)
        assert np.allclose(embedded.matrix, np.kron(b, a))

    @pytest.mark.parametrize("legs", [(1, 1), (0, 2), (2, 4)])
    def test_bad_legs(self, legs):
        with pytest.raises(InputError):
            leg_embed(TensorOperator(2, np.eye(4)), legs)

    def test_partial_trace(self, rng):
        a = rng.normal(size=(2, 2))
        b = rng.normal(size=(2, 2))
        op = TensorOperator(2, np.kron(a, b))
        assert np.allclose(op.partial_trace(2).matrix, a * np.trace(b))
        assert np.allclose(op.partial_trace(1).matrix, b * np.trace(a))


class TestFelderR:
    def test_sl2_entries(self, sl2, ctx):
        lam = DynamicalPoint.from_diagonal(sl2, [0.2 + 0.15j, -0.2 - 0.15j])
        z = 0.17 + 0.09j
        r = felder_r(sl2, ctx, lam, z).matrix
        w = sl2.root_pairings(lam)[0]
        assert r[0, 0] == pytest.approx(rho(ctx, z) / 2)
        assert r[1, 2] == pytest.approx(sigma(ctx, -w, z))
        assert r[2, 1] == pytest.approx(sigma(ctx, w, z))

    def test_wall_is_refused(self, sl2, ctx):
        lam = DynamicalPoint.from_diagonal(sl2, [0.0, 0.0])
        with pytest.raises(PoleProximityError):
            felder_r(sl2, ctx, lam, 0.2)

    @pytest.mark.parametrize("n", [2, 3])
    def test_antisymmetry(self, n, ctx, rng):
        rep = build_sl_rep(n)
        for _ in range(50):
            lam = sample_dynamical_point(rep, ctx, rng)
            z = complex(rng.uniform(-0.4, 0.4), rng.uniform(-0.4, 0.4))
            if ctx.lattice_distance(z) < 0.05:
                continue
            assert antisymmetry_residual(rep, ctx, lam, z) <= 1e-10

    @pytest.mark.parametrize("n", [2, 3])
    def test_residue_at_zero_is_casimir(self, n, ctx, rng):
        rep = build_sl_rep(n)
        lam = sample_dynamical_point(rep, ctx, rng)
        assert np.max(np.abs(residue_at_zero(rep, ctx, lam) - casimir(rep))) <= 1e-6


class TestDynamicalDerivative:
    @pytest.mark.parametrize("n", [2, 3])
    def test_matches_finite_differences(self, n, ctx, rng):
        rep = build_sl_rep(n)
        lam = sample_dynamical_point(rep, ctx, rng)
        z = 0.21 - 0.13j
        for i in range(rep.rank):
            analytic = dyn_derivative(rep, ctx, lam, z, i).matrix
            numeric = finite_difference_derivative(rep, ctx, lam, z, i).matrix
            assert np.linalg.norm(analytic - numeric) <= 1e-4 * np.linalg.norm(analytic)

    def test_index_out_of_range(self, sl2, ctx, rng):
        lam = sample_dynamical_point(sl2, ctx, rng)
        with pytest.raises(InputError):
            dyn_derivative(sl2, ctx, lam, 0.2, 1)


class TestCDYBE:
    def test_single_point(self, sl2, ctx, rng):
        lam = sample_dynamical_point(sl2, ctx, rng)
        z1, z2, z3 = sample_spectral_points(ctx, rng)
        residual = cdybe_residual(sl2, ctx, lam, z1, z2, z3)
        assert residual.convention_a <= 1e-6
        assert residual.best_convention == "a"

    @pytest.mark.parametrize("algebra", ["sl2", "sl3"])
    def test_sweep_passes(self, algebra):
        report = cdybe_sweep(parse_algebra(algebra), EllipticContext(0.3 + 0.8j), samples=20, seed=1)
        assert report["pass"] is True
        assert report["selected_convention"] == "a"
        assert report["convention_a_max_residual"] <= 1e-6
        assert report["convention_b_max_residual"] > 1e-3
        assert report["derivative_max_relative_error"] <= 1e-4

    @pytest.mark.parametrize("n", [6, 8])
    def test_sampler_scales_past_sl5(self, n, ctx, rng):
        rep = build_sl_rep(n)
        for _ in range(10):
            lam = sample_dynamical_point(rep, ctx, rng)
            fractions = np.abs(rep.root_pairings(lam).imag) / ctx.tau.imag
            assert np.all(fractions >= 0.2 / (n - 1) - 1e-12)
            assert np.all(fractions <= 0.4 + 1e-12)
            lam.check_walls(rep, ctx)

    def test_samples_are_off_the_walls(self, sl3, ctx, rng):
        for _ in range(20):
            lam = sample_dynamical_point(sl3, ctx, rng)
            fractions = np.abs(sl3.root_pairings(lam).imag) / ctx.tau.imag
            assert np.all(fractions >= 0.1 - 1e-12)
            assert np.all(fractions <= 0.4 + 1e-12)


class TestLoopProjections:
    def test_holomorphic_element_is_reproduced(self, sl2, ctx, rng):
        lam = sample_dynamical_point(sl2, ctx, rng)
        f = scaled(lambda z: 1 + z + z**3, sl2.root_vectors[0].positive)
        points = np.array([0.05, -0.03 + 0.04j])
        parts = split_loop_element(sl2, ctx, lam, f)
        assert np.allclose(parts.plus(points), f(points), atol=1e-9)
        assert np.allclose(parts.zero(points), 0, atol=1e-9)
        assert np.allclose(parts.minus(points), 0, atol=1e-9)

    def test_R_on_holomorphic_element(self, sl2, ctx, rng):
        lam = sample_dynamical_point(sl2, ctx, rng)
        f = scaled(lambda z: z**2, sl2.cartan_basis[0])
        points = np.array([0.07 + 0.01j])
        assert np.allclose(R_operator(sl2, ctx, lam, f, points), 0.5 * f(points), atol=1e-9)

    def test_pole_at_origin_goes_to_zero_and_minus_parts(self, sl2, ctx, rng):
        lam = sample_dynamical_point(sl2, ctx, rng)
        f = scaled(lambda z: 1 / z, sl2.cartan_basis[0])
        points = np.array([0.06 - 0.02j])
        parts = split_loop_element(sl2, ctx, lam, f)
        total = parts.plus(points) + parts.zero(points) + parts.minus(points)
        assert np.allclose(total, f(points), atol=1e-9)
        assert np.allclose(parts.zero(points), rho(ctx, points[0]) * sl2.cartan_basis[0], atol=1e-9)

    def test_laurent_element_shape(self, sl3, rng):
        f = LaurentElement.random(sl3, rng)
        assert f(np.array([0.1, 0.2j])).shape == (2, 3, 3)

    @pytest.mark.parametrize("algebra", ["sl2", "sl3"])
    def test_projection_check_passes(self, algebra, ctx):
        report = projection_check(parse_algebra(algebra), ctx, seed=0)
        assert report["pass"] is True, report["absolute_residuals"]
