"""
Felder's dynamical elliptic r-matrix for sl_n and the projections of loop
algebra elements that it is the kernel of.

    r(lambda, z) = rho(z) sum_k x_k (x) x_k + sum_alpha sigma_{-<alpha,lambda>}(z) e_alpha (x) e_-alpha

The invariant form is the trace form of the defining representation; the
x_k are orthonormal for it and tr(e_alpha e_-alpha) = 1.
"""
import logging
import time
from dataclasses import dataclass, field

import numpy as np

from config import CHECK_TOLERANCE, CONTOUR_NODES, CONTOUR_RADIUS
from ellfun import contour_residue, rho, sigma, sigma_w_derivative
from errors import InputError, PoleProximityError

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class RootVector:
    label: tuple  # (i, j) for the root e_i - e_j
    values: np.ndarray  # alpha(x_k) for each Cartan basis element
    positive: np.ndarray  # e_alpha
    negative: np.ndarray  # e_-alpha


@dataclass(frozen=True, eq=False)
class RMatrixRep:
    algebra_tag: str
    dim_V: int
    cartan_basis: np.ndarray  # shape (r, d, d)
    root_vectors: tuple
    form: str = "trace form of the defining representation"
    _cartan_tensor: np.ndarray = field(default=None, repr=False)
    _root_tensors: np.ndarray = field(default=None, repr=False)
    _root_values: np.ndarray = field(default=None, repr=False)

    def __post_init__(self):
        x = self.cartan_basis
        object.__setattr__(self, "_cartan_tensor", sum(np.kron(xk, xk) for xk in x))
        object.__setattr__(
            self,
            "_root_tensors",
            np.array([np.kron(rv.positive, rv.negative) for rv in self.root_vectors]),
        )
        object.__setattr__(
            self, "_root_values", np.array([rv.values for rv in self.root_vectors])
        )

    @property
    def rank(self):
        return self.cartan_basis.shape[0]

    @property
    def identity(self):
        return np.eye(self.dim_V, dtype=complex)

    def form_pairing(self, a, b):
        return complex(np.trace(a @ b))

    def root_pairings(self, lam):
        """<alpha, lambda> for every root, in the order of root_vectors"""
        return self._root_values @ np.asarray(lam.values, dtype=complex)


def build_sl_rep(n):
    """Defining representation of sl_n with a trace-orthonormal Cartan basis."""
    if n < 2:
        raise InputError("sl_n needs n >= 2")
    cartan = []
    for k in range(1, n):
        diagonal = np.zeros(n)
        diagonal[:k] = 1.0
        diagonal[k] = -float(k)
        cartan.append(np.diag(diagonal / np.sqrt(k * (k + 1))).astype(complex))
    cartan = np.array(cartan)

    roots = []
    for i in range(n):
        for j in range(n):
            if i == j:
                continue
            e_pos = np.zeros((n, n), dtype=complex)
            e_pos[i, j] = 1.0
            e_neg = np.zeros((n, n), dtype=complex)
            e_neg[j, i] = 1.0
            values = np.array([x[i, i] - x[j, j] for x in cartan])
            roots.append(RootVector((i, j), values, e_pos, e_neg))

    logger.debug(f"Built sl_{n} representation with {len(roots)} root vectors")
    return RMatrixRep(f"sl{n}", n, cartan, tuple(roots))


def parse_algebra(tag):
    """"sl2", "sl3" or "sln:N" -> RMatrixRep"""
    tag = str(tag).strip().lower()
    if tag.startswith("sln:"):
        size = tag.split(":", 1)[1]
    elif tag.startswith("sl"):
        size = tag[2:]
    else:
        raise InputError(f"Unsupported algebra {tag!r}; use sl2, sl3 or sln:N")
    if not size.isdigit():
        raise InputError(f"Cannot read the rank of {tag!r}")
    return build_sl_rep(int(size))


@dataclass(frozen=True)
class DynamicalPoint:
    values: np.ndarray  # coordinates against the orthonormal Cartan basis

    @classmethod
    def from_diagonal(cls, rep, mu):
        """lambda from a trace-zero diagonal (mu_1, ..., mu_n)"""
        mu = np.asarray(mu, dtype=complex)
        return cls(np.array([np.sum(np.diag(x) * mu) for x in rep.cartan_basis]))

    def check_walls(self, rep, ctx):
        pairings = rep.root_pairings(self)
        distance = np.asarray(ctx.lattice_distance(pairings))
        if np.any(distance < ctx.pole_threshold):
            raise PoleProximityError(f"lambda lies on a wall: <alpha, lambda> = {pairings}")
        return pairings


@dataclass(frozen=True)
class TensorOperator:
    n_factors: int
    matrix: np.ndarray

    @property
    def dim(self):
        return int(round(self.matrix.shape[0] ** (1.0 / self.n_factors)))

    def partial_trace(self, leg):
        """Trace out one tensor factor (1-based leg)."""
        d = self.dim
        n = self.n_factors
        tensor = self.matrix.reshape((d,) * (2 * n))
        reduced = np.trace(tensor, axis1=leg - 1, axis2=n + leg - 1)
        size = d ** (n - 1)
        return TensorOperator(n - 1, reduced.reshape(size, size))

    def __add__(self, other):
        return TensorOperator(self.n_factors, self.matrix + other.matrix)

    def __sub__(self, other):
        return TensorOperator(self.n_factors, self.matrix - other.matrix)

    def __matmul__(self, other):
        return TensorOperator(self.n_factors, self.matrix @ other.matrix)

    def norm(self):
        return float(np.linalg.norm(self.matrix, 2))


def _r_coefficients(rep, ctx, lam, z):
    pairings = lam.check_walls(rep, ctx)
    z = np.asarray(z, dtype=complex)
    rho_values = np.asarray(rho(ctx, z))
    sigma_values = np.asarray(sigma(ctx, -pairings[None, :], z.reshape(-1, 1)))
    return rho_values.reshape(-1), sigma_values


def felder_r(rep, ctx, lam, z):
    """r(lambda, z) as an operator on V (x) V."""
    rho_values, sigma_values = _r_coefficients(rep, ctx, lam, complex(z))
    matrix = rho_values[0] * rep._cartan_tensor + np.tensordot(
        sigma_values[0], rep._root_tensors, axes=1
    )
    return TensorOperator(2, matrix)


def felder_r_batch(rep, ctx, lam, z):
    """r(lambda, z_k) for an array of z, shape (N, d^2, d^2)."""
    rho_values, sigma_values = _r_coefficients(rep, ctx, lam, z)
    return rho_values[:, None, None] * rep._cartan_tensor[None] + np.tensordot(
        sigma_values, rep._root_tensors, axes=1
    )


def casimir(rep):
    return rep._cartan_tensor + rep._root_tensors.sum(axis=0)


def swap_operator(d):
    swap = np.zeros((d * d, d * d), dtype=complex)
    for i in range(d):
        for j in range(d):
            swap[i * d + j, j * d + i] = 1.0
    return swap


def leg_embed(op, legs, n_factors=3):
    """Embed a two-leg operator so that its first factor acts on legs[0] and its second on legs[1]."""
    matrix = op.matrix if isinstance(op, TensorOperator) else np.asarray(op)
    if n_factors not in (2, 3):
        raise InputError(f"n_factors must be 2 or 3, got {n_factors}")
    i, j = legs
    if i == j or not (1 <= i <= n_factors and 1 <= j <= n_factors):
        raise InputError(f"Bad leg indices {legs} for {n_factors} factors")
    d = int(round(np.sqrt(matrix.shape[0])))
    if d * d != matrix.shape[0]:
        raise InputError("Operator is not on a twofold tensor product")

    full = matrix if n_factors == 2 else np.kron(matrix, np.eye(d))
    spare = [k for k in range(1, n_factors + 1) if k not in legs]
    target = [i - 1, j - 1] + [k - 1 for k in spare]
    axes = [0] * n_factors
    for position, leg in enumerate(target):
        axes[leg] = position
    tensor = full.reshape((d,) * (2 * n_factors))
    permuted = tensor.transpose(axes + [n_factors + a for a in axes])
    size = d**n_factors
    return TensorOperator(n_factors, permuted.reshape(size, size))


def single_leg(rep, x, leg, n_factors=3):
    """x acting on one tensor factor"""
    factors = [rep.identity] * n_factors
    factors[leg - 1] = x
    result = factors[0]
    for factor in factors[1:]:
        result = np.kron(result, factor)
    return result


def dyn_derivative(rep, ctx, lam, z, i):
    """d r(lambda, z) / d lambda_i; only the sigma terms depend on lambda."""
    if not 0 <= i < rep.rank:
        raise InputError(f"Cartan index {i} out of range for {rep.algebra_tag}")
    pairings = lam.check_walls(rep, ctx)
    derivatives = np.asarray(sigma_w_derivative(ctx, -pairings, complex(z)))
    coefficients = -rep._root_values[:, i] * derivatives
    return TensorOperator(2, np.tensordot(coefficients, rep._root_tensors, axes=1))


def finite_difference_derivative(rep, ctx, lam, z, i, step=1e-5):
    """Central-difference oracle for dyn_derivative."""
    shift = np.zeros(rep.rank, dtype=complex)
    shift[i] = step
    upper = felder_r(rep, ctx, DynamicalPoint(lam.values + shift), z).matrix
    lower = felder_r(rep, ctx, DynamicalPoint(lam.values - shift), z).matrix
    return TensorOperator(2, (upper - lower) / (2 * step))


@dataclass(frozen=True)
class CDYBEResidual:
    """Operator norms of CYBE + dyn (convention a) and CYBE - dyn (convention b)."""

    convention_a: float
    convention_b: float

    @property
    def best(self):
        return min(self.convention_a, self.convention_b)

    @property
    def best_convention(self):
        return "a" if self.convention_a <= self.convention_b else "b"


def cdybe_residual(rep, ctx, lam, z1, z2, z3):
    r12 = leg_embed(felder_r(rep, ctx, lam, z1 - z2), (1, 2)).matrix
    r13 = leg_embed(felder_r(rep, ctx, lam, z1 - z3), (1, 3)).matrix
    r23 = leg_embed(felder_r(rep, ctx, lam, z2 - z3), (2, 3)).matrix

    def commutator(a, b):
        return a @ b - b @ a

    cybe = commutator(r12, r13) + commutator(r12, r23) + commutator(r13, r23)

    dynamical = np.zeros_like(cybe)
    for i, x in enumerate(rep.cartan_basis):
        d23 = leg_embed(dyn_derivative(rep, ctx, lam, z2 - z3, i), (2, 3)).matrix
        d31 = leg_embed(dyn_derivative(rep, ctx, lam, z3 - z1, i), (3, 1)).matrix
        d12 = leg_embed(dyn_derivative(rep, ctx, lam, z1 - z2, i), (1, 2)).matrix
        dynamical += single_leg(rep, x, 1) @ d23
        dynamical += single_leg(rep, x, 2) @ d31
        dynamical += single_leg(rep, x, 3) @ d12

    return CDYBEResidual(
        convention_a=float(np.linalg.norm(cybe + dynamical, 2)),
        convention_b=float(np.linalg.norm(cybe - dynamical, 2)),
    )


def antisymmetry_residual(rep, ctx, lam, z):
    """|| r(lambda, z) + P r(lambda, -z) P ||"""
    swap = swap_operator(rep.dim_V)
    forward = felder_r(rep, ctx, lam, z).matrix
    backward = felder_r(rep, ctx, lam, -z).matrix
    return float(np.linalg.norm(forward + swap @ backward @ swap, 2))


def residue_at_zero(rep, ctx, lam, radius=0.1, nodes=CONTOUR_NODES):
    return contour_residue(
        ctx, lambda z: felder_r_batch(rep, ctx, lam, z), 0.0, radius, nodes
    )


# -- sampling -------------------------------------------------------------------


def sample_dynamical_point(rep, ctx, rng):
    """lambda with |Im <alpha, lambda>| / Im tau in [low, 0.4] for every root.

    low is 0.1 up to sl_5; past that the n - 1 gaps no longer fit and it
    shrinks to 0.2 / (n - 1).
    """
    n = rep.dim_V
    high = 0.4 / (n - 1)
    low = 0.1 if high >= 0.1 else high / 2
    gaps = rng.uniform(low, high, size=n - 1)
    imaginary = np.concatenate([[0.0], np.cumsum(gaps)]) * ctx.tau.imag
    rng.shuffle(imaginary)
    real = rng.uniform(0.0, 1.0, size=n)
    mu = real + 1j * imaginary
    mu = mu - mu.mean()
    return DynamicalPoint.from_diagonal(rep, mu)


def sample_spectral_points(ctx, rng, count=3, spread=0.3, separation=0.1, attempts=1000):
    for _ in range(attempts):
        points = rng.uniform(-spread, spread, size=count) + 1j * rng.uniform(-spread, spread, size=count)
        if all(
            ctx.lattice_distance(points[a] - points[b]) >= separation
            for a in range(count)
            for b in range(a + 1, count)
        ):
            return [complex(p) for p in points]
    raise InputError("Could not sample well-separated spectral parameters")


def cdybe_sweep(rep, ctx, samples=20, seed=0, tol=CHECK_TOLERANCE):
    """Maximum CDYBE residual per convention over seeded admissible samples."""
    rng = np.random.default_rng(seed)
    start = time.perf_counter()
    max_a = 0.0
    max_b = 0.0
    max_derivative_error = 0.0
    for _ in range(samples):
        lam = sample_dynamical_point(rep, ctx, rng)
        z1, z2, z3 = sample_spectral_points(ctx, rng)
        residual = cdybe_residual(rep, ctx, lam, z1, z2, z3)
        max_a = max(max_a, residual.convention_a)
        max_b = max(max_b, residual.convention_b)

        analytic = dyn_derivative(rep, ctx, lam, z1 - z2, 0).matrix
        numeric = finite_difference_derivative(rep, ctx, lam, z1 - z2, 0).matrix
        scale = max(np.linalg.norm(analytic), 1e-300)
        max_derivative_error = max(
            max_derivative_error, float(np.linalg.norm(analytic - numeric) / scale)
        )

    convention = "a" if max_a <= max_b else "b"
    passed = min(max_a, max_b) <= tol and max_derivative_error <= 1e-4
    logger.info(
        f"CDYBE sweep {rep.algebra_tag} tau={ctx.tau}: a={max_a:.3e} b={max_b:.3e} "
        f"convention {convention} in {time.perf_counter() - start:.2f}s"
    )
    return {
        "algebra": rep.algebra_tag,
        "tau": [ctx.tau.real, ctx.tau.imag],
        "samples": samples,
        "seed": seed,
        "convention_a_max_residual": max_a,
        "convention_b_max_residual": max_b,
        "selected_convention": convention,
        "derivative_max_relative_error": max_derivative_error,
        "tolerance": tol,
        "pass": bool(passed),
    }


# -- loop algebra projections ----------------------------------------------------


@dataclass(frozen=True)
class LaurentElement:
    """Finite Laurent expansion sum_k z^k A_k with A_k in the Lie algebra"""

    coefficients: dict

    def __call__(self, z):
        z = np.asarray(z, dtype=complex).reshape(-1)
        some = next(iter(self.coefficients.values()))
        result = np.zeros((z.size,) + some.shape, dtype=complex)
        for power, matrix in self.coefficients.items():
            result += (z**power)[:, None, None] * matrix[None]
        return result

    @classmethod
    def random(cls, rep, rng, low=-5, high=5):
        coefficients = {}
        for power in range(low, high + 1):
            h = np.tensordot(rng.normal(size=rep.rank), rep.cartan_basis, axes=1)
            e = sum(
                complex(rng.normal(), rng.normal()) * rv.positive for rv in rep.root_vectors
            )
            coefficients[power] = (h + e) * 0.5 ** abs(power)
        return cls(coefficients)


def scaled(func, matrix):
    """Loop element z -> func(z) * matrix"""

    def element(z):
        z = np.asarray(z, dtype=complex).reshape(-1)
        return np.asarray(func(z)).reshape(-1)[:, None, None] * matrix[None]

    return element


@dataclass(frozen=True)
class LoopSplitting:
    plus: object
    zero: object
    minus: object


class LoopProjector:
    """P_+, P_0, P_- for a fixed dynamical point, evaluated by contour quadrature."""

    def __init__(self, rep, ctx, lam, radius=CONTOUR_RADIUS, nodes=CONTOUR_NODES):
        self.rep = rep
        self.ctx = ctx
        self.lam = lam
        self.radius = radius
        self.nodes = nodes
        self.pairings = lam.check_walls(rep, ctx)
        self._negatives = np.array([rv.negative for rv in rep.root_vectors])
        self._positives = np.array([rv.positive for rv in rep.root_vectors])

    def components(self, values):
        """(Cartan components tr(x_k f), root components tr(e_-alpha f)) of values (N, d, d)"""
        cartan = np.einsum("kab,nba->nk", self.rep.cartan_basis, values)
        roots = np.einsum("kab,nba->nk", self._negatives, values)
        return cartan, roots

    def assemble(self, cartan, roots):
        return np.tensordot(cartan, self.rep.cartan_basis, axes=1) + np.tensordot(
            roots, self._positives, axes=1
        )

    def contour_radius(self, point):
        return max(self.radius, 1.4 * abs(point))

    def plus(self, f, points):
        points = np.asarray(points, dtype=complex).reshape(-1)
        results = []
        for point in points:

            def integrand(z, point=point):
                cartan, roots = self.components(f(z))
                kernel_rho = np.asarray(rho(self.ctx, z - point)).reshape(-1, 1)
                kernel_sigma = np.asarray(
                    sigma(self.ctx, -self.pairings[None, :], (z - point)[:, None])
                )
                return np.concatenate([kernel_rho * cartan, kernel_sigma * roots], axis=1)

            coefficients = contour_residue(
                self.ctx, integrand, 0.0, self.contour_radius(point), self.nodes
            )
            r = self.rep.rank
            results.append(self.assemble(coefficients[None, :r], coefficients[None, r:])[0])
        return np.array(results)

    def zero(self, f, points):
        points = np.asarray(points, dtype=complex).reshape(-1)
        radius = max(self.radius, *(1.4 * abs(p) for p in points)) if points.size else self.radius
        residues = contour_residue(
            self.ctx, lambda z: self.components(f(z))[0], 0.0, radius, self.nodes
        )
        rho_values = np.asarray(rho(self.ctx, points)).reshape(-1)
        return rho_values[:, None, None] * np.tensordot(residues, self.rep.cartan_basis, axes=1)[None]

    def minus(self, f, points):
        return f(points) - self.plus(f, points) - self.zero(f, points)

    def split(self, f):
        return LoopSplitting(
            plus=lambda z: self.plus(f, z),
            zero=lambda z: self.zero(f, z),
            minus=lambda z: self.minus(f, z),
        )

    def R(self, f, points):
        return self.plus(f, points) - 0.5 * f(points)


def split_loop_element(rep, ctx, lam, f, radius=CONTOUR_RADIUS):
    """Evaluators for (P_+ f, P_0 f, P_- f)."""
    return LoopProjector(rep, ctx, lam, radius).split(f)


def R_operator(rep, ctx, lam, f, points, radius=CONTOUR_RADIUS):
    """R f = P_+ f - f / 2 at the given points."""
    return LoopProjector(rep, ctx, lam, radius).R(f, points)


def skew_pairing(ctx, f, g, radius=0.15, nodes=CONTOUR_NODES):
    """(1/2 pi i) contour integral of tr(f(z) g(z))"""
    return contour_residue(
        ctx,
        lambda z: np.einsum("nab,nba->n", f(z), g(z)),
        0.0,
        radius,
        nodes,
    )


def projection_check(rep, ctx, seed=0, radius=CONTOUR_RADIUS, tol=1e-7):
    """Kernel examples, idempotence of P_+ and skew-adjointness of R on seeded inputs."""
    rng = np.random.default_rng(seed)
    start = time.perf_counter()
    lam = sample_dynamical_point(rep, ctx, rng)
    projector = LoopProjector(rep, ctx, lam, radius)
    test_points = np.array([0.1, 0.05 + 0.07j, -0.08 + 0.02j])
    h = rep.cartan_basis[0]

    holomorphic = scaled(lambda z: z**2, h)
    reproduce = float(np.max(np.abs(projector.plus(holomorphic, test_points) - holomorphic(test_points))))

    rho_element = scaled(lambda z: rho(ctx, z), h)
    annihilate_rho = float(np.max(np.abs(projector.plus(rho_element, test_points))))

    root = rep.root_vectors[0]
    w = rep.root_pairings(lam)[0]
    sigma_element = scaled(lambda z: sigma(ctx, -w, z), root.negative)
    _, root_parts = projector.components(projector.plus(sigma_element, test_points))
    annihilate_sigma = float(np.max(np.abs(root_parts)))

    f = LaurentElement.random(rep, rng)
    g = LaurentElement.random(rep, rng)
    once = projector.plus(f, test_points)
    twice = projector.plus(lambda z: projector.plus(f, z), test_points)
    idempotence = float(np.max(np.abs(twice - once)))

    pairing_radius = 0.6 * radius
    skew = abs(
        skew_pairing(ctx, lambda z: projector.R(f, z), g, pairing_radius)
        + skew_pairing(ctx, f, lambda z: projector.R(g, z), pairing_radius)
    )
    splitting = projector.split(f)
    decomposition = float(
        np.max(
            np.abs(
                splitting.plus(test_points)
                + splitting.zero(test_points)
                + splitting.minus(test_points)
                - f(test_points)
            )
        )
    )

    results = {
        "reproduce_holomorphic": reproduce,
        "annihilate_rho": annihilate_rho,
        "annihilate_sigma": annihilate_sigma,
        "idempotence": idempotence,
        "skew_adjointness": float(skew),
        "decomposition": decomposition,
    }
    passed = (
        max(reproduce, annihilate_rho, annihilate_sigma, float(skew)) <= 1e-8
        and idempotence <= tol
        and decomposition <= 1e-8
    )
    logger.info(
        f"Projection check {rep.algebra_tag} tau={ctx.tau} finished in {time.perf_counter() - start:.2f}s"
    )
    return {
        "algebra": rep.algebra_tag,
        "tau": [ctx.tau.real, ctx.tau.imag],
        "seed": seed,
        "absolute_residuals": results,
        "pass": bool(passed),
    }
