"""
Elliptic special functions on C / (Z + tau Z) and divisor arithmetic.

theta1(z) = 2 sum_{n>=0} (-1)^n q^{(n+1/2)^2} sin((2n+1) pi z),  q = exp(i pi tau)

so that theta1(z + 1) = -theta1(z) and
theta1(z + tau) = -exp(-i pi tau - 2 pi i z) theta1(z).

sigma_w(z) = theta1(w - z) theta1'(0) / (theta1(z) theta1(w)) and
rho(z) = theta1'(z) / theta1(z). Every evaluator accepts scalars or numpy arrays.
"""
import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property

import numpy as np

from config import (
    CONTOUR_NODES,
    POLE_THRESHOLD,
    THETA_MAX_TERMS,
    THETA_TOLERANCE,
)
from errors import ContourError, InputError, PoleProximityError, SeriesCapError

logger = logging.getLogger(__name__)

# Points closer than this (in the lattice metric) are treated as equal
POINT_TOLERANCE = 1e-9


def _as_array(z):
    return np.asarray(z, dtype=complex)


def _restore(result, z):
    if np.ndim(z) == 0:
        return complex(result)
    return result


@dataclass(frozen=True)
class EllipticContext:
    tau: complex
    truncation_tolerance: float = THETA_TOLERANCE
    max_terms: int = THETA_MAX_TERMS
    pole_threshold: float = POLE_THRESHOLD

    def __post_init__(self):
        tau = complex(self.tau)
        if not tau.imag > 0:
            raise InputError(f"tau must lie in the upper half-plane, got {tau}")
        if self.truncation_tolerance <= 0:
            raise InputError("truncation_tolerance must be positive")
        if self.max_terms < 1:
            raise InputError("max_terms must be at least 1")
        object.__setattr__(self, "tau", tau)

    @cached_property
    def nome(self):
        return np.exp(1j * np.pi * self.tau)

    @cached_property
    def theta1_prime_zero(self):
        return complex(theta1_derivative(self, 0.0, order=1))

    @cached_property
    def shortest_period(self):
        """Length of the shortest nonzero lattice vector"""
        candidates = [
            abs(m + n * self.tau)
            for m in range(-3, 4)
            for n in range(-3, 4)
            if (m, n) != (0, 0)
        ]
        return min(candidates)

    def lattice_coords(self, z):
        """Real (a, b) with z = a + b tau"""
        z = _as_array(z)
        b = z.imag / self.tau.imag
        a = z.real - b * self.tau.real
        return a, b

    def from_lattice(self, a, b):
        return _restore(np.asarray(a, dtype=float) + np.asarray(b, dtype=float) * self.tau, a)

    def reduce(self, z):
        """Representative in {a + b tau : 0 <= a, b < 1}"""
        a, b = self.lattice_coords(z)
        a = np.mod(a, 1.0)
        b = np.mod(b, 1.0)
        a = np.where(np.abs(a - 1.0) < POINT_TOLERANCE, 0.0, a)
        b = np.where(np.abs(b - 1.0) < POINT_TOLERANCE, 0.0, b)
        a = np.where(np.abs(a) < POINT_TOLERANCE, 0.0, a)
        b = np.where(np.abs(b) < POINT_TOLERANCE, 0.0, b)
        return _restore(a + b * self.tau, z)

    def lattice_distance(self, z):
        """Distance from z to the nearest lattice point m + n tau"""
        a, b = self.lattice_coords(z)
        a0 = np.floor(a)
        b0 = np.floor(b)
        best = None
        for da in (-1.0, 0.0, 1.0, 2.0):
            for db in (-1.0, 0.0, 1.0, 2.0):
                d = np.abs(_as_array(z) - ((a0 + da) + (b0 + db) * self.tau))
                best = d if best is None else np.minimum(best, d)
        return best if np.ndim(z) else float(best)

    def same_point(self, z1, z2, tol=POINT_TOLERANCE):
        return self.lattice_distance(complex(z1) - complex(z2)) <= tol

    def _check_off_lattice(self, z, what):
        distance = self.lattice_distance(z)
        if np.any(np.asarray(distance) < self.pole_threshold):
            raise PoleProximityError(
                f"{what} within {self.pole_threshold:g} of a lattice point (tau={self.tau})"
            )


def _theta_series(ctx, z, order):
    z = _as_array(z)
    q = ctx.nome
    abs_q = abs(q)
    max_im = float(np.max(np.abs(z.imag))) if z.size else 0.0
    total = np.zeros_like(z)
    largest_bound = 0.0
    previous_bound = math.inf

    for n in range(ctx.max_terms):
        k = 2 * n + 1
        # log of the bound 2 |q|^{(n+1/2)^2} (k pi)^order cosh(k pi Im z)
        log_bound = (
            math.log(2.0)
            + (n + 0.5) ** 2 * math.log(abs_q)
            + order * math.log(k * math.pi)
            + k * math.pi * max_im
        )
        bound = math.exp(min(log_bound, 700.0))
        if n > 0 and bound < previous_bound and bound < ctx.truncation_tolerance * largest_bound:
            return total

        coefficient = 2.0 * (-1) ** n * q ** ((n + 0.5) ** 2)
        phase = k * np.pi * z
        if order == 0:
            term = np.sin(phase)
        elif order == 1:
            term = (k * np.pi) * np.cos(phase)
        else:
            term = -((k * np.pi) ** 2) * np.sin(phase)
        total = total + coefficient * term

        largest_bound = max(largest_bound, bound)
        previous_bound = bound

    logger.error(
        f"theta1 series cap of {ctx.max_terms} terms exceeded (tau={ctx.tau}, |Im z|<={max_im:.3g})"
    )
    raise SeriesCapError(
        f"theta1 series did not converge within {ctx.max_terms} terms; Im(tau) too small for the tolerance"
    )


def theta1(ctx, z):
    """Odd Jacobi theta function with a single zero at the lattice points."""
    return _restore(_theta_series(ctx, z, 0), z)


def theta1_derivative(ctx, z, order=1):
    """Termwise derivative of theta1, order 1 or 2."""
    if order not in (1, 2):
        raise InputError(f"theta1_derivative supports order 1 or 2, got {order}")
    return _restore(_theta_series(ctx, z, order), z)


def sigma(ctx, w, z):
    """sigma_w(z): simple pole with residue 1 at z = 0, zero at z = w."""
    w_arr = _as_array(w)
    z_arr = _as_array(z)
    ctx._check_off_lattice(w_arr, "sigma parameter w")
    ctx._check_off_lattice(z_arr, "sigma argument z")
    value = (
        theta1(ctx, w_arr - z_arr)
        * ctx.theta1_prime_zero
        / (theta1(ctx, z_arr) * theta1(ctx, w_arr))
    )
    if np.ndim(w) == 0 and np.ndim(z) == 0:
        return complex(value)
    return value


def sigma_w_derivative(ctx, w, z):
    """d sigma_w(z) / dw, regular at z = w."""
    w_arr = _as_array(w)
    z_arr = _as_array(z)
    ctx._check_off_lattice(w_arr, "sigma parameter w")
    ctx._check_off_lattice(z_arr, "sigma argument z")
    th_w = theta1(ctx, w_arr)
    numerator = (
        theta1_derivative(ctx, w_arr - z_arr) * th_w
        - theta1(ctx, w_arr - z_arr) * theta1_derivative(ctx, w_arr)
    )
    value = ctx.theta1_prime_zero * numerator / (theta1(ctx, z_arr) * th_w**2)
    if np.ndim(w) == 0 and np.ndim(z) == 0:
        return complex(value)
    return value


def rho(ctx, z):
    """Logarithmic derivative theta1'/theta1."""
    z_arr = _as_array(z)
    ctx._check_off_lattice(z_arr, "rho argument")
    value = theta1_derivative(ctx, z_arr) / theta1(ctx, z_arr)
    return _restore(value, z)


def _evaluate(f, points):
    try:
        values = np.asarray(f(points), dtype=complex)
        if values.ndim >= 1 and values.shape[0] == points.shape[0]:
            return values
    except (TypeError, ValueError):
        pass
    return np.asarray([f(p) for p in points], dtype=complex)


def contour_residue(ctx, f, center=0.0, radius=0.1, nodes=CONTOUR_NODES):
    """(1/2 pi i) times the integral of f over the circle |z - center| = radius.

    f may return scalars or arrays per point (e.g. matrix-valued loop elements);
    the trapezoidal rule is spectrally accurate for integrands analytic near the circle.
    """
    if radius <= 0 or nodes < 2:
        raise InputError("contour radius must be positive and nodes >= 2")
    if radius >= 0.5 * ctx.shortest_period:
        raise InputError(
            f"contour radius {radius} must stay below half the shortest period "
            f"({0.5 * ctx.shortest_period:.4f})"
        )
    offsets = radius * np.exp(2j * np.pi * np.arange(nodes) / nodes)
    points = complex(center) + offsets
    values = _evaluate(f, points)
    if not np.all(np.isfinite(values)):
        raise ContourError(f"non-finite samples on the contour |z - {center}| = {radius}")
    weights = offsets.reshape((nodes,) + (1,) * (values.ndim - 1))
    result = np.mean(values * weights, axis=0)
    return complex(result) if np.ndim(result) == 0 else result


@dataclass(frozen=True)
class EllipticDivisor:
    """Finite formal sum of points; points are reduced representatives."""

    entries: tuple = ()

    @classmethod
    def from_points(cls, ctx, entries):
        merged = []
        for point, multiplicity in entries:
            multiplicity = Fraction(multiplicity)
            point = ctx.reduce(complex(point))
            for k, (existing, m) in enumerate(merged):
                if ctx.same_point(existing, point):
                    merged[k] = (existing, m + multiplicity)
                    break
            else:
                merged.append((point, multiplicity))
        return cls(tuple((p, m) for p, m in merged if m != 0))

    @property
    def degree(self):
        return sum((m for _, m in self.entries), Fraction(0))

    def is_integral(self):
        return all(m.denominator == 1 for _, m in self.entries)

    def is_effective(self):
        return all(m >= 0 for _, m in self.entries)

    def multiplicity_at(self, ctx, point):
        return sum(
            (m for p, m in self.entries if ctx.same_point(p, point)), Fraction(0)
        )

    def add(self, ctx, other):
        return EllipticDivisor.from_points(ctx, list(self.entries) + list(other.entries))

    def __neg__(self):
        return EllipticDivisor(tuple((p, -m) for p, m in self.entries))

    def to_dict(self, ctx):
        items = []
        for point, m in self.entries:
            a, b = ctx.lattice_coords(point)
            items.append(
                {
                    "z": [point.real, point.imag],
                    "lattice": [float(a), float(b)],
                    "multiplicity": int(m) if m.denominator == 1 else str(m),
                }
            )
        return {"degree": str(self.degree) if self.degree.denominator != 1 else int(self.degree), "points": items}


def abel_sum(ctx, divisor):
    """Sum of multiplicity * point in the curve group, reduced to the fundamental domain."""
    if not divisor.is_integral():
        raise InputError("Abel sums need integral multiplicities")
    total = sum((int(m) * complex(p) for p, m in divisor.entries), 0j)
    return ctx.reduce(total)


def linearly_equivalent(ctx, d1, d2, tol=1e-9):
    """Equal degree and equal Abel sums modulo the period lattice."""
    if d1.degree != d2.degree:
        return False
    difference = abel_sum(ctx, d1) - abel_sum(ctx, d2)
    return ctx.lattice_distance(difference) <= tol


def division_points(ctx, target, n):
    """All n^2 solutions x of n * x = target in the curve group."""
    if n < 1:
        raise InputError("division degree must be positive")
    solutions = []
    for m in range(n):
        for k in range(n):
            solutions.append(ctx.reduce((complex(target) + m + k * ctx.tau) / n))
    return solutions


def _sample_points(ctx, rng, count, margin=0.05):
    points = []
    while len(points) < count:
        a, b = rng.uniform(0.0, 1.0, size=2)
        z = complex(a + b * ctx.tau)
        if ctx.lattice_distance(z) >= margin:
            points.append(z)
    return np.array(points)


def periodicity_check(ctx, samples=100, seed=0, tol=1e-10):
    """Functional equations, oddness, residues and derivative oracle at seeded random points."""
    rng = np.random.default_rng(seed)
    z = _sample_points(ctx, rng, samples)
    w = _sample_points(ctx, rng, samples)
    keep = np.asarray(ctx.lattice_distance(z - w)) >= 0.05
    z_sigma, w_sigma = z[keep], w[keep]
    tau = ctx.tau

    def worst(values, scale=1.0):
        """(absolute, relative) maximum; relative divides by max(1, |scale|)"""
        values = np.abs(values)
        return float(np.max(values)), float(np.max(values / np.maximum(1.0, np.abs(scale))))

    th = theta1(ctx, z)
    th_tau = theta1(ctx, z + tau)
    sg = sigma(ctx, w_sigma, z_sigma)
    rh = rho(ctx, z)
    checks = {
        "theta1_shift_1": worst(theta1(ctx, z + 1) + th, th),
        # the shifted value grows like exp(2 pi Im z)
        "theta1_shift_tau": worst(
            th_tau + np.exp(-1j * np.pi * tau - 2j * np.pi * z) * th, th_tau
        ),
        "theta1_odd": worst(theta1(ctx, -z) + th, th),
        "sigma_shift_1": worst(sigma(ctx, w_sigma, z_sigma + 1) - sg, sg),
        "sigma_shift_tau": worst(
            sigma(ctx, w_sigma, z_sigma + tau) - np.exp(2j * np.pi * w_sigma) * sg, sg
        ),
        "sigma_odd": worst(sigma(ctx, w_sigma, -z_sigma) + sigma(ctx, -w_sigma, z_sigma), sg),
        "rho_shift_1": worst(rho(ctx, z + 1) - rh, rh),
        "rho_shift_tau": worst(rho(ctx, z + tau) - rh + 2j * np.pi, rh),
        "rho_odd": worst(rho(ctx, -z) + rh, rh),
    }
    absolute = {name: pair[0] for name, pair in checks.items()}
    relative = {name: pair[1] for name, pair in checks.items()}

    w0 = complex(w_sigma[0])
    residue_errors = {
        "sigma_residue": abs(contour_residue(ctx, lambda p: sigma(ctx, w0, p), 0.0, 0.1) - 1.0),
        "rho_residue": abs(contour_residue(ctx, lambda p: rho(ctx, p), 0.0, 0.1) - 1.0),
    }

    step = 1e-5
    z0 = 0.3 + 0.1j
    numeric = (theta1(ctx, z0 + step) - theta1(ctx, z0 - step)) / (2 * step)
    analytic = theta1_derivative(ctx, z0)
    derivative_error = abs(numeric - analytic) / abs(analytic)

    passed = (
        max(relative.values()) <= tol
        and max(residue_errors.values()) <= 1e-8
        and derivative_error <= 1e-6
    )
    logger.info(f"Elliptic function check tau={tau}: {'pass' if passed else 'FAIL'}")
    return {
        "tau": [tau.real, tau.imag],
        "samples": samples,
        "seed": seed,
        "relative_residuals": relative,
        "absolute_residuals": absolute,
        "residue_absolute_errors": residue_errors,
        "derivative_relative_error": derivative_error,
        "pass": bool(passed),
    }
