"""Weighted atomic measure spaces and the Lp primitives built on them.

Every domain here is a finite list of atoms with strictly positive weights,
so integrals are finite sums and each norm identity can be checked to
floating point accuracy. Translation follows the space geometry: cyclic
spaces wrap around (finite abelian groups, componentwise for products),
interval spaces shift and drop whatever leaves the domain, which amounts
to extending functions by zero.
"""

import math
from dataclasses import dataclass

import numpy as np

CYCLIC = "cyclic"
INTERVAL = "interval"

PROBABILITY = "probability"
COUNTING = "counting"

_GEOMETRIES = (CYCLIC, INTERVAL)
_NORMALIZATIONS = (PROBABILITY, COUNTING)


def _normalized_weights(n, normalization):
    if normalization not in _NORMALIZATIONS:
        raise ValueError(f"normalization (={normalization!r}) must be one of {_NORMALIZATIONS}")
    if normalization == PROBABILITY:
        return np.full(n, 1.0 / n)
    return np.ones(n)


@dataclass(frozen=True, eq=False)
class MeasureSpace:
    """A finite family of weighted atoms together with a translation rule.

    Atoms are indexed 0..size-1. ``factors`` marks a product group
    Z_n1 x ... x Z_nk laid out in row-major order; translation then acts
    componentwise. Instances are immutable and safe to share.
    """

    weights: np.ndarray
    geometry: str = CYCLIC
    factors: tuple = None
    label: str = ""

    def __post_init__(self):
        w = np.array(self.weights, dtype=float, copy=True)
        if w.ndim != 1 or w.size == 0:
            raise ValueError("weights must form a non-empty 1-d sequence")
        if not np.all(np.isfinite(w)) or np.any(w <= 0.0):
            raise ValueError("every atom weight must be finite and > 0")
        w.setflags(write=False)
        object.__setattr__(self, "weights", w)
        if self.geometry not in _GEOMETRIES:
            raise ValueError(f"geometry (={self.geometry!r}) must be one of {_GEOMETRIES}")
        if self.factors is not None:
            fac = tuple(int(k) for k in self.factors)
            if any(k <= 0 for k in fac):
                raise ValueError("group factors must be positive integers")
            if math.prod(fac) != w.size:
                raise ValueError(
                    f"product of factors {fac} must equal the atom count {w.size}")
            if self.geometry != CYCLIC:
                raise ValueError("factored (product group) spaces must be cyclic")
            object.__setattr__(self, "factors", fac)

    # ------------------------------------------------------------------
    # constructors

    @classmethod
    def cyclic(cls, n, normalization=PROBABILITY, label=""):
        """Z_n with uniform weights (1/n for probability, 1 for counting)."""
        return cls(_normalized_weights(n, normalization), CYCLIC, None, label or f"Z_{n}")

    @classmethod
    def interval(cls, n, normalization=PROBABILITY, label=""):
        """n atoms on a line segment; translations clip at the ends."""
        return cls(_normalized_weights(n, normalization), INTERVAL, None, label)

    @classmethod
    def counting(cls, n, label=""):
        """Index set {0..n-1} with counting measure, for sequence norms."""
        return cls(np.ones(n), INTERVAL, None, label or f"J_{n}")

    @classmethod
    def product(cls, factors, normalization=PROBABILITY, label=""):
        """Product group Z_n1 x ... x Z_nk, flattened row-major."""
        fac = tuple(int(k) for k in factors)
        n = math.prod(fac)
        name = label or "x".join(f"Z_{k}" for k in fac)
        return cls(_normalized_weights(n, normalization), CYCLIC, fac, name)

    # ------------------------------------------------------------------
    # basic queries

    @property
    def size(self):
        return int(self.weights.size)

    @property
    def points(self):
        return np.arange(self.size)

    @property
    def total_mass(self):
        return float(np.sum(self.weights))

    @property
    def is_probability(self):
        return abs(self.total_mass - 1.0) <= 1e-12

    @property
    def is_counting(self):
        return bool(np.all(self.weights == 1.0))

    def uniform_weight(self):
        """The common atom weight; raises when the weights are not uniform."""
        w0 = float(self.weights[0])
        if not np.all(self.weights == w0):
            raise ValueError("space does not carry uniform atom weights")
        return w0

    # ------------------------------------------------------------------
    # translation

    def _decompose(self, index):
        digits = []
        rem = int(index)
        for k in reversed(self.factors):
            digits.append(rem % k)
            rem //= k
        return tuple(reversed(digits))

    def translate_index(self, index, shift):
        """Index of atom ``index`` shifted by ``shift``; None when clipped away."""
        n = self.size
        if not 0 <= index < n:
            raise ValueError(f"index (={index}) out of range for {n} atoms")
        if self.geometry == CYCLIC:
            if self.factors is None:
                return (index + shift) % n
            out = 0
            for a, b, k in zip(self._decompose(index), self._decompose(shift), self.factors):
                out = out * k + (a + b) % k
            return out
        t = index + shift
        return t if 0 <= t < n else None

    def negate_index(self, index):
        """Group inverse of ``index`` on a cyclic space."""
        if self.geometry != CYCLIC:
            raise ValueError("group inverses need a cyclic space")
        if self.factors is None:
            return (-index) % self.size
        out = 0
        for a, k in zip(self._decompose(index), self.factors):
            out = out * k + (-a) % k
        return out

    def translate_points(self, members, shift):
        """Translate a set of atom indices, dropping clipped ones."""
        out = []
        for m in members:
            t = self.translate_index(int(m), shift)
            if t is not None:
                out.append(t)
        return tuple(sorted(out))


@dataclass(frozen=True, eq=False)
class SampledFunction:
    """One real or complex value per atom of a measure space."""

    space: MeasureSpace
    values: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.values)
        if np.iscomplexobj(v):
            v = np.array(v, dtype=complex, copy=True)
        else:
            v = np.array(v, dtype=float, copy=True)
        if v.shape != (self.space.size,):
            raise ValueError(
                f"values have shape {v.shape}, expected ({self.space.size},)")
        if not np.all(np.isfinite(v)):
            raise ValueError("function values must all be finite")
        v.setflags(write=False)
        object.__setattr__(self, "values", v)

    @classmethod
    def constant(cls, space, value):
        return cls(space, np.full(space.size, value))

    @classmethod
    def zero(cls, space):
        return cls(space, np.zeros(space.size))

    @classmethod
    def indicator(cls, space, members):
        vals = np.zeros(space.size)
        for m in members:
            vals[int(m)] = 1.0
        return cls(space, vals)

    def abs_values(self):
        return np.abs(self.values)

    def restricted(self, members):
        """Pointwise product with the indicator of ``members``."""
        mask = np.zeros(self.space.size, dtype=bool)
        for m in members:
            mask[int(m)] = True
        return SampledFunction(self.space, np.where(mask, self.values, 0.0))

    def translated(self, shift):
        """(T_s f)(x) = f(x - s); zero extension on interval spaces."""
        sp = self.space
        out = np.zeros_like(self.values)
        if sp.geometry == CYCLIC:
            neg = sp.negate_index(shift % sp.size if sp.factors is None else shift)
            for x in range(sp.size):
                out[x] = self.values[sp.translate_index(x, neg)]
        else:
            for x in range(sp.size):
                src = x - shift
                if 0 <= src < sp.size:
                    out[x] = self.values[src]
        return SampledFunction(sp, out)

    def pointwise_mul(self, other):
        if other.space is not self.space and not (
                np.array_equal(other.space.weights, self.space.weights)
                and other.space.geometry == self.space.geometry):
            raise ValueError("pointwise product needs functions on the same space")
        return SampledFunction(self.space, self.values * other.values)

    def scaled(self, c):
        return SampledFunction(self.space, c * self.values)

    def __add__(self, other):
        return SampledFunction(self.space, self.values + other.values)

    def __sub__(self, other):
        return SampledFunction(self.space, self.values - other.values)


@dataclass(frozen=True)
class GrandExponent:
    """Exponent pair (p, theta) with p > 1 and theta >= 0.

    The associated epsilon range is the half-open interval (0, p - 1];
    theta = 0 switches the epsilon weight off entirely.
    """

    p: float
    theta: float

    def __post_init__(self):
        p = float(self.p)
        theta = float(self.theta)
        if not math.isfinite(p) or p <= 1.0:
            raise ValueError(f"p (={p}) must be finite and > 1")
        if not math.isfinite(theta) or theta < 0.0:
            raise ValueError(f"theta (={theta}) must be finite and >= 0")
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "theta", theta)

    @property
    def eps_max(self):
        return self.p - 1.0


def _weighted_r_norm(abs_vals, weights, r):
    """(sum_i w_i a_i^r)^(1/r) for a fixed finite exponent r >= 1."""
    s = float(np.dot(weights, abs_vals ** r))
    return s ** (1.0 / r)


def lp_norm(f, r):
    """Weighted Lp norm of a sampled function.

    ``r`` may be any finite exponent >= 1 or ``math.inf`` for the sup norm;
    anything below 1 is rejected because it no longer gives a norm.
    """
    if r == math.inf:
        return float(np.max(f.abs_values()))
    r = float(r)
    if not math.isfinite(r) or r < 1.0:
        raise ValueError(f"r (={r}) must be >= 1 (math.inf for the sup norm)")
    return _weighted_r_norm(f.abs_values(), f.space.weights, r)


def grand_factor(eps, exp):
    """The epsilon weight eps^(theta/(p-eps)) applied to the L^(p-eps) norm."""
    eps = float(eps)
    if not 0.0 < eps <= exp.eps_max:
        raise ValueError(
            f"eps (={eps}) must lie in (0, {exp.eps_max}] for p = {exp.p}")
    return eps ** (exp.theta / (exp.p - eps))


@dataclass(frozen=True, eq=False)
class EpsilonGrid:
    """Strictly increasing evaluation points for the epsilon supremum.

    ``include_zero_limit`` adds the eps -> 0 boundary value as an extra
    candidate (the supremum runs over an interval that is open at zero);
    ``refinement_rounds`` scales how long the golden-section polish around
    the best grid points may run, and ``relative_tolerance`` is its
    bracket-width stopping criterion.
    """

    eps_values: np.ndarray
    include_zero_limit: bool = True
    refinement_rounds: int = 4
    relative_tolerance: float = 1e-9

    def __post_init__(self):
        eps = np.array(self.eps_values, dtype=float, copy=True)
        if eps.ndim != 1 or eps.size == 0:
            raise ValueError("eps_values must form a non-empty 1-d sequence")
        if not np.all(np.isfinite(eps)) or eps[0] <= 0.0:
            raise ValueError("every grid eps must be finite and > 0")
        if np.any(np.diff(eps) <= 0.0):
            raise ValueError("eps_values must be strictly increasing")
        eps.setflags(write=False)
        object.__setattr__(self, "eps_values", eps)
        if int(self.refinement_rounds) < 0:
            raise ValueError("refinement_rounds must be >= 0")
        object.__setattr__(self, "refinement_rounds", int(self.refinement_rounds))
        if not self.relative_tolerance > 0.0:
            raise ValueError("relative_tolerance must be > 0")

    @property
    def eps_min(self):
        return float(self.eps_values[0])

    @property
    def eps_max(self):
        return float(self.eps_values[-1])

    def matches(self, exp):
        """Whether this grid covers the epsilon range of ``exp`` exactly."""
        return self.eps_max == exp.eps_max


def make_epsilon_grid(exp, points=64, min_eps=None, refinement_rounds=4,
                      tol=1e-9, include_zero_limit=True):
    """Geometric epsilon grid from ``min_eps`` up to p - 1 inclusive.

    The default lower end sits at 1e-6 * (p - 1), six decades below the
    top; any supremum taken over the grid is later refined near its best
    points, so a coarse geometric ladder is enough here.
    """
    if points < 2:
        raise ValueError(f"points (={points}) must be >= 2")
    hi = exp.eps_max
    if min_eps is None:
        min_eps = 1e-6 * hi
    min_eps = float(min_eps)
    if not 0.0 < min_eps < hi:
        raise ValueError(f"min_eps (={min_eps}) must lie in (0, {hi})")
    eps = np.geomspace(min_eps, hi, points)
    eps[0] = min_eps
    eps[-1] = hi
    return EpsilonGrid(eps, include_zero_limit, refinement_rounds, tol)
