"""Normalized analytic functions on the unit disk as truncated power series.

A series f(z) = z + c_2 z^2 + ... + c_N z^N stores c_1..c_N with c_1 = 1
(the class-A normalization f(0) = 0, f'(0) = 1).  Derivatives are exact
series operations; the log-derivative terms z h'(z)/h(z) needed by the
criteria are evaluated through the quotient of the cofactor series
S(z) = h(z)/z, which removes the forced zero at the origin.
"""

import math
import warnings
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .errors import DerivativeVanishes, DomainError, HypothesisViolation, TruncationWarning

TRUNCATION_TOL = 1e-12
SMALL_Z = 1e-8
DEFAULT_DEGREE = 64


@dataclass(frozen=True, eq=False)
class SeriesFunction:
    """Truncated power series of a class-A function; coefficients c_1..c_N.

    Equality compares coefficients only (labels are cosmetic).  `truncated`
    marks series that cut off an infinite expansion (Koebe, exponential);
    only those carry a meaningful tail bound and can warn."""

    coefficients: np.ndarray
    label: str = ""
    truncated: bool = False

    def __eq__(self, other):
        if not isinstance(other, SeriesFunction):
            return NotImplemented
        return self.coefficients.shape == other.coefficients.shape and bool(
            np.all(self.coefficients == other.coefficients)
        )

    def __hash__(self):
        return hash(self.coefficients.tobytes())

    def __post_init__(self):
        c = np.atleast_1d(np.asarray(self.coefficients, dtype=np.complex128))
        if c.ndim != 1 or c.size < 1:
            raise ValueError("coefficients must be a nonempty 1-d sequence")
        if not np.all(np.isfinite(c)):
            raise ValueError("coefficients must be finite")
        if c[0] != 1.0:
            raise ValueError("c1 must equal 1 (class-A normalization)")
        c.setflags(write=False)
        object.__setattr__(self, "coefficients", c)

    @property
    def degree(self):
        return int(self.coefficients.size)

    def tail_bound(self, radius):
        """|c_N| * r^N, the crude truncation estimate at |z| = r."""
        n = self.degree
        return abs(self.coefficients[-1]) * radius**n

    def to_json(self):
        return [[c.real, c.imag] for c in self.coefficients]


def _warn_if_truncated(s, radius):
    if s.truncated and s.tail_bound(radius) > TRUNCATION_TOL:
        warnings.warn(
            f"series {s.label or '<unnamed>'}: tail bound "
            f"{s.tail_bound(radius):.3g} exceeds {TRUNCATION_TOL:g} at |z|={radius:.4g}",
            TruncationWarning,
            stacklevel=3,
        )


def eval_with_derivatives(s, z):
    """(s(z), s'(z), s''(z)) in one Horner pass.  Requires |z| <= 1."""
    z = complex(z)
    if abs(z) > 1.0 + 1e-15:
        raise DomainError(f"|z| = {abs(z):.6g} > 1")
    _warn_if_truncated(s, abs(z))
    p, dp, ddp = _kernels.polyval012(s.coefficients, np.array([z]))
    return complex(p[0]), complex(dp[0]), complex(ddp[0])


def eval_many(s, z):
    """Vectorized (s, s', s'') on an array of points with |z| <= 1."""
    z = np.asarray(z, dtype=np.complex128)
    r = np.abs(z)
    if r.size and r.max() > 1.0 + 1e-15:
        raise DomainError(f"max |z| = {r.max():.6g} > 1")
    if r.size:
        _warn_if_truncated(s, float(r.max()))
    p, dp, ddp = _kernels.polyval012(s.coefficients, z)
    return p.reshape(z.shape), dp.reshape(z.shape), ddp.reshape(z.shape)


def cofactor_values(s, z):
    """S(z) = s(z)/z = c_1 + c_2 z + ..., finite and = 1 at z = 0."""
    z = np.asarray(z, dtype=np.complex128)
    return _kernels.polyval(s.coefficients, z).reshape(z.shape)


def log_derivative(s, z):
    """z s'(z) / s(z), with the removable singularity at 0 filled in.

    For |z| > SMALL_Z the direct quotient s'(z) z / s(z) is used; below
    that, the series quotient D(z)/S(z) with D = s' and S = s/z, which
    tends to 1 as z -> 0 for any class-A series.
    """
    z = np.asarray(z, dtype=np.complex128)
    p, dp, _ = _kernels.polyval012(s.coefficients, z)
    p = p.reshape(z.shape)
    dp = dp.reshape(z.shape)
    small = np.abs(z) <= SMALL_Z
    out = np.empty_like(p)
    if np.any(~small):
        denom = p[~small]
        if np.any(np.abs(denom) == 0.0):
            bad = z[~small][np.abs(denom) == 0.0][0]
            raise HypothesisViolation(
                f"series {s.label or '<unnamed>'} vanishes at z = {bad}", witness=complex(bad)
            )
        out[~small] = dp[~small] * z[~small] / denom
    if np.any(small):
        sz = z[small]
        svals = _kernels.polyval(s.coefficients, sz).reshape(sz.shape)
        out[small] = dp[small] / svals
    return out


def criterion_terms(f, g, phi, z):
    """The two building blocks of the criteria at a point.

    Returns (z f''(z)/f'(z), z g'(z)/g(z) - z phi'(z)/phi(z)); both are 0
    at z = 0 (removable singularities of the class-A normalization).
    """
    z = complex(z)
    _, fp, fpp = eval_with_derivatives(f, z)
    if abs(fp) < 1e-13:
        raise DerivativeVanishes(f"f'(z) = 0 at z = {z}", witness=z)
    pre_schwarzian = z * fpp / fp
    zarr = np.array([z])
    log_ratio = complex(log_derivative(g, zarr)[0] - log_derivative(phi, zarr)[0])
    if z == 0:
        return 0.0 + 0.0j, 0.0 + 0.0j
    return pre_schwarzian, log_ratio


_CATALOG = ("identity", "quadratic", "koebe", "expscaled")


def catalog_build(name, params=None):
    """Build a catalog series: identity, quadratic z + c z^2, truncated
    Koebe z/(1-z)^2, or scaled exponential (e^{lam z} - 1)/lam."""
    params = dict(params or {})
    degree = int(params.pop("degree", DEFAULT_DEGREE))
    if degree < 1:
        raise ValueError("degree must be >= 1")
    if name == "identity":
        coeffs = np.array([1.0 + 0.0j])
    elif name == "quadratic":
        c = complex(params.pop("c", 0.0))
        if abs(c) > 0.5:
            raise ValueError(f"quadratic coefficient |c| = {abs(c)} > 0.5")
        coeffs = np.array([1.0, c], dtype=np.complex128)
    elif name == "koebe":
        coeffs = np.arange(1, degree + 1, dtype=np.complex128)
        if params:
            raise ValueError(f"unexpected parameters for {name!r}: {sorted(params)}")
        return SeriesFunction(coeffs, label=name, truncated=True)
    elif name == "expscaled":
        lam = complex(params.pop("lam", 1.0))
        if abs(lam) > 4.0:
            raise ValueError(f"|lam| = {abs(lam)} > 4")
        n = np.arange(1, degree + 1)
        coeffs = lam ** (n - 1) / np.array([math.factorial(int(k)) for k in n])
        if params:
            raise ValueError(f"unexpected parameters for {name!r}: {sorted(params)}")
        return SeriesFunction(coeffs, label=name, truncated=True)
    else:
        raise ValueError(f"unknown catalog function {name!r}; choose from {_CATALOG}")
    if params:
        raise ValueError(f"unexpected parameters for {name!r}: {sorted(params)}")
    return SeriesFunction(coeffs, label=name)


def nonvanishing_check(s, radius, grid, floor=1e-9):
    """Sample |s(z)/z| on the grid up to `radius`; evidence, not proof.

    Returns (True, None) if all samples stay above `floor`, otherwise
    (False, witness).
    """
    if not 0.0 < radius < 1.0:
        raise ValueError("radius must lie in (0, 1)")
    radii = np.asarray([r for r in grid.radii if r <= radius])
    if radii.size == 0:
        radii = np.array([radius])
    theta = np.linspace(0.0, 2.0 * np.pi, grid.angles_per_radius, endpoint=False)
    z = (radii[:, None] * np.exp(1j * theta)[None, :]).ravel()
    vals = np.abs(cofactor_values(s, z))
    bad = np.nonzero(vals <= floor)[0]
    if bad.size:
        return False, complex(z[bad[0]])
    return True, None
