"""Quasiconformal extension machinery: the piecewise Becker extension of
the chain, sampled Beltrami coefficients, and the extension-constant
algebra that turns a strengthened criterion constant k and chain speed a
into the final quasiconformality constant l.

For a != 1 the constant is

    l = [(1-a)^2 + k |1-a^2|] / [|1-a^2| + k (1-a)^2]

and l = k at a = 1 (the sharpest case, hence the default a = 1)."""

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .chain import chain_eval
from .errors import DegeneratePointError, DomainError
from .operator import operator_eval

SEAM_CLAMP = 1e-6


@dataclass(frozen=True)
class ExtensionConstants:
    k: float
    a: float
    L1: float
    L2: float
    curlyL1: float
    curlyL2: float
    l: float

    def to_json(self):
        def enc(x):
            return x if math.isfinite(x) else None

        return {
            "k": self.k,
            "a": self.a,
            "L1": enc(self.L1),
            "L2": enc(self.L2),
            "curlyL1": enc(self.curlyL1),
            "curlyL2": enc(self.curlyL2),
            "l": self.l,
        }


@dataclass(frozen=True)
class BeltramiSample:
    z: complex
    mu: complex

    @property
    def modulus(self):
        return abs(self.mu)


def extension_constants(k, a):
    """Roots of the two containment inequalities and the final l.

    At a = 1 the quadratics degenerate and l = k directly; at k = 0 the
    curly pair divides by k, so (0, -inf) sentinels are returned."""
    k = float(k)
    a = float(a)
    if not 0.0 <= k < 1.0:
        raise DomainError("k must lie in [0, 1)")
    if not a > 0.0:
        raise DomainError("a must be > 0")
    if a == 1.0:
        return ExtensionConstants(k, a, k, -math.inf, k, -math.inf, k)
    A = abs(1.0 - a * a)
    denom = A + k * (1.0 - a) ** 2
    L1 = ((1.0 - a) ** 2 + k * A) / denom
    L2 = -((1.0 + a) ** 2 + k * A) / denom
    if k == 0.0:
        cl1, cl2 = 0.0, -math.inf
    else:
        root = math.sqrt(4.0 * a * a + (1.0 - a * a) ** 2 * k * k)
        cl1 = (-2.0 * a + root) / (k * (1.0 - a) ** 2)
        cl2 = (-2.0 * a - root) / (k * (1.0 - a) ** 2)
    return ExtensionConstants(k, a, L1, L2, cl1, cl2, L1)


def disk_containment_check(k, a, l, m=1.0, tol=1e-12):
    """Containment of the criterion disk in the transfer disk.

    The criterion disk has center (m-1)/2 and radius k(m+1)/2; the
    transfer disk (in the same bracket variable) has center
    [a(1+l^2)(m-1) + (1-l^2)(m a^2 - 1)] / D and radius 2 a l (1+m) / D
    with D = 2a(1+l^2) + (1-l^2)(1+a^2).  Returns (contained, slack)."""
    if not 0.0 <= l < 1.0:
        raise DomainError("l must lie in [0, 1)")
    D = 2.0 * a * (1.0 + l * l) + (1.0 - l * l) * (1.0 + a * a)
    if D <= 0.0:
        raise DomainError("degenerate denominator in the transfer disk")
    center = (a * (1.0 + l * l) * (m - 1.0) + (1.0 - l * l) * (m * a * a - 1.0)) / D
    radius = 2.0 * a * l * (1.0 + m) / D
    dist = abs(center - (m - 1.0) / 2.0)
    slack = radius - dist - k * (m + 1.0) / 2.0
    return slack >= -tol, slack


def becker_extend(z, p, f, g=None, phi=None, q=None):
    """Piecewise extension: the operator inside the disk, the chain along
    the boundary ray outside (t = log|z|, clamped just above 0 at the
    seam)."""
    z = complex(z)
    if abs(z) < 1.0:
        return operator_eval(z, p, f, g, phi, q).value
    t = max(math.log(abs(z)), SEAM_CLAMP)
    return chain_eval(z / abs(z), t, p, f, g, phi, q)


def beltrami_estimate(z, p, f, g=None, phi=None, q=None, h=1e-5):
    """Sampled Beltrami coefficient of the extension at |z| > 1 + 2h.

    Wirtinger derivatives from the same central-difference stencil:
    d_z = (d_x - i d_y)/2, d_zbar = (d_x + i d_y)/2."""
    z = complex(z)
    if abs(z) <= 1.0 + 2.0 * h:
        raise DomainError(f"need |z| > 1 + 2h = {1.0 + 2.0 * h}")

    def F(zz):
        return becker_extend(zz, p, f, g, phi, q)

    dx = (F(z + h) - F(z - h)) / (2.0 * h)
    dy = (F(z + 1j * h) - F(z - 1j * h)) / (2.0 * h)
    dz = 0.5 * (dx - 1j * dy)
    dzbar = 0.5 * (dx + 1j * dy)
    if abs(dz) < 1e-12:
        raise DegeneratePointError(f"|d_z F| < 1e-12 at z = {z}")
    return BeltramiSample(z, dzbar / dz)


def beltrami_ring(p, f, g=None, phi=None, q=None, radii=(1.05, 1.3, 1.6, 2.0), n_theta=8, h=1e-5):
    """Beltrami samples on a ring grid outside the unit circle."""
    samples = []
    for r in radii:
        for th in np.linspace(0.0, 2.0 * np.pi, n_theta, endpoint=False):
            samples.append(beltrami_estimate(r * cmath.exp(1j * th), p, f, g, phi, q, h))
    return samples
