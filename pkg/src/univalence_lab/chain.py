"""The subordination chain L(z, t), its transfer functions, the PDE
residual probe, and a winding-number subordination check.

L is evaluated in the factored form

    L(z, t) = z [e^{-a t g} B(e^{-a t} z)
               + (e^{m a t g} - e^{-a t g}) h(e^{-a t} z)]^{1/g}

where B(w) = g int_0^1 s^{g-1} h(s w) ds is the operator bracket; the
factoring is valid because Log(e^{-a t} z) = -a t + Log z for positive
real scalings.  One fixed [0, 1] quadrature rule therefore serves every
(z, t)."""

import cmath
import math
from dataclasses import dataclass

import numpy as np

from . import oracle
from .branchpow import principal_power
from .errors import (
    DegeneratePointError,
    DomainError,
    HypothesisViolation,
    InconclusiveError,
    TransferPoleError,
)
from .operator import QuadratureConfig, _integrand_matrix, operator_grid
from .series import catalog_build, criterion_terms

_IDENTITY = catalog_build("identity")

FD_STEP_Z = 1e-5
FD_STEP_T = 1e-4
T_CLAMP = 1e-3


@dataclass(frozen=True)
class ChainPoint:
    z: complex
    t: float
    L: complex
    G: complex
    w: complex
    p: complex


def _h_at(p, f, g, phi, zeta):
    """h(zeta) with continuity tracked along the ray 0 -> zeta."""
    if zeta == 0:
        return 1.0 + 0.0j, False
    ray = np.linspace(0.0, 1.0, 33)[1:, None] * np.array([[zeta]])
    h, crossing = _integrand_matrix(p, f, g, phi, ray)
    return complex(h[-1, 0]), bool(crossing[0])


def chain_eval(z, t, p, f, g=None, phi=None, q=None):
    """L(z, t); reduces to the integral operator at t = 0."""
    g = g or _IDENTITY
    phi = phi or _IDENTITY
    q = q or QuadratureConfig()
    z = complex(z)
    t = float(t)
    if t < 0:
        raise DomainError("t must be >= 0")
    if abs(z) > 1.0 or (abs(z) >= 1.0 and t <= 0):
        raise DomainError("need |z| < 1, or |z| <= 1 with t > 0")
    if p.gamma.real <= 0:
        raise HypothesisViolation("chain evaluation requires Re gamma > 0")
    if z == 0:
        return 0.0 + 0.0j
    zeta = math.exp(-p.a * t) * z
    _, brackets, _, _ = operator_grid(np.array([zeta]), p, f, g, phi, q)
    B = complex(brackets[0])
    h, _ = _h_at(p, f, g, phi, zeta)
    atg = p.a * t * p.gamma
    inner = cmath.exp(-atg) * B + (cmath.exp(p.m * atg) - cmath.exp(-atg)) * h
    return z * principal_power(inner, 1.0 / p.gamma)


def transfer_functions(z, t, p, f, g=None, phi=None):
    """(G, w, p) of the chain at (z, t).

    G collects the criterion bracket at zeta = e^{-a t} z scaled by
    (1 - e^{-(m+1) a t gamma}) / gamma; w is the Moebius transfer
    [(1+a)G + 1 - ma] / [(1-a)G + 1 + ma] and p = (1+w)/(1-w)."""
    g = g or _IDENTITY
    phi = phi or _IDENTITY
    z = complex(z)
    t = float(t)
    zeta = math.exp(-p.a * t) * z
    pre, lr = criterion_terms(f, g, phi, zeta)
    bracket = p.alpha * pre + p.beta * lr
    G = bracket / p.gamma * (1.0 - cmath.exp(-(p.m + 1.0) * p.a * t * p.gamma))
    return _transfer_from_G(G, p.m, p.a)


def _transfer_from_G(G, m, a):
    num = (1.0 + a) * G + 1.0 - m * a
    den = (1.0 - a) * G + 1.0 + m * a
    if den == 0:
        raise TransferPoleError(f"transfer denominator vanished at G = {G}")
    w = num / den
    if w == 1.0:
        raise TransferPoleError("w = 1: p is undefined")
    return G, w, (1.0 + w) / (1.0 - w)


def chain_point(z, t, p, f, g=None, phi=None, q=None):
    L = chain_eval(z, t, p, f, g, phi, q)
    G, w, pval = transfer_functions(z, t, p, f, g, phi)
    return ChainPoint(complex(z), float(t), L, G, w, pval)


def pde_residual(z, t, p, f, g=None, phi=None, q=None):
    """Relative residual of z dL/dz = p(z,t) dL/dt by central differences.

    t below T_CLAMP is evaluated at T_CLAMP (one-sided guard at the t = 0
    boundary)."""
    z = complex(z)
    t = max(float(t), T_CLAMP)
    if not 0.0 < abs(z) < 1.0:
        raise DomainError("need 0 < |z| < 1")
    hz = FD_STEP_Z
    ht = FD_STEP_T

    def L(zz, tt):
        return chain_eval(zz, tt, p, f, g, phi, q)

    dx = (L(z + hz, t) - L(z - hz, t)) / (2.0 * hz)
    dy = (L(z + 1j * hz, t) - L(z - 1j * hz, t)) / (2.0 * hz)
    Lz = 0.5 * (dx + dy / 1j)
    Lt = (L(z, t + ht) - L(z, t - ht)) / (2.0 * ht)
    _, _, pval = transfer_functions(z, t, p, f, g, phi)
    lhs = z * Lz
    rhs = pval * Lt
    if abs(lhs) < 1e-14 and abs(rhs) < 1e-14:
        raise DegeneratePointError(f"both derivative magnitudes < 1e-14 at ({z}, {t})")
    return abs(lhs - rhs) / (abs(lhs) + abs(rhs))


def subordination_probe(t, s, rho, p, f, g=None, phi=None, q=None, samples=64):
    """Check L(., t)(half-radius points) lies inside the curve L(rho e^{i.}, s).

    Sampling-based: each test point must have winding number exactly 1
    with respect to the image curve at time s; curves too close to a test
    point raise InconclusiveError rather than guessing."""
    if not 0.0 <= t <= s:
        raise DomainError("need 0 <= t <= s")
    if not 0.0 < rho < 1.0:
        raise DomainError("need 0 < rho < 1")
    angles = np.linspace(0.0, 2.0 * np.pi, samples, endpoint=False)
    pts = np.array(
        [chain_eval(0.5 * rho * cmath.exp(1j * a), t, p, f, g, phi, q) for a in angles]
    )
    n_curve = 256
    while True:
        thetas = np.linspace(0.0, 2.0 * np.pi, n_curve + 1)
        curve = np.array(
            [chain_eval(rho * cmath.exp(1j * th), s, p, f, g, phi, q) for th in thetas]
        )
        curve[-1] = curve[0]
        try:
            windings = oracle.winding_numbers(curve, pts, min_dist=1e-10)
            break
        except InconclusiveError:
            if n_curve >= 4096:
                raise
            n_curve *= 2
    return bool(np.all(windings == 1))
