"""Point evaluation and disk sup-scan of the Becker-type criteria.

Five variants are supported:

  thm31  |(1-|z|^{(m+1)g})/g [a zf''/f' + b (zg'/g - zphi'/phi)] - (m-1)/2| <= (m+1)/2
  thm32  (1-|z|^{(m+1)Re g})/Re g |a zf''/f' + b (zg'/g - zphi'/phi)|      <= 1
  cor31  thm31 with b = a, g = id, phi = f
  cor32  (1-|z|^{2 Re g})/Re g |zf''/f'|                                   <= 1
  thm41  the thm31 expression against the strengthened bound k (m+1)/2

A PASS is sampling-based evidence (sup over a grid plus local refinement),
not a proof; reports carry the grid metadata and any truncation warnings.
"""

import cmath
import math
import warnings
from dataclasses import dataclass, field

import numpy as np

from .errors import DerivativeVanishes, HypothesisViolation, TruncationWarning
from .series import catalog_build, eval_many, log_derivative, nonvanishing_check

VARIANTS = ("thm31", "thm32", "cor31", "cor32", "thm41")
STRICTNESS_TOL = 1e-12

_IDENTITY = catalog_build("identity")


@dataclass(frozen=True)
class ParameterSet:
    """(alpha, beta, gamma, m, a, k) governing criterion, chain, extension.

    k = 1 is the "univalence only" sentinel; thm41 requires k < 1.
    """

    alpha: complex = 1.0
    beta: complex = 0.0
    gamma: complex = 1.0
    m: float = 1.0
    a: float = 1.0
    k: float = 1.0

    def __post_init__(self):
        object.__setattr__(self, "alpha", complex(self.alpha))
        object.__setattr__(self, "beta", complex(self.beta))
        object.__setattr__(self, "gamma", complex(self.gamma))
        if self.gamma == 0:
            raise ValueError("gamma must be nonzero")
        if not self.m >= 0:
            raise ValueError("m must be >= 0")
        if not self.a > 0:
            raise ValueError("a must be > 0")
        if not 0.0 <= self.k <= 1.0:
            raise ValueError("k must lie in [0, 1]")


@dataclass(frozen=True)
class DiskGrid:
    """Polar sampling of the disk; radii concentrate toward the boundary."""

    radii: tuple = tuple(1.0 - 2.0 ** (-j) for j in range(1, 11))
    angles_per_radius: int = 512
    refine_steps: int = 20

    def __post_init__(self):
        r = tuple(float(x) for x in self.radii)
        if not r or any(b <= a for a, b in zip(r, r[1:])):
            raise ValueError("radii must be a nonempty increasing sequence")
        if not (0.0 < r[0] and r[-1] < 1.0):
            raise ValueError("radii must lie in (0, 1)")
        if self.angles_per_radius < 8:
            raise ValueError("angles_per_radius must be >= 8")
        object.__setattr__(self, "radii", r)

    def points(self):
        theta = np.linspace(0.0, 2.0 * np.pi, self.angles_per_radius, endpoint=False)
        r = np.asarray(self.radii)
        return (r[:, None] * np.exp(1j * theta)[None, :]).ravel()

    def to_json(self):
        return {
            "radii": list(self.radii),
            "angles_per_radius": self.angles_per_radius,
            "refine_steps": self.refine_steps,
        }


@dataclass
class CriterionReport:
    variant: str
    passed: bool
    sup_value: float
    bound: float
    witness: complex
    margin: float
    grid: DiskGrid
    warnings: list = field(default_factory=list)

    def to_json(self):
        return {
            "variant": self.variant,
            "passed": self.passed,
            "sup": self.sup_value,
            "bound": self.bound,
            "witness": [self.witness.real, self.witness.imag],
            "margin": self.margin,
            "grid": self.grid.to_json(),
            "warnings": list(self.warnings),
        }


def _resolve(variant, p, f, g, phi):
    """Effective (alpha, beta, g, phi) after the corollary substitutions."""
    if variant == "cor31":
        return p.alpha, p.alpha, _IDENTITY, f
    if variant == "cor32":
        return 1.0 + 0.0j, 0.0 + 0.0j, f, f
    return p.alpha, p.beta, g, phi


def criterion_values(variant, z, p, f, g=None, phi=None):
    """Vectorized criterion expression over an array of disk points."""
    if variant not in VARIANTS:
        raise ValueError(f"unknown variant {variant!r}")
    z = np.asarray(z, dtype=np.complex128)
    alpha, beta, g_eff, phi_eff = _resolve(variant, p, f, g or _IDENTITY, phi or _IDENTITY)

    _, fp, fpp = eval_many(f, z)
    bad = np.abs(fp) < 1e-13
    if np.any(bad):
        w = complex(z[np.nonzero(bad)[0][0]] if z.ndim else z)
        raise DerivativeVanishes(f"f'(z) = 0 at z = {w}", witness=w)
    pre = z * fpp / fp
    if beta != 0:
        lr = log_derivative(g_eff, z) - log_derivative(phi_eff, z)
    else:
        lr = np.zeros_like(z)
    bracket = alpha * pre + beta * lr

    r = np.abs(z)
    m = p.m
    if variant in ("thm31", "thm41", "cor31"):
        fac = np.empty_like(z)
        nz = r > 0
        fac[nz] = (1.0 - np.exp((m + 1.0) * p.gamma * np.log(r[nz]))) / p.gamma
        fac[~nz] = 0.0  # bracket is 0 there anyway
        return np.abs(fac * bracket - (m - 1.0) / 2.0)
    rg = p.gamma.real
    if variant == "thm32":
        fac = np.zeros(z.shape)
        nz = r > 0
        fac[nz] = (1.0 - r[nz] ** ((m + 1.0) * rg)) / rg
        fac[~nz] = 1.0 / rg
        return fac * np.abs(bracket)
    # cor32: m fixed at 1 by the statement
    fac = np.zeros(z.shape)
    nz = r > 0
    fac[nz] = (1.0 - r[nz] ** (2.0 * rg)) / rg
    fac[~nz] = 1.0 / rg
    return fac * np.abs(pre)


def criterion_value(variant, z, p, f, g=None, phi=None):
    """Scalar criterion expression at one point."""
    return float(criterion_values(variant, np.array([complex(z)]), p, f, g, phi)[0])


def criterion_bound(variant, p):
    if variant in ("thm31", "cor31"):
        return (p.m + 1.0) / 2.0
    if variant in ("thm32", "cor32"):
        return 1.0
    if variant == "thm41":
        return p.k * (p.m + 1.0) / 2.0
    raise ValueError(f"unknown variant {variant!r}")


def _check_hypotheses(variant, p, f, g, phi, grid):
    if variant in ("thm32", "cor32"):
        if p.gamma.real <= 0:
            raise HypothesisViolation(f"{variant} requires Re gamma > 0")
        if variant == "thm32" and p.m < 1.0:
            raise HypothesisViolation("thm32 requires m >= 1")
    if variant == "thm41" and not p.k < 1.0:
        raise HypothesisViolation("thm41 requires k in [0, 1)")
    rmax = grid.radii[-1]
    to_check = ()
    if variant in ("thm31", "thm32", "thm41"):
        to_check = (("g", g), ("phi", phi))
    elif variant == "cor31":
        to_check = (("f", f),)
    for name, s in to_check:
        ok, witness = nonvanishing_check(s, rmax, grid)
        if not ok:
            raise HypothesisViolation(
                f"{name} vanishes inside the scanned disk near z = {witness}", witness=witness
            )


def criterion_check(variant, p, f, g=None, phi=None, grid=None):
    """Sup-scan the disk and report pass/fail against the variant bound.

    The grid maximum is refined by a coordinate search in (r, theta) with
    `refine_steps` halvings, clamped to the outermost grid radius.  PASS
    means "no violation found by sampling".
    """
    grid = grid or DiskGrid()
    g = g or _IDENTITY
    phi = phi or _IDENTITY
    _check_hypotheses(variant, p, f, g, phi, grid)
    bound = criterion_bound(variant, p)

    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always", TruncationWarning)
        try:
            z = grid.points()
            vals = criterion_values(variant, z, p, f, g, phi)
        except DerivativeVanishes as exc:
            report = CriterionReport(
                variant, False, math.inf, bound, exc.witness, -math.inf, grid
            )
            report.warnings.append(str(exc))
            return report
        best = int(np.argmax(vals))
        sup = float(vals[best])
        witness = complex(z[best])

        # local refinement around the best sample
        r = abs(witness)
        th = cmath.phase(witness)
        radii = grid.radii
        i = min(range(len(radii)), key=lambda j: abs(radii[j] - r))
        gaps = [radii[j + 1] - radii[j] for j in range(len(radii) - 1)] or [radii[0] / 2]
        dr = max(gaps[max(i - 1, 0) : i + 1] or gaps) / 2.0
        dth = math.pi / grid.angles_per_radius
        rmax = radii[-1]
        for _ in range(grid.refine_steps):
            moved = True
            hops = 0
            while moved and hops < 8:
                moved = False
                for rr, tt in (
                    (min(r + dr, rmax), th),
                    (max(r - dr, 1e-6), th),
                    (r, th + dth),
                    (r, th - dth),
                ):
                    try:
                        v = criterion_value(variant, rr * cmath.exp(1j * tt), p, f, g, phi)
                    except DerivativeVanishes as exc:
                        report = CriterionReport(
                            variant, False, math.inf, bound, exc.witness, -math.inf, grid
                        )
                        report.warnings.append(str(exc))
                        return report
                    if v > sup:
                        sup, r, th = v, rr, tt
                        moved = True
                        hops += 1
            dr /= 2.0
            dth /= 2.0
        witness = r * cmath.exp(1j * th)

    passed = sup <= bound + STRICTNESS_TOL
    report = CriterionReport(variant, passed, sup, bound, witness, bound - sup, grid)
    seen = set()
    for w in caught:
        if issubclass(w.category, TruncationWarning) and str(w.message) not in seen:
            seen.add(str(w.message))
            report.warnings.append(str(w.message))
    return report
