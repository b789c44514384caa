"""Principal-branch complex powers and continuity tracking along paths.

All powers in the package use the principal branch (argument in (-pi, pi]).
When a quantity is known to vary continuously along a path, the tracker
below unwraps the argument and reports whether the principal branch would
have jumped; jumps are diagnostic information and are never repaired.
"""

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .errors import SingularPathError, SingularPowerError, UndersampledPathError

_JUMP_LIMIT = math.pi * (1.0 - 1e-12)


def principal_power(w, c):
    """w^c = exp(c Log w) with Log the principal logarithm.

    w = 0 is allowed only for Re c > 0 (result 0) or c = 0 (result 1 by
    the empty-product convention is NOT used: 0^0 is rejected).
    """
    w = complex(w)
    c = complex(c)
    if w == 0:
        if c.real > 0:
            return 0.0 + 0.0j
        raise SingularPowerError(f"0 raised to power {c} with Re c <= 0")
    if c == 0:
        return 1.0 + 0.0j
    return cmath.exp(c * cmath.log(w))


@dataclass(frozen=True)
class BranchedPath:
    """Discretized path in C* fine enough to track argument continuity."""

    samples: np.ndarray
    winding_offset: int = 0

    def __post_init__(self):
        s = np.atleast_1d(np.asarray(self.samples, dtype=np.complex128))
        if s.size < 1:
            raise ValueError("path must contain at least one sample")
        if np.any(s == 0):
            raise SingularPathError("path passes through 0")
        s.setflags(write=False)
        object.__setattr__(self, "samples", s)


def unwrapped_arguments(samples):
    """Continuous argument along a path, seeded at the principal argument
    of the first sample.  Raises on zeros and on undersampled jumps."""
    samples = np.asarray(samples, dtype=np.complex128)
    if np.any(samples == 0):
        raise SingularPathError("path passes through 0")
    ang = np.angle(samples)
    inc = np.diff(ang)
    inc = (inc + np.pi) % (2.0 * np.pi) - np.pi
    if inc.size and np.abs(inc).max() >= _JUMP_LIMIT:
        k = int(np.argmax(np.abs(inc)))
        raise UndersampledPathError(
            f"argument jump {np.abs(inc).max():.4f} >= pi between samples {k} and {k + 1}"
        )
    theta = np.empty(samples.shape)
    theta[0] = ang[0]
    if inc.size:
        theta[1:] = ang[0] + np.cumsum(inc)
    return theta


def continuous_power_along_path(path, c, rel_tol=1e-9):
    """Powers w^c tracked continuously along the path.

    Returns (values, crossed) where `crossed` is True iff the continuous
    determination differs from the pointwise principal power anywhere,
    i.e. the path wound across the negative real axis.
    """
    if isinstance(path, BranchedPath):
        samples = path.samples
    else:
        samples = BranchedPath(path).samples
    c = complex(c)
    theta = unwrapped_arguments(samples)
    values = np.exp(c * (np.log(np.abs(samples)) + 1j * theta))
    principal = np.exp(c * np.log(samples))
    scale = np.abs(values) + np.abs(principal) + 1e-300
    crossed = bool(np.any(np.abs(values - principal) > rel_tol * scale))
    return values, crossed
