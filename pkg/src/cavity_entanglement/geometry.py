"""Cavity placement and mode labels.

Both cavities have side length ``L``. Rob's (accelerated) cavity occupies
``chi in [1/a - L/2, 1/a + L/2]`` and ``y in [-L/2, L/2]``; Alice's inertial
cavity shares the same x-interval at t = 0 and sits at ``y in [-3L/2, -L/2]``.
"""

from dataclasses import dataclass, field
import math


@dataclass(frozen=True)
class ModeIndex:
    n: int
    m: int

    def __post_init__(self):
        if int(self.n) != self.n or int(self.m) != self.m or self.n < 1 or self.m < 1:
            raise ValueError(f"mode numbers must be positive integers, got ({self.n}, {self.m})")


@dataclass(frozen=True)
class CavityGeometry:
    """Wall coordinates of both cavities for proper acceleration ``a`` at Rob's centre.

    ``a = 0`` describes the inertial limit; the Rindler wall coordinates are
    then infinite and only the Minkowski description of Rob's cavity applies.
    """

    a: float
    L: float = 1.0
    chi_minus: float = field(init=False)
    chi_plus: float = field(init=False)
    y_A_minus: float = field(init=False)
    y_A_plus: float = field(init=False)
    y_R_minus: float = field(init=False)
    y_R_plus: float = field(init=False)

    def __post_init__(self):
        a, L = float(self.a), float(self.L)
        if not L > 0:
            raise ValueError(f"cavity length must be positive, got {L}")
        if not a >= 0:
            raise ValueError(f"acceleration must be non-negative, got {a}")
        if a * L >= 2.0:
            raise ValueError(
                f"a*L = {a * L} >= 2 puts the trailing wall on the Rindler horizon")
        if a > 0:
            chi_c = 1.0 / a
            set_ = object.__setattr__
            set_(self, "chi_minus", chi_c - 0.5 * L)
            set_(self, "chi_plus", chi_c + 0.5 * L)
        else:
            object.__setattr__(self, "chi_minus", math.inf)
            object.__setattr__(self, "chi_plus", math.inf)
        object.__setattr__(self, "y_A_minus", -1.5 * L)
        object.__setattr__(self, "y_A_plus", -0.5 * L)
        object.__setattr__(self, "y_R_minus", -0.5 * L)
        object.__setattr__(self, "y_R_plus", 0.5 * L)

    @property
    def inertial(self):
        return self.a == 0

    @property
    def chi_centre(self):
        return 1.0 / self.a if self.a > 0 else math.inf

    # Alice's walls coincide with Rob's at t = eta = 0
    @property
    def x_minus(self):
        return self.chi_minus

    @property
    def x_plus(self):
        return self.chi_plus

    @property
    def log_width(self):
        """ln(chi_+/chi_-), the massless Rindler mode spacing is pi over this."""
        return math.log1p(self.L / self.chi_minus)
