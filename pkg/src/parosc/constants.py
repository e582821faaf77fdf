from dataclasses import dataclass

from .errors import ValidationError


@dataclass(frozen=True)
class PhysConstants:
    """Mass, reduced Planck constant and the reference frequency ``w`` of
    the stationary oscillator. Defaults are natural units."""

    m: float = 1.0
    hbar: float = 1.0
    w: float = 1.0

    def __post_init__(self):
        for name in ("m", "hbar", "w"):
            if not getattr(self, name) > 0:
                raise ValidationError(f"{name} must be positive")

    def energy(self, n):
        """Eigenvalue ``hbar w (n + 1/2)`` shared by the invariant."""
        return self.hbar * self.w * (n + 0.5)

    @property
    def length(self):
        """Oscillator length ``sqrt(hbar / (m w))``."""
        return (self.hbar / (self.m * self.w)) ** 0.5
