"""
Trig module for KID Verifier.
Implements the TrigPolynomial class: periodic warp factors with exact derivatives,
closed-form expressions and least-squares-free fitting from uniform samples.
"""

import logging
from dataclasses import dataclass

import numpy as np

import config
import expr as ex
from errors import ParamError
from expr import Expr

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class TrigPolynomial:
    """
    h(t) = a0 + sum_k (a_k cos(k w t) + b_k sin(k w t)) with w = 2 pi / period.

    Attributes:
        period: Period L
        a0: Mean value
        cos_coeffs: a_1..a_m
        sin_coeffs: b_1..b_m
    """

    period: float
    a0: float
    cos_coeffs: tuple[float, ...] = ()
    sin_coeffs: tuple[float, ...] = ()

    def __post_init__(self):
        if not self.period > 0.0:
            raise ParamError(f"period must be positive, got {self.period}")
        if len(self.cos_coeffs) != len(self.sin_coeffs):
            raise ParamError("cos and sin coefficient lists must have equal length")

    @classmethod
    def constant(cls, value: float, period: float) -> "TrigPolynomial":
        return cls(period, float(value))

    @classmethod
    def sine(cls, amplitude: float = 1.0, frequency: int = 1,
             period: float = config.TWO_PI, offset: float = 0.0) -> "TrigPolynomial":
        """offset + amplitude sin(frequency w t)."""
        coeffs = [0.0] * frequency
        coeffs[frequency - 1] = float(amplitude)
        return cls(period, float(offset), (0.0,) * frequency, tuple(coeffs))

    @classmethod
    def cosine(cls, amplitude: float = 1.0, frequency: int = 1,
               period: float = config.TWO_PI, offset: float = 0.0) -> "TrigPolynomial":
        coeffs = [0.0] * frequency
        coeffs[frequency - 1] = float(amplitude)
        return cls(period, float(offset), tuple(coeffs), (0.0,) * frequency)

    @classmethod
    def fit(cls, values: np.ndarray, period: float, modes: int = config.FIT_MODES,
            drop_tol: float = config.FIT_DROP_TOL) -> "TrigPolynomial":
        """
        Trig interpolant of samples taken at t_j = j L / N, j = 0..N-1.

        Args:
            values: Uniform samples over one period (endpoint excluded)
            period: Period L
            modes: Highest harmonic kept
            drop_tol: Coefficients below drop_tol * max |coefficient| are zeroed

        Returns:
            TrigPolynomial with at most `modes` harmonics
        """
        values = np.asarray(values, dtype=float)
        count = len(values)
        if count < 2 * modes + 1:
            raise ParamError(f"{count} samples cannot resolve {modes} harmonics")
        spectrum = np.fft.rfft(values) / count
        a = 2.0 * spectrum.real[1:modes + 1]
        b = -2.0 * spectrum.imag[1:modes + 1]
        scale = max(np.max(np.abs(a), initial=0.0), np.max(np.abs(b), initial=0.0))
        a[np.abs(a) < drop_tol * scale] = 0.0
        b[np.abs(b) < drop_tol * scale] = 0.0
        return cls(float(period), float(spectrum.real[0]), tuple(a.tolist()), tuple(b.tolist()))

    @property
    def omega(self) -> float:
        return config.TWO_PI / self.period

    @property
    def modes(self) -> int:
        return len(self.cos_coeffs)

    def is_constant(self) -> bool:
        return not any(self.cos_coeffs) and not any(self.sin_coeffs)

    def evaluate(self, t, derivative: int = 0) -> np.ndarray:
        """Value (or a derivative) at scalar or array t."""
        t = np.asarray(t, dtype=float)
        result = np.full(t.shape, self.a0 if derivative == 0 else 0.0)
        for k, (a, b) in enumerate(zip(self.cos_coeffs, self.sin_coeffs), start=1):
            if a == 0.0 and b == 0.0:
                continue
            w = k * self.omega
            phase = w * t + derivative * np.pi / 2.0
            result = result + w ** derivative * (a * np.cos(phase) + b * np.sin(phase))
        return result

    def __call__(self, t) -> np.ndarray:
        return self.evaluate(t)

    def derivative(self) -> "TrigPolynomial":
        """h' as another TrigPolynomial (mean zero)."""
        w = self.omega
        a = tuple(k * w * b for k, b in enumerate(self.sin_coeffs, start=1))
        b = tuple(-k * w * a for k, a in enumerate(self.cos_coeffs, start=1))
        return TrigPolynomial(self.period, 0.0, a, b)

    def to_expr(self, t: Expr) -> Expr:
        """Closed form in the variable t."""
        terms = [ex.const(self.a0)]
        for k, (a, b) in enumerate(zip(self.cos_coeffs, self.sin_coeffs), start=1):
            phase = (k * self.omega) * t
            if a != 0.0:
                terms.append(a * ex.cos(phase))
            if b != 0.0:
                terms.append(b * ex.sin(phase))
        return ex.total(terms)

    def min_value(self, lower: float = 0.0, upper: float | None = None,
                  samples: int = config.KERNEL_GRID * 4) -> float:
        """Smallest value on a dense grid of [lower, upper] (one period by default)."""
        upper = lower + self.period if upper is None else upper
        return float(np.min(self.evaluate(np.linspace(lower, upper, samples))))

    def max_error(self, t: np.ndarray, values: np.ndarray) -> float:
        return float(np.max(np.abs(self.evaluate(t) - np.asarray(values))))
