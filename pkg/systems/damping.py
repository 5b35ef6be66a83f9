# systems/damping.py
# Oscilador amortiguado/amplificado (m = 1): x(t) = e^{i eps t} e^{-gamma t/2}, y(t) = e^{i eps t} e^{+gamma t/2}

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from utils.errors import ValidationError


class Branch(str, Enum):
    DAMPED = "damped"
    AMPLIFIED = "amplified"


@dataclass(frozen=True)
class DampingParams:
    omega: float
    gamma: float

    def __post_init__(self):
        if not (math.isfinite(self.omega) and self.omega > 0):
            raise ValidationError(f"omega debe ser positivo: {self.omega!r}")
        if not (math.isfinite(self.gamma) and self.gamma >= 0):
            raise ValidationError(f"gamma debe ser no negativo: {self.gamma!r}")
        if not self.omega > self.gamma / 2:
            raise ValidationError(f"régimen sobre-crítico: omega = {self.omega} <= gamma/2 = {self.gamma / 2}")

    @property
    def epsilon(self):
        return math.sqrt(self.omega ** 2 - self.gamma ** 2 / 4)


def _sign(branch):
    return -1.0 if Branch(branch) is Branch.DAMPED else 1.0


def damping_factor(p, t, branch=Branch.DAMPED):
    """e^{i eps t}·e^{∓gamma t/2}; en la rama amortiguada con t >= 0 es un reescalado d = 1."""
    return complex(np.exp(1j * p.epsilon * t) * np.exp(_sign(branch) * p.gamma * t / 2))


def damping_trajectory(p, times, branch=Branch.DAMPED):
    times = np.asarray(times, dtype=float)
    return np.exp(1j * p.epsilon * times) * np.exp(_sign(branch) * p.gamma * times / 2)


def deviation_from_unitarity(p, t, branch=Branch.DAMPED):
    """| |x(t)| − 1 |: cero solo en el límite gamma = 0."""
    return abs(abs(damping_factor(p, t, branch)) - 1.0)
