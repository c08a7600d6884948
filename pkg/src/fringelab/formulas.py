"""Closed-form predictions for the two-photon interpolation family.

``eta`` here is the weight parameter of the state
``(sqrt(eta) a^dag^2/sqrt2 + sqrt(1 - eta) e^{i beta} a^dag b^dag)|0>``.
These functions never touch the Fock engine; they are the reference the
simulations are checked against.
"""

from __future__ import annotations

import math

import numpy as np


def check_weight(eta: float) -> float:
    eta = float(eta)
    if not 0.0 <= eta <= 1.0:
        raise ValueError(f"eta must lie in [0, 1], got {eta}")
    return eta


def angle_to_weight(eta_angle: float) -> float:
    """Mixing angle to weight: the a^dag^2 term carries cos(angle) = sqrt(weight)."""
    return math.cos(eta_angle) ** 2


def cross_term(eta: float) -> float:
    """sqrt(2 eta (1 - eta)), the imbalance between the inside channels."""
    return math.sqrt(2.0 * eta * (1.0 - eta))


def young_intensity(mean_photons: float, phi):
    return 0.5 * mean_photons * (1.0 + np.cos(phi))


def single_photon_intensities(phi):
    """Detector A and B for one photon entering port a."""
    return 0.5 * (1.0 + np.cos(phi)), 0.5 * (1.0 - np.cos(phi))


def noon_coincidence_aa(phi):
    """Two-photon probability at detector A for (|2,0> - |0,2>)/sqrt2 inside."""
    return 0.25 * (1.0 - np.cos(2.0 * phi))


def interpolation_intensity(eta: float, phi):
    return 1.0 + eta * np.cos(phi)


def channel_intensity_pair(eta: float) -> tuple[float, float]:
    """Inside-channel intensities as an ascending pair."""
    s = cross_term(eta)
    return 1.0 - s, 1.0 + s


def interpolation_g1(eta: float) -> float:
    s = cross_term(eta)
    return eta / math.sqrt((1.0 - s) * (1.0 + s))


def stable_phase_classical_visibility(eta: float) -> float:
    """2 sqrt(I1 I2)/(I1 + I2) for the inside-channel intensities above."""
    lo, hi = channel_intensity_pair(eta)
    return 2.0 * math.sqrt(lo * hi) / (lo + hi)


def phased_intensity_quantum(eta: float, beta: float, phi):
    return 1.0 + eta * np.cos(phi) - cross_term(eta) * math.sin(beta) * np.sin(phi)


def phased_intensity_classical(eta: float, beta: float, phi):
    return 1.0 + eta * np.cos(phi) - math.sqrt((1.0 + eta) * (1.0 - eta)) * math.sin(beta) * np.sin(phi)


def phased_visibility_quantum(eta: float, beta: float) -> float:
    return math.sqrt(eta**2 + 2.0 * eta * (1.0 - eta) * math.sin(beta) ** 2)


def phased_visibility_classical(eta: float, beta: float) -> float:
    return math.sqrt(eta**2 + (1.0 + eta) * (1.0 - eta) * math.sin(beta) ** 2)


def coherent_pair_intensity(alpha: complex, phi12: float, phi):
    """Detector A for the inside pair (alpha, e^{i phi12} alpha)."""
    return abs(alpha) ** 2 * (1.0 + np.cos(np.asarray(phi) - phi12))
