"""Intensities, first-order coherence, visibility and phase scans.

The scans model the second half of a Mach-Zehnder: the inside modes (1, 2)
pass a phase shifter on mode 1 and a balanced splitter onto the detector
modes (A, B). Coincidence probabilities use the per-shot normalization
``P_AA = <A^dag A^dag A A>/2``, ``P_BB = <B^dag B^dag B B>/2``,
``P_AB = <A^dag B^dag A B>``, which sum to one for two-photon inputs.
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np

from .fock import FockError, FockState, UnnormalizedStateError, normally_ordered_moment
from .optics import CoherentField, balanced_splitter, mach_zehnder_output, propagate_fock

DEFAULT_PHI_POINTS = 721
MAX_COINCIDENCE_PHOTONS = 4
CONSTANT_SERIES_TOLERANCE = 1e-12

CSV_COLUMNS = ("phi", "I_A", "I_B", "P_AA", "P_BB", "P_AB")


class VacuumInputError(FockError):
    """Neither channel carries any intensity."""


def phi_grid(points: int = DEFAULT_PHI_POINTS) -> np.ndarray:
    """Uniform grid on [0, 2*pi], endpoints included."""
    if points < 2:
        raise ValueError("phase grid needs at least two points")
    return np.linspace(0.0, 2.0 * np.pi, points)


def format_float(x: float) -> str:
    return format(float(x), ".17g")


# -- correlation functions ----------------------------------------------------

def _unit(mode_count: int, mode: int) -> list[int]:
    counts = [0] * mode_count
    counts[mode] = 1
    return counts


def first_order_correlation(state: FockState, i: int, j: int) -> complex:
    """G(i, j) = <a_i^dag a_j>."""
    return normally_ordered_moment(state, _unit(state.mode_count, i), _unit(state.mode_count, j))


@dataclass(frozen=True)
class CoherenceReport:
    I1: float
    I2: float
    G11: float
    G22: float
    G12: complex
    g1: complex
    visibility: float
    degenerate: bool = False

    @property
    def g1_abs(self) -> float:
        return abs(self.g1)

    def to_dict(self) -> dict:
        return {
            "I1": self.I1,
            "I2": self.I2,
            "G11": self.G11,
            "G22": self.G22,
            "G12": {"re": self.G12.real, "im": self.G12.imag},
            "g1": {"re": self.g1.real, "im": self.g1.imag},
            "g1_abs": self.g1_abs,
            "visibility": self.visibility,
            "degenerate": self.degenerate,
        }


def _assemble_report(g11: float, g22: float, g12: complex) -> CoherenceReport:
    total = g11 + g22
    if total <= 0.0:
        raise VacuumInputError("no photons in either channel; coherence is undefined")
    if g11 <= 0.0 or g22 <= 0.0:
        # 0/0 in the normalized correlation, and the fringe is flat
        return CoherenceReport(g11, g22, g11, g22, g12, 0j, 0.0, degenerate=True)
    g1 = g12 / math.sqrt(g11 * g22)
    visibility = abs(g1) * 2.0 * math.sqrt(g11 * g22) / total
    return CoherenceReport(g11, g22, g11, g22, g12, g1, visibility)


def coherence_report(state: FockState, i: int = 0, j: int = 1) -> CoherenceReport:
    g11 = first_order_correlation(state, i, i).real
    g22 = first_order_correlation(state, j, j).real
    g12 = first_order_correlation(state, i, j)
    return _assemble_report(g11, g22, g12)


def coherent_report(field: CoherentField, i: int = 0, j: int = 1) -> CoherenceReport:
    """Same report for a product of coherent states, where G(i, j) = conj(alpha_i) alpha_j."""
    a = field.amplitudes
    return _assemble_report(abs(a[i]) ** 2, abs(a[j]) ** 2, complex(np.conj(a[i]) * a[j]))


# -- phase scans --------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class InterferencePattern:
    phis: np.ndarray
    I_A: np.ndarray
    I_B: np.ndarray
    P_AA: np.ndarray | None = None
    P_BB: np.ndarray | None = None
    P_AB: np.ndarray | None = None

    @property
    def has_coincidences(self) -> bool:
        return self.P_AA is not None

    def columns(self) -> dict[str, np.ndarray]:
        nan = np.full_like(self.phis, np.nan)
        return {
            "phi": self.phis,
            "I_A": self.I_A,
            "I_B": self.I_B,
            "P_AA": self.P_AA if self.has_coincidences else nan,
            "P_BB": self.P_BB if self.has_coincidences else nan,
            "P_AB": self.P_AB if self.has_coincidences else nan,
        }

    def to_csv(self) -> str:
        """Header ``phi,I_A,I_B,P_AA,P_BB,P_AB``; 17 significant digits; ``nan`` when absent."""
        cols = self.columns()
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(CSV_COLUMNS)
        for k in range(len(self.phis)):
            writer.writerow([format_float(cols[c][k]) for c in CSV_COLUMNS])
        return buf.getvalue()

    def to_dict(self) -> dict:
        names = CSV_COLUMNS if self.has_coincidences else CSV_COLUMNS[:3]
        return {c: [float(x) for x in getattr(self, c if c != "phi" else "phis")] for c in names}

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_csv(cls, text: str) -> "InterferencePattern":
        rows = list(csv.DictReader(io.StringIO(text)))
        data = {c: np.array([float(r[c]) for r in rows]) for c in CSV_COLUMNS}
        coinc = not np.all(np.isnan(data["P_AA"]))
        return cls(
            data["phi"], data["I_A"], data["I_B"],
            data["P_AA"] if coinc else None,
            data["P_BB"] if coinc else None,
            data["P_AB"] if coinc else None,
        )


def _definite_photon_number(state: FockState) -> int | None:
    numbers = state.photon_numbers()
    return numbers.pop() if len(numbers) == 1 else None


def scan_pattern(inside_state: FockState, phis: Sequence[float]) -> InterferencePattern:
    """Detector intensities (and coincidences, when defined) versus phase.

    The output splitter's action on each inside ket is expanded once with
    :func:`propagate_fock`; the shifter contributes ``exp(1j * n_1 * phi)``
    per ket. All detector observables here are diagonal in the output number
    basis, so they follow from the output probabilities.
    """
    phis = np.asarray(phis, dtype=float).reshape(-1)
    if phis.size == 0:
        raise ValueError("empty phase grid")
    if inside_state.mode_count != 2:
        raise FockError("phase scans need a two-mode inside state")
    if not inside_state.is_normalized:
        raise UnnormalizedStateError(f"state norm^2 = {inside_state.norm_squared!r}, expected 1")

    splitter = balanced_splitter(0, 1, 2)
    kets = list(inside_state.amplitudes.items())
    images = [propagate_fock(FockState(2, {occ: 1.0}), splitter) for occ, _ in kets]
    out_basis = sorted({occ for img in images for occ in img.amplitudes})
    index = {occ: k for k, occ in enumerate(out_basis)}

    transfer = np.zeros((len(kets), len(out_basis)), dtype=complex)
    for r, img in enumerate(images):
        for occ, amp in img.amplitudes.items():
            transfer[r, index[occ]] = amp
    coeffs = np.array([amp for _, amp in kets])
    n1 = np.array([occ[0] for occ, _ in kets])
    weighted = np.exp(1j * np.outer(phis, n1)) * coeffs
    probs = np.abs(weighted @ transfer) ** 2

    n_a = np.array([occ[0] for occ in out_basis], dtype=float)
    n_b = np.array([occ[1] for occ in out_basis], dtype=float)
    pattern = dict(I_A=probs @ n_a, I_B=probs @ n_b)
    total = _definite_photon_number(inside_state)
    if total is not None and total <= MAX_COINCIDENCE_PHOTONS:
        pattern["P_AA"] = probs @ (n_a * (n_a - 1) / 2)
        pattern["P_BB"] = probs @ (n_b * (n_b - 1) / 2)
        pattern["P_AB"] = probs @ (n_a * n_b)
    return InterferencePattern(phis, **pattern)


def detector_moments(inside_state: FockState, phi: float) -> dict[str, float]:
    """Slow path: propagate at a single phase and evaluate every moment with ladder operators."""
    out = propagate_fock(inside_state, mach_zehnder_output(phi))
    return {
        "I_A": normally_ordered_moment(out, [1, 0], [1, 0]).real,
        "I_B": normally_ordered_moment(out, [0, 1], [0, 1]).real,
        "P_AA": 0.5 * normally_ordered_moment(out, [2, 0], [2, 0]).real,
        "P_BB": 0.5 * normally_ordered_moment(out, [0, 2], [0, 2]).real,
        "P_AB": normally_ordered_moment(out, [1, 1], [1, 1]).real,
    }


def coherent_pattern(field: CoherentField, phis: Sequence[float]) -> InterferencePattern:
    """Classical fringes for a coherent field in the inside modes.

    Coincidence entries are the factorized normally ordered moments of the
    output coherent state, e.g. ``P_AA = |alpha_A|^4 / 2``.
    """
    phis = np.asarray(phis, dtype=float).reshape(-1)
    if phis.size == 0:
        raise ValueError("empty phase grid")
    if field.mode_count != 2:
        raise ValueError("phase scans need a two-mode field")
    # propagate_coherent through mach_zehnder_output(phi), batched over the grid:
    # the shifter scales row 0 of the splitter by exp(1j * phi)
    rows = balanced_splitter(0, 1, 2).matrix
    alpha = field.amplitudes
    out = np.outer(np.exp(1j * phis) * alpha[0], rows[0]) + alpha[1] * rows[1]
    i_a = np.abs(out[:, 0]) ** 2
    i_b = np.abs(out[:, 1]) ** 2
    return InterferencePattern(phis, i_a, i_b, i_a**2 / 2, i_b**2 / 2, i_a * i_b)


# -- closed-form oracle -------------------------------------------------------

def general_intensity_closed_form(coefficients: Mapping[tuple[int, int], complex], phi: float) -> float:
    """Detector-A intensity written out as the explicit double sum over |mu, nu>.

    Diagonal part ``sum |c|^2 (mu + nu)/2`` plus the first off-diagonal terms
    with weights ``sqrt(mu (nu+1))`` and ``sqrt((mu+1) nu)``. Independent of
    the ladder-operator engine.
    """
    c = {tuple(k): complex(v) for k, v in coefficients.items()}
    diagonal = sum(abs(v) ** 2 * (mu + nu) / 2 for (mu, nu), v in c.items())
    cross = 0j
    for (mu, nu), v in c.items():
        lower = c.get((mu - 1, nu + 1), 0j)
        upper = c.get((mu + 1, nu - 1), 0j)
        cross += np.exp(-1j * phi) * v.conjugate() * lower * math.sqrt(mu * (nu + 1))
        cross += np.exp(1j * phi) * v.conjugate() * upper * math.sqrt((mu + 1) * nu)
    return float(diagonal + 0.5 * cross.real)


# -- visibility ---------------------------------------------------------------

@dataclass(frozen=True)
class VisibilityEstimate:
    value: float
    phi_max: float
    phi_min: float


def visibility_from_pattern(series: Sequence[float], phis: Sequence[float] | None = None) -> VisibilityEstimate:
    """Fringe contrast ``(max - min)/(max + min)`` read off a sampled series.

    Extrema are taken at grid points, so for a sinusoidal fringe the error is
    bounded by the grid spacing squared (about 1e-5 on the default grid). The
    grid should span at least one full period of the fringe.
    """
    y = np.asarray(series, dtype=float).reshape(-1)
    if y.size == 0:
        raise ValueError("empty series")
    x = np.arange(y.size, dtype=float) if phis is None else np.asarray(phis, dtype=float)
    if np.all(y == 0.0):
        raise ValueError("visibility of an all-zero series is undefined")
    k_max, k_min = int(np.argmax(y)), int(np.argmin(y))
    hi, lo = y[k_max], y[k_min]
    if hi - lo <= CONSTANT_SERIES_TOLERANCE:
        return VisibilityEstimate(0.0, float(x[k_max]), float(x[k_min]))
    return VisibilityEstimate(float((hi - lo) / (hi + lo)), float(x[k_max]), float(x[k_min]))
