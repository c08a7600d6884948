"""Named state families, each simulated and paired with its closed form.

Every scenario returns a :class:`ScenarioResult` whose ``closed_form`` and
``simulated`` dictionaries share keys; :meth:`ScenarioResult.errors` gives
the worst disagreement per key and :meth:`ScenarioResult.failures` the keys
that exceed their tolerance.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from . import formulas
from .coherence import (
    CoherenceReport,
    InterferencePattern,
    coherence_report,
    coherent_pattern,
    coherent_report,
    format_float,
    phi_grid,
    scan_pattern,
    visibility_from_pattern,
)
from .fock import (
    FockState,
    OperatorPolynomial,
    PostSelectionFailure,
    fidelity,
    normalize,
    project_vacuum,
    state_from_polynomial,
)
from .optics import (
    CoherentField,
    balanced_splitter,
    compose_all,
    polarization_rotation,
    propagate_coherent,
    propagate_fock,
    ModeTransform,
)

FORMULA_TOL = 1e-12
EXTRACTION_TOL = 1e-4
MAX_YOUNG_ORDER = 12
NORM_TOL = 1e-10

# four-mode ordering used by the preparation scheme
MODE_1H, MODE_1V, MODE_2H, MODE_2V = range(4)
# after the output splitter and relabelling: a = A_H, b = (A_V - B_V)/sqrt2,
# c = B_H, d = (A_V + B_V)/sqrt2
MODE_A, MODE_B, MODE_C, MODE_D = range(4)


@dataclass(eq=False)
class ScenarioResult:
    name: str
    parameters: dict
    quantum_pattern: InterferencePattern | None = None
    quantum_report: CoherenceReport | None = None
    classical_pattern: InterferencePattern | None = None
    classical_report: CoherenceReport | None = None
    closed_form: dict = field(default_factory=dict)
    simulated: dict = field(default_factory=dict)
    tolerances: dict = field(default_factory=dict)

    def record(self, key: str, predicted, simulated, tol: float = FORMULA_TOL) -> None:
        self.closed_form[key] = predicted
        self.simulated[key] = simulated
        self.tolerances[key] = tol

    def errors(self) -> dict[str, float]:
        out = {}
        for key, predicted in self.closed_form.items():
            diff = np.abs(np.asarray(predicted, dtype=complex) - np.asarray(self.simulated[key], dtype=complex))
            out[key] = float(np.max(diff)) if diff.size else 0.0
        return out

    def failures(self) -> dict[str, float]:
        return {k: e for k, e in self.errors().items() if not e <= self.tolerances[k]}

    @property
    def ok(self) -> bool:
        return not self.failures()

    def to_dict(self) -> dict:
        def plain(v):
            arr = np.asarray(v)
            if np.iscomplexobj(arr):
                return {"re": plain(arr.real), "im": plain(arr.imag)}
            return arr.tolist()

        return {
            "scenario": self.name,
            "parameters": self.parameters,
            "quantum_report": self.quantum_report.to_dict() if self.quantum_report else None,
            "classical_report": self.classical_report.to_dict() if self.classical_report else None,
            "quantum_pattern": self.quantum_pattern.to_dict() if self.quantum_pattern else None,
            "classical_pattern": self.classical_pattern.to_dict() if self.classical_pattern else None,
            "closed_form": {k: plain(v) for k, v in self.closed_form.items()},
            "simulated": {k: plain(v) for k, v in self.simulated.items()},
            "errors": self.errors(),
            "tolerances": self.tolerances,
            "ok": self.ok,
        }


def first_splitter() -> ModeTransform:
    return balanced_splitter(0, 1, 2)


def extraction_tolerance(phis: Sequence[float]) -> float:
    """Accuracy bound for grid-extracted visibilities of a sinusoidal fringe.

    Missing an extremum by half a grid step h lowers it by at most
    ``b (1 - cos(h/2)) <= b h^2/8``, which moves the visibility by at most
    about ``h^2/4``. The bound is doubled for safety and never drops below
    EXTRACTION_TOL, the figure quoted for the default grid.
    """
    phis = np.asarray(phis, dtype=float)
    h = float(np.max(np.diff(phis))) if phis.size > 1 else 2.0 * math.pi
    return max(EXTRACTION_TOL, h * h / 2.0)


def _phis(phis: Sequence[float] | None) -> np.ndarray:
    return phi_grid() if phis is None else np.asarray(phis, dtype=float)


def interpolation_input(eta: float, beta: float = 0.0) -> FockState:
    """(sqrt(eta) a^dag^2/sqrt2 + sqrt(1-eta) e^{i beta} a^dag b^dag)|0> on modes (a, b)."""
    eta = formulas.check_weight(eta)
    poly = (
        OperatorPolynomial.term(math.sqrt(eta) / math.sqrt(2.0), {0: 2})
        + OperatorPolynomial.term(math.sqrt(1.0 - eta) * complex(math.cos(beta), math.sin(beta)), {0: 1, 1: 1})
    )
    return state_from_polynomial(poly, 2)


def young_input(coefficients: Sequence[complex]) -> FockState:
    poly = OperatorPolynomial()
    for nu, c in enumerate(coefficients):
        if c == 0:
            continue
        powers = {0: nu} if nu else {}
        poly = poly + OperatorPolynomial.term(complex(c) / math.sqrt(math.factorial(nu)), powers)
    return state_from_polynomial(poly, 2)


def young_scenario(coefficients: Sequence[complex], phis: Sequence[float] | None = None) -> ScenarioResult:
    """Conventional double slit: every photon enters through port a."""
    coefficients = [complex(c) for c in coefficients]
    if len(coefficients) - 1 > MAX_YOUNG_ORDER:
        raise ValueError(f"photon number above {MAX_YOUNG_ORDER} not supported")
    norm2 = math.fsum(abs(c) ** 2 for c in coefficients)
    if abs(norm2 - 1.0) > NORM_TOL:
        raise ValueError(f"coefficients must be normalized, sum |c|^2 = {norm2!r}")
    phis = _phis(phis)
    state_in = young_input(coefficients)
    inside = propagate_fock(state_in, first_splitter())
    mean_n = math.fsum(nu * abs(c) ** 2 for nu, c in enumerate(coefficients))

    res = ScenarioResult("young", {"coefficients": [[c.real, c.imag] for c in coefficients], "N": mean_n})
    res.quantum_pattern = scan_pattern(inside, phis)
    res.record("N", mean_n, state_in.mean_occupation(0))
    res.record("I_A", formulas.young_intensity(mean_n, phis), res.quantum_pattern.I_A)
    res.record("I_B", formulas.young_intensity(mean_n, phis + np.pi), res.quantum_pattern.I_B)
    if mean_n > 0:
        res.quantum_report = coherence_report(inside)
        res.record("g1_abs", 1.0, res.quantum_report.g1_abs)
        extracted = visibility_from_pattern(res.quantum_pattern.I_A, phis).value
        res.record("V_extracted", 1.0, extracted, extraction_tolerance(phis))
        # classical stand-in: a coherent beam of the same mean intensity in port a
        classical_inside = propagate_coherent(CoherentField([math.sqrt(mean_n), 0.0]), first_splitter())
        res.classical_pattern = coherent_pattern(classical_inside, phis)
        res.classical_report = coherent_report(classical_inside)
        res.record("I_A_classical", formulas.young_intensity(mean_n, phis), res.classical_pattern.I_A)
    return res


def interpolation_scenario(
    eta: float, phis: Sequence[float] | None = None, phi12: float = 0.0
) -> ScenarioResult:
    """Weight family between a^dag^2/sqrt2 (eta=1) and a^dag b^dag (eta=0).

    The classical counterpart is a stable-phase coherent pair carrying the
    same inside-channel intensities as the quantum state.
    """
    eta = formulas.check_weight(eta)
    phis = _phis(phis)
    inside = propagate_fock(interpolation_input(eta), first_splitter())
    res = ScenarioResult("interp", {"eta": eta, "phi12": phi12})
    res.quantum_pattern = q = scan_pattern(inside, phis)
    res.quantum_report = rep = coherence_report(inside)

    res.record("I_A", formulas.interpolation_intensity(eta, phis), q.I_A)
    res.record("I_B", 2.0 - formulas.interpolation_intensity(eta, phis), q.I_B)
    res.record("channel_pair", formulas.channel_intensity_pair(eta), sorted((rep.I1, rep.I2)))
    lo, hi = formulas.channel_intensity_pair(eta)
    res.record("channel_product", lo * hi, rep.I1 * rep.I2)
    res.record("g1_abs", formulas.interpolation_g1(eta), rep.g1_abs)
    res.record("V_Q", eta, rep.visibility)
    res.record("V_Q_extracted", eta, visibility_from_pattern(q.I_A, phis).value, extraction_tolerance(phis))
    res.record("coincidence_sum", np.ones_like(phis), q.P_AA + q.P_BB + q.P_AB)

    field_inside = CoherentField([math.sqrt(rep.I1), math.sqrt(rep.I2) * np.exp(1j * phi12)])
    res.classical_pattern = c = coherent_pattern(field_inside, phis)
    res.classical_report = crep = coherent_report(field_inside)
    res.record("g1_classical", 1.0, crep.g1_abs)
    res.record("V_C", formulas.stable_phase_classical_visibility(eta), crep.visibility)
    res.record(
        "V_C_extracted", formulas.stable_phase_classical_visibility(eta),
        visibility_from_pattern(c.I_A, phis).value, extraction_tolerance(phis),
    )
    res.record("visibility_ratio", formulas.interpolation_g1(eta), rep.visibility / crep.visibility)
    return res


def phased_interpolation_scenario(
    eta: float, beta: float, phis: Sequence[float] | None = None
) -> ScenarioResult:
    """Weight family with b^dag -> e^{i beta} b^dag, against an input-matched coherent field.

    The classical field sits in the *input* ports with amplitudes
    sqrt(1+eta) and e^{i beta} sqrt(1-eta), matching the quantum state's
    port intensities, and is propagated through the first splitter.
    """
    eta = formulas.check_weight(eta)
    phis = _phis(phis)
    state_in = interpolation_input(eta, beta)
    inside = propagate_fock(state_in, first_splitter())
    res = ScenarioResult("phased", {"eta": eta, "beta": beta})
    res.quantum_pattern = q = scan_pattern(inside, phis)
    res.quantum_report = rep = coherence_report(inside)

    field_in = CoherentField([math.sqrt(1.0 + eta), np.exp(1j * beta) * math.sqrt(1.0 - eta)])
    field_inside = propagate_coherent(field_in, first_splitter())
    res.classical_pattern = c = coherent_pattern(field_inside, phis)
    res.classical_report = crep = coherent_report(field_inside)

    vq = formulas.phased_visibility_quantum(eta, beta)
    vc = formulas.phased_visibility_classical(eta, beta)
    res.record("I_a_input", 1.0 + eta, state_in.mean_occupation(0))
    res.record("I_b_input", 1.0 - eta, state_in.mean_occupation(1))
    res.record("I_A_Q", formulas.phased_intensity_quantum(eta, beta, phis), q.I_A)
    res.record("I_A_C", formulas.phased_intensity_classical(eta, beta, phis), c.I_A)
    res.record("V_Q", vq, rep.visibility)
    res.record("V_C", vc, crep.visibility)
    res.record("V_Q_extracted", vq, visibility_from_pattern(q.I_A, phis).value, extraction_tolerance(phis))
    res.record("V_C_extracted", vc, visibility_from_pattern(c.I_A, phis).value, extraction_tolerance(phis))
    return res


def classical_channel_model(
    alpha: complex, phi12: float = 0.0, phis: Sequence[float] | None = None
) -> ScenarioResult:
    """Coherent pair (alpha, e^{i phi12} alpha) already inside the interferometer."""
    alpha = complex(alpha)
    if alpha == 0:
        raise ValueError("coherent amplitude must be nonzero")
    phis = _phis(phis)
    field_inside = CoherentField([alpha, alpha * np.exp(1j * phi12)])
    res = ScenarioResult("classical", {"alpha": [alpha.real, alpha.imag], "phi12": phi12})
    res.classical_pattern = c = coherent_pattern(field_inside, phis)
    res.classical_report = crep = coherent_report(field_inside)
    res.record("I_A", formulas.coherent_pair_intensity(alpha, phi12, phis), c.I_A)
    res.record("g1_abs", 1.0, crep.g1_abs)
    res.record("V", 1.0, crep.visibility)
    res.record("V_extracted", 1.0, visibility_from_pattern(c.I_A, phis).value, extraction_tolerance(phis))
    return res


def single_photon_scenario(port: str = "a", phis: Sequence[float] | None = None) -> ScenarioResult:
    """One photon through port ``a`` or ``b``; the detector roles swap between the two."""
    if port not in ("a", "b"):
        raise ValueError("port must be 'a' or 'b'")
    phis = _phis(phis)
    state_in = FockState.basis(1, 0) if port == "a" else FockState.basis(0, 1)
    inside = propagate_fock(state_in, first_splitter())
    res = ScenarioResult(f"single-{port}", {"port": port})
    res.quantum_pattern = q = scan_pattern(inside, phis)
    res.quantum_report = rep = coherence_report(inside)
    plus, minus = formulas.single_photon_intensities(phis)
    if port == "b":
        plus, minus = minus, plus
    res.record("I_A", plus, q.I_A)
    res.record("I_B", minus, q.I_B)
    res.record("inside_intensities", (0.5, 0.5), (rep.I1, rep.I2))
    res.record("g1_abs", 1.0, rep.g1_abs)
    return res


# -- state preparation --------------------------------------------------------

def preparation_circuit(eta_angle: float) -> ModeTransform:
    """Polarization turn on channel 2, then a polarization-blind splitter, then relabelling.

    Modes in: (1H, 1V, 2H, 2V). Modes out: (a, b, c, d). The turn is by
    pi/2 - eta_angle so the initially vertical photon ends up with overlap
    cos(eta_angle) on horizontal.
    """
    turn = polarization_rotation(MODE_2V, MODE_2H, math.pi / 2 - eta_angle, 4)
    # A_H, A_V, B_H, B_V occupy positions 0..3 after the splitter
    splitter = compose_all([balanced_splitter(MODE_1H, MODE_2H, 4), balanced_splitter(MODE_1V, MODE_2V, 4)])
    r = 1.0 / math.sqrt(2.0)
    relabel = ModeTransform(
        np.array(
            [
                [1, 0, 0, 0],  # A_H = a
                [0, r, 0, r],  # A_V = (b + d)/sqrt2
                [0, 0, 1, 0],  # B_H = c
                [0, -r, 0, r],  # B_V = (d - b)/sqrt2
            ]
        )
    )
    return compose_all([turn, splitter, relabel])


def angle_target_state(eta_angle: float) -> FockState:
    """(cos(eta) a^dag^2/sqrt2 + sin(eta) a^dag b^dag)|0>."""
    poly = OperatorPolynomial.term(math.cos(eta_angle) / math.sqrt(2.0), {0: 2}) + OperatorPolynomial.term(
        math.sin(eta_angle), {0: 1, 1: 1}
    )
    return state_from_polynomial(poly, 2)


@dataclass(eq=False)
class PreparationResult:
    state: FockState | None
    success_probability: float
    scenario: ScenarioResult
    full_state: FockState


def prepare_interpolation_state(eta_angle: float, phis: Sequence[float] | None = None) -> PreparationResult:
    """Herald the mixing-angle state from one photon pair on four polarization modes.

    Post-selection keeps the branch with no photon in ``c`` (and in the
    always-empty ``d``). A failed post-selection shows up as probability 0
    and ``state=None``.
    """
    phis = _phis(phis)
    pair = FockState.basis(1, 0, 0, 1)  # 1_H^dag 2_V^dag |0>
    full = propagate_fock(pair, preparation_circuit(eta_angle))
    try:
        kept, prob = project_vacuum(full, [MODE_C, MODE_D])
    except PostSelectionFailure:
        kept, prob = None, 0.0
    rejected = math.fsum(abs(a) ** 2 for occ, a in full.amplitudes.items() if occ[MODE_C] or occ[MODE_D])

    weight = formulas.angle_to_weight(eta_angle)
    res = ScenarioResult("prep", {"eta_angle": eta_angle, "eta_weight": weight})
    res.record("success_probability", 0.5, prob)
    res.record("outcome_total", 1.0, prob + rejected)
    res.record("d_mode_population", 0.0, full.mean_occupation(MODE_D))
    if kept is not None:
        res.record("fidelity", 1.0, fidelity(kept, normalize(angle_target_state(eta_angle))))
        inside = propagate_fock(kept, first_splitter())
        res.quantum_pattern = q = scan_pattern(inside, phis)
        res.quantum_report = coherence_report(inside)
        res.record("I_A", formulas.interpolation_intensity(weight, phis), q.I_A)
    return PreparationResult(kept, prob, res, full)


# -- sweeps -------------------------------------------------------------------

@dataclass(frozen=True)
class Fig2Row:
    eta: float
    g1_sim: float
    g1_formula: float
    g1_classical: float


def fig2_curve(eta_grid: Sequence[float]) -> list[Fig2Row]:
    """Suppressed |g1| of the weight family next to the stable-phase classical value."""
    rows = []
    for eta in eta_grid:
        eta = formulas.check_weight(eta)
        rep = coherence_report(propagate_fock(interpolation_input(eta), first_splitter()))
        classical = coherent_report(CoherentField([math.sqrt(rep.I1), math.sqrt(rep.I2)]))
        rows.append(Fig2Row(eta, rep.g1_abs, formulas.interpolation_g1(eta), classical.g1_abs))
    return rows


FIG2_COLUMNS = ("eta", "g1_sim", "g1_formula", "g1_classical")


def fig2_csv(rows: Sequence[Fig2Row]) -> str:
    lines = [",".join(FIG2_COLUMNS)]
    for r in rows:
        lines.append(",".join(format_float(getattr(r, c)) for c in FIG2_COLUMNS))
    return "\n".join(lines) + "\n"


@dataclass(frozen=True)
class SurfacePoint:
    eta: float
    beta: float
    V_Q_sim: float
    V_Q_extracted: float
    V_Q_formula: float
    V_C_sim: float
    V_C_extracted: float
    V_C_formula: float


SURFACE_COLUMNS = tuple(SurfacePoint.__dataclass_fields__)


def visibility_surface(
    eta_grid: Sequence[float], beta_grid: Sequence[float], phis: Sequence[float] | None = None
) -> list[SurfacePoint]:
    """Quantum and classical visibilities of the phased family over an (eta, beta) grid."""
    phis = _phis(phis)
    points = []
    for eta in eta_grid:
        for beta in beta_grid:
            res = phased_interpolation_scenario(eta, beta, phis)
            s, c = res.simulated, res.closed_form
            points.append(
                SurfacePoint(
                    float(eta), float(beta),
                    s["V_Q"], s["V_Q_extracted"], c["V_Q"],
                    s["V_C"], s["V_C_extracted"], c["V_C"],
                )
            )
    return points


def surface_csv(points: Sequence[SurfacePoint]) -> str:
    lines = [",".join(SURFACE_COLUMNS)]
    for p in points:
        lines.append(",".join(format_float(getattr(p, c)) for c in SURFACE_COLUMNS))
    return "\n".join(lines) + "\n"
