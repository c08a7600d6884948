"""Self-check suite run by ``fringelab verify``.

Each check returns a :class:`Check` with the worst observed deviation and
the tolerance it was held to. Random inputs come from a fixed seed, so the
table is reproducible.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from . import formulas
from .coherence import (
    first_order_correlation,
    general_intensity_closed_form,
    phi_grid,
    scan_pattern,
    visibility_from_pattern,
)
from .fock import FockState, inner_product, normalize, normally_ordered_moment
from .optics import (
    CoherentField,
    ModeTransform,
    coherent_to_fock,
    mach_zehnder,
    mach_zehnder_output,
    propagate_coherent,
    propagate_fock,
)
from .scenarios import (
    classical_channel_model,
    fig2_curve,
    first_splitter,
    prepare_interpolation_state,
    visibility_surface,
    young_scenario,
)

SEED = 20240613


@dataclass(frozen=True)
class Check:
    name: str
    passed: bool
    worst: float
    tolerance: float

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return f"{status}  {self.name:<34s} worst={self.worst:.3e}  tol={self.tolerance:.0e}"


def _check(name: str, worst: float, tol: float) -> Check:
    return Check(name, bool(worst <= tol), float(worst), tol)


def random_state(rng: np.random.Generator, mode_count: int, max_photons: int) -> FockState:
    """Normalized superposition of a few random kets with total photons <= max_photons."""
    amps = {}
    for _ in range(rng.integers(1, 6)):
        total = int(rng.integers(0, max_photons + 1))
        cuts = np.sort(rng.integers(0, total + 1, size=mode_count - 1))
        occ = tuple(np.diff(np.concatenate([[0], cuts, [total]])).astype(int))
        amps[occ] = complex(rng.normal(), rng.normal())
    state = FockState(mode_count, amps)
    if state.is_zero:
        return FockState.vacuum(mode_count)
    return normalize(state)


def random_unitary(rng: np.random.Generator, n: int) -> ModeTransform:
    z = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    q, r = np.linalg.qr(z)
    return ModeTransform(q * (np.diag(r) / np.abs(np.diag(r))))


def single_photon_fringe() -> Check:
    phis = phi_grid()
    inside = propagate_fock(FockState.basis(1, 0), first_splitter())
    pat = scan_pattern(inside, phis)
    plus, minus = formulas.single_photon_intensities(phis)
    worst = max(np.max(np.abs(pat.I_A - plus)), np.max(np.abs(pat.I_B - minus)))
    return _check("single-photon fringe", worst, 1e-12)


def young_law() -> list[Check]:
    rng = np.random.default_rng(SEED)
    phis = phi_grid()
    worst_i, worst_v = 0.0, 0.0
    for _ in range(50):
        c = rng.normal(size=6) + 1j * rng.normal(size=6)
        c /= np.linalg.norm(c)
        res = young_scenario(c, phis)
        errs = res.errors()
        worst_i = max(worst_i, errs["I_A"])
        worst_v = max(worst_v, errs["V_extracted"])
    return [_check("young law I_A", worst_i, 1e-12), _check("young visibility", worst_v, 1e-4)]


def suppression_endpoint() -> list[Check]:
    phis = phi_grid()
    noon = normalize(FockState(2, {(2, 0): 1.0, (0, 2): -1.0}))
    pat = scan_pattern(noon, phis)
    v1 = visibility_from_pattern(pat.I_A, phis).value
    p_err = np.max(np.abs(pat.P_AA - formulas.noon_coincidence_aa(phis)))
    s_err = np.max(np.abs(pat.P_AA + pat.P_BB + pat.P_AB - 1.0))
    return [
        _check("suppressed first-order visibility", v1, 1e-12),
        _check("P_AA = (1 - cos 2phi)/4", p_err, 1e-12),
        _check("coincidences sum to one", s_err, 1e-12),
    ]


def fig2_reproduction() -> list[Check]:
    rows = fig2_curve(np.linspace(0.0, 1.0, 101))
    worst = max(abs(r.g1_sim - r.g1_formula) for r in rows)
    ends = max(abs(rows[0].g1_sim - 0.0), abs(rows[-1].g1_sim - 1.0))
    classical = max(abs(r.g1_classical - 1.0) for r in rows)
    return [
        _check("|g1| curve vs closed form", worst, 1e-12),
        _check("|g1| endpoints", ends, 1e-12),
        _check("classical reference line", classical, 1e-12),
    ]


def visibility_surfaces() -> list[Check]:
    pts = visibility_surface(np.linspace(0.0, 1.0, 21), np.linspace(0.0, math.pi, 21))
    extracted = max(max(abs(p.V_Q_extracted - p.V_Q_formula), abs(p.V_C_extracted - p.V_C_formula)) for p in pts)
    direct = max(max(abs(p.V_Q_sim - p.V_Q_formula), abs(p.V_C_sim - p.V_C_formula)) for p in pts)
    ordering = max(0.0, max(p.V_Q_sim - p.V_C_sim for p in pts))
    return [
        _check("V_Q, V_C extracted", extracted, 1e-4),
        _check("V_Q, V_C direct", direct, 1e-12),
        _check("V_Q <= V_C", ordering, 1e-12),
    ]


def preparation_protocol() -> list[Check]:
    fid, prob = 0.0, 0.0
    for eta in np.linspace(0.0, math.pi / 2, 19):
        res = prepare_interpolation_state(eta).scenario
        fid = max(fid, res.errors()["fidelity"])
        prob = max(prob, res.errors()["success_probability"])
    return [_check("prepared-state fidelity", fid, 1e-12), _check("heralding probability 1/2", prob, 1e-12)]


def cross_model() -> list[Check]:
    rng = np.random.default_rng(SEED + 1)
    worst = 0.0
    for _ in range(5):
        field = CoherentField(rng.normal(size=2) + 1j * rng.normal(size=2))
        state, _ = coherent_to_fock(field)
        phi = rng.uniform(0, 2 * math.pi)
        out = propagate_fock(state, mach_zehnder(phi))
        analytic = propagate_coherent(field, mach_zehnder(phi)).amplitudes
        for mode, counts in enumerate(([1, 0], [0, 1])):
            sim = normally_ordered_moment(out, counts, counts).real
            worst = max(worst, abs(sim - abs(analytic[mode]) ** 2))
    g1 = 0.0
    for _ in range(20):
        alpha = complex(rng.normal(), rng.normal())
        res = classical_channel_model(alpha, rng.uniform(0, 2 * math.pi))
        g1 = max(g1, abs(res.classical_report.g1_abs - 1.0))
    return [_check("truncated Fock vs coherent", worst, 1e-9), _check("classical |g1| = 1", g1, 1e-10)]


def property_suite() -> list[Check]:
    rng = np.random.default_rng(SEED + 2)
    unitary, number, schwarz, closed = 0.0, 0.0, 0.0, 0.0
    for _ in range(200):
        psi = random_state(rng, 2, 3)
        chi = random_state(rng, 2, 3)
        u = random_unitary(rng, 2)
        unitary = max(unitary, abs(inner_product(propagate_fock(psi, u), propagate_fock(chi, u)) - inner_product(psi, chi)))
        before = sum(normally_ordered_moment(psi, e, e).real for e in ([1, 0], [0, 1]))
        moved = propagate_fock(psi, u)
        after = sum(normally_ordered_moment(moved, e, e).real for e in ([1, 0], [0, 1]))
        number = max(number, abs(before - after))
        g11, g22 = (first_order_correlation(psi, i, i).real for i in (0, 1))
        schwarz = max(schwarz, abs(first_order_correlation(psi, 0, 1)) ** 2 - g11 * g22)
        phi = rng.uniform(0, 2 * math.pi)
        i_a = normally_ordered_moment(propagate_fock(psi, mach_zehnder_output(phi)), [1, 0], [1, 0]).real
        closed = max(closed, abs(i_a - general_intensity_closed_form(dict(psi.amplitudes), phi)))
    return [
        _check("inner products under unitaries", unitary, 1e-12),
        _check("photon number conservation", number, 1e-12),
        _check("Cauchy-Schwarz on G1", max(schwarz, 0.0), 1e-12),
        _check("operator vs closed-form intensity", closed, 1e-12),
    ]


SUITE: list[Callable[[], Check | list[Check]]] = [
    single_photon_fringe,
    young_law,
    suppression_endpoint,
    fig2_reproduction,
    visibility_surfaces,
    preparation_protocol,
    cross_model,
    property_suite,
]


def run_suite() -> list[Check]:
    checks: list[Check] = []
    for fn in SUITE:
        out = fn()
        checks.extend(out if isinstance(out, list) else [out])
    return checks

