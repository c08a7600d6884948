"""Linear-optical mode transforms acting on Fock states and coherent fields.

Convention: a :class:`ModeTransform` with matrix ``U`` replaces each input
creation operator by ``a_i^dag -> sum_j U[i, j] b_j^dag`` where ``b_j`` are the
output modes. Composition ``compose(first, then)`` is therefore the matrix
product ``first.matrix @ then.matrix``.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Iterator, Sequence

import numpy as np

from .fock import FockError, FockState, ModeCountMismatch, ModeIndexError, Occupation

UNITARY_TOLERANCE = 1e-10
COHERENT_TAIL_TARGET = 1e-12

_SQRT_HALF = 1.0 / math.sqrt(2.0)

# Row layout of the 2x2 splitter block for each sign tag. "hadamard" puts the
# minus sign on the (j, j) entry, which is what both the input and output
# splitters of the Mach-Zehnder reduce to; "rotation" is the real 45 degree
# rotation with the minus sign on (j, i).
SPLITTER_BLOCKS = {
    "hadamard": np.array([[1.0, 1.0], [1.0, -1.0]]) * _SQRT_HALF,
    "rotation": np.array([[1.0, 1.0], [-1.0, 1.0]]) * _SQRT_HALF,
}


class NonUnitaryTransform(FockError):
    pass


@dataclass(frozen=True, eq=False)
class ModeTransform:
    matrix: np.ndarray

    def __post_init__(self):
        m = np.array(self.matrix, dtype=complex)
        if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] == 0:
            raise ValueError(f"mode transform must be a non-empty square matrix, got shape {m.shape}")
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)

    @property
    def mode_count(self) -> int:
        return self.matrix.shape[0]

    def unitarity_error(self) -> float:
        u = self.matrix
        return float(np.max(np.abs(u @ u.conj().T - np.eye(self.mode_count))))

    def is_unitary(self, tol: float = UNITARY_TOLERANCE) -> bool:
        return self.unitarity_error() <= tol

    def image(self, mode: int) -> np.ndarray:
        """Coefficients of input mode ``mode`` over the output creation operators."""
        return self.matrix[mode]


def identity(mode_count: int) -> ModeTransform:
    return ModeTransform(np.eye(mode_count))


def _embed(block: np.ndarray, i: int, j: int, mode_count: int) -> ModeTransform:
    for m in (i, j):
        if not 0 <= m < mode_count:
            raise ModeIndexError(f"mode {m} out of range for {mode_count} modes")
    if i == j:
        raise ValueError("two-mode element needs two distinct modes")
    u = np.eye(mode_count, dtype=complex)
    u[i, i], u[i, j] = block[0]
    u[j, i], u[j, j] = block[1]
    return ModeTransform(u)


def balanced_splitter(i: int, j: int, mode_count: int, sign: str = "hadamard") -> ModeTransform:
    """50/50 splitter between modes ``i`` and ``j``.

    With the default sign tag, ``i^dag -> (i^dag + j^dag)/sqrt2`` and
    ``j^dag -> (i^dag - j^dag)/sqrt2``.
    """
    try:
        block = SPLITTER_BLOCKS[sign]
    except KeyError:
        raise ValueError(f"unknown splitter sign tag {sign!r}; choose from {sorted(SPLITTER_BLOCKS)}") from None
    return _embed(block, i, j, mode_count)


def phase_shifter(i: int, phi: float, mode_count: int) -> ModeTransform:
    if not 0 <= i < mode_count:
        raise ModeIndexError(f"mode {i} out of range for {mode_count} modes")
    u = np.eye(mode_count, dtype=complex)
    u[i, i] = np.exp(1j * phi)
    return ModeTransform(u)


def polarization_rotation(i: int, j: int, eta: float, mode_count: int) -> ModeTransform:
    """Real rotation ``[[cos, sin], [-sin, cos]]`` on the pair ``(i, j)``."""
    c, s = math.cos(eta), math.sin(eta)
    return _embed(np.array([[c, s], [-s, c]]), i, j, mode_count)


def compose(first: ModeTransform, then: ModeTransform) -> ModeTransform:
    """Transform equivalent to applying ``first`` and afterwards ``then``."""
    if first.mode_count != then.mode_count:
        raise ModeCountMismatch(f"{first.mode_count} vs {then.mode_count} modes")
    return ModeTransform(first.matrix @ then.matrix)


def compose_all(transforms: Sequence[ModeTransform]) -> ModeTransform:
    if not transforms:
        raise ValueError("need at least one transform")
    out = transforms[0]
    for t in transforms[1:]:
        out = compose(out, t)
    return out


def mach_zehnder_output(phi: float) -> ModeTransform:
    """Inside modes (1, 2) to detector modes (A, B): shifter on 1, then splitter."""
    return compose(phase_shifter(0, phi, 2), balanced_splitter(0, 1, 2))


def mach_zehnder(phi: float) -> ModeTransform:
    """Input modes (a, b) to detector modes (A, B) for the full interferometer."""
    return compose(balanced_splitter(0, 1, 2), mach_zehnder_output(phi))


# -- Fock propagation ---------------------------------------------------------

Monomial = tuple[int, ...]


def _multiply(p: dict[Monomial, complex], q: dict[Monomial, complex]) -> dict[Monomial, complex]:
    out: dict[Monomial, complex] = {}
    for mp, cp in p.items():
        for mq, cq in q.items():
            key = tuple(x + y for x, y in zip(mp, mq))
            out[key] = out.get(key, 0j) + cp * cq
    return out


class _RowPowers:
    """Caches (sum_j U[i, j] x_j)^k as monomial dictionaries."""

    def __init__(self, u: np.ndarray):
        self.u = u
        n = u.shape[0]
        self.linear = []
        for i in range(n):
            row = {}
            for j in range(n):
                if u[i, j] != 0:
                    mono = [0] * n
                    mono[j] = 1
                    row[tuple(mono)] = complex(u[i, j])
            self.linear.append(row)
        self.cache: dict[tuple[int, int], dict[Monomial, complex]] = {}

    def power(self, i: int, k: int) -> dict[Monomial, complex]:
        if k == 0:
            return {(0,) * self.u.shape[0]: 1.0 + 0j}
        key = (i, k)
        if key not in self.cache:
            self.cache[key] = _multiply(self.power(i, k - 1), self.linear[i])
        return self.cache[key]


def propagate_fock(state: FockState, t: ModeTransform) -> FockState:
    """Push a Fock state through a unitary mode transform.

    Each ket ``prod (a_i^dag)^n_i / sqrt(n_i!) |0>`` has its creation
    operators substituted and is re-expanded in the output number basis.
    """
    if state.mode_count != t.mode_count:
        raise ModeCountMismatch(f"state has {state.mode_count} modes, transform {t.mode_count}")
    if not t.is_unitary():
        raise NonUnitaryTransform(f"transform deviates from unitarity by {t.unitarity_error():.3g}")
    rows = _RowPowers(t.matrix)
    out: dict[Occupation, complex] = {}
    for occ, amp in state.amplitudes.items():
        poly = {(0,) * state.mode_count: amp / math.prod(math.sqrt(math.factorial(n)) for n in occ)}
        for i, n in enumerate(occ):
            if n:
                poly = _multiply(poly, rows.power(i, n))
        for mono, coeff in poly.items():
            weight = math.prod(math.sqrt(math.factorial(m)) for m in mono)
            out[mono] = out.get(mono, 0j) + coeff * weight
    return FockState(state.mode_count, out)


# -- coherent fields ----------------------------------------------------------

@dataclass(frozen=True, eq=False)
class CoherentField:
    """Product of Glauber coherent states, one complex amplitude per mode."""

    amplitudes: np.ndarray

    def __post_init__(self):
        a = np.array(self.amplitudes, dtype=complex).reshape(-1)
        if a.size == 0:
            raise ValueError("coherent field needs at least one mode")
        a.setflags(write=False)
        object.__setattr__(self, "amplitudes", a)

    @property
    def mode_count(self) -> int:
        return self.amplitudes.size

    @property
    def mean_photon_number(self) -> float:
        return float(np.sum(np.abs(self.amplitudes) ** 2))


def propagate_coherent(field: CoherentField, t: ModeTransform) -> CoherentField:
    """exp(sum alpha_i a_i^dag) maps to exp(sum_j (U^T alpha)_j b_j^dag)."""
    if field.mode_count != t.mode_count:
        raise ModeCountMismatch(f"field has {field.mode_count} modes, transform {t.mode_count}")
    return CoherentField(t.matrix.T @ field.amplitudes)


def poisson_tail(mean: float, cutoff: int) -> float:
    """P(N > cutoff) for N ~ Poisson(mean), summed term by term."""
    if mean == 0.0:
        return 0.0
    log_mean = math.log(mean)
    total = 0.0
    n = cutoff + 1
    while True:
        term = math.exp(-mean + n * log_mean - math.lgamma(n + 1))
        total += term
        if n > mean and term < 1e-30 * max(total, 1e-300):
            return total
        n += 1


def default_cutoff(field: CoherentField, target: float = COHERENT_TAIL_TARGET) -> int:
    """Smallest total-photon cutoff whose neglected probability is below ``target``."""
    mean = field.mean_photon_number
    cutoff = 0
    while poisson_tail(mean, cutoff) >= target:
        cutoff += 1
    return cutoff


def _occupations_up_to(mode_count: int, total: int) -> Iterator[Occupation]:
    if mode_count == 1:
        for n in range(total + 1):
            yield (n,)
        return
    for n in range(total + 1):
        for rest in _occupations_up_to(mode_count - 1, total - n):
            yield (n,) + rest


def coherent_to_fock(field: CoherentField, cutoff: int | None = None) -> tuple[FockState, float]:
    """Truncated number-basis expansion of a coherent field.

    Keeps all occupations with total photon number <= ``cutoff`` and returns
    ``(state, neglected_mass)``. The state is not renormalized, so its squared
    norm is ``1 - neglected_mass``. Without a cutoff, the smallest one with
    neglected mass below 1e-12 is used.
    """
    if cutoff is None:
        cutoff = default_cutoff(field)
    if cutoff < 0:
        raise ValueError("cutoff must be non-negative")
    per_mode = []
    for alpha in field.amplitudes:
        pref = math.exp(-abs(alpha) ** 2 / 2)
        coeffs = [pref]
        for n in range(1, cutoff + 1):
            coeffs.append(coeffs[-1] * alpha / math.sqrt(n))
        per_mode.append(coeffs)
    amps = {}
    for occ in _occupations_up_to(field.mode_count, cutoff):
        amps[occ] = math.prod((per_mode[i][n] for i, n in enumerate(occ)), start=1 + 0j)
    return FockState(field.mode_count, amps), poisson_tail(field.mean_photon_number, cutoff)


# -- circuit descriptions -----------------------------------------------------

@dataclass(frozen=True)
class CircuitSpec:
    """Ordered list of optical elements on ``mode_count`` modes.

    Elements are plain dicts, matching the JSON layout::

        {"type": "splitter", "modes": [i, j], "sign": "hadamard"}
        {"type": "phase", "mode": i, "phi": 0.3}
        {"type": "polrot", "modes": [i, j], "eta": 0.7}
    """

    mode_count: int
    elements: tuple[dict, ...] = field(default_factory=tuple)

    def __post_init__(self):
        object.__setattr__(self, "elements", tuple(dict(e) for e in self.elements))
        self.to_transform()

    def _element(self, e: dict) -> ModeTransform:
        kind = e.get("type")
        n = self.mode_count
        if kind == "splitter":
            i, j = e["modes"]
            return balanced_splitter(i, j, n, e.get("sign", "hadamard"))
        if kind == "phase":
            return phase_shifter(e["mode"], float(e["phi"]), n)
        if kind == "polrot":
            i, j = e["modes"]
            return polarization_rotation(i, j, float(e["eta"]), n)
        raise ValueError(f"unknown circuit element type {kind!r}")

    def to_transform(self) -> ModeTransform:
        t = identity(self.mode_count)
        for e in self.elements:
            t = compose(t, self._element(e))
        if not t.is_unitary():
            raise NonUnitaryTransform("composed circuit is not unitary")
        return t

    def to_dict(self) -> dict:
        return {"modes": self.mode_count, "elements": [dict(e) for e in self.elements]}

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)

    @classmethod
    def from_dict(cls, data: dict) -> "CircuitSpec":
        return cls(int(data["modes"]), tuple(data.get("elements", ())))

    @classmethod
    def from_json(cls, text: str) -> "CircuitSpec":
        return cls.from_dict(json.loads(text))


__all__ = [
    "CircuitSpec",
    "CoherentField",
    "ModeTransform",
    "NonUnitaryTransform",
    "balanced_splitter",
    "coherent_to_fock",
    "compose",
    "compose_all",
    "default_cutoff",
    "identity",
    "mach_zehnder",
    "mach_zehnder_output",
    "phase_shifter",
    "poisson_tail",
    "polarization_rotation",
    "propagate_coherent",
    "propagate_fock",
]
