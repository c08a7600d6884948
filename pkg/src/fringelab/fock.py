"""Sparse multimode bosonic number states.

A :class:`FockState` maps occupation tuples ``(n_0, n_1, ...)`` to complex
amplitudes. States are immutable; every operation returns a new state.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from types import MappingProxyType
from typing import Iterable, Mapping, Sequence

PRUNE_THRESHOLD = 1e-15
NORM_TOLERANCE = 1e-10

Occupation = tuple[int, ...]


class FockError(ValueError):
    """Base error for invalid Fock-space operations."""


class ModeIndexError(FockError):
    pass


class ModeCountMismatch(FockError):
    pass


class ZeroStateError(FockError):
    pass


class UnnormalizedStateError(FockError):
    pass


class PostSelectionFailure(FockError):
    """Raised when a projection keeps no amplitude at all."""


def _check_mode(mode: int, mode_count: int) -> None:
    if not 0 <= mode < mode_count:
        raise ModeIndexError(f"mode {mode} out of range for {mode_count} modes")


@dataclass(frozen=True)
class FockState:
    mode_count: int
    amplitudes: Mapping[Occupation, complex] = field(default_factory=dict)

    def __post_init__(self):
        if self.mode_count < 1:
            raise FockError("mode_count must be positive")
        cleaned: dict[Occupation, complex] = {}
        for occ, amp in self.amplitudes.items():
            occ = tuple(int(n) for n in occ)
            if len(occ) != self.mode_count:
                raise FockError(f"occupation {occ} does not have {self.mode_count} entries")
            if any(n < 0 for n in occ):
                raise FockError(f"negative occupation in {occ}")
            amp = complex(amp)
            if abs(amp) >= PRUNE_THRESHOLD:
                cleaned[occ] = cleaned.get(occ, 0j) + amp
        object.__setattr__(self, "amplitudes", MappingProxyType(cleaned))

    @classmethod
    def basis(cls, *occupation: int, amplitude: complex = 1.0) -> "FockState":
        """Single number-basis ket, e.g. ``FockState.basis(2, 0)`` for |2,0>."""
        return cls(len(occupation), {tuple(occupation): amplitude})

    @classmethod
    def vacuum(cls, mode_count: int) -> "FockState":
        return cls(mode_count, {(0,) * mode_count: 1.0})

    @classmethod
    def zero(cls, mode_count: int) -> "FockState":
        return cls(mode_count, {})

    def __getitem__(self, occ: Sequence[int]) -> complex:
        return self.amplitudes.get(tuple(occ), 0j)

    def __len__(self) -> int:
        return len(self.amplitudes)

    def __add__(self, other: "FockState") -> "FockState":
        if self.mode_count != other.mode_count:
            raise ModeCountMismatch("cannot add states with different mode counts")
        out = dict(self.amplitudes)
        for occ, amp in other.amplitudes.items():
            out[occ] = out.get(occ, 0j) + amp
        return FockState(self.mode_count, out)

    def __sub__(self, other: "FockState") -> "FockState":
        return self + (-1.0) * other

    def __mul__(self, scalar: complex) -> "FockState":
        return FockState(self.mode_count, {k: scalar * v for k, v in self.amplitudes.items()})

    __rmul__ = __mul__

    def __truediv__(self, scalar: complex) -> "FockState":
        return self * (1.0 / scalar)

    @property
    def norm_squared(self) -> float:
        return math.fsum(abs(a) ** 2 for a in self.amplitudes.values())

    @property
    def is_normalized(self) -> bool:
        return abs(self.norm_squared - 1.0) <= NORM_TOLERANCE

    @property
    def is_zero(self) -> bool:
        return not self.amplitudes

    def photon_numbers(self) -> set[int]:
        """Distinct total photon numbers present in the superposition."""
        return {sum(occ) for occ in self.amplitudes}

    def mean_occupation(self, mode: int) -> float:
        """<n_mode> read directly off the amplitudes (no ladder operators)."""
        _check_mode(mode, self.mode_count)
        return math.fsum(occ[mode] * abs(a) ** 2 for occ, a in self.amplitudes.items())

    def to_json(self) -> list[dict]:
        return [
            {"occupation": list(occ), "re": amp.real, "im": amp.imag}
            for occ, amp in sorted(self.amplitudes.items())
        ]

    @classmethod
    def from_json(cls, entries: Iterable[Mapping]) -> "FockState":
        entries = list(entries)
        if not entries:
            raise FockError("cannot infer mode count from an empty entry list")
        mode_count = len(entries[0]["occupation"])
        amps: dict[Occupation, complex] = {}
        for e in entries:
            occ = tuple(e["occupation"])
            amps[occ] = amps.get(occ, 0j) + complex(e["re"], e["im"])
        return cls(mode_count, amps)

    def __repr__(self) -> str:
        terms = " + ".join(
            f"({amp.real:.6g}{amp.imag:+.6g}j)|{','.join(map(str, occ))}>"
            for occ, amp in sorted(self.amplitudes.items())
        )
        return f"FockState[{self.mode_count}]({terms or '0'})"


@dataclass(frozen=True)
class OperatorPolynomial:
    """Polynomial in creation operators acting on vacuum.

    ``terms`` is a list of ``(coefficient, [(mode, power), ...])``. Creation
    operators commute, so factor order does not matter and repeated modes add.
    """

    terms: tuple[tuple[complex, tuple[tuple[int, int], ...]], ...] = ()

    def __post_init__(self):
        norm = []
        for coeff, factors in self.terms:
            factors = tuple((int(m), int(p)) for m, p in factors)
            for m, p in factors:
                if m < 0:
                    raise ModeIndexError(f"negative mode index {m}")
                if p < 1:
                    raise FockError(f"creation power must be >= 1, got {p}")
            norm.append((complex(coeff), factors))
        object.__setattr__(self, "terms", tuple(norm))

    @classmethod
    def term(cls, coeff: complex, powers: Mapping[int, int]) -> "OperatorPolynomial":
        return cls(((coeff, tuple(powers.items())),))

    def __add__(self, other: "OperatorPolynomial") -> "OperatorPolynomial":
        return OperatorPolynomial(self.terms + other.terms)

    def __mul__(self, scalar: complex) -> "OperatorPolynomial":
        return OperatorPolynomial(tuple((scalar * c, f) for c, f in self.terms))

    __rmul__ = __mul__


def state_from_polynomial(poly: OperatorPolynomial, mode_count: int) -> FockState:
    """Expand ``poly(a_0^dag, ...)|0>`` in the number basis. Not normalized."""
    amps: dict[Occupation, complex] = {}
    for coeff, factors in poly.terms:
        occ = [0] * mode_count
        for mode, power in factors:
            _check_mode(mode, mode_count)
            occ[mode] += power
        weight = math.prod(math.sqrt(math.factorial(n)) for n in occ)
        key = tuple(occ)
        amps[key] = amps.get(key, 0j) + coeff * weight
    return FockState(mode_count, amps)


def inner_product(bra: FockState, ket: FockState) -> complex:
    """<bra|ket>, conjugate-linear in ``bra``."""
    if bra.mode_count != ket.mode_count:
        raise ModeCountMismatch(f"{bra.mode_count} vs {ket.mode_count} modes")
    small, large = (bra, ket) if len(bra) <= len(ket) else (ket, bra)
    total = 0j
    for occ in small.amplitudes:
        if occ in large.amplitudes:
            total += bra.amplitudes[occ].conjugate() * ket.amplitudes[occ]
    return total


def apply_annihilation(state: FockState, mode: int, power: int = 1) -> FockState:
    """Apply ``a_mode**power`` using a|n> = sqrt(n)|n-1>."""
    _check_mode(mode, state.mode_count)
    out: dict[Occupation, complex] = {}
    for occ, amp in state.amplitudes.items():
        n = occ[mode]
        if n < power:
            continue
        factor = math.sqrt(math.perm(n, power))
        new = occ[:mode] + (n - power,) + occ[mode + 1:]
        out[new] = amp * factor
    return FockState(state.mode_count, out)


def apply_creation(state: FockState, mode: int, power: int = 1) -> FockState:
    _check_mode(mode, state.mode_count)
    out: dict[Occupation, complex] = {}
    for occ, amp in state.amplitudes.items():
        n = occ[mode]
        factor = math.sqrt(math.perm(n + power, power))
        new = occ[:mode] + (n + power,) + occ[mode + 1:]
        out[new] = amp * factor
    return FockState(state.mode_count, out)


def _lower_all(state: FockState, counts: Sequence[int]) -> FockState:
    if len(counts) != state.mode_count:
        raise ModeCountMismatch(f"expected {state.mode_count} counts, got {len(counts)}")
    for mode, k in enumerate(counts):
        if k < 0:
            raise FockError("operator counts must be non-negative")
        if k:
            state = apply_annihilation(state, mode, k)
    return state


def normally_ordered_moment(
    state: FockState,
    creation_counts: Sequence[int],
    annihilation_counts: Sequence[int],
) -> complex:
    """<psi| prod a_i^dag^m_i  prod a_j^n_j |psi> for a normalized state.

    Evaluated as the overlap of the two lowered states, so it is real
    whenever the creation and annihilation counts coincide.
    """
    if not state.is_normalized:
        raise UnnormalizedStateError(f"state norm^2 = {state.norm_squared!r}, expected 1")
    bra = _lower_all(state, creation_counts)
    ket = _lower_all(state, annihilation_counts)
    value = inner_product(bra, ket)
    if list(creation_counts) == list(annihilation_counts):
        return complex(value.real, 0.0)
    return value


def normalize(state: FockState) -> FockState:
    norm2 = state.norm_squared
    if norm2 == 0.0:
        raise ZeroStateError("cannot normalize the zero state")
    return state / math.sqrt(norm2)


def project_vacuum(state: FockState, modes: Iterable[int]) -> tuple[FockState, float]:
    """Post-select on zero photons in ``modes``.

    Returns the renormalized state on the remaining modes (original order
    preserved) and the probability of the vacuum outcome. Raises
    :class:`PostSelectionFailure` when that probability is zero.
    """
    if not state.is_normalized:
        raise UnnormalizedStateError(f"state norm^2 = {state.norm_squared!r}, expected 1")
    drop = sorted(set(modes))
    for m in drop:
        _check_mode(m, state.mode_count)
    keep = [m for m in range(state.mode_count) if m not in drop]
    if not keep:
        raise FockError("cannot project out every mode")
    kept: dict[Occupation, complex] = {}
    for occ, amp in state.amplitudes.items():
        if all(occ[m] == 0 for m in drop):
            kept[tuple(occ[m] for m in keep)] = amp
    projected = FockState(len(keep), kept)
    probability = projected.norm_squared
    if probability == 0.0:
        raise PostSelectionFailure(f"no amplitude with vacuum in modes {drop}")
    return normalize(projected), probability


def fidelity(a: FockState, b: FockState) -> float:
    """|<a|b>|^2 for normalized states; insensitive to global phase."""
    return abs(inner_product(a, b)) ** 2
