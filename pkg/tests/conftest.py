"""Shared fixtures and independent oracles.

The oracles here deliberately avoid the sparse engine: moments are taken
with dense truncated ladder matrices, and propagation amplitudes come from
matrix permanents.
"""

import itertools
import math
import sys

import numpy as np
import pytest
from hypothesis import strategies as st

from fringelab.fock import FockState, normalize
from fringelab.optics import ModeTransform


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


# -- dense representation -----------------------------------------------------

def dense_basis(mode_count, cutoff):
    return list(itertools.product(range(cutoff + 1), repeat=mode_count))


def to_dense(state, cutoff):
    basis = dense_basis(state.mode_count, cutoff)
    index = {occ: k for k, occ in enumerate(basis)}
    vec = np.zeros(len(basis), dtype=complex)
    for occ, amp in state.amplitudes.items():
        vec[index[occ]] = amp
    return vec


def dense_annihilator(mode, mode_count, cutoff):
    single = np.diag(np.sqrt(np.arange(1, cutoff + 1)), k=1).astype(complex)
    ops = [single if m == mode else np.eye(cutoff + 1) for m in range(mode_count)]
    out = ops[0]
    for op in ops[1:]:
        out = np.kron(out, op)
    return out


def dense_moment(state, creation, annihilation, cutoff=None):
    """<psi| prod a^dag^m prod a^n |psi> with dense matrices."""
    cutoff = cutoff or max(sum(o) for o in state.amplitudes) + 1
    n = state.mode_count
    vec = to_dense(state, cutoff)
    op = np.eye(len(vec), dtype=complex)
    for mode, k in enumerate(creation):
        op = op @ np.linalg.matrix_power(dense_annihilator(mode, n, cutoff).conj().T, k)
    for mode, k in enumerate(annihilation):
        op = op @ np.linalg.matrix_power(dense_annihilator(mode, n, cutoff), k)
    return complex(vec.conj() @ op @ vec)


# -- permanent oracle for propagation -----------------------------------------

def permanent(m):
    n = m.shape[0]
    if n == 0:
        return 1.0 + 0j
    return sum(
        math.prod(m[i, p[i]] for i in range(n)) for p in itertools.permutations(range(n))
    )


def permanent_propagate(state, u):
    """<out|U|in> = Perm(U[rows repeated by in, cols repeated by out]) / sqrt(prod in! out!)."""
    u = np.asarray(u)
    n_modes = state.mode_count
    out = {}
    for occ, amp in state.amplitudes.items():
        total = sum(occ)
        rows = [i for i in range(n_modes) for _ in range(occ[i])]
        for target in itertools.product(range(total + 1), repeat=n_modes):
            if sum(target) != total:
                continue
            cols = [j for j in range(n_modes) for _ in range(target[j])]
            sub = u[np.ix_(rows, cols)] if total else np.zeros((0, 0))
            norm = math.sqrt(math.prod(math.factorial(k) for k in occ) * math.prod(math.factorial(k) for k in target))
            out[target] = out.get(target, 0j) + amp * permanent(sub) / norm
    return FockState(n_modes, out)


def random_unitary(rng, n):
    z = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    q, r = np.linalg.qr(z)
    return ModeTransform(q * (np.diag(r) / np.abs(np.diag(r))))


# -- hypothesis strategies ----------------------------------------------------

amplitude = st.complex_numbers(min_magnitude=0.05, max_magnitude=1.0, allow_nan=False, allow_infinity=False)


@st.composite
def fock_states(draw, min_modes=1, max_modes=4, max_photons=3, modes=None):
    m = modes if modes is not None else draw(st.integers(min_modes, max_modes))
    occ = st.tuples(*[st.integers(0, max_photons)] * m).filter(lambda o: sum(o) <= max_photons)
    amps = draw(st.dictionaries(occ, amplitude, min_size=1, max_size=6))
    return normalize(FockState(m, amps))


@st.composite
def unitaries(draw, n):
    seed = draw(st.integers(0, 2**32 - 1))
    return random_unitary(np.random.default_rng(seed), n)


def pytest_terminal_summary(terminalreporter):
    module = sys.modules.get("test_acceptance")
    lines = getattr(module, "RESULTS", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
