"""Encoded six-qubit state, conditional BC states and the disentanglers.

The register layout is ``(Q, R, A, B, C, D)``. The encoded state is

    |QRABCD> = 1/sqrt(2) sum_{ijkl} U_ij U'_jk U''_kl |l i i j k l>

with ``U``, ``U'``, ``U''`` real rotations by ``theta``, ``theta_prime`` and
``theta_double_prime``. Alice holds ``A, B`` and Bob holds ``C, D``.
"""

from __future__ import annotations

import enum
import itertools
import math
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .qcore import (
    IDENTITY,
    PAULI_X,
    PAULI_Z,
    PROJ,
    DensityMatrix,
    InvalidArgumentError,
    QubitLayout,
    StateVector,
    UnitaryOperator,
    apply_unitary,
    partial_trace,
    reduced_state,
    rotation_array,
    tensor_product,
    von_neumann_entropy,
)

LAYOUT = QubitLayout(("Q", "R", "A", "B", "C", "D"))
ABCD = LAYOUT.positions("ABCD")
BC = LAYOUT.positions("BC")
QRAD = LAYOUT.positions("QRAD")

QUARTER_PI_TOL = 1e-12
DEGENERATE_P = 1e-14
PASS_TOL = 1e-9


class DegenerateOutcomeError(ValueError):
    """A conditional outcome with (numerically) zero probability."""


def is_quarter_pi(angle: float, tol: float = QUARTER_PI_TOL) -> bool:
    """True for angles in the pi/4 class, i.e. ``|cos^2 - 1/2| < tol``."""
    return abs(math.cos(angle) ** 2 - 0.5) < tol


@dataclass(frozen=True)
class AngleTriple:
    """Relative measurement angles in radians.

    ``theta`` separates the observables measured with A and B,
    ``theta_prime`` those of B and C, ``theta_double_prime`` those of C and D.
    """

    theta: float
    theta_prime: float
    theta_double_prime: float

    def __post_init__(self):
        for name in ("theta", "theta_prime", "theta_double_prime"):
            value = float(getattr(self, name))
            if not math.isfinite(value):
                raise InvalidArgumentError(f"{name} must be finite, got {value!r}")
            object.__setattr__(self, name, value)

    def rotations(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        return tuple(rotation_array(t) for t in self.as_tuple())

    def as_tuple(self) -> tuple[float, float, float]:
        return (self.theta, self.theta_prime, self.theta_double_prime)


class ProtocolMode(enum.Enum):
    WITH_COMMUNICATION = "locc"
    LOCAL_ONLY = "local"

    def check_angles(self, angles: AngleTriple, tol: float = QUARTER_PI_TOL) -> None:
        """Raise :class:`InvalidArgumentError` if ``angles`` don't suit this mode."""
        if not is_quarter_pi(angles.theta, tol):
            raise InvalidArgumentError(
                f"{self.value} mode needs theta in the pi/4 class, got {angles.theta!r}"
            )
        if self is ProtocolMode.LOCAL_ONLY and not is_quarter_pi(angles.theta_double_prime, tol):
            raise InvalidArgumentError(
                "local mode needs theta_double_prime in the pi/4 class, "
                f"got {angles.theta_double_prime!r}"
            )


@dataclass(frozen=True)
class PreparedSystem:
    state: StateVector
    angles: AngleTriple

    def __post_init__(self):
        if self.state.num_qubits != len(LAYOUT):
            raise InvalidArgumentError("prepared state must live on (Q, R, A, B, C, D)")
        rho_q = reduced_state(self.state, [LAYOUT.position("Q")])
        if np.max(np.abs(rho_q.matrix - 0.5 * np.eye(2))) > 1e-10:
            raise InvalidArgumentError("reduced state of Q is not maximally mixed")


@dataclass(frozen=True)
class VerificationReport:
    fidelity_to_target: float
    final_entanglement_entropy: float
    bc_purity: float
    mutual_info_bc_rest: float
    mode: ProtocolMode
    angles: AngleTriple

    @property
    def passed(self) -> bool:
        return (self.fidelity_to_target > 1 - PASS_TOL
                and self.mutual_info_bc_rest < PASS_TOL)

    def as_dict(self) -> dict:
        return {
            "mode": self.mode.value,
            "theta": self.angles.theta,
            "theta_prime": self.angles.theta_prime,
            "theta_double_prime": self.angles.theta_double_prime,
            "fidelity_to_target": self.fidelity_to_target,
            "final_entanglement_entropy": self.final_entanglement_entropy,
            "bc_purity": self.bc_purity,
            "mutual_info_bc_rest": self.mutual_info_bc_rest,
            "passed": self.passed,
        }


def _index(bits) -> int:
    index = 0
    for b in bits:
        index = 2 * index + b
    return index


def encoded_amplitudes(angles: AngleTriple) -> np.ndarray:
    """Raw 64-amplitude vector of the encoded state (no validation)."""
    u, up, upp = angles.rotations()
    amps = np.zeros(2 ** len(LAYOUT), dtype=complex)
    for i, j, k, l in itertools.product((0, 1), repeat=4):
        amps[_index((l, i, i, j, k, l))] += u[i, j] * up[j, k] * upp[k, l] / math.sqrt(2)
    return amps


def prepare_joint_state(angles: AngleTriple) -> PreparedSystem:
    return PreparedSystem(StateVector(encoded_amplitudes(angles)), angles)


def reduced_abcd(system: PreparedSystem) -> DensityMatrix:
    """Trace out Q and R, leaving the 16x16 state of (A, B, C, D)."""
    return reduced_state(system.state, ABCD)


def conditional_amplitudes(angles: AngleTriple, i: int, l: int) -> np.ndarray:
    """Unnormalized ``sum_jk U_ij U'_jk U''_kl |jk>`` on (B, C)."""
    _check_bits(i, l)
    u, up, upp = angles.rotations()
    return np.array([u[i, j] * up[j, k] * upp[k, l]
                     for j in (0, 1) for k in (0, 1)], dtype=complex)


def conditional_state(angles: AngleTriple, i: int, l: int) -> tuple[float, StateVector]:
    """Probability weight ``p_il`` and normalized BC state for outcome ``(i, l)``.

    The weights sum to 2 over the four outcomes. A weight below ``1e-14``
    raises :class:`DegenerateOutcomeError` since the state is undefined.
    """
    amps = conditional_amplitudes(angles, i, l)
    p = float(np.vdot(amps, amps).real)
    if p < DEGENERATE_P:
        raise DegenerateOutcomeError(f"outcome (i={i}, l={l}) has weight {p:.3e}")
    return p, StateVector(amps / math.sqrt(p))


def conditional_probability(angles: AngleTriple, i: int, l: int) -> float:
    """``p_il`` from squared matrix elements alone."""
    _check_bits(i, l)
    u, up, upp = (m**2 for m in angles.rotations())
    return float(sum(u[i, j] * up[j, k] * upp[k, l] for j in (0, 1) for k in (0, 1)))


def generalized_bell(theta_double_prime: float, z: int, x: int) -> StateVector:
    """Bell basis rotated by ``theta_double_prime``; standard one at pi/4."""
    _check_bits(z, x)
    s, c = math.sin(theta_double_prime), math.cos(theta_double_prime)
    table = {
        (0, 0): [s, 0, 0, c],
        (0, 1): [0, s, c, 0],
        (1, 0): [c, 0, 0, -s],
        (1, 1): [0, c, -s, 0],
    }
    return StateVector(np.array(table[z, x], dtype=complex))


def standard_bell(z: int, x: int) -> StateVector:
    """``(1 (x) X^x Z^z) |Phi+>``."""
    _check_bits(z, x)
    phi_plus = np.array([1, 0, 0, 1], dtype=complex) / math.sqrt(2)
    local = _power(PAULI_X, x) @ _power(PAULI_Z, z)
    return StateVector(np.kron(IDENTITY, local) @ phi_plus)


def target_state(angles: AngleTriple, mode: ProtocolMode) -> StateVector:
    """Closed form of ``|phi_00>`` when theta (and for local mode theta'') is pi/4.

    ``-sin(t') |b01> + cos(t') |b10>`` in the generalized Bell basis for
    the communicating protocol, and in the standard Bell basis for the
    local one. Other members of the pi/4 class (3pi/4, ...) give a
    ``|phi_00>`` that differs by a local Pauli, so :func:`run_protocol`
    scores against :func:`conditional_state` instead.
    """
    s, c = math.sin(angles.theta_prime), math.cos(angles.theta_prime)
    if mode is ProtocolMode.WITH_COMMUNICATION:
        b01 = generalized_bell(angles.theta_double_prime, 0, 1)
        b10 = generalized_bell(angles.theta_double_prime, 1, 0)
    else:
        b01, b10 = standard_bell(0, 1), standard_bell(1, 0)
    return StateVector(-s * b01.amplitudes + c * b10.amplitudes)


def _check_bits(*bits: int) -> None:
    for b in bits:
        if b not in (0, 1):
            raise InvalidArgumentError(f"expected a bit, got {b!r}")


def _power(m: np.ndarray, e: int) -> np.ndarray:
    return m if e % 2 else IDENTITY


def encoding_pair(mode: ProtocolMode, i: int, l: int) -> np.ndarray:
    """The 4x4 operator taking ``|phi_00>`` to ``|phi_il>`` (up to phase)."""
    _check_bits(i, l)
    if mode is ProtocolMode.WITH_COMMUNICATION:
        # Z^{i+l} X^l (x) X^l
        return np.kron(_power(PAULI_Z, i + l) @ _power(PAULI_X, l), _power(PAULI_X, l))
    # Z^i (x) (-Z)^l
    return np.kron(_power(PAULI_Z, i), _power(-PAULI_Z, l) if l else IDENTITY)


def disentangler_pair(mode: ProtocolMode, i: int, l: int) -> UnitaryOperator:
    """Conditional operation on (B, C) that undoes :func:`encoding_pair`."""
    return UnitaryOperator(encoding_pair(mode, i, l).conj().T)


def _assembled(mode: ProtocolMode) -> np.ndarray:
    total = np.zeros((16, 16), dtype=complex)
    for i, l in itertools.product((0, 1), repeat=2):
        total += np.kron(np.kron(PROJ[i], disentangler_pair(mode, i, l).matrix), PROJ[l])
    return total


def local_halves() -> tuple[UnitaryOperator, UnitaryOperator]:
    """Alice's and Bob's controlled-phase gates.

    Alice: control on A, ``Z`` on B. Bob: control on D, ``-Z`` on C.
    """
    alice = sum(np.kron(PROJ[i], _power(PAULI_Z, i)) for i in (0, 1))
    bob = sum(np.kron(_power(-PAULI_Z, l) if l else IDENTITY, PROJ[l]) for l in (0, 1))
    return UnitaryOperator(alice, (0, 1)), UnitaryOperator(bob, (2, 3))


def disentangler_global(mode: ProtocolMode) -> UnitaryOperator:
    """Full disentangling operation on (A, B, C, D), targets ``(0, 1, 2, 3)``.

    The local-only operator is built as the tensor product of
    :func:`local_halves`; the communicating one is the sector sum
    ``sum_il |i><i| (x) V_il (x) |l><l|``, which has no such split.
    """
    if mode is ProtocolMode.LOCAL_ONLY:
        alice, bob = local_halves()
        return tensor_product(alice, bob)
    return UnitaryOperator(_assembled(mode))


def assembled_disentangler(mode: ProtocolMode) -> UnitaryOperator:
    """Sector-sum form of the disentangler, used to cross-check the gates."""
    return UnitaryOperator(_assembled(mode))


def run_protocol(
    angles: AngleTriple,
    mode: ProtocolMode,
    perturb: Optional[Callable[[np.ndarray], np.ndarray]] = None,
    angle_tol: float = QUARTER_PI_TOL,
) -> VerificationReport:
    """Prepare, disentangle and verify.

    The disentangler acts on positions A..D of the full six-qubit pure
    state, so the check covers Q and R as well as A and D.

    Args:
        angles: encoding angles; must suit ``mode``.
        mode: which disentangler family to use.
        perturb: test hook applied to the raw encoded amplitudes before
            the run; the result is renormalized.
        angle_tol: tolerance on ``|cos^2 - 1/2|`` for the pi/4 checks.
    """
    mode.check_angles(angles, angle_tol)
    amps = encoded_amplitudes(angles)
    if perturb is not None:
        amps = np.asarray(perturb(amps.copy()), dtype=complex)
        amps = amps / np.linalg.norm(amps)
    state = StateVector(amps)

    op = disentangler_global(mode).on(*ABCD)
    final = apply_unitary(op, state).density_matrix()

    rho_bc = partial_trace(final, BC)
    rho_b = partial_trace(final, [LAYOUT.position("B")])
    rho_rest = partial_trace(final, QRAD)
    mutual = (von_neumann_entropy(rho_bc) + von_neumann_entropy(rho_rest)
              - von_neumann_entropy(final))

    return VerificationReport(
        fidelity_to_target=rho_bc.expectation(conditional_state(angles, 0, 0)[1]),
        final_entanglement_entropy=von_neumann_entropy(rho_b),
        bc_purity=rho_bc.purity(),
        mutual_info_bc_rest=max(0.0, mutual),
        mode=mode,
        angles=angles,
    )
