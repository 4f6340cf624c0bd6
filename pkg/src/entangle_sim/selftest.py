"""Built-in invariant checks, run by ``entangle-sim selftest``.

Each check draws from a fixed-seed generator, so a run is reproducible.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from . import analysis, protocol
from .protocol import AngleTriple, ProtocolMode
from .qcore import (
    PAULI_X,
    PAULI_Z,
    DensityMatrix,
    StateVector,
    UnitaryOperator,
    apply_unitary,
    operator_schmidt_rank,
    partial_trace,
    rotation_matrix,
    tensor_product,
    trace_distance,
    von_neumann_entropy,
)

QUARTER_PI = math.pi / 4
SEED = 20180313


@dataclass(frozen=True)
class InvariantResult:
    module: str
    name: str
    passed: bool
    detail: str

    def as_dict(self) -> dict:
        return {"module": self.module, "name": self.name,
                "passed": self.passed, "detail": self.detail}


def random_state(rng: np.random.Generator, num_qubits: int) -> StateVector:
    v = rng.normal(size=2**num_qubits) + 1j * rng.normal(size=2**num_qubits)
    return StateVector(v / np.linalg.norm(v))


def random_density(rng: np.random.Generator, num_qubits: int) -> DensityMatrix:
    dim = 2**num_qubits
    g = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    rho = g @ g.conj().T
    rho = 0.5 * (rho + rho.conj().T)
    return DensityMatrix(rho / np.trace(rho).real)


def random_unitary(rng: np.random.Generator, num_qubits: int) -> np.ndarray:
    dim = 2**num_qubits
    g = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    q, r = np.linalg.qr(g)
    return q * (np.diag(r) / np.abs(np.diag(r)))


def _angles(rng, n, theta=None, theta_double_prime=None):
    for _ in range(n):
        t, tp, tpp = rng.uniform(0, math.pi, size=3)
        yield AngleTriple(t if theta is None else theta, tp,
                          tpp if theta_double_prime is None else theta_double_prime)


# --- qcore -----------------------------------------------------------------

def check_unitarity(rng) -> tuple[bool, str]:
    ops = [rotation_matrix(t).matrix for t in rng.uniform(-10, 10, size=20)]
    ops += [PAULI_X, PAULI_Z]
    for mode in ProtocolMode:
        ops.append(protocol.disentangler_global(mode).matrix)
        ops += [protocol.disentangler_pair(mode, i, l).matrix
                for i, l in itertools.product((0, 1), repeat=2)]
    worst = max(np.max(np.abs(m.conj().T @ m - np.eye(len(m)))) for m in ops)
    return worst < 1e-12, f"max |U^dag U - I| = {worst:.2e}"


def check_trace_preservation(rng) -> tuple[bool, str]:
    worst = 0.0
    for _ in range(20):
        n = int(rng.integers(2, 6))
        rho = random_density(rng, n)
        keep = [q for q in range(n) if rng.random() < 0.5] or [0]
        worst = max(worst, abs(np.trace(partial_trace(rho, keep).matrix).real - 1))
    return worst < 1e-12, f"max trace error = {worst:.2e}"


def check_entropy_additivity(rng) -> tuple[bool, str]:
    worst = 0.0
    for _ in range(20):
        a, b = random_density(rng, 1), random_density(rng, 1)
        joint = von_neumann_entropy(tensor_product(a, b))
        worst = max(worst, abs(joint - von_neumann_entropy(a) - von_neumann_entropy(b)))
    return worst < 1e-10, f"max |S(a x b) - S(a) - S(b)| = {worst:.2e}"


def check_trace_distance_metric(rng) -> tuple[bool, str]:
    worst_sym, worst_tri = 0.0, -np.inf
    for _ in range(20):
        r, s, t = (random_density(rng, 2) for _ in range(3))
        worst_sym = max(worst_sym, abs(trace_distance(r, s) - trace_distance(s, r)))
        worst_tri = max(worst_tri, trace_distance(r, t) - trace_distance(r, s) - trace_distance(s, t))
    ok = worst_sym == 0.0 and worst_tri < 1e-10
    return ok, f"symmetry gap {worst_sym:.2e}, worst triangle excess {worst_tri:.2e}"


def check_apply_unitary(rng) -> tuple[bool, str]:
    worst = 0.0
    for _ in range(10):
        u = UnitaryOperator(random_unitary(rng, 2), tuple(rng.choice(4, size=2, replace=False)))
        psi = apply_unitary(u, random_state(rng, 4))
        rho = apply_unitary(u, random_density(rng, 4)).matrix
        worst = max(worst, abs(psi.norm() - 1), abs(np.trace(rho).real - 1),
                    np.max(np.abs(rho - rho.conj().T)))
    return worst < 1e-10, f"max norm/trace/hermiticity error = {worst:.2e}"


# --- protocol --------------------------------------------------------------

def check_reconstruction(rng) -> tuple[bool, str]:
    worst = 0.0
    for angles in _angles(rng, 20):
        rho = protocol.reduced_abcd(protocol.prepare_joint_state(angles)).matrix
        built = np.zeros((16, 16), dtype=complex)
        for i, l in itertools.product((0, 1), repeat=2):
            v = protocol.conditional_amplitudes(angles, i, l)
            block = np.outer(v, v.conj())
            built += np.kron(np.kron(np.diag([1 - i, i]), block), np.diag([1 - l, l]))
        worst = max(worst, np.max(np.abs(0.5 * built - rho)))
    return worst < 1e-10, f"max entry error = {worst:.2e}"


def check_conditional_operators(rng) -> tuple[bool, str]:
    worst = 0.0
    for angles in _angles(rng, 20, theta=QUARTER_PI):
        _, phi00 = protocol.conditional_state(angles, 0, 0)
        for i, l in itertools.product((0, 1), repeat=2):
            _, phi = protocol.conditional_state(angles, i, l)
            moved = protocol.encoding_pair(ProtocolMode.WITH_COMMUNICATION, i, l) @ phi00.amplitudes
            worst = max(worst, abs(abs(np.vdot(phi.amplitudes, moved)) ** 2 - 1))
    return worst < 1e-10, f"max |overlap^2 - 1| = {worst:.2e}"


def check_product_form(rng, perturb: Optional[Callable] = None) -> tuple[bool, str]:
    worst_purity, worst_mi = 0.0, 0.0
    runs = [(a, ProtocolMode.WITH_COMMUNICATION) for a in _angles(rng, 10, theta=QUARTER_PI)]
    runs += [(a, ProtocolMode.LOCAL_ONLY)
             for a in _angles(rng, 10, theta=QUARTER_PI, theta_double_prime=QUARTER_PI)]
    for angles, mode in runs:
        report = protocol.run_protocol(angles, mode, perturb=perturb)
        worst_purity = max(worst_purity, 1 - report.bc_purity)
        worst_mi = max(worst_mi, report.mutual_info_bc_rest)
    ok = worst_purity < 1e-9 and worst_mi < 1e-9
    return ok, f"max 1 - purity = {worst_purity:.2e}, max I(BC:QRAD) = {worst_mi:.2e}"


def check_probability_completeness(rng) -> tuple[bool, str]:
    worst = 0.0
    for angles in _angles(rng, 100):
        total = sum(protocol.conditional_probability(angles, i, l)
                    for i, l in itertools.product((0, 1), repeat=2))
        worst = max(worst, abs(total - 2))
    return worst < 1e-12, f"max |sum p - 2| = {worst:.2e}"


def check_entropy_invariance(rng) -> tuple[bool, str]:
    worst = 0.0
    for angles in _angles(rng, 20, theta=QUARTER_PI):
        s = [analysis.entanglement_entropy_state(protocol.conditional_state(angles, i, l)[1])
             for i, l in itertools.product((0, 1), repeat=2)]
        worst = max(worst, max(s) - min(s))
    return worst < 1e-10, f"max entropy spread = {worst:.2e}"


def check_factorization(rng) -> tuple[bool, str]:
    alice, bob = protocol.local_halves()
    local = protocol.disentangler_global(ProtocolMode.LOCAL_ONLY).matrix
    exact = float(np.max(np.abs(local - np.kron(alice.matrix, bob.matrix))))
    assembled = float(np.max(np.abs(
        local - protocol.assembled_disentangler(ProtocolMode.LOCAL_ONLY).matrix)))
    rank_local = operator_schmidt_rank(local, 2)
    rank_locc = operator_schmidt_rank(protocol.disentangler_global(ProtocolMode.WITH_COMMUNICATION), 2)
    ok = exact == 0.0 and assembled < 1e-12 and rank_local == 1 and rank_locc >= 2
    return ok, (f"local split error {exact:.1e}, gate vs sector form {assembled:.1e}, "
                f"ranks local={rank_local} locc={rank_locc}")


# --- analysis --------------------------------------------------------------

def check_closed_form(rng) -> tuple[bool, str]:
    worst = 0.0
    for tp, tpp in itertools.product(np.linspace(0, math.pi, 9), np.linspace(0.05, 1.5, 9)):
        angles = AngleTriple(QUARTER_PI, tp, tpp)
        closed = analysis.entanglement_entropy_closed_form(tpp)
        for i, l in itertools.product((0, 1), repeat=2):
            s = analysis.entanglement_entropy_state(protocol.conditional_state(angles, i, l)[1])
            worst = max(worst, abs(s - closed))
    return worst < 1e-10, f"max |closed form - oracle| = {worst:.2e}"


def check_theta_prime_independence(rng) -> tuple[bool, str]:
    worst = 0.0
    for tpp in np.linspace(0.05, 1.5, 7):
        s = [analysis.entanglement_entropy_state(
                protocol.conditional_state(AngleTriple(QUARTER_PI, tp, tpp), 0, 0)[1])
             for tp in np.linspace(0, math.pi, 13)]
        worst = max(worst, max(s) - min(s))
    return worst < 1e-10, f"max spread over theta' = {worst:.2e}"


def check_uniform_weights(rng) -> tuple[bool, str]:
    worst_p, worst_mi = 0.0, 0.0
    for n, angles in enumerate(_angles(rng, 30)):
        vals = list(angles.as_tuple())
        vals[n % 3] = QUARTER_PI * (1 + 2 * int(rng.integers(0, 4)))
        angles = AngleTriple(*vals)
        for i, l in itertools.product((0, 1), repeat=2):
            worst_p = max(worst_p, abs(protocol.conditional_probability(angles, i, l) - 0.5))
        rho = protocol.reduced_abcd(protocol.prepare_joint_state(angles))
        worst_mi = max(worst_mi, analysis.mutual_information_ad(rho))
    ok = worst_p < 1e-12 and worst_mi < 1e-10
    return ok, f"max |p - 1/2| = {worst_p:.2e}, max S(A:D) = {worst_mi:.2e}"


def check_coherence_bound(rng) -> tuple[bool, str]:
    worst = max(analysis.coherence_trace_distance(a) for a in _angles(rng, 40, theta=QUARTER_PI))
    return worst < 1, f"max T = {worst:.6f}"


def check_sigma_consistency(rng) -> tuple[bool, str]:
    worst = 0.0
    for angles in _angles(rng, 20):
        rho = protocol.reduced_abcd(protocol.prepare_joint_state(angles)).matrix
        sigma = analysis.classical_counterpart(angles).matrix
        worst = max(worst, np.max(np.abs(np.diag(np.diag(rho)) - sigma)))
    return worst < 1e-12, f"max entry error = {worst:.2e}"


CHECKS = [
    ("qcore", "unitarity", check_unitarity),
    ("qcore", "trace_preservation", check_trace_preservation),
    ("qcore", "entropy_additivity", check_entropy_additivity),
    ("qcore", "trace_distance_metric", check_trace_distance_metric),
    ("qcore", "apply_unitary_preserves_state", check_apply_unitary),
    ("protocol", "reconstruction_identity", check_reconstruction),
    ("protocol", "conditional_operator_identity", check_conditional_operators),
    ("protocol", "product_form_output", check_product_form),
    ("protocol", "probability_completeness", check_probability_completeness),
    ("protocol", "entanglement_invariance", check_entropy_invariance),
    ("protocol", "factorization_dichotomy", check_factorization),
    ("analysis", "closed_form_agreement", check_closed_form),
    ("analysis", "theta_prime_independence", check_theta_prime_independence),
    ("analysis", "quarter_pi_implies_uniform", check_uniform_weights),
    ("analysis", "coherence_bound", check_coherence_bound),
    ("analysis", "sigma_consistency", check_sigma_consistency),
]


def flip_one_sign(amps: np.ndarray) -> np.ndarray:
    """Fault injection: negate the largest-magnitude amplitude."""
    amps[int(np.argmax(np.abs(amps)))] *= -1
    return amps


def run_invariants(inject_fault: bool = False, seed: int = SEED) -> list[InvariantResult]:
    results = []
    for module, name, check in CHECKS:
        rng = np.random.default_rng(seed)
        try:
            if check is check_product_form and inject_fault:
                ok, detail = check(rng, perturb=flip_one_sign)
            else:
                ok, detail = check(rng)
        except Exception as exc:  # a crashing check is a failed check
            ok, detail = False, f"{type(exc).__name__}: {exc}"
        results.append(InvariantResult(module, name, bool(ok), detail))
    return results
