"""Entropy, mutual-information and coherence diagnostics of the encoding."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .protocol import (
    AngleTriple,
    DegenerateOutcomeError,
    conditional_state,
    is_quarter_pi,
    prepare_joint_state,
    reduced_abcd,
)
from .qcore import (
    DensityMatrix,
    InvalidArgumentError,
    StateVector,
    partial_trace,
    trace_distance,
    von_neumann_entropy,
)

VANISHING_BITS = 1e-9
POSITIVE_BITS = 1e-6
CONSTANT_SPREAD = 1e-9
DEFAULT_AVG_POINTS = 181

QUARTER_PI = math.pi / 4


def entanglement_entropy_state(psi: StateVector) -> float:
    """Entropy (bits) of either half of a normalized two-qubit pure state."""
    if psi.num_qubits != 2:
        raise InvalidArgumentError(f"expected a two-qubit state, got {psi.num_qubits} qubits")
    if abs(psi.norm() - 1.0) > 1e-10:
        raise InvalidArgumentError(f"state is not normalized (norm {psi.norm()!r})")
    return von_neumann_entropy(partial_trace(psi.density_matrix(), [0]))


def entanglement_entropy_closed_form(theta_double_prime: float) -> float:
    """Binary entropy of ``cos^2`` of the angle, in bits."""
    c2 = math.cos(theta_double_prime) ** 2
    return max(0.0, -sum(p * math.log2(p) for p in (c2, 1.0 - c2) if p > 0))


def mutual_information_ad(rho_abcd: DensityMatrix) -> float:
    """``S(A) + S(D) - S(AD)`` for a state on (A, B, C, D)."""
    if rho_abcd.num_qubits != 4:
        raise InvalidArgumentError("expected a four-qubit state on (A, B, C, D)")
    s_a = von_neumann_entropy(partial_trace(rho_abcd, [0]))
    s_d = von_neumann_entropy(partial_trace(rho_abcd, [3]))
    s_ad = von_neumann_entropy(partial_trace(rho_abcd, [0, 3]))
    return max(0.0, s_a + s_d - s_ad)


def classical_counterpart(angles: AngleTriple) -> DensityMatrix:
    """Fully dephased version of the ABCD state."""
    u, up, upp = (m**2 for m in angles.rotations())
    diag = np.zeros(16)
    for i, j, k, l in itertools.product((0, 1), repeat=4):
        diag[8 * i + 4 * j + 2 * k + l] = 0.5 * u[i, j] * up[j, k] * upp[k, l]
    return DensityMatrix(np.diag(diag))


def coherence_trace_distance(angles: AngleTriple) -> float:
    rho = reduced_abcd(prepare_joint_state(angles))
    return trace_distance(rho, classical_counterpart(angles))


def default_averaging_grid(num_points: int = DEFAULT_AVG_POINTS) -> np.ndarray:
    """``num_points`` uniform angles over ``[0, pi)``, end excluded."""
    if num_points < 1:
        raise InvalidArgumentError("averaging grid needs at least one point")
    return np.arange(num_points) * (math.pi / num_points)


def averaged_trace_distance(theta: float, theta_double_prime: float,
                            averaging_grid: Sequence[float]) -> float:
    grid = np.asarray(averaging_grid, dtype=float)
    if grid.size == 0:
        raise InvalidArgumentError("averaging grid is empty")
    values = [coherence_trace_distance(AngleTriple(theta, tp, theta_double_prime))
              for tp in grid]
    return float(np.mean(values))


_ANGLE_NAMES = ("theta", "theta_prime", "theta_double_prime")


@dataclass(frozen=True)
class SweepSpec:
    """One-parameter sweep of the coherence trace distance.

    ``fixed`` gives the angles that do not move. If ``averaging_grid`` is
    set, ``theta_prime`` is averaged over it at every grid point (and must
    not be the swept parameter).
    """

    fixed: dict
    swept: str
    grid: tuple
    averaging_grid: Optional[tuple] = None

    def __post_init__(self):
        object.__setattr__(self, "grid", tuple(float(g) for g in self.grid))
        if self.averaging_grid is not None:
            object.__setattr__(self, "averaging_grid",
                               tuple(float(g) for g in self.averaging_grid))
        if self.swept not in _ANGLE_NAMES:
            raise InvalidArgumentError(f"unknown angle {self.swept!r}")
        if not self.grid:
            raise InvalidArgumentError("sweep grid is empty")
        if any(b <= a for a, b in zip(self.grid, self.grid[1:])):
            raise InvalidArgumentError("sweep grid must be strictly increasing")
        needed = set(_ANGLE_NAMES) - {self.swept}
        if self.averaging_grid is not None:
            if self.swept == "theta_prime":
                raise InvalidArgumentError("cannot sweep and average theta_prime at once")
            if not self.averaging_grid:
                raise InvalidArgumentError("averaging grid is empty")
            needed.discard("theta_prime")
        missing = needed - set(self.fixed)
        if missing:
            raise InvalidArgumentError(f"missing fixed angles: {sorted(missing)}")


def run_sweep(spec: SweepSpec) -> np.ndarray:
    """Trace distance (or its theta' average) at each grid point, in order."""
    out = np.empty(len(spec.grid))
    for n, value in enumerate(spec.grid):
        kw = dict(spec.fixed)
        kw[spec.swept] = value
        if spec.averaging_grid is None:
            out[n] = coherence_trace_distance(AngleTriple(**kw))
        else:
            out[n] = averaged_trace_distance(kw["theta"], kw["theta_double_prime"],
                                             spec.averaging_grid)
    return out


def fig2_spec(grid_points: int = 91, avg_points: int = DEFAULT_AVG_POINTS) -> SweepSpec:
    """Averaged distance versus theta'' on ``[0, pi/2]`` at theta = pi/4."""
    return SweepSpec(
        fixed={"theta": QUARTER_PI},
        swept="theta_double_prime",
        grid=np.linspace(0.0, math.pi / 2, grid_points),
        averaging_grid=default_averaging_grid(avg_points),
    )


def fig3_spec(grid_points: int = 181) -> SweepSpec:
    """Distance versus theta' on ``[0, pi)`` at theta = theta'' = pi/4."""
    return SweepSpec(
        fixed={"theta": QUARTER_PI, "theta_double_prime": QUARTER_PI},
        swept="theta_prime",
        grid=default_averaging_grid(grid_points),
    )


def classify(bits: float) -> str:
    """``"vanishing"``, ``"positive"`` or ``"indeterminate"``."""
    if bits < VANISHING_BITS:
        return "vanishing"
    if bits > POSITIVE_BITS:
        return "positive"
    return "indeterminate"


@dataclass(frozen=True)
class ConditionPoint:
    angles: AngleTriple
    mutual_info_ad: float
    # None marks a degenerate (p_il = 0) outcome, ordered (0,0),(0,1),(1,0),(1,1).
    entropies: tuple

    @property
    def defined_entropies(self) -> list[float]:
        return [s for s in self.entropies if s is not None]

    @property
    def num_degenerate(self) -> int:
        return sum(s is None for s in self.entropies)

    @property
    def entropies_constant(self) -> bool:
        s = self.defined_entropies
        return bool(s) and max(s) - min(s) < CONSTANT_SPREAD

    @property
    def entanglement_nonzero(self) -> bool:
        s = self.defined_entropies
        return bool(s) and min(s) > POSITIVE_BITS

    @property
    def condition_met(self) -> bool:
        return self.mutual_info_ad < VANISHING_BITS

    @property
    def has_quarter_pi(self) -> bool:
        return any(is_quarter_pi(a, 1e-9) for a in self.angles.as_tuple())


@dataclass(frozen=True)
class ConditionReport:
    points: tuple

    def __len__(self) -> int:
        return len(self.points)

    def __iter__(self):
        return iter(self.points)

    @property
    def flagged(self) -> list[ConditionPoint]:
        """Points where S(A:D) vanishes."""
        return [p for p in self.points if p.condition_met]


def condition_point(angles: AngleTriple) -> ConditionPoint:
    rho = reduced_abcd(prepare_joint_state(angles))
    entropies = []
    for i, l in itertools.product((0, 1), repeat=2):
        try:
            _, psi = conditional_state(angles, i, l)
        except DegenerateOutcomeError:
            entropies.append(None)
        else:
            entropies.append(entanglement_entropy_state(psi))
    return ConditionPoint(angles, mutual_information_ad(rho), tuple(entropies))


def condition_scan(thetas: Sequence[float], theta_primes: Sequence[float],
                   theta_double_primes: Sequence[float]) -> ConditionReport:
    """Evaluate the S(A:D) condition on the Cartesian grid, theta outermost."""
    axes = [np.asarray(a, dtype=float) for a in (thetas, theta_primes, theta_double_primes)]
    if any(a.size == 0 for a in axes):
        raise InvalidArgumentError("every grid axis needs at least one point")
    points = tuple(condition_point(AngleTriple(*triple))
                   for triple in itertools.product(*axes))
    return ConditionReport(points)
