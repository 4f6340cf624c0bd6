"""Dense linear algebra for small qubit registers.

Register position 0 is the most significant bit of an amplitude index, so
for a three-qubit register ``|abc>`` lives at index ``4*a + 2*b + c``.
Everything here is sized for at most six qubits (64x64 matrices) and stays
dense.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence, Union

import numpy as np

HERMITIAN_TOL = 1e-12
TRACE_TOL = 1e-10
NORM_TOL = 1e-10
NEGATIVE_EIG_TOL = 1e-10
UNITARY_TOL = 1e-12


class InvalidArgumentError(ValueError):
    """Raised for malformed inputs: bad shapes, positions, angles."""


class NotAStateError(ValueError):
    """Raised when a matrix fails the density-matrix conditions."""


def _num_qubits_for(dim: int) -> int:
    n = int(round(math.log2(dim))) if dim > 0 else -1
    if n < 0 or 2**n != dim:
        raise InvalidArgumentError(f"dimension {dim} is not a power of two")
    return n


def _frozen(array: np.ndarray) -> np.ndarray:
    array = np.array(array, dtype=complex)
    array.setflags(write=False)
    return array


@dataclass(frozen=True)
class QubitLayout:
    """Ordered labels for register positions, e.g. ``("Q", "R", "A", ...)``."""

    labels: tuple[str, ...]

    def __post_init__(self):
        object.__setattr__(self, "labels", tuple(self.labels))
        if len(set(self.labels)) != len(self.labels):
            raise InvalidArgumentError(f"duplicate labels in {self.labels}")

    def __len__(self) -> int:
        return len(self.labels)

    def position(self, label: str) -> int:
        try:
            return self.labels.index(label)
        except ValueError:
            raise InvalidArgumentError(f"unknown qubit label {label!r}") from None

    def positions(self, labels: Iterable[str]) -> tuple[int, ...]:
        return tuple(self.position(label) for label in labels)


@dataclass(frozen=True)
class StateVector:
    """Pure state amplitudes.

    ``normalized=False`` marks a raw intermediate vector and skips the
    unit-norm check.
    """

    amplitudes: np.ndarray
    normalized: bool = True
    num_qubits: int = field(init=False)

    def __post_init__(self):
        amps = np.asarray(self.amplitudes, dtype=complex)
        if amps.ndim != 1:
            raise InvalidArgumentError(f"amplitudes must be 1-D, got shape {amps.shape}")
        n = _num_qubits_for(amps.shape[0])
        if n < 1:
            raise InvalidArgumentError("a state needs at least one qubit")
        if self.normalized:
            norm2 = float(np.vdot(amps, amps).real)
            if abs(norm2 - 1.0) > NORM_TOL:
                raise InvalidArgumentError(f"squared norm {norm2!r} is not 1")
        object.__setattr__(self, "amplitudes", _frozen(amps))
        object.__setattr__(self, "num_qubits", n)

    @classmethod
    def basis(cls, bits: Sequence[int]) -> "StateVector":
        """Computational basis state ``|b0 b1 ...>``."""
        index = 0
        for b in bits:
            if b not in (0, 1):
                raise InvalidArgumentError(f"bit values must be 0 or 1, got {b!r}")
            index = 2 * index + b
        amps = np.zeros(2 ** len(bits), dtype=complex)
        amps[index] = 1.0
        return cls(amps)

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def inner(self, other: "StateVector") -> complex:
        return complex(np.vdot(self.amplitudes, other.amplitudes))

    def density_matrix(self) -> "DensityMatrix":
        return DensityMatrix(np.outer(self.amplitudes, self.amplitudes.conj()))


@dataclass(frozen=True)
class DensityMatrix:
    """Hermitian, unit-trace, positive semidefinite matrix.

    All three conditions are checked at construction; a violation raises
    :class:`NotAStateError`.
    """

    matrix: np.ndarray
    num_qubits: int = field(init=False)

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=complex)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise InvalidArgumentError(f"expected a square matrix, got shape {m.shape}")
        n = _num_qubits_for(m.shape[0])
        if n < 1:
            raise InvalidArgumentError("a state needs at least one qubit")
        if np.max(np.abs(m - m.conj().T)) > HERMITIAN_TOL:
            raise NotAStateError("matrix is not Hermitian")
        tr = np.trace(m).real
        if abs(tr - 1.0) > TRACE_TOL:
            raise NotAStateError(f"trace {tr!r} is not 1")
        lowest = hermitian_eigvals(m)[0]
        if lowest < -NEGATIVE_EIG_TOL:
            raise NotAStateError(f"negative eigenvalue {lowest!r}")
        object.__setattr__(self, "matrix", _frozen(m))
        object.__setattr__(self, "num_qubits", n)

    @classmethod
    def maximally_mixed(cls, num_qubits: int) -> "DensityMatrix":
        dim = 2**num_qubits
        return cls(np.eye(dim) / dim)

    def purity(self) -> float:
        return float(np.real(np.trace(self.matrix @ self.matrix)))

    def expectation(self, psi: StateVector) -> float:
        """``<psi|rho|psi>``; the fidelity when ``psi`` is normalized."""
        a = psi.amplitudes
        return float(np.real(np.vdot(a, self.matrix @ a)))


@dataclass(frozen=True)
class UnitaryOperator:
    """Unitary matrix acting on ``targets`` (register positions, in order)."""

    matrix: np.ndarray
    targets: tuple[int, ...] = None

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=complex)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise InvalidArgumentError(f"expected a square matrix, got shape {m.shape}")
        k = _num_qubits_for(m.shape[0])
        targets = tuple(range(k)) if self.targets is None else tuple(int(t) for t in self.targets)
        if len(targets) != k:
            raise InvalidArgumentError(
                f"{m.shape[0]}x{m.shape[0]} operator needs {k} targets, got {targets}"
            )
        if len(set(targets)) != k or any(t < 0 for t in targets):
            raise InvalidArgumentError(f"invalid targets {targets}")
        err = np.max(np.abs(m.conj().T @ m - np.eye(m.shape[0])))
        if err > UNITARY_TOL:
            raise InvalidArgumentError(f"matrix is not unitary (max |U^dag U - I| = {err:.3e})")
        object.__setattr__(self, "matrix", _frozen(m))
        object.__setattr__(self, "targets", targets)

    @property
    def dimension(self) -> int:
        return self.matrix.shape[0]

    def on(self, *targets: int) -> "UnitaryOperator":
        """Same matrix, retargeted."""
        return UnitaryOperator(self.matrix, targets)

    def dagger(self) -> "UnitaryOperator":
        return UnitaryOperator(self.matrix.conj().T, self.targets)

    def __matmul__(self, other: "UnitaryOperator") -> "UnitaryOperator":
        if self.targets != other.targets:
            raise InvalidArgumentError("can only compose operators with identical targets")
        return UnitaryOperator(self.matrix @ other.matrix, self.targets)


Operand = Union[StateVector, DensityMatrix, UnitaryOperator]

IDENTITY = np.eye(2, dtype=complex)
PAULI_X = np.array([[0, 1], [1, 0]], dtype=complex)
PAULI_Z = np.array([[1, 0], [0, -1]], dtype=complex)
CZ = np.diag([1, 1, 1, -1]).astype(complex)
PROJ = (np.diag([1, 0]).astype(complex), np.diag([0, 1]).astype(complex))


def hermitian_eigvals(matrix: np.ndarray) -> np.ndarray:
    """Ascending real eigenvalues of a Hermitian matrix (LAPACK ``heevd``)."""
    return np.linalg.eigvalsh(matrix)


def rotation_matrix(theta: float) -> UnitaryOperator:
    """Real rotation ``[[cos t, -sin t], [sin t, cos t]]`` in the xz plane."""
    theta = float(theta)
    if not math.isfinite(theta):
        raise InvalidArgumentError(f"angle must be finite, got {theta!r}")
    return UnitaryOperator(rotation_array(theta))


def rotation_array(theta: float) -> np.ndarray:
    """Bare real 2x2 rotation, no validation."""
    c, s = math.cos(theta), math.sin(theta)
    return np.array([[c, -s], [s, c]])


def tensor_product(a: Operand, b: Operand) -> Operand:
    """Kronecker product; ``a`` supplies the more significant qubits.

    For operators the targets are concatenated when disjoint. If they
    overlap (e.g. two operators both built on the default target ``(0,)``)
    the result is placed on ``0..k-1``.
    """
    if type(a) is not type(b):
        raise InvalidArgumentError(
            f"cannot tensor {type(a).__name__} with {type(b).__name__}"
        )
    if isinstance(a, StateVector):
        return StateVector(np.kron(a.amplitudes, b.amplitudes),
                           normalized=a.normalized and b.normalized)
    if isinstance(a, DensityMatrix):
        return DensityMatrix(np.kron(a.matrix, b.matrix))
    if isinstance(a, UnitaryOperator):
        targets = a.targets + b.targets
        if len(set(targets)) != len(targets):
            targets = None
        return UnitaryOperator(np.kron(a.matrix, b.matrix), targets)
    raise InvalidArgumentError(f"unsupported operand type {type(a).__name__}")


def _check_positions(positions: Iterable[int], n: int) -> tuple[int, ...]:
    positions = tuple(positions)
    for p in positions:
        if not isinstance(p, (int, np.integer)) or not 0 <= p < n:
            raise InvalidArgumentError(f"register position {p!r} out of range for {n} qubits")
    return positions


def partial_trace(rho: DensityMatrix, keep: Iterable[int]) -> DensityMatrix:
    """Reduce ``rho`` to the qubits in ``keep``.

    Kept qubits retain their original relative order regardless of how
    ``keep`` is ordered.
    """
    n = rho.num_qubits
    keep = sorted(set(_check_positions(keep, n)))
    if not keep:
        raise InvalidArgumentError("keep set must be nonempty")
    if len(keep) == n:
        return rho
    traced = [q for q in range(n) if q not in keep]
    tensor = rho.matrix.reshape([2] * (2 * n))
    # Contract each traced row index against its column index.
    row = list(range(n))
    col = list(range(n, 2 * n))
    for q in traced:
        col[q] = row[q]
    out = [row[q] for q in keep] + [col[q] for q in keep]
    reduced = np.einsum(tensor, row + col, out)
    dim = 2 ** len(keep)
    return DensityMatrix(reduced.reshape(dim, dim))


def reduced_state(psi: StateVector, keep: Iterable[int]) -> DensityMatrix:
    """Reduced density matrix of a pure state, without forming ``|psi><psi|``."""
    n = psi.num_qubits
    keep = sorted(set(_check_positions(keep, n)))
    if not keep:
        raise InvalidArgumentError("keep set must be nonempty")
    traced = [q for q in range(n) if q not in keep]
    m = np.transpose(psi.amplitudes.reshape([2] * n), keep + traced)
    m = m.reshape(2 ** len(keep), -1)
    return DensityMatrix(m @ m.conj().T)


def von_neumann_entropy(rho: DensityMatrix) -> float:
    """Entropy in bits, ``-sum(l * log2(l))`` over the spectrum of ``rho``."""
    eigvals = hermitian_eigvals(rho.matrix)
    if eigvals[0] < -NEGATIVE_EIG_TOL:
        raise NotAStateError(f"negative eigenvalue {eigvals[0]!r}")
    eigvals = eigvals[eigvals > 0]
    return float(max(0.0, -np.sum(eigvals * np.log2(eigvals))))


def trace_distance(rho: DensityMatrix, sigma: DensityMatrix) -> float:
    """Half the trace norm of ``rho - sigma``."""
    if rho.matrix.shape != sigma.matrix.shape:
        raise InvalidArgumentError(
            f"dimension mismatch: {rho.matrix.shape} vs {sigma.matrix.shape}"
        )
    a, b = rho.matrix, sigma.matrix
    # Fixed operand order makes T(rho, sigma) == T(sigma, rho) bit for bit.
    if a.tobytes() > b.tobytes():
        a, b = b, a
    diff = a - b
    diff = 0.5 * (diff + diff.conj().T)
    return float(0.5 * np.sum(np.abs(hermitian_eigvals(diff))))


def _apply_to_axes(tensor: np.ndarray, matrix: np.ndarray, axes: Sequence[int]) -> np.ndarray:
    k = len(axes)
    op = matrix.reshape([2] * (2 * k))
    moved = np.tensordot(op, tensor, axes=(list(range(k, 2 * k)), list(axes)))
    # tensordot puts the operator's output axes first; move them back.
    return np.moveaxis(moved, list(range(k)), list(axes))


def apply_unitary(op: UnitaryOperator, state: StateVector | DensityMatrix):
    """``U psi`` or ``U rho U^dag`` with identity on non-target qubits."""
    n = state.num_qubits
    targets = _check_positions(op.targets, n)
    if isinstance(state, StateVector):
        psi = state.amplitudes.reshape([2] * n)
        out = _apply_to_axes(psi, op.matrix, targets)
        return StateVector(out.reshape(-1), normalized=state.normalized)
    if isinstance(state, DensityMatrix):
        rho = state.matrix.reshape([2] * (2 * n))
        rho = _apply_to_axes(rho, op.matrix, targets)
        rho = _apply_to_axes(rho, op.matrix.conj(), [n + t for t in targets])
        dim = 2**n
        return DensityMatrix(rho.reshape(dim, dim))
    raise InvalidArgumentError(f"cannot apply an operator to {type(state).__name__}")


def operator_schmidt_rank(op: UnitaryOperator | np.ndarray, num_left: int,
                          tol: float = 1e-10) -> int:
    """Number of product terms needed to write ``op`` across a cut.

    The first ``num_left`` qubits form the left side. Rank 1 means the
    operator factorizes as ``L (x) R``.
    """
    m = op.matrix if isinstance(op, UnitaryOperator) else np.asarray(op, dtype=complex)
    n = _num_qubits_for(m.shape[0])
    if not 0 < num_left < n:
        raise InvalidArgumentError(f"cut after {num_left} qubits is not inside {n} qubits")
    dl, dr = 2**num_left, 2 ** (n - num_left)
    # (l_out, r_out, l_in, r_in) -> (l_out l_in) x (r_out r_in)
    realigned = m.reshape(dl, dr, dl, dr).transpose(0, 2, 1, 3).reshape(dl * dl, dr * dr)
    sv = np.linalg.svd(realigned, compute_uv=False)
    return int(np.sum(sv > tol * max(sv[0], 1.0)))
