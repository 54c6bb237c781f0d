"""Traceless orthonormal operator bases and correlation-vector conversion.

Any unit-trace Hermitian matrix on a composite system of total dimension d
decomposes as

    rho = (1/d) * (I + sum_i R_i T_i)

where the T_i are d x d Hermitian matrices with Tr(T_i) = 0 and
Tr(T_i T_j) = d * delta_ij.  The real coefficients R_i form the correlation
vector of the state.  For qubit subsystems the T_i are tensor products of
Pauli matrices; larger subsystems use generalized Gell-Mann matrices
rescaled by sqrt(dim/2) so the same normalization holds after taking tensor
products.

Operators are ordered row-major over per-subsystem label tuples, identity
first within each subsystem, with the all-identity tuple dropped.  For two
qubits this reproduces the familiar 4 x 4 correlation table read row by row
with the constant (1,1) slot omitted.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from .errors import ValidationError

ORTHONORMALITY_TOL = 1e-12
IMAG_RESIDUE_TOL = 1e-10
DEFAULT_DIM_CAP = 64

PAULI_X = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex)
PAULI_Y = np.array([[0.0, -1.0j], [1.0j, 0.0]], dtype=complex)
PAULI_Z = np.array([[1.0, 0.0], [0.0, -1.0]], dtype=complex)


def local_traceless_operators(dim: int) -> np.ndarray:
    """The dim^2 - 1 Hermitian traceless operators with Tr(A_a A_b) = dim * delta_ab.

    For dim == 2 the list is exactly (sigma_x, sigma_y, sigma_z).  Larger
    dimensions interleave the symmetric and antisymmetric off-diagonal
    Gell-Mann matrices pair by pair, then append the diagonal ones, all
    rescaled by sqrt(dim/2).
    """
    if dim < 2:
        raise ValidationError(f"subsystem dimension must be >= 2, got {dim}")
    scale = math.sqrt(dim / 2.0)
    ops = []
    for j in range(dim):
        for k in range(j + 1, dim):
            sym = np.zeros((dim, dim), dtype=complex)
            sym[j, k] = sym[k, j] = 1.0
            ops.append(scale * sym)
            antisym = np.zeros((dim, dim), dtype=complex)
            antisym[j, k] = -1.0j
            antisym[k, j] = 1.0j
            ops.append(scale * antisym)
    for level in range(1, dim):
        diag = np.zeros(dim)
        diag[:level] = 1.0
        diag[level] = -level
        norm = math.sqrt(2.0 / (level * (level + 1)))
        ops.append(scale * norm * np.diag(diag).astype(complex))
    return np.stack(ops)


@dataclass(frozen=True)
class BlochBasis:
    """An ordered traceless orthonormal operator basis for fixed subsystem dims.

    Immutable after construction and safe to share between concurrent solver
    runs.  ``labels`` holds one 1-based index tuple per operator; entry 1 in a
    slot means identity on that subsystem, so for two qubits the tuples are
    the (i, j) of sigma_i (x) sigma_j with (1, 1) excluded.
    """

    dims: tuple[int, ...]
    operators: np.ndarray
    labels: tuple[tuple[int, ...], ...]
    local_operators: tuple[np.ndarray, ...] | None = None
    standard: bool = False

    def __post_init__(self):
        dims = tuple(int(d) for d in self.dims)
        object.__setattr__(self, "dims", dims)
        if any(d < 2 for d in dims):
            raise ValidationError(f"every subsystem dimension must be >= 2, got {dims}")
        d = self.total_dim
        ops = np.asarray(self.operators, dtype=complex)
        if ops.shape != (d * d - 1, d, d):
            raise ValidationError(
                f"expected {d * d - 1} operators of shape {d}x{d}, got array of shape {ops.shape}"
            )
        ops = ops.copy()
        ops.flags.writeable = False
        object.__setattr__(self, "operators", ops)
        object.__setattr__(self, "labels", tuple(tuple(lab) for lab in self.labels))
        if len(self.labels) != ops.shape[0]:
            raise ValidationError("label count does not match operator count")
        self._validate_structure()

    def _validate_structure(self):
        ops = self.operators
        herm = np.abs(ops - ops.conj().transpose(0, 2, 1)).max()
        if herm > ORTHONORMALITY_TOL:
            raise ValidationError(f"basis operators not Hermitian (residual {herm:.2e})")
        traces = np.abs(np.trace(ops, axis1=1, axis2=2)).max()
        if traces > ORTHONORMALITY_TOL:
            raise ValidationError(f"basis operators not traceless (residual {traces:.2e})")
        # The Gram check is quadratic in the operator count; skip it above
        # d = 16 where construction is exact anyway and the check gets slow.
        if self.total_dim <= 16:
            gram = self.gram()
            err = np.abs(gram - np.eye(ops.shape[0])).max()
            if err > ORTHONORMALITY_TOL:
                raise ValidationError(f"basis not orthonormal (residual {err:.2e})")

    @property
    def total_dim(self) -> int:
        return int(np.prod(self.dims))

    @property
    def vector_length(self) -> int:
        return self.total_dim ** 2 - 1

    @property
    def is_bipartite(self) -> bool:
        return len(self.dims) == 2

    def gram(self) -> np.ndarray:
        """(1/d) Tr(T_i T_j) for all pairs; the identity when orthonormal."""
        d = self.total_dim
        flat = self.operators.reshape(len(self.labels), d * d)
        return np.real(flat @ flat.conj().T) / d

    def label_index(self, label: tuple[int, ...]) -> int:
        return self.labels.index(tuple(label))

    def table_shape(self) -> tuple[int, ...]:
        return tuple(d * d for d in self.dims)


def build_basis(dims, max_total_dim: int = DEFAULT_DIM_CAP) -> BlochBasis:
    """Construct the standard product basis for the given subsystem dimensions.

    Deterministic: two calls with equal ``dims`` return identical operator
    stacks.  Raises ValidationError when a dimension is below 2 or the total
    dimension exceeds ``max_total_dim``.
    """
    dims = tuple(int(d) for d in dims)
    if not dims:
        raise ValidationError("dims must be non-empty")
    if any(d < 2 for d in dims):
        raise ValidationError(f"every subsystem dimension must be >= 2, got {dims}")
    total = int(np.prod(dims))
    if total > max_total_dim:
        raise ValidationError(
            f"total dimension {total} exceeds the cap {max_total_dim}"
        )
    locals_ = [local_traceless_operators(d) for d in dims]
    # Per-subsystem operator slot 1 is the identity, slots 2..d^2 the
    # traceless operators, matching the 1-based label convention.
    stacked = [
        np.concatenate([np.eye(d, dtype=complex)[None], loc]) for d, loc in zip(dims, locals_)
    ]
    operators = []
    labels = []
    for combo in itertools.product(*[range(d * d) for d in dims]):
        if all(c == 0 for c in combo):
            continue
        op = stacked[0][combo[0]]
        for party in range(1, len(dims)):
            op = np.kron(op, stacked[party][combo[party]])
        operators.append(op)
        labels.append(tuple(c + 1 for c in combo))
    return BlochBasis(
        dims=dims,
        operators=np.stack(operators),
        labels=tuple(labels),
        local_operators=tuple(locals_),
        standard=True,
    )


@dataclass(frozen=True)
class CorrelationVector:
    """Real coefficient vector of a state in a BlochBasis."""

    basis: BlochBasis
    components: np.ndarray

    def __post_init__(self):
        comp = np.asarray(self.components, dtype=float)
        if comp.shape != (self.basis.vector_length,):
            raise ValidationError(
                f"expected {self.basis.vector_length} components, got shape {comp.shape}"
            )
        if not np.all(np.isfinite(comp)):
            raise ValidationError("correlation components must be finite")
        comp = comp.copy()
        comp.flags.writeable = False
        object.__setattr__(self, "components", comp)

    def norm(self) -> float:
        return float(np.linalg.norm(self.components))

    def table(self) -> np.ndarray:
        """Bipartite table view with the constant (1,1) slot restored as 1."""
        if not self.basis.is_bipartite:
            raise ValidationError("table view requires a bipartite basis")
        flat = np.concatenate([[1.0], self.components])
        return flat.reshape(self.basis.table_shape())


def vectorize(rho, basis: BlochBasis, imag_tol: float = IMAG_RESIDUE_TOL) -> CorrelationVector:
    """Correlation vector of a density matrix: R_i = Tr(rho T_i).

    Accepts a DensityMatrix or a plain Hermitian ndarray.  An imaginary
    residue above ``imag_tol`` signals non-Hermitian input and raises.
    """
    matrix = np.asarray(getattr(rho, "matrix", rho), dtype=complex)
    d = basis.total_dim
    if matrix.shape != (d, d):
        raise ValidationError(f"state shape {matrix.shape} does not match basis dimension {d}")
    raw = np.einsum("ab,iba->i", matrix, basis.operators)
    residue = np.abs(raw.imag).max() if raw.size else 0.0
    if residue > imag_tol:
        raise ValidationError(
            f"imaginary residue {residue:.2e} exceeds {imag_tol:.0e}; input is not Hermitian"
        )
    return CorrelationVector(basis=basis, components=raw.real)


def devectorize(correlation, basis: BlochBasis | None = None) -> np.ndarray:
    """Hermitian unit-trace matrix (1/d)(I + sum_i R_i T_i) for the vector."""
    if isinstance(correlation, CorrelationVector):
        if basis is not None and basis is not correlation.basis:
            raise ValidationError("explicit basis conflicts with the vector's own basis")
        basis = correlation.basis
        components = correlation.components
    else:
        if basis is None:
            raise ValidationError("a basis is required when passing raw components")
        components = np.asarray(correlation, dtype=float)
    if components.shape != (basis.vector_length,):
        raise ValidationError(
            f"expected {basis.vector_length} components, got shape {components.shape}"
        )
    d = basis.total_dim
    matrix = np.einsum("i,iab->ab", components, basis.operators)
    matrix += np.eye(d)
    return matrix / d
