"""Density matrices, product pure states and the worked state families."""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field

import numpy as np

from .basis import BlochBasis, CorrelationVector, build_basis, vectorize
from .errors import ValidationError

HERMITIAN_TOL = 1e-12
TRACE_TOL = 1e-12
EIGENVALUE_FLOOR = -1e-10
UNIT_NORM_TOL = 1e-12


@dataclass(frozen=True)
class DensityMatrix:
    """Hermitian, unit-trace, positive semidefinite state on listed subsystems."""

    matrix: np.ndarray
    dims: tuple[int, ...]

    def __post_init__(self):
        dims = tuple(int(d) for d in self.dims)
        object.__setattr__(self, "dims", dims)
        mat = np.asarray(self.matrix, dtype=complex).copy()
        d = int(np.prod(dims))
        if mat.shape != (d, d):
            raise ValidationError(f"matrix shape {mat.shape} does not match dims {dims}")
        herm = np.abs(mat - mat.conj().T).max()
        if herm > HERMITIAN_TOL:
            raise ValidationError(f"matrix is not Hermitian (residual {herm:.2e})")
        trace = mat.trace()
        if abs(trace - 1.0) > TRACE_TOL:
            raise ValidationError(f"trace must be 1, got {trace}")
        low = float(np.linalg.eigvalsh((mat + mat.conj().T) / 2.0).min())
        if low < EIGENVALUE_FLOOR:
            raise ValidationError(f"matrix is not positive semidefinite (min eigenvalue {low:.2e})")
        mat.flags.writeable = False
        object.__setattr__(self, "matrix", mat)

    @property
    def dim(self) -> int:
        return int(np.prod(self.dims))

    @classmethod
    def from_ket(cls, ket, dims) -> "DensityMatrix":
        vec = np.asarray(ket, dtype=complex).reshape(-1)
        norm = np.linalg.norm(vec)
        if norm == 0:
            raise ValidationError("cannot build a projector from the zero vector")
        vec = vec / norm
        return cls(np.outer(vec, vec.conj()), tuple(dims))


def maximally_mixed(dims) -> DensityMatrix:
    d = int(np.prod(tuple(dims)))
    return DensityMatrix(np.eye(d, dtype=complex) / d, tuple(dims))


def _fix_phase(vec: np.ndarray) -> np.ndarray:
    """Make the first non-negligible component real nonnegative."""
    idx = np.flatnonzero(np.abs(vec) > 1e-12)
    if idx.size == 0:
        return vec
    pivot = vec[idx[0]]
    return vec * (abs(pivot) / pivot)


def ket_to_bloch(ket: np.ndarray) -> np.ndarray:
    """(x, y, z) expectation triple of a single-qubit pure state."""
    a, b = ket
    cross = np.conj(a) * b
    return np.array([2.0 * cross.real, 2.0 * cross.imag, abs(a) ** 2 - abs(b) ** 2])


def bloch_to_ket(vec) -> np.ndarray:
    """Unit qubit ket whose Bloch vector is the given unit 3-vector."""
    v = np.asarray(vec, dtype=float)
    norm = np.linalg.norm(v)
    if norm == 0:
        raise ValidationError("the zero vector is not a pure-state Bloch vector")
    x, y, z = v / norm
    polar = math.acos(max(-1.0, min(1.0, z)))
    azimuth = math.atan2(y, x)
    return np.array(
        [math.cos(polar / 2.0), cmath.exp(1j * azimuth) * math.sin(polar / 2.0)],
        dtype=complex,
    )


@dataclass(frozen=True)
class ProductPureState:
    """Tensor product of per-subsystem unit vectors, canonically phased."""

    kets: tuple[np.ndarray, ...]

    def __post_init__(self):
        fixed = []
        for k, vec in enumerate(self.kets):
            arr = np.asarray(vec, dtype=complex).reshape(-1)
            if arr.shape[0] < 2:
                raise ValidationError(f"subsystem vector {k} must have dimension >= 2")
            norm = np.linalg.norm(arr)
            if norm < 1e-12:
                raise ValidationError(f"subsystem vector {k} is zero")
            arr = _fix_phase(arr / norm)
            arr.flags.writeable = False
            fixed.append(arr)
        object.__setattr__(self, "kets", tuple(fixed))

    @property
    def dims(self) -> tuple[int, ...]:
        return tuple(len(k) for k in self.kets)

    def ket(self) -> np.ndarray:
        full = self.kets[0]
        for vec in self.kets[1:]:
            full = np.kron(full, vec)
        return full

    def projector(self) -> DensityMatrix:
        return DensityMatrix.from_ket(self.ket(), self.dims)

    @property
    def bloch_vectors(self) -> tuple[np.ndarray, ...]:
        """Per-party Bloch 3-vectors; qubit subsystems only."""
        if any(d != 2 for d in self.dims):
            raise ValidationError("Bloch 3-vectors are only defined for qubit subsystems")
        return tuple(ket_to_bloch(k) for k in self.kets)

    def local_expectations(self, basis: BlochBasis) -> list[np.ndarray]:
        """Per party: [1, <A_1>, <A_2>, ...] over that party's local operators."""
        if basis.local_operators is None:
            raise ValidationError("basis does not carry per-subsystem operators")
        if basis.dims != self.dims:
            raise ValidationError(f"state dims {self.dims} do not match basis dims {basis.dims}")
        out = []
        for ket, local in zip(self.kets, basis.local_operators):
            vals = np.einsum("a,iab,b->i", ket.conj(), local, ket).real
            out.append(np.concatenate([[1.0], vals]))
        return out

    def correlation(self, basis: BlochBasis | None = None) -> CorrelationVector:
        """Correlation vector of the induced projector.

        For a standard product basis the components factor into products of
        per-party expectations, which is both faster and exactly matches the
        row-major label ordering; other bases fall back to tracing against
        each operator.
        """
        if basis is None:
            basis = build_basis(self.dims)
        if basis.standard and basis.local_operators is not None:
            parts = self.local_expectations(basis)
            full = parts[0]
            for vec in parts[1:]:
                full = np.outer(full, vec).reshape(-1)
            return CorrelationVector(basis=basis, components=full[1:])
        return vectorize(self.projector(), basis)


def product_state(subsystem_vectors) -> ProductPureState:
    """Normalize per-subsystem vectors into a ProductPureState."""
    vectors = list(subsystem_vectors)
    if not vectors:
        raise ValidationError("at least one subsystem vector is required")
    return ProductPureState(kets=tuple(vectors))


def ghz_theta(theta: float) -> DensityMatrix:
    """Projector onto cos(theta)|00> + sin(theta)|11> for two qubits."""
    ket = np.zeros(4, dtype=complex)
    ket[0] = math.cos(theta)
    ket[3] = math.sin(theta)
    return DensityMatrix.from_ket(ket, (2, 2))


def werner_mix(rho: DensityMatrix, weight: float) -> DensityMatrix:
    """weight * rho + (1 - weight) * I/d; shortens the correlation vector by weight."""
    if not 0.0 <= weight <= 1.0:
        raise ValidationError(f"mixing weight must lie in [0, 1], got {weight}")
    d = rho.dim
    mixed = weight * rho.matrix + (1.0 - weight) * np.eye(d) / d
    return DensityMatrix(mixed, rho.dims)


def _as_rng(seed) -> np.random.Generator:
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(seed)


def random_density(dims, seed=0) -> DensityMatrix:
    """Hilbert-Schmidt style random state: G G^dag / Tr(G G^dag), G complex Gaussian."""
    rng = _as_rng(seed)
    d = int(np.prod(tuple(dims)))
    g = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
    mat = g @ g.conj().T
    return DensityMatrix(mat / mat.trace().real, tuple(dims))


def random_product(dims, seed=0) -> ProductPureState:
    """Independent Haar-random pure state on each subsystem."""
    rng = _as_rng(seed)
    kets = []
    for d in dims:
        vec = rng.standard_normal(d) + 1j * rng.standard_normal(d)
        kets.append(vec)
    return product_state(kets)


def random_unitary(dim: int, seed=0) -> np.ndarray:
    """Haar-random unitary via QR of a complex Gaussian matrix."""
    rng = _as_rng(seed)
    g = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    q, r = np.linalg.qr(g)
    phases = np.diagonal(r).copy()
    phases /= np.abs(phases)
    return q * phases


@dataclass(frozen=True)
class DecompositionCertificate:
    """Positive weighted sum of product states reconstructing a target vector.

    Weights need not sum to 1; dividing the target by the weight total is
    what turns the sum into a convex combination, which is exactly the hull
    shrink factor the certificate witnesses.
    """

    entries: tuple[tuple[float, ProductPureState], ...]
    target: CorrelationVector
    tol: float = 1e-10

    def __post_init__(self):
        entries = tuple((float(w), state) for w, state in self.entries)
        object.__setattr__(self, "entries", entries)
        if not entries:
            raise ValidationError("certificate needs at least one entry")
        for w, _ in entries:
            if w < -1e-12:
                raise ValidationError(f"certificate weights must be nonnegative, got {w}")
        residual = self.residual()
        if residual > self.tol:
            raise ValidationError(
                f"certificate reconstruction residual {residual:.2e} exceeds tol {self.tol:.0e}"
            )

    @property
    def weights(self) -> np.ndarray:
        return np.array([w for w, _ in self.entries])

    @property
    def states(self) -> tuple[ProductPureState, ...]:
        return tuple(state for _, state in self.entries)

    def total_weight(self) -> float:
        return float(self.weights.sum())

    def reconstruct(self) -> np.ndarray:
        total = np.zeros(self.target.basis.vector_length)
        for w, state in self.entries:
            total += w * state.correlation(self.target.basis).components
        return total

    def residual(self) -> float:
        return float(np.abs(self.reconstruct() - self.target.components).max())
