"""Dense complex states and operators on N particles over a finite Abelian group.

The computational basis is the set of classical configurations
``|g_1, ..., g_N>``; basis indices are mixed-radix with particle 1 most
significant, each particle's digit being the group element index.  Dense
matrices are the single ground-truth representation; structured operators
elsewhere in the package (translations, conditional translations) carry fast
index-permutation paths but always materialize to the same dense matrices.

Values are treated as immutable: arrays are copied on construction and
marked read-only, and every operation allocates a fresh output.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Sequence

import numpy as np

from .config import resolve_eps
from .errors import StructuralError
from .groups import GroupElement, GroupSpec, group_from_json, group_to_json


@dataclass(frozen=True)
class Space:
    """N distinguishable particles, each with configuration space ``group``."""

    group: GroupSpec
    particles: int

    def __post_init__(self):
        if self.particles < 1:
            raise StructuralError(f"need at least one particle, got {self.particles}")

    @property
    def dim(self) -> int:
        return self.group.order ** self.particles

    def reduced(self, drop: int = 1) -> Space:
        if self.particles - drop < 1:
            raise StructuralError("cannot drop that many particles")
        return Space(self.group, self.particles - drop)

    def extended(self, extra: int) -> Space:
        return Space(self.group, self.particles + extra)


def _as_complex(data, shape) -> np.ndarray:
    arr = np.ascontiguousarray(data, dtype=np.complex128).copy()
    if arr.shape != shape:
        raise StructuralError(f"expected array of shape {shape}, got {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise StructuralError("non-finite entries")
    arr.setflags(write=False)
    return arr


class StateVector:
    """Complex amplitude vector; subnormalized states are first-class and are
    never silently renormalized."""

    __slots__ = ("space", "amplitudes")

    def __init__(self, space: Space, amplitudes):
        self.space = space
        self.amplitudes = _as_complex(amplitudes, (space.dim,))

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def inner(self, other: StateVector) -> complex:
        _check_space(self, other)
        return complex(np.vdot(self.amplitudes, other.amplitudes))

    def outer(self, other: StateVector | None = None) -> Operator:
        """|self><other| (density matrix of self when other is omitted)."""
        other = self if other is None else other
        _check_space(self, other)
        return Operator(self.space, np.outer(self.amplitudes, other.amplitudes.conj()))

    def normalized(self) -> StateVector:
        n = self.norm()
        if n == 0.0:
            raise StructuralError("cannot normalize the zero vector")
        return StateVector(self.space, self.amplitudes / n)

    def __add__(self, other: StateVector) -> StateVector:
        _check_space(self, other)
        return StateVector(self.space, self.amplitudes + other.amplitudes)

    def __sub__(self, other: StateVector) -> StateVector:
        _check_space(self, other)
        return StateVector(self.space, self.amplitudes - other.amplitudes)

    def __mul__(self, z) -> StateVector:
        return StateVector(self.space, self.amplitudes * complex(z))

    __rmul__ = __mul__


class Operator:
    """Dense complex matrix on a :class:`Space`."""

    __slots__ = ("space", "matrix")

    def __init__(self, space: Space, matrix):
        self.space = space
        self.matrix = _as_complex(matrix, (space.dim, space.dim))

    def trace(self) -> complex:
        return complex(np.trace(self.matrix))

    def dagger(self) -> Operator:
        return Operator(self.space, self.matrix.conj().T)

    def apply(self, psi: StateVector) -> StateVector:
        _check_space(self, psi)
        return StateVector(self.space, self.matrix @ psi.amplitudes)

    def is_hermitian(self, eps: float | None = None) -> bool:
        return float(np.abs(self.matrix - self.matrix.conj().T).max()) < resolve_eps(eps)

    def is_projector(self, eps: float | None = None) -> bool:
        tol = resolve_eps(eps)
        return (
            self.is_hermitian(tol)
            and float(np.abs(self.matrix @ self.matrix - self.matrix).max()) < tol
        )

    def __matmul__(self, other: Operator) -> Operator:
        _check_space(self, other)
        return Operator(self.space, self.matrix @ other.matrix)

    def __add__(self, other: Operator) -> Operator:
        _check_space(self, other)
        return Operator(self.space, self.matrix + other.matrix)

    def __sub__(self, other: Operator) -> Operator:
        _check_space(self, other)
        return Operator(self.space, self.matrix - other.matrix)

    def __mul__(self, z) -> Operator:
        return Operator(self.space, self.matrix * complex(z))

    __rmul__ = __mul__


def _check_space(a, b) -> None:
    if a.space != b.space:
        raise StructuralError(f"mismatched spaces: {a.space} vs {b.space}")


def basis_index(space: Space, config: Sequence[GroupElement]) -> int:
    """Mixed-radix index of a classical configuration, particle 1 most significant."""
    config = list(config)
    if len(config) != space.particles:
        raise StructuralError(
            f"configuration has {len(config)} entries, space has {space.particles} particles"
        )
    idx = 0
    for el in config:
        if el.spec != space.group:
            raise StructuralError(f"element of {el.spec} used in space over {space.group}")
        idx = idx * space.group.order + el.index
    return idx


def basis_config(space: Space, index: int) -> tuple[GroupElement, ...]:
    if not 0 <= index < space.dim:
        raise StructuralError(f"basis index {index} out of range")
    order = space.group.order
    digits = []
    for _ in range(space.particles):
        digits.append(index % order)
        index //= order
    return tuple(space.group.element_at(d) for d in reversed(digits))


def basis_state(space: Space, config: Sequence[GroupElement]) -> StateVector:
    vec = np.zeros(space.dim, dtype=np.complex128)
    vec[basis_index(space, config)] = 1.0
    return StateVector(space, vec)


def identity_operator(space: Space) -> Operator:
    return Operator(space, np.eye(space.dim, dtype=np.complex128))


def zero_operator(space: Space) -> Operator:
    return Operator(space, np.zeros((space.dim, space.dim), dtype=np.complex128))


def tensor(a: Operator, b: Operator) -> Operator:
    """Kronecker product, consistent with the particle-1-major basis indexing."""
    if a.space.group != b.space.group:
        raise StructuralError("tensor factors must share a group")
    joint = Space(a.space.group, a.space.particles + b.space.particles)
    return Operator(joint, np.kron(a.matrix, b.matrix))


def tensor_states(a: StateVector, b: StateVector) -> StateVector:
    if a.space.group != b.space.group:
        raise StructuralError("tensor factors must share a group")
    joint = Space(a.space.group, a.space.particles + b.space.particles)
    return StateVector(joint, np.kron(a.amplitudes, b.amplitudes))


def partial_trace_last(rho: Operator, traced: int) -> Operator:
    """Standard partial trace over the last ``traced`` tensor factors."""
    if traced < 0:
        raise StructuralError("number of traced particles must be >= 0")
    if traced >= rho.space.particles:
        raise StructuralError(
            f"cannot trace out {traced} of {rho.space.particles} particles"
        )
    if traced == 0:
        return Operator(rho.space, rho.matrix)
    kept = Space(rho.space.group, rho.space.particles - traced)
    da, db = kept.dim, rho.space.group.order ** traced
    reshaped = rho.matrix.reshape(da, db, da, db)
    return Operator(kept, np.trace(reshaped, axis1=1, axis2=3))


def hs_inner(a: Operator, b: Operator) -> complex:
    """Hilbert-Schmidt inner product ``tr(a^dag b)``."""
    _check_space(a, b)
    return complex(np.vdot(a.matrix, b.matrix))


def max_abs_diff(a, b) -> float:
    _check_space(a, b)
    x = a.matrix if isinstance(a, Operator) else a.amplitudes
    y = b.matrix if isinstance(b, Operator) else b.amplitudes
    return float(np.abs(x - y).max())


def close(a, b, eps: float | None = None) -> bool:
    return max_abs_diff(a, b) < resolve_eps(eps)


# Cached index plumbing shared by the sector/symmetry machinery.


@lru_cache(maxsize=None)
def configs_table(space: Space) -> np.ndarray:
    """(dim, N) element index of each particle for every basis index."""
    order = space.group.order
    idx = np.arange(space.dim)
    cols = []
    for p in range(space.particles - 1, -1, -1):
        cols.append((idx // order**p) % order)
    out = np.stack(cols, axis=1)
    out.setflags(write=False)
    return out


def _pack_configs(space: Space, cols: np.ndarray) -> np.ndarray:
    order = space.group.order
    idx = np.zeros(cols.shape[0], dtype=np.int64)
    for p in range(space.particles):
        idx = idx * order + cols[:, p]
    return idx


@lru_cache(maxsize=None)
def translation_permutation(space: Space, g_index: int) -> np.ndarray:
    """Permutation t with ``U_g |i> = |t[i]>`` for the global translation by g."""
    from .groups import cayley_table

    cay = cayley_table(space.group)
    cols = cay[g_index][configs_table(space)]
    out = _pack_configs(space, cols)
    out.setflags(write=False)
    return out


@lru_cache(maxsize=None)
def insert_particle_indices(space: Space, particle: int, element_index: int = 0) -> np.ndarray:
    """Full-space basis indices of all configurations whose ``particle`` (1-based)
    is pinned to a fixed element, enumerated over the reduced space's basis order."""
    if not 1 <= particle <= space.particles:
        raise StructuralError(f"particle {particle} out of range 1..{space.particles}")
    if space.particles == 1:
        out = np.array([element_index], dtype=np.int64)
        out.setflags(write=False)
        return out
    reduced = space.reduced()
    cols = configs_table(reduced)
    full = np.insert(cols, particle - 1, element_index, axis=1)
    out = _pack_configs(space, full)
    out.setflags(write=False)
    return out


def global_translation_operator(space: Space, g: GroupElement) -> Operator:
    """Dense matrix of the permutation ``|g_1,...,g_N> -> |g g_1,...,g g_N>``."""
    if g.spec != space.group:
        raise StructuralError("translation element from a different group")
    perm = translation_permutation(space, g.index)
    mat = np.zeros((space.dim, space.dim), dtype=np.complex128)
    mat[perm, np.arange(space.dim)] = 1.0
    return Operator(space, mat)


# JSON schemas.  Numbers are written as plain floats; Python's float repr is
# the shortest decimal string (<= 17 significant digits) that round-trips
# bit-exactly, which gives lossless serialization.


def _pairs(arr: np.ndarray) -> list[list[float]]:
    flat = arr.ravel()
    return [[float(z.real), float(z.imag)] for z in flat]


def _from_pairs(pairs, count: int) -> np.ndarray:
    if len(pairs) != count:
        raise StructuralError(f"expected {count} [re, im] pairs, got {len(pairs)}")
    out = np.empty(count, dtype=np.complex128)
    for i, (re, im) in enumerate(pairs):
        out[i] = complex(re, im)
    return out


def space_to_json(space: Space) -> dict:
    return {"group": group_to_json(space.group), "particles": space.particles}


def space_from_json(payload: dict) -> Space:
    return Space(group_from_json(payload["group"]), int(payload["particles"]))


def state_to_json(psi: StateVector) -> dict:
    return {"space": space_to_json(psi.space), "data": _pairs(psi.amplitudes)}


def state_from_json(payload: dict) -> StateVector:
    space = space_from_json(payload["space"])
    return StateVector(space, _from_pairs(payload["data"], space.dim))


def operator_to_json(op: Operator) -> dict:
    """Row-major [re, im] pairs."""
    return {"space": space_to_json(op.space), "data": _pairs(op.matrix)}


def operator_from_json(payload: dict) -> Operator:
    space = space_from_json(payload["space"])
    flat = _from_pairs(payload["data"], space.dim * space.dim)
    return Operator(space, flat.reshape(space.dim, space.dim))


def blob_from_json(payload: dict) -> StateVector | Operator:
    """Load either schema, telling them apart by the data length."""
    space = space_from_json(payload["space"])
    n = len(payload["data"])
    if n == space.dim:
        return state_from_json(payload)
    if n == space.dim * space.dim:
        return operator_from_json(payload)
    raise StructuralError(
        f"data length {n} matches neither a state ({space.dim}) nor an operator "
        f"({space.dim * space.dim}) on {space}"
    )


# Seeded random constructions (used by the verification suite and tests).


def random_state(space: Space, rng: np.random.Generator) -> StateVector:
    vec = rng.standard_normal(space.dim) + 1j * rng.standard_normal(space.dim)
    return StateVector(space, vec / np.linalg.norm(vec))


def random_operator(space: Space, rng: np.random.Generator) -> Operator:
    mat = rng.standard_normal((space.dim, space.dim)) + 1j * rng.standard_normal(
        (space.dim, space.dim)
    )
    return Operator(space, mat)


def random_density(space: Space, rng: np.random.Generator, rank: int | None = None) -> Operator:
    rank = space.dim if rank is None else min(rank, space.dim)
    x = rng.standard_normal((space.dim, rank)) + 1j * rng.standard_normal((space.dim, rank))
    rho = x @ x.conj().T
    return Operator(space, rho / np.trace(rho).real)


def random_unitary(space: Space, rng: np.random.Generator) -> Operator:
    a = rng.standard_normal((space.dim, space.dim)) + 1j * rng.standard_normal(
        (space.dim, space.dim)
    )
    q, r = np.linalg.qr(a)
    d = np.diag(r)
    return Operator(space, q * (d / np.abs(d)))
