"""Relation-conditional global translations and frame-switching transformations.

The symmetry group of the N-particle system consists of unitaries that act on
each relation sector as a global translation, where the translation amount may
depend on the sector.  An element is therefore fully determined by a total
assignment (relation tuple -> group element), optionally decorated with a
global phase when comparing pure state vectors.

Elements are stored as assignments, never as matrices: the group has
|G|^(|G|^(N-1)) elements, so only the assignment is canonical.  Dense
materialization is available on demand and is the ground truth that the fast
index-permutation paths must match.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Iterator, Mapping, Sequence

import numpy as np

from .config import resolve_eps
from .errors import DomainError, StructuralError, UnsupportedGroupError
from .groups import GroupElement, cayley_table, inverse_table
from .hilbert import Operator, Space, StateVector, configs_table
from .sectors import RelationTuple, relation_count, relation_from_index, sector_tables

_TWO_PI = 2.0 * math.pi


@dataclass(frozen=True, eq=False)
class SymmetryElement:
    """A sector-conditional global translation with an optional global phase.

    ``assignment[r]`` is the group-element index of the translation applied on
    the sector with relation index ``r``.
    """

    space: Space
    assignment: np.ndarray
    phase: float = 0.0

    def __post_init__(self):
        arr = np.asarray(self.assignment, dtype=np.int64).copy()
        if arr.shape != (relation_count(self.space),):
            raise StructuralError(
                f"assignment must cover all {relation_count(self.space)} relation tuples"
            )
        order = self.space.group.order
        if arr.min() < 0 or arr.max() >= order:
            raise StructuralError("assignment entries must be group-element indices")
        arr.setflags(write=False)
        object.__setattr__(self, "assignment", arr)
        object.__setattr__(self, "phase", float(self.phase) % _TWO_PI)

    def shift_for(self, h: RelationTuple) -> GroupElement:
        return self.space.group.element_at(int(self.assignment[h.index]))

    def permutation(self) -> np.ndarray:
        """(dim,) target basis index per source basis index."""
        sector, anchor, members = sector_tables(self.space)
        cay = cayley_table(self.space.group)
        shifted_anchor = cay[self.assignment[sector], anchor]
        return members[sector, shifted_anchor]

    def to_operator(self) -> Operator:
        dim = self.space.dim
        mat = np.zeros((dim, dim), dtype=np.complex128)
        mat[self.permutation(), np.arange(dim)] = cmath.exp(1j * self.phase)
        return Operator(self.space, mat)

    def compose(self, other: SymmetryElement) -> SymmetryElement:
        """self applied after other; assignments compose pointwise."""
        if self.space != other.space:
            raise StructuralError("cannot compose symmetries on different spaces")
        cay = cayley_table(self.space.group)
        return SymmetryElement(
            self.space,
            cay[self.assignment, other.assignment],
            self.phase + other.phase,
        )

    def inverse(self) -> SymmetryElement:
        inv = inverse_table(self.space.group)
        return SymmetryElement(self.space, inv[self.assignment], -self.phase)

    def equal_mod_phase(self, other: SymmetryElement) -> bool:
        return self.space == other.space and np.array_equal(
            self.assignment, other.assignment
        )

    def is_global_translation(self) -> bool:
        return bool((self.assignment == self.assignment[0]).all())


def identity_symmetry(space: Space) -> SymmetryElement:
    return SymmetryElement(space, np.zeros(relation_count(space), dtype=np.int64))


def global_translation_symmetry(space: Space, g: GroupElement, phase: float = 0.0) -> SymmetryElement:
    if g.spec != space.group:
        raise StructuralError("translation element from a different group")
    return SymmetryElement(
        space, np.full(relation_count(space), g.index, dtype=np.int64), phase
    )


def symmetry_from_assignment(
    space: Space,
    assignment: Mapping[RelationTuple, GroupElement] | Sequence[int] | np.ndarray,
    phase: float = 0.0,
) -> SymmetryElement:
    """Build an element from a total map relation -> translation.

    Mapping inputs must cover every relation tuple; sequence inputs are taken
    as element indices in relation-index order.
    """
    if isinstance(assignment, Mapping):
        arr = np.full(relation_count(space), -1, dtype=np.int64)
        for h, g in assignment.items():
            if g.spec != space.group:
                raise StructuralError("translation element from a different group")
            arr[h.index] = g.index
        if (arr < 0).any():
            raise StructuralError("assignment must be total over all relation tuples")
    else:
        arr = np.asarray(assignment, dtype=np.int64)
    return SymmetryElement(space, arr, phase)


def apply_symmetry(u: SymmetryElement, psi: StateVector) -> StateVector:
    if u.space != psi.space:
        raise StructuralError("symmetry and state live on different spaces")
    out = np.empty_like(psi.amplitudes)
    out[u.permutation()] = psi.amplitudes
    if u.phase != 0.0:
        out = out * cmath.exp(1j * u.phase)
    return StateVector(psi.space, out)


def conjugate_symmetry(u: SymmetryElement, rho: Operator) -> Operator:
    """``U rho U^dag`` (the global phase cancels)."""
    if u.space != rho.space:
        raise StructuralError("symmetry and operator live on different spaces")
    perm = u.permutation()
    out = np.empty_like(rho.matrix)
    out[np.ix_(perm, perm)] = rho.matrix
    return Operator(rho.space, out)


def is_in_usym(
    candidate: Operator, eps: float | None = None
) -> tuple[bool, SymmetryElement | None]:
    """Decide whether an operator is a sector-conditional translation up to a
    global phase, and recover the assignment if so."""
    tol = resolve_eps(eps)
    space = candidate.space
    sector, anchor, members = sector_tables(space)
    mat = candidate.matrix
    n_rel = relation_count(space)
    assignment = np.empty(n_rel, dtype=np.int64)
    phase_val: complex | None = None
    for r in range(n_rel):
        col = mat[:, members[r, 0]]  # image of the identity-anchored config
        hits = np.flatnonzero(np.abs(col) > tol)
        if hits.size != 1:
            return False, None
        target = int(hits[0])
        entry = col[target]
        if sector[target] != r or abs(abs(entry) - 1.0) > tol:
            return False, None
        if phase_val is None:
            phase_val = entry
        elif abs(entry - phase_val) > tol:
            return False, None
        assignment[r] = anchor[target]
    recovered = SymmetryElement(space, assignment, cmath.phase(phase_val))
    dev = float(np.abs(recovered.to_operator().matrix - mat).max())
    if dev > tol:
        return False, None
    return True, recovered


def enumerate_symmetry_elements(space: Space, limit: int = 10_000) -> Iterator[SymmetryElement]:
    """All |G|^(|G|^(N-1)) elements; refuses when the count exceeds ``limit``."""
    order = space.group.order
    n_rel = relation_count(space)
    count = order**n_rel
    if count > limit:
        raise DomainError(
            f"symmetry group of {space.group} with N={space.particles} has {count} "
            f"elements, above the enumeration limit {limit}"
        )
    assignment = np.zeros(n_rel, dtype=np.int64)
    for flat in range(count):
        x = flat
        for r in range(n_rel - 1, -1, -1):
            assignment[r] = x % order
            x //= order
        yield SymmetryElement(space, assignment.copy())


def random_symmetry(space: Space, rng: np.random.Generator, with_phase: bool = False) -> SymmetryElement:
    assignment = rng.integers(0, space.group.order, size=relation_count(space))
    phase = float(rng.uniform(0.0, _TWO_PI)) if with_phase else 0.0
    return SymmetryElement(space, assignment, phase)


# Frame switching: for alignable data, the unique symmetry element that moves
# the origin from particle i to particle j, together with the induced unitary
# on the remaining N-1 particles.


@dataclass(frozen=True, eq=False)
class QrfTransform:
    """Change of internal reference particle i -> j."""

    space: Space  # the N-particle space
    source: int
    target: int
    symmetry: SymmetryElement = field(repr=False)

    @property
    def reduced_space(self) -> Space:
        return self.space.reduced()

    def reduced_permutation(self) -> np.ndarray:
        """(dim_{N-1},) target index per source index of the induced unitary."""
        space, i, j = self.space, self.source, self.target
        reduced = self.reduced_space
        if i == j:
            return np.arange(reduced.dim, dtype=np.int64)
        cols = configs_table(reduced)
        full = np.insert(cols, i - 1, 0, axis=1)  # particle i at the origin
        cay = cayley_table(space.group)
        inv = inverse_table(space.group)
        shift = inv[full[:, j - 1]]  # translate so that particle j reaches the origin
        translated = cay[shift[:, None], full]
        reduced_cols = np.delete(translated, j - 1, axis=1)
        order = space.group.order
        out = np.zeros(reduced.dim, dtype=np.int64)
        for p in range(space.particles - 1):
            out = out * order + reduced_cols[:, p]
        return out

    def reduced_operator(self) -> Operator:
        reduced = self.reduced_space
        mat = np.zeros((reduced.dim, reduced.dim), dtype=np.complex128)
        mat[self.reduced_permutation(), np.arange(reduced.dim)] = 1.0
        return Operator(reduced, mat)

    def apply(self, phi: StateVector) -> StateVector:
        """Map a description relative to particle i to one relative to particle j."""
        if phi.space != self.reduced_space:
            raise StructuralError("state does not live on the reduced space")
        out = np.empty_like(phi.amplitudes)
        out[self.reduced_permutation()] = phi.amplitudes
        return StateVector(phi.space, out)

    def inverse(self) -> QrfTransform:
        return QrfTransform(self.space, self.target, self.source, self.symmetry.inverse())


def qrf_transform(space: Space, source: int, target: int) -> QrfTransform:
    """The unique symmetry element mapping every ``|e>_i (x) |phi>`` to
    ``|e>_j (x) |phi'>``, plus the induced unitary on the other particles.

    On the sector with relations h the translation is ``h_{j-1}^{-1} h_{i-1}``
    (with ``h_0`` the identity).
    """
    for p in (source, target):
        if not 1 <= p <= space.particles:
            raise StructuralError(f"particle {p} out of range 1..{space.particles}")
    n_rel = relation_count(space)
    order = space.group.order
    cay = cayley_table(space.group)
    inv = inverse_table(space.group)
    rel_idx = np.arange(n_rel)

    def digit(particle: int) -> np.ndarray:
        if particle == 1:
            return np.zeros(n_rel, dtype=np.int64)
        shift = space.particles - particle
        return (rel_idx // order**shift) % order

    assignment = cay[inv[digit(target)], digit(source)]
    return QrfTransform(space, source, target, SymmetryElement(space, assignment))


def _balanced_residue(r: int, n: int) -> int:
    """Signed representative in [-n/2, n/2); used by the center-of-mass map."""
    return r - n if 2 * r >= n else r


def center_of_mass_symmetry(space: Space, masses: Sequence) -> SymmetryElement:
    """Conditional translation moving the mass-weighted mean position to the origin.

    Defined for a single cyclic factor Z_n.  For relations h the shift is
    ``-floor((m_2 h_1 + ... + m_N h_{N-1}) / m)`` with ``m`` the total mass.
    Relation residues enter as signed representatives in ``[-n/2, n/2)`` and
    masses are treated as exact rationals, so the floor is evaluated without
    floating-point error.  (With canonical representatives in ``[0, n)`` the
    map would not treat a relation and its inverse symmetrically, which is
    what the mean-position picture requires.)
    """
    if space.group.factors != 1:
        raise UnsupportedGroupError(
            "center-of-mass symmetry is defined for a single cyclic factor, got "
            f"{space.group}"
        )
    if len(masses) != space.particles:
        raise StructuralError(f"need {space.particles} masses, got {len(masses)}")
    weights = [Fraction(str(m)) for m in masses]
    if any(w < 0 for w in weights):
        raise DomainError("masses must be non-negative")
    total = sum(weights)
    if total <= 0:
        raise DomainError("total mass must be positive")
    n = space.group.order
    n_rel = relation_count(space)
    assignment = np.empty(n_rel, dtype=np.int64)
    for r in range(n_rel):
        h = relation_from_index(space, r)
        weighted = sum(
            w * _balanced_residue(el.residues[0], n)
            for w, el in zip(weights[1:], h.relations)
        )
        assignment[r] = (-math.floor(weighted / total)) % n
    return SymmetryElement(space, assignment)
