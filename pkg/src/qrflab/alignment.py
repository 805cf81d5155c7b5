"""Alignable states and observables, and their canonical aligned forms.

A pure state is *alignable* when, inside every relation sector, it occupies at
most one classical configuration.  Such a state is a conditional translation
away from the product form ``|e>_i (x) |phi>`` for any choice of reference
particle i, and the reduced state |phi> is unique up to a global phase.  We fix
that phase deterministically: the first nonzero amplitude of |phi> in basis
order is made real and positive.

Not-alignable is a normal return value (None), not an error: workflows branch
on it.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .config import SUPPORT_EPS, resolve_eps
from .errors import NotAlignableError, StructuralError
from .groups import GroupElement, cayley_table, inverse_table
from .hilbert import Operator, Space, StateVector, insert_particle_indices
from .sectors import (
    RelationTuple,
    origin_anchor_index,
    origin_anchor_reduced_index,
    relation_count,
    relation_from_index,
    sector_tables,
)
from .symmetry import SymmetryElement, conjugate_symmetry


@dataclass(frozen=True)
class SectorAmplitude:
    """One occupied sector: its relation label, the amplitude, and the anchor
    (the position of particle 1 in the single occupied configuration)."""

    relation: RelationTuple
    amplitude: complex
    anchor: GroupElement


@dataclass(frozen=True)
class AlignableDecomposition:
    """An alignable state written as one amplitude per occupied sector."""

    space: Space
    entries: tuple[SectorAmplitude, ...]

    @property
    def coefficients(self) -> dict[RelationTuple, tuple[complex, GroupElement]]:
        return {e.relation: (e.amplitude, e.anchor) for e in self.entries}

    def squared_norm(self) -> float:
        return float(sum(abs(e.amplitude) ** 2 for e in self.entries))

    def amplitude_vector(self) -> np.ndarray:
        """(n_rel,) amplitudes indexed by relation index (zeros where empty)."""
        out = np.zeros(relation_count(self.space), dtype=np.complex128)
        for e in self.entries:
            out[e.relation.index] = e.amplitude
        return out


def decompose_alignable(
    psi: StateVector, support_eps: float = SUPPORT_EPS
) -> AlignableDecomposition | None:
    """Read off the per-sector amplitudes, or None when any sector holds more
    than one occupied configuration."""
    members = sector_tables(psi.space)[2]
    amps = psi.amplitudes[members]  # (n_rel, |G|)
    occupied = np.abs(amps) > support_eps
    if (occupied.sum(axis=1) > 1).any():
        return None
    entries = []
    for r in np.flatnonzero(occupied.any(axis=1)):
        g_idx = int(occupied[r].argmax())
        entries.append(
            SectorAmplitude(
                relation_from_index(psi.space, int(r)),
                complex(amps[r, g_idx]),
                psi.space.group.element_at(g_idx),
            )
        )
    return AlignableDecomposition(psi.space, tuple(entries))


@dataclass(frozen=True)
class AlignedForm:
    """The canonical description of an alignable state relative to one particle.

    ``reconstruct()`` rebuilds ``exp(i*global_phase) * |e>_i (x) reduced_state``,
    which is symmetry-equivalent (including phase) to the original state.
    """

    reference_particle: int
    reduced_state: StateVector
    global_phase: float

    def reconstruct(self) -> StateVector:
        reduced = self.reduced_state
        full_space = reduced.space.extended(1)
        lift = insert_particle_indices(full_space, self.reference_particle)
        out = np.zeros(full_space.dim, dtype=np.complex128)
        out[lift] = reduced.amplitudes * cmath.exp(1j * self.global_phase)
        return StateVector(full_space, out)


def align_to(psi: StateVector, particle: int, support_eps: float = SUPPORT_EPS) -> AlignedForm:
    """Unique aligned form of ``psi`` relative to the given particle.

    Raises :class:`NotAlignableError` when the state is not alignable.
    """
    if not 1 <= particle <= psi.space.particles:
        raise StructuralError(
            f"particle {particle} out of range 1..{psi.space.particles}"
        )
    if psi.space.particles < 2:
        raise StructuralError("alignment needs at least two particles")
    dec = decompose_alignable(psi, support_eps)
    if dec is None:
        raise NotAlignableError("state occupies more than one configuration in a sector")
    reduced_space = psi.space.reduced()
    red_idx = origin_anchor_reduced_index(psi.space, particle)
    phi = np.zeros(reduced_space.dim, dtype=np.complex128)
    for e in dec.entries:
        phi[red_idx[e.relation.index]] = e.amplitude
    nz = np.flatnonzero(np.abs(phi) > support_eps)
    phase = 0.0
    if nz.size:
        phase = cmath.phase(phi[nz[0]]) % (2.0 * math.pi)
        phi = phi * cmath.exp(-1j * phase)
    return AlignedForm(particle, StateVector(reduced_space, phi), phase)


def aligning_symmetry(psi: StateVector, particle: int, support_eps: float = SUPPORT_EPS) -> SymmetryElement:
    """The conditional translation carrying ``psi`` onto its aligned form
    (sectors without support are translated to the origin anchor)."""
    dec = decompose_alignable(psi, support_eps)
    if dec is None:
        raise NotAlignableError("state occupies more than one configuration in a sector")
    space = psi.space
    cay = cayley_table(space.group)
    inv = inverse_table(space.group)
    anchor_g = sector_tables(space)[1][origin_anchor_index(space, particle)]
    assignment = anchor_g.copy()  # empty sectors: move the identity anchor to target
    for e in dec.entries:
        r = e.relation.index
        assignment[r] = cay[anchor_g[r], inv[e.anchor.index]]
    return SymmetryElement(space, assignment)


def align_observable(
    A: Operator, particle: int, eps: float | None = None
) -> Operator | None:
    """Reduced form ``A_i`` of an alignable operator, with ``U A U^dag`` of the
    shape ``|e><e|_i (x) A_i`` for a conditional translation U.

    Searches sector by sector: the operator must touch at most one
    configuration per sector (rows and columns jointly), which pins the
    required translation.  Returns None when no assignment works.
    """
    tol = resolve_eps(eps)
    space = A.space
    if not 1 <= particle <= space.particles:
        raise StructuralError(f"particle {particle} out of range 1..{space.particles}")
    if space.particles < 2:
        raise StructuralError("alignment needs at least two particles")
    members = sector_tables(space)[2]
    cay = cayley_table(space.group)
    inv = inverse_table(space.group)
    anchor_g = sector_tables(space)[1][origin_anchor_index(space, particle)]
    n_rel = relation_count(space)
    assignment = anchor_g.copy()
    row_mass = np.abs(A.matrix[members.ravel(), :]).max(axis=1).reshape(members.shape)
    col_mass = np.abs(A.matrix[:, members.ravel()]).max(axis=0).reshape(members.shape)
    mass = np.maximum(row_mass, col_mass)
    for r in range(n_rel):
        touched = np.flatnonzero(mass[r] > tol)
        if touched.size > 1:
            return None
        if touched.size == 1:
            assignment[r] = cay[anchor_g[r], inv[touched[0]]]
    u = SymmetryElement(space, assignment)
    aligned = conjugate_symmetry(u, A)
    lift = insert_particle_indices(space, particle)
    reduced_space = space.reduced()
    block = aligned.matrix[np.ix_(lift, lift)]
    # everything outside the lifted block must vanish
    outside = aligned.matrix.copy()
    outside[np.ix_(lift, lift)] = 0.0
    if float(np.abs(outside).max()) > tol:
        return None
    return Operator(reduced_space, block)
