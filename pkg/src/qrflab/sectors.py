"""Relation sectors and the character basis.

The N-particle space splits into sectors labelled by the tuple of relations
between particles 2..N and particle 1:

    h = (h_1, ..., h_{N-1}),   h_k = g_{k+1} * g_1^{-1}.

Each sector is spanned by the configurations ``|g, h_1 g, ..., h_{N-1} g>``
for g in the group, so it has dimension |G|.  Within a sector, the
character-weighted combinations

    |h; chi> = |G|^{-1/2} * sum_g chi(g^{-1}) |g, hg>

form an orthonormal eigenbasis of all global translations, with eigenvalue
chi(g).  The trivial-character slice over all sectors is the translation-
invariant ("relational") subspace; its projector equals the coherent average
of all global translations.

Basis ordering for the character basis: (sector index, character index)
lexicographic, using the group module's enumeration.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Sequence

import numpy as np

from .errors import StructuralError
from .groups import (
    Character,
    GroupElement,
    GroupSpec,
    cayley_table,
    character_matrix,
    inverse_table,
)
from .hilbert import (
    Operator,
    Space,
    StateVector,
    configs_table,
    translation_permutation,
)


@dataclass(frozen=True)
class RelationTuple:
    """Interparticle relations, labelled relative to particle 1."""

    group: GroupSpec
    relations: tuple[GroupElement, ...]

    def __post_init__(self):
        for el in self.relations:
            if el.spec != self.group:
                raise StructuralError("relation entry from a different group")

    @property
    def index(self) -> int:
        idx = 0
        for el in self.relations:
            idx = idx * self.group.order + el.index
        return idx

    def __len__(self) -> int:
        return len(self.relations)

    def __str__(self) -> str:
        return "(" + ",".join(str(el) for el in self.relations) + ")"


def relation_count(space: Space) -> int:
    return space.group.order ** (space.particles - 1)


def relation_of(config: Sequence[GroupElement]) -> RelationTuple:
    """Relations of a classical configuration; invariant under global translation."""
    config = list(config)
    if not config:
        raise StructuralError("empty configuration")
    group = config[0].spec
    inv_first = config[0].inverse()
    rels = tuple(g * inv_first for g in config[1:])
    return RelationTuple(group, rels)


def relation_from_index(space: Space, index: int) -> RelationTuple:
    if not 0 <= index < relation_count(space):
        raise StructuralError(f"relation index {index} out of range")
    order = space.group.order
    digits = []
    for _ in range(space.particles - 1):
        digits.append(index % order)
        index //= order
    return RelationTuple(
        space.group, tuple(space.group.element_at(d) for d in reversed(digits))
    )


def sector_config(h: RelationTuple, g: GroupElement) -> tuple[GroupElement, ...]:
    """The configuration ``(g, h_1 g, ..., h_{N-1} g)`` of sector h anchored at g."""
    return (g,) + tuple(rel * g for rel in h.relations)


@lru_cache(maxsize=None)
def sector_tables(space: Space) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Cached index tables ``(sector_of, anchor_of, members)``.

    sector_of[i]  -> relation index of basis state i
    anchor_of[i]  -> group-element index of particle 1 in basis state i
    members[r, g] -> basis index of the sector-r configuration anchored at g
    """
    cols = configs_table(space)
    order = space.group.order
    cay = cayley_table(space.group)
    inv = inverse_table(space.group)
    anchor = cols[:, 0].copy()
    sector = np.zeros(space.dim, dtype=np.int64)
    inv_anchor = inv[anchor]
    for p in range(1, space.particles):
        sector = sector * order + cay[cols[:, p], inv_anchor]
    members = np.empty((relation_count(space), order), dtype=np.int64)
    members[sector, anchor] = np.arange(space.dim)
    for arr in (sector, anchor, members):
        arr.setflags(write=False)
    return sector, anchor, members


def sector_state(space: Space, h: RelationTuple, chi: Character) -> StateVector:
    """The unit vector ``|h; chi>``."""
    if h.group != space.group or chi.spec != space.group:
        raise StructuralError("labels from a different group")
    if len(h) != space.particles - 1:
        raise StructuralError(
            f"relation tuple of length {len(h)} in a {space.particles}-particle space"
        )
    members = sector_tables(space)[2]
    order = space.group.order
    chi_row = character_matrix(space.group)[chi.index]
    vec = np.zeros(space.dim, dtype=np.complex128)
    vec[members[h.index]] = chi_row.conj() / np.sqrt(order)
    return StateVector(space, vec)


def sector_projector(space: Space, h: RelationTuple) -> Operator:
    """Rank-|G| orthogonal projector onto sector h."""
    if len(h) != space.particles - 1:
        raise StructuralError("relation tuple length does not match the space")
    members = sector_tables(space)[2]
    mat = np.zeros((space.dim, space.dim), dtype=np.complex128)
    idx = members[h.index]
    mat[idx, idx] = 1.0
    return Operator(space, mat)


@lru_cache(maxsize=None)
def relational_basis_matrix(space: Space) -> np.ndarray:
    """(dim, n_rel) isometry whose columns are the trivial-character states,
    ordered by relation index."""
    members = sector_tables(space)[2]
    order = space.group.order
    out = np.zeros((space.dim, relation_count(space)), dtype=np.complex128)
    for r in range(relation_count(space)):
        out[members[r], r] = 1.0 / np.sqrt(order)
    out.setflags(write=False)
    return out


@lru_cache(maxsize=None)
def sector_basis_matrix(space: Space) -> np.ndarray:
    """(dim, dim) unitary change of basis from the computational basis to the
    character basis; column ``r * |G| + k`` is ``|h_r; chi_k>``."""
    members = sector_tables(space)[2]
    order = space.group.order
    chars = character_matrix(space.group)
    out = np.zeros((space.dim, space.dim), dtype=np.complex128)
    scale = 1.0 / np.sqrt(order)
    for r in range(relation_count(space)):
        out[np.ix_(members[r], np.arange(r * order, (r + 1) * order))] = (
            chars.conj().T * scale
        )
    out.setflags(write=False)
    return out


@lru_cache(maxsize=None)
def physical_projector(space: Space) -> Operator:
    """Orthogonal projector onto the translation-invariant subspace, built as
    the coherent average ``(1/|G|) sum_g U_g^{(x)N}`` of all global translations."""
    order = space.group.order
    mat = np.zeros((space.dim, space.dim), dtype=np.complex128)
    src = np.arange(space.dim)
    for g in range(order):
        mat[translation_permutation(space, g), src] += 1.0
    mat /= order
    mat.setflags(write=False)
    return Operator(space, mat)


def physical_projector_from_sector_states(space: Space) -> Operator:
    """The same projector assembled as the sum of trivial-character dyads.

    Kept as an independent construction so the coincidence of the two group
    averaging routes stays checkable.
    """
    s = relational_basis_matrix(space)
    return Operator(space, s @ s.conj().T)


def relational_amplitudes(psi: StateVector) -> np.ndarray:
    """(n_rel,) overlaps ``<h;1|psi>`` via per-sector aggregation (no dense matmul)."""
    members = sector_tables(psi.space)[2]
    order = psi.space.group.order
    return psi.amplitudes[members].sum(axis=1) / np.sqrt(order)


def relational_gram(rho: Operator) -> np.ndarray:
    """(n_rel, n_rel) matrix of ``<h;1| rho |j;1>``."""
    members = sector_tables(rho.space)[2]
    n_rel, order = members.shape
    gather = members.ravel()
    rows = rho.matrix[gather, :].reshape(n_rel, order, -1).sum(axis=1)
    gram = rows[:, gather].reshape(n_rel, n_rel, order).sum(axis=2)
    return gram / order


def sector_diagonal_sums(rho: Operator) -> np.ndarray:
    """(n_rel,) per-sector sums of the diagonal, i.e. ``tr(P_h rho)``."""
    members = sector_tables(rho.space)[2]
    return np.diagonal(rho.matrix)[members].sum(axis=1)


def sector_probabilities(psi: StateVector) -> np.ndarray:
    """(n_rel,) squared norm of psi inside each sector."""
    members = sector_tables(psi.space)[2]
    return (np.abs(psi.amplitudes) ** 2)[members].sum(axis=1)


@lru_cache(maxsize=None)
def origin_anchor_index(space: Space, particle: int) -> np.ndarray:
    """(n_rel,) basis index of the unique sector configuration whose given
    particle (1-based) sits at the group identity."""
    if not 1 <= particle <= space.particles:
        raise StructuralError(f"particle {particle} out of range 1..{space.particles}")
    members = sector_tables(space)[2]
    inv = inverse_table(space.group)
    n_rel = relation_count(space)
    out = np.empty(n_rel, dtype=np.int64)
    if particle == 1:
        out[:] = members[:, 0]
    else:
        order = space.group.order
        # relation of the chosen particle to particle 1 is digit particle-2
        shift = space.particles - 1 - (particle - 1)
        rel_digit = (np.arange(n_rel) // order**shift) % order
        out[:] = members[np.arange(n_rel), inv[rel_digit]]
    out.setflags(write=False)
    return out


@lru_cache(maxsize=None)
def origin_anchor_reduced_index(space: Space, particle: int) -> np.ndarray:
    """(n_rel,) basis index, in the (N-1)-particle space, of the origin-anchored
    sector configuration with the given particle's slot removed."""
    if space.particles < 2:
        raise StructuralError("need at least two particles to drop one")
    full = origin_anchor_index(space, particle)
    cols = configs_table(space)[full]
    reduced_cols = np.delete(cols, particle - 1, axis=1)
    order = space.group.order
    idx = np.zeros(len(full), dtype=np.int64)
    for p in range(space.particles - 1):
        idx = idx * order + reduced_cols[:, p]
    idx.setflags(write=False)
    return idx
