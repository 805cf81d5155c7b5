"""The nested invariant operator algebras and their orthogonal projections.

Four algebras, ordered by inclusion:

  PHYS       operators supported on the translation-invariant subspace
             (spanned by the trivial-character sector states),
  ALG        PHYS plus one free coefficient per sector on the nontrivial-
             character block of that sector,
  INV        operators commuting with every sector-conditional translation:
             PHYS plus an arbitrary diagonal over (sector, nontrivial
             character) pairs,
  INV_PRIME  operators commuting with every *global* translation: arbitrary
             blocks within each fixed character across sectors.

Each projection below is the Hilbert-Schmidt-orthogonal projection onto its
algebra.  The INV projection uses the closed form (physical sandwich plus the
per-(sector, character) diagonal); averaging over the full conditional-
translation group, which the closed form replaces, is kept only as the gated
oracle :func:`project_inv_bruteforce` since that group is astronomically
large.  The INV_PRIME projection *is* the literal average over the |G| global
translations.
"""

from __future__ import annotations

import cmath
import enum

import numpy as np

from .alignment import decompose_alignable
from .config import SUPPORT_EPS, resolve_eps
from .errors import DomainError, StructuralError
from .groups import character_matrix
from .hilbert import Operator, Space, StateVector, max_abs_diff
from .sectors import (
    origin_anchor_reduced_index,
    relation_count,
    relational_basis_matrix,
    relational_gram,
    sector_diagonal_sums,
    sector_tables,
)
from .symmetry import conjugate_symmetry, enumerate_symmetry_elements


class AlgebraTag(enum.Enum):
    PHYS = "phys"
    ALG = "alg"
    INV = "inv"
    INV_PRIME = "inv_prime"


def project_phys(rho: Operator) -> Operator:
    """Two-sided compression onto the translation-invariant subspace."""
    s = relational_basis_matrix(rho.space)
    return Operator(rho.space, s @ relational_gram(rho) @ s.conj().T)


def project_alg(rho: Operator) -> Operator:
    """HS-orthogonal projection onto ALG.

    The nontrivial-character projector of sector h has squared HS norm
    |G| - 1, so its coefficient is ``tr(P_{h,nontriv} rho) / (|G| - 1)``.
    """
    space = rho.space
    order = space.group.order
    s = relational_basis_matrix(space)
    gram = relational_gram(rho)
    coeff = (sector_diagonal_sums(rho) - np.diagonal(gram)) / (order - 1)
    return Operator(space, _assemble_alg(space, s, gram, coeff))


def _assemble_alg(space: Space, s: np.ndarray, gram: np.ndarray, coeff: np.ndarray) -> np.ndarray:
    # sum_h c_h * (sector diagonal - trivial dyad) + S gram S^dag
    members = sector_tables(space)[2]
    out = s @ ((gram - np.diag(coeff)) @ s.conj().T)
    diag = np.zeros(space.dim, dtype=np.complex128)
    diag[members] = coeff[:, None]
    out[np.arange(space.dim), np.arange(space.dim)] += diag
    return out


def project_inv(rho: Operator) -> Operator:
    """HS-orthogonal projection onto INV (closed form).

    Physical sandwich plus, for every sector h and nontrivial character k,
    the diagonal coefficient ``<h;k| rho |h;k>``.
    """
    space = rho.space
    order = space.group.order
    members = sector_tables(space)[2]
    chars = character_matrix(space.group)
    s = relational_basis_matrix(space)
    out = s @ (relational_gram(rho) @ s.conj().T)
    for r in range(relation_count(space)):
        idx = members[r]
        block = rho.matrix[np.ix_(idx, idx)]
        # d[k] = <h;chi_k| rho |h;chi_k>; the sector state carries conj(chi)/sqrt|G|
        d = np.einsum("kg,gh,kh->k", chars, block, chars.conj()) / order
        d[0] = 0.0
        out[np.ix_(idx, idx)] += (chars.conj().T * d) @ chars / order
    return Operator(space, out)


def project_inv_prime(rho: Operator) -> Operator:
    """HS-orthogonal projection onto INV_PRIME: the literal average of
    ``U_g rho U_g^dag`` over all |G| global translations."""
    from .hilbert import translation_permutation

    space = rho.space
    out = np.zeros_like(rho.matrix)
    for g in range(space.group.order):
        perm = translation_permutation(space, g)
        tmp = np.empty_like(rho.matrix)
        tmp[np.ix_(perm, perm)] = rho.matrix
        out += tmp
    return Operator(space, out / space.group.order)


def project_inv_bruteforce(rho: Operator, limit: int = 10_000) -> Operator:
    """Literal average of ``U rho U^dag`` over the whole conditional-translation
    group.  Only usable on tiny spaces; this is the oracle the closed form of
    :func:`project_inv` is checked against."""
    out = np.zeros_like(rho.matrix)
    count = 0
    for u in enumerate_symmetry_elements(rho.space, limit=limit):
        out += conjugate_symmetry(u, rho).matrix
        count += 1
    return Operator(rho.space, out / count)


_PROJECTIONS = {
    AlgebraTag.PHYS: project_phys,
    AlgebraTag.ALG: project_alg,
    AlgebraTag.INV: project_inv,
    AlgebraTag.INV_PRIME: project_inv_prime,
}


def is_member(rho: Operator, tag: AlgebraTag, eps: float | None = None) -> bool:
    """Membership test: the tag's projection leaves the operator fixed."""
    return max_abs_diff(_PROJECTIONS[tag](rho), rho) < resolve_eps(eps)


def classify_operator(rho: Operator, eps: float | None = None) -> AlgebraTag | None:
    """Finest algebra containing the operator, or None."""
    for tag in (AlgebraTag.PHYS, AlgebraTag.ALG, AlgebraTag.INV, AlgebraTag.INV_PRIME):
        if is_member(rho, tag, eps):
            return tag
    return None


def relational_observable(A: Operator, particle: int) -> Operator:
    """Invariant encoding of "the value of A when the given particle sits at
    the origin": ``|G| * P_phys (|e><e|_particle (x) A) P_phys`` on one more
    particle.

    The map is an isomorphism onto PHYS, preserving products, linear
    combinations and adjoints, and is independent of the particle choice up to
    conjugating A with the corresponding frame change.
    """
    space = A.space.extended(1)
    if not 1 <= particle <= space.particles:
        raise StructuralError(f"particle {particle} out of range 1..{space.particles}")
    red = origin_anchor_reduced_index(space, particle)
    s = relational_basis_matrix(space)
    compressed = A.matrix[np.ix_(red, red)]
    return Operator(space, s @ compressed @ s.conj().T)


def observationally_equivalent(rho: Operator, sigma: Operator, eps: float | None = None) -> bool:
    """True when no invariant observable distinguishes the two states, i.e.
    their INV projections coincide."""
    if rho.space != sigma.space:
        raise StructuralError("states live on different spaces")
    return max_abs_diff(project_inv(rho), project_inv(sigma)) < resolve_eps(eps)


def symmetry_equivalent_alignable(
    psi: StateVector, phi: StateVector, eps: float | None = None
) -> bool:
    """For alignable pure states: equality of the per-sector amplitude lists up
    to one common phase.  Raises on non-alignable input."""
    if psi.space != phi.space:
        raise StructuralError("states live on different spaces")
    tol = resolve_eps(eps)
    da = decompose_alignable(psi)
    db = decompose_alignable(phi)
    if da is None or db is None:
        raise DomainError("symmetry equivalence test requires alignable states")
    a = da.amplitude_vector()
    b = db.amplitude_vector()
    ref = int(np.abs(b).argmax())
    if abs(b[ref]) <= SUPPORT_EPS:
        return bool(np.abs(a).max() <= tol)  # both zero
    if abs(a[ref]) <= SUPPORT_EPS:
        return False
    rot = a[ref] / b[ref]
    if abs(abs(rot) - 1.0) > tol:
        return False
    return bool(np.abs(a - rot * b).max() < tol)


# Explicit witnesses of the strict inclusions, built exactly (single basis
# matrix units), not sampled.


def _phys_unit(space: Space, row: int, col: int) -> np.ndarray:
    s = relational_basis_matrix(space)
    return np.outer(s[:, row], s[:, col].conj())


def witness_alg_not_phys(space: Space) -> Operator:
    """The nontrivial-character projector of the first sector: in ALG, not PHYS."""
    members = sector_tables(space)[2]
    mat = np.zeros((space.dim, space.dim), dtype=np.complex128)
    idx = members[0]
    mat[idx, idx] = 1.0
    return Operator(space, mat - _phys_unit(space, 0, 0))


def witness_inv_not_alg(space: Space) -> Operator:
    """A single (sector, nontrivial character) dyad: in INV, not ALG.

    Requires |G| >= 3; at order 2 each sector has exactly one nontrivial
    character, so the two algebras coincide and no witness exists.
    """
    order = space.group.order
    if order < 3:
        raise DomainError("INV and ALG coincide for groups of order 2")
    members = sector_tables(space)[2]
    chars = character_matrix(space.group)
    vec = np.zeros(space.dim, dtype=np.complex128)
    vec[members[0]] = chars[1].conj() / np.sqrt(order)
    return Operator(space, np.outer(vec, vec.conj()))


def witness_inv_prime_not_inv(space: Space) -> Operator:
    """A cross-sector dyad within one nontrivial character: in INV_PRIME, not INV.

    Requires at least two particles (a single sector admits no cross terms).
    """
    if space.particles < 2:
        raise DomainError("INV_PRIME and INV coincide for a single particle")
    order = space.group.order
    members = sector_tables(space)[2]
    chars = character_matrix(space.group)
    u = np.zeros(space.dim, dtype=np.complex128)
    v = np.zeros(space.dim, dtype=np.complex128)
    u[members[0]] = chars[1].conj() / np.sqrt(order)
    v[members[1]] = chars[1].conj() / np.sqrt(order)
    return Operator(space, np.outer(u, v.conj()))
