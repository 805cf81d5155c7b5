"""Exact arithmetic and character theory for finite Abelian groups.

A group is presented as a product of cyclic factors ``Z_{n_1} x ... x Z_{n_k}``
and its elements as reduced residue vectors.  All group arithmetic is exact
integer arithmetic; complex numbers appear only when a character is evaluated.

Indexing convention (used by every module in this package): elements and
characters are enumerated in mixed-radix order with the *last* factor varying
fastest, so index 0 is always the identity element / trivial character.
"""

from __future__ import annotations

import cmath
import math
import re
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import StructuralError

_GROUP_RE = re.compile(r"^z(\d+)(?:xz(\d+))*$", re.IGNORECASE)


@dataclass(frozen=True)
class GroupSpec:
    """A finite Abelian group given as an ordered product of cyclic factors."""

    moduli: tuple[int, ...]

    def __post_init__(self):
        if not self.moduli:
            raise StructuralError("group needs at least one cyclic factor")
        if any(int(n) != n or n < 2 for n in self.moduli):
            raise StructuralError(f"cyclic factor orders must be integers >= 2, got {self.moduli}")
        object.__setattr__(self, "moduli", tuple(int(n) for n in self.moduli))

    @property
    def order(self) -> int:
        return math.prod(self.moduli)

    @property
    def factors(self) -> int:
        return len(self.moduli)

    def identity(self) -> GroupElement:
        return GroupElement(self, (0,) * len(self.moduli))

    def element(self, residues) -> GroupElement:
        """Build an element, reducing each residue mod its factor order."""
        residues = tuple(residues)
        if len(residues) != len(self.moduli):
            raise StructuralError(
                f"expected {len(self.moduli)} residues for {self}, got {len(residues)}"
            )
        return GroupElement(self, tuple(int(r) % n for r, n in zip(residues, self.moduli)))

    def element_at(self, index: int) -> GroupElement:
        """Inverse of :meth:`GroupElement.index` (mixed radix, last factor fastest)."""
        if not 0 <= index < self.order:
            raise StructuralError(f"element index {index} out of range for {self}")
        residues = []
        for n in reversed(self.moduli):
            residues.append(index % n)
            index //= n
        return GroupElement(self, tuple(reversed(residues)))

    def character_at(self, index: int) -> Character:
        if not 0 <= index < self.order:
            raise StructuralError(f"character index {index} out of range for {self}")
        return Character(self, self.element_at(index).residues)

    def __str__(self) -> str:
        return "x".join(f"Z{n}" for n in self.moduli)


@dataclass(frozen=True)
class GroupElement:
    """A reduced residue vector in its owning group."""

    spec: GroupSpec
    residues: tuple[int, ...]

    @property
    def index(self) -> int:
        idx = 0
        for r, n in zip(self.residues, self.spec.moduli):
            idx = idx * n + r
        return idx

    def __mul__(self, other: GroupElement) -> GroupElement:
        return compose(self, other)

    def inverse(self) -> GroupElement:
        return inverse(self)

    def is_identity(self) -> bool:
        return all(r == 0 for r in self.residues)

    def __str__(self) -> str:
        return "(" + ",".join(str(r) for r in self.residues) + ")"


@dataclass(frozen=True)
class Character:
    """A one-dimensional irreducible representation, labelled by a residue vector.

    Evaluation: ``chi(g) = exp(2*pi*i * sum_j k_j g_j / n_j)``, always of unit
    modulus and multiplicative in ``g``.
    """

    spec: GroupSpec
    index_vector: tuple[int, ...]

    @property
    def index(self) -> int:
        idx = 0
        for r, n in zip(self.index_vector, self.spec.moduli):
            idx = idx * n + r
        return idx

    def is_trivial(self) -> bool:
        return all(k == 0 for k in self.index_vector)

    def __call__(self, g: GroupElement) -> complex:
        return eval_character(self, g)


def _require_same_spec(a, b) -> None:
    if a.spec != b.spec:
        raise StructuralError(f"mismatched groups: {a.spec} vs {b.spec}")


def compose(a: GroupElement, b: GroupElement) -> GroupElement:
    """Componentwise sum mod the factor orders."""
    _require_same_spec(a, b)
    return GroupElement(
        a.spec,
        tuple((x + y) % n for x, y, n in zip(a.residues, b.residues, a.spec.moduli)),
    )


def inverse(a: GroupElement) -> GroupElement:
    return GroupElement(a.spec, tuple((-x) % n for x, n in zip(a.residues, a.spec.moduli)))


def eval_character(chi: Character, g: GroupElement) -> complex:
    """Evaluate ``chi`` on ``g`` via the exponential formula.

    The phase is reduced exactly mod 1 in integer arithmetic (over a common
    denominator ``lcm(moduli)``) before the single complex exponential, so no
    drift accumulates for large residues.
    """
    _require_same_spec(chi, g)
    lcm = math.lcm(*chi.spec.moduli)
    t = 0
    for k, x, n in zip(chi.index_vector, g.residues, chi.spec.moduli):
        t += k * x * (lcm // n)
    return cmath.exp(2j * math.pi * (t % lcm) / lcm)


def enumerate_elements(spec: GroupSpec) -> list[GroupElement]:
    """All elements in mixed-radix order; index 0 is the identity."""
    return [spec.element_at(i) for i in range(spec.order)]


def enumerate_characters(spec: GroupSpec) -> list[Character]:
    """All characters in mixed-radix order; index 0 is the trivial one."""
    return [spec.character_at(i) for i in range(spec.order)]


def parse_group(text: str) -> GroupSpec:
    """Parse strings like ``"Z6"`` or ``"z2xZ3"`` (case-insensitive)."""
    cleaned = text.strip()
    if not _GROUP_RE.match(cleaned):
        raise ValueError(f"cannot parse group spec {text!r}; expected e.g. 'Z6' or 'Z2xZ3'")
    moduli = tuple(int(part[1:]) for part in cleaned.lower().split("x"))
    if any(n < 2 for n in moduli):
        raise ValueError(f"cyclic factor orders must be >= 2 in {text!r}")
    return GroupSpec(moduli)


def group_to_json(spec: GroupSpec) -> dict:
    return {"moduli": list(spec.moduli)}


def group_from_json(payload: dict) -> GroupSpec:
    return GroupSpec(tuple(int(n) for n in payload["moduli"]))


# Integer tables used by the dense linear-algebra modules.  All are cached
# per GroupSpec and marked read-only so they can be shared across threads.


def _freeze(arr: np.ndarray) -> np.ndarray:
    arr.setflags(write=False)
    return arr


@lru_cache(maxsize=None)
def residue_table(spec: GroupSpec) -> np.ndarray:
    """(order, factors) residue vector per element index."""
    out = np.zeros((spec.order, len(spec.moduli)), dtype=np.int64)
    for i in range(spec.order):
        out[i] = spec.element_at(i).residues
    return _freeze(out)


@lru_cache(maxsize=None)
def cayley_table(spec: GroupSpec) -> np.ndarray:
    """(order, order) index table of the group law."""
    res = residue_table(spec)
    moduli = np.array(spec.moduli, dtype=np.int64)
    summed = (res[:, None, :] + res[None, :, :]) % moduli
    weights = np.ones(len(spec.moduli), dtype=np.int64)
    for j in range(len(spec.moduli) - 2, -1, -1):
        weights[j] = weights[j + 1] * spec.moduli[j + 1]
    return _freeze((summed * weights).sum(axis=2))


@lru_cache(maxsize=None)
def inverse_table(spec: GroupSpec) -> np.ndarray:
    """(order,) index of each element's inverse."""
    res = residue_table(spec)
    moduli = np.array(spec.moduli, dtype=np.int64)
    inv = (-res) % moduli
    weights = np.ones(len(spec.moduli), dtype=np.int64)
    for j in range(len(spec.moduli) - 2, -1, -1):
        weights[j] = weights[j + 1] * spec.moduli[j + 1]
    return _freeze((inv * weights).sum(axis=1))


@lru_cache(maxsize=None)
def character_matrix(spec: GroupSpec) -> np.ndarray:
    """(order, order) complex table ``X[k, g] = chi_k(g)``."""
    out = np.empty((spec.order, spec.order), dtype=np.complex128)
    chars = enumerate_characters(spec)
    elems = enumerate_elements(spec)
    for k, chi in enumerate(chars):
        for g, el in enumerate(elems):
            out[k, g] = eval_character(chi, el)
    return _freeze(out)
