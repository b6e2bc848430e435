"""Multi-indices naming the basis monomials e^nu and the structure phase sigma."""

from __future__ import annotations

from itertools import product
from typing import Iterable, Iterator, List, Optional, Sequence, Tuple

from src.lib.scalars import Cyclotomic
from src.utils.error_handlers import InvalidIndex

Entry = Tuple[int, int]


class MultiIndex:
    """
    Exponent sequence nu in {0,1,2}^N with finite support.

    Stored sparsely as (position, exponent) pairs with strictly increasing
    1-based positions and exponents in {1, 2}; absent positions are 0.
    """

    __slots__ = ("_entries", "_grade", "_hash")

    def __init__(self, entries: Iterable[Entry] = ()) -> None:
        cleaned: List[Entry] = []
        for position, exponent in entries:
            if isinstance(position, bool) or not isinstance(position, int) or position < 1:
                raise InvalidIndex(f"Position must be a positive integer, got {position!r}")
            if exponent not in (0, 1, 2):
                raise InvalidIndex(f"Exponent at position {position} must be 0, 1 or 2, got {exponent!r}")
            if exponent:
                cleaned.append((position, int(exponent)))
        cleaned.sort()
        for (p0, _), (p1, _) in zip(cleaned, cleaned[1:]):
            if p0 == p1:
                raise InvalidIndex(f"Position {p0} appears twice")
        self._entries: Tuple[Entry, ...] = tuple(cleaned)
        self._grade = sum(exponent for _, exponent in self._entries)
        self._hash = hash(self._entries)

    @classmethod
    def _trusted(cls, entries: Tuple[Entry, ...]) -> MultiIndex:
        index = cls.__new__(cls)
        index._entries = entries
        index._grade = sum(exponent for _, exponent in entries)
        index._hash = hash(entries)
        return index

    @classmethod
    def from_exponents(cls, exponents: Sequence[int]) -> MultiIndex:
        """Build from a dense exponent tuple, ``exponents[0]`` being position 1."""
        return cls((position, exponent) for position, exponent in enumerate(exponents, start=1))

    @classmethod
    def generator(cls, position: int, exponent: int = 1) -> MultiIndex:
        return cls([(position, exponent)])

    @property
    def entries(self) -> Tuple[Entry, ...]:
        return self._entries

    @property
    def grade(self) -> int:
        """Total degree |nu| = sum of exponents."""
        return self._grade

    @property
    def support_size(self) -> int:
        """Number of non-zero entries #nu."""
        return len(self._entries)

    @property
    def max_position(self) -> int:
        return self._entries[-1][0] if self._entries else 0

    @property
    def is_empty(self) -> bool:
        return not self._entries

    @property
    def is_binary(self) -> bool:
        """True when nu lies in {0,1}^N."""
        return all(exponent == 1 for _, exponent in self._entries)

    def exponent(self, position: int) -> int:
        for p, exponent in self._entries:
            if p == position:
                return exponent
            if p > position:
                break
        return 0

    def dense(self, d: int) -> Tuple[int, ...]:
        if self.max_position > d:
            raise InvalidIndex(f"Index {self} has support beyond position {d}")
        values = [0] * d
        for position, exponent in self._entries:
            values[position - 1] = exponent
        return tuple(values)

    def supported_within(self, d: int) -> bool:
        return self.max_position <= d

    def plus(self, other: MultiIndex) -> Optional[MultiIndex]:
        """nu + mu, or None when some slot reaches 3."""
        merged: List[Entry] = []
        i = j = 0
        left, right = self._entries, other._entries
        while i < len(left) and j < len(right):
            (p, a), (q, b) = left[i], right[j]
            if p == q:
                if a + b >= 3:
                    return None
                merged.append((p, a + b))
                i += 1
                j += 1
            elif p < q:
                merged.append(left[i])
                i += 1
            else:
                merged.append(right[j])
                j += 1
        merged.extend(left[i:])
        merged.extend(right[j:])
        return MultiIndex._trusted(tuple(merged))

    def minus(self, other: MultiIndex) -> Optional[MultiIndex]:
        """nu - mu, or None when some slot would be negative."""
        remaining = dict(self._entries)
        for position, exponent in other._entries:
            left = remaining.get(position, 0) - exponent
            if left < 0:
                return None
            if left:
                remaining[position] = left
            else:
                remaining.pop(position, None)
        return MultiIndex._trusted(tuple(sorted(remaining.items())))

    def doubled(self) -> Optional[MultiIndex]:
        """2*nu, defined only for binary nu."""
        if not self.is_binary:
            return None
        return MultiIndex._trusted(tuple((position, 2) for position, _ in self._entries))

    def restricted(self, d: int) -> MultiIndex:
        """Drop every position above d."""
        return MultiIndex._trusted(tuple(entry for entry in self._entries if entry[0] <= d))

    def sort_key(self) -> Tuple[int, Tuple[Entry, ...]]:
        """
        Graded-lexicographic key: grade first, then exponent vectors compared
        from position 1 with the larger exponent first (e1 before e2).
        """
        return (self._grade, tuple((position, -exponent) for position, exponent in self._entries))

    def __lt__(self, other: MultiIndex) -> bool:
        return self.sort_key() < other.sort_key()

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, MultiIndex):
            return NotImplemented
        return self._entries == other._entries

    def __hash__(self) -> int:
        return self._hash

    def __iter__(self) -> Iterator[Entry]:
        return iter(self._entries)

    def __len__(self) -> int:
        return len(self._entries)

    def __repr__(self) -> str:
        return f"MultiIndex({list(self._entries)!r})"

    def __str__(self) -> str:
        if not self._entries:
            return "1"
        return "*".join(
            f"e[{position}]" if exponent == 1 else f"e[{position}]^{exponent}"
            for position, exponent in self._entries
        )


EMPTY = MultiIndex()


def sigma_exponent(nu: MultiIndex, mu: MultiIndex) -> Optional[int]:
    """
    Exponent k of the structure phase sigma(nu, mu) = w**k.

    k = 2 * sum_{s<j} nu_j * mu_s (mod 3); None when nu_j + mu_j >= 3 for some j.
    """
    total = 0
    mu_entries = mu.entries
    for j, nu_j in nu.entries:
        for s, mu_s in mu_entries:
            if s < j:
                total += nu_j * mu_s
            elif s == j:
                if nu_j + mu_s >= 3:
                    return None
            else:
                break
    return (2 * total) % 3


def sigma(nu: MultiIndex, mu: MultiIndex) -> Cyclotomic:
    """
    Structure phase of e^nu e^mu = sigma(nu, mu) e^(nu+mu).

    Args:
        nu: Left multi-index
        mu: Right multi-index

    Returns:
        Cyclotomic zero when nu + mu is inadmissible, otherwise w**k
    """
    k = sigma_exponent(nu, mu)
    if k is None:
        return Cyclotomic.ZERO  # type: ignore[attr-defined]
    return Cyclotomic.omega_power(k)


def basis_indices(d: int) -> List[MultiIndex]:
    """All 3**d indices supported in positions 1..d, in canonical order."""
    if d < 0:
        raise ValueError(f"Dimension must be non-negative, got {d}")
    indices = [MultiIndex.from_exponents(exponents) for exponents in product((0, 1, 2), repeat=d)]
    return sorted(indices, key=MultiIndex.sort_key)


def swap_exponent(nu: MultiIndex, mu: MultiIndex) -> Optional[int]:
    """k with e^mu e^nu = w**k e^nu e^mu, or None when both products vanish."""
    forward = sigma_exponent(nu, mu)
    if forward is None:
        return None
    backward = sigma_exponent(mu, nu)
    return (backward - forward) % 3  # type: ignore[operator]
