"""Exact arithmetic on the Vilenkin group G_p.

A point of G_p is a doubly infinite digit sequence ``(x_j)`` over
``{0, ..., p-1}``.  Only finitely supported sequences are representable
here, which covers every grid point, coset representative and element of
the lattice H used by the rest of the package.

Index conventions follow the usual ones for G_p:

* ``lambda(x) = sum_j x_j p^{-j}``, so digit index ``-i`` carries weight ``p^i``
  and index ``j >= 1`` carries the fraction ``p^{-j}``;
* the dilation ``A`` acts by ``(Ax)_j = x_{j+1}`` and multiplies ``lambda`` by p;
* ``U_l`` is the set of sequences vanishing at every index ``j <= l``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping

import numpy as np

__all__ = [
    "GroupElement",
    "theta",
    "oplus",
    "ominus",
    "shift",
    "lambda_value",
    "h_of",
    "delta",
    "norm",
    "coset_rep",
    "base_digits",
    "from_base_digits",
    "digit_matrix",
    "digit_add",
    "digit_neg",
]


def _check_base(p: int) -> None:
    if not isinstance(p, (int, np.integer)) or p < 2:
        raise ValueError(f"base p must be an integer >= 2, got {p!r}")


@dataclass(frozen=True)
class GroupElement:
    """Finitely supported point of G_p in canonical form.

    ``digits`` is a sorted tuple of ``(j, d)`` pairs with ``1 <= d <= p-1``;
    zero digits are never stored, so equality is structural.
    """

    p: int
    digits: tuple[tuple[int, int], ...] = field(default=())

    def __post_init__(self):
        _check_base(self.p)
        last = None
        for j, d in self.digits:
            if not 1 <= d <= self.p - 1:
                raise ValueError(f"digit {d} at index {j} outside 1..{self.p - 1}")
            if last is not None and j <= last:
                raise ValueError("digit indices must be strictly increasing")
            last = j

    @classmethod
    def from_map(cls, p: int, digits: Mapping[int, int]) -> "GroupElement":
        """Build from an index -> digit map; digits are reduced mod p."""
        _check_base(p)
        items = []
        for j, d in digits.items():
            d = int(d) % p
            if d:
                items.append((int(j), d))
        return cls(p, tuple(sorted(items)))

    def digit(self, j: int) -> int:
        for i, d in self.digits:
            if i == j:
                return d
            if i > j:
                break
        return 0

    def as_dict(self) -> dict[int, int]:
        return dict(self.digits)

    @property
    def is_theta(self) -> bool:
        return not self.digits

    @property
    def k(self) -> int:
        """Smallest index carrying a nonzero digit."""
        if not self.digits:
            raise ValueError("k(x) is undefined for theta")
        return self.digits[0][0]

    def to_json(self) -> dict:
        return {"p": int(self.p), "digits": [[j, d] for j, d in self.digits]}

    @classmethod
    def from_json(cls, obj: Mapping) -> "GroupElement":
        return cls(int(obj["p"]), tuple((int(j), int(d)) for j, d in obj["digits"]))

    def __repr__(self) -> str:
        return f"GroupElement(p={self.p}, digits={dict(self.digits)})"


def theta(p: int) -> GroupElement:
    return GroupElement(p)


def _same_base(x: GroupElement, y: GroupElement) -> None:
    if x.p != y.p:
        raise ValueError(f"base mismatch: {x.p} vs {y.p}")


def oplus(x: GroupElement, y: GroupElement) -> GroupElement:
    """Digitwise addition mod p."""
    _same_base(x, y)
    out = dict(x.digits)
    for j, d in y.digits:
        out[j] = out.get(j, 0) + d
    return GroupElement.from_map(x.p, out)


def ominus(x: GroupElement) -> GroupElement:
    return GroupElement(x.p, tuple((j, x.p - d) for j, d in x.digits))


def shift(x: GroupElement, k: int) -> GroupElement:
    """Apply ``A^k``: the digit at index j moves to index ``j - k``."""
    return GroupElement(x.p, tuple((j - k, d) for j, d in x.digits))


def lambda_value(x: GroupElement) -> Fraction:
    total = Fraction(0)
    for j, d in x.digits:
        total += d * Fraction(x.p) ** (-j)
    return total


def base_digits(alpha: int, p: int) -> list[int]:
    """Little-endian base-p digits of a nonnegative integer."""
    if alpha < 0:
        raise ValueError("alpha must be nonnegative")
    out = []
    while alpha:
        alpha, d = divmod(alpha, p)
        out.append(d)
    return out


def from_base_digits(digits: Iterable[int], p: int) -> int:
    total = 0
    for d in reversed(list(digits)):
        total = total * p + d
    return total


def h_of(alpha: int, p: int) -> GroupElement:
    """The lattice element with ``lambda = alpha`` (digit i of alpha at index -i)."""
    _check_base(p)
    return GroupElement.from_map(p, {-i: d for i, d in enumerate(base_digits(alpha, p))})


def delta(l: int, p: int) -> GroupElement:
    """The element with ``lambda = l/p``, ``0 <= l < p``."""
    if not 0 <= l < p:
        raise ValueError(f"delta index {l} outside 0..{p - 1}")
    return shift(h_of(l, p), -1)


def norm(x: GroupElement) -> Fraction:
    if x.is_theta:
        return Fraction(0)
    return Fraction(x.p) ** (-x.k)


def coset_rep(n: int, s: int, p: int) -> GroupElement:
    """Representative ``A^{-n} h_[s]`` of the coset U_{n,s} of A^{-n}U in U."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    if not 0 <= s < p**n:
        raise ValueError(f"coset index {s} outside 0..{p**n - 1}")
    return shift(h_of(s, p), -n)


# Vectorised digit helpers for the transform kernels.  Indices are treated as
# little-endian base-p numbers of a fixed length.


def digit_matrix(values: np.ndarray, p: int, n: int) -> np.ndarray:
    """Digits of each value: shape ``values.shape + (n,)``, little-endian."""
    values = np.asarray(values, dtype=np.int64)
    powers = p ** np.arange(n, dtype=np.int64)
    return (values[..., None] // powers) % p


def digit_add(a: np.ndarray, b: np.ndarray, p: int, n: int) -> np.ndarray:
    """``lambda(h_[a] + h_[b])`` for index arrays below ``p**n``."""
    da, db = digit_matrix(a, p, n), digit_matrix(b, p, n)
    return ((da + db) % p) @ (p ** np.arange(n, dtype=np.int64))


def digit_neg(a: np.ndarray, p: int, n: int) -> np.ndarray:
    """``lambda(ominus h_[a])`` for index arrays below ``p**n``."""
    return ((-digit_matrix(a, p, n)) % p) @ (p ** np.arange(n, dtype=np.int64))
