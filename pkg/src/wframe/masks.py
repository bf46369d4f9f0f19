"""Walsh polynomials, scaling-mask generation and polyphase components.

A mask of order ``p**n - 1`` is stored by its coefficients ``a_alpha`` in
``m(w) = sum_alpha a_alpha conj(W_alpha(w))``.  Its boundary values
``b_s = m(A^{-n} h_[s])`` are recovered on demand with the inverse VC
transform.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np

from .vgroup import GroupElement, digit_matrix
from .walsh import _phases, log_p, vc_forward, vc_inverse

__all__ = [
    "ADMISSIBILITY_TOL",
    "AdmissibilityError",
    "WalshPolynomial",
    "MaskValidity",
    "poly_eval",
    "poly_eval_digits",
    "grid_digits",
    "generate_mask",
    "partition_sums",
    "validate_mask",
    "polyphase_decompose",
    "polyphase_recompose",
    "random_boundary",
]

ADMISSIBILITY_TOL = 1e-12


class AdmissibilityError(ValueError):
    """Boundary values violate ``b_0 = 1`` or the per-partition mass bound."""

    def __init__(self, message: str, l: int | None = None, value: float | None = None):
        super().__init__(message)
        self.l = l
        self.value = value


@dataclass(frozen=True, eq=False)
class WalshPolynomial:
    p: int
    n: int
    coeffs: np.ndarray = field(repr=False)

    def __post_init__(self):
        c = np.array(self.coeffs, dtype=complex).reshape(-1)
        if self.n < 0:
            raise ValueError("order exponent n must be nonnegative")
        if c.size != self.p**self.n:
            raise ValueError(f"expected {self.p**self.n} coefficients, got {c.size}")
        c.setflags(write=False)
        object.__setattr__(self, "coeffs", c)

    @classmethod
    def from_coeffs(cls, coeffs, p: int) -> "WalshPolynomial":
        coeffs = np.asarray(coeffs, dtype=complex)
        return cls(p, log_p(coeffs.size, p), coeffs)

    def boundary_values(self) -> np.ndarray:
        """Values on the grid ``A^{-n} h_[s]``, s = 0..p^n - 1."""
        return vc_inverse(self.coeffs, self.p)

    def __call__(self, w: GroupElement) -> complex:
        return poly_eval(self, w)

    def __repr__(self) -> str:
        return f"WalshPolynomial(p={self.p}, n={self.n}, coeffs={np.round(self.coeffs, 6).tolist()})"


def grid_digits(w: GroupElement, n: int) -> np.ndarray:
    """Digits ``w_1..w_n``, the only ones an order-(p^n - 1) polynomial sees."""
    return np.array([w.digit(i) for i in range(1, n + 1)], dtype=np.int64)


def poly_eval_digits(m: WalshPolynomial, digits: np.ndarray) -> np.ndarray:
    """Evaluate m at points given by rows of digits ``(w_1, ..., w_n)``.

    Direct character sum: ``W_alpha(w) = exp(2 pi i/p sum_i alpha_i w_{1+i})``.
    """
    digits = np.atleast_2d(np.asarray(digits, dtype=np.int64))
    alpha_digits = digit_matrix(np.arange(m.p**m.n), m.p, m.n)
    e = (digits @ alpha_digits.T) % m.p
    return np.conj(_phases(e, m.p)) @ m.coeffs


def poly_eval(m: WalshPolynomial, w: GroupElement) -> complex:
    if w.p != m.p:
        raise ValueError(f"base mismatch: mask p={m.p}, point p={w.p}")
    return complex(poly_eval_digits(m, grid_digits(w, m.n))[0])


def partition_sums(b: np.ndarray, p: int) -> np.ndarray:
    """``sum_i |b_{l + i p^{n-1}}|^2`` for each l < p^{n-1}."""
    b = np.asarray(b)
    n = log_p(b.size, p)
    if n == 0:
        return np.abs(b) ** 2
    return (np.abs(b.reshape(p, p ** (n - 1))) ** 2).sum(axis=0)


@dataclass
class MaskValidity:
    is_walsh_normalized: bool
    partition_sums: list[float]
    max_sum: float
    is_admissible: bool
    grid_max_sum: float | None = None

    def to_json(self) -> dict:
        return {
            "admissible": self.is_admissible,
            "walsh_normalized": self.is_walsh_normalized,
            "max_sum": self.max_sum,
            "partition_sums": self.partition_sums,
        }


def _check_boundary(b: np.ndarray, p: int, tol: float) -> tuple[bool, np.ndarray]:
    normalized = abs(b[0] - 1) <= tol
    sums = partition_sums(b, p)
    return normalized, sums


def validate_mask(m: WalshPolynomial, tol: float = ADMISSIBILITY_TOL, direct: bool = True) -> MaskValidity:
    """Check ``m(theta) = 1`` and the modulated row-norm bound.

    The bound is checked on the partition sums of the boundary values and,
    when ``direct`` is set, also by evaluating ``sum_l |m(w + delta_l)|^2``
    at every grid point through character sums.
    """
    b = m.boundary_values()
    normalized, sums = _check_boundary(b, m.p, tol)
    max_sum = float(sums.max())
    grid_max = None
    if direct and m.n >= 1:
        pts = digit_matrix(np.arange(m.p**m.n), m.p, m.n)[:, ::-1]  # row s -> (w_1..w_n)
        total = np.zeros(len(pts))
        for l in range(m.p):
            shifted = pts.copy()
            shifted[:, 0] = (shifted[:, 0] + l) % m.p
            total += np.abs(poly_eval_digits(m, shifted)) ** 2
        grid_max = float(total.max())
    elif direct:
        grid_max = float(m.p * abs(m.coeffs[0]) ** 2)
    if 1 < max_sum <= 1 + tol:
        warnings.warn("partition sum exceeds 1 within tolerance; treated as 1")
    ok = bool(normalized and max_sum <= 1 + tol)
    return MaskValidity(bool(normalized), [float(x) for x in sums], max_sum, ok, grid_max)


def generate_mask(b, p: int, check: bool = True, tol: float = ADMISSIBILITY_TOL) -> WalshPolynomial:
    """Scaling mask from boundary values ``b`` via the forward VC transform.

    With ``check`` the values must satisfy ``b_0 = 1`` and every partition
    sum ``sum_i |b_{l + i p^{n-1}}|^2 <= 1``; pass ``check=False`` to build
    inadmissible masks for negative tests.
    """
    b = np.asarray(b, dtype=complex).reshape(-1)
    log_p(b.size, p)
    if check:
        normalized, sums = _check_boundary(b, p, tol)
        if not normalized:
            raise AdmissibilityError(
                f"boundary condition violated: b_0 = {b[0]!r}, must equal 1", l=0, value=float(abs(b[0]))
            )
        worst = int(np.argmax(sums))
        if sums[worst] > 1 + tol:
            raise AdmissibilityError(
                f"partition bound violated at l={worst}: "
                f"sum_i |b_(l+i*p^(n-1))|^2 = {sums[worst]:.17g} > 1",
                l=worst,
                value=float(sums[worst]),
            )
        if sums[worst] > 1:
            warnings.warn("partition sum exceeds 1 within tolerance; treated as 1")
    return WalshPolynomial.from_coeffs(vc_forward(b, p), p)


def polyphase_decompose(m: WalshPolynomial) -> list[WalshPolynomial]:
    """Components ``mu_k`` with coefficients ``sqrt(p) a_{p alpha + k}``."""
    if m.n < 1:
        raise ValueError("polyphase decomposition needs n >= 1")
    root = np.sqrt(m.p)
    return [WalshPolynomial(m.p, m.n - 1, root * m.coeffs[k :: m.p]) for k in range(m.p)]


def polyphase_recompose(mu, n: int) -> WalshPolynomial:
    """Inverse of :func:`polyphase_decompose`:
    ``m(w) = p^{-1/2} sum_s mu_s(A w) conj(W_s(w))``."""
    mu = list(mu)
    if not mu:
        raise ValueError("no components given")
    p = mu[0].p
    if len(mu) != p:
        raise ValueError(f"expected {p} components, got {len(mu)}")
    for c in mu:
        if c.p != p or c.n != n - 1:
            raise ValueError(f"component shape (p={c.p}, n={c.n}) does not match (p={p}, n={n - 1})")
    a = np.empty(p**n, dtype=complex)
    for k, c in enumerate(mu):
        a[k::p] = c.coeffs / np.sqrt(p)
    return WalshPolynomial(p, n, a)


def random_boundary(p: int, n: int, rng: np.random.Generator, tight: bool = False) -> np.ndarray:
    """Random admissible boundary values.

    Each partition l > 0 gets a mass drawn uniformly from [0, 1] (exactly 1
    when ``tight``), split across its p entries with random weights and
    phases.  Partition 0 is pinned by ``b_0 = 1``.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    L = p ** (n - 1)
    b = np.zeros((p, L), dtype=complex)
    for l in range(L):
        if l == 0:
            b[0, 0] = 1.0
            continue
        mass = 1.0 if tight else rng.uniform()
        w = rng.dirichlet(np.ones(p))
        phase = np.exp(2j * np.pi * rng.uniform(size=p))
        col = np.sqrt(mass * w) * phase
        # keep rounding from pushing a tight partition above its mass
        while np.sum(np.abs(col) ** 2) > mass:
            col *= 1 - 2.0**-52
        b[:, l] = col
    return b.reshape(-1)
