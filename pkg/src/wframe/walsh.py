"""Characters, generalized Walsh functions and the Vilenkin-Chrestenson transform.

Phases are kept as integer exponents mod p until the last moment, so the
kernels themselves are exact; floating point only enters in summation.

The size-``p**n`` transform pairs with the kernel
``W_alpha(A^{-n} h_[s]) = exp(2 pi i / p * sum_i alpha_i s_{n-1-i})``,
i.e. digit i of alpha meets digit ``n-1-i`` of s.  The fast path runs n
radix-p butterfly stages on same-position digit pairs and then applies the
digit-reversal permutation to the output index.
"""

from __future__ import annotations

import cmath
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .vgroup import GroupElement, delta, digit_matrix, h_of, oplus

__all__ = [
    "RootOfUnityPhase",
    "character",
    "walsh_eval",
    "walsh_matrix",
    "kernel_exponents",
    "digit_reversal",
    "log_p",
    "vc_forward",
    "vc_inverse",
    "vc_forward_entries",
]

NAIVE_MAX = 4096


@dataclass(frozen=True)
class RootOfUnityPhase:
    """``exp(2 pi i e / p)`` stored as the integer exponent ``e mod p``."""

    p: int
    e: int

    def __post_init__(self):
        object.__setattr__(self, "e", self.e % self.p)

    def __mul__(self, other: "RootOfUnityPhase") -> "RootOfUnityPhase":
        if self.p != other.p:
            raise ValueError(f"base mismatch: {self.p} vs {other.p}")
        return RootOfUnityPhase(self.p, self.e + other.e)

    def conjugate(self) -> "RootOfUnityPhase":
        return RootOfUnityPhase(self.p, -self.e)

    @property
    def value(self) -> complex:
        if self.e == 0:
            return 1 + 0j
        if 2 * self.e == self.p:
            return -1 + 0j
        return cmath.exp(2j * cmath.pi * self.e / self.p)

    def __complex__(self) -> complex:
        return self.value


def character(x: GroupElement, w: GroupElement) -> RootOfUnityPhase:
    """chi(x, w) = exp(2 pi i / p * sum_j x_j w_{1-j})."""
    if x.p != w.p:
        raise ValueError(f"base mismatch: {x.p} vs {w.p}")
    wd = w.as_dict()
    e = sum(d * wd.get(1 - j, 0) for j, d in x.digits)
    return RootOfUnityPhase(x.p, e)


def walsh_eval(alpha: int, x: GroupElement) -> RootOfUnityPhase:
    return character(x, h_of(alpha, x.p))


def walsh_matrix(w: GroupElement) -> np.ndarray:
    """The p x p matrix ``p^{-1/2} [W_k(w + delta_l)]_{l,k}``; unitary for every w."""
    p = w.p
    out = np.empty((p, p), dtype=complex)
    for l in range(p):
        wl = oplus(w, delta(l, p))
        for k in range(p):
            out[l, k] = walsh_eval(k, wl).value
    return out / np.sqrt(p)


def log_p(size: int, p: int) -> int:
    """n with ``p**n == size``; raises ValueError otherwise."""
    if p < 2:
        raise ValueError(f"base p must be >= 2, got {p}")
    n, m = 0, 1
    while m < size:
        m *= p
        n += 1
    if m != size or size < 1:
        raise ValueError(f"length {size} is not a power of {p}")
    return n


@lru_cache(maxsize=64)
def digit_reversal(p: int, n: int) -> np.ndarray:
    """Permutation sending index s to the index with its n base-p digits reversed."""
    idx = np.arange(p**n, dtype=np.int64)
    d = digit_matrix(idx, p, n)
    return d[:, ::-1] @ (p ** np.arange(n, dtype=np.int64))


def kernel_exponents(p: int, n: int, alphas=None) -> np.ndarray:
    """Integer exponents of ``W_alpha(A^{-n} h_[s])`` (rows alpha, columns s)."""
    N = p**n
    alphas = np.arange(N) if alphas is None else np.asarray(alphas, dtype=np.int64)
    s = np.arange(N, dtype=np.int64)
    if p == 2:
        # exponent = parity of popcount(alpha AND reversed(s))
        both = alphas[:, None] & digit_reversal(2, n)[None, :]
        return _popcount_parity(both)
    da = digit_matrix(alphas, p, n)
    ds = digit_matrix(s, p, n)[:, ::-1]
    return (da @ ds.T) % p


def _popcount_parity(x: np.ndarray) -> np.ndarray:
    x = x.astype(np.uint64)
    parity = np.zeros(x.shape, dtype=np.uint64)
    while np.any(x):
        parity ^= x & np.uint64(1)
        x >>= np.uint64(1)
    return parity.astype(np.int64)


def _phases(e: np.ndarray, p: int) -> np.ndarray:
    table = np.exp(2j * np.pi * np.arange(p) / p)
    if p == 2:
        table = np.array([1.0 + 0j, -1.0 + 0j])
    elif p % 4 == 0:
        table[p // 4] = 1j
        table[p // 2] = -1
        table[3 * p // 4] = -1j
    elif p % 2 == 0:
        table[p // 2] = -1
    return table[e]


def _as_batch(x) -> tuple[np.ndarray, bool]:
    arr = np.asarray(x, dtype=complex)
    if arr.ndim == 0:
        raise ValueError("transform input must be a vector")
    return arr, arr.ndim == 1


def _butterflies(x: np.ndarray, p: int, n: int, sign: int) -> np.ndarray:
    """Same-position digit transform along the last axis, n radix-p stages."""
    lead = x.shape[:-1]
    N = p**n
    y = np.array(x, dtype=complex).reshape(-1, N)
    B = y.shape[0]
    if p > 2:
        f = np.exp(sign * 2j * np.pi * np.outer(np.arange(p), np.arange(p)) / p)
    for stage in range(n):
        stride = p**stage
        v = y.reshape(B, N // (p * stride), p, stride)
        if p == 2:
            a, b = v[:, :, 0, :], v[:, :, 1, :]
            v = np.stack((a + b, a - b), axis=2)
        else:
            v = np.einsum("ab,xgbs->xgas", f, v)
        y = v.reshape(B, N)
    return y.reshape(lead + (N,))


def _transform(x, p: int, method: str, inverse: bool) -> np.ndarray:
    arr, single = _as_batch(x)
    n = log_p(arr.shape[-1], p)
    sign = -1 if inverse else 1
    if method == "fast":
        out = _butterflies(arr, p, n, sign)[..., digit_reversal(p, n)]
    elif method == "naive":
        if p**n > NAIVE_MAX:
            raise ValueError(f"naive transform limited to size {NAIVE_MAX}; use vc_forward_entries")
        k = _phases(kernel_exponents(p, n), p)
        if inverse:
            k = k.conj()
        out = arr @ k.T
    else:
        raise ValueError(f"unknown method {method!r}")
    if not inverse:
        out = out / p**n
    return out


def vc_forward(b, p: int, method: str = "fast") -> np.ndarray:
    """Discrete VC transform ``a_alpha = p^{-n} sum_s b_s W_alpha(A^{-n} h_[s])``.

    Operates along the last axis, so a 2-d array is transformed row by row.
    """
    return _transform(b, p, method, inverse=False)


def vc_inverse(a, p: int, method: str = "fast") -> np.ndarray:
    """Inverse transform ``b_s = sum_alpha a_alpha conj(W_alpha(A^{-n} h_[s]))``."""
    return _transform(a, p, method, inverse=True)


def vc_forward_entries(b, p: int, alphas, inverse: bool = False) -> np.ndarray:
    """Selected outputs of the transform by direct summation, O(p^n) per entry.

    This is the naive oracle for sizes too large for the full kernel matrix.
    """
    arr, _ = _as_batch(b)
    n = log_p(arr.shape[-1], p)
    k = _phases(kernel_exponents(p, n, alphas), p)
    if inverse:
        return arr @ k.conj().T
    return (arr @ k.T) / p**n
