"""Matrix extension: wavelet masks from an admissible scaling mask.

The modulation matrix ``M(w) = [m_nu(w + delta_l)]_{l, nu}`` has orthonormal
rows iff, for every residue ``l < p^{n-1}``, the polyphase values
``b^{(nu,s)}_l`` form p orthonormal rows of length r + 1.  Row 0 of that
table is fixed by m0; the remaining entries come from a unitary completion
of the column ``(b^{(0,0)}_l, ..., b^{(0,p-1)}_l, slack...)``.

Polyphase components have order exponent n - 1, so their values at
``A^{1-n} h_[l]`` only depend on ``l mod p^{n-1}``.  Everything here is
solved once per residue and replicated.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .masks import (
    WalshPolynomial,
    poly_eval,
    poly_eval_digits,
    polyphase_decompose,
    polyphase_recompose,
    validate_mask,
)
from .vgroup import GroupElement, delta, digit_add, digit_matrix, digit_neg, oplus
from .walsh import vc_forward, vc_inverse

__all__ = [
    "ExtensionImpossible",
    "MaskFamily",
    "PolyphaseTable",
    "UEPReport",
    "householder_unitary",
    "polyphase_value_table",
    "complete_table",
    "extend_algorithm_a",
    "extend_theorem2",
    "random_unitary_e1",
    "modulation_matrix",
    "verify_uep",
]

IDENTITY_TOL = 1e-12
DEFICIENCY_TOL = 1e-10
PIVOT_THRESHOLD = 0.5
SNAP_TOL = 1e-12


class ExtensionImpossible(ValueError):
    """r = p - 1 but some polyphase row of m0 has norm strictly below 1."""

    def __init__(self, message: str, l: int, deficiency: float):
        super().__init__(message)
        self.l = l
        self.deficiency = deficiency


def _threads() -> int:
    try:
        return max(1, int(os.environ.get("WFRAME_THREADS", "1")))
    except ValueError:
        return 1


def _htr(c: np.ndarray) -> np.ndarray:
    r1 = c.size
    out = np.empty((r1, r1), dtype=complex)
    denom = 1 - np.conj(c[0])
    out[:, 0] = c
    out[0, 1:] = np.conj(c[1:]) * (1 - c[0]) / denom
    out[1:, 1:] = np.eye(r1 - 1) - np.outer(c[1:], np.conj(c[1:])) / denom
    return out


def householder_unitary(c, tol: float = 1e-10, pivot: bool = True) -> np.ndarray:
    """Unitary matrix whose first column is the unit vector c.

    Uses the explicit Householder-type completion.  When ``c_0`` is close
    to 1 the formula loses accuracy, so the entry farthest from 1 is swapped
    into position 0 first and the swap is undone on the rows afterwards.
    """
    c = np.asarray(c, dtype=complex).reshape(-1)
    norm2 = float(np.sum(np.abs(c) ** 2))
    if abs(norm2 - 1) > tol:
        raise ValueError(f"column must have unit norm within {tol}, got squared norm {norm2!r}")
    if abs(1 - c[0]) <= IDENTITY_TOL:
        return np.eye(c.size, dtype=complex)
    if pivot and abs(1 - c[0]) < PIVOT_THRESHOLD:
        k = int(np.argmax(np.abs(1 - c)))
        perm = np.arange(c.size)
        perm[[0, k]] = perm[[k, 0]]
        return _htr(c[perm])[perm]
    return _htr(c)


@dataclass(frozen=True, eq=False)
class PolyphaseTable:
    """Per-residue completion data.

    ``columns[l]`` is the length-(r+1) column ``c`` for residue l (entries
    ``k >= p`` are slack).  After completion ``unitary[l]`` is a unitary with
    first column ``columns[l]`` and ``b^{(nu,s)}_l = unitary[l][s, nu]``.
    """

    p: int
    n: int
    r: int
    columns: np.ndarray
    unitary: np.ndarray | None = None

    @property
    def values(self) -> np.ndarray:
        """``b^{(nu,s)}_l`` as an array indexed ``[nu, s, l]``."""
        if self.unitary is None:
            out = np.zeros((self.r + 1, self.p, self.columns.shape[0]), dtype=complex)
            out[0] = self.columns[:, : self.p].T
            return out
        return np.transpose(self.unitary[:, : self.p, :], (2, 1, 0))

    @property
    def slack(self) -> np.ndarray:
        return self.columns[:, self.p :]


@dataclass(frozen=True, eq=False)
class MaskFamily:
    p: int
    n: int
    r: int
    masks: tuple[WalshPolynomial, ...]
    table: PolyphaseTable | None = field(default=None, repr=False)

    def __post_init__(self):
        masks = tuple(self.masks)
        object.__setattr__(self, "masks", masks)
        if len(masks) != self.r + 1:
            raise ValueError(f"expected {self.r + 1} masks, got {len(masks)}")
        for m in masks:
            if m.p != self.p or m.n != self.n:
                raise ValueError("all masks must share (p, n)")

    @property
    def m0(self) -> WalshPolynomial:
        return self.masks[0]


def _slack_entries(deficiency: float, count: int, rule: str, rng) -> np.ndarray:
    out = np.zeros(count, dtype=complex)
    if count == 0 or deficiency <= 0:
        return out
    if rule == "deterministic":
        out[0] = np.sqrt(deficiency)
    elif rule == "random":
        if rng is None:
            raise ValueError("random slack rule needs an rng")
        w = rng.dirichlet(np.ones(count))
        out[:] = np.sqrt(deficiency * w) * np.exp(2j * np.pi * rng.uniform(size=count))
    else:
        raise ValueError(f"unknown slack rule {rule!r}")
    return out


def polyphase_value_table(
    m0: WalshPolynomial, r: int, slack: str = "deterministic", rng=None, check: bool = True
) -> PolyphaseTable:
    """Polyphase values of m0 per residue, padded with slack to unit norm."""
    p, n = m0.p, m0.n
    if n < 1:
        raise ValueError("mask order exponent n must be >= 1")
    if r < p - 1:
        raise ValueError(f"need r >= p - 1 = {p - 1}, got r = {r}")
    if check:
        v = validate_mask(m0, direct=False)
        if not v.is_admissible:
            raise ValueError(f"scaling mask is not admissible (max partition sum {v.max_sum!r})")
    mu = polyphase_decompose(m0)
    # mu_s at A^{1-n} h_[l] is the grid value of an order-(n-1) polynomial
    rows = np.array([vc_inverse(c.coeffs, p) for c in mu])  # [s, l]
    L = p ** (n - 1)
    columns = np.zeros((L, r + 1), dtype=complex)
    columns[:, :p] = rows.T
    for l in range(L):
        deficiency = 1.0 - float(np.sum(np.abs(rows[:, l]) ** 2))
        if r == p - 1:
            if deficiency > DEFICIENCY_TOL:
                raise ExtensionImpossible(
                    f"polyphase row norm condition: r = p - 1 = {r} needs sum_s |b_l^(0,s)|^2 = 1, "
                    f"but residue l={l} has deficiency {deficiency:.17g}",
                    l=l,
                    deficiency=deficiency,
                )
            continue
        if deficiency <= SNAP_TOL:
            # rounding noise; its square root would leak ~1e-8 into m_nu(theta)
            deficiency = 0.0
        columns[l, p:] = _slack_entries(deficiency, r + 1 - p, slack, rng)
    return PolyphaseTable(p, n, r, columns)


def complete_table(table: PolyphaseTable) -> PolyphaseTable:
    """Complete every column to a unitary (per residue, optionally threaded)."""
    tol = max(DEFICIENCY_TOL, 1e-10)
    L = table.columns.shape[0]
    if _threads() > 1 and L > 1:
        with ThreadPoolExecutor(_threads()) as ex:
            mats = list(ex.map(lambda l: householder_unitary(table.columns[l], tol), range(L)))
    else:
        mats = [householder_unitary(table.columns[l], tol) for l in range(L)]
    return PolyphaseTable(table.p, table.n, table.r, table.columns, np.array(mats))


def _masks_from_values(values: np.ndarray, p: int, n: int) -> list[WalshPolynomial]:
    """Rebuild masks from polyphase values ``[nu, s, l]``."""
    out = []
    for nu in range(values.shape[0]):
        mu = [WalshPolynomial(p, n - 1, vc_forward(values[nu, s], p)) for s in range(p)]
        out.append(polyphase_recompose(mu, n))
    return out


def extend_algorithm_a(
    m0: WalshPolynomial, r: int, slack: str = "deterministic", rng=None
) -> MaskFamily:
    """Wavelet masks m_1..m_r by per-residue Householder completion."""
    table = complete_table(polyphase_value_table(m0, r, slack, rng))
    masks = _masks_from_values(table.values[1:], m0.p, m0.n)
    return MaskFamily(m0.p, m0.n, r, (m0, *masks), table)


def random_unitary_e1(r: int, rng: np.random.Generator) -> np.ndarray:
    """Random (r+1) x (r+1) unitary with first column e_1 (QR of a Gaussian block)."""
    z = (rng.normal(size=(r, r)) + 1j * rng.normal(size=(r, r))) / np.sqrt(2)
    q, rr = np.linalg.qr(z)
    d = np.diag(rr)
    q = q * (d / np.abs(d))
    v = np.eye(r + 1, dtype=complex)
    v[1:, 1:] = q
    return v


def _check_v(V, r: int, L: int, p: int, n: int) -> list[np.ndarray]:
    V = [np.asarray(v, dtype=complex) for v in V]
    if len(V) not in (L, p**n):
        raise ValueError(f"need {L} (per residue) or {p**n} (per l) matrices, got {len(V)}")
    e1 = np.zeros(r + 1)
    e1[0] = 1
    for l, v in enumerate(V):
        if v.shape != (r + 1, r + 1):
            raise ValueError(f"V_{l} has shape {v.shape}, expected {(r + 1, r + 1)}")
        dev = np.max(np.abs(v @ v.conj().T - np.eye(r + 1)))
        if dev > 1e-10:
            raise ValueError(f"V_{l} is not unitary (deviation {dev:.3g})")
        if np.max(np.abs(v[:, 0] - e1)) > 1e-10:
            raise ValueError(f"V_{l} does not have first column e_1")
    if len(V) == p**n:
        for l in range(L, p**n):
            if np.max(np.abs(V[l] - V[l % L])) > 1e-10:
                raise ValueError(
                    f"V_{l} differs from V_{l % L}; matrices must be constant on residues mod {L}"
                )
        V = V[:L]
    return V


def extend_theorem2(
    m0: WalshPolynomial, r: int, V, slack: str = "deterministic", rng=None
) -> MaskFamily:
    """General extension: rotate the Algorithm A completion by unitaries V_l.

    ``b^{(nu,s)}_l = sum_k bstar^{(k,s)}_l V_l[nu, k]`` with V_l unitary and
    first column e_1, then

    * ``c^{(nu,s)}_t = p^{-n} sum_{l < p^n} b^{(nu,s)}_l W_t(A^{-n} h_[l])``,
    * ``a^{(nu)}_q = p^{-1/2} sum_{s < p} c^{(nu,s)}_{lambda(h_[q] - h_[s])}``.

    V may be given per residue class (length p^{n-1}) or per l (length p^n,
    constant on residue classes).
    """
    p, n = m0.p, m0.n
    L = p ** (n - 1)
    base = complete_table(polyphase_value_table(m0, r, slack, rng))
    V = _check_v(V, r, L, p, n)
    # b[l, s, nu]
    b = np.array([base.unitary[l][:p, :] @ V[l].T for l in range(L)])
    full = np.arange(p**n)
    b_ext = b[full % L]  # [l, s, nu] over l < p^n
    c = vc_forward(np.transpose(b_ext, (2, 1, 0)), p)  # [nu, s, t]
    q = np.arange(p**n)
    neg = digit_neg(np.arange(p), p, n)
    idx = [digit_add(q, np.full_like(q, neg[s]), p, n) for s in range(p)]
    masks = []
    for nu in range(1, r + 1):
        a = sum(c[nu, s, idx[s]] for s in range(p)) / np.sqrt(p)
        masks.append(WalshPolynomial(p, n, a))
    table = PolyphaseTable(p, n, r, base.columns, np.array([base.unitary[l] @ V[l].T for l in range(L)]))
    return MaskFamily(p, n, r, (m0, *masks), table)


def modulation_matrix(fam: MaskFamily, w: GroupElement) -> np.ndarray:
    """``[m_nu(w + delta_l)]`` with rows l < p and columns nu <= r."""
    if w.p != fam.p:
        raise ValueError(f"base mismatch: family p={fam.p}, point p={w.p}")
    out = np.empty((fam.p, fam.r + 1), dtype=complex)
    for l in range(fam.p):
        wl = oplus(w, delta(l, fam.p))
        for nu, m in enumerate(fam.masks):
            out[l, nu] = poly_eval(m, wl)
    return out


@dataclass
class UEPReport:
    passed: bool
    tol: float
    max_dev: float
    grid_points: int

    def to_json(self) -> dict:
        return {"pass": self.passed, "tol": self.tol, "max_dev": self.max_dev, "grid_points": self.grid_points}


def modulation_grid(fam: MaskFamily) -> np.ndarray:
    """Modulation matrices at every grid point, shape ``(p^n, p, r+1)``.

    Mask values come from direct character sums, not from the VC transform.
    """
    p, n = fam.p, fam.n
    pts = digit_matrix(np.arange(p**n), p, n)[:, ::-1]  # (w_1..w_n) of A^{-n} h_[s]
    out = np.empty((p**n, p, fam.r + 1), dtype=complex)
    for l in range(p):
        shifted = pts.copy()
        if n:
            shifted[:, 0] = (shifted[:, 0] + l) % p
        for nu, m in enumerate(fam.masks):
            out[:, l, nu] = poly_eval_digits(m, shifted)
    return out


def verify_uep(fam: MaskFamily, tol: float = 1e-10) -> UEPReport:
    """Check ``M(w) M(w)^* = I_p`` at all p^n grid points.

    Every ``m_nu(. + delta_l)`` is constant on the cosets U_{n,s}, so the grid
    covers all of G.
    """
    M = modulation_grid(fam)
    gram = M @ np.conj(np.transpose(M, (0, 2, 1)))
    dev = float(np.max(np.abs(gram - np.eye(fam.p))))
    return UEPReport(bool(dev <= tol), float(tol), dev, fam.p**fam.n)
