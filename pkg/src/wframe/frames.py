"""Step-function calculus on G_p and exact tight-frame analysis.

A :class:`StepFunction` with exponents ``(M, N)`` is supported in ``U_{-M}``
and constant on cosets of ``U_N = A^{-N} U``; cell t has representative
``A^{-N} h_[t]`` and measure ``p^{-N}``.  Fourier transforms of step
functions are step functions with the exponents swapped, so every quantity
below is a finite sum.

Frame coefficients are computed in the frequency domain.  For level j the
coefficients over all shifts k are the Walsh coefficients of the
H-periodic function ``G_j(eta) = p^{j/2} sum_h fhat(A^j(eta+h)) conj(psihat(eta+h))``,
which is itself a step function on U, so one forward VC transform yields
the entire level.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .extension import MaskFamily, verify_uep
from .masks import WalshPolynomial, validate_mask
from .vgroup import GroupElement
from .walsh import log_p, vc_forward, vc_inverse

__all__ = [
    "StepFunction",
    "FrameCoefficientTable",
    "ParsevalReport",
    "indicator",
    "step_fourier",
    "inner_product",
    "refinable_hat",
    "wavelet_hat",
    "time_domain",
    "level_coefficients",
    "frame_coefficient",
    "analyze",
    "parseval_check",
    "approx_order_report",
    "sobolev_norm",
    "random_step",
]


@dataclass(frozen=True, eq=False)
class StepFunction:
    domain: str
    p: int
    M: int
    N: int
    values: np.ndarray = field(repr=False)

    def __post_init__(self):
        if self.domain not in ("time", "frequency"):
            raise ValueError(f"domain must be 'time' or 'frequency', got {self.domain!r}")
        if self.M + self.N < 0:
            raise ValueError(f"need M + N >= 0, got M={self.M}, N={self.N}")
        v = np.array(self.values, dtype=complex).reshape(-1)
        if v.size != self.p ** (self.M + self.N):
            raise ValueError(f"expected {self.p ** (self.M + self.N)} values, got {v.size}")
        v.setflags(write=False)
        object.__setattr__(self, "values", v)

    @property
    def cell_measure(self) -> float:
        return float(self.p) ** (-self.N)

    def refine(self, M: int, N: int) -> "StepFunction":
        """Same function on a larger window and/or finer grid."""
        if M < self.M or N < self.N:
            raise ValueError(f"cannot coarsen ({self.M}, {self.N}) to ({M}, {N})")
        v = np.repeat(self.values, self.p ** (N - self.N))
        out = np.zeros(self.p ** (M + N), dtype=complex)
        out[: v.size] = v
        return StepFunction(self.domain, self.p, M, N, out)

    def cell_of(self, x: GroupElement) -> int | None:
        """Index of the cell containing x, or None outside the support."""
        if x.p != self.p:
            raise ValueError(f"base mismatch: {self.p} vs {x.p}")
        t = 0
        for j, d in x.digits:
            if j <= -self.M:
                return None
            if j <= self.N:
                t += d * self.p ** (self.N - j)
        return t

    def __call__(self, x: GroupElement) -> complex:
        t = self.cell_of(x)
        return 0j if t is None else complex(self.values[t])

    def energy(self) -> float:
        return float(np.sum(np.abs(self.values) ** 2)) * self.cell_measure

    def to_json(self) -> dict:
        return {
            "p": self.p,
            "M": self.M,
            "N": self.N,
            "domain": self.domain,
            "values": [[float(z.real), float(z.imag)] for z in self.values],
        }


def indicator(p: int, l: int, domain: str = "time") -> StepFunction:
    """Indicator of the subgroup U_l as a one-cell step function."""
    return StepFunction(domain, p, -l, l, [1.0])


def step_fourier(f: StepFunction, inverse: bool | None = None) -> StepFunction:
    """Exact group Fourier transform of a step function.

    Time -> frequency by default, frequency -> time for frequency input.
    ``fhat_u = p^{-N} sum_t f_t conj(chi(A^{-N} h_[t], A^{-M} h_[u]))``.
    """
    if inverse is None:
        inverse = f.domain == "frequency"
    if inverse:
        vals = vc_forward(f.values, f.p) * float(f.p) ** f.M
        return StepFunction("time", f.p, f.N, f.M, vals)
    vals = vc_inverse(f.values, f.p) * float(f.p) ** (-f.N)
    return StepFunction("frequency", f.p, f.N, f.M, vals)


def _align(f: StepFunction, g: StepFunction) -> tuple[StepFunction, StepFunction]:
    if f.domain != g.domain:
        raise ValueError(f"domain mismatch: {f.domain} vs {g.domain}")
    if f.p != g.p:
        raise ValueError(f"base mismatch: {f.p} vs {g.p}")
    M, N = max(f.M, g.M), max(f.N, g.N)
    return f.refine(M, N), g.refine(M, N)


def inner_product(f: StepFunction, g: StepFunction) -> complex:
    f, g = _align(f, g)
    return complex(np.sum(f.values * np.conj(g.values)) * f.cell_measure)


def _require_admissible(m0: WalshPolynomial) -> None:
    v = validate_mask(m0, direct=False)
    if not v.is_admissible:
        raise ValueError(f"mask is not admissible (m0(theta)=1: {v.is_walsh_normalized}, max sum {v.max_sum!r})")


def _ghat_values(b: np.ndarray, p: int, n: int, M: int) -> np.ndarray:
    # cell u of resolution n-1: A^{-j} of its representative sits on m0's grid at
    # index (u // p^{j-1}) mod p^n
    size = p ** (M + n - 1)
    u = np.arange(size, dtype=np.int64)
    g = np.ones(size, dtype=complex)
    for j in range(1, M + n + 1):
        g *= b[(u // p ** (j - 1)) % p**n]
    return g


def refinable_hat(m0: WalshPolynomial, M: int, check: bool = True) -> StepFunction:
    """``ghat(w) = prod_{j>=1} m0(A^{-j} w)`` restricted to the window U_{-M}.

    The product is finite on the window: ``m0 = 1`` on U_n, so every factor
    beyond ``j = M + n`` equals 1.  ghat is constant on cosets of U_{n-1}.
    """
    if check:
        _require_admissible(m0)
    if M + m0.n - 1 < 0:
        raise ValueError(f"window exponent M={M} too small for n={m0.n}")
    g = _ghat_values(m0.boundary_values(), m0.p, m0.n, M)
    return StepFunction("frequency", m0.p, M, m0.n - 1, g)


def _hat_values(fam: MaskFamily, nu: int, M: int) -> np.ndarray:
    p, n = fam.p, fam.n
    b0 = fam.m0.boundary_values()
    g = _ghat_values(b0, p, n, M)
    if nu == 0:
        return g
    b = fam.masks[nu].boundary_values()
    u = np.arange(g.size, dtype=np.int64)
    return b[u % p**n] * g[u // p]


def wavelet_hat(fam: MaskFamily, nu: int, M: int) -> StepFunction:
    """``psihat_nu(w) = m_nu(A^{-1} w) ghat(A^{-1} w)`` on the window U_{-M}."""
    if not 1 <= nu <= fam.r:
        raise ValueError(f"nu must be in 1..{fam.r}, got {nu}")
    if M + fam.n - 1 < 0:
        raise ValueError(f"window exponent M={M} too small for n={fam.n}")
    return StepFunction("frequency", fam.p, M, fam.n - 1, _hat_values(fam, nu, M))


def time_domain(hat: StepFunction) -> StepFunction:
    """Inverse transform of a windowed hat.

    This is exact only if the hat vanishes outside its window; otherwise it
    is the time-domain function of the truncated hat and meant for export.
    """
    return step_fourier(hat, inverse=True)


def _require_verified(fam: MaskFamily, tol: float = 1e-10) -> None:
    rep = verify_uep(fam, tol)
    if not rep.passed:
        raise ValueError(f"mask family fails the unitarity check (max deviation {rep.max_dev:.3g})")


def level_coefficients(fhat: StepFunction, fam: MaskFamily, nu: int, j: int) -> np.ndarray:
    """``<f, psi^(nu)_{j,k}>`` for k = 0..p^R - 1 (all others vanish).

    ``fhat`` is the frequency-domain signal; ``nu = 0`` selects phi.
    R = max(resolution of fhat + j, n - 1).
    """
    if fhat.domain != "frequency":
        raise ValueError("level_coefficients expects a frequency-domain signal")
    p, n = fam.p, fam.n
    R = max(fhat.N + j, n - 1)
    D = max(0, fhat.M - j)
    F = fhat.refine(D + j, R - j).values
    hat = StepFunction("frequency", p, D, n - 1, _hat_values(fam, nu, D)).refine(D, R).values
    G = (F * np.conj(hat)).reshape(p**D, p**R).sum(axis=0) * float(p) ** (j / 2)
    return vc_forward(G, p)


def frame_coefficient(f: StepFunction, fam: MaskFamily, nu: int, j: int, k: int, check: bool = True) -> complex:
    """``<f, psi^(nu)_{j,k}>`` with ``psi_{j,k}(x) = p^{j/2} psi(A^j x - h_[k])``; nu = 0 is phi."""
    if check:
        _require_verified(fam)
    if not 0 <= nu <= fam.r:
        raise ValueError(f"nu must be in 0..{fam.r}")
    fhat = step_fourier(f) if f.domain == "time" else f
    c = level_coefficients(fhat, fam, nu, j)
    return complex(c[k]) if k < c.size else 0j


@dataclass
class FrameCoefficientTable:
    p: int
    j_min: int
    J: int
    base: np.ndarray
    levels: dict[int, list[np.ndarray]]

    @property
    def base_energy(self) -> float:
        return float(np.sum(np.abs(self.base) ** 2))

    def level_energy(self, j: int) -> float:
        return float(sum(np.sum(np.abs(c) ** 2) for c in self.levels[j]))

    def rows(self):
        """(nu, j, k, coefficient) with nu = 0 for the base phi level."""
        for k, c in enumerate(self.base):
            yield 0, self.j_min, k, complex(c)
        for j in sorted(self.levels):
            for nu, arr in enumerate(self.levels[j], start=1):
                for k, c in enumerate(arr):
                    yield nu, j, k, complex(c)


def _threads() -> int:
    try:
        return max(1, int(os.environ.get("WFRAME_THREADS", "1")))
    except ValueError:
        return 1


def _cutoff(f: StepFunction, fam: MaskFamily) -> int:
    # wavelet coefficients vanish from level J = (support exponent of fhat) + n - 1 on
    N_f = f.N if f.domain == "time" else f.M
    return N_f + fam.n - 1


def analyze(f: StepFunction, fam: MaskFamily, j_min: int = 0, check: bool = True) -> FrameCoefficientTable:
    if check:
        _require_verified(fam)
    fhat = step_fourier(f) if f.domain == "time" else f
    J = _cutoff(f, fam)
    base = level_coefficients(fhat, fam, 0, j_min)
    js = list(range(j_min, J))

    def one(j):
        return [level_coefficients(fhat, fam, nu, j) for nu in range(1, fam.r + 1)]

    if _threads() > 1 and len(js) > 1:
        with ThreadPoolExecutor(_threads()) as ex:
            results = list(ex.map(one, js))
    else:
        results = [one(j) for j in js]
    return FrameCoefficientTable(fam.p, j_min, J, base, dict(zip(js, results)))


@dataclass
class ParsevalReport:
    total_wavelet_energy: float
    base_energy: float
    level_energies: dict[int, float]
    signal_energy: float
    frame_constant: float
    ratio: float
    telescoping_residuals: dict[int, float]
    tol: float
    passed: bool
    j_min: int
    J: int

    def to_json(self) -> dict:
        return {
            "pass": self.passed,
            "tol": self.tol,
            "total": self.total_wavelet_energy,
            "base": self.base_energy,
            "wavelet": self.total_wavelet_energy - self.base_energy,
            "signal_energy": self.signal_energy,
            "frame_constant": self.frame_constant,
            "ratio": self.ratio,
            "j_min": self.j_min,
            "J": self.J,
            "level_energies": {str(j): e for j, e in self.level_energies.items()},
            "telescoping_residuals": {str(j): e for j, e in self.telescoping_residuals.items()},
        }


def parseval_check(
    f: StepFunction, fam: MaskFamily, j_min: int = 0, tol: float = 1e-8, table: FrameCoefficientTable | None = None
) -> ParsevalReport:
    """Compare the full frame energy with ``|ghat(theta)|^2 ||f||^2``.

    Levels below j_min are folded into the base phi energy (telescoping),
    levels from J on vanish, so the sum computed here is the whole frame sum.
    """
    if table is None:
        table = analyze(f, fam, j_min)
    fhat = step_fourier(f) if f.domain == "time" else f
    levels = {j: table.level_energy(j) for j in sorted(table.levels)}
    total = table.base_energy
    for j in sorted(levels):
        total += levels[j]
    signal = f.energy()
    ghat0 = abs(_hat_values(fam, 0, 0)[0]) ** 2
    target = ghat0 * signal
    residuals = {}
    prev = table.base_energy
    for j in sorted(levels):
        nxt = float(np.sum(np.abs(level_coefficients(fhat, fam, 0, j + 1)) ** 2))
        residuals[j] = abs(nxt - prev - levels[j])
        prev = nxt
    ratio = total / target if target else (1.0 if total == 0 else math.inf)
    passed = abs(total - target) <= tol * max(signal, np.finfo(float).tiny)
    return ParsevalReport(
        float(total), table.base_energy, levels, signal, float(ghat0), float(ratio), residuals, tol, bool(passed), j_min, table.J
    )


def approx_order_report(
    f: StepFunction, fam: MaskFamily, j_min: int = 0, table: FrameCoefficientTable | None = None
) -> list[tuple[int, float, float]]:
    """Rows ``(j, E_j, sqrt(E_j))`` for j = j_min - 1 .. J - 1.

    ``E_j`` is the frame energy carried by levels above j, which bounds
    ``||f - P_j f||^2`` for the partial reconstruction P_j.  It reaches 0 at
    ``j = J - 1``.
    """
    if table is None:
        table = analyze(f, fam, j_min)
    js = sorted(table.levels)
    partial = [table.base_energy]
    for j in js:
        partial.append(partial[-1] + table.level_energy(j))
    total = partial[-1]
    rows = []
    for i, j in enumerate([j_min - 1, *js]):
        e = max(total - partial[i], 0.0)
        rows.append((j, e, math.sqrt(e)))
    return rows


def sobolev_norm(f: StepFunction, m: int) -> float:
    """``sum_{k<=m} (int ||w||^{2k} |fhat(w)|^2 dw)^{1/2}``, evaluated exactly."""
    return sum(math.sqrt(x) for x in sobolev_terms(f, m))


def sobolev_terms(f: StepFunction, m: int) -> list[float]:
    """The integrals ``int ||w||^{2k} |fhat(w)|^2 dw`` for k = 0..m."""
    if m < 0:
        raise ValueError("m must be nonnegative")
    fhat = step_fourier(f) if f.domain == "time" else f
    p, res = fhat.p, fhat.N
    u = np.arange(1, fhat.values.size, dtype=np.int64)
    # highest nonzero base-p digit position of u
    top = np.zeros(u.size, dtype=np.int64)
    v = u.copy()
    while np.any(v >= p):
        top += v >= p
        v = np.where(v >= p, v // p, v)
    norms = float(p) ** (top - res).astype(float)
    mass = np.abs(fhat.values[1:]) ** 2 * fhat.cell_measure
    zero_mass = abs(fhat.values[0]) ** 2
    out = []
    for k in range(m + 1):
        q = float(p) ** (-(2 * k + 1))
        theta_cell = (p - 1) * q ** (res + 1) / (1 - q)
        out.append(float(np.sum(norms ** (2 * k) * mass) + zero_mass * theta_cell))
    return out


def random_step(p: int, M: int, N: int, rng: np.random.Generator, domain: str = "time") -> StepFunction:
    size = p ** (M + N)
    vals = rng.normal(size=size) + 1j * rng.normal(size=size)
    return StepFunction(domain, p, M, N, vals)
