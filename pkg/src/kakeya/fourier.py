"""Fourier analysis on F_p with expectation normalisation.

    f^(xi)    = E_x e(-x xi) f(x),      e(x) = exp(2 pi i x / p)
    (f*g)(x)  = E_y f(y) g(x - y)

With these conventions Parseval reads sum_xi |f^(xi)|^2 = E_x |f(x)|^2 and
the convolution theorem is (f*g)^ = f^ g^.
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "NAIVE_DFT_MAX",
    "FourierError",
    "is_prime",
    "primes_between",
    "FpFunc",
    "FpSet",
    "BumpFunction",
    "dft",
    "dft_naive",
    "dft_fast",
    "convolve",
    "bump_build",
    "dilate",
    "additive_energy",
    "energy_fourier",
    "sumset_dilated",
    "fourier_lemma_scan",
    "centered",
    "jxi_count",
]

NAIVE_DFT_MAX = 2048
PRIME_CAP = 10**6


class FourierError(ValueError):
    pass


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


def primes_between(lo: int, hi: int) -> list[int]:
    return [j for j in range(max(lo, 2), hi + 1) if is_prime(j)]


def _check_prime(p):
    if not isinstance(p, (int, np.integer)) or not is_prime(int(p)):
        raise FourierError(f"modulus {p!r} is not prime")
    if p > PRIME_CAP:
        raise FourierError(f"modulus {p} exceeds the supported cap {PRIME_CAP}")
    return int(p)


class FpFunc:
    """A complex-valued function on F_p, stored as its length-p value vector."""

    __slots__ = ("p", "values")

    def __init__(self, p: int, values):
        self.p = _check_prime(p)
        v = np.asarray(values, dtype=complex)
        if v.shape != (self.p,):
            raise FourierError(f"expected {self.p} values, got shape {v.shape}")
        self.values = v

    @classmethod
    def indicator(cls, p, elements) -> FpFunc:
        v = np.zeros(p, dtype=complex)
        v[[int(a) % p for a in elements]] = 1
        return cls(p, v)

    @classmethod
    def delta(cls, p, at=0) -> FpFunc:
        return cls.indicator(p, [at])

    def __call__(self, x):
        return self.values[int(x) % self.p]

    def __repr__(self):
        return f"FpFunc(p={self.p})"


class FpSet:
    """A subset of F_p, kept as sorted distinct residues."""

    __slots__ = ("p", "elements")

    def __init__(self, p: int, elements):
        self.p = _check_prime(p)
        self.elements = tuple(sorted({int(a) % self.p for a in elements}))

    def __len__(self):
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def __contains__(self, x):
        return int(x) % self.p in set(self.elements)

    def __eq__(self, other):
        return isinstance(other, FpSet) and (self.p, self.elements) == (other.p, other.elements)

    def __repr__(self):
        return f"FpSet(p={self.p}, {list(self.elements)})"

    def indicator(self) -> FpFunc:
        return FpFunc.indicator(self.p, self.elements)

    def mask(self) -> np.ndarray:
        m = np.zeros(self.p, dtype=bool)
        m[list(self.elements)] = True
        return m


@functools.lru_cache(maxsize=4)
def _kernel(p: int) -> np.ndarray:
    x = np.arange(p)
    phase = np.outer(x, x) % p  # reduce before scaling keeps the angles small
    k = np.exp(-2j * np.pi * phase / p)
    k.flags.writeable = False
    return k


def dft_naive(f: FpFunc) -> FpFunc:
    return FpFunc(f.p, _kernel(f.p) @ f.values / f.p)


def dft_fast(f: FpFunc) -> FpFunc:
    return FpFunc(f.p, np.fft.fft(f.values) / f.p)


def dft(f: FpFunc) -> FpFunc:
    """Normalised transform; the direct O(p^2) sum up to p = 2048, FFT above."""
    return dft_naive(f) if f.p <= NAIVE_DFT_MAX else dft_fast(f)


def convolve(f: FpFunc, g: FpFunc) -> FpFunc:
    if f.p != g.p:
        raise FourierError(f"modulus mismatch: {f.p} vs {g.p}")
    p = f.p
    if p <= NAIVE_DFT_MAX:
        x = np.arange(p)
        # circulant matrix G[x, y] = g(x - y)
        gm = g.values[(x[:, None] - x[None, :]) % p]
        return FpFunc(p, gm @ f.values / p)
    return FpFunc(p, np.fft.ifft(np.fft.fft(f.values) * np.fft.fft(g.values)) / p)


def dilate(f: FpFunc, j: int) -> FpFunc:
    """x -> f(j x)."""
    p = f.p
    if j % p == 0:
        raise FourierError("dilation by 0 is not invertible")
    return FpFunc(p, f.values[(np.arange(p) * (j % p)) % p])


def centered(x: int, p: int) -> int:
    """Representative of x mod p in [-p/2, p/2]."""
    r = x % p
    return r - p if r > p // 2 else r


@dataclass(frozen=True)
class BumpFunction:
    p: int
    m: int
    d: int
    func: FpFunc
    mass_ratio: float
    decay_constant: float
    support: tuple = field(default=())

    @property
    def values(self):
        return self.func.values


def bump_build(p: int, m: int, d: int) -> BumpFunction:
    """d-fold self-convolution of the indicator of {1..floor(m/d)}, peak scaled to 1.

    The profile lives on {d..d*floor(m/d)}, inside {1..m}.  ``mass_ratio`` is
    the measured sum(psi)/m and ``decay_constant`` the measured
    max_xi |psi^(xi)| (1 + |xi| m/p)^d p/m with xi centred.
    """
    p = _check_prime(p)
    if not 1 <= m < p:
        raise FourierError(f"need 1 <= m < p, got m={m}, p={p}")
    if d < 2:
        raise FourierError("d must be at least 2")
    if m < d:
        raise FourierError(f"m={m} < d={d}: the inner interval is empty")
    L = m // d
    prof = np.ones(L, dtype=np.int64)
    for _ in range(d - 1):
        prof = np.convolve(prof, np.ones(L, dtype=np.int64))
    vals = np.zeros(p, dtype=complex)
    vals[d : d + len(prof)] = prof / prof.max()
    psi = FpFunc(p, vals)
    hat = np.abs(dft(psi).values)
    xi = np.array([abs(centered(k, p)) for k in range(p)])
    decay = float(np.max(hat * (1 + xi * m / p) ** d * p / m))
    return BumpFunction(
        p, m, d, psi,
        mass_ratio=float(vals.real.sum()) / m,
        decay_constant=decay,
        support=tuple(range(d, d + len(prof))),
    )


def additive_energy(A: FpSet, B: FpSet) -> int:
    """#{(a, a', b, b') : a + b = a' + b'}, via the representation counts of A + B."""
    if A.p != B.p:
        raise FourierError(f"modulus mismatch: {A.p} vs {B.p}")
    p = A.p
    reps = np.zeros(p, dtype=np.int64)
    for a in A.elements:
        for b in B.elements:
            reps[(a + b) % p] += 1
    return int((reps * reps).sum())


def energy_fourier(A: FpSet, B: FpSet) -> float:
    """p^3 sum_xi |1_A^(xi)|^2 |1_B^(xi)|^2."""
    fa = np.abs(dft(A.indicator()).values) ** 2
    fb = np.abs(dft(B.indicator()).values) ** 2
    return float(A.p**3 * (fa * fb).sum())


def sumset_dilated(A: FpSet, j: int, m: int) -> FpSet:
    """A + j^{-1} {1..m}."""
    p = A.p
    if j % p == 0:
        raise FourierError("j must be invertible mod p")
    jinv = pow(j, -1, p)
    steps = (jinv * np.arange(1, m + 1)) % p
    a = np.array(A.elements, dtype=np.int64)
    return FpSet(p, np.unique((a[:, None] + steps[None, :]) % p))


def fourier_lemma_scan(A: FpSet, m: int, eps: float) -> dict:
    """Sizes |A + j^{-1} I| for j = ceil(m/2)..m with I = {1..m}.

    Reports how many j reach p^(1 - eps), overall and over the primes in the
    range, alongside the target floor(m p^-eps).  Nothing is asserted.
    """
    p = A.p
    if not 1 <= m < p:
        raise FourierError(f"need 1 <= m < p, got m={m}, p={p}")
    if len(A) * m < p:
        raise FourierError(f"|A| = {len(A)} is smaller than p/m = {p / m:.3f}")
    threshold = p ** (1 - eps)
    per_j = []
    for j in range(math.ceil(m / 2), m + 1):
        size = len(sumset_dilated(A, j, m))
        per_j.append({"j": j, "size": size, "prime": is_prime(j), "good": size >= threshold})
    good = sum(r["good"] for r in per_j)
    good_primes = sum(r["good"] for r in per_j if r["prime"])
    target = math.floor(m * p ** (-eps))
    return {
        "p": p,
        "m": m,
        "eps": eps,
        "threshold": threshold,
        "good_count": good,
        "lemma_target": target,
        "meets_target": good >= target,
        "primes_count": sum(r["prime"] for r in per_j),
        "good_primes_count": good_primes,
        "per_j": [{"j": r["j"], "size": r["size"]} for r in per_j],
    }


def jxi_count(p: int, m: int, xi: int, K: float) -> int:
    """#{j prime in [ceil(m/2), m] : centred(j^{-1} xi) in [-K p/m, K p/m]}."""
    p = _check_prime(p)
    if xi % p == 0:
        raise FourierError("xi must be nonzero mod p")
    bound = K * p / m
    return sum(
        1 for j in primes_between(math.ceil(m / 2), m)
        if j % p and abs(centered(pow(j, -1, p) * xi, p)) <= bound
    )
