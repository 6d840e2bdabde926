"""Random arithmetic progressions in F_p and the vertical-projection identity.

For d in F_p \\ {0}, t in F_p and m < p:

    I0 = {d i : 0 <= i < m},   I = t + I0,   J = {d j : ceil(m/2) <= j <= m},

and I~ = I + kJ' - kJ' where J' = J u {0} and kJ' is the k-fold sumset.
Adding 0 to J makes I~ contain x + r y for every integer |r| <= k, which is
what the containment pi_r(G_I) <= I~ needs.  All three sets are images of
integer offset sets under i -> t + d i, so they are computed on offsets.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from ..fourier import is_prime
from ..rational import as_fraction
from .graph import INF, PointSet, PointSetError, fibers, project

__all__ = [
    "ProgressionTriple",
    "ProgressionSample",
    "progression_length",
    "j_range",
    "progression_sets",
    "progression_sample",
    "pry_verify",
    "markov_check",
]


@dataclass(frozen=True)
class ProgressionTriple:
    p: int
    d: int
    t: int
    m: int

    def __post_init__(self):
        if self.d % self.p == 0:
            raise PointSetError("progression step d must be nonzero mod p")
        if not 1 <= self.m < self.p:
            raise PointSetError(f"need 1 <= m < p, got m={self.m}, p={self.p}")


def progression_length(p: int, gamma: float) -> int:
    """m = ceil(p^(1 - gamma))."""
    if not 0 < gamma < 1:
        raise PointSetError("gamma must lie in (0, 1)")
    m = math.ceil(p ** (1 - gamma))
    if m >= p:
        raise PointSetError(f"m = {m} >= p = {p}")
    return m


def j_range(m: int, primes_only: bool = False) -> list[int]:
    js = range(math.ceil(m / 2), m + 1)
    return [j for j in js if is_prime(j)] if primes_only else list(js)


def _sumset_offsets(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """{x + y} for small nonnegative integer offset sets, through indicator convolution."""
    ia = np.zeros(a.max() + 1, dtype=np.int64)
    ib = np.zeros(b.max() + 1, dtype=np.int64)
    ia[a] = 1
    ib[b] = 1
    return np.flatnonzero(np.convolve(ia, ib))


def tilde_offsets(m: int, k: int, primes_only: bool = False) -> np.ndarray:
    """Integer offsets O with I~ = t + d O (mod p)."""
    j0 = np.array([0] + j_range(m, primes_only), dtype=np.int64)
    kj = np.array([0], dtype=np.int64)
    for _ in range(k):
        kj = _sumset_offsets(kj, j0)
    top = kj.max()
    diff = _sumset_offsets(kj, top - kj) - top  # kJ' - kJ'
    shifted = _sumset_offsets(np.arange(m, dtype=np.int64), diff - diff.min()) + diff.min()
    return shifted


def progression_sets(tr: ProgressionTriple, k: int, primes_only: bool = False,
                     offsets: np.ndarray | None = None) -> dict:
    p, d, t, m = tr.p, tr.d, tr.t, tr.m
    I0 = {d * i % p for i in range(m)}
    I = {(t + x) % p for x in I0}
    J = {d * j % p for j in j_range(m, primes_only)}
    if offsets is None:
        offsets = tilde_offsets(m, k, primes_only)
    It = set(((t + d * offsets) % p).tolist())
    return {"I0": I0, "I": I, "J": J, "Itilde": It}


@dataclass
class ProgressionSample:
    triple: ProgressionTriple
    I0: set
    I: set
    J: set
    Itilde: set
    G_I: PointSet
    B_I: set
    A: set
    containment: bool
    projections: dict = field(default_factory=dict)

    def summary(self) -> dict:
        return {
            "p": self.triple.p, "d": self.triple.d, "t": self.triple.t, "m": self.triple.m,
            "I": len(self.I), "J": len(self.J), "Itilde": len(self.Itilde),
            "G_I": len(self.G_I), "B_I": len(self.B_I), "A": len(self.A),
            "Itilde_cap_A": len(self.Itilde & self.A),
            "containment": self.containment, "projections": self.projections,
        }


def _int_rset(rset, k):
    if rset is None:
        return list(range(-k, k + 1))
    rs = []
    for r in rset:
        q = as_fraction(r[0] if isinstance(r, tuple) else r)
        if q.denominator != 1 or abs(q.numerator) > k:
            raise PointSetError(f"r = {q} is not an integer in [-{k}, {k}]; clear denominators first")
        rs.append(q.numerator)
    return rs


def progression_sample(Gp: PointSet, k: int, gamma: float, seed: int = 0, rset=None,
                       trials: int = 1, primes_only: bool = False) -> ProgressionSample:
    """Sample (d, t) and restrict Gp to I x J.

    With ``trials > 1`` the sample with the largest vertical projection B_I
    is kept (then smallest |I~ n A|, then the earliest draw).
    """
    if Gp.mod is None:
        raise PointSetError("progression_sample expects a point set over F_p")
    p = Gp.mod
    if k < 1:
        raise PointSetError("k must be >= 1")
    rs = _int_rset(rset, k)
    m = progression_length(p, gamma)
    offsets = tilde_offsets(m, k, primes_only)
    A = set().union(*(project(Gp, r) for r in rs))
    rng = random.Random(seed)
    best = None
    for i in range(max(1, trials)):
        tr = ProgressionTriple(p, rng.randrange(1, p), rng.randrange(p), m)
        s = progression_sets(tr, k, primes_only, offsets)
        GI = Gp.filter(lambda x, y: x in s["I"] and y in s["J"])
        BI = project(GI, INF)
        rank = (len(BI), -len(s["Itilde"] & A))
        if best is None or rank > best[0]:
            best = (rank, tr, s, GI, BI)
    _, tr, s, GI, BI = best
    ok = True
    proj = {}
    for r in rs:
        img = project(GI, r)
        proj[str(r)] = len(img)
        ok &= img <= (s["Itilde"] & A)
    return ProgressionSample(tr, s["I0"], s["I"], s["J"], s["Itilde"], GI, BI, A, ok, proj)


def pry_verify(Gp: PointSet, y: int, m: int, primes_only: bool = False) -> dict:
    """Exact Pr[y in B_I] by enumerating every (d, t), against the sum
    sum_j |D_y - (y/j) I0| / (p (p - 1))."""
    if Gp.mod is None:
        raise PointSetError("pry_verify expects a point set over F_p")
    p = Gp.mod
    y %= p
    if y == 0:
        raise PointSetError(
            "y = 0 is excluded: distinct j must give distinct d = y/j, which fails at y = 0"
        )
    if not 1 <= m < p:
        raise PointSetError(f"need 1 <= m < p, got m={m}")
    fib = fibers(Gp)
    if y not in fib:
        raise PointSetError(f"y = {y} is not in the vertical projection of Gp")
    Dy = fib[y]
    js = j_range(m, primes_only)

    hits = 0
    for d in range(1, p):
        J = {d * j % p for j in js}
        if y not in J:
            continue
        I0 = [d * i % p for i in range(m)]
        for t in range(p):
            I = {(t + x) % p for x in I0}
            hits += not Dy.isdisjoint(I)
    lhs = Fraction(hits, p * (p - 1))

    total = 0
    for j in js:
        c = y * pow(j, -1, p) % p
        total += len({(x - c * i) % p for x in Dy for i in range(m)})
    rhs = Fraction(total, p * (p - 1))
    return {"lhs": lhs, "rhs": rhs, "equal": lhs == rhs}


def markov_check(Gp: PointSet, A=None, k: int = 1, gamma: float = 0.5, T: float = 8.0,
                 trials: int = 10_000, seed: int = 0, rset=None) -> dict:
    """Monte Carlo estimate of Pr[|I~ n A| >= T (m/p) |A|] with a Wilson interval."""
    from statsmodels.stats.proportion import proportion_confint

    if Gp.mod is None:
        raise PointSetError("markov_check expects a point set over F_p")
    p = Gp.mod
    m = progression_length(p, gamma)
    if A is None:
        A = set().union(*(project(Gp, r) for r in _int_rset(rset, k)))
    mask = np.zeros(p, dtype=bool)
    mask[[int(a) % p for a in A]] = True
    size_a = int(mask.sum())
    offsets = tilde_offsets(m, k)
    cut = T * m / p * size_a
    rng = np.random.default_rng(seed)
    ds = rng.integers(1, p, size=trials)
    ts = rng.integers(0, p, size=trials)
    hits = 0
    for d, t in zip(ds.tolist(), ts.tolist()):
        It = np.unique((t + d * offsets) % p)
        hits += int(mask[It].sum()) >= cut
    lo, hi = proportion_confint(hits, trials, method="wilson")
    return {
        "p": p, "m": m, "T": T, "trials": trials, "A": size_a,
        "threshold": cut, "hits": hits,
        "empirical_prob": hits / trials, "wilson": [float(lo), float(hi)],
        "bound": k / T,
    }
