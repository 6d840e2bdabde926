"""Randomised Freiman embedding of a graph G in Z^2 into F_p^2.

theta is a uniform 53-bit dyadic rational K / 2^53 in (0, 1), so
phi_theta(x) = floor(p {theta x}) is computed exactly in integers.
"""

from __future__ import annotations

import random
from collections import Counter, defaultdict
from dataclasses import dataclass, field
from fractions import Fraction

from ..fourier import is_prime
from ..rational import as_fraction
from .graph import INF, PointSet, project

__all__ = ["THETA_BITS", "FreimanError", "FreimanReport", "phi_theta", "freiman_embed", "collision_rate"]

THETA_BITS = 53
_MASK = (1 << THETA_BITS) - 1


class FreimanError(ValueError):
    def __init__(self, msg, stats=None):
        super().__init__(msg)
        self.stats = stats or {}


def phi_theta(x: int, K: int, p: int) -> int:
    """floor(p * frac(x K / 2^53))."""
    return (p * ((K * x) & _MASK)) >> THETA_BITS


def _draw_theta(rng: random.Random) -> int:
    while True:
        K = rng.getrandbits(THETA_BITS)
        if K:
            return K


@dataclass
class FreimanReport:
    p: int
    N: int
    size: int
    attempts: int
    theta_numer: int
    good_size: int
    image_size: int
    image_vertical: int
    fiber_min: int
    fiber_max: int
    bad_fractions: list = field(default_factory=list)
    projections: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.good_size >= 0.8 * self.size and all(r["within_bound"] for r in self.projections)

    def to_dict(self) -> dict:
        return {
            "p": self.p, "N": self.N, "size": self.size, "attempts": self.attempts,
            "theta": f"{self.theta_numer}/2^{THETA_BITS}",
            "good_size": self.good_size, "image_size": self.image_size,
            "image_vertical": self.image_vertical,
            "fiber_min": self.fiber_min, "fiber_max": self.fiber_max,
            "bad_fractions": self.bad_fractions, "projections": self.projections,
        }


def _good_points(G, K, p):
    fib = defaultdict(list)
    for x, y in G.points:
        fib[y].append(x)
    ycount = Counter(phi_theta(y, K, p) for y in fib)
    good = []
    for y, xs in fib.items():
        if ycount[phi_theta(y, K, p)] > 1:
            continue
        xcount = Counter(phi_theta(x, K, p) for x in xs)
        good.extend((x, y) for x in xs if xcount[phi_theta(x, K, p)] == 1)
    return good


def freiman_embed(G: PointSet, R, p: int, seed: int = 0, C: int = 20,
                  max_retries: int = 64) -> tuple[PointSet, FreimanReport]:
    """Embed G into F_p^2, resampling theta until >= 80% of G survives."""
    if G.mod is not None:
        raise FreimanError("freiman_embed expects a graph over Z")
    if not G.points:
        raise FreimanError("empty graph")
    for x, y in G.points:
        if not (isinstance(x, int) and isinstance(y, int)):
            raise FreimanError("graph coordinates must be integers (flatten vector points first)")
    if not is_prime(p):
        raise FreimanError(f"p = {p} is not prime")
    rs = [as_fraction(r[0] if isinstance(r, tuple) else r) for r in R]
    for r in rs:
        a, b = r.numerator, r.denominator
        if b % p == 0 or (a != 0 and a % p == 0):
            raise FreimanError(f"p = {p} is not coprime to the numerator/denominator of r = {r}")
    vertical = {y for _, y in G.points}
    N = len(vertical)
    if p < C * N:
        raise FreimanError(f"p = {p} < C N = {C * N}")
    fsizes = Counter(y for _, y in G.points).values()

    rng = random.Random(seed)
    bad = []
    for attempt in range(1, max_retries + 1):
        K = _draw_theta(rng)
        good = _good_points(G, K, p)
        bad.append(1 - len(good) / len(G))
        if len(good) >= 0.8 * len(G):
            break
    else:
        raise FreimanError(
            f"no theta kept 80% of G in {max_retries} draws",
            {"bad_fractions": bad, "min_bad": min(bad), "mean_bad": sum(bad) / len(bad)},
        )
    Gp = PointSet([(phi_theta(x, K, p), phi_theta(y, K, p)) for x, y in good], mod=p)
    rows = []
    for r in rs:
        a, b = r.numerator, r.denominator
        width = 2 * (abs(a) + b) + 1
        src, dst = len(project(G, r)), len(project(Gp, r))
        rows.append({
            "r": str(r), "source": src, "image": dst, "interval": width,
            "within_bound": dst <= width * src,
        })
    report = FreimanReport(
        p=p, N=N, size=len(G), attempts=attempt, theta_numer=K,
        good_size=len(good), image_size=len(Gp), image_vertical=len(project(Gp, INF)),
        fiber_min=min(fsizes), fiber_max=max(fsizes), bad_fractions=bad, projections=rows,
    )
    return Gp, report


def collision_rate(y: int, y2: int, p: int, samples: int, seed: int = 0) -> float:
    """Empirical Pr_theta[phi_theta(y) = phi_theta(y2)]."""
    rng = random.Random(seed)
    hits = 0
    for _ in range(samples):
        K = _draw_theta(rng)
        hits += phi_theta(y, K, p) == phi_theta(y2, K, p)
    return hits / samples
