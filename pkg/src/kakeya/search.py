"""Seeded simulated-annealing search for extremal witness distributions.

Probabilities live on the lattice ``w / den`` with integer weights ``w``
summing to ``den`` (2**16 by default), so each candidate is an exact
rational distribution and the winner can be replayed exactly.  The inner
loop scores candidates with numpy float entropies; the reported value is
always recomputed from the exact witness.
"""

from __future__ import annotations

import itertools
import math
import sys
from dataclasses import asdict, dataclass, field
from fractions import Fraction

import numpy as np

from ._parallel import ordered_map
from .entropy import JointDist
from .ratios import FUNCTIONALS, BetaBound, RatioError, RSet, affine_rank, evaluate

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

__all__ = ["SearchConfig", "search_lower_bound", "default_box"]

DEN_CAP = 2**16


def default_box(dim: int) -> list[tuple[int, int]]:
    """X in [-3, 0] and every Y_i in [0, 3]; contains the N = 2 digit witness."""
    return [(-3, 0)] + [(0, 3)] * (dim - 1)


@dataclass(frozen=True)
class SearchConfig:
    support_box: tuple = ()
    restarts: int = 20
    seed: int = 0
    max_iters: int = 4000
    t_start: float = 0.05
    t_end: float = 1e-4
    den: int = DEN_CAP
    max_init_support: int = 6

    def __post_init__(self):
        box = tuple(tuple(int(v) for v in b) for b in self.support_box)
        object.__setattr__(self, "support_box", box)
        if any(lo > hi for lo, hi in box):
            raise ValueError(f"empty support box {box}")
        if self.restarts < 1:
            raise ValueError("restarts must be >= 1")
        if self.max_iters < 0:
            raise ValueError("max_iters must be >= 0")
        if not 1 <= self.den <= DEN_CAP:
            raise ValueError(f"den must lie in [1, {DEN_CAP}]")
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must be an unsigned 64-bit integer")
        if not (self.t_start > 0 and self.t_end > 0):
            raise ValueError("temperatures must be positive")

    def with_box(self, dim: int) -> SearchConfig:
        if self.support_box:
            if len(self.support_box) != dim:
                raise ValueError(f"support box has {len(self.support_box)} coordinates, need {dim}")
            return self
        return SearchConfig(**{**asdict(self), "support_box": tuple(default_box(dim))})

    def to_dict(self) -> dict:
        d = asdict(self)
        d["support_box"] = [list(b) for b in self.support_box]
        return d

    @classmethod
    def from_mapping(cls, obj) -> SearchConfig:
        allowed = set(cls.__dataclass_fields__)
        src = dict(obj.get("search", obj))
        sched = src.pop("schedule", None)
        if isinstance(sched, dict):
            src.setdefault("t_start", sched.get("t_start", cls.t_start))
            src.setdefault("t_end", sched.get("t_end", cls.t_end))
        unknown = set(src) - allowed
        if unknown:
            raise ValueError(f"unknown search config keys: {sorted(unknown)}")
        return cls(**src)

    @classmethod
    def from_toml(cls, text: str) -> SearchConfig:
        return cls.from_mapping(tomllib.loads(text))


class _Tables:
    """Label arrays for every marginal the objective needs."""

    def __init__(self, R: RSet, functional: str, box):
        self.functional = functional
        self.keys = list(itertools.product(*(range(lo, hi + 1) for lo, hi in box)))
        n = len(self.keys)

        def labels(values):
            index: dict = {}
            return np.array([index.setdefault(v, len(index)) for v in values], dtype=np.intp)

        self.ylab = labels(k[1:] for k in self.keys)
        self.plab = [
            labels(Fraction(k[0]) + sum((ri * yi for ri, yi in zip(r, k[1:])), Fraction(0)) for k in self.keys)
            for r in R.elements
        ]
        self.n = n


def _h(labels, w, den):
    c = np.bincount(labels, weights=w)
    c = c[c > 0] / den
    return float(-(c * np.log2(c)).sum())


def _score(t: _Tables, w, den) -> float:
    hmax = max(_h(lab, w, den) for lab in t.plab)
    hy = _h(t.ylab, w, den)
    if t.functional == "homogeneous":
        nz = w[w > 0] / den
        hxy = float(-(nz * np.log2(nz)).sum())
        hx_y = hxy - hy
        num = hy - hx_y
        den_ = hmax - hx_y
        return num / den_ if num > 0 and den_ > 0 else 0.0
    return hy / hmax if hmax > 0 else 0.0


def _random_start(rng, n, den, max_support):
    s = int(rng.integers(2, max(2, min(max_support, n)) + 1)) if n >= 2 else 1
    support = rng.choice(n, size=s, replace=False)
    raw = rng.dirichlet(np.ones(s)) * den
    base = np.floor(raw).astype(np.int64)
    # largest-remainder rounding keeps the weights summing to den
    short = den - int(base.sum())
    order = np.argsort(-(raw - base), kind="stable")
    base[order[:short]] += 1
    w = np.zeros(n, dtype=np.int64)
    w[support] = base
    return w


def _anneal(task):
    R, functional, cfg, restart = task
    t = _Tables(R, functional, cfg.support_box)
    rng = np.random.default_rng([cfg.seed, restart])
    den = cfg.den
    w = _random_start(rng, t.n, den, cfg.max_init_support)
    cur = _score(t, w, den)
    best, best_w = cur, w.copy()
    iters = cfg.max_iters
    log_ratio = math.log(cfg.t_end / cfg.t_start)
    for i in range(iters):
        temp = cfg.t_start * math.exp(log_ratio * i / max(1, iters - 1))
        support = np.flatnonzero(w)
        src = int(support[rng.integers(len(support))])
        if rng.random() < 0.5 and len(support) > 1:
            dst = int(support[rng.integers(len(support))])
        else:
            dst = int(rng.integers(t.n))
        if dst == src:
            continue
        u = rng.random()
        if u < 0.2:
            amount = int(w[src])
        else:
            # log-uniform step size in [1, w[src]]
            amount = max(1, min(int(w[src]), int(round(math.exp(rng.random() * math.log(w[src] + 1))))))
        w[src] -= amount
        w[dst] += amount
        new = _score(t, w, den)
        if new >= cur or rng.random() < math.exp((new - cur) / temp):
            cur = new
            if cur > best:
                best, best_w = cur, w.copy()
        else:
            w[src] += amount
            w[dst] -= amount
    witness = JointDist(
        [(t.keys[i], Fraction(int(best_w[i]), den)) for i in np.flatnonzero(best_w)],
        dim=len(cfg.support_box),
    )
    return witness


def search_lower_bound(R: RSet, cfg: SearchConfig | None = None, functional: str = "kakeya",
                       workers: int = 1) -> BetaBound:
    """Best lower-bound witness found by ``cfg.restarts`` annealing runs.

    Restarts are keyed by ``(cfg.seed, restart index)``; the winner is the
    largest exactly recomputed ratio, ties going to the lowest restart index.
    """
    if functional not in FUNCTIONALS:
        raise RatioError(f"unknown functional {functional!r}")
    if functional == "gap":
        if affine_rank(R) < R.dim:
            raise RatioError(f"R does not affinely span Q^{R.dim}")
        upper = R.dim + 1
    else:
        if R.dim != 1:
            raise RatioError(f"{functional} search needs R inside Q")
        if len(R) < 2:
            raise RatioError("|R| = 1: beta(R) is unbounded, nothing to search")
        upper = 2
    cfg = (cfg or SearchConfig()).with_box(R.dim + 1)

    witnesses = ordered_map(_anneal, [(R, functional, cfg, i) for i in range(cfg.restarts)], workers)
    best = None
    for i, D in enumerate(witnesses):
        try:
            v = evaluate(functional, D, R)
        except RatioError:
            v = 0.0
        if best is None or v > best[0]:
            best = (v, i, D)
    value, restart, D = best
    if value > upper + 1e-6:
        raise RuntimeError(f"search produced {value} > {upper}: functional evaluation is broken")
    return BetaBound(
        rset=R,
        kind="lower",
        value=value,
        functional=functional,
        witness=D,
        seed=cfg.seed,
        provenance="witness",
        extra={"restart": restart, "config": cfg.to_dict()},
    )
