"""Kakeya entropy functionals evaluated on concrete distributions.

Component 0 of a distribution is X, components 1..d are Y_1..Y_d.  Every
finite value returned by a ratio functional is a certified lower bound for
the corresponding beta constant, because beta is defined as a supremum of
exactly these ratios.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable

from .entropy import (
    ENTROPY_TOL,
    JointDist,
    cond_entropy,
    entropy,
    marginal,
    pushforward,
    pushforward_linear,
)
from .rational import as_fraction, format_rational, parse_rational

__all__ = [
    "FUNCTIONALS",
    "RatioError",
    "UnboundedWitnessError",
    "WitnessMismatchError",
    "RSet",
    "BetaBound",
    "affine_rank",
    "rset_clear_denominators",
    "scale_x",
    "projection_entropies",
    "kakeya_ratio",
    "homogeneous_ratio",
    "gap_ratio",
    "evaluate",
    "witness_replay",
]

FUNCTIONALS = ("kakeya", "homogeneous", "gap")


class RatioError(ValueError):
    pass


class UnboundedWitnessError(RatioError):
    """Every projection X + r.Y is deterministic, so the ratio has no finite value."""


class WitnessMismatchError(RatioError):
    pass


def _tuple(e) -> tuple:
    if isinstance(e, (list, tuple)):
        return tuple(as_fraction(v) for v in e)
    return (as_fraction(e),)


class RSet:
    """A finite set of rationals (``dim == 1``) or of rational d-tuples."""

    __slots__ = ("dim", "elements")

    def __init__(self, elements: Iterable, dim: int | None = None):
        elems = sorted(set(_tuple(e) for e in elements))
        if not elems:
            raise RatioError("R must be nonempty")
        dims = {len(e) for e in elems}
        if len(dims) != 1:
            raise RatioError(f"mixed tuple lengths in R: {sorted(dims)}")
        (d,) = dims
        if dim is not None and dim != d:
            raise RatioError(f"R has elements of length {d}, expected {dim}")
        self.dim = d
        self.elements = tuple(elems)

    def __len__(self):
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def __eq__(self, other):
        return isinstance(other, RSet) and self.elements == other.elements

    def __hash__(self):
        return hash(self.elements)

    def __repr__(self):
        if self.dim == 1:
            body = ", ".join(format_rational(e[0]) for e in self.elements)
        else:
            body = ", ".join("(" + ", ".join(map(format_rational, e)) + ")" for e in self.elements)
        return f"RSet({{{body}}})"

    @property
    def scalars(self) -> list[Fraction]:
        if self.dim != 1:
            raise RatioError("scalars requested from a multi-dimensional R")
        return [e[0] for e in self.elements]

    def max_abs_height(self) -> int:
        """Largest max(|a|, b) over elements r = a/b (d = 1)."""
        return max(max(abs(r.numerator), r.denominator) for r in self.scalars)

    def to_dict(self) -> dict:
        return {"dim": self.dim, "elements": [[format_rational(v) for v in e] for e in self.elements]}

    @classmethod
    def from_dict(cls, obj) -> RSet:
        try:
            dim = obj["dim"]
            elems = [tuple(parse_rational(v) for v in e) for e in obj["elements"]]
        except (KeyError, TypeError, ValueError) as exc:
            raise RatioError(f"malformed R: {exc}") from None
        return cls(elems, dim=dim)

    @classmethod
    def parse(cls, text: str) -> RSet:
        """Parse ``"0,1,1/2"`` or ``"0:0,1:0,0:1"`` (colon-separated tuples)."""
        parts = [p.strip() for p in text.replace(";", ",").split(",") if p.strip()]
        return cls([tuple(parse_rational(v) for v in p.split(":")) for p in parts])


def affine_rank(R: RSet) -> int:
    """Dimension of the affine span of R, by exact Gaussian elimination."""
    base = R.elements[0]
    rows = [[a - b for a, b in zip(e, base)] for e in R.elements[1:]]
    rank = 0
    ncols = R.dim
    for col in range(ncols):
        pivot = next((i for i in range(rank, len(rows)) if rows[i][col] != 0), None)
        if pivot is None:
            continue
        rows[rank], rows[pivot] = rows[pivot], rows[rank]
        pv = rows[rank][col]
        for i in range(len(rows)):
            if i != rank and rows[i][col] != 0:
                f = rows[i][col] / pv
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[rank])]
        rank += 1
    return rank


def rset_clear_denominators(R: RSet) -> tuple[RSet, int]:
    """Return (mR, m) with m the lcm of the denominators of R."""
    if R.dim != 1:
        raise RatioError("denominator clearing is defined for R inside Q")
    m = math.lcm(*(r.denominator for r in R.scalars))
    return RSet([r * m for r in R.scalars]), m


def scale_x(D: JointDist, m) -> JointDist:
    """Replace X by m*X, leaving the Y components alone."""
    m = as_fraction(m)
    return pushforward(D, lambda k: (m * k[0],) + k[1:])


def projection_entropies(D: JointDist, R: RSet) -> list[tuple[tuple, float]]:
    """[(r, H(X + r.Y))] in increasing lexicographic order of r."""
    if D.dim != R.dim + 1:
        raise RatioError(f"distribution of dim {D.dim} does not match R of dim {R.dim}")
    return [(r, entropy(pushforward_linear(D, (1,) + r))) for r in R.elements]


def _max_projection(D: JointDist, R: RSet) -> tuple[tuple, float]:
    best_r, best_h = None, -1.0
    for r, h in projection_entropies(D, R):
        if h > best_h:  # strict: first (smallest) r wins ties
            best_r, best_h = r, h
    return best_r, best_h


def kakeya_ratio(D: JointDist, R: RSet) -> float:
    """H(Y) / max_r H(X + rY)."""
    if D.dim != 2 or R.dim != 1:
        raise RatioError("kakeya_ratio needs a distribution of (X, Y) and R inside Q")
    _, hmax = _max_projection(D, R)
    if hmax <= 0.0:
        raise UnboundedWitnessError("H(X + rY) = 0 for every r in R")
    return entropy(marginal(D, [1])) / hmax


def homogeneous_ratio(D: JointDist, R: RSet) -> float:
    """(H(Y) - H(X|Y)) / (max_r H(X + rY) - H(X|Y)), or 0 if the numerator is not positive."""
    if D.dim != 2 or R.dim != 1:
        raise RatioError("homogeneous_ratio needs a distribution of (X, Y) and R inside Q")
    if len(R) < 2:
        raise RatioError("homogeneous_ratio needs |R| >= 2")
    hy = entropy(marginal(D, [1]))
    hxy = cond_entropy(D, [0], [1])
    num = hy - hxy
    if num <= 0:
        return 0.0
    _, hmax = _max_projection(D, R)
    den = hmax - hxy
    if den <= 0:
        # For |R| >= 2 this contradicts H(X+rY) + H(X+r'Y) >= H(X, Y).
        raise RatioError(f"nonpositive denominator {den} with positive numerator {num}")
    return num / den


def gap_ratio(D: JointDist, R: RSet) -> float:
    """H(Y_1..Y_d) / max_r H(X + r_1 Y_1 + ... + r_d Y_d) for R spanning Q^d."""
    d = R.dim
    if D.dim != d + 1:
        raise RatioError(f"distribution of dim {D.dim} does not match R of dim {d}")
    rank = affine_rank(R)
    if rank < d:
        raise RatioError(f"R does not affinely span Q^{d}: affine dimension {rank}, deficient by {d - rank}")
    _, hmax = _max_projection(D, R)
    if hmax <= 0.0:
        raise UnboundedWitnessError("every projection X + r.Y is deterministic")
    return entropy(marginal(D, range(1, d + 1))) / hmax


def evaluate(functional: str, D: JointDist, R: RSet) -> float:
    if functional == "kakeya":
        return kakeya_ratio(D, R)
    if functional == "homogeneous":
        return homogeneous_ratio(D, R)
    if functional == "gap":
        return gap_ratio(D, R)
    raise RatioError(f"unknown functional {functional!r}; expected one of {FUNCTIONALS}")


@dataclass(frozen=True)
class BetaBound:
    """A numeric statement ``beta(R) >= value`` (lower) or ``<= value`` (upper)."""

    rset: RSet
    kind: str
    value: float
    functional: str = "kakeya"
    witness: JointDist | None = None
    seed: int | None = None
    provenance: str = "witness"
    extra: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        if self.kind not in ("lower", "upper"):
            raise RatioError(f"kind must be 'lower' or 'upper', got {self.kind!r}")

    def to_dict(self) -> dict:
        out = {
            "rset": self.rset.to_dict(),
            "kind": self.kind,
            "value": self.value,
            "witness": self.witness.to_dict() if self.witness is not None else None,
            "seed": self.seed,
            "functional": self.functional,
            "provenance": self.provenance,
        }
        if self.extra:
            out["extra"] = self.extra
        return out

    @classmethod
    def from_dict(cls, obj) -> BetaBound:
        w = obj.get("witness")
        return cls(
            rset=RSet.from_dict(obj["rset"]),
            kind=obj["kind"],
            value=float(obj["value"]),
            functional=obj.get("functional", "kakeya"),
            witness=JointDist.from_dict(w) if w is not None else None,
            seed=obj.get("seed"),
            provenance=obj.get("provenance", "witness"),
            extra=obj.get("extra", {}),
        )

    @classmethod
    def from_witness(cls, D: JointDist, R: RSet, functional: str = "kakeya", seed=None) -> BetaBound:
        return cls(R, "lower", evaluate(functional, D, R), functional, D, seed)


def witness_replay(B: BetaBound, tol: float = ENTROPY_TOL) -> float:
    """Recompute a lower bound from its stored witness and check it."""
    if B.kind != "lower":
        raise RatioError("only lower bounds carry a replayable witness")
    if B.witness is None:
        raise RatioError("bound has no stored witness")
    value = evaluate(B.functional, B.witness, B.rset)
    if abs(value - B.value) > tol:
        raise WitnessMismatchError(f"replayed {value!r} but bound claims {B.value!r}")
    return value
