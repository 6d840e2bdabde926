"""Finite point sets in Z^2 (or (Z^n)^2) and F_p^2 with their projections
pi_r(x, y) = x + r y and pi_inf(x, y) = y."""

from __future__ import annotations

import json
from collections import defaultdict
from fractions import Fraction

from ..rational import as_fraction, format_rational, parse_rational

__all__ = ["INF", "PointSet", "PointSetError", "project", "injectivity_check", "fibers"]

INF = "inf"


class PointSetError(ValueError):
    pass


def _coord(v, mod):
    if isinstance(v, (list, tuple)):
        if mod is not None:
            raise PointSetError("vector coordinates are only supported over Z")
        return tuple(_coord(c, None) for c in v)
    q = as_fraction(v)
    if mod is not None:
        if q.denominator != 1:
            raise PointSetError(f"non-integer coordinate {q} in mod-{mod} mode")
        return q.numerator % mod
    return q.numerator if q.denominator == 1 else q


def _dump(v):
    if isinstance(v, tuple):
        return [_dump(c) for c in v]
    if isinstance(v, Fraction):
        return format_rational(v)
    return v


def _load(v):
    if isinstance(v, list):
        return tuple(_load(c) for c in v)
    if isinstance(v, str):
        return parse_rational(v)
    if isinstance(v, bool) or not isinstance(v, int):
        raise PointSetError(f"bad coordinate {v!r}")
    return v


class PointSet:
    """Distinct points (x, y); ``mod`` is a prime p for F_p^2 or None for Z^2."""

    __slots__ = ("mod", "points")

    def __init__(self, points, mod: int | None = None):
        self.mod = mod
        self.points = frozenset((_coord(x, mod), _coord(y, mod)) for x, y in points)

    def __len__(self):
        return len(self.points)

    def __iter__(self):
        return iter(sorted(self.points))

    def __contains__(self, pt):
        return pt in self.points

    def __eq__(self, other):
        return isinstance(other, PointSet) and (self.mod, self.points) == (other.mod, other.points)

    def __hash__(self):
        return hash((self.mod, self.points))

    def __repr__(self):
        where = "Z^2" if self.mod is None else f"F_{self.mod}^2"
        return f"PointSet({len(self)} points in {where})"

    def filter(self, pred) -> PointSet:
        return PointSet([pt for pt in self.points if pred(*pt)], self.mod)

    def to_dict(self) -> dict:
        return {"mod": self.mod, "points": [[_dump(x), _dump(y)] for x, y in self]}

    def to_json(self, **kw) -> str:
        return json.dumps(self.to_dict(), **kw)

    @classmethod
    def from_dict(cls, obj) -> PointSet:
        try:
            return cls([(_load(x), _load(y)) for x, y in obj["points"]], obj.get("mod"))
        except (KeyError, TypeError, ValueError) as exc:
            raise PointSetError(f"malformed point set: {exc}") from None

    @classmethod
    def from_json(cls, text: str) -> PointSet:
        return cls.from_dict(json.loads(text))


def _lin(x, r, y):
    if isinstance(x, tuple):
        return tuple(_lin(a, r, b) for a, b in zip(x, y))
    v = x + r * y
    return v.numerator if isinstance(v, Fraction) and v.denominator == 1 else v


def project(G: PointSet, r) -> set:
    """Image of G under pi_r; ``r`` is a rational or :data:`INF`."""
    if r == INF or r is None:
        return {y for _, y in G.points}
    r = as_fraction(r)
    if G.mod is not None:
        p = G.mod
        if r.denominator % p == 0:
            raise PointSetError(f"denominator of r = {r} is not invertible mod {p}")
        rr = r.numerator * pow(r.denominator, -1, p) % p
        return {(x + rr * y) % p for x, y in G.points}
    return {_lin(x, r, y) for x, y in G.points}


def injectivity_check(G: PointSet) -> bool:
    """True iff pi_inf is injective on G."""
    return len(project(G, INF)) == len(G)


def fibers(G: PointSet) -> dict:
    """y -> set of x with (x, y) in G."""
    out = defaultdict(set)
    for x, y in G.points:
        out[y].add(x)
    return dict(out)
