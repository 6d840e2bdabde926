"""Exact finitely supported distributions and their Shannon entropies.

Probabilities are kept as exact :class:`~fractions.Fraction` values, atom
keys are tuples of Fractions.  Entropies are reported in bits as floats.
Everything that groups atoms (marginals, pushforwards, fibers) works on the
exact keys, never on floats.
"""

from __future__ import annotations

import json
import math
from collections import Counter, defaultdict
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Mapping, Sequence

from .rational import as_fraction, format_rational, parse_rational

__all__ = [
    "ENTROPY_TOL",
    "DistributionError",
    "JointDist",
    "ShearerReport",
    "entropy",
    "marginal",
    "cond_entropy",
    "pushforward",
    "pushforward_linear",
    "linear_map",
    "shearer_check",
    "uniform_graph_dist",
    "random_joint",
]

#: Repo-wide tolerance for comparing entropies (bits).
ENTROPY_TOL = 1e-9


class DistributionError(ValueError):
    """Raised for malformed distributions or invalid coordinate sets."""


def _key(key, dim=None) -> tuple:
    if isinstance(key, (list, tuple)):
        k = tuple(as_fraction(v) for v in key)
    else:
        k = (as_fraction(key),)
    if dim is not None and len(k) != dim:
        raise DistributionError(f"atom key {key!r} has length {len(k)}, expected {dim}")
    return k


class JointDist:
    """A finitely supported probability distribution on k-tuples of rationals.

    ``atoms`` maps each key (a tuple of Fractions) to its exact probability.
    Zero-probability atoms are dropped, repeated keys are merged, and the
    probabilities must sum to exactly one.  Instances are treated as immutable.
    """

    __slots__ = ("dim", "_atoms", "_hash")

    def __init__(self, atoms, dim: int | None = None):
        items = atoms.items() if isinstance(atoms, Mapping) else atoms
        merged: dict[tuple, Fraction] = {}
        for key, prob in items:
            k = _key(key, dim)
            if dim is None:
                dim = len(k)
            p = as_fraction(prob)
            if p < 0:
                raise DistributionError(f"negative probability {p} at {k}")
            merged[k] = merged.get(k, Fraction(0)) + p
        if dim is None or dim < 1:
            raise DistributionError("distribution needs at least one atom and dim >= 1")
        total = sum(merged.values(), Fraction(0))
        if total != 1:
            raise DistributionError(f"probabilities sum to {total}, not 1")
        self.dim = dim
        self._atoms = {k: p for k, p in merged.items() if p != 0}
        self._hash = None

    @property
    def atoms(self) -> dict:
        return dict(self._atoms)

    def items(self):
        return self._atoms.items()

    def __len__(self):
        return len(self._atoms)

    def __iter__(self):
        return iter(self._atoms)

    def __getitem__(self, key):
        return self._atoms.get(_key(key, self.dim), Fraction(0))

    def __eq__(self, other):
        if not isinstance(other, JointDist):
            return NotImplemented
        return self.dim == other.dim and self._atoms == other._atoms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.dim, frozenset(self._atoms.items())))
        return self._hash

    def __repr__(self):
        body = ", ".join(
            f"({', '.join(map(format_rational, k))}): {format_rational(p)}"
            for k, p in sorted(self._atoms.items())
        )
        return f"JointDist(dim={self.dim}, {{{body}}})"

    # constructors -----------------------------------------------------

    @classmethod
    def point(cls, key) -> JointDist:
        return cls({_key(key): 1})

    @classmethod
    def uniform(cls, keys: Iterable) -> JointDist:
        ks = list(dict.fromkeys(_key(k) for k in keys))
        if not ks:
            raise DistributionError("uniform distribution over an empty set")
        q = Fraction(1, len(ks))
        return cls({k: q for k in ks})

    def product(self, other: JointDist) -> JointDist:
        """Independent coupling: keys are concatenated."""
        return JointDist(
            {a + b: p * q for a, p in self.items() for b, q in other.items()},
            dim=self.dim + other.dim,
        )

    # serialization ----------------------------------------------------

    def to_dict(self) -> dict:
        return {
            "dim": self.dim,
            "atoms": [
                {"key": [format_rational(v) for v in k], "prob": format_rational(p)}
                for k, p in sorted(self._atoms.items())
            ],
        }

    def to_json(self, **kw) -> str:
        return json.dumps(self.to_dict(), **kw)

    @classmethod
    def from_dict(cls, obj) -> JointDist:
        if not isinstance(obj, Mapping):
            raise DistributionError("distribution must be a JSON object")
        dim = obj.get("dim")
        if not isinstance(dim, int) or isinstance(dim, bool) or dim < 1:
            raise DistributionError(f"field 'dim': expected positive integer, got {dim!r}")
        atoms = obj.get("atoms")
        if not isinstance(atoms, list):
            raise DistributionError("field 'atoms': expected a list")
        pairs = []
        for i, atom in enumerate(atoms):
            where = f"atoms[{i}]"
            if not isinstance(atom, Mapping):
                raise DistributionError(f"field '{where}': expected an object")
            key = atom.get("key")
            if not isinstance(key, list) or len(key) != dim:
                raise DistributionError(f"field '{where}.key': expected a list of {dim} rationals")
            try:
                k = tuple(parse_rational(v) for v in key)
            except (TypeError, ValueError) as exc:
                raise DistributionError(f"field '{where}.key': {exc}") from None
            try:
                p = parse_rational(atom.get("prob"))
            except (TypeError, ValueError) as exc:
                raise DistributionError(f"field '{where}.prob': {exc}") from None
            pairs.append((k, p))
        return cls(pairs, dim=dim)

    @classmethod
    def from_json(cls, text: str) -> JointDist:
        try:
            obj = json.loads(text)
        except json.JSONDecodeError as exc:
            raise DistributionError(f"line {exc.lineno}, column {exc.colno}: {exc.msg}") from None
        return cls.from_dict(obj)


def _coords(S, dim: int) -> tuple[int, ...]:
    idx = tuple(sorted(set(int(i) for i in S)))
    for i in idx:
        if not 0 <= i < dim:
            raise DistributionError(f"coordinate {i} outside 0..{dim - 1}")
    return idx


def _entropy_of_probs(probs: Iterable[Fraction]) -> float:
    # Grouping equal probabilities makes the sum independent of key order and
    # gives exactly log2(n) for a uniform law on n atoms.
    counts = Counter(probs)
    h = 0.0
    for q in sorted(counts):
        weight = counts[q] * q
        h += float(weight) * (math.log2(q.denominator) - math.log2(q.numerator))
    return h


def entropy(D: JointDist) -> float:
    """Shannon entropy of ``D`` in bits."""
    return _entropy_of_probs(D._atoms.values())


def marginal(D: JointDist, S) -> JointDist:
    """Law of the coordinates ``S`` (kept in increasing order)."""
    idx = _coords(S, D.dim)
    if not idx:
        raise DistributionError("marginal over an empty coordinate set")
    if idx == tuple(range(D.dim)):
        return D
    out: dict[tuple, Fraction] = defaultdict(Fraction)
    for k, p in D.items():
        out[tuple(k[i] for i in idx)] += p
    return JointDist(out, dim=len(idx))


def cond_entropy(D: JointDist, A, B) -> float:
    """H(X_A | X_B), evaluated fiber by fiber as sum_y P(B=y) H(A | B=y)."""
    a = _coords(A, D.dim)
    b = _coords(B, D.dim)
    if set(a) & set(b):
        raise DistributionError(f"conditioning sets overlap: {sorted(set(a) & set(b))}")
    if not a:
        return 0.0
    if not b:
        return entropy(marginal(D, a))
    fibers: dict[tuple, dict[tuple, Fraction]] = defaultdict(lambda: defaultdict(Fraction))
    for k, p in D.items():
        fibers[tuple(k[i] for i in b)][tuple(k[i] for i in a)] += p
    h = 0.0
    for yk in sorted(fibers):
        fiber = fibers[yk]
        py = sum(fiber.values(), Fraction(0))
        h += float(py) * _entropy_of_probs(q / py for q in fiber.values())
    return h


def pushforward(D: JointDist, fn: Callable[[tuple], object]) -> JointDist:
    """Law of ``fn(key)``; atoms with equal images are merged exactly."""
    out: dict[tuple, Fraction] = defaultdict(Fraction)
    for k, p in D.items():
        out[_key(fn(k))] += p
    return JointDist(out)


def pushforward_linear(D: JointDist, coeffs: Sequence) -> JointDist:
    """One-dimensional law of ``sum_i coeffs[i] * X_i``."""
    c = [as_fraction(v) for v in coeffs]
    if len(c) != D.dim:
        raise DistributionError(f"{len(c)} coefficients for a {D.dim}-dimensional distribution")
    return pushforward(D, lambda k: sum((ci * ki for ci, ki in zip(c, k)), Fraction(0)))


def linear_map(D: JointDist, matrix: Sequence[Sequence]) -> JointDist:
    """Law of ``M @ X`` for a rational matrix ``M`` with ``D.dim`` columns."""
    rows = [[as_fraction(v) for v in row] for row in matrix]
    if not rows or any(len(r) != D.dim for r in rows):
        raise DistributionError(f"matrix must have {D.dim} columns")
    return pushforward(
        D, lambda k: tuple(sum((ri * ki for ri, ki in zip(r, k)), Fraction(0)) for r in rows)
    )


@dataclass(frozen=True)
class ShearerReport:
    lhs: float
    rhs: float
    holds: bool


def shearer_check(D: JointDist, family, t: int) -> ShearerReport:
    """Compare H(D) with (1/t) sum_F H(D_F) for a t-fold cover ``family``."""
    if t < 1:
        raise DistributionError("t must be a positive integer")
    fam = [_coords(F, D.dim) for F in family]
    cover = Counter(i for F in fam for i in F)
    for i in range(D.dim):
        if cover[i] < t:
            raise DistributionError(
                f"coordinate {i} is covered by {cover[i]} members, fewer than t={t}"
            )
    lhs = entropy(D)
    rhs = sum(entropy(marginal(D, F)) for F in fam if F) / t
    return ShearerReport(lhs, rhs, lhs <= rhs + ENTROPY_TOL)


def uniform_graph_dist(G) -> JointDist:
    """(X', Y') with Y' uniform on the vertical projection of ``G`` and X'
    uniform on the fiber above Y'."""
    fibers: dict[Fraction, set] = defaultdict(set)
    for x, y in G:
        fibers[as_fraction(y)].add(as_fraction(x))
    if not fibers:
        raise DistributionError("uniform_graph_dist of an empty point set")
    qy = Fraction(1, len(fibers))
    return JointDist(
        {(x, y): qy / len(xs) for y, xs in fibers.items() for x in xs}, dim=2
    )


def random_joint(rng, dim: int, n_atoms: int, value_range: int = 3, den: int = 64) -> JointDist:
    """Random distribution with at most ``n_atoms`` atoms.

    ``rng`` is a :class:`random.Random`; keys are integers in
    ``[-value_range, value_range]`` and probabilities have denominator
    dividing ``den * n_atoms``.
    """
    keys = [tuple(rng.randint(-value_range, value_range) for _ in range(dim)) for _ in range(n_atoms)]
    weights = [rng.randint(1, den) for _ in keys]
    total = sum(weights)
    return JointDist([(k, Fraction(w, total)) for k, w in zip(keys, weights)], dim=dim)
