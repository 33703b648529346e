"""Root-system combinatorics for the split simple types.

Roots live in a fixed ambient lattice with integer coordinates (the E and F
realizations are scaled by 2 so half-integer coordinates become integers;
the bilinear form carries the compensating 1/4).  Simple roots follow the
Bourbaki numbering, and the full root set is generated by reflection
closure.

The cascade of strongly orthogonal roots is built by repeatedly splitting
off the highest root of each irreducible component and descending to its
orthogonal complement.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from . import linalg


class InvalidDynkinDatum(ValueError):
    """The (series, rank) pair does not name a finite irreducible system."""


_ROOT_COUNTS = {
    # positive-root counts by series, as a function of rank
    "A": lambda n: n * (n + 1) // 2,
    "B": lambda n: n * n,
    "C": lambda n: n * n,
    "D": lambda n: n * (n - 1),
    "E": lambda n: {6: 36, 7: 63, 8: 120}[n],
    "F": lambda n: 24,
    "G": lambda n: 6,
}


def _simple_roots(series, rank):
    """Simple roots as integer ambient vectors plus the form scale."""
    if series == "A":
        if rank < 1:
            raise InvalidDynkinDatum(f"A requires rank >= 1, got {rank}")
        dim = rank + 1
        simples = []
        for i in range(rank):
            v = [0] * dim
            v[i], v[i + 1] = 1, -1
            simples.append(tuple(v))
        return simples, Fraction(1)
    if series == "B":
        if rank < 2:
            raise InvalidDynkinDatum(f"B requires rank >= 2, got {rank}")
        simples = []
        for i in range(rank - 1):
            v = [0] * rank
            v[i], v[i + 1] = 1, -1
            simples.append(tuple(v))
        last = [0] * rank
        last[-1] = 1
        simples.append(tuple(last))
        return simples, Fraction(1)
    if series == "C":
        if rank < 2:
            raise InvalidDynkinDatum(f"C requires rank >= 2, got {rank}")
        simples = []
        for i in range(rank - 1):
            v = [0] * rank
            v[i], v[i + 1] = 1, -1
            simples.append(tuple(v))
        last = [0] * rank
        last[-1] = 2
        simples.append(tuple(last))
        return simples, Fraction(1)
    if series == "D":
        if rank < 4:
            raise InvalidDynkinDatum(f"D requires rank >= 4, got {rank}")
        simples = []
        for i in range(rank - 1):
            v = [0] * rank
            v[i], v[i + 1] = 1, -1
            simples.append(tuple(v))
        last = [0] * rank
        last[-2], last[-1] = 1, 1
        simples.append(tuple(last))
        return simples, Fraction(1)
    if series == "G":
        if rank != 2:
            raise InvalidDynkinDatum(f"G requires rank 2, got {rank}")
        return [(1, -1, 0), (-2, 1, 1)], Fraction(1)
    if series == "F":
        if rank != 4:
            raise InvalidDynkinDatum(f"F requires rank 4, got {rank}")
        # Bourbaki coordinates scaled by 2; form scale 1/4.
        return (
            [(0, 2, -2, 0), (0, 0, 2, -2), (0, 0, 0, 2), (1, -1, -1, -1)],
            Fraction(1, 4),
        )
    if series == "E":
        if rank not in (6, 7, 8):
            raise InvalidDynkinDatum(f"E requires rank 6, 7 or 8, got {rank}")
        # E8 simple roots in Bourbaki coordinates scaled by 2; E6/E7 are the
        # leading subsets.
        e8 = [
            (1, -1, -1, -1, -1, -1, -1, 1),
            (2, 2, 0, 0, 0, 0, 0, 0),
            (-2, 2, 0, 0, 0, 0, 0, 0),
            (0, -2, 2, 0, 0, 0, 0, 0),
            (0, 0, -2, 2, 0, 0, 0, 0),
            (0, 0, 0, -2, 2, 0, 0, 0),
            (0, 0, 0, 0, -2, 2, 0, 0),
            (0, 0, 0, 0, 0, -2, 2, 0),
        ]
        return [tuple(v) for v in e8[:rank]], Fraction(1, 4)
    raise InvalidDynkinDatum(f"unknown series {series!r}")


def _dot(a, b):
    return sum(x * y for x, y in zip(a, b))


def _reflect(beta, alpha):
    # 2(beta,alpha)/(alpha,alpha) is scale-free, so plain dot products do.
    c = Fraction(2 * _dot(beta, alpha), _dot(alpha, alpha))
    if c.denominator != 1:
        raise AssertionError("non-integral Cartan pairing")
    c = int(c)
    return tuple(b - c * a for b, a in zip(beta, alpha))


@dataclass(frozen=True)
class RootSystem:
    """Immutable typed root datum."""

    series: str
    rank: int
    roots: tuple
    simple_roots: tuple
    form_scale: Fraction

    def inner(self, a, b):
        return self.form_scale * _dot(a, b)

    def is_root(self, v):
        return tuple(v) in self._root_set

    @property
    def _root_set(self):
        return set(self.roots)

    @property
    def bilinear_form(self):
        dim = len(self.simple_roots[0])
        return [
            [self.form_scale if i == j else Fraction(0) for j in range(dim)]
            for i in range(dim)
        ]

    def coefficients(self, root):
        """Expansion of a root over the simple roots (exact integers)."""
        rows = list(zip(*self.simple_roots))  # ambient-dim x rank
        sol = linalg.solve([list(map(Fraction, r)) for r in rows], list(root))
        if sol is None:
            raise ValueError(f"{root} is not in the root lattice span")
        assert all(c.denominator == 1 for c in sol)
        return tuple(int(c) for c in sol)

    def is_positive(self, root):
        return all(c >= 0 for c in self.coefficients(root))

    def height(self, root):
        return sum(self.coefficients(root))

    @property
    def positive_roots(self):
        pos = [r for r in self.roots if self.is_positive(r)]
        pos.sort(key=lambda r: (self.height(r), self.coefficients(r)))
        return tuple(pos)

    def cartan_pairing(self, beta, alpha):
        """<beta, alpha-check> = 2(beta,alpha)/(alpha,alpha)."""
        c = Fraction(2 * _dot(beta, alpha), _dot(alpha, alpha))
        assert c.denominator == 1
        return int(c)

    def to_json(self):
        return {
            "series": self.series,
            "rank": self.rank,
            "roots": [list(r) for r in self.roots],
            "simple_roots": [list(r) for r in self.simple_roots],
            "bilinear_form": [
                [
                    {"num": str(x.numerator), "den": str(x.denominator)}
                    for x in row
                ]
                for row in self.bilinear_form
            ],
        }


def build_root_system(series, rank):
    """Construct an irreducible root system with Bourbaki simple roots."""
    if not isinstance(rank, int) or rank < 1:
        raise InvalidDynkinDatum(f"rank must be a positive integer, got {rank}")
    simples, scale = _simple_roots(series, rank)
    roots = set(simples)
    frontier = set(simples)
    while frontier:
        new = set()
        for beta in frontier:
            for alpha in simples:
                r = _reflect(beta, alpha)
                if r not in roots:
                    new.add(r)
        roots |= new
        frontier = new
    roots |= {tuple(-x for x in v) for v in roots}
    expected = 2 * _ROOT_COUNTS[series](rank)
    if len(roots) != expected:
        raise AssertionError(
            f"{series}{rank}: got {len(roots)} roots, expected {expected}"
        )
    ordered = sorted(roots)
    return RootSystem(series, rank, tuple(ordered), tuple(simples), scale)


@dataclass(frozen=True)
class CascadeLevel:
    """One step of the cascade inside one irreducible component."""

    index: int  # 1-based
    delta_pos: tuple  # positive roots of the component Delta_i
    xi: tuple  # the (unique) highest root of the component
    gamma: tuple  # roots of Delta_i+ pairing strictly with xi
    pairing: dict  # alpha -> alpha' on Gamma^0, alpha + alpha' = xi
    next_pos: tuple  # positive roots of Delta_{i+1}


@dataclass(frozen=True)
class Cascade:
    entries: tuple  # the cascade roots xi_1, ..., xi_m
    levels: tuple  # CascadeLevel per entry

    def to_json(self):
        return {
            "entries": [list(x) for x in self.entries],
            "levels": [
                {
                    "index": lv.index,
                    "delta_pos": [list(r) for r in lv.delta_pos],
                    "xi": list(lv.xi),
                    "gamma": [list(r) for r in lv.gamma],
                    "pairing": [
                        [list(a), list(b)] for a, b in sorted(lv.pairing.items())
                    ],
                    "next_pos": [list(r) for r in lv.next_pos],
                }
                for lv in self.levels
            ],
        }


def _components(rs, pos_roots):
    """Connected components of a set of positive roots (non-orthogonality
    graph), in lexicographic order of their lowest-index simple-root
    support."""
    remaining = set(pos_roots)
    comps = []
    while remaining:
        seed = next(iter(remaining))
        comp = {seed}
        frontier = {seed}
        while frontier:
            new = set()
            for a in frontier:
                for b in remaining - comp:
                    if _dot(a, b) != 0:
                        new.add(b)
            comp |= new
            frontier = new
        remaining -= comp
        comps.append(comp)

    def comp_key(comp):
        support = min(
            min(i for i, c in enumerate(rs.coefficients(r)) if c != 0)
            for r in comp
        )
        return (support, sorted(comp))

    comps.sort(key=comp_key)
    return [
        sorted(c, key=lambda r: (rs.height(r), rs.coefficients(r))) for c in comps
    ]


def kostant_cascade(rs):
    """Cascade of strongly orthogonal roots with per-level partitions."""
    levels = []

    def process(pos_roots):
        for comp in _components(rs, pos_roots):
            max_h = max(rs.height(r) for r in comp)
            tops = [r for r in comp if rs.height(r) == max_h]
            if len(tops) != 1:
                raise AssertionError(
                    f"highest root not unique in component {comp}"
                )
            xi = tops[0]
            gamma = tuple(a for a in comp if _dot(a, xi) != 0)
            next_pos = tuple(a for a in comp if _dot(a, xi) == 0)
            pairing = {}
            for a in gamma:
                if a == xi:
                    continue
                partner = tuple(x - y for x, y in zip(xi, a))
                if partner not in set(gamma) or partner == a:
                    raise AssertionError(f"no pairing partner for {a}")
                pairing[a] = partner
            levels.append(
                CascadeLevel(
                    index=len(levels) + 1,
                    delta_pos=tuple(comp),
                    xi=xi,
                    gamma=gamma,
                    pairing=pairing,
                    next_pos=next_pos,
                )
            )
            process(next_pos)

    process(rs.positive_roots)
    return Cascade(
        entries=tuple(lv.xi for lv in levels), levels=tuple(levels)
    )


def heisenberg_partition(rs, cascade, level):
    """Gamma_i and the involution on Gamma_i^0 for a 1-based level index."""
    if not 1 <= level <= len(cascade.levels):
        raise IndexError(f"level {level} out of range 1..{len(cascade.levels)}")
    lv = cascade.levels[level - 1]
    return lv.gamma, dict(lv.pairing)
