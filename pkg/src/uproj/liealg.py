"""Chevalley basis of a split semisimple Lie algebra.

Structure constants are fixed by the deterministic extraspecial-pair
convention: for every non-simple positive root the minimal decomposition
pair gets N = +(p+1), and all remaining constants follow from the exact
rational identities relating constants of root triples and quadruples.
The Jacobi identity is verified exhaustively at construction for rank <= 4
and on a deterministic sample above.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction

from . import linalg
from .symfield import Poly


class BasisMismatch(ValueError):
    """Two Lie elements live over different Chevalley bases."""


def root_suffix(coeffs):
    return "".join(str(c) for c in coeffs)


@dataclass(frozen=True)
class LieElement:
    """Finite-support coefficient vector over the Chevalley basis symbols."""

    basis: "ChevalleyBasis"
    coefficients: tuple  # sorted tuple of (symbol, Fraction)

    @classmethod
    def make(cls, basis, coeff_map):
        items = tuple(
            sorted((s, Fraction(c)) for s, c in coeff_map.items() if c != 0)
        )
        return cls(basis, items)

    def as_dict(self):
        return dict(self.coefficients)

    def is_zero(self):
        return not self.coefficients

    def __add__(self, other):
        if self.basis is not other.basis:
            raise BasisMismatch("elements over different bases")
        d = self.as_dict()
        for s, c in other.coefficients:
            d[s] = d.get(s, Fraction(0)) + c
        return LieElement.make(self.basis, d)

    def __neg__(self):
        return LieElement.make(self.basis, {s: -c for s, c in self.coefficients})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, factor):
        factor = Fraction(factor)
        return LieElement.make(
            self.basis, {s: c * factor for s, c in self.coefficients}
        )

    def to_poly(self):
        """Degree-1 image in S(g)."""
        return Poly.linear(self.basis.symbols, self.as_dict())

    def __str__(self):
        if not self.coefficients:
            return "0"
        return " + ".join(
            f"{c}*{s}" if c != 1 else s for s, c in self.coefficients
        )


class ChevalleyBasis:
    """Chevalley basis with exact structure constants.

    Symbols: E_<coeffs> for positive roots, H<i> for simple coroots,
    F_<coeffs> for negative roots (F_c spans the -alpha root space).
    """

    def __init__(self, rs, jacobi_check=True):
        self.rs = rs
        self.positive_roots = rs.positive_roots
        self._coeffs = {r: rs.coefficients(r) for r in rs.roots}
        self._root_set = set(rs.roots)

        self.pos_symbol = {
            r: f"E_{root_suffix(self._coeffs[r])}" for r in self.positive_roots
        }
        self.neg_symbol = {
            r: f"F_{root_suffix(self._coeffs[r])}" for r in self.positive_roots
        }
        self.cartan_symbols = tuple(f"H{i + 1}" for i in range(rs.rank))
        self.symbols = (
            tuple(self.pos_symbol[r] for r in self.positive_roots)
            + self.cartan_symbols
            + tuple(self.neg_symbol[r] for r in self.positive_roots)
        )
        self._root_of_symbol = {}
        for r in self.positive_roots:
            self._root_of_symbol[self.pos_symbol[r]] = r
            self._root_of_symbol[self.neg_symbol[r]] = tuple(-x for x in r)

        self._order = {
            r: i for i, r in enumerate(self.positive_roots)
        }  # height-then-lex total order
        self._extraspecial = {}
        for gamma in self.positive_roots:
            if sum(self._coeffs[gamma]) == 1:
                continue
            for alpha in self.positive_roots:
                beta = tuple(g - a for g, a in zip(gamma, alpha))
                if beta in self._root_set and self.rs.is_positive(beta):
                    self._extraspecial[gamma] = (alpha, beta)
                    break
        self._nmemo = {}
        if jacobi_check:
            self.check_jacobi(exhaustive=rs.rank <= 4)

    # -- root bookkeeping -------------------------------------------------

    def root_of(self, symbol):
        return self._root_of_symbol[symbol]

    def symbol_of(self, root):
        root = tuple(root)
        if self.rs.is_positive(root):
            return self.pos_symbol[root]
        return self.neg_symbol[tuple(-x for x in root)]

    def _chain_down(self, alpha, beta):
        """p = max k with beta - k*alpha a root."""
        p = 0
        cur = beta
        while True:
            cur = tuple(b - a for b, a in zip(cur, alpha))
            if cur in self._root_set:
                p += 1
            else:
                return p

    def _norm(self, root):
        return self.rs.inner(root, root)

    # -- structure constants ------------------------------------------------

    def structure_constant(self, alpha, beta):
        """N_{alpha,beta} for roots alpha, beta; 0 when alpha+beta is not a
        root, error when alpha+beta = 0 (that bracket is a coroot)."""
        alpha, beta = tuple(alpha), tuple(beta)
        gamma = tuple(a + b for a, b in zip(alpha, beta))
        if all(x == 0 for x in gamma):
            raise ValueError("opposite roots: bracket is a coroot, not N*E")
        if gamma not in self._root_set:
            return Fraction(0)
        key = (alpha, beta)
        if key in self._nmemo:
            return self._nmemo[key]
        val = self._compute_n(alpha, beta, gamma)
        self._nmemo[key] = val
        return val

    def _compute_n(self, alpha, beta, gamma):
        pos_a = self.rs.is_positive(alpha)
        pos_b = self.rs.is_positive(beta)
        if pos_a and pos_b:
            a1, b1 = self._extraspecial[gamma]
            if (alpha, beta) == (a1, b1):
                return Fraction(self._chain_down(a1, b1) + 1)
            if (beta, alpha) == (a1, b1):
                return -self.structure_constant(beta, alpha)
            # special pair: four-root identity on (a1, b1, -alpha, -beta)
            neg_a = tuple(-x for x in alpha)
            neg_b = tuple(-x for x in beta)
            total = Fraction(0)
            s1 = tuple(x + y for x, y in zip(b1, neg_a))
            if s1 in self._root_set:
                total += (
                    self.structure_constant(b1, neg_a)
                    * self.structure_constant(a1, neg_b)
                    / self._norm(s1)
                )
            s2 = tuple(x + y for x, y in zip(neg_a, a1))
            if s2 in self._root_set:
                total += (
                    self.structure_constant(neg_a, a1)
                    * self.structure_constant(b1, neg_b)
                    / self._norm(s2)
                )
            n_extra = self.structure_constant(a1, b1)
            n_neg = -self._norm(gamma) * total / n_extra
            return -n_neg  # N(-a,-b) = -N(a,b)
        if not pos_a and not pos_b:
            return -self.structure_constant(
                tuple(-x for x in alpha), tuple(-x for x in beta)
            )
        if not pos_a:
            return -self.structure_constant(beta, alpha)
        # alpha positive, beta negative
        delta = tuple(-x for x in beta)
        if self.rs.is_positive(gamma):
            # alpha = gamma + delta
            return (
                -Fraction(self._norm(gamma), self._norm(alpha))
                * self.structure_constant(delta, gamma)
            )
        eps = tuple(-x for x in gamma)
        # delta = eps + alpha
        return (
            Fraction(self._norm(eps), self._norm(delta))
            * self.structure_constant(eps, alpha)
        )

    # -- coroots and Cartan action -------------------------------------------

    def coroot_coefficients(self, root):
        """Coordinates of the coroot of `root` over the simple coroots."""
        root = tuple(root)
        scale = Fraction(2) / self._norm(root)
        target = [self.rs.form_scale * scale * x for x in root]
        columns = []
        for a in self.rs.simple_roots:
            s = Fraction(2) / self._norm(a)
            columns.append([self.rs.form_scale * s * x for x in a])
        rows = list(map(list, zip(*columns)))
        sol = linalg.solve(rows, target)
        if sol is None:
            raise ValueError(f"{root} has no coroot expansion")
        return tuple(sol)

    def coroot(self, root):
        coeffs = self.coroot_coefficients(root)
        return LieElement.make(
            self, {h: c for h, c in zip(self.cartan_symbols, coeffs)}
        )

    def weight_on_cartan(self, weight, cartan_coeffs):
        """Evaluate a weight vector (ambient coordinates) on sum c_i H_i."""
        total = Fraction(0)
        for c, alpha in zip(cartan_coeffs, self.rs.simple_roots):
            total += Fraction(c) * self.rs.cartan_pairing(weight, alpha)
        return total

    # -- brackets -----------------------------------------------------------

    def _bracket_symbols(self, u, v):
        """[u, v] for two basis symbols, as a LieElement."""
        u_cart = u in self.cartan_symbols
        v_cart = v in self.cartan_symbols
        if u_cart and v_cart:
            return LieElement.make(self, {})
        if u_cart or v_cart:
            if v_cart:
                res = self._bracket_symbols(v, u)
                return -res
            i = self.cartan_symbols.index(u)
            beta = self.root_of(v)
            c = self.rs.cartan_pairing(beta, self.rs.simple_roots[i])
            return LieElement.make(self, {v: Fraction(c)})
        a = self.root_of(u)
        b = self.root_of(v)
        s = tuple(x + y for x, y in zip(a, b))
        if all(x == 0 for x in s):
            h = self.coroot(a)
            return h
        if s not in self._root_set:
            return LieElement.make(self, {})
        n = self.structure_constant(a, b)
        return LieElement.make(self, {self.symbol_of(s): n})

    def bracket(self, x, y):
        """Bilinear bracket of two LieElements."""
        if x.basis is not self or y.basis is not self:
            raise BasisMismatch("elements over a different basis")
        acc = {}
        for u, cu in x.coefficients:
            for v, cv in y.coefficients:
                if u == v:
                    continue
                for s, c in self._bracket_symbols(u, v).coefficients:
                    acc[s] = acc.get(s, Fraction(0)) + cu * cv * c
        return LieElement.make(self, acc)

    def element(self, symbol):
        return LieElement.make(self, {symbol: 1})

    def variable_bracket(self, u, v):
        """Bracket of two basis variables as a linear Poly (Poisson table)."""
        return self._bracket_symbols(u, v).to_poly()

    # -- consistency ----------------------------------------------------------

    def check_jacobi(self, exhaustive=True, sample=300):
        symbols = self.symbols
        if exhaustive:
            triples = itertools.combinations(symbols, 3)
        else:
            import random

            rng = random.Random(0)
            triples = (
                tuple(rng.sample(symbols, 3)) for _ in range(sample)
            )
        for u, v, w in triples:
            x, y, z = self.element(u), self.element(v), self.element(w)
            total = (
                self.bracket(x, self.bracket(y, z))
                + self.bracket(y, self.bracket(z, x))
                + self.bracket(z, self.bracket(x, y))
            )
            if not total.is_zero():
                raise AssertionError(
                    f"Jacobi identity fails on ({u}, {v}, {w}): {total}"
                )

    # -- export -----------------------------------------------------------------

    def structure_table_json(self):
        table = []
        for a in self.positive_roots:
            for b in self.positive_roots:
                s = tuple(x + y for x, y in zip(a, b))
                if s in self._root_set:
                    n = self.structure_constant(a, b)
                    table.append(
                        {
                            "alpha": list(a),
                            "beta": list(b),
                            "num": str(n.numerator),
                            "den": str(n.denominator),
                        }
                    )
        return {
            "series": self.rs.series,
            "rank": self.rs.rank,
            "symbols": list(self.symbols),
            "constants": table,
        }


def chevalley_constants(rs):
    """Build the Chevalley basis for a root system."""
    return ChevalleyBasis(rs)


def bracket(a, b):
    if a.basis is not b.basis:
        raise BasisMismatch("elements over different bases")
    return a.basis.bracket(a, b)


def coroot(basis, alpha):
    alpha = tuple(alpha)
    if alpha not in basis._root_set:
        raise ValueError(f"{alpha} is not a root")
    return basis.coroot(alpha)
