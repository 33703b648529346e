"""Exact multivariate polynomials and localized elements over the rationals.

Polynomials are sparse dicts mapping exponent tuples to Fraction
coefficients.  Localized elements (LocElem) carry a polynomial numerator
and a formal monomial denominator over a declared multiplicative set of
generator polynomials; cancellation happens only by exact division against
those generators, so normal forms stay cheap and canonical.

The Poisson bracket of a symmetric algebra S(g) lives here as well: it is
determined by a bracket table on the degree-1 variables (supplied by a
Chevalley basis) and extended by Leibniz and the quotient rule.
"""

from __future__ import annotations

import heapq
from fractions import Fraction


class UniverseMismatch(ValueError):
    """Operands live over different variable universes or denominator sets."""


class SingularPointError(ValueError):
    """A denominator generator vanishes at the evaluation point."""


def _fr(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    return Fraction(x)


def grevlex_key(exp):
    """Sort key for graded reverse-lexicographic order, largest first."""
    return (-sum(exp), tuple(exp[::-1]))


class Poly:
    """Sparse exact polynomial over an ordered variable tuple."""

    __slots__ = ("vars", "terms")

    def __init__(self, variables, terms=None):
        self.vars = tuple(variables)
        clean = {}
        if terms:
            for exp, coeff in terms.items():
                c = _fr(coeff)
                if c != 0:
                    clean[tuple(exp)] = c
        self.terms = clean

    # -- constructors -------------------------------------------------

    @classmethod
    def const(cls, variables, value):
        variables = tuple(variables)
        value = _fr(value)
        if value == 0:
            return cls(variables)
        return cls(variables, {(0,) * len(variables): value})

    @classmethod
    def variable(cls, variables, name):
        variables = tuple(variables)
        i = variables.index(name)
        exp = [0] * len(variables)
        exp[i] = 1
        return cls(variables, {tuple(exp): Fraction(1)})

    @classmethod
    def linear(cls, variables, coeffs):
        """Linear polynomial from {name: coeff}."""
        variables = tuple(variables)
        terms = {}
        for name, c in coeffs.items():
            i = variables.index(name)
            exp = [0] * len(variables)
            exp[i] = 1
            terms[tuple(exp)] = _fr(c)
        return cls(variables, terms)

    # -- predicates ---------------------------------------------------

    def is_zero(self):
        return not self.terms

    def is_constant(self):
        return all(sum(e) == 0 for e in self.terms)

    def constant_value(self):
        if not self.terms:
            return Fraction(0)
        if not self.is_constant():
            raise ValueError("polynomial is not constant")
        return next(iter(self.terms.values()))

    def total_degree(self):
        if not self.terms:
            return 0
        return max(sum(e) for e in self.terms)

    def coefficient_of(self, name):
        """Coefficient of the plain variable term (degree-one monomial)."""
        i = self.vars.index(name)
        exp = [0] * len(self.vars)
        exp[i] = 1
        return self.terms.get(tuple(exp), Fraction(0))

    def _check(self, other):
        if self.vars != other.vars:
            raise UniverseMismatch(
                f"variable universes differ: {self.vars} vs {other.vars}"
            )

    # -- arithmetic ---------------------------------------------------

    def __add__(self, other):
        if not isinstance(other, Poly):
            other = Poly.const(self.vars, other)
        self._check(other)
        terms = dict(self.terms)
        for exp, c in other.terms.items():
            s = terms.get(exp, Fraction(0)) + c
            if s == 0:
                terms.pop(exp, None)
            else:
                terms[exp] = s
        return Poly(self.vars, terms)

    __radd__ = __add__

    def __neg__(self):
        return Poly(self.vars, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        if not isinstance(other, Poly):
            other = Poly.const(self.vars, other)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, Poly):
            c = _fr(other)
            if c == 0:
                return Poly(self.vars)
            return Poly(self.vars, {e: k * c for e, k in self.terms.items()})
        self._check(other)
        terms = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                exp = tuple(a + b for a, b in zip(e1, e2))
                s = terms.get(exp, Fraction(0)) + c1 * c2
                if s == 0:
                    terms.pop(exp, None)
                else:
                    terms[exp] = s
        return Poly(self.vars, terms)

    __rmul__ = __mul__

    def __pow__(self, n):
        if not isinstance(n, int) or n < 0:
            raise ValueError("polynomial powers must be nonnegative integers")
        result = Poly.const(self.vars, 1)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __eq__(self, other):
        if not isinstance(other, Poly):
            return self.is_constant() and self.constant_value() == _fr(other)
        return self.vars == other.vars and self.terms == other.terms

    def __hash__(self):
        return hash((self.vars, frozenset(self.terms.items())))

    # -- calculus and evaluation ---------------------------------------

    def deriv(self, name):
        i = self.vars.index(name)
        terms = {}
        for exp, c in self.terms.items():
            if exp[i] == 0:
                continue
            new = list(exp)
            new[i] -= 1
            terms[tuple(new)] = c * exp[i]
        return Poly(self.vars, terms)

    def evaluate(self, point):
        """Exact substitution; point maps variable name to a rational."""
        vals = [_fr(point[v]) for v in self.vars]
        total = Fraction(0)
        for exp, c in self.terms.items():
            term = c
            for v, e in zip(vals, exp):
                if e:
                    term *= v**e
            total += term
        return total

    def substitute_linear(self, new_vars, images):
        """Substitute each variable by a linear Poly over new_vars."""
        new_vars = tuple(new_vars)
        imgs = [images[v] for v in self.vars]
        result = Poly(new_vars)
        for exp, c in self.terms.items():
            term = Poly.const(new_vars, c)
            for img, e in zip(imgs, exp):
                if e:
                    term = term * img**e
            result = result + term
        return result

    # -- normal form helpers -------------------------------------------

    def sorted_terms(self):
        return sorted(self.terms.items(), key=lambda kv: grevlex_key(kv[0]))

    def leading(self):
        """Leading (exp, coeff) in grevlex order; None for the zero poly."""
        if not self.terms:
            return None
        exp = min(self.terms, key=grevlex_key)
        return exp, self.terms[exp]

    def content_and_primitive(self):
        """Write self = c * p with p having integer coprime coefficients
        and positive leading coefficient."""
        if not self.terms:
            return Fraction(1), self
        from math import gcd

        num_gcd = 0
        den_lcm = 1
        for c in self.terms.values():
            num_gcd = gcd(num_gcd, abs(c.numerator))
            den_lcm = den_lcm * c.denominator // gcd(den_lcm, c.denominator)
        content = Fraction(num_gcd, den_lcm)
        lead = self.leading()[1]
        if lead < 0:
            content = -content
        prim = Poly(self.vars, {e: c / content for e, c in self.terms.items()})
        return content, prim

    def exact_div(self, divisor):
        """Exact quotient self / divisor, or None when not divisible."""
        if divisor.is_zero():
            raise ZeroDivisionError("division by the zero polynomial")
        self._check(divisor)
        if not self.terms:
            return Poly(self.vars)
        dexp, dcoeff = divisor.leading()
        dterms = divisor.terms
        rem = dict(self.terms)
        heap = [grevlex_key(e) for e in rem]
        heapq.heapify(heap)
        qterms = {}
        while heap:
            key = heapq.heappop(heap)
            rexp = tuple(key[1][::-1])
            rcoeff = rem.get(rexp)
            if not rcoeff:
                continue
            q = tuple(a - b for a, b in zip(rexp, dexp))
            if any(e < 0 for e in q):
                return None
            c = rcoeff / dcoeff
            qterms[q] = c
            for e2, c2 in dterms.items():
                ne = tuple(a + b for a, b in zip(q, e2))
                old = rem.get(ne)
                if old is None:
                    rem[ne] = -c * c2
                    heapq.heappush(heap, grevlex_key(ne))
                else:
                    nv = old - c * c2
                    if nv:
                        rem[ne] = nv
                    else:
                        del rem[ne]
        return Poly(self.vars, qterms)

    # -- presentation ---------------------------------------------------

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for exp, c in self.sorted_terms():
            factors = []
            for v, e in zip(self.vars, exp):
                if e == 1:
                    factors.append(v)
                elif e > 1:
                    factors.append(f"{v}^{e}")
            mono = "*".join(factors)
            if not mono:
                piece = str(c)
            elif c == 1:
                piece = mono
            elif c == -1:
                piece = f"-{mono}"
            else:
                piece = f"{c}*{mono}"
            parts.append(piece)
        out = parts[0]
        for piece in parts[1:]:
            out += f" - {piece[1:]}" if piece.startswith("-") else f" + {piece}"
        return out

    def __repr__(self):
        return f"Poly({self})"

    def to_json(self):
        return {
            "vars": list(self.vars),
            "terms": [
                {"exp": list(e), "num": str(c.numerator), "den": str(c.denominator)}
                for e, c in self.sorted_terms()
            ],
        }

    @classmethod
    def from_json(cls, data):
        terms = {
            tuple(t["exp"]): Fraction(int(t["num"]), int(t["den"]))
            for t in data["terms"]
        }
        return cls(tuple(data["vars"]), terms)


class DenominatorSet:
    """Declared multiplicative set: a growable list of generator polynomials.

    Generators are stored in primitive form (integer coprime coefficients,
    positive leading coefficient); registration returns the index and the
    scalar relating the input to the stored generator.
    """

    def __init__(self, variables, generators=()):
        self.vars = tuple(variables)
        self.gens = []
        for g in generators:
            self.register(g)

    def register(self, poly):
        """Add (or find) a generator; returns (index, content) with
        poly == content * gens[index]."""
        if poly.is_zero():
            raise ValueError("denominator generators must be nonzero")
        if poly.vars != self.vars:
            raise UniverseMismatch("generator over a different variable universe")
        content, prim = poly.content_and_primitive()
        for i, g in enumerate(self.gens):
            if g.terms == prim.terms:
                return i, content
        self.gens.append(prim)
        return len(self.gens) - 1, content

    def __len__(self):
        return len(self.gens)

    def to_json(self):
        return {"vars": list(self.vars), "generators": [g.to_json() for g in self.gens]}


def _pad(exps, n):
    return tuple(exps) + (0,) * (n - len(exps))


class LocElem:
    """numerator / (monomial in denominator-set generators)."""

    __slots__ = ("dset", "num", "den")

    def __init__(self, dset, num, den=()):
        self.dset = dset
        if not isinstance(num, Poly):
            num = Poly.const(dset.vars, num)
        if num.vars != dset.vars:
            raise UniverseMismatch("numerator over a different variable universe")
        den = tuple(den)
        if any(e < 0 for e in den):
            raise ValueError("denominator exponents must be nonnegative")
        self.num = num
        self.den = den
        self._reduce()

    # -- helpers --------------------------------------------------------

    @classmethod
    def const(cls, dset, value):
        return cls(dset, Poly.const(dset.vars, value))

    @classmethod
    def variable(cls, dset, name):
        return cls(dset, Poly.variable(dset.vars, name))

    def _check(self, other):
        if self.dset is not other.dset:
            raise UniverseMismatch("operands use different denominator sets")

    def _reduce(self):
        if self.num.is_zero():
            self.den = ()
            return
        den = list(self.den)
        changed = False
        for i, e in enumerate(den):
            gen_deg = self.dset.gens[i].total_degree()
            while e > 0:
                if self.num.total_degree() < gen_deg:
                    break
                q = self.num.exact_div(self.dset.gens[i])
                if q is None:
                    break
                self.num = q
                e -= 1
                changed = True
            den[i] = e
        while den and den[-1] == 0:
            den.pop()
        self.den = tuple(den)
        return changed

    def den_poly(self):
        """The denominator monomial expanded as a Poly."""
        result = Poly.const(self.dset.vars, 1)
        for i, e in enumerate(self.den):
            if e:
                result = result * self.dset.gens[i] ** e
        return result

    def is_zero(self):
        return self.num.is_zero()

    def is_polynomial(self):
        return not self.den

    # -- ring operations --------------------------------------------------

    def __add__(self, other):
        if not isinstance(other, LocElem):
            other = LocElem.const(self.dset, other)
        self._check(other)
        n = max(len(self.den), len(other.den))
        a, b = _pad(self.den, n), _pad(other.den, n)
        common = tuple(max(x, y) for x, y in zip(a, b))
        num = self.num
        for i, (c, e) in enumerate(zip(common, a)):
            if c > e:
                num = num * self.dset.gens[i] ** (c - e)
        onum = other.num
        for i, (c, e) in enumerate(zip(common, b)):
            if c > e:
                onum = onum * self.dset.gens[i] ** (c - e)
        return LocElem(self.dset, num + onum, common)

    __radd__ = __add__

    def __neg__(self):
        return LocElem(self.dset, -self.num, self.den)

    def __sub__(self, other):
        if not isinstance(other, LocElem):
            other = LocElem.const(self.dset, other)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, LocElem):
            if isinstance(other, Poly):
                other = LocElem(self.dset, other)
            else:
                return LocElem(self.dset, self.num * other, self.den)
        self._check(other)
        n = max(len(self.den), len(other.den))
        den = tuple(
            x + y for x, y in zip(_pad(self.den, n), _pad(other.den, n))
        )
        return LocElem(self.dset, self.num * other.num, den)

    __rmul__ = __mul__

    def __pow__(self, n):
        if not isinstance(n, int) or n < 0:
            raise ValueError("LocElem powers must be nonnegative integers")
        result = LocElem.const(self.dset, 1)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def inverse(self):
        """Invert by registering the (primitive part of the) numerator as a
        denominator generator."""
        if self.num.is_zero():
            raise ZeroDivisionError("cannot invert zero")
        idx, content = self.dset.register(self.num)
        den = [0] * (idx + 1)
        den[idx] = 1
        return LocElem(self.dset, self.den_poly() * (Fraction(1) / content), den)

    def __truediv__(self, other):
        if not isinstance(other, LocElem):
            return self * (Fraction(1) / _fr(other))
        return self * other.inverse()

    def __eq__(self, other):
        if not isinstance(other, LocElem):
            other = LocElem.const(self.dset, other)
        return (self - other).is_zero()

    def __hash__(self):
        raise TypeError("LocElem is not hashable")

    # -- calculus and evaluation ------------------------------------------

    def deriv(self, name):
        result = LocElem(self.dset, self.num.deriv(name), self.den)
        for i, e in enumerate(self.den):
            if e:
                bumped = list(_pad(self.den, i + 1))
                bumped[i] += 1
                result = result + LocElem(
                    self.dset,
                    self.num * self.dset.gens[i].deriv(name) * Fraction(-e),
                    bumped,
                )
        return result

    def evaluate(self, point):
        value = self.num.evaluate(point)
        for i, e in enumerate(self.den):
            if e:
                g = self.dset.gens[i].evaluate(point)
                if g == 0:
                    raise SingularPointError(
                        f"denominator generator {self.dset.gens[i]} vanishes"
                    )
                value /= g**e
        return value

    def constant_value(self):
        if not self.is_polynomial():
            raise ValueError("element has a nontrivial denominator")
        return self.num.constant_value()

    def total_degree(self):
        return self.num.total_degree()

    # -- presentation -------------------------------------------------------

    def __str__(self):
        if not self.den:
            return str(self.num)
        factors = []
        for i, e in enumerate(self.den):
            if e:
                factors.append(f"({self.dset.gens[i]})^-{e}")
        return f"({self.num})*" + "*".join(factors)

    def __repr__(self):
        return f"LocElem({self})"

    def to_json(self):
        data = self.num.to_json()
        data["denom"] = [
            {"gen_index": i, "power": e} for i, e in enumerate(self.den) if e
        ]
        return data

    @classmethod
    def from_json(cls, dset, data):
        num = Poly.from_json(data)
        den = [0] * len(dset)
        for d in data.get("denom", ()):
            den[d["gen_index"]] = d["power"]
        return cls(dset, num, den)


def poisson_bracket(basis, a, b):
    """Poisson bracket on S(g) extended to localized elements.

    ``basis`` must expose ``symbols`` (the variable tuple) and
    ``variable_bracket(u, v) -> Poly`` giving the Lie bracket of two basis
    variables as a linear polynomial.
    """
    if not isinstance(a, LocElem) or not isinstance(b, LocElem):
        raise TypeError("poisson_bracket expects LocElem operands")
    a._check(b)
    symbols = tuple(basis.symbols)
    if a.dset.vars != symbols:
        raise UniverseMismatch("variable universe is not the Lie basis")
    da = {v: a.deriv(v) for v in symbols}
    db = {v: b.deriv(v) for v in symbols}
    result = LocElem.const(a.dset, 0)
    for i, u in enumerate(symbols):
        for v in symbols[i + 1 :]:
            if (da[u].is_zero() or db[v].is_zero()) and (
                da[v].is_zero() or db[u].is_zero()
            ):
                continue
            braq = basis.variable_bracket(u, v)
            if braq.is_zero():
                continue
            cross = da[u] * db[v] - da[v] * db[u]
            if not cross.is_zero():
                result = result + cross * LocElem(a.dset, braq)
    return result
