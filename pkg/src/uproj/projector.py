"""Locally nilpotent derivation engine.

S-maps, composed projectors, slice-pair search by exact linear algebra,
invariance verification and the sampled cross-section checks.  Everything
here is exact; local nilpotency is a runtime contract enforced by an
iteration cap.
"""

from __future__ import annotations

from fractions import Fraction

from . import linalg
from .symfield import (
    LocElem,
    Poly,
    SingularPointError,
    UniverseMismatch,
    grevlex_key,
)


class NotLocallyNilpotent(RuntimeError):
    """The S-map expansion did not terminate within the iteration cap."""


class TriangularityError(ValueError):
    """A stage derivation fails to kill a later stage's slice element."""


class SliceSearchFailed(RuntimeError):
    """No slice pair within the degree cap; raise degree_cap and retry."""


class Derivation:
    """Derivation of a polynomial universe given by variable images.

    Images are polynomials; the action extends to localized elements by
    Leibniz and the quotient rule.
    """

    def __init__(self, dset, images, label=""):
        self.dset = dset
        self.label = label
        self.images = {}
        for v, img in images.items():
            if not isinstance(img, Poly):
                raise TypeError("derivation images must be polynomials")
            if not img.is_zero():
                self.images[v] = img

    @classmethod
    def from_lie_element(cls, basis, dset, x, label=None):
        """Poisson-bracket derivation a -> {x, a} for x in g."""
        images = {}
        for v in basis.symbols:
            acc = {}
            for u, cu in x.coefficients:
                for s, c in basis._bracket_symbols(u, v).coefficients:
                    acc[s] = acc.get(s, Fraction(0)) + cu * c
            images[v] = Poly.linear(basis.symbols, acc)
        return cls(dset, images, label=label or str(x))

    def apply(self, a):
        if isinstance(a, Poly):
            a = LocElem(self.dset, a)
        if a.dset is not self.dset:
            raise UniverseMismatch("element over a different denominator set")
        result = LocElem.const(self.dset, 0)
        for v, img in self.images.items():
            d = a.deriv(v)
            if not d.is_zero():
                result = result + d * LocElem(self.dset, img)
        return result

    def __repr__(self):
        return f"Derivation({self.label})"


class SlicePair:
    """Slice element q with D(q) = 1, with optional search witness."""

    def __init__(self, derivation, q, witness=None, normalize_sign=True):
        r = derivation.apply(q)
        if normalize_sign and r == LocElem.const(q.dset, -1):
            q = -q
            r = derivation.apply(q)
            if witness is not None:
                a1, a0 = witness
                witness = (a1, -a0)
        if not r == LocElem.const(q.dset, 1):
            raise ValueError(
                f"D(q) != 1 for {derivation.label}: got {r}"
            )
        self.q = q
        self.witness = witness  # (a1, a0) when produced by search

    def __repr__(self):
        return f"SlicePair({self.q})"


def smap(derivation, slice_pair, a, iter_cap=None):
    """Slice exponential: sum_k (-1)^k D^k(a) q^k / k!."""
    if isinstance(a, Poly):
        a = LocElem(derivation.dset, a)
    q = slice_pair.q
    if iter_cap is None:
        iter_cap = 10 * a.total_degree() + 16
    result = a
    cur = a
    qpow = LocElem.const(a.dset, 1)
    sign = 1
    fact = 1
    k = 0
    while True:
        cur = derivation.apply(cur)
        if cur.is_zero():
            return result
        k += 1
        if k > iter_cap:
            raise NotLocallyNilpotent(
                f"derivation {derivation.label} not locally nilpotent on input "
                f"(cap {iter_cap} exceeded)"
            )
        sign = -sign
        fact *= k
        qpow = qpow * q
        result = result + cur * qpow * Fraction(sign, fact)


class Projector:
    """Ordered stages (Derivation, SlicePair) applied as composed S-maps.

    Stages are listed in application order: the first stage acts first.
    Construction verifies the triangular ledger: the derivation of each
    stage kills the slice elements of all later stages exactly, and maps
    its own slice to 1.
    """

    def __init__(self, stages, dset=None, check=True):
        self.stages = list(stages)
        if dset is None and self.stages:
            dset = self.stages[0][0].dset
        self.dset = dset
        if check:
            self.check_triangularity()

    def check_triangularity(self):
        for i, (d_i, _) in enumerate(self.stages):
            for j, (_, s_j) in enumerate(self.stages):
                if j < i:
                    continue
                r = d_i.apply(s_j.q)
                expected = 1 if i == j else 0
                if not r == LocElem.const(s_j.q.dset, expected):
                    raise TriangularityError(
                        f"stage {i} ({d_i.label}) on slice of stage {j}: "
                        f"expected {expected}, got {r}"
                    )

    def apply(self, a, iter_cap=None):
        if isinstance(a, Poly):
            a = LocElem(self.dset, a)
        for d, s in self.stages:
            a = smap(d, s, a, iter_cap=iter_cap)
        return a

    @property
    def derivations(self):
        return [d for d, _ in self.stages]

    @property
    def witnesses(self):
        return [s.witness[0] for _, s in self.stages if s.witness]


def compose_projector(stages, dset=None):
    """Build a Projector; rejects stage lists violating triangularity."""
    return Projector(stages, dset=dset, check=True)


def _monomials_up_to(nvars, cap):
    """Exponent tuples of total degree 1..cap, canonical grevlex order."""
    result = []

    def rec(prefix, remaining, budget):
        if remaining == 0:
            if any(prefix):
                result.append(tuple(prefix))
            return
        for e in range(budget + 1):
            rec(prefix + [e], remaining - 1, budget - e)

    rec([], nvars, cap)
    result.sort(key=grevlex_key)
    return result


def find_slice_pair(family, derivation, degree_cap, dset=None):
    """Search a1 with D(a1) = a0 != 0 and a0 killed by the whole family.

    Exact linear algebra over the coefficient space of polynomials of
    total degree <= degree_cap.  Returns a SlicePair with q = a1/a0.
    """
    dset = dset or derivation.dset
    nvars = len(dset.vars)

    def poly_of(exp):
        return Poly(dset.vars, {exp: Fraction(1)})

    for cap in range(1, degree_cap + 1):
        monos = _monomials_up_to(nvars, cap)
        d_images = []
        rows_index = {}
        rows = []  # one row per (derivation, output monomial)
        columns = []
        for exp in monos:
            da = derivation.apply(poly_of(exp))
            assert da.is_polynomial(), "slice search needs polynomial images"
            d_images.append(da.num)
            col = {}
            for y_idx, y in enumerate(family):
                out = y.apply(LocElem(dset, da.num))
                assert out.is_polynomial()
                for oexp, c in out.num.terms.items():
                    key = (y_idx, oexp)
                    if key not in rows_index:
                        rows_index[key] = len(rows)
                        rows.append({})
                    col[rows_index[key]] = c
            columns.append(col)
        matrix = [
            [columns[j].get(i, Fraction(0)) for j in range(len(monos))]
            for i in range(len(rows))
        ]
        for vec in linalg.nullspace(matrix, ncols=len(monos)):
            a0 = Poly(dset.vars)
            for c, img in zip(vec, d_images):
                if c:
                    a0 = a0 + img * c
            if a0.is_zero():
                continue
            a1 = Poly(dset.vars)
            for c, exp in zip(vec, monos):
                if c:
                    a1 = a1 + poly_of(exp) * c
            a1 = LocElem(dset, a1)
            a0 = LocElem(dset, a0)
            q = a1 * a0.inverse()
            return SlicePair(derivation, q, witness=(a1, a0))
    raise SliceSearchFailed(
        f"no slice pair for {derivation.label} within degree cap {degree_cap}; "
        "raise degree_cap"
    )


def verify_invariance(a, family):
    """Exact symbolic check D(a) = 0 for each derivation in the family."""
    checks = []
    for d in family:
        residue = d.apply(a)
        checks.append(
            {
                "name": f"invariance:{d.label}",
                "status": "pass" if residue.is_zero() else "fail",
                **({} if residue.is_zero() else {"residue": str(residue)}),
            }
        )
    return {"checks": checks}


def all_pass(report):
    return all(c["status"] == "pass" for c in report["checks"])


def _random_point(rng, names, lo=-9, hi=9):
    return {v: Fraction(rng.randint(lo, hi)) for v in names}


def sample_regular_point(dset, rng, extra=(), attempts=200):
    """Random integer point where all denominator generators (and any extra
    polynomials) are nonzero."""
    targets = list(dset.gens) + list(extra)
    for _ in range(attempts):
        point = _random_point(rng, dset.vars)
        if all(g.evaluate(point) != 0 for g in targets):
            return point
    raise RuntimeError("could not sample a regular point")


def jacobian_rank(dset, elements, point):
    """Exact rank of the Jacobian of localized elements at a point."""
    rows = []
    for a in elements:
        if isinstance(a, Poly):
            a = LocElem(dset, a)
        rows.append([a.deriv(v).evaluate(point) for v in dset.vars])
    return linalg.rank(rows)


def _sample_sigma_point(dset, witnesses, rng, attempts):
    """A rational point where every witness numerator vanishes and every
    denominator generator is nonzero, or None."""
    names = list(dset.vars)
    linear = []
    nonlinear = []
    for w in witnesses:
        if w.num.total_degree() <= 1:
            linear.append(w.num)
        else:
            nonlinear.append(w.num)
    for _ in range(attempts):
        point = _random_point(rng, names)
        if linear:
            # resolve the linear constraints exactly, keeping the random
            # values for the free coordinates
            rows = []
            rhs = []
            for p in linear:
                row = [p.deriv(v).constant_value() for v in names]
                c = Fraction(0)
                zero = {v: Fraction(0) for v in names}
                c = p.evaluate(zero)
                rows.append(row)
                rhs.append(-c)
            _, pivots = linalg.rref(rows)
            pivot_names = [names[c] for c in pivots]
            adjusted = dict(point)
            # solve for pivot variables given the random free values
            sub_rows = [[row[names.index(v)] for v in pivot_names] for row in rows]
            sub_rhs = []
            for row, c in zip(rows, rhs):
                s = c
                for v, coef in zip(names, row):
                    if v not in pivot_names:
                        s -= coef * point[v]
                sub_rhs.append(s)
            sol = linalg.solve(sub_rows, sub_rhs)
            if sol is None:
                continue
            for v, val in zip(pivot_names, sol):
                adjusted[v] = val
            point = adjusted
        if any(p.evaluate(point) != 0 for p in nonlinear):
            continue
        if any(g.evaluate(point) == 0 for g in dset.gens):
            continue
        return point
    return None


def cross_section_check(projector, witnesses, candidates, trials=10, seed=0):
    """Sampled necessary conditions for free generation.

    (i) P acts as the identity at sampled points of the cross-section
    (all witnesses vanish, denominators regular); (ii) the Jacobian of the
    projected candidates together with the denominator generators has full
    rank at a random regular point.  The ideal-generation hypothesis is
    not decidable here; checks are reported as necessary conditions only.
    """
    import random

    rng = random.Random(seed)
    dset = projector.dset
    checks = []

    projected = [projector.apply(b) for b in candidates]

    found = 0
    for t in range(trials):
        point = _sample_sigma_point(dset, witnesses, rng, attempts=50)
        if point is None:
            break
        found += 1
        for b, pb in zip(candidates, projected):
            try:
                lhs = pb.evaluate(point)
                rhs = b.evaluate(point)
            except SingularPointError:
                continue
            ok = lhs == rhs
            checks.append(
                {
                    "name": f"res_identity:trial{t}",
                    "status": "pass" if ok else "fail",
                    **({} if ok else {"residue": str(lhs - rhs)}),
                }
            )
            if not ok:
                break
    if found < trials:
        checks.append(
            {
                "name": "sigma_sampling",
                "status": "inconclusive",
                "detail": f"found {found} of {trials} requested points",
            }
        )

    if not candidates:
        checks.append(
            {"name": "jacobian_rank", "status": "pass", "rank": 0, "expected": 0}
        )
    else:
        elems = list(projected)
        for g in dset.gens:
            cand = LocElem(dset, g)
            if not any(cand == e for e in elems):
                elems.append(cand)
        point = sample_regular_point(dset, rng)
        r = jacobian_rank(dset, elems, point)
        checks.append(
            {
                "name": "jacobian_rank",
                "status": "pass" if r == len(elems) else "fail",
                "rank": r,
                "expected": len(elems),
            }
        )
    checks.append(
        {
            "name": "ideal_generation_hypothesis",
            "status": "inconclusive",
            "detail": "necessary conditions only; not decided symbolically",
        }
    )
    return {"checks": checks}
