"""U-projector for conjugation on n x n matrices (type A).

Coordinates are the matrix entries s_i_j.  Conjugation by a unipotent
upper-triangular group element differentiates to D_x(s) = s x - x s.
The invariant denominators are the lower-left corner minors d_k
(rows n-k+1..n, columns 1..k).  For a positive root beta = e_a - e_b
the slice numerator is a signed minor d_beta on rows {a, b+1, ..., n}
and columns 1..nu with nu = n - b + 1; it satisfies D_beta(d_beta) =
d_nu exactly, so Q_beta = -(-d_beta) ... = d_beta / d_nu is a slice.
The elements sent through the projector are the minors c_beta on the
last a rows and columns {1, ..., a-1, b}.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import permutations

from .genset import GeneratorSet
from .projector import Derivation, Projector, SlicePair
from .rootsystem import build_root_system
from .symfield import DenominatorSet, LocElem, Poly


def entry_name(i, j):
    """Variable name of the (i, j) matrix entry, 1-based."""
    return f"s_{i}_{j}"


def matrix_variables(n):
    return tuple(entry_name(i, j) for i in range(1, n + 1) for j in range(1, n + 1))


def _perm_sign(perm):
    sign = 1
    seen = [False] * len(perm)
    for i in range(len(perm)):
        if seen[i]:
            continue
        j = i
        length = 0
        while not seen[j]:
            seen[j] = True
            j = perm[j]
            length += 1
        if length % 2 == 0:
            sign = -sign
    return sign


def minor(variables, rows, cols):
    """Exact determinant of the submatrix s[rows, cols] as a Poly."""
    rows = list(rows)
    cols = list(cols)
    assert len(rows) == len(cols)
    k = len(rows)
    out = Poly(variables)
    for perm in permutations(range(k)):
        term = Poly.const(variables, _perm_sign(perm))
        for i in range(k):
            term = term * Poly.variable(
                variables, entry_name(rows[i], cols[perm[i]])
            )
        out = out + term
    return out


def root_to_pair(root_coeffs):
    """A positive root of A_{n-1} as the index pair (a, b), beta = e_a - e_b."""
    support = [i for i, c in enumerate(root_coeffs) if c]
    assert all(root_coeffs[i] == 1 for i in support)
    a = support[0] + 1
    b = support[-1] + 2
    return a, b


def conj_derivation(dset, x, label=""):
    """Derivation D_x(s_ij) = (s x - x s)_ij for a constant matrix x."""
    n = len(x)
    variables = dset.vars
    images = {}
    for i in range(1, n + 1):
        for j in range(1, n + 1):
            coeffs = {}
            for k in range(1, n + 1):
                c = x[k - 1][j - 1]
                if c:
                    name = entry_name(i, k)
                    coeffs[name] = coeffs.get(name, Fraction(0)) + c
                c = x[i - 1][k - 1]
                if c:
                    name = entry_name(k, j)
                    coeffs[name] = coeffs.get(name, Fraction(0)) - c
            images[entry_name(i, j)] = Poly.linear(variables, coeffs)
    return Derivation(dset, images, label=label)


def _unit_matrix(n, a, b):
    m = [[Fraction(0)] * n for _ in range(n)]
    m[a - 1][b - 1] = Fraction(1)
    return m


def matrix_elements(n):
    """Fundamental minors and per-root slice/orbit minors.

    Returns a dict with keys "d" (list of d_1..d_{n-1}), "d_beta",
    "c_beta" (maps (a, b) -> Poly) and "nu" (the fundamental index
    carrying d_beta)."""
    if n < 2:
        raise ValueError("need n >= 2")
    variables = matrix_variables(n)
    d = [
        minor(variables, range(n - k + 1, n + 1), range(1, k + 1))
        for k in range(1, n)
    ]
    d_beta = {}
    c_beta = {}
    nu = {}
    for a in range(1, n + 1):
        for b in range(a + 1, n + 1):
            k = n - b + 1
            rows = [a] + list(range(b + 1, n + 1))
            d_beta[(a, b)] = -minor(variables, rows, range(1, k + 1))
            cols = list(range(1, a)) + [b]
            c_beta[(a, b)] = minor(variables, range(n - a + 1, n + 1), cols)
            nu[(a, b)] = k
    return {"d": d, "d_beta": d_beta, "c_beta": c_beta, "nu": nu}


@dataclass
class ConjStage:
    pair: tuple  # (a, b)
    root: tuple  # simple-root coefficients
    nu: int
    derivation: object
    slice_pair: object


class ConjugationConstruction:
    """Builds the stage chain and the projector for conjugation on GL_n."""

    def __init__(self, n):
        self.n = n
        self.rs = build_root_system("A", n - 1)
        self.variables = matrix_variables(n)
        self.dset = DenominatorSet(self.variables)
        self.elements = matrix_elements(n)
        self.d = [LocElem(self.dset, p) for p in self.elements["d"]]
        d_inv = [x.inverse() for x in self.d]

        self.order = list(self.rs.positive_roots)  # height then lexicographic
        self.stages = []
        for root in self.order:
            a, b = root_to_pair(self.rs.coefficients(root))
            k = self.elements["nu"][(a, b)]
            deriv = conj_derivation(
                self.dset, _unit_matrix(n, a, b), label=f"D_s_{a}_{b}"
            )
            num = LocElem(self.dset, self.elements["d_beta"][(a, b)])
            q = num * d_inv[k - 1]
            sp = SlicePair(deriv, q, witness=(num, self.d[k - 1]))
            self.stages.append(
                ConjStage(pair=(a, b), root=root, nu=k, derivation=deriv,
                          slice_pair=sp)
            )
        # application order: the largest root first
        flat = [
            (st.derivation, st.slice_pair) for st in reversed(self.stages)
        ]
        self.projector = Projector(flat, dset=self.dset, check=True)

    def stage_of(self, root):
        root = tuple(root)
        for st in self.stages:
            if root in (st.root, st.pair, tuple(self.rs.coefficients(st.root))):
                return st
        raise KeyError(f"{root} is not a positive root here")

    def generator_set(self, verify=True):
        entries = []
        for i, x in enumerate(self.d):
            entries.append((f"d{i + 1}", x))
        for st in self.stages:
            a, b = st.pair
            c = LocElem(self.dset, self.elements["c_beta"][(a, b)])
            entries.append((f"P(c_{a}_{b})", self.projector.apply(c)))
        metadata = {
            "n": self.n,
            "count": len(entries),
            "expected_count": (self.n - 1) + len(self.order),
        }
        gs = GeneratorSet(entries, self.dset, metadata=metadata)
        if verify:
            gs.report = self.verify(gs)
        return gs

    def simple_derivations(self):
        out = []
        for i in range(1, self.n):
            out.append(
                conj_derivation(
                    self.dset, _unit_matrix(self.n, i, i + 1),
                    label=f"D_s_{i}_{i + 1}",
                )
            )
        return out

    def verify(self, gs, seed=0):
        from .projector import jacobian_rank, sample_regular_point, verify_invariance
        import random

        family = self.simple_derivations()
        checks = []
        for name, elem in gs.entries:
            rep = verify_invariance(elem, family)
            status = "pass" if all(
                c["status"] == "pass" for c in rep["checks"]
            ) else "fail"
            entry = {"name": f"invariance:{name}", "status": status}
            if status == "fail":
                entry["residues"] = [
                    c for c in rep["checks"] if c["status"] == "fail"
                ]
            checks.append(entry)
        rng = random.Random(seed)
        point = sample_regular_point(self.dset, rng)
        r = jacobian_rank(self.dset, gs.elements, point)
        checks.append(
            {
                "name": "jacobian_rank",
                "status": "pass" if r == len(gs) else "fail",
                "rank": r,
                "expected": len(gs),
            }
        )
        return {"checks": checks}


def q_beta(n, beta):
    """Slice pair of a positive root (as simple-root coefficients or an
    index pair)."""
    return ConjugationConstruction(n).stage_of(tuple(beta)).slice_pair


def conj_projector(n):
    """The composed projector and the verified generator set."""
    c = ConjugationConstruction(n)
    return c.projector, c.generator_set()
