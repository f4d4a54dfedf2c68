"""Fox calculus and Wada's twisted Alexander invariant.

For a deficiency-one presentation ``<x_1..x_n | r_1..r_{n-1}>``, a hom ``f``
into a finite group ``G`` acting on ``d`` points and the abelianization
``phi``, every group ring element ``u`` is sent to the ``d x d`` block
``t^phi(u) P(f(u))`` where ``P(g)`` is the permutation matrix with
``P[a, a.g] = 1``.  Wada's invariant is ``det(A) / det(Phi(x_j*) - I)`` where
``A`` is the block matrix of ``Phi(d r_i / d x_j)`` over ``j != j*``.  The
denominator is a product of ``(t^(e c) - 1)`` factors, one per cycle of
``P(f(x_j*))``, so it never vanishes and the invariant is zero exactly when the
numerator determinant is.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field

from .det import ZeroTest, det_exact, det_is_zero
from .epi import GroupHom, validate_hom
from .errors import NormalizationFailure, NotDivisible
from .groups import natural_action, perm_cycles, regular_action
from .knots import free_reduce, phi_of
from .laurent import ONE, T, LaurentPoly, PolyMatrix, exact_divide, lp_unit_normalize


# -- group ring --------------------------------------------------------------

class GroupRingElement:
    """Integer combination of freely reduced words."""

    __slots__ = ("terms",)

    def __init__(self, terms=None):
        acc = defaultdict(int)
        for w, c in (terms.items() if isinstance(terms, dict) else terms or ()):
            acc[free_reduce(w)] += c
        self.terms = {w: c for w, c in acc.items() if c}

    @classmethod
    def word(cls, w, coeff=1):
        return cls({tuple(w): coeff})

    @classmethod
    def one(cls):
        return cls.word(())

    def __add__(self, other):
        acc = dict(self.terms)
        for w, c in other.terms.items():
            acc[w] = acc.get(w, 0) + c
        return GroupRingElement(acc)

    def __neg__(self):
        return GroupRingElement({w: -c for w, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        acc = defaultdict(int)
        for u, a in self.terms.items():
            for v, b in other.terms.items():
                acc[free_reduce(u + v)] += a * b
        return GroupRingElement(acc)

    def __eq__(self, other):
        return isinstance(other, GroupRingElement) and self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __repr__(self):
        if not self.terms:
            return "0"
        return " + ".join(f"{c}*{list(w)}" for w, c in sorted(self.terms.items()))


def fox_derivative(word, j):
    """d word / d x_j, via d(uv) = du + u dv."""
    terms = defaultdict(int)
    prefix = []
    for x in word:
        if x == j:
            terms[tuple(prefix)] += 1
            prefix.append(x)
        elif x == -j:
            prefix.append(x)
            terms[tuple(prefix)] -= 1
        else:
            prefix.append(x)
    return GroupRingElement(terms)


# -- setup -----------------------------------------------------------------

@dataclass
class TwistedSetup:
    presentation: object
    group: object
    hom: GroupHom
    action: str = "regular"
    perms: list = field(default=None, repr=False)
    pivot: int = 0

    @classmethod
    def build(cls, presentation, group, images, action="regular"):
        hom = images if isinstance(images, GroupHom) else validate_hom(presentation, group, images)
        if hom.group is not group:
            hom = validate_hom(presentation, group, hom.images)
        if action == "regular":
            perms = regular_action(group)
        elif action == "natural":
            perms = natural_action(group)
        else:
            raise ValueError(f"unknown action {action!r}")
        pivot = next(i for i, v in enumerate(presentation.phi) if v != 0) + 1
        return cls(presentation, group, hom, action, perms, pivot)

    @property
    def degree(self):
        return len(self.perms[0])

    def element(self, word):
        return self.group.evaluate_word(self.hom.images, word)

    def block(self, e):
        """Phi(e) as a dict {(row, col): {exponent: coeff}} for one block."""
        out = defaultdict(lambda: defaultdict(int))
        for w, c in e.terms.items():
            p = self.perms[self.element(w)]
            ex = phi_of(w, self.presentation.phi)
            for a in range(len(p)):
                out[(a, p[a])][ex] += c
        return out


def phi_map(e, setup):
    d = setup.degree
    blk = setup.block(e)
    return [[LaurentPoly(blk[(a, b)]) if (a, b) in blk else LaurentPoly() for b in range(d)]
            for a in range(d)]


def _prefix_terms(r):
    """Fox derivatives of r as (generator, coeff, prefix length) triples."""
    out = []
    for k, x in enumerate(r):
        if x > 0:
            out.append((x, 1, k))
        else:
            out.append((-x, -1, k + 1))
    return out


def wada_matrix(setup):
    """(numerator PolyMatrix, denominator LaurentPoly)."""
    p, G = setup.presentation, setup.group
    d = setup.degree
    cols = [j for j in range(1, p.ngens + 1) if j != setup.pivot]
    colpos = {j: k for k, j in enumerate(cols)}
    side = len(cols) * d
    entries = [defaultdict(lambda: defaultdict(int)) for _ in range(side)]
    t, inv = G.table, G.inverses
    images = setup.hom.images
    phi = p.phi
    for i, r in enumerate(p.relators):
        pre_g = [G.identity]
        pre_e = [0]
        for x in r:
            a = images[abs(x) - 1]
            pre_g.append(t[pre_g[-1]][a if x > 0 else inv[a]])
            pre_e.append(pre_e[-1] + (phi[abs(x) - 1] if x > 0 else -phi[abs(x) - 1]))
        for j, c, k in _prefix_terms(r):
            if j == setup.pivot:
                continue
            perm = setup.perms[pre_g[k]]
            ex = pre_e[k]
            r0, c0 = i * d, colpos[j] * d
            for a in range(d):
                entries[r0 + a][c0 + perm[a]][ex] += c
    zero = LaurentPoly()
    rows = []
    for row in entries:
        dense = [zero] * side
        for col, terms in row.items():
            poly = LaurentPoly(terms)
            if not poly.is_zero():
                dense[col] = poly
        rows.append(dense)
    num = PolyMatrix(rows, side, side)
    return num, denominator(setup)


def denominator(setup):
    """det(t^e P - I) from the cycle type of P = P(f(x_pivot))."""
    e = setup.presentation.phi[setup.pivot - 1]
    perm = setup.perms[setup.hom.images[setup.pivot - 1]]
    out = ONE
    for cyc in perm_cycles(perm):
        c = len(cyc)
        # det(x C - I) = (-1)^(c+1) (x^c - 1) for a c-cycle C
        out = out * (LaurentPoly.monomial(1, e * c) - ONE) * (-1) ** (c + 1)
    return out


@dataclass
class TwistedResult:
    zero: bool
    test: ZeroTest | None
    numerator: LaurentPoly | None = None
    denominator: LaurentPoly | None = None
    quotient: LaurentPoly | None = None

    def normal_form(self):
        """Unit-normalized numerator/denominator (quotient when divisible)."""
        if self.zero:
            return None
        if self.quotient is not None:
            return lp_unit_normalize(self.quotient)
        return lp_unit_normalize(self.numerator), lp_unit_normalize(self.denominator)

    def describe(self):
        if self.zero:
            return "0"
        if self.numerator is None:
            return "nonzero"
        if self.quotient is not None:
            return str(lp_unit_normalize(self.quotient).poly)
        return (f"({lp_unit_normalize(self.numerator).poly}) / "
                f"({lp_unit_normalize(self.denominator).poly})")


def twisted_alexander(setup, mode="certify", threads=1, primes=None, seed=None,
                      polynomial=True):
    """Vanishing verdict; with ``polynomial`` a NonZero result carries the exact
    numerator determinant and the quotient by the denominator when it divides."""
    num, den = wada_matrix(setup)
    test = det_is_zero(num, mode=mode, primes=primes, seed=seed, threads=threads)
    if mode == "screen" and test.zero:
        test = det_is_zero(num, mode="certify", threads=threads)
    if test.zero:
        return TwistedResult(True, test, denominator=den)
    res = TwistedResult(False, test, denominator=den)
    if polynomial:
        res.numerator = det_exact(num, threads=threads)
        try:
            res.quotient = exact_divide(res.numerator, den)
        except NotDivisible:
            res.quotient = None
    return res


def wada_invariant(setup, threads=1):
    """(numerator determinant, denominator) exactly."""
    num, den = wada_matrix(setup)
    return det_exact(num, threads=threads), den


def trivial_setup(p):
    from .groups import FiniteGroup
    G = FiniteGroup(1, [])
    return TwistedSetup.build(p, G, [0] * p.ngens)


def classical_alexander(p):
    """Alexander polynomial, unit-normalized, from the trivial-group Wada invariant."""
    setup = trivial_setup(p)
    num, den = wada_invariant(setup)
    delta = exact_divide(num * (T - ONE), den)
    norm = lp_unit_normalize(delta).poly
    if abs(norm.evaluate(1)) != 1:
        raise NormalizationFailure(f"{p.name}: Delta(1) = {norm.evaluate(1)}, expected +-1")
    return norm
