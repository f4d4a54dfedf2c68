"""Integer Laurent polynomials in one variable ``t`` and matrices over them.

Coefficients are Python integers, so arithmetic never rounds.  A polynomial is
stored as a mapping ``exponent -> coefficient`` with no zero coefficients; the
zero polynomial has no terms.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction

from .errors import NotDivisible, ZeroAtNegativeExponent


class LaurentPoly:
    __slots__ = ("_terms", "_hash")

    def __init__(self, terms=None):
        clean = {}
        if terms:
            items = terms.items() if isinstance(terms, dict) else terms
            for e, c in items:
                c = int(c)
                if c:
                    e = int(e)
                    c += clean.get(e, 0)
                    if c:
                        clean[e] = c
                    else:
                        clean.pop(e, None)
        self._terms = clean
        self._hash = None

    @classmethod
    def _raw(cls, terms):
        # caller guarantees no zero coefficients
        p = cls.__new__(cls)
        p._terms = terms
        p._hash = None
        return p

    @classmethod
    def monomial(cls, coeff=1, exp=0):
        return cls._raw({exp: coeff} if coeff else {})

    @classmethod
    def const(cls, c):
        return cls.monomial(c, 0)

    @classmethod
    def from_coeffs(cls, coeffs, shift=0):
        """Build ``sum coeffs[i] t^(i+shift)``."""
        return cls((i + shift, c) for i, c in enumerate(coeffs))

    # -- inspection -------------------------------------------------------

    @property
    def terms(self):
        return dict(self._terms)

    def items(self):
        return sorted(self._terms.items())

    def is_zero(self):
        return not self._terms

    def is_monomial(self):
        return len(self._terms) == 1

    def degree(self):
        if not self._terms:
            raise ValueError("zero polynomial has no degree")
        return max(self._terms)

    def valuation(self):
        if not self._terms:
            raise ValueError("zero polynomial has no valuation")
        return min(self._terms)

    def span(self):
        return self.degree() - self.valuation() if self._terms else 0

    def coeff(self, e):
        return self._terms.get(e, 0)

    def leading_coeff(self):
        return self._terms[self.degree()]

    def coefficient_list_from_zero(self):
        """Coefficients of a polynomial with non-negative exponents, from t^0 upward."""
        if not self._terms:
            return []
        hi = max(self._terms)
        return [self._terms.get(e, 0) for e in range(hi + 1)]

    def coefficient_list(self):
        """Coefficients from the valuation up to the degree."""
        if not self._terms:
            return []
        lo, hi = self.valuation(), self.degree()
        return [self._terms.get(e, 0) for e in range(lo, hi + 1)]

    # -- arithmetic -------------------------------------------------------

    def __add__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        out = dict(self._terms)
        for e, c in other._terms.items():
            s = out.get(e, 0) + c
            if s:
                out[e] = s
            else:
                out.pop(e, None)
        return LaurentPoly._raw(out)

    __radd__ = __add__

    def __neg__(self):
        return LaurentPoly._raw({e: -c for e, c in self._terms.items()})

    def __sub__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        return other + (-self)

    def __mul__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        if not self._terms or not other._terms:
            return ZERO
        out = {}
        for e1, c1 in self._terms.items():
            for e2, c2 in other._terms.items():
                e = e1 + e2
                out[e] = out.get(e, 0) + c1 * c2
        return LaurentPoly._raw({e: c for e, c in out.items() if c})

    __rmul__ = __mul__

    def __pow__(self, k):
        if k < 0:
            if not self.is_monomial() or abs(self.leading_coeff()) != 1:
                raise ValueError("only units can be raised to negative powers")
            (e, c), = self._terms.items()
            return LaurentPoly._raw({e * k: c ** (-k)})
        result = ONE
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def shift(self, k):
        """Multiply by ``t^k``."""
        return LaurentPoly._raw({e + k: c for e, c in self._terms.items()})

    def substitute_power(self, k):
        """Return p(t^k)."""
        if k == 0:
            return LaurentPoly.const(sum(self._terms.values()))
        return LaurentPoly._raw({e * k: c for e, c in self._terms.items()})

    def __eq__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return False
        return self._terms == other._terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self._terms.items()))
        return self._hash

    def __bool__(self):
        return bool(self._terms)

    # -- evaluation -------------------------------------------------------

    def evaluate(self, x, modulus=None):
        return lp_eval(self, x, modulus)

    __call__ = evaluate

    # -- normal forms and division ---------------------------------------

    def unit_normal(self):
        return lp_unit_normalize(self)

    def equals_up_to_units(self, other):
        return lp_unit_normalize(self).poly == lp_unit_normalize(other).poly

    def __repr__(self):
        return f"LaurentPoly({format_laurent(self)!r})"

    def __str__(self):
        return format_laurent(self)


def _coerce(x):
    if isinstance(x, LaurentPoly):
        return x
    if isinstance(x, int):
        return LaurentPoly.const(x)
    return NotImplemented


ZERO = LaurentPoly._raw({})
ONE = LaurentPoly._raw({0: 1})
T = LaurentPoly._raw({1: 1})


def lp_arith(a, b, op):
    """Exact ring operation ``op`` in {"add", "sub", "mul"}."""
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    raise ValueError(f"unknown operation {op!r}")


@dataclass(frozen=True)
class UnitNormalForm:
    """``original == sign * t**shift * poly`` with ``poly`` normalized."""

    poly: LaurentPoly
    shift: int
    sign: int

    def restore(self):
        return (self.poly * self.sign).shift(self.shift)


def lp_unit_normalize(p):
    if p.is_zero():
        return UnitNormalForm(ZERO, 0, 1)
    v = p.valuation()
    sign = 1 if p.leading_coeff() > 0 else -1
    poly = p.shift(-v)
    if sign < 0:
        poly = -poly
    return UnitNormalForm(poly, v, sign)


def lp_eval(p, x, modulus=None):
    """Evaluate exactly at ``x``.

    With ``modulus`` the computation happens in the integers mod that prime;
    otherwise ``x`` may be an int or a Fraction and the result is exact.
    """
    terms = p._terms
    if not terms:
        return 0 if modulus is None else 0
    has_negative = min(terms) < 0
    if modulus is not None:
        xm = x % modulus
        if xm == 0 and has_negative:
            raise ZeroAtNegativeExponent("cannot evaluate negative powers at 0")
        total = 0
        for e, c in terms.items():
            total += c * pow(xm, e, modulus)
        return total % modulus
    if x == 0 and has_negative:
        raise ZeroAtNegativeExponent("cannot evaluate negative powers at 0")
    if isinstance(x, int) and not has_negative:
        return _horner_int(p, x)
    x = Fraction(x)
    total = Fraction(0)
    for e, c in terms.items():
        total += c * x ** e
    return total.numerator if total.denominator == 1 else total


def _horner_int(p, x):
    coeffs = p.coefficient_list()
    acc = 0
    for c in reversed(coeffs):
        acc = acc * x + c
    return acc * x ** p.valuation()


def _poly_divmod_q(num, den):
    """Polynomial long division over Q; inputs are coefficient lists (low to high)."""
    num = [Fraction(c) for c in num]
    den = [Fraction(c) for c in den]
    while den and den[-1] == 0:
        den.pop()
    if not den:
        raise ZeroDivisionError("division by zero polynomial")
    q = [Fraction(0)] * max(len(num) - len(den) + 1, 1)
    r = list(num)
    lead = den[-1]
    for k in range(len(num) - len(den), -1, -1):
        c = r[k + len(den) - 1] / lead
        q[k] = c
        if c:
            for i, d in enumerate(den):
                r[k + i] -= c * d
    return q, r


def divides_over_q(a, b):
    """True iff ``b`` divides ``a`` in Q[t, t^-1] (``b`` nonzero)."""
    if b.is_zero():
        raise ZeroDivisionError("division by zero polynomial")
    if a.is_zero():
        return True
    _, r = _poly_divmod_q(a.coefficient_list(), b.coefficient_list())
    return not any(r)


def exact_divide(a, b):
    """Quotient ``a / b`` in Z[t, t^-1]; raises NotDivisible otherwise."""
    if b.is_zero():
        raise ZeroDivisionError("division by zero polynomial")
    if a.is_zero():
        return ZERO
    q, r = _poly_divmod_q(a.coefficient_list(), b.coefficient_list())
    if any(r) or any(c.denominator != 1 for c in q):
        raise NotDivisible(f"{b} does not divide {a} over the integers")
    return LaurentPoly.from_coeffs([int(c) for c in q], a.valuation() - b.valuation())


def equal_up_to_units(a, b):
    return lp_unit_normalize(a).poly == lp_unit_normalize(b).poly


# -- text form -------------------------------------------------------------

def format_laurent(p, var="t"):
    if p.is_zero():
        return "0"
    parts = []
    for e, c in sorted(p._terms.items(), reverse=True):
        sign = "-" if c < 0 else "+"
        a = abs(c)
        if e == 0:
            body = str(a)
        else:
            mono = var if e == 1 else f"{var}^{e}" if e > 0 else f"{var}^({e})"
            body = mono if a == 1 else f"{a}*{mono}"
        parts.append((sign, body))
    first_sign, first = parts[0]
    out = ("-" if first_sign == "-" else "") + first
    for sign, body in parts[1:]:
        out += f" {sign} {body}"
    return out


_TERM = re.compile(r"([+-]?)\s*(\d*)\s*\*?\s*(t(?:\s*\^\s*\(?\s*(-?\d+)\s*\)?)?)?")


def parse_laurent(text):
    """Parse strings such as ``"t^2 - 3*t + 1"`` or ``"2t^(-1) + 5"``."""
    s = text.replace(" ", "")
    if s in ("", "0"):
        return ZERO
    terms = {}
    pos = 0
    while pos < len(s):
        m = _TERM.match(s, pos)
        if not m or m.end() == pos:
            raise ValueError(f"cannot parse Laurent polynomial {text!r} at {pos}")
        sign, digits, tpart, exp = m.groups()
        if not digits and not tpart:
            raise ValueError(f"cannot parse Laurent polynomial {text!r} at {pos}")
        c = int(digits) if digits else 1
        if sign == "-":
            c = -c
        e = 0
        if tpart:
            e = int(exp) if exp is not None else 1
        terms[e] = terms.get(e, 0) + c
        pos = m.end()
    return LaurentPoly(terms)


# -- matrices ----------------------------------------------------------------

class PolyMatrix:
    """Dense ``rows x cols`` matrix of LaurentPoly entries."""

    __slots__ = ("rows", "cols", "entries")

    def __init__(self, entries, rows=None, cols=None):
        entries = [[e if isinstance(e, LaurentPoly) else LaurentPoly.const(e) for e in row]
                   for row in entries]
        self.rows = len(entries) if rows is None else rows
        self.cols = (len(entries[0]) if entries else 0) if cols is None else cols
        if len(entries) != self.rows or any(len(r) != self.cols for r in entries):
            raise ValueError("ragged matrix")
        self.entries = entries

    @classmethod
    def zeros(cls, rows, cols):
        return cls([[ZERO] * cols for _ in range(rows)], rows, cols)

    def is_square(self):
        return self.rows == self.cols

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i][j]

    def row_bounds(self):
        """Per-row (min exponent, max exponent); ``None`` for all-zero rows."""
        out = []
        for row in self.entries:
            nz = [e for e in row if not e.is_zero()]
            if not nz:
                out.append(None)
            else:
                out.append((min(e.valuation() for e in nz), max(e.degree() for e in nz)))
        return out

    def cleared(self):
        """Shift every row so its minimal exponent is 0.

        Returns ``(sparse_rows, shift, span, zero_row)`` where ``sparse_rows[i]``
        lists ``(column, coefficient list)`` pairs of plain polynomials, ``shift``
        is the total exponent removed (the determinant of the original equals
        ``t^shift`` times that of the cleared matrix), and ``span`` is the sum of
        per-row degree spans, an upper bound on the cleared determinant's degree.
        """
        sparse, shift, span, zero_row = [], 0, 0, False
        for row, bounds in zip(self.entries, self.row_bounds()):
            if bounds is None:
                zero_row = True
                sparse.append([])
                continue
            lo, hi = bounds
            shift += lo
            span += hi - lo
            sparse.append([(j, e.shift(-lo).coefficient_list_from_zero())
                           for j, e in enumerate(row) if not e.is_zero()])
        return sparse, shift, span, zero_row

    def __eq__(self, other):
        return (isinstance(other, PolyMatrix) and self.rows == other.rows
                and self.cols == other.cols and self.entries == other.entries)

    def __repr__(self):
        return f"PolyMatrix({self.rows}x{self.cols})"

