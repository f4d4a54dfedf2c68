"""Determinants of Laurent-polynomial matrices.

Three engines share one evaluation scheme:

* ``det_exact``: clear each row's lowest power of ``t``, evaluate the resulting
  polynomial matrix at ``span + 1`` integer points with exact integer
  determinants, interpolate, and restore the removed unit.
* ``det_is_zero(mode="certify")``: the same exact evaluations, stopping at the
  first nonzero value.  ``span + 1`` zero values prove the determinant is the
  zero polynomial, because it has degree at most ``span``.
* ``det_is_zero(mode="screen")``: evaluations modulo word-size primes at random
  residues.  Only a nonzero answer is a proof; zeros are escalated by callers.
"""

from __future__ import annotations

import random
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction

import flint

from . import config
from .errors import InterpolationError, NotSquare
from .laurent import ZERO, LaurentPoly


# -- integer kernels --------------------------------------------------------

def bareiss_det(rows):
    """Exact determinant by single-step fraction-free elimination."""
    n = len(rows)
    if n == 0:
        return 1
    a = [list(r) for r in rows]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k] != 0:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return 0
        akk = a[k][k]
        rk = a[k]
        for i in range(k + 1, n):
            ri = a[i]
            aik = ri[k]
            for j in range(k + 1, n):
                # exact by Sylvester's identity
                ri[j] = (akk * ri[j] - aik * rk[j]) // prev
            ri[k] = 0
        prev = akk
    return sign * a[n - 1][n - 1]


def det_mod_p(rows, p):
    """Determinant modulo a prime by Gaussian elimination."""
    n = len(rows)
    a = [[x % p for x in r] for r in rows]
    det = 1
    for k in range(n):
        piv = next((i for i in range(k, n) if a[i][k]), None)
        if piv is None:
            return 0
        if piv != k:
            a[k], a[piv] = a[piv], a[k]
            det = -det
        akk = a[k][k]
        det = det * akk % p
        inv = pow(akk, -1, p)
        rk = a[k]
        for i in range(k + 1, n):
            ri = a[i]
            f = ri[k] * inv % p
            if f:
                for j in range(k + 1, n):
                    ri[j] = (ri[j] - f * rk[j]) % p
    return det % p


def int_det(rows, kernel="auto"):
    n = len(rows)
    if kernel == "bareiss" or (kernel == "auto" and n <= config.SMALL_DET_SIZE):
        return bareiss_det(rows)
    if n == 0:
        return 1
    return int(flint.fmpz_mat(rows).det())


def int_det_mod(rows, p, kernel="auto"):
    n = len(rows)
    if kernel == "bareiss" or (kernel == "auto" and n <= config.SMALL_DET_SIZE):
        return det_mod_p(rows, p)
    if n == 0:
        return 1 % p
    return int(flint.nmod_mat([[x % p for x in r] for r in rows], p).det())


# -- evaluation of cleared matrices -------------------------------------------

def _eval_rows(sparse, n, x, modulus=None):
    out = []
    for row in sparse:
        r = [0] * n
        for j, coeffs in row:
            acc = 0
            for c in reversed(coeffs):
                acc = acc * x + c
            r[j] = acc if modulus is None else acc % modulus
        out.append(r)
    return out


def _check_square(m):
    if not m.is_square():
        raise NotSquare(f"matrix is {m.rows}x{m.cols}")


def certify_points(span):
    """The integer points used by exact engines: 2, 3, ..., span + 2."""
    return list(range(2, span + 3))


def _map(fn, items, threads):
    if threads and threads > 1 and len(items) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            return list(pool.map(fn, items))
    return [fn(x) for x in items]


def interpolate(points, values):
    """Coefficients (low to high) of the unique polynomial of degree < len(points)
    through the given points; raises if they are not integers."""
    m = len(points)
    dd = [Fraction(v) for v in values]
    for level in range(1, m):
        for i in range(m - 1, level - 1, -1):
            dd[i] = (dd[i] - dd[i - 1]) / (points[i] - points[i - level])
    # expand Newton form from the innermost coefficient outwards
    coeffs = [Fraction(0)]
    for i in range(m - 1, -1, -1):
        shifted = [Fraction(0)] + coeffs
        for k in range(len(coeffs)):
            shifted[k] -= points[i] * coeffs[k]
        shifted[0] += dd[i]
        coeffs = shifted
    while len(coeffs) > 1 and coeffs[-1] == 0:
        coeffs.pop()
    if any(c.denominator != 1 for c in coeffs):
        raise InterpolationError("interpolated determinant has non-integer coefficients")
    return [int(c) for c in coeffs]


def det_exact(m, threads=1, kernel="auto"):
    """Exact determinant of a square PolyMatrix."""
    _check_square(m)
    n = m.rows
    if n == 0:
        return LaurentPoly.const(1)
    sparse, shift, span, zero_row = m.cleared()
    if zero_row:
        return ZERO
    points = certify_points(span)
    values = _map(lambda x: int_det(_eval_rows(sparse, n, x), kernel), points, threads)
    return LaurentPoly.from_coeffs(interpolate(points, values), shift)


# -- zero testing ----------------------------------------------------------

@dataclass
class ZeroTest:
    """Verdict of a zero test together with everything needed to re-check it."""

    zero: bool
    mode: str
    size: int
    span: int
    shift: int
    points: list = field(default_factory=list)
    values: list = field(default_factory=list)
    primes: list = field(default_factory=list)
    seed: int | None = None
    witness: dict | None = None
    zero_row: bool = False

    def to_dict(self):
        return {
            "zero": self.zero, "mode": self.mode, "size": self.size,
            "span": self.span, "shift": self.shift,
            "points": list(self.points),
            "values": ([str(v) for v in self.values] if self.mode == "certify"
                       else [list(v) for v in self.values]),
            "primes": list(self.primes), "seed": self.seed,
            "witness": self.witness, "zero_row": self.zero_row,
        }

    @classmethod
    def from_dict(cls, d):
        return cls(zero=d["zero"], mode=d["mode"], size=d["size"], span=d["span"],
                   shift=d["shift"], points=list(d["points"]),
                   values=([int(v) for v in d["values"]] if d["mode"] == "certify"
                           else [list(v) for v in d["values"]]),
                   primes=list(d["primes"]),
                   seed=d.get("seed"), witness=d.get("witness"),
                   zero_row=d.get("zero_row", False))


def _batched_first_nonzero(fn, points, threads):
    """Evaluate ``fn`` over ``points`` in order, stopping after the batch holding
    the first nonzero.  Returns the evaluated prefix ending at that nonzero."""
    batch = max(1, threads or 1)
    values = []
    for start in range(0, len(points), batch):
        chunk = points[start:start + batch]
        got = _map(fn, chunk, threads)
        for v in got:
            values.append(v)
            if v != 0:
                return values
    return values


def det_is_zero(m, mode="certify", primes=None, seed=None, threads=1, kernel="auto"):
    _check_square(m)
    n = m.rows
    if n == 0:
        return ZeroTest(False, mode, 0, 0, 0, witness={"point": None, "value": "1"})
    sparse, shift, span, zero_row = m.cleared()
    if zero_row:
        return ZeroTest(True, mode, n, span, shift, zero_row=True)
    if mode == "certify":
        points = certify_points(span)
        values = _batched_first_nonzero(
            lambda x: int_det(_eval_rows(sparse, n, x), kernel), points, threads)
        test = ZeroTest(all(v == 0 for v in values), "certify", n, span, shift,
                        points=points[:len(values)], values=values)
        if not test.zero:
            test.witness = {"point": test.points[-1], "value": str(values[-1])}
        return test
    if mode == "screen":
        primes = list(primes or config.SCREEN_PRIMES)
        seed = config.DEFAULT_SEED if seed is None else seed
        rng = random.Random(seed)
        test = ZeroTest(True, "screen", n, span, shift, primes=primes, seed=seed)
        for p in primes:
            pts = rng.sample(range(2, p - 1), span + 1)
            vals = _batched_first_nonzero(
                lambda x, p=p: int_det_mod(_eval_rows(sparse, n, x, p), p, kernel), pts, threads)
            test.points.append(pts[:len(vals)])
            test.values.append(vals)
            if vals[-1] != 0:
                test.zero = False
                test.witness = {"prime": p, "point": pts[len(vals) - 1], "value": str(vals[-1])}
                break
        return test
    raise ValueError(f"unknown mode {mode!r}")


def evaluate_at(m, x, modulus=None, kernel="auto"):
    """Determinant of the row-cleared matrix at a single point (used by re-checks)."""
    _check_square(m)
    sparse, _, _, _ = m.cleared()
    rows = _eval_rows(sparse, m.rows, x, modulus)
    if modulus is None:
        return int_det(rows, kernel)
    return int_det_mod(rows, modulus, kernel)
