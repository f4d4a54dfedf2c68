"""Independent reference computations used only by the tests.

None of these share code paths with the package's fast routines: the
determinant oracle is Laplace expansion, hom counting is exhaustive, and the
resultant is the determinant of an explicit Sylvester matrix computed by sympy.
"""

import itertools

import sympy

from tavorder.laurent import ONE, ZERO


def cofactor_det(M):
    """Laplace expansion along the first row (exponential; n <= 6 only)."""
    n = len(M)
    if n == 0:
        return ONE
    if n == 1:
        return M[0][0]
    out = ZERO
    for j in range(n):
        if M[0][j].is_zero():
            continue
        minor = [row[:j] + row[j + 1:] for row in M[1:]]
        term = M[0][j] * cofactor_det(minor)
        out = out + term if j % 2 == 0 else out - term
    return out


def brute_force_homs(p, G):
    """Every image tuple (all |G|^n of them) that kills the relators."""
    out = []
    for images in itertools.product(range(G.order), repeat=p.ngens):
        if all(G.evaluate_word(images, r) == G.identity for r in p.relators):
            out.append(images)
    return out


def closure_size(G, gens):
    seen = {G.identity}
    frontier = [G.identity]
    while frontier:
        nxt = []
        for a in frontier:
            for g in gens:
                b = G.mul(a, g)
                if b not in seen:
                    seen.add(b)
                    nxt.append(b)
        frontier = nxt
    return len(seen)


def sylvester_resultant(f, g, x):
    """det of the Sylvester matrix of f, g in x (sympy Polys)."""
    a = sympy.Poly(f, x).all_coeffs()
    b = sympy.Poly(g, x).all_coeffs()
    m, n = len(a) - 1, len(b) - 1
    size = m + n
    rows = []
    for i in range(n):
        rows.append([0] * i + a + [0] * (size - m - 1 - i))
    for i in range(m):
        rows.append([0] * i + b + [0] * (size - n - 1 - i))
    return sympy.Matrix(rows).det(method="berkowitz")


def cyclic_resultant(delta, n):
    """Res_u(u^n - t^n, Delta(u)) as a dict exponent -> coefficient in t."""
    u, t = sympy.symbols("u t")
    coeffs = delta.coefficient_list_from_zero()
    D = sum(c * u ** k for k, c in enumerate(coeffs))
    if sympy.Poly(D, u).degree() == 0:
        return {0: int(D) ** n}
    r = sympy.expand(sylvester_resultant(u ** n - t ** n, D, u))
    return {int(m[0]): int(c) for m, c in sympy.Poly(r, t).terms()}
