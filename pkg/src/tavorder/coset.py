"""Coset enumeration (HLT strategy) for finitely presented groups.

Words are sequences of nonzero integers: ``k`` stands for generator ``k``
(1-based) and ``-k`` for its inverse.
"""

from __future__ import annotations

from dataclasses import dataclass

from . import config
from .errors import EnumerationBoundExceeded
from .groups import FiniteGroup


@dataclass
class GroupPresentation:
    ngens: int
    relators: list

    def __post_init__(self):
        self.relators = [list(r) for r in self.relators]
        for r in self.relators:
            for letter in r:
                if letter == 0 or abs(letter) > self.ngens:
                    raise ValueError(f"relator letter {letter} out of range")


def _col(letter):
    return 2 * (abs(letter) - 1) + (letter < 0)


class _Enumerator:
    def __init__(self, ngens, bound):
        self.ncols = 2 * ngens
        self.table = [[None] * self.ncols]
        self.parent = [0]
        self.bound = bound

    def define(self, c, x):
        if len(self.table) >= self.bound:
            raise EnumerationBoundExceeded(
                f"coset table exceeded {self.bound} rows; the group may be infinite or too large")
        n = len(self.table)
        self.table.append([None] * self.ncols)
        self.parent.append(n)
        self.table[c][x] = n
        self.table[n][x ^ 1] = c

    def rep(self, c):
        p = self.parent
        root = c
        while p[root] != root:
            root = p[root]
        while p[c] != root:
            p[c], c = root, p[c]
        return root

    def merge(self, a, b, queue):
        a, b = self.rep(a), self.rep(b)
        if a == b:
            return
        lo, hi = min(a, b), max(a, b)
        self.parent[hi] = lo
        queue.append(hi)

    def coincidence(self, a, b):
        queue = []
        self.merge(a, b, queue)
        tab = self.table
        i = 0
        while i < len(queue):
            g = queue[i]
            i += 1
            for x in range(self.ncols):
                d = tab[g][x]
                if d is None:
                    continue
                tab[d][x ^ 1] = None
                mu, nu = self.rep(g), self.rep(d)
                if tab[mu][x] is not None:
                    self.merge(nu, tab[mu][x], queue)
                elif tab[nu][x ^ 1] is not None:
                    self.merge(mu, tab[nu][x ^ 1], queue)
                else:
                    tab[mu][x] = nu
                    tab[nu][x ^ 1] = mu

    def scan_and_fill(self, alpha, word):
        tab = self.table
        cols = [_col(l) for l in word]
        n = len(cols)
        f, i = alpha, 0
        b, j = alpha, n - 1
        while True:
            while i <= j and tab[f][cols[i]] is not None:
                f = tab[f][cols[i]]
                i += 1
            if i > j:
                if f != alpha:
                    self.coincidence(f, alpha)
                return
            while j >= i and tab[b][cols[j] ^ 1] is not None:
                b = tab[b][cols[j] ^ 1]
                j -= 1
            if j < i:
                self.coincidence(f, b)
                return
            if i == j:
                tab[f][cols[i]] = b
                tab[b][cols[i] ^ 1] = f
                return
            self.define(f, cols[i])

    def live(self, c):
        return self.parent[c] == c


def coset_table(p, subgroup_gens=(), bound=config.COSET_TABLE_BOUND):
    """Run the enumeration and return ``(perms, index)``: for each generator the
    permutation of the cosets it induces (right action)."""
    e = _Enumerator(p.ngens, bound)
    for w in subgroup_gens:
        if w:
            e.scan_and_fill(0, w)
    alpha = 0
    while alpha < len(e.table):
        for r in p.relators:
            if not e.live(alpha):
                break
            if r:
                e.scan_and_fill(alpha, r)
        if e.live(alpha):
            for x in range(e.ncols):
                if e.table[alpha][x] is None:
                    e.define(alpha, x)
        alpha += 1
    live = [c for c in range(len(e.table)) if e.live(c)]
    renum = {c: k for k, c in enumerate(live)}
    perms = []
    for g in range(p.ngens):
        perms.append(tuple(renum[e.rep(e.table[c][2 * g])] for c in live))
    return perms, len(live)


def coset_enumeration(p, subgroup_gens=(), bound=config.COSET_TABLE_BOUND,
                      order_bound=config.ORDER_BOUND, name=None, gid=None):
    """Permutation group given by the action of ``p``'s generators on the cosets
    of the subgroup generated by ``subgroup_gens``.  With the trivial subgroup
    this is the regular action, so the order equals the number of cosets."""
    perms, index = coset_table(p, subgroup_gens, bound)
    return FiniteGroup(index, perms, bound=order_bound, name=name, gid=gid)
