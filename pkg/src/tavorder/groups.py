"""Finite permutation groups and the TAV classifier.

Permutations act on the right: for permutations ``a`` and ``b`` on
``{0, ..., d-1}`` the product ``a * b`` means "apply ``a`` first, then ``b``",
so ``(a * b)[i] == b[a[i]]``.  Group elements are indexed by their position in
a breadth-first closure from the identity, which therefore has index 0; every
tie-break in this module prefers the smallest index.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from functools import cached_property

from . import config
from .errors import OrderBoundExceeded, PrimePowerInput


class Permutation:
    __slots__ = ("image",)

    def __init__(self, image):
        image = tuple(int(x) for x in image)
        if sorted(image) != list(range(len(image))):
            raise ValueError(f"not a permutation: {image}")
        self.image = image

    @classmethod
    def identity(cls, d):
        return cls(range(d))

    @classmethod
    def from_cycles(cls, d, cycles):
        img = list(range(d))
        for cyc in cycles:
            for a, b in zip(cyc, cyc[1:] + cyc[:1]):
                img[a] = b
        return cls(img)

    @property
    def degree(self):
        return len(self.image)

    def __mul__(self, other):
        return Permutation(perm_mul(self.image, other.image))

    def inverse(self):
        return Permutation(perm_inv(self.image))

    def cycles(self):
        return perm_cycles(self.image)

    def __eq__(self, other):
        return isinstance(other, Permutation) and self.image == other.image

    def __hash__(self):
        return hash(self.image)

    def __repr__(self):
        cyc = "".join("(" + " ".join(map(str, c)) + ")" for c in self.cycles() if len(c) > 1)
        return f"Permutation({cyc or '()'}, degree={self.degree})"


def perm_mul(a, b):
    return tuple(b[x] for x in a)


def perm_inv(a):
    inv = [0] * len(a)
    for i, x in enumerate(a):
        inv[x] = i
    return tuple(inv)


def perm_cycles(a):
    seen = set()
    out = []
    for i in range(len(a)):
        if i in seen:
            continue
        cyc = [i]
        seen.add(i)
        j = a[i]
        while j != i:
            cyc.append(j)
            seen.add(j)
            j = a[j]
        out.append(cyc)
    return out


class FiniteGroup:
    """A permutation group together with the full list of its elements."""

    def __init__(self, degree, generators, bound=config.ORDER_BOUND, name=None, gid=None):
        gens = []
        for g in generators:
            img = g.image if isinstance(g, Permutation) else tuple(g)
            if len(img) != degree or sorted(img) != list(range(degree)):
                raise ValueError(f"generator {img} is not a permutation of degree {degree}")
            gens.append(tuple(img))
        self.degree = degree
        self.generators = gens
        self.name = name
        self.id = gid
        ident = tuple(range(degree))
        elements = [ident]
        index = {ident: 0}
        queue = deque([ident])
        while queue:
            x = queue.popleft()
            for g in gens:
                y = perm_mul(x, g)
                if y not in index:
                    index[y] = len(elements)
                    elements.append(y)
                    if len(elements) > bound:
                        raise OrderBoundExceeded(
                            f"group order exceeds the bound {bound}")
                    queue.append(y)
        self.elements = elements
        self.index = index
        self.identity = 0
        self.gen_indices = [index[g] for g in gens]

    @property
    def order(self):
        return len(self.elements)

    def __len__(self):
        return len(self.elements)

    def __repr__(self):
        label = self.name or self.id or "group"
        return f"FiniteGroup({label}, order={self.order}, degree={self.degree})"

    # -- element arithmetic (by index) -------------------------------------

    @cached_property
    def table(self):
        els, idx = self.elements, self.index
        return [[idx[perm_mul(a, b)] for b in els] for a in els]

    @cached_property
    def inverses(self):
        idx = self.index
        return [idx[perm_inv(a)] for a in self.elements]

    def mul(self, i, j):
        return self.table[i][j]

    def inv(self, i):
        return self.inverses[i]

    def conj(self, x, g):
        """``g^-1 x g``."""
        t = self.table
        return t[t[self.inverses[g]][x]][g]

    def commutator(self, a, b):
        """``a^-1 b^-1 a b``."""
        t, inv = self.table, self.inverses
        return t[t[t[inv[a]][inv[b]]][a]][b]

    def power(self, i, k):
        if k < 0:
            i, k = self.inv(i), -k
        r = self.identity
        for _ in range(k):
            r = self.table[r][i]
        return r

    def element_order(self, i):
        k, x = 1, i
        while x != self.identity:
            x = self.table[x][i]
            k += 1
        return k

    def evaluate_word(self, images, word):
        """Image of a word (signed 1-based generator letters) under ``images``."""
        t, inv = self.table, self.inverses
        r = self.identity
        for letter in word:
            g = images[abs(letter) - 1]
            r = t[r][g if letter > 0 else inv[g]]
        return r

    def is_abelian(self):
        t = self.table
        gi = self.gen_indices
        return all(t[a][b] == t[b][a] for a in gi for b in gi)

    def permutation(self, i):
        return Permutation(self.elements[i])


def group_from_generators(degree, gens, bound=config.ORDER_BOUND, name=None, gid=None):
    return FiniteGroup(degree, gens, bound=bound, name=name, gid=gid)


# -- subgroups -------------------------------------------------------------

def subgroup_closure(G, gens, limit=None):
    """Element indices of the subgroup generated by ``gens``.

    With ``limit`` the closure stops and returns None once it grows past it.
    """
    t = G.table
    gens = [g for g in dict.fromkeys(gens) if g != G.identity]
    seen = {G.identity}
    queue = deque([G.identity])
    while queue:
        x = queue.popleft()
        for g in gens:
            y = t[x][g]
            if y not in seen:
                seen.add(y)
                if limit is not None and len(seen) > limit:
                    return None
                queue.append(y)
    return frozenset(seen)


def conjugacy_class(G, x):
    seen = {x}
    queue = deque([x])
    while queue:
        y = queue.popleft()
        for g in G.gen_indices:
            z = G.conj(y, g)
            if z not in seen:
                seen.add(z)
                queue.append(z)
    return frozenset(seen)


def conjugacy_classes(G):
    """Partition of the elements into conjugacy classes, ordered by minimal index."""
    done = set()
    out = []
    for x in range(G.order):
        if x in done:
            continue
        cls = conjugacy_class(G, x)
        done |= cls
        out.append(cls)
    return out


def normal_closure(G, seed):
    return subgroup_closure(G, sorted(conjugacy_class(G, seed)))


def commutator_subgroup(G):
    gi = G.gen_indices
    comms = {G.commutator(a, b) for a in gi for b in gi}
    seeds = set()
    for c in comms:
        seeds |= conjugacy_class(G, c)
    return subgroup_closure(G, sorted(seeds))


def factorize(n):
    out = {}
    p = 2
    while p * p <= n:
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
        p += 1
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def is_p_group(order):
    """``(True, p)`` if ``order`` is a power of the prime ``p``, ``(False, None)``
    otherwise.  The trivial group counts as a p-group: ``(True, None)``."""
    if order < 1:
        raise ValueError("order must be positive")
    if order == 1:
        return True, None
    f = factorize(order)
    if len(f) == 1:
        return True, next(iter(f))
    return False, None


def abelianization_is_cyclic(G, derived=None):
    derived = commutator_subgroup(G) if derived is None else derived
    for cls in conjugacy_classes(G):
        rep = min(cls)
        if len(subgroup_closure(G, sorted(derived) + [rep])) == G.order:
            return True
    return False


# -- classifier ------------------------------------------------------------

CASE_CYCLIC = "cyclic-pq"
CASE_NONABELIAN = "nonabelian-p^n-q"

REASON_NOT_NORMALLY_GENERATED = "not normally generated by a single element"
REASON_P_GROUP = "commutator is a p-group"


@dataclass
class WitnessSubgroup:
    elements: tuple
    generators: tuple
    case: str

    @property
    def order(self):
        return len(self.elements)

    def to_dict(self):
        return {"order": self.order, "generators": list(self.generators),
                "case": self.case, "elements": list(self.elements)}


@dataclass
class TavVerdict:
    order: int
    normally_single_generated: bool
    normal_generator: int | None
    commutator_order: int
    commutator_is_p_group: bool
    commutator_prime: int | None
    is_tav: bool
    witness_subgroup: WitnessSubgroup | None = None
    witness_skipped: bool = False
    reasons: list = field(default_factory=list)
    group_id: str | None = None
    group_name: str | None = None

    def to_dict(self):
        return {
            "group_id": self.group_id, "group_name": self.group_name, "order": self.order,
            "normally_single_generated": self.normally_single_generated,
            "normal_generator": self.normal_generator,
            "commutator_order": self.commutator_order,
            "commutator_is_p_group": self.commutator_is_p_group,
            "commutator_prime": self.commutator_prime,
            "is_tav": self.is_tav,
            "witness_subgroup": (None if self.witness_subgroup is None
                                 else self.witness_subgroup.to_dict()),
            "witness_skipped": self.witness_skipped,
            "reasons": list(self.reasons),
        }


def minimal_nonprimepower_subgroup(G, H):
    """A subgroup of ``H`` minimal among subgroups of non-prime-power order.

    Every such minimal subgroup is generated by at most two elements (it is
    cyclic of order pq, or P x| Q with P elementary abelian and minimal normal),
    so a subgroup of least order among the <=2-generated candidates is minimal.
    Ties go to the lexicographically smallest generator tuple.
    """
    H = sorted(H)
    if is_p_group(len(H))[0]:
        raise PrimePowerInput(f"subgroup of order {len(H)} has prime-power order")
    best = None  # (order, gens, elements)

    def consider(gens, limit):
        nonlocal best
        sub = subgroup_closure(G, gens, limit=limit)
        if sub is None or is_p_group(len(sub))[0]:
            return
        key = (len(sub), tuple(gens))
        if best is None or key < best[:2]:
            best = (len(sub), tuple(gens), sub)

    for h in H:
        o = G.element_order(h)
        if not is_p_group(o)[0]:
            consider([h], None if best is None else best[0])
    for i, a in enumerate(H):
        for b in H[i + 1:]:
            consider([a, b], None if best is None else best[0])
    order, gens, elements = best
    t = G.table
    abelian = all(t[x][y] == t[y][x] for x in gens for y in gens)
    if abelian:
        assert len(factorize(order)) == 2 and all(e == 1 for e in factorize(order).values())
    return WitnessSubgroup(tuple(sorted(elements)), gens, CASE_CYCLIC if abelian else CASE_NONABELIAN)


def classify_tav(G, witness_bound=config.WITNESS_SUBGROUP_BOUND):
    classes = conjugacy_classes(G)
    normal_gen = None
    for cls in classes:
        rep = min(cls)
        if len(normal_closure(G, rep)) == G.order:
            normal_gen = rep
            break
    derived = commutator_subgroup(G)
    is_p, prime = is_p_group(len(derived))
    nsg = normal_gen is not None
    if nsg:
        assert abelianization_is_cyclic(G, derived), "normal generator but non-cyclic abelianization"
    reasons = []
    if not nsg:
        reasons.append(REASON_NOT_NORMALLY_GENERATED)
    if is_p:
        reasons.append(REASON_P_GROUP)
    verdict = TavVerdict(
        order=G.order, normally_single_generated=nsg, normal_generator=normal_gen,
        commutator_order=len(derived), commutator_is_p_group=is_p, commutator_prime=prime,
        is_tav=nsg and not is_p, reasons=reasons, group_id=G.id, group_name=G.name)
    if not is_p:
        if len(derived) <= witness_bound:
            verdict.witness_subgroup = minimal_nonprimepower_subgroup(G, derived)
        else:
            verdict.witness_skipped = True
    return verdict


# -- representations ---------------------------------------------------------

def regular_action(G):
    """Permutation of ``range(|G|)`` induced by right multiplication, per element."""
    return [tuple(col) for col in zip(*G.table)]


def natural_action(G):
    return list(G.elements)


def regular_representation(G, g):
    """|G| x |G| 0/1 matrix sending basis vector e_a to e_{a g} (row convention)."""
    n = G.order
    rows = [[0] * n for _ in range(n)]
    for a in range(n):
        rows[a][G.table[a][g]] = 1
    return rows
