"""Homomorphisms from knot presentations into finite groups."""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import InvalidHom, NotClosedUnderAction
from .groups import conjugacy_classes, normal_closure, subgroup_closure
from .knots import format_word


@dataclass(frozen=True)
class GroupHom:
    """Images (element indices) of the presentation generators."""

    images: tuple
    group: object = field(compare=False, repr=False)

    @property
    def surjective(self):
        cached = self.__dict__.get("_surj")
        if cached is None:
            cached = len(subgroup_closure(self.group, self.images)) == self.group.order
            object.__setattr__(self, "_surj", cached)
        return cached

    def image_order(self):
        return len(subgroup_closure(self.group, self.images))

    def is_cyclic_image(self):
        H = sorted(subgroup_closure(self.group, self.images))
        return any(self.group.element_order(h) == len(H) for h in H)

    def conjugate(self, g):
        """``x -> g^-1 f(x) g``."""
        return GroupHom(tuple(self.group.conj(x, g) for x in self.images), self.group)

    def __call__(self, word):
        return self.group.evaluate_word(self.images, word)

    def spec(self):
        return ",".join(f"x{i + 1}=e{g}" for i, g in enumerate(self.images))


def check_relators(p, G, images):
    """Index of the first relator not sent to the identity, or None."""
    for k, r in enumerate(p.relators):
        if G.evaluate_word(images, r) != G.identity:
            return k
    return None


def validate_hom(p, G, images):
    images = tuple(images)
    if len(images) != p.ngens:
        raise InvalidHom(f"{len(images)} images given for {p.ngens} generators")
    if any(not 0 <= x < G.order for x in images):
        raise InvalidHom("image index out of range")
    k = check_relators(p, G, images)
    if k is not None:
        raise InvalidHom(f"relator r{k + 1} = {format_word(p.relators[k], p.names)} "
                         "is not sent to the identity", relator_index=k)
    return GroupHom(images, G)


# -- search ------------------------------------------------------------------

def conjugation_linked(p):
    """True when every relator reads ``x_a x_b x_a^-1 x_c^-1`` or ``x_b x_c^-1``
    and these relations connect all generators, so that all generators are
    conjugate (Wirtinger and connected-sum presentations)."""
    parent = list(range(p.ngens + 1))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for r in p.relators:
        if len(r) == 4 and r[0] > 0 and r[1] > 0 and r[2] == -r[0] and r[3] < 0:
            b, c = r[1], -r[3]
        elif len(r) == 2 and r[0] > 0 and r[1] < 0:
            b, c = r[0], -r[1]
        else:
            return False
        parent[find(b)] = find(c)
    return len({find(i) for i in range(1, p.ngens + 1)}) == 1


class _Solver:
    def __init__(self, p, G):
        self.p, self.G = p, G
        self.n = p.ngens
        t, inv = G.table, G.inverses
        self.t, self.inv = t, inv
        # relators touching each generator
        self.touch = [[] for _ in range(self.n + 1)]
        for k, r in enumerate(p.relators):
            for g in {abs(x) for x in r}:
                self.touch[g].append(k)

    def _solve_single(self, r, images, g):
        """Image of generator g forced by relator r, where g occurs once and every
        other letter is assigned.  r = u g^s v = 1 gives g^s = u^-1 v^-1."""
        t, inv = self.t, self.inv
        pos = next(i for i, x in enumerate(r) if abs(x) == g)
        u = self.G.identity
        for x in r[:pos]:
            a = images[abs(x)]
            u = t[u][a if x > 0 else inv[a]]
        v = self.G.identity
        for x in r[pos + 1:]:
            a = images[abs(x)]
            v = t[v][a if x > 0 else inv[a]]
        val = t[inv[u]][inv[v]]
        return val if r[pos] > 0 else inv[val]

    def propagate(self, images, changed, allowed):
        """Fill forced images; returns False on contradiction.  ``images`` is
        1-based with None for unknowns and is modified in place."""
        stack = list(changed)
        G = self.G
        while stack:
            g = stack.pop()
            for k in self.touch[g]:
                r = self.p.relators[k]
                unknown = [x for x in r if images[abs(x)] is None]
                if not unknown:
                    if G.evaluate_word(images[1:], r) != G.identity:
                        return False
                    continue
                if len(unknown) == 1:
                    h = abs(unknown[0])
                    val = self._solve_single(r, images, h)
                    if allowed is not None and val not in allowed:
                        return False
                    images[h] = val
                    stack.append(h)
        return True

    def search(self, pinned, domain):
        """All solutions with x1 = pinned and every image in ``domain``."""
        out = []
        images = [None] * (self.n + 1)
        images[1] = pinned
        allowed = set(domain)
        if not self.propagate(images, [1], allowed):
            return out

        def rec(images):
            try:
                g = images.index(None, 1)
            except ValueError:
                if check_relators(self.p, self.G, images[1:]) is None:
                    out.append(tuple(images[1:]))
                return
            for val in domain:
                nxt = list(images)
                nxt[g] = val
                if self.propagate(nxt, [g], allowed):
                    rec(nxt)

        rec(images)
        return out


def _conjugates(G, images):
    return {tuple(G.conj(x, g) for x in images) for g in range(G.order)}


def enumerate_homs(p, G, surjective_only=False):
    """Every homomorphism (or epimorphism), sorted by image array."""
    solver = _Solver(p, G)
    classes = sorted(conjugacy_classes(G), key=lambda c: (len(c), min(c)))
    linked = conjugation_linked(p)
    found = set()
    for cls in classes:
        rep = min(cls)
        if surjective_only and len(normal_closure(G, rep)) != G.order and linked:
            continue
        domain = sorted(cls) if linked else range(G.order)
        for sol in solver.search(rep, domain):
            found |= _conjugates(G, sol)
    homs = [GroupHom(h, G) for h in sorted(found)]
    if surjective_only:
        homs = [h for h in homs if h.surjective]
    return homs


@dataclass
class HomOrbit:
    rep: GroupHom
    size: int


def reduce_by_conjugation(homs, G):
    """One representative (smallest image array) per inner-automorphism orbit."""
    pool = {h.images for h in homs}
    out = []
    seen = set()
    for images in sorted(pool):
        if images in seen:
            continue
        orbit = _conjugates(G, images)
        missing = orbit - pool
        if missing:
            raise NotClosedUnderAction(
                f"conjugate {min(missing)} of {images} is not in the input list")
        seen |= orbit
        out.append(HomOrbit(GroupHom(min(orbit), G), len(orbit)))
    return out


def epimorphism_orbits(p, G):
    return reduce_by_conjugation(enumerate_homs(p, G, surjective_only=True), G)

