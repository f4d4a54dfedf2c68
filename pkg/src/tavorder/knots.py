"""Knot group presentations.

Words are tuples of nonzero integers: ``k`` is generator ``x_k`` (1-based) and
``-k`` its inverse.

PD convention (KnotTheory / spherogram): a crossing ``(i, j, k, l)`` lists the
four edge labels counterclockwise starting from the incoming under-edge ``i``;
``k`` is the outgoing under-edge and ``j``, ``l`` belong to the over-strand.  The
crossing is positive when the over-strand runs from ``l`` to ``j``.  At a
crossing with over-arc ``a``, incoming under-arc ``b_in`` and outgoing
``b_out`` the Wirtinger relator is ``x_a x_in x_a^-1 x_out^-1`` for positive
crossings and ``x_a x_out x_a^-1 x_in^-1`` for negative ones.  This pins the
trefoil's Alexander polynomial to t^2 - t + 1 and makes the longitude below
commute with the meridian.
"""

from __future__ import annotations

import hashlib
import json
import math
import re
from dataclasses import dataclass, field, replace
from importlib import resources
from pathlib import Path

from .errors import (DeficiencyError, KnotNotFound, MalformedPD, MissingLongitude,
                     MultiComponentLink, NotCoprime, NotCyclicAbelianization, ParseError)


# -- words -------------------------------------------------------------------

def free_reduce(word):
    out = []
    for x in word:
        if out and out[-1] == -x:
            out.pop()
        else:
            out.append(x)
    return tuple(out)


def word_inverse(word):
    return tuple(-x for x in reversed(word))


def word_power(word, k):
    if k < 0:
        return tuple(word_inverse(word)) * (-k)
    return tuple(word) * k


def shift_word(word, offset):
    return tuple(x + offset if x > 0 else x - offset for x in word)


def exponent_sums(word, n):
    v = [0] * n
    for x in word:
        v[abs(x) - 1] += 1 if x > 0 else -1
    return v


def phi_of(word, phi):
    return sum(phi[abs(x) - 1] * (1 if x > 0 else -1) for x in word)


def format_word(word, names=None):
    if not word:
        return "1"
    out = []
    for x in word:
        g = names[abs(x) - 1] if names else f"x{abs(x)}"
        out.append(g if x > 0 else g + "^-1")
    return " ".join(out)


_LETTER = re.compile(r"\s*([A-Za-z_]\w*?)(\d+)(?:\^(-?\d+))?\s*\*?")


def parse_word(text, prefix="x"):
    """Parse ``x4 x2 x4^-1 x1^-1`` (or ``x4*x2``) into a signed word."""
    word = []
    text = text.strip()
    if text in ("", "1", "e"):
        return ()
    pos = 0
    while pos < len(text):
        m = _LETTER.match(text, pos)
        if not m or m.group(1) != prefix:
            raise ValueError(f"cannot parse word {text!r} at offset {pos}")
        k, e = int(m.group(2)), int(m.group(3) or 1)
        word.extend([k if e > 0 else -k] * abs(e))
        pos = m.end()
    return tuple(word)


# -- integer linear algebra ----------------------------------------------------

def smith_normal_form(M, ncols):
    """Return ``(D, V)`` with ``U M V = D`` diagonal for some unimodular ``U``.

    Only the column transform ``V`` is tracked; it is what the kernel needs.
    """
    A = [list(r) for r in M]
    m = len(A)
    n = ncols
    V = [[int(i == j) for j in range(n)] for i in range(n)]

    def swap_cols(a, b):
        for r in A:
            r[a], r[b] = r[b], r[a]
        for r in V:
            r[a], r[b] = r[b], r[a]

    def add_col(dst, src, f):  # col dst += f * col src
        for r in A:
            r[dst] += f * r[src]
        for r in V:
            r[dst] += f * r[src]

    t = 0
    while t < min(m, n):
        nz = [(abs(A[i][j]), i, j) for i in range(t, m) for j in range(t, n) if A[i][j]]
        if not nz:
            break
        _, pi, pj = min(nz)
        A[t], A[pi] = A[pi], A[t]
        swap_cols(t, pj)
        while True:
            done = True
            for j in range(t + 1, n):
                if A[t][j]:
                    q = A[t][j] // A[t][t]
                    add_col(j, t, -q)
                    if A[t][j]:
                        swap_cols(t, j)
                        done = False
            for i in range(t + 1, m):
                if A[i][t]:
                    q = A[i][t] // A[t][t]
                    A[i] = [a - q * b for a, b in zip(A[i], A[t])]
                    if A[i][t]:
                        A[t], A[i] = A[i], A[t]
                        done = False
            if done:
                break
        # enforce divisibility of later entries
        bad = next(((i, j) for i in range(t + 1, m) for j in range(t + 1, n)
                    if A[i][j] % A[t][t]), None)
        if bad is not None:
            A[t] = [a + b for a, b in zip(A[t], A[bad[0]])]
            continue
        t += 1
    diag = [A[i][i] if i < m and i < n else 0 for i in range(n)]
    return diag, V


def abelianization_degrees(ngens, relators, meridian=(1,)):
    """The map phi: generators -> Z of the abelianization, with phi(meridian) = 1."""
    M = [exponent_sums(r, ngens) for r in relators]
    diag, V = smith_normal_form(M, ngens)
    free = [j for j in range(ngens) if diag[j] == 0]
    torsion = [abs(d) for d in diag if abs(d) > 1]
    if len(free) != 1 or torsion:
        raise NotCyclicAbelianization(
            f"abelianization is Z^{len(free)}" + "".join(f" + Z/{d}" for d in torsion) + ", not Z")
    j = free[0]
    phi = [V[i][j] for i in range(ngens)]
    g = 0
    for x in phi:
        g = math.gcd(g, x)
    phi = [x // g for x in phi]
    pm = phi_of(meridian, phi)
    if abs(pm) != 1:
        raise NotCyclicAbelianization(f"meridian maps to {pm}, not a generator of H_1")
    return [x * pm for x in phi]


# -- presentations -----------------------------------------------------------

@dataclass
class KnotPresentation:
    name: str
    ngens: int
    relators: list
    meridian: tuple
    phi: list
    longitude: tuple | None = None
    source: str = "wirtinger"
    names: list | None = None
    note: str | None = None
    extra: dict = field(default_factory=dict)

    def __post_init__(self):
        self.relators = [tuple(r) for r in self.relators]
        self.meridian = tuple(self.meridian)
        if self.longitude is not None:
            self.longitude = tuple(self.longitude)
        self.phi = list(self.phi)
        self.validate()

    def validate(self):
        n = self.ngens
        if len(self.relators) != n - 1:
            raise DeficiencyError(
                f"{self.name}: {n} generators and {len(self.relators)} relators; "
                "deficiency one is required")
        if len(self.phi) != n:
            raise DeficiencyError(f"{self.name}: phi has {len(self.phi)} entries for {n} generators")
        for k, w in enumerate(self.relators + [self.meridian] + [self.longitude or ()]):
            for x in w:
                if x == 0 or abs(x) > n:
                    raise ParseError(f"{self.name}: letter {x} out of range")
        for k, r in enumerate(self.relators):
            if phi_of(r, self.phi) != 0:
                raise NotCyclicAbelianization(f"{self.name}: phi(relator {k + 1}) != 0")
        if phi_of(self.meridian, self.phi) != 1:
            raise NotCyclicAbelianization(f"{self.name}: phi(meridian) != 1")
        if self.longitude is not None and phi_of(self.longitude, self.phi) != 0:
            raise NotCyclicAbelianization(f"{self.name}: phi(longitude) != 0")

    @property
    def deficiency(self):
        return self.ngens - len(self.relators)

    def generator_names(self):
        return self.names or [f"x{i + 1}" for i in range(self.ngens)]

    def canonical(self):
        return {"generators": self.ngens, "relators": [list(r) for r in self.relators],
                "meridian": list(self.meridian), "phi": list(self.phi),
                "longitude": None if self.longitude is None else list(self.longitude)}

    def digest(self):
        return hashlib.sha256(json.dumps(self.canonical(), sort_keys=True).encode()).hexdigest()

    def summary(self):
        names = self.generator_names()
        lines = [f"knot {self.name} ({self.source}): {self.ngens} generators, "
                 f"{len(self.relators)} relators"]
        for k, r in enumerate(self.relators, 1):
            lines.append(f"  r{k} = {format_word(r, names)}")
        lines.append(f"  meridian = {format_word(self.meridian, names)}")
        if self.longitude is not None:
            lines.append(f"  longitude = {format_word(self.longitude, names)}")
        lines.append(f"  phi = {self.phi}")
        return "\n".join(lines)


def presentation_from_dict(name, d, source="explicit"):
    n = int(d["generators"])
    rels = [tuple(r) for r in d["relators"]]
    meridian = tuple(d.get("meridian", (1,)))
    phi = d.get("phi")
    if phi is None:
        phi = abelianization_degrees(n, rels, meridian)
    lon = d.get("longitude")
    return KnotPresentation(name, n, rels, meridian, phi,
                            longitude=None if lon is None else tuple(lon),
                            source=d.get("source", source), names=d.get("names"))


# -- PD codes ----------------------------------------------------------------

@dataclass
class PDCode:
    crossings: list

    def __post_init__(self):
        self.crossings = [tuple(c) for c in self.crossings]
        counts = {}
        for c in self.crossings:
            if len(c) != 4:
                raise MalformedPD(f"crossing {c} does not have four labels")
            for e in c:
                counts[e] = counts.get(e, 0) + 1
        bad = sorted(e for e, k in counts.items() if k != 2)
        if bad:
            raise MalformedPD(f"labels {bad} do not appear exactly twice")


_NEXT = {0: 2, 1: 3, 3: 1}


@dataclass
class _Diagram:
    arcs: int
    crossings: list    # (over_arc, in_arc, out_arc, sign) in PD order
    sequence: list     # crossing indices in traversal order of their under-passes


def _traverse(pd):
    """Walk the knot starting from the outgoing under-edge of crossing 0."""
    X = pd.crossings
    n = len(X)
    where = {}
    for c, cr in enumerate(X):
        for pos, e in enumerate(cr):
            where.setdefault(e, []).append((c, pos))
    visited = set()
    arc_of_slot = {}
    under_order = []
    over_dir = {}
    arc = 1
    c, pos = 0, 2
    for _ in range(2 * n):
        e = X[c][pos]
        c2, pos2 = next(o for o in where[e] if o != (c, pos))
        if pos2 == 2:
            raise MalformedPD(f"edge {e} enters crossing {c2} as its outgoing under-edge")
        if (c2, pos2) in visited:
            break
        visited.add((c2, pos2))
        arc_of_slot[(c2, pos2)] = arc
        if pos2 == 0:
            under_order.append(c2)
            arc += 1
            arc_of_slot[(c2, 2)] = arc
        else:
            over_dir[c2] = pos2  # over-strand enters at position pos2
            arc_of_slot[(c2, _NEXT[pos2])] = arc
        c, pos = c2, _NEXT[pos2]
    if len(visited) != 2 * n:
        raise MultiComponentLink(f"PD code is not a single closed component "
                                 f"({len(visited)} of {2 * n} strand passes reached)")
    # the walk ends back at crossing 0's incoming under-edge: close the last arc
    arcs = arc - 1
    arc_of_slot = {k: (v - 1) % arcs + 1 for k, v in arc_of_slot.items()}
    return arcs, arc_of_slot, under_order, over_dir


def _diagram(pd):
    arcs, slot, order, over_dir = _traverse(pd)
    cr = []
    for c in range(len(pd.crossings)):
        over = slot[(c, 1)]
        sign = 1 if over_dir[c] == 3 else -1
        cr.append((over, slot[(c, 0)], slot[(c, 2)], sign))
    return _Diagram(arcs, cr, order)


def wirtinger_relators(pd):
    """All crossing relators (none dropped) and the diagram data."""
    d = _diagram(pd)
    rels = []
    for a, b_in, b_out, sign in d.crossings:
        if sign > 0:
            rels.append((a, b_in, -a, -b_out))
        else:
            rels.append((a, b_out, -a, -b_in))
    return rels, d


def wirtinger_from_pd(pd, name="knot"):
    pd = pd if isinstance(pd, PDCode) else PDCode(pd)
    if not pd.crossings:
        return KnotPresentation(name, 1, [], (1,), [1], longitude=(), source="wirtinger")
    rels, d = wirtinger_relators(pd)
    lon = _longitude(d)
    return KnotPresentation(name, d.arcs, rels[:-1], (1,), [1] * d.arcs,
                            longitude=lon, source="wirtinger")


def _longitude(d):
    # going under crossing c with over-arc a and sign s: x_out = x_a^s x_in x_a^-s,
    # so x_1 = W x_1 W^-1 with W read in reverse order; the longitude is W^-1
    # corrected by the writhe.
    word = []
    writhe = 0
    for c in d.sequence:
        a, _, _, s = d.crossings[c]
        word.append(-a if s > 0 else a)
        writhe += s
    word.extend([1 if writhe > 0 else -1] * abs(writhe))
    return free_reduce(word)


def longitude_from_pd(pd):
    pd = pd if isinstance(pd, PDCode) else PDCode(pd)
    if not pd.crossings:
        return ()
    return _longitude(_diagram(pd))


def writhe(pd):
    pd = pd if isinstance(pd, PDCode) else PDCode(pd)
    if not pd.crossings:
        return 0
    return sum(s for *_, s in _diagram(pd).crossings)


def _triples(relators):
    out = []
    for r in relators:
        if len(r) != 4 or r[2] != -r[0] or r[0] < 0 or r[1] < 0 or r[3] > 0:
            raise ValueError(f"relator {r} is not of the form x_a x_b x_a^-1 x_c^-1")
        out.append((r[0], r[1], -r[3]))
    return out


def match_relabeling(rels_a, rels_b, n):
    """A generator bijection sending the Wirtinger relators ``rels_a`` onto the
    set ``rels_b`` (both lists of ``x_a x_b x_a^-1 x_c^-1`` words), or None."""
    A, B = _triples(rels_a), set(_triples(rels_b))
    if len(A) != len(B):
        return None

    def rec(sigma, used, k):
        if k == len(A):
            return dict(sigma)
        for tgt in B:
            s2, u2, ok = dict(sigma), set(used), True
            for x, y in zip(A[k], tgt):
                if x in s2:
                    ok = s2[x] == y
                elif y in u2:
                    ok = False
                else:
                    s2[x] = y
                    u2.add(y)
                if not ok:
                    break
            if ok:
                found = rec(s2, u2, k + 1)
                if found is not None:
                    return found
        return None

    sigma = rec({}, set(), 0)
    if sigma is not None and len(sigma) < n:
        free = [y for y in range(1, n + 1) if y not in sigma.values()]
        for x in range(1, n + 1):
            if x not in sigma:
                sigma[x] = free.pop(0)
    return sigma


def relabel_word(word, sigma):
    return tuple(sigma[x] if x > 0 else -sigma[-x] for x in word)


# -- constructions -------------------------------------------------------------

def connected_sum(p1, p2, name=None):
    n1 = p1.ngens
    rels = list(p1.relators) + [shift_word(r, n1) for r in p2.relators]
    rels.append(tuple(p1.meridian) + word_inverse(shift_word(p2.meridian, n1)))
    lon = None
    if p1.longitude is not None and p2.longitude is not None:
        lon = tuple(p1.longitude) + shift_word(p2.longitude, n1)
    return KnotPresentation(name or f"{p1.name}#{p2.name}", n1 + p2.ngens, rels,
                            p1.meridian, list(p1.phi) + list(p2.phi), longitude=lon,
                            source="composite")


def _meridian_exponents(p, q):
    """(a, b) with a*p + b*q = 1 and |a| minimal (ties: a >= 0)."""
    g, x, y = _egcd(p, q)
    assert g == 1
    # general solution a = x + k q, b = y - k p
    best = None
    qq = abs(q) if q else 1
    for k in range(-abs(x) // qq - 2, abs(x) // qq + 3) if q else [0]:
        a, b = x + k * q, y - k * p
        key = (abs(a), a < 0)
        if best is None or key < best[0]:
            best = (key, a, b)
    return best[1], best[2]


def _egcd(a, b):
    if b == 0:
        return (a, 1, 0) if a >= 0 else (-a, -1, 0)
    g, x, y = _egcd(b, a % b)
    return g, y, x - (a // b) * y


def cable(p, cable_p, cable_q, name=None):
    """The (cable_p, cable_q)-cable: add l' and the relator l^p m^q l'^-p."""
    if p.longitude is None:
        raise MissingLongitude(f"{p.name} has no longitude")
    if cable_p < 1 or math.gcd(cable_p, cable_q) != 1:
        raise NotCoprime(f"({cable_p}, {cable_q}) is not a coprime pair with p > 0")
    n = p.ngens + 1
    new = n
    rel = (word_power(p.longitude, cable_p) + word_power(p.meridian, cable_q)
           + word_power((new,), -cable_p))
    rels = list(p.relators) + [free_reduce(rel)]
    phi = [cable_p * v for v in p.phi] + [cable_q]
    a, b = _meridian_exponents(cable_p, cable_q)
    meridian = free_reduce(word_power(p.meridian, a) + word_power((new,), b))
    names = None if p.names is None else list(p.names) + ["l'"]
    return KnotPresentation(name or f"{p.name}^({cable_p},{cable_q})", n, rels, meridian, phi,
                            source="cable", names=names)


def two_bridge(name, p, q):
    """Two-generator presentation <a, b | a w = w b> of the two-bridge knot b(p, q),
    with w = b^e1 a^e2 ... a^e(p-1) and e_i = (-1)^floor(i q / p); q must be odd."""
    if p % 2 == 0 or q % 2 == 0:
        raise ValueError("two-bridge normal form needs p and q odd")
    eps = [(-1) ** ((i * q) // p) for i in range(1, p)]
    w = []
    for i, e in enumerate(eps):
        g = 2 if i % 2 == 0 else 1
        w.append(g * e)
    w = tuple(w)
    rel = (1,) + w + (-2,) + word_inverse(w)
    return KnotPresentation(name, 2, [free_reduce(rel)], (1,), [1, 1], source="reduced")


# -- knot table ----------------------------------------------------------------

def default_knot_table_path():
    return Path(str(resources.files("tavorder") / "data" / "knots.jsonl"))


@dataclass
class KnotRecord:
    name: str
    pd: PDCode | None
    presentation: dict | None
    variants: dict
    provenance: str | None
    line: int

    def digest(self):
        raw = {"pd": None if self.pd is None else [list(c) for c in self.pd.crossings],
               "presentation": self.presentation, "variants": self.variants}
        return hashlib.sha256(json.dumps(raw, sort_keys=True).encode()).hexdigest()


class KnotTable:
    """Named knots.  ``get`` also understands ``K@variant``, ``K1#K2`` and
    ``K^(p,q)`` built from table entries."""

    def __init__(self, records, path=None):
        self.records = {r.name: r for r in records}
        self.path = path
        self._cache = {}

    def names(self):
        return list(self.records)

    def __contains__(self, name):
        try:
            self.get(name)
            return True
        except KnotNotFound:
            return False

    def record(self, name):
        try:
            return self.records[name]
        except KeyError:
            raise KnotNotFound(f"unknown knot {name!r}") from None

    def get(self, name):
        name = name.strip()
        if name in self._cache:
            return self._cache[name]
        if "#" in name:
            parts = [s.strip() for s in name.split("#")]
            p = self.get(parts[0])
            for s in parts[1:]:
                p = connected_sum(p, self.get(s))
            p = replace_name(p, name)
        elif (m := re.fullmatch(r"(.+)\^\((\d+),\s*(-?\d+)\)", name)):
            p = cable(self.get(m.group(1)), int(m.group(2)), int(m.group(3)), name=name)
        elif "@" in name:
            base, var = name.split("@", 1)
            rec = self.record(base)
            if var == "wirtinger":
                if rec.pd is None:
                    raise KnotNotFound(f"{base} has no PD code")
                p = wirtinger_from_pd(rec.pd, name)
            elif var in rec.variants:
                p = presentation_from_dict(name, rec.variants[var], source="reduced")
            else:
                raise KnotNotFound(f"{base} has no variant {var!r}")
        else:
            rec = self.record(name)
            if rec.presentation is not None:
                p = presentation_from_dict(name, rec.presentation)
            else:
                p = wirtinger_from_pd(rec.pd, name)
        self._cache[name] = p
        return p

    def digest(self, name):
        """Content hash of the table records a (possibly composite) name depends on."""
        h = hashlib.sha256(name.encode())
        for b in re.split(r"[#^]", name):
            b = b.split("@")[0].strip()
            if b in self.records:
                h.update(self.records[b].digest().encode())
        return h.hexdigest()


def replace_name(p, name):
    return replace(p, name=name)


def load_knot_table(path=None):
    path = Path(path) if path is not None else default_knot_table_path()
    try:
        text = path.read_text()
    except OSError as exc:
        raise ParseError(f"cannot read knot table: {exc}", path=str(path)) from None
    records = []
    for lineno, line in enumerate(text.splitlines(), 1):
        s = line.strip()
        if not s or s.startswith("#"):
            continue
        try:
            rec = json.loads(s)
            name = rec["name"]
            pd = PDCode(rec["pd"]) if rec.get("pd") is not None else None
            pres = rec.get("presentation")
            if pd is None and pres is None:
                raise ParseError(f"knot {name}: needs a PD code or a presentation")
            kr = KnotRecord(name, pd, pres, rec.get("variants", {}), rec.get("provenance"), lineno)
            # validate eagerly so that errors carry the line number
            if pres is not None:
                presentation_from_dict(name, pres)
            elif pd is not None:
                wirtinger_from_pd(pd, name)
            for var, d in kr.variants.items():
                presentation_from_dict(f"{name}@{var}", d)
        except json.JSONDecodeError as exc:
            raise ParseError(f"invalid JSON: {exc.msg}", path=str(path), line=lineno) from None
        except ParseError as exc:
            raise ParseError(exc.message, path=str(path), line=lineno) from None
        except (KeyError, TypeError, ValueError) as exc:
            raise ParseError(f"malformed knot record: {exc!r}", path=str(path), line=lineno) from None
        except (MalformedPD, MultiComponentLink, DeficiencyError, NotCyclicAbelianization) as exc:
            raise ParseError(f"{type(exc).__name__}: {exc}", path=str(path), line=lineno) from None
        records.append(kr)
    return KnotTable(records, path=path)
