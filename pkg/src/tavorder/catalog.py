"""Group catalog: JSON-lines file of permutation groups or presentations.

Grammar (one JSON object per line, blank lines and lines starting with ``#``
ignored)::

    {"kind": "meta", "complete_orders": [1, 2, ...], "note": "..."}
    {"id": "S4", "name": "...", "order": 24, "degree": 4,
     "generators": [[1,2,3,0], [1,0,2,3]],
     "presentation": {"generators": 2, "relators": [[1,1,1,1], ...]}}
    {"id": "G", "name": "...", "presentation": {"generators": k, "relators": [...]}}

``generators`` are one-line permutation arrays on ``0..degree-1``.  Relator
words use signed 1-based generator indices.  When only a presentation is given
the group is realized by coset enumeration over the trivial subgroup.  When
both are given the permutations must satisfy every relator.  Catalog
generator ``k`` is called ``g<k>`` in hom specs.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

from . import config
from .coset import GroupPresentation, coset_enumeration
from .errors import GroupNotFound, OrderBoundExceeded, ParseError
from .groups import FiniteGroup


def default_catalog_path():
    return Path(str(resources.files("tavorder") / "data" / "groups.jsonl"))


@dataclass
class CatalogEntry:
    id: str
    name: str
    order: int | None
    degree: int | None
    generators: list | None
    presentation: GroupPresentation | None
    line: int
    raw: dict
    _group: FiniteGroup | None = field(default=None, repr=False)

    @property
    def digest(self):
        return hashlib.sha256(json.dumps(self.raw, sort_keys=True).encode()).hexdigest()

    def group(self, bound=config.ORDER_BOUND):
        if self._group is None:
            self._group = _realize(self, bound)
        return self._group


def _realize(e, bound):
    if e.generators is not None:
        G = FiniteGroup(e.degree, e.generators, bound=bound, name=e.name, gid=e.id)
        if e.presentation is not None:
            for k, r in enumerate(e.presentation.relators):
                if G.evaluate_word(G.gen_indices, r) != G.identity:
                    raise ParseError(f"group {e.id}: generators violate relator {k + 1}",
                                     line=e.line)
    else:
        G = coset_enumeration(e.presentation, order_bound=bound, name=e.name, gid=e.id)
    if e.order is not None and G.order != e.order:
        raise ParseError(f"group {e.id}: declared order {e.order} but generated {G.order}",
                         line=e.line)
    return G


class GroupCatalog:
    def __init__(self, entries, complete_orders=(), path=None, note=None, skipped=()):
        self.entries = list(entries)
        self.complete_orders = set(complete_orders)
        self.path = path
        self.note = note
        self.skipped = list(skipped)  # (line, diagnostic) for rejected records
        self._by_id = {e.id: e for e in self.entries}

    def __len__(self):
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries)

    def get(self, gid):
        try:
            return self._by_id[gid]
        except KeyError:
            raise GroupNotFound(f"no group {gid!r} in catalog") from None

    def group(self, gid):
        return self.get(gid).group()

    def in_orders(self, lo, hi):
        """Entries with lo <= order <= hi, in increasing order (stable within an order)."""
        out = [e for e in self.entries if lo <= self.order_of(e) <= hi]
        return sorted(out, key=self.order_of)

    def order_of(self, e):
        return e.order if e.order is not None else e.group().order

    def is_complete(self, order):
        return order in self.complete_orders


def _as_word_list(rels, line):
    if not isinstance(rels, list) or not all(isinstance(r, list) for r in rels):
        raise ParseError("relators must be a list of integer lists", line=line)
    return rels


def load_catalog(path=None, bound=config.ORDER_BOUND):
    path = Path(path) if path is not None else default_catalog_path()
    entries, skipped = [], []
    complete, note = [], None
    try:
        text = path.read_text()
    except OSError as exc:
        raise ParseError(f"cannot read catalog: {exc}", path=str(path)) from None
    for lineno, line in enumerate(text.splitlines(), 1):
        s = line.strip()
        if not s or s.startswith("#"):
            continue
        try:
            rec = json.loads(s)
        except json.JSONDecodeError as exc:
            raise ParseError(f"invalid JSON: {exc.msg}", path=str(path), line=lineno) from None
        if not isinstance(rec, dict):
            raise ParseError("record is not an object", path=str(path), line=lineno)
        if rec.get("kind") == "meta":
            complete = rec.get("complete_orders", [])
            note = rec.get("note")
            continue
        try:
            if "id" not in rec:
                raise ParseError("record has no id", line=lineno)
            pres = None
            if "presentation" in rec:
                p = rec["presentation"]
                pres = GroupPresentation(int(p["generators"]), _as_word_list(p["relators"], lineno))
            gens = rec.get("generators")
            if gens is None and pres is None:
                raise ParseError(f"group {rec['id']}: needs generators or a presentation",
                                 line=lineno)
            degree = rec.get("degree")
            if gens is not None and degree is None:
                degree = len(gens[0]) if gens else 1
            order = rec.get("order")
            if order is not None and order > bound:
                raise OrderBoundExceeded(f"group {rec['id']}: order {order} exceeds bound {bound}")
            entries.append(CatalogEntry(rec["id"], rec.get("name", rec["id"]), order, degree,
                                        gens, pres, lineno, rec))
        except (KeyError, TypeError, ValueError) as exc:
            raise ParseError(f"malformed group record: {exc}", path=str(path), line=lineno) from None
        except ParseError as exc:
            raise ParseError(exc.message, path=str(path), line=lineno) from None
        except OrderBoundExceeded as exc:
            skipped.append((lineno, str(exc)))
    ids = [e.id for e in entries]
    if len(set(ids)) != len(ids):
        dup = sorted({i for i in ids if ids.count(i) > 1})
        raise ParseError(f"duplicate group ids: {dup}", path=str(path))
    return GroupCatalog(entries, complete, path=path, note=note, skipped=skipped)
