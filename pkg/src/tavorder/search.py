"""TAV-order search: classifier pruning, epimorphism orbits, screen-then-certify
vanishing tests, certificates, and a persistent verdict cache."""

from __future__ import annotations

import hashlib
import json
import logging
import random
import warnings
from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path

from filelock import FileLock

from . import __version__, config
from .det import ZeroTest, det_is_zero, evaluate_at
from .epi import epimorphism_orbits, validate_hom
from .errors import CacheCorrupt, CatalogIncomplete, Mismatch, ProvenanceError, TavError
from .fox import TwistedSetup, wada_matrix
from .groups import classify_tav

log = logging.getLogger(__name__)


def group_digest(G):
    body = json.dumps({"degree": G.degree, "generators": [list(g) for g in G.generators]})
    return hashlib.sha256(body.encode()).hexdigest()


# -- cache -------------------------------------------------------------------

class VerdictCache:
    """Append-only JSON-lines store of vanishing verdicts.

    Keys hash the presentation, the group, the action, the hom images and the
    toolkit version, so editing any input (or upgrading) is a miss.  Each line
    carries a checksum of its own body; lines failing it are ignored with a
    CacheCorrupt warning.  Appends happen under a file lock, one whole line per
    write, so concurrent runs can share a directory.
    """

    FILE = "verdicts.jsonl"

    def __init__(self, directory):
        self.dir = Path(directory)
        self.dir.mkdir(parents=True, exist_ok=True)
        self.path = self.dir / self.FILE
        self.lock = FileLock(str(self.path) + ".lock")
        self._index = None

    @staticmethod
    def key(knot_digest, gdigest, action, images):
        body = json.dumps([knot_digest, gdigest, action, list(images), __version__])
        return hashlib.sha256(body.encode()).hexdigest()

    @staticmethod
    def _checksum(body):
        return hashlib.sha256(json.dumps(body, sort_keys=True).encode()).hexdigest()

    def _load(self):
        index = {}
        if self.path.exists():
            with self.lock:
                lines = self.path.read_text().splitlines()
            for n, line in enumerate(lines, 1):
                if not line.strip():
                    continue
                try:
                    rec = json.loads(line)
                    body = rec["body"]
                    if rec["check"] != self._checksum(body):
                        raise ValueError("checksum mismatch")
                    test = ZeroTest.from_dict(body["test"])
                except (ValueError, KeyError, TypeError) as exc:
                    warnings.warn(CacheCorrupt(f"{self.path}:{n}: ignoring corrupt record ({exc})"))
                    continue
                index.setdefault(body["key"], []).append(test)
        self._index = index

    def lookup(self, key, need_certify=False):
        if self._index is None:
            self._load()
        for test in self._index.get(key, []):
            if test.mode == "certify" or not need_certify:
                return test
        return None

    def store(self, key, test):
        if self._index is None:
            self._load()
        body = {"key": key, "version": __version__, "test": test.to_dict()}
        line = json.dumps({"body": body, "check": self._checksum(body)}, sort_keys=True)
        with self.lock:
            with open(self.path, "a") as fh:
                fh.write(line + "\n")
        self._index.setdefault(key, []).append(test)


# -- certificates ------------------------------------------------------------

@dataclass
class TavCertificate:
    knot: str
    knot_digest: str
    group_id: str
    group_order: int
    group_digest: str
    action: str
    images: list
    verdict: str
    test: ZeroTest
    timestamp: str = ""
    version: str = __version__

    def to_dict(self):
        return {"kind": "tav-certificate", "knot": self.knot, "knot_digest": self.knot_digest,
                "group_id": self.group_id, "group_order": self.group_order,
                "group_digest": self.group_digest, "action": self.action,
                "images": list(self.images), "verdict": self.verdict,
                "provenance": self.test.to_dict(), "timestamp": self.timestamp,
                "version": self.version}

    @classmethod
    def from_dict(cls, d):
        return cls(d["knot"], d["knot_digest"], d["group_id"], d["group_order"], d["group_digest"],
                   d["action"], list(d["images"]), d["verdict"], ZeroTest.from_dict(d["provenance"]),
                   d.get("timestamp", ""), d.get("version", ""))

    def save(self, path):
        Path(path).write_text(json.dumps(self.to_dict(), indent=1) + "\n")

    @classmethod
    def load(cls, path):
        return cls.from_dict(json.loads(Path(path).read_text()))


def make_certificate(p, entry, G, action, images, test):
    if test.zero and test.mode != "certify":
        raise TavError("zero certificates require certify-mode provenance")
    return TavCertificate(p.name, p.digest(), entry.id if entry else G.id, G.order, group_digest(G),
                          action, list(images), "Zero" if test.zero else "NonZero", test,
                          datetime.now(timezone.utc).isoformat(timespec="seconds"))


def verify_certificate(cert, knots, catalog, threads=1):
    """Recompute every recorded evaluation; raises Mismatch or ProvenanceError."""
    p = knots.get(cert.knot)
    if p.digest() != cert.knot_digest:
        raise ProvenanceError(f"knot {cert.knot}: presentation hash differs from the certificate's")
    G = catalog.group(cert.group_id)
    if group_digest(G) != cert.group_digest:
        raise ProvenanceError(f"group {cert.group_id}: generators differ from the certificate's")
    hom = validate_hom(p, G, cert.images)
    num, _ = wada_matrix(TwistedSetup.build(p, G, hom, action=cert.action))
    t = cert.test
    _, shift, span, zero_row = num.cleared()
    if (num.rows, span, shift) != (t.size, t.span, t.shift):
        raise Mismatch(f"matrix shape/span differ: recorded {(t.size, t.span, t.shift)}, "
                       f"recomputed {(num.rows, span, shift)}")
    if t.zero_row:
        if not zero_row:
            raise Mismatch("certificate claims a zero row, recomputed matrix has none")
        return True
    if t.mode == "certify":
        for x, v in zip(t.points, t.values):
            got = evaluate_at(num, x)
            if got != v:
                raise Mismatch(f"evaluation at t = {x}: recorded {v}, recomputed {got}", point=x)
        if t.zero and (len(t.points) != span + 1 or any(t.values)
                       or sorted(t.points) != list(range(2, span + 3))):
            raise Mismatch("zero verdict does not carry span + 1 zero evaluations")
        if not t.zero and not any(t.values):
            raise Mismatch("nonzero verdict has no nonzero evaluation")
    else:
        if cert.verdict == "Zero":
            raise Mismatch("screen-mode provenance cannot support a zero verdict")
        for p_, pts, vals in zip(t.primes, t.points, t.values):
            for x, v in zip(pts, vals):
                got = evaluate_at(num, x, modulus=p_)
                if got != v:
                    raise Mismatch(f"evaluation at t = {x} mod {p_}: recorded {v}, "
                                   f"recomputed {got}", point=x)
    if (cert.verdict == "Zero") != t.zero:
        raise Mismatch("verdict disagrees with the recorded evaluations")
    return True


# -- classification ----------------------------------------------------------

@dataclass
class ClassificationTable:
    verdicts: list
    counts: dict  # order -> [groups, tav]

    @property
    def total(self):
        return len(self.verdicts)

    @property
    def tav_count(self):
        return sum(v.is_tav for v in self.verdicts)

    def to_dict(self):
        return {"verdicts": [v.to_dict() for v in self.verdicts],
                "counts": {str(k): v for k, v in sorted(self.counts.items())},
                "total": self.total, "tav": self.tav_count}


def classify_catalog(catalog, lo=1, hi=None, witness_bound=config.WITNESS_SUBGROUP_BOUND):
    hi = hi if hi is not None else 10 ** 9
    verdicts, counts = [], {}
    for e in catalog.in_orders(lo, hi):
        v = classify_tav(e.group(), witness_bound=witness_bound)
        v.group_id, v.group_name = e.id, e.name
        verdicts.append(v)
        c = counts.setdefault(v.order, [0, 0])
        c[0] += 1
        c[1] += int(v.is_tav)
    return ClassificationTable(verdicts, counts)


# -- scan --------------------------------------------------------------------

@dataclass
class OrbitOutcome:
    images: list
    orbit_size: int
    zero: bool
    mode: str
    witness: dict | None = None
    recertified: bool = False
    cached: bool = False

    def to_dict(self):
        return {"images": list(self.images), "orbit_size": self.orbit_size,
                "verdict": "Zero" if self.zero else "NonZero", "mode": self.mode,
                "witness": self.witness, "recertified": self.recertified, "cached": self.cached}

    @classmethod
    def from_dict(cls, d):
        return cls(list(d["images"]), d["orbit_size"], d["verdict"] == "Zero", d["mode"],
                   d.get("witness"), d.get("recertified", False), d.get("cached", False))


@dataclass
class GroupSummary:
    group_id: str
    order: int
    is_tav: bool
    reasons: list
    epimorphisms: int | None = None
    outcomes: list = field(default_factory=list)

    def to_dict(self):
        return {"group_id": self.group_id, "order": self.order, "is_tav": self.is_tav,
                "reasons": list(self.reasons), "epimorphisms": self.epimorphisms,
                "orbits": None if self.epimorphisms is None else len(self.outcomes),
                "outcomes": [o.to_dict() for o in self.outcomes]}

    @classmethod
    def from_dict(cls, d):
        return cls(d["group_id"], d["order"], d["is_tav"], list(d["reasons"]), d["epimorphisms"],
                   [OrbitOutcome.from_dict(o) for o in d["outcomes"]])


@dataclass
class TavReport:
    knot: str
    max_order: int
    mode: str
    seed: int
    groups: list = field(default_factory=list)
    order: int | None = None
    certificate: TavCertificate | None = None
    incomplete_orders: list = field(default_factory=list)
    version: str = __version__

    @property
    def definitive(self):
        return self.order is not None

    @property
    def result(self):
        return str(self.order) if self.order is not None else f"> {self.max_order}"

    @property
    def status(self):
        below = self.order if self.order is not None else self.max_order + 1
        gaps = [o for o in self.incomplete_orders if o < below]
        if not gaps:
            return "exact"
        return "assuming catalog completeness for orders " + _ranges(gaps)

    def to_dict(self, stable=False):
        d = {"kind": "tav-report", "knot": self.knot, "max_order": self.max_order,
             "mode": self.mode, "seed": self.seed, "result": self.result, "order": self.order,
             "status": self.status, "incomplete_orders": list(self.incomplete_orders),
             "groups": [g.to_dict() for g in self.groups],
             "certificate": None if self.certificate is None else self.certificate.to_dict(),
             "version": self.version}
        if stable and d["certificate"] is not None:
            d["certificate"] = dict(d["certificate"], timestamp="")
        return d

    @classmethod
    def from_dict(cls, d):
        cert = d.get("certificate")
        return cls(d["knot"], d["max_order"], d["mode"], d["seed"],
                   [GroupSummary.from_dict(g) for g in d["groups"]], d["order"],
                   None if cert is None else TavCertificate.from_dict(cert),
                   list(d["incomplete_orders"]), d.get("version", __version__))

    def to_text(self):
        lines = [f"knot {self.knot}: TAV order {self.result} ({self.status})",
                 f"  scanned orders 1..{self.max_order}, mode {self.mode}, seed {self.seed}, "
                 f"version {self.version}"]
        for g in self.groups:
            if not g.is_tav:
                lines.append(f"  {g.group_id:10s} |G|={g.order:<4d} skipped: {'; '.join(g.reasons)}")
                continue
            zeros = sum(o.zero for o in g.outcomes)
            lines.append(f"  {g.group_id:10s} |G|={g.order:<4d} TAV group, {g.epimorphisms} "
                         f"epimorphisms in {len(g.outcomes)} orbits, {zeros} vanishing")
        if self.certificate is not None:
            c = self.certificate
            t = c.test
            lines.append(f"  certificate: {c.group_id} images {c.images}; {t.span + 1} exact "
                         f"evaluations at t = 2..{t.span + 2} all zero (matrix {t.size}x{t.size})")
        return "\n".join(lines)


def _ranges(xs):
    xs = sorted(xs)
    out, start, prev = [], xs[0], xs[0]
    for x in xs[1:]:
        if x != prev + 1:
            out.append(f"{start}..{prev}" if start != prev else str(start))
            start = x
        prev = x
    out.append(f"{start}..{prev}" if start != prev else str(start))
    return ", ".join(out)


def _recertify_pick(seed, gid, images, fraction):
    h = hashlib.sha256(json.dumps([seed, gid, list(images)]).encode()).digest()
    return random.Random(h).random() < fraction


def tav_scan(knot, knots, catalog, max_order, mode="screen", threads=1,
             seed=config.DEFAULT_SEED, cache=None, recertify_fraction=config.RECERTIFY_FRACTION,
             action="regular", primes=None):
    """Smallest-order catalog group onto which ``knot`` has a vanishing epimorphism.

    ``mode="screen"`` screens modulo primes and certifies every screen zero;
    ``mode="certify"`` runs exact evaluations for every orbit.
    """
    p = knots.get(knot) if isinstance(knot, str) else knot
    report = TavReport(p.name, max_order, mode, seed)
    report.incomplete_orders = [o for o in range(1, max_order + 1) if not catalog.is_complete(o)]
    if report.incomplete_orders:
        warnings.warn(CatalogIncomplete(
            f"catalog is not declared complete for orders {_ranges(report.incomplete_orders)}; "
            "the result is qualified"))
    kd = p.digest()
    for entry in catalog.in_orders(1, max_order):
        G = entry.group()
        verdict = classify_tav(G)
        summary = GroupSummary(entry.id, G.order, verdict.is_tav, list(verdict.reasons))
        report.groups.append(summary)
        if not verdict.is_tav:
            continue
        orbits = epimorphism_orbits(p, G)
        summary.epimorphisms = sum(o.size for o in orbits)
        gd = group_digest(G)
        for orb in orbits:
            images = orb.rep.images
            setup = TwistedSetup.build(p, G, orb.rep, action=action)
            key = VerdictCache.key(kd, gd, action, images) if cache else None
            test = cache.lookup(key, need_certify=(mode == "certify")) if cache else None
            cached = test is not None
            num = None
            if test is None:
                num, _ = wada_matrix(setup)
                test = det_is_zero(num, mode=mode, primes=primes, seed=seed, threads=threads)
                if cache:
                    cache.store(key, test)
            if test.zero and test.mode != "certify":
                num = num if num is not None else wada_matrix(setup)[0]
                test = det_is_zero(num, mode="certify", threads=threads)
                if cache:
                    cache.store(key, test)
            outcome = OrbitOutcome(list(images), orb.size, test.zero, test.mode, test.witness,
                                   cached=cached)
            if (not test.zero and test.mode == "screen"
                    and _recertify_pick(seed, entry.id, images, recertify_fraction)):
                num = num if num is not None else wada_matrix(setup)[0]
                exact = det_is_zero(num, mode="certify", threads=threads)
                if exact.zero:
                    raise TavError(f"screen and exact engines disagree on {entry.id} {images}")
                outcome.recertified = True
            summary.outcomes.append(outcome)
            if test.zero:
                report.order = G.order
                report.certificate = make_certificate(p, entry, G, action, images, test)
                log.info("vanishing found: %s on %s", p.name, entry.id)
                return report
    return report


def recheck_outcome(p, G, outcome, action="regular"):
    """Re-derive a recorded NonZero witness exactly (certify) or modulo its prime."""
    setup = TwistedSetup.build(p, G, outcome.images, action=action)
    num, _ = wada_matrix(setup)
    w = outcome.witness
    if w is None:
        return False
    if "prime" in w:
        return evaluate_at(num, w["point"], modulus=w["prime"]) == int(w["value"]) != 0
    return evaluate_at(num, w["point"]) == int(w["value"]) != 0
