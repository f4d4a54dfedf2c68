"""Command-line interface.

Subcommands: knot-info, classify, poly, homs, tav-order, verify.

Every global flag can also be set through an environment variable named
TAVORDER_<FLAG> (for example TAVORDER_CACHE, TAVORDER_MAX_ORDER); flags win.

Exit codes
    0   success, or a definitive TAV order
    2   scan finished without a vanishing group ("> max_order")
    64  usage error (bad flags, unparsable hom spec)
    65  data error (bad tables, unknown knot or group, invalid hom,
        certificate mismatch or provenance failure)
    70  internal error
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import re
import sys
from pathlib import Path

from . import __version__, config
from .catalog import default_catalog_path, load_catalog
from .epi import enumerate_homs, epimorphism_orbits, reduce_by_conjugation, validate_hom
from .errors import DataError, GroupNotFound, InvalidHom, KnotNotFound, Mismatch, ProvenanceError, TavError
from .fox import TwistedSetup, classical_alexander, twisted_alexander
from .groups import classify_tav
from .knots import default_knot_table_path, format_word, load_knot_table, parse_word
from .search import (TavCertificate, TavReport, VerdictCache, classify_catalog, make_certificate,
                     recheck_outcome, tav_scan, verify_certificate)

EXIT_OK, EXIT_INDEFINITE, EXIT_USAGE, EXIT_DATA, EXIT_INTERNAL = 0, 2, 64, 65, 70
ENV_PREFIX = "TAVORDER_"

log = logging.getLogger("tavorder")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _env(name, default=None, cast=str):
    raw = os.environ.get(ENV_PREFIX + name)
    if raw is None or raw == "":
        return default
    try:
        return cast(raw)
    except ValueError:
        raise UsageError(f"{ENV_PREFIX}{name}={raw!r} is not a valid value")


def _global_flags():
    p = argparse.ArgumentParser(add_help=False)
    g = p.add_argument_group("global options")
    g.add_argument("--knots", metavar="PATH", help="knot table (JSON lines)")
    g.add_argument("--catalog", metavar="PATH", help="group catalog (JSON lines)")
    g.add_argument("--cache", metavar="DIR", help="verdict cache directory")
    g.add_argument("--threads", type=int, metavar="N")
    g.add_argument("--mode", choices=("screen", "certify"))
    g.add_argument("--format", choices=("text", "structured"), dest="fmt")
    g.add_argument("--max-order", type=int, metavar="N")
    g.add_argument("--seed", type=int, metavar="N")
    g.add_argument("-v", "--verbose", action="store_true")
    return p


def build_parser():
    common = _global_flags()
    ap = _Parser(prog="tavorder", description="Twisted Alexander vanishing toolkit.",
                 epilog="Exit codes: 0 ok/definitive, 2 '> max_order', 64 usage, 65 data, "
                        "70 internal.  Flags fall back to TAVORDER_* environment variables.")
    ap.add_argument("--version", action="version", version=f"tavorder {__version__}")
    sub = ap.add_subparsers(dest="cmd", required=True, parser_class=_Parser)

    s = sub.add_parser("knot-info", parents=[common], help="presentation and Alexander polynomial")
    s.add_argument("knot")

    s = sub.add_parser("classify", parents=[common], help="TAV classifier on catalog groups")
    s.add_argument("group", nargs="?", help="group id (omit with --order)")
    s.add_argument("--order", metavar="LO..HI", help="order or range, e.g. 24 or 1..23")

    s = sub.add_parser("homs", parents=[common], help="list homomorphisms or epimorphism orbits")
    s.add_argument("knot")
    s.add_argument("group")
    s.add_argument("--all", action="store_true", help="include non-surjective homs")
    s.add_argument("--orbits", action="store_true", help="one line per conjugation orbit")

    s = sub.add_parser("poly", parents=[common], help="twisted Alexander polynomial / vanishing")
    s.add_argument("knot")
    s.add_argument("group")
    s.add_argument("hom", nargs="?", help="x1=e17,x2=e5,... or x1=g2*g4*g5*g6,...")
    s.add_argument("--all-orbits", action="store_true")
    s.add_argument("--action", choices=("regular", "natural"), default="regular")
    s.add_argument("--no-poly", action="store_true", help="verdict only, skip the exact polynomial")
    s.add_argument("--certificate", metavar="PATH", help="write a certificate (single hom only)")

    s = sub.add_parser("tav-order", parents=[common], help="search for the TAV order of a knot")
    s.add_argument("knot")
    s.add_argument("--action", choices=("regular", "natural"), default="regular")
    s.add_argument("--report", metavar="PATH", help="also write the structured report here")
    s.add_argument("--certificate", metavar="PATH", help="write the Zero certificate here")

    s = sub.add_parser("verify", parents=[common], help="re-check a certificate or report")
    s.add_argument("path")
    return ap


# -- config ------------------------------------------------------------------

class RunConfig:
    def __init__(self, args):
        self.knots_path = Path(args.knots or _env("KNOTS") or default_knot_table_path()).resolve()
        self.catalog_path = Path(args.catalog or _env("CATALOG") or default_catalog_path()).resolve()
        cache = args.cache or _env("CACHE")
        self.cache_dir = Path(cache).resolve() if cache else None
        self.threads = args.threads if args.threads is not None else _env("THREADS", 1, int)
        self.mode = args.mode or _env("MODE", "screen")
        self.fmt = args.fmt or _env("FORMAT", "text")
        self.max_order = args.max_order if args.max_order is not None else _env("MAX_ORDER", 30, int)
        self.seed = args.seed if args.seed is not None else _env("SEED", config.DEFAULT_SEED, int)
        if self.mode not in ("screen", "certify"):
            raise UsageError(f"mode must be screen or certify, not {self.mode!r}")
        if self.fmt not in ("text", "structured"):
            raise UsageError(f"format must be text or structured, not {self.fmt!r}")
        if self.threads < 1 or self.max_order < 1:
            raise UsageError("--threads and --max-order must be positive")
        for label, path in (("knot table", self.knots_path), ("catalog", self.catalog_path)):
            if not path.is_file():
                raise UsageError(f"{label} {path} does not exist")

    def to_dict(self):
        return {"knots": str(self.knots_path), "catalog": str(self.catalog_path),
                "cache": None if self.cache_dir is None else str(self.cache_dir),
                "threads": self.threads, "mode": self.mode, "max_order": self.max_order,
                "seed": self.seed}


def _emit(cfg, text, data):
    if cfg.fmt == "structured":
        sys.stdout.write(json.dumps(data, indent=1, sort_keys=True) + "\n")
    else:
        sys.stdout.write(text.rstrip("\n") + "\n")
    sys.stdout.flush()


# -- hom specs ---------------------------------------------------------------

_SPEC_ITEM = re.compile(r"\s*x(\d+)\s*=\s*(.+?)\s*$")


def parse_hom_spec(spec, p, G):
    """``x1=e17,x2=e5`` (element indices) or ``x1=g2*g4*g5*g6`` (words in the
    catalog generators g1..gk, with ``^-1`` powers).  Mixed forms are fine."""
    images = [None] * p.ngens
    for item in spec.split(","):
        if not item.strip():
            continue
        m = _SPEC_ITEM.match(item)
        if not m:
            raise UsageError(f"cannot parse hom spec item {item.strip()!r}")
        k, rhs = int(m.group(1)), m.group(2).replace(" ", "")
        if not 1 <= k <= p.ngens:
            raise UsageError(f"x{k}: presentation has {p.ngens} generators")
        if images[k - 1] is not None:
            raise UsageError(f"x{k} given twice")
        if re.fullmatch(r"e\d+", rhs):
            idx = int(rhs[1:])
            if idx >= G.order:
                raise UsageError(f"x{k}={rhs}: group has {G.order} elements")
        else:
            try:
                word = parse_word(rhs.replace("*", ""), prefix="g")
            except ValueError as exc:
                raise UsageError(f"x{k}: {exc}")
            if any(abs(a) > len(G.gen_indices) for a in word):
                raise UsageError(f"x{k}={rhs}: group has {len(G.gen_indices)} generators")
            idx = G.evaluate_word(G.gen_indices, word)
        images[k - 1] = idx
    missing = [f"x{i + 1}" for i, v in enumerate(images) if v is None]
    if missing:
        raise UsageError("hom spec is missing " + ", ".join(missing))
    return images


def _parse_orders(text):
    m = re.fullmatch(r"\s*(\d+)\s*(?:\.\.\s*(\d+))?\s*", text)
    if not m:
        raise UsageError(f"--order expects N or LO..HI, got {text!r}")
    lo = int(m.group(1))
    return lo, int(m.group(2) or lo)


# -- commands ----------------------------------------------------------------

def cmd_knot_info(cfg, args, knots, catalog):
    p = knots.get(args.knot)
    delta = classical_alexander(p)
    data = {"knot": p.name, "source": p.source, "generators": p.ngens,
            "relators": [format_word(r, p.generator_names()) for r in p.relators],
            "meridian": format_word(p.meridian, p.generator_names()), "phi": list(p.phi),
            "longitude": (None if p.longitude is None
                          else format_word(p.longitude, p.generator_names())),
            "alexander": str(delta), "alexander_at_1": delta.evaluate(1),
            "digest": p.digest()}
    _emit(cfg, p.summary() + f"\n  Delta = {delta}", data)
    return EXIT_OK


def cmd_classify(cfg, args, knots, catalog):
    if args.group and args.order:
        raise UsageError("give a group id or --order, not both")
    if args.group:
        e = catalog.get(args.group)
        v = classify_tav(e.group())
        v.group_id, v.group_name = e.id, e.name
        rows, counts = [v], None
    else:
        lo, hi = _parse_orders(args.order or f"1..{cfg.max_order}")
        table = classify_catalog(catalog, lo, hi)
        rows, counts = table.verdicts, table.counts
    lines = []
    for v in rows:
        tag = "TAV" if v.is_tav else "not TAV"
        extra = ""
        if v.is_tav and v.witness_subgroup is not None:
            w = v.witness_subgroup
            extra = f"; witness subgroup of order {len(w.elements)} ({w.case})"
        elif v.reasons:
            extra = "; " + "; ".join(v.reasons)
        lines.append(f"{v.group_id:10s} |G|={v.order:<4d} [G,G] order {v.commutator_order:<3d} "
                     f"{tag}{extra}")
    data = {"verdicts": [v.to_dict() for v in rows]}
    if counts is not None:
        total, tav = sum(c[0] for c in counts.values()), sum(c[1] for c in counts.values())
        gaps = [o for o in range(lo, hi + 1) if not catalog.is_complete(o)]
        lines.append(f"{tav} TAV groups of {total} in orders {lo}..{hi}"
                     + (f" (catalog not declared complete for {len(gaps)} of these orders)"
                        if gaps else ""))
        data.update(counts={str(k): v for k, v in sorted(counts.items())}, total=total,
                    tav=tav, incomplete_orders=gaps)
    _emit(cfg, "\n".join(lines), data)
    return EXIT_OK


def cmd_homs(cfg, args, knots, catalog):
    p = knots.get(args.knot)
    G = catalog.group(args.group)
    homs = enumerate_homs(p, G, surjective_only=not args.all)
    what = "homomorphisms" if args.all else "epimorphisms"
    if args.orbits:
        orbits = reduce_by_conjugation(homs, G)
        lines = [f"{p.name} -> {args.group}: {len(homs)} {what} in {len(orbits)} orbits"]
        lines += [f"  {o.rep.spec()}  (orbit size {o.size}, image order {o.rep.image_order()})"
                  for o in orbits]
        data = {"knot": p.name, "group": args.group, "count": len(homs),
                "orbits": [{"images": list(o.rep.images), "size": o.size} for o in orbits]}
    else:
        lines = [f"{p.name} -> {args.group}: {len(homs)} {what}"]
        lines += [f"  {h.spec()}" + ("" if h.surjective else f"  (image order {h.image_order()})")
                  for h in homs]
        data = {"knot": p.name, "group": args.group, "count": len(homs),
                "homs": [{"images": list(h.images), "surjective": h.surjective} for h in homs]}
    _emit(cfg, "\n".join(lines), data)
    return EXIT_OK


def cmd_poly(cfg, args, knots, catalog):
    p = knots.get(args.knot)
    entry = catalog.get(args.group)
    G = entry.group()
    if bool(args.hom) == bool(args.all_orbits):
        raise UsageError("give exactly one of a hom spec or --all-orbits")
    if args.hom:
        homs = [validate_hom(p, G, parse_hom_spec(args.hom, p, G))]
    else:
        homs = [o.rep for o in epimorphism_orbits(p, G)]
        if args.certificate:
            raise UsageError("--certificate needs a single hom")
    lines, out = [], []
    for h in homs:
        setup = TwistedSetup.build(p, G, h, action=args.action)
        res = twisted_alexander(setup, mode=cfg.mode, threads=cfg.threads, seed=cfg.seed,
                                polynomial=not args.no_poly)
        verdict = "Zero" if res.zero else "NonZero"
        rec = {"images": list(h.images), "surjective": h.surjective, "verdict": verdict,
               "action": args.action, "degree": setup.degree, "test": res.test.to_dict()}
        if not res.zero and res.numerator is not None:
            rec["polynomial"] = res.describe()
        out.append(rec)
        surj = "epimorphism" if h.surjective else f"image order {h.image_order()}"
        lines.append(f"{p.name} -> {entry.id} [{h.spec()}] ({surj}, {args.action} action, "
                     f"degree {setup.degree}): {verdict}")
        if res.zero:
            t = res.test
            lines.append(f"  certified: {t.span + 1} exact evaluations at t = 2..{t.span + 2} "
                         f"vanish (matrix {t.size}x{t.size})" if not t.zero_row
                         else "  certified: numerator matrix has a zero row")
        elif "polynomial" in rec:
            lines.append(f"  {rec['polynomial']}")
        if args.certificate:
            make_certificate(p, entry, G, args.action, h.images, res.test).save(args.certificate)
    _emit(cfg, "\n".join(lines), {"knot": p.name, "group": entry.id, "results": out,
                                  "seed": cfg.seed, "mode": cfg.mode})
    return EXIT_OK


def cmd_tav_order(cfg, args, knots, catalog):
    cache = VerdictCache(cfg.cache_dir) if cfg.cache_dir else None
    report = tav_scan(args.knot, knots, catalog, cfg.max_order, mode=cfg.mode,
                      threads=cfg.threads, seed=cfg.seed, cache=cache, action=args.action)
    data = report.to_dict()
    if args.report:
        Path(args.report).write_text(json.dumps(data, indent=1, sort_keys=True) + "\n")
    if args.certificate and report.certificate is not None:
        report.certificate.save(args.certificate)
    _emit(cfg, report.to_text(), data)
    return EXIT_OK if report.definitive else EXIT_INDEFINITE


def cmd_verify(cfg, args, knots, catalog):
    try:
        data = json.loads(Path(args.path).read_text())
    except (OSError, ValueError) as exc:
        raise DataError(f"{args.path}: cannot read certificate ({exc})")
    if data.get("kind") == "tav-report":
        report = TavReport.from_dict(data)
        checked = 0
        if report.certificate is not None:
            verify_certificate(report.certificate, knots, catalog, threads=cfg.threads)
            checked += 1
        p = knots.get(report.knot)
        for g in report.groups:
            for o in g.outcomes:
                if not o.zero:
                    if not recheck_outcome(p, catalog.group(g.group_id), o):
                        raise Mismatch(f"{g.group_id} {o.images}: recorded nonzero witness "
                                       "not reproduced")
                    checked += 1
        _emit(cfg, f"ok: report for {report.knot} ({checked} verdicts re-checked)",
              {"ok": True, "checked": checked})
        return EXIT_OK
    cert = TavCertificate.from_dict(data)
    verify_certificate(cert, knots, catalog, threads=cfg.threads)
    _emit(cfg, f"ok: {cert.verdict} for {cert.knot} on {cert.group_id} "
               f"({len(cert.test.points) if cert.test.mode == 'certify' else 'screened'} "
               "evaluations reproduced)", {"ok": True, "verdict": cert.verdict})
    return EXIT_OK


COMMANDS = {"knot-info": cmd_knot_info, "classify": cmd_classify, "homs": cmd_homs,
            "poly": cmd_poly, "tav-order": cmd_tav_order, "verify": cmd_verify}


def main(argv=None):
    ap = build_parser()
    args = ap.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        cfg = RunConfig(args)
        knots = load_knot_table(cfg.knots_path)
        catalog = load_catalog(cfg.catalog_path)
        return COMMANDS[args.cmd](cfg, args, knots, catalog)
    except UsageError as exc:
        print(f"tavorder: usage: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except InvalidHom as exc:
        print(f"tavorder: invalid hom: {exc}", file=sys.stderr)
        return EXIT_DATA
    except Mismatch as exc:
        print(f"tavorder: mismatch: {exc}", file=sys.stderr)
        return EXIT_DATA
    except ProvenanceError as exc:
        print(f"tavorder: provenance: {exc}", file=sys.stderr)
        return EXIT_DATA
    except (DataError, KnotNotFound, GroupNotFound) as exc:
        print(f"tavorder: {exc}", file=sys.stderr)
        return EXIT_DATA
    except TavError as exc:
        print(f"tavorder: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_DATA
    except Exception as exc:  # noqa: BLE001
        log.debug("internal error", exc_info=True)
        print(f"tavorder: internal error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
