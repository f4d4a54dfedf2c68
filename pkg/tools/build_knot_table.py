#!/usr/bin/env python3
"""Regenerate src/tavorder/data/knots.jsonl.

PD codes come from spherogram's Rolfsen table.  Each Wirtinger presentation is
checked against an independent source before it is written: the number of
homomorphisms into S3 and S4 must equal the count for snappy's simplified
fundamental group presentation (brute force), and Delta(1) must be +-1.

The explicit 10_166 presentation is the ten-relator Wirtinger presentation used
by the order-96 epimorphism check (the last relator dropped for deficiency one).  The
script checks that the PD-derived relators match it up to relabeling and
carries the PD longitude across that relabeling.

    python tools/build_knot_table.py [--out PATH]
"""

import argparse
import itertools
import json
import sys
import warnings
from pathlib import Path

warnings.filterwarnings("ignore")

import snappy  # noqa: E402
import spherogram  # noqa: E402

from tavorder.catalog import load_catalog  # noqa: E402
from tavorder.epi import enumerate_homs  # noqa: E402
from tavorder.fox import classical_alexander  # noqa: E402
from tavorder.knots import (KnotPresentation, abelianization_degrees, match_relabeling,  # noqa: E402
                            relabel_word, two_bridge, wirtinger_from_pd, wirtinger_relators,
                            PDCode)

KNOTS = ["3_1", "4_1", "5_2", "6_1", "8_15", "9_25", "9_35", "9_39", "9_41", "9_46",
         "9_49", "10_58", "10_67", "10_120", "10_146", "10_166"]

# two-bridge normal forms b(p, q), q odd, used for the reduced variants
TWO_BRIDGE = {"3_1": (3, 1), "4_1": (5, 3), "5_2": (7, 3), "6_1": (9, 7)}

PAPER_10_166 = [(4, 2, 1), (9, 2, 3), (6, 4, 3), (8, 5, 4), (2, 6, 5), (9, 7, 6),
                (5, 8, 7), (1, 9, 8), (2, 9, 10), (7, 1, 10)]


def snappy_words(name):
    G = snappy.Manifold(name).fundamental_group()
    gens = G.generators()
    rels = []
    for r in G.relators():
        w = []
        for ch in r:
            k = gens.index(ch.lower()) + 1
            w.append(k if ch.islower() else -k)
        rels.append(w)
    return len(gens), rels


def brute_count(n, rels, G):
    count = 0
    for images in itertools.product(range(G.order), repeat=n):
        if all(G.evaluate_word(images, r) == G.identity for r in rels):
            count += 1
    return count


def pres_dict(p):
    return {"generators": p.ngens, "relators": [list(r) for r in p.relators],
            "meridian": list(p.meridian), "phi": list(p.phi),
            "longitude": None if p.longitude is None else list(p.longitude)}


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--out", default=str(Path(__file__).resolve().parents[1]
                                          / "src" / "tavorder" / "data" / "knots.jsonl"))
    args = ap.parse_args(argv)
    cat = load_catalog()
    S3, S4 = cat.group("S3"), cat.group("S4")
    records = [{"name": "unknot", "pd": [], "provenance": "zero-crossing diagram"}]
    for name in KNOTS:
        pd = [list(c) for c in spherogram.Link(name).PD_code()]
        p = wirtinger_from_pd(pd, name)
        delta = classical_alexander(p)
        n, srels = snappy_words(name)
        for G in (S3, S4):
            ours = len(enumerate_homs(p, G))
            theirs = brute_count(n, srels, G)
            assert ours == theirs, (name, G.id, ours, theirs)
        rec = {"name": name, "pd": pd,
               "provenance": "PD code from spherogram's Rolfsen table; hom counts into S3 and S4 "
                             "agree with snappy's fundamental group"}
        variants = {}
        if name == "3_1":
            rels = [(1, 1, -2, -2, -2)]
            mer = (1, -2)
            q = KnotPresentation("3_1@torus", 2, rels, mer, abelianization_degrees(2, rels, mer),
                                 source="reduced")
            variants["torus"] = pres_dict(q)
        if name in TWO_BRIDGE:
            variants["reduced"] = pres_dict(two_bridge(name, *TWO_BRIDGE[name]))
        for var, d in variants.items():
            q = KnotPresentation(f"{name}@{var}", d["generators"], d["relators"], d["meridian"],
                                 d["phi"], source="reduced")
            assert classical_alexander(q) == delta, (name, var)
            for G in (S3, S4):
                assert len(enumerate_homs(q, G)) == len(enumerate_homs(p, G)), (name, var, G.id)
        if variants:
            rec["variants"] = variants
        if name == "10_166":
            rels_all, _ = wirtinger_relators(PDCode(pd))
            paper = [(a, b, -a, -c) for a, b, c in PAPER_10_166]
            sigma = match_relabeling(rels_all, paper, 10)
            assert sigma is not None, "PD relators do not match the printed presentation"
            explicit = KnotPresentation("10_166", 10, paper[:-1], (1,), [1] * 10,
                                        longitude=relabel_word(p.longitude, sigma),
                                        source="explicit")
            assert classical_alexander(explicit) == delta
            for G in (S3, S4):
                assert len(enumerate_homs(explicit, G)) == len(enumerate_homs(p, G))
            rec["presentation"] = pres_dict(explicit)
            rec["relabeling"] = {str(k): v for k, v in sorted(sigma.items())}
            rec["provenance"] += ("; explicit presentation is a ten-relator Wirtinger "
                                  "presentation with the last relator dropped; it equals the PD "
                                  "relators under the recorded relabeling")
        records.append(rec)
        print(f"{name:7s} gens {p.ngens:2d} Delta = {delta}", file=sys.stderr)
    with open(args.out, "w") as fh:
        for r in records:
            fh.write(json.dumps(r, separators=(",", ":")) + "\n")
    print(f"wrote {len(records)} knots to {args.out}", file=sys.stderr)


if __name__ == "__main__":
    main()
