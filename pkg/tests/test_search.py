import json
import warnings

import pytest

from tavorder.catalog import load_catalog
from tavorder.det import det_is_zero
from tavorder.epi import epimorphism_orbits, validate_hom
from tavorder.errors import CacheCorrupt, CatalogIncomplete, KnotNotFound, Mismatch, ProvenanceError
from tavorder.fox import TwistedSetup, wada_matrix
from tavorder.groups import REASON_P_GROUP, classify_tav
from tavorder.knots import load_knot_table
from tavorder.search import (TavCertificate, TavReport, VerdictCache, classify_catalog,
                             group_digest, make_certificate, recheck_outcome, tav_scan,
                             verify_certificate)

H_10_166 = ["g2*g4*g5*g6", "g6*g3", "g6*g3", "g1*g6*g3*g5", "g1*g6*g3*g5", "g2*g4*g5*g6",
            "g6*g3*g5", "g6*g3*g5", "g1*g2*g3*g6", "g1*g2*g3*g6"]


def images_from_words(G, words):
    from tavorder.knots import parse_word
    return [G.evaluate_word(G.gen_indices, parse_word(w.replace("*", ""), prefix="g"))
            for w in words]


@pytest.fixture(scope="module")
def zero_certificate(knots, catalog):
    p = knots.get("10_166")
    entry = catalog.get("Z2^4:S3")
    G = entry.group()
    h = validate_hom(p, G, images_from_words(G, H_10_166))
    num, _ = wada_matrix(TwistedSetup.build(p, G, h, action="natural"))
    test = det_is_zero(num, mode="certify")
    return make_certificate(p, entry, G, "natural", h.images, test)


def test_classify_catalog_counts(catalog):
    table = classify_catalog(catalog, 1, 23)
    assert table.total == 59 and table.tav_count == 0
    t24 = classify_catalog(catalog, 24, 24)
    assert t24.tav_count >= 1
    assert table.to_dict()["counts"]["8"] == [5, 0]


def test_below_24_no_knot_computation(knots, catalog):
    r = tav_scan("9_46", knots, catalog, 23)
    assert r.result == "> 23" and not r.definitive
    assert all(not g.is_tav and g.epimorphisms is None for g in r.groups)
    assert len(r.groups) == 59


def test_fibered_scan_and_report_roundtrip(knots, catalog):
    r = tav_scan("3_1", knots, catalog, 30)
    assert r.result == "> 30" and r.status == "exact"
    outcomes = [o for g in r.groups for o in g.outcomes]
    assert outcomes and not any(o.zero for o in outcomes)
    again = TavReport.from_dict(json.loads(json.dumps(r.to_dict())))
    assert again.to_dict() == r.to_dict()
    assert "TAV order > 30" in r.to_text()
    p = knots.get("3_1")
    for g in r.groups:
        for o in g.outcomes:
            assert recheck_outcome(p, catalog.group(g.group_id), o)


def test_deterministic_across_threads(knots, catalog):
    a = tav_scan("5_2", knots, catalog, 30, threads=1).to_dict(stable=True)
    b = tav_scan("5_2", knots, catalog, 30, threads=3).to_dict(stable=True)
    assert a == b


def test_unknown_knot(knots, catalog):
    with pytest.raises(KnotNotFound):
        tav_scan("12a_1", knots, catalog, 24)


def test_incomplete_catalog_flagged(knots, tmp_path):
    f = tmp_path / "cat.jsonl"
    f.write_text(json.dumps({"id": "S4", "order": 24, "generators": [[1, 0, 2, 3], [1, 2, 3, 0]]}) + "\n")
    cat = load_catalog(f)
    with pytest.warns(CatalogIncomplete):
        r = tav_scan("3_1", knots, cat, 24)
    assert r.status.startswith("assuming catalog completeness")


def test_certificate_verify_and_tamper(zero_certificate, knots, catalog, tmp_path):
    c = zero_certificate
    assert c.verdict == "Zero" and c.test.mode == "certify"
    assert verify_certificate(c, knots, catalog)
    path = tmp_path / "c.json"
    c.save(path)
    loaded = TavCertificate.load(path)
    assert loaded.to_dict() == c.to_dict()
    d = c.to_dict()
    d["provenance"]["values"][3] = "1"
    with pytest.raises(Mismatch) as ei:
        verify_certificate(TavCertificate.from_dict(d), knots, catalog)
    assert ei.value.point == c.test.points[3]
    d = c.to_dict()
    d["knot_digest"] = "0" * 64
    with pytest.raises(ProvenanceError):
        verify_certificate(TavCertificate.from_dict(d), knots, catalog)


def test_screen_certificate_cannot_claim_zero(knots, catalog):
    p = knots.get("3_1")
    G = catalog.group("S4")
    o = epimorphism_orbits(p, G)[0]
    num, _ = wada_matrix(TwistedSetup.build(p, G, o.rep))
    test = det_is_zero(num, mode="screen")
    c = make_certificate(p, None, G, "regular", o.rep.images, test)
    c.group_id = "S4"
    assert c.verdict == "NonZero" and verify_certificate(c, knots, catalog)


def test_cache_hit_miss_and_corruption(knots, catalog, tmp_path):
    cache = VerdictCache(tmp_path)
    r1 = tav_scan("3_1", knots, catalog, 24, cache=cache)
    cache2 = VerdictCache(tmp_path)
    r2 = tav_scan("3_1", knots, catalog, 24, cache=cache2)
    o1 = [o for g in r1.groups for o in g.outcomes]
    o2 = [o for g in r2.groups for o in g.outcomes]
    assert not any(o.cached for o in o1) and all(o.cached for o in o2)
    assert [o.zero for o in o1] == [o.zero for o in o2]
    G = catalog.group("S4")
    key = VerdictCache.key(knots.get("3_1").digest(), group_digest(G), "regular", o1[0].images)
    assert cache2.lookup(key) is not None
    other = VerdictCache.key(knots.get("4_1").digest(), group_digest(G), "regular", o1[0].images)
    assert cache2.lookup(other) is None
    # corrupt every stored line
    lines = cache.path.read_text().splitlines()
    cache.path.write_text("\n".join(l.replace('"zero": false', '"zero": true') for l in lines)
                          + "\nnot json\n")
    with pytest.warns(CacheCorrupt):
        fresh = VerdictCache(tmp_path)
        assert fresh.lookup(key) is None
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", CacheCorrupt)
        r3 = tav_scan("3_1", knots, catalog, 24, cache=VerdictCache(tmp_path))
    assert [o.zero for g in r3.groups for o in g.outcomes] == [o.zero for o in o1]


TWELVE = ["S3", "D5", "Dic3", "A4", "D7", "D9", "Z3xS3", "Z3^2:Z2", "Dic5", "F5", "Z7:Z3", "D11"]


def test_twelve_nonabelian_groups_rejected(catalog):
    below = catalog.in_orders(1, 23)
    # abelian groups of order 1..23 (OEIS A000688 summed)
    assert sum(e.group().is_abelian() for e in below) == 34
    single = [e.id for e in below if not e.group().is_abelian()
              and classify_tav(e.group()).normally_single_generated]
    assert sorted(single) == sorted(TWELVE)
    for gid in TWELVE:
        v = classify_tav(catalog.group(gid))
        assert not v.is_tav and v.reasons == [REASON_P_GROUP]


@pytest.mark.slow
def test_classifier_sound_against_engine(knots, catalog):
    """No classifier-rejected group of order <= 24 gives a vanishing verdict."""
    for name in ["3_1", "4_1", "5_2", "9_46"]:
        p = knots.get(name)
        for e in catalog.in_orders(2, 24):
            G = e.group()
            if classify_tav(G).is_tav:
                continue
            for o in epimorphism_orbits(p, G):
                num, _ = wada_matrix(TwistedSetup.build(p, G, o.rep))
                t = det_is_zero(num, mode="screen")
                if t.zero:
                    t = det_is_zero(num, mode="certify")
                assert not t.zero, (name, e.id, o.rep.images)
