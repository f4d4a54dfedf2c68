import json

import pytest

from tavorder.cli import EXIT_DATA, EXIT_INDEFINITE, EXIT_OK, EXIT_USAGE, main, parse_hom_spec

H_10_166 = ("x1=g2*g4*g5*g6,x2=g6*g3,x3=g6*g3,x4=g1*g6*g3*g5,x5=g1*g6*g3*g5,"
            "x6=g2*g4*g5*g6,x7=g6*g3*g5,x8=g6*g3*g5,x9=g1*g2*g3*g6,x10=g1*g2*g3*g6")


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_knot_info(capsys):
    code, out, _ = run(capsys, "knot-info", "3_1")
    assert code == EXIT_OK and "Delta = t^2 - t + 1" in out
    code, out, _ = run(capsys, "knot-info", "4_1", "--format", "structured")
    assert json.loads(out)["alexander"] == "t^2 - 3*t + 1"
    code, out, _ = run(capsys, "knot-info", "unknot")
    assert "Delta = 1" in out
    code, out, err = run(capsys, "knot-info", "99_1")
    assert code == EXIT_DATA and out == "" and "unknown knot" in err


def test_classify(capsys):
    code, out, _ = run(capsys, "classify", "--order", "1..23")
    assert code == EXIT_OK and "0 TAV groups of 59" in out
    _, out, _ = run(capsys, "classify", "D15")
    assert " TAV" in out and "cyclic-pq" in out
    _, out, _ = run(capsys, "classify", "A4")
    assert "not TAV" in out
    code, _, _ = run(capsys, "classify", "--order", "x..y")
    assert code == EXIT_USAGE


def test_poly_paper_hom(capsys, tmp_path):
    cert = tmp_path / "c.json"
    code, out, _ = run(capsys, "poly", "10_166", "Z2^4:S3", H_10_166, "--action", "natural",
                       "--mode", "certify", "--no-poly", "--certificate", str(cert))
    assert code == EXIT_OK and "epimorphism" in out and ": Zero" in out
    code, out, _ = run(capsys, "verify", str(cert))
    assert code == EXIT_OK and out.startswith("ok")
    d = json.loads(cert.read_text())
    d["provenance"]["values"][0] = "7"
    cert.write_text(json.dumps(d))
    code, _, err = run(capsys, "verify", str(cert))
    assert code == EXIT_DATA and "mismatch" in err and "t = 2" in err
    d["provenance"]["values"][0] = "0"
    d["knot_digest"] = "f" * 64
    cert.write_text(json.dumps(d))
    code, _, err = run(capsys, "verify", str(cert))
    assert code == EXIT_DATA and "provenance" in err


def test_poly_cyclic_and_invalid(capsys):
    code, out, _ = run(capsys, "poly", "3_1", "Z2", "x1=e1,x2=e1,x3=e1")
    assert code == EXIT_OK and "NonZero" in out
    code, _, err = run(capsys, "poly", "3_1", "S3", "x1=e1,x2=e2,x3=e3")
    assert code == EXIT_DATA and "relator r" in err
    code, _, err = run(capsys, "poly", "3_1", "S3", "x1=e1")
    assert code == EXIT_USAGE
    code, out, _ = run(capsys, "poly", "3_1", "S3", "--all-orbits", "--format", "structured")
    res = json.loads(out)["results"]
    assert len(res) == 1 and res[0]["verdict"] == "NonZero" and "polynomial" in res[0]


def test_parse_hom_spec(knots, catalog):
    p, G = knots.get("10_166"), catalog.group("Z2^4:S3")
    images = parse_hom_spec(H_10_166, p, G)
    assert len(images) == 10
    assert parse_hom_spec(",".join(f"x{i + 1}=e{v}" for i, v in enumerate(images)), p, G) == images


def test_homs(capsys):
    code, out, _ = run(capsys, "homs", "3_1@reduced", "S3", "--format", "structured")
    assert code == EXIT_OK and json.loads(out)["count"] == 6
    _, out, _ = run(capsys, "homs", "3_1", "S3", "--orbits")
    assert "1 orbits" in out


def test_tav_order_indefinite_and_env(capsys, monkeypatch, tmp_path):
    code, out, _ = run(capsys, "tav-order", "4_1", "--max-order", "24")
    assert code == EXIT_INDEFINITE and "> 24" in out
    monkeypatch.setenv("TAVORDER_MAX_ORDER", "23")
    monkeypatch.setenv("TAVORDER_FORMAT", "structured")
    monkeypatch.setenv("TAVORDER_CACHE", str(tmp_path / "cache"))
    code, out, _ = run(capsys, "tav-order", "3_1", "--report", str(tmp_path / "r.json"))
    d = json.loads(out)
    assert code == EXIT_INDEFINITE and d["result"] == "> 23"
    code, out, _ = run(capsys, "verify", str(tmp_path / "r.json"))
    assert code == EXIT_OK
    monkeypatch.setenv("TAVORDER_THREADS", "many")
    code, _, _ = run(capsys, "tav-order", "3_1")
    assert code == EXIT_USAGE


def test_usage_errors(capsys):
    with pytest.raises(SystemExit) as ei:
        main(["--bogus"])
    assert ei.value.code == EXIT_USAGE
    code, _, _ = run(capsys, "knot-info", "3_1", "--knots", "/nonexistent.jsonl")
    assert code == EXIT_USAGE


def test_bad_table_is_data_error(capsys, tmp_path):
    f = tmp_path / "k.jsonl"
    f.write_text("{broken\n")
    code, out, err = run(capsys, "knot-info", "3_1", "--knots", str(f))
    assert code == EXIT_DATA and out == "" and ":1:" in err
