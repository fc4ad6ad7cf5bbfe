import io
import json
import re

import pytest

from torsioncert.certificate import CertificateDocument, CertificateFormatError
from torsioncert.cli import main
from torsioncert.modcurves import decomposition_table
from torsioncert.obstruction import check_torsion


def run(*argv):
    buf = io.StringIO()
    code = main(list(argv), out=buf)
    return code, buf.getvalue()


def test_check_ruled_out():
    code, out = run("check", "--n", "25")
    assert code == 0
    assert "verdict: RuledOut" in out
    assert "m=25 (t=3)" in out


def test_check_gonality_failure():
    code, out = run("check", "--n", "20")
    assert code == 2
    assert "verdict: Inconclusive" in out
    assert re.search(r"failing steps: .*gate\.gonality", out)


def test_check_cross_validate():
    code, out = run("check", "--n", "22", "--cross-validate")
    assert code == 0
    assert "oracle: confirmed" in out


def test_cross_validate_finds_curves_when_inconclusive():
    code, out = run("check", "--n", "7", "--degree", "1", "--cross-validate")
    assert code == 2
    assert "oracle: curves with a point of order 7 exist" in out


def test_cross_validate_over_cap():
    # 147 = 3 * 49 has ordinary trace -21 over F_125
    code, out = run("check", "--n", "49", "--prime", "5", "--cross-validate")
    assert code == 2
    assert "oracle: not run" in out


@pytest.mark.parametrize("argv", [
    ("check",),
    ("check", "--n", "x"),
    ("check", "--n", "0"),
    ("check", "--n", "25", "--degree", "4"),
    ("bogus",),
    (),
    ("enumerate", "--q", "6"),
    ("enumerate", "--q", "49"),
    ("enumerate", "--q", "9", "--orders", "--traces"),
    ("waterhouse", "--q", "12"),
    ("genus", "--n", "3"),
    ("tables", "--n", "50"),
])
def test_errors_exit_one(argv, capsys):
    assert main(list(argv)) == 1
    assert capsys.readouterr().err


def test_enumerate_with_point_of_order_empty():
    code, out = run("enumerate", "--q", "27", "--with-point-of-order", "25")
    assert code == 0
    assert out.rstrip().endswith("[]")
    assert ": 0" in out


def test_enumerate_with_point_of_order_nonempty():
    code, out = run("enumerate", "--q", "3", "--with-point-of-order", "7")
    assert code == 0
    assert "Z/1 x Z/7" in out


def test_enumerate_traces():
    code, out = run("enumerate", "--q", "2", "--traces")
    assert code == 0
    assert "{-2, -1, 0, 1, 2}" in out
    assert run("enumerate", "--q", "2")[1] == out


def test_enumerate_orders():
    code, out = run("enumerate", "--q", "3", "--orders")
    assert code == 0
    found = re.search(r"order set: \{(.*)\}", out).group(1)
    orders = {int(x) for x in found.split(",")}
    assert orders <= set(range(1, 8))


def test_waterhouse_27():
    code, out = run("waterhouse", "--q", "27")
    assert code == 0
    assert re.search(r"t=\s*3 .*inadmissible", out)
    assert re.search(r"t=\s*6 .*inadmissible", out)
    assert re.search(r"t=\s*9 .*admissible\s+\(4\)", out)


def test_genus():
    assert run("genus", "--n", "49") == (0, "genus(X_1(49)) = 69\n")


def test_tables_65():
    code, out = run("tables", "--n", "65")
    assert code == 0
    assert "finite: false" in out
    assert "consistent" in out


def test_tables_all():
    code, out = run("tables")
    assert code == 0
    assert out.count("consistent") == len(decomposition_table())
    assert "MISMATCH" not in out


def test_certificate_round_trip(tmp_path):
    path = tmp_path / "cert.json"
    code, out = run("check", "--n", "25", "--certificate", str(path))
    assert code == 0
    text = path.read_text()
    doc = CertificateDocument.from_json(text)
    assert doc.to_json() == text
    assert doc == CertificateDocument.from_certificate(check_torsion(25))
    assert doc.consistent()
    raw = json.loads(text)
    assert list(raw) == ["schema_version", "input", "steps", "verdict", "tool_version"]
    assert raw["input"] == {"N": 25, "d": 3, "p": 3}
    assert raw["verdict"] == "RuledOut"
    assert list(raw["steps"][0]) == ["index", "name", "kind", "statement", "status", "evidence", "citation"]


def test_inconclusive_certificate_consistent(tmp_path):
    path = tmp_path / "cert.json"
    assert run("check", "--n", "63", "--certificate", str(path))[0] == 2
    doc = CertificateDocument.from_json(path.read_text())
    assert doc.verdict == "Inconclusive" and doc.consistent()


def test_malformed_certificate():
    with pytest.raises(CertificateFormatError):
        CertificateDocument.from_json("{}")
    with pytest.raises(CertificateFormatError):
        CertificateDocument.from_json("not json")
    good = json.loads(CertificateDocument.from_certificate(check_torsion(25)).to_json())
    good["schema_version"] = 99
    with pytest.raises(CertificateFormatError):
        CertificateDocument.from_json(json.dumps(good))
