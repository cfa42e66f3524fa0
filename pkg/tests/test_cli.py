import json
import subprocess
import sys
from fractions import Fraction

import pytest

from hgsheaf import cli
from hgsheaf.charsum import FiniteField
from hgsheaf.classify import half_grid, synthesize_rank1
from hgsheaf.hgdata import HGData, complex_data, finite_data
from hgsheaf.mellin import mellin_fq, mellin_order
from hgsheaf.moves import move_multiplicative
from hgsheaf.residues import Residue

GOOD = complex_data([[1], [1], [-2]], ["1/3", "1/5", "1/7"])
FINITE = finite_data([[1], [-1], [2]], ["1/3", "1/2", "1/6"], 7)


@pytest.fixture
def write(tmp_path):
    def _write(name, obj):
        path = tmp_path / name
        path.write_text(obj if isinstance(obj, str) else json.dumps(obj))
        return str(path)
    return _write


def run(capsys, *argv):
    code = cli.main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_validate_exit_codes(capsys, write):
    code, out, _ = run(capsys, "validate", write("a.json", GOOD.to_dict()))
    assert code == 0 and json.loads(out)["valid"]
    pair = {"flavor": "complex", "rank": 1, "l": [[1], [-1]], "kappa": ["1/2", "1/3"]}
    code, out, _ = run(capsys, "validate", write("b.json", pair), "--format", "text")
    assert code == 1 and "separated: false" in out
    bad = dict(GOOD.to_dict(), kappa=["1/0", "1/5", "1/7"])
    code, _, err = run(capsys, "validate", write("c.json", bad))
    assert code == 2 and "kappa[0]" in err
    code, _, err = run(capsys, "validate", write("d.json", '{"rank": 1,\n  "l": [1'))
    assert code == 2 and ":2:" in err


def test_resonance_report(capsys, write):
    code, out, _ = run(capsys, "resonance", write("a.json", GOOD.to_dict()))
    rep = json.loads(out)
    assert code == 0 and rep["nonresonant"] and rep["facets"]
    zero = complex_data([[1], [1], [-2]], [0, 0, 0])
    code, out, _ = run(capsys, "resonance", write("z.json", zero.to_dict()), "--format", "csv")
    assert code == 1 and out.startswith("facet,value,resonant")


def test_mellin_wraps_library(capsys, write):
    path = write("f.json", FINITE.to_dict())
    code, out, _ = run(capsys, "mellin", path, "--chi", "0", "--q", "7")
    rep = json.loads(out)
    chi = (Residue.zero(),)
    assert code == 0
    assert rep["value"] == mellin_fq(FINITE, chi, FiniteField.of_order(7)).to_dict()
    code, out, _ = run(capsys, "mellin", path, "--chi", "1/6", "--order-only", "--t", "5")
    assert json.loads(out)["order"] == str(mellin_order(FINITE, (Residue.of("1/6"),), 5))
    code, out, _ = run(capsys, "mellin", path, "--grid", "--format", "csv")
    lines = out.splitlines()
    assert lines[0] == "chi_1,t,value" and len(lines) == 1 + 6 * 2


def test_mellin_errors_surface(capsys, write):
    path = write("f.json", FINITE.to_dict())
    code, _, err = run(capsys, "mellin", path, "--chi", "0", "--q", "5")
    assert code == 2  # characteristic mismatch is caught before any sum
    d = finite_data([[1], [-1], [2]], ["1/4", "1/2", "0"], 7)
    code, _, err = run(capsys, "mellin", write("g.json", d.to_dict()), "--chi", "0", "--q", "7")
    assert code == 1 and "index 0" in err
    code, _, err = run(capsys, "mellin", path)
    assert code == 2 and "--chi" in err


def test_mellin_hodge(capsys, write):
    code, out, _ = run(capsys, "mellin", write("c.json", GOOD.to_dict()), "--chi", "1/11", "--hodge")
    rep = json.loads(out)
    assert code == 0 and rep["component_sum"] == "4" and rep["weight_mismatch"] is True


def test_normalize_and_equiv(capsys, write):
    d = complex_data([[2], [-1], [-1]], ["1/3", "1/5", "1/7"])
    a = write("a.json", d.to_dict())
    b = write("b.json", move_multiplicative(d, 0, 2).to_dict())
    code, out, _ = run(capsys, "normalize", a)
    rep = json.loads(out)
    assert code == 0 and rep["transcript"]["moves"][0] == {"move": "multiplicative", "i": 0, "d": 2}
    code, out, _ = run(capsys, "equiv", a, b)
    assert code == 0 and json.loads(out)["verdict"] == "equivalent"
    bumped = HGData(1, d.l, (d.kappa[0] + Fraction(1, 11),) + d.kappa[1:])
    code, out, _ = run(capsys, "equiv", a, write("c.json", bumped.to_dict()))
    assert code == 1 and json.loads(out)["witness"] is not None
    code, _, _ = run(capsys, "equiv", a, write("f.json", FINITE.to_dict()))
    assert code == 2


def test_recover_from_csv(capsys, write):
    f = synthesize_rank1([(1, Residue.of("1/4"), 2), (-1, Residue.of("1/4"), 1)], Fraction(3, 8), 4)
    text = "x,value\n" + "".join(f"{x},{v}\n" for x, v in f.items())
    code, out, _ = run(capsys, "recover", write("p.csv", text), "--N", "4")
    rep = json.loads(out)
    assert code == 0 and rep["constant"] == "3/8"
    assert rep["terms"] == [{"sign": -1, "kappa": "1/4", "multiplicity": 1},
                            {"sign": 1, "kappa": "1/4", "multiplicity": 2}]
    broken = "x,value\n" + "".join(f"{x},{x.value ** 2}\n" for x in half_grid(3))
    code, out, _ = run(capsys, "recover", write("q.csv", broken), "--N", "3")
    assert code == 1 and "not a bracket profile" in json.loads(out)["error"]


def test_audit(capsys):
    code, out, _ = run(capsys, "audit", "--N", "4", "--p", "3")
    rep = json.loads(out)
    assert code == 0 and rep["S"] == [4] and rep["rank_image"] == 0
    code, out, _ = run(capsys, "audit", "--N", "4", "--p", "5", "--dps", "20")
    rep = json.loads(out)
    assert code == 0 and rep["rank_image"] == 2 and rep["theta_checks"]
    code, _, err = run(capsys, "audit", "--N", "3", "--p", "5")
    assert code == 2 and "even" in err


def test_selftest_is_reproducible(capsys):
    first = run(capsys, "selftest", "--seed", "7", "--instances", "3")
    second = run(capsys, "selftest", "--seed", "7", "--instances", "3")
    assert first[0] == 0 and first[1] == second[1]


def test_usage_errors(capsys):
    assert run(capsys, "nonsense")[0] == 2
    assert run(capsys, "validate", "/nonexistent/file.json")[0] == 2


def test_module_entry_point(tmp_path):
    path = tmp_path / "a.json"
    path.write_text(GOOD.to_json())
    res = subprocess.run([sys.executable, "-m", "hgsheaf", "validate", str(path), "--format", "text"],
                         capture_output=True, text=True)
    assert res.returncode == 0 and "valid: true" in res.stdout
