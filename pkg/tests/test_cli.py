import json
import subprocess
import sys

import pytest

from isolab.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out
    return code, out


def run_json(capsys, *argv):
    code, out = run(capsys, *argv)
    return code, json.loads(out)


def test_slopes_ordinary(corpus_dir, capsys):
    code, out = run(capsys, "slopes", "--in",
                    str(corpus_dir / "ordinary2x2.json"))
    assert code == 0
    assert out == '{"slopes":[["-1",1],["0",1]]}\n'


def test_slopes_classical_flag_negates(corpus_dir, capsys):
    code, out = run(capsys, "--classical", "slopes", "--in",
                    str(corpus_dir / "ordinary2x2.json"))
    assert code == 0
    assert out == '{"slopes":[["0",1],["1",1]]}\n'


def test_classical_flag_after_subcommand(corpus_dir, capsys):
    _, first = run(capsys, "--classical", "slopes", "--in",
                   str(corpus_dir / "ordinary2x2.json"))
    _, second = run(capsys, "slopes", "--classical", "--in",
                    str(corpus_dir / "ordinary2x2.json"))
    assert first == second


def test_stdin_input(monkeypatch, capsys):
    import io
    payload = json.dumps({"p": 5, "f": 1, "N": 12,
                          "frobenius": [["1/5"]]})
    monkeypatch.setattr(sys, "stdin", io.StringIO(payload))
    code, doc = run_json(capsys, "slopes")
    assert code == 0
    assert doc == {"slopes": [["-1", 1]]}


def test_full_schema_input_accepted(corpus_dir, capsys, monkeypatch, tmp_path):
    # round-trip: hom output is full-schema JSON and must re-parse
    code, doc = run_json(capsys, "hom", "--in",
                         str(corpus_dir / "hom_pair.json"))
    assert code == 0
    p = tmp_path / "hom.json"
    p.write_text(json.dumps(doc))
    code2, doc2 = run_json(capsys, "slopes", "--in", str(p))
    assert code2 == 0
    # hom slope law: {-1/2 - 0, -1/2 - (-1)} each doubled
    assert doc2["slopes"] == [["-1/2", 2], ["1/2", 2]]


def test_split_supersingular(corpus_dir, capsys):
    code, doc = run_json(capsys, "split", "--in",
                         str(corpus_dir / "supersingular2x2.json"))
    assert code == 0
    assert len(doc["blocks"]) == 1
    assert doc["blocks"][0]["slope"] == "-1/2"
    assert doc["blocks"][0]["rank"] == 2


def test_dla_check(corpus_dir, capsys):
    code, doc = run_json(capsys, "dla-check", "--in",
                         str(corpus_dir / "heisenberg.json"))
    assert code == 0
    assert doc["antisymmetry"] and doc["jacobi"] and doc["f_equivariance"]
    assert doc["lattice_dieudonne"] and doc["lattice_bracket_closure"]


def test_lcs(corpus_dir, capsys):
    code, doc = run_json(capsys, "lcs", "--in",
                         str(corpus_dir / "heisenberg.json"))
    assert code == 0
    assert doc == {"dims": [3, 1, 0], "n_class": 2}


def test_bch_table(capsys):
    code, doc = run_json(capsys, "bch-table", "--class", "3")
    assert code == 0
    assert doc["denominator_primes"] == [2, 3]
    words = {t["word"]: t["coeff"] for t in doc["series"]}
    assert words == {"X": "1", "Y": "1", "XY": "1/2",
                     "XXY": "1/12", "XYY": "1/12"}


def test_bch_mul(corpus_dir, capsys):
    code, doc = run_json(capsys, "bch-mul", "--in",
                         str(corpus_dir / "bch_mul.json"))
    assert code == 0
    third = doc["product"][2]
    # 1/2 mod 5^16
    assert third["valuation"] == 0
    assert third["unit"][0] == (5 ** 16 + 1) // 2


def test_lattice_closure(corpus_dir, capsys):
    code, doc = run_json(capsys, "lattice-closure", "--in",
                         str(corpus_dir / "heisenberg.json"))
    assert code == 0
    assert doc == {"closed": True, "witness": None}


def test_leafdim_flags(capsys):
    code, doc = run_json(capsys, "leafdim", "--type", "GSp", "--n", "4",
                         "--nu", "0,0,-1,-1")
    assert code == 0 and doc == {"dim": 3}


def test_leafdim_classical_nu(capsys):
    code, doc = run_json(capsys, "--classical", "leafdim", "--type", "GSp",
                         "--n", "4", "--nu", "1,1,0,0")
    assert code == 0 and doc == {"dim": 3}


def test_leafdim_file_input(corpus_dir, capsys):
    code, doc = run_json(capsys, "leafdim", "--in",
                         str(corpus_dir / "gsp4_ordinary.json"))
    assert code == 0 and doc == {"dim": 3}


def test_slope_roots(corpus_dir, capsys):
    code, doc = run_json(capsys, "slope-roots", "--in",
                         str(corpus_dir / "gsp4_ordinary.json"))
    assert code == 0
    assert doc == {"slopes": [["-1", 3]]}


def test_nilclass(corpus_dir, capsys):
    code, doc = run_json(capsys, "nilclass", "--in",
                         str(corpus_dir / "gsp4_ordinary.json"))
    assert code == 0 and doc == {"n_class": 1}


def test_coxeter_gate(corpus_dir, capsys):
    code, doc = run_json(capsys, "coxeter-gate", "--p", "5", "--in",
                         str(corpus_dir / "gsp4_ordinary.json"))
    assert code == 0
    assert doc == {"h": 4, "h_weyl": 4, "n_class": 1,
                   "p_ge_h": True, "p_gt_n": True}


def test_perf_member_badseries(corpus_dir, capsys):
    code, doc = run_json(capsys, "perf-member", "--params", "2,1,0", "--in",
                         str(corpus_dir / "badseries.json"))
    assert code == 0
    assert doc["member"] is False
    assert doc["witness"]["exp"] == [{"num": 25, "pexp": 3}]


def test_perf_member_ordinary(corpus_dir, capsys):
    code, doc = run_json(capsys, "perf-member", "--params", "2,1,0", "--in",
                         str(corpus_dir / "ordseries.json"))
    assert code == 0
    assert doc == {"member": True, "witness": None}


def test_perf_ecd(corpus_dir, capsys):
    code, doc = run_json(capsys, "perf-ecd", "--E", "2", "--C", "1",
                         "--d", "1", "--in", str(corpus_dir / "ordseries.json"))
    assert code == 0 and doc["member"] is True


def test_rigidity(corpus_dir, capsys):
    code, doc = run_json(capsys, "rigidity", "--in",
                         str(corpus_dir / "rigidity_pos.json"))
    assert code == 0
    assert doc == {"congruences": [True, True, True],
                   "evaluation_zero": True, "ratio_ok": True}


def test_slope_exponents(capsys):
    code, doc = run_json(capsys, "slope-exponents", "--mu1", "1/2",
                         "--mu0", "1/3")
    assert code == 0 and doc == {"a": 1, "r": 2, "s": 3}


# ---- error contract ----

def test_malformed_json_exit_1(monkeypatch, capsys):
    import io
    monkeypatch.setattr(sys, "stdin", io.StringIO("nonsense"))
    code, doc = run_json(capsys, "slopes")
    assert code == 1
    assert doc["error"] == "MalformedInput"


def test_missing_file_exit_1(capsys):
    code, doc = run_json(capsys, "slopes", "--in", "/nonexistent.json")
    assert code == 1
    assert doc["error"] == "MalformedInput"


def test_non_dominant_nu_exit_1(capsys):
    code, doc = run_json(capsys, "leafdim", "--type", "GL", "--n", "2",
                         "--nu=-1,0")
    assert code == 1
    assert doc["error"] == "MalformedInput"


def test_module_error_exit_2(capsys):
    code, doc = run_json(capsys, "slope-exponents", "--mu1", "1/3",
                         "--mu0", "1/2")
    assert code == 2
    assert doc["error"] == "SlopeOrderViolated"


def test_fine_split_error_surfaces(capsys, tmp_path, monkeypatch):
    import io
    payload = json.dumps({
        "p": 5, "f": 1, "N": 8,
        "frobenius": [["0", "0", "0", "1/25"], ["1", "0", "0", "0"],
                      ["0", "1", "0", "0"], ["0", "0", "1", "0"]]})
    monkeypatch.setattr(sys, "stdin", io.StringIO(payload))
    code, doc = run_json(capsys, "split", "--fine")
    assert code == 2
    assert doc["error"] == "ResidueFieldTooSmall"
    assert doc["witness"]["required_degree"] == 2


def test_unknown_subcommand_exit_1(capsys):
    assert main(["definitely-not-a-command"]) == 1


def test_console_script_end_to_end(corpus_dir):
    out = subprocess.run(
        ["isolab", "slopes", "--in", str(corpus_dir / "ordinary2x2.json")],
        capture_output=True, text=True)
    assert out.returncode == 0
    assert out.stdout == '{"slopes":[["-1",1],["0",1]]}\n'


def test_precision_env_default(monkeypatch, capsys):
    import io
    monkeypatch.setenv("ISOLAB_PRECISION", "9")
    payload = json.dumps({"p": 5, "frobenius": [["1/5"]]})
    monkeypatch.setattr(sys, "stdin", io.StringIO(payload))
    code, doc = run_json(capsys, "slopes")
    assert code == 0 and doc == {"slopes": [["-1", 1]]}


def test_precision_flag_overrides_env(monkeypatch, capsys):
    import io
    monkeypatch.setenv("ISOLAB_PRECISION", "not-a-number")
    payload = json.dumps({"p": 5, "frobenius": [["1"]]})
    monkeypatch.setattr(sys, "stdin", io.StringIO(payload))
    code, doc = run_json(capsys, "--precision", "10", "slopes")
    assert code == 0 and doc == {"slopes": [["0", 1]]}
