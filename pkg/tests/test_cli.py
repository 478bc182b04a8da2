"""Command-line interface: payload shapes, exit codes, format/env handling."""

import json
from fractions import Fraction as QQ

from click.testing import CliRunner

from ospq.cli import main


def run(*args, env=None):
    return CliRunner().invoke(main, list(args), env=env, catch_exceptions=False)


def rat(obj):
    return QQ(obj["num"], obj["den"])


# -- characters -----------------------------------------------------------------


def test_char_json_payload_round_trips():
    res = run("char", "--family", "osp", "-k", "1", "-r", "1", "-N", "2")
    assert res.exit_code == 0
    payload = json.loads(res.output)
    assert payload["command"] == "char"
    assert rat(payload["level"]["k"]) == 1
    terms = {
        (rat(t["q"]), rat(t["w"])): rat(t["coeff"]) for t in payload["series"]["terms"]
    }
    assert terms[(QQ(-1, 60), QQ(0))] == 1
    assert terms[(QQ(59, 60), QQ(1, 2))] == 1
    assert rat(payload["series"]["q_trunc"]) == 2


def test_char_table_format():
    res = run("char", "--family", "vir", "-k", "1", "-r", "1", "-s", "2",
              "-N", "3", "--format", "table")
    assert res.exit_code == 0
    assert "q-exp" in res.output
    assert "-1/40" in res.output


def test_char_fractional_level():
    res = run("char", "--family", "osp", "-p", "3", "--pprime", "5",
              "-r", "2", "-s", "1", "-N", "1")
    assert res.exit_code == 0
    payload = json.loads(res.output)
    assert rat(payload["level"]["k"]) == QQ(-6, 5)


def test_char_invalid_label_is_usage_error():
    res = run("char", "--family", "osp", "-k", "1", "-r", "2", "-N", "2")
    assert res.exit_code == 2


def test_level_flags_are_exclusive():
    res = run("char", "-k", "1", "-p", "5", "-r", "1", "-N", "2")
    assert res.exit_code == 2
    res = run("char", "-r", "1", "-N", "2")
    assert res.exit_code == 2


# -- identity verification commands ------------------------------------------------


def test_theta_identity_single_label():
    res = run("theta-identity", "-p", "5", "--pprime", "1", "-r", "1", "-s", "0",
              "-N", "20")
    assert res.exit_code == 0
    payload = json.loads(res.output)
    assert payload["ok"] is True


def test_decompose_all_labels_fractional():
    res = run("decompose", "-p", "3", "--pprime", "5", "-N", "3")
    assert res.exit_code == 0
    payload = json.loads(res.output)
    assert payload["ok"] is True
    assert len(payload["results"]) == 5
    assert all(r["ok"] and r["first_discrepancy"] is None for r in payload["results"])


# -- fusion ---------------------------------------------------------------------------


def test_fusion_table_spec_line():
    res = run("fusion", "--family", "osp", "-k", "1", "--format", "table")
    assert res.exit_code == 0
    assert "M2 x M2 = M1 + M3" in res.output


def test_fusion_json_coeffs():
    res = run("fusion", "--family", "vir", "-u", "3", "-p", "5")
    assert res.exit_code == 0
    payload = json.loads(res.output)
    assert payload["unit"] == {"r": 1, "s": 1}
    entries = {
        ((e["a"]["r"], e["a"]["s"]), (e["b"]["r"], e["b"]["s"]),
         (e["c"]["r"], e["c"]["s"])): e["n"]
        for e in payload["entries"]
    }
    assert entries[((1, 2), (1, 2), (1, 1))] == 1
    assert entries[((1, 2), (1, 2), (1, 3))] == 1
    assert ((1, 2), (1, 2), (1, 2)) not in entries


# -- modular data -----------------------------------------------------------------------


def test_smatrix_and_tmatrix_json():
    res = run("smatrix", "--family", "extended", "-k", "1")
    assert res.exit_code == 0
    payload = json.loads(res.output)
    assert float(payload["unitarity_defect"]) < 1e-60
    assert payload["precision_bits"] == 256
    res2 = run("tmatrix", "--family", "extended", "-k", "1")
    assert res2.exit_code == 0
    t = json.loads(res2.output)
    assert rat(t["central_charge"]) == QQ(2, 5)
    weights = [rat(w) for w in t["weights"]]
    assert QQ(-1, 20) in weights and QQ(9, 20) in weights
    assert t["locality"]["1"] == "local" and t["locality"]["2"] == "twisted"


def test_verlinde_matches_fusion_command():
    res = run("verlinde", "--family", "sl2", "-k", "2")
    assert res.exit_code == 0
    payload = json.loads(res.output)
    assert payload["matches_combinatorial"] is True


def test_verlinde_super_payload():
    res = run("verlinde-super", "-k", "1")
    assert res.exit_code == 0
    payload = json.loads(res.output)
    assert float(payload["basis_matrix_involution_defect"]) < 1e-60
    rows = {(e["r"], e["r2"], e["r3"]): (e["even"], e["odd"], e["total"])
            for e in payload["entries"]}
    assert rows[(1, 1, 1)] == (1, 0, 1)
    assert rows[(2, 2, 3)][2] == 1


def test_fpdim_spec_example():
    res = run("fpdim", "-k", "1")
    assert res.exit_code == 0
    payload = json.loads(res.output)
    assert payload["corollary_holds"] is True
    assert payload["ok"] is True
    assert payload["fp_Sk"].startswith("14.4721359549995")
    assert payload["fp_even"].startswith("1.0")
    assert payload["precision_bits"] == 256


def test_minweight_payload_and_usage_error():
    res = run("minweight", "-k", "2")
    assert res.exit_code == 0
    payload = json.loads(res.output)
    assert payload["label"] == {"r": 1, "s": 2}
    bad = run("minweight", "-u", "4", "-p", "9")
    assert bad.exit_code == 2


def test_stransform_check_quick():
    res = run("stransform-check", "-k", "1", "-N", "12", "--precision", "160",
              "--tau0", "1j")
    assert res.exit_code == 0
    payload = json.loads(res.output)
    assert payload["ok"] is True
    assert len(payload["entries"]) == 8


def test_stransform_rejects_real_tau():
    res = run("stransform-check", "-k", "1", "-N", "8", "--tau0", "0.5")
    assert res.exit_code == 1
    payload = json.loads(res.output)
    assert payload["ok"] is False
    assert payload["error"] == "NonconvergentDomain"


# -- coset commands -------------------------------------------------------------------------


def test_coset_char_both_routes():
    res = run("coset-char", "-k", "1", "--nu", "1", "-r", "3", "-N", "6",
              "--method", "both")
    assert res.exit_code == 0
    payload = json.loads(res.output)
    assert payload["routes_agree"] is True
    terms = {rat(t["q"]): rat(t["coeff"]) for t in payload["series"]["terms"]}
    assert terms[QQ(-1, 40)] == 1


def test_coset_smatrix_verified():
    # verify=True inside the command: unitarity + Verlinde integrality gates
    res = run("coset-smatrix", "-k", "2")
    assert res.exit_code == 0
    payload = json.loads(res.output)
    assert float(payload["unitarity_defect"]) < 1e-60
    assert payload["vacuum_index"] == 0
    assert payload["labels"][0] == {"nu": 0, "r": 1}


# -- global behaviours ------------------------------------------------------------------------


def test_out_option_writes_file(tmp_path):
    target = tmp_path / "payload.json"
    res = run("fusion", "--family", "sl2", "-k", "1", "--out", str(target))
    assert res.exit_code == 0
    payload = json.loads(target.read_text())
    assert payload["command"] == "fusion"


def test_order_env_override():
    res = run("char", "--family", "vir", "-k", "1", "-r", "1", "-s", "1",
              env={"OSPQ_ORDER": "3/2"})
    assert res.exit_code == 0
    payload = json.loads(res.output)
    assert rat(payload["order"]) == QQ(3, 2)


def test_bad_order_is_usage_error():
    res = run("char", "-k", "1", "-r", "1", "-N", "x/y")
    assert res.exit_code == 2


def test_selftest_fast_subset():
    res = run("selftest", "--fast", "--criterion", "1", "--criterion", "7")
    assert res.exit_code == 0
    payload = json.loads(res.output)
    assert payload["ok"] is True
    assert sorted(c["number"] for c in payload["criteria"]) == [1, 7]
    assert all(c["passed"] for c in payload["criteria"])
