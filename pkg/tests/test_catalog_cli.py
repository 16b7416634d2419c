import json
import subprocess
import sys

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from zn_ktheory import catalog as cat
from zn_ktheory.cli import main
from zn_ktheory.exact_linalg import IntMatrix
from zn_ktheory.families import conjugate, cyclotomic, direct_sum, permutation, spec_corpus, trivial
from zn_ktheory.lattice_actions import ActionValidationError, E_SQUAREFREE, E_UNIMODULAR

HEX_TEXT = '{"n":2,"m":6,"matrix":[[1,-1],[1,0]],"name":"hexagonal"}'


def write(tmp_path, name, text):
    path = tmp_path / name
    path.write_text(text, encoding="utf-8")
    return str(path)


def run(argv, capsys):
    status = main(argv)
    out, err = capsys.readouterr()
    return status, out, err


# ---------------------------------------------------------------------------
# spec documents


def test_parse_hexagonal():
    spec = cat.parse_spec(HEX_TEXT)
    assert spec.name == "hexagonal" and spec.order == 6


@pytest.mark.parametrize(
    "text,code",
    [
        ('{"n":1,"m":4,"matrix":[[-1]]}', E_SQUAREFREE),
        ('{"n":2,"m":2,"matrix":[[2,0],[0,1]]}', E_UNIMODULAR),
    ],
)
def test_parse_validation_codes(text, code):
    with pytest.raises(ActionValidationError) as info:
        cat.parse_spec(text)
    assert info.value.code == code


def test_parse_syntax_error_has_position():
    with pytest.raises(cat.SpecSyntaxError) as info:
        cat.parse_spec('{"n": 2,\n "m": 6,, "matrix": []}')
    assert info.value.line == 2 and info.value.column is not None
    assert "line 2" in str(info.value)


@pytest.mark.parametrize(
    "text",
    ['[1, 2]', '{"n": 1, "m": 2}', '{"n":1,"m":2,"matrix":[[-1]],"colour":"red"}',
     '{"n":1,"m":2,"matrix":"-1"}', '{"n":1,"m":2,"matrix":[[-1]],"name":5}'],
)
def test_parse_structural_errors(text):
    with pytest.raises(cat.SpecSyntaxError):
        cat.parse_spec(text)


def test_big_integers_survive():
    big = 10 ** 40
    spec = cat.parse_spec(json.dumps({"n": 2, "m": 2, "matrix": [[1, big], [0, -1]]}))
    assert spec.A[0, 1] == big
    assert cat.parse_spec(cat.serialize_spec(spec)) == spec


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10 ** 6), st.sampled_from(spec_corpus(20, seed=41)))
def test_round_trip_generated_specs(seed, spec):
    spec = conjugate(spec, seed)
    assert cat.parse_spec(cat.serialize_spec(spec)) == spec


def test_generator_metadata_is_ignored_on_read():
    obj = cat.spec_to_obj(cyclotomic(3))
    obj["generator"] = {"family": "cyclotomic", "p": 3}
    assert cat.spec_from_obj(obj) == cyclotomic(3)


# ---------------------------------------------------------------------------
# families


def test_cyclotomic_three():
    assert cyclotomic(3).A == IntMatrix.from_rows([[0, -1], [1, -1]]) and cyclotomic(3).m == 3


def test_direct_sum_sign_and_trivial():
    spec = direct_sum(cyclotomic(2), trivial(1, 2))
    assert spec.A == IntMatrix.diagonal([-1, 1]) and spec.m == 2


def test_direct_sum_order_is_lcm():
    assert direct_sum(cyclotomic(2), cyclotomic(3)).m == 6
    assert direct_sum(cyclotomic(3), cyclotomic(5), cyclotomic(2)).m == 30
    with pytest.raises(ValueError):
        direct_sum()


def test_conjugate_deterministic_and_needs_seed():
    a, b = conjugate(cyclotomic(3), 42), conjugate(cyclotomic(3), 42)
    assert a == b
    assert a.A == IntMatrix.from_rows([[-26, -93], [7, 25]])
    with pytest.raises(TypeError):
        conjugate(cyclotomic(3), None)


def test_permutation_family():
    spec = permutation([2, 3])
    assert spec.m == 6 and spec.n == 5


# ---------------------------------------------------------------------------
# catalog


def test_bundled_catalog_loads():
    entries = cat.load_catalog(cat.bundled_catalog_text())
    names = {e.name for e in entries}
    assert {"infinite-dihedral", "pillowcase", "cyclotomic-3", "hexagonal"} <= names
    assert all(e.provenance in cat.PROVENANCE_TAGS for e in entries if e.expected)


def test_bundled_catalog_passes():
    status, report = cat.run_batch(cat.bundled_catalog_text(), strict=True)
    assert status == cat.EXIT_OK
    assert report["summary"]["mismatch"] == 0 and report["summary"]["invalid"] == 0
    expected = {"infinite-dihedral": (3, 0), "pillowcase": (6, 0), "cyclotomic-3": (8, 0), "hexagonal": (10, 0)}
    for entry in report["entries"]:
        if entry["name"] in expected:
            oracle = [c for c in entry["results"] if c["mode"] == "oracle"][0]
            assert (oracle["rank0"], oracle["rank1"]) == expected[entry["name"]]


def _dihedral_catalog(rank0):
    return json.dumps({"schema": 1, "entries": [{
        "name": "infinite-dihedral", "spec": {"n": 1, "m": 2, "matrix": [[-1]]},
        "expected": {"rank0": rank0, "rank1": 0, "provenance": "derived-oracle"}}]})


def test_wrong_expectation_strict_exits_3():
    status, report = cat.run_batch(_dihedral_catalog(4), strict=True)
    assert status == cat.EXIT_MISMATCH
    assert report["entries"][0]["status"] == "mismatch"


def test_wrong_expectation_lenient_exits_0_with_record():
    status, report = cat.run_batch(_dihedral_catalog(4))
    assert status == cat.EXIT_OK and report["summary"]["mismatch"] == 1


def test_empty_catalog():
    status, report = cat.run_batch('{"schema": 1, "entries": []}')
    assert status == cat.EXIT_OK and report["entries"] == []


def test_invalid_entry_exits_2():
    text = json.dumps({"schema": 1, "entries": [{"name": "bad", "spec": {"n": 1, "m": 4, "matrix": [[-1]]}}]})
    status, report = cat.run_batch(text)
    assert status == cat.EXIT_VALIDATION and "E_SQUAREFREE" in report["entries"][0]["error"]


def test_expected_needs_provenance():
    text = json.dumps({"schema": 1, "entries": [{
        "name": "x", "spec": {"n": 1, "m": 2, "matrix": [[-1]]}, "expected": {"rank0": 3, "rank1": 0}}]})
    with pytest.raises(cat.SpecSyntaxError):
        cat.load_catalog(text)


def test_duplicate_names_rejected():
    entry = {"name": "x", "spec": {"n": 1, "m": 2, "matrix": [[-1]]}}
    with pytest.raises(cat.SpecSyntaxError):
        cat.run_batch(json.dumps({"entries": [entry, entry]}))


def test_parallel_batch_matches_serial():
    text = cat.bundled_catalog_text()
    assert cat.dumps(cat.run_batch(text, jobs=1)[1]) == cat.dumps(cat.run_batch(text, jobs=3)[1])


def test_derived_assembly_entries_compare_against_assembly():
    text = json.dumps({"schema": 1, "entries": [{
        "name": "hex-assembly", "spec": {"n": 2, "m": 6, "matrix": [[1, -1], [1, 0]]},
        "expected": {"rank0": 6, "rank1": 0, "provenance": "derived-assembly"}}]})
    status, report = cat.run_batch(text, strict=True)
    # p = 3 gives 6 but p = 2 gives 4, so the entry is a mismatch at p = 2 only
    assert status == cat.EXIT_MISMATCH
    assert report["entries"][0]["mismatched"] == ["assembled p=2"]


# ---------------------------------------------------------------------------
# CLI


def test_cli_validate(tmp_path, capsys):
    status, out, _ = run(["validate", write(tmp_path, "hex.json", HEX_TEXT)], capsys)
    doc = json.loads(out)
    assert status == 0 and doc["order"] == 6 and doc["free_outside_origin"] is True
    assert [s["p"] for s in doc["splits"]] == [2, 3]


@pytest.mark.parametrize(
    "text,needle",
    [('{"n":1,"m":4,"matrix":[[-1]]}', "E_SQUAREFREE"),
     ('{"n":2,"m":2,"matrix":[[2,0],[0,1]]}', "E_UNIMODULAR"),
     ('{"n":1,\n"m":2,,}', "line 2")],
)
def test_cli_validate_errors(tmp_path, capsys, text, needle):
    status, out, err = run(["validate", write(tmp_path, "bad.json", text)], capsys)
    assert status == 2 and needle in err and out == ""


def test_cli_missing_file_is_io_error(tmp_path, capsys):
    status, _, err = run(["validate", str(tmp_path / "missing.json")], capsys)
    assert status == 1 and "cannot read" in err


def test_cli_compute_oracle(tmp_path, capsys):
    status, out, _ = run(["compute", write(tmp_path, "hex.json", HEX_TEXT)], capsys)
    doc = json.loads(out)
    assert status == 0 and doc["schema"] == 1
    (report,) = doc["reports"]
    assert (report["rank0"], report["rank1"]) == (10, 0)
    assert report["groups"] == "ℤ¹⁰ / 0"
    assert "torsion free" in report["provenance"]


def test_cli_compute_all_strict_reports_mismatch(tmp_path, capsys):
    path = write(tmp_path, "hex.json", HEX_TEXT)
    status, out, _ = run(["compute", path, "--mode", "all"], capsys)
    assert status == 0
    status, out2, _ = run(["compute", path, "--mode", "all", "--strict"], capsys)
    assert status == 3 and out == out2
    doc = json.loads(out)
    for report in doc["reports"]:
        assert report["mode"] in {"oracle", "assembled", "pure-p", "literal"}
        assert report["mode"] != "literal" or report["variant"]


def test_cli_compute_all_strict_agreement(tmp_path, capsys):
    path = write(tmp_path, "phi3.json", cat.serialize_spec(cyclotomic(3)))
    status, _, _ = run(["compute", path, "--mode", "all", "--variant", "full-tuple+multiplier", "--strict"], capsys)
    # the printed formula gives a different value from the oracle here too
    assert status == 3
    status, _, _ = run(["compute", path, "--mode", "assembled", "--strict"], capsys)
    assert status == 0


def test_cli_compute_alpha_filters_breakdown(tmp_path, capsys):
    path = write(tmp_path, "hex.json", HEX_TEXT)
    _, out, _ = run(["compute", path, "--mode", "assembled", "--prime", "3", "--alpha", "1"], capsys)
    (report,) = json.loads(out)["reports"]
    assert report["prime"] == 3 and all(t["alpha"] == 1 for t in report["breakdown"])


def test_cli_compute_bad_prime(tmp_path, capsys):
    status, _, err = run(["compute", write(tmp_path, "hex.json", HEX_TEXT), "--prime", "5"], capsys)
    assert status == 2 and "does not divide" in err


def test_cli_literal_refuses_undefined_k_l(tmp_path, capsys):
    path = write(tmp_path, "s.json", cat.serialize_spec(direct_sum(cyclotomic(2), cyclotomic(3))))
    status, _, err = run(["compute", path, "--mode", "literal", "--prime", "2"], capsys)
    assert status == 2 and "k_l undefined" in err
    status, out, _ = run(["compute", path, "--mode", "all"], capsys)
    assert status == 0 and json.loads(out)["skipped"]


def test_cli_cross_check(tmp_path, capsys):
    path = write(tmp_path, "hex.json", HEX_TEXT)
    status, out, _ = run(["cross-check", path], capsys)
    doc = json.loads(out)
    assert status == 0 and doc["verdict"] == "divergent"
    assert doc["cells"][0]["mode"] == "oracle"
    status, _, _ = run(["cross-check", path, "--strict"], capsys)
    assert status == 3


def test_cli_reports_byte_identical(tmp_path, capsys):
    path = write(tmp_path, "hex.json", HEX_TEXT)
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    assert main(["cross-check", path, "--out", str(a)]) == 0
    assert main(["cross-check", path, "--out", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()
    assert main(["catalog", "run", "--modes", "all", "--out", str(a)]) == 0
    assert main(["catalog", "run", "--modes", "all", "--out", str(b), "--jobs", "2"]) == 0
    assert a.read_bytes() == b.read_bytes()
    capsys.readouterr()


def test_cli_out_to_unwritable_path(tmp_path, capsys):
    status, _, err = run(["compute", write(tmp_path, "hex.json", HEX_TEXT),
                          "--out", str(tmp_path / "no" / "such" / "dir.json")], capsys)
    assert status == 1 and "cannot write" in err


def test_cli_catalog_run_and_exit_codes(tmp_path, capsys):
    status, out, _ = run(["catalog", "run", "--strict"], capsys)
    assert status == 0 and json.loads(out)["summary"]["mismatch"] == 0
    wrong = write(tmp_path, "wrong.json", _dihedral_catalog(4))
    assert run(["catalog", "run", wrong, "--strict"], capsys)[0] == 3
    assert run(["catalog", "run", wrong], capsys)[0] == 0
    empty = write(tmp_path, "empty.json", '{"schema": 1, "entries": []}')
    status, out, _ = run(["catalog", "run", empty], capsys)
    assert status == 0 and json.loads(out)["entries"] == []
    broken = write(tmp_path, "broken.json", '{"entries": [')
    assert run(["catalog", "run", broken], capsys)[0] == 2
    assert run(["catalog", "run", str(tmp_path / "none.json")], capsys)[0] == 1


def test_cli_generate(tmp_path, capsys):
    status, out, _ = run(["generate", "cyclotomic", "3"], capsys)
    doc = json.loads(out)
    assert status == 0 and doc["matrix"] == [[0, -1], [1, -1]] and doc["generator"]["p"] == 3
    spec_path = write(tmp_path, "c3.json", out)
    _, first, _ = run(["generate", "conjugate", spec_path, "--seed", "42"], capsys)
    _, second, _ = run(["generate", "conjugate", spec_path, "--seed", "42"], capsys)
    assert first == second and json.loads(first)["generator"]["seed"] == 42
    two = write(tmp_path, "c2.json", run(["generate", "cyclotomic", "2"], capsys)[1])
    status, out, _ = run(["generate", "direct-sum", two, spec_path], capsys)
    assert status == 0 and json.loads(out)["m"] == 6
    status, out, _ = run(["generate", "permutation", "2", "3"], capsys)
    assert json.loads(out)["m"] == 6
    status, out, _ = run(["generate", "trivial", "2", "--m", "3"], capsys)
    assert json.loads(out)["matrix"] == [[1, 0], [0, 1]]


def test_cli_generate_errors(tmp_path, capsys):
    assert run(["generate", "cyclotomic", "4"], capsys)[0] == 2
    two = write(tmp_path, "c2.json", cat.serialize_spec(cyclotomic(2)))
    sq = write(tmp_path, "p.json", cat.serialize_spec(permutation([2], m=2)))
    assert run(["generate", "direct-sum", two, sq], capsys)[0] == 0
    assert run(["generate", "trivial", "2", "--m", "4"], capsys)[0] == 2


def test_cli_stdin_and_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "zn_ktheory", "compute", "-"],
                          input=HEX_TEXT, capture_output=True, text=True, check=False)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["reports"][0]["rank0"] == 10
