import hashlib
import json

import pytest
from click.testing import CliRunner

from cli_corpus import ANNEX, F, PROFILES, corpus_commands
from conftest import FIXTURES, GOLDEN
from rreh.cli import STEPS, main
from rreh.dsl import parse


def run(*args):
    return CliRunner().invoke(main, list(args))


@pytest.mark.parametrize("args,code", corpus_commands(), ids=lambda v: " ".join(v) if isinstance(v, list) else None)
def test_exit_codes(args, code):
    res = run(*args)
    assert res.exit_code == code, res.output


def test_validate_json_schema():
    res = run("validate", "--format", "json", F["greenland"], F["algeria_ch4_verbatim"])
    assert res.exit_code == 1
    doc = json.loads(res.stdout)
    assert doc["schema"] == "rreh-validate/1"
    green, ch4 = doc["files"]
    assert green["valid"] and not green["errors"]
    assert "E002" in {e["code"] for e in ch4["errors"]}
    assert "W002" in {w["code"] for w in ch4["warnings"]}


def test_validate_unparseable_reports_location():
    res = run("validate", F["algeria_nh3_verbatim"])
    assert res.exit_code == 2
    assert "parse failed" in res.stdout and "algeria_nh3_verbatim.rreh:" in res.stdout


def test_validate_missing_file():
    assert run("validate", "no/such/file.rreh").exit_code == 2


def test_strict_turns_warnings_into_failure():
    # the verbatim CH4 fixture has E002 anyway; the corrected one has only infos
    assert run("--strict", "validate", F["algeria_ch4_corrected"]).exit_code == 0
    assert run("validate", "--strict", F["algeria_ch4_verbatim"]).exit_code == 1


def test_derive_outputs():
    res = run("derive", "--set", "all", F["greenland"])
    assert res.stdout.splitlines()[:5] == ["C = {H2, H2O, O2, electricity}", "E = {H2}", "I = {H2O}", "B = {O2}", "O = {}"]
    assert run("derive", "--set", "B", F["algeria_nh3_corrected"]).stdout == "Ar, O2, heat\nassert B: MATCH\n"
    assert run("-q", "derive", "--set", "B", F["algeria_nh3_corrected"]).stdout == "Ar, O2, heat\n"


def test_derive_assert_mismatch_and_strict():
    res = run("derive", F["algeria_ch4_verbatim"])
    assert res.exit_code == 0
    assert "assert C: MISMATCH" in res.stdout and "sea water" in res.stdout
    assert run("derive", "--strict", F["algeria_ch4_verbatim"]).exit_code == 1


def test_diff_golden_and_expect_same():
    res = run("diff", F["algeria_ch4_corrected"], F["algeria_nh3_corrected"])
    assert res.stdout == (GOLDEN / "diff_ch4_nh3.txt").read_text(encoding="utf-8")
    assert run("diff", "--expect-same", F["algeria_ch4_corrected"], F["algeria_nh3_corrected"]).exit_code == 1
    assert run("diff", "--expect-same", F["greenland"], F["greenland"]).exit_code == 0


def test_export_counts(tmp_path):
    out = tmp_path / "g.dot"
    res = run("export", "--dot", "--expand", F["greenland"], "-o", str(out))
    assert res.exit_code == 0 and res.stdout == f"wrote {out}: 4 nodes, 3 edges\n"
    assert out.read_text().startswith("digraph")
    res = run("export", "--skeleton", F["australia_ch3oh"], "-o", str(tmp_path / "s.txt"))
    assert "9 node blocks" in res.stdout


def test_export_unwritable_and_usage(tmp_path):
    assert run("export", "--dot", F["greenland"], "-o", str(tmp_path / "missing" / "x.dot")).exit_code == 2
    assert run("export", F["greenland"]).exit_code == 2
    assert run("export", "--skeleton", "--expand", F["greenland"]).exit_code == 2
    assert run("export", "--dot", F["algeria_ch4_verbatim"]).exit_code == 1


def test_optimize_toy():
    res = run("optimize", F["toy_wind_h2"], ANNEX["toy_wind_h2"], str(PROFILES / "toy"))
    assert "objective: 20\n" in res.stdout
    res = run("optimize", F["toy_wind_h2"], ANNEX["toy_wind_h2"], str(PROFILES / "toy"), "--demand", "H2:0", "--format", "json")
    assert json.loads(res.stdout)["objective"] == 0


def test_optimize_annex_missing_tech(tmp_path):
    text = (FIXTURES / "australia_ch3oh.econ.toml").read_text()
    start = text.index('[tech."Desalination@l"]')
    end = text.index("[tech.", start + 1)
    bad = tmp_path / "bad.econ.toml"
    bad.write_text(text[:start] + text[end:])
    res = run("optimize", F["australia_ch3oh"], str(bad), str(PROFILES / "australia"))
    assert res.exit_code == 2
    assert "Desalination@l" in res.stderr


def test_optimize_infeasible_certificate(tmp_path):
    text = (FIXTURES / "toy_wind_h2.econ.toml").read_text()
    capped = tmp_path / "capped.econ.toml"
    capped.write_text(text.replace('profile = "wind"', 'profile = "wind"\nbounds = [0.0, 0.5]'))
    res = run("optimize", F["toy_wind_h2"], str(capped), str(PROFILES / "toy"))
    assert res.exit_code == 3
    assert res.stdout.startswith("status: infeasible\n")
    assert "Farkas certificate verified" in res.stdout


def test_optimize_bad_inputs(tmp_path):
    assert run("optimize", F["toy_wind_h2"], ANNEX["toy_wind_h2"], str(tmp_path)).exit_code == 2  # no profile, no seed
    assert run("optimize", F["toy_wind_h2"], ANNEX["toy_wind_h2"], "--demand", "H2").exit_code == 2
    assert run("optimize", F["toy_wind_h2"], str(tmp_path / "none.toml")).exit_code == 2
    assert run("optimize", F["toy_wind_h2"], ANNEX["toy_wind_h2"], "--seed", "1", "--demand", "O2:1").exit_code == 2


def test_design_headers():
    res = run("design", "--from", F["australia_ch3oh"])
    heads = [l for l in res.stdout.splitlines() if l.startswith("# Step ")]
    assert len(heads) == len(STEPS) == 7
    assert "[satisfied]" in heads[0] and "[satisfied]" in heads[5]
    green = [l for l in run("design", "--from", F["greenland"]).stdout.splitlines() if l.startswith("# Step ")]
    assert "[unsatisfied]" in green[5]


def test_design_scaffold_parses():
    for args in (["design"], ["design", "--from", F["greenland"]]):
        res = run(*args)
        body = "\n".join(l for l in res.stdout.splitlines() if not l.startswith("# Step "))
        parse(body)


def _digest():
    return {p.name: hashlib.sha256(p.read_bytes()).hexdigest() for p in sorted(FIXTURES.rglob("*")) if p.is_file()}


def test_commands_are_deterministic_and_read_only():
    before = _digest()
    for args, _ in corpus_commands():
        a, b = run(*args), run(*args)
        assert (a.stdout_bytes, a.stderr_bytes) == (b.stdout_bytes, b.stderr_bytes), args
    assert _digest() == before
