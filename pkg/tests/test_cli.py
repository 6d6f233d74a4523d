"""Command-line surface: verbs, exit codes, and output determinism."""

import json

from click.testing import CliRunner

from cantordensity.cli import main


def invoke(*args):
    return CliRunner().invoke(main, list(args))


def write(path, document):
    path.write_text(json.dumps(document), encoding="utf-8")
    return str(path)


def test_measure_dualistic_golden(tmp_path):
    spec = write(tmp_path / "set.json", {"kind": "dualistic", "measure": "1/3"})
    result = invoke("measure", "--set", spec)
    assert result.exit_code == 0
    assert result.output == '{"lo": "1/3", "hi": "1/3"}\n'


def test_measure_with_prefix(tmp_path):
    spec = write(tmp_path / "set.json", {"kind": "clopen", "words": ["01", "110"]})
    result = invoke("measure", "--set", spec, "--prefix", "01")
    assert result.exit_code == 0
    assert json.loads(result.output) == {"lo": "1", "hi": "1"}


def test_trace_emits_one_object_per_line(tmp_path):
    spec = write(tmp_path / "set.json", {"kind": "clopen", "words": ["0"]})
    branch = write(tmp_path / "branch.json", {"kind": "ev_periodic", "period": "0"})
    result = invoke("trace", "--set", spec, "--branch", branch, "--steps", "4")
    assert result.exit_code == 0
    lines = result.output.splitlines()
    assert len(lines) == 4
    records = [json.loads(line) for line in lines]
    assert [r["n"] for r in records] == [0, 1, 2, 3]
    assert records[0] == {"n": 0, "lo": "1/2", "hi": "1/2"}
    assert records[3] == {"n": 3, "lo": "1", "hi": "1"}


def test_classify_full_space_converges(tmp_path):
    spec = write(tmp_path / "set.json", {"kind": "clopen", "words": [""]})
    branch = write(tmp_path / "branch.json", {"kind": "ev_periodic", "period": "0"})
    result = invoke(
        "classify", "--set", spec, "--branch", branch, "--eps", "1/100"
    )
    assert result.exit_code == 0
    record = json.loads(result.output)
    assert record["verdict"] == "converges"
    assert record["lo"] == "1" and record["hi"] == "1"


def test_classify_blurry_second_reduction(tmp_path):
    spec = write(tmp_path / "set.json", {"kind": "reduction", "which": "second"})
    branch = write(
        tmp_path / "branch.json",
        {"kind": "stretch", "of": {"kind": "ev_periodic", "period": "1"}},
    )
    result = invoke(
        "classify", "--set", spec, "--branch", branch,
        "--eps", "1/16", "--max-depth", "78",
    )
    assert result.exit_code == 0
    record = json.loads(result.output)
    assert record["verdict"] == "blurry"
    numerator, _, denominator = record["delta"].partition("/")
    assert int(numerator) / int(denominator) >= 1 - 1 / 16


def test_domain_error_exits_one_with_module_message(tmp_path):
    spec = write(tmp_path / "set.json", {"kind": "dualistic", "measure": "3/2"})
    result = invoke("measure", "--set", spec)
    assert result.exit_code == 1
    assert "measure must be in (0;1): 3/2" in result.stderr


def test_parse_errors_exit_two(tmp_path):
    bad_kind = write(tmp_path / "set.json", {"kind": "nonsense"})
    assert invoke("measure", "--set", bad_kind).exit_code == 2
    not_json = tmp_path / "broken.json"
    not_json.write_text("not json", encoding="utf-8")
    assert invoke("measure", "--set", str(not_json)).exit_code == 2
    missing = str(tmp_path / "absent.json")
    assert invoke("measure", "--set", missing).exit_code == 2
    spec = write(tmp_path / "ok.json", {"kind": "clopen", "words": []})
    assert invoke("measure", "--set", spec, "--prefix", "012").exit_code == 2


def test_unknown_verb_and_suite_exit_two():
    assert invoke("nosuchverb").exit_code == 2
    assert invoke("verify", "no-such-suite").exit_code == 2


def test_build_dualistic_round_trips(tmp_path):
    out = str(tmp_path / "spec.json")
    result = invoke("build", "dualistic", "--measure", "5/8", "-o", out)
    assert result.exit_code == 0
    document = json.loads(open(out, encoding="utf-8").read())
    assert document == {"kind": "dualistic", "measure": "5/8"}
    follow = invoke("measure", "--set", out)
    assert json.loads(follow.output) == {"lo": "5/8", "hi": "5/8"}


def test_build_rejects_domain_violations(tmp_path):
    out = str(tmp_path / "spec.json")
    result = invoke("build", "dualistic", "--measure", "3/2", "-o", out)
    assert result.exit_code == 1
    result = invoke(
        "build", "countable-range", "--value", "1/3", "--value", "1/3", "-o", out
    )
    assert result.exit_code == 1


def test_build_offspring_and_reduction(tmp_path):
    tree = write(
        tmp_path / "tree.json", {"nodes": [""], "policies": {"": "zeros"}}
    )
    out = str(tmp_path / "offspring.json")
    result = invoke(
        "build", "offspring", "--tree", tree,
        "--label", "=1/2", "--label", "0=1/4", "-o", out,
    )
    assert result.exit_code == 0
    document = json.loads(open(out, encoding="utf-8").read())
    assert document["labels"] == {"": "1/2", "0": "1/4"}
    out2 = str(tmp_path / "reduction.json")
    result = invoke(
        "build", "reduction", "--which", "first",
        "--preset", "constant", "--value", "1/2", "--tree", tree, "-o", out2,
    )
    assert result.exit_code == 0
    follow = invoke("measure", "--set", out2, "--budget", "12")
    assert follow.exit_code == 0
    result = invoke("build", "reduction", "--which", "second", "-o", out2)
    assert result.exit_code == 0
    missing_preset = invoke("build", "reduction", "--which", "third", "-o", out2)
    assert missing_preset.exit_code == 2


def test_verify_suites_pass_and_are_deterministic():
    first = invoke("verify", "branch-lemma", "--seed", "7", "--cases", "15")
    second = invoke("verify", "branch-lemma", "--seed", "7", "--cases", "15")
    assert first.exit_code == 0
    assert first.output == "15/15 pass\n"
    assert first.output == second.output
    for suite in ("dualistic-measure", "clopen-laws", "codec"):
        result = invoke("verify", suite, "--seed", "3", "--cases", "20")
        assert result.exit_code == 0, (suite, result.output)
        assert result.output == "20/20 pass\n"
