import io
import json
import os
import subprocess
import sys

import pytest
import yaml

import oracles

from sievekit import cli, documents, gabriel

DATA = os.path.join(os.path.dirname(__file__), "data")


def d(name):
    return os.path.join(DATA, name)


def run(*argv):
    out, err = io.StringIO(), io.StringIO()
    report, status = cli.run(list(argv), out=out, err=err)
    return report, status, out.getvalue(), err.getvalue()


def test_gabriel_filters_on_z4():
    report, status, _, _ = run("gabriel", "filters", d("z4.ring"))
    assert status == 0
    assert report["count"] == len(oracles.gabriel_filters(gabriel.zmod(4)))


def test_topology_enumerate_point():
    report, status, _, _ = run("topology", "enumerate", d("point.cat"))
    assert status == 0 and report["count"] == 2


def test_validate_broken_names_the_triple():
    doc = yaml.safe_load(open(d("broken.cat")))
    from test_fincat import raw_table

    want = oracles.first_bad_triple(*raw_table(doc))
    report, status, _, _ = run("validate", d("broken.cat"))
    assert status == 2 and report["status"] == "error"
    item = report["items"][0]
    assert item["error"] == "associativity" and tuple(item["witness"]) == want


def test_parse_error_has_location():
    report, status, _, _ = run("validate", d("malformed.cat"))
    assert status == 2
    loc = report["items"][0]["location"]
    assert loc.startswith(d("malformed.cat") + ":2:")


def test_missing_file_is_an_input_error():
    report, status, _, _ = run("validate", d("nope.cat"))
    assert status == 2 and report["items"][0]["error"] == "document"


@pytest.mark.parametrize(
    "argv,guard,limit",
    [
        (["topology", "enumerate", "point.cat", "--max-sieves", "1"], "max-sieves", 1),
        (["gabriel", "ideals", "z4.ring", "--max-ring", "3"], "max-ring", 3),
        (["gabriel", "filters", "ut2.ring", "--max-ideals", "6"], "max-ideals", 6),
        (["gabriel", "correspond", "ut2.ring", "--max-ideals", "6"], "max-ideals", 6),
    ],
)
def test_guards_report_name_and_limit(argv, guard, limit):
    argv = [d(a) if a.endswith((".cat", ".ring")) else a for a in argv]
    report, status, _, _ = run(*argv)
    assert status == 2
    item = report["items"][0]
    assert (item["error"], item["guard"], item["limit"]) == ("guard", guard, limit)


def test_guard_can_be_raised():
    # walking arrow has 5 sieves in total
    _, status, _, _ = run("topology", "enumerate", d("walking_arrow.cat"), "--max-sieves", "4")
    assert status == 2
    _, status, _, _ = run("topology", "enumerate", d("walking_arrow.cat"), "--max-sieves", "5")
    assert status == 0


# (argv, expected exit status)
CONTRACT = [
    (["validate", "point.cat"], 0),
    (["validate", "walking_arrow.top"], 0),
    (["validate", "bad.top"], 0),
    (["validate", "z4.ring"], 0),
    (["validate", "ut2.ring"], 0),
    (["validate", "f2xf2.ring"], 0),
    (["validate", "z4_not_gabriel.filter"], 0),
    (["validate", "z4_bad_ideal.filter"], 2),
    (["validate", "collapse.fun"], 0),
    (["validate", "max_monoid.cat2"], 0),
    (["validate", "max_monoid.c2top"], 0),
    (["validate", "missing.cat"], 2),
    (["validate", "two.psh"], 2),
    (["topology", "check", "walking_arrow.top"], 0),
    (["topology", "check", "bad.top"], 1),
    (["topology", "check", "point.cat"], 2),
    (["topology", "enumerate", "walking_arrow.top"], 0),
    (["sheaf", "check", "walking_arrow.top", "two.psh"], 1),
    (["sheaf", "check", "point_all.top", "pair.psh"], 1),
    (["sheaf", "sheafify", "point_all.top", "pair.psh"], 0),
    (["sheaf", "sheafify", "bad.top", "two.psh"], 1),
    (["gabriel", "check", "z4_dense.filter"], 0),
    (["gabriel", "check", "z4_not_gabriel.filter"], 1),
    (["gabriel", "check", "z4_bad_ideal.filter"], 2),
    (["gabriel", "correspond", "z4.ring"], 0),
    (["gabriel", "ideals", "f2.ring"], 0),
    (["cat2", "homotopy-mono", "collapse.fun"], 1),
    (["cat2", "homotopy-mono", "iso_to_point.fun"], 0),
    (["cat2", "check", "max_monoid.c2top"], 0),
    (["cat2", "check", "empty.c2top"], 1),
    (["cat2", "induce", "two_cell_arrow.c2top"], 0),
    (["cat2", "induce", "empty.c2top"], 1),
    (["cat2", "lift", "walking_arrow.top"], 0),
    (["cat2", "lift", "bad.top"], 1),
    (["cat2", "check", "walking_arrow.top"], 2),
]


@pytest.mark.parametrize("argv,status", CONTRACT, ids=[" ".join(a) for a, _ in CONTRACT])
def test_exit_status_contract(argv, status):
    argv = [d(a) if "." in a else a for a in argv]
    report, got, _, _ = run(*argv)
    assert got == status
    assert report["status"] == {0: "ok", 1: "violations", 2: "error"}[status]


def _write(tmp_path, name, doc):
    path = tmp_path / name
    path.write_text(json.dumps(doc))
    return str(path)


@pytest.mark.parametrize("cat", ["point.cat", "discrete2.cat", "walking_arrow.cat"])
def test_enumerated_documents_reparse_and_pass_check(tmp_path, cat):
    report, _, _, _ = run("topology", "enumerate", d(cat))
    for item in report["items"]:
        path = _write(tmp_path, f"t{item['index']}.top", item["document"])
        again, status, _, _ = run("topology", "check", path)
        assert status == 0 and again["count"] == 0


def test_sheafify_output_is_a_sheaf(tmp_path):
    report, status, _, _ = run("sheaf", "sheafify", d("walking_arrow.top"), d("two.psh"))
    assert status == 0
    path = _write(tmp_path, "a.psh", report["items"][0]["document"])
    _, status, _, _ = run("sheaf", "check", d("walking_arrow.top"), path)
    assert status == 0


def test_gabriel_filter_documents_pass_check(tmp_path):
    report, _, _, _ = run("gabriel", "filters", d("ut2.ring"))
    assert report["count"] == len(oracles.gabriel_filters(gabriel.upper_triangular(2)))
    for item in report["items"]:
        path = _write(tmp_path, f"f{item['index']}.filter", item["document"])
        _, status, _, _ = run("gabriel", "check", path)
        assert status == 0


def test_lift_and_induce_round_trip(tmp_path):
    report, status, _, _ = run("cat2", "lift", d("walking_arrow.top"))
    assert status == 0
    lifted = _write(tmp_path, "l.c2top", report["items"][0]["document"])
    _, status, _, _ = run("cat2", "check", lifted)
    assert status == 0
    report, status, _, _ = run("cat2", "induce", lifted)
    assert status == 0
    induced = report["items"][0]["document"]
    original = documents.load(d("walking_arrow.top"))
    assert documents.topology_from_doc(induced).cov == documents.topology_from_doc(original).cov


def test_correspond_reports_agreement():
    report, status, _, _ = run("gabriel", "correspond", d("ut2.ring"))
    item = report["items"][0]
    assert status == 0 and item["agree"] and item["families"] == 2 ** item["ideals"]
    assert item["gabriel_filters"] == item["enriched_topologies"]


def test_stdin_input(monkeypatch):
    monkeypatch.setattr(sys, "stdin", io.StringIO(open(d("point.cat")).read()))
    report, status, _, _ = run("topology", "enumerate", "-")
    assert status == 0 and report["count"] == 2


def test_text_format_and_stderr_summary():
    report, status, out, err = run("gabriel", "ideals", d("z4.ring"), "--format", "text")
    assert out.splitlines()[1] == "status: ok"
    assert len([line for line in out.splitlines() if line.startswith("- ")]) == 3
    assert "item(s) in" in err and "item(s) in" not in out


def test_json_report_has_stable_field_order():
    _, _, out, _ = run("topology", "check", d("bad.top"))
    report = json.loads(out)
    assert list(report) == ["command", "status", "count", "items"]
    assert list(report["items"][0])[0] == "axiom"


def test_in_process_determinism():
    for argv, _ in CONTRACT:
        argv = [d(a) if "." in a else a for a in argv]
        assert run(*argv)[2] == run(*argv)[2]


def test_console_entry_point_exit_status():
    proc = subprocess.run([sys.executable, "-m", "sievekit", "validate", d("broken.cat")], capture_output=True, text=True)
    assert proc.returncode == 2
    assert json.loads(proc.stdout)["items"][0]["witness"] == ["b", "a", "b"]
    assert "error" in proc.stderr
