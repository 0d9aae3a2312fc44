import json
import subprocess
import sys

import pytest

from ringoid import cli
from ringoid.category import cat_to_json, catalog


def run_cli(args, capsys):
    code = cli.main(args)
    out = capsys.readouterr().out
    return code, out


def test_jans_on_catalog(capsys):
    code, out = run_cli(["jans", "catalog:a2cat", "--p", "2"], capsys)
    assert code == 0
    assert "jans-roundtrip" in out
    assert "pass" in out


def test_gabriel_json_counts(capsys):
    code, out = run_cli(["gabriel", "catalog:dual", "--p", "2", "--enumerate", "--json"], capsys)
    assert code == 0
    doc = json.loads(out)
    topo = next(f for f in doc["findings"] if f["statement_id"] == "topology-axioms")
    assert topo["witness"]["topologies"] == 2


def test_json_report_determinism(capsys):
    code1, out1 = run_cli(["census", "catalog:pt", "--p", "2", "--json"], capsys)
    code2, out2 = run_cli(["census", "catalog:pt", "--p", "2", "--json"], capsys)
    assert code1 == code2 == 0
    assert out1 == out2


def test_census_pt2(capsys):
    code, out = run_cli(["census", "catalog:pt", "--p", "2", "--json"], capsys)
    assert code == 0
    doc = json.loads(out)
    by_id = {f["statement_id"]: f for f in doc["findings"]}
    assert by_id["ideal-count"]["witness"]["count"] == 2
    assert by_id["idempotent-ideal-count"]["witness"]["count"] == 2
    assert by_id["topology-count"]["witness"]["count"] == 2
    assert by_id["ttf-roundtrips"]["witness"]["count"] == 2
    assert by_id["split-ttf-count"]["witness"]["count"] == 2


def test_census_dual2(capsys):
    code, out = run_cli(["census", "catalog:dual", "--p", "2", "--json"], capsys)
    assert code == 0
    doc = json.loads(out)
    by_id = {f["statement_id"]: f for f in doc["findings"]}
    assert by_id["ideal-count"]["witness"]["count"] == 3
    assert by_id["idempotent-ideal-count"]["witness"]["count"] == 2
    assert by_id["topology-count"]["witness"]["count"] == 2
    assert by_id["torsion-fingerprints"]["witness"]["count"] == 2
    assert by_id["split-ttf-count"]["witness"]["count"] == 2


def test_census_a2cat2(capsys):
    code, out = run_cli(["census", "catalog:a2cat", "--p", "2", "--json"], capsys)
    assert code == 0
    doc = json.loads(out)
    by_id = {f["statement_id"]: f for f in doc["findings"]}
    assert by_id["ideal-count"]["witness"]["count"] == 5
    assert by_id["idempotent-ideal-count"]["witness"]["count"] == 4
    assert by_id["topology-count"]["witness"]["count"] == 4
    assert by_id["torsion-fingerprints"]["witness"]["count"] == 4
    assert by_id["ttf-roundtrips"]["witness"]["count"] == 4
    assert by_id["split-ttf-count"]["witness"]["count"] == 2


def test_validate_good_file(tmp_path, capsys):
    path = tmp_path / "cat.json"
    path.write_text(cat_to_json(catalog("dual(2)")))
    code, out = run_cli(["validate", str(path)], capsys)
    assert code == 0


def test_validate_broken_category(tmp_path, capsys):
    # a one-object table where the declared unit is not a unit
    doc = {
        "p": 2,
        "objects": ["x"],
        "hom": {"x|x": 2},
        "comp": {"x|x|x": [[[1, 0], [1, 0]], [[1, 0], [1, 0]]]},
        "id": {"x": [1, 0]},
    }
    path = tmp_path / "broken.json"
    path.write_text(json.dumps(doc))
    code = cli.main(["validate", str(path)])
    out = capsys.readouterr().out
    assert code == 65
    assert "fail" in out


def test_unreadable_file():
    assert cli.main(["validate", "/nonexistent/file.json"]) == 65


def test_unknown_catalog():
    assert cli.main(["validate", "catalog:nosuch", "--p", "2"]) == 65


def test_bad_flags_usage_error():
    assert cli.main(["not-a-command", "catalog:pt", "--p", "2"]) == 64


def test_refusal_on_tiny_cap(monkeypatch, capsys):
    monkeypatch.setenv("RINGOID_CAP_VECTORS", "2")
    code, out = run_cli(["gabriel", "catalog:dual", "--p", "2"], capsys)
    assert code == 2
    assert "refused" in out
    assert "cap 2" in out


def test_complete_emits_interchange_category(capsys):
    code, out = run_cli(["complete", "catalog:pt", "--p", "2", "--bound", "2"], capsys)
    assert code == 0
    first_line = out.splitlines()[0]
    from ringoid.category import cat_from_json, validate

    emitted = cat_from_json(first_line)
    assert validate(emitted) == []
    assert len(emitted.objects) == 3  # (), (x), (x,x)


def test_complete_idempotents(capsys):
    code, out = run_cli(
        ["complete", "catalog:dual", "--p", "2", "--bound", "1", "--idempotents"], capsys
    )
    assert code == 0


def test_complete_json_embeds_category(capsys):
    code, out = run_cli(
        ["complete", "catalog:pt", "--p", "2", "--bound", "2", "--json"], capsys
    )
    assert code == 0
    doc = json.loads(out)
    assert doc["emitted"]["objects"] == ["()", "(x)", "(x,x)"]


def test_recollement_all(capsys):
    code, out = run_cli(
        ["recollement", "catalog:a2cat", "--p", "2", "--bound", "2", "--dim", "3", "--json"],
        capsys,
    )
    assert code == 0
    doc = json.loads(out)
    assert len(doc["findings"]) == 4
    assert all(f["verdict"] == "pass" for f in doc["findings"])


def test_recollement_single_index(capsys):
    code, out = run_cli(
        ["recollement", "catalog:prod", "--p", "2", "--bound", "1", "--dim", "3",
         "--ideal", "1", "--json"],
        capsys,
    )
    assert code == 0
    doc = json.loads(out)
    assert len(doc["findings"]) == 1


def test_center_command(capsys):
    code, out = run_cli(
        ["center", "catalog:prod", "--p", "2", "--idempotents", "--summands", "--json"], capsys
    )
    assert code == 0
    doc = json.loads(out)
    by_id = {f["statement_id"]: f for f in doc["findings"]}
    assert by_id["center-dimension"]["witness"]["dim"] == 2
    assert by_id["center-idempotents"]["witness"]["count"] == 4
    assert by_id["summand-bijection"]["verdict"] == "pass"


def test_ideals_command(capsys):
    code, out = run_cli(
        ["ideals", "catalog:a2cat", "--p", "2", "--idempotent", "--bound", "2", "--json"], capsys
    )
    assert code == 0
    doc = json.loads(out)
    by_id = {f["statement_id"]: f for f in doc["findings"]}
    assert by_id["ideal-enumeration"]["witness"]["count"] == 4
    assert by_id["trace-of-projectives-witnesses"]["witness"]["witnessed"] == [True] * 4


def test_anchor_table_resolves_uniquely():
    # every anchor names exactly one engine operation, and that operation exists
    import importlib

    seen_ops = set()
    for anchor, op in cli.ANCHORS.items():
        mod_name, func_name = op.split(".")
        mod = importlib.import_module(f"ringoid.{mod_name}")
        assert hasattr(mod, func_name), op
        assert op not in seen_ops
        seen_ops.add(op)


def test_console_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "ringoid.cli", "jans", "catalog:pt", "--p", "3"],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0
    assert "jans-roundtrip" in proc.stdout


def test_cross_process_json_determinism(tmp_path):
    path = tmp_path / "cat.json"
    path.write_text(cat_to_json(catalog("a2cat(2)")))
    outs = []
    for _ in range(2):
        proc = subprocess.run(
            [sys.executable, "-m", "ringoid.cli", "gabriel", str(path), "--census", "3", "--json"],
            capture_output=True,
            text=True,
        )
        assert proc.returncode == 0
        outs.append(proc.stdout)
    assert outs[0] == outs[1]


def test_every_command_accepts_a_file_source(tmp_path, capsys):
    path = tmp_path / "cat.json"
    path.write_text(cat_to_json(catalog("prod(2)")))
    for command in ["validate", "ideals", "jans", "split", "center"]:
        code, out = run_cli([command, str(path), "--dim", "3"], capsys)
        assert code == 0, (command, out)
