"""Command-line surface: JSON shapes, exit codes, determinism."""

import json
import os
import subprocess
import sys

import pytest

from famcat.cli import main

INST21 = '{"universe": 2, "kappa": 1, "variant": "qt", "mode": "qt"}'
INST22 = '{"universe": 2, "kappa": 2, "variant": "qt", "mode": "qt"}'
INST31 = '{"universe": 3, "kappa": 1, "variant": "qt", "mode": "qt"}'


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out
    return code, json.loads(out)


def test_label_report_and_exit_codes(capsys):
    code, doc = run(
        capsys, "label", "--instance", INST31,
        "--source", "[[0],[1]]", "--target", "[[0,1]]",
    )
    assert code == 0
    assert sorted(doc) == ["counterwitnesses", "labels", "source", "target"]
    assert doc["labels"] == {
        "c": False, "f": True, "plain": True, "w": True, "wc": False, "wf": True,
    }
    assert set(doc["counterwitnesses"]) == {"c", "wc"}

    code, doc = run(
        capsys, "label", "--instance", INST31,
        "--source", "[[0,1]]", "--target", "[[0]]", "--label", "w",
    )
    assert code == 1
    assert not doc["labels"]["w"]


def test_lift_negative_verdict(capsys):
    code, doc = run(
        capsys, "lift", "--instance", INST22,
        "--source", "[[0]]", "--target", "[[0,1]]",
        "--kind", "wc0", "--side", "left",
    )
    assert code == 1
    assert (doc["lifts"], doc["checked"], len(doc["failures"])) == (False, 8, 2)


def test_factor_document_and_input_error(capsys):
    code, doc = run(
        capsys, "factor", "--instance", INST21,
        "--source", "[]", "--target", "[[0,1]]", "--kind", "c-wf",
    )
    assert code == 0
    assert doc == {"left_label": "c", "middle": [[0], [1]], "right_label": "wf"}

    code, doc = run(
        capsys, "factor", "--instance", INST21,
        "--source", "[[0,1]]", "--target", "[[0]]", "--kind", "c-wf",
    )
    assert code == 2
    assert doc["error"]["type"] == "input"


def test_cute_with_reflection(capsys):
    code, doc = run(
        capsys, "cute",
        "--instance", '{"universe": 3, "kappa": 2, "variant": "qt", "mode": "qt"}',
        "--object", "[[0],[1]]", "--pool-spec", "standard", "--reflect",
    )
    assert code == 0
    assert doc == {"cute": True, "pool_size": 19, "reflection": [[0], [1]]}


def test_ho_iso_and_refuted_reach(capsys):
    code, doc = run(
        capsys, "ho", "--instance", INST31,
        "--source", "[[0,1,2]]", "--target", "[[0],[1],[2]]", "--iso",
    )
    assert (code, doc) == (0, {"iso": "yes"})

    code, doc = run(
        capsys, "ho", "--instance", INST31,
        "--source", "[[0,1,2]]", "--target", "[[0]]",
    )
    assert code == 1
    assert doc["status"] == "no"
    assert doc["reason"] == {"refuter": "almost-containment", "witness": [1]}


def test_indec_exit_one_with_witness(capsys):
    code, doc = run(
        capsys, "indec", "--instance", INST21,
        "--source", "[]", "--target", "[[0,1]]",
    )
    assert code == 1
    assert doc == {"complete": True, "indecomposable": False, "witness": [[0]]}


def test_limit_chain_degenerates(capsys):
    code, doc = run(
        capsys, "limit", "--instance", INST31,
        "--diagram",
        '{"vertices": [[[0]], [[0,1]], [[0,1,2]]], "edges": [[0,1],[1,2]]}',
        "--kind", "limit", "--degenerate",
    )
    assert code == 0
    assert doc == {"bound": [[0]], "degenerate": True, "kind": "limit"}


def test_derive_cofibrant_certificate(capsys):
    code, doc = run(
        capsys, "derive", "--instance", INST31,
        "--object", "[[0,1,2]]", "--function", "card",
        "--flavor", "cofibrant", "--depth", "2",
    )
    assert code == 0
    assert doc["value"] == 3
    assert doc["witness"] == [[0], [1], [2]]
    assert doc["exhaustive"]
    assert doc["certificate"]["steps"] == [
        {"direction": "backward", "family": [[0], [1], [2]]}
    ]


def test_cov_solution_and_infeasible_exit(capsys):
    code, doc = run(
        capsys, "cov", "--n", "3", "--delta", "2", "--theta", "2", "--sigma", "2",
    )
    assert code == 0
    assert doc == {
        "family": [[0], [1], [2]],
        "infeasible": False,
        "nodes": 0,
        "optimality": "exhausted",
        "problem": {"delta": 2, "n": 3, "sigma": 2, "theta": 2},
        "value": 3,
    }

    code, doc = run(
        capsys, "cov", "--n", "3", "--delta", "2", "--theta", "2", "--sigma", "1",
    )
    assert code == 1
    assert doc["infeasible"]
    assert doc["value"] is None

    code, doc = run(
        capsys, "cov", "--n", "4", "--delta", "3", "--theta", "3", "--sigma", "2",
        "--bounds-only",
    )
    assert code == 0
    assert doc == {
        "lower": 6,
        "problem": {"delta": 3, "n": 4, "sigma": 2, "theta": 3},
        "upper": 6,
    }


def test_enumerate_counts_directed_families(capsys):
    code, doc = run(capsys, "enumerate", "--instance", INST31, "--directed")
    assert (code, doc) == (0, {"count": 19})


def test_verify_axioms_exit_tracks_violations(capsys):
    code, doc = run(capsys, "verify", "--instance", INST21, "--suite", "axioms")
    assert code == 0
    assert doc["passed"] and doc["checked"] == 105

    code, doc = run(capsys, "verify", "--instance", INST22, "--suite", "axioms")
    assert code == 1
    assert not doc["passed"]


def test_verify_fault_battery(capsys):
    code, doc = run(capsys, "verify", "--suite", "faults")
    assert code == 0
    assert sorted(doc["faults"]) == [
        "drop_empty_adjoin", "flip_wc_comparison", "sum_instead_of_max",
    ]
    assert all(entry["detected"] for entry in doc["faults"].values())


def test_verify_claim2_negative(capsys):
    code, doc = run(
        capsys, "verify",
        "--instance", '{"universe": 3, "kappa": 2, "variant": "qt", "mode": "qt"}',
        "--suite", "claim2", "--object", "[[0]]",
    )
    assert code == 1
    assert not doc["analog_holds"]
    assert doc["counterexample"] == {"hypothesis_witness": [1, 2]}


def test_verify_m5_search_document(capsys):
    code, doc = run(
        capsys, "verify",
        "--instance", '{"universe": 2, "kappa": 1, "variant": "st", "mode": "st"}',
        "--suite", "m5-search", "--budget", "100",
    )
    assert code == 0
    assert doc == {"checked": 60, "exhausted": True, "finding": None}


def test_flags_accept_file_paths(capsys, tmp_path):
    inst = tmp_path / "inst.json"
    inst.write_text(INST21)
    src = tmp_path / "src.json"
    src.write_text("[[0]]")
    code, doc = run(
        capsys, "label", "--instance", str(inst),
        "--source", str(src), "--target", "[[0,1]]",
    )
    assert code == 0
    assert doc["source"] == [[0]]


def test_out_flag_writes_the_document(capsys, tmp_path):
    out = tmp_path / "report.json"
    code = main([
        "label", "--instance", INST21,
        "--source", "[[0]]", "--target", "[[0,1]]", "--out", str(out),
    ])
    assert code == 0
    doc = json.loads(out.read_text())
    assert doc["labels"]["plain"]


def test_malformed_input_is_a_machine_readable_error(capsys):
    code, doc = run(
        capsys, "label", "--instance", "not json",
        "--source", "[[0]]", "--target", "[[0,1]]",
    )
    assert code == 2
    assert doc["error"]["type"] == "input"
    assert "malformed JSON" in doc["error"]["message"]


def test_unrecognized_arguments_exit_two(capsys):
    code, doc = run(capsys, "label", "--wat")
    assert code == 2
    assert "unrecognized arguments" in doc["error"]["message"]


def test_output_bytes_are_hash_seed_independent():
    argv = [
        "verify", "--suite", "equivariance", "--trials", "3", "--seed", "5",
    ]
    outputs = []
    for seed in ("1", "977"):
        env = dict(os.environ, PYTHONHASHSEED=seed)
        proc = subprocess.run(
            [sys.executable, "-c",
             "import sys; from famcat.cli import main; sys.exit(main(sys.argv[1:]))",
             *argv],
            capture_output=True, env=env, check=True,
        )
        outputs.append(proc.stdout)
    assert outputs[0] == outputs[1]
