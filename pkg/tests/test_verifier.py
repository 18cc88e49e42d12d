"""Grid-level verification: axiom suites, fault battery, equivariance."""

import pytest

from famcat import (
    ALL_AXIOMS,
    BOTTOM,
    InputError,
    Instance,
    SetFamily,
    canonicalize,
    check_claim2_closure,
    check_m0,
    check_measurable_equivalences,
    detect_faults,
    equivariance_suite,
    find_m5_counterexample_st,
    run_axiom_suite,
    standard_grid,
    standard_pool,
    top,
)


def fam(*sets):
    return canonicalize(SetFamily(tuple(sum(1 << i for i in s) for s in sets)))


def test_standard_grid_shape():
    grid = standard_grid()
    assert len(grid) == 22
    assert grid[0] == Instance(2, 1, variant="qt", mode="qt")
    assert grid[-1] == Instance(5, 3, variant="st", mode="qt")
    kappas_n2 = sorted({i.kappa for i in grid if i.n == 2})
    assert kappas_n2 == [1, 2]


def test_standard_pool_sizes():
    sizes = {
        (2, 1, "qt", "qt"): 5,
        (3, 1, "qt", "qt"): 19,
        (3, 1, "st", "st"): 20,
        (4, 2, "qt", "qt"): 167,
        (5, 2, "qt", "qt"): 120,
    }
    for (n, k, variant, mode), expected in sizes.items():
        inst = Instance(n, k, variant=variant, mode=mode)
        assert len(standard_pool(inst)) == expected, (n, k, variant, mode)
    with pytest.raises(InputError):
        standard_pool(Instance(6, 2, variant="qt", mode="qt"))


def test_m0_clean_and_silent_on_small_quotient_points():
    inst = Instance(2, 2, variant="qt", mode="qt")
    check = check_m0(inst, standard_pool(inst))
    assert (len(check.violations), len(check.diagnostics), check.checked) == (0, 0, 15)


def test_m0_trivial_in_strict_mode():
    inst = Instance(3, 1, variant="st", mode="st")
    check = check_m0(inst, standard_pool(inst))
    assert not check.violations
    assert check.checked == 210


def test_m0_reports_reflected_joins_at_kappa_three():
    inst = Instance(3, 3, variant="qt", mode="qt")
    check = check_m0(inst, standard_pool(inst))
    assert not check.violations
    assert (len(check.diagnostics), check.checked) == (9, 36)
    first = check.diagnostics[0]
    assert first == {
        "kind": "reflected-join",
        "pair": [[[0]], [[1]]],
        "join": [[0], [1]],
        "closure": [[0, 1]],
    }


def _violation_histogram(report):
    hist = {}
    for v in report.violations:
        hist[v["axiom"]] = hist.get(v["axiom"], 0) + 1
    return hist


def test_axiom_suite_clean_at_the_smallest_point():
    report = run_axiom_suite(instances=[Instance(2, 1, variant="qt", mode="qt")])
    assert report.passed
    assert report.checked == 105
    assert report.exhaustive


def test_axiom_suite_violation_counts_are_stable():
    cases = {
        (2, 2, "qt"): {"M2": 5, "M5": 3, "closed": 1},
        (3, 1, "qt"): {"M5": 6},
        (3, 1, "st"): {"M2": 30, "M5": 12},
    }
    for (n, k, variant), expected in cases.items():
        report = run_axiom_suite(
            instances=[Instance(n, k, variant=variant, mode="qt")]
        )
        assert _violation_histogram(report) == expected, (n, k, variant)


def test_axiom_suite_report_serialization_keys():
    report = run_axiom_suite(instances=[Instance(2, 1, variant="qt", mode="qt")])
    assert sorted(report.to_obj()) == [
        "checked",
        "diagnostics",
        "exhaustive",
        "passed",
        "points",
        "suite",
        "violations",
        "work_units",
    ]


def test_axiom_suite_respects_the_axiom_filter():
    report = run_axiom_suite(
        instances=[Instance(2, 1, variant="qt", mode="qt")], axioms=("M0", "M4")
    )
    assert report.passed
    assert report.checked == 48
    with pytest.raises(InputError):
        run_axiom_suite(
            instances=[Instance(2, 1, variant="qt", mode="qt")], axioms=("M7",)
        )


def test_axiom_suite_accepts_pool_overrides():
    inst = Instance(2, 1, variant="qt", mode="qt")
    pool = standard_pool(inst)[:3]
    report = run_axiom_suite(instances=[inst], pools={inst: pool}, axioms=("M4",))
    assert report.checked == 10


def test_axiom_names_constant():
    assert ALL_AXIOMS == ("M0", "M1", "M2", "M4", "M5", "closed")


def test_fault_battery_detects_every_plant():
    results = detect_faults()
    assert set(results) == {
        "flip_wc_comparison",
        "drop_empty_adjoin",
        "sum_instead_of_max",
    }
    expected_violations = {
        "flip_wc_comparison": 390,
        "drop_empty_adjoin": 48,
        "sum_instead_of_max": 192,
    }
    for name, entry in results.items():
        assert entry["detected"], name
        assert entry["baseline"] == 0, name
        assert entry["violations"] == expected_violations[name], name


def test_equivariance_suite_is_deterministic():
    first = equivariance_suite(trials=25, seed=7)
    second = equivariance_suite(trials=25, seed=7)
    assert first.passed
    assert first.checked == 15050
    assert first.to_obj() == second.to_obj()
    assert equivariance_suite(trials=30, seed=7).checked == 15160


def test_strict_variant_m5_search():
    clean = find_m5_counterexample_st(Instance(2, 1, variant="st", mode="st"))
    assert clean.to_obj() == {"finding": None, "exhausted": True, "checked": 60}
    hit = find_m5_counterexample_st(Instance(8, 2, variant="st", mode="st"))
    assert hit.finding is not None
    assert hit.checked == 8
    assert not hit.exhausted


def test_measurable_equivalences_hold_on_evaluating_points():
    expectations = {
        (2, 1): (30, 55),
        (2, 2): (15, 40),
        (3, 1): (380, 741),
        (3, 2): (67, 428),
    }
    for (n, k), (checked, work) in expectations.items():
        inst = Instance(n, k, variant="qt", mode="qt+")
        report = check_measurable_equivalences(inst)
        assert report.passed, (n, k)
        assert (report.checked, report.work_units) == (checked, work), (n, k)


def test_closure_claim_examples():
    inst = Instance(3, 2, variant="qt", mode="qt")
    assert check_claim2_closure(inst, top(3)).to_obj() == {
        "hypothesis_holds": True,
        "analog_holds": True,
        "b_witness": [],
        "counterexample": None,
        "checked": 7,
    }
    assert check_claim2_closure(inst, fam({0, 1}, {2})).to_obj() == {
        "hypothesis_holds": True,
        "analog_holds": True,
        "b_witness": [2],
        "counterexample": None,
        "checked": 10,
    }
    narrow = check_claim2_closure(Instance(2, 1, variant="qt", mode="qt"), BOTTOM)
    assert not narrow.hypothesis_holds
    assert not narrow.analog_holds
    assert narrow.counterexample == {"hypothesis_witness": [0]}
