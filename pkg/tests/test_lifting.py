"""Posetal lifting, generator classes, (M1), generated-label agreement."""

import pytest

from famcat import (
    BOTTOM,
    ArrowRef,
    InputError,
    Instance,
    SetFamily,
    canonicalize,
    clear_faults,
    enumerate_objects,
    generated_label,
    generator_arrows,
    inject_fault,
    is_kappa_directed,
    lifting_holds,
    lifting_report,
    lifts_against_generators,
    make_arrow,
    top,
    verify_m1,
)
from famcat.lifting import generated_agreement_report


def fam(*sets):
    return canonicalize(SetFamily(tuple(sum(1 << i for i in s) for s in sets)))


QT31 = Instance(3, 1, variant="qt", mode="qt")
QT22 = Instance(2, 2, variant="qt", mode="qt")


def test_make_arrow_requires_an_arrow():
    with pytest.raises(InputError):
        make_arrow(QT31, fam({0, 1}), fam({2}))


def test_self_lifting_needs_a_reverse_arrow():
    # A strict arrow against itself has the identity square but no
    # diagonal, so the lifting fails; an isomorphism lifts against itself.
    f = make_arrow(QT31, BOTTOM, fam({0}))
    assert not lifting_holds(QT31, f, f)
    iso = make_arrow(QT31, fam({0}), fam({0}))
    assert lifting_holds(QT31, iso, iso)


def test_lifting_vacuous_when_no_square_exists():
    f = make_arrow(QT31, fam({0}), fam({0, 1}))
    g = make_arrow(QT31, fam({1}), fam({1}))
    assert not has_square(QT31, f, g)
    assert lifting_holds(QT31, f, g)


def has_square(inst, f, g):
    from famcat import arrow_exists

    return arrow_exists(f.source, g.source) and arrow_exists(f.target, g.target)


def test_lifting_false_when_diagonal_missing():
    inst = Instance(2, 1, variant="qt", mode="qt")
    f = make_arrow(inst, BOTTOM, fam({0, 1}))
    g = make_arrow(inst, fam({0}), fam({0, 1}))
    assert not lifting_holds(inst, f, g)


def test_isomorphisms_lift_against_every_generator_class():
    iso = make_arrow(QT22, fam({0}), fam({0}))
    for kind in ("c0", "wc0"):
        for side in ("left", "right"):
            assert lifts_against_generators(QT22, iso, kind, side)


def test_generator_enumeration_counts_n2_kappa2():
    assert len(list(generator_arrows(QT22, "c0"))) == 9
    assert len(list(generator_arrows(QT22, "wc0"))) == 8


def test_singleton_growth_fails_every_class_at_kappa_two():
    f = make_arrow(QT22, fam({0}), fam({0, 1}))
    for kind in ("c0", "wc0"):
        for side in ("left", "right"):
            assert not lifts_against_generators(QT22, f, kind, side)
    lifts, failures, checked = lifting_report(QT22, f, "wc0", "left")
    assert not lifts
    assert len(failures) == 2
    assert checked == 8


def test_generated_labels_agree_with_clauses_at_n2_kappa1():
    inst = Instance(2, 1, variant="qt", mode="qt")
    pool = [f for f in enumerate_objects(2) if is_kappa_directed(f, 1)]
    report = generated_agreement_report(inst, pool)
    assert report.agree
    assert report.checked == 56


def test_generated_label_disagreements_are_reported_not_reconciled():
    # Frozen counts: the lifting-generated classes are coarser than the
    # clause deciders on these grids and the gap is surfaced as data.
    pool22 = [f for f in enumerate_objects(2) if is_kappa_directed(f, 2)]
    rep22 = generated_agreement_report(QT22, pool22)
    by_label = {}
    for item in rep22.disagreements:
        by_label[item["label"]] = by_label.get(item["label"], 0) + 1
    assert by_label == {"wc": 1, "f": 1}

    pool31 = [f for f in enumerate_objects(3) if is_kappa_directed(f, 1)]
    rep31 = generated_agreement_report(QT31, pool31)
    labels31 = {item["label"] for item in rep31.disagreements}
    assert labels31 == {"wf"}
    assert len(rep31.disagreements) == 18


def test_generated_cofibration_labels_need_a_pool():
    f = make_arrow(QT22, fam({0}), fam({0, 1}))
    with pytest.raises(InputError):
        generated_label(QT22, f, "c")
    with pytest.raises(InputError):
        generated_label(QT22, f, "w", pool=[])


def test_m1_clean_on_the_directed_pool():
    pool = [f for f in enumerate_objects(3) if is_kappa_directed(f, 1)]
    check = verify_m1(QT31, pool)
    assert check.passed
    assert check.checked == 145


def test_m1_fails_at_the_degenerate_cell_with_bottom_in_pool():
    # bottom -> {emptyset} carries (wc) and (f) at once without being an
    # isomorphism, so it cannot lift against itself.
    inst = Instance(3, 1, variant="st", mode="st")
    check = verify_m1(inst, list(enumerate_objects(3)))
    assert len(check.violations) == 2
    degenerate = {"source": [], "target": [[]]}
    assert all(
        v["left"] == degenerate and v["right"] == degenerate
        for v in check.violations
    )
    assert {v["clause"] for v in check.violations} == {
        "wc-against-f",
        "c-against-wf",
    }


def test_m1_detects_planted_label_corruption():
    pool = [f for f in enumerate_objects(3) if is_kappa_directed(f, 1)]
    inject_fault("flip_wc_comparison")
    try:
        assert len(verify_m1(QT31, pool).violations) == 519
    finally:
        clear_faults()


def test_lifting_composition_closure_exhaustive_n2():
    # Posetal composition is transitivity: if f lifts against g and h it
    # lifts against their composite.
    inst = Instance(2, 1, variant="qt", mode="qt")
    pool = [f for f in enumerate_objects(2) if is_kappa_directed(f, 1)]
    from famcat import arrow_exists

    arrows = [
        ArrowRef(x, y) for x in pool for y in pool if arrow_exists(x, y)
    ]
    for f in arrows:
        for g in arrows:
            for h in arrows:
                if g.target != h.source:
                    continue
                if lifting_holds(inst, f, g) and lifting_holds(inst, f, h):
                    assert lifting_holds(
                        inst, f, ArrowRef(g.source, h.target)
                    )
