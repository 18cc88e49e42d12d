"""Zigzag reachability, refuters, indecomposability, posetal (co)limits."""

import pytest

from famcat import (
    BOTTOM,
    HoResult,
    InputError,
    Instance,
    SetFamily,
    ZigzagCertificate,
    ZigzagStep,
    almost_containment_refuter,
    canonicalize,
    claim1_necessary,
    containment_refuter,
    family_to_obj,
    ho_iso,
    ho_reaches,
    is_indecomposable,
    replay_certificate,
    top,
    zigzag_reach_map,
)
from famcat.homotopy import Diagram, is_degenerate_limit, posetal_limit


def fam(*sets):
    return canonicalize(SetFamily(tuple(sum(1 << i for i in s) for s in sets)))


QT21 = Instance(2, 1, variant="qt", mode="qt")
QT31 = Instance(3, 1, variant="qt", mode="qt")
QT32 = Instance(3, 2, variant="qt", mode="qt")


def test_reach_identity_is_an_empty_certificate():
    r = ho_reaches(QT31, fam({0, 2}), fam({0, 2}))
    assert isinstance(r, HoResult)
    assert r.status == "yes"
    assert r.certificate.to_obj() == {"start": [[0, 2]], "steps": []}
    assert replay_certificate(QT31, r.certificate)


def test_reach_through_one_backward_step():
    r = ho_reaches(QT31, fam({0, 1, 2}), fam({0}, {1}, {2}))
    assert r.status == "yes"
    assert r.certificate.to_obj()["steps"] == [
        {"direction": "backward", "family": [[0], [1], [2]]}
    ]
    assert replay_certificate(QT31, r.certificate)


def test_reach_refuted_by_almost_containment():
    r = ho_reaches(QT31, fam({0, 1, 2}), fam({0}))
    assert r.status == "no"
    assert r.reason == {"refuter": "almost-containment", "witness": [1]}


def test_refuter_witnesses_are_minimal_masks():
    assert containment_refuter(QT31, fam({0, 1, 2}), fam({0})) == 2
    assert almost_containment_refuter(QT31, fam({0, 1, 2}), fam({0})) == 2
    assert almost_containment_refuter(QT32, top(3), fam({0, 1})) is None


def test_claim1_direction_under_reachability():
    x = fam({0}, {1}, {2})
    assert claim1_necessary(QT31, x, x)
    assert not claim1_necessary(QT31, fam({0, 1, 2}), fam({0}))
    assert claim1_necessary(QT31, fam({0, 1, 2}), x)


def test_ho_iso_returns_a_three_way_verdict_string():
    assert ho_iso(QT31, fam({0}, {1}), fam({1}, {0})) == "yes"
    assert ho_iso(QT31, top(3), fam({0}, {1}, {2})) == "yes"
    assert ho_iso(QT31, top(3), BOTTOM) == "no"
    assert ho_iso(QT32, fam({0, 1}), top(3)) == "no"


def test_indecomposable_detects_a_strict_midpoint():
    assert is_indecomposable(QT21, BOTTOM, fam({0})).indecomposable
    r = is_indecomposable(QT21, BOTTOM, fam({0, 1}))
    assert not r.indecomposable
    assert family_to_obj(r.witness) == [[0]]
    x = fam({0}, {1})
    assert is_indecomposable(QT21, x, x).indecomposable


def test_discrete_limit_is_the_meet_and_may_be_proper():
    d = Diagram((fam({0}), fam({1})))
    assert family_to_obj(posetal_limit(QT21, d, "limit")) == [[]]
    assert not is_degenerate_limit(QT21, d, "limit")


def test_chain_limit_degenerates_to_the_initial_vertex():
    chain = Diagram((fam({0}), fam({0, 1}), top(3)), ((0, 1), (1, 2)))
    assert family_to_obj(posetal_limit(QT31, chain, "limit")) == [[0]]
    assert is_degenerate_limit(QT31, chain, "limit")


def test_colimit_is_the_join():
    d = Diagram((BOTTOM, fam({0, 2})), ((0, 1),))
    assert family_to_obj(posetal_limit(QT31, d, "colimit")) == [[0, 2]]


def test_single_vertex_diagrams_are_degenerate_both_ways():
    one = Diagram((fam({0, 1}),))
    assert is_degenerate_limit(QT21, one, "limit")
    assert is_degenerate_limit(QT21, one, "colimit")


def test_quotient_mode_meet_stays_inside_the_directed_slice():
    inst = Instance(2, 2, variant="qt", mode="qt")
    d = Diagram((fam({0, 1}), fam({0}, {1})))
    assert family_to_obj(posetal_limit(inst, d, "limit")) == [[0], [1]]


def test_diagram_validates_edges():
    with pytest.raises(InputError):
        Diagram((fam({0}), fam({1})), ((0, 1),))
    with pytest.raises(InputError):
        Diagram((fam({0}),), ((0, 3),))


def test_backward_label_widening_changes_reachability():
    # Gated backward steps demand a fibration witness; the widened walk
    # only needs the equivalence label, so it can descend to the bottom.
    inst = Instance(2, 2, variant="qt", mode="qt")
    pool = [BOTTOM, fam({0}), fam({0, 1})]
    narrow = zigzag_reach_map(inst, fam({0}), pool)
    assert BOTTOM not in narrow
    wide = zigzag_reach_map(inst, fam({0}), pool, backward_label="w")
    assert BOTTOM in wide
    cert = wide[BOTTOM]
    assert cert.to_obj() == {
        "start": [[0]],
        "steps": [{"direction": "backward", "family": []}],
    }
    assert replay_certificate(inst, cert)
    with pytest.raises(InputError):
        zigzag_reach_map(inst, fam({0}), pool, backward_label="plain")


def test_replay_rejects_a_forged_backward_step():
    cert = ZigzagCertificate(fam({0, 1}), (ZigzagStep(False, BOTTOM),))
    assert not replay_certificate(QT21, cert)
