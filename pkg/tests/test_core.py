"""Object model: canonical forms, arrows, lattice helpers, enumeration."""

import pytest

from famcat import (
    BOTTOM,
    InputError,
    Instance,
    ResourceLimitError,
    SetFamily,
    arrow_exists,
    canonicalize,
    enumerate_objects,
    family_from_obj,
    family_to_obj,
    instance_from_obj,
    instance_to_obj,
    is_isomorphic,
    is_kappa_directed,
    join_raw,
    kappa_union_closure,
    meet,
    set_caps_enabled,
    top,
)
from famcat.core import all_permutations, apply_permutation, submasks_of_size


def fam(*sets):
    return canonicalize(SetFamily(tuple(sum(1 << i for i in s) for s in sets)))


def test_canonicalize_keeps_maximal_members_only():
    assert fam({0}, {0, 1}) == fam({0, 1})
    assert canonicalize(SetFamily((1, 1, 3))) == SetFamily((3,))
    assert canonicalize(SetFamily(())) == BOTTOM


def test_empty_set_member_absorbed_by_any_other_member():
    assert canonicalize(SetFamily((0, 1))) == SetFamily((1,))
    assert canonicalize(SetFamily((0,))) == SetFamily((0,))


def test_arrow_exists_is_member_domination():
    assert arrow_exists(fam({0}, {1}), fam({0, 1}))
    assert not arrow_exists(fam({0, 1}), fam({0}, {1}))
    assert arrow_exists(BOTTOM, fam({0}))
    assert not arrow_exists(fam(set()), BOTTOM)


def test_isomorphism_is_canonical_equality():
    assert is_isomorphic(SetFamily((1, 3)), fam({0, 1}))
    assert not is_isomorphic(fam({0}), fam({1}))


def test_meet_is_pairwise_intersection():
    assert meet(fam({0}), fam({1})) == fam(set())
    assert meet(fam({0, 1}), fam({0}, {1})) == fam({0}, {1})


def test_join_raw_is_member_union():
    assert join_raw(fam({0}), fam({1})) == fam({0}, {1})
    assert join_raw(BOTTOM, fam({0, 2})) == fam({0, 2})


def test_closure_adds_unions_of_fewer_than_kappa_members():
    assert kappa_union_closure(fam({0}, {1}), 2) == fam({0}, {1})
    assert kappa_union_closure(fam({0}, {1}), 3) == fam({0, 1})


def test_directedness_against_the_closure():
    assert is_kappa_directed(fam({0}, {1}), 1)
    assert is_kappa_directed(fam({0}, {1}), 2)
    assert not is_kappa_directed(fam({0}, {1}), 3)
    assert is_kappa_directed(top(3), 3)
    assert is_kappa_directed(fam(set()), 1)
    assert not is_kappa_directed(BOTTOM, 1)


def test_enumeration_counts_match_antichain_numbers():
    # Antichains over an n-set, empty family included: 3, 6, 20, 168.
    assert len(enumerate_objects(1)) == 3
    assert len(enumerate_objects(2)) == 6
    assert len(enumerate_objects(3)) == 20
    assert len(enumerate_objects(4)) == 168


def test_enumeration_filters():
    small = enumerate_objects(3, max_member_size=1)
    assert all(f.max_member_size() <= 1 for f in small)
    short = enumerate_objects(3, max_family_size=1)
    assert all(len(f) <= 1 for f in short)
    assert BOTTOM in short


def test_enumeration_rejects_degenerate_universe():
    with pytest.raises(InputError):
        enumerate_objects(0)


def test_submasks_of_size():
    assert sorted(submasks_of_size(0b111, 2)) == [0b011, 0b101, 0b110]
    assert list(submasks_of_size(0b101, 0)) == [0]


def test_permutations_relabel_members():
    # perm[i] is the new name of atom i: {0,1} -> {2,0}, {2} -> {1}.
    x = fam({0, 1}, {2})
    assert apply_permutation((2, 0, 1), x) == fam({0, 2}, {1})
    assert len(all_permutations(3)) == 6
    with pytest.raises(InputError):
        apply_permutation((0, 0, 1), x)


def test_instance_round_trip():
    inst = Instance(3, 2, variant="st", mode="qt+")
    assert instance_from_obj(instance_to_obj(inst)) == inst
    base = fam({0}, {1})
    withbase = Instance(3, 1, variant="qt", mode="qt", base=base)
    assert instance_from_obj(instance_to_obj(withbase)) == withbase


def test_family_round_trip():
    x = fam({0, 2}, {1})
    assert family_from_obj(family_to_obj(x), 3) == x
    assert family_to_obj(x) == [[1], [0, 2]]
    with pytest.raises(InputError):
        family_from_obj([[0, 9]], 3)


def test_instance_validation():
    with pytest.raises(InputError):
        Instance(3, 0, variant="qt", mode="qt")
    with pytest.raises(InputError):
        Instance(3, 1, variant="nope", mode="qt")
    with pytest.raises(InputError):
        Instance(3, 4, variant="qt", mode="qt")


def test_universe_cap_is_a_resource_error():
    with pytest.raises(ResourceLimitError):
        Instance(17, 1, variant="qt", mode="qt")
    set_caps_enabled(False)
    try:
        inst = Instance(17, 1, variant="qt", mode="qt")
        assert inst.n == 17
    finally:
        set_caps_enabled(True)
