"""Clause-based label deciders for arrows between set families.

Six labels are decided on an ordered pair of families: ``plain`` (the bare
arrow), ``c``, ``f``, ``w``, ``wc``, ``wf``.  Every non-plain label implies
plain.  Writing ``X*`` for the source family with the empty set adjoined and
``M(a) = max(a, kappa)``, the normative clauses are:

* plain: every x in X lies in some y in Y.
* wc: plain, and every y in Y has x in X* with ``|y \\ x| < kappa``.
* c (qt variant): plain, and every y has x in X* with ``|y| <= M(|x|)``.
* c (st variant): plain, and every y is chain-reachable in Y from some x in
  X* (see :func:`chain_reachable`).
* f: plain, and for all x in X*, y in Y and y' inside y with
  ``|y'| < kappa`` there is x' in X* containing ``x | y'`` (qt variant) or
  ``(x & y) | y'`` (st variant).
* wf: plain, and for all x in X*, y in Y and y' inside y with
  ``|y'| <= M(|x|)`` (qt) or ``|y'| <= M(|x & y|)`` (st) there is x' in X*
  with ``y'`` inside ``x'``.
* w: same quantifiers as wf, with the weaker conclusion ``|y' \\ x'| < kappa``.

In ``qt+`` mode both operands are first replaced by their
``kappa_union_closure``; the clauses themselves are unchanged.

All three universal clauses over y' are monotone (a passing witness for a set
also serves every subset), so only maximal-size subsets are enumerated.

The module also hosts the fault-injection switchboard used by the verifier's
mutation-detection suites.  Faults corrupt only the decision helpers here;
the factorization constructions use literal arithmetic so that an injected
fault shows up as a label violation instead of silently bending the
constructions to match.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterable

from .core import (
    Instance,
    SetFamily,
    arrow_exists,
    atoms_of,
    kappa_union_closure,
    mask_of,
)
from .errors import InputError

LABELS = ("plain", "c", "f", "w", "wc", "wf")

FAULT_CLASSES = ("flip_wc_comparison", "drop_empty_adjoin", "sum_instead_of_max")

_active_faults: set[str] = set()


def inject_fault(name: str) -> None:
    """Activate a mutation class (testing aid for the verifier suites)."""
    if name not in FAULT_CLASSES:
        raise InputError(f"unknown fault class {name!r}; known: {FAULT_CLASSES}")
    _active_faults.add(name)


def clear_faults() -> None:
    """Deactivate all injected faults."""
    _active_faults.clear()


def active_faults() -> frozenset[str]:
    return frozenset(_active_faults)


def _m_value(a: int, kappa: int) -> int:
    """The absorbing translation of cardinal addition: max(a, kappa)."""
    if "sum_instead_of_max" in _active_faults:
        return a + kappa
    return max(a, kappa)


def _lt_kappa(a: int, kappa: int) -> bool:
    """The strict "finitely many" comparison ``a < kappa``."""
    if "flip_wc_comparison" in _active_faults:
        return a <= kappa
    return a < kappa


def _adjoined(members: tuple[int, ...]) -> tuple[int, ...]:
    """Source-side quantifier domain X* = X with the empty set adjoined."""
    if "drop_empty_adjoin" in _active_faults:
        return members
    if members and members[0] == 0:
        return members
    return (0,) + members


def mode_view(inst: Instance, x: SetFamily) -> SetFamily:
    """The presentation a label clause actually sees under ``inst.mode``."""
    if inst.mode == "qt+":
        return kappa_union_closure(x, inst.kappa)
    return x


def mode_arrow(inst: Instance, x: SetFamily, y: SetFamily) -> bool:
    """Arrow existence with the mode's routing applied."""
    return arrow_exists(mode_view(inst, x), mode_view(inst, y))


def _as_mask(value: int | Iterable[int]) -> int:
    return value if isinstance(value, int) else mask_of(value)


def chain_reachable(
    inst: Instance,
    b_family: SetFamily,
    a: int | Iterable[int],
    b: int | Iterable[int],
) -> bool:
    """Decide member-chain reachability used by the st-variant (c) clause.

    True iff there is a chain ``B_0, ..., B_k = b`` of members of
    ``b_family`` with ``M(|a & B_0|) = M(|B_0|)`` and
    ``M(|B_i & B_{i+1}|) = M(|B_{i+1}|)`` at every step.  ``b`` must be a
    member of ``b_family``.
    """
    a_mask = _as_mask(a)
    b_mask = _as_mask(b)
    members = b_family.members
    if b_mask not in members:
        raise InputError("chain target must be a member of the target family")
    kappa = inst.kappa
    frontier = [
        m
        for m in members
        if _m_value((a_mask & m).bit_count(), kappa) == _m_value(m.bit_count(), kappa)
    ]
    seen = set(frontier)
    while frontier:
        if b_mask in seen:
            return True
        nxt = []
        for cur in frontier:
            for m in members:
                if m in seen:
                    continue
                if _m_value((cur & m).bit_count(), kappa) == _m_value(
                    m.bit_count(), kappa
                ):
                    seen.add(m)
                    nxt.append(m)
        frontier = nxt
    return b_mask in seen


def _plain(a: SetFamily, b: SetFamily) -> tuple[bool, int | None]:
    for x in a.members:
        if not any(x & y == x for y in b.members):
            return False, x
    return True, None


def _wc(a: SetFamily, b: SetFamily, kappa: int) -> tuple[bool, int | None]:
    sources = _adjoined(a.members)
    for y in b.members:
        if not any(_lt_kappa((y & ~x).bit_count(), kappa) for x in sources):
            return False, y
    return True, None


def _c(
    inst: Instance, a: SetFamily, b: SetFamily
) -> tuple[bool, int | None]:
    kappa = inst.kappa
    sources = _adjoined(a.members)
    for y in b.members:
        if inst.variant == "qt":
            ok = any(
                y.bit_count() <= _m_value(x.bit_count(), kappa) for x in sources
            )
        else:
            ok = any(chain_reachable(inst, b, x, y) for x in sources)
        if not ok:
            return False, y
    return True, None


def _f(
    inst: Instance, a: SetFamily, b: SetFamily
) -> tuple[bool, tuple[int, int, int] | None]:
    kappa = inst.kappa
    sources = _adjoined(a.members)
    for x in sources:
        for y in b.members:
            size = min(kappa - 1, y.bit_count())
            base = x if inst.variant == "qt" else x & y
            for combo in itertools.combinations(atoms_of(y), size):
                y_prime = mask_of(combo)
                need = base | y_prime
                if not any(need & xp == need for xp in sources):
                    return False, (x, y, y_prime)
    return True, None


def _wf_or_w(
    inst: Instance, a: SetFamily, b: SetFamily, weak: bool
) -> tuple[bool, tuple[int, int, int] | None]:
    kappa = inst.kappa
    sources = _adjoined(a.members)
    for x in sources:
        for y in b.members:
            bound = _m_value(
                (x.bit_count() if inst.variant == "qt" else (x & y).bit_count()),
                kappa,
            )
            size = min(bound, y.bit_count())
            if weak and any(
                _lt_kappa((y & ~xp).bit_count(), kappa) for xp in sources
            ):
                continue
            if not weak and any(y & xp == y for xp in sources):
                continue
            for combo in itertools.combinations(atoms_of(y), size):
                y_prime = mask_of(combo)
                if weak:
                    ok = any(
                        _lt_kappa((y_prime & ~xp).bit_count(), kappa)
                        for xp in sources
                    )
                else:
                    ok = any(y_prime & xp == y_prime for xp in sources)
                if not ok:
                    return False, (x, y, y_prime)
    return True, None


def has_label(inst: Instance, x: SetFamily, y: SetFamily, label: str) -> bool:
    """Decide one label on the ordered pair, honoring variant and mode."""
    if label not in LABELS:
        raise InputError(f"unknown label {label!r}; known: {LABELS}")
    a = mode_view(inst, inst.check_family(x))
    b = mode_view(inst, inst.check_family(y))
    if not _plain(a, b)[0]:
        return False
    if label == "plain":
        return True
    if label == "wc":
        return _wc(a, b, inst.kappa)[0]
    if label == "c":
        return _c(inst, a, b)[0]
    if label == "f":
        return _f(inst, a, b)[0]
    if label == "wf":
        return _wf_or_w(inst, a, b, weak=False)[0]
    return _wf_or_w(inst, a, b, weak=True)[0]


@dataclass(frozen=True)
class LabelReport:
    """All six labels on a pair, with witness data for the false ones."""

    source: SetFamily
    target: SetFamily
    labels: dict[str, bool]
    counterwitnesses: dict[str, dict]

    def to_obj(self) -> dict:
        return {
            "source": self.source.to_sets(),
            "target": self.target.to_sets(),
            "labels": dict(sorted(self.labels.items())),
            "counterwitnesses": {
                k: v for k, v in sorted(self.counterwitnesses.items())
            },
        }


def _witness_obj(kind: str, data: object) -> dict:
    if kind == "plain":
        return {"x": list(atoms_of(data)), "y": None, "y_prime": None}
    if kind in ("wc", "c"):
        return {"x": None, "y": list(atoms_of(data)), "y_prime": None}
    x, y, y_prime = data
    return {
        "x": list(atoms_of(x)),
        "y": list(atoms_of(y)),
        "y_prime": list(atoms_of(y_prime)),
    }


def label_set(inst: Instance, x: SetFamily, y: SetFamily) -> LabelReport:
    """Evaluate all six labels at once, collecting counterwitnesses."""
    a = mode_view(inst, inst.check_family(x))
    b = mode_view(inst, inst.check_family(y))
    labels: dict[str, bool] = {}
    against: dict[str, dict] = {}

    plain_ok, plain_wit = _plain(a, b)
    labels["plain"] = plain_ok
    if not plain_ok:
        against["plain"] = _witness_obj("plain", plain_wit)
        for name in LABELS:
            if name != "plain":
                labels[name] = False
                against[name] = against["plain"]
        return LabelReport(x, y, labels, against)

    checks = {
        "wc": _wc(a, b, inst.kappa),
        "c": _c(inst, a, b),
        "f": _f(inst, a, b),
        "wf": _wf_or_w(inst, a, b, weak=False),
        "w": _wf_or_w(inst, a, b, weak=True),
    }
    for name, (ok, wit) in checks.items():
        labels[name] = ok
        if not ok:
            against[name] = _witness_obj(name, wit)
    return LabelReport(x, y, labels, against)


@dataclass(frozen=True)
class IdentityReport:
    """Outcome of the three label identities on one pair."""

    wc_matches: bool
    wf_matches: bool
    w_matches: bool
    z_witness: SetFamily | None
    violated: tuple[str, ...] = field(default=())

    @property
    def all_hold(self) -> bool:
        return not self.violated


def check_label_identities(
    inst: Instance, x: SetFamily, y: SetFamily, pool: Iterable[SetFamily]
) -> IdentityReport:
    """Check wc = c and w, wf = f and w, and w = (wc ; wf) through some Z.

    The Z witness for the third identity is searched over the supplied pool
    and over both factorization middles, so a positive answer always carries
    a concrete certificate object.
    """
    from . import factorization

    wc = has_label(inst, x, y, "wc")
    c = has_label(inst, x, y, "c")
    f = has_label(inst, x, y, "f")
    w = has_label(inst, x, y, "w")
    wf = has_label(inst, x, y, "wf")

    z_witness: SetFamily | None = None
    if mode_arrow(inst, x, y):
        candidates: list[SetFamily] = []
        try:
            candidates.append(factorization.factor_wc_f(inst, x, y).middle)
            candidates.append(factorization.factor_c_wf(inst, x, y).middle)
        except InputError:  # pragma: no cover - guarded by the arrow check
            pass
        candidates.extend(pool)
        for z in candidates:
            if has_label(inst, x, z, "wc") and has_label(inst, z, y, "wf"):
                z_witness = z
                break

    wc_matches = wc == (c and w)
    wf_matches = wf == (f and w)
    w_matches = w == (z_witness is not None)
    violated = tuple(
        name
        for name, ok in (
            ("wc=c&w", wc_matches),
            ("wf=f&w", wf_matches),
            ("w=wc;wf", w_matches),
        )
        if not ok
    )
    return IdentityReport(wc_matches, wf_matches, w_matches, z_witness, violated)


def printed_c_orientation_holds(inst: Instance, x: SetFamily, y: SetFamily) -> bool:
    """Diagnostic: the source-quantified (c) orientation, for comparison.

    The source definition prints the qt-variant (c) clause with the
    quantifiers the other way around (for every x there is y with
    ``|y| <= M(|x|)``) and without the empty-set adjunction.  The normative
    decider flips it; this helper evaluates the printed form so experiments
    can measure the difference.
    """
    a = mode_view(inst, x)
    b = mode_view(inst, y)
    if not _plain(a, b)[0]:
        return False
    kappa = inst.kappa
    return all(
        any(yy.bit_count() <= _m_value(xx.bit_count(), kappa) for yy in b.members)
        for xx in a.members
    )


def w_without_empty_adjunction(inst: Instance, x: SetFamily, y: SetFamily) -> bool:
    """Diagnostic: the (w) clause quantified over bare X on both sides.

    One of the source texts omits the empty-set adjunction in its (w) clause
    only; the normative decider adjoins uniformly.  This helper keeps the
    un-adjoined reading available for comparison.
    """
    a = mode_view(inst, x)
    b = mode_view(inst, y)
    if not _plain(a, b)[0]:
        return False
    kappa = inst.kappa
    for xx in a.members:
        for yy in b.members:
            bound = _m_value(
                (xx.bit_count() if inst.variant == "qt" else (xx & yy).bit_count()),
                kappa,
            )
            size = min(bound, yy.bit_count())
            for combo in itertools.combinations(atoms_of(yy), size):
                y_prime = mask_of(combo)
                if not any(
                    _lt_kappa((y_prime & ~xp).bit_count(), kappa)
                    for xp in a.members
                ):
                    return False
    return True
