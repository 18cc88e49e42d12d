"""Posetal lifting properties and lifting-generated label cross-checks.

In a posetal category a commuting square from ``f`` to ``g`` exists exactly
when there are arrows ``f.source -> g.source`` and ``f.target -> g.target``,
and a diagonal filler exists exactly when ``f.target -> g.source``.  The
lifting relation therefore collapses to a single implication, which is what
:func:`lifting_holds` evaluates.

Generator arrows are singleton-to-singleton inclusions ``{A} -> {B}`` with
``A`` a subset of ``B``.  Kind ``c0`` additionally requires
``max(|A|, kappa) == max(|B|, kappa)``; kind ``wc0`` requires
``|B - A| < kappa``.  These finite classes stand in for the paperlike
small-object generators, and the module reconstructs the four non-(w) labels
from them so the clause deciders can be cross-checked.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Sequence

from .core import Instance, SetFamily, submasks_of_size
from .errors import InputError
from .factorization import AxiomCheck, _arrow_rows, _label_rows, _pair_obj
from .labels import has_label, mode_arrow

GENERATOR_KINDS = ("c0", "wc0")
SIDES = ("left", "right")


@dataclass(frozen=True)
class ArrowRef:
    """A pair of families standing for the unique arrow between them."""

    source: SetFamily
    target: SetFamily

    def to_obj(self) -> dict:
        return {"source": self.source.to_sets(), "target": self.target.to_sets()}


def make_arrow(inst: Instance, source: SetFamily, target: SetFamily) -> ArrowRef:
    """Validated constructor; rejects pairs with no arrow under the mode."""
    inst.check_family(source)
    inst.check_family(target)
    if not mode_arrow(inst, source, target):
        raise InputError("no arrow between the given families")
    return ArrowRef(source, target)


def lifting_holds(inst: Instance, f: ArrowRef, g: ArrowRef) -> bool:
    """True when every square from ``f`` to ``g`` admits a diagonal."""
    if not (
        mode_arrow(inst, f.source, g.source)
        and mode_arrow(inst, f.target, g.target)
    ):
        return True
    return mode_arrow(inst, f.target, g.source)


def generator_arrows(
    inst: Instance, kind: str, bound: int | None = None
) -> Iterator[ArrowRef]:
    """Enumerate generator arrows ``{A} -> {B}`` with ``|B|`` capped.

    The cap defaults to the universe size and is clamped to it.
    """
    if kind not in GENERATOR_KINDS:
        raise InputError(f"unknown generator kind {kind!r}")
    limit = inst.n if bound is None else max(0, min(bound, inst.n))
    universe = inst.universe_mask
    for b_size in range(limit + 1):
        for b_mask in submasks_of_size(universe, b_size):
            for a_size in range(b_size + 1):
                for a_mask in submasks_of_size(b_mask, a_size):
                    if kind == "c0":
                        if max(a_size, inst.kappa) != max(b_size, inst.kappa):
                            continue
                    elif (b_size - a_size) >= inst.kappa:
                        continue
                    yield ArrowRef(SetFamily((a_mask,)), SetFamily((b_mask,)))


def lifts_against_generators(
    inst: Instance,
    f: ArrowRef,
    kind: str,
    side: str,
    bound: int | None = None,
) -> bool:
    """Quantify :func:`lifting_holds` over one generator class.

    ``side="left"`` places the generators on the left of the lifting
    relation (generator against ``f``); ``side="right"`` places ``f`` on
    the left (``f`` against the generator class).
    """
    if side not in SIDES:
        raise InputError(f"unknown side {side!r}")
    for gen in generator_arrows(inst, kind, bound):
        holds = (
            lifting_holds(inst, gen, f)
            if side == "left"
            else lifting_holds(inst, f, gen)
        )
        if not holds:
            return False
    return True


def lifting_report(
    inst: Instance,
    f: ArrowRef,
    kind: str,
    side: str,
    bound: int | None = None,
) -> tuple[bool, list[ArrowRef], int]:
    """Like :func:`lifts_against_generators`, with the failing generators
    and the number of generators examined."""
    if side not in SIDES:
        raise InputError(f"unknown side {side!r}")
    failures: list[ArrowRef] = []
    checked = 0
    for gen in generator_arrows(inst, kind, bound):
        checked += 1
        holds = (
            lifting_holds(inst, gen, f)
            if side == "left"
            else lifting_holds(inst, f, gen)
        )
        if not holds:
            failures.append(gen)
    return not failures, failures, checked


def generated_label(
    inst: Instance,
    f: ArrowRef,
    label: str,
    pool: Sequence[SetFamily] | None = None,
    bound: int | None = None,
) -> bool:
    """Decide a label through lifting instead of through the clause decider.

    The fibration-side labels come straight from the generators: (f) is the
    right lifting property against ``wc0`` and (wf) against ``c0``.  The
    cofibration-side labels need the opposing labelled class, which is drawn
    from ``pool``: (c) lifts against every pool arrow labelled (wf), and
    (wc) against every pool arrow labelled (f).
    """
    if label in ("f", "wf"):
        kind = "wc0" if label == "f" else "c0"
        return lifts_against_generators(inst, f, kind, "left", bound)
    if label in ("c", "wc"):
        if pool is None:
            raise InputError(f"generated {label!r} needs a pool of opposing arrows")
        opposing = "wf" if label == "c" else "f"
        for x in pool:
            for y in pool:
                if not mode_arrow(inst, x, y):
                    continue
                if not has_label(inst, x, y, opposing):
                    continue
                if not lifting_holds(inst, f, ArrowRef(x, y)):
                    return False
        return True
    raise InputError(f"label {label!r} has no lifting-generated form")


@dataclass(frozen=True)
class AgreementReport:
    """Comparison of generated labels with the clause deciders over a pool."""

    checked: int
    disagreements: tuple[dict, ...]

    @property
    def agree(self) -> bool:
        return not self.disagreements

    def to_obj(self) -> dict:
        return {
            "checked": self.checked,
            "disagreements": list(self.disagreements),
            "agree": self.agree,
        }


def generated_agreement_report(
    inst: Instance,
    pool: Sequence[SetFamily],
    labels: Sequence[str] = ("c", "wc", "f", "wf"),
    bound: int | None = None,
) -> AgreementReport:
    """Compare generated and clause-decided labels on every pool arrow.

    Disagreements are listed, not reconciled; callers decide what a
    mismatch means for their suite.
    """
    pool = sorted(pool, key=lambda fam: fam.sort_key)
    disagreements = []
    checked = 0
    for x in pool:
        for y in pool:
            if not mode_arrow(inst, x, y):
                continue
            f = ArrowRef(x, y)
            for label in labels:
                checked += 1
                via_lifting = generated_label(inst, f, label, pool, bound)
                via_clause = has_label(inst, x, y, label)
                if via_lifting != via_clause:
                    disagreements.append(
                        _pair_obj(
                            x,
                            y,
                            label=label,
                            generated=via_lifting,
                            clause=via_clause,
                        )
                    )
    return AgreementReport(checked, tuple(disagreements))


def verify_m1(inst: Instance, pool: Sequence[SetFamily]) -> AxiomCheck:
    """Check (wc) against (f) and (c) against (wf) over all pool arrow pairs."""
    pool = sorted(pool, key=lambda fam: fam.sort_key)
    arrows = _arrow_rows(inst, pool)
    rows = {
        label: _label_rows(inst, pool, label, arrows)
        for label in ("wc", "f", "c", "wf")
    }
    violations = []
    checked = 0
    for left_label, right_label in (("wc", "f"), ("c", "wf")):
        left_rows = rows[left_label]
        right_rows = rows[right_label]
        for i, x in enumerate(pool):
            bits = left_rows[i]
            j = 0
            while bits:
                if bits & 1:
                    # squares need arrow(i,k) and arrow(j,l); the diagonal
                    # needs arrow(j,k), so scan k reachable from i but not j
                    ks = arrows[i] & ~arrows[j]
                    k = 0
                    while ks:
                        if ks & 1:
                            checked += 1
                            bad = right_rows[k] & arrows[j]
                            if bad:
                                l = (bad & -bad).bit_length() - 1
                                violations.append(
                                    {
                                        "clause": f"{left_label}-against-{right_label}",
                                        "left": _pair_obj(x, pool[j]),
                                        "right": _pair_obj(pool[k], pool[l]),
                                    }
                                )
                        ks >>= 1
                        k += 1
                j += 1
                bits >>= 1
    return AxiomCheck("M1", checked, tuple(violations))
