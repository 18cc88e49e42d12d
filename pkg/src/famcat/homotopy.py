"""Zigzag reachability, homotopy isomorphism, indecomposability, and
posetal (co)limits.

Reachability is decided by breadth-first search over a finite pool of
objects.  Forward edges are plain mode arrows.  Backward edges invert
arrows that the label decider marks (wf); since every (wf)-arrow is also a
(w)-arrow, certificates replay against the (w) invariant.  Restricting the
search to (wf)-inversions is what makes the two refutation tests below
sound at every kappa:

* exact containment: a nonempty set L of size at most kappa lying inside a
  member of X must lie inside a member of Y whenever X reaches Y;
* almost containment: the same L must at least be inside some member of Y
  up to fewer than kappa elements.

Both facts propagate right-to-left along any forward/(wf)-backward zigzag,
so a failure refutes reachability outright.  Inverting arbitrary
(w)-arrows would break both invariants for kappa >= 2 and with them the
covering-number computations downstream, so the wider class is only used
when validating certificates, never when searching.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Callable, Sequence

from .core import (
    Instance,
    SetFamily,
    canonicalize,
    check_pool,
    enumerate_objects,
    is_isomorphic,
    is_kappa_directed,
    join_raw,
    kappa_union_closure,
    meet,
    submasks_of_size,
    top,
)
from .errors import InputError
from .labels import has_label, mode_arrow, mode_view


@dataclass(frozen=True)
class ZigzagStep:
    """One hop: forward means an arrow from the previous vertex into
    ``family``; backward means a (w)-arrow from ``family`` into it."""

    forward: bool
    family: SetFamily

    def to_obj(self) -> dict:
        return {
            "direction": "forward" if self.forward else "backward",
            "family": self.family.to_sets(),
        }


@dataclass(frozen=True)
class ZigzagCertificate:
    """A replayable path through the zigzag graph."""

    start: SetFamily
    steps: tuple[ZigzagStep, ...]

    @property
    def end(self) -> SetFamily:
        return self.steps[-1].family if self.steps else self.start

    def to_obj(self) -> dict:
        return {
            "start": self.start.to_sets(),
            "steps": [step.to_obj() for step in self.steps],
        }


def replay_certificate(inst: Instance, cert: ZigzagCertificate) -> bool:
    """Validate every hop with the labelling module."""
    prev = cert.start
    for step in cert.steps:
        if step.forward:
            if not mode_arrow(inst, prev, step.family):
                return False
        elif not has_label(inst, step.family, prev, "w"):
            return False
        prev = step.family
    return True


@dataclass(frozen=True)
class HoResult:
    """Three-valued reachability verdict."""

    status: str  # "yes" | "no" | "unknown"
    certificate: ZigzagCertificate | None = None
    reason: dict | None = None
    explored: int = 0

    def to_obj(self) -> dict:
        obj: dict = {"status": self.status, "explored": self.explored}
        if self.certificate is not None:
            obj["certificate"] = self.certificate.to_obj()
        if self.reason is not None:
            obj["reason"] = self.reason
        return obj


def _atom_list(mask: int) -> list[int]:
    return [i for i in range(mask.bit_length()) if mask >> i & 1]


def claim1_necessary(inst: Instance, x: SetFamily, y: SetFamily) -> bool:
    """Every L of size <= kappa inside a member of X is inside a member of
    Y up to fewer than kappa elements."""
    xv = mode_view(inst, x)
    yv = mode_view(inst, y)
    seen: set[int] = set()
    for member in xv.members:
        for size in range(min(member.bit_count(), inst.kappa) + 1):
            for l_mask in submasks_of_size(member, size):
                if l_mask in seen:
                    continue
                seen.add(l_mask)
                if not any(
                    (l_mask & ~yy).bit_count() < inst.kappa for yy in yv.members
                ):
                    return False
    return True


def containment_refuter(
    inst: Instance, x: SetFamily, y: SetFamily, bound: int | None = None
) -> int | None:
    """Nonempty L (size <= bound, default kappa) inside a member of X but
    inside no member of Y; None when no such witness exists.

    A hit soundly refutes reachability because exact containment of small
    nonempty sets propagates along forward steps and (wf)-inversions.
    """
    limit = inst.kappa if bound is None else bound
    xv = mode_view(inst, x)
    yv = mode_view(inst, y)
    witnesses: list[int] = []
    seen: set[int] = set()
    for member in xv.members:
        for size in range(1, min(member.bit_count(), limit) + 1):
            for l_mask in submasks_of_size(member, size):
                if l_mask in seen:
                    continue
                seen.add(l_mask)
                if not any(l_mask & ~yy == 0 for yy in yv.members):
                    witnesses.append(l_mask)
    return min(witnesses, key=lambda m: (m.bit_count(), m)) if witnesses else None


def almost_containment_refuter(
    inst: Instance, x: SetFamily, y: SetFamily
) -> int | None:
    """Nonempty-L variant of the Claim-I condition, usable as a refuter.

    The empty set is excluded deliberately: with Y the empty family, L=∅
    fails the textual condition even though the empty-member family does
    reach the empty family, so only nonempty witnesses are sound.
    """
    xv = mode_view(inst, x)
    yv = mode_view(inst, y)
    seen: set[int] = set()
    for member in xv.members:
        for size in range(1, min(member.bit_count(), inst.kappa) + 1):
            for l_mask in submasks_of_size(member, size):
                if l_mask in seen:
                    continue
                seen.add(l_mask)
                if not any(
                    (l_mask & ~yy).bit_count() < inst.kappa for yy in yv.members
                ):
                    return l_mask
    return None


def _size_capped_submasks(mask: int, cap: int) -> list[int]:
    subs = []
    for size in range(1, min(mask.bit_count(), cap) + 1):
        subs.extend(submasks_of_size(mask, size))
    return subs


def _coverage_profile(inst: Instance, fam: SetFamily, index: dict[int, int]) -> int:
    """Bitset of the indexed small masks lying inside some member."""
    profile = 0
    for member in mode_view(inst, fam).members:
        for sub in _size_capped_submasks(member, inst.kappa):
            bit = index.get(sub)
            if bit is not None:
                profile |= 1 << bit
    return profile


def zigzag_reach_map(
    inst: Instance,
    x: SetFamily,
    pool: Sequence[SetFamily],
    depth: int | None = None,
    vertex_filter: Callable[[SetFamily], bool] | None = None,
    backward_label: str = "wf",
) -> dict[SetFamily, ZigzagCertificate]:
    """Certificates for every pool vertex reachable from ``x``.

    Breadth-first over forward arrows and inversions of ``backward_label``
    arrows; neighbor expansion is sorted, so each certificate is the
    lexicographically least among the shortest.  ``depth`` bounds the hop
    count (None means exhaust the pool); ``vertex_filter`` restricts which
    pool vertices may appear on paths (the start is always allowed).

    The default inverts (wf) only, which keeps the refuters of this module
    sound; ``backward_label="w"`` searches the full localization graph and
    is meant for existence questions where a wider certificate is wanted,
    never for minimization.
    """
    if backward_label not in ("wf", "w"):
        raise InputError("backward_label must be 'wf' or 'w'")
    start = canonicalize(x)
    vertices = {canonicalize(fam) for fam in pool}
    if vertex_filter is not None:
        vertices = {v for v in vertices if vertex_filter(v)}
    vertices.add(start)
    ordered = sorted(vertices, key=lambda fam: fam.sort_key)

    # Pre-filter for backward edges: wf(W, V) forces every <=kappa subset
    # of a member of V to sit inside a member of W, which is a cheap
    # bitset inclusion on precomputed coverage profiles.  The (w) clause
    # forces no such containment, so the gate is disabled for it.
    small_masks = sorted(
        {
            sub
            for fam in ordered
            for member in mode_view(inst, fam).members
            for sub in _size_capped_submasks(member, inst.kappa)
        }
    )
    index = {mask: i for i, mask in enumerate(small_masks)}
    profile = {fam: _coverage_profile(inst, fam, index) for fam in ordered}
    gated = backward_label == "wf"

    reached: dict[SetFamily, ZigzagCertificate] = {
        start: ZigzagCertificate(start, ())
    }
    frontier = deque([start])
    hops = 0
    while frontier and (depth is None or hops < depth):
        hops += 1
        next_frontier: deque[SetFamily] = deque()
        for _ in range(len(frontier)):
            v = frontier.popleft()
            base_cert = reached[v]
            forward = [
                w for w in ordered if w not in reached and mode_arrow(inst, v, w)
            ]
            backward = [
                w
                for w in ordered
                if w not in reached
                and (not gated or profile[w] & profile[v] == profile[v])
                and has_label(inst, w, v, backward_label)
            ]
            for is_fwd, batch in ((True, forward), (False, backward)):
                for w in batch:
                    if w in reached:
                        continue
                    reached[w] = ZigzagCertificate(
                        start, base_cert.steps + (ZigzagStep(is_fwd, w),)
                    )
                    next_frontier.append(w)
        frontier = next_frontier
    return reached


def default_reach_pool(
    inst: Instance, x: SetFamily, y: SetFamily
) -> list[SetFamily]:
    """Antichains over the atoms of X and Y, plus landmark constructions.

    When the joint support exceeds five atoms the full antichain count is
    impractical, so only the constructions are used (the search then leans
    on refuters and may answer unknown more often).
    """
    support = 0
    for fam in (x, y):
        for member in fam.members:
            support |= member
    extras = [
        SetFamily(()),
        SetFamily((0,)),
        top(inst.n),
        canonicalize(x),
        canonicalize(y),
        meet(x, y),
        canonicalize(join_raw(x, y)),
        kappa_union_closure(x, inst.kappa),
        kappa_union_closure(y, inst.kappa),
    ]
    if support.bit_count() <= 5:
        pool = enumerate_objects(inst.n, support_mask=support)
        pool.extend(extras)
    else:
        pool = extras
    unique = {canonicalize(fam) for fam in pool}
    check_pool(len(unique))
    return sorted(unique, key=lambda fam: fam.sort_key)


def ho_reaches(
    inst: Instance,
    x: SetFamily,
    y: SetFamily,
    pool: Sequence[SetFamily] | None = None,
    depth: int | None = 4,
) -> HoResult:
    """Decide whether X reaches Y through the zigzag graph."""
    inst.check_family(x)
    inst.check_family(y)
    xc = canonicalize(x)
    yc = canonicalize(y)
    if xc == yc:
        return HoResult("yes", ZigzagCertificate(xc, ()))
    witness = almost_containment_refuter(inst, xc, yc)
    if witness is not None:
        return HoResult(
            "no",
            reason={"refuter": "almost-containment", "witness": _atom_list(witness)},
        )
    witness = containment_refuter(inst, xc, yc)
    if witness is not None:
        return HoResult(
            "no",
            reason={"refuter": "containment", "witness": _atom_list(witness)},
        )
    if pool is None:
        pool = default_reach_pool(inst, xc, yc)
    reached = zigzag_reach_map(inst, xc, list(pool) + [yc], depth)
    cert = reached.get(yc)
    if cert is not None:
        return HoResult("yes", cert, explored=len(reached))
    return HoResult("unknown", explored=len(reached))


def ho_iso(
    inst: Instance,
    x: SetFamily,
    y: SetFamily,
    pool: Sequence[SetFamily] | None = None,
    depth: int | None = 4,
) -> str:
    """Mutual reachability: "yes", "no", or "unknown"."""
    there = ho_reaches(inst, x, y, pool, depth)
    if there.status == "no":
        return "no"
    back = ho_reaches(inst, y, x, pool, depth)
    if back.status == "no":
        return "no"
    if there.status == "yes" and back.status == "yes":
        return "yes"
    return "unknown"


@dataclass(frozen=True)
class IndecResult:
    """Indecomposability verdict with a completeness marker."""

    indecomposable: bool
    complete: bool
    witness: SetFamily | None = None

    def to_obj(self) -> dict:
        obj: dict = {
            "indecomposable": self.indecomposable,
            "complete": self.complete,
        }
        if self.witness is not None:
            obj["witness"] = self.witness.to_sets()
        return obj


def default_indec_pool(inst: Instance) -> list[SetFamily]:
    """Full antichain enumeration without empty-membered families.

    Families containing the empty set sit strictly between the empty
    family and everything else without being isomorphic to either, which
    would make every arrow out of the empty family decomposable; the
    convention here keeps singleton targets indecomposable.
    """
    return [
        fam
        for fam in enumerate_objects(inst.n)
        if all(member != 0 for member in fam.members)
    ]


def is_indecomposable(
    inst: Instance,
    x: SetFamily,
    y: SetFamily,
    pool: Sequence[SetFamily] | None = None,
) -> IndecResult:
    """No strictly intermediate object in the pool splits the arrow X -> Y."""
    if not mode_arrow(inst, x, y):
        raise InputError("is_indecomposable requires an arrow between the operands")
    complete_pool = default_indec_pool(inst) if inst.n <= 5 else None
    if pool is None:
        if complete_pool is None:
            raise InputError("no default pool above n=5; pass one explicitly")
        pool = complete_pool
        complete = True
    else:
        pool = [canonicalize(fam) for fam in pool]
        complete = complete_pool is not None and set(pool) >= set(complete_pool)
    for z in sorted(pool, key=lambda fam: fam.sort_key):
        if not (mode_arrow(inst, x, z) and mode_arrow(inst, z, y)):
            continue
        iso_x = mode_arrow(inst, z, x)
        iso_y = mode_arrow(inst, y, z)
        if not (iso_x or iso_y):
            return IndecResult(False, complete, z)
    return IndecResult(True, complete)


@dataclass(frozen=True)
class Diagram:
    """Finite diagram: vertices plus arrow-valid directed edges."""

    vertices: tuple[SetFamily, ...]
    edges: tuple[tuple[int, int], ...] = ()

    def __post_init__(self) -> None:
        for i, j in self.edges:
            if not (0 <= i < len(self.vertices) and 0 <= j < len(self.vertices)):
                raise InputError(f"edge ({i},{j}) references a missing vertex")
            if not mode_arrow_free(self.vertices[i], self.vertices[j]):
                raise InputError(f"edge ({i},{j}) is not an arrow")

    def to_obj(self) -> dict:
        return {
            "vertices": [fam.to_sets() for fam in self.vertices],
            "edges": [list(edge) for edge in self.edges],
        }


def mode_arrow_free(x: SetFamily, y: SetFamily) -> bool:
    """Plain arrow test without an instance (diagram edge validation)."""
    return all(any(m & ~t == 0 for t in y.members) for m in x.members)


def posetal_limit(inst: Instance, diagram: Diagram, kind: str) -> SetFamily | None:
    """Iterated meet (limit) or join (colimit) of the diagram's vertices.

    In a posetal category all squares commute, so edges only constrain
    via the vertex order and the bound is a pure lattice fold.  In qt
    mode the bound must be kappa-directed: a non-directed meet means the
    limit is absent, while a non-directed join is replaced by its
    kappa-union closure (the least directed upper bound).
    """
    if kind not in ("limit", "colimit"):
        raise InputError(f"unknown (co)limit kind {kind!r}")
    if not diagram.vertices:
        return top(inst.n) if kind == "limit" else SetFamily(())
    if kind == "limit":
        bound = diagram.vertices[0]
        for fam in diagram.vertices[1:]:
            bound = meet(bound, fam)
        bound = canonicalize(bound)
        if inst.mode in ("qt", "qt+") and not is_kappa_directed(bound, inst.kappa):
            return None
        return bound
    bound = diagram.vertices[0]
    for fam in diagram.vertices[1:]:
        bound = join_raw(bound, fam)
    bound = canonicalize(bound)
    if inst.mode in ("qt", "qt+") and not is_kappa_directed(bound, inst.kappa):
        return kappa_union_closure(bound, inst.kappa)
    return bound


def is_degenerate_limit(inst: Instance, diagram: Diagram, kind: str) -> bool:
    """True when the (co)limit is isomorphic to one of the vertices."""
    bound = posetal_limit(inst, diagram, kind)
    if bound is None:
        raise InputError("the requested (co)limit is absent in this mode")
    return any(is_isomorphic(bound, fam) for fam in diagram.vertices)
