"""Exact generalized covering numbers by branch and bound.

``CovProblem(n, delta, theta, sigma)`` asks for the least family of
subsets of ``{0..n-1}``, each of size strictly below ``delta``, such that
every subset of size strictly below ``theta`` lies in a union of strictly
fewer than ``sigma`` members.  This module is deliberately independent of
the labelling and homotopy machinery: it only shares the bitmask plumbing,
so its values can serve as an external oracle for the derived-functor
computations.

Conventions for the degenerate corners, shared with the derived module:
the empty union is the empty set, so ``sigma=1`` (or ``delta=1``) leaves
only the empty set coverable and the problem is infeasible as soon as
``theta > 1``; ``theta <= 1`` is satisfied by the empty family.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Sequence

from .core import POOL_CAP, SetFamily, check_universe, submasks_of_size
from .errors import InputError


class _Budget(Exception):
    """Internal: raised when the node budget is exhausted."""


@dataclass(frozen=True)
class CovProblem:
    """Parameters (n, delta, theta, sigma), all bounds strict."""

    n: int
    delta: int
    theta: int
    sigma: int

    def __post_init__(self) -> None:
        check_universe(self.n)
        if not (1 <= self.delta <= self.n + 1):
            raise InputError(f"delta must lie in 1..{self.n + 1}")
        if not (1 <= self.theta <= self.n + 1):
            raise InputError(f"theta must lie in 1..{self.n + 1}")
        if self.sigma < 1:
            raise InputError("sigma must be at least 1")

    def to_obj(self) -> dict:
        return {
            "n": self.n,
            "delta": self.delta,
            "theta": self.theta,
            "sigma": self.sigma,
        }


@dataclass(frozen=True)
class CovSolution:
    """Optimal value and witness; value None means infeasible."""

    value: int | None
    family: SetFamily | None
    optimality: str  # "exhausted" | "bounded"
    nodes: int = 0

    def to_obj(self) -> dict:
        return {
            "value": self.value,
            "infeasible": self.value is None,
            "family": self.family.to_sets() if self.family is not None else None,
            "optimality": self.optimality,
            "nodes": self.nodes,
        }


def _targets(p: CovProblem) -> list[int]:
    """All nonempty subsets that must be covered (the empty set always is)."""
    universe = (1 << p.n) - 1
    out: list[int] = []
    for size in range(1, p.theta):
        out.extend(submasks_of_size(universe, size))
    return sorted(out)


def _covered(target: int, members: Sequence[int], arity: int) -> bool:
    """Is ``target`` inside a union of at most ``arity`` members?"""
    if target == 0:
        return True
    if arity <= 0:
        return False
    useful = [m for m in members if m & target]
    for count in range(1, min(arity, len(useful)) + 1):
        for combo in itertools.combinations(useful, count):
            union = 0
            for m in combo:
                union |= m
            if target & ~union == 0:
                return True
    return False


def is_covering_family(p: CovProblem, family: SetFamily) -> bool:
    """Check feasibility of a family against the problem."""
    for member in family.members:
        if member.bit_count() >= p.delta:
            raise InputError(
                f"member of size {member.bit_count()} violates the delta bound"
            )
        if member & ~((1 << p.n) - 1):
            raise InputError("member uses atoms outside the universe")
    members = family.members
    return all(_covered(t, members, p.sigma - 1) for t in _targets(p))


def _static_coverage(p: CovProblem, cand: int) -> int:
    """How many target sets sit inside the candidate on its own."""
    from math import comb

    size = cand.bit_count()
    return sum(comb(size, t) for t in range(1, min(size, p.theta - 1) + 1))


def _candidates(p: CovProblem) -> list[int]:
    """Nonempty candidate members, by descending static coverage then mask."""
    universe = (1 << p.n) - 1
    cands: list[int] = []
    for size in range(1, p.delta):
        cands.extend(submasks_of_size(universe, size))
    return sorted(cands, key=lambda c: (-_static_coverage(p, c), c))


def _counting_lower_bound(p: CovProblem, k: int, demand: dict[int, int]) -> bool:
    """Can k members conceivably meet the demand?  Counting argument: a
    union of j members has at most min(n, j*(delta-1)) atoms and therefore
    contains at most C(that, t) sets of size t."""
    from math import comb

    for t, need in demand.items():
        supply = 0
        for j in range(0, min(p.sigma - 1, k) + 1):
            atoms = min(p.n, j * (p.delta - 1))
            supply += comb(k, j) * comb(atoms, t)
            if supply >= need:
                break
        if supply < need:
            return False
    return True


def cov_bounds(p: CovProblem) -> tuple[int | None, int | None]:
    """Sound (lower, upper) bounds; None upper means infeasible, and the
    lower bound is None only in that same case."""
    from math import comb

    if p.theta <= 1:
        return (0, 0)
    if p.sigma == 1 or p.delta == 1:
        return (None, None)
    demand = {t: comb(p.n, t) for t in range(1, p.theta)}
    k = 0
    while not _counting_lower_bound(p, k, demand):
        k += 1
        if k > 1 << p.n:
            return (None, None)
    lower = k
    greedy = _greedy_upper(p)
    if greedy is None:
        return (None, None)
    return (lower, len(greedy))


def _greedy_upper(p: CovProblem) -> list[int] | None:
    """Greedy cover; None when even all candidates together fail."""
    cands = _candidates(p)
    targets = _targets(p)
    if not _all_feasible(p, cands, targets):
        return None
    chosen: list[int] = []
    uncovered = [t for t in targets if not _covered(t, chosen, p.sigma - 1)]
    while uncovered:
        best = None
        best_gain = -1
        for c in cands:
            if c in chosen:
                continue
            gain = sum(
                1 for t in uncovered if _covered(t, chosen + [c], p.sigma - 1)
            )
            if gain > best_gain:
                best, best_gain = c, gain
        if best is None:
            return None
        chosen.append(best)
        uncovered = [t for t in uncovered if not _covered(t, chosen, p.sigma - 1)]
    return chosen


def _all_feasible(p: CovProblem, cands: list[int], targets: list[int]) -> bool:
    return all(_covered(t, cands, p.sigma - 1) for t in targets)


def _orbit_representatives(p: CovProblem) -> set[int]:
    """Lexicographically least mask of each size: the only first members a
    symmetry-pruned search needs to try."""
    return {(1 << size) - 1 for size in range(1, p.delta)}


def cov_exact(
    p: CovProblem,
    symmetry: bool = True,
    bound_closing: bool = True,
    node_cap: int | None = None,
) -> CovSolution:
    """Minimal covering family via iterative-deepening branch and bound.

    ``symmetry`` restricts the first chosen member to one representative
    per atom-permutation orbit; ``bound_closing`` accepts the greedy
    witness outright when the counting lower bound already matches it.
    Disabling both forces the fully exhaustive recomputation used for
    oracle self-validation.  When the node budget is exceeded the
    best-known answer is returned with optimality="bounded".
    """
    cap = POOL_CAP if node_cap is None else node_cap
    if p.theta <= 1:
        return CovSolution(0, SetFamily(()), "exhausted")
    lower, upper = cov_bounds(p)
    if upper is None:
        return CovSolution(None, None, "exhausted")
    greedy = _greedy_upper(p)
    assert greedy is not None
    if bound_closing and lower is not None and lower == len(greedy):
        return CovSolution(lower, SetFamily(tuple(greedy)), "exhausted")

    cands = _candidates(p)
    targets = _targets(p)
    first_members = _orbit_representatives(p) if symmetry else None
    nodes = 0
    lo = lower if (bound_closing and lower is not None) else 0

    def search(k: int, chosen: list[int], start_idx: int) -> list[int] | None:
        nonlocal nodes
        nodes += 1
        if nodes > cap:
            raise _Budget()
        uncovered = [t for t in targets if not _covered(t, chosen, p.sigma - 1)]
        if not uncovered:
            return list(chosen)
        if k - len(chosen) <= 0:
            return None
        demand: dict[int, int] = {}
        for t in uncovered:
            demand[t.bit_count()] = demand.get(t.bit_count(), 0) + 1
        # members already chosen may join unions with the new ones, so the
        # counting test runs against the full prospective family size
        if not _counting_lower_bound(p, k, demand):
            return None
        for idx in range(start_idx, len(cands)):
            cand = cands[idx]
            if not chosen and first_members is not None:
                if cand not in first_members:
                    continue
            chosen.append(cand)
            found = search(k, chosen, idx + 1)
            chosen.pop()
            if found is not None:
                return found
        return None

    try:
        for k in range(lo, len(greedy)):
            found = search(k, [], 0)
            if found is not None:
                return CovSolution(
                    k, SetFamily(tuple(found)), "exhausted", nodes
                )
        return CovSolution(
            len(greedy), SetFamily(tuple(greedy)), "exhausted", nodes
        )
    except _Budget:
        return CovSolution(len(greedy), SetFamily(tuple(greedy)), "bounded", nodes)
