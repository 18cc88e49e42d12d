"""Set families over a finite universe, stored as bitmask tuples.

A family is a finite collection of subsets of ``{0, ..., n-1}``.  Members are
encoded as integer bitmasks (atom ``i`` is bit ``1 << i``), kept sorted and
deduplicated, so families compare and hash structurally.  The empty set is a
legal member (mask ``0``) and the empty family (``BOTTOM``) is a legal object.

Families are ordered by ``x -> y`` iff every member of ``x`` is contained in
some member of ``y``; the category of families with these arrows is a
preorder, so all squares commute and isomorphism is mutual domination.  The
mode-dependent arrow routing (closures) lives with the label deciders in
:mod:`famcat.labels`; everything here is presentation-level and mode-free.
"""

from __future__ import annotations

import functools
import itertools
from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

from .errors import InputError, ResourceLimitError

UNIVERSE_CAP = 16
POOL_CAP = 10_000_000

_caps_enabled = True


def set_caps_enabled(enabled: bool) -> None:
    """Enable or disable the hard resource caps (explicit acknowledgment)."""
    global _caps_enabled
    _caps_enabled = bool(enabled)


def caps_enabled() -> bool:
    """Return whether the hard resource caps are currently enforced."""
    return _caps_enabled


def check_universe(n: int) -> None:
    """Raise unless ``n`` is a legal universe size under the current caps."""
    if n < 1:
        raise InputError(f"universe size must be at least 1, got {n}")
    if _caps_enabled and n > UNIVERSE_CAP:
        raise ResourceLimitError(
            f"universe size {n} exceeds the hard cap {UNIVERSE_CAP}"
        )


def check_pool(count: int) -> None:
    """Raise when an enumeration would exceed the pool cap."""
    if _caps_enabled and count > POOL_CAP:
        raise ResourceLimitError(
            f"enumeration of {count} families exceeds the pool cap {POOL_CAP}"
        )


def mask_of(atoms: Iterable[int]) -> int:
    """Encode an iterable of atoms as a bitmask."""
    mask = 0
    for atom in atoms:
        if atom < 0:
            raise InputError(f"atoms must be nonnegative, got {atom}")
        mask |= 1 << atom
    return mask


def atoms_of(mask: int) -> tuple[int, ...]:
    """Decode a bitmask into its sorted tuple of atoms."""
    return tuple(i for i in range(mask.bit_length()) if mask >> i & 1)


def submasks_of_size(mask: int, size: int) -> Iterator[int]:
    """Yield all submasks of ``mask`` with exactly ``size`` bits, ascending."""
    atoms = atoms_of(mask)
    if size > len(atoms):
        return
    for combo in itertools.combinations(atoms, size):
        yield mask_of(combo)


@dataclass(frozen=True)
class SetFamily:
    """An immutable family of subsets, given by sorted member bitmasks."""

    members: tuple[int, ...]

    def __post_init__(self) -> None:
        members = tuple(sorted(set(self.members)))
        if members and members[0] < 0:
            raise InputError("member masks must be nonnegative")
        object.__setattr__(self, "members", members)

    @classmethod
    def from_masks(cls, masks: Iterable[int]) -> "SetFamily":
        return cls(tuple(masks))

    @classmethod
    def from_sets(cls, sets: Iterable[Iterable[int]]) -> "SetFamily":
        return cls(tuple(mask_of(s) for s in sets))

    def to_sets(self) -> list[list[int]]:
        """Return the members as sorted atom lists, in mask order."""
        return [list(atoms_of(m)) for m in self.members]

    @property
    def sort_key(self) -> tuple[int, tuple[int, ...]]:
        """Deterministic ordering key: member count, then mask tuple."""
        return (len(self.members), self.members)

    def max_member_size(self) -> int:
        """Size of the largest member; 0 for the empty family."""
        return max((m.bit_count() for m in self.members), default=0)

    def __iter__(self) -> Iterator[int]:
        return iter(self.members)

    def __len__(self) -> int:
        return len(self.members)

    def __repr__(self) -> str:
        inner = ", ".join("{" + ",".join(map(str, atoms_of(m))) + "}" for m in self.members)
        return f"SetFamily[{inner}]"


BOTTOM = SetFamily(())


def top(n: int) -> SetFamily:
    """The family whose single member is the full universe."""
    check_universe(n)
    return SetFamily(((1 << n) - 1,))


def arrow_exists(x: SetFamily, y: SetFamily) -> bool:
    """Decide the plain arrow: every member of ``x`` lies in a member of ``y``."""
    return all(any(m & t == m for t in y.members) for m in x.members)


def is_isomorphic(x: SetFamily, y: SetFamily) -> bool:
    """Mutual plain arrows (the only isomorphism notion in a preorder)."""
    return arrow_exists(x, y) and arrow_exists(y, x)


def canonicalize(x: SetFamily) -> SetFamily:
    """The antichain of inclusion-maximal members, the canonical presentation."""
    maximal = [
        m
        for i, m in enumerate(x.members)
        if not any(j != i and m & t == m for j, t in enumerate(x.members))
    ]
    return SetFamily(tuple(maximal))


def meet(x: SetFamily, y: SetFamily) -> SetFamily:
    """Greatest lower bound: canonical family of pairwise intersections."""
    return canonicalize(SetFamily(tuple(a & b for a in x.members for b in y.members)))


def join_raw(x: SetFamily, y: SetFamily) -> SetFamily:
    """Least upper bound: canonical form of the member union.

    "Raw" marks that no reflection into a restricted object class is applied;
    callers needing the reflected colimit compose with the reflection
    themselves.
    """
    return canonicalize(SetFamily(x.members + y.members))


@functools.lru_cache(maxsize=None)
def kappa_union_closure(x: SetFamily, kappa: int) -> SetFamily:
    """Close ``x`` under unions of fewer than ``kappa`` members, canonically.

    The empty union contributes the empty set, so the closure of ``BOTTOM``
    is ``{{}}``.  For ``kappa == 1`` only the empty union is permitted and the
    closure of every family collapses to ``{{}}``; this degenerate case is
    intentional and shared with the covering oracle's ``sigma = 1``
    convention.  Computed as a fixpoint of one level of unions at a time,
    which is sound because dominated members never generate new maximal
    unions.  Cached: the function is pure and families hash structurally.
    """
    if kappa < 1:
        raise InputError(f"kappa must be at least 1, got {kappa}")
    if kappa == 1:
        return SetFamily((0,))
    current = canonicalize(SetFamily(x.members + (0,)))
    while True:
        unions = set(current.members)
        for count in range(2, kappa):
            for combo in itertools.combinations(current.members, count):
                acc = 0
                for m in combo:
                    acc |= m
                unions.add(acc)
        nxt = canonicalize(SetFamily(tuple(unions)))
        if nxt == current:
            return current
        current = nxt


def is_kappa_directed(x: SetFamily, kappa: int) -> bool:
    """True iff every collection of fewer than ``kappa`` members has an upper
    bound inside the family.  The empty family is never directed (the empty
    collection has no bound to point at)."""
    return arrow_exists(kappa_union_closure(x, kappa), x)


def apply_permutation(perm: Sequence[int], x: SetFamily) -> SetFamily:
    """Relabel atoms of every member through the permutation ``perm``."""
    n = len(perm)
    if sorted(perm) != list(range(n)):
        raise InputError(f"{perm!r} is not a permutation of range({n})")
    out = []
    for m in x.members:
        if m >> n:
            raise InputError("family uses atoms outside the permutation domain")
        out.append(mask_of(perm[a] for a in atoms_of(m)))
    return SetFamily(tuple(out))


VARIANTS = ("qt", "st")
MODES = ("st", "qt", "qt+")


@dataclass(frozen=True)
class Instance:
    """Evaluation context: universe size, threshold, clause variant, mode.

    ``kappa`` is the finite stand-in for the countability threshold: "finite"
    reads as size < kappa and "countable" as size <= kappa.  ``variant``
    selects between the two clause families the source definitions give
    ("qt" bounds by the source member alone, "st" by its intersection with
    the target member).  ``mode`` selects the object class and arrow routing:
    "st" and "qt" use plain arrows, "qt+" evaluates every arrow and label
    through ``kappa_union_closure``.  ``base`` switches the derived-functor
    operations into co-slice form.
    """

    n: int
    kappa: int
    variant: str = "qt"
    mode: str = "qt"
    base: SetFamily | None = None

    def __post_init__(self) -> None:
        check_universe(self.n)
        if not 1 <= self.kappa <= self.n:
            raise InputError(
                f"kappa must satisfy 1 <= kappa <= n, got kappa={self.kappa} n={self.n}"
            )
        if self.variant not in VARIANTS:
            raise InputError(f"variant must be one of {VARIANTS}, got {self.variant!r}")
        if self.mode not in MODES:
            raise InputError(f"mode must be one of {MODES}, got {self.mode!r}")
        if self.base is not None:
            full = (1 << self.n) - 1
            for m in self.base.members:
                if m & ~full:
                    raise InputError("base family uses atoms outside the universe")

    @property
    def universe_mask(self) -> int:
        return (1 << self.n) - 1

    def check_family(self, x: SetFamily) -> SetFamily:
        """Validate that ``x`` lives inside this universe; return it."""
        for m in x.members:
            if m & ~self.universe_mask:
                raise InputError(
                    f"member {set(atoms_of(m))} uses atoms outside universe size {self.n}"
                )
        return x


def enumerate_objects(
    n: int,
    *,
    max_member_size: int | None = None,
    max_family_size: int | None = None,
    antichains_only: bool = True,
    support_mask: int | None = None,
) -> list[SetFamily]:
    """Enumerate families over ``{0..n-1}``, sorted by (size, member masks).

    With ``antichains_only`` (the default) only canonical presentations are
    produced, one per isomorphism class.  ``max_member_size`` restricts the
    allowed member sizes, ``max_family_size`` the member counts, and
    ``support_mask`` confines members to subsets of the given atom set.
    Raises :class:`ResourceLimitError` when the output would exceed the
    pool cap.
    """
    check_universe(n)
    allowed = [
        m
        for m in range(1 << n)
        if (max_member_size is None or m.bit_count() <= max_member_size)
        and (support_mask is None or m & ~support_mask == 0)
    ]
    out: list[SetFamily] = []
    stack: list[int] = []

    def extend(start: int) -> None:
        check_pool(len(out) + 1)
        out.append(SetFamily(tuple(stack)))
        if max_family_size is not None and len(stack) >= max_family_size:
            return
        for idx in range(start, len(allowed)):
            cand = allowed[idx]
            if antichains_only and any(
                cand & m == cand or cand & m == m for m in stack
            ):
                continue
            stack.append(cand)
            extend(idx + 1)
            stack.pop()

    extend(0)
    out.sort(key=lambda f: f.sort_key)
    return out


def all_permutations(n: int) -> list[tuple[int, ...]]:
    """All atom permutations of the universe, in lexicographic order."""
    return list(itertools.permutations(range(n)))


def family_to_obj(x: SetFamily) -> list[list[int]]:
    """JSON-ready representation: members as sorted atom lists, mask order."""
    return x.to_sets()


def family_from_obj(obj: object, n: int | None = None) -> SetFamily:
    """Parse a family from the JSON shape ``[[atom, ...], ...]``."""
    if not isinstance(obj, list):
        raise InputError(f"family must be a list of atom lists, got {type(obj).__name__}")
    members = []
    for entry in obj:
        if not isinstance(entry, list) or not all(isinstance(a, int) for a in entry):
            raise InputError(f"family member must be a list of ints, got {entry!r}")
        if len(set(entry)) != len(entry):
            raise InputError(f"family member {entry!r} repeats an atom")
        if n is not None and any(not 0 <= a < n for a in entry):
            raise InputError(f"family member {entry!r} uses atoms outside universe {n}")
        members.append(mask_of(entry))
    return SetFamily(tuple(members))


def instance_to_obj(inst: Instance) -> dict:
    """JSON-ready representation of an instance."""
    obj: dict = {
        "universe": inst.n,
        "kappa": inst.kappa,
        "variant": inst.variant,
        "mode": inst.mode,
    }
    if inst.base is not None:
        obj["base"] = family_to_obj(inst.base)
    return obj


def instance_from_obj(obj: object) -> Instance:
    """Parse an instance from its JSON object shape."""
    if not isinstance(obj, dict):
        raise InputError("instance must be a JSON object")
    try:
        n = obj["universe"]
        kappa = obj["kappa"]
    except KeyError as missing:
        raise InputError(f"instance is missing required key {missing}") from None
    if not isinstance(n, int) or not isinstance(kappa, int):
        raise InputError("instance universe and kappa must be integers")
    variant = obj.get("variant", "qt")
    mode = obj.get("mode", "qt")
    base = None
    if "base" in obj and obj["base"] is not None:
        base = family_from_obj(obj["base"], n)
    return Instance(n=n, kappa=kappa, variant=variant, mode=mode, base=base)
