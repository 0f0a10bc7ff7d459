"""Independence structures over ground-set indices.

Three variants are supported: uniform, partition and an explicit family of
index sets. An explicit family need not satisfy the matroid axioms; the
selectors only use its membership oracle, and :func:`validate_axioms` reports
whether it is a genuine matroid.
"""
from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterator, Optional, Tuple

MAX_AXIOM_N = 20
MAX_ENUM_N = 25


class GuardError(ValueError):
    """Raised when an exhaustive computation would exceed its size guard."""


@dataclass(frozen=True)
class Uniform:
    k: int
    ground_size: int

    def __post_init__(self):
        if self.k < 1:
            raise ValueError("uniform matroid needs k >= 1")
        _check_n(self.ground_size)

    @property
    def rank_cap(self) -> int:
        return min(self.k, self.ground_size)

    def _indep(self, S) -> bool:
        return len(S) <= self.k

    def to_json(self) -> dict:
        return {"type": "uniform", "k": self.k}


@dataclass(frozen=True)
class Partition:
    blocks: Tuple[Tuple[int, ...], ...]
    caps: Tuple[int, ...]
    ground_size: int
    _block_of: dict = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        blocks = tuple(tuple(sorted(int(i) for i in b)) for b in self.blocks)
        caps = tuple(int(c) for c in self.caps)
        object.__setattr__(self, "blocks", blocks)
        object.__setattr__(self, "caps", caps)
        _check_n(self.ground_size)
        if len(blocks) != len(caps):
            raise ValueError("partition needs one capacity per block")
        if any(c < 0 for c in caps):
            raise ValueError("partition capacities must be nonnegative")
        seen = {}
        for b, block in enumerate(blocks):
            for i in block:
                if i in seen:
                    raise ValueError(f"index {i} appears in blocks {seen[i]} and {b}")
                seen[i] = b
        if set(seen) != set(range(self.ground_size)):
            raise ValueError("partition blocks must cover exactly 0..n-1")
        object.__setattr__(self, "_block_of", seen)

    @property
    def rank_cap(self) -> int:
        return sum(min(c, len(b)) for b, c in zip(self.blocks, self.caps))

    def _indep(self, S) -> bool:
        counts = [0] * len(self.blocks)
        for i in S:
            b = self._block_of[i]
            counts[b] += 1
            if counts[b] > self.caps[b]:
                return False
        return True

    def to_json(self) -> dict:
        return {"type": "partition", "blocks": [list(b) for b in self.blocks],
                "caps": list(self.caps)}


@dataclass(frozen=True)
class Explicit:
    family: frozenset
    ground_size: int

    def __post_init__(self):
        _check_n(self.ground_size)
        fam = {frozenset(int(i) for i in S) for S in self.family}
        fam.add(frozenset())
        for S in fam:
            for i in S:
                if not 0 <= i < self.ground_size:
                    raise ValueError(f"index {i} outside ground set of size {self.ground_size}")
        object.__setattr__(self, "family", frozenset(fam))

    @property
    def rank_cap(self) -> int:
        return max(len(S) for S in self.family)

    def _indep(self, S) -> bool:
        return frozenset(S) in self.family

    def sorted_family(self):
        return sorted(self.family, key=_set_order)

    def to_json(self) -> dict:
        return {"type": "explicit", "sets": [sorted(S) for S in self.sorted_family() if S]}


def _check_n(n):
    if n < 0:
        raise ValueError("ground size must be nonnegative")


def _set_order(S):
    return (len(S), tuple(sorted(S)))


def _check_indices(m, S):
    for i in S:
        if not 0 <= i < m.ground_size:
            raise IndexError(f"index {i} outside ground set of size {m.ground_size}")


def is_independent(m, S) -> bool:
    S = set(S)
    _check_indices(m, S)
    return m._indep(S)


def can_extend(m, S, x: int) -> bool:
    S = set(S)
    if x in S:
        raise ValueError(f"element {x} is already in the set")
    return is_independent(m, S | {x})


def rank_cap(m) -> int:
    return m.rank_cap


@dataclass(frozen=True)
class AxiomReport:
    hereditary_ok: bool
    augmentation_ok: bool
    counterexample: Optional[Tuple[tuple, tuple]] = None

    @property
    def is_matroid(self) -> bool:
        return self.hereditary_ok and self.augmentation_ok

    def to_json(self) -> dict:
        cx = None
        if self.counterexample is not None:
            cx = {"S": list(self.counterexample[0]), "T": list(self.counterexample[1])}
        return {"hereditary_ok": self.hereditary_ok,
                "augmentation_ok": self.augmentation_ok,
                "is_matroid": self.is_matroid,
                "counterexample": cx}


def validate_axioms(m) -> AxiomReport:
    """Exhaustively check the hereditary and augmentation properties.

    For the hereditary check the counterexample is ``(S, T)`` with ``S`` a
    missing subset of the member ``T``. For augmentation it is ``(S, T)``
    with ``|S| < |T|`` and no ``j`` in ``T - S`` making ``S + j`` a member.
    The scan runs over members in size-then-lexicographic order.
    """
    if not isinstance(m, Explicit):
        return AxiomReport(True, True)
    if m.ground_size > MAX_AXIOM_N:
        raise GuardError(
            f"axiom check enumerates subsets of a ground set of size {m.ground_size} "
            f"(limit {MAX_AXIOM_N}); check a sample of the family instead")
    fam = m.sorted_family()
    members = m.family

    hereditary_cx = None
    for T in fam:
        for r in range(len(T)):
            for S in combinations(sorted(T), r):
                if frozenset(S) not in members:
                    hereditary_cx = (tuple(S), tuple(sorted(T)))
                    break
            if hereditary_cx:
                break
        if hereditary_cx:
            break

    augmentation_cx = None
    for S in fam:
        for T in fam:
            if len(T) <= len(S):
                continue
            if not any(S | {j} in members for j in T - S):
                augmentation_cx = (tuple(sorted(S)), tuple(sorted(T)))
                break
        if augmentation_cx:
            break

    return AxiomReport(hereditary_cx is None, augmentation_cx is None,
                       hereditary_cx or augmentation_cx)


def enumerate_independent_sets(m, max_card: Optional[int] = None) -> Iterator[tuple]:
    """Yield every independent set with at most ``max_card`` elements.

    Sets come out as sorted tuples, ordered by size and then lexicographically.
    Uniform and partition structures are walked with hereditary pruning: a
    set is only grown from independent sets of the previous size.
    """
    if max_card is None:
        max_card = m.rank_cap
    if isinstance(m, Explicit):
        for S in m.sorted_family():
            if len(S) <= max_card:
                yield tuple(sorted(S))
        return
    if m.ground_size > MAX_ENUM_N:
        raise GuardError(
            f"enumeration over {m.ground_size} elements exceeds the limit of {MAX_ENUM_N}")
    level = [()]
    for size in range(max_card + 1):
        if not level:
            return
        yield from level
        if size == max_card:
            return
        nxt = []
        for S in level:
            start = S[-1] + 1 if S else 0
            for x in range(start, m.ground_size):
                if m._indep(set(S) | {x}):
                    nxt.append(S + (x,))
        level = nxt


def from_json(obj: dict, ground_size: Optional[int] = None):
    """Build a matroid from its JSON description.

    ``ground_size`` may be omitted for partition (blocks define it) and
    explicit (largest index + 1) families.
    """
    if not isinstance(obj, dict) or "type" not in obj:
        raise ValueError("matroid: expected an object with a 'type' field")
    kind = obj["type"]
    if kind == "uniform":
        if "k" not in obj:
            raise ValueError("matroid.k: missing")
        if ground_size is None:
            ground_size = int(obj.get("n", obj["k"]))
        return Uniform(int(obj["k"]), ground_size)
    if kind == "partition":
        for key in ("blocks", "caps"):
            if key not in obj:
                raise ValueError(f"matroid.{key}: missing")
        blocks = obj["blocks"]
        n = sum(len(b) for b in blocks) if ground_size is None else ground_size
        return Partition(tuple(tuple(b) for b in blocks), tuple(obj["caps"]), n)
    if kind == "explicit":
        if "sets" not in obj:
            raise ValueError("matroid.sets: missing")
        sets = [frozenset(s) for s in obj["sets"]]
        if ground_size is None:
            ground_size = int(obj.get("n", 1 + max((max(s) for s in sets if s), default=-1)))
        return Explicit(frozenset(sets), ground_size)
    raise ValueError(f"matroid.type: unknown matroid type {kind!r}")
