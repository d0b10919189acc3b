"""Decidable presentations of the target countable structures, and the
one-point-extension search that powers every construction.

Presentations answer relation queries on vertex set omega.  Four kinds are
built in:

* ``rado``    : the BIT graph: m ~ n iff bit min(m,n) of max(m,n) is 1.
* ``complete``: the countable complete graph.
* ``ldiag_primes(l)``: the prime-table ranked diagram (vertex id i + l*n
  sits on level i); always generic.
* ``ldiag_bits(l, alpha)``: succession read off an oracle bit string.

The witness search is exact: ``extension_witness`` returns the least vertex
satisfying a one-point extension task.  For the BIT graph a linear scan is
hopeless once constraint vertices grow (adjacency to v from above needs bit
v set, i.e. a value >= 2**v), so the stream decomposes the candidate space
at the constraint values: below a constraint vertex u, adjacency to u means
being one of u's set-bit positions (a short list); above u it means carrying
bit u (a pattern).  Both shapes enumerate in increasing order, so the
concatenation is the exact ascending solution stream.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterable, Iterator, List, Optional, Sequence, Set, Tuple

from .bits import BitSource, from_descriptor as bits_from_descriptor
from .errors import InconsistentTask, InvalidInput
from .natbits import (
    Nat,
    nat_bit,
    nat_eq,
    nat_from_exps,
    nat_lt,
    nat_le,
    nat_setbits,
    nat_sort_key,
    sort_nats,
)
from .ranked import PrimeTable, ldiag_signature, prime_adjacent, psi
from .structures import (
    GRAPH_SIGNATURE,
    FinStructure,
    Mapping,
    Signature,
    is_embedding,
)


def rado_adjacent(m: Nat, n: Nat) -> bool:
    """BIT predicate: with a=min, b=max, bit a of b."""
    if nat_eq(m, n):
        raise InvalidInput("graphs are irreflexive: m != n required")
    if nat_lt(m, n):
        a, b = m, n
    else:
        a, b = n, m
    return nat_bit(b, a) == 1


class LimitPresentation:
    """Base: a total decidable oracle for one signature on vertex set omega."""

    kind: str
    signature: Signature
    levels: Optional[int] = None

    def query(self, name: str, tup: Tuple[Nat, ...]) -> bool:
        raise NotImplementedError

    def adjacent(self, u: Nat, v: Nat) -> bool:
        """Binary-relation convenience (E for graphs, S for diagrams)."""
        raise NotImplementedError

    def descriptor(self) -> dict:
        raise NotImplementedError

    def level_of(self, v: Nat) -> Optional[int]:
        return None


class RadoPresentation(LimitPresentation):
    kind = "rado"
    signature = GRAPH_SIGNATURE

    def query(self, name, tup):
        if name != "E" or len(tup) != 2:
            raise InvalidInput(f"rado answers E/2 only, not {name}/{len(tup)}")
        if nat_eq(tup[0], tup[1]):
            return False
        return rado_adjacent(tup[0], tup[1])

    def adjacent(self, u, v):
        return not nat_eq(u, v) and rado_adjacent(u, v)

    def descriptor(self):
        return {"kind": "rado"}


class CompletePresentation(LimitPresentation):
    kind = "complete"
    signature = GRAPH_SIGNATURE

    def query(self, name, tup):
        if name != "E" or len(tup) != 2:
            raise InvalidInput(f"complete answers E/2 only, not {name}/{len(tup)}")
        return not nat_eq(tup[0], tup[1])

    def adjacent(self, u, v):
        return not nat_eq(u, v)

    def descriptor(self):
        return {"kind": "complete"}


class _LdiagBase(LimitPresentation):
    def __init__(self, levels: int):
        if levels < 2:
            raise InvalidInput("ranked diagrams need at least 2 levels")
        self.levels = levels
        self.signature = ldiag_signature(levels)

    def level_of(self, v: Nat) -> int:
        if not isinstance(v, int):
            raise InvalidInput("diagram vertices are plain naturals")
        return v % self.levels

    def pair_of(self, v: int) -> Tuple[int, int]:
        return v % self.levels, v // self.levels

    def query(self, name, tup):
        if name == "S":
            if len(tup) != 2:
                raise InvalidInput("S has arity 2")
            u, v = tup
            lu, lv = self.level_of(u), self.level_of(v)
            if lv != lu + 1:
                return False
            return self._succ(self.pair_of(u), self.pair_of(v))
        if name.startswith("L"):
            try:
                i = int(name[1:])
            except ValueError:
                raise InvalidInput(f"unknown relation {name!r}") from None
            if not 0 <= i < self.levels or len(tup) != 1:
                raise InvalidInput(f"unknown relation {name!r}")
            return self.level_of(tup[0]) == i
        raise InvalidInput(f"unknown relation {name!r}")

    def adjacent(self, u, v):
        lu, lv = self.level_of(u), self.level_of(v)
        if lv == lu + 1:
            return self._succ(self.pair_of(u), self.pair_of(v))
        if lu == lv + 1:
            return self._succ(self.pair_of(v), self.pair_of(u))
        return False

    def _succ(self, lower: Tuple[int, int], upper: Tuple[int, int]) -> bool:
        raise NotImplementedError


class LdiagPrimesPresentation(_LdiagBase):
    kind = "ldiag_primes"

    def __init__(self, levels: int):
        super().__init__(levels)
        self.table = PrimeTable(levels)

    def _succ(self, lower, upper):
        return prime_adjacent(self.table, lower, upper)

    def descriptor(self):
        return {"kind": "ldiag_primes", "levels": self.levels}


class LdiagBitsPresentation(_LdiagBase):
    kind = "ldiag_bits"

    def __init__(self, levels: int, alpha: BitSource):
        super().__init__(levels)
        self.alpha = alpha

    def _succ(self, lower, upper):
        i, n = lower
        _, m = upper
        return self.alpha(psi(self.levels, i, n, m)) == 1

    def descriptor(self):
        return {"kind": "ldiag_bits", "levels": self.levels, "bits": self.alpha.descriptor}


def presentation_from_descriptor(desc: dict) -> LimitPresentation:
    if not isinstance(desc, dict) or "kind" not in desc:
        raise InvalidInput(f"bad presentation descriptor: {desc!r}")
    kind = desc["kind"]
    if kind == "rado":
        return RadoPresentation()
    if kind == "complete":
        return CompletePresentation()
    if kind == "ldiag_primes":
        return LdiagPrimesPresentation(int(desc["levels"]))
    if kind == "ldiag_bits":
        return LdiagBitsPresentation(int(desc["levels"]), bits_from_descriptor(desc["bits"]))
    raise InvalidInput(f"unknown presentation kind: {kind!r}")


# ---------------------------------------------------------------------------
# ascending witness streams


def _pattern_candidates(ones: Sequence[Nat], zero_positions: Set[int],
                        forbidden: Set[Nat], lo: Optional[Nat],
                        hi: Optional[Nat]) -> Iterator[Nat]:
    """Ascending naturals carrying all of `ones` as set bits and none of the
    int positions in `zero_positions`, skipping `forbidden` values, within
    the open window (lo, hi).  Free bits walk every unconstrained position,
    so candidate(i) is strictly increasing in i."""
    ones = list(ones)
    occupied = set(zero_positions)
    for o in ones:
        if isinstance(o, int):
            occupied.add(o)
    free: List[int] = []

    def free_pos(b: int) -> int:
        nxt = free[-1] + 1 if free else 0
        while len(free) <= b:
            while nxt in occupied:
                nxt += 1
            free.append(nxt)
            nxt += 1
        return free[b]

    def candidate(i: int) -> Nat:
        exps = list(ones)
        b = 0
        while i:
            if i & 1:
                exps.append(free_pos(b))
            i >>= 1
            b += 1
        return nat_from_exps(exps)

    idx = 0
    if lo is not None and not nat_lt(lo, candidate(0)):
        step = 1
        while not nat_lt(lo, candidate(step)):
            step <<= 1
        low_i, high_i = step >> 1, step
        while low_i + 1 < high_i:
            mid = (low_i + high_i) // 2
            if nat_lt(lo, candidate(mid)):
                high_i = mid
            else:
                low_i = mid
        idx = high_i

    while True:
        z = candidate(idx)
        if hi is not None and not nat_lt(z, hi):
            return
        if z not in forbidden:
            yield z
        idx += 1


def rado_stream(positive: Sequence[Nat], negative: Sequence[Nat],
                excluded: Iterable[Nat], hi: Optional[Nat] = None,
                lo: Optional[Nat] = None) -> Iterator[Nat]:
    """Exact ascending stream of z adjacent to all of `positive`, to none of
    `negative`, with z not in `excluded`, within the open window (lo, hi)."""
    pos = sort_nats(positive)
    neg = sort_nats(negative)
    pos_set, neg_set = set(pos), set(neg)
    if pos_set & neg_set:
        raise InconsistentTask("inconsistent task: a vertex is required both adjacent and non-adjacent")
    excluded_set = set(excluded)
    boundaries = sort_nats(pos_set | neg_set)

    def valid(z) -> bool:
        if z in excluded_set:
            return False
        for u in pos:
            if nat_eq(z, u) or not rado_adjacent(z, u):
                return False
        for u in neg:
            if not nat_eq(z, u) and rado_adjacent(z, u):
                return False
        return True

    segments: List[Tuple[Optional[Nat], Optional[Nat]]] = []
    prev: Optional[Nat] = None
    for b in boundaries:
        segments.append((prev, b))
        prev = b
    segments.append((prev, None))

    for seg_lo, seg_hi in segments:
        window_lo = seg_lo
        if lo is not None and (window_lo is None or nat_lt(window_lo, lo)):
            window_lo = lo
        window_hi = seg_hi
        if hi is not None and (window_hi is None or nat_lt(hi, window_hi)):
            window_hi = hi
        below_pos = [u for u in pos if seg_lo is not None and nat_le(u, seg_lo)]
        below_neg = [u for u in neg if seg_lo is not None and nat_le(u, seg_lo)]
        above_pos = [u for u in pos if seg_lo is None or nat_lt(seg_lo, u)]
        above_neg = [u for u in neg if seg_lo is None or nat_lt(seg_lo, u)]

        def blocked_from_above(z) -> bool:
            # z < u and bit z of u set would make z adjacent to a negative
            return any(nat_bit(u, z) == 1 for u in above_neg)

        if above_pos:
            cands: Optional[Set[Nat]] = None
            for u in above_pos:
                members = set(nat_setbits(u))
                cands = members if cands is None else (cands & members)
            for z in sorted(cands, key=nat_sort_key):
                if window_lo is not None and not nat_lt(window_lo, z):
                    continue
                if window_hi is not None and not nat_lt(z, window_hi):
                    break
                if z in excluded_set or blocked_from_above(z):
                    continue
                ok = True
                for u in below_pos:
                    if nat_bit(z, u) != 1:
                        ok = False
                        break
                if ok:
                    for u in below_neg:
                        if nat_bit(z, u) != 0:
                            ok = False
                            break
                if ok:
                    yield z
        else:
            zero_pos = {u for u in below_neg if isinstance(u, int)}
            for z in _pattern_candidates(below_pos, zero_pos, excluded_set, window_lo, window_hi):
                if not blocked_from_above(z):
                    yield z

        if seg_hi is not None:
            if hi is not None and not nat_lt(seg_hi, hi):
                return
            if (lo is None or nat_lt(lo, seg_hi)) and valid(seg_hi):
                yield seg_hi


def complete_stream(positive, negative, excluded, hi=None, lo=None) -> Iterator[Nat]:
    if list(negative):
        return  # nothing is ever non-adjacent in the complete graph
    skip = set(excluded) | set(positive)
    z = 0
    if lo is not None:
        z = (lo + 1) if isinstance(lo, int) else None
        if z is None:
            return  # nothing above an astronomically large bound is reachable by counting
    while True:
        if hi is not None and not nat_lt(z, hi):
            return
        if z not in skip:
            yield z
        z += 1


def _ldiag_split(pres, level: int, vertices) -> Optional[Tuple[List[int], List[int]]]:
    """Split constraint vertices into (level+1)-indices and (level-1)-indices;
    None if some vertex sits on a non-adjacent level (unsatisfiable positive)."""
    ups, downs = [], []
    for u in vertices:
        lu = pres.level_of(u)
        if lu == level + 1:
            ups.append(u // pres.levels)
        elif lu == level - 1:
            downs.append(u // pres.levels)
        else:
            return None
    return ups, downs


def ldiag_primes_stream(pres: LdiagPrimesPresentation, level: int,
                        positive, negative, excluded, hi=None, lo=None) -> Iterator[Nat]:
    """Ascending level-`level` vertex ids satisfying succession constraints.

    A valid index m satisfies each positive constraint either through m's own
    row prime dividing the neighbour's index (finitely many such m) or
    through the neighbour's prime dividing m (so m is a multiple of the
    product of those primes); the candidate set below is therefore exact.
    """
    pt = pres.table
    lv = pres.levels
    split = _ldiag_split(pres, level, positive)
    if split is None:
        return
    ups, downs = split
    excluded_set = set(excluded)

    divisor_candidates: Set[int] = set()
    product = 1
    for m_x in ups:
        product *= pt.prime(level + 1, m_x)
        if m_x != 0:
            divisor_candidates.update(_row_divisor_indices(pt, level, lv, m_x))
    for m_y in downs:
        product *= pt.prime(level - 1, m_y)
        if m_y != 0:
            divisor_candidates.update(_row_divisor_indices(pt, level, lv, m_y))

    def all_candidates() -> Iterator[int]:
        if not ups and not downs:
            m = 0
            while True:
                yield m
                m += 1
        else:
            finite = sorted(divisor_candidates | set(range(0, 65)))
            fi = 0
            j = 1
            while True:
                nxt = j * product
                while fi < len(finite) and finite[fi] <= nxt:
                    yield finite[fi]
                    fi += 1
                yield nxt
                j += 1

    seen = -1
    for m in all_candidates():
        if m <= seen:
            continue
        seen = m
        z = level + lv * m
        if lo is not None and not nat_lt(lo, z):
            continue
        if hi is not None and not nat_lt(z, hi):
            return
        if z in excluded_set:
            continue
        if all(pres.adjacent(z, u) for u in positive) and \
                not any(pres.adjacent(z, u) for u in negative):
            yield z


def _row_divisor_indices(pt: PrimeTable, level: int, lv: int, n: int) -> List[int]:
    """Indices m with p(level, m) an odd prime divisor of n."""
    out = []
    for q in _odd_prime_divisors(n):
        idx = pt.table_index(q)
        if idx is not None and idx % lv == level:
            out.append((idx - level) // lv)
    return out


def _odd_prime_divisors(n: int) -> List[int]:
    out = []
    while n % 2 == 0:
        n //= 2
    d = 3
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 2
    if n > 1:
        out.append(n)
    return out


def ldiag_bits_stream(pres: LdiagBitsPresentation, level: int,
                      positive, negative, excluded, hi=None, lo=None) -> Iterator[Nat]:
    if _ldiag_split(pres, level, positive) is None:
        return
    lv = pres.levels
    excluded_set = set(excluded)
    m = 0
    while True:
        z = level + lv * m
        if hi is not None and not nat_lt(z, hi):
            return
        if (lo is None or nat_lt(lo, z)) and z not in excluded_set:
            if all(pres.adjacent(z, u) for u in positive) and \
                    not any(pres.adjacent(z, u) for u in negative):
                yield z
        m += 1


def adjacency_stream(pres: LimitPresentation, positive, negative, excluded,
                     hi=None, lo=None, level: Optional[int] = None) -> Iterator[Nat]:
    """Ascending vertices adjacent to all of `positive` and none of `negative`."""
    if pres.kind == "rado":
        return rado_stream(positive, negative, excluded, hi, lo)
    if pres.kind == "complete":
        return complete_stream(positive, negative, excluded, hi, lo)
    if level is None:
        raise InvalidInput("diagram witness search needs a level")
    if pres.kind == "ldiag_primes":
        return ldiag_primes_stream(pres, level, positive, negative, excluded, hi, lo)
    if pres.kind == "ldiag_bits":
        return ldiag_bits_stream(pres, level, positive, negative, excluded, hi, lo)
    raise InvalidInput(f"no witness stream for kind {pres.kind!r}")


# ---------------------------------------------------------------------------
# one-point extension tasks


@dataclass
class ExtensionTask:
    """Constraints on a single new vertex.  Each constraint tuple has exactly
    one hole (None); the remaining entries are existing vertices."""

    positive: List[Tuple[str, Tuple[Optional[Nat], ...]]] = field(default_factory=list)
    negative: List[Tuple[str, Tuple[Optional[Nat], ...]]] = field(default_factory=list)
    excluded: Tuple[Nat, ...] = ()
    level: Optional[int] = None


class _UnsatisfiableTask(Exception):
    """A positive constraint can never hold (e.g. downward succession)."""


def _task_vertex_sets(pres, task: ExtensionTask) -> Tuple[List[Nat], List[Nat]]:
    """Reduce one-hole constraints to adjacent-to / non-adjacent-to vertices."""

    def reduce_one(rel, tup, sign):
        holes = [i for i, x in enumerate(tup) if x is None]
        if len(holes) != 1:
            raise InvalidInput(f"constraint {rel}{tup} must have exactly one hole")
        arity = pres.signature.arity(rel)
        if len(tup) != arity:
            raise InvalidInput(f"constraint {rel}{tup} has wrong arity")
        if arity == 1:
            if task.level is None:
                raise InvalidInput("unary constraints need a task level")
            want = int(rel[1:])
            if sign != (want == task.level):
                raise InconsistentTask(f"unary constraint {rel} conflicts with level {task.level}")
            return None
        if arity != 2:
            raise InvalidInput("extension tasks support arity <= 2")
        u = tup[1 - holes[0]]
        if rel == "S" and task.level is not None:
            # direction check: S(z,u) needs u one level up, S(u,z) one down
            needed = task.level + 1 if holes[0] == 0 else task.level - 1
            if pres.level_of(u) != needed:
                if sign:
                    raise _UnsatisfiableTask
                return None  # vacuously non-adjacent in that direction
        return u

    pos, neg = [], []
    for rel, tup in task.positive:
        u = reduce_one(rel, tup, True)
        if u is not None:
            pos.append(u)
    for rel, tup in task.negative:
        u = reduce_one(rel, tup, False)
        if u is not None:
            neg.append(u)
    pos_set, neg_set = set(pos), set(neg)
    if pos_set & neg_set:
        raise InconsistentTask("inconsistent task: a constraint appears both positive and negative")
    return sorted(pos_set, key=nat_sort_key), sorted(neg_set, key=nat_sort_key)


def extension_witness(pres: LimitPresentation, task: ExtensionTask,
                      bound: Optional[int] = None) -> Optional[Nat]:
    """Least vertex satisfying the task, or None if there is none <= bound.

    For rado/complete/ldiag_primes a witness always exists for consistent
    tasks; `bound` only guards runtime.  Bit-driven diagrams require a bound
    (existence is merely probable there).
    """
    if pres.kind == "ldiag_bits" and bound is None:
        raise InvalidInput("bit-driven diagrams need an explicit witness bound")
    try:
        pos, neg = _task_vertex_sets(pres, task)
    except _UnsatisfiableTask:
        return None
    hi = bound + 1 if bound is not None else None
    stream = adjacency_stream(pres, pos, neg, task.excluded, hi=hi, level=task.level)
    for z in stream:
        return z
    return None


def check_homogeneity_sample(pres: LimitPresentation, A: FinStructure,
                             B: FinStructure, h: Mapping,
                             bound: Optional[int] = None) -> Optional[Mapping]:
    """Extend the embedding h of A by one point realizing B's last element.

    A must be the induced substructure of B on all but its last element and
    h must embed A into the presentation; violations raise distinct errors.
    """
    if B.size != A.size + 1:
        raise InvalidInput("B must extend A by exactly one element")
    n = A.size
    if A.signature != B.signature:
        raise InvalidInput("A and B must share a signature")
    for name, _ in B.signature.relations:
        inner = tuple(t for t in B.relation(name) if n not in t)
        if inner != A.relation(name):
            raise InvalidInput("A is not the induced substructure of B minus its last element")
    if A.signature != pres.signature:
        raise InvalidInput("signature mismatch with the presentation")
    if not is_embedding(h, A, pres):
        raise InvalidInput("h does not embed A into the presentation")

    task = extension_task_from(pres, B, h)
    z = extension_witness(pres, task, bound)
    if z is None:
        return None
    extended = dict(h)
    extended[n] = z
    if not is_embedding(extended, B, pres):
        raise InvalidInput("extension type not expressible by one-hole constraints")
    return extended


def extension_task_from(pres: LimitPresentation, B: FinStructure, h: Mapping) -> ExtensionTask:
    """One-point extension task for B's last element over the image of h."""
    n = B.size - 1
    positive, negative = [], []
    level = None
    for name, arity in B.signature.relations:
        rel = set(B.relation(name))
        if arity == 1:
            if (n,) in rel and name.startswith("L") and pres.levels is not None:
                level = int(name[1:])
            continue
        if arity != 2:
            raise InvalidInput("extension tasks support arity <= 2")
        for t in itertools.product(range(n + 1), repeat=2):
            occurrences = sum(1 for x in t if x == n)
            if occurrences == 0:
                continue
            if occurrences > 1:
                if t in rel:
                    raise InvalidInput("reflexive extension tuples are not expressible")
                continue
            mapped = tuple(None if x == n else h[x] for x in t)
            if t in rel:
                positive.append((name, mapped))
            else:
                negative.append((name, mapped))
    return ExtensionTask(positive=positive, negative=negative,
                         excluded=sort_nats(h.values()), level=level)
