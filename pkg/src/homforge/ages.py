"""Repetition-free enumeration of the copies of a finite structure, exact
colex copy indices, and pairwise-disjoint isomorphic-extension families.

The canonical enumeration lists copies by increasing set code (colex order
on vertex sets).  Scanning is fine at desk scale, but the greedy chain
machinery also needs the index of copies whose vertices are astronomically
large; for the built-in graph cases the colex rank has a closed form:

* complete graph, beta = K_s: every s-set is a copy, rank is the
  combinatorial number system.
* BIT graph, beta = K_2: edges with top b are exactly the set bits of b,
  so rank({a,b}) = sum(popcount(y) for y < b) + |setbits(b) below a|,
  and the popcount sum has a per-set-bit closed form.
* BIT graph, beta = K_3: triangles with top c are adjacent set-bit pairs
  of c; summing over c < M decomposes over M's set bits (digit DP).

Both closed forms are cross-checked against the scanning enumerator in the
test suite.
"""

from __future__ import annotations

import heapq
import itertools
from typing import Dict, Iterator, List, Optional, Sequence, Set, Tuple

from .errors import DensityBoundExhausted, InvalidInput, RankOverflow
from .limits import LimitPresentation, adjacency_stream, rado_adjacent
from .natbits import (
    EXPONENT_LIMIT,
    HugeIndex,
    Nat,
    RankAccumulator,
    nat_bit,
    nat_cmp,
    nat_eq,
    nat_from_exps,
    nat_lt,
    nat_setbits,
)
from .structures import (
    FinStructure,
    VertexSet,
    complete_graph,
    find_isomorphism,
    induced,
    vertex_set,
)


def colex_lt(a: Sequence[Nat], b: Sequence[Nat]) -> bool:
    """Set-code order on ascending vertex tuples without materializing codes."""
    for x, y in itertools.zip_longest(reversed(a), reversed(b)):
        if x is None:
            return True
        if y is None:
            return False
        c = nat_cmp(x, y)
        if c:
            return c < 0
    return False


def _colex_subsets(n: int, k: int) -> Iterator[Tuple[int, ...]]:
    """Size-k subsets of range(n) in colex order."""
    if k == 0:
        yield ()
        return
    for top in range(k - 1, n):
        for rest in _colex_subsets(top, k - 1):
            yield rest + (top,)


# ---------------------------------------------------------------------------
# scanning enumeration


def _beta_patterns(pres, beta: FinStructure):
    """For graph presentations: the set of edge patterns an ascending tuple
    may show to induce a copy of beta; None when a generic check is needed."""
    if pres.kind in ("rado", "complete") and beta.signature == pres.signature:
        pats = set()
        s = beta.size
        edges = set(beta.relation("E"))
        for perm in itertools.permutations(range(s)):
            pats.add(frozenset(
                (i, j) for i in range(s) for j in range(i + 1, s)
                if (perm[i], perm[j]) in edges))
        return pats
    return None


def is_copy(pres, beta: FinStructure, vs: Sequence[Nat], patterns=None) -> bool:
    vs = tuple(vs)
    if len(vs) != beta.size:
        return False
    if patterns is None:
        patterns = _beta_patterns(pres, beta)
    if patterns is not None:
        shown = frozenset(
            (i, j) for i in range(len(vs)) for j in range(i + 1, len(vs))
            if pres.adjacent(vs[i], vs[j]))
        return shown in patterns
    return find_isomorphism(induced(pres, vs), beta) is not None


class CopyEnumeration:
    """Stateful cursor over the canonical repetition-free copy listing."""

    def __init__(self, pres: LimitPresentation, beta: FinStructure, scan_cap: int = 10_000_000):
        if beta.size < 1:
            raise InvalidInput("beta must have at least one element")
        self.pres = pres
        self.beta = beta
        self.found: List[VertexSet] = []
        self.scan_cap = scan_cap
        self._patterns = _beta_patterns(pres, beta)
        self._gen = self._scan()

    def _scan(self) -> Iterator[VertexSet]:
        s = self.beta.size
        scanned = 0
        top = s - 1
        while True:
            for rest in _colex_subsets(top, s - 1):
                scanned += 1
                if scanned > self.scan_cap:
                    raise DensityBoundExhausted(
                        f"copy enumeration scanned {self.scan_cap} candidate sets")
                cand = rest + (top,)
                if is_copy(self.pres, self.beta, cand, self._patterns):
                    yield cand
            top += 1

    def advance(self, count: int) -> List[Tuple[int, VertexSet]]:
        """Extend the listing to at least `count` copies; return the prefix."""
        while len(self.found) < count:
            self.found.append(next(self._gen))
        return list(enumerate(self.found[:count]))


def enumerate_copies(pres, beta, count: int, scan_cap: int = 10_000_000) -> List[Tuple[int, VertexSet]]:
    """First `count` copies of beta in canonical order."""
    if count < 0:
        raise InvalidInput("count must be >= 0")
    return CopyEnumeration(pres, beta, scan_cap).advance(count)


# ---------------------------------------------------------------------------
# closed-form colex ranks


def _popcount_below(y: Nat, p: Nat) -> int:
    """Number of set bits of y at positions strictly below p."""
    return sum(1 for e in nat_setbits(y) if nat_lt(e, p))


def _popcount_sum_into(acc: RankAccumulator, n: Nat):
    """Add sum(popcount(y) for y in range(n)) into acc."""
    desc = tuple(reversed(nat_setbits(n)))
    for i, e in enumerate(desc):
        acc.add_term(i, e)
        if isinstance(e, int):
            if e >= 1:
                acc.add_term(e, e - 1)
        else:
            acc.add_term(1, e)  # e * 2**(e-1): astronomically large, residue 0


def popcount_sum_below(n: int) -> int:
    """Exact sum(popcount(y) for y in range(n)) for plain ints."""
    acc = RankAccumulator()
    _popcount_sum_into(acc, n)
    out = acc.result()
    if isinstance(out, HugeIndex):
        raise RankOverflow("popcount sum does not fit in explicit form")
    return out


def _triangle_sum_into(acc: RankAccumulator, m: Nat):
    """Add #{triangles of the BIT graph with top < m} into acc."""
    exps = nat_setbits(m)
    if len(exps) > 512:
        raise RankOverflow("rank of a dense huge value")
    desc = tuple(reversed(exps))
    for idx, p in enumerate(desc):
        high = desc[:idx]
        # unordered adjacent pairs within the fixed high bits
        pairs = 0
        for a, b in itertools.combinations(high, 2):
            x, y = (a, b) if nat_lt(a, b) else (b, a)
            if nat_bit(y, x) == 1:
                pairs += 1
        if pairs:
            acc.add_term(pairs, p)
        if isinstance(p, int) and p <= EXPONENT_LIMIT:
            c2 = sum(_popcount_below(y, p) for y in high)
            if c2 and p >= 1:
                acc.add_term(c2, p - 1)
            if p >= 2:
                a_p = popcount_sum_below(p)
                if a_p:
                    acc.add_term(a_p, p - 2)
        else:
            if high and sum(_popcount_below(y, p) for y in high):
                acc.add_term(1, p)  # residue 0, astronomical
            acc.add_term(1, p)  # A(p)*2**(p-2) term, likewise astronomical
    return acc


def _binom(n: int, k: int) -> int:
    if n < k:
        return 0
    out = 1
    for i in range(k):
        out = out * (n - i) // (i + 1)
    return out


def beta_shape(pres, beta: FinStructure) -> Optional[int]:
    """Size s when beta is a complete graph over the graph signature."""
    if pres.kind in ("rado", "complete") and beta.signature == pres.signature:
        if find_isomorphism(beta, complete_graph(beta.size)) is not None:
            return beta.size
    return None


def copy_rank(pres, beta: FinStructure, copy: Sequence[Nat]):
    """Index of `copy` in the canonical enumeration: int, or HugeIndex when
    the exact value does not fit in explicit form."""
    vs = vertex_set(copy)
    if not is_copy(pres, beta, vs):
        raise InvalidInput("not a copy of beta")
    s = beta_shape(pres, beta)
    if pres.kind == "complete" and s is not None:
        for v in vs:
            if not isinstance(v, int):
                raise RankOverflow("complete-graph ranks need plain int vertices")
        return sum(_binom(v, t + 1) for t, v in enumerate(vs))
    if pres.kind == "rado" and s == 1:
        acc = RankAccumulator()
        for e in nat_setbits(vs[0]):
            acc.add_term(1, e)
        return acc.result()
    if pres.kind == "rado" and s == 2:
        a, b = vs
        acc = RankAccumulator()
        _popcount_sum_into(acc, b)
        acc.add_int(_popcount_below(b, a))
        return acc.result()
    if pres.kind == "rado" and s == 3:
        a, b, c = vs
        acc = RankAccumulator()
        _triangle_sum_into(acc, c)
        within = 0
        sb = nat_setbits(c)
        for x, y in itertools.combinations(sb, 2):
            if nat_lt(y, x):
                x, y = y, x
            if nat_bit(y, x) != 1:
                continue
            if nat_lt(y, b) or (nat_eq(y, b) and nat_lt(x, a)):
                within += 1
        acc.add_int(within)
        return acc.result()
    return _generic_rank(pres, beta, vs)


def _generic_rank(pres, beta, vs, scan_cap: int = 2_000_000):
    top = vs[-1]
    if not isinstance(top, int) or top > 4096:
        raise RankOverflow("generic rank needs small plain int vertices")
    enum = CopyEnumeration(pres, beta, scan_cap)
    j = 0
    while True:
        enum.advance(j + 1)
        cand = enum.found[j]
        if cand == vs:
            return j
        if colex_lt(vs, cand):
            raise InvalidInput("copy missed by enumeration (not a copy?)")
        j += 1


def max_copy_index(pres, beta: FinStructure, S: Sequence[Nat]) -> int:
    """Largest j with copy_j inside S, or -1; exact by subset enumeration."""
    vs = vertex_set(S)
    best = None
    for comb in itertools.combinations(vs, beta.size):
        if is_copy(pres, beta, comb) and (best is None or colex_lt(best, comb)):
            best = comb
    if best is None:
        return -1
    rank = copy_rank(pres, beta, best)
    if isinstance(rank, HugeIndex):
        raise RankOverflow("largest copy index does not fit in explicit form")
    return rank


def copies_in(pres, beta: FinStructure, vertices: Sequence[Nat],
              touching: Optional[Set[Nat]] = None) -> List[VertexSet]:
    """All copies of beta on subsets of `vertices` (colex order); with
    `touching`, only copies meeting that set."""
    vs = vertex_set(vertices)
    patterns = _beta_patterns(pres, beta)
    out = []
    idx_touch = None
    if touching is not None:
        idx_touch = {i for i, v in enumerate(vs) if v in touching}
    for positions in _colex_subsets(len(vs), beta.size):
        if idx_touch is not None and not (set(positions) & idx_touch):
            continue
        cand = tuple(vs[i] for i in positions)
        if is_copy(pres, beta, cand, patterns):
            out.append(cand)
    return out


# ---------------------------------------------------------------------------
# exact colex search for constrained ascending tuples


class SlotConstraints:
    __slots__ = ("pos", "neg", "level")

    def __init__(self, pos=(), neg=(), level=None):
        self.pos = list(pos)
        self.neg = list(neg)
        self.level = level


class _Guard:
    def __init__(self, limit: int):
        self.limit = limit
        self.count = 0

    def tick(self):
        self.count += 1
        if self.count > self.limit:
            raise DensityBoundExhausted("tuple search guard tripped")


class _HeapKey:
    __slots__ = ("v",)

    def __init__(self, v):
        self.v = v

    def __lt__(self, other):
        return nat_lt(self.v, other.v)


def _valid_rado(z, pos, neg, excluded) -> bool:
    if z in excluded:
        return False
    for u in pos:
        if nat_eq(z, u) or not rado_adjacent(z, u):
            return False
    for u in neg:
        if not nat_eq(z, u) and rado_adjacent(z, u):
            return False
    return True


def _pattern_superset_stream(base_values, excluded, lo, hi) -> Iterator[Nat]:
    """Ascending naturals whose set bits include all of base_values."""
    from .limits import _pattern_candidates  # shared free-bit walker
    yield from _pattern_candidates(list(base_values), set(), excluded, lo, hi)


def _rado_top_stream(pres, slot_count, externals, patt, excluded, lo, hi, required, guard) -> Iterator[Nat]:
    """Candidates for the top slot when the pattern forces `required` lower
    slots adjacent from below: every solution's top carries those slots'
    values as set bits, so tops are enumerated as base-tuple supersets."""
    pos = externals[slot_count - 1].pos
    neg = externals[slot_count - 1].neg
    sub_externals = [externals[i] for i in required]
    sub_patt = [[patt[required[i]][required[j]] for j in range(len(required))]
                for i in range(len(required))]
    bases = _solutions(pres, len(required), sub_externals, sub_patt, excluded, None, guard)

    heap: List[Tuple[_HeapKey, int, Iterator[Nat]]] = []
    serial = itertools.count()
    pending = next(bases, None)

    def admit_due():
        nonlocal pending
        while pending is not None:
            base_value = nat_from_exps(pending)
            if hi is not None and not nat_lt(base_value, hi):
                pending = None  # bases ascend: nothing further fits the window
                return
            if heap and nat_lt(heap[0][0].v, base_value):
                return
            stream = _pattern_superset_stream(pending, excluded, lo, hi)
            first = next(stream, None)
            if first is not None:
                heapq.heappush(heap, (_HeapKey(first), next(serial), stream))
            pending = next(bases, None)

    last = None
    while True:
        admit_due()
        if not heap:
            return
        key, tag, stream = heapq.heappop(heap)
        z = key.v
        nxt = next(stream, None)
        if nxt is not None:
            heapq.heappush(heap, (_HeapKey(nxt), tag, stream))
        if last is not None and not nat_lt(last, z):
            continue
        last = z
        guard.tick()
        if _valid_rado(z, pos, neg, excluded):
            yield z


def _solutions(pres, slot_count, externals, patt, excluded, hi, guard) -> Iterator[Tuple[Nat, ...]]:
    """All ascending tuples satisfying the slot constraints, in colex order."""
    if slot_count == 0:
        yield ()
        return
    top = slot_count - 1
    ext = externals[top]

    # the top value must exceed the max of some solution of the lower slots;
    # the colex-least solution of the relaxed sub-problem (ignoring the top)
    # has the minimal possible max, giving a sound lower bound
    lo = None
    if top >= 1:
        relaxed = next(_solutions(pres, top, externals, patt, excluded, None, guard), None)
        if relaxed is None:
            return  # the lower slots are jointly unsatisfiable
        lo = relaxed[-1]

    if pres.kind == "rado":
        required = [i for i in range(top) if patt[i][top]]
        if required:
            stream = _rado_top_stream(pres, slot_count, externals, patt, excluded, lo, hi, required, guard)
        else:
            stream = adjacency_stream(pres, ext.pos, ext.neg, excluded, hi=hi, lo=lo, level=ext.level)
    else:
        stream = adjacency_stream(pres, ext.pos, ext.neg, excluded, hi=hi, lo=lo, level=ext.level)
    for v_top in stream:
        guard.tick()
        subs = []
        for i in range(top):
            sc = SlotConstraints(externals[i].pos, externals[i].neg, externals[i].level)
            if patt[i][top]:
                sc.pos = sc.pos + [v_top]
            else:
                sc.neg = sc.neg + [v_top]
            subs.append(sc)
        for rest in _solutions(pres, top, subs, patt, excluded, v_top, guard):
            yield rest + (v_top,)


def least_tuple(pres, externals: List[SlotConstraints], patt: List[List[bool]],
                excluded: Set[Nat], guard_limit: int = 1_000_000) -> Optional[Tuple[Nat, ...]]:
    """Colex-least ascending tuple matching the constraints, or None."""
    guard = _Guard(guard_limit)
    for sol in _solutions(pres, len(externals), externals, patt, excluded, None, guard):
        return sol
    return None


# ---------------------------------------------------------------------------
# disjoint isomorphic-extension families


class DisjointCopies:
    """The sequence V_0 = V, V_1, V_2, ... of pairwise-disjoint sets, each
    disjoint from U, with the map fixing U and sending V ascending onto V_k
    ascending an isomorphism of induced structures."""

    def __init__(self, pres, U: Sequence[Nat], V: Sequence[Nat]):
        self.pres = pres
        self.U = vertex_set(U)
        self.V = vertex_set(V)
        if set(self.U) & set(self.V):
            raise InvalidInput("U and V must be disjoint")
        if not self.V:
            raise InvalidInput("V must be non-empty")
        s = len(self.V)
        self.patt = [[pres.adjacent(self.V[i], self.V[j]) if i < j else False
                      for j in range(s)] for i in range(s)]
        self.externals = []
        for v in self.V:
            pos = [u for u in self.U if pres.adjacent(v, u)]
            neg = [u for u in self.U if not pres.adjacent(v, u)]
            self.externals.append(SlotConstraints(pos, neg, pres.level_of(v)))
        self.family: List[Tuple[Nat, ...]] = [self.V]
        self.used: Set[Nat] = set(self.U) | set(self.V)

    def get(self, k: int) -> VertexSet:
        while len(self.family) <= k:
            nxt = least_tuple(self.pres, self.externals, self.patt, set(self.used))
            if nxt is None:
                raise DensityBoundExhausted("no further disjoint copy found")
            self.family.append(nxt)
            self.used.update(nxt)
        return self.family[k]


_FAMILIES: Dict[tuple, DisjointCopies] = {}


def _pres_key(pres) -> str:
    import json
    return json.dumps(pres.descriptor(), sort_keys=True)


def disjoint_copy_sequence(pres, U: Sequence[Nat], V: Sequence[Nat], k: int) -> VertexSet:
    """k-th member of the disjoint family (V_0 = V); memoized, deterministic."""
    key = (_pres_key(pres), vertex_set(U), vertex_set(V))
    fam = _FAMILIES.get(key)
    if fam is None:
        fam = DisjointCopies(pres, U, V)
        _FAMILIES[key] = fam
    return fam.get(k)
