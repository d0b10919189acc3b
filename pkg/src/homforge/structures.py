"""Finite relational structures, embeddings, and the finite-set codec.

Structures live on finite ordinals {0..n-1}.  Tuples are stored fully
expanded (both orientations of a symmetric edge are present) so relations
of any arity are treated uniformly.  Vertex sets of the ambient countable
structures are ascending tuples of naturals; the canonical code of a set w
is sum(2**i for i in w), which orders Fin(omega) by colex and drives every
enumeration in the package.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from typing import Dict, Optional, Sequence, Tuple

from .errors import InvalidInput, RankOverflow, SizeCapExceeded
from .natbits import Nat, nat_is_valid, sort_nats

ISO_SIZE_CAP = 10

VertexSet = Tuple[Nat, ...]  # strictly ascending
Mapping = Dict[int, Nat]


@dataclass(frozen=True)
class Signature:
    relations: Tuple[Tuple[str, int], ...]

    def __post_init__(self):
        names = [n for n, _ in self.relations]
        if len(set(names)) != len(names):
            raise InvalidInput("relation names must be distinct")
        for name, arity in self.relations:
            if not isinstance(arity, int) or arity < 1:
                raise InvalidInput(f"arity of {name!r} must be >= 1")

    def arity(self, name: str) -> int:
        for n, a in self.relations:
            if n == name:
                return a
        raise InvalidInput(f"no relation named {name!r}")


GRAPH_SIGNATURE = Signature((("E", 2),))


@dataclass(frozen=True)
class FinStructure:
    signature: Signature
    size: int
    tuples: Tuple[Tuple[str, Tuple[Tuple[int, ...], ...]], ...]

    @staticmethod
    def make(signature: Signature, size: int, relations: Dict[str, Sequence[Sequence[int]]]) -> "FinStructure":
        if size < 0:
            raise InvalidInput("size must be >= 0")
        named = dict(relations)
        rows = []
        for name, arity in signature.relations:
            tups = set()
            for t in named.pop(name, ()):
                t = tuple(t)
                if len(t) != arity:
                    raise InvalidInput(f"tuple {t} has wrong arity for {name!r}")
                if any(not isinstance(x, int) or x < 0 or x >= size for x in t):
                    raise InvalidInput(f"tuple {t} out of range for size {size}")
                tups.add(t)
            rows.append((name, tuple(sorted(tups))))
        if named:
            raise InvalidInput(f"unknown relations: {sorted(named)}")
        return FinStructure(signature, size, tuple(rows))

    def relation(self, name: str) -> Tuple[Tuple[int, ...], ...]:
        for n, tups in self.tuples:
            if n == name:
                return tups
        raise InvalidInput(f"no relation named {name!r}")

    def has(self, name: str, t: Tuple[int, ...]) -> bool:
        return t in set(self.relation(name))

    def is_graph(self) -> bool:
        if self.signature != GRAPH_SIGNATURE:
            return False
        edges = set(self.relation("E"))
        return all(a != b and (b, a) in edges for a, b in edges)


def graph(n: int, edges: Sequence[Tuple[int, int]]) -> FinStructure:
    """Simple graph on {0..n-1}; edges are symmetrized and must be irreflexive."""
    full = set()
    for a, b in edges:
        if a == b:
            raise InvalidInput("graphs are irreflexive")
        full.add((a, b))
        full.add((b, a))
    return FinStructure.make(GRAPH_SIGNATURE, n, {"E": sorted(full)})


def complete_graph(n: int) -> FinStructure:
    return graph(n, [(a, b) for a in range(n) for b in range(a + 1, n)])


def structure_to_json(s: FinStructure) -> dict:
    return {
        "signature": [{"name": n, "arity": a} for n, a in s.signature.relations],
        "size": s.size,
        "relations": {name: [list(t) for t in tups] for name, tups in s.tuples},
    }


def structure_from_json(obj) -> FinStructure:
    if not isinstance(obj, dict):
        raise InvalidInput("structure JSON must be an object")
    try:
        sig = Signature(tuple((r["name"], r["arity"]) for r in obj["signature"]))
        size = obj["size"]
        rels = obj.get("relations", {})
    except (KeyError, TypeError) as exc:
        raise InvalidInput(f"bad structure JSON: {exc}") from None
    if not isinstance(size, int):
        raise InvalidInput("size must be an integer")
    return FinStructure.make(sig, size, {k: [tuple(t) for t in v] for k, v in rels.items()})


def load_structure(path: str) -> FinStructure:
    with open(path, "r", encoding="utf-8") as fh:
        try:
            obj = json.load(fh)
        except json.JSONDecodeError as exc:
            raise InvalidInput(f"{path}: {exc}") from None
    return structure_from_json(obj)


# ---------------------------------------------------------------------------
# the finite-set codec


def encode_set(w: Sequence[Nat]) -> int:
    """sum(2**i for i in w).  Exact inverse of decode_set."""
    code = 0
    for v in w:
        if not isinstance(v, int):
            raise RankOverflow("set code does not fit in explicit form")
        if v > 4096:
            raise RankOverflow("set code does not fit in explicit form")
        code |= 1 << v
    return code


def decode_set(code: int) -> VertexSet:
    if code < 0:
        raise InvalidInput("set codes are non-negative")
    out = []
    pos = 0
    while code:
        if code & 1:
            out.append(pos)
        code >>= 1
        pos += 1
    return tuple(out)


def vertex_set(items) -> VertexSet:
    """Validate and sort into a strictly ascending vertex tuple."""
    vs = sort_nats(items)
    for v in vs:
        if not nat_is_valid(v):
            raise InvalidInput(f"not a vertex: {v!r}")
    for a, b in zip(vs, vs[1:]):
        if a == b:
            raise InvalidInput("vertex sets have no repeats")
    return vs


# ---------------------------------------------------------------------------
# induced structures, isomorphism, embeddings


def induced(pres, A: Sequence[Nat]) -> FinStructure:
    """Structure on {0..|A|-1} from relabeling A ascending and querying pres."""
    vs = vertex_set(A)
    n = len(vs)
    rels = {}
    for name, arity in pres.signature.relations:
        tups = []
        for idx in itertools.product(range(n), repeat=arity):
            if pres.query(name, tuple(vs[i] for i in idx)):
                tups.append(idx)
        rels[name] = tups
    return FinStructure.make(pres.signature, n, rels)


def _tuples_ok(A: FinStructure, B: FinStructure, assigned: Dict[int, int]) -> bool:
    """Check relations both ways on fully-assigned tuples."""
    dom = set(assigned)
    for name, _ in A.signature.relations:
        b_rel = set(B.relation(name))
        for t in A.relation(name):
            if set(t) <= dom and tuple(assigned[x] for x in t) not in b_rel:
                return False
        a_rel = set(A.relation(name))
        inv = {v: k for k, v in assigned.items()}
        rng = set(inv)
        for t in b_rel:
            if set(t) <= rng and tuple(inv[x] for x in t) not in a_rel:
                return False
    return True


def find_isomorphism(A: FinStructure, B: FinStructure, size_cap: int = ISO_SIZE_CAP) -> Optional[Mapping]:
    """Lexicographically least isomorphism A -> B, or None.

    Exhaustive over bijections with partial-assignment pruning; sizes above
    size_cap are refused.
    """
    if A.signature != B.signature:
        raise InvalidInput("isomorphism needs a common signature")
    if A.size != B.size:
        return None
    if A.size > size_cap:
        raise SizeCapExceeded(f"size {A.size} too large for brute force (cap {size_cap})")
    for name, _ in A.signature.relations:
        if len(A.relation(name)) != len(B.relation(name)):
            return None

    n = A.size
    assigned: Dict[int, int] = {}
    used = [False] * n

    def extend(k: int) -> bool:
        if k == n:
            return True
        for img in range(n):
            if used[img]:
                continue
            assigned[k] = img
            used[img] = True
            if _tuples_ok(A, B, assigned) and extend(k + 1):
                return True
            del assigned[k]
            used[img] = False
        return False

    if extend(0):
        return dict(assigned)
    return None


def is_embedding(f: Mapping, A: FinStructure, pres) -> bool:
    """True iff f embeds A into pres as an induced substructure."""
    if set(f) != set(range(A.size)):
        return False
    images = list(f.values())
    if len(set(images)) != len(images):
        return False
    if A.signature != pres.signature:
        return False
    for name, arity in A.signature.relations:
        rel = set(A.relation(name))
        for t in itertools.product(range(A.size), repeat=arity):
            if pres.query(name, tuple(f[x] for x in t)) != (t in rel):
                return False
    return True
