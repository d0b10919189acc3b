"""Ranked diagrams on a fixed number of levels.

A ranked diagram has unary level predicates L_0..L_{l-1} partitioning the
domain and a succession relation S that only holds upward between adjacent
levels.  Two concrete countable diagrams are provided elsewhere: one whose
succession is driven by a table of distinct odd primes (always generic) and
one read off an oracle bit string through the pairing function `psi`.  This
module owns the prime table, the explicit extension witness built from it,
the pairing, and the bounded genericity probe.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

from .bits import BitSource
from .errors import InvalidInput, PrefixExhausted
from .structures import FinStructure, Signature


def ldiag_signature(levels: int) -> Signature:
    if levels < 2:
        raise InvalidInput("ranked diagrams need at least 2 levels")
    rels = tuple((f"L{i}", 1) for i in range(levels)) + (("S", 2),)
    return Signature(rels)


def _odd_primes(count: int, cache: List[int]) -> List[int]:
    """First `count` odd primes, extending `cache` in place."""
    candidate = cache[-1] if cache else 1
    while len(cache) < count:
        candidate += 2
        d = 3
        is_prime = candidate % 2 == 1
        while is_prime and d * d <= candidate:
            if candidate % d == 0:
                is_prime = False
            d += 2
        if is_prime:
            cache.append(candidate)
    return cache


@dataclass
class PrimeTable:
    """p(i, n) = the (i + levels*n)-th odd prime (3, 5, 7, 11, ...)."""

    levels: int
    _cache: List[int] = field(default_factory=list)
    _index_of: Dict[int, int] = field(default_factory=dict)

    def prime(self, i: int, n: int) -> int:
        if not 0 <= i < self.levels:
            raise InvalidInput(f"level {i} out of range")
        idx = i + self.levels * n
        if len(self._cache) <= idx:
            before = len(self._cache)
            _odd_primes(idx + 1, self._cache)
            for j in range(before, len(self._cache)):
                self._index_of[self._cache[j]] = j
        return self._cache[idx]

    def table_index(self, q: int) -> Optional[int]:
        """Position of the odd prime q in the table, or None if q is not
        among the primes generated so far and not prime at all."""
        if q in self._index_of:
            return self._index_of[q]
        if q < 3 or q % 2 == 0:
            return None
        # grow the cache until we pass q
        while not self._cache or self._cache[-1] < q:
            _odd_primes(len(self._cache) + 64, self._cache)
            for j, p in enumerate(self._cache):
                self._index_of.setdefault(p, j)
        return self._index_of.get(q)


def prime_adjacent(pt: PrimeTable, lower: Tuple[int, int], upper: Tuple[int, int]) -> bool:
    """Succession (i,n) -> (i+1,m): (m != 0 and p(i,n) | m) or (n != 0 and p(i+1,m) | n)."""
    i, n = lower
    j, m = upper
    if j != i + 1 or not 0 <= i < pt.levels - 1:
        raise InvalidInput(f"levels {i},{j} are not an adjacent upward pair")
    return (m != 0 and m % pt.prime(i, n) == 0) or (n != 0 and n % pt.prime(j, m) == 0)


@dataclass(frozen=True)
class ExtensionInstance:
    """A configuration over levels i-1, i, i+1 asking for a point z on level i
    with successions to all of X (above) and X' (below), to none of Y / Y',
    and with z outside Z.  X/Y/Z/X'/Y' are tuples of level indices (the n in
    (level, n)); X'/Y' must be empty at i=0 and X/Y at the top level."""

    levels: int
    i: int
    X: Tuple[int, ...] = ()
    Y: Tuple[int, ...] = ()
    Z: Tuple[int, ...] = ()
    Xp: Tuple[int, ...] = ()
    Yp: Tuple[int, ...] = ()

    def __post_init__(self):
        if not 0 <= self.i < self.levels:
            raise InvalidInput(f"level {self.i} out of range")
        if set(self.X) & set(self.Y) or set(self.Xp) & set(self.Yp):
            raise InvalidInput("X/Y and X'/Y' must be disjoint")
        if self.i == self.levels - 1 and (self.X or self.Y):
            raise InvalidInput("no level above the top level")
        if self.i == 0 and (self.Xp or self.Yp):
            raise InvalidInput("no level below level 0")


def check_rd_axioms(s: FinStructure, levels: Sequence[int]) -> bool:
    """Level partition well-formed and S only upward between adjacent levels."""
    names = [n for n, _ in s.signature.relations]
    if "S" not in names:
        return False
    width = len(names) - 1
    if list(levels) and (min(levels) < 0 or max(levels) >= width):
        return False
    if len(levels) != s.size:
        return False
    for x in range(s.size):
        holding = [i for i in range(width) if (x,) in set(s.relation(f"L{i}"))]
        if holding != [levels[x]]:
            return False
    for a, b in s.relation("S"):
        if levels[b] != levels[a] + 1:
            return False
    return True


def prime_witness(pt: PrimeTable, inst: ExtensionInstance, audit: bool = True) -> int:
    """Level index of the witness z = prod p(i+1,x) * prod p(i-1,x') * 2**w,
    with the least w >= 0 avoiding Z and keeping p(i, z) off Y and Y'."""
    i = inst.i
    base = 1
    for x in inst.X:
        base *= pt.prime(i + 1, x)
    for xp in inst.Xp:
        base *= pt.prime(i - 1, xp)
    blocked = set(inst.Z) | {0}
    w = 0
    while True:
        z = base << w
        if z not in blocked and _row_prime_avoids(pt, i, z, inst.Y, inst.Yp):
            break
        w += 1
    if audit:
        _audit_witness(pt, inst, z)
    return z


def _row_prime_avoids(pt: PrimeTable, i: int, z: int, Y, Yp) -> bool:
    q = pt.prime(i, z)
    for y in itertools.chain(Y, Yp):
        if y != 0 and y % q == 0:
            return False
    return True


def _audit_witness(pt: PrimeTable, inst: ExtensionInstance, z: int):
    i = inst.i
    for x in inst.X:
        if not prime_adjacent(pt, (i, z), (i + 1, x)):
            raise InvalidInput(f"witness audit failed: no succession to (i+1,{x})")
    for y in inst.Y:
        if prime_adjacent(pt, (i, z), (i + 1, y)):
            raise InvalidInput(f"witness audit failed: succession to forbidden (i+1,{y})")
    for xp in inst.Xp:
        if not prime_adjacent(pt, (i - 1, xp), (i, z)):
            raise InvalidInput(f"witness audit failed: no succession from (i-1,{xp})")
    for yp in inst.Yp:
        if prime_adjacent(pt, (i - 1, yp), (i, z)):
            raise InvalidInput(f"witness audit failed: succession from forbidden (i-1,{yp})")
    if z in inst.Z:
        raise InvalidInput("witness audit failed: z lands in Z")


# ---------------------------------------------------------------------------
# the pairing used by bit-driven diagrams


def _cantor(n: int, m: int) -> int:
    return (n + m) * (n + m + 1) // 2 + m


def psi(levels: int, i: int, n: int, m: int) -> int:
    """Bijection (levels-1) x omega x omega -> omega: i + (levels-1)*cantor(n,m)."""
    if not 0 <= i < levels - 1:
        raise InvalidInput(f"pair level {i} out of range for {levels} levels")
    return i + (levels - 1) * _cantor(n, m)


def psi_inv(levels: int, t: int) -> Tuple[int, int, int]:
    i = t % (levels - 1)
    c = t // (levels - 1)
    # invert the pairing: s with s(s+1)/2 <= c < (s+1)(s+2)/2
    s = (math.isqrt(8 * c + 1) - 1) // 2
    m = c - s * (s + 1) // 2
    n = s - m
    return i, n, m


def bits_adjacent(alpha: BitSource, levels: int, lower: Tuple[int, int], upper: Tuple[int, int]) -> bool:
    """Succession of the bit-driven diagram: bit psi(i,n,m) of alpha."""
    i, n = lower
    j, m = upper
    if j != i + 1 or not 0 <= i < levels - 1:
        raise InvalidInput(f"levels {i},{j} are not an adjacent upward pair")
    return alpha(psi(levels, i, n, m)) == 1


# ---------------------------------------------------------------------------
# bounded genericity probe


def _instances(levels: int, size_cap: int, index_max: int, pair_cap: Optional[int] = None):
    """All ExtensionInstances with part sizes <= size_cap over indices <= index_max.
    With pair_cap set, restrict to |X|+|Y| <= pair_cap and |X'|+|Y'| <= pair_cap."""
    idx = range(index_max + 1)

    def parts(allowed: bool):
        if not allowed:
            yield (), ()
            return
        subsets = [()] + [c for r in range(1, size_cap + 1) for c in itertools.combinations(idx, r)]
        for a in subsets:
            for b in subsets:
                if set(a) & set(b):
                    continue
                if pair_cap is not None and len(a) + len(b) > pair_cap:
                    continue
                yield a, b

    for i in range(levels):
        zs = [()] + [c for r in range(1, size_cap + 1) for c in itertools.combinations(idx, r)]
        for X, Y in parts(i < levels - 1):
            for Xp, Yp in parts(i > 0):
                for Z in zs:
                    yield ExtensionInstance(levels, i, X, Y, Z, Xp, Yp)


def genericity_probe(pres, size_cap: int, index_max: int, z_bound: int,
                     pair_cap: Optional[int] = None) -> dict:
    """Search a witness level-index for every instance within the caps.

    Returns a report dict: counts, violated instance descriptors, witness map,
    and per-instance oracle exhaustion notes.  Reports "no violation found
    within bounds"; it never claims genericity outright.
    """
    levels = pres.levels
    report = {
        "kind": pres.descriptor(),
        "caps": {"sizes": size_cap, "indices": index_max, "z_bound": z_bound},
        "instances": 0,
        "satisfied": 0,
        "violated": [],
        "exhausted": [],
        "witnesses": {},
    }

    for inst in _instances(levels, size_cap, index_max, pair_cap):
        report["instances"] += 1
        found = None
        exhausted_at = None
        for z in range(z_bound + 1):
            if z in inst.Z:
                continue
            try:
                if _instance_ok(pres, inst, z):
                    found = z
                    break
            except PrefixExhausted as exc:
                exhausted_at = exc.index
                break
        key = _instance_key(inst)
        if found is not None:
            report["satisfied"] += 1
            report["witnesses"][key] = found
        elif exhausted_at is not None:
            report["exhausted"].append({"instance": key, "index": str(exhausted_at)})
        else:
            report["violated"].append(key)
    return report


def _instance_key(inst: ExtensionInstance) -> str:
    return (f"i={inst.i};X={list(inst.X)};Y={list(inst.Y)};Z={list(inst.Z)};"
            f"X'={list(inst.Xp)};Y'={list(inst.Yp)}")


def _instance_ok(pres, inst: ExtensionInstance, z: int) -> bool:
    lv = pres.levels
    i = inst.i
    zid = i + lv * z
    for x in inst.X:
        if not pres.query("S", (zid, (i + 1) + lv * x)):
            return False
    for y in inst.Y:
        if pres.query("S", (zid, (i + 1) + lv * y)):
            return False
    for xp in inst.Xp:
        if not pres.query("S", ((i - 1) + lv * xp, zid)):
            return False
    for yp in inst.Yp:
        if pres.query("S", ((i - 1) + lv * yp, zid)):
            return False
    return True
