"""Naturals as bit patterns, including sparse sums of powers of two.

Vertices of the BIT-predicate graph that arise from iterated adjacency
constraints grow like towers: a triangle {a < b < c} forces b >= 2**a and
c >= 2**b, so disjoint triangle families quickly leave the range of plain
machine: even plain big: integers.  A `BigPow` value stands for a sum of
distinct powers of two whose exponents are themselves naturals (ints or
again BigPow).  Everything the rest of the package needs is positional:
single-bit reads, the list of set bits, and the total (value) order.

Plain ints are used whenever the top exponent is at most EXPONENT_LIMIT;
`BigPow` instances are canonical above that, so equality is structural.
"""

from __future__ import annotations

import functools
from typing import Iterable, Union

from .errors import InvalidInput

Nat = Union[int, "BigPow"]

# largest exponent still materialized as a plain int (2**8192 is a 1 KiB int)
EXPONENT_LIMIT = 8192


class BigPow:
    """Sum of 2**e over a canonical (ascending, distinct) tuple of exponents."""

    __slots__ = ("exps",)

    def __init__(self, exps):
        self.exps = tuple(exps)

    def __eq__(self, other):
        return isinstance(other, BigPow) and self.exps == other.exps

    def __hash__(self):
        return hash(("BigPow", self.exps))

    def __repr__(self):
        inner = ",".join(nat_repr(e) for e in self.exps)
        return f"BigPow[{inner}]"


def nat_repr(v: Nat) -> str:
    if isinstance(v, int):
        return str(v)
    return repr(v)


def nat_is_valid(v) -> bool:
    if isinstance(v, int):
        return v >= 0
    return isinstance(v, BigPow)


def nat_from_exps(exps: Iterable[Nat]) -> Nat:
    """Canonical natural with the given set bits (exponents may repeat: error)."""
    es = sorted(exps, key=nat_sort_key)
    for a, b in zip(es, es[1:]):
        if a == b:
            raise InvalidInput("duplicate exponent in bit pattern")
    if not es:
        return 0
    if all(isinstance(e, int) for e in es) and es[-1] <= EXPONENT_LIMIT:
        value = 0
        for e in es:
            value |= 1 << e
        return value
    return BigPow(es)


def nat_setbits(v: Nat) -> tuple:
    """Ascending tuple of set-bit positions (positions are Nats)."""
    if isinstance(v, BigPow):
        return v.exps
    out = []
    while v:
        low = v & -v
        out.append(low.bit_length() - 1)
        v ^= low
    return tuple(out)


def nat_bit(v: Nat, pos: Nat) -> int:
    """Bit of v at position pos."""
    if isinstance(v, int):
        if isinstance(pos, BigPow) or pos >= v.bit_length():
            return 0
        return (v >> pos) & 1
    return int(any(nat_eq(pos, e) for e in v.exps))


def nat_eq(a: Nat, b: Nat) -> bool:
    if isinstance(a, int) and isinstance(b, int):
        return a == b
    if isinstance(a, BigPow) and isinstance(b, BigPow):
        return a.exps == b.exps
    return False


def nat_cmp(a: Nat, b: Nat) -> int:
    """Total order by value: -1, 0, or 1."""
    ai, bi = isinstance(a, int), isinstance(b, int)
    if ai and bi:
        return (a > b) - (a < b)
    if ai:
        return -1  # BigPow values always exceed EXPONENT_LIMIT-sized ints
    if bi:
        return 1
    # compare set-bit sequences from the top
    for ea, eb in zip(reversed(a.exps), reversed(b.exps)):
        c = nat_cmp(ea, eb)
        if c:
            return c
    return (len(a.exps) > len(b.exps)) - (len(a.exps) < len(b.exps))


def nat_lt(a: Nat, b: Nat) -> bool:
    return nat_cmp(a, b) < 0


def nat_le(a: Nat, b: Nat) -> bool:
    return nat_cmp(a, b) <= 0


nat_sort_key = functools.cmp_to_key(nat_cmp)


def sort_nats(items) -> tuple:
    return tuple(sorted(items, key=nat_sort_key))


def nat_to_json(v: Nat):
    if isinstance(v, int):
        return v
    return {"exp2": [nat_to_json(e) for e in v.exps]}


def nat_from_json(obj) -> Nat:
    if isinstance(obj, bool):
        raise InvalidInput("booleans are not vertices")
    if isinstance(obj, int):
        if obj < 0:
            raise InvalidInput("vertices are non-negative")
        return obj
    if isinstance(obj, dict) and set(obj) == {"exp2"}:
        return nat_from_exps(nat_from_json(e) for e in obj["exp2"])
    raise InvalidInput(f"not a vertex encoding: {obj!r}")


def nat_label(v: Nat, limit: int = 12) -> str:
    """Short human-readable form for DOT/figure labels."""
    if isinstance(v, int):
        s = str(v)
        if len(s) <= limit:
            return s
        return f"2^{v.bit_length() - 1}ish"
    return "+".join(f"2^{nat_label(e, limit)}" for e in reversed(v.exps))


# ---------------------------------------------------------------------------
# exact-or-residue accumulation of colex ranks


RESIDUE_BITS = 70
_RESIDUE_MASK = (1 << RESIDUE_BITS) - 1


class HugeIndex:
    """Copy index too large to materialize: exact low 70 bits + marker."""

    __slots__ = ("low",)

    def __init__(self, low: int):
        self.low = low & _RESIDUE_MASK

    def __eq__(self, other):
        return isinstance(other, HugeIndex) and self.low == other.low

    def __hash__(self):
        return hash(("HugeIndex", self.low))

    def __repr__(self):
        return f"HugeIndex(low={self.low:#x})"


class RankAccumulator:
    """Sum of terms coeff * 2**exp, tracked exactly while exponents are small
    and as an exact residue mod 2**70 always."""

    def __init__(self):
        self.exact = 0
        self.low = 0
        self.huge = False

    def add_int(self, value: int):
        self.exact += value
        self.low = (self.low + value) & _RESIDUE_MASK

    def add_term(self, coeff, exp: Nat):
        """coeff may be a Nat; the term is coeff << exp."""
        if isinstance(exp, int) and exp <= EXPONENT_LIMIT:
            if isinstance(coeff, BigPow):
                # coeff itself astronomically large: residue contribution is
                # (coeff mod 2**(70-exp)) << exp; BigPow exponents all exceed
                # RESIDUE_BITS so the residue is zero.
                self.huge = True
                return
            self.exact += coeff << exp
            self.low = (self.low + ((coeff << exp) & _RESIDUE_MASK)) & _RESIDUE_MASK
            return
        # astronomically large power of two: residue 0
        self.huge = True

    def result(self):
        if self.huge:
            return HugeIndex(self.low)
        return self.exact
