"""Effective encodings and the oracle-driven chain builder.

An encoding maps finite chains w to finite sets of copy indices pi(w) with
pi(empty) = empty, the intersection law pi(wn) & pi(wm) = pi(w) for
n > m > max(w), and enough new indices at every step for the second
Borel-Cantelli argument to apply.  The chain builder extends w one element
at a time, always choosing the least k whose newly encoded indices all
carry bit 1 in the oracle string; with a fair oracle each step succeeds with
probability 2**-(new index count), so the budget is a runtime guard, not a
correctness device: all-zeros oracles are *expected* to exhaust it.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, List, Optional, Sequence, Tuple

from .bits import BitSource
from .errors import BudgetExhausted, InvalidInput

Chain = List[Tuple[int, ...]]


@dataclass
class EffectiveEncoding:
    """Decidable membership relation of an encoding.

    contains(j, w) : whether the j-th copy lies in pi(w)
    size(w)        : |pi(w)|
    index_bound(w) : largest j with the j-th copy in pi(w), -1 when empty
    new_indices(w, k): optional fast path: the indices of pi(wk) \\ pi(w)
                        (may contain HugeIndex values; the generic j-loop
                        cannot, so encodings over astronomically large
                        vertex sets must provide it)
    """

    contains: Callable[[int, Tuple[int, ...]], bool]
    size: Callable[[Tuple[int, ...]], int]
    index_bound: Callable[[Tuple[int, ...]], int]
    new_indices: Optional[Callable[[Tuple[int, ...], int], list]] = None


def identity_encoding() -> EffectiveEncoding:
    """pi(w) = w itself under the identity copy listing."""
    return EffectiveEncoding(
        contains=lambda j, w: j in w,
        size=len,
        index_bound=lambda w: max(w) if w else -1,
    )


def _chain_max(w: Sequence[int]) -> int:
    return max(w) if w else -1


def b_event(enc: EffectiveEncoding, eps: BitSource, w: Tuple[int, ...], k: int) -> bool:
    """All indices newly encoded at step wk carry oracle bit 1."""
    if k <= _chain_max(w):
        raise InvalidInput("k must exceed max(w)")
    wk = tuple(w) + (k,)
    if enc.new_indices is not None:
        return all(eps(j) == 1 for j in enc.new_indices(tuple(w), k))
    bound = enc.index_bound(wk)
    for j in range(bound + 1):
        if enc.contains(j, wk) and not enc.contains(j, tuple(w)):
            if eps(j) != 1:
                return False
    return True


def extend_chain(enc: EffectiveEncoding, eps: BitSource, w: Tuple[int, ...], budget: int) -> int:
    """Least k in (max w, max w + budget] with pi(wk) != pi(w) and the new
    indices all coloured 1."""
    if budget < 1:
        raise InvalidInput("budget must be >= 1")
    w = tuple(w)
    mx = _chain_max(w)
    size_w = enc.size(w)
    for k in range(mx + 1, mx + 1 + budget):
        if enc.size(w + (k,)) != size_w and b_event(enc, eps, w, k):
            return k
    raise BudgetExhausted(f"no qualifying k within budget {budget}")


def build_chain(enc: EffectiveEncoding, eps: BitSource, steps: int, budget: int) -> Chain:
    """Iterate extend_chain from the empty chain; returns [w_1 .. w_steps]."""
    if steps < 0:
        raise InvalidInput("steps must be >= 0")
    w: Tuple[int, ...] = ()
    chain: Chain = []
    for step in range(1, steps + 1):
        try:
            k = extend_chain(enc, eps, w, budget)
        except BudgetExhausted as exc:
            raise BudgetExhausted(f"step {step}: {exc}", step=step) from None
        w = w + (k,)
        chain.append(w)
    return chain


def chain_to_json(chain: Chain, budget: int, bits_descriptor: dict) -> dict:
    return {
        "chain": [list(w) for w in chain],
        "budget": budget,
        "bits": bits_descriptor,
    }
