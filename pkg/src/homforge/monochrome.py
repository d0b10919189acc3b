"""The greedy monochromatic-copy construction and its certificates.

For a presentation X, a finite structure beta, and an oracle bit string,
the construction grows two maps along a chain w_1 < w_2 < ...:

* mu(w) : a finite vertex set of X, with mu(wn) & mu(wm) = mu(w) for
  n > m > max(w);
* nu(w) : an embedding of X's first |w| vertices into mu(w), each step
  extending the last.

Every step plants one fresh copy of beta inside mu(wk) \\ mu(w), placed so
that it and the forced extension edges are the *only* new copies (the new
material carries no other relations to mu(w)); the per-step success
probability of the all-ones colour test is then 2**-(a small constant)
instead of shrinking with |mu|.  The k-indexed alternatives come from the
same disjoint-family machinery as `ages.disjoint_copy_sequence`, so the
intersection law holds by pairwise disjointness.

A run produces an EmbeddingCertificate that an independent auditor can
re-verify from scratch: re-find every copy of beta inside the embedded
image by subset enumeration and check its oracle colour.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

from .ages import (
    CopyEnumeration,
    SlotConstraints,
    colex_lt,
    copies_in,
    copy_rank,
    least_tuple,
    max_copy_index,
)
from .bits import BitSource, from_descriptor as bits_from_descriptor
from .encodings import EffectiveEncoding, build_chain
from .errors import InvalidInput
from .limits import LimitPresentation, adjacency_stream, presentation_from_descriptor
from .natbits import Nat, nat_from_json, nat_to_json, sort_nats
from .structures import (
    FinStructure,
    Mapping,
    VertexSet,
    find_isomorphism,
    induced,
    is_embedding,
    structure_from_json,
    structure_to_json,
    vertex_set,
)


class _SlotFamily:
    """Replicas of a template over U, built slot by slot in template order.

    Every replica carries the template's exact relation pattern to U and
    internally, so the slot map is a U-fixing isomorphism; replicas are
    pairwise disjoint and disjoint from U.  Unlike the ascending-map family
    of `ages.disjoint_copy_sequence`, the slot map need not preserve the
    value order: each slot takes the least witness of a consistent
    one-point task, which on the deterministic presentations always exists,
    so no backtracking is ever needed.

    On the BIT graph each replica is additionally stamped: its vertices all
    carry the replica index written in binary over a reserved alphabet of
    small bit positions that are not vertices of U or the template.  Stamp
    positions are not members, so no extra copies arise, but every new
    copy's colex rank then varies with the replica index even far beyond
    the oracle word period: without the stamp, tops of the form 2**a have
    rank = a * 2**(a-1), which collapses mod the word period once a
    exceeds it, freezing the colour test onto a single oracle bit."""

    STAMP_ALPHABET = 26

    def __init__(self, pres, U: Sequence[Nat], template: Sequence[Nat]):
        self.pres = pres
        self.U = vertex_set(U)
        self.template = tuple(template)
        s = len(template)
        self.patt = {(i, j): pres.adjacent(template[i], template[j])
                     for i in range(s) for j in range(i + 1, s)}
        self.externals = []
        for v in template:
            pos = [u for u in self.U if pres.adjacent(v, u)]
            neg = [u for u in self.U if not pres.adjacent(v, u)]
            self.externals.append((pos, neg, pres.level_of(v)))
        self.members: List[Tuple[Nat, ...]] = [self.template]
        self.used = set(self.U) | set(self.template)
        self.alphabet: List[int] = []
        if pres.kind == "rado":
            avoid = {v for v in self.used if isinstance(v, int)}
            p = 8
            while len(self.alphabet) < self.STAMP_ALPHABET:
                if p not in avoid:
                    self.alphabet.append(p)
                p += 1
            self.used.update(self.alphabet)

    def _stamp(self, k: int) -> List[int]:
        out = []
        t = 0
        while k:
            if k & 1:
                out.append(self.alphabet[t])
            k >>= 1
            t += 1
        return out

    def get(self, k: int) -> Tuple[Nat, ...]:
        """k-th replica, in template slot order (not sorted)."""
        while len(self.members) <= k:
            idx = len(self.members)
            stamp = self._stamp(idx) if self.alphabet else []
            chosen: List[Nat] = []
            for j, (pos, neg, level) in enumerate(self.externals):
                pos = list(pos) + stamp
                neg = list(neg)
                for i, v in enumerate(chosen):
                    if self.patt[(i, j)]:
                        pos.append(v)
                    else:
                        neg.append(v)
                z = next(adjacency_stream(self.pres, pos, neg,
                                          self.used | set(chosen), level=level), None)
                if z is None:
                    raise InvalidInput("slot witness missing (non-generic presentation?)")
                chosen.append(z)
            self.members.append(tuple(chosen))
            self.used.update(chosen)
        return self.members[k]


class _StepPlan:
    """Everything needed to answer probes k > max(w) above a fixed prefix."""

    def __init__(self, state: "GreedyState", w: Tuple[int, ...]):
        self.state = state
        self.w = w
        mu_w = state.mu[w]
        nu_w = state.nu[w]
        pres, beta = state.pres, state.beta
        n = len(w)

        # extension point realizing vertex n's type over [0, n) through nu;
        # where the age permits free placement, suppress every other relation
        # to mu(w) so the planted copy stays the only controlled new material
        free_age = pres.kind != "complete"
        pos = [nu_w[d] for d in range(n) if pres.adjacent(d, n)]
        forced = set(pos)
        neg = [u for u in mu_w if u not in forced] if free_age else []
        level = pres.level_of(n) if pres.levels is not None else None
        z = next(adjacency_stream(pres, pos, neg, set(mu_w), level=level), None)
        if z is None:
            raise InvalidInput("no extension point found")

        if free_age:
            # fresh copy of beta, unrelated to mu(w) and the extension point
            blocked = sort_nats(tuple(mu_w) + (z,))
            copy = _least_free_copy(pres, beta, blocked, free_age)
            template = vertex_set(copy + (z,))
        else:
            # in the complete graph every cross pair already yields copies,
            # and a disjoint planted copy would add |mu|*|V| of them; keep V
            # minimal: z alone, completed only when no new copy runs through z
            template = (z,)
            if not copies_in(pres, beta, tuple(mu_w) + (z,), touching={z}):
                extra = []
                nxt = 0
                while len(extra) < beta.size - 1:
                    if nxt not in mu_w and nxt != z:
                        extra.append(nxt)
                    nxt += 1
                template = vertex_set((z,) + tuple(extra))
        self.z_slot = template.index(z)
        self.family = _SlotFamily(pres, mu_w, template)
        self.probe_cache: Dict[int, tuple] = {}

    def index_for(self, k: int) -> int:
        """Candidates k = max(w)+1, max(w)+2, ... map to family members
        0, 1, ...: a function of (w, k) alone, so mu(wk) is well defined."""
        mx = self.w[-1] if self.w else -1
        if k <= mx:
            raise InvalidInput("k must exceed max(w)")
        return k - mx - 1

    def probe(self, k: int):
        """(new copy list, their indices, member) for candidate step k."""
        if k in self.probe_cache:
            return self.probe_cache[k]
        member = self.family.get(self.index_for(k))
        mu_w = self.state.mu[self.w]
        new_copies = copies_in(self.state.pres, self.state.beta,
                               tuple(mu_w) + member, touching=set(member))
        ranks = [copy_rank(self.state.pres, self.state.beta, c) for c in new_copies]
        out = (new_copies, ranks, member)
        self.probe_cache[k] = out
        return out


def _least_free_copy(pres, beta: FinStructure, blocked: Sequence[Nat],
                     free_age: bool = True) -> Tuple[Nat, ...]:
    """Colex-least copy of beta on fresh vertices, with no relations to
    `blocked` when the age permits free placement.  Tries every ascending
    arrangement of beta and keeps the least realization."""
    if any(arity > 2 for _, arity in beta.signature.relations):
        raise InvalidInput("the greedy construction supports arity <= 2")
    s = beta.size
    neg = list(blocked) if free_age else []
    best = None
    seen_profiles = set()
    for perm in itertools.permutations(range(s)):
        patt = tuple(tuple(_related(beta, perm[i], perm[j]) for j in range(s)) for i in range(s))
        levels = tuple(_level_of_elem(beta, perm[i]) for i in range(s))
        profile = (patt, levels)
        if profile in seen_profiles:
            continue
        seen_profiles.add(profile)
        externals = [SlotConstraints([], list(neg), levels[i]) for i in range(s)]
        sol = least_tuple(pres, externals, [list(row) for row in patt], set(blocked))
        if sol is not None and (best is None or colex_lt(sol, best)):
            best = sol
    if best is None:
        raise InvalidInput("no free copy of beta found")
    return best


def _related(beta: FinStructure, a: int, b: int) -> bool:
    for name, arity in beta.signature.relations:
        if arity == 2 and ((a, b) in set(beta.relation(name)) or (b, a) in set(beta.relation(name))):
            return True
    return False


def _level_of_elem(beta: FinStructure, a: int) -> Optional[int]:
    for name, arity in beta.signature.relations:
        if arity == 1 and name.startswith("L") and (a,) in set(beta.relation(name)):
            return int(name[1:])
    return None


class GreedyState:
    """Memo of mu / nu along chain prefixes, plus per-prefix step plans."""

    def __init__(self, pres: LimitPresentation, beta: FinStructure):
        if beta.size < 1:
            raise InvalidInput("beta must have at least one element")
        if beta.signature != pres.signature:
            raise InvalidInput("beta and the presentation must share a signature")
        if pres.kind == "complete":
            from .structures import complete_graph
            if find_isomorphism(beta, complete_graph(beta.size)) is None:
                raise InvalidInput("only complete graphs embed into the complete graph")
        self.pres = pres
        self.beta = beta
        self.mu: Dict[Tuple[int, ...], VertexSet] = {(): ()}
        self.nu: Dict[Tuple[int, ...], Mapping] = {(): {}}
        self.sizes: Dict[Tuple[int, ...], int] = {(): 0}
        self._plans: Dict[Tuple[int, ...], _StepPlan] = {}
        self._enum: Optional[CopyEnumeration] = None

    def plan(self, w: Tuple[int, ...]) -> _StepPlan:
        if w not in self._plans:
            if w not in self.mu:
                raise InvalidInput("prefix not materialized")
            self._plans[w] = _StepPlan(self, w)
        return self._plans[w]

    def step(self, w: Tuple[int, ...], k: int) -> Tuple[VertexSet, Mapping]:
        """Materialize (mu(wk), nu(wk)); memoized."""
        wk = tuple(w) + (k,)
        if wk in self.mu:
            return self.mu[wk], self.nu[wk]
        plan = self.plan(tuple(w))
        new_copies, _, member = plan.probe(k)
        mu_wk = vertex_set(tuple(self.mu[tuple(w)]) + tuple(member))
        nu_wk = dict(self.nu[tuple(w)])
        nu_wk[len(w)] = member[plan.z_slot]
        self.mu[wk] = mu_wk
        self.nu[wk] = nu_wk
        self.sizes[wk] = self.sizes[tuple(w)] + len(new_copies)
        return mu_wk, nu_wk

    # --- encoding views -------------------------------------------------

    def size(self, w: Tuple[int, ...]) -> int:
        w = tuple(w)
        if w in self.sizes:
            return self.sizes[w]
        prefix, k = w[:-1], w[-1]
        self.ensure(prefix)
        new_copies, _, _ = self.plan(prefix).probe(k)
        return self.size(prefix) + len(new_copies)

    def new_indices(self, w: Tuple[int, ...], k: int) -> list:
        return self.plan(tuple(w)).probe(k)[1]

    def ensure(self, w: Tuple[int, ...]) -> None:
        w = tuple(w)
        if w in self.mu:
            return
        self.ensure(w[:-1])
        self.step(w[:-1], w[-1])

    def contains(self, j: int, w: Tuple[int, ...]) -> bool:
        """Whether the j-th copy lies inside mu(w) (explicit j only)."""
        self.ensure(w)
        if self._enum is None:
            self._enum = CopyEnumeration(self.pres, self.beta)
        self._enum.advance(j + 1)
        return set(self._enum.found[j]) <= set(self.mu[tuple(w)])

    def index_bound(self, w: Tuple[int, ...]) -> int:
        self.ensure(w)
        return max_copy_index(self.pres, self.beta, self.mu[tuple(w)])


def mu_encoding(state: GreedyState) -> EffectiveEncoding:
    """The derived encoding pi(w) = copies of beta inside mu(w)."""
    return EffectiveEncoding(
        contains=state.contains,
        size=state.size,
        index_bound=state.index_bound,
        new_indices=state.new_indices,
    )


@dataclass
class EmbeddingCertificate:
    presentation: dict
    beta: dict
    bits: dict
    depth: int
    budget: int
    chain: List[List[int]]
    nu_table: List[Tuple[int, object]]
    audited_copy_count: int

    def to_json(self) -> dict:
        return {
            "presentation": self.presentation,
            "beta": self.beta,
            "bits": self.bits,
            "depth": self.depth,
            "budget": self.budget,
            "chain": [list(w) for w in self.chain],
            "nu": [[d, v] for d, v in self.nu_table],
            "audited_copy_count": self.audited_copy_count,
        }

    @staticmethod
    def from_json(obj: dict) -> "EmbeddingCertificate":
        try:
            return EmbeddingCertificate(
                presentation=obj["presentation"],
                beta=obj["beta"],
                bits=obj["bits"],
                depth=obj["depth"],
                budget=obj["budget"],
                chain=[list(map(int, w)) for w in obj["chain"]],
                nu_table=[(int(d), v) for d, v in obj["nu"]],
                audited_copy_count=int(obj["audited_copy_count"]),
            )
        except (KeyError, TypeError, ValueError) as exc:
            raise InvalidInput(f"bad certificate: {exc}") from None


def monochromatic_embedding(pres: LimitPresentation, beta: FinStructure,
                            eps: BitSource, depth: int, budget: int) -> EmbeddingCertificate:
    """Run the greedy construction and return a self-contained certificate.

    Guarantees on success: the returned nu embeds X's first `depth` vertices
    and every copy of beta inside the image has oracle colour 1.
    """
    if depth < 0:
        raise InvalidInput("depth must be >= 0")
    state = GreedyState(pres, beta)
    enc = mu_encoding(state)
    chain = build_chain(enc, eps, depth, budget)
    final = chain[-1] if chain else ()
    state.ensure(final)
    nu = state.nu[final]

    prefix = induced(pres, tuple(range(depth)))
    if not is_embedding(nu, prefix, pres):
        raise InvalidInput("internal audit failed: nu is not an embedding")
    image = sort_nats(nu.values())
    image_copies = copies_in(pres, beta, image)
    for c in image_copies:
        if eps(copy_rank(pres, beta, c)) != 1:
            raise InvalidInput("internal audit failed: image copy not colour 1")

    return EmbeddingCertificate(
        presentation=pres.descriptor(),
        beta=structure_to_json(beta),
        bits=eps.descriptor,
        depth=depth,
        budget=budget,
        chain=[list(w) for w in chain],
        nu_table=[(d, nat_to_json(v)) for d, v in sorted(nu.items())],
        audited_copy_count=len(image_copies),
    )


def verify_certificate(cert: EmbeddingCertificate) -> bool:
    """Independent audit: re-find every copy of beta inside the certified
    image by subset enumeration and confirm colour 1; re-check that nu is an
    embedding.  Recomputes nothing from the greedy path."""
    try:
        pres = presentation_from_descriptor(cert.presentation)
        beta = structure_from_json(cert.beta)
        eps = bits_from_descriptor(cert.bits)
    except InvalidInput:
        raise
    if len(cert.chain) != cert.depth:
        return False
    prev: Tuple[int, ...] = ()
    for w in cert.chain:
        tw = tuple(w)
        if list(tw) != sorted(set(tw)) or tw[:-1] != prev:
            return False
        prev = tw

    try:
        nu = {d: nat_from_json(v) for d, v in cert.nu_table}
    except InvalidInput:
        return False
    if sorted(nu) != list(range(cert.depth)):
        return False
    if len(set(nu.values())) != len(nu):
        return False
    prefix = induced(pres, tuple(range(cert.depth)))
    if not is_embedding(nu, prefix, pres):
        return False

    image = sort_nats(nu.values())
    found = 0
    for comb in itertools.combinations(image, beta.size):
        if find_isomorphism(induced(pres, comb), beta) is None:
            continue
        found += 1
        if eps(copy_rank(pres, beta, comb)) != 1:
            return False
    return found == cert.audited_copy_count
