"""Relay-selection algorithms: ORSA, MRSA, WRSA and RRSA.

Each takes a :class:`~relaysel.topology.CapacityTables` instance and the
base-station quota ``q_bs`` and returns a :class:`Matching`.  Every matched
source, direct or relayed, occupies one BS channel.
"""

from __future__ import annotations

import heapq
import math
from collections import deque
from dataclasses import dataclass, field

import numpy as np

from .assignment import KCardInstance, solve_kcard
from .topology import CapacityTables

DIRECT = -1
UNMATCHED = -2


@dataclass
class Matching:
    """Per-source outcome.

    ``choice[i]`` is a relay index ``j >= 0``, :data:`DIRECT` or
    :data:`UNMATCHED`; ``capacity[i]`` is the realised end-to-end rate.
    """

    choice: np.ndarray
    capacity: np.ndarray
    stats: dict = field(default_factory=dict)

    @property
    def n_sources(self) -> int:
        return len(self.choice)

    @property
    def n_unmatched(self) -> int:
        return int(np.sum(self.choice == UNMATCHED))

    @property
    def n_matched(self) -> int:
        return self.n_sources - self.n_unmatched

    @property
    def n_direct(self) -> int:
        return int(np.sum(self.choice == DIRECT))

    @property
    def n_relayed(self) -> int:
        return int(np.sum(self.choice >= 0))

    @property
    def bs_slots_used(self) -> int:
        return self.n_direct + self.n_relayed

    @property
    def objective(self) -> float:
        return objective(self)

    def outcome(self, i: int) -> str:
        c = int(self.choice[i])
        if c == DIRECT:
            return "direct"
        if c == UNMATCHED:
            return "unmatched"
        return f"relay {c}"


def make_matching(tables: CapacityTables, choice, **stats) -> Matching:
    """Attach realised capacities to ``choice``; zero-rate outcomes become unmatched."""
    choice = np.asarray(choice, dtype=np.intp).copy()
    cap = np.zeros(len(choice))
    direct = choice == DIRECT
    cap[direct] = tables.source_bs[direct]
    relayed = np.flatnonzero(choice >= 0)
    if len(relayed):
        j = choice[relayed]
        cap[relayed] = np.minimum(tables.source_relay[relayed, j], tables.relay_bs[j])
    choice[cap <= 0] = UNMATCHED
    cap[choice == UNMATCHED] = 0.0
    return Matching(choice=choice, capacity=cap, stats=dict(stats))


def objective(matching: Matching) -> float:
    """Total realised capacity; exactly rounded so it is independent of summation order."""
    return math.fsum(matching.capacity.tolist())


def validate(matching: Matching, tables: CapacityTables, q_bs: int) -> None:
    """Raise ``AssertionError`` if ``matching`` breaks relay uniqueness or the BS quota."""
    relays = matching.choice[matching.choice >= 0]
    assert len(np.unique(relays)) == len(relays), "relay used twice"
    assert np.all(relays < tables.n_relays), "relay index out of range"
    assert matching.bs_slots_used <= q_bs, f"{matching.bs_slots_used} BS slots > quota {q_bs}"
    assert np.all(matching.capacity[matching.choice != UNMATCHED] > 0)


# --------------------------------------------------------------------------- ORSA


def orsa_weights(tables: CapacityTables, q_bs: int) -> np.ndarray:
    """Source x (relays + BS channels) weight matrix.

    Relay columns carry the two-hop rate, each of the ``q_bs`` channel
    columns carries the source's direct rate.
    """
    ns, nr = tables.n_sources, tables.n_relays
    w = np.empty((ns, nr + q_bs))
    w[:, :nr] = tables.path_capacity()
    w[:, nr:] = tables.source_bs[:, None]
    return w


def orsa(tables: CapacityTables, q_bs: int, *, strict: bool = True) -> Matching:
    """Optimal relay selection through the k-cardinality reduction.

    With ``strict`` (default) the assignment is limited to
    ``k = min(N_s, q_bs)`` edges, so direct and relayed sources together
    never exceed the BS quota and the result is the exact optimum.  With
    ``strict=False`` only the channel columns are budgeted
    (``k = min(N_s, N_r + q_bs)``) and relayed sources do not count
    against the quota.
    """
    if q_bs < 0:
        raise ValueError("q_bs must be non-negative")
    ns, nr = tables.n_sources, tables.n_relays
    w = orsa_weights(tables, q_bs)
    k = min(ns, q_bs) if strict else min(ns, nr + q_bs)
    sol = solve_kcard(KCardInstance(w, k))
    choice = np.full(ns, UNMATCHED, dtype=np.intp)
    for i, j in sol.edges:
        choice[i] = j if j < nr else DIRECT
    return make_matching(tables, choice, k=k, padded_size=len(sol.perm))


# --------------------------------------------------------------------------- MRSA

_INACTIVE, _PENDING, _AT_BS, _DEAD = range(4)


def _next_hop_lists(tables: CapacityTables) -> tuple[list[list[int]], list[int]]:
    """Sorted candidate next hops per source: column ``j < N_r`` is relay j, ``N_r`` is the BS.

    Ordered by path capacity descending, ties to the lower node id (relays
    are numbered after the sources, the BS last).  Zero-capacity candidates
    are cut off.
    """
    ns, nr = tables.n_sources, tables.n_relays
    if ns == 0:
        return [], []
    values = np.empty((ns, nr + 1))
    values[:, :nr] = tables.path_capacity()
    values[:, nr] = tables.source_bs
    ids = np.broadcast_to(np.arange(nr + 1), values.shape)
    order = np.lexsort((ids, -values), axis=1)
    lengths = (values > 0).sum(axis=1)
    return order.tolist(), lengths.tolist()


def mrsa(tables: CapacityTables, q_bs: int, *, relay_ranking: str = "link") -> Matching:
    """Distributed stable relay selection by deferred acceptance.

    Sources propose down their next-hop lists.  A relay holds at most one
    source; it ranks applicants by the source -> relay link rate
    (``relay_ranking="link"``) or by the two-hop rate (``"path"``).  On its
    first applicant a relay applies to the BS, which ranks sources by their
    direct rate and relays by their relay -> BS rate and holds up to
    ``q_bs`` of them.  A full acceptor only bumps its weakest holding for a
    strictly better offer.  A relay refused by the BS drops out and
    releases its source.  ``stats["proposals"]`` counts all requests.
    """
    if relay_ranking not in ("link", "path"):
        raise ValueError(f"unknown relay_ranking {relay_ranking!r}")
    if q_bs < 0:
        raise ValueError("q_bs must be non-negative")
    ns, nr = tables.n_sources, tables.n_relays
    lists, lengths = _next_hop_lists(tables)
    rank_at_relay = tables.source_relay if relay_ranking == "link" else tables.path_capacity()
    c_sb = tables.source_bs
    c_rb = tables.relay_bs
    bs_col = nr

    ptr = [0] * ns
    holder = [-1] * nr
    state = [_INACTIVE] * nr
    # BS holdings as a min-heap of (value, -node_id); node ids: sources i, relays ns + j
    bs_heap: list[tuple[float, int]] = []
    queue = deque(range(ns))
    proposals = 0

    def requeue(src):
        ptr[src] += 1
        queue.append(src)

    def drop_relay(j):
        state[j] = _DEAD
        h = holder[j]
        holder[j] = -1
        if h >= 0:
            requeue(h)

    def offer_bs(value, node):
        """Returns True if held; handles whoever gets bumped."""
        key = (value, -node)
        if len(bs_heap) < q_bs:
            heapq.heappush(bs_heap, key)
            return True
        if bs_heap and value > bs_heap[0][0]:
            _, neg = heapq.heapreplace(bs_heap, key)
            bumped = -neg
            if bumped < ns:
                requeue(bumped)
            else:
                drop_relay(bumped - ns)
            return True
        return False

    while queue:
        m = queue.popleft()
        if m >= ns:
            j = m - ns
            proposals += 1
            if c_rb[j] > 0 and offer_bs(float(c_rb[j]), m):
                state[j] = _AT_BS
            else:
                drop_relay(j)
            continue

        i = m
        row = lists[i]
        while ptr[i] < lengths[i]:
            col = row[ptr[i]]
            proposals += 1
            if col == bs_col:
                if offer_bs(float(c_sb[i]), i):
                    break
                ptr[i] += 1
                continue
            j = col
            if state[j] == _DEAD:
                ptr[i] += 1
                continue
            h = holder[j]
            if h < 0:
                holder[j] = i
                if state[j] == _INACTIVE:
                    state[j] = _PENDING
                    queue.append(ns + j)
                break
            if rank_at_relay[i, j] > rank_at_relay[h, j]:
                holder[j] = i
                requeue(h)
                break
            ptr[i] += 1

    choice = np.full(ns, UNMATCHED, dtype=np.intp)
    for _, neg in bs_heap:
        node = -neg
        if node < ns:
            choice[node] = DIRECT
        else:
            j = node - ns
            if holder[j] >= 0:
                choice[holder[j]] = j
    return make_matching(tables, choice, proposals=proposals)


# --------------------------------------------------------------------------- baselines


def wrsa(tables: CapacityTables, q_bs: int, order=None) -> Matching:
    """Direct links only; sources in ``order`` take a BS channel while any is free."""
    ns = tables.n_sources
    order = range(ns) if order is None else order
    choice = np.full(ns, UNMATCHED, dtype=np.intp)
    used = 0
    for i in order:
        if used < q_bs and tables.source_bs[i] > 0:
            choice[i] = DIRECT
            used += 1
    return make_matching(tables, choice)


def rrsa(tables: CapacityTables, q_bs: int, rng: np.random.Generator) -> Matching:
    """One random attempt per source, never retried.

    A fair coin picks the BS or a uniformly random relay.  The attempt
    succeeds only if the link(s) have positive rate, the relay is not yet
    claimed and a BS channel is free.
    """
    ns, nr = tables.n_sources, tables.n_relays
    choice = np.full(ns, UNMATCHED, dtype=np.intp)
    claimed = np.zeros(nr, dtype=bool)
    used = 0
    for i in range(ns):
        go_direct = rng.random() < 0.5
        if go_direct:
            if used < q_bs and tables.source_bs[i] > 0:
                choice[i] = DIRECT
                used += 1
            continue
        if nr == 0:
            continue
        j = int(rng.integers(nr))
        if (
            not claimed[j]
            and used < q_bs
            and tables.source_relay[i, j] > 0
            and tables.relay_bs[j] > 0
        ):
            claimed[j] = True
            choice[i] = j
            used += 1
    return make_matching(tables, choice)
