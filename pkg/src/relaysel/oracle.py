"""Exhaustive reference solvers and the stability checker.

These are deliberately naive (exponential) and share no code with the
solvers they check, apart from the :class:`Matching` container.
"""

from __future__ import annotations

import itertools
import math

import numpy as np

from .algorithms import DIRECT, UNMATCHED, Matching, make_matching
from .topology import CapacityTables

BS = DIRECT  # acceptor id of the base station in blocking pairs


def brute_force_kcard(weights, k: int) -> float:
    """Best total weight over all matchings with exactly ``k`` edges."""
    w = np.asarray(weights, dtype=float)
    n, m = w.shape
    if n > 6 or m > 6:
        raise ValueError("instance too large for enumeration")
    if not 0 <= k <= min(n, m):
        raise ValueError("k out of range")
    best = -math.inf
    for rows in itertools.combinations(range(n), k):
        for cols in itertools.permutations(range(m), k):
            best = max(best, math.fsum(w[r, c] for r, c in zip(rows, cols)))
    return best


def enumerate_assignments(n_sources: int, n_relays: int, q_bs: int):
    """Yield every choice vector respecting relay uniqueness and the joint BS quota."""
    options = [UNMATCHED, DIRECT, *range(n_relays)]
    for combo in itertools.product(options, repeat=n_sources):
        relays = [c for c in combo if c >= 0]
        if len(relays) != len(set(relays)):
            continue
        if sum(c != UNMATCHED for c in combo) > q_bs:
            continue
        yield combo


def _plain_objective(tables: CapacityTables, combo) -> float:
    total = []
    for i, c in enumerate(combo):
        if c == DIRECT:
            total.append(tables.source_bs[i])
        elif c >= 0:
            total.append(min(tables.source_relay[i, c], tables.relay_bs[c]))
    return math.fsum(total)


def brute_force_relay_selection(tables: CapacityTables, q_bs: int) -> Matching:
    """Exact optimum of the relay-selection problem by enumeration."""
    ns, nr = tables.n_sources, tables.n_relays
    if ns > 6 or nr > 5 or q_bs > 4:
        raise ValueError(f"instance too large for enumeration (N_s={ns}, N_r={nr}, Q_BS={q_bs})")
    best, best_combo = -1.0, (UNMATCHED,) * ns
    for combo in enumerate_assignments(ns, nr, q_bs):
        val = _plain_objective(tables, combo)
        if val > best:
            best, best_combo = val, combo
    return make_matching(tables, best_combo)


def find_blocking_pairs(
    matching: Matching,
    tables: CapacityTables,
    q_bs: int,
    *,
    relay_ranking: str = "link",
) -> list[tuple[int, int]]:
    """All (source, acceptor) pairs that would both rather be together.

    The acceptor is a relay index or :data:`BS`.  Source ``i`` blocks with
    an acceptor it strictly prefers to its current outcome when

    * BS: the BS has a free channel or holds something (a direct source
      by its direct rate, a relay by its relay -> BS rate) worth strictly
      less than ``i``'s direct rate;
    * relay ``j``: ``j`` holds a source it ranks strictly below ``i``
      (by link rate, or by two-hop rate with ``relay_ranking="path"``),
      or ``j`` is idle and would itself win a BS channel as above.

    An empty list certifies stability.
    """
    ns, nr = tables.n_sources, tables.n_relays
    choice = [int(c) for c in matching.choice]
    c_sr, c_sb, c_rb = tables.source_relay, tables.source_bs, tables.relay_bs

    def path(i, j):
        return min(c_sr[i, j], c_rb[j])

    def value(i):
        c = choice[i]
        if c == DIRECT:
            return c_sb[i]
        if c >= 0:
            return path(i, c)
        return 0.0

    def relay_score(i, j):
        return c_sr[i, j] if relay_ranking == "link" else path(i, j)

    held_by_relay = {c: i for i, c in enumerate(choice) if c >= 0}
    bs_values = [c_sb[i] for i, c in enumerate(choice) if c == DIRECT]
    bs_values += [c_rb[j] for j in held_by_relay]
    bs_free = len(bs_values) < q_bs
    bs_min = min(bs_values) if bs_values else math.inf

    def bs_takes(v):
        return v > 0 and (bs_free or bs_min < v)

    pairs = []
    for i in range(ns):
        u = value(i)
        if choice[i] != DIRECT and c_sb[i] > u and bs_takes(c_sb[i]):
            pairs.append((i, BS))
        for j in range(nr):
            if choice[i] == j or not path(i, j) > u:
                continue
            h = held_by_relay.get(j)
            if h is not None:
                if relay_score(h, j) < relay_score(i, j):
                    pairs.append((i, j))
            elif bs_takes(c_rb[j]):
                pairs.append((i, j))
    return pairs


def stable_matchings(tables: CapacityTables, q_bs: int, **kwargs) -> list[Matching]:
    """Every feasible matching without blocking pairs (small instances only)."""
    ns, nr = tables.n_sources, tables.n_relays
    if ns > 5 or nr > 5:
        raise ValueError("instance too large for enumeration")
    out = []
    for combo in enumerate_assignments(ns, nr, q_bs):
        m = make_matching(tables, combo)
        # normalisation may have changed the vector; keep only canonical ones
        if tuple(int(c) for c in m.choice) != tuple(combo):
            continue
        if not find_blocking_pairs(m, tables, q_bs, **kwargs):
            out.append(m)
    return out
