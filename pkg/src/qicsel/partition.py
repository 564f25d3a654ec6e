"""Batching layouts into union-QIC executions.

Two compatibility rules are supported:

* ``disjoint``: layouts in one batch share no physical qubit.
* ``distortion``: layouts may overlap as long as, in the merged (union) QIC,
  no member's total distortion exceeds a threshold ``T``. The union QIC puts
  ``ceil(mean)`` CNOTs on each physical pair, the mean taken over the members
  whose QIC uses that pair. A qubit's distortion is the absolute change in the
  number of CNOTs touching it between the member's own QIC and the union.

Batches are formed greedily (first fit) over random orderings of the layouts;
the best ordering wins.
"""
from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Mapping, Sequence

import numpy as np

from .errors import InputError, InstanceTooLargeError
from .layouts import Layout, is_layout_disjoint_with_set
from .qic import Pair, Qic

DEFAULT_EXACT_CAP = 12


@dataclass(frozen=True)
class DistortionReport:
    layout: Layout
    per_qubit: dict[int, int]

    @property
    def total(self) -> int:
        return sum(self.per_qubit.values())


@dataclass
class PartitionPlan:
    mode: str
    sets: list[list[Layout]]
    union_qics: list[Qic]
    per_layout_distortion: dict[Layout, int]
    threshold: int | None = None
    seed: int | None = None
    permutations_tried: int = 1
    chosen_permutation: int = 0
    set_counts: list[int] = field(default_factory=list)

    @property
    def num_sets(self) -> int:
        return len(self.sets)

    @property
    def max_distortion(self) -> int:
        return max(self.per_layout_distortion.values(), default=0)

    @property
    def total_distortion(self) -> int:
        return sum(self.per_layout_distortion.values())

    def to_dict(self) -> dict:
        return {
            "mode": self.mode,
            "num_sets": self.num_sets,
            "sets": [[list(l) for l in s] for s in self.sets],
            "union_qics": [q.to_dict() for q in self.union_qics],
            "distortion": [
                {"layout": list(l), "total": d} for l, d in sorted(self.per_layout_distortion.items())
            ],
            "metadata": {
                "threshold": self.threshold,
                "seed": self.seed,
                "permutations": self.permutations_tried,
                "chosen_permutation": self.chosen_permutation,
                "set_counts": self.set_counts,
            },
        }


def _union_pair_counts(qics: Sequence[Qic]) -> dict[Pair, int]:
    sums: dict[Pair, int] = {}
    nums: dict[Pair, int] = {}
    for q in qics:
        for pair, c in q.pair_counts.items():
            if c > 0:
                sums[pair] = sums.get(pair, 0) + c
                nums[pair] = nums.get(pair, 0) + 1
    return {pair: math.ceil(sums[pair] / nums[pair]) for pair in sums}


def union_with_distortion(layouts: Sequence[Sequence[int]], qics: Sequence[Qic]) -> Qic:
    """Merge per-layout physical QICs into one union QIC (ceil-average per pair)."""
    if not layouts:
        raise InputError("union needs at least one layout")
    if len(layouts) != len(qics):
        raise InputError("one QIC per layout is required")
    wires = sorted({p for l in layouts for p in l} | {p for q in qics for p in q.qubits})
    return Qic.from_pairs(wires, _union_pair_counts(qics))


def distortion(layout: Sequence[int], own_qic: Qic, union_qic: Qic) -> DistortionReport:
    """Per-qubit change in incident CNOT count from ``own_qic`` to ``union_qic``.

    Gates from a layout qubit to partners outside the layout count too.
    """
    own = own_qic.endpoint_counts()
    union = union_qic.endpoint_counts()
    missing = [q for q in layout if q not in union]
    if missing:
        raise InputError(f"layout qubits {missing} are not in the union QIC")
    return DistortionReport(tuple(layout), {q: abs(own.get(q, 0) - union[q]) for q in layout})


def is_distortion_disjoint(
    layouts: Sequence[Sequence[int]],
    qics: Sequence[Qic],
    candidate: Sequence[int],
    candidate_qic: Qic,
    threshold: int,
) -> bool:
    """Does adding ``candidate`` keep every member (old and new) within ``threshold``?"""
    if threshold < 0:
        raise InputError("distortion threshold must be >= 0")
    members = list(layouts) + [candidate]
    member_qics = list(qics) + [candidate_qic]
    union = union_with_distortion(members, member_qics)
    return all(distortion(l, q, union).total <= threshold for l, q in zip(members, member_qics))


class _Batch:
    """Running union state for one batch; checks a candidate without rebuilding
    the union from scratch. Same answers as :func:`is_distortion_disjoint`."""

    def __init__(self) -> None:
        self.members: list[int] = []
        self.sums: dict[Pair, int] = {}
        self.nums: dict[Pair, int] = {}
        self.endpoint: dict[int, int] = {}
        self.totals: dict[int, int] = {}

    def _value(self, pair: Pair, sums, nums) -> int:
        n = nums.get(pair, 0)
        return math.ceil(sums[pair] / n) if n else 0

    def evaluate(self, idx: int, layouts, owns, qics, threshold: int):
        """Return the member totals after adding ``idx``, or None if over threshold."""
        sums, nums = self.sums, self.nums
        delta: dict[int, int] = {}
        new_sums: dict[Pair, int] = {}
        new_nums: dict[Pair, int] = {}
        for pair, c in qics[idx].pair_counts.items():
            old = self._value(pair, sums, nums)
            s = sums.get(pair, 0) + c
            k = nums.get(pair, 0) + 1
            new_sums[pair], new_nums[pair] = s, k
            change = math.ceil(s / k) - old
            if change:
                for q in pair:
                    delta[q] = delta.get(q, 0) + change
        touched = set(delta)

        def union_at(q: int) -> int:
            return self.endpoint.get(q, 0) + delta.get(q, 0)

        totals = dict(self.totals)
        for m in self.members:
            if touched.isdisjoint(layouts[m]):
                continue
            own = owns[m]
            t = sum(abs(own[q] - union_at(q)) for q in layouts[m])
            if t > threshold:
                return None
            totals[m] = t
        own = owns[idx]
        t = sum(abs(own[q] - union_at(q)) for q in layouts[idx])
        if t > threshold:
            return None
        totals[idx] = t
        return totals, new_sums, new_nums, delta

    def add(self, idx: int, result) -> None:
        totals, new_sums, new_nums, delta = result
        self.members.append(idx)
        self.sums.update(new_sums)
        self.nums.update(new_nums)
        for q, d in delta.items():
            self.endpoint[q] = self.endpoint.get(q, 0) + d
        self.totals = totals


def _greedy_disjoint(order: Sequence[int], layouts: Sequence[Layout]) -> list[list[int]]:
    sets: list[list[int]] = []
    occupied: list[set[int]] = []
    for idx in order:
        for s, occ in zip(sets, occupied):
            if occ.isdisjoint(layouts[idx]):
                s.append(idx)
                occ.update(layouts[idx])
                break
        else:
            sets.append([idx])
            occupied.append(set(layouts[idx]))
    return sets


def _greedy_distortion(order, layouts, owns, qics, threshold) -> tuple[list[list[int]], dict[int, int]]:
    batches: list[_Batch] = []
    for idx in order:
        for b in batches:
            result = b.evaluate(idx, layouts, owns, qics, threshold)
            if result is not None:
                b.add(idx, result)
                break
        else:
            b = _Batch()
            b.add(idx, b.evaluate(idx, layouts, owns, qics, threshold))
            batches.append(b)
    totals: dict[int, int] = {}
    for b in batches:
        totals.update(b.totals)
    return [b.members for b in batches], totals


def _run_trial(args):
    mode, order, layouts, owns, qics, threshold = args
    if mode == "disjoint":
        sets = _greedy_disjoint(order, layouts)
        return sets, {i: 0 for i in order}
    return _greedy_distortion(order, layouts, owns, qics, threshold)


def _permutations(n: int, seed: int | None, count: int) -> list[list[int]]:
    if count < 1:
        raise InputError("permutations must be >= 1")
    rng = np.random.default_rng(seed)
    return [rng.permutation(n).tolist() for _ in range(count)]


def _as_list(qics, layouts) -> list[Qic]:
    if isinstance(qics, Mapping):
        return [qics[tuple(l)] for l in layouts]
    qics = list(qics)
    if len(qics) != len(layouts):
        raise InputError("one QIC per layout is required")
    return qics


def _best_plan(mode, layouts, qics, threshold, seed, permutations, workers) -> PartitionPlan:
    layouts = [tuple(l) for l in layouts]
    if not layouts:
        raise InputError("no layouts to partition")
    width = len(layouts[0])
    if any(len(l) != width for l in layouts):
        raise InputError("layouts must all have the same width")
    owns = [q.endpoint_counts() for q in qics] if qics is not None else None
    orders = _permutations(len(layouts), seed, permutations)
    jobs = [(mode, order, layouts, owns, qics, threshold) for order in orders]
    if workers and workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            trials = list(pool.map(_run_trial, jobs))
    else:
        trials = [_run_trial(job) for job in jobs]
    # Fewest sets, then lowest summed distortion, then earliest permutation.
    best = min(range(len(trials)), key=lambda i: (len(trials[i][0]), sum(trials[i][1].values()), i))
    sets, totals = trials[best]
    layout_sets = [[layouts[i] for i in s] for s in sets]
    unions = [union_with_distortion(ls, [qics[i] for i in s]) for ls, s in zip(layout_sets, sets)] if qics else []
    per_layout = {layouts[i]: t for i, t in totals.items()}
    return PartitionPlan(
        mode=mode,
        sets=layout_sets,
        union_qics=unions,
        per_layout_distortion=per_layout,
        threshold=threshold,
        seed=seed,
        permutations_tried=permutations,
        chosen_permutation=best,
        set_counts=[len(t[0]) for t in trials],
    )


def partition_disjoint(
    layouts: Sequence[Sequence[int]],
    seed: int | None = 0,
    permutations: int = 1,
    qics: Sequence[Qic] | Mapping[Layout, Qic] | None = None,
    workers: int | None = None,
) -> PartitionPlan:
    """Greedy first-fit into batches of pairwise physically disjoint layouts.

    Passing ``qics`` (physical, one per layout) also builds each batch's union QIC.
    """
    qlist = _as_list(qics, layouts) if qics is not None else None
    return _best_plan("disjoint", layouts, qlist, None, seed, permutations, workers)


def partition_with_distortion(
    layouts: Sequence[Sequence[int]],
    qics: Sequence[Qic] | Mapping[Layout, Qic],
    threshold: int,
    seed: int | None = 0,
    permutations: int = 1,
    workers: int | None = None,
) -> PartitionPlan:
    """Greedy first-fit where a batch accepts a layout if every member stays
    within ``threshold`` total distortion in the tentative union."""
    if threshold < 0:
        raise InputError("distortion threshold must be >= 0")
    qlist = _as_list(qics, layouts)
    return _best_plan("distortion", layouts, qlist, int(threshold), seed, permutations, workers)


def partition_basic(layouts: Sequence[Sequence[int]], qics: Sequence[Qic] | Mapping[Layout, Qic]) -> PartitionPlan:
    """One execution per layout."""
    qlist = _as_list(qics, layouts)
    layouts = [tuple(l) for l in layouts]
    return PartitionPlan(
        mode="basic",
        sets=[[l] for l in layouts],
        union_qics=list(qlist),
        per_layout_distortion={l: 0 for l in layouts},
        set_counts=[len(layouts)],
    )


def plan_is_feasible(plan: PartitionPlan, qics: Mapping[Layout, Qic], threshold: int | None = None) -> bool:
    """Re-check every batch of ``plan`` from scratch under disjointness or ``threshold``."""
    for s in plan.sets:
        if threshold is None:
            for i, l in enumerate(s):
                if not is_layout_disjoint_with_set(s[:i], l):
                    return False
        else:
            union = union_with_distortion(s, [qics[l] for l in s])
            if any(distortion(l, qics[l], union).total > threshold for l in s):
                return False
    return True


def exact_min_partition(
    layouts: Sequence[Sequence[int]],
    compatibility: str = "disjoint",
    threshold: int | None = None,
    qics: Sequence[Qic] | Mapping[Layout, Qic] | None = None,
    cap: int = DEFAULT_EXACT_CAP,
) -> int:
    """Minimum number of feasible batches, by exhaustive search.

    A batch is feasible if its layouts are pairwise disjoint
    (``compatibility="disjoint"``) or if every member's total distortion in the
    batch's union QIC is at most ``threshold`` (``"distortion"``). Feasibility is
    not monotone under taking subsets in the distortion case, so every subset is
    evaluated and the cover is found by dynamic programming over bitmasks.
    """
    layouts = [tuple(l) for l in layouts]
    m = len(layouts)
    if m > cap:
        raise InstanceTooLargeError(f"{m} layouts exceeds the exact-search cap of {cap}")
    if m == 0:
        return 0
    if compatibility == "disjoint":
        conflict = [0] * m
        for i in range(m):
            for j in range(m):
                if i != j and not set(layouts[i]).isdisjoint(layouts[j]):
                    conflict[i] |= 1 << j

        def feasible(mask: int) -> bool:
            rest = mask
            while rest:
                low = rest & -rest
                i = low.bit_length() - 1
                if conflict[i] & mask:
                    return False
                rest ^= low
            return True

    elif compatibility == "distortion":
        if threshold is None or threshold < 0:
            raise InputError("distortion mode needs a threshold >= 0")
        if qics is None:
            raise InputError("distortion mode needs per-layout QICs")
        qlist = _as_list(qics, layouts)

        def feasible(mask: int) -> bool:
            idx = [i for i in range(m) if mask >> i & 1]
            union = union_with_distortion([layouts[i] for i in idx], [qlist[i] for i in idx])
            return all(distortion(layouts[i], qlist[i], union).total <= threshold for i in idx)

    else:
        raise InputError(f"unknown compatibility {compatibility!r}")

    ok = [False] * (1 << m)
    for mask in range(1, 1 << m):
        ok[mask] = feasible(mask)

    @lru_cache(maxsize=None)
    def best(mask: int) -> int:
        if mask == 0:
            return 0
        low = mask & -mask
        rest = mask ^ low
        result = m + 1
        sub = rest
        while True:
            s = sub | low
            if ok[s]:
                result = min(result, 1 + best(mask ^ s))
            if sub == 0:
                break
            sub = (sub - 1) & rest
        return result

    return best((1 << m) - 1)
