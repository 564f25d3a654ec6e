import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qicsel.circuit import make_qaoa_path
from qicsel.coupling import cycle, heavy_hex_27
from qicsel.errors import InputError, InstanceTooLargeError
from qicsel.layouts import find_isomorphic_layouts, interaction_graph
from qicsel.partition import (
    distortion,
    exact_min_partition,
    is_distortion_disjoint,
    partition_basic,
    partition_disjoint,
    partition_with_distortion,
    plan_is_feasible,
    union_with_distortion,
)
from qicsel.qic import Qic, build_qic

from .instances import random_instance
from .oracles import chromatic_number

# Worked three-layout example: virtual QICs placed on [0,1,2], [3,2,1], [2,1,0].
# Physical pair (0,1) appears in members 1 and 3, (1,2) in all three, (2,3) in member 2.
EXAMPLE_LAYOUTS = [(0, 1, 2), (3, 2, 1), (2, 1, 0)]
EXAMPLE_QICS = [
    Qic.from_pairs((0, 1, 2), {(0, 1): 1, (1, 2): 3}),
    Qic.from_pairs((1, 2, 3), {(2, 3): 1, (1, 2): 3}),
    Qic.from_pairs((0, 1, 2), {(1, 2): 1, (0, 1): 3}),
]


@pytest.fixture(scope="module")
def path6():
    cmap = heavy_hex_27()
    qic = build_qic(make_qaoa_path(6, 2, [0.1, 0.2], [0.3, 0.4]))
    layouts = find_isomorphic_layouts(interaction_graph(qic), cmap)
    return layouts, {l: qic.on_layout(l) for l in layouts}


def test_union_ceil_average():
    union = union_with_distortion(EXAMPLE_LAYOUTS, EXAMPLE_QICS)
    assert union.pair_counts[(0, 1)] == 2  # ceil((1 + 3) / 2)
    assert union.pair_counts[(1, 2)] == 3  # ceil((3 + 3 + 1) / 3)
    assert union.pair_counts[(2, 3)] == 1
    assert union.qubits == (0, 1, 2, 3)


def test_example_distortions():
    union = union_with_distortion(EXAMPLE_LAYOUTS, EXAMPLE_QICS)
    first = distortion(EXAMPLE_LAYOUTS[0], EXAMPLE_QICS[0], union)
    assert first.per_qubit == {0: 1, 1: 1, 2: 1}
    assert first.total == 3
    totals = [distortion(l, q, union).total for l, q in zip(EXAMPLE_LAYOUTS, EXAMPLE_QICS)]
    assert totals == [3, 2, 5]


def test_example_compatibility_thresholds():
    head, tail = EXAMPLE_LAYOUTS[:2], EXAMPLE_LAYOUTS[2]
    qh, qt = EXAMPLE_QICS[:2], EXAMPLE_QICS[2]
    assert not is_distortion_disjoint(head, qh, tail, qt, 3)
    assert not is_distortion_disjoint(head, qh, tail, qt, 4)
    assert is_distortion_disjoint(head, qh, tail, qt, 5)


def test_compatibility_trivial_cases():
    assert is_distortion_disjoint([], [], EXAMPLE_LAYOUTS[0], EXAMPLE_QICS[0], 0)
    # identical members never distort each other
    assert is_distortion_disjoint([EXAMPLE_LAYOUTS[0]], [EXAMPLE_QICS[0]], EXAMPLE_LAYOUTS[0], EXAMPLE_QICS[0], 0)
    with pytest.raises(InputError):
        is_distortion_disjoint([], [], EXAMPLE_LAYOUTS[0], EXAMPLE_QICS[0], -1)


def test_union_single_and_disjoint():
    q = EXAMPLE_QICS[0]
    single = union_with_distortion([EXAMPLE_LAYOUTS[0]], [q])
    assert single.pair_counts == q.pair_counts
    assert distortion(EXAMPLE_LAYOUTS[0], q, single).total == 0

    other = Qic.from_pairs((5, 6, 7), {(5, 6): 2, (6, 7): 1})
    union = union_with_distortion([(0, 1, 2), (5, 6, 7)], [q, other])
    assert union.cnot_count == q.cnot_count + other.cnot_count
    assert union.pair_counts == {**q.pair_counts, **other.pair_counts}
    assert distortion((0, 1, 2), q, union).total == 0
    assert distortion((5, 6, 7), other, union).total == 0


def test_distortion_counts_outside_partners():
    own = Qic.from_pairs((0, 1), {(0, 1): 1})
    union = Qic.from_pairs((0, 1, 2), {(0, 1): 1, (1, 2): 2})
    assert distortion((0, 1), own, union).per_qubit == {0: 0, 1: 2}


def test_disjoint_partition_path6(path6):
    layouts, _ = path6
    assert len(layouts) == 104
    plan = partition_disjoint(layouts, seed=0, permutations=20)
    assert plan.num_sets <= 60
    assert plan_is_feasible(plan, {}, None)


def test_distortion_partition_path6(path6):
    layouts, qics = path6
    t1 = partition_with_distortion(layouts, qics, 1, seed=0, permutations=20)
    t0 = partition_with_distortion(layouts, qics, 0, seed=0, permutations=20)
    assert t1.num_sets <= 18
    assert 25 <= t0.num_sets <= 32
    assert plan_is_feasible(t1, qics, 1) and plan_is_feasible(t0, qics, 0)
    assert t1.max_distortion <= 1 and t0.max_distortion == 0


def test_permutation_variance_at_t2(path6):
    layouts, qics = path6
    plan = partition_with_distortion(layouts, qics, 2, seed=0, permutations=20)
    assert len(set(plan.set_counts)) > 1
    assert plan.num_sets == min(plan.set_counts)


def test_trivial_partitions():
    disjoint = [(0, 1), (2, 3), (4, 5)]
    assert partition_disjoint(disjoint).num_sets == 1
    overlapping = [(0, 1), (1, 2), (2, 1), (1, 0)]
    assert partition_disjoint(overlapping, permutations=5).num_sets == 4
    q = Qic.from_pairs((0, 1, 2), {(0, 1): 2, (1, 2): 1})
    same = [(0, 1, 2)] * 4
    assert partition_with_distortion(same, [q] * 4, 0).num_sets == 1


def test_large_threshold_merges_more(path6):
    layouts, qics = path6
    wide = partition_with_distortion(layouts, qics, 100, seed=0, permutations=5)
    tight = partition_with_distortion(layouts, qics, 0, seed=0, permutations=5)
    assert wide.num_sets < tight.num_sets // 2


def test_basic_partition(path6):
    layouts, qics = path6
    plan = partition_basic(layouts, qics)
    assert plan.num_sets == len(layouts)
    assert all(plan.union_qics[i] == qics[l] for i, l in enumerate(layouts))


def test_exact_examples():
    assert exact_min_partition([(0, 1), (2, 3), (4, 5)]) == 1
    c5 = [(0, 1, 2), (2, 3, 4), (4, 5, 6), (6, 7, 8), (8, 9, 0)]
    conflicts = [(i, j) for i in range(5) for j in range(i + 1, 5) if set(c5[i]) & set(c5[j])]
    assert chromatic_number(5, conflicts) == 3
    assert exact_min_partition(c5) == 3
    assert exact_min_partition([(18, 21, 23, 24, 25, 26), (3, 2, 1, 4, 7, 6)]) == 1


def test_exact_distortion_example():
    qics = dict(zip(EXAMPLE_LAYOUTS, EXAMPLE_QICS))
    assert exact_min_partition(EXAMPLE_LAYOUTS, "distortion", 5, qics) == 1
    assert exact_min_partition(EXAMPLE_LAYOUTS, "distortion", 0, qics) == 3


def test_exact_cap():
    layouts = find_isomorphic_layouts(interaction_graph(Qic.from_pairs((0, 1), {(0, 1): 1})), cycle(8))
    with pytest.raises(InstanceTooLargeError):
        exact_min_partition(layouts)


def test_input_validation():
    with pytest.raises(InputError):
        partition_disjoint([])
    with pytest.raises(InputError):
        partition_disjoint([(0, 1), (2, 3, 4)])
    with pytest.raises(InputError):
        partition_disjoint([(0, 1)], permutations=0)


seeds = st.integers(0, 2**32 - 1)


def _check_partition_of(plan, layouts):
    flat = [l for s in plan.sets for l in s]
    assert sorted(flat) == sorted(layouts)


@settings(max_examples=60, deadline=None)
@given(seeds, st.integers(0, 3))
def test_threshold_soundness(seed, threshold):
    inst = random_instance(np.random.default_rng(seed), max_layouts=30)
    plan = partition_with_distortion(inst.layouts, inst.qics, threshold, seed=seed, permutations=3)
    _check_partition_of(plan, inst.layouts)
    assert plan_is_feasible(plan, inst.qics, threshold)
    for s, union in zip(plan.sets, plan.union_qics):
        for l in s:
            assert distortion(l, inst.qics[l], union).total == plan.per_layout_distortion[l] <= threshold


@settings(max_examples=60, deadline=None)
@given(seeds)
def test_disjoint_soundness(seed):
    inst = random_instance(np.random.default_rng(seed), max_layouts=30)
    plan = partition_disjoint(inst.layouts, seed=seed, permutations=3)
    _check_partition_of(plan, inst.layouts)
    for s in plan.sets:
        qubits = [q for l in s for q in l]
        assert len(qubits) == len(set(qubits))


@settings(max_examples=40, deadline=None)
@given(seeds, st.integers(0, 2))
def test_incremental_greedy_matches_rebuild(seed, threshold):
    """First fit with the incremental union agrees with a from-scratch rebuild."""
    inst = random_instance(np.random.default_rng(seed), max_layouts=20)
    plan = partition_with_distortion(inst.layouts, inst.qics, threshold, seed=seed, permutations=1)
    order = np.random.default_rng(seed).permutation(len(inst.layouts))
    sets = []
    for i in order:
        l = inst.layouts[i]
        for s in sets:
            if is_distortion_disjoint(s, [inst.qics[m] for m in s], l, inst.qics[l], threshold):
                s.append(l)
                break
        else:
            sets.append([l])
    assert plan.sets == sets


@settings(max_examples=40, deadline=None)
@given(seeds, st.integers(0, 2), st.integers(1, 3))
def test_threshold_monotone_by_replay(seed, t, extra):
    inst = random_instance(np.random.default_rng(seed), max_layouts=20)
    plan = partition_with_distortion(inst.layouts, inst.qics, t, seed=seed, permutations=2)
    assert plan_is_feasible(plan, inst.qics, t + extra)
    looser = partition_with_distortion(inst.layouts, inst.qics, t + extra, seed=seed, permutations=2)
    assert plan_is_feasible(looser, inst.qics, t + extra)


@settings(max_examples=25, deadline=None)
@given(seeds)
def test_determinism(seed):
    inst = random_instance(np.random.default_rng(seed), max_layouts=25)
    a = partition_with_distortion(inst.layouts, inst.qics, 1, seed=seed, permutations=4)
    b = partition_with_distortion(inst.layouts, inst.qics, 1, seed=seed, permutations=4)
    assert a.to_dict() == b.to_dict()


def test_parallel_matches_serial(path6):
    layouts, qics = path6
    serial = partition_with_distortion(layouts, qics, 1, seed=3, permutations=6)
    parallel = partition_with_distortion(layouts, qics, 1, seed=3, permutations=6, workers=2)
    assert serial.to_dict() == parallel.to_dict()


@settings(max_examples=40, deadline=None)
@given(seeds, st.sampled_from(["disjoint", 0, 1, 2]))
def test_greedy_never_beats_exact(seed, mode):
    inst = random_instance(np.random.default_rng(seed), max_layouts=9)
    if mode == "disjoint":
        greedy = partition_disjoint(inst.layouts, seed=seed, permutations=10).num_sets
        exact = exact_min_partition(inst.layouts)
    else:
        greedy = partition_with_distortion(inst.layouts, inst.qics, mode, seed=seed, permutations=10).num_sets
        exact = exact_min_partition(inst.layouts, "distortion", mode, inst.qics)
    assert greedy >= exact >= 1
