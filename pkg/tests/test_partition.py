from fractions import Fraction

import numpy as np
import pytest

from solenoids.circle import (
    GAP_SEPARATED,
    GapSchedule,
    PartitionError,
    RotationNumber,
    arc_measure,
    as_fraction,
    block_arcs,
    blow_up,
    build_denjoy,
    build_partition,
    locate_block,
    locate_blocks,
    partition_from_dict,
)


def test_as_fraction_uses_shortest_repr():
    assert as_fraction(0.3) == Fraction(3, 10)
    assert as_fraction("7/10") == Fraction(7, 10)
    with pytest.raises(ValueError):
        as_fraction(float("nan"))


def test_exact_measures_are_the_weights(golden_map):
    part = build_partition(golden_map, (0.3, 0.7))
    assert part.measures == (Fraction(3, 10), Fraction(7, 10))
    assert part.max_deviation == 0.0
    assert not part.renormalized


def test_exact_blocks_have_weight_as_arc_measure(golden_map):
    part = build_partition(golden_map, (Fraction(1, 5), Fraction(3, 10), Fraction(1, 2)))
    starts, ends = block_arcs(part, golden_map)
    for a, b, w in zip(starts, ends, part.weights):
        assert arc_measure(golden_map, a, b) == pytest.approx(float(w), abs=1e-12)


def test_gap_separated_deviation_within_tol(golden_map):
    part = build_partition(golden_map, (0.5, 0.5), mode=GAP_SEPARATED)
    assert part.max_deviation <= 1e-3
    assert part.cuts[1] == pytest.approx(0.50002, abs=1e-5)
    assert part.gap_indices[1] == 5473


def test_gap_separated_tolerance_failure_reports_deviation(golden_map):
    with pytest.raises(PartitionError) as info:
        build_partition(golden_map, (0.3, 0.7), mode=GAP_SEPARATED, tol=1e-9, n_search=50)
    assert info.value.deviation > 1e-9


def test_gap_points_are_outside_every_block(golden_map):
    part = build_partition(golden_map, (0.5, 0.5), mode=GAP_SEPARATED)
    n = part.gap_indices[1]
    left, right = golden_map.gap(n)
    assert locate_block(part, golden_map, 0.5 * (left + right)) is None
    # left endpoint belongs to the block on the left
    assert locate_block(part, golden_map, left) == 0
    assert locate_block(part, golden_map, right + 1e-9) == 1


def test_locate_blocks_agrees_with_scalar(golden_map):
    part = build_partition(golden_map, (0.3, 0.7), mode=GAP_SEPARATED)
    x = np.random.default_rng(5).random(300)
    vec = locate_blocks(part, golden_map, x)
    scalar = [locate_block(part, golden_map, xi) for xi in x]
    assert list(vec) == [-1 if s is None else s for s in scalar]


def test_exact_locate_matches_collapse_coordinate(golden_map):
    part = build_partition(golden_map, (0.3, 0.7))
    theta = np.array([0.0, 0.1, 0.29999, 0.3, 0.9])
    assert list(locate_blocks(part, golden_map, blow_up(golden_map, theta))) == [0, 0, 0, 1, 1]


def test_weights_validation(golden_map):
    with pytest.raises(ValueError):
        build_partition(golden_map, (0.5, 0.6))
    with pytest.raises(ValueError):
        build_partition(golden_map, (1.5, -0.5))
    with pytest.raises(ValueError):
        build_partition(golden_map, (0.5, 0.5), mode="bogus")
    rigid = build_denjoy(RotationNumber.golden(), GapSchedule(0.0, 2.0))
    with pytest.raises(ValueError):
        build_partition(rigid, (0.5, 0.5), mode=GAP_SEPARATED)


def test_renormalized_when_sum_is_off_by_rounding(golden_map):
    part = build_partition(golden_map, (0.1, 0.2, 0.7000000000000001))
    assert part.renormalized
    assert sum(part.measures) == 1


def test_dict_round_trip(golden_map):
    part = build_partition(golden_map, (0.3, 0.7), mode=GAP_SEPARATED)
    assert partition_from_dict(golden_map, part.to_dict()) == part
    data = part.to_dict()
    data["cuts"] = [0.0, 0.5, 1.0]
    with pytest.raises(ValueError):
        partition_from_dict(golden_map, data)


def test_single_block_and_half_cuts(golden_map):
    one = build_partition(golden_map, (1,))
    assert one.r == 1 and one.measures == (1,)
    assert locate_block(one, golden_map, 0.77) == 0
    half = build_partition(golden_map, (0.5, 0.5))
    assert half.cuts == (0.0, 0.5, 1.0)
    # collapse coordinate 0.25 lies in the first block (index 0)
    assert locate_block(half, golden_map, blow_up(golden_map, 0.25)) == 0
