"""Unit tests for the instance generator"""

import json

import pytest

from common.errors import RestartLimit
from common.models import BatchSizeBounds, SolverConfig
from core.feasibility import check_feasibility
from core.io import load_instance
from core.timing import left_shift_timing
from core.validation import infeasible_families, validate_instance
from genins import (
    GenSpec,
    InstanceClass,
    cmax_lower_bound,
    default_grid,
    derive_min_batch_sizes,
    gen_instance,
    gen_setup_matrix,
    gen_suite,
    make_rng,
)
from genins import generator
from genins.generator import bounds_from_schedule, min_run_lengths
from solver import solve


def test_streams_are_reproducible():
    """Test that a seed and stream key fix the draws"""
    assert make_rng(7, 1, 2).integers(0, 1000, 5).tolist() == make_rng(7, 1, 2).integers(
        0, 1000, 5
    ).tolist()
    assert make_rng(7, 1, 2).random() != make_rng(7, 1, 3).random()


def _assert_setup_properties(setups, families, scale):
    inter = setups.inter
    assert len(inter) == families and len(setups.initial) == families
    for f in range(families):
        assert inter[f][f] == 0
        assert isinstance(setups.initial[f], int)
        assert 0 <= setups.initial[f] <= scale
        for g in range(families):
            assert isinstance(inter[f][g], int)
            assert 0 <= inter[f][g] <= scale
            for h in range(families):
                assert inter[f][h] <= inter[f][g] + inter[g][h]
            assert setups.initial[g] <= setups.initial[f] + inter[f][g]
    if families >= 2:
        assert any(inter[f][g] != inter[g][f] for f in range(families) for g in range(families))


@pytest.mark.parametrize("families,scale", [(2, 20), (3, 50), (5, 100)])
def test_setup_matrix_properties(families, scale):
    """Test zero diagonal, triangle inequality, range and asymmetry"""
    setups = gen_setup_matrix(families, scale, make_rng(11, families))
    _assert_setup_properties(setups, families, scale)


@pytest.mark.slow
def test_setup_matrix_properties_many_draws():
    """Test the setup properties on a thousand seeded matrices"""
    for draw in range(1000):
        families = 2 + draw % 6
        scale = (20, 50, 100)[draw // 6 % 3]
        setups = gen_setup_matrix(families, scale, make_rng(2024, draw), seed=draw)
        _assert_setup_properties(setups, families, scale)


def test_single_family_matrix():
    """Test the degenerate one-family matrix"""
    setups = gen_setup_matrix(1, 20, make_rng(3))
    assert setups.inter == ((0,),)


def test_restart_limit(monkeypatch):
    """Test that endless symmetric draws end in RestartLimit"""

    def always_symmetric(*_args):
        raise generator.SymmetricSetups()

    monkeypatch.setattr(generator, "_draw_setups", always_symmetric)
    with pytest.raises(RestartLimit) as info:
        gen_setup_matrix(3, 20, make_rng(1), seed=1, restart_limit=2)
    assert info.value.attempts == 2


def test_cmax_lower_bound(example_instance):
    """Test the makespan bound of the worked example"""
    assert cmax_lower_bound(example_instance.jobs, 1, example_instance.setups) == 14
    assert cmax_lower_bound(example_instance.jobs, 2, example_instance.setups) == 7


def test_generated_instance_ranges():
    """Test field ranges of a generated instance"""
    spec = GenSpec(num_jobs=25, num_families=3, num_machines=2, setup_scale=50, seed=5)
    inst = gen_instance(spec, make_rng(5))
    assert validate_instance(inst) == []
    horizon = cmax_lower_bound(inst.jobs, 2, inst.setups)
    assert all(1 <= job.processing <= 10 and 1 <= job.weight <= 10 for job in inst.jobs)
    assert all(1 <= job.release <= horizon for job in inst.jobs)
    assert all(inst.family_size(f) > 0 for f in range(3))
    assert inst.bounds.min_size == (1, 1, 1)
    assert sum(inst.bounds.max_size) == 25


def test_generation_is_deterministic():
    """Test that one seed gives one instance"""
    spec = GenSpec(num_jobs=15, num_families=2, num_machines=2)
    first = gen_instance(spec, make_rng(42))
    second = gen_instance(spec, make_rng(42))
    assert first.model_dump() == second.model_dump()


def test_gen_spec_rejects_more_families_than_jobs():
    """Test GenSpec validation"""
    with pytest.raises(ValueError):
        GenSpec(num_jobs=2, num_families=3, num_machines=1)


def test_sizes_cut_off_core_schedule(example_instance, ipf):
    """Test minimum sizes strictly above the shortest run where a family allows it"""
    core = left_shift_timing(example_instance, [[[1, 2], [3, 4], [5]]], ipf)
    assert min_run_lengths(example_instance, core) == [1, 2]
    bounds = bounds_from_schedule(example_instance, core, make_rng(0))
    assert 2 <= bounds.min_size[0] <= 3
    assert bounds.min_size[1] == 2
    assert bounds.max_size == (3, 2)
    sized = example_instance.with_bounds(bounds)
    assert not check_feasibility(sized, core, ipf, sizing_enabled=True).feasible


def test_derive_min_batch_sizes(example_instance):
    """Test derivation from the sizing-free optimum"""
    free = example_instance.with_bounds(BatchSizeBounds(min_size=(1, 1), max_size=(3, 2)))
    bounds = derive_min_batch_sizes(free, make_rng(9))
    derived = free.with_bounds(bounds)
    assert infeasible_families(derived) == []
    assert bounds.min_size[0] >= 2


@pytest.mark.slow
@pytest.mark.parametrize("seed", range(40))
def test_derived_sizes_cut_off_core_schedule(seed, ipf):
    """Test that derived sizes fit every family and reject the schedule they came from"""
    families = 2 + seed % 2
    spec = GenSpec(num_jobs=15, num_families=families, num_machines=2, seed=seed)
    inst = gen_instance(spec, make_rng(seed))
    core = solve(
        inst,
        SolverConfig(variation=ipf, sizing_enabled=False, node_limit=2000, time_limit=60.0),
    )
    assert core.schedule is not None
    runs = min_run_lengths(inst, core.schedule)
    bounds = bounds_from_schedule(inst, core.schedule, make_rng(seed, 1))
    for f in range(families):
        assert 1 <= bounds.min_size[f] <= inst.family_size(f)
        assert bounds.max_size[f] == inst.family_size(f)
    sized = inst.with_bounds(bounds)
    assert infeasible_families(sized) == []
    if any(runs[f] + 1 <= inst.family_size(f) for f in range(families)):
        assert not check_feasibility(sized, core.schedule, ipf, sizing_enabled=True).feasible

    derived = derive_min_batch_sizes(inst, make_rng(seed, 2))
    assert all(derived.min_size[f] <= inst.family_size(f) for f in range(families))


def test_default_grid():
    """Test the experiment grid"""
    grid = default_grid()
    assert len(grid) == 13
    assert grid[0] == InstanceClass(15, 2, 2)
    assert InstanceClass(100, 7, 5) in grid


def test_suite_manifest(tmp_path):
    """Test suite files, hashes and reproducibility"""
    grid = [InstanceClass(6, 2, 2)]
    paths = gen_suite(grid, 2, seed=3, out_dir=tmp_path / "a", scales=(20,), derive_sizes=False)
    assert [p.name for p in paths] == ["j6_f2_m2_s20_000.json", "j6_f2_m2_s20_001.json"]
    manifest = json.loads((tmp_path / "a" / "manifest.json").read_text())
    assert len(manifest["instances"]) == 2
    assert manifest["instances"][1]["stream"] == [3, 0, 1]

    gen_suite(grid, 2, seed=3, out_dir=tmp_path / "b", scales=(20,), derive_sizes=False)
    again = json.loads((tmp_path / "b" / "manifest.json").read_text())
    assert again["manifest_hash"] == manifest["manifest_hash"]

    gen_suite(grid, 2, seed=4, out_dir=tmp_path / "c", scales=(20,), derive_sizes=False)
    other = json.loads((tmp_path / "c" / "manifest.json").read_text())
    assert other["manifest_hash"] != manifest["manifest_hash"]


def test_suite_with_derived_sizes(tmp_path):
    """Test that derived batch sizes leave every family partitionable"""
    paths = gen_suite([InstanceClass(6, 2, 1)], 1, seed=8, out_dir=tmp_path, scales=(20,))
    inst = load_instance(paths[0])
    assert infeasible_families(inst) == []
    assert validate_instance(inst) == []
