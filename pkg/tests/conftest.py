"""Shared fixtures: the five-job, two-family, one-machine example instance."""

import pytest

from common.models import (
    BatchSizeBounds,
    Instance,
    Job,
    Preemption,
    SetupMatrix,
    VariationConfig,
)


def make_instance(
    releases,
    families,
    num_machines=1,
    processing=2,
    weights=None,
    inter=((0, 3), (3, 0)),
    initial=(1, 1),
    min_size=None,
    max_size=None,
):
    count = len(releases)
    weights = weights or [1] * count
    processings = processing if isinstance(processing, (list, tuple)) else [processing] * count
    jobs = tuple(
        Job(id=i + 1, weight=w, release=r, processing=p, family=f)
        for i, (w, r, p, f) in enumerate(zip(weights, releases, processings, families))
    )
    num_families = len(initial)
    sizes = [sum(1 for f in families if f == g) for g in range(num_families)]
    return Instance(
        jobs=jobs,
        num_machines=num_machines,
        num_families=num_families,
        setups=SetupMatrix(inter=tuple(tuple(row) for row in inter), initial=tuple(initial)),
        bounds=BatchSizeBounds(
            min_size=tuple(min_size or [1] * num_families),
            max_size=tuple(max_size or sizes),
        ),
    )


@pytest.fixture
def example_instance():
    """Five unit-weight jobs of length 2, batch sizes fixed to the family sizes"""
    return make_instance(
        releases=[1, 5, 6, 12, 11],
        families=[0, 0, 1, 1, 0],
        min_size=[3, 2],
        max_size=[3, 2],
    )


@pytest.fixture
def two_machine_instance():
    return make_instance(
        releases=[0, 2, 1, 4, 3, 6],
        families=[0, 1, 0, 1, 0, 1],
        num_machines=2,
        processing=[2, 3, 1, 2, 2, 1],
        weights=[1, 2, 3, 1, 2, 1],
        inter=((0, 2), (3, 0)),
        initial=(1, 2),
    )


@pytest.fixture
def ipf():
    return VariationConfig.ipf()


@pytest.fixture
def bc():
    return VariationConfig.bc()


@pytest.fixture
def non_preemptive():
    return VariationConfig(preemption=Preemption.FORBIDDEN)
