"""Experiment grid: instance classes by jobs, families and machines, times setup scales."""

import hashlib
import json
from pathlib import Path
from typing import Dict, List, NamedTuple, Optional, Sequence, Union

from common.config import settings
from common.logging_config import setup_logging
from core.io import save_instance
from genins.generator import GenSpec, derive_min_batch_sizes, gen_instance, make_rng

logger = setup_logging("genins", settings.log_level)

FAMILY_OPTIONS: Dict[int, Sequence[int]] = {15: (2,), 25: (2, 3), 50: (3, 5), 100: (5, 7)}
MACHINE_OPTIONS: Dict[int, Sequence[int]] = {15: (2,), 25: (2, 3), 50: (3, 4), 100: (4, 5)}
SETUP_SCALES = (20, 50, 100)


class InstanceClass(NamedTuple):
    num_jobs: int
    num_families: int
    num_machines: int

    @property
    def label(self) -> str:
        return f"j{self.num_jobs}_f{self.num_families}_m{self.num_machines}"


def default_grid() -> List[InstanceClass]:
    """The 13 classes: every family option crossed with every machine option per size"""
    return [
        InstanceClass(jobs, families, machines)
        for jobs in sorted(FAMILY_OPTIONS)
        for families in FAMILY_OPTIONS[jobs]
        for machines in MACHINE_OPTIONS[jobs]
    ]


def gen_suite(
    grid: Optional[Sequence[InstanceClass]],
    per_class: int,
    seed: int,
    out_dir: Union[str, Path],
    scales: Sequence[int] = SETUP_SCALES,
    derive_sizes: bool = True,
    core_budget: Optional[float] = None,
    node_limit: Optional[int] = None,
) -> List[Path]:
    """Write `per_class` instances per class and scale plus `manifest.json`.

    Instance k of scale s in class c uses the stream (seed, c, s_index * per_class + k).
    """
    grid = default_grid() if grid is None else list(grid)
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    paths: List[Path] = []
    entries = []
    for class_index, cls in enumerate(grid):
        for scale_index, scale in enumerate(scales):
            for index in range(per_class):
                stream = scale_index * per_class + index
                rng = make_rng(seed, class_index, stream)
                spec = GenSpec(
                    num_jobs=cls.num_jobs,
                    num_families=cls.num_families,
                    num_machines=cls.num_machines,
                    setup_scale=scale,
                    seed=seed,
                )
                inst = gen_instance(spec, rng)
                if derive_sizes:
                    inst = inst.with_bounds(
                        derive_min_batch_sizes(inst, rng, core_budget, node_limit)
                    )
                path = out / f"{spec.label}_{index:03d}.json"
                save_instance(inst, path)
                digest = hashlib.sha256(path.read_bytes()).hexdigest()
                entries.append(
                    {
                        "file": path.name,
                        "class": cls.label,
                        "num_jobs": cls.num_jobs,
                        "num_families": cls.num_families,
                        "num_machines": cls.num_machines,
                        "setup_scale": scale,
                        "index": index,
                        "stream": [seed, class_index, stream],
                        "sha256": digest,
                    }
                )
                paths.append(path)
                logger.debug("Instance written", extra={"file": path.name})

    manifest_hash = hashlib.sha256(
        "\n".join(entry["sha256"] for entry in entries).encode()
    ).hexdigest()
    manifest = {
        "seed": seed,
        "per_class": per_class,
        "scales": list(scales),
        "classes": [cls.label for cls in grid],
        "instances": entries,
        "manifest_hash": manifest_hash,
    }
    (out / "manifest.json").write_text(json.dumps(manifest, indent=2, sort_keys=True))
    logger.info(
        "Suite generated",
        extra={"instances": len(paths), "classes": len(grid), "manifest_hash": manifest_hash},
    )
    return paths
