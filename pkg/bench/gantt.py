"""SVG Gantt charts of timed schedules."""

import io
from typing import Optional

import matplotlib

matplotlib.use("Agg")

from matplotlib import colormaps, rc_context  # noqa: E402
from matplotlib.figure import Figure  # noqa: E402
from matplotlib.patches import Rectangle  # noqa: E402

from common.config import settings  # noqa: E402
from common.models import Instance, Schedule  # noqa: E402

LANE_HEIGHT = 0.6


def gantt_svg(inst: Instance, sched: Schedule, scale: Optional[int] = None) -> str:
    """One lane per machine: family-coloured jobs, batch outlines, hatched setups
    and release markers. Element ids: `job-<id>`, `batch-<m>-<k>`, `setup-<m>-<k>`,
    `release-<id>`. Output is byte-identical for identical input.
    """
    scale = settings.gantt_scale if scale is None else scale
    palette = colormaps["tab10"]
    machines = max(len(sched.machines), inst.num_machines)
    horizon = max([batch.end for _, _, batch in sched.batches()] + [1])
    width = max(4.0, horizon * scale / 72.0)
    height = 1.0 + machines * 0.8

    with rc_context({"svg.hashsalt": "gantt", "svg.fonttype": "none"}):
        fig = Figure(figsize=(width, height))
        ax = fig.add_subplot(111)
        for machine in range(machines):
            lane = sched.machines[machine] if machine < len(sched.machines) else ()
            y = machine
            end = 0
            previous = None
            for position, batch in enumerate(lane):
                setup = inst.setups.between(previous, batch.family)
                if setup > 0:
                    ax.add_patch(
                        Rectangle(
                            (end, y - LANE_HEIGHT / 2),
                            setup,
                            LANE_HEIGHT,
                            facecolor="none",
                            edgecolor="grey",
                            hatch="//",
                            linewidth=0.5,
                            gid=f"setup-{machine}-{position}",
                        )
                    )
                for job in batch.jobs:
                    length = inst.job(job.id).processing
                    ax.add_patch(
                        Rectangle(
                            (job.start, y - LANE_HEIGHT / 2),
                            length,
                            LANE_HEIGHT,
                            facecolor=palette(batch.family % 10),
                            edgecolor="black",
                            linewidth=0.5,
                            gid=f"job-{job.id}",
                        )
                    )
                    ax.text(
                        job.start + length / 2,
                        y,
                        str(job.id),
                        ha="center",
                        va="center",
                        fontsize=8,
                    )
                ax.add_patch(
                    Rectangle(
                        (batch.start, y - LANE_HEIGHT / 2 - 0.08),
                        batch.end - batch.start,
                        LANE_HEIGHT + 0.16,
                        facecolor="none",
                        edgecolor="black",
                        linewidth=1.5,
                        gid=f"batch-{machine}-{position}",
                    )
                )
                for job in batch.jobs:
                    release = inst.job(job.id).release
                    ax.vlines(
                        release,
                        y - LANE_HEIGHT / 2 - 0.15,
                        y + LANE_HEIGHT / 2 + 0.15,
                        colors="green",
                        linewidth=1.0,
                        gid=f"release-{job.id}",
                    )
                end = batch.end
                previous = batch.family

        ax.set_xlim(0, horizon + 1)
        ax.set_ylim(-0.5, machines - 0.5)
        ax.set_yticks(range(machines))
        ax.set_yticklabels([f"M{m + 1}" for m in range(machines)])
        ax.set_xlabel("time")
        ax.grid(axis="x", linestyle=":", alpha=0.5)

        buffer = io.StringIO()
        fig.savefig(buffer, format="svg", metadata={"Date": None})
    return buffer.getvalue()
