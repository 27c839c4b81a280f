"""Step-count and timing comparison harness between schemes."""

from dataclasses import dataclass

from .cases import get_case, run_case
from .schemes import SchemeConfig


@dataclass
class PerfRecord:
    scheme: str
    resolution: object
    step_count: int
    mean_step_time: float
    total_time: float
    field_buffer_bytes: int

    def ratios_to(self, base):
        """(steps, step time, total, memory) normalized to a baseline record."""
        return (
            self.step_count / base.step_count,
            self.mean_step_time / base.mean_step_time,
            self.total_time / base.total_time,
            self.field_buffer_bytes / base.field_buffer_bytes,
        )


def perf_compare(case_name, resolutions, schemes, t_end=None, mach=None, order=1):
    """Run each scheme at each resolution to the same end time.

    Field-buffer memory is computed from the buffer sizes the algorithm needs
    (two time levels, plus the intermediate state for OSLP), not OS probes.
    """
    schemes = list(schemes)
    if "fslp" not in schemes:
        raise ValueError("perf comparison needs fslp as the baseline")
    records = []
    for scheme in schemes:
        config = SchemeConfig(scheme=scheme, order=order)
        for resolution in resolutions:
            case = get_case(case_name, mach=mach)
            grid, report, _ = run_case(case, config, resolution=resolution, t_end=t_end)
            records.append(
                PerfRecord(
                    scheme=scheme,
                    resolution=resolution,
                    step_count=report.step_count,
                    mean_step_time=report.wall_time / max(report.step_count, 1),
                    total_time=report.wall_time,
                    field_buffer_bytes=config.n_field_buffers * grid.U.nbytes,
                )
            )
    return records


def format_table(records):
    base = {r.resolution: r for r in records if r.scheme == "fslp"}
    lines = ["scheme  resolution  steps  step_time(s)  total(s)  buffer_MiB"]
    for r in records:
        b = base[r.resolution]
        steps, st, tot, mem = r.ratios_to(b)
        lines.append(
            f"{r.scheme:6s}  {str(r.resolution):>10s}  {r.step_count:5d} ({steps:.2f})"
            f"  {r.mean_step_time:.3e} ({st:.2f})  {r.total_time:8.2f} ({tot:.2f})"
            f"  {r.field_buffer_bytes / 2**20:8.2f} ({mem:.2f})"
        )
    return "\n".join(lines)
