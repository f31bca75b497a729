"""Communication cost model for the Plural architecture.

On a chip of area A, any message crosses a distance of sqrt(A) (the chip
edge), so a fixed-size message dissipates sqrt(A) wire energy.  Scheduler
traffic (task initiation and completion) and shared-memory traffic both run
at the ensemble's combined instruction rate sqrt(m * A); memory messages
additionally pass through log2(m) switch stages of a log-depth network,
adding log2(m) switch energy each.  Composing these with the computing power
of the scaling model gives the total power and the communications-adjusted
performance/power ratio.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import DomainError
from .scaling import ChipSpec, ensemble_metrics

__all__ = [
    "CommMetrics",
    "sched_msg_energy",
    "sched_power",
    "mem_access_energy",
    "mem_power",
    "comm_metrics",
]


@dataclass(frozen=True)
class CommMetrics:
    """Power breakdown at core count m: compute, scheduler, and memory traffic."""

    m: int
    sched_msg_energy: float
    sched_power: float
    mem_access_energy: float
    mem_power: float
    compute_power: float
    total_power: float
    perf_per_total_power: float


def _check_area(area: float) -> None:
    if not area > 0:
        raise DomainError(f"area must be positive, got {area!r}")


def _check_core_count(m: int) -> None:
    if not isinstance(m, int):
        raise DomainError(f"core count m must be an integer, got {m!r}")
    if m < 1:
        raise DomainError(f"core count m must be >= 1, got {m}")


def sched_msg_energy(area: float) -> float:
    """Energy of one fixed-size scheduler message crossing the chip: sqrt(A)."""
    _check_area(area)
    return math.sqrt(area)


def sched_power(area: float, m: int) -> float:
    """Scheduler traffic power: sqrt(A) per message at rate sqrt(m * A)."""
    _check_area(area)
    _check_core_count(m)
    return math.sqrt(area) * math.sqrt(m * area)


def mem_access_energy(area: float, m: int) -> float:
    """Energy of one shared-memory access: sqrt(A) wire plus log2(m) switches.

    An m-endpoint log-depth switching network has log2(m) stages; with a
    single core there are no switch stages and only the wire term remains.
    """
    _check_area(area)
    _check_core_count(m)
    return math.sqrt(area) + math.log2(m)


def mem_power(area: float, m: int) -> float:
    """Memory traffic power: (sqrt(A) + log2(m)) per access at rate sqrt(m * A)."""
    _check_area(area)
    _check_core_count(m)
    return (math.sqrt(area) + math.log2(m)) * math.sqrt(m * area)


def comm_metrics(spec: ChipSpec, m: int) -> CommMetrics:
    """Assemble the full power breakdown for ``m`` cores on ``spec``.

    Compute power comes from the scaling model; scheduler and memory power
    from the message model above.  The communications-adjusted figure of
    merit divides the ensemble performance by the summed power.
    """
    ensemble = ensemble_metrics(spec, m)
    sched_e = sched_msg_energy(spec.area)
    sched_p = sched_power(spec.area, m)
    mem_e = mem_access_energy(spec.area, m)
    mem_p = mem_power(spec.area, m)
    total = ensemble.power + sched_p + mem_p
    return CommMetrics(
        m=m,
        sched_msg_energy=sched_e,
        sched_power=sched_p,
        mem_access_energy=mem_e,
        mem_power=mem_p,
        compute_power=ensemble.power,
        total_power=total,
        perf_per_total_power=ensemble.ensemble_perf / total,
    )
