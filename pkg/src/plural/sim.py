"""Deterministic discrete-event simulator of the Plural architecture.

One scheduler dispatches task-graph work to m identical cores that share a
CREW memory.  Time advances in core instruction slots of length
cpi / (A/m)**alpha; every event in a run falls on a whole slot boundary, so
arbitration ties are exact and a run is a pure function of (graph, config).

Execution semantics:

* The scheduler dispatches ready tasks FIFO by readiness time (ties by
  ascending task id) to idle cores first, then into per-core pre-allocation
  queues of configurable depth.  Dispatch and completion messages are
  instantaneous; the queue exists to keep cores from idling between tasks.
* Control tasks run on the scheduler itself in zero time and never occupy a
  core.  A conditional control task forwards to exactly one successor,
  chosen by the configuration.
* Every Nth instruction of a task (N = mem_access_stride) is a shared-memory
  access, targeting the task's footprint round-robin (sorted reads, then
  sorted writes).  Accesses to one variable in the same slot are serialized:
  a seeded generator picks the winner and every loser retries next slot,
  stalling its core one slot per retry.
* Energy ledger: an executed instruction costs A/m.  With communication
  costs enabled, each scheduler message (one init and one completion per
  core-executed instance) costs sqrt(A) and each memory access costs
  sqrt(A) + log2(m).

For m > 1 a single-core reference run of the same workload prices the
measured speedup; ``compare_to_model`` turns a report into relative
deviations from the closed-form speedup, energydown, and powerdown.
"""

from __future__ import annotations

import heapq
import math
import random
from collections import deque
from dataclasses import dataclass, field, replace
from typing import Mapping, NamedTuple

from .errors import (
    CycleError,
    DegenerateWorkloadError,
    DomainError,
    SimConfigError,
    ValidationError,
)
from .graph import (
    ControlKind,
    TaskGraph,
    TaskKind,
    expand_duplicables,
    instance_id,
    validate_dag,
)
from .scaling import ChipSpec, ensemble_metrics

__all__ = [
    "SimConfig",
    "SimReport",
    "SimEvent",
    "ModelDeviation",
    "run",
    "compare_to_model",
    "report_as_dict",
]


@dataclass(frozen=True)
class SimConfig:
    """Knobs for one simulator run."""

    chip: ChipSpec
    m: int
    mem_access_stride: int = 5
    prealloc_depth: int = 1
    comm_costs_enabled: bool = False
    seed: int = 0
    conditional_outcomes: Mapping[str, str] = field(default_factory=dict)

    def __post_init__(self) -> None:
        if not isinstance(self.m, int) or self.m < 1:
            raise ValidationError(f"m must be a positive integer, got {self.m!r}")
        if not isinstance(self.mem_access_stride, int) or self.mem_access_stride < 1:
            raise ValidationError(
                f"mem_access_stride must be a positive integer, got "
                f"{self.mem_access_stride!r}"
            )
        if not isinstance(self.prealloc_depth, int) or self.prealloc_depth < 0:
            raise ValidationError(
                f"prealloc_depth must be a nonnegative integer, got "
                f"{self.prealloc_depth!r}"
            )
        object.__setattr__(self, "conditional_outcomes", dict(self.conditional_outcomes))


class SimEvent(NamedTuple):
    """One entry of the optional event trace."""

    time: float
    kind: str  # ready | start | queue | access | stall | complete | control
    task: str
    detail: str


@dataclass(frozen=True)
class SimReport:
    """Measurements from one simulator run."""

    m: int
    makespan: float
    total_instructions: int
    compute_energy: float
    sched_msg_energy_total: float
    mem_msg_energy_total: float
    avg_power: float
    per_core_busy_time: tuple[float, ...]
    utilization: tuple[float, ...]
    sched_msg_count: int
    mem_access_count: int
    mem_conflict_stalls: int
    empirical_speedup: float
    events: tuple[SimEvent, ...] = ()

    @property
    def total_energy(self) -> float:
        return self.compute_energy + self.sched_msg_energy_total + self.mem_msg_energy_total


@dataclass(frozen=True)
class ModelDeviation:
    """Measured vs. closed-form ratios for one run, as relative deviations."""

    speedup_measured: float
    speedup_model: float
    speedup_deviation: float
    energydown_measured: float
    energydown_model: float
    energydown_deviation: float
    powerdown_measured: float
    powerdown_model: float
    powerdown_deviation: float


_COMPLETE = 0
_ACCESS = 1


class _Instance:
    """A core-executed task instance and its progress through its slots."""

    __slots__ = ("tid", "n", "vars", "n_access", "core", "start", "stalls", "granted")

    def __init__(self, tid: str, n: int, vars_: tuple[str, ...], stride: int):
        self.tid = tid
        self.n = n
        self.vars = vars_
        self.n_access = n // stride if vars_ else 0
        self.core = -1
        self.start = 0
        self.stalls = 0
        self.granted = 0


class _Core:
    __slots__ = ("current", "queue", "busy_slots")

    def __init__(self) -> None:
        self.current: _Instance | None = None
        self.queue: deque[str] = deque()
        self.busy_slots = 0


class _Simulation:
    def __init__(
        self,
        g: TaskGraph,
        cfg: SimConfig,
        outcomes: Mapping[str, list[str]],
        record_events: bool,
    ):
        self.g = g
        self.cfg = cfg
        self.outcomes = outcomes
        chip = cfg.chip
        self.core_freq = (chip.area / cfg.m) ** chip.pollack_exponent
        self.slot_dt = chip.cpi / self.core_freq
        self.instr_energy = chip.area / cfg.m
        self.msg_energy = math.sqrt(chip.area)
        self.access_energy = math.sqrt(chip.area) + math.log2(cfg.m)
        self.rng = random.Random(cfg.seed)

        self.pred_left = {tid: 0 for tid in g.tasks}
        for _, succ in g.edges:
            self.pred_left[succ] += 1
        self.succs = {tid: g.successors(tid) for tid in g.tasks}

        self.cores = [_Core() for _ in range(cfg.m)]
        self.ready: list[tuple[int, str]] = []  # (ready slot, task id)
        self.heap: list[tuple[int, int, str, _Instance]] = []

        self.total_instructions = 0
        self.sched_msg_count = 0
        self.mem_access_count = 0
        self.mem_conflict_stalls = 0
        self.last_boundary = 0

        self.trace: list[SimEvent] | None = [] if record_events else None

    # -- event helpers ------------------------------------------------------

    def _event(self, slot: int, kind: str, task: str, detail: str) -> None:
        if self.trace is not None:
            self.trace.append(SimEvent(slot * self.slot_dt, kind, task, detail))

    def _access_vars(self, tid: str) -> tuple[str, ...]:
        task = self.g.tasks[tid]
        return tuple(sorted(task.read_set)) + tuple(sorted(task.write_set))

    # -- scheduler ----------------------------------------------------------

    def _on_ready(self, tid: str, slot: int) -> None:
        """Make a task ready; control tasks resolve on the scheduler at once."""
        pending = deque([tid])
        while pending:
            t = pending.popleft()
            task = self.g.tasks[t]
            if task.kind is not TaskKind.CONTROL:
                heapq.heappush(self.ready, (slot, t))
                self._event(slot, "ready", t, "")
                continue
            self.last_boundary = max(self.last_boundary, slot)
            if task.control_kind is ControlKind.CONDITIONAL:
                followers = self.outcomes.get(t)
                if followers is None:
                    raise SimConfigError(
                        f"conditional control task {t!r} was reached but has no "
                        "configured outcome"
                    )
            else:
                followers = self.succs[t]
            self._event(slot, "control", t, f"forwards={','.join(followers)}")
            for s in followers:
                self.pred_left[s] -= 1
                if self.pred_left[s] == 0:
                    pending.append(s)

    def _start(self, core_idx: int, tid: str, slot: int, from_queue: bool) -> None:
        task = self.g.tasks[tid]
        inst = _Instance(
            tid, task.instruction_count, self._access_vars(tid), self.cfg.mem_access_stride
        )
        inst.core = core_idx
        inst.start = slot
        self.cores[core_idx].current = inst
        if not from_queue:
            self.sched_msg_count += 1  # task-init message
        self._event(slot, "start", tid, f"core={core_idx}")
        self._push_next(inst)

    def _push_next(self, inst: _Instance) -> None:
        """Queue the instance's next milestone: its next access, else completion."""
        if inst.granted < inst.n_access:
            instr = (inst.granted + 1) * self.cfg.mem_access_stride
            slot = inst.start + instr - 1 + inst.stalls
            heapq.heappush(self.heap, (slot, _ACCESS, inst.tid, inst))
        else:
            slot = inst.start + inst.n + inst.stalls
            heapq.heappush(self.heap, (slot, _COMPLETE, inst.tid, inst))

    def _dispatch(self, slot: int) -> None:
        """Feed idle cores, then fill pre-allocation queues, FIFO over ready tasks."""
        while self.ready:
            core_idx = next(
                (i for i, c in enumerate(self.cores) if c.current is None), None
            )
            if core_idx is None:
                break
            _, tid = heapq.heappop(self.ready)
            self._start(core_idx, tid, slot, from_queue=False)
        while self.ready:
            core_idx = next(
                (
                    i
                    for i, c in enumerate(self.cores)
                    if c.current is not None and len(c.queue) < self.cfg.prealloc_depth
                ),
                None,
            )
            if core_idx is None:
                break
            _, tid = heapq.heappop(self.ready)
            self.cores[core_idx].queue.append(tid)
            self.sched_msg_count += 1  # task-init message, pre-allocated
            self._event(slot, "queue", tid, f"core={core_idx}")

    def _complete(self, inst: _Instance, slot: int) -> None:
        core = self.cores[inst.core]
        core.busy_slots += inst.n + inst.stalls
        core.current = None
        self.total_instructions += inst.n
        self.sched_msg_count += 1  # task-completion message
        self.last_boundary = max(self.last_boundary, slot)
        self._event(slot, "complete", inst.tid, f"core={inst.core}")
        for s in self.succs[inst.tid]:
            self.pred_left[s] -= 1
            if self.pred_left[s] == 0:
                self._on_ready(s, slot)
        if core.queue:
            self._start(inst.core, core.queue.popleft(), slot, from_queue=True)
        self._dispatch(slot)

    def _arbitrate(self, accesses: list[_Instance], slot: int) -> None:
        groups: dict[str, list[_Instance]] = {}
        for inst in accesses:
            var = inst.vars[inst.granted % len(inst.vars)]
            groups.setdefault(var, []).append(inst)
        for var in sorted(groups):
            group = sorted(groups[var], key=lambda i: i.tid)
            if len(group) > 1:
                self.rng.shuffle(group)
            winner, losers = group[0], group[1:]
            winner.granted += 1
            self.mem_access_count += 1
            self._event(slot, "access", winner.tid, f"var={var}")
            self._push_next(winner)
            for inst in losers:
                inst.stalls += 1
                self.mem_conflict_stalls += 1
                self._event(slot, "stall", inst.tid, f"var={var}")
                heapq.heappush(self.heap, (slot + 1, _ACCESS, inst.tid, inst))

    # -- main loop ----------------------------------------------------------

    def execute(self) -> None:
        for tid in sorted(self.g.tasks):
            if self.pred_left[tid] == 0:
                self._on_ready(tid, 0)
        self._dispatch(0)
        while self.heap:
            slot = self.heap[0][0]
            accesses: list[_Instance] = []
            while self.heap and self.heap[0][0] == slot:
                _, etype, _, inst = heapq.heappop(self.heap)
                if etype == _COMPLETE:
                    self._complete(inst, slot)
                else:
                    accesses.append(inst)
            if accesses:
                self._arbitrate(accesses, slot)

    @property
    def makespan(self) -> float:
        return self.last_boundary * self.slot_dt

    def report(self, empirical_speedup: float) -> SimReport:
        makespan = self.makespan
        compute_energy = self.total_instructions * self.instr_energy
        if self.cfg.comm_costs_enabled:
            sched_energy = self.sched_msg_count * self.msg_energy
            mem_energy = self.mem_access_count * self.access_energy
        else:
            sched_energy = 0.0
            mem_energy = 0.0
        total_energy = compute_energy + sched_energy + mem_energy
        busy = tuple(core.busy_slots * self.slot_dt for core in self.cores)
        return SimReport(
            m=self.cfg.m,
            makespan=makespan,
            total_instructions=self.total_instructions,
            compute_energy=compute_energy,
            sched_msg_energy_total=sched_energy,
            mem_msg_energy_total=mem_energy,
            avg_power=total_energy / makespan,
            per_core_busy_time=busy,
            utilization=tuple(b / makespan for b in busy),
            sched_msg_count=self.sched_msg_count,
            mem_access_count=self.mem_access_count,
            mem_conflict_stalls=self.mem_conflict_stalls,
            empirical_speedup=empirical_speedup,
            events=tuple(self.trace) if self.trace is not None else (),
        )


def _resolve_outcomes(g: TaskGraph, cfg: SimConfig) -> dict[str, list[str]]:
    """Validate outcomes against the authored graph and map each chosen
    successor to its expanded task id(s): all d instances for a duplicable."""
    outcomes: dict[str, list[str]] = {}
    for tid, chosen in cfg.conditional_outcomes.items():
        task = g.tasks.get(tid)
        if task is None:
            raise SimConfigError(f"conditional outcome names unknown task {tid!r}")
        if task.kind is not TaskKind.CONTROL or task.control_kind is not ControlKind.CONDITIONAL:
            raise SimConfigError(
                f"conditional outcome given for {tid!r}, which is not a "
                "conditional control task"
            )
        if (tid, chosen) not in g.edges:
            raise SimConfigError(
                f"conditional outcome {tid!r} -> {chosen!r} is not an edge of the graph"
            )
        target = g.tasks[chosen]
        if target.kind is TaskKind.DUPLICABLE:
            outcomes[tid] = [instance_id(chosen, k) for k in range(target.instances)]
        else:
            outcomes[tid] = [chosen]
    return outcomes


def run(g: TaskGraph, cfg: SimConfig, *, record_events: bool = False) -> SimReport:
    """Simulate a task graph and return its measurements.

    The graph must be acyclic; duplicable tasks are expanded internally.  For
    m > 1 the same workload is also run on a single core of the full chip
    area to fill in ``empirical_speedup``.
    """
    cycle = validate_dag(g)
    if cycle is not None:
        raise CycleError(cycle)
    outcomes = _resolve_outcomes(g, cfg)
    expanded = expand_duplicables(g)

    sim = _Simulation(expanded, cfg, outcomes, record_events)
    sim.execute()
    if sim.total_instructions == 0:
        raise DegenerateWorkloadError(
            "the executed path of the task graph contains no instructions"
        )
    if cfg.m == 1:
        return sim.report(empirical_speedup=1.0)
    reference = _Simulation(expanded, replace(cfg, m=1), outcomes, False)
    reference.execute()
    return sim.report(empirical_speedup=reference.makespan / sim.makespan)


def compare_to_model(report: SimReport, cfg: SimConfig) -> ModelDeviation:
    """Relative deviation of a run's speedup, energydown, and powerdown ratios
    from the closed-form model at the run's core count.

    The single-core reference values are reconstructed from the report: the
    reference executes the same instances, messages, and accesses, with
    instruction energy A and access energy sqrt(A).
    """
    if report.m != cfg.m or len(report.per_core_busy_time) != cfg.m:
        raise DomainError(
            f"report was produced for m={report.m}, not for the given "
            f"configuration's m={cfg.m}"
        )
    model = ensemble_metrics(cfg.chip, cfg.m)
    area = cfg.chip.area

    ref_compute = report.total_instructions * area
    if cfg.comm_costs_enabled:
        ref_total = ref_compute + (report.sched_msg_count + report.mem_access_count) * math.sqrt(area)
    else:
        ref_total = ref_compute
    ref_makespan = report.empirical_speedup * report.makespan

    energydown = ref_compute / report.compute_energy
    powerdown = (ref_total / ref_makespan) / (report.total_energy / report.makespan)
    return ModelDeviation(
        speedup_measured=report.empirical_speedup,
        speedup_model=model.speedup,
        speedup_deviation=abs(report.empirical_speedup / model.speedup - 1.0),
        energydown_measured=energydown,
        energydown_model=model.energydown,
        energydown_deviation=abs(energydown / model.energydown - 1.0),
        powerdown_measured=powerdown,
        powerdown_model=model.powerdown,
        powerdown_deviation=abs(powerdown / model.powerdown - 1.0),
    )


def report_as_dict(report: SimReport, *, include_events: bool = False) -> dict:
    """Plain-dict form of a report, for JSON output."""
    out = {
        "m": report.m,
        "makespan": report.makespan,
        "total_instructions": report.total_instructions,
        "compute_energy": report.compute_energy,
        "sched_msg_energy_total": report.sched_msg_energy_total,
        "mem_msg_energy_total": report.mem_msg_energy_total,
        "avg_power": report.avg_power,
        "per_core_busy_time": list(report.per_core_busy_time),
        "utilization": list(report.utilization),
        "sched_msg_count": report.sched_msg_count,
        "mem_access_count": report.mem_access_count,
        "mem_conflict_stalls": report.mem_conflict_stalls,
        "empirical_speedup": report.empirical_speedup,
    }
    if include_events:
        out["events"] = [
            {"time": e.time, "kind": e.kind, "task": e.task, "detail": e.detail}
            for e in report.events
        ]
    return out
