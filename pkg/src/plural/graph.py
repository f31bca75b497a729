"""Task graphs for the Plural programming model.

Work is organized as a DAG of tasks that communicate only through shared
variables in shared memory.  A task is singular (one instance), duplicable
(d independent concurrent instances sharing one code entry point), or a
control task (branch, merge, or conditional point, executed by the scheduler
with no code of its own).  Tasks carry no arguments and no results, only a
declared footprint of shared variables they read and write.

Shared-memory access follows the PRAM CREW discipline: concurrent tasks may
all read a variable, but a variable written by a task must not be touched by
any task concurrent with it.  ``check_crew`` reports every violation of that
rule; two tasks are concurrent when neither precedes the other through the
edge relation.

Duplicable tasks expand into one instance task per index.  A shared-variable
name may embed ``#`` as an instance-number placeholder ("v[#]" becomes
"v[0]", "v[1]", ...), which is how a duplicable task declares instance-
disjoint writes; a plain written name makes its own instances conflict with
each other.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from types import MappingProxyType
from typing import Iterable, Iterator, Mapping

from .errors import CycleError, GraphStructureError, ValidationError

__all__ = [
    "TaskKind",
    "ControlKind",
    "Task",
    "TaskGraph",
    "CrewViolation",
    "WRITE_WRITE",
    "READ_WRITE",
    "validate_dag",
    "concurrent_pairs",
    "check_crew",
    "expand_duplicables",
]

# Separator between a duplicable task id and the instance number in expanded ids.
INSTANCE_SEP = "#"
# Placeholder in shared-variable names replaced by the instance number.
INSTANCE_PLACEHOLDER = "#"

WRITE_WRITE = "write-write"
READ_WRITE = "read-write"


class TaskKind(Enum):
    SINGULAR = "singular"
    DUPLICABLE = "duplicable"
    CONTROL = "control"


class ControlKind(Enum):
    BRANCH = "branch"
    MERGE = "merge"
    CONDITIONAL = "conditional"


@dataclass(frozen=True)
class Task:
    """One node of a task graph.

    ``instruction_count`` is the work of a single instance.  For duplicable
    tasks ``instances`` is the duplication count d; expanded instances carry
    their index in ``instance_number``.  Control tasks have no entry point,
    no instructions, and no shared-variable footprint.
    """

    id: str
    kind: TaskKind = TaskKind.SINGULAR
    instances: int = 1
    control_kind: ControlKind | None = None
    entry_point: str | None = None
    instruction_count: int = 0
    read_set: frozenset[str] = frozenset()
    write_set: frozenset[str] = frozenset()
    instance_number: int | None = None

    def __post_init__(self) -> None:
        if not isinstance(self.id, str) or not self.id:
            raise ValidationError(f"task id must be a non-empty string, got {self.id!r}")
        object.__setattr__(self, "read_set", frozenset(self.read_set))
        object.__setattr__(self, "write_set", frozenset(self.write_set))
        if not isinstance(self.instruction_count, int) or self.instruction_count < 0:
            raise ValidationError(
                f"task {self.id!r}: instruction_count must be a nonnegative "
                f"integer, got {self.instruction_count!r}"
            )
        if self.kind is TaskKind.CONTROL:
            if self.control_kind is None:
                raise ValidationError(
                    f"task {self.id!r}: control tasks need a control_kind"
                )
            if self.entry_point is not None:
                raise ValidationError(
                    f"task {self.id!r}: control tasks carry no entry point"
                )
            if self.instruction_count != 0:
                raise ValidationError(
                    f"task {self.id!r}: control tasks execute no instructions"
                )
            if self.read_set or self.write_set:
                raise ValidationError(
                    f"task {self.id!r}: control tasks access no shared variables"
                )
            if self.instances != 1:
                raise ValidationError(f"task {self.id!r}: control tasks are not duplicable")
        else:
            if self.control_kind is not None:
                raise ValidationError(
                    f"task {self.id!r}: control_kind is only valid on control tasks"
                )
            if self.kind is TaskKind.DUPLICABLE:
                if not isinstance(self.instances, int) or self.instances < 1:
                    raise ValidationError(
                        f"task {self.id!r}: duplicable instance count must be a "
                        f"positive integer, got {self.instances!r}"
                    )
            elif self.instances != 1:
                raise ValidationError(
                    f"task {self.id!r}: only duplicable tasks have multiple instances"
                )
            if self.entry_point is None:
                # The entry point is an opaque code label; default it to the id.
                object.__setattr__(self, "entry_point", self.id)


class TaskGraph:
    """An immutable precedence graph over tasks.

    Edges are (predecessor id, successor id) pairs; every endpoint must name
    a task in the graph.  Acyclicity is checked by ``validate_dag``, not
    assumed at construction.
    """

    def __init__(self, tasks: Iterable[Task], edges: Iterable[tuple[str, str]] = ()):
        task_map: dict[str, Task] = {}
        for task in tasks:
            if task.id in task_map:
                raise GraphStructureError(f"duplicate task id {task.id!r}")
            task_map[task.id] = task
        edge_set = frozenset((str(p), str(s)) for p, s in edges)
        for pred, succ in sorted(edge_set):
            for endpoint in (pred, succ):
                if endpoint not in task_map:
                    raise GraphStructureError(
                        f"edge ({pred!r}, {succ!r}) references unknown task id {endpoint!r}"
                    )
        self._tasks = task_map
        self._edges = edge_set

    @property
    def tasks(self) -> Mapping[str, Task]:
        return MappingProxyType(self._tasks)

    @property
    def edges(self) -> frozenset[tuple[str, str]]:
        return self._edges

    def successors(self, task_id: str) -> list[str]:
        return sorted(s for p, s in self._edges if p == task_id)

    def predecessors(self, task_id: str) -> list[str]:
        return sorted(p for p, s in self._edges if s == task_id)

    def __iter__(self) -> Iterator[Task]:
        return iter(self._tasks.values())

    def __len__(self) -> int:
        return len(self._tasks)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, TaskGraph):
            return NotImplemented
        return self._tasks == other._tasks and self._edges == other._edges

    def __repr__(self) -> str:
        return f"TaskGraph({len(self._tasks)} tasks, {len(self._edges)} edges)"


@dataclass(frozen=True)
class CrewViolation:
    """A shared variable accessed against the CREW rule by two concurrent tasks."""

    task_a: str
    task_b: str
    variable: str
    kind: str  # WRITE_WRITE or READ_WRITE

    def __str__(self) -> str:
        return (
            f"{self.kind} conflict on {self.variable!r} between "
            f"{self.task_a!r} and {self.task_b!r}"
        )


def _successor_map(g: TaskGraph) -> dict[str, list[str]]:
    succ: dict[str, list[str]] = {tid: [] for tid in g.tasks}
    for pred, s in g.edges:
        succ[pred].append(s)
    for lst in succ.values():
        lst.sort()
    return succ


def validate_dag(g: TaskGraph) -> list[str] | None:
    """Return None if the graph is acyclic, else one witness cycle.

    The witness is a task-id sequence along edges with the starting id
    repeated at the end, e.g. ``["A", "B", "A"]``.
    """
    succ = _successor_map(g)
    WHITE, GRAY, BLACK = 0, 1, 2
    color = dict.fromkeys(g.tasks, WHITE)
    for root in sorted(g.tasks):
        if color[root] != WHITE:
            continue
        color[root] = GRAY
        path = [root]
        stack = [(root, iter(succ[root]))]
        while stack:
            node, neighbors = stack[-1]
            nxt = next(neighbors, None)
            if nxt is None:
                color[node] = BLACK
                path.pop()
                stack.pop()
                continue
            if color[nxt] == GRAY:
                return path[path.index(nxt) :] + [nxt]
            if color[nxt] == WHITE:
                color[nxt] = GRAY
                path.append(nxt)
                stack.append((nxt, iter(succ[nxt])))
    return None


def _descendants(g: TaskGraph) -> dict[str, set[str]]:
    # Transitive closure by accumulating over a reverse topological order.
    succ = _successor_map(g)
    indegree = dict.fromkeys(g.tasks, 0)
    for _, s in g.edges:
        indegree[s] += 1
    order: list[str] = [tid for tid in sorted(g.tasks) if indegree[tid] == 0]
    for tid in order:
        for s in succ[tid]:
            indegree[s] -= 1
            if indegree[s] == 0:
                order.append(s)
    desc: dict[str, set[str]] = {tid: set() for tid in g.tasks}
    for tid in reversed(order):
        for s in succ[tid]:
            desc[tid].add(s)
            desc[tid] |= desc[s]
    return desc


def concurrent_pairs(g: TaskGraph) -> set[tuple[str, str]]:
    """All unordered pairs of tasks with no precedence path in either direction.

    Pairs are returned as id tuples in ascending order.  The graph must be a
    DAG; instances of a duplicable task are mutually concurrent once the
    graph has been expanded.
    """
    cycle = validate_dag(g)
    if cycle is not None:
        raise CycleError(cycle)
    desc = _descendants(g)
    ids = sorted(g.tasks)
    pairs: set[tuple[str, str]] = set()
    for i, a in enumerate(ids):
        for b in ids[i + 1 :]:
            if b not in desc[a] and a not in desc[b]:
                pairs.add((a, b))
    return pairs


def check_crew(g: TaskGraph) -> list[CrewViolation]:
    """Report every CREW violation among concurrent tasks.

    The check runs on the duplicable-expanded graph (expansion is a no-op on
    already-expanded input), so instances of a duplicable task that write a
    shared variable without instance-disjoint naming conflict with each
    other.  A variable written by both tasks of a pair is one write-write
    violation; written by one and read by the other, a read-write violation.
    Concurrent reads are legal and never reported.
    """
    expanded = expand_duplicables(g)
    violations: list[CrewViolation] = []
    for a, b in sorted(concurrent_pairs(expanded)):
        task_a = expanded.tasks[a]
        task_b = expanded.tasks[b]
        both_write = task_a.write_set & task_b.write_set
        read_write = (
            (task_a.write_set & task_b.read_set) | (task_a.read_set & task_b.write_set)
        ) - both_write
        for var in sorted(both_write):
            violations.append(CrewViolation(a, b, var, WRITE_WRITE))
        for var in sorted(read_write):
            violations.append(CrewViolation(a, b, var, READ_WRITE))
    return violations


def instance_id(task_id: str, number: int) -> str:
    """Id of one expanded instance of a duplicable task."""
    return f"{task_id}{INSTANCE_SEP}{number}"


def _instance_vars(names: frozenset[str], number: int) -> frozenset[str]:
    return frozenset(name.replace(INSTANCE_PLACEHOLDER, str(number)) for name in names)


def expand_duplicables(g: TaskGraph) -> TaskGraph:
    """Replace each duplicable task by its d instance tasks.

    Instances share the original entry point, carry instance numbers 0..d-1,
    inherit the per-instance instruction count, substitute the instance
    number into ``#`` placeholders in the shared-variable footprint, and each
    inherit every incoming and outgoing edge of the original.  Expansion is
    idempotent and preserves acyclicity.
    """
    replacements: dict[str, list[str]] = {}
    new_tasks: list[Task] = []
    for tid in sorted(g.tasks):
        task = g.tasks[tid]
        if task.kind is not TaskKind.DUPLICABLE:
            new_tasks.append(task)
            continue
        members = []
        for k in range(task.instances):
            members.append(instance_id(tid, k))
            new_tasks.append(
                Task(
                    id=instance_id(tid, k),
                    kind=TaskKind.SINGULAR,
                    entry_point=task.entry_point,
                    instruction_count=task.instruction_count,
                    read_set=_instance_vars(task.read_set, k),
                    write_set=_instance_vars(task.write_set, k),
                    instance_number=k,
                )
            )
        replacements[tid] = members
    new_edges: set[tuple[str, str]] = set()
    for pred, succ in g.edges:
        for p in replacements.get(pred, [pred]):
            for s in replacements.get(succ, [succ]):
                new_edges.add((p, s))
    return TaskGraph(new_tasks, new_edges)
