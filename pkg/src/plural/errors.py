"""Exception types shared across the package."""


class PluralError(Exception):
    """Base class for all errors raised by this package."""


class ValidationError(PluralError, ValueError):
    """A domain object was constructed with an invalid field value."""


class DomainError(PluralError, ValueError):
    """An operation was called with an argument outside its domain."""


class GraphStructureError(PluralError, ValueError):
    """A task graph is structurally broken (duplicate ids, dangling edges)."""


class CycleError(PluralError, ValueError):
    """A task graph contains a precedence cycle.

    The offending cycle is available as ``.cycle``, a task-id sequence whose
    first id is repeated at the end.
    """

    def __init__(self, cycle):
        self.cycle = list(cycle)
        super().__init__("task graph contains a cycle: " + " -> ".join(self.cycle))


class GraphFormatError(PluralError, ValueError):
    """A task-graph document does not match the expected schema."""


class SimConfigError(PluralError, ValueError):
    """A simulation was configured inconsistently with its task graph."""


class DegenerateWorkloadError(PluralError, ValueError):
    """The executed path of a task graph contains no instructions to run."""
