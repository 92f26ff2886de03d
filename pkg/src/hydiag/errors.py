"""Exception types shared across the toolkit."""


class ModelFormatError(ValueError):
    """An input file does not conform to the documented schema."""


class TAValidationError(ValueError):
    """A timed automaton violates a structural fault axiom.

    ``rule`` names the violated axiom (D1, D2, D3, InitNonFaulty, ...).
    """

    def __init__(self, rule, message):
        super().__init__(f"{rule}: {message}")
        self.rule = rule
        self.message = message


class PartitionError(TAValidationError):
    """Observation predicates fail to partition the external valuation space.

    ``witness`` maps each external clock to a value where the cells overlap
    or leave a gap.
    """

    def __init__(self, message, witness):
        super().__init__("ObsPartition", message)
        self.witness = witness


class CapExceeded(RuntimeError):
    """A configured size cap was exceeded during construction."""

    def __init__(self, what, count, cap):
        super().__init__(f"{what}: {count} exceeds cap {cap}")
        self.what = what
        self.count = count
        self.cap = cap


class NoConsistentExecution(RuntimeError):
    """An observed event is inconsistent with every execution of the model.

    Signals a modeling gap or an unmodeled fault; ``index`` is the position
    of the offending event in the stream (0 = the initial observation).
    """

    def __init__(self, message, index=None):
        super().__init__(message)
        self.index = index
