"""Exception hierarchy shared by every layer of the workbench."""


class PPBassError(Exception):
    """Base class for all errors raised by ppbass."""


class ParseError(PPBassError):
    """Malformed or invalid specification text.

    ``line`` and ``column`` are 1-based positions when they are known.
    """

    def __init__(self, message, line=None, column=None, path=None):
        self.message = message
        self.line = line
        self.column = column
        self.path = path
        where = []
        if line is not None:
            where.append(f"line {line}")
        if column is not None:
            where.append(f"column {column}")
        if path:
            where.append(f"at {path}")
        text = message if not where else f"{message} ({', '.join(where)})"
        super().__init__(text)


class AxiomViolation(ParseError):
    """A ring table fails one of the ring laws; ``witness`` names the elements."""

    def __init__(self, law, witness):
        self.law = law
        self.witness = tuple(witness)
        super().__init__(f"ring axiom violated: {law} fails for {self.witness}")


class CapExceeded(PPBassError):
    """An enumeration or search would exceed its configured bound."""

    def __init__(self, what, requested, cap):
        self.what = what
        self.requested = requested
        self.cap = cap
        super().__init__(f"{what}: {requested} exceeds cap {cap}")


class PreconditionError(PPBassError, ValueError):
    """An operation was called outside its documented domain."""


class InternalError(PPBassError, AssertionError):
    """A consistency assertion failed; this indicates a bug."""
