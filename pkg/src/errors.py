# src/errors.py
"""
Exception hierarchy shared by every layer of the pipeline.

The CLI maps any OcSynthError to exit code 3; everything else is a bug.
"""


class OcSynthError(Exception):
    """Base class for all errors raised on purpose by ocsynth."""
    pass


class SpecSyntaxError(OcSynthError):
    """Spec-language text does not match the grammar."""

    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        self.line = line
        self.column = column
        where = f" at line {line}, column {column}" if line is not None else ""
        super().__init__(f"{message}{where}")


class SpecValidationError(OcSynthError):
    """Parsed spec references something undeclared or out of range."""
    pass


class SignatureError(OcSynthError):
    """Atom uses a symbol the structure does not interpret."""
    pass


class MalformedElementError(OcSynthError):
    """Literal or element value does not belong to the structure."""
    pass


class ResourceCapError(OcSynthError):
    """A configured arity / state / position cap was exceeded."""
    pass


class WitnessError(OcSynthError):
    """Witness extension asked for a type the context cannot realize."""
    pass


class FixpointError(OcSynthError):
    """Relation variable misuse or fixpoint left where none is allowed."""
    pass


class UnsupportedFeatureError(OcSynthError):
    """Requested output format cannot express the formula."""
    pass


class MachineFormatError(OcSynthError):
    """Machine or PropSpec file is malformed or not total."""
    pass


class DecodeError(OcSynthError):
    """Machine produced a valuation outside the decode metadata."""
    pass


class TraceError(OcSynthError):
    """Trace widths, literals or memory threading are inconsistent."""
    pass


class ConfigError(OcSynthError):
    """Run configuration failed validation."""
    pass
