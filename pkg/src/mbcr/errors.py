"""Exception hierarchy shared across the package."""


class MbcrError(Exception):
    """Base class for all package errors."""


class FieldMismatchError(MbcrError):
    """Operand is not an element of the field it was used with."""


class ParameterError(MbcrError):
    """Invalid code parameters (n, k, d, r, field)."""


class InterpolationError(MbcrError):
    """Bad interpolation input (wrong point count or duplicate x)."""


class CodecError(MbcrError):
    """Invalid encode/reconstruct input (lengths, ids, arity)."""


class CorruptShareError(MbcrError):
    """Share content failed an internal consistency cross-check."""


class ProtocolError(MbcrError):
    """Repair-protocol contract violation (plan shape, phase order)."""


class ShareFormatError(MbcrError):
    """Malformed or inconsistent share file."""
