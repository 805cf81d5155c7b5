"""Exception hierarchy shared by all qrflab modules."""


class QrflabError(Exception):
    """Base class for all qrflab errors."""


class StructuralError(QrflabError):
    """Inputs are malformed or belong to incompatible spaces or groups."""


class DomainError(QrflabError):
    """Inputs are well-formed but outside the operation's domain."""


class NotAlignableError(DomainError):
    """A state was required to be alignable and is not."""


class UndefinedConditionalError(DomainError):
    """Conditional state requested for a state with no relational weight."""


class UnsupportedGroupError(DomainError):
    """Operation is only defined for a restricted class of groups."""


class DimensionCapError(QrflabError):
    """Requested computation exceeds the configured dimension cap."""
