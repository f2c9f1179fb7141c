"""Error kinds shared by every module. The CLI maps them to exit codes."""


class DigitDiophError(Exception):
    """Base class."""


class DomainError(DigitDiophError, ValueError):
    """An input lies outside the mathematical domain (bad base, digit, n <= 0)."""


class HypothesisError(DigitDiophError, ValueError):
    """A theorem or lemma hypothesis fails for the requested operation."""


class ResourceError(DigitDiophError, RuntimeError):
    """A configured enumeration, residue or bit budget would be exceeded."""


class CapabilityError(DigitDiophError, TypeError):
    """An exact operation was requested on a representation that cannot support it."""
