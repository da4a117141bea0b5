# errors.py
"""
Exception hierarchy shared by every locsol module
"""


class LocsolError(Exception):
    """Base class for all errors raised by the toolkit"""


class DomainError(LocsolError, ValueError):
    """An operation was called outside its mathematical domain"""


class CapabilityError(LocsolError):
    """The requested computation is beyond what the enumeration mode supports"""


class CheckpointError(LocsolError):
    """A checkpoint file could not be parsed or does not match the run"""


class ResourceError(LocsolError):
    """A configured resource bound was exceeded"""

    def __init__(self, message: str, checkpoint_path: str = None):
        super().__init__(message)
        self.checkpoint_path = checkpoint_path


class UsageError(LocsolError):
    """Invalid command-line usage"""


class CertificateError(LocsolError):
    """An internal certificate or linear system check failed"""
