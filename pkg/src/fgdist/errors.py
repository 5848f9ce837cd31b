"""Shared exception types."""

__all__ = ["GuardExceeded"]


class GuardExceeded(RuntimeError):
    """Raised when a request would exceed a size guard on exact dense or
    exhaustive-enumeration work (mapped to exit code 3 by the CLI)."""
