"""Search-based unit test generation for the MiniDyn language."""

__version__ = "0.1.0"
