"""yulkit: parse, check, run, transform, and validate Yul code."""

__version__ = "0.1.0"
