"""Runtime-bound inference for integer programs via twn-loop closed forms."""

__version__ = "0.1.0"
