"""Input format, report rendering and command-line entry point."""

from .parser import InputError, ParseError, SemanticError, load, parse_its, print_its

__all__ = ["InputError", "ParseError", "SemanticError", "load", "parse_its", "print_its"]
