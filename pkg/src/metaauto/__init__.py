"""Meta-automatic sequences: nested selector recurrences, base-4 automata,
uniform morphisms and factor-complexity verification."""

__version__ = "0.1.0"
