"""QES sector of the Hermitian and PT-symmetric sextic oscillators."""

__version__ = "0.1.0"
