"""Black-box testing of quantum programs with sampled swap tests."""

__version__ = "0.1.0"
