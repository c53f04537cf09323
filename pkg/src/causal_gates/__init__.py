"""Two-qubit laboratory for time-order (absoluteness of cause) and
no-signaling checks of local operations, including anti-unitary gates."""

__version__ = "0.1.0"
