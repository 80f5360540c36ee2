"""Multi-kernel (T2/T3) polar codes with successive-cancellation decoding."""

__version__ = "0.1.0"
