from .compare import bit_equal, max_abs_deviation

__all__ = ["bit_equal", "max_abs_deviation"]
