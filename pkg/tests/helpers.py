import os

PROPERTY_SCALE = float(os.getenv("CHOWGLUE_PROPERTY_SCALE", "1"))


def cases(count: int) -> int:
    """Number of randomized cases: count scaled by CHOWGLUE_PROPERTY_SCALE, at least one."""
    return max(1, int(count * PROPERTY_SCALE))
