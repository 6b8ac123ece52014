from typing import List, Tuple, Union

import mpmath
import numpy as np

SEED: int = 23

Real = Union[int, float, mpmath.mpf]


def configure_backends(seed: int = SEED, digits: int = 30) -> np.random.Generator:
    """
    Configure global numeric state for reproducibility.

    This function sets the mpmath working precision used by interactive callers
    and returns a seeded numpy generator for any sampling (random hyperbola
    pairs, random π-additivity intervals). Library code never relies on the
    global mpmath precision; it opens its own `mpmath.workdps` context.

    Args:
        seed (int): The random seed for the returned generator. Defaults to 23.
        digits (int): Decimal digits for the global mpmath context. Defaults to 30.

    Returns:
        np.random.Generator: A generator seeded with `seed`.
    """
    mpmath.mp.dps = digits
    return np.random.default_rng(seed)


def to_fixed(value: Real, decimals: int) -> str:
    """
    Round a real to a fixed number of decimals and render it exactly.

    Rounding is done on the integer `value * 10**decimals` (half away from zero),
    so the result does not depend on mpmath's significant-digit formatting.

    Args:
        value (Real): The number to render.
        decimals (int): Number of digits after the decimal point.

    Returns:
        str: The rounded decimal string, e.g. "0.2614972128".
    """
    with mpmath.workdps(decimals + 20):
        scaled = mpmath.mpf(value) * mpmath.mpf(10) ** decimals
        q = int(mpmath.floor(abs(scaled) + mpmath.mpf("0.5")))
        sign = "-" if (scaled < 0 and q > 0) else ""
    if decimals == 0:
        return f"{sign}{q}"
    digits = str(q).rjust(decimals + 1, "0")
    return f"{sign}{digits[:-decimals]}.{digits[-decimals:]}"


def mp_string(value: Real, digits: int) -> str:
    """Render `value` with `digits` significant digits (for JSON exports)."""
    with mpmath.workdps(digits + 5):
        return mpmath.nstr(mpmath.mpf(value), digits, strip_zeros=False)


def split_range(start: int, end: int, shard_size: int) -> List[Tuple[int, int]]:
    """
    Split the inclusive integer range [start, end] into half-open shards.

    Shards are aligned to multiples of `shard_size` (the first shard may be
    short), so two scans over overlapping ranges share shard boundaries and
    their shard reports can be merged.

    Args:
        start (int): First integer of the range.
        end (int): Last integer of the range (inclusive).
        shard_size (int): Nominal number of integers per shard.

    Returns:
        List[Tuple[int, int]]: Consecutive (lo, hi) pairs covering [start, end + 1).
    """
    assert shard_size >= 1, f"Shard size must be positive, got {shard_size}"
    shards: List[Tuple[int, int]] = []
    lo = start
    while lo <= end:
        hi = min(end + 1, (lo // shard_size + 1) * shard_size)
        shards.append((lo, hi))
        lo = hi
    return shards


def parse_grid(grid: str) -> Tuple[float, float, int]:
    """
    Parse a log-spaced grid specification of the form "LO:HI:STEPS".

    Args:
        grid (str): The grid string, e.g. "1e3:1e8:21".

    Returns:
        Tuple[float, float, int]: The lower end, upper end and number of points.

    Raises:
        ValueError: If the string is malformed or the grid is empty.
    """
    parts = grid.split(":")
    if len(parts) != 3:
        raise ValueError(f"Grid must look like LO:HI:STEPS, got {grid!r}")
    lo, hi, steps = float(parts[0]), float(parts[1]), int(parts[2])
    if not (0 < lo <= hi) or steps < 1:
        raise ValueError(f"Grid {grid!r} is empty or not positive")
    return lo, hi, steps
