"""Action of the extended modular group and reduction to its fundamental domain.

The group is generated by ``T: z -> z+1``, ``S: z -> -1/z`` and the reflection
``R: z -> -conj(z)``.  Its fundamental domain is
``D = {|z| > 1, 0 < Re z < 1/2}``; :func:`reduce` maps any point of the upper
half plane into the closure of ``D`` and records the generators used.
"""

from __future__ import annotations

import math
from typing import Sequence

from ._numerics import InvalidDomain, NotConverged

TOL = 1e-12
MAX_STEPS = 10_000

GENERATORS = ("T+", "T-", "S", "R")


def apply_op(op: str, z: complex) -> complex:
    if op == "T+":
        return z + 1
    if op == "T-":
        return z - 1
    if op == "S":
        return -1 / z
    if op == "R":
        return complex(-z.real, z.imag)
    raise ValueError(f"unknown generator {op!r}")


def apply_word(word: Sequence[str], z: complex) -> complex:
    """Replay a generator word (leftmost applied first)."""
    z = complex(z)
    for op in word:
        z = apply_op(op, z)
    return z


def _check(z):
    z = complex(z)
    if not (z.imag > 0 and math.isfinite(z.real) and math.isfinite(z.imag)):
        raise InvalidDomain(f"{z} is not in the upper half plane")
    return z


def reduce(z: complex) -> tuple[complex, tuple[str, ...]]:
    """Map ``z`` to the closed fundamental domain.

    Repeats {translate Re z into (-1/2, 1/2]; apply S if |z| < 1} until stable,
    then reflects if Re z < 0.  Points with ``|z| = 1`` (within ``TOL``) count as
    reduced.  Returns the reduced point and the generator word.
    """
    z = _check(z)
    word: list[str] = []
    for _ in range(MAX_STEPS):
        k = math.floor(0.5 - z.real)  # z.real + k in (-1/2, 1/2]
        if k:
            op = "T+" if k > 0 else "T-"
            for _ in range(abs(k)):
                z = apply_op(op, z)
            word.extend([op] * abs(k))
        if abs(z) ** 2 < 1 - TOL:
            z = apply_op("S", z)
            word.append("S")
            continue
        break
    else:
        raise NotConverged(f"reduction did not stabilise after {MAX_STEPS} steps")
    if z.real < 0:
        z = apply_op("R", z)
        word.append("R")
    return z, tuple(word)


def contains(z: complex, closed: bool = True) -> bool:
    """Membership in the fundamental domain (open) or its closure."""
    z = _check(z)
    x, r2 = z.real, abs(z) ** 2
    if closed:
        return r2 >= 1 - TOL and -TOL <= x <= 0.5 + TOL
    return r2 > 1 + TOL and TOL < x < 0.5 - TOL
