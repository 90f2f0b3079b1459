"""Seeded, replayable randomness.

All sampling in the package draws from a Philox4x64 counter-based generator
keyed by the user-supplied seed.  Shot j advances the counter by j * SHOT_STRIDE
blocks, so any shot can be regenerated independently of the others (and in
parallel) from (seed, shot) alone.
"""

import numpy as np

from .errors import ParameterError

SHOT_STRIDE = 1 << 20


def shot_generator(seed: int, shot: int = 0) -> np.random.Generator:
    """Generator for one shot; identical (seed, shot) gives an identical stream."""
    if seed is None:
        raise ParameterError("sample mode requires an explicit seed")
    bg = np.random.Philox(key=np.uint64(seed))
    if shot:
        bg.advance(shot * SHOT_STRIDE)
    return np.random.Generator(bg)
