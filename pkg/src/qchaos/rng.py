"""Counter-based random streams.

Every stochastic routine in the package draws from a Philox generator keyed
by (seed, stream): Philox is counter-based, so a stream's output is a pure
function of its key and position.  Parallel workers own disjoint stream ids
and results merge independently of scheduling.
"""

from __future__ import annotations

import numpy as np

_MASK64 = (1 << 64) - 1


def stream_generator(seed: int, stream: int = 0) -> np.random.Generator:
    """A Generator for the given (seed, stream) key; same key, same output."""
    if not isinstance(seed, int) or not isinstance(stream, int):
        raise ValueError("seed and stream must be integers")
    key = ((seed & _MASK64) << 64) | (stream & _MASK64)
    return np.random.Generator(np.random.Philox(key=key))
