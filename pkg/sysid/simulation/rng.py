import numpy as np

__all__ = ["cell_stream", "stream"]

_MASK = (1 << 64) - 1


def stream(seed: int, *keys: int) -> np.random.Generator:
    """
    Counter-based generator for `seed`, optionally split by integer keys

    The keys are mixed into a SeedSequence feeding a Philox bit generator, so streams for different keys are
    independent and a stream only depends on its own (seed, keys), never on how many other streams were drawn.

    Examples:
        >>> stream(7, 100, 0).standard_normal() == stream(7, 100, 0).standard_normal()
        True
    """
    entropy = [int(seed) & _MASK, *(int(key) & _MASK for key in keys)]
    return np.random.Generator(np.random.Philox(np.random.SeedSequence(entropy)))


def cell_stream(seed: int, T: int, trial: int) -> np.random.Generator:
    """Stream of one Monte Carlo cell, keyed by the horizon value (not its index in the grid) and the trial"""
    return stream(seed, T, trial)
