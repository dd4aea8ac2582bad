"""
Seed streams.

All randomness goes through counter-based Philox generators keyed by a root
seed and a tuple of integer keys, so that a draw depends only on what it is
(stream, block, replicate...) and never on the order or the process in which
it is computed.
"""

import numpy as np

SeedLike = int | np.random.Generator

# Stream tags
STREAM_BOOTSTRAP = 0
STREAM_TAU_QUANTILES = 1
STREAM_TAU_POWER = 2
STREAM_PREDICTOR = 3
STREAM_NOISE = 4
STREAM_DESIGN = 5
STREAM_REPLICATE = 6


def make_generator(seed: int, *keys: int) -> np.random.Generator:
    """Return the Philox generator for the stream `(seed, *keys)`."""
    sequence = np.random.SeedSequence([int(seed), *(int(k) for k in keys)])
    return np.random.Generator(np.random.Philox(sequence))


def derive_seed(seed: int, *keys: int) -> int:
    """Derive a child integer seed for the stream `(seed, *keys)`."""
    sequence = np.random.SeedSequence([int(seed), *(int(k) for k in keys)])
    return int(sequence.generate_state(1, dtype=np.uint32)[0])


def as_generator(seed: SeedLike, *keys: int) -> np.random.Generator:
    """
    Accept either an integer seed or a ready generator. Keys are only
    applied to integer seeds.
    """
    if isinstance(seed, np.random.Generator):
        return seed
    return make_generator(seed, *keys)


def block_standard_normal(
    seed: int,
    stream: int,
    size: int,
    dim: int,
    block_size: int,
) -> np.ndarray:
    """
    Draw a `size x dim` standard normal matrix whose rows are produced in
    blocks of `block_size`, block `k` coming from the stream `(seed, stream, k)`.
    """
    blocks = []
    for k, start in enumerate(range(0, size, block_size)):
        rows = min(block_size, size - start)
        blocks.append(make_generator(seed, stream, k).standard_normal((rows, dim)))
    if not blocks:
        return np.zeros((0, dim))
    return np.vstack(blocks)
