"""Word-parallel bitset primitives.

Ranges are stored as Python ints used as bitmasks over element indices
(bit i set = element i present).  Bulk subset tests and symmetric-difference
counts are routed through numpy uint64 matrices, which is what makes the
greedy packings and verifiers fast enough at a few hundred points.
"""

import numpy as np

_WORD = 64


def mask_from_indices(indices):
    mask = 0
    for i in indices:
        mask |= 1 << i
    return mask


def indices_from_mask(mask):
    out = []
    while mask:
        low = mask & -mask
        out.append(low.bit_length() - 1)
        mask ^= low
    return tuple(out)


def popcount(mask):
    return mask.bit_count()


def symdiff_size(a, b):
    return (a ^ b).bit_count()


def words_needed(n):
    return max(1, (n + _WORD - 1) // _WORD)


def pack_masks(masks, n):
    """Pack int masks into an (len(masks), words) uint64 array."""
    w = words_needed(n)
    out = np.zeros((len(masks), w), dtype=np.uint64)
    full = (1 << _WORD) - 1
    for row, mask in enumerate(masks):
        for k in range(w):
            out[row, k] = (mask >> (k * _WORD)) & full
    return out


def subset_matrix(packed_small, packed_big):
    """Boolean matrix S[i, j] = small_i is a subset of big_j."""
    if packed_small.shape[0] == 0 or packed_big.shape[0] == 0:
        return np.zeros((packed_small.shape[0], packed_big.shape[0]), dtype=bool)
    ok = np.ones((packed_small.shape[0], packed_big.shape[0]), dtype=bool)
    for k in range(packed_small.shape[1]):
        col = packed_small[:, k][:, None]
        ok &= (col & packed_big[:, k][None, :]) == col
    return ok


def subset_row(packed_one, packed_many):
    """Boolean vector v[j] = one is a subset of many_j."""
    ok = np.ones(packed_many.shape[0], dtype=bool)
    for k in range(packed_one.shape[0]):
        ok &= (packed_one[k] & packed_many[:, k]) == packed_one[k]
    return ok


def symdiff_counts(packed_one, packed_many):
    """Integer vector v[j] = |one symdiff many_j|."""
    if packed_many.shape[0] == 0:
        return np.zeros(0, dtype=np.int64)
    acc = np.zeros(packed_many.shape[0], dtype=np.int64)
    for k in range(packed_one.shape[0]):
        acc += np.bitwise_count(packed_many[:, k] ^ packed_one[k]).astype(np.int64)
    return acc
