"""Straight-line transcriptions of the example sequences and sets.

Nothing here imports the library; these are the independent references the
tests compare against.
"""

from math import isqrt

import numpy as np


def is_square(k):
    return isqrt(k) ** 2 == k


def lambda_squares(n):
    """k on perfect squares, 0 elsewhere."""
    return [k if is_square(k) else 0 for k in range(1, n + 1)]


def alternating(n):
    return [1 if k % 2 else 0 for k in range(1, n + 1)]


def zero_one_blocks(n):
    """100^i zeros, then 10^i ones, for i = 1, 2, ..."""
    out, i = [], 1
    while len(out) < n:
        out += [0] * 100 ** i + [1] * 10 ** i
        i += 1
    return out[:n]


def five_parity(n):
    """5 on squares, otherwise 1 at odd and 0 at even indices."""
    return [5 if is_square(k) else k % 2 for k in range(1, n + 1)]


def alternating_blocks(n):
    """100^i terms 1, 0, 1, 0, ..., then 10^i ones, for i = 1, 2, ..."""
    out, i = [], 1
    while len(out) < n:
        out += [1, 0] * (100 ** i // 2) + [1] * 10 ** i
        i += 1
    return out[:n]


def boundaries(count):
    """b_i = sum over j <= i of 100^j + 10^j."""
    out, b = [], 0
    for j in range(1, count + 1):
        b += 100 ** j + 10 ** j
        out.append(b)
    return out


def ones_phase_evens(n):
    """Members of the union of (b_i - 10^i, b_i] with the even numbers, up to n."""
    out = []
    for i, b in enumerate(boundaries(12), start=1):
        for k in range(b - 10 ** i + 1, b + 1):
            if k > n:
                return out
            if k % 2 == 0:
                out.append(k)
    return out


def membership(members, n):
    """Boolean array over 1..n (index 0 unused)."""
    flags = np.zeros(n + 1, dtype=bool)
    flags[[m for m in members if m <= n]] = True
    return flags


def prefix_counts(flags):
    """prefix_counts(flags)[n] = number of members <= n."""
    out = np.cumsum(flags)
    out[0] = 0
    return out
