import itertools

import numpy as np
import pytest

# worked example: a 12-element array whose 2d-Min heap has 13 nodes and 7 colored siblings
WORKED_A = [2, 5, 3, 4, 4, 4, 2, 1, 1, 2, 4, 3]
WORKED_D = "((((()(())((())))))()(()))"
WORKED_V = "11010110"
WORKED_PRE_RANK = [0, 0, 0, 0, 0, 0, 1, 1, 1, 2, 3, 3, 3, 3, 4, 5, 6, 7, 8, 9, 9, 10, 10, 10,
                 11, 12]
WORKED_PRE_SELECT = [1, 7, 10, 11, 15, 16, 17, 18, 19, 20, 22, 25, 26]
WORKED_NODE_V = [9, 8, 7, 3, 6, 5, 12]


def small_arrays(max_len, alphabet=(1, 2, 3)):
    for n in range(1, max_len + 1):
        yield from itertools.product(alphabet, repeat=n)


def dup_array(rng, n, rate):
    a = rng.integers(0, 1 << 30, size=n)
    dup = rng.random(n) < rate
    dup[0] = False
    for i in np.flatnonzero(dup):
        a[i] = a[i - 1]
    return a


def stack_match(bits):
    """Matching partner of every position of a balanced 0/1 sequence (1-based)."""
    match = {}
    stack = []
    for p, b in enumerate(bits, 1):
        if b:
            stack.append(p)
        else:
            o = stack.pop()
            match[o], match[p] = p, o
    return match


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
