"""Central differences with Richardson extrapolation.

Used as an independent check on analytic derivatives and for the
state-overlap Fisher information in the Fock oracle. Works for scalar
and array-valued functions of one real variable.
"""

import numpy as np


def _central(f, x, h, order):
    if order == 1:
        return (f(x + h) - f(x - h)) / (2.0 * h)
    if order == 2:
        return (f(x + h) - 2.0 * f(x) + f(x - h)) / (h * h)
    raise ValueError("order must be 1 or 2")


def richardson(f, x, h=1e-7, levels=2, order=1):
    """Derivative of `f` at `x` by Richardson-extrapolated central differences.

    The step is halved `levels` times; both central formulas have even error
    expansions so each refinement removes the next power of h**2.

    Returns ``(estimate, error)`` where ``error`` is the difference between
    the last two diagonal entries of the tableau.
    """
    if levels < 0:
        raise ValueError("levels must be >= 0")
    table = [[_central(f, x, h / 2**i, order)] for i in range(levels + 1)]
    for i in range(1, levels + 1):
        for j in range(1, i + 1):
            factor = 4.0**j
            prev = table[i][j - 1]
            table[i].append((factor * prev - table[i - 1][j - 1]) / (factor - 1.0))
    best = table[levels][levels]
    if levels == 0:
        return best, np.zeros_like(np.asarray(best, dtype=float))
    err = np.abs(np.asarray(best) - np.asarray(table[levels - 1][levels - 1]))
    return best, err
