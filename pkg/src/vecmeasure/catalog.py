"""Built-in measures used by the figures, the certificate and the tests."""
from .intervals import IntervalSet
from .measure import PiecewisePoly, VectorMeasure, step_density

FIGURE_P = (0.7, 0.8)


def singular_pair():
    """Mutually singular unit-mass pair ``(2 on [0, 1/2), 2 on [1/2, 1])``."""
    return VectorMeasure([step_density([0, 0.5, 1], [2.0, 0.0]),
                          step_density([0, 0.5, 1], [0.0, 2.0])])


def step_ratio():
    """``(1, f)`` with ``f = 1/2`` on ``[0, 1/2)`` and ``3/2`` on ``[1/2, 1]``."""
    return VectorMeasure([PiecewisePoly.constant(1.0), step_density([0, 0.5, 1], [0.5, 1.5])])


def linear_ratio():
    """``(1, 2x)``."""
    return VectorMeasure([PiecewisePoly.constant(1.0), PiecewisePoly([0, 1], [[0.0, 2.0]])])


FIGURES = {"a": singular_pair, "b": step_ratio, "c": linear_ratio}


def sawtooth(slope=4.0):
    """Third density of the three-dimensional instance: ``4x`` then ``4x - 2``."""
    if slope == 4.0:
        return PiecewisePoly([0, 0.5, 1], [[0.0, 4.0], [0.0, 4.0]])
    return PiecewisePoly([0, 1], [[0.0, slope]])


def three_dim(third=None):
    """``(1, 2x, rho)`` with ``rho`` the sawtooth unless another density is given."""
    rho = sawtooth() if third is None else third
    return VectorMeasure([PiecewisePoly.constant(1.0), PiecewisePoly([0, 1], [[0.0, 2.0]]), rho])


THREE_DIM_P = (0.5, 0.5, 0.5)
THREE_DIM_Q1 = (0.25, 1 / 16, 1 / 8)
THREE_DIM_Q2 = (0.25, 5 / 32, 1 / 16)
Z1 = IntervalSet(((0.0, 0.25), (0.75, 1.0)))
Z2 = IntervalSet(((0.0, 0.125), (0.375, 0.625), (0.875, 1.0)))
W1 = IntervalSet(((0.0, 0.25),))
W2 = IntervalSet(((0.0, 0.125), (0.5, 0.625)))
