"""Worked instances shared by several test modules."""

from pwlgen.bivariate import GridTriangulation
from pwlgen.formulations import BicliqueCover, UnivariatePWL

# four concave pieces with slopes 4, 3, 2, 1
EXAMPLE_4 = UnivariatePWL((0, 1, 2, 3, 4), (0, 4, 7, 9, 10))

# eight concave pieces with slopes 8 down to 1
EXAMPLE_8 = UnivariatePWL(tuple(range(9)), (0, 8, 15, 21, 26, 30, 33, 35, 36))

# 2 x 2 grid, every cell split along its SE-NW diagonal
K1_GRID = GridTriangulation.uniform(2, 2, "senw")

K1_TRIANGLES = [
    {(1, 1), (1, 2), (2, 1)},
    {(1, 2), (2, 1), (2, 2)},
    {(2, 1), (3, 1), (2, 2)},
    {(3, 1), (3, 2), (2, 2)},
    {(1, 2), (2, 2), (1, 3)},
    {(2, 2), (2, 3), (1, 3)},
    {(2, 2), (2, 3), (3, 2)},
    {(2, 3), (3, 2), (3, 3)},
]

K1_COVER = BicliqueCover(
    tuple(K1_GRID.points),
    (
        ({(1, 3), (2, 2), (3, 1)}, {(1, 1), (3, 3)}),
        ({(2, 3), (3, 2)}, {(1, 2), (2, 1)}),
        ({(1, 3), (2, 3), (3, 3)}, {(1, 1), (2, 1), (3, 1)}),
        ({(3, 1), (3, 2), (3, 3)}, {(1, 1), (1, 2), (1, 3)}),
    ),
)

K1_CODES = [
    (0, 0, 0, 0), (1, 0, 0, 0), (1, 0, 0, 1), (1, 1, 0, 1),
    (1, 0, 1, 0), (1, 1, 1, 0), (1, 1, 1, 1), (0, 1, 1, 1),
]

# codes of the redundant singleton members, and the singletons as listed
K1_EXTRA_CODES = [
    (0, 1, 0, 0), (0, 0, 0, 1), (1, 1, 0, 0), (1, 0, 1, 1),
    (0, 0, 1, 0), (0, 1, 0, 1), (0, 1, 1, 0), (0, 0, 1, 1),
]
K1_LISTED_SINGLETONS = [(1, 1), (2, 1), (2, 2), (2, 2), (1, 2), (2, 3), (2, 3), (3, 3)]
