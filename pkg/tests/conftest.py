import pytest

from surfcensus import CoordinateAssignment, TriangleSet

# Moebius' 7-vertex torus with Csaszar's realization coordinates.
MOEBIUS_TORUS_TRIANGLES = [
    (1, 2, 3), (1, 4, 5), (1, 5, 6), (3, 4, 5), (1, 6, 7), (4, 6, 7), (2, 4, 7),
    (1, 2, 4), (2, 3, 6), (2, 5, 6), (3, 4, 6), (2, 5, 7), (3, 5, 7), (1, 3, 7),
]

CSASZAR_COORDS = {
    1: (3, -3, 0),
    2: (-3, 3, 0),
    3: (-3, -3, 1),
    4: (3, 3, 1),
    5: (-1, -2, 3),
    6: (1, 2, 3),
    7: (0, 0, 15),
}

# The unique 6-vertex real projective plane (antipodal icosahedron quotient).
RP26_TRIANGLES = [
    (1, 2, 3), (1, 2, 4), (1, 3, 5), (1, 4, 6), (1, 5, 6),
    (2, 3, 6), (2, 4, 5), (2, 5, 6), (3, 4, 5), (3, 4, 6),
]


@pytest.fixture
def tetra():
    return TriangleSet.from_triangles([(1, 2, 3), (1, 2, 4), (1, 3, 4), (2, 3, 4)])


@pytest.fixture
def sphere5():
    # the unique 5-vertex sphere, in canonical labeling
    return TriangleSet.from_triangles(
        [(1, 2, 3), (1, 2, 4), (1, 3, 4), (2, 3, 5), (2, 4, 5), (3, 4, 5)]
    )


@pytest.fixture
def moebius():
    return TriangleSet.from_triangles(MOEBIUS_TORUS_TRIANGLES, n=7)


@pytest.fixture
def csaszar():
    return CoordinateAssignment.from_dict(CSASZAR_COORDS)


@pytest.fixture
def rp26():
    return TriangleSet.from_triangles(RP26_TRIANGLES, n=6)


@pytest.fixture
def octahedron():
    return TriangleSet.from_triangles(
        [(1, 2, 3), (1, 2, 4), (1, 3, 5), (1, 4, 5),
         (2, 3, 6), (2, 4, 6), (3, 5, 6), (4, 5, 6)]
    )
