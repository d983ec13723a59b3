import pytest

from boundpoly import BUNDLED, load_bundled, parse_hrep

# lines recorded by test_acceptance, echoed at the end of the run
ACCEPTANCE_LINES: list[str] = []


def simplex_doc(n):
    return {
        "dimension": n,
        "normals": [[-1 if j == i else 0 for j in range(n)] for i in range(n)] + [[1] * n],
        "offsets": [0] * n + [1],
    }


def box_doc(sides):
    n = len(sides)
    return {
        "dimension": n,
        "normals": [[-1 if j == i else 0 for j in range(n)] for i in range(n)]
        + [[1 if j == i else 0 for j in range(n)] for i in range(n)],
        "offsets": [0] * n + list(sides),
    }


INTERVAL = {"dimension": 1, "normals": [[-1], [1]], "offsets": [0, 1]}
# apex (1,1,1) over the square [0,2]^2
SQUARE_PYRAMID = {
    "dimension": 3,
    "normals": [[0, 0, -1], [-1, 0, 1], [1, 0, 1], [0, -1, 1], [0, 1, 1]],
    "offsets": [0, 0, 2, 0, 2],
}
# vertices (0,0), (2,0), (1,1): simple and integral, edge determinant 2 at (1,1)
WIDE_TRIANGLE = {"dimension": 2, "normals": [[0, -1], [1, 1], [-1, 1]], "offsets": [0, 2, 0]}


@pytest.fixture(scope="session")
def bundled():
    return {name: load_bundled(name) for name in BUNDLED}


@pytest.fixture(scope="session")
def interval():
    return parse_hrep(INTERVAL)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
