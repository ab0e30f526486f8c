import itertools

import pytest

from qembed.graph import bfs_distances, enumerate_connected

ACCEPTANCE_LINES = []


@pytest.fixture(scope="session")
def connected_graphs():
    """All connected graphs on 2..6 vertices, one per isomorphism class."""
    return [g for n in range(2, 7) for g in enumerate_connected(n)]


@pytest.fixture(scope="session")
def connected_with_distances(connected_graphs):
    return [(g, bfs_distances(g)) for g in connected_graphs]


def brute_isomorphic(g, h):
    if g.n != h.n or g.num_edges != h.num_edges:
        return False
    return any(g.relabel(p) == h for p in itertools.permutations(range(g.n)))


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
