import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from dergraph.constructions import builtin_corpus, multipartite_construction, standard_family  # noqa: E402
from dergraph.graph import build_graph  # noqa: E402
from dergraph.perms import Permutation, generate_group  # noqa: E402


def perm(cycles, n):
    """0-based cycles -> Permutation."""
    return Permutation.from_cycles(cycles, n)


def group(n, *gens):
    return generate_group([perm(c, n) for c in gens])


@pytest.fixture(scope="session")
def corpus():
    return builtin_corpus()


@pytest.fixture(scope="session")
def sym3():
    return standard_family("symmetric", 3)


@pytest.fixture(scope="session")
def sym4():
    return standard_family("symmetric", 4)


@pytest.fixture(scope="session")
def c6():
    return multipartite_construction(6)


@pytest.fixture(scope="session")
def c6_graph(c6):
    return build_graph(c6)
