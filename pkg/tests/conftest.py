import os
import random

import pytest
from hypothesis import HealthCheck, settings

from plumblat.fixtures import GRAPHS
from plumblat.plumbing import parse_graph

SEED = int(os.environ.get("PLUMBLAT_TEST_SEED", "20240611"))

settings.register_profile(
    "seeded",
    derandomize=True,
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow, HealthCheck.data_too_large],
    print_blob=True,
)
settings.load_profile("seeded")


def pytest_report_header(config):
    return f"plumblat test seed: {SEED} (hypothesis derandomized)"


@pytest.fixture
def rng():
    return random.Random(SEED)


@pytest.fixture(scope="session")
def graphs():
    return {k: parse_graph(v) for k, v in GRAPHS.items()}


def random_tree_text(r: random.Random, n: int, low: int = -4, high: int = -1) -> str:
    lines = [f"vertex v{i} {r.randint(low, high)}" for i in range(n)]
    lines += [f"edge v{r.randrange(i)} v{i}" for i in range(1, n)]
    return "\n".join(lines) + "\n"


def random_negdef_tree(r: random.Random, n: int):
    while True:
        g = parse_graph(random_tree_text(r, n))
        if g.negative_definite:
            return g


def random_char(r: random.Random, g, radius: int = 3) -> tuple[int, ...]:
    out = []
    for i in range(len(g.vertices)):
        k = r.randint(-radius, radius)
        if (k - g.Q[i][i]) % 2:
            k += 1 if k < radius else -1
        out.append(k)
    return tuple(out)


def pytest_terminal_summary(terminalreporter):
    mod = __import__("sys").modules.get("test_acceptance")
    lines = getattr(mod, "RESULTS", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
