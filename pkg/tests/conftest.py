import numpy as np
import pytest

from bmetric import cone_of, make_conformal_surface, make_flat_surface, s1_extension_of

# base surfaces used throughout; each pair is (a, b)
CONFORMAL_BASES = [
    ("u^2", "0"),
    ("0.3*u*v", "0.2*sin(u) + v^2"),
    ("0.3*u^2 - 0.2*u*v", "0.25*v"),
]


@pytest.fixture(scope="session")
def flat():
    return make_flat_surface()


@pytest.fixture(scope="session", params=CONFORMAL_BASES, ids=lambda ab: f"a={ab[0]},b={ab[1]}")
def conformal(request):
    return make_conformal_surface(*request.param)


@pytest.fixture(scope="session")
def mixed_surface():
    return make_conformal_surface("0.3*u*v", "0.2*sin(u) + v^2")


@pytest.fixture(scope="session", params=["cone", "s1_extension"])
def construction(request):
    return cone_of if request.param == "cone" else s1_extension_of


def random_points(rng, n, cone):
    t = rng.uniform(0.3, 3.0, n) if cone else rng.uniform(-2.0, 2.0, n)
    uv = rng.uniform(-1.0, 1.0, (n, 2))
    return [(float(a), float(b), float(c)) for a, (b, c) in zip(t, uv)]


@pytest.fixture
def rng():
    return np.random.default_rng(20261018)


def pytest_terminal_summary(terminalreporter):
    import test_acceptance

    if test_acceptance.RESULTS:
        terminalreporter.section("acceptance criteria")
        for key in sorted(test_acceptance.RESULTS):
            terminalreporter.write_line(test_acceptance.RESULTS[key])
