import pytest

from ellsurf import fixtures
from ellsurf.plane_curves import PlaneCurve
from ellsurf.fibration import DoubleCoverSurface, build_fibration, find_multisections, generate_points


@pytest.fixture(scope="session")
def nodal_fib():
    return build_fibration(DoubleCoverSurface(fixtures.nodal_curve()), fixtures.NODAL_BASE_POINT)


@pytest.fixture(scope="session")
def nodal_multisections(nodal_fib):
    return find_multisections(nodal_fib, 30)


@pytest.fixture(scope="session")
def nodal_run(nodal_fib, nodal_multisections):
    return generate_points(nodal_fib, nodal_multisections[0], 50, 8)


@pytest.fixture(scope="session")
def quartic_node_fib():
    return build_fibration(DoubleCoverSurface(PlaneCurve(fixtures.QUARTIC_NODE_SEXTIC)), (0, 0))


@pytest.fixture(scope="session")
def v1_run():
    from ellsurf.fano_v1 import v1_generate

    return v1_generate(fixtures.v1_model(), fixtures.v1_point())
