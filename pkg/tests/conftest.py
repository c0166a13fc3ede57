import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from faylab.curves import HyperellipticCurve, period_matrix
from faylab.kernels import CurveContext
from faylab.quartic import PlaneQuartic
from faylab.registry import registry_entries

_CTX_CACHE = {}


def build_context(curve_id):
    if curve_id not in _CTX_CACHE:
        entry = registry_entries()[curve_id]
        curve = HyperellipticCurve(entry["branch_points"], curve_id)
        _, _, pd = period_matrix(curve)
        _CTX_CACHE[curve_id] = CurveContext(curve, pd)
    return _CTX_CACHE[curve_id]


@pytest.fixture(scope="session")
def ctx_g1():
    return build_context("lemniscatic")


@pytest.fixture(scope="session")
def ctx_g1_eq():
    return build_context("equianharmonic")


@pytest.fixture(scope="session")
def ctx_g2():
    return build_context("g2-real")


@pytest.fixture(scope="session")
def ctx_g3():
    return build_context("g3-real")


@pytest.fixture(scope="session")
def fermat():
    entry = registry_entries()["fermat"]
    return PlaneQuartic(entry["coefficients"], "fermat")


@pytest.fixture(scope="session")
def quartic_generic():
    entry = registry_entries()["quartic-generic"]
    return PlaneQuartic(entry["coefficients"], "quartic-generic")
