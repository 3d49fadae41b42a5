import pytest

from unitscan import load_cubic_fields, load_quad_fields
from unitscan.report import load_reference_tables


@pytest.fixture(scope="session")
def quad_records():
    return load_quad_fields()


@pytest.fixture(scope="session")
def cubic_records():
    return load_cubic_fields()


@pytest.fixture(scope="session")
def ref_tables():
    return load_reference_tables()
