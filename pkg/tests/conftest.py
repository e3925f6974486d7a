from __future__ import annotations

import pytest

from support import fixture_doc, fixture_graph


@pytest.fixture(scope="session")
def employees():
    return fixture_graph("employees.ttl")


@pytest.fixture(scope="session")
def employee_doc():
    return fixture_doc("employee_shapes.ttl")


@pytest.fixture(scope="session")
def office_doc():
    return fixture_doc("office_number_shapes.ttl")


@pytest.fixture(scope="session")
def veg_data():
    return fixture_graph("vegdish_data.ttl")


@pytest.fixture(scope="session")
def veg_doc():
    return fixture_doc("vegdish_shapes.ttl")


@pytest.fixture(scope="session")
def inconsistent_doc():
    return fixture_doc("inconsistent_shapes.ttl")
