import pytest

from iwaops import StructureTable, levi_civita


@pytest.fixture(scope="session")
def iwasawa():
    return StructureTable.iwasawa()


@pytest.fixture(scope="session")
def connection(iwasawa):
    return levi_civita(iwasawa)


@pytest.fixture(scope="session")
def connection_f(connection):
    return connection.as_float()
