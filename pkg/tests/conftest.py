import pytest

from stakenet.datasets import load_generic_model, load_project


@pytest.fixture(scope="session")
def project1():
    return load_project("project1")


@pytest.fixture(scope="session")
def project2():
    return load_project("project2")


@pytest.fixture(scope="session")
def project3():
    return load_project("project3")


@pytest.fixture(scope="session")
def projects(project1, project2, project3):
    return [project1, project2, project3]


@pytest.fixture(scope="session")
def generic_model():
    return load_generic_model()
