import pytest

from kahlersym.classifier import SamplePlan
from kahlersym.runner import run
from kahlersym.zoo import zoo


@pytest.fixture(scope="session")
def fixtures():
    return zoo()


@pytest.fixture(scope="session")
def small_plan():
    """Cheap plan for module-level tests."""
    return SamplePlan(points=6, directions=8, planes=8, seed=0)


@pytest.fixture(scope="session")
def full_plan():
    """The default plan the acceptance criteria are stated against."""
    return SamplePlan()


@pytest.fixture(scope="session")
def full_reports(fixtures, full_plan):
    """One full run per zoo fixture, shared by classifier and acceptance tests."""
    return {name: run(spec, full_plan) for name, spec in fixtures.items()}
