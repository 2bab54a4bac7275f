import os

import hypothesis
import pytest

from app.services.bound_service import bound_service
from app.services.graph_service import graph_service

hypothesis.settings.register_profile("default", max_examples=40, deadline=None)
hypothesis.settings.register_profile("fast", max_examples=5, deadline=None)
hypothesis.settings.register_profile("debugger", report_multiple_bugs=False, deadline=None)
hypothesis.settings.load_profile(os.getenv("HYPOTHESIS_PROFILE", "default"))

FIXTURES = os.path.join(os.path.dirname(__file__), "fixtures")


@pytest.fixture
def fixture_path():
    def path(name: str) -> str:
        return os.path.join(FIXTURES, name)

    return path


@pytest.fixture
def c4_strong_p3():
    return graph_service.from_expression("strong(C4,P3)")


@pytest.fixture
def fresh_bounds():
    bound_service.clear_cache()
    yield bound_service
    bound_service.clear_cache()
