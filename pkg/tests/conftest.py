from pathlib import Path

import pytest
from hypothesis import HealthCheck, settings

from rreh.dsl import parse_file

ROOT = Path(__file__).resolve().parent.parent
FIXTURES = ROOT / "fixtures"
GOLDEN = Path(__file__).resolve().parent / "golden"

settings.register_profile("default", deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


def load_hub(name):
    return parse_file(FIXTURES / name).hub


@pytest.fixture
def fixtures_dir():
    return FIXTURES
