import pytest
from hypothesis import settings

from rdptwist.fieldtower import FieldTower

settings.register_profile("default", deadline=None, max_examples=40)
settings.load_profile("default")


@pytest.fixture(scope="session")
def Q():
    return FieldTower.rationals()
