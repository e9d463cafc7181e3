from __future__ import annotations

import pytest

from quatdens.padic import PAdicConfig


@pytest.fixture(scope="session")
def cfg3() -> PAdicConfig:
    return PAdicConfig(3)


@pytest.fixture(scope="session")
def cfg5() -> PAdicConfig:
    return PAdicConfig(5)
