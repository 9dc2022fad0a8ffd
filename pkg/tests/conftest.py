from __future__ import annotations

import pytest

from touchtrail.fixtures import expert_session, novice_session, skill_regions, two_motif_session
from touchtrail.ingest import STUDY_DEVICE


@pytest.fixture(scope="session")
def device():
    return STUDY_DEVICE


@pytest.fixture(scope="session")
def novice():
    return novice_session()


@pytest.fixture(scope="session")
def expert():
    return expert_session()


@pytest.fixture(scope="session")
def two_motif():
    return two_motif_session()


@pytest.fixture(scope="session")
def regions():
    return skill_regions()
