import pytest

from srp import conllu

from helpers import CHERNOBYL_TEXT


@pytest.fixture
def chernobyl_text() -> str:
    return CHERNOBYL_TEXT


@pytest.fixture
def chernobyl(chernobyl_text) -> conllu.Instance:
    return conllu.parse_instance(chernobyl_text)
