import pytest

from hopfhoch.models import load, model_text, parse, registry_names

REGISTRY = registry_names()
SMALL = ("dual-numbers", "c2-sign", "group-translate(C2)")


def corrupted(name: str, old: str, new: str):
    """Parse a built-in with one line of its text replaced (no validation)."""
    text = model_text(name)
    assert old in text, old
    return parse(text.replace(old, new, 1)).module


@pytest.fixture(params=REGISTRY)
def any_model(request):
    return load(request.param)


@pytest.fixture(params=SMALL)
def small_model(request):
    return load(request.param)


@pytest.fixture
def c2():
    return load("c2-sign")


@pytest.fixture
def dual():
    return load("dual-numbers")
