from __future__ import annotations

import pytest
from hypothesis import settings

from engel_forge.corpus import find_group, load_corpus

settings.register_profile("default", deadline=None, max_examples=60)
settings.load_profile("default")


@pytest.fixture(scope="session")
def corpus():
    return {gf.name: gf for gf in load_corpus()}


@pytest.fixture(scope="session")
def group():
    cache = {}

    def get(name):
        if name not in cache:
            gf = find_group(name)
            cache[name] = (gf, gf.group())
        return cache[name]

    return get


def pytest_terminal_summary(terminalreporter):
    module = __import__("sys").modules.get("test_acceptance")
    lines = getattr(module, "RESULTS", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
