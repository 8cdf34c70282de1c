import doctest
import importlib
import pkgutil

import pytest

import groupcut

MODULES = sorted(m.name for m in pkgutil.iter_modules(groupcut.__path__, "groupcut.") if m.name != "groupcut.__main__")


@pytest.mark.parametrize("name", MODULES)
def test_doctests(name):
    result = doctest.testmod(importlib.import_module(name))
    assert result.failed == 0
