"""Test that every module of the package has a code reference page listed in the docs navigation."""
import os

import pytest
import yaml

ROOT = os.path.join(os.path.dirname(__file__), "..", "..")
PACKAGE_DIR = os.path.join(ROOT, "maxrs")
REFERENCE_DIR = os.path.join(ROOT, "docs", "dev", "code_reference")

MODULES = sorted(name[:-3] for name in os.listdir(PACKAGE_DIR) if name.endswith(".py") and name != "__init__.py")


def _nav_pages(node):
    if isinstance(node, str):
        return [node]
    if isinstance(node, list):
        return [page for item in node for page in _nav_pages(item)]
    return [page for value in node.values() for page in _nav_pages(value)]


@pytest.mark.parametrize("module", MODULES)
def test_code_reference_page(module):
    with open(os.path.join(REFERENCE_DIR, f"{module}.md"), encoding="utf-8") as handle:
        assert f"::: maxrs.{module}" in handle.read()


@pytest.mark.parametrize("module", MODULES)
def test_code_reference_in_nav(module):
    with open(os.path.join(ROOT, "mkdocs.yml"), encoding="utf-8") as handle:
        nav = yaml.safe_load(handle)["nav"]
    assert f"dev/code_reference/{module}.md" in _nav_pages(nav)
