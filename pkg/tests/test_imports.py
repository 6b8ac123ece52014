import ast
from pathlib import Path

import pytest

import omegabounds

PACKAGE_DIR = Path(omegabounds.__file__).parent


@pytest.mark.parametrize("path", sorted(PACKAGE_DIR.rglob("*.py")), ids=lambda p: str(p.relative_to(PACKAGE_DIR)))
def test_imports_are_absolute(path):
    tree = ast.parse(path.read_text(encoding="utf-8"))
    relative = [node.lineno for node in ast.walk(tree) if isinstance(node, ast.ImportFrom) and node.level > 0]
    assert relative == []


def test_package_exposes_its_modules():
    for name in omegabounds.__all__:
        assert getattr(omegabounds, name).__name__ == f"omegabounds.{name}"
