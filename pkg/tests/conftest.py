import pytest

from automaforge.core.registry import clear_builder_registry, discover_builders


@pytest.fixture(autouse=True)
def isolated_settings(tmp_path, monkeypatch):
    """Keep the per-user settings file out of every test."""
    monkeypatch.setenv("AUTOMAFORGE_CONFIG_DIR", str(tmp_path / "config"))


@pytest.fixture
def builders():
    clear_builder_registry()
    registry = discover_builders()
    yield registry
    clear_builder_registry()
