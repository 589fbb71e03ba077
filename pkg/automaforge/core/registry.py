"""
Builder registry.

Builders register themselves with the @builder(name, kind) decorator when
their module is imported; discover_builders() imports every public module
of automaforge.builders so the decorators run.
"""

import importlib
import pkgutil
import sys
from typing import Dict, List, Optional, Type

from .builder import MachineBuilder

_builder_registry: Dict[str, Type[MachineBuilder]] = {}

# Track discovered modules to avoid re-registering
_discovered_modules: set = set()


def builder(name: str, kind: str, description: str = ""):
    """Class decorator registering a MachineBuilder under ``name``."""

    def decorator(cls: Type[MachineBuilder]) -> Type[MachineBuilder]:
        if not (isinstance(cls, type) and issubclass(cls, MachineBuilder)):
            raise TypeError(f"@builder({name!r}) needs a MachineBuilder subclass, got {cls!r}")
        existing = _builder_registry.get(name)
        if existing is not None and existing.__qualname__ != cls.__qualname__:
            raise ValueError(f"builder name {name!r} already registered by {existing.__qualname__}")
        cls.builder_name = name
        cls.kind = kind
        doc = (cls.__doc__ or "").strip()
        cls.description = description or (doc.splitlines()[0] if doc else "")
        _builder_registry[name] = cls
        return cls

    return decorator


def discover_builders(package: str = "automaforge.builders") -> Dict[str, Type[MachineBuilder]]:
    """Import every public module of ``package`` so its builders register."""
    try:
        pkg = importlib.import_module(package)
    except ImportError as e:
        print(f"Warning: builder package {package} not importable: {e}")
        return dict(_builder_registry)

    for info in pkgutil.iter_modules(pkg.__path__):
        if info.name.startswith("_"):
            continue
        full_name = f"{package}.{info.name}"
        if full_name in _discovered_modules:
            continue
        try:
            if full_name in sys.modules:
                importlib.reload(sys.modules[full_name])
            else:
                importlib.import_module(full_name)
            _discovered_modules.add(full_name)
        except Exception as e:
            print(f"Warning: Failed to import {full_name}: {e}")
    return dict(_builder_registry)


def get_builder(name: str) -> Optional[Type[MachineBuilder]]:
    if not _builder_registry:
        discover_builders()
    return _builder_registry.get(name)


def list_builders() -> List[Type[MachineBuilder]]:
    if not _builder_registry:
        discover_builders()
    return [_builder_registry[name] for name in sorted(_builder_registry)]


def clear_builder_registry():
    """Clear the registry (for testing)."""
    global _builder_registry, _discovered_modules
    _builder_registry = {}
    _discovered_modules = set()
