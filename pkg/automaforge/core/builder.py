"""
Base class for registered machine builders.

A builder declares its parameters as Property descriptors; the metaclass
collects them so the CLI can list, coerce and validate parameters without
knowing the builder.

    @builder("upal", kind="qbca_realtime")
    class UpalBuilder(MachineBuilder):
        N = Integer("QFT size", default=2, min_val=2)

        def build(self):
            return build_upal_qbca(self.N)
"""

from typing import Any, Dict, Mapping, Optional

from .descriptors.base import Property


class BuilderMeta(type):
    """Metaclass that collects Property descriptors from class attributes."""

    def __new__(mcs, name, bases, namespace):
        _properties: Dict[str, Property] = {}
        for base in reversed(bases):
            _properties.update(getattr(base, "_properties", {}))

        for attr_name, attr_value in namespace.items():
            if attr_name.startswith("_"):
                continue
            if isinstance(attr_value, Property):
                _properties[attr_name] = attr_value

        cls = super().__new__(mcs, name, bases, namespace)
        cls._properties = _properties
        return cls


class MachineBuilder(metaclass=BuilderMeta):
    # Set by the @builder decorator.
    builder_name: Optional[str] = None
    kind: Optional[str] = None
    description: str = ""

    def __init__(self, **params: Any):
        unknown = sorted(set(params) - set(self._properties))
        if unknown:
            raise ValueError(
                f"{self.builder_name}: unknown parameter(s) {unknown}; "
                f"expected {sorted(self._properties)}"
            )
        for name, prop in self._properties.items():
            setattr(self, name, params.get(name, prop.default))

    @classmethod
    def from_params(cls, params: Optional[Mapping[str, Any]] = None) -> "MachineBuilder":
        return cls(**dict(params or {}))

    @classmethod
    def describe(cls) -> Dict[str, Any]:
        return {
            "name": cls.builder_name,
            "kind": cls.kind,
            "description": cls.description,
            "params": {name: prop.to_spec() for name, prop in cls._properties.items()},
        }

    @property
    def params(self) -> Dict[str, Any]:
        return {name: getattr(self, name) for name in self._properties}

    def to_dict(self) -> Dict[str, Any]:
        """Machine reference as used in claim files."""
        return {"builder": self.builder_name, "params": self.params}

    def build(self):
        raise NotImplementedError

    def __repr__(self) -> str:
        args = ", ".join(f"{k}={v!r}" for k, v in self.params.items())
        return f"{type(self).__name__}({args})"

