from typing import Any, Optional

from .base import Property


class Integer(Property[int]):
    """Integer parameter with optional bounds."""

    def __init__(
        self,
        label: str,
        default: int = 0,
        min_val: Optional[int] = None,
        max_val: Optional[int] = None,
    ):
        super().__init__(label, int(default))
        self.min_val = min_val
        self.max_val = max_val

    def coerce(self, value: Any) -> int:
        if isinstance(value, bool):
            raise ValueError(f"{self.name} must be an integer, got {value!r}")
        try:
            as_int = int(value)
        except (TypeError, ValueError):
            raise ValueError(f"{self.name} must be an integer, got {value!r}") from None
        if isinstance(value, float) and value != as_int:
            raise ValueError(f"{self.name} must be an integer, got {value!r}")
        return as_int

    def validate(self, value: int) -> None:
        if self.min_val is not None and value < self.min_val:
            raise ValueError(f"{self.name} must be >= {self.min_val}, got {value}")
        if self.max_val is not None and value > self.max_val:
            raise ValueError(f"{self.name} must be <= {self.max_val}, got {value}")

    def to_spec(self, value: Any = None) -> dict:
        return {
            "type": "integer",
            "label": self.label,
            "default": self.default,
            "value": value if value is not None else self.default,
            "min": self.min_val,
            "max": self.max_val,
        }


class Bool(Property[bool]):
    """Boolean parameter; accepts true/false/1/0/yes/no strings."""

    _TRUE = {"true", "1", "yes", "on"}
    _FALSE = {"false", "0", "no", "off"}

    def __init__(self, label: str, default: bool = False):
        super().__init__(label, bool(default))

    def coerce(self, value: Any) -> bool:
        if isinstance(value, bool):
            return value
        text = str(value).strip().lower()
        if text in self._TRUE:
            return True
        if text in self._FALSE:
            return False
        raise ValueError(f"{self.name} must be a boolean, got {value!r}")

    def to_spec(self, value: Any = None) -> dict:
        return {
            "type": "bool",
            "label": self.label,
            "default": self.default,
            "value": value if value is not None else self.default,
        }
