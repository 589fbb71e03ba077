from .base import BaseDescriptor, Property
from .properties import Bool, Integer

__all__ = ["BaseDescriptor", "Property", "Bool", "Integer"]
