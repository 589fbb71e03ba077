"""Registered machine builders; imported by core.registry.discover_builders."""
