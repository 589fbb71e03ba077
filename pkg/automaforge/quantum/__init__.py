"""Quantum machines with a classical register: specification, state, runtime and constructions."""
