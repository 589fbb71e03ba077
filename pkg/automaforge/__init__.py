"""AutomaForge: a simulation lab for quantum, probabilistic and counter automata."""

__version__ = "0.1.0"
