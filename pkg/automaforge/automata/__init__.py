"""Classical models: generalized finite automata, blind counter automata, multihead automata and the language oracles."""
