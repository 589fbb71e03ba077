"""Machine files, claim files, sweeps and the command line."""
