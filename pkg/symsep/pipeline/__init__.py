"""Parameter sweeps and pinned reproduction runs."""
