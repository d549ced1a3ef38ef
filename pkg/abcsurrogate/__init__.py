"""ABC surrogate likelihood library."""
