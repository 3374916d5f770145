"""HTTP service exposing the linking engine."""
