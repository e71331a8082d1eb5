"""Explicit height and degree bounds on powers of elliptic curves, in exact arithmetic."""
