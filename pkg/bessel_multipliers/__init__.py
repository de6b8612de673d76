"""Generalized Bessel multipliers M = D_g U C_f on C^d, and checks of their properties."""

import pluggy

__version__ = "0.1.1"

# Marker for check-suite plugins, including the built-in suites.
hookimpl = pluggy.HookimplMarker("bessel_multipliers")
