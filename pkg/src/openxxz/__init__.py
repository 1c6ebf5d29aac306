"""Bethe-equation solvers and degeneracy counting for the U_q(sl2)-invariant open XXZ chain."""

from .regimes import AnisotropyRegime, XXX, generic_xxz, root_of_unity, parse_regime

__all__ = [
    "AnisotropyRegime",
    "XXX",
    "generic_xxz",
    "root_of_unity",
    "parse_regime",
]

__version__ = "0.1.0"
