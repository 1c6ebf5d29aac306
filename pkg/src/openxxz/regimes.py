"""Anisotropy regimes of the open chain: isotropic, generic XXZ, root of unity.

The boundary fields are fixed to the quantum-group-invariant values throughout,
so a regime is determined by the anisotropy parameter eta alone:

    XXX           isotropic point, rational parametrization
    generic XXZ   Delta = cosh(eta), q = e^eta not a root of unity
    root of unity eta = i*pi/p, q = e^{i*pi/p}, q^{2p} = 1
"""
from __future__ import annotations

import cmath
import math
import warnings
from dataclasses import dataclass

XXX_KIND = "xxx"
XXZ_KIND = "xxz"
ROOT_OF_UNITY_KIND = "root_of_unity"

_MAX_WARN_P = 64


@dataclass(frozen=True)
class AnisotropyRegime:
    """Which variant of the chain is being solved; eta is set for xxz, p for root_of_unity."""

    kind: str
    eta: complex = 0j
    p: int = 0

    @property
    def q(self) -> complex:
        """Deformation parameter q = e^eta (unused at the isotropic point)."""
        if self.kind == XXX_KIND:
            raise ValueError("q is not defined in the isotropic regime")
        return cmath.exp(self.eta)

    @property
    def is_root_of_unity(self) -> bool:
        return self.kind == ROOT_OF_UNITY_KIND

    def key(self) -> str:
        """Short parseable label, inverse of parse_regime."""
        if self.kind == XXX_KIND:
            return "xxx"
        if self.kind == ROOT_OF_UNITY_KIND:
            return f"p={self.p}"
        eta = self.eta
        if eta.imag == 0.0:
            return f"eta={eta.real!r}"
        return f"eta={eta!r}".replace("(", "").replace(")", "")

    def __str__(self) -> str:
        return self.key()


XXX = AnisotropyRegime(XXX_KIND)


def generic_xxz(eta) -> AnisotropyRegime:
    """Generic-eta regime; warns (but proceeds) if eta sits numerically on i*pi/p."""
    eta = complex(eta)
    if eta == 0:
        raise ValueError("eta = 0 is the isotropic point; use XXX")
    if abs(eta.real) < 1e-12 and eta.imag != 0.0:
        for p in range(2, _MAX_WARN_P + 1):
            if abs(eta.imag - math.pi / p) < 1e-12:
                warnings.warn(
                    f"eta = {eta} is within 1e-12 of i*pi/{p}; "
                    f"counting formulas for generic eta will not apply",
                    stacklevel=2,
                )
                break
    return AnisotropyRegime(XXZ_KIND, eta=eta)


def root_of_unity(p: int) -> AnisotropyRegime:
    """Regime with eta = i*pi/p for integer p >= 2."""
    if not isinstance(p, int) or p < 2:
        raise ValueError(f"p must be an integer >= 2, got {p}")
    return AnisotropyRegime(ROOT_OF_UNITY_KIND, eta=1j * math.pi / p, p=p)


def parse_regime(text: str) -> AnisotropyRegime:
    """Parse 'xxx', 'eta=<complex>', or 'p=<int>'."""
    text = text.strip()
    if text == "xxx":
        return XXX
    if text.startswith("p="):
        return root_of_unity(int(text[2:]))
    if text.startswith("eta="):
        return generic_xxz(complex(text[4:]))
    raise ValueError(f"unrecognized regime {text!r}; expected xxx, eta=<complex>, or p=<int>")
