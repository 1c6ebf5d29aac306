"""Polynomial Bethe systems: exact term lists plus fast product-form evaluation.

The term lists come from the exact Z[q] expansion (qpoly), so the recorded
per-equation degrees are the true ones even when leading coefficients cancel
at a root of unity; the total-degree start system is sized from them.  Each
equation is deflated by its trivial factor (x_k^2 - 1, or mu_k in the
isotropic case): the excluded fixed points solve every equation identically
and would otherwise attract paths into a region of exponentially flat
residuals.  Path tracking never touches the term lists: values and Jacobians
are evaluated in product form (a few hundred flops per point instead of
thousands of monomials), which agrees with the expansion to machine precision.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..regimes import XXX_KIND, ROOT_OF_UNITY_KIND, AnisotropyRegime, XXX
from . import qpoly


@dataclass
class PolySystem:
    """A square polynomial system F(z) = 0 for one (N, M) Bethe sector.

    kind is "x" (multiplicative variables) or "xxx" (rapidities); degrees[k]
    is the true total degree of equation k's expansion, which by construction
    matches max(sum(e)) over the stored terms.
    """

    num_vars: int
    expos: list[np.ndarray]
    coeffs: list[np.ndarray]
    degrees: list[int]
    kind: str
    regime: AnisotropyRegime
    N: int

    @property
    def M(self) -> int:
        return self.num_vars

    @property
    def total_paths(self) -> int:
        out = 1
        for d in self.degrees:
            out *= d
        return out

    # -- term-list evaluation (reference implementation, used by tests) ------

    def eval_terms(self, Z: np.ndarray) -> np.ndarray:
        """F at a batch of points, from the expanded term lists; Z is (B, M)."""
        Z = np.atleast_2d(Z)
        out = np.empty((Z.shape[0], self.num_vars), dtype=complex)
        for k in range(self.num_vars):
            powers = Z[:, None, :] ** self.expos[k][None, :, :]
            out[:, k] = powers.prod(axis=2) @ self.coeffs[k]
        return out

    # -- product-form evaluation (used by the tracker) -----------------------

    def eval_fast(self, Z: np.ndarray) -> np.ndarray:
        """F at a batch of points, each equation as (lhs - rhs) / gauge."""
        with np.errstate(over="ignore", invalid="ignore"):
            Z = np.atleast_2d(Z)
            lhs, rhs = self._sides(Z)
            return (lhs - rhs) / self._gauge(Z)

    def eval_scaled(self, Z: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        """(F, scale) with scale_k = max(1, |lhs_k|, |rhs_k|) / |gauge_k|."""
        with np.errstate(over="ignore", invalid="ignore"):
            Z = np.atleast_2d(Z)
            lhs, rhs = self._sides(Z)
            g = np.abs(self._gauge(Z))
            scale = np.maximum(1.0, np.maximum(np.abs(lhs), np.abs(rhs)) / g)
            return (lhs - rhs) / self._gauge(Z), scale

    def jac_fast(self, Z: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        """(F, J) in product form; J has shape (B, M, M) with J[b,k,m] = dF_k/dz_m."""
        Z = np.atleast_2d(Z)
        B, M = Z.shape
        F = np.zeros((B, M), dtype=complex)
        J = np.zeros((B, M, M), dtype=complex)
        with np.errstate(over="ignore", invalid="ignore"):
            for k in range(M):
                for sign, side in ((1.0, "lhs"), (-1.0, "rhs")):
                    val, dval = self._side_with_grad(Z, k, side)
                    F[:, k] += sign * val
                    J[:, k, :] += sign * dval
            g = self._gauge(Z)
            gp = np.full_like(Z, 2.0) if self.kind == XXX_KIND else 2.0 * Z
            idx = np.arange(M)
            J /= g[:, :, None]
            J[:, idx, idx] -= F * gp / (g * g)
            F /= g
        return F, J

    # -- internals ------------------------------------------------------------

    def _gauge(self, Z: np.ndarray) -> np.ndarray:
        """Deflated trivial factor of equation k: x_k^2 - 1, or mu_k = 2 lambda_k."""
        if self.kind == XXX_KIND:
            return 2.0 * Z
        return Z * Z - 1.0

    def _sides(self, Z: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        B, M = Z.shape
        lhs = np.empty((B, M), dtype=complex)
        rhs = np.empty((B, M), dtype=complex)
        if self.kind == XXX_KIND:
            mu = 2.0 * Z
            for k in range(M):
                mk = mu[:, k]
                lv = (mk + 1j) ** (2 * self.N)
                rv = (mk - 1j) ** (2 * self.N)
                for j in range(M):
                    if j == k:
                        continue
                    mj2 = mu[:, j] ** 2
                    lv = lv * ((mk - 2j) ** 2 - mj2)
                    rv = rv * ((mk + 2j) ** 2 - mj2)
                lhs[:, k], rhs[:, k] = lv, rv
        else:
            q = self.regime.q
            q2 = q * q
            for k in range(M):
                xk = Z[:, k]
                lv = (q * xk - 1.0) ** (2 * self.N)
                rv = (xk - q) ** (2 * self.N)
                for j in range(M):
                    if j == k:
                        continue
                    xj = Z[:, j]
                    lv = lv * (xk - q2 * xj) * (xk * xj - q2)
                    rv = rv * (q2 * xk - xj) * (q2 * xk * xj - 1.0)
                lhs[:, k], rhs[:, k] = lv, rv
        return lhs, rhs

    def _side_with_grad(self, Z: np.ndarray, k: int, side: str) -> tuple[np.ndarray, np.ndarray]:
        """One side of equation k with its gradient, by forward accumulation."""
        B, M = Z.shape
        dval = np.zeros((B, M), dtype=complex)
        if self.kind == XXX_KIND:
            mu = 2.0 * Z
            mk = mu[:, k]
            s = 1.0 if side == "lhs" else -1.0
            val = (mk + s * 1j) ** (2 * self.N)
            # d/d lambda = 2 d/d mu
            dval[:, k] = 2 * self.N * (mk + s * 1j) ** (2 * self.N - 1) * 2.0
            for j in range(M):
                if j == k:
                    continue
                mj = mu[:, j]
                f = (mk - s * 2j) ** 2 - mj**2
                dfk = 2.0 * (mk - s * 2j) * 2.0
                dfj = -2.0 * mj * 2.0
                dval *= f[:, None]
                dval[:, k] += val * dfk
                dval[:, j] += val * dfj
                val = val * f
            return val, dval
        q = self.regime.q
        q2 = q * q
        xk = Z[:, k]
        if side == "lhs":
            val = (q * xk - 1.0) ** (2 * self.N)
            dval[:, k] = 2 * self.N * q * (q * xk - 1.0) ** (2 * self.N - 1)
        else:
            val = (xk - q) ** (2 * self.N)
            dval[:, k] = 2 * self.N * (xk - q) ** (2 * self.N - 1)
        for j in range(M):
            if j == k:
                continue
            xj = Z[:, j]
            if side == "lhs":
                f1, d1k, d1j = xk - q2 * xj, 1.0, -q2
                f2, d2k, d2j = xk * xj - q2, xj, xk
            else:
                f1, d1k, d1j = q2 * xk - xj, q2, -1.0
                f2, d2k, d2j = q2 * xk * xj - 1.0, q2 * xj, q2 * xk
            for f, dk, dj in ((f1, d1k, d1j), (f2, d2k, d2j)):
                dval *= f[:, None]
                dval[:, k] += val * dk
                dval[:, j] += val * dj
                val = val * f
        return val, dval


def _phi_and_q(regime: AnisotropyRegime) -> tuple[list[int] | None, complex]:
    if regime.kind == ROOT_OF_UNITY_KIND:
        return qpoly.cyclotomic(2 * regime.p), regime.q
    return None, regime.q


def build_system_x(N: int, M: int, regime: AnisotropyRegime) -> PolySystem:
    """Multiplicative-variable system for generic or root-of-unity anisotropy."""
    if regime.kind == XXX_KIND:
        raise ValueError("use build_system_xxx in the isotropic regime")
    if M < 1:
        raise ValueError("M = 0 has the empty solution only; nothing to build")
    phi, q = _phi_and_q(regime)
    expos, coeffs, degrees = [], [], []
    for k in range(M):
        poly = qpoly.deflate_fixed_points(qpoly.expand_x_equation(N, M, k), k)
        e, c = qpoly.numeric_terms(poly, q, phi)
        expos.append(np.array(e, dtype=np.int64))
        coeffs.append(np.array(c, dtype=complex))
        degrees.append(int(max(sum(row) for row in e)))
    return PolySystem(M, expos, coeffs, degrees, regime.kind, regime, N)


def build_system_xxx(N: int, M: int) -> PolySystem:
    """Rapidity-variable system at the isotropic point."""
    if M < 1:
        raise ValueError("M = 0 has the empty solution only; nothing to build")
    phi = qpoly.cyclotomic(4)
    expos, coeffs, degrees = [], [], []
    for k in range(M):
        poly = qpoly.deflate_origin(qpoly.expand_xxx_equation(N, M, k), k)
        e, c = qpoly.numeric_terms(poly, 1j, phi, var_scale=2.0)
        expos.append(np.array(e, dtype=np.int64))
        coeffs.append(np.array(c, dtype=complex))
        degrees.append(int(max(sum(row) for row in e)))
    return PolySystem(M, expos, coeffs, degrees, XXX_KIND, XXX, N)
