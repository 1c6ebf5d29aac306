"""Exact expansion of the Bethe polynomial systems over Z[q].

Coefficients are integer polynomials in the deformation parameter
(dict: q-power -> int).  At a root of unity q = e^{i*pi/p} they are reduced
modulo the cyclotomic polynomial Phi_2p before numeric evaluation, so terms
whose coefficients vanish identically at that q come out as exact zeros and
the per-equation degrees are the true ones.  The isotropic system has
Gaussian-integer coefficients and reuses the machinery with q standing for i
(reduction mod Phi_4).

Multivariate polynomials are dicts mapping exponent tuples to coefficient
dicts.
"""
from __future__ import annotations

from math import comb

# ---------------------------------------------------------------------------
# coefficient arithmetic in Z[q]


def _c_add(a: dict, b: dict) -> dict:
    out = dict(a)
    for p, v in b.items():
        w = out.get(p, 0) + v
        if w:
            out[p] = w
        else:
            out.pop(p, None)
    return out


def _c_mul(a: dict, b: dict) -> dict:
    out: dict = {}
    for pa, va in a.items():
        for pb, vb in b.items():
            p = pa + pb
            w = out.get(p, 0) + va * vb
            if w:
                out[p] = w
            else:
                out.pop(p, None)
    return out


def _c_neg(a: dict) -> dict:
    return {p: -v for p, v in a.items()}


def cyclotomic(n: int) -> list[int]:
    """Coefficients (ascending) of the n-th cyclotomic polynomial."""
    # (x^n - 1) divided by the product of Phi_d over proper divisors d
    num = [0] * (n + 1)
    num[0], num[n] = -1, 1
    for d in range(1, n):
        if n % d == 0:
            num = _polydiv_exact(num, cyclotomic(d))
    return num


def _polydiv_exact(num: list[int], den: list[int]) -> list[int]:
    """Exact division of integer polynomials (ascending coefficients)."""
    num = list(num)
    dd = len(den) - 1
    out = [0] * (len(num) - dd)
    for i in range(len(num) - 1, dd - 1, -1):
        c = num[i]
        if c % den[dd]:
            raise ArithmeticError("inexact polynomial division")
        c //= den[dd]
        out[i - dd] = c
        if c:
            for m, f in enumerate(den):
                num[i - dd + m] -= c * f
    if any(num[:dd]):
        raise ArithmeticError("inexact polynomial division")
    return out


def reduce_mod_cyclotomic(coeff: dict, phi: list[int]) -> dict:
    """Remainder of a Z[q] coefficient modulo a monic cyclotomic polynomial."""
    if not coeff:
        return {}
    deg = max(coeff)
    d = len(phi) - 1
    if deg < d:
        return dict(coeff)
    dense = [0] * (deg + 1)
    for p, v in coeff.items():
        dense[p] = v
    for i in range(deg, d - 1, -1):
        c = dense[i]
        if not c:
            continue
        dense[i] = 0
        for m in range(d):
            dense[i - d + m] -= c * phi[m]
    return {p: v for p, v in enumerate(dense[:d]) if v}


def eval_coeff(coeff: dict, q: complex) -> complex:
    return sum(v * q**p for p, v in coeff.items()) if coeff else 0.0 + 0.0j


# ---------------------------------------------------------------------------
# multivariate polynomials: dict[exponent tuple] -> Z[q] coefficient


def poly_mul(a: dict, b: dict) -> dict:
    out: dict = {}
    for ea, ca in a.items():
        for eb, cb in b.items():
            e = tuple(x + y for x, y in zip(ea, eb))
            c = _c_mul(ca, cb)
            if e in out:
                c = _c_add(out[e], c)
            if c:
                out[e] = c
            else:
                out.pop(e, None)
    return out


def poly_sub(a: dict, b: dict) -> dict:
    out = dict(a)
    for e, c in b.items():
        c2 = _c_add(out.get(e, {}), _c_neg(c))
        if c2:
            out[e] = c2
        else:
            out.pop(e, None)
    return out


def _unit(M: int, k: int, power: int = 1) -> tuple[int, ...]:
    e = [0] * M
    e[k] = power
    return tuple(e)


def expand_x_equation(N: int, M: int, k: int) -> dict:
    """Equation k of the multiplicative system as an exact Z[q] polynomial.

    (q x_k - 1)^{2N} prod_{j!=k} (x_k - q^2 x_j)(x_k x_j - q^2)
    - (x_k - q)^{2N} prod_{j!=k} (q^2 x_k - x_j)(q^2 x_k x_j - 1).
    """
    zero = (0,) * M
    lhs = {
        _unit(M, k, t): {t: comb(2 * N, t) * (-1) ** (2 * N - t)}
        for t in range(2 * N + 1)
    }
    rhs = {
        _unit(M, k, t): {2 * N - t: comb(2 * N, t) * (-1) ** (2 * N - t)}
        for t in range(2 * N + 1)
    }
    ek = _unit(M, k)
    for j in range(M):
        if j == k:
            continue
        ej = _unit(M, j)
        ekj = tuple(a + b for a, b in zip(ek, ej))
        lhs = poly_mul(lhs, {ek: {0: 1}, ej: {2: -1}})
        lhs = poly_mul(lhs, {ekj: {0: 1}, zero: {2: -1}})
        rhs = poly_mul(rhs, {ek: {2: 1}, ej: {0: -1}})
        rhs = poly_mul(rhs, {ekj: {2: 1}, zero: {0: -1}})
    return poly_sub(lhs, rhs)


def expand_xxx_equation(N: int, M: int, k: int) -> dict:
    """Equation k of the isotropic system in lambda, doubled to mu = 2 lambda.

    With q standing for the imaginary unit (reduce mod Phi_4):
    (mu_k + q)^{2N} prod_{j!=k} ((mu_k - 2q)^2 - mu_j^2)
    - (mu_k - q)^{2N} prod_{j!=k} ((mu_k + 2q)^2 - mu_j^2),
    where mu = 2 lambda; the caller substitutes mu -> 2 lambda by scaling each
    term with 2^{total degree}, which leaves the root set in lambda intact.
    """
    zero = (0,) * M
    lhs = {_unit(M, k, t): {2 * N - t: comb(2 * N, t)} for t in range(2 * N + 1)}
    rhs = {
        _unit(M, k, t): {2 * N - t: comb(2 * N, t) * (-1) ** (2 * N - t)}
        for t in range(2 * N + 1)
    }
    ek = _unit(M, k)
    ek2 = _unit(M, k, 2)
    for j in range(M):
        if j == k:
            continue
        ej2 = _unit(M, j, 2)
        lhs = poly_mul(lhs, {ek2: {0: 1}, ek: {1: -4}, zero: {2: 4}, ej2: {0: -1}})
        rhs = poly_mul(rhs, {ek2: {0: 1}, ek: {1: 4}, zero: {2: 4}, ej2: {0: -1}})
    return poly_sub(lhs, rhs)


def deflate_fixed_points(poly: dict, k: int) -> dict:
    """Exact division of equation k by (x_k^2 - 1).

    x_k = +-1 satisfies every multiplicative-variable equation identically in
    q (both sides coincide term by term), so the factor divides out with zero
    remainder; removing it keeps the fixed points from attracting paths.
    """
    groups: dict = {}
    for e, c in poly.items():
        rest = e[:k] + e[k + 1 :]
        groups.setdefault(rest, {})[e[k]] = c
    out: dict = {}
    for rest, col in groups.items():
        top = max(col)
        quot: dict[int, dict] = {}
        for e in range(top, 1, -1):
            c = _c_add(col.get(e, {}), quot.get(e, {}))
            if c:
                quot[e - 2] = c
        for e in (1, 0):
            if _c_add(col.get(e, {}), quot.get(e, {})):
                raise ArithmeticError("remainder of (x_k^2 - 1) division must vanish")
        for e, c in quot.items():
            out[rest[:k] + (e,) + rest[k:]] = c
    return out


def deflate_origin(poly: dict, k: int) -> dict:
    """Exact division of isotropic equation k by mu_k (mu_k = 0 is a root).

    At mu_k = 0 both sides reduce to q^{2N} prod_j (4 q^2 - mu_j^2), so the
    constant-in-mu_k part cancels exactly and the division is a pure shift.
    """
    out: dict = {}
    for e, c in poly.items():
        if e[k] == 0:
            raise ArithmeticError("mu_k^0 coefficient must cancel exactly")
        out[e[:k] + (e[k] - 1,) + e[k + 1 :]] = c
    return out


def numeric_terms(
    poly: dict, q: complex, phi: list[int] | None = None, var_scale: float = 1.0
) -> tuple[list[tuple[int, ...]], list[complex]]:
    """Evaluate Z[q] coefficients at numeric q; exact zeros are dropped.

    var_scale != 1 substitutes x -> var_scale * x by scaling each term with
    var_scale^{total degree} (used for the mu = 2 lambda change of variable).
    """
    expos: list[tuple[int, ...]] = []
    coeffs: list[complex] = []
    for e, c in sorted(poly.items()):
        if phi is not None:
            c = reduce_mod_cyclotomic(c, phi)
        if not c:
            continue
        v = eval_coeff(c, q)
        if var_scale != 1.0:
            v *= var_scale ** sum(e)
        expos.append(e)
        coeffs.append(v)
    return expos, coeffs
