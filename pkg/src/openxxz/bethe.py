"""Bethe equations of the open chain: residuals, admissibility, energies.

Conventions.  In the isotropic regime a solution is a vector of rapidities
lambda_k satisfying

    (l_k + i/2)^{2N} prod_{j!=k} (l_k-l_j-i)(l_k+l_j-i)
  = (l_k - i/2)^{2N} prod_{j!=k} (l_k-l_j+i)(l_k+l_j+i),

in the anisotropic regimes the multiplicative variables x_k = e^{2 lambda_k}
satisfy, with q = e^eta,

    (q x_k - 1)^{2N} prod_{j!=k} (x_k - q^2 x_j)(x_k x_j - q^2)
  = (x_k - q)^{2N} prod_{j!=k} (q^2 x_k - x_j)(q^2 x_k x_j - 1).

Both equations are invariant under reflecting any single root
(lambda -> -lambda, x -> 1/x), so each solution is stored in a canonical
half-space: Re lambda > 0 (ties broken by Im lambda > 0), |x| > 1 (ties on
the unit circle broken by 0 < arg x < pi).

Residuals are sup-norm relative: max_k |lhs_k - rhs_k| / max(1, |lhs_k|,
|rhs_k|).  A vector is admissible when it is canonical, has pairwise
distinct entries, avoids lambda = 0 and the singular points lambda = +-eta/2
(x = q^{+-1}; +-i/2 in the isotropic regime), and at a root of unity
contains no exact p-string {x0, x0 q^2, ..., x0 q^{2(p-1)}}.
"""
from __future__ import annotations

import cmath
import itertools
import math
from dataclasses import dataclass, replace

import numpy as np

from .regimes import XXX_KIND, ROOT_OF_UNITY_KIND, AnisotropyRegime, parse_regime

ADMISSIBLE = "Admissible"
SINGULAR = "SingularExcluded"
ZERO_OR_HALF_PI = "ZeroOrHalfPiExcluded"
COINCIDENT = "Coincident"
P_STRING = "PStringExcluded"
NON_CANONICAL = "NonCanonical"

VERDICTS = (ADMISSIBLE, SINGULAR, ZERO_OR_HALF_PI, COINCIDENT, P_STRING, NON_CANONICAL)

BOUNDARY_TOL = 1e-9
DISTINCT_TOL = 1e-8
P_STRING_TOL = 1e-5  # string points are J = 0 doubles; Newton lands O(sqrt(eps)) off
MAGNITUDE_CAP = 1e8  # beyond this a root stands for a point at infinity


@dataclass(frozen=True)
class SolutionVector:
    """A candidate Bethe root vector with its residual and admissibility verdict.

    roots holds lambda_k in the isotropic regime and x_k otherwise, sorted by
    (Re, Im) after canonicalization.
    """

    regime: AnisotropyRegime
    N: int
    roots: tuple[complex, ...]
    residual: float
    verdict: str

    @property
    def M(self) -> int:
        return len(self.roots)

    def to_json_dict(self) -> dict:
        return {
            "regime": self.regime.key(),
            "N": self.N,
            "M": self.M,
            "roots": [[z.real, z.imag] for z in self.roots],
            "residual": self.residual,
            "verdict": self.verdict,
        }

    @classmethod
    def from_json_dict(cls, d: dict) -> "SolutionVector":
        return cls(
            regime=parse_regime(d["regime"]),
            N=d["N"],
            roots=tuple(complex(re, im) for re, im in d["roots"]),
            residual=float(d["residual"]),
            verdict=d["verdict"],
        )


# ---------------------------------------------------------------------------
# residuals


def residual_xxx(roots, N: int) -> float:
    """Relative sup-norm violation of the isotropic Bethe equations."""
    lam = np.asarray(roots, dtype=complex)
    if lam.size and not np.all(np.isfinite(lam)):
        return math.inf
    worst = 0.0
    with np.errstate(over="ignore", invalid="ignore"):
        for k in range(lam.size):
            lk = lam[k]
            others = np.delete(lam, k)
            lhs = (lk + 0.5j) ** (2 * N) * np.prod((lk - others - 1j) * (lk + others - 1j))
            rhs = (lk - 0.5j) ** (2 * N) * np.prod((lk - others + 1j) * (lk + others + 1j))
            if not (np.isfinite(lhs) and np.isfinite(rhs)):
                return math.inf
            worst = max(worst, abs(lhs - rhs) / max(1.0, abs(lhs), abs(rhs)))
    return worst


def residual_x(roots, regime: AnisotropyRegime, N: int) -> float:
    """Relative sup-norm violation of the multiplicative Bethe equations."""
    if regime.kind == XXX_KIND:
        raise ValueError("use residual_xxx in the isotropic regime")
    x = np.asarray(roots, dtype=complex)
    if x.size and not np.all(np.isfinite(x)):
        return math.inf
    q = regime.q
    q2 = q * q
    worst = 0.0
    with np.errstate(over="ignore", invalid="ignore"):
        for k in range(x.size):
            xk = x[k]
            others = np.delete(x, k)
            lhs = (q * xk - 1) ** (2 * N) * np.prod((xk - q2 * others) * (xk * others - q2))
            rhs = (xk - q) ** (2 * N) * np.prod((q2 * xk - others) * (q2 * xk * others - 1))
            if not (np.isfinite(lhs) and np.isfinite(rhs)):
                return math.inf
            worst = max(worst, abs(lhs - rhs) / max(1.0, abs(lhs), abs(rhs)))
    return worst


def residual(roots, regime: AnisotropyRegime, N: int) -> float:
    return residual_xxx(roots, N) if regime.kind == XXX_KIND else residual_x(roots, regime, N)


# ---------------------------------------------------------------------------
# energy


def energy(sol: SolutionVector, N: int | None = None) -> complex:
    """Bethe-state energy of the open Hamiltonian.

    Isotropic: E = -2 sum_k 1/(lambda_k^2 + 1/4) + N - 1.
    Anisotropic: E = 2 sinh^2(eta) sum_k 1/(sinh(l_k-eta/2) sinh(l_k+eta/2))
    + (N-1) cosh(eta), evaluated through x via
    sinh(l-eta/2) sinh(l+eta/2) = ((x + 1/x)/2 - cosh eta)/2.
    """
    if N is None:
        N = sol.N
    if sol.regime.kind == XXX_KIND:
        total = 0.0 + 0.0j
        for lam in sol.roots:
            d = lam * lam + 0.25
            if abs(d) < 1e-13:
                raise ZeroDivisionError(f"energy pole at lambda = {lam} (singular root)")
            total += 1.0 / d
        return -2.0 * total + (N - 1)
    eta = sol.regime.eta
    ch = cmath.cosh(eta)
    sh2 = cmath.sinh(eta) ** 2
    total = 0.0 + 0.0j
    for x in sol.roots:
        d = ((x + 1.0 / x) / 2.0 - ch) / 2.0
        if abs(d) < 1e-13:
            raise ZeroDivisionError(f"energy pole at x = {x} (singular root)")
        total += 1.0 / d
    return 2.0 * sh2 * total + (N - 1) * ch


def q_polynomial(u, roots, regime: AnisotropyRegime) -> complex:
    """Q(u) attached to a root vector, symmetric under u -> -u-eta.

    Q(u) = prod_k sinh(u-v_k) sinh(u+v_k+eta) with v_k = lambda_k - eta/2,
    evaluated branch-free as prod_k (cosh(2u+eta) - cosh(2 lambda_k))/2 where
    cosh(2 lambda_k) = (x_k + 1/x_k)/2.  Isotropic analogue:
    Q(u) = prod_k ((u + i/2)^2 - lambda_k^2).
    """
    if regime.kind == XXX_KIND:
        return complex(np.prod([(u + 0.5j) ** 2 - lam * lam for lam in roots])) if roots else 1.0 + 0j
    w = cmath.cosh(2 * u + regime.eta)
    return complex(np.prod([(w - (x + 1.0 / x) / 2.0) / 2.0 for x in roots])) if roots else 1.0 + 0j


def transfer_eigenvalue(u, roots, regime: AnisotropyRegime, N: int) -> complex:
    """Transfer-matrix eigenvalue Lambda(u) attached to a Bethe root vector.

    Lambda(u) = sinh(2u+2eta)/sinh(2u+eta) sinh^{2N}(u+eta) Q(u-eta)/Q(u)
              + sinh(2u)/sinh(2u+eta) sinh^{2N}(u) Q(u+eta)/Q(u);
    isotropic:  2/(2u+i) [(u+i)^{2N+1} Q(u-i) + u^{2N+1} Q(u+i)] / Q(u).
    """
    q0 = q_polynomial(u, roots, regime)
    if regime.kind == XXX_KIND:
        qm = q_polynomial(u - 1j, roots, regime)
        qp = q_polynomial(u + 1j, roots, regime)
        return 2.0 / (2 * u + 1j) * ((u + 1j) ** (2 * N + 1) * qm + u ** (2 * N + 1) * qp) / q0
    eta = regime.eta
    qm = q_polynomial(u - eta, roots, regime)
    qp = q_polynomial(u + eta, roots, regime)
    den = cmath.sinh(2 * u + eta)
    return (
        cmath.sinh(2 * u + 2 * eta) * cmath.sinh(u + eta) ** (2 * N) * qm
        + cmath.sinh(2 * u) * cmath.sinh(u) ** (2 * N) * qp
    ) / (den * q0)


# ---------------------------------------------------------------------------
# canonicalization and admissibility


def _canonical_root(z: complex, regime: AnisotropyRegime) -> tuple[complex, bool]:
    """Reflect one root into the canonical half-space; flags a fixed point."""
    if regime.kind == XXX_KIND:
        if abs(z) <= BOUNDARY_TOL:
            return z, True
        if z.real < -BOUNDARY_TOL or (abs(z.real) <= BOUNDARY_TOL and z.imag < 0):
            z = -z
        return z, False
    if abs(z - 1) <= BOUNDARY_TOL or abs(z + 1) <= BOUNDARY_TOL:
        return z, True
    r = abs(z)
    if r < 1.0 / MAGNITUDE_CAP:  # mirror image of a root at infinity
        return z, False
    if r < 1 - BOUNDARY_TOL or (r <= 1 + BOUNDARY_TOL and cmath.phase(z) < 0):
        z = 1 / z
    return z, False


def _in_canonical_domain(z: complex, regime: AnisotropyRegime) -> bool:
    if regime.kind == XXX_KIND:
        return z.real > BOUNDARY_TOL or (z.real >= -BOUNDARY_TOL and z.imag > 0)
    r = abs(z)
    return r > 1 + BOUNDARY_TOL or (r >= 1 - BOUNDARY_TOL and 0 < cmath.phase(z) < math.pi)


def canonicalize(sol: SolutionVector) -> SolutionVector:
    """Reflect every root into the canonical half-space, sort, recompute residual.

    A root sitting on a reflection fixed point (lambda = 0, x = +-1) cannot be
    canonicalized and marks the vector ZeroOrHalfPiExcluded.
    """
    fixed = False
    out = []
    for z in sol.roots:
        zc, hit = _canonical_root(complex(z), sol.regime)
        fixed = fixed or hit
        out.append(zc)
    out.sort(key=lambda z: (z.real, z.imag))
    res = residual(out, sol.regime, sol.N)
    verdict = ZERO_OR_HALF_PI if fixed else sol.verdict
    return replace(sol, roots=tuple(out), residual=res, verdict=verdict)


def root_distance(left, right) -> float:
    """Min over root pairings of the max per-root distance.

    Canonical sorting by (Re, Im) is unstable when two roots share a real
    part to the last bit (conjugate pairs), so set comparisons must pair
    roots as a multiset; exact assignment is cheap at M <= N/2.
    """
    if len(left) != len(right):
        return float("inf")
    best = float("inf")
    for perm in itertools.permutations(range(len(right))):
        d = max((abs(a - right[j]) for a, j in zip(left, perm)), default=0.0)
        best = min(best, d)
    return best


def p_string_image(x0: complex, regime: AnisotropyRegime) -> tuple[complex, ...]:
    """The complete p-string through x0: (x0, x0 q^2, ..., x0 q^{2(p-1)}).

    Built by successive multiplication with the regime's own q^2, so that the
    factors (x_a - q^2 x_b) which vanish identically for string members also
    vanish to the last bit in floating point.
    """
    if regime.kind != ROOT_OF_UNITY_KIND:
        raise ValueError("p-strings only exist at a root of unity")
    q2 = regime.q * regime.q
    out = [complex(x0)]
    for _ in range(regime.p - 1):
        out.append(out[-1] * q2)
    return tuple(out)


def contains_p_string(roots_x, p: int, tol: float = DISTINCT_TOL) -> bool:
    """Detect an exact complete p-string subset {x0 q^{2m}, m = 0..p-1}.

    A subset qualifies when the ratios to one reference element realize all p
    distinct (2p)-th roots of unity that are squares, i.e. all powers q^{2m};
    equivalently all p elements share one p-th power and exhaust the p ratios.
    """
    xs = [complex(z) for z in roots_x]
    if len(xs) < p:
        return False
    for subset in itertools.combinations(range(len(xs)), p):
        ref = xs[subset[0]]
        if abs(ref) < tol:
            continue
        residues = set()
        ok = True
        for idx in subset:
            ratio = xs[idx] / ref
            m = round(p * cmath.phase(ratio) / (2 * math.pi)) % p
            target = cmath.exp(2j * math.pi * m / p)
            if abs(ratio - target) > tol:
                ok = False
                break
            residues.add(m)
        if ok and len(residues) == p:
            return True
    return False


def is_admissible(sol: SolutionVector, distinct_tol: float = DISTINCT_TOL) -> str:
    """Classify a canonicalized vector; returns one of the verdict strings.

    Precedence: fixed points, then singular roots, then coincidences, then
    p-strings.  The singular pair {i/2, -i/2} canonicalizes to a coincident
    pair at +i/2, so the singular check must run first to label it correctly.
    """
    regime = sol.regime
    roots = [complex(z) for z in sol.roots]
    if any(not cmath.isfinite(z) or abs(z) > MAGNITUDE_CAP for z in roots):
        return NON_CANONICAL
    for z in roots:
        _, hit = _canonical_root(z, regime)
        if hit:
            return ZERO_OR_HALF_PI
        if not _in_canonical_domain(z, regime):
            return NON_CANONICAL
    if regime.kind == XXX_KIND:
        singular_pts = [0.5j]
    else:
        q = regime.q
        singular_pts = [q, 1 / q]
    for z in roots:
        for s in singular_pts:
            if abs(z - s) <= distinct_tol * max(1.0, abs(s)):
                return SINGULAR
    for a, b in itertools.combinations(roots, 2):
        if abs(a - b) <= distinct_tol * max(1.0, abs(a)):
            return COINCIDENT
    if regime.kind == ROOT_OF_UNITY_KIND and contains_p_string(
        roots, regime.p, max(P_STRING_TOL, distinct_tol)
    ):
        return P_STRING
    return ADMISSIBLE


def classify(roots, regime: AnisotropyRegime, N: int,
             distinct_tol: float = DISTINCT_TOL) -> SolutionVector:
    """Canonicalize raw roots and attach residual + verdict in one step."""
    raw = SolutionVector(
        regime=regime, N=N, roots=tuple(complex(z) for z in roots),
        residual=math.inf, verdict=NON_CANONICAL,
    )
    sol = canonicalize(raw)
    if sol.verdict == ZERO_OR_HALF_PI:
        return sol
    return replace(sol, verdict=is_admissible(sol, distinct_tol))


def census(solutions, N: int, M: int) -> int:
    """Number of admissible solutions with the given sector labels."""
    return sum(
        1
        for s in solutions
        if s.verdict == ADMISSIBLE and s.N == N and s.M == M
    )
