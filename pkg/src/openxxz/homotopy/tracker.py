"""Total-degree homotopy continuation with a batched predictor-corrector.

The start system is G_k(z) = z_k^{d_k} + 1 with d_k the true expanded degree
of deflated equation k, connected to the target F by H(z, t) =
gamma (1-t) G + t F with a seeded random unit gamma.  All paths advance
together in numpy batches; each carries its own adaptive step size.  One
step is an RK4 prediction along dz/dt = -Hz^{-1} (F - gamma G) followed by
at most max_newton corrections at the new t; a failed correction restores
the saved state and halves the step.  Truncated paths are re-tracked from
scratch with a fresh gamma up to max_retries times.

End states:
  Converged  reached t = 1 and Newton-refined to refine_tol with cond <= 1e12
  Singular   small residual but condition > 1e12 (p-string continua land
             here), or a stall at a point that is already ill-conditioned
  Truncated  step size collapsed below step_min away from any singularity
  Diverged   left the |z| <= divergence_bound ball (roots at infinity)

Every start point is accounted for in exactly one of these states.
"""
from __future__ import annotations

import dataclasses
import math
import os
from dataclasses import dataclass, field

import mpmath as mp
import numpy as np

from .. import bethe
from ..regimes import XXX_KIND, AnisotropyRegime
from .polysys import PolySystem

COND_SINGULAR = 1e12

CONVERGED = "Converged"
DIVERGED = "Diverged"
SINGULAR = "Singular"
TRUNCATED = "Truncated"


@dataclass(frozen=True)
class TrackerConfig:
    seed: int = 0
    step_min: float = 1e-7
    step_max: float = 0.1
    step_init: float = 0.05
    refine_tol: float = 1e-12
    divergence_bound: float = 1e8
    max_newton: int = 3
    corrector_tol: float = 1e-9
    max_sweeps: int = 40000
    chunk: int = 16384
    max_retries: int = 3


@dataclass
class TrackedPath:
    start: np.ndarray
    end: np.ndarray
    status: str
    steps: int
    final_residual: float
    condition_estimate: float


@dataclass
class SolveResult:
    system: PolySystem
    config: TrackerConfig
    paths: list[TrackedPath]
    gamma: complex

    @property
    def tally(self) -> dict[str, int]:
        out = {CONVERGED: 0, DIVERGED: 0, SINGULAR: 0, TRUNCATED: 0}
        for p in self.paths:
            out[p.status] += 1
        return out

    @property
    def converged_endpoints(self) -> list[np.ndarray]:
        return [p.end for p in self.paths if p.status == CONVERGED]


def _start_points(degrees: list[int]) -> np.ndarray:
    """All combinations of d_k-th roots of -1, one row per path.

    Roots of -1 rather than +1: the target system has poles on the deflated
    fixed points z = +-1, which d-th roots of unity would hit exactly.
    """
    axes = [np.exp(1j * np.pi * (2 * np.arange(d) + 1) / d) for d in degrees]
    grids = np.meshgrid(*axes, indexing="ij")
    return np.stack([g.ravel() for g in grids], axis=-1)


class _Homotopy:
    """H(z,t) and its z-Jacobian for one gamma; start system s * (z^d + 1).

    Each start equation carries a constant s_k matching the target equation's
    magnitude on the unit torus (where the start points live).  Without it the
    gauged target values, which grow like 4^N, dominate the mix already at
    t ~ 1e-7 and the entire crossover happens inside one minimum step.
    """

    def __init__(self, system: PolySystem, gamma: complex):
        self.system = system
        self.gamma = gamma
        self.d = np.array(system.degrees, dtype=np.int64)
        M = system.num_vars
        # fixed quasi-random probes make the scale seed-independent
        phases = (0.618033 * np.arange(1, 17)[:, None]
                  + 0.271828 * np.arange(M)[None, :] + 0.137) % 1.0
        probes = np.exp(2j * np.pi * phases)
        with np.errstate(over="ignore", invalid="ignore"):
            fmag = np.abs(self.system.eval_fast(probes))
        gmag = np.abs(probes**self.d + 1.0)
        self.scale = np.median(
            np.where(np.isfinite(fmag), fmag, 0.0), axis=0
        ) / np.maximum(np.median(gmag, axis=0), 1e-6)
        self.scale = np.maximum(self.scale, 1e-300)

    def tangent(self, Z, T):
        """dz/dt = -Hz^{-1} Ht; returns (velocity, bad_mask)."""
        with np.errstate(over="ignore", invalid="ignore"):
            F, JF = self.system.jac_fast(Z)
            G = self.scale * (Z**self.d + 1.0)
            Ht = F - self.gamma * G
            Jz = T[:, None, None] * JF
            diag = self.gamma * (1.0 - T)[:, None] * (
                self.scale * self.d) * Z ** (self.d - 1)
            idx = np.arange(Z.shape[1])
            Jz[:, idx, idx] += diag
        v, bad = _bsolve(Jz, -Ht)
        return v, bad

    def newton_step(self, Z, T):
        """One corrector step at fixed t; returns (delta, bad_mask)."""
        with np.errstate(over="ignore", invalid="ignore"):
            F, JF = self.system.jac_fast(Z)
            G = self.scale * (Z**self.d + 1.0)
            H = self.gamma * (1.0 - T)[:, None] * G + T[:, None] * F
            Jz = T[:, None, None] * JF
            diag = self.gamma * (1.0 - T)[:, None] * (
                self.scale * self.d) * Z ** (self.d - 1)
            idx = np.arange(Z.shape[1])
            Jz[:, idx, idx] += diag
        return _bsolve(Jz, -H)


def _bsolve(A: np.ndarray, b: np.ndarray):
    """Batched linear solve; exactly singular items come back flagged."""
    try:
        return np.linalg.solve(A, b[..., None])[..., 0], None
    except np.linalg.LinAlgError:
        out = np.zeros_like(b)
        bad = np.zeros(b.shape[0], dtype=bool)
        for i in range(b.shape[0]):
            try:
                out[i] = np.linalg.solve(A[i], b[i])
            except np.linalg.LinAlgError:
                bad[i] = True
        return out, bad


def _residuals(system: PolySystem, Z: np.ndarray) -> np.ndarray:
    F, scale = system.eval_scaled(Z)
    return np.max(np.abs(F) / scale, axis=1)


def _conditions(system: PolySystem, Z: np.ndarray) -> np.ndarray:
    _, J = system.jac_fast(Z)
    out = np.empty(Z.shape[0])
    for i in range(Z.shape[0]):
        Ji = J[i]
        if not np.all(np.isfinite(Ji)):
            out[i] = np.inf
            continue
        try:
            out[i] = np.linalg.cond(Ji)
        except np.linalg.LinAlgError:
            out[i] = np.inf
    return out


def solve_all(system: PolySystem, cfg: TrackerConfig | None = None) -> SolveResult:
    """Track every total-degree start point to t = 1 and classify it.

    Paths that truncate (step-size collapse away from any root) are re-run
    from their start points with a fresh gamma: for generic gamma truncation
    is a numerical accident of one path geometry, not a property of the root.
    """
    cfg = cfg or TrackerConfig()
    rng = np.random.default_rng(cfg.seed)
    gamma = np.exp(2j * np.pi * rng.random())
    starts = _start_points(system.degrees)
    paths = _track_batch(system, starts, gamma, cfg)
    for _ in range(cfg.max_retries):
        bad = [i for i, p in enumerate(paths) if p.status == TRUNCATED]
        if not bad:
            break
        retry_gamma = np.exp(2j * np.pi * rng.random())
        redone = _track_batch(system, starts[bad], retry_gamma, cfg)
        for i, p in zip(bad, redone):
            paths[i] = p
    return SolveResult(system=system, config=cfg, paths=paths, gamma=gamma)


def _track_batch(
    system: PolySystem, starts: np.ndarray, gamma: complex, cfg: TrackerConfig
) -> list[TrackedPath]:
    paths: list[TrackedPath] = [None] * starts.shape[0]  # type: ignore[list-item]
    n_threads = int(os.environ.get("OPENXXZ_THREADS", "1") or "1")
    chunks = [
        (lo, min(lo + cfg.chunk, starts.shape[0]))
        for lo in range(0, starts.shape[0], cfg.chunk)
    ]
    if n_threads > 1 and len(chunks) > 1:
        from concurrent.futures import ThreadPoolExecutor

        def run(span):
            lo, hi = span
            return lo, _track_chunk(system, starts[lo:hi], gamma, cfg)

        with ThreadPoolExecutor(max_workers=n_threads) as ex:
            for lo, got in ex.map(run, chunks):
                paths[lo : lo + len(got)] = got
    else:
        for lo, hi in chunks:
            paths[lo:hi] = _track_chunk(system, starts[lo:hi], gamma, cfg)
    return paths


def _track_chunk(
    system: PolySystem, starts: np.ndarray, gamma: complex, cfg: TrackerConfig
) -> list[TrackedPath]:
    hom = _Homotopy(system, gamma)
    B, M = starts.shape
    Z = starts.astype(complex).copy()
    T = np.zeros(B)
    h = np.full(B, cfg.step_init)
    streak = np.zeros(B, dtype=np.int64)
    steps = np.zeros(B, dtype=np.int64)
    status = np.array([""] * B, dtype=object)
    active = np.ones(B, dtype=bool)

    for _ in range(cfg.max_sweeps):
        idx = np.flatnonzero(active)
        if idx.size == 0:
            break
        z = Z[idx]
        t = T[idx]
        hs = np.minimum(h[idx], 1.0 - t)

        # RK4 prediction along the path tangent
        ok = np.ones(idx.size, dtype=bool)
        k1, bad = hom.tangent(z, t)
        ok &= _finite_rows(k1, bad)
        k2, bad = hom.tangent(z + 0.5 * hs[:, None] * k1, t + 0.5 * hs)
        ok &= _finite_rows(k2, bad)
        k3, bad = hom.tangent(z + 0.5 * hs[:, None] * k2, t + 0.5 * hs)
        ok &= _finite_rows(k3, bad)
        k4, bad = hom.tangent(z + hs[:, None] * k3, t + hs)
        ok &= _finite_rows(k4, bad)
        zp = z + (hs / 6.0)[:, None] * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        tp = t + hs

        # Newton corrections at the new t
        dnorm = np.full(idx.size, np.inf)
        for _ in range(cfg.max_newton):
            delta, bad = hom.newton_step(zp, tp)
            ok &= _finite_rows(delta, bad)
            zp = zp + delta
            dnorm = np.max(np.abs(delta), axis=1) / np.maximum(
                1.0, np.max(np.abs(zp), axis=1)
            )
        ok &= np.isfinite(dnorm) & (dnorm <= cfg.corrector_tol)
        ok &= np.all(np.isfinite(zp), axis=1)

        # accept
        acc = idx[ok]
        Z[acc] = zp[ok]
        T[acc] = tp[ok]
        steps[acc] += 1
        streak[acc] += 1
        grow = acc[streak[acc] >= 4]
        h[grow] = np.minimum(h[grow] * 2.0, cfg.step_max)
        streak[grow] = 0

        # reject
        rej = idx[~ok]
        streak[rej] = 0
        h[rej] *= 0.5

        # divergence
        big = acc[np.max(np.abs(Z[acc]), axis=1) > cfg.divergence_bound]
        status[big] = DIVERGED
        active[big] = False

        # arrival
        done = acc[T[acc] >= 1.0 - 1e-12]
        active[done] = False

        # stall
        stalled = rej[h[rej] < cfg.step_min]
        status[stalled] = "stall"
        active[stalled] = False

    # anything still active ran out of sweeps: treat as a stall
    leftover = np.flatnonzero(active)
    status[leftover] = "stall"

    return _finalize(system, starts, Z, T, status, steps, cfg)


def _finite_rows(arr: np.ndarray, bad) -> np.ndarray:
    ok = np.all(np.isfinite(arr), axis=1)
    if bad is not None:
        ok &= ~bad
    return ok


def _finalize(
    system: PolySystem,
    starts: np.ndarray,
    Z: np.ndarray,
    T: np.ndarray,
    status: np.ndarray,
    steps: np.ndarray,
    cfg: TrackerConfig,
) -> list[TrackedPath]:
    """Endgame refinement at t = 1 and final classification of every path.

    Paths that stalled within t >= 0.99 of arrival are pushed through the
    same endgame: multiple roots (the singular Bethe solutions) attract
    whole bundles of paths whose corrector dies just short of t = 1, and
    they should be reported as Singular endpoints, not tracking failures.
    """
    paths: list[TrackedPath] = []
    for g in np.flatnonzero(status == DIVERGED):
        paths.append(
            TrackedPath(starts[g], Z[g], DIVERGED, int(steps[g]), math.inf, math.inf)
        )
    endgame = np.flatnonzero((status == "") | ((status == "stall") & (T >= 0.99)))
    if endgame.size:
        # tol 0: iterate to the noise floor so duplicate endpoints coincide
        # to well below the dedupe tolerance
        Zr, res = _newton_refine(system, Z[endgame], 0.0, 60)
        Z[endgame] = Zr
        conds = _conditions(system, Zr)
        for i, g in enumerate(endgame):
            # double-precision Newton stalls near eps * cond, so a genuinely
            # isolated but ill-conditioned root (a wide pair a +- i(1/2 - e))
            # cannot reach the nominal tol; certification in dedupe is the
            # final arbiter for anything accepted here
            cut = max(cfg.refine_tol, RESIDUAL_PER_COND * conds[i])
            if np.max(np.abs(Z[g])) > cfg.divergence_bound:
                status[g] = DIVERGED
            elif res[i] <= cut and conds[i] <= COND_SINGULAR:
                status[g] = CONVERGED
            elif res[i] <= 1e-6:
                status[g] = SINGULAR
            else:
                status[g] = TRUNCATED
            paths.append(
                TrackedPath(starts[g], Z[g], status[g], int(steps[g]), float(res[i]),
                            float(conds[i]))
            )
    stalls = np.flatnonzero(status == "stall")
    if stalls.size:
        res = _residuals(system, Z[stalls])
        conds = _conditions(system, Z[stalls])
        for i, g in enumerate(stalls):
            status[g] = SINGULAR if conds[i] > COND_SINGULAR else TRUNCATED
            paths.append(
                TrackedPath(starts[g], Z[g], status[g], int(steps[g]), float(res[i]),
                            float(conds[i]))
            )
    return paths


def _newton_refine(
    system: PolySystem, Z: np.ndarray, tol: float, max_iter: int
) -> tuple[np.ndarray, np.ndarray]:
    """Plain Newton on F = 0; returns refined points and their residuals."""
    Z = Z.copy()
    res = _residuals(system, Z)
    for _ in range(max_iter):
        todo = np.flatnonzero((res > tol) & np.isfinite(res))
        if todo.size == 0:
            break
        F, J = system.jac_fast(Z[todo])
        delta, bad = _bsolve(J, -F)
        if bad is not None:
            delta[bad] = 0.0
        znew = Z[todo] + delta
        rnew = np.where(
            np.all(np.isfinite(znew), axis=1), _residuals(system, znew), np.inf
        )
        improved = rnew < res[todo]
        upd = todo[improved]
        Z[upd] = znew[improved]
        res[upd] = rnew[improved]
        if not improved.any():
            break
    return Z, res


def refine(point, system: PolySystem, tol: float = 1e-12, max_iter: int = 50) -> TrackedPath:
    """Newton-refine a single point against the target system and classify it."""
    Z = np.atleast_2d(np.asarray(point, dtype=complex))
    Zr, res = _newton_refine(system, Z, tol, max_iter)
    cond = float(_conditions(system, Zr)[0])
    if res[0] <= tol and cond <= COND_SINGULAR:
        status = CONVERGED
    elif res[0] <= 1e-6:
        status = SINGULAR
    else:
        status = TRUNCATED
    return TrackedPath(Z[0], Zr[0], status, 0, float(res[0]), cond)


CERT_TOL = 1e-30  # multiprecision relative residual a genuine root must reach
SINGULAR_HALO = 1e-3  # polished roots this close to a singular point are its basin


def dedupe(endpoints, regime: AnisotropyRegime, N: int, tol: float = 1e-8,
           system: PolySystem | None = None) -> list[bethe.SolutionVector]:
    """Canonicalize, classify, and merge endpoint duplicates.

    Two endpoints are the same solution when, after canonicalization, the
    roots match as multisets within tol relative; the representative with the
    smallest residual survives.  When the system is supplied, every admissible
    class is certified by a multiprecision polish: a genuine isolated root
    drives the relative residual to ~0 and stays in place, while points from
    the exponentially flat basin around an excluded singular solution cannot,
    and are demoted to Singular.
    """
    classified = [bethe.classify(pt, regime, N) for pt in endpoints]
    kept = _merge(classified, tol)
    if system is not None:
        kept = _merge([_certify(sol, system) for sol in kept], tol)
    kept.sort(key=lambda s: (s.verdict, [(z.real, z.imag) for z in s.roots]))
    return kept


def _merge(sols: list[bethe.SolutionVector], tol: float) -> list[bethe.SolutionVector]:
    kept: list[bethe.SolutionVector] = []
    for sol in sorted(sols, key=lambda s: s.residual):
        dup = any(
            sol.M == other.M and _roots_match(sol.roots, other.roots, tol)
            for other in kept
        )
        if not dup:
            kept.append(sol)
    return kept


def _certify(sol: bethe.SolutionVector, system: PolySystem) -> bethe.SolutionVector:
    if sol.verdict != bethe.ADMISSIBLE:
        return sol
    polished, res_mp = _mp_polish(sol.roots, system)
    redone = bethe.classify(polished, system.regime, system.N)
    if redone.verdict != bethe.ADMISSIBLE:
        return redone
    if res_mp > CERT_TOL or _in_singular_halo(redone.roots, system.regime):
        return dataclasses.replace(redone, verdict=bethe.SINGULAR)
    return redone


def _in_singular_halo(roots, regime: AnisotropyRegime) -> bool:
    if regime.kind == XXX_KIND:
        pts = [0.5j, -0.5j]
    else:
        pts = [regime.q, 1 / regime.q]
    return any(
        abs(z - s) <= SINGULAR_HALO * max(1.0, abs(s)) for z in roots for s in pts
    )


def _roots_match(a, b, tol: float) -> bool:
    """Multiset match: sorting can swap near-tied roots, so pair greedily."""
    if len(a) != len(b):
        return False
    used = [False] * len(b)
    for x in a:
        for i, y in enumerate(b):
            if not used[i] and abs(x - y) <= tol * max(1.0, abs(x)):
                used[i] = True
                break
        else:
            return False
    return True


def polish(roots, system: PolySystem, digits: int = 40, max_iter: int = 60):
    """Multiprecision Newton polish of one solution (product-form evaluation)."""
    return _mp_polish(roots, system, digits, max_iter)[0]


def _mp_polish(roots, system: PolySystem, digits: int = 40,
               max_iter: int = 60) -> tuple[list[complex], float]:
    """(polished roots, final relative residual of the undeflated equations)."""
    with mp.workdps(digits):
        if system.kind == XXX_KIND:
            q = None
        else:
            eta = system.regime.eta
            q = mp.exp(mp.mpc(eta.real, eta.imag))
        z = [mp.mpc(r) for r in roots]
        tol = mp.mpf(10) ** (-(digits - 8))
        for _ in range(max_iter):
            F, J, _ = _mp_system(system, z, q)
            try:
                delta = mp.lu_solve(J, [-f for f in F])
            except ZeroDivisionError:
                break
            z = [zi + di for zi, di in zip(z, delta)]
            if max(abs(d) for d in delta) < tol * max(1, max(abs(v) for v in z)):
                break
        _, _, res = _mp_system(system, z, q)
        return [complex(v) for v in z], float(res)


def _mp_system(system: PolySystem, z, q):
    """(F, J, residual) of the deflated system in mpmath arithmetic.

    The residual reported is the relative one of the physical equations,
    max_k |lhs_k - rhs_k| / max(1, |lhs_k|, |rhs_k|), before deflation.
    """
    M = len(z)
    N = system.N
    F = []
    res = mp.mpf(0)
    J = mp.zeros(M, M)
    for k in range(M):
        if system.kind == XXX_KIND:
            mu = [2 * v for v in z]
            sides = []
            for s in (1, -1):
                val = (mu[k] + s * mp.mpc(0, 1)) ** (2 * N)
                grad = [mp.mpc(0)] * M
                grad[k] = 2 * N * (mu[k] + s * mp.mpc(0, 1)) ** (2 * N - 1) * 2
                for j in range(M):
                    if j == k:
                        continue
                    f = (mu[k] - s * mp.mpc(0, 2)) ** 2 - mu[j] ** 2
                    dfk = 2 * (mu[k] - s * mp.mpc(0, 2)) * 2
                    dfj = -2 * mu[j] * 2
                    grad = [g * f for g in grad]
                    grad[k] += val * dfk
                    grad[j] += val * dfj
                    val = val * f
                sides.append((val, grad))
            (lv, lg), (rv, rg) = sides
        else:
            q2 = q * q
            xk = z[k]
            lv = (q * xk - 1) ** (2 * N)
            lg = [mp.mpc(0)] * M
            lg[k] = 2 * N * q * (q * xk - 1) ** (2 * N - 1)
            rv = (xk - q) ** (2 * N)
            rg = [mp.mpc(0)] * M
            rg[k] = 2 * N * (xk - q) ** (2 * N - 1)
            for j in range(M):
                if j == k:
                    continue
                xj = z[j]
                for fv, fk, fj, which in (
                    (xk - q2 * xj, 1, -q2, "l"),
                    (xk * xj - q2, xj, xk, "l"),
                    (q2 * xk - xj, q2, -1, "r"),
                    (q2 * xk * xj - 1, q2 * xj, q2 * xk, "r"),
                ):
                    if which == "l":
                        lg = [g * fv for g in lg]
                        lg[k] += lv * fk
                        lg[j] += lv * fj
                        lv = lv * fv
                    else:
                        rg = [g * fv for g in rg]
                        rg[k] += rv * fk
                        rg[j] += rv * fj
                        rv = rv * fv
        if system.kind == XXX_KIND:
            g, gp = 2 * z[k], 2
        else:
            g, gp = z[k] * z[k] - 1, 2 * z[k]
        raw = lv - rv
        res = max(res, abs(raw) / max(mp.mpf(1), abs(lv), abs(rv)))
        F.append(raw / g)
        for m in range(M):
            J[k, m] = (lg[m] - rg[m]) / g
        J[k, k] -= raw * gp / (g * g)
    return F, J, res
