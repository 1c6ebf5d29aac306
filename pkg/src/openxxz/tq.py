"""Baxter T-Q route: eigenvalue curves, Q-polynomials, and Bethe roots."""
import cmath
from dataclasses import dataclass

import numpy as np

from openxxz import bethe, chain, repcount
from openxxz.regimes import ROOT_OF_UNITY_KIND, XXX_KIND, AnisotropyRegime

CIRCLE_CENTER = 0.3 + 0.0j
CIRCLE_RADIUS = 0.15
HELD_OUT = 5  # trailing samples reserved for the residual check, never solved on
CURVE_CHECK = 1e-8
CURVE_REJECT = 1e-6
NULL_ACCEPT = 1e-10  # sigma_min below this (relative) certifies a nullspace vector
NULL_GAP = 1e-6  # sigma_2 above this (relative) certifies it is one-dimensional


class NoQPolynomial(ValueError):
    """The sample matrix has no nullspace at this degree."""


class AmbiguousQPolynomial(ValueError):
    """The sample matrix nullspace has dimension two or more."""


def _w(u, regime: AnisotropyRegime) -> complex:
    """Symmetric variable in which Q is a genuine degree-M polynomial."""
    if regime.kind == XXX_KIND:
        return u * (u + 1j)
    return cmath.cosh(2 * u + regime.eta)


def _shift(regime: AnisotropyRegime) -> complex:
    return 1j if regime.kind == XXX_KIND else regime.eta


def _ab(u, regime: AnisotropyRegime, N: int) -> tuple[complex, complex]:
    """Dressing coefficients a, b of Lambda(u) Q(u) = a Q(u-eta) + b Q(u+eta)."""
    if regime.kind == XXX_KIND:
        den = 2 * u + 1j
        return 2 * (u + 1j) ** (2 * N + 1) / den, 2 * u ** (2 * N + 1) / den
    eta = regime.eta
    den = cmath.sinh(2 * u + eta)
    a = cmath.sinh(2 * u + 2 * eta) * cmath.sinh(u + eta) ** (2 * N) / den
    b = cmath.sinh(2 * u) * cmath.sinh(u) ** (2 * N) / den
    return a, b


def default_samples(N: int) -> tuple[complex, ...]:
    """Sample points on the circle |u - 0.3| = 0.15, clear of the a, b poles."""
    count = 2 * (N // 2) + 4 + 2 + HELD_OUT
    return tuple(CIRCLE_CENTER + CIRCLE_RADIUS * cmath.exp(2j * cmath.pi * k / count)
                 for k in range(count))


@dataclass(frozen=True)
class EigenCurve:
    """Lambda(u) samples read off one transfer-matrix eigenvector."""

    N: int
    regime: AnisotropyRegime
    M: int
    samples: tuple[tuple[complex, complex], ...]
    source_vector: int
    shared: int
    residual: float

    def value_at(self, u, tol: float = 1e-9) -> complex:
        for us, lam in self.samples:
            if abs(us - u) < tol:
                return lam
        raise ValueError(f"u = {u} is not a sample point of this curve")


def eigen_curves(N: int, regime: AnisotropyRegime,
                 u_samples: tuple[complex, ...] | None = None) -> list[EigenCurve]:
    """One Lambda(u) curve per distinct eigenvalue of t(u0).

    Eigenvectors of t(u0) are computed once per S^z sector; each eigenvalue
    cluster is represented by an ordinary eigenvector from its top-S^z sector
    (inside a Jordan cluster the top sector holds only head states, which are
    simultaneous eigenvectors of the whole commuting family).  Lambda(u_i) is
    the dominant-component ratio of t(u_i)|v> to |v>, validated componentwise.
    """
    if u_samples is None:
        u_samples = default_samples(N)
    shift = _shift(regime)
    for u in u_samples:
        for probe in (u, u - shift, u + shift):
            try:
                a, b = _ab(probe, regime, N)
            except ZeroDivisionError:
                a = b = complex("inf")
            if not (np.isfinite(a) and np.isfinite(b)):
                raise ValueError(f"sample u = {u} hits a pole of the dressing factors")
    t0 = chain.transfer_matrix(chain.SAMPLE_U0, N, regime)
    scale = np.linalg.norm(t0, ord="fro")
    diag = chain.sz_diagonal(N).diagonal().real
    twosz = np.rint(2 * diag).astype(int)
    sectors = {}
    values, labels = [], []
    for t in sorted(set(twosz.tolist()), reverse=True):
        idx = np.flatnonzero(twosz == t)
        block = t0[np.ix_(idx, idx)]
        sectors[t] = (idx, block)
        for v in np.linalg.eigvals(block):
            values.append(v)
            labels.append(t)
    values = np.asarray(values)
    labels = np.asarray(labels)
    dim = 1 << N
    reps = []  # (cluster value, M, source index, shared count, full-space vector)
    for members in chain._cluster_values(values, chain.CLUSTER_SCALE * scale):
        value = complex(np.mean(values[members]))
        top = int(max(labels[members]))
        idx, block = sectors[top]
        shifted = block - value * np.eye(block.shape[0])
        kernel, _ = chain._null_basis(shifted, scale * dim * chain.RANK_SCALE)
        if kernel.shape[1] == 0:
            # fall back to the least-singular direction rather than guess a cut
            kernel = np.linalg.svd(shifted)[2][-1:].conj().T
        vec = np.zeros(dim, dtype=complex)
        vec[idx] = kernel[:, -1]
        source = int(next(m for m in members if labels[m] == top))
        reps.append((value, (N - top) // 2, source, len(members), vec))
    curves = []
    lams = np.zeros((len(reps), len(u_samples)), dtype=complex)
    residuals = np.zeros(len(reps))
    for j, u in enumerate(u_samples):
        tu = chain.transfer_matrix(u, N, regime)
        for i, (_, _, _, _, vec) in enumerate(reps):
            image = tu @ vec
            k = int(np.argmax(np.abs(vec)))
            lam = image[k] / vec[k]
            dev = np.max(np.abs(image - lam * vec)) / max(abs(lam) * np.max(np.abs(vec)), 1e-300)
            lams[i, j] = lam
            residuals[i] = max(residuals[i], dev)
    for i, (value, M, source, shared, _) in enumerate(reps):
        if residuals[i] > CURVE_REJECT:
            raise ValueError(
                f"curve at Lambda(u0) = {value}: component ratio inconsistency "
                f"{residuals[i]:.2e} exceeds {CURVE_REJECT}")
        curves.append(EigenCurve(
            N=N, regime=regime, M=M,
            samples=tuple(zip(u_samples, lams[i])),
            source_vector=source, shared=shared, residual=float(residuals[i])))
    curves.sort(key=lambda c: (c.M, c.samples[0][1].real, c.samples[0][1].imag))
    return curves


@dataclass(frozen=True)
class QPolynomial:
    """Monic degree-M polynomial in w whose roots encode the Bethe roots."""

    N: int
    regime: AnisotropyRegime
    M: int
    coefficients: tuple[complex, ...]  # ascending in w, leading one is 1
    residual: float

    def evaluate_w(self, w) -> complex:
        acc = 0.0 + 0.0j
        for c in reversed(self.coefficients):
            acc = acc * w + c
        return acc

    def evaluate(self, u) -> complex:
        return self.evaluate_w(_w(u, self.regime))


def _tq_row(u, lam, M: int, regime: AnisotropyRegime, N: int) -> tuple[np.ndarray, float]:
    shift = _shift(regime)
    a, b = _ab(u, regime, N)
    w0, wm, wp = _w(u, regime), _w(u - shift, regime), _w(u + shift, regime)
    row = np.array([lam * w0**m - a * wm**m - b * wp**m for m in range(M + 1)])
    magnitude = max(abs(lam * w0**m) + abs(a * wm**m) + abs(b * wp**m)
                    for m in range(M + 1))
    return row, magnitude


def solve_tq(curve: EigenCurve, M: int, regime: AnisotropyRegime) -> QPolynomial:
    """Monic Q from the nullspace of the sampled T-Q relation.

    The relation Lambda(u) Q(u) = a(u) Q(u-eta) + b(u) Q(u+eta) is linear and
    homogeneous in the M+1 coefficients of Q in the w variable; the sample
    matrix must have a one-dimensional nullspace (sigma_min < 1e-10 sigma_max
    and sigma_2 > 1e-6 sigma_max), checked afterwards on held-out points.
    """
    if regime.key() != curve.regime.key():
        raise ValueError("curve was sampled in a different regime")
    N = curve.N
    held = curve.samples[-HELD_OUT:] if len(curve.samples) > HELD_OUT + M + 2 else ()
    pool = curve.samples[:len(curve.samples) - len(held)]
    if len(pool) < M + 2:
        raise ValueError(f"need at least {M + 2} samples for degree M = {M}, have {len(pool)}")
    rows = pool[:min(2 * M + 4, len(pool))]
    built = [_tq_row(u, lam, M, regime, N) for u, lam in rows]
    A = np.array([row for row, _ in built])
    sv = np.linalg.svd(A, compute_uv=False)
    # anchor the rank test on the term magnitude before cancellation: a fully
    # null matrix (every column a solution, e.g. the M = 0 curve) has no
    # meaningful sigma_max of its own
    scale = max(sv[0], max(mag for _, mag in built))
    if sv[-1] >= NULL_ACCEPT * scale:
        raise NoQPolynomial(
            f"no degree-{M} Q: sigma_min/scale = {sv[-1] / scale:.2e}")
    if M + 1 >= 2 and sv[-2] <= NULL_GAP * scale:
        raise AmbiguousQPolynomial(
            f"degree-{M} Q is not unique: sigma_2/scale = {sv[-2] / scale:.2e}")
    coeff = np.linalg.svd(A)[2][-1].conj()
    lead = coeff[-1]
    if abs(lead) < 1e-8 * np.max(np.abs(coeff)):
        raise NoQPolynomial(f"degree-{M} nullspace vector has vanishing leading coefficient")
    coeff = coeff / lead
    worst = 0.0
    for u, lam in (held if held else rows):
        shiftv = _shift(regime)
        a, b = _ab(u, regime, N)
        q0 = complex(np.polyval(coeff[::-1], _w(u, regime)))
        qm = complex(np.polyval(coeff[::-1], _w(u - shiftv, regime)))
        qp = complex(np.polyval(coeff[::-1], _w(u + shiftv, regime)))
        num = abs(lam * q0 - a * qm - b * qp)
        den = max(abs(lam * q0), abs(a * qm), abs(b * qp), 1e-300)
        worst = max(worst, num / den)
    if worst > CURVE_CHECK:
        raise NoQPolynomial(f"degree-{M} Q fails held-out residual check: {worst:.2e}")
    return QPolynomial(N=N, regime=regime, M=M,
                       coefficients=tuple(complex(c) for c in coeff), residual=worst)


def roots_to_bethe(Q: QPolynomial, regime: AnisotropyRegime) -> bethe.SolutionVector:
    """Invert the w-roots of Q to canonical Bethe roots and classify them.

    XXZ: x solves x^2 - 2 w x + 1 = 0 (the two branches are x and 1/x, the
    same canonical root); isotropic: lambda = sqrt(w - 1/4), sign fixed by
    canonicalization.
    """
    if regime.key() != Q.regime.key():
        raise ValueError("Q was solved in a different regime")
    if Q.M == 0:
        return bethe.classify((), regime, Q.N)
    wk = np.roots(list(Q.coefficients[::-1]))
    roots = []
    for w in wk:
        if regime.kind == XXX_KIND:
            roots.append(cmath.sqrt(w - 0.25))
        else:
            roots.append(w + cmath.sqrt(w * w - 1.0))
    return bethe.classify(tuple(roots), regime, Q.N)


def solve_sector(N: int, M: int, regime: AnisotropyRegime,
                 curves: list[EigenCurve] | None = None,
                 polish: bool = True) -> list[bethe.SolutionVector]:
    """All admissible solutions of one magnon sector via the T-Q route.

    Inverting the Q-polynomial roots back to Bethe roots is ill-conditioned
    near |x| = 1, so by default each solution gets a multiprecision Newton
    polish on the Bethe system itself.
    """
    if curves is None:
        curves = eigen_curves(N, regime)
    out = []
    for curve in (c for c in curves if c.M == M):
        sol = roots_to_bethe(solve_tq(curve, M, regime), regime)
        if sol.verdict == bethe.ADMISSIBLE:
            out.append(sol)
    if polish and M > 0 and out:
        from openxxz import homotopy

        if regime.kind == XXX_KIND:
            system = homotopy.build_system_xxx(N, M)
        else:
            system = homotopy.build_system_x(N, M, regime)
        out = [bethe.classify(tuple(homotopy.polish(sol.roots, system)), regime, N)
               for sol in out]
    out.sort(key=lambda s: tuple((z.real, z.imag) for z in s.roots))
    return out


@dataclass(frozen=True)
class CrossValidation:
    """Set comparison of T-Q-derived and homotopy-derived admissible roots."""

    N: int
    M: int
    regime: AnisotropyRegime
    curves: tuple[dict, ...]
    matched: bool
    count_expected: int
    tq_roots: tuple[tuple[complex, ...], ...]
    homotopy_roots: tuple[tuple[complex, ...], ...]
    missing_from_tq: tuple[tuple[complex, ...], ...]
    missing_from_homotopy: tuple[tuple[complex, ...], ...]

    def to_json_dict(self) -> dict:
        return {
            "N": self.N,
            "M": self.M,
            "regime": self.regime.key(),
            "curves": list(self.curves),
            "matchedAgainstHomotopy": self.matched,
            "countExpected": self.count_expected,
            "missingFromTq": [[[z.real, z.imag] for z in r] for r in self.missing_from_tq],
            "missingFromHomotopy": [[[z.real, z.imag] for z in r]
                                    for r in self.missing_from_homotopy],
        }


def _match_sets(left, right, tol: float = 1e-8):
    """Greedy pairing of canonical root tuples; returns the unmatched residue."""
    right = list(right)
    missing = []
    for roots in left:
        scale = max(1.0, max((abs(z) for z in roots), default=0.0))
        hit = None
        for i, other in enumerate(right):
            if bethe.root_distance(roots, other) <= tol * scale:
                hit = i
                break
        if hit is None:
            missing.append(roots)
        else:
            right.pop(hit)
    return missing, right


def expected_count(N: int, M: int, regime: AnisotropyRegime,
                   corr: repcount.DegeneracyCorrections | None = None) -> int:
    """Predicted number of admissible solutions in the (N, M) sector."""
    if regime.kind != ROOT_OF_UNITY_KIND:
        return repcount.count_generic(N, M)
    p = regime.p
    if corr is None:
        corr = repcount.p2_corrections(N) if p == 2 else chain.measure_njk(N, p)
    return repcount.count_root_of_unity(N, M, p, corr)


def cross_validate(N: int, M: int, regime: AnisotropyRegime, seed: int = 0,
                   corr: repcount.DegeneracyCorrections | None = None) -> CrossValidation:
    """Solve one sector both ways and compare root sets and counts."""
    from openxxz import homotopy

    curves = eigen_curves(N, regime)
    rows, tq_sols = [], []
    for curve in (c for c in curves if c.M == M):
        try:
            sol = roots_to_bethe(solve_tq(curve, M, regime), regime)
            verdict, roots, residual = sol.verdict, sol.roots, sol.residual
            if verdict == bethe.ADMISSIBLE:
                tq_sols.append(sol)
        except AmbiguousQPolynomial:
            verdict, roots, residual = "AmbiguousQ", (), float("nan")
        except NoQPolynomial:
            verdict, roots, residual = "NoQ", (), float("nan")
        rows.append({"M": M, "roots": [[z.real, z.imag] for z in roots],
                     "residual": residual, "verdict": verdict})
    if M == 0:
        homo = [bethe.classify((), regime, N)]
    else:
        if regime.kind == XXX_KIND:
            system = homotopy.build_system_xxx(N, M)
        else:
            system = homotopy.build_system_x(N, M, regime)
        result = homotopy.solve_all(system, homotopy.TrackerConfig(seed=seed))
        sols = homotopy.dedupe(result.converged_endpoints, regime, N, system=system)
        homo = [s for s in sols if s.verdict == bethe.ADMISSIBLE]
    tq_roots = tuple(s.roots for s in tq_sols)
    homo_roots = tuple(s.roots for s in sorted(
        homo, key=lambda s: tuple((z.real, z.imag) for z in s.roots)))
    missing_tq, missing_homo = _match_sets(homo_roots, tq_roots)
    count = expected_count(N, M, regime, corr)
    matched = not missing_tq and not missing_homo and len(tq_roots) == count
    return CrossValidation(
        N=N, M=M, regime=regime, curves=tuple(rows), matched=matched,
        count_expected=count, tq_roots=tq_roots, homotopy_roots=homo_roots,
        missing_from_tq=tuple(missing_tq), missing_from_homotopy=tuple(missing_homo))
