"""Census and degeneracy tables with bracketed deviation rendering."""
from dataclasses import dataclass

from openxxz import bethe, repcount, tq
from openxxz.regimes import ROOT_OF_UNITY_KIND, XXX_KIND, AnisotropyRegime

DEFAULT_PATH_BUDGET = 100_000  # total-degree start systems beyond this route via T-Q

ROUTE_VACUUM = "vacuum"
ROUTE_CLOSED_FORM = "closed-form"
ROUTE_HOMOTOPY = "homotopy"
ROUTE_TQ = "tq"


class BudgetExceeded(RuntimeError):
    """Requested route needs more start paths than the configured budget."""


def path_estimate(N: int, M: int, regime: AnisotropyRegime) -> int:
    """Start-path count of the total-degree homotopy for one sector."""
    if M == 0:
        return 0
    from openxxz import homotopy

    if regime.kind == XXX_KIND:
        system = homotopy.build_system_xxx(N, M)
    else:
        system = homotopy.build_system_x(N, M, regime)
    return system.total_paths


def solve_sector(N: int, M: int, regime: AnisotropyRegime, seed: int = 0,
                 budget: int = DEFAULT_PATH_BUDGET, route: str = "auto",
                 curves=None) -> tuple[list[bethe.SolutionVector], str]:
    """(admissible solutions, route used) for one magnon sector.

    route "auto" runs the homotopy when its start system fits the path
    budget and falls back to the T-Q route otherwise; "homotopy" refuses
    instead of falling back; "tq" forces the transfer-spectrum route.
    """
    if route not in ("auto", "homotopy", "tq"):
        raise ValueError(f"unknown route {route!r}")
    if M == 0:
        sol = bethe.classify((), regime, N)
        return ([sol] if sol.verdict == bethe.ADMISSIBLE else []), ROUTE_VACUUM
    if route == "tq":
        return tq.solve_sector(N, M, regime, curves=curves), ROUTE_TQ
    paths = path_estimate(N, M, regime)
    if paths > budget:
        if route == "homotopy":
            raise BudgetExceeded(
                f"sector (N={N}, M={M}) needs {paths} start paths, budget is {budget}")
        return tq.solve_sector(N, M, regime, curves=curves), ROUTE_TQ
    from openxxz import homotopy

    if regime.kind == XXX_KIND:
        system = homotopy.build_system_xxx(N, M)
    else:
        system = homotopy.build_system_x(N, M, regime)
    result = homotopy.solve_all(system, homotopy.TrackerConfig(seed=seed))
    sols = homotopy.dedupe(result.converged_endpoints, regime, N, system=system)
    out = [s for s in sols if s.verdict == bethe.ADMISSIBLE]
    out.sort(key=lambda s: tuple((z.real, z.imag) for z in s.roots))
    return out, ROUTE_HOMOTOPY


@dataclass(frozen=True)
class CensusRow:
    """Measured admissible counts for one N, with the generic predictions."""

    regime: AnisotropyRegime
    N: int
    counts: tuple[int, ...]  # measured, M = 0..N//2
    generic: tuple[int, ...]  # d0 reference values shown in brackets on deviation
    routes: tuple[str, ...]

    def cells(self) -> list[str]:
        return [f"{c} [{g}]" if c != g else str(c)
                for c, g in zip(self.counts, self.generic)]

    def to_json_dict(self) -> dict:
        return {"regime": self.regime.key(), "N": self.N,
                "counts": list(self.counts), "genericCounts": list(self.generic),
                "routes": list(self.routes)}


def census_row(N: int, regime: AnisotropyRegime, seed: int = 0,
               budget: int = DEFAULT_PATH_BUDGET, route: str = "auto") -> CensusRow:
    """Measured N(N, M) for M = 0..N//2.

    p = 2 counts come from the closed form (its homotopy cross-check lives in
    the verification suite); other regimes are solved sector by sector.
    """
    counts, routes = [], []
    curves = None
    for M in range(N // 2 + 1):
        if regime.kind == ROOT_OF_UNITY_KIND and regime.p == 2 and M > 0:
            counts.append(repcount.p2_count(N, M))
            routes.append(ROUTE_CLOSED_FORM)
            continue
        if route != "homotopy" and curves is None and M > 0 and (
                regime.kind == ROOT_OF_UNITY_KIND):
            curves = tq.eigen_curves(N, regime)  # shared across the tq sectors
        sols, used = solve_sector(N, M, regime, seed=seed, budget=budget,
                                  route=route, curves=curves)
        counts.append(len(sols))
        routes.append(used)
    return CensusRow(regime=regime, N=N, counts=tuple(counts),
                     generic=tuple(repcount.count_generic(N, M)
                                   for M in range(N // 2 + 1)),
                     routes=tuple(routes))


@dataclass(frozen=True)
class DegeneracyRow:
    """Measured transfer-eigenvalue degeneracies for one N, with dim T references."""

    regime: AnisotropyRegime
    N: int
    degens: tuple[int, ...]  # measured, M = 0..N//2
    reference: tuple[int, ...]  # dim T_j (or 2j+1 away from roots of unity)

    def cells(self) -> list[str]:
        return [f"{d} [{r}]" if d != r else str(d)
                for d, r in zip(self.degens, self.reference)]

    def to_json_dict(self) -> dict:
        return {"regime": self.regime.key(), "N": self.N,
                "degeneracies": list(self.degens), "reference": list(self.reference)}


def degeneracy_row(N: int, regime: AnisotropyRegime, curves=None) -> DegeneracyRow:
    """Measured D(N, M) from the transfer spectrum at the probe point.

    Every distinct eigenvalue with top sector M must show the same
    multiplicity; a spread would falsify the single-D(N, M) picture and
    raises instead of averaging.
    """
    if curves is None:
        curves = tq.eigen_curves(N, regime)
    degens = []
    for M in range(N // 2 + 1):
        shared = sorted({c.shared for c in curves if c.M == M})
        if len(shared) != 1:
            raise ValueError(
                f"top-sector M = {M} eigenvalues carry multiplicities {shared}, "
                f"expected a single common degeneracy")
        degens.append(shared[0])
    if regime.kind == ROOT_OF_UNITY_KIND:
        reference = tuple(repcount.tilting_dim(N - 2 * M, regime.p)
                          for M in range(N // 2 + 1))
    else:
        reference = tuple(N - 2 * M + 1 for M in range(N // 2 + 1))
    return DegeneracyRow(regime=regime, N=N, degens=tuple(degens), reference=reference)


def completeness_holds(census: CensusRow, degeneracy: DegeneracyRow) -> bool:
    """Sum rule: sum over M of N(N, M) * D(N, M) saturates 2^N exactly."""
    counts = dict(enumerate(census.counts))
    degens = dict(enumerate(degeneracy.degens))
    return repcount.completeness_sum(counts, degens, census.N)


def render_rows(rows, header: str) -> str:
    """Fixed-width text table; one line per N, cells per M."""
    body = [(str(r.N), r.cells()) for r in rows]
    columns = max(len(cells) for _, cells in body)
    widths = [max(3, *(len(cells[j]) if j < len(cells) else 0 for _, cells in body))
              for j in range(columns)]
    lines = [header.ljust(4) + "  ".join(f"M={j}".rjust(w) for j, w in enumerate(widths))]
    for label, cells in body:
        lines.append(label.ljust(4) + "  ".join(
            (cells[j] if j < len(cells) else "").rjust(widths[j])
            for j in range(columns)))
    return "\n".join(lines)
