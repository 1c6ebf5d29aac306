"""Bundled admissible-root tables and set comparison against solved sectors."""
import json
from dataclasses import dataclass
from importlib import resources

from openxxz import bethe
from openxxz.regimes import ROOT_OF_UNITY_KIND, XXX_KIND, AnisotropyRegime

COMPARE_TOL = 1e-8  # tables print ~16 digits but only this much is shared across runs


@dataclass(frozen=True)
class GoldenSolution:
    """One published admissible solution, roots canonicalized."""

    N: int
    M: int
    index: int
    roots: tuple[complex, ...]


def _tag(regime: AnisotropyRegime) -> str:
    if regime.kind == XXX_KIND:
        return "xxx"
    if regime.kind == ROOT_OF_UNITY_KIND and regime.p in (3, 4, 5):
        return f"p{regime.p}"
    if regime.kind not in (XXX_KIND, ROOT_OF_UNITY_KIND) and abs(regime.eta - 0.1) < 1e-15:
        return "eta01"
    raise ValueError(f"no bundled solution table for regime {regime}")


def available(regime: AnisotropyRegime) -> bool:
    try:
        _tag(regime)
    except ValueError:
        return False
    return True


def load(regime: AnisotropyRegime) -> list[GoldenSolution]:
    """All bundled solutions for one regime, canonicalized and residual-checked."""
    blob = json.loads(
        resources.files("openxxz.data").joinpath(f"golden_{_tag(regime)}.json").read_text())
    out = []
    for entry in blob["solutions"]:
        raw = tuple(complex(re, im) for re, im in entry["roots"])
        sol = bethe.classify(raw, regime, entry["N"])
        if sol.verdict != bethe.ADMISSIBLE:
            raise ValueError(f"bundled entry {entry} classifies as {sol.verdict}")
        out.append(GoldenSolution(N=entry["N"], M=entry["M"],
                                  index=entry["index"], roots=sol.roots))
    return out


def sector(regime: AnisotropyRegime, N: int, M: int) -> list[GoldenSolution]:
    return [g for g in load(regime) if g.N == N and g.M == M]


def sectors(regime: AnisotropyRegime) -> list[tuple[int, int]]:
    """Distinct (N, M) pairs covered by the bundled table, sorted."""
    return sorted({(g.N, g.M) for g in load(regime)})


@dataclass(frozen=True)
class SectorComparison:
    """Outcome of matching a solved sector against the bundled table."""

    regime: AnisotropyRegime
    N: int
    M: int
    matched: bool
    worst_distance: float
    missing: tuple[tuple[complex, ...], ...]  # bundled roots with no solved partner
    extra: tuple[tuple[complex, ...], ...]  # solved roots with no bundled partner

    def to_json_dict(self) -> dict:
        return {
            "regime": self.regime.key(),
            "N": self.N,
            "M": self.M,
            "matched": self.matched,
            "worstDistance": self.worst_distance,
            "missing": [[[z.real, z.imag] for z in r] for r in self.missing],
            "extra": [[[z.real, z.imag] for z in r] for r in self.extra],
        }


def compare(solutions, regime: AnisotropyRegime, N: int, M: int,
            tol: float = COMPARE_TOL) -> SectorComparison:
    """Greedy one-to-one pairing at per-coordinate absolute tolerance tol."""
    remaining = [tuple(s.roots) for s in solutions]
    missing, worst = [], 0.0
    for g in sector(regime, N, M):
        best, best_d = None, tol
        for i, roots in enumerate(remaining):
            d = bethe.root_distance(g.roots, roots)
            if d <= best_d:
                best, best_d = i, d
        if best is None:
            missing.append(g.roots)
        else:
            worst = max(worst, best_d)
            remaining.pop(best)
    return SectorComparison(
        regime=regime, N=N, M=M, matched=not missing and not remaining,
        worst_distance=worst, missing=tuple(missing), extra=tuple(remaining))
