"""Counting and degeneracy formulas for Bethe states of the open chain.

Spin labels are carried as twoj = 2j integers so half-integer spins stay
exact; helper constructors accept either convention explicitly.  All counts
use Python integers, so nothing overflows at large N.

Generic regime: the number of admissible Bethe solutions in the M-magnon
sector is N(N,M) = C(N,M) - C(N,M-1), each giving a (N-2M+1)-fold degenerate
transfer eigenvalue.  At a root of unity q = e^{i*pi/p} the spin-j
multiplicity d_j regroups into tilting multiplicities d0_j, counts drop by
corrections n_j built from the mixing numbers n_jk, and degeneracies grow to
dim T_j + sum_k n_jk dim T_k.  For p = 2 everything is available in closed
form.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from math import comb, factorial


def _comb(n: int, k: int) -> int:
    """Binomial coefficient, zero outside 0 <= k <= n."""
    if k < 0 or k > n:
        return 0
    return comb(n, k)


def spin_str(twoj: int) -> str:
    """Human-readable spin label: 3 for twoj=6, 5/2 for twoj=5."""
    return str(twoj // 2) if twoj % 2 == 0 else f"{twoj}/2"


def _check_spin(N: int, twoj: int) -> None:
    if twoj < 0:
        raise ValueError(f"negative spin twoj={twoj}")
    if (N - twoj) % 2:
        raise ValueError(f"spin {spin_str(twoj)} has wrong parity for N={N}")


# ---------------------------------------------------------------------------
# sl2 / generic q


def multiplicity_d(N: int, twoj: int) -> int:
    """Multiplicity d_j of the spin-j module in the 2^N-dimensional chain.

    d_j = C(N, N/2 - j) - C(N, N/2 - j - 1); zero above the maximal spin N/2.
    """
    _check_spin(N, twoj)
    if twoj > N:
        return 0
    m = (N - twoj) // 2
    return _comb(N, m) - _comb(N, m - 1)


def count_generic(N: int, M: int) -> int:
    """Admissible solution count C(N,M) - C(N,M-1) for generic anisotropy."""
    if M < 0 or 2 * M > N:
        raise ValueError(f"sector M={M} out of range for N={N}")
    return _comb(N, M) - _comb(N, M - 1)


def degeneracy_generic(N: int, M: int) -> int:
    """Transfer-eigenvalue degeneracy N - 2M + 1 (the spin-j multiplet size)."""
    if M < 0 or 2 * M > N:
        raise ValueError(f"sector M={M} out of range for N={N}")
    return N - 2 * M + 1


# ---------------------------------------------------------------------------
# root of unity: tilting modules


def _s_of_j(twoj: int, p: int) -> int:
    """s(j) = (2j + 1) mod p."""
    return (twoj + 1) % p


def tilting_dim(twoj: int, p: int) -> int:
    """Dimension of the tilting module T_j at q = e^{i*pi/p}.

    2j+1 when T_j is irreducible (2j+1 <= p or s(j) = 0), else
    2(2j+1-s(j)) from the extension of V_{j-s(j)} by V_j.
    """
    if p < 2:
        raise ValueError(f"p must be >= 2, got {p}")
    if twoj < 0:
        raise ValueError(f"negative spin twoj={twoj}")
    dim = twoj + 1
    s = _s_of_j(twoj, p)
    if dim <= p or s == 0:
        return dim
    return 2 * (dim - s)


def tilting_is_reducible(twoj: int, p: int) -> bool:
    """True when T_j is a nontrivial extension (2j+1 > p and s(j) != 0)."""
    return twoj + 1 > p and _s_of_j(twoj, p) != 0


def tilting_submodule(twoj: int, p: int) -> int:
    """twok of the submodule V_{j - s(j)} inside a reducible T_j."""
    if not tilting_is_reducible(twoj, p):
        raise ValueError(f"T_{spin_str(twoj)} is irreducible at p={p}")
    return twoj - 2 * _s_of_j(twoj, p)


def tl_dim_d0(N: int, twoj: int, p: int) -> int:
    """Tilting multiplicity d0_j: how many copies of T_j the chain carries.

    d0_j = sum_{n>=0} d_{j+np} - sum_{n>=t(j)+1} d_{j+np-1-2(j mod p)}
    with t(j) = 1 if (j mod p) > (p-1)/2 else 0, except d0_j = d_j when
    (j mod p) is (p-1)/2 or p - 1/2.  (j mod p) is the exact remainder,
    i.e. (twoj mod 2p)/2.
    """
    _check_spin(N, twoj)
    if p < 2:
        raise ValueError(f"p must be >= 2, got {p}")
    two_r = twoj % (2 * p)  # twice (j mod p)
    if two_r in (p - 1, 2 * p - 1):
        return multiplicity_d(N, twoj)
    total = 0
    t = twoj + 0
    while t <= N:
        total += multiplicity_d(N, t)
        t += 2 * p
    t_j = 1 if two_r > p - 1 else 0
    t = twoj + 2 * p * (t_j + 1) - 2 - 2 * two_r
    while t <= N:
        if t >= 0:
            total -= multiplicity_d(N, t)
        t += 2 * p
    return total


@dataclass(frozen=True)
class DecompositionTable:
    """Tilting decomposition of the chain: entries (twoj, multiplicity, dim T_j)."""

    N: int
    p: int
    entries: tuple[tuple[int, int, int], ...]

    def multiplicity(self, twoj: int) -> int:
        for tj, mult, _ in self.entries:
            if tj == twoj:
                return mult
        return 0


def decomposition(N: int, p: int) -> DecompositionTable:
    """Full tilting decomposition of (C^2)^{oplus N}; zero multiplicities omitted."""
    entries = []
    for twoj in range(N % 2, N + 1, 2):
        mult = tl_dim_d0(N, twoj, p)
        if mult:
            entries.append((twoj, mult, tilting_dim(twoj, p)))
    return DecompositionTable(N=N, p=p, entries=tuple(entries))


def check_dimension_sum(table: DecompositionTable) -> bool:
    """sum_j d0_j dim T_j == 2^N."""
    return sum(m * d for _, m, d in table.entries) == 2**table.N


# ---------------------------------------------------------------------------
# degeneracy corrections at a root of unity


@dataclass(frozen=True)
class DegeneracyCorrections:
    """Mixing data measured (or supplied) at a root of unity.

    njk maps (twoj, twok) -> n_jk, the number of T_k summands locked to each
    copy of T_j; entries vanish unless j > k and (j - k) = 0 mod p.  nj maps
    twoj -> n_j, the number of T_j copies absorbed into higher-spin clusters;
    it is derivable from njk via nj_from_njk and acts as a cache/override.
    """

    njk: dict[tuple[int, int], int] = field(default_factory=dict)
    nj: dict[int, int] = field(default_factory=dict)

    @classmethod
    def none(cls) -> "DegeneracyCorrections":
        return cls()

    def get_njk(self, twoj: int, twok: int) -> int:
        return self.njk.get((twoj, twok), 0)


def nj_from_njk(N: int, p: int, corr: DegeneracyCorrections) -> dict[int, int]:
    """Absorbed-copy counts n_j from the mixing numbers n_jk.

    n_j = sum_{m>=0} (-1)^m sum over chains j_m > ... > j_0 > j of
    d0_{j_m} n_{j_m j_{m-1}} ... n_{j_0 j}; evaluated as the alternating
    matrix series d0^T (Njk - Njk^2 + Njk^3 - ...), which terminates because
    Njk is strictly triangular in the spin ordering.
    """
    spins = [twoj for twoj in range(N % 2, N + 1, 2)]
    d0 = {twoj: tl_dim_d0(N, twoj, p) for twoj in spins}
    row = dict(d0)
    total: dict[int, int] = {twoj: 0 for twoj in spins}
    sign = 1
    for _ in range(len(spins)):
        nxt: dict[int, int] = {}
        for (twoj, twok), n in corr.njk.items():
            if n and row.get(twoj):
                nxt[twok] = nxt.get(twok, 0) + row[twoj] * n
        if not nxt:
            break
        for twok, v in nxt.items():
            total[twok] = total.get(twok, 0) + sign * v
        row = nxt
        sign = -sign
    return {twoj: v for twoj, v in total.items() if v}


def count_root_of_unity(N: int, M: int, p: int, corr: DegeneracyCorrections | None = None) -> int:
    """Admissible solution count d0_{N/2-M} - n_{N/2-M} at q = e^{i*pi/p}."""
    if M < 0 or 2 * M > N:
        raise ValueError(f"sector M={M} out of range for N={N}")
    twoj = N - 2 * M
    d0 = tl_dim_d0(N, twoj, p)
    if corr is None:
        return d0
    nj = corr.nj.get(twoj)
    if nj is None:
        nj = nj_from_njk(N, p, corr).get(twoj, 0)
    return d0 - nj


def degeneracy_root_of_unity(
    N: int, M: int, p: int, corr: DegeneracyCorrections | None = None
) -> int:
    """Cluster degeneracy dim T_j + sum_{k<j} n_jk dim T_k at j = N/2 - M."""
    if M < 0 or 2 * M > N:
        raise ValueError(f"sector M={M} out of range for N={N}")
    twoj = N - 2 * M
    total = tilting_dim(twoj, p)
    if corr is not None:
        for (tj, tk), n in corr.njk.items():
            if tj == twoj and n:
                total += n * tilting_dim(tk, p)
    return total


def completeness_sum(counts: dict[int, int], degens: dict[int, int], N: int) -> bool:
    """sum_M N(N,M) * D(N,M) == 2^N; counts and degens keyed by M."""
    if set(counts) != set(degens):
        raise ValueError("counts and degens must cover the same sectors")
    return sum(counts[M] * degens[M] for M in counts) == 2**N


# ---------------------------------------------------------------------------
# p = 2 closed forms


def _double_factorial(n: int) -> int:
    """n!! for even n >= 0."""
    out = 1
    while n > 1:
        out *= n
        n -= 2
    return out


def p2_admissible_pool(N: int) -> int:
    """Number of admissible one-magnon roots at p = 2: N-2 (even N) or N-1 (odd N)."""
    return N - 2 if N % 2 == 0 else N - 1


def p2_count(N: int, M: int) -> int:
    """Closed-form count n1!!/(M! (n1-2M)!!), n1 = p2_admissible_pool(N).

    At p = 2 the Bethe equations decouple; solutions are M-subsets of the
    admissible root pool with independent signs, modulo exact 2-strings
    {x, -x} being excluded.  Zero when the double-factorial argument goes
    negative (even N, M = N/2).
    """
    if M < 0 or 2 * M > N:
        raise ValueError(f"sector M={M} out of range for N={N}")
    if M == 0:
        return 1
    n1 = p2_admissible_pool(N)
    if n1 - 2 * M < 0:
        return 0
    return _double_factorial(n1) // (factorial(M) * _double_factorial(n1 - 2 * M))


def p2_degeneracy(N: int, M: int) -> int:
    """Closed-form degeneracy 2^(floor(N/2)-M+1); zero at even N, M = N/2."""
    if M < 0 or 2 * M > N:
        raise ValueError(f"sector M={M} out of range for N={N}")
    if N % 2 == 0 and M == N // 2:
        return 0
    return 2 ** (N // 2 - M + 1)


def p2_njk(twoj: int, twok: int) -> int:
    """Closed-form mixing number at p = 2.

    For integer spins j > k >= 1 with j - k even:
    n_jk = C(j-1, (j-k)/2) * 2k / (j+k); half-odd spins reduce through
    n_{j+1/2, k+1/2} = n_jk shifted, i.e. the same formula at twoj+1, twok+1.
    """
    if twoj % 2 != twok % 2:
        raise ValueError("spins must both be integer or both half-odd")
    if twoj % 2:
        twoj, twok = twoj + 1, twok + 1
    j, k = twoj // 2, twok // 2
    if k < 1 or j <= k or (j - k) % 2:
        return 0
    num = _comb(j - 1, (j - k) // 2) * 2 * k
    den = j + k
    if num % den:
        raise ArithmeticError(f"n_jk formula not integral at j={j}, k={k}")
    return num // den


def p2_corrections(N: int) -> DegeneracyCorrections:
    """All closed-form n_jk for spins present in a length-N chain at p = 2."""
    njk: dict[tuple[int, int], int] = {}
    for twoj in range(N % 2, N + 1, 2):
        # j - k even, i.e. twok = twoj mod 4, and k >= 1/2
        start = twoj % 4 if twoj % 4 else 4
        for twok in range(start, twoj, 4):
            n = p2_njk(twoj, twok)
            if n:
                njk[(twoj, twok)] = n
    corr = DegeneracyCorrections(njk=njk)
    return DegeneracyCorrections(njk=njk, nj=nj_from_njk(N, 2, corr))
