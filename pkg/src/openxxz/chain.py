"""Dense operators of the open chain and their spectral analysis.

Builds the R and K matrices, transfer matrix t(u), Hamiltonian, higher
conserved charges, quantum-group and Temperley-Lieb generators, and Bethe
states, all as dense 2^N matrices.  The spectral side clusters generalized
eigenvalues sector by sector, measures geometric multiplicities and rank-2
Jordan cells by singular-value thresholding, and matches each cluster's
dimension and S^z content to a sum of tilting modules, from which the mixing
numbers n_jk are read off.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from . import bethe, repcount
from .regimes import XXX_KIND, ROOT_OF_UNITY_KIND, AnisotropyRegime, root_of_unity

MAX_SITES = 12  # dense 2^N x 2^N matrices; past this memory is the wall

SAMPLE_U0 = 0.37 + 0.21j  # fixed generic spectral point, for reproducibility

CLUSTER_SCALE = 1e-6  # eigenvalue clustering tolerance, times the Frobenius norm
RANK_SCALE = 1e-12  # nullity threshold sigma_max * 2^N * RANK_SCALE
GAP_AUDIT_RATIO = 1e3  # singular values straddling the threshold closer than this

DERIV_RADIUS = 0.25
DERIV_SAMPLES = 32

SX = np.array([[0, 1], [1, 0]], dtype=complex)
SY = np.array([[0, -1j], [1j, 0]], dtype=complex)
SZ = np.array([[1, 0], [0, -1]], dtype=complex)
SPLUS = np.array([[0, 1], [0, 0]], dtype=complex)
SMINUS = np.array([[0, 0], [1, 0]], dtype=complex)
ID2 = np.eye(2, dtype=complex)


def _check_sites(N: int) -> None:
    if not 1 <= N <= MAX_SITES:
        raise ValueError(f"N={N} outside the dense range 1..{MAX_SITES}")


def _embed(op: np.ndarray, k: int, N: int) -> np.ndarray:
    """op acting on sites k, k+1, ... with identities elsewhere."""
    sites = round(math.log2(op.shape[0]))
    out = np.eye(1 << k, dtype=complex)
    out = np.kron(out, op)
    return np.kron(out, np.eye(1 << (N - k - sites), dtype=complex))


# ---------------------------------------------------------------------------
# R, K, transfer matrix, Bethe states


def r_matrix(u, regime: AnisotropyRegime) -> np.ndarray:
    """Six-vertex R(u): sinh form, or the rational u+i form at the isotropic point."""
    if regime.kind == XXX_KIND:
        a, b, c = u + 1j, u + 0j, 1j
    else:
        eta = regime.eta
        a, b, c = cmath.sinh(u + eta), cmath.sinh(u), cmath.sinh(eta)
    return np.array(
        [[a, 0, 0, 0], [0, b, c, 0], [0, c, b, 0], [0, 0, 0, a]], dtype=complex
    )


def k_matrices(u, regime: AnisotropyRegime) -> tuple[np.ndarray, np.ndarray]:
    """Diagonal boundary pair K+ = diag(e^{-u-eta}, e^{u+eta}), K- = diag(e^u, e^{-u});
    both are the identity at the isotropic point."""
    if regime.kind == XXX_KIND:
        return np.eye(2, dtype=complex), np.eye(2, dtype=complex)
    eta = regime.eta
    kp = np.diag([cmath.exp(-u - eta), cmath.exp(u + eta)])
    km = np.diag([cmath.exp(u), cmath.exp(-u)])
    return kp, km


def _site_product(blocks: list, r4: np.ndarray, k: int, N: int) -> list:
    """Right-multiply 2x2 auxiliary blocks by R_{a,k}, contracting only site k."""
    dim = 1 << N
    shape = (dim, 1 << k, 2, 1 << (N - 1 - k))
    r = r4.reshape(2, 2, 2, 2)  # [a, s, b, t]: aux in/out, site in/out
    out = [[None, None], [None, None]]
    for a in range(2):
        for b in range(2):
            acc = np.zeros((dim, dim), dtype=complex)
            for c in range(2):
                block = blocks[a][c]
                if block is None:
                    continue
                x = block.reshape(shape)
                acc += np.einsum("risj,st->ritj", x, r[c, :, b, :]).reshape(dim, dim)
            out[a][b] = acc
    return out


def _monodromy(u, N: int, regime: AnisotropyRegime, reverse: bool) -> list:
    """T_a(u) = R_{a1}...R_{aN} (or the reversed product) as auxiliary blocks."""
    dim = 1 << N
    blocks = [[np.eye(dim, dtype=complex), None], [None, np.eye(dim, dtype=complex)]]
    r4 = r_matrix(u, regime)
    sites = range(N - 1, -1, -1) if reverse else range(N)
    for k in sites:
        blocks = _site_product(blocks, r4, k, N)
    return blocks


def _u_blocks(u, N: int, regime: AnisotropyRegime) -> list:
    """U_a(u) = T_a(u) K-_a(u) That_a(u); entry [0][1] is the B operator."""
    _check_sites(N)
    t = _monodromy(u, N, regime, reverse=False)
    that = _monodromy(u, N, regime, reverse=True)
    km = k_matrices(u, regime)[1]
    return [
        [km[0, 0] * t[a][0] @ that[0][b] + km[1, 1] * t[a][1] @ that[1][b] for b in (0, 1)]
        for a in (0, 1)
    ]


def transfer_matrix(u, N: int, regime: AnisotropyRegime) -> np.ndarray:
    """t(u) = tr_a K+_a(u) T_a(u) K-_a(u) That_a(u)."""
    kp = k_matrices(u, regime)[0]
    u_blocks = _u_blocks(u, N, regime)
    return kp[0, 0] * u_blocks[0][0] + kp[1, 1] * u_blocks[1][1]


def b_operator(v, N: int, regime: AnisotropyRegime) -> np.ndarray:
    """Creation operator B(v), the upper-right auxiliary block of U_a(v)."""
    return _u_blocks(v, N, regime)[0][1]


def reference_state(N: int) -> np.ndarray:
    """All-spins-up state |0>."""
    state = np.zeros(1 << N, dtype=complex)
    state[0] = 1.0
    return state


def bethe_state(vs, N: int, regime: AnisotropyRegime) -> np.ndarray:
    """prod_k B(v_k) |0>, unnormalized; v_m = lambda_m - eta/2."""
    state = reference_state(N)
    for v in vs:
        state = b_operator(v, N, regime) @ state
    return state


def vs_from_solution(sol: bethe.SolutionVector) -> tuple[complex, ...]:
    """Spectral parameters v_k = lambda_k - eta/2 of a solution vector."""
    if sol.regime.kind == XXX_KIND:
        return tuple(lam - 0.5j for lam in sol.roots)
    eta = sol.regime.eta
    return tuple(0.5 * cmath.log(x) - eta / 2.0 for x in sol.roots)


# ---------------------------------------------------------------------------
# Hamiltonian and conserved charges


def hamiltonian(N: int, regime: AnisotropyRegime) -> np.ndarray:
    """Nearest-neighbour coupling with the symmetry-fixing boundary z-fields.

    H = sum_k [sx sx + sy sy + (q+1/q)/2 sz sz] - (q-1/q)/2 (sz_1 - sz_N);
    the isotropic limit is the plain Heisenberg sum.
    """
    _check_sites(N)
    if N < 2:
        raise ValueError("a chain needs at least two sites")
    if regime.kind == XXX_KIND:
        delta, field = 1.0 + 0j, 0.0 + 0j
    else:
        q = regime.q
        delta, field = (q + 1 / q) / 2.0, (q - 1 / q) / 2.0
    bond = np.kron(SX, SX) + np.kron(SY, SY) + delta * np.kron(SZ, SZ)
    out = sum(_embed(bond, k, N) for k in range(N - 1))
    if field != 0:
        out = out - field * (_embed(SZ, 0, N) - _embed(SZ, N - 1, N))
    return out


def higher_charge(n: int, N: int, regime: AnisotropyRegime,
                  radius: float = DERIV_RADIUS, samples: int = DERIV_SAMPLES) -> np.ndarray:
    """H_n = d^n/du^n t(u) at u = 0, via the Cauchy integral on a circle.

    n!/(2 pi i) int t(u)/u^{n+1} du by the trapezoid rule: exact for the
    polynomial isotropic t(u), and near machine precision for the hyperbolic
    one, where finite differences would lose half the digits per order.
    """
    if not 0 <= n <= 4:
        raise ValueError(f"derivative order n={n} outside 0..4")
    if n == 0:
        return transfer_matrix(0.0, N, regime)
    dim = 1 << N
    acc = np.zeros((dim, dim), dtype=complex)
    for j in range(samples):
        theta = 2.0 * math.pi * j / samples
        phase = cmath.exp(1j * theta)
        acc += transfer_matrix(radius * phase, N, regime) * phase ** (-n)
    return acc * (math.factorial(n) / (samples * radius**n))


def hamiltonian_from_transfer(N: int, regime: AnisotropyRegime) -> np.ndarray:
    """Hamiltonian reconstructed from transfer-matrix derivatives.

    H = alpha t'(0) + beta, alpha = csch(2 eta) csch^{2(N-1)}(eta),
    beta = -(N+1) cosh(eta) + sech(eta); at p = 2 the first derivative is
    proportional to the identity and H = (-1)^N t''(0)/4 instead.
    """
    if regime.kind == XXX_KIND:
        raise ValueError("the isotropic normalization has no published t'(0) relation")
    if regime.p == 2:
        return (-1) ** N * 0.25 * higher_charge(2, N, regime)
    eta = regime.eta
    alpha = 1.0 / (cmath.sinh(2 * eta) * cmath.sinh(eta) ** (2 * (N - 1)))
    beta = -(N + 1) * cmath.cosh(eta) + 1.0 / cmath.cosh(eta)
    return alpha * higher_charge(1, N, regime) + beta * np.eye(1 << N)


# ---------------------------------------------------------------------------
# symmetry generators


def _q_bracket(x, q):
    """[x]_q = (q^x - q^{-x})/(q - q^{-1}), continued to x at q = 1."""
    x = np.asarray(x, dtype=complex)
    if abs(q - 1.0) < 1e-14:
        return x
    return (np.power(q, x) - np.power(q, -x)) / (q - 1.0 / q)


def qgroup_generators(N: int, q) -> tuple[np.ndarray, ...]:
    """(S^z, S^+, S^-, K, Casimir) of the q-deformed global sl2 action.

    S^pm = sum_k q^{-(S^z_1+...+S^z_{k-1})} S^pm_k q^{S^z_{k+1}+...+S^z_N},
    K = q^{2 S^z}, S^2 = S^- S^+ + [S^z + 1/2]_q^2 - [1/2]_q^2.
    """
    _check_sites(N)
    dim = 1 << N
    qh = cmath.sqrt(complex(q))
    dressed_left = np.diag([1.0 / qh, qh])  # q^{-S^z} on one site
    dressed_right = np.diag([qh, 1.0 / qh])
    twosz = np.array([N - 2 * bin(i).count("1") for i in range(dim)])
    sz = np.diag(twosz / 2.0).astype(complex)
    kmat = np.diag(np.power(complex(q), twosz))
    splus = np.zeros((dim, dim), dtype=complex)
    sminus = np.zeros((dim, dim), dtype=complex)
    for k in range(N):
        left = np.eye(1, dtype=complex)
        for _ in range(k):
            left = np.kron(left, dressed_left)
        right = np.eye(1, dtype=complex)
        for _ in range(N - 1 - k):
            right = np.kron(right, dressed_right)
        splus += np.kron(np.kron(left, SPLUS), right)
        sminus += np.kron(np.kron(left, SMINUS), right)
    casimir = sminus @ splus + np.diag(
        _q_bracket(twosz / 2.0 + 0.5, q) ** 2 - _q_bracket(0.5, q) ** 2
    )
    return sz, splus, sminus, kmat, casimir


def casimir_eigenvalue(twoj: int, q) -> complex:
    """[j + 1/2]_q^2 - [1/2]_q^2 on the spin-j highest-weight state."""
    return complex(_q_bracket(twoj / 2.0 + 0.5, q) ** 2 - _q_bracket(0.5, q) ** 2)


def tl_generators(N: int, q) -> list[np.ndarray]:
    """Temperley-Lieb generators e_1 .. e_{N-1}: e^2 = (q+1/q) e, e e' e = e."""
    _check_sites(N)
    if N < 2:
        raise ValueError("a chain needs at least two sites")
    bond = (
        -0.5 * (np.kron(SX, SX) + np.kron(SY, SY))
        - 0.25 * (q + 1.0 / q) * (np.kron(SZ, SZ) - np.eye(4))
        + 0.25 * (q - 1.0 / q) * (np.kron(SZ, ID2) - np.kron(ID2, SZ))
    )
    return [_embed(bond, k, N) for k in range(N - 1)]


def sz_diagonal(N: int) -> np.ndarray:
    """S^z as a dense diagonal matrix in the computational basis."""
    return np.diag([(N - 2 * bin(i).count("1")) / 2.0 for i in range(1 << N)]).astype(complex)


# ---------------------------------------------------------------------------
# spectra of non-normal operators


@dataclass(frozen=True)
class EigenCluster:
    """One distinct generalized eigenvalue with its multiplicity data.

    twosz lists twice the S^z of each algebraic-multiplicity slot; flagged
    marks an ambiguous numerical rank decision (gap audit), never resolved
    silently.
    """

    value: complex
    alg: int
    geo: int
    jordan2: int
    twosz: tuple[int, ...]
    flagged: bool = False

    def to_json_dict(self) -> dict:
        return {
            "re": self.value.real,
            "im": self.value.imag,
            "alg": self.alg,
            "geo": self.geo,
            "jordan2": self.jordan2,
            "sz": [t / 2.0 for t in self.twosz],
            "flagged": self.flagged,
        }


@dataclass(frozen=True)
class SpectralReport:
    """All eigenvalue clusters of one operator, merged in S^z-sector order."""

    dim: int
    clusters: tuple[EigenCluster, ...]

    @property
    def distinct(self) -> int:
        return len(self.clusters)

    def total_multiplicity(self) -> int:
        return sum(c.alg for c in self.clusters)

    def jordan_rank2_total(self) -> int:
        return sum(c.jordan2 for c in self.clusters)

    def cluster_at(self, value: complex, tol: float) -> EigenCluster:
        best = min(self.clusters, key=lambda c: abs(c.value - value))
        if abs(best.value - value) > tol:
            raise ValueError(f"no cluster within {tol} of {value}")
        return best

    def to_json_dict(self) -> dict:
        return {
            "eigenvalues": [c.to_json_dict() for c in self.clusters],
            "distinct": self.distinct,
        }


def _null_basis(mat: np.ndarray, cut: float) -> tuple[np.ndarray, bool]:
    """Orthonormal kernel basis by SVD, with a gap audit at the cut.

    The cut is anchored to the full operator's scale, not the block's own
    sigma_max: a block that is entirely null after shifting has only noise
    singular values, and a block-relative threshold would keep them all.
    """
    _, sv, vh = np.linalg.svd(mat)
    null = int(np.sum(sv < cut))
    flagged = False
    if 0 < null < sv.size:
        above, below = sv[sv.size - null - 1], sv[sv.size - null]
        flagged = above / max(below, 1e-300) < GAP_AUDIT_RATIO
    basis = vh[vh.shape[0] - null:].conj().T
    return basis, flagged


def _cluster_values(values: np.ndarray, tol: float) -> list[list[int]]:
    """Single-linkage clusters of complex values at distance tol."""
    order = np.argsort(values.real, kind="stable")
    parent = list(range(values.size))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for a in range(values.size):
        i = order[a]
        for b in range(a + 1, values.size):
            j = order[b]
            if values[j].real - values[i].real > tol:
                break
            if abs(values[i] - values[j]) <= tol:
                ri, rj = find(i), find(j)
                if ri != rj:
                    parent[ri] = rj
    groups: dict[int, list[int]] = {}
    for i in range(values.size):
        groups.setdefault(find(i), []).append(i)
    return sorted(groups.values(), key=lambda g: (values[g[0]].real, values[g[0]].imag))


def spectrum(op: np.ndarray, sz: np.ndarray, tol: float | None = None) -> SpectralReport:
    """Generalized-eigenvalue report of an operator commuting with S^z.

    Block-diagonalizes by S^z sector, clusters eigenvalues across sectors
    within tol (default CLUSTER_SCALE times the Frobenius norm: defective
    eigenvalues scatter like sqrt(eps) times the matrix scale, which the
    spectral radius underestimates), then per cluster measures geometric
    multiplicity dim ker(A - v) and the rank-2 Jordan count
    dim ker((A - v)^2) - dim ker(A - v) by SVD nullity.
    """
    dim = op.shape[0]
    N = round(math.log2(dim))
    diag = sz.diagonal()
    if np.max(np.abs(sz - np.diag(diag))) > 1e-12:
        raise ValueError("S^z must be diagonal in the computational basis")
    scale = np.linalg.norm(op, ord="fro")
    if np.linalg.norm(op @ sz - sz @ op, ord="fro") > 1e-9 * max(scale, 1.0):
        raise ValueError("operator does not commute with S^z")
    twosz = np.rint(2 * diag.real).astype(int)
    sectors = {}
    for t in sorted(set(twosz.tolist()), reverse=True):
        idx = np.flatnonzero(twosz == t)
        sectors[t] = (idx, op[np.ix_(idx, idx)])
    values, labels = [], []
    for t, (idx, block) in sectors.items():
        for v in np.linalg.eigvals(block):
            values.append(v)
            labels.append(t)
    values = np.asarray(values)
    labels = np.asarray(labels)
    if tol is None:
        tol = CLUSTER_SCALE * max(scale, 1e-300)
    clusters = []
    for members in _cluster_values(values, tol):
        value = complex(np.mean(values[members]))
        member_twosz = sorted(labels[members].tolist(), reverse=True)
        geo = jordan2 = 0
        flagged = False
        for t in sorted(set(member_twosz), reverse=True):
            idx, block = sectors[t]
            shifted = block - value * np.eye(block.shape[0])
            cut = scale * dim * RANK_SCALE
            kernel, f1 = _null_basis(shifted, cut)
            g1 = kernel.shape[1]
            geo += g1
            flagged = flagged or f1
            if g1 == 0:
                continue
            # ker(B^2) = {w : Bw in ker B}, read off (I - P_ker)B at linear
            # scale; squaring B would square the threshold and lose nearby
            # distinct eigenvalues in the noise
            chained = shifted - kernel @ (kernel.conj().T @ shifted)
            kernel2, f2 = _null_basis(chained, cut)
            jordan2 += kernel2.shape[1] - g1
            flagged = flagged or f2
        alg = len(members)
        # rank chain sanity: with cells of rank <= 2, ker^2 carries everything
        if geo + jordan2 != alg:
            flagged = True
        clusters.append(
            EigenCluster(
                value=value,
                alg=alg,
                geo=geo,
                jordan2=jordan2,
                twosz=tuple(member_twosz),
                flagged=flagged,
            )
        )
    return SpectralReport(dim=dim, clusters=tuple(clusters))


def distinct_eigenvalue_count(N: int, regime: AnisotropyRegime) -> tuple[int, int]:
    """Distinct generalized-eigenvalue counts of (t(u0), H)."""
    sz = sz_diagonal(N)
    report_t = spectrum(transfer_matrix(SAMPLE_U0, N, regime), sz)
    report_h = spectrum(hamiltonian(N, regime), sz)
    return report_t.distinct, report_h.distinct


# ---------------------------------------------------------------------------
# tilting-module content of eigenvalue clusters


def tilting_sz_content(twoj: int, p: int) -> tuple[int, ...]:
    """Weights 2m of T_j, descending: the spin-j ladder, doubled below the
    submodule top when T_j is reducible."""
    weights = list(range(twoj, -twoj - 1, -2))
    if repcount.tilting_is_reducible(twoj, p):
        twok = repcount.tilting_submodule(twoj, p)
        weights += list(range(twok, -twok - 1, -2))
    return tuple(sorted(weights, reverse=True))


def _peel_content(twosz: tuple[int, ...], p: int) -> dict[int, int]:
    """Decompose an S^z multiset into tilting modules, top weight first.

    The top remaining weight 2m can only come from T_m, so the multiset
    determines the content uniquely; a failed subtraction means the cluster
    is not a sum of tilting modules.
    """
    remaining: dict[int, int] = {}
    for t in twosz:
        remaining[t] = remaining.get(t, 0) + 1
    content: dict[int, int] = {}
    while any(remaining.values()):
        top = max(t for t, c in remaining.items() if c)
        copies = remaining[top]
        content[top] = content.get(top, 0) + copies
        for w in tilting_sz_content(top, p):
            if remaining.get(w, 0) < copies:
                raise ValueError(
                    f"S^z content {twosz} is not a sum of tilting modules at p={p}"
                )
            remaining[w] -= copies
    return content


def measure_njk(N: int, p: int, tol: float | None = None) -> repcount.DegeneracyCorrections:
    """Mixing numbers n_jk measured from the transfer-matrix spectrum at u0.

    Each eigenvalue cluster is decomposed into tilting modules from its S^z
    content; a cluster owned by T_j (its top spin) contributes its T_k
    content, k < j, to n_jk.  Enforced checks: total content reproduces the
    d0 decomposition, spins in one cluster agree mod p, and clusters owned by
    the same spin carry identical content.
    """
    _check_sites(N)
    regime = root_of_unity(p)
    report = spectrum(transfer_matrix(SAMPLE_U0, N, regime), sz_diagonal(N), tol)
    flagged = [c for c in report.clusters if c.flagged]
    if flagged:
        raise ValueError(f"{len(flagged)} clusters failed the rank gap audit at N={N}, p={p}")
    usage: dict[int, int] = {}
    per_owner: dict[int, list[dict[int, int]]] = {}
    for cluster in report.clusters:
        content = _peel_content(cluster.twosz, p)
        owner = max(content)
        for twoj, copies in content.items():
            usage[twoj] = usage.get(twoj, 0) + copies
            if ((owner - twoj) // 2) % p:
                raise ValueError(
                    f"cluster at {cluster.value} mixes spins {owner}/2 and {twoj}/2, "
                    f"which differ by a non-multiple of p={p}"
                )
        if content[owner] != 1 and len(content) > 1:
            raise ValueError(
                f"cluster at {cluster.value} holds {content[owner]} copies of its top "
                f"tilting module; the n_jk attribution is ambiguous"
            )
        per_owner.setdefault(owner, []).append(content)
    table = repcount.decomposition(N, p)
    expected = {twoj: mult for twoj, mult, _ in table.entries}
    if usage != expected:
        raise ValueError(f"measured tilting content {usage} != decomposition {expected}")
    njk: dict[tuple[int, int], int] = {}
    for owner, contents in per_owner.items():
        mixed = [c for c in contents if len(c) > 1]
        if not mixed:
            continue
        if len(mixed) != len(contents) or any(c != mixed[0] for c in mixed):
            raise ValueError(
                f"clusters owned by spin {owner}/2 disagree on their content: {contents}"
            )
        for twok, copies in mixed[0].items():
            if twok != owner:
                njk[(owner, twok)] = copies
    corr = repcount.DegeneracyCorrections(njk=njk)
    return repcount.DegeneracyCorrections(njk=njk, nj=repcount.nj_from_njk(N, p, corr))


# ---------------------------------------------------------------------------
# Bethe states against the transfer matrix


@dataclass(frozen=True)
class OnShellReport:
    """Eigen-relation checks of one Bethe state against t(u), S^z, S^2, S^+."""

    ok: bool
    null_state: bool
    eigen_residual: float
    worst_u: complex
    sz_residual: float
    casimir_residual: float
    raising_residual: float

    def to_json_dict(self) -> dict:
        return {
            "ok": self.ok,
            "nullState": self.null_state,
            "eigenResidual": self.eigen_residual,
            "worstU": [self.worst_u.real, self.worst_u.imag],
            "szResidual": self.sz_residual,
            "casimirResidual": self.casimir_residual,
            "raisingResidual": self.raising_residual,
        }


DEFAULT_U_SAMPLES = (0.23 + 0.0j, 0.41 + 0.17j, -0.12 + 0.31j)


def verify_on_shell(vs, N: int, regime: AnisotropyRegime,
                    u_samples=DEFAULT_U_SAMPLES, tol: float = 1e-8) -> OnShellReport:
    """Check t(u)|v> = Lambda(u)|v> plus the S^z, Casimir, and S^+ relations.

    vs are the spectral parameters v_k = lambda_k - eta/2; vectors containing
    lambda = 0 or i pi/2 are rejected up front, since the off-shell formula
    has a pole there and such states are not transfer-matrix eigenstates.
    """
    if len(u_samples) < 3:
        raise ValueError("need at least three sample points u")
    eta = 0.0 if regime.kind == XXX_KIND else regime.eta
    half = 0.5j if regime.kind == XXX_KIND else eta / 2.0
    for v in vs:
        lam = v + half
        if abs(lam) < 1e-9 or abs(lam - 0.5j * math.pi) < 1e-9:
            raise ValueError(f"root lambda = {lam} sits on a pole; state must be discarded")
    psi = bethe_state(vs, N, regime)
    scale = 1.0
    for v in vs:
        scale *= np.linalg.norm(b_operator(v, N, regime))
    norm = np.linalg.norm(psi)
    if norm < 1e-12 * max(scale, 1.0):
        return OnShellReport(False, True, math.inf, u_samples[0], math.inf, math.inf, math.inf)
    if regime.kind == XXX_KIND:
        roots = [v + 0.5j for v in vs]
        q = 1.0
    else:
        roots = [cmath.exp(2 * (v + eta / 2.0)) for v in vs]
        q = regime.q
    worst, worst_u = 0.0, u_samples[0]
    for u in u_samples:
        lam_u = bethe.transfer_eigenvalue(u, roots, regime, N)
        lhs = transfer_matrix(u, N, regime) @ psi
        res = np.linalg.norm(lhs - lam_u * psi) / max(np.linalg.norm(lhs), abs(lam_u) * norm)
        if res > worst:
            worst, worst_u = res, u
    sz, splus, _, _, casimir = qgroup_generators(N, q)
    twoj = N - 2 * len(vs)
    sz_res = np.linalg.norm(sz @ psi - (twoj / 2.0) * psi) / norm
    cas_res = np.linalg.norm(casimir @ psi - casimir_eigenvalue(twoj, q) * psi) / (
        max(np.linalg.norm(casimir), 1.0) * norm
    )
    raise_res = np.linalg.norm(splus @ psi) / (np.linalg.norm(splus) * norm)
    ok = worst < tol and sz_res < tol and cas_res < tol and raise_res < tol
    return OnShellReport(ok, False, worst, worst_u, sz_res, cas_res, raise_res)
