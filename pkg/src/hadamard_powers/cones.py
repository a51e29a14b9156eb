"""Dense symmetric matrices over graph sparsity patterns.

Entrywise power maps (plain x^a on nonnegative entries, the odd extension
sgn(x)|x|^a, and the even extension |x|^a, all sending 0 to 0), PSD testing
with a relative tolerance, clique-supported random PSD samples, Schur
complements, the two-summand splitting along a decomposition, the bordered
three-factor form, and super-additivity defects.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .chordal import is_chordal, maximal_cliques_chordal, maximal_cliques_general

FAMILIES = ("plain", "odd", "even")

#: invertibility guard for corner blocks; beyond this the block is treated
#: as singular rather than regularized.
COND_LIMIT = 1e12


def _check_family(family):
    if family not in FAMILIES:
        raise ValueError(f"unknown power family {family!r}; expected one of {FAMILIES}")


def as_symmetric(m):
    """Validate and return a finite, exactly symmetric float array."""
    m = np.asarray(m, dtype=float)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {m.shape}")
    if not np.isfinite(m).all():
        raise ValueError("matrix has non-finite entries")
    if not np.array_equal(m, m.T):
        raise ValueError("matrix is not symmetric")
    return m


def symmetrize(m):
    """(m + m.T) / 2, giving exactly symmetric storage."""
    return (m + m.T) / 2.0


def entrywise_power(m, alpha, family="plain"):
    """Apply the power map entry by entry; zero entries stay exactly zero."""
    _check_family(family)
    if not np.isfinite(alpha):
        raise ValueError(f"power must be finite, got {alpha}")
    m = np.asarray(m, dtype=float)
    if family == "plain" and (m < 0).any():
        raise ValueError("plain powers need entrywise nonnegative input; "
                         "use the odd or even extension for signed matrices")
    out = np.zeros_like(m)
    mask = m != 0
    np.power(np.abs(m), alpha, out=out, where=mask)
    if family == "odd":
        out *= np.sign(m)
    return out


@dataclass(frozen=True)
class PsdVerdict:
    is_psd: bool
    min_eigenvalue: float
    tolerance_used: float


def _eig_range(m):
    eigs = np.linalg.eigvalsh(m)
    lam_min = float(eigs[0])
    spectral = float(max(abs(eigs[0]), abs(eigs[-1])))
    return lam_min, spectral


def is_psd(m, tol_scale=1e-9):
    """PSD test by full symmetric eigendecomposition.

    The tolerance is relative: tol_scale * max(1, spectral radius), since
    clique-sum samples vary over orders of magnitude in scale.
    """
    if tol_scale <= 0:
        raise ValueError(f"tol_scale must be positive, got {tol_scale}")
    m = as_symmetric(m)
    lam_min, spectral = _eig_range(m)
    tol = tol_scale * max(1.0, spectral)
    return PsdVerdict(is_psd=lam_min >= -tol, min_eigenvalue=lam_min, tolerance_used=tol)


def certify_not_psd(m, threshold_scale=1e-6):
    """Strict non-PSD certificate: the least eigenvalue if it clears
    -threshold_scale * max(1, spectral radius), else None.

    Deliberately stricter than the is_psd tolerance so numerical noise is
    never promoted to a counterexample.
    """
    m = as_symmetric(m)
    lam_min, spectral = _eig_range(m)
    if lam_min < -threshold_scale * max(1.0, spectral):
        return lam_min
    return None


def conforms_to_pattern(m, g):
    """True iff every off-diagonal entry outside the edge set is exactly 0."""
    m = as_symmetric(m)
    if m.shape[0] != g.n:
        raise ValueError(f"matrix is {m.shape[0]}x{m.shape[0]} but graph has {g.n} vertices")
    for i in range(1, g.n + 1):
        for j in range(i + 1, g.n + 1):
            if m[i - 1, j - 1] != 0.0 and not g.has_edge(i, j):
                return False
    return True


def _graph_cliques(g):
    if is_chordal(g):
        return maximal_cliques_chordal(g)
    return maximal_cliques_general(g)


def random_psd_for_graph(g, rank_per_clique=1, seed=None, *, eps_diag=0.0,
                         rng=None, cliques=None, nonnegative=False):
    """Random PSD matrix supported exactly on the graph's pattern.

    Sum over the maximal cliques of `rank_per_clique` Gram terms x x^T with
    standard normal entries supported on the clique. Entries outside the
    pattern are exactly 0.0 by construction. `eps_diag` adds a multiple of
    the identity for conditioning studies; `nonnegative` folds the Gram
    vectors to their absolute values, sampling the entrywise-nonnegative
    part of the cone (needed for plain powers).
    """
    if rank_per_clique < 1:
        raise ValueError(f"rank_per_clique must be >= 1, got {rank_per_clique}")
    if rng is None:
        rng = np.random.default_rng(seed)
    if cliques is None:
        cliques = _graph_cliques(g)
    m = np.zeros((g.n, g.n))
    for clique in cliques:
        idx = np.array(sorted(clique)) - 1
        for _ in range(rank_per_clique):
            x = rng.standard_normal(len(idx))
            if nonnegative:
                x = np.abs(x)
            m[np.ix_(idx, idx)] += np.outer(x, x)
    if eps_diag:
        m[np.diag_indices(g.n)] += eps_diag
    return m




def _as_zero_based(indices, n):
    idx = sorted({int(i) for i in indices})
    if idx and (idx[0] < 1 or idx[-1] > n):
        raise ValueError(f"indices out of range 1..{n}")
    return np.array([i - 1 for i in idx], dtype=int)


def _check_block_conditioning(block, what, cond_limit):
    if block.size == 0:
        return
    eigs = np.abs(np.linalg.eigvalsh(block))
    if eigs[-1] == 0.0 or eigs[0] == 0.0 or eigs[-1] / eigs[0] > cond_limit:
        cond = np.inf if eigs[0] == 0.0 else eigs[-1] / eigs[0]
        raise np.linalg.LinAlgError(
            f"{what} is singular or ill conditioned (condition estimate {cond:.3e}, "
            f"limit {cond_limit:.1e})")


def schur_complement(m, block, *, cond_limit=COND_LIMIT):
    """Restrict to `block` (1-based labels) and subtract the cross terms
    through the inverse of the complementary principal block."""
    m = as_symmetric(m)
    n = m.shape[0]
    keep = _as_zero_based(block, n)
    if keep.size == 0:
        raise ValueError("block must be nonempty")
    drop = np.array(sorted(set(range(n)) - set(keep.tolist())), dtype=int)
    if drop.size == 0:
        return m.copy()
    c_block = m[np.ix_(drop, drop)]
    _check_block_conditioning(c_block, "complementary block", cond_limit)
    cross = m[np.ix_(keep, drop)]
    return symmetrize(m[np.ix_(keep, keep)] - cross @ np.linalg.solve(c_block, cross.T))


def _decomposition_indices(m, d):
    n = m.shape[0]
    ia = _as_zero_based(d.side_a, n)
    ic = _as_zero_based(d.separator, n)
    ib = _as_zero_based(d.side_b, n)
    if len(ia) + len(ic) + len(ib) != n:
        raise ValueError("decomposition must cover every matrix index exactly once")
    return ia, ic, ib


def split_by_decomposition(m, d, *, cond_limit=COND_LIMIT):
    """Split m = m1 + m2 along a decomposition (A, C, B).

    m1 carries the A and A-C blocks plus the completion term
    M_AC^T M_AA^{-1} M_AC on the C block; m2 the remainder, supported on
    B and C. Only M_AA is required to be invertible; the analogous
    requirement on M_BB is not needed for this one-sided formula.
    For PSD input both summands are PSD.
    """
    m = as_symmetric(m)
    ia, ic, ib = _decomposition_indices(m, d)
    if np.any(m[np.ix_(ia, ib)] != 0.0):
        raise ValueError("matrix couples the two separated sides; it does not "
                         "conform to a pattern admitting this decomposition")
    a_block = m[np.ix_(ia, ia)]
    _check_block_conditioning(a_block, "side-A corner block", cond_limit)
    cross = m[np.ix_(ia, ic)]
    solved = np.linalg.solve(a_block, cross)
    m1 = np.zeros_like(m)
    m1[np.ix_(ia, ia)] = a_block
    m1[np.ix_(ia, ic)] = cross
    m1[np.ix_(ic, ia)] = cross.T
    m1[np.ix_(ic, ic)] = symmetrize(cross.T @ solved)
    m2 = m - m1
    return m1, m2


@dataclass(frozen=True)
class ThreeFactorForm:
    """Factorization m = left @ middle @ left.T in the (A, C, B) basis.

    `order` lists the 1-based labels (A, then C, then B) giving the basis
    permutation; `schur_block` is the doubly-reduced middle block
    M_CC - M_AC^T M_AA^{-1} M_AC - M_CB M_BB^{-1} M_CB^T.
    """

    left: np.ndarray
    middle: np.ndarray
    schur_block: np.ndarray
    order: tuple[int, ...]

    def reconstruct(self):
        """Assemble left @ middle @ left.T back in the original basis."""
        r = self.left @ self.middle @ self.left.T
        perm = np.array(self.order) - 1
        inv = np.argsort(perm)
        return symmetrize(r[np.ix_(inv, inv)])


def three_factor_form(m, d, *, cond_limit=COND_LIMIT):
    """Bordered factorization of m along a decomposition (A, C, B).

    Both corner blocks M_AA and M_BB must be invertible; the middle factor
    is block diagonal (M_AA^{-1}, S, M_BB^{-1}) with S the doubly-reduced
    C block, which is PSD whenever m is.
    """
    m = as_symmetric(m)
    ia, ic, ib = _decomposition_indices(m, d)
    if np.any(m[np.ix_(ia, ib)] != 0.0):
        raise ValueError("matrix couples the two separated sides; it does not "
                         "conform to a pattern admitting this decomposition")
    a_block = m[np.ix_(ia, ia)]
    b_block = m[np.ix_(ib, ib)]
    _check_block_conditioning(a_block, "side-A corner block", cond_limit)
    _check_block_conditioning(b_block, "side-B corner block", cond_limit)
    ac = m[np.ix_(ia, ic)]
    cb = m[np.ix_(ic, ib)]
    cc = m[np.ix_(ic, ic)]
    s_block = symmetrize(cc - ac.T @ np.linalg.solve(a_block, ac)
                         - cb @ np.linalg.solve(b_block, cb.T))
    na, nc, nb = len(ia), len(ic), len(ib)
    n = na + nc + nb
    left = np.zeros((n, n))
    left[:na, :na] = a_block
    left[na:na + nc, :na] = ac.T
    left[na:na + nc, na:na + nc] = np.eye(nc)
    left[na:na + nc, na + nc:] = cb
    left[na + nc:, na + nc:] = b_block
    middle = np.zeros((n, n))
    middle[:na, :na] = symmetrize(np.linalg.inv(a_block))
    middle[na:na + nc, na:na + nc] = s_block
    middle[na + nc:, na + nc:] = symmetrize(np.linalg.inv(b_block))
    order = tuple(int(i) + 1 for i in np.concatenate([ia, ic, ib]))
    return ThreeFactorForm(left=left, middle=middle, schur_block=s_block, order=order)


def witness_matrix(u, v, mid):
    """Bordered matrix [[1, u^T, 0], [u, mid, v], [0, v^T, 1]].

    Transfers super-additivity failures of power maps into positivity
    failures on patterns missing one edge (the zero corners).
    """
    u = np.asarray(u, dtype=float).ravel()
    v = np.asarray(v, dtype=float).ravel()
    mid = as_symmetric(mid)
    k = len(u)
    if len(v) != k or mid.shape[0] != k:
        raise ValueError(f"need len(u) == len(v) == mid dimension, got "
                         f"{len(u)}, {len(v)}, {mid.shape[0]}")
    w = np.zeros((k + 2, k + 2))
    w[0, 0] = 1.0
    w[-1, -1] = 1.0
    w[0, 1:k + 1] = u
    w[1:k + 1, 0] = u
    w[-1, 1:k + 1] = v
    w[1:k + 1, -1] = v
    w[1:k + 1, 1:k + 1] = mid
    return w


def superadditive_defect(a_mat, b_mat, alpha, family="plain", tol_scale=1e-9):
    """Verdict on f[A + B] - f[A] - f[B] for the given power map."""
    a_mat = as_symmetric(a_mat)
    b_mat = as_symmetric(b_mat)
    if a_mat.shape != b_mat.shape:
        raise ValueError(f"shape mismatch: {a_mat.shape} vs {b_mat.shape}")
    defect = (entrywise_power(a_mat + b_mat, alpha, family)
              - entrywise_power(a_mat, alpha, family)
              - entrywise_power(b_mat, alpha, family))
    return is_psd(symmetrize(defect), tol_scale)


# ---------------------------------------------------------------------------
# serialization


def matrix_to_json(m):
    m = as_symmetric(m)
    return {"n": int(m.shape[0]), "rows": [[float(x) for x in row] for row in m]}


def matrix_from_json(data):
    try:
        n = int(data["n"])
        rows = data["rows"]
    except (KeyError, TypeError, ValueError) as exc:
        raise ValueError(f"bad matrix JSON: {exc}") from None
    m = np.array(rows, dtype=float)
    if m.shape != (n, n):
        raise ValueError(f"matrix JSON declares n={n} but rows have shape {m.shape}")
    return as_symmetric(m)


def matrix_to_csv(m):
    m = as_symmetric(m)
    return "\n".join(",".join(repr(float(x)) for x in row) for row in m) + "\n"
