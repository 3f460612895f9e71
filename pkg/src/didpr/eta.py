"""Target edge mixing matrices and attainability bounds.

Given a joint degree-pair distribution, which edge mixing matrices are
consistent with it?  The feasible set is a transportation polytope: rows are
pinned to the out-degree-weighted source masses, columns to the
in-degree-weighted target masses.  Asking additionally for prescribed
assortativity values adds four linear rows, because each coefficient is an
affine function of the mixing matrix once the degree-pair distribution is
fixed.  Everything here therefore reduces to constrained moment problems:

* solve_target_eta finds a mixing matrix realising four target coefficients
  (or reports that no such matrix exists).  By default it returns the
  maximum-entropy solution, a smooth Gibbs tilt of the independence
  coupling, escalating to the analytic centre of the feasible polytope
  when the tilt alone would leave a rewiring chain diffusive (the
  heavy-tail regime); either interior point lets chains mix orders of
  magnitude faster than a basic LP solution, and the LP remains the
  fallback and the arbiter of attainability.
* coefficient_bounds minimises/maximises one coefficient over the polytope,
  optionally conditioned on intervals for other coefficients, which yields
  the attainable range of each coefficient.  This is plain linear
  programming.

The map between a coefficient r(a, b) and the linear functional it pins is
g(a, b, r) = sigma_q(a) * sigma_qt(b) * r + mu_q(a) * mu_qt(b), the value
that the degree-product moment of the mixing matrix must take.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import scipy.sparse as sp

from . import lp as lplib
from .assortativity import (
    TYPE_PAIRS,
    AssortProfile,
    EdgeEndDistributions,
    EdgeMixMatrix,
)
from .graph import DegreePairDist, DirectedGraph, degree_pair_dist

__all__ = [
    "EtaProblem",
    "AssortBounds",
    "ends_from_nu",
    "problem_from_nu",
    "problem_from_graph",
    "g_map",
    "assemble_constraints",
    "solve_target_eta",
    "coefficient_bounds",
    "DEFAULT_ORDER",
]

DEFAULT_ORDER: tuple[tuple[int, int], ...] = TYPE_PAIRS

# Overshoot beyond [-1, 1] tolerated (and clamped) when mapping LP optima
# back to coefficient bounds; anything larger is a solver failure.
_CLAMP_TOL = 1e-6


@dataclass
class EtaProblem:
    """A degree-pair distribution plus optional targets and intervals.

    source_pairs: realised (out, in) pairs with positive out-degree mass.
    target_pairs: realised (out, in) pairs with positive in-degree mass.
    targets: four prescribed coefficients, or None for a bare polytope.
    intervals: accumulated interval constraints per type pair, as a mapping
        (a, b) -> (lower, upper); singletons (v, v) are allowed.
    """

    nu: DegreePairDist
    source_pairs: list[tuple[int, int]]
    target_pairs: list[tuple[int, int]]
    targets: AssortProfile | None = None
    intervals: dict[tuple[int, int], tuple[float, float]] = field(
        default_factory=dict
    )

    def __post_init__(self) -> None:
        for pair, (lo, hi) in self.intervals.items():
            if pair not in TYPE_PAIRS:
                raise ValueError(f"unknown type pair {pair}")
            if lo > hi:
                raise ValueError(f"empty interval {lo} > {hi} for {pair}")


def ends_from_nu(nu: DegreePairDist) -> EdgeEndDistributions:
    """End distributions implied by the degree-pair distribution alone.

    An edge leaves a node with pair (i, j) with probability proportional to
    i * nu[i, j] and arrives at (k, l) proportionally to l * nu[k, l]; the
    end distributions collapse those masses onto single degrees.
    """
    src_total = sum(i * p for (i, _), p in nu.entries.items())
    tgt_total = sum(j * p for (_, j), p in nu.entries.items())
    if src_total <= 0.0 or tgt_total <= 0.0:
        raise ValueError("graph has no edges; end distributions undefined")

    q: dict[int, dict[int, float]] = {1: {}, 2: {}}
    q_tilde: dict[int, dict[int, float]] = {1: {}, 2: {}}
    for (i, j), p in nu.entries.items():
        if i > 0:
            w = i * p / src_total
            q[1][i] = q[1].get(i, 0.0) + w
            q[2][j] = q[2].get(j, 0.0) + w
        if j > 0:
            w = j * p / tgt_total
            q_tilde[1][i] = q_tilde[1].get(i, 0.0) + w
            q_tilde[2][j] = q_tilde[2].get(j, 0.0) + w

    return EdgeEndDistributions(
        q,
        q_tilde,
        {a: _dist_sigma(q[a]) for a in (1, 2)},
        {b: _dist_sigma(q_tilde[b]) for b in (1, 2)},
    )


def problem_from_nu(
    nu: DegreePairDist,
    targets: AssortProfile | None = None,
    intervals: dict[tuple[int, int], tuple[float, float]] | None = None,
) -> EtaProblem:
    """Build an EtaProblem; pair lists are derived from the support of nu."""
    source_pairs = sorted(p for p in nu.entries if p[0] > 0)
    target_pairs = sorted(p for p in nu.entries if p[1] > 0)
    if not source_pairs or not target_pairs:
        raise ValueError("degree-pair distribution carries no edges")
    return EtaProblem(nu, source_pairs, target_pairs, targets, dict(intervals or {}))


def problem_from_graph(
    g: DirectedGraph,
    targets: AssortProfile | None = None,
    intervals: dict[tuple[int, int], tuple[float, float]] | None = None,
) -> EtaProblem:
    return problem_from_nu(degree_pair_dist(g), targets, intervals)


def g_map(a: int, b: int, r: float, ends: EdgeEndDistributions) -> float:
    """Moment value pinned by coefficient r(a, b).

    Affine in r: the degree-product moment equals
    mu_q(a) * mu_qt(b) + sigma_q(a) * sigma_qt(b) * r.
    """
    if (a, b) not in TYPE_PAIRS:
        raise ValueError(f"unknown type pair ({a},{b})")
    if ends.sigma_q[a] <= 0.0 or ends.sigma_q_tilde[b] <= 0.0:
        raise ValueError(
            f"degenerate end distribution; g({a},{b}) undefined")
    return ends.mean_q(a) * ends.mean_q_tilde(b) + ends.sigma_q[a] * ends.sigma_q_tilde[b] * r


def _inverse_g(a: int, b: int, value: float, ends: EdgeEndDistributions) -> float:
    return (value - ends.mean_q(a) * ends.mean_q_tilde(b)) / (
        ends.sigma_q[a] * ends.sigma_q_tilde[b]
    )


def _mass_vectors(p: EtaProblem) -> tuple[np.ndarray, np.ndarray]:
    src_total = sum(i * v for (i, _), v in p.nu.entries.items())
    tgt_total = sum(j * v for (_, j), v in p.nu.entries.items())
    src = np.array([i * p.nu.entries[(i, j)] / src_total for i, j in p.source_pairs])
    tgt = np.array([l * p.nu.entries[(k, l)] / tgt_total for k, l in p.target_pairs])
    return src, tgt


def _weight_vectors(p: EtaProblem) -> tuple[dict[int, np.ndarray], dict[int, np.ndarray]]:
    s_arr = np.asarray(p.source_pairs, dtype=np.float64)
    t_arr = np.asarray(p.target_pairs, dtype=np.float64)
    f = {1: s_arr[:, 0], 2: s_arr[:, 1]}
    gv = {1: t_arr[:, 0], 2: t_arr[:, 1]}
    return f, gv


def _require_sigmas(ends: EdgeEndDistributions, pairs) -> None:
    for a, b in pairs:
        if ends.sigma_q[a] == 0.0 or ends.sigma_q_tilde[b] == 0.0:
            raise ValueError(
                f"degenerate end distribution: sigma is zero for r({a},{b})"
            )


def _marginal_rows(p: EtaProblem) -> tuple[sp.csr_matrix, np.ndarray]:
    ns, nt = len(p.source_pairs), len(p.target_pairs)
    src_mass, tgt_mass = _mass_vectors(p)
    rows = sp.vstack(
        [
            sp.kron(sp.eye(ns, format="csr"), np.ones((1, nt)), format="csr"),
            sp.kron(np.ones((1, ns)), sp.eye(nt, format="csr"), format="csr"),
        ],
        format="csr",
    )
    rhs = np.concatenate([src_mass, tgt_mass])
    return rows, rhs


def assemble_constraints(p: EtaProblem) -> lplib.LinearProgram:
    """Linear program over the mixing-matrix entries (row-major, zero cost).

    Equality rows: one per source pair (row sums), one per target pair
    (column sums), plus four moment rows when targets are present.  Interval
    constraints contribute two <= rows each via the g map.  Redundant rows
    (the two marginal families share their total) are kept; the solver's
    phase-1 copes with rank deficiency.
    """
    ns, nt = len(p.source_pairs), len(p.target_pairs)
    nvars = ns * nt
    ends = ends_from_nu(p.nu)
    f, gv = _weight_vectors(p)

    A_eq, b_eq = _marginal_rows(p)
    if p.targets is not None:
        _require_sigmas(ends, TYPE_PAIRS)
        w_rows = np.stack(
            [np.outer(f[a], gv[b]).ravel() for a, b in TYPE_PAIRS]
        )
        rhs = np.array(
            [g_map(a, b, p.targets.get(a, b), ends) for a, b in TYPE_PAIRS]
        )
        A_eq = sp.vstack([A_eq, sp.csr_matrix(w_rows)], format="csr")
        b_eq = np.concatenate([b_eq, rhs])

    A_ub = None
    b_ub = None
    if p.intervals:
        _require_sigmas(ends, p.intervals.keys())
        ub_rows = []
        ub_rhs = []
        for (a, b), (lo, hi) in sorted(p.intervals.items()):
            w = np.outer(f[a], gv[b]).ravel()
            ub_rows.append(w)
            ub_rhs.append(g_map(a, b, hi, ends))
            ub_rows.append(-w)
            ub_rhs.append(-g_map(a, b, lo, ends))
        A_ub = sp.csr_matrix(np.stack(ub_rows))
        b_ub = np.asarray(ub_rhs)

    return lplib.LinearProgram(
        nvars, np.zeros(nvars), A_eq, b_eq, A_ub, b_ub
    )


def _spread_program(p: EtaProblem) -> tuple[lplib.LinearProgram, np.ndarray]:
    """Variant of the target system that favours interior solutions.

    Substitute eta = psi + t * (independence coupling), psi >= 0, and
    maximise t <= 1.  Feasibility is unchanged (t = 0 recovers the plain
    system), but at the optimum every entry of eta is at least t* times the
    independence mass, which keeps later rewiring chains mobile.  Returns
    the lifted program (t is the last variable) and the independence
    coupling, flattened.
    """
    base = assemble_constraints(p)
    src_mass, tgt_mass = _mass_vectors(p)
    indep = np.outer(src_mass, tgt_mass).ravel()

    # Column of t coefficients: each row's value at eta = independence.
    t_col_eq = np.asarray(base.A_eq @ indep).ravel()
    A_eq = sp.hstack([base.A_eq, sp.csr_matrix(t_col_eq[:, None])], format="csr")
    A_ub = sp.csr_matrix(
        np.concatenate([np.zeros(base.num_vars), [1.0]])[None, :]
    )
    c = np.zeros(base.num_vars + 1)
    c[-1] = -1.0
    lifted = lplib.LinearProgram(
        base.num_vars + 1, c, A_eq, base.b_eq, A_ub, np.array([1.0])
    )
    return lifted, indep


# Entropy solver: dense Newton system is (ns + nt + 4) square; beyond this
# the LP route takes over.
_ENTROPY_MAX_DIM = 3000

# A rewiring chain driven by the entropy tilt is effectively diffusive when
# its typical log acceptance ratio drops below this; auto then escalates to
# the analytic centre.  Heavy-tailed degree sequences sit one decade below,
# light-tailed ones several times above.
_DRIFT_FLOOR = 0.1


def _chain_drift(p: EtaProblem, lam: np.ndarray, samples: int = 100_000) -> float:
    """Typical |log acceptance ratio| of a chain driven by the Gibbs tilt.

    For a swap of edges ((s1,t1),(s2,t2)) -> ((s1,t2),(s2,t1)) the tilt's
    log ratio collapses to (u(s1)-u(s2))' Lam (v(t2)-v(t1)) in the
    standardised weights; ends are sampled from the independence coupling,
    which matches a chain's starting point well enough for a scale
    estimate.  The mean absolute value is a robust drift gauge: on heavy
    tails the weights put their variance into rare outliers, so the tilt
    needed to pin the moments is microscopic and so is the typical ratio.

    Deterministic (fixed internal seed).
    """
    rng = np.random.default_rng(0)
    rho, kappa = _mass_vectors(p)
    f, gv = _weight_vectors(p)
    ends = ends_from_nu(p.nu)
    su = {a: (f[a] - ends.mean_q(a)) / ends.sigma_q[a] for a in (1, 2)}
    tv = {b: (gv[b] - ends.mean_q_tilde(b)) / ends.sigma_q_tilde[b]
          for b in (1, 2)}
    s1 = rng.choice(len(rho), size=samples, p=rho)
    s2 = rng.choice(len(rho), size=samples, p=rho)
    t1 = rng.choice(len(kappa), size=samples, p=kappa)
    t2 = rng.choice(len(kappa), size=samples, p=kappa)
    delta = np.zeros(samples)
    for k, (a, b) in enumerate(TYPE_PAIRS):
        delta += lam[k] * (su[a][s1] - su[a][s2]) * (tv[b][t2] - tv[b][t1])
    return float(np.abs(delta).mean())


def _entropy_eta(
    p: EtaProblem,
    max_iters: int = 80,
    tol: float = 1e-10,
    stall_tol: float = 1e-8,
) -> tuple[EdgeMixMatrix | None, np.ndarray]:
    """Maximum-entropy mixing matrix hitting the marginals and targets.

    Solves max -sum eta log eta subject to the row/column masses and the
    four moment equalities by Newton's method on the concave dual; the
    solution has the Gibbs form exp(A_s + B_t + sum lam * w) with centred
    degree-product weights w, which makes the later rewiring chain's
    acceptance ratio a smooth exponential tilt and gives it far better
    mobility than any basic solution of the LP.

    Returns (matrix, lam).  The weights are standardised, so lam is the
    tilt in per-unit-noise terms; its size tells how strongly the Gibbs
    landscape steers a rewiring chain (see solve_target_eta).  The matrix
    is None when the iteration fails to converge, which happens exactly
    when the targets sit on or outside the boundary of the attainable
    moment region (no strictly positive solution exists); the caller then
    falls back to the LP route, which settles attainability.
    """
    ns, nt = len(p.source_pairs), len(p.target_pairs)
    if ns + nt + 4 > _ENTROPY_MAX_DIM:
        return None, np.zeros(4)
    ends = ends_from_nu(p.nu)
    _require_sigmas(ends, TYPE_PAIRS)
    rho, kappa = _mass_vectors(p)
    f, gv = _weight_vectors(p)
    mu = {a: ends.mean_q(a) for a in (1, 2)}
    mut = {b: ends.mean_q_tilde(b) for b in (1, 2)}
    sig, sigt = ends.sigma_q, ends.sigma_q_tilde

    # Centred, standardised weights: the tilt lam*(f - mu)(g - mut)/(sig
    # sigt) spans the same family as raw degree products (row/column terms
    # fold into A and B), and on this scale the pinned moment is the target
    # coefficient itself, so lam stays O(1) even for heavy degree tails.
    W = np.stack([np.outer(f[a] - mu[a], gv[b] - mut[b]) / (sig[a] * sigt[b])
                  for a, b in TYPE_PAIRS])
    Wf = W.reshape(4, -1)
    m_star = np.array([p.targets.get(a, b) for a, b in TYPE_PAIRS])

    A = np.log(rho)
    B = np.log(kappa)
    lam = np.zeros(4)

    def gibbs(A, B, lam):
        E = A[:, None] + B[None, :] + np.tensordot(lam, W, axes=1)
        with np.errstate(over="ignore"):
            return np.exp(E)

    def dual(A, B, lam):
        return rho @ A + kappa @ B + m_star @ lam - gibbs(A, B, lam).sum()

    def finish(M):
        return EdgeMixMatrix(list(p.source_pairs), list(p.target_pairs),
                             M / M.sum())

    n = ns + nt + 4
    for _ in range(max_iters):
        M = gibbs(A, B, lam)
        rs = M.sum(axis=1)
        cs = M.sum(axis=0)
        grad = np.concatenate([rho - rs, kappa - cs, m_star - Wf @ M.ravel()])
        resid = max(
            np.abs(grad[:ns] / rho).max(),
            np.abs(grad[ns:ns + nt] / kappa).max(),
            np.abs(grad[ns + nt:]).max(),
        )
        if resid < tol:
            return finish(M), lam
        # Negative Hessian of the dual, assembled blockwise.
        P = np.einsum("kst,st->sk", W, M)
        Q = np.einsum("kst,st->tk", W, M)
        R = (Wf * M.ravel()) @ Wf.T
        H = np.zeros((n, n))
        H[:ns, :ns] = np.diag(rs)
        H[:ns, ns:ns + nt] = M
        H[:ns, ns + nt:] = P
        H[ns:ns + nt, :ns] = M.T
        H[ns:ns + nt, ns:ns + nt] = np.diag(cs)
        H[ns:ns + nt, ns + nt:] = Q
        H[ns + nt:, :ns] = P.T
        H[ns + nt:, ns:ns + nt] = Q.T
        H[ns + nt:, ns + nt:] = R
        # Equilibrate before regularising: the diagonal spans the squared
        # range of the masses, and a raw additive ridge would stall the
        # small-mass rows short of convergence.  The tiny multiplicative
        # ridge also absorbs the A/B shift gauge.
        d = np.sqrt(np.maximum(H.diagonal(), 1e-300))
        Hs = H / d[:, None] / d[None, :]
        Hs[np.arange(n), np.arange(n)] += 1e-13
        try:
            step = np.linalg.solve(Hs, grad / d) / d
        except np.linalg.LinAlgError:
            step = np.linalg.lstsq(Hs, grad / d, rcond=None)[0] / d
        d0 = dual(A, B, lam)
        slope = float(grad @ step)
        t_ls = 1.0
        improved = False
        for _ in range(60):
            if dual(A + t_ls * step[:ns], B + t_ls * step[ns:ns + nt],
                    lam + t_ls * step[ns + nt:]) >= d0 + 1e-4 * t_ls * slope:
                improved = True
                break
            t_ls *= 0.5
        if not improved:
            # Line search exhausted at machine precision; good enough when
            # the residual is already far inside the downstream tolerance.
            return (finish(M) if resid < stall_tol else None), lam
        A = A + t_ls * step[:ns]
        B = B + t_ls * step[ns:ns + nt]
        lam = lam + t_ls * step[ns + nt:]
    M = gibbs(A, B, lam)
    return (finish(M) if resid < stall_tol else None), lam


def _center_eta(
    p: EtaProblem,
    eta0: EdgeMixMatrix,
    max_iters: int = 60,
    tol: float = 1e-6,
) -> EdgeMixMatrix | None:
    """Polish a strictly positive mixing matrix to the analytic centre.

    Maximises sum log eta over the constraint polytope by damped Newton
    steps from eta0 (any strictly positive feasible point, in practice the
    maximum-entropy solution).  The centre pushes every entry as far from
    zero as the constraints allow, which flattens the acceptance landscape
    seen by the rewiring chain; on heavy-tailed degree sequences this cuts
    the steps-to-target by a large factor compared to the entropy point.

    The constraints are linear, so each damped step with factor t shrinks
    the constraint residual by exactly (1 - t): the iterate keeps the
    marginals and moments pinned even when stopped well short of the
    centre, and tol is a quality knob rather than a correctness one.
    Returns None only when the final residual is not tiny.
    """
    ns, nt = len(p.source_pairs), len(p.target_pairs)
    rho, kappa = _mass_vectors(p)
    f, gv = _weight_vectors(p)
    ends = ends_from_nu(p.nu)
    mu = {a: ends.mean_q(a) for a in (1, 2)}
    mut = {b: ends.mean_q_tilde(b) for b in (1, 2)}
    sig, sigt = ends.sigma_q, ends.sigma_q_tilde
    W = np.stack([np.outer(f[a] - mu[a], gv[b] - mut[b]) / (sig[a] * sigt[b])
                  for a, b in TYPE_PAIRS])
    Wf = W.reshape(4, -1)
    m_star = np.array([p.targets.get(a, b) for a, b in TYPE_PAIRS])
    b_full = np.concatenate([rho, kappa, m_star])

    X = eta0.H.copy()
    n = ns + nt + 4
    for _ in range(max_iters):
        X2 = X * X
        P = np.einsum("kst,st->sk", W, X2)
        Q = np.einsum("kst,st->tk", W, X2)
        R = (Wf * X2.ravel()) @ Wf.T
        H = np.zeros((n, n))
        H[:ns, :ns] = np.diag(X2.sum(axis=1))
        H[:ns, ns:ns + nt] = X2
        H[:ns, ns + nt:] = P
        H[ns:ns + nt, :ns] = X2.T
        H[ns:ns + nt, ns:ns + nt] = np.diag(X2.sum(axis=0))
        H[ns:ns + nt, ns + nt:] = Q
        H[ns + nt:, :ns] = P.T
        H[ns + nt:, ns:ns + nt] = Q.T
        H[ns + nt:, ns + nt:] = R
        ax = np.concatenate([X.sum(axis=1), X.sum(axis=0), Wf @ X.ravel()])
        # With rhs = 2 Ax - b the full Newton step lands exactly on the
        # constraints instead of merely preserving the current residual.
        rhs = 2.0 * ax - b_full
        # The diagonal spans many orders of magnitude (squared cell
        # masses), so equilibrate before adding the ridge; a raw additive
        # ridge would perturb the small-mass rows enough to leak
        # feasibility error into every step.
        d = np.sqrt(np.maximum(H.diagonal(), 1e-300))
        Hs = H / d[:, None] / d[None, :]
        Hs[np.arange(n), np.arange(n)] += 1e-13
        try:
            mult = np.linalg.solve(Hs, rhs / d) / d
        except np.linalg.LinAlgError:
            mult = np.linalg.lstsq(Hs, rhs / d, rcond=None)[0] / d
        at_mult = (mult[:ns][:, None] + mult[ns:ns + nt][None, :]
                   + np.tensordot(mult[ns + nt:], W, axes=1))
        dx = X - X2 * at_mult
        if float((dx * dx / X2).sum()) < tol:
            break
        t_ls = 1.0
        neg = dx < 0.0
        if neg.any():
            t_ls = min(1.0, 0.99 * float((X[neg] / -dx[neg]).min()))
        base = float(np.log(X).sum())
        for _ in range(50):
            stepped = X + t_ls * dx
            if (stepped > 0.0).all() and float(np.log(stepped).sum()) > base:
                break
            t_ls *= 0.5
        else:
            break
        X = stepped
    resid = max(
        float(np.abs((X.sum(axis=1) - rho) / rho).max()),
        float(np.abs((X.sum(axis=0) - kappa) / kappa).max()),
        float(np.abs(Wf @ X.ravel() - m_star).max()),
    )
    if resid > 1e-8:
        return None
    return EdgeMixMatrix(list(p.source_pairs), list(p.target_pairs),
                         X / X.sum())


def _lp_target_eta(
    p: EtaProblem, backend: str, spread: bool
) -> EdgeMixMatrix | None:
    ns, nt = len(p.source_pairs), len(p.target_pairs)
    if spread:
        prog, indep = _spread_program(p)
        sol = lplib.solve(prog, backend=backend)
        if sol.status is lplib.LpStatus.INFEASIBLE:
            return None
        if sol.status is not lplib.LpStatus.OPTIMAL:
            raise lplib.LpError(f"unexpected LP status {sol.status}")
        t = sol.x[-1]
        flat = sol.x[:-1] + t * indep
    else:
        prog = assemble_constraints(p)
        sol = lplib.solve_feasibility(prog, backend=backend)
        if sol.status is lplib.LpStatus.INFEASIBLE:
            return None
        if sol.status is not lplib.LpStatus.OPTIMAL:
            raise lplib.LpError(f"unexpected LP status {sol.status}")
        flat = sol.x
    flat = np.where(flat < 0.0, 0.0, flat)
    eta = EdgeMixMatrix(list(p.source_pairs), list(p.target_pairs),
                        flat.reshape(ns, nt))
    eta.validate(atol=1e-6)
    return eta


def solve_target_eta(
    p: EtaProblem,
    backend: str = "auto",
    method: str = "auto",
) -> EdgeMixMatrix | None:
    """Find a mixing matrix realising the target coefficients.

    Returns None when the targets are jointly unattainable for this
    degree-pair distribution.  Methods:

    * "auto" (default): maximum-entropy solve; when the resulting Gibbs
      tilt is too flat to steer a rewiring chain (typical log acceptance
      ratio below 0.1, the heavy-tail regime) the point is polished to
      the analytic centre of the feasible polytope, which restores
      mobility there.  Falls back to the LP when the targets admit no
      strictly positive solution; attainability is then settled by the
      LP's feasibility status.
    * "center": always polish to the analytic centre; raises instead of
      falling back to the LP.
    * "entropy": the maximum-entropy point without centring.
    * "spread": LP feasibility plus a maximised independence-mixture
      component (interior-leaning but piecewise).
    * "vertex": plain LP feasibility, a basic solution.
    """
    if p.targets is None:
        raise ValueError("solve_target_eta requires targets")
    if method not in ("auto", "center", "entropy", "spread", "vertex"):
        raise ValueError(f"unknown method {method!r}")
    if method in ("auto", "center", "entropy"):
        eta, lam = _entropy_eta(p)
        if eta is not None:
            if method == "center" or (
                method == "auto" and _chain_drift(p, lam) < _DRIFT_FLOOR
            ):
                polished = _center_eta(p, eta)
                if polished is not None:
                    eta = polished
            eta.validate(atol=1e-6)
            return eta
        if method != "auto":
            raise ValueError(
                "no strictly positive mixing matrix reaches these targets; "
                "use method='auto' or 'spread'"
            )
    return _lp_target_eta(p, backend, spread=(method != "vertex"))


@dataclass(frozen=True)
class AssortBounds:
    """Attainable [lower, upper] range per coefficient."""

    bounds: dict[tuple[int, int], tuple[float, float]]

    def get(self, a: int, b: int) -> tuple[float, float]:
        return self.bounds[(a, b)]

    def width(self, a: int, b: int) -> float:
        lo, hi = self.bounds[(a, b)]
        return hi - lo


def _clamp(r: float, what: str) -> float:
    if abs(r) > 1.0 + _CLAMP_TOL:
        raise lplib.LpError(f"{what} = {r} overshoots [-1, 1] beyond tolerance")
    return min(1.0, max(-1.0, r))


def coefficient_bounds(
    p: EtaProblem,
    order: tuple[tuple[int, int], ...] = DEFAULT_ORDER,
    conditioning: dict[tuple[int, int], tuple[float, float]] | None = None,
    backend: str = "auto",
) -> AssortBounds:
    """Attainable range of each queried coefficient.

    For every type pair in `order`, minimise and maximise the associated
    degree-product moment over the transportation polytope, subject to the
    interval constraints in `conditioning` (and any already stored on the
    problem); the optima map back to coefficient bounds through the inverse
    g map.  Raises ValueError when the conditioning intervals cut the
    feasible set down to nothing.
    """
    conditioning = {**p.intervals, **(conditioning or {})}
    for pair in order:
        if pair not in TYPE_PAIRS:
            raise ValueError(f"unknown type pair {pair}")
    ends = ends_from_nu(p.nu)
    _require_sigmas(ends, set(order) | set(conditioning.keys()))

    bare = EtaProblem(
        p.nu, p.source_pairs, p.target_pairs, None, dict(conditioning)
    )
    prog = assemble_constraints(bare)
    f, gv = _weight_vectors(bare)

    out: dict[tuple[int, int], tuple[float, float]] = {}
    for a, b in order:
        w = np.outer(f[a], gv[b]).ravel()
        vals = []
        for sign in (1.0, -1.0):
            prog_obj = lplib.LinearProgram(
                prog.num_vars, sign * w, prog.A_eq, prog.b_eq,
                prog.A_ub, prog.b_ub,
            )
            sol = lplib.solve(prog_obj, backend=backend)
            if sol.status is lplib.LpStatus.INFEASIBLE:
                raise ValueError("conditioning intervals unattainable")
            if sol.status is not lplib.LpStatus.OPTIMAL:
                raise lplib.LpError(
                    f"unexpected LP status {sol.status} while bounding r({a},{b})"
                )
            vals.append(sign * sol.objective)
        lo = _clamp(_inverse_g(a, b, vals[0], ends), f"lower bound of r({a},{b})")
        hi = _clamp(_inverse_g(a, b, vals[1], ends), f"upper bound of r({a},{b})")
        if lo > hi:
            lo, hi = hi, lo
        out[(a, b)] = (lo, hi)
    return AssortBounds(out)
