"""Affine position and distance: John ellipse, Banach-Mazur metrics.

The John ellipse is the maximal-area ellipse inside a body. With the
ellipse written as x = A u + c over the unit circle (A symmetric positive
definite), containment is the linear-cone condition

    |A u_i| + <c, u_i> <= h(u_i)   for all grid directions u_i,

and maximizing log det A subject to it is a small smooth convex program.
A log-barrier Newton solver drives it to the central path; when contact
is polygonal (a handful of active directions) an active-set refinement
solves the KKT system to machine precision.

Banach-Mazur distances are estimated by direct search over normalized
affine maps (Nelder-Mead with deterministic multistart, seeded by the
John maps), so results are upper-bound flavored with grid-limited
accuracy.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import linprog, minimize

from .bodies import (
    AffineMap,
    AngleGrid,
    Body,
    FourierBody,
    affine_image,
    is_origin_symmetric,
    steiner_point,
    support_eval,
    support_values,
    surface_measure,
    to_polygon,
    translate,
)
from .errors import NotJohnNormalizable, NotSymmetric

BARRIER_T_MAX = 1e13
POLISH_MAX_ACTIVE = 6


@dataclass(frozen=True)
class EllipseParams:
    """Ellipse {A u + c : |u| = 1} with A symmetric positive definite."""

    matrix: np.ndarray
    center: np.ndarray

    @property
    def area(self) -> float:
        return float(np.pi * np.linalg.det(self.matrix))

    def as_map(self) -> AffineMap:
        return AffineMap(self.matrix, self.center)


@dataclass(frozen=True)
class JohnResult:
    ellipse: EllipseParams
    min_slack: float
    active_count: int
    polished: bool


@dataclass(frozen=True)
class BmEstimate:
    """Distance estimate together with its witness map.

    Disk case: amap repositions the body so the disk of radius scale
    fits inside it and the disk of radius scale * distance contains it.
    Pair case: amap acts on the second body, and on the grid
    scale * amap(l) lies inside k - center, which lies inside
    distance * scale * amap(l).
    """

    distance: float
    amap: AffineMap
    center: np.ndarray
    scale: float
    multistart_spread: float = 0.0


def _pack(z, symmetric):
    a = np.array([[z[0], z[1]], [z[1], z[2]]])
    c = np.zeros(2) if symmetric else np.asarray(z[3:5])
    return a, c


def _slack_terms(z, h, units, symmetric):
    a, c = _pack(z, symmetric)
    v = units @ a  # row i is A u_i
    r = np.hypot(v[:, 0], v[:, 1])
    s = h - r - units @ c
    return a, c, v, r, s


def _grad_r(v, r, units):
    """Rows: d r_i / d(alpha, beta, gamma)."""
    ux, uy = units[:, 0], units[:, 1]
    return np.column_stack([v[:, 0] * ux, v[:, 0] * uy + v[:, 1] * ux,
                            v[:, 1] * uy]) / r[:, None]


def _hess_r_weighted(w, v, r, units):
    """sum_i w_i * Hess_p r_i, a 3x3 matrix."""
    ux, uy = units[:, 0], units[:, 1]
    vp = np.stack([np.column_stack([ux, np.zeros_like(ux)]),
                   np.column_stack([uy, ux]),
                   np.column_stack([np.zeros_like(uy), uy])])  # (3, n, 2)
    dots = np.einsum("pnk,qnk->pqn", vp, vp)
    proj = np.einsum("nk,pnk->pn", v, vp) / r
    return np.einsum("pqn,n->pq", dots, w / r) - np.einsum(
        "pn,qn,n->pq", proj, proj, w / r)


def _logdet_terms(a):
    p = np.linalg.inv(a)
    g = -np.array([p[0, 0], 2.0 * p[0, 1], p[1, 1]])
    h = np.array([
        [p[0, 0] ** 2, 2 * p[0, 0] * p[0, 1], p[0, 1] ** 2],
        [2 * p[0, 0] * p[0, 1], 2 * (p[0, 0] * p[1, 1] + p[0, 1] ** 2),
         2 * p[0, 1] * p[1, 1]],
        [p[0, 1] ** 2, 2 * p[0, 1] * p[1, 1], p[1, 1] ** 2],
    ])
    return g, h


def _barrier_delta(z, z_new, h, units, symmetric, t):
    """F(z_new) - F(z) for F = -t*logdet - sum(log s), inf if infeasible.

    Computed from ratios so the difference stays meaningful when F
    itself is ~t and the decrease is far below float resolution of F.
    """
    a0, _, _, _, s0 = _slack_terms(z, h, units, symmetric)
    a1, _, _, _, s1 = _slack_terms(z_new, h, units, symmetric)
    det1 = a1[0, 0] * a1[1, 1] - a1[0, 1] ** 2
    if a1[0, 0] <= 0.0 or det1 <= 0.0 or np.min(s1) <= 0.0:
        return np.inf
    det0 = a0[0, 0] * a0[1, 1] - a0[0, 1] ** 2
    return -t * math.log(det1 / det0) - float(np.sum(np.log(s1 / s0)))


def _newton_direction(g, hl, v, r, s, units, symmetric, t):
    """Newton step for the barrier without forming J' W J over the
    near-active slacks: squaring 1/s there makes the plain Hessian
    numerically singular long before the slacks reach the central-path
    scale of the late stages."""
    dim = 3 if symmetric else 5
    inv_s = 1.0 / s
    gr = _grad_r(v, r, units)
    jac = -gr if symmetric else -np.hstack([gr, units])
    near = np.nonzero(s < 1e-4 * np.max(s))[0]
    if len(near) > 24:
        near = near[np.argsort(s[near])[:24]]
    mask = np.ones(len(s), dtype=bool)
    mask[near] = False
    b = np.zeros((dim, dim))
    b[:3, :3] = t * hl + _hess_r_weighted(inv_s, v, r, units)
    jf = jac[mask]
    b += (jf * inv_s[mask, None] ** 2).T @ jf
    if len(near) == 0:
        return np.linalg.solve(b, -g)
    ja = jac[near]
    na = len(near)
    k = np.zeros((dim + na, dim + na))
    k[:dim, :dim] = b
    k[:dim, dim:] = ja.T
    k[dim:, :dim] = ja
    k[dim + np.arange(na), dim + np.arange(na)] = -s[near] ** 2
    rhs = np.concatenate([-g, np.zeros(na)])
    scale = 1.0 / np.sqrt(np.maximum(np.abs(np.diag(k)), 1e-300))
    keq = k * scale[:, None] * scale[None, :]
    sol = np.linalg.solve(keq, rhs * scale) * scale
    return sol[:dim]


def _barrier_newton(z, h, units, symmetric, t, iters=2000):
    # the budget looks extravagant for a Newton method, but when a 10x
    # jump in t re-triggers active-set discovery the iterates crawl
    # along the boundary in feasibility-limited steps for a few hundred
    # iterations; stages on the central path exit after a handful
    dim = len(z)
    for _ in range(iters):
        a, _, v, r, s = _slack_terms(z, h, units, symmetric)
        gl, hl = _logdet_terms(a)
        gr = _grad_r(v, r, units)  # (n, 3)
        inv_s = 1.0 / s
        g = np.zeros(dim)
        g[:3] = t * gl + gr.T @ inv_s
        if not symmetric:
            g[3:] = units.T @ inv_s
        try:
            d = _newton_direction(g, hl, v, r, s, units, symmetric, t)
        except np.linalg.LinAlgError:
            break
        decrement = float(-g @ d)
        if not np.isfinite(decrement) or decrement <= 1e-9:
            break
        step = 1.0
        accepted = False
        for _ in range(80):
            if _barrier_delta(z, z + step * d, h, units, symmetric, t) \
                    <= -0.25 * step * decrement:
                accepted = True
                break
            step *= 0.5
        if not accepted:
            break
        z = z + step * d
    return z


def _kkt_polish(z, h, units, symmetric, active, mu, iters=30):
    """Newton on the active-set KKT system; exact polygonal contact."""
    dim = len(z)
    na = len(active)
    ua = units[active]
    for _ in range(iters):
        a, _, v, r, s = _slack_terms(z, h, units, symmetric)
        gl, hl = _logdet_terms(a)
        gr_a = _grad_r(v[active], r[active], ua)
        grad_s = np.zeros((na, dim))
        grad_s[:, :3] = -gr_a
        if not symmetric:
            grad_s[:, 3:] = -ua
        res1 = np.zeros(dim)
        res1[:3] = gl
        res1 -= grad_s.T @ mu
        res2 = s[active]
        hess_l = np.zeros((dim, dim))
        hess_l[:3, :3] = hl + _hess_r_weighted(mu, v[active], r[active], ua)
        jac = np.block([[hess_l, -grad_s.T], [grad_s, np.zeros((na, na))]])
        rhs = -np.concatenate([res1, res2])
        try:
            delta = np.linalg.solve(jac, rhs)
        except np.linalg.LinAlgError:
            return z, mu, False
        z_new = z + delta[:dim]
        mu_new = mu + delta[dim:]
        a_new, _ = _pack(z_new, symmetric)
        if a_new[0, 0] <= 0.0 or np.linalg.det(a_new) <= 0.0:
            return z, mu, False
        z, mu = z_new, mu_new
        if np.max(np.abs(delta)) <= 1e-14 * (1.0 + np.max(np.abs(z))):
            break
    if np.any(mu < -1e-9):
        return z, mu, False
    return z, mu, True


def john_ellipse(body: Body, grid: AngleGrid | None = None,
                 symmetric: bool | None = None) -> JohnResult:
    """Largest-area ellipse inside the body.

    With symmetric=True the center is pinned at the origin (raises
    NotSymmetric if the body is visibly not origin-symmetric). Contact
    with at most POLISH_MAX_ACTIVE grid directions triggers the KKT
    refinement, which removes the O(1/t) central-path offset.
    """
    grid = grid or AngleGrid()
    angles = grid.theta
    if not isinstance(body, FourierBody):
        # a maximal inscribed ellipse touches polygon edges, never the
        # vertices, so adding the edge normals makes contact exact
        normals = surface_measure(to_polygon(body)).angles
        angles = np.unique(np.concatenate([angles, normals]))
        # near-coincident directions make the KKT system singular
        angles = angles[np.diff(angles, prepend=angles[-1] - 2.0 * np.pi) > 1e-9]
    units = np.column_stack([np.cos(angles), np.sin(angles)])
    h = support_eval(body, angles)
    if symmetric is None:
        symmetric = is_origin_symmetric(body, grid)
    elif symmetric and not is_origin_symmetric(body, grid):
        raise NotSymmetric("body is not origin-symmetric")
    c0 = np.zeros(2) if symmetric else steiner_point(body, grid)
    slack0 = h - units @ c0
    if np.min(slack0) <= 0.0:
        raise NotJohnNormalizable("no interior starting point found")
    z = np.zeros(3 if symmetric else 5)
    z[0] = z[2] = 0.5 * float(np.min(slack0))
    if not symmetric:
        z[3:] = c0
    scale = float(np.max(h))

    def contact_set(s):
        # contact slacks sit at the central-path offset while the nearest
        # non-contact grid direction is several orders larger
        active = np.nonzero(s < 1e-6 * scale)[0]
        if symmetric and len(active):
            # antipodal directions give identical constraints; keep one
            key = np.round(np.mod(angles[active], np.pi) * 1e12).astype(np.int64)
            _, first = np.unique(key, return_index=True)
            active = active[np.sort(first)]
        return active

    def try_polish(z, s, t):
        active = contact_set(s)
        if not 0 < len(active) <= POLISH_MAX_ACTIVE:
            return None
        z_ref, _, ok = _kkt_polish(z, h, units, symmetric, active,
                                   1.0 / (t * s[active]))
        if not ok:
            return None
        s_ref = _slack_terms(z_ref, h, units, symmetric)[4]
        if np.min(s_ref) < -1e-9 * scale:
            return None
        return z_ref, s_ref

    polished = False
    t = 1.0
    while t <= BARRIER_T_MAX:
        z = _barrier_newton(z, h, units, symmetric, t)
        # isolated contacts admit an exact KKT solve whose success
        # certifies optimality; done before the late stages push the
        # contact slacks down to the float cancellation scale of h-|Au|
        if t >= 1e7:
            s = _slack_terms(z, h, units, symmetric)[4]
            ref = try_polish(z, s, t)
            if ref is not None:
                z, s, polished = ref[0], ref[1], True
                break
        t *= 10.0
    if not polished:
        s = _slack_terms(z, h, units, symmetric)[4]
    a, c = _pack(z, symmetric)
    if np.linalg.det(a) <= 0.0:
        raise NotJohnNormalizable("barrier solve left the PSD cone")
    return JohnResult(
        ellipse=EllipseParams(matrix=a, center=c),
        min_slack=float(np.min(s)),
        active_count=int(np.sum(s < 1e-6 * scale)),
        polished=polished,
    )


def john_position(body: Body, grid: AngleGrid | None = None,
                  symmetric: bool | None = None):
    """Map the body so its John ellipse becomes the unit disk.

    Returns (normalized body, inverse John map). The normalized body
    contains the unit disk and sits inside the disk of radius 2
    (sqrt(2) when origin-symmetric).
    """
    grid = grid or AngleGrid()
    res = john_ellipse(body, grid, symmetric)
    inv = res.ellipse.as_map().inverse()
    return affine_image(body, inv, grid), inv


def asymmetry(body: Body, grid: AngleGrid | None = None) -> float:
    """Normalized odd part of the support function, minimized over
    recenterings: min_x max_i |h(u_i) - h(-u_i) - 2 <x, u_i>| / max h."""
    grid = grid or AngleGrid()
    h = support_values(body, grid)
    odd = h - np.roll(h, grid.n // 2)
    # Chebyshev fit: minimize t subject to |odd_i - 2 <x, u_i>| <= t
    a_ub = np.block([[-2.0 * grid.units, -np.ones((grid.n, 1))],
                     [2.0 * grid.units, -np.ones((grid.n, 1))]])
    b_ub = np.concatenate([-odd, odd])
    lp = linprog(c=[0.0, 0.0, 1.0], A_ub=a_ub, b_ub=b_ub,
                 bounds=[(None, None)] * 3, method="highs")
    return float(lp.x[2] / np.max(h))


def _unimodular(p: float, q: float) -> np.ndarray:
    m = math.hypot(p, q)
    s = np.array([[p, q], [q, -p]])
    if m < 1e-30:
        return np.eye(2)
    return math.cosh(m) * np.eye(2) + (math.sinh(m) / m) * s


def _wrap_angle(x):
    return np.mod(np.asarray(x) + np.pi, 2.0 * np.pi) - np.pi


def _rotation(w: float) -> np.ndarray:
    return np.array([[math.cos(w), -math.sin(w)], [math.sin(w), math.cos(w)]])


def _log_sym_unimodular(phi: np.ndarray) -> tuple[float, float]:
    vals, vecs = np.linalg.eigh(phi)
    s = np.log(vals / math.sqrt(vals[0] * vals[1]))
    g = vecs @ np.diag(s) @ vecs.T
    return float(g[0, 0]), float(g[0, 1])


def _polar_factors(g: np.ndarray) -> tuple[float, np.ndarray]:
    """g = rotation(w) @ p with p symmetric positive definite."""
    u, sv, vt = np.linalg.svd(g)
    rot = u @ vt
    if np.linalg.det(rot) < 0.0:
        u = u.copy()
        u[:, -1] *= -1.0
        sv = sv.copy()
        sv[-1] *= -1.0
        rot = u @ vt
    p = vt.T @ np.diag(sv) @ vt
    return math.atan2(rot[1, 0], rot[0, 0]), p


_PENALTY = 1e6


def _nm(objective, x0_list, maxiter):
    best = None
    finals = []
    for x0 in x0_list:
        res = minimize(objective, x0, method="Nelder-Mead",
                       options={"xatol": 1e-11, "fatol": 1e-13,
                                "maxiter": maxiter, "maxfev": maxiter})
        finals.append(res.fun)
        if best is None or res.fun < best.fun:
            best = res
    # spread of the refined distances over the starts that ended
    # feasible; a large value flags an unreliable landscape
    ok = [f for f in finals if f < _PENALTY / 2.0]
    spread = float(np.exp(np.max(ok)) - np.exp(np.min(ok))) if ok else math.inf
    return best, spread


def _recenter_if_symmetric(body: Body, grid: AngleGrid,
                           symmetric: bool | None):
    """Resolve the symmetry flag; symmetric bodies get their center moved
    to the origin so the search can drop translation parameters."""
    if symmetric is False:
        return body, False, np.zeros(2)
    if is_origin_symmetric(body, grid):
        return body, True, np.zeros(2)
    c = steiner_point(body, grid)
    moved = translate(body, -c, grid)
    if is_origin_symmetric(moved, grid):
        return moved, True, c
    if symmetric:
        raise NotSymmetric("body has no center of symmetry")
    return body, False, np.zeros(2)


def bm_distance_disk(body: Body, grid: AngleGrid | None = None, seed: int = 0,
                     restarts: int = 8, symmetric: bool | None = None) -> BmEstimate:
    """Banach-Mazur distance from the body to the disk (upper estimate).

    Searches over unimodular symmetric maps (2 parameters) plus a
    translation when the body is not symmetric; rotations cannot change
    the circumradius/inradius ratio about the origin and are omitted.
    """
    grid = grid or AngleGrid()
    units = grid.units
    body, symmetric, center0 = _recenter_if_symmetric(body, grid, symmetric)
    dim = 2 if symmetric else 4
    poly = None if isinstance(body, FourierBody) else to_polygon(body)

    def objective(params):
        phi = _unimodular(params[0], params[1])
        x = np.zeros(2) if symmetric else params[2:4]
        if poly is not None:
            # exact extremes: circumradius at a vertex, inradius at an edge
            v = (poly.vertices - x) @ phi
            e = np.roll(v, -1, axis=0) - v
            offs = (v[:, 0] * e[:, 1] - v[:, 1] * e[:, 0]) / np.hypot(e[:, 0],
                                                                      e[:, 1])
            r_in = float(np.min(offs))
            if r_in <= 0.0:
                return _PENALTY - r_in
            r_out = float(np.max(np.hypot(v[:, 0], v[:, 1])))
            return math.log(r_out) - math.log(r_in)
        w = units @ phi  # phi is symmetric
        rad = np.hypot(w[:, 0], w[:, 1])
        ang = np.arctan2(w[:, 1], w[:, 0])
        hv = rad * (support_eval(body, ang) - (w / rad[:, None]) @ x)
        m = float(np.min(hv))
        if m <= 0.0:
            return _PENALTY - m
        return math.log(float(np.max(hv))) - math.log(m)

    jr = john_ellipse(body, grid, symmetric=symmetric)
    p0, q0 = _log_sym_unimodular(
        np.linalg.inv(jr.ellipse.matrix) * math.sqrt(
            np.linalg.det(jr.ellipse.matrix)))
    start = np.array([p0, q0]) if symmetric else np.array(
        [p0, q0, *jr.ellipse.center])
    rng = np.random.default_rng(seed)
    starts = [start, np.zeros(dim)]
    while len(starts) < restarts:
        starts.append(start + rng.normal(scale=0.2, size=dim))
    best, spread = _nm(objective, starts, maxiter=4000)
    phi = _unimodular(best.x[0], best.x[1])
    x = np.zeros(2) if symmetric else best.x[2:4]
    amap = AffineMap(phi, -phi @ x)
    if poly is not None:
        v = (poly.vertices - x) @ phi
        e = np.roll(v, -1, axis=0) - v
        scale = float(np.min((v[:, 0] * e[:, 1] - v[:, 1] * e[:, 0])
                             / np.hypot(e[:, 0], e[:, 1])))
    else:
        scale = float(np.min(support_values(affine_image(body, amap, grid), grid)))
    return BmEstimate(distance=float(math.exp(best.fun)), amap=amap,
                      center=center0 + x, scale=scale,
                      multistart_spread=spread)


def bm_distance_pair(k: Body, l: Body, grid: AngleGrid | None = None,
                     seed: int = 0, restarts: int = 8,
                     symmetric: bool | None = None) -> BmEstimate:
    """Banach-Mazur distance between two bodies (upper estimate).

    Affine maps act on l; both bodies get their own translation unless
    symmetric. The witness satisfies
        scale * amap(l) subset (k - center) subset distance * scale * amap(l),
    with subset checked on the grid.
    """
    grid = grid or AngleGrid()
    k, sym_k, center_k = _recenter_if_symmetric(k, grid, symmetric)
    l, sym_l, _ = _recenter_if_symmetric(l, grid, symmetric)
    symmetric = sym_k and sym_l
    dim = 3 if symmetric else 7
    # the ratio of two support functions has first-order extremes at the
    # support kinks; k's edge normals are fixed, l's move with the map
    base = grid.theta
    if not isinstance(k, FourierBody):
        base = np.concatenate([base, surface_measure(to_polygon(k)).angles])
    l_poly = None if isinstance(l, FourierBody) else to_polygon(l)

    def objective(params):
        phi = _rotation(params[0]) @ _unimodular(params[1], params[2])
        x = np.zeros(2) if symmetric else params[3:5]
        z = np.zeros(2) if symmetric else params[5:7]
        angles = base
        if l_poly is not None:
            vm = (l_poly.vertices - z) @ phi.T
            e = np.roll(vm, -1, axis=0) - vm
            angles = np.concatenate([base, np.arctan2(-e[:, 0], e[:, 1])])
        us = np.column_stack([np.cos(angles), np.sin(angles)])
        hk = support_eval(k, angles) - us @ x
        if np.min(hk) <= 0.0:
            return _PENALTY - float(np.min(hk))
        w = us @ phi  # rows phi^T u_i
        rad = np.hypot(w[:, 0], w[:, 1])
        hl = rad * (support_eval(l, np.arctan2(w[:, 1], w[:, 0]))
                    - (w / rad[:, None]) @ z)
        if np.min(hl) <= 0.0:
            return _PENALTY - float(np.min(hl))
        r = hl / hk
        return math.log(float(np.max(r))) - math.log(float(np.min(r)))

    jk = john_ellipse(k, grid)
    jl = john_ellipse(l, grid)
    ak, al_inv = jk.ellipse.matrix, np.linalg.inv(jl.ellipse.matrix)

    def aligned_start(w):
        # every map sending l's John ellipse onto k's has the form
        # a_k R(w) a_l^{-1}; the inner rotation is the body phase the
        # ellipses cannot see, so scan it
        g = ak @ _rotation(w) @ al_inv
        w_out, p_mat = _polar_factors(g / math.sqrt(abs(np.linalg.det(g))))
        p, q = _log_sym_unimodular(p_mat)
        if symmetric:
            return np.array([w_out, p, q])
        return np.array([w_out, p, q, *jk.ellipse.center, *jl.ellipse.center])

    omegas = np.linspace(0.0, 2.0 * np.pi, 64, endpoint=False)
    ranked = sorted(omegas, key=lambda w: objective(aligned_start(w)))
    picked: list[float] = []
    for w in ranked:
        if len(picked) >= restarts:
            break
        if all(abs(_wrap_angle(w - u)) >= np.pi / 16.0 for u in picked):
            picked.append(w)
    starts = [aligned_start(w) for w in picked]
    rng = np.random.default_rng(seed)
    while len(starts) < restarts:
        jitter = rng.normal(scale=0.15, size=dim)
        jitter[0] = rng.uniform(-np.pi / 2, np.pi / 2)
        starts.append(starts[0] + jitter)
    best, spread = _nm(objective, starts, maxiter=6000)
    phi = _rotation(best.x[0]) @ _unimodular(best.x[1], best.x[2])
    x = np.zeros(2) if symmetric else best.x[3:5]
    z = np.zeros(2) if symmetric else best.x[5:7]
    # recompute the witness scale at the optimum, on the plain grid
    w = grid.units @ phi
    rad = np.hypot(w[:, 0], w[:, 1])
    ang = np.arctan2(w[:, 1], w[:, 0])
    hl = rad * (support_eval(l, ang) - (w / rad[:, None]) @ z)
    hk = support_values(k, grid) - grid.units @ x
    amap = AffineMap(phi, -phi @ z)
    return BmEstimate(distance=float(math.exp(best.fun)), amap=amap,
                      center=center_k + x, scale=float(np.min(hk / hl)),
                      multistart_spread=spread)
