"""Independent numerical oracles used to pin expected values.

Everything here deliberately avoids the package's own numerics:
extremal lengths come from developing the quadrilateral onto a true
rectangle with mpmath's adaptive quadrature (tanh-sinh handles the
inverse-square-root endpoint singularities), and Schwarz-Christoffel
edge lengths / positions come from mpmath integration along the same
geometric objects.  Slow but trustworthy; test files freeze the digits
these produce.
"""

from __future__ import annotations

import cmath
import math

import mpmath as mp
import numpy as np
import scipy.sparse as sp
import scipy.sparse.linalg as spla

mp.mp.dps = 30


def rect_side(t1, t2, t3, t4, lo, hi):
    """integral of |(t-t1)(t-t2)(t-t3)(t-t4)|^(-1/2) over (lo, hi)."""

    def f(t):
        p = (t - t1) * (t - t2) * (t - t3) * (t - t4)
        return 1 / mp.sqrt(abs(p))

    mid = (lo + hi) / 2
    return mp.quad(f, [lo, mid, hi])


def oracle_quad_extremal_length(t1, t2, t3, t4):
    """Extremal length of curves joining boundary arc (t1,t2) to (t3,t4)
    in the upper half-plane, via the rectangle development.

    The map F(z) = int dt / sqrt(prod (t - ti)) sends the half-plane to a
    rectangle with the ti at the corners; (t1,t2) and (t3,t4) become the
    two sides of length H separated by distance W, so the extremal
    length of the joining family is W / H.
    """
    t1, t2, t3, t4 = (mp.mpf(t) for t in (t1, t2, t3, t4))
    H = rect_side(t1, t2, t3, t4, t1, t2)
    W = rect_side(t1, t2, t3, t4, t2, t3)
    return W / H


def _disk_angles(t1, t2, t3, t4):
    """Angles of the four marked points after a Moebius map to the disk."""
    finite = [t for t in (t1, t2, t3, t4) if not math.isinf(t)]
    x0 = 0.5 * (min(finite) + max(finite))
    s = max(max(finite) - min(finite), 1.0)
    z0 = complex(x0, 0.75 * s)

    def angle(t):
        if math.isinf(t):
            return 0.0  # (z - z0)/(z - conj(z0)) -> 1 as z -> inf
        return cmath.phase((t - z0) / (t - z0.conjugate()))

    return [angle(t) for t in (t1, t2, t3, t4)]


def _grid_energy_once(angles, n_rad, n_ang):
    """Dirichlet energy of the mixed BVP on the unit disk, one mesh level.

    u = 0 on arc (angles[0], angles[1]), u = 1 on arc (angles[2],
    angles[3]), natural (Neumann) on the other two arcs.  Discretized
    with P1 triangles on a polar mesh graded toward the boundary circle
    and toward the four marked points, where the solution has
    square-root behaviour; the energy is the stiffness quadratic form.
    """
    # unwrap to an increasing angle list th0 < th1 < th2 < th3 < th0+2pi
    th = [angles[0]]
    for a in angles[1:]:
        while a <= th[-1]:
            a += 2.0 * math.pi
        th.append(a)
    arcs = [(th[k], th[k + 1]) for k in range(3)] + [(th[3], th[0] + 2.0 * math.pi)]
    thetas = []
    arc_of = []  # arc index of each angular interval
    for k, (a, b) in enumerate(arcs):
        nk = max(8, int(round(n_ang * (b - a) / (2.0 * math.pi))))
        s = np.arange(nk) / nk
        w = s * s * (3.0 - 2.0 * s)  # cluster quadratically at both ends
        thetas.extend(a + (b - a) * w)
        arc_of.extend([k] * nk)
    thetas = np.asarray(thetas)
    n_th = len(thetas)
    arc_of = np.asarray(arc_of)

    # radial nodes cluster toward r = 1 (spacing ~ sqrt(1 - r))
    s = np.arange(n_rad + 1) / n_rad
    r = np.sin(0.5 * math.pi * s)

    # nodes: single center + rings 1..n_rad, n_th nodes each
    def ring_index(i, j):
        return 1 + (i - 1) * n_th + (j % n_th)

    n_nodes = 1 + n_rad * n_th
    xs = np.empty(n_nodes)
    ys = np.empty(n_nodes)
    xs[0] = ys[0] = 0.0
    for i in range(1, n_rad + 1):
        sl = slice(1 + (i - 1) * n_th, 1 + i * n_th)
        xs[sl] = r[i] * np.cos(thetas)
        ys[sl] = r[i] * np.sin(thetas)

    tris = []
    for j in range(n_th):
        tris.append((0, ring_index(1, j), ring_index(1, j + 1)))
    for i in range(1, n_rad):
        for j in range(n_th):
            a00 = ring_index(i, j)
            a01 = ring_index(i, j + 1)
            a10 = ring_index(i + 1, j)
            a11 = ring_index(i + 1, j + 1)
            tris.append((a00, a10, a11))
            tris.append((a00, a11, a01))
    tris = np.asarray(tris)

    p0 = np.column_stack((xs[tris[:, 0]], ys[tris[:, 0]]))
    p1 = np.column_stack((xs[tris[:, 1]], ys[tris[:, 1]]))
    p2 = np.column_stack((xs[tris[:, 2]], ys[tris[:, 2]]))
    e0 = p2 - p1
    e1 = p0 - p2
    e2 = p1 - p0
    area = 0.5 * np.abs(e1[:, 0] * e2[:, 1] - e1[:, 1] * e2[:, 0])
    edges = (e0, e1, e2)
    rows, cols, vals = [], [], []
    for a in range(3):
        for b in range(3):
            rows.append(tris[:, a])
            cols.append(tris[:, b])
            vals.append(np.sum(edges[a] * edges[b], axis=1) / (4.0 * area))
    K = sp.csr_matrix(
        (np.concatenate(vals), (np.concatenate(rows), np.concatenate(cols))),
        shape=(n_nodes, n_nodes),
    )

    # boundary ring: node j sits between intervals j-1 and j; a corner
    # node (marked point) belongs to its Dirichlet side
    g = np.zeros(n_nodes)
    is_dir = np.zeros(n_nodes, dtype=bool)
    dirichlet = {0: 0.0, 2: 1.0}
    for j in range(n_th):
        node = ring_index(n_rad, j)
        for arc in (int(arc_of[j - 1]), int(arc_of[j])):
            if arc in dirichlet:
                is_dir[node] = True
                g[node] = dirichlet[arc]
    free = ~is_dir
    K_ff = K[free][:, free]
    K_fd = K[free][:, is_dir]
    u = np.array(g)
    u[free] = spla.spsolve(K_ff.tocsc(), -K_fd @ g[is_dir])
    return float(u @ (K @ u))


def oracle_grid_extremal_length(t1, t2, t3, t4, base=24):
    """Extremal length of arcs joining (t1,t2) to (t3,t4): discrete
    extremal length (reciprocal Dirichlet energy) on finite-element
    grids at three resolutions with Richardson extrapolation.
    """
    angles = _disk_angles(t1, t2, t3, t4)
    e1 = _grid_energy_once(angles, base, 3 * base)
    e2 = _grid_energy_once(angles, 2 * base, 6 * base)
    e3 = _grid_energy_once(angles, 4 * base, 12 * base)
    d1, d2 = e2 - e1, e3 - e2
    if d2 != 0.0 and d1 / d2 > 1.0:
        p = math.log2(d1 / d2)
        e_star = e3 + d2 / (2.0**p - 1.0)
    else:
        e_star = e3
    return 1.0 / e_star


def oracle_edge_length(prevertices, exponents, lo, hi, scale=1.0):
    """integral of |scale| * prod |t - tk|^(ak/2) over (lo, hi), mpmath."""

    def f(t):
        acc = mp.mpf(1)
        for tk, ak in zip(prevertices, exponents):
            acc *= mp.power(abs(t - tk), mp.mpf(ak) / 2)
        return abs(mp.mpf(scale)) * acc

    mid = (mp.mpf(lo) + mp.mpf(hi)) / 2
    return mp.quad(f, [mp.mpf(lo), mid, mp.mpf(hi)])


def oracle_ray_length(prevertices, exponents, t0, outward, scale=1.0):
    """integral of |f| from t0 out to infinity (outward = +1 or -1)."""

    def f(u):
        # substitute t = t0 + outward * u / (1 - u), u in (0, 1)
        t = mp.mpf(t0) + outward * u / (1 - u)
        acc = mp.mpf(abs(scale))
        for tk, ak in zip(prevertices, exponents):
            acc *= mp.power(abs(t - tk), mp.mpf(ak) / 2)
        return acc / (1 - u) ** 2

    return mp.quad(f, [0, mp.mpf("0.5"), 1])


def oracle_position(prevertices, exponents, z_from, z_to, scale=1.0):
    """integral of scale * prod (z - tk)^(ak/2) along the straight segment
    from z_from to z_to (principal branch), via mpmath.

    The segment must avoid the prevertices except possibly at its
    endpoints, where the singularity must be integrable.
    """
    za = mp.mpc(z_from)
    zb = mp.mpc(z_to)

    def f(s):
        z = za + (zb - za) * s
        acc = mp.mpc(scale)
        for tk, ak in zip(prevertices, exponents):
            acc *= mp.power(z - tk, mp.mpf(ak) / 2)
        return acc * (zb - za)

    return mp.quad(f, [0, mp.mpf("0.5"), 1])


def oracle_polyline_position(prevertices, exponents, points, scale=1.0):
    """Path integral of the integrand along a polyline (list of complex)."""
    total = mp.mpc(0)
    for za, zb in zip(points[:-1], points[1:]):
        total += oracle_position(prevertices, exponents, za, zb, scale)
    return total
