"""Reference geometries: spheres, tori, caps, catenoids, graphs, curves.

These are the analytic test bodies used throughout the laboratory.  All
builders return validated ``TriMesh``/``PolyCurve`` objects.
"""

import numpy as np

from .geometry import PolyCurve, TriMesh

__all__ = [
    "circle_curve",
    "ellipse_curve",
    "line_curve",
    "random_closed_polygon",
    "random_convex_polygon",
    "icosphere",
    "ellipsoid",
    "grid_plane",
    "open_tube",
    "torus",
    "disk_mesh",
    "spherical_cap",
    "catenoid",
    "graph_mesh",
    "random_smooth_graph",
]


# ---------------------------------------------------------------------------
# curves
# ---------------------------------------------------------------------------

def circle_curve(radius=1.0, m=256, center=(0.0, 0.0), dim=2):
    """Regular m-gon inscribed in the circle of given radius."""
    th = np.linspace(0.0, 2.0 * np.pi, m, endpoint=False)
    v = np.zeros((m, dim))
    v[:, 0] = radius * np.cos(th)
    v[:, 1] = radius * np.sin(th)
    v[:, : len(center)] += np.asarray(center, float)
    return PolyCurve(v, closed=True)


def ellipse_curve(a=2.0, b=1.0, m=256, uniform=True):
    """Ellipse with semiaxes (a, b), optionally resampled to uniform
    arclength (better behaved under explicit stepping)."""
    th = np.linspace(0.0, 2.0 * np.pi, 4 * m, endpoint=False)
    v = np.column_stack([a * np.cos(th), b * np.sin(th)])
    if not uniform:
        return PolyCurve(v[:: 4], closed=True)
    seg = np.linalg.norm(np.roll(v, -1, axis=0) - v, axis=1)
    s = np.concatenate([[0.0], np.cumsum(seg)])
    total = s[-1]
    targets = np.linspace(0.0, total, m, endpoint=False)
    idx = np.searchsorted(s, targets, side="right") - 1
    idx = np.clip(idx, 0, len(v) - 1)
    frac = (targets - s[idx]) / np.maximum(seg[idx], 1e-300)
    nxt = (idx + 1) % len(v)
    pts = v[idx] * (1.0 - frac[:, None]) + v[nxt] * frac[:, None]
    return PolyCurve(pts, closed=True)


def line_curve(length=20.0, m=512, direction=(1.0, 0.0), center=(0.0, 0.0)):
    """Open straight segment centered at ``center``."""
    d = np.asarray(direction, float)
    d = d / np.linalg.norm(d)
    s = np.linspace(-0.5 * length, 0.5 * length, m)
    v = np.asarray(center, float)[None, :] + s[:, None] * d[None, :]
    return PolyCurve(v, closed=False)


def random_closed_polygon(rng, m=12, dim=3, scale=1.0):
    """Random closed polygon with vertices i.i.d. Gaussian (rejects
    duplicate consecutive points)."""
    while True:
        v = rng.normal(size=(m, dim)) * scale
        e = np.roll(v, -1, axis=0) - v
        if np.all(np.linalg.norm(e, axis=1) > 1e-9):
            return PolyCurve(v, closed=True)


def random_convex_polygon(rng, m=16, scale=1.0):
    """Planar convex polygon: convex position angles with random radii."""
    th = np.sort(rng.uniform(0.0, 2.0 * np.pi, size=m))
    # enforce distinct angles
    while np.any(np.diff(th) < 1e-6):
        th = np.sort(rng.uniform(0.0, 2.0 * np.pi, size=m))
    # support-function construction keeps the polygon convex
    r = scale * (1.0 + 0.3 * rng.uniform(-1.0, 1.0))
    pts = np.column_stack([np.cos(th), np.sin(th)]) * r
    return PolyCurve(pts, closed=True)


# ---------------------------------------------------------------------------
# closed meshes
# ---------------------------------------------------------------------------

def icosphere(subdivisions=4, radius=1.0, center=(0.0, 0.0, 0.0)):
    """Icosahedron subdivided ``subdivisions`` times, projected to the
    sphere.  Level 4 has 2562 vertices and 5120 faces."""
    phi = (1.0 + np.sqrt(5.0)) / 2.0
    verts = np.array([
        [-1, phi, 0], [1, phi, 0], [-1, -phi, 0], [1, -phi, 0],
        [0, -1, phi], [0, 1, phi], [0, -1, -phi], [0, 1, -phi],
        [phi, 0, -1], [phi, 0, 1], [-phi, 0, -1], [-phi, 0, 1],
    ], dtype=float)
    verts /= np.linalg.norm(verts, axis=1)[:, None]
    faces = np.array([
        [0, 11, 5], [0, 5, 1], [0, 1, 7], [0, 7, 10], [0, 10, 11],
        [1, 5, 9], [5, 11, 4], [11, 10, 2], [10, 7, 6], [7, 1, 8],
        [3, 9, 4], [3, 4, 2], [3, 2, 6], [3, 6, 8], [3, 8, 9],
        [4, 9, 5], [2, 4, 11], [6, 2, 10], [8, 6, 7], [9, 8, 1],
    ], dtype=np.int64)

    for _ in range(subdivisions):
        cache = {}
        vlist = list(verts)

        def midpoint(i, j):
            key = (min(i, j), max(i, j))
            if key not in cache:
                m = vlist[i] + vlist[j]
                m /= np.linalg.norm(m)
                cache[key] = len(vlist)
                vlist.append(m)
            return cache[key]

        new_faces = []
        for a, b, c in faces:
            ab = midpoint(a, b)
            bc = midpoint(b, c)
            ca = midpoint(c, a)
            new_faces += [[a, ab, ca], [b, bc, ab], [c, ca, bc], [ab, bc, ca]]
        verts = np.asarray(vlist)
        faces = np.asarray(new_faces, dtype=np.int64)

    v = verts * radius + np.asarray(center, float)
    return TriMesh(v, faces)


def ellipsoid(semiaxes=(2.0, 1.0, 1.0), subdivisions=4):
    base = icosphere(subdivisions, radius=1.0)
    v = base.vertices * np.asarray(semiaxes, float)[None, :]
    return TriMesh(v, base.triangles)


def torus(R=2.0, rho=1.0, n_major=64, n_minor=40):
    """Torus of revolution with major radius R and tube radius rho."""
    phi = np.linspace(0.0, 2.0 * np.pi, n_major, endpoint=False)
    th = np.linspace(0.0, 2.0 * np.pi, n_minor, endpoint=False)
    P, T = np.meshgrid(phi, th, indexing="ij")
    x = (R + rho * np.cos(T)) * np.cos(P)
    y = (R + rho * np.cos(T)) * np.sin(P)
    z = rho * np.sin(T)
    v = np.column_stack([x.ravel(), y.ravel(), z.ravel()])

    def vid(i, j):
        return (i % n_major) * n_minor + (j % n_minor)

    faces = []
    for i in range(n_major):
        for j in range(n_minor):
            a, b = vid(i, j), vid(i + 1, j)
            c, d = vid(i + 1, j + 1), vid(i, j + 1)
            faces += [[a, b, c], [a, c, d]]
    return TriMesh(v, np.asarray(faces, dtype=np.int64))


# ---------------------------------------------------------------------------
# meshes with boundary
# ---------------------------------------------------------------------------

def _grid_faces(nx, ny):
    faces = []
    for i in range(nx - 1):
        for j in range(ny - 1):
            a = i * ny + j
            b = (i + 1) * ny + j
            c = (i + 1) * ny + j + 1
            d = i * ny + j + 1
            faces += [[a, b, c], [a, c, d]]
    return np.asarray(faces, dtype=np.int64)


def grid_plane(half_extent=1.5, spacing=0.05, center=(0.0, 0.0, 0.0),
               basis=None):
    """Square planar patch triangulated on a regular grid.

    ``basis`` optionally gives two orthonormal ambient directions (any
    dimension >= 3); default is the xy-plane in R^3.
    """
    n_nodes = int(round(2 * half_extent / spacing)) + 1
    s = np.linspace(-half_extent, half_extent, n_nodes)
    X, Y = np.meshgrid(s, s, indexing="ij")
    if basis is None:
        basis = np.array([[1.0, 0, 0], [0, 1.0, 0]])
    else:
        basis = np.asarray(basis, float)
    pts = (X.ravel()[:, None] * basis[0][None, :]
           + Y.ravel()[:, None] * basis[1][None, :])
    pts = pts + np.asarray(center, float)
    return TriMesh(pts, _grid_faces(n_nodes, n_nodes))


def open_tube(radius=np.sqrt(2.0), half_length=None, n_circ=64, n_axial=None):
    """Cylinder surface S^1(radius) x [-L, L] about the z-axis, open ends."""
    if half_length is None:
        half_length = 4.0 * radius
    circ_h = 2.0 * np.pi * radius / n_circ
    if n_axial is None:
        n_axial = max(2, int(round(2.0 * half_length / circ_h)) + 1)
    th = np.linspace(0.0, 2.0 * np.pi, n_circ, endpoint=False)
    z = np.linspace(-half_length, half_length, n_axial)
    T, Z = np.meshgrid(th, z, indexing="ij")
    v = np.column_stack([
        radius * np.cos(T).ravel(),
        radius * np.sin(T).ravel(),
        Z.ravel(),
    ])

    def vid(i, j):
        return (i % n_circ) * n_axial + j

    faces = []
    for i in range(n_circ):
        for j in range(n_axial - 1):
            a, b = vid(i, j), vid(i + 1, j)
            c, d = vid(i + 1, j + 1), vid(i, j + 1)
            faces += [[a, b, c], [a, c, d]]
    return TriMesh(v, np.asarray(faces, dtype=np.int64))


def _stitch_rings(inner_start, ni, outer_start, no):
    """Zipper triangulation between two concentric vertex rings.

    Ring vertices are assumed evenly spaced by angle.  Produces ni + no
    triangles, counterclockwise when the outer ring is counterclockwise.
    """
    faces = []
    i = k = 0
    while i < ni or k < no:
        u_in = (i + 1) / ni if i < ni else np.inf
        u_out = (k + 1) / no if k < no else np.inf
        if u_out <= u_in:
            faces.append([outer_start + k % no,
                          outer_start + (k + 1) % no,
                          inner_start + i % ni])
            k += 1
        else:
            faces.append([inner_start + i % ni,
                          outer_start + k % no,
                          inner_start + (i + 1) % ni])
            i += 1
    return faces


def _ring_fan_mesh(ring_points, center_point):
    """Disk-topology mesh from concentric rings of 6j points plus apex."""
    verts = [np.asarray(center_point, float)]
    ring_start = [0]
    for ring in ring_points:
        ring_start.append(len(verts))
        verts.extend(ring)
    verts = np.asarray(verts)

    faces = [[0, 1 + i, 1 + (i + 1) % 6] for i in range(6)]
    for j in range(1, len(ring_points)):
        faces += _stitch_rings(ring_start[j], 6 * j,
                               ring_start[j + 1], 6 * (j + 1))
    return TriMesh(verts, np.asarray(faces, dtype=np.int64))


def disk_mesh(radius=1.0, rings=24, center=(0.0, 0.0, 0.0)):
    """Flat disk from concentric rings (6j vertices on ring j), boundary
    exactly on the circle."""
    cen = np.asarray(center, float)
    ring_points = []
    for j in range(1, rings + 1):
        m = 6 * j
        th = np.linspace(0.0, 2.0 * np.pi, m, endpoint=False)
        r = radius * j / rings
        ring_points.append(
            np.column_stack([r * np.cos(th), r * np.sin(th), np.zeros(m)]) + cen)
    return _ring_fan_mesh(ring_points, cen)


def spherical_cap(polar_angle=0.5 * np.pi, radius=1.0, rings=32,
                  center=(0.0, 0.0, 0.0)):
    """Cap of the round sphere around the north pole, out to the given
    polar angle; latitude rings with 6j vertices keep the boundary a
    clean circle.  ``polar_angle = pi/2`` gives a hemisphere."""
    cen = np.asarray(center, float)
    ring_points = []
    for j in range(1, rings + 1):
        m = 6 * j
        th = np.linspace(0.0, 2.0 * np.pi, m, endpoint=False)
        pol = polar_angle * j / rings
        ring_points.append(np.column_stack([
            radius * np.sin(pol) * np.cos(th),
            radius * np.sin(pol) * np.sin(th),
            np.full(m, radius * np.cos(pol)),
        ]) + cen)
    return _ring_fan_mesh(ring_points, cen + np.array([0.0, 0.0, radius]))


def catenoid(half_height=1.2, waist=1.0, n_axial=48, n_circ=96):
    """Catenoid x^2 + y^2 = waist^2 cosh^2(z / waist); a minimal surface."""
    z = np.linspace(-half_height, half_height, n_axial)
    th = np.linspace(0.0, 2.0 * np.pi, n_circ, endpoint=False)
    Z, T = np.meshgrid(z, th, indexing="ij")
    r = waist * np.cosh(Z / waist)
    v = np.column_stack([
        (r * np.cos(T)).ravel(),
        (r * np.sin(T)).ravel(),
        Z.ravel(),
    ])

    def vid(i, j):
        return i * n_circ + (j % n_circ)

    faces = []
    for i in range(n_axial - 1):
        for j in range(n_circ):
            a, b = vid(i, j), vid(i, j + 1)
            c, d = vid(i + 1, j + 1), vid(i + 1, j)
            faces += [[a, b, c], [a, c, d]]
    return TriMesh(v, np.asarray(faces, dtype=np.int64))


# ---------------------------------------------------------------------------
# graphs z = f(x, y)
# ---------------------------------------------------------------------------

def graph_mesh(f, half_extent=1.5, spacing=0.05, center_offset=(0.0, 0.0)):
    """Triangulated graph of the scalar function f(x, y) over a square."""
    n_nodes = int(round(2 * half_extent / spacing)) + 1
    s = np.linspace(-half_extent, half_extent, n_nodes)
    X, Y = np.meshgrid(s + center_offset[0], s + center_offset[1],
                       indexing="ij")
    Z = f(X, Y)
    v = np.column_stack([X.ravel(), Y.ravel(), Z.ravel()])
    return TriMesh(v, _grid_faces(n_nodes, n_nodes))


def random_smooth_graph(rng, half_extent=2.6, spacing=0.08, amplitude=0.25,
                        n_modes=4):
    """Random low-frequency Fourier graph with bounded slope."""
    a = rng.normal(size=n_modes) * amplitude / n_modes
    kx = rng.uniform(0.3, 1.4, size=n_modes)
    ky = rng.uniform(0.3, 1.4, size=n_modes)
    ph = rng.uniform(0.0, 2.0 * np.pi, size=(n_modes, 2))

    def f(X, Y):
        out = np.zeros_like(X)
        for j in range(n_modes):
            out += a[j] * np.sin(kx[j] * X + ph[j, 0]) * np.sin(ky[j] * Y + ph[j, 1])
        return out

    return graph_mesh(f, half_extent=half_extent, spacing=spacing)
