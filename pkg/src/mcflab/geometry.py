"""Discrete curves and triangle meshes in R^n with curvature operators.

Curves carry turning-angle curvature vectors; meshes carry the cotangent
mean curvature vector, angle-defect Gauss curvature, the Gauss-equation
squared norm of the second fundamental form, and per-vertex normal-space
projectors fitted from the one-ring.  Everything works in any ambient
dimension n >= 2 (curves) or n >= 3 (meshes): all mesh quantities are
intrinsic (edge lengths and angles) except the positions themselves.
"""

from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

__all__ = [
    "GeometryError",
    "PolyCurve",
    "TriMesh",
    "CurvatureField",
    "EulerData",
    "curve_curvature",
    "total_curvature",
    "curve_normal_projectors",
    "curve_curvature_field",
    "mesh_curvature",
    "mean_curvature_vectors",
    "mixed_areas",
    "angle_defects",
    "turning_angles",
    "euler_genus",
    "mesh_components",
    "vertex_normal_projectors",
    "curvature_field",
]


class GeometryError(ValueError):
    """Invalid geometric input (degenerate, non-manifold, out of contract)."""


def _readonly(a, dtype=float):
    a = np.ascontiguousarray(a, dtype=dtype)
    a.setflags(write=False)
    return a


# ---------------------------------------------------------------------------
# curves
# ---------------------------------------------------------------------------

class PolyCurve:
    """Immersed polygonal curve in R^n, open or closed.

    Parameters
    ----------
    vertices : (m, n) float array
        Ordered vertex coordinates, n >= 2.
    closed : bool
        Whether the last vertex connects back to the first.

    Vertices are stored read-only; a curve is an immutable snapshot.
    """

    def __init__(self, vertices, closed=True, validate=True):
        v = _readonly(np.atleast_2d(vertices))
        if v.ndim != 2 or v.shape[1] < 2:
            raise GeometryError("vertices must be (m, n) with n >= 2")
        self.vertices = v
        self.closed = bool(closed)
        if validate:
            self._validate()

    def _validate(self):
        m = len(self.vertices)
        if not np.all(np.isfinite(self.vertices)):
            raise GeometryError("non-finite vertex coordinate")
        if self.closed and m < 3:
            raise GeometryError("closed curve needs >= 3 vertices")
        if not self.closed and m < 2:
            raise GeometryError("open curve needs >= 2 vertices")
        if np.any(self.edge_lengths <= 0.0):
            raise GeometryError("zero-length edge")

    @property
    def ambient_dim(self):
        return self.vertices.shape[1]

    def __len__(self):
        return len(self.vertices)

    @cached_property
    def edges(self):
        """(e, n) array of edge vectors; e = m for closed, m-1 for open."""
        v = self.vertices
        if self.closed:
            return np.roll(v, -1, axis=0) - v
        return v[1:] - v[:-1]

    @cached_property
    def edge_lengths(self):
        return np.linalg.norm(self.edges, axis=1)

    @cached_property
    def length(self):
        return float(self.edge_lengths.sum())

    def with_vertices(self, vertices, validate=False):
        """New curve with the same closedness and replaced coordinates."""
        return PolyCurve(vertices, closed=self.closed, validate=validate)

    def translated(self, offset):
        return self.with_vertices(self.vertices + np.asarray(offset, float))

    def scaled(self, factor):
        return self.with_vertices(self.vertices * float(factor))


def curve_curvature(curve):
    """Turning-angle curvature vectors and vertex length weights.

    At each vertex the turning angle between the incoming and outgoing
    unit tangents is divided by the average of the two adjacent edge
    lengths; the direction is the normalized tangent difference.  With
    this choice the weighted sum of curvature magnitudes equals the total
    turning of the polygon exactly.

    Returns
    -------
    kvec : (m, n) array
        Curvature vector per vertex (zero at open endpoints).
    weights : (m,) array
        Dual edge lengths (average of adjacent edges; half edge at open
        endpoints).  ``sum(|kvec| * weights)`` is the total turning.
    """
    v = curve.vertices
    m, n = v.shape
    ee = curve.edges
    ll = curve.edge_lengths
    tt = ee / ll[:, None]

    kvec = np.zeros((m, n))
    weights = np.zeros(m)
    if curve.closed:
        t_in = np.roll(tt, 1, axis=0)
        l_in = np.roll(ll, 1)
        dt = tt - t_in
        cosang = np.clip(np.einsum("ij,ij->i", t_in, tt), -1.0, 1.0)
        theta = np.arccos(cosang)
        weights = 0.5 * (l_in + ll)
        norm_dt = np.linalg.norm(dt, axis=1)
        mask = norm_dt > 1e-15
        kvec[mask] = (theta[mask] / weights[mask] / norm_dt[mask])[:, None] * dt[mask]
    else:
        t_in = tt[:-1]
        t_out = tt[1:]
        dt = t_out - t_in
        cosang = np.clip(np.einsum("ij,ij->i", t_in, t_out), -1.0, 1.0)
        theta = np.arccos(cosang)
        w_int = 0.5 * (ll[:-1] + ll[1:])
        norm_dt = np.linalg.norm(dt, axis=1)
        mask = norm_dt > 1e-15
        rows = np.arange(1, m - 1)[mask]
        kvec[rows] = (theta[mask] / w_int[mask] / norm_dt[mask])[:, None] * dt[mask]
        weights[1:-1] = w_int
        weights[0] = 0.5 * ll[0]
        weights[-1] = 0.5 * ll[-1]
    return kvec, weights


def turning_angles(curve):
    """Unsigned turning angle at each vertex (interior vertices if open)."""
    tt = curve.edges / curve.edge_lengths[:, None]
    if curve.closed:
        t_in = np.roll(tt, 1, axis=0)
        cosang = np.einsum("ij,ij->i", t_in, tt)
    else:
        cosang = np.einsum("ij,ij->i", tt[:-1], tt[1:])
    return np.arccos(np.clip(cosang, -1.0, 1.0))


def total_curvature(curve):
    """Total turning of a closed polygon: sum of turning angles.

    For any closed polygon this is >= 2*pi (discrete Fenchel), with
    equality exactly for planar convex polygons.
    """
    if not curve.closed:
        raise GeometryError("total_curvature requires a closed curve")
    return float(turning_angles(curve).sum())


def curve_normal_projectors(curve):
    """(m, n, n) projector onto the normal space, I - t t^T per vertex.

    The vertex tangent is the normalized sum of adjacent unit edge
    directions (angle bisector).
    """
    tt = curve.edges / curve.edge_lengths[:, None]
    m, n = curve.vertices.shape
    if curve.closed:
        tan = tt + np.roll(tt, 1, axis=0)
    else:
        tan = np.zeros((m, n))
        tan[0] = tt[0]
        tan[-1] = tt[-1]
        tan[1:-1] = tt[:-1] + tt[1:]
    nrm = np.linalg.norm(tan, axis=1)
    # antiparallel edges (cusp) leave the tangent ambiguous; fall back to
    # the outgoing edge direction
    bad = nrm < 1e-12
    if np.any(bad):
        idx = np.where(bad)[0]
        tan[idx] = tt[np.minimum(idx, len(tt) - 1)]
        nrm = np.linalg.norm(tan, axis=1)
    tan /= nrm[:, None]
    eye = np.eye(n)
    return eye[None, :, :] - tan[:, :, None] * tan[:, None, :]


# ---------------------------------------------------------------------------
# meshes
# ---------------------------------------------------------------------------

class _MeshConnectivity:
    """Combinatorial data shared between meshes with identical triangles."""

    def __init__(self, triangles, n_vertices):
        t = triangles
        self.n_vertices = n_vertices
        flat = np.concatenate([t[:, [0, 1]], t[:, [1, 2]], t[:, [2, 0]]])
        sflat = np.sort(flat, axis=1)
        self.edges, inv, counts = np.unique(
            sflat, axis=0, return_inverse=True, return_counts=True)
        self.edge_counts = counts
        self.face_edge = inv.reshape(3, -1).T  # (F, 3): edge id opposite corner order
        self.boundary_edges = self.edges[counts == 1]
        self.is_boundary_vertex = np.zeros(n_vertices, dtype=bool)
        if len(self.boundary_edges):
            self.is_boundary_vertex[self.boundary_edges.ravel()] = True
        # directed half-edge counts for orientation checking
        key = flat[:, 0].astype(np.int64) * n_vertices + flat[:, 1]
        _, dcounts = np.unique(key, return_counts=True)
        self.max_directed_count = int(dcounts.max()) if len(dcounts) else 0

    def validate(self):
        if np.any(self.edge_counts > 2):
            raise GeometryError("non-manifold edge (shared by > 2 triangles)")
        if self.max_directed_count > 1:
            raise GeometryError("inconsistent orientation across a shared edge")


class TriMesh:
    """Oriented triangle mesh, possibly with boundary, in R^n (n >= 3).

    Parameters
    ----------
    vertices : (V, n) float array
    triangles : (F, 3) int array
        Counterclockwise corner indices; orientation must be consistent
        across shared edges.
    validate : bool
        Check manifoldness, orientation, and positive triangle areas.
    connectivity : internal
        Reuse the combinatorial cache of a mesh with identical triangles
        (used by flow stepping, where only positions change).
    """

    def __init__(self, vertices, triangles, validate=True, connectivity=None):
        v = _readonly(np.atleast_2d(vertices))
        t = _readonly(np.atleast_2d(triangles), dtype=np.int64)
        if v.ndim != 2 or v.shape[1] < 3:
            raise GeometryError("vertices must be (V, n) with n >= 3")
        if t.ndim != 2 or t.shape[1] != 3:
            raise GeometryError("triangles must be (F, 3)")
        self.vertices = v
        self.triangles = t
        self._conn = connectivity
        if validate:
            self._validate()

    def _validate(self):
        if not np.all(np.isfinite(self.vertices)):
            raise GeometryError("non-finite vertex coordinate")
        if len(self.triangles) == 0:
            raise GeometryError("mesh has no triangles")
        if self.triangles.min() < 0 or self.triangles.max() >= len(self.vertices):
            raise GeometryError("triangle index out of range")
        if np.any(self.face_areas <= 0.0):
            raise GeometryError("degenerate (zero-area) triangle")
        self.connectivity.validate()

    @property
    def ambient_dim(self):
        return self.vertices.shape[1]

    @property
    def connectivity(self):
        if self._conn is None:
            self._conn = _MeshConnectivity(self.triangles, len(self.vertices))
        return self._conn

    @cached_property
    def corners(self):
        """(F, 3, n) corner coordinates."""
        return self.vertices[self.triangles]

    @cached_property
    def face_areas(self):
        c = self.corners
        e1 = c[:, 1] - c[:, 0]
        e2 = c[:, 2] - c[:, 0]
        g11 = np.einsum("ij,ij->i", e1, e1)
        g22 = np.einsum("ij,ij->i", e2, e2)
        g12 = np.einsum("ij,ij->i", e1, e2)
        det = np.maximum(g11 * g22 - g12 * g12, 0.0)
        return 0.5 * np.sqrt(det)

    @cached_property
    def area(self):
        return float(self.face_areas.sum())

    @cached_property
    def edge_lengths(self):
        e = self.connectivity.edges
        return np.linalg.norm(self.vertices[e[:, 1]] - self.vertices[e[:, 0]], axis=1)

    @cached_property
    def corner_angles(self):
        """(F, 3) interior angle at each corner, from edge lengths only."""
        c = self.corners
        # squared side lengths opposite each corner
        d0 = c[:, 1] - c[:, 2]
        d1 = c[:, 2] - c[:, 0]
        d2 = c[:, 0] - c[:, 1]
        l0 = np.einsum("ij,ij->i", d0, d0)
        l1 = np.einsum("ij,ij->i", d1, d1)
        l2 = np.einsum("ij,ij->i", d2, d2)
        ang = np.empty((len(c), 3))
        for k, (la, lb, lc) in enumerate(((l0, l1, l2), (l1, l2, l0), (l2, l0, l1))):
            cosk = (lb + lc - la) / (2.0 * np.sqrt(lb * lc))
            ang[:, k] = np.arccos(np.clip(cosk, -1.0, 1.0))
        return ang

    @cached_property
    def is_closed(self):
        return len(self.connectivity.boundary_edges) == 0

    def with_vertices(self, vertices, validate=False):
        """Same connectivity, new positions (shares the combinatorial cache)."""
        return TriMesh(vertices, self.triangles, validate=validate,
                       connectivity=self._conn)

    def translated(self, offset):
        return self.with_vertices(self.vertices + np.asarray(offset, float))

    def scaled(self, factor):
        return self.with_vertices(self.vertices * float(factor))


def mixed_areas(mesh):
    """Per-vertex mixed Voronoi areas (obtuse-safe Meyer weights).

    The mixed areas partition the total surface area exactly:
    non-obtuse triangles contribute their circumcentric Voronoi pieces,
    obtuse ones half the area at the obtuse corner and a quarter at the
    others.
    """
    t = mesh.triangles
    ang = mesh.corner_angles
    areas = mesh.face_areas
    c = mesh.corners

    cot = np.cos(ang) / np.sin(ang)
    # squared edge lengths opposite each corner
    d0 = c[:, 1] - c[:, 2]
    d1 = c[:, 2] - c[:, 0]
    d2 = c[:, 0] - c[:, 1]
    L2 = np.stack([
        np.einsum("ij,ij->i", d0, d0),
        np.einsum("ij,ij->i", d1, d1),
        np.einsum("ij,ij->i", d2, d2),
    ], axis=1)

    contrib = np.empty((len(t), 3))
    obtuse = ang > 0.5 * np.pi
    any_obtuse = obtuse.any(axis=1)
    # Voronoi piece at corner k uses the two non-opposite edges
    for k in range(3):
        a, b = (k + 1) % 3, (k + 2) % 3
        contrib[:, k] = 0.125 * (L2[:, a] * cot[:, a] + L2[:, b] * cot[:, b])
    contrib[any_obtuse] = 0.25 * areas[any_obtuse, None]
    rows = np.where(any_obtuse)[0]
    if len(rows):
        kk = np.argmax(obtuse[rows], axis=1)
        contrib[rows, kk] = 0.5 * areas[rows]

    out = np.bincount(t.ravel(), weights=contrib.ravel(),
                      minlength=len(mesh.vertices))
    return out


def mean_curvature_vectors(mesh, areas=None):
    """Cotangent mean curvature vector per vertex.

    H_i = (1 / (2 A_i)) * sum_j (cot a_ij + cot b_ij) (x_j - x_i), with
    A_i the mixed Voronoi area.  Intrinsic weights, so any ambient
    dimension works; on a round sphere of radius r the result points
    inward with magnitude 2/r.  Boundary-vertex values are meaningless
    and should be masked by the caller.

    Returns
    -------
    hvec : (V, n) array
    areas : (V,) array
    """
    if areas is None:
        areas = mixed_areas(mesh)
    t = mesh.triangles
    v = mesh.vertices
    ang = mesh.corner_angles
    cot = 0.5 * np.cos(ang) / np.sin(ang)

    acc = np.zeros_like(v)
    n = v.shape[1]
    idx_a = np.concatenate([t[:, 1], t[:, 2], t[:, 0]])
    idx_b = np.concatenate([t[:, 2], t[:, 0], t[:, 1]])
    w = np.concatenate([cot[:, 0], cot[:, 1], cot[:, 2]])
    diff = v[idx_b] - v[idx_a]
    for d in range(n):
        acc[:, d] = (np.bincount(idx_a, weights=w * diff[:, d], minlength=len(v))
                     - np.bincount(idx_b, weights=w * diff[:, d], minlength=len(v)))
    safe = np.maximum(areas, 1e-300)
    return acc / safe[:, None], areas


def angle_defects(mesh):
    """Angle defect per vertex: 2*pi - angle sum interior, pi - sum on
    the boundary.  Summed over a mesh this equals 2*pi*chi exactly."""
    t = mesh.triangles
    ang = mesh.corner_angles
    angsum = np.bincount(t.ravel(), weights=ang.ravel(),
                         minlength=len(mesh.vertices))
    referenced = np.bincount(t.ravel(), minlength=len(mesh.vertices)) > 0
    base = np.where(mesh.connectivity.is_boundary_vertex, np.pi, 2.0 * np.pi)
    out = np.where(referenced, base - angsum, 0.0)
    return out


def vertex_normal_projectors(mesh):
    """Projector onto the normal space per vertex, (V, n, n).

    The tangent plane is the best two-dimensional fit to the one-ring:
    angle-weighted average of incident triangle-plane projectors, then
    the nearest rank-2 projector by eigendecomposition.  The result is
    symmetric, idempotent, with trace n - 2.
    """
    v = mesh.vertices
    t = mesh.triangles
    V, n = v.shape
    c = mesh.corners
    e1 = c[:, 1] - c[:, 0]
    e2 = c[:, 2] - c[:, 0]
    # orthonormal in-plane pair per face
    u1 = e1 / np.linalg.norm(e1, axis=1)[:, None]
    e2p = e2 - np.einsum("ij,ij->i", e2, u1)[:, None] * u1
    u2 = e2p / np.linalg.norm(e2p, axis=1)[:, None]
    face_proj = u1[:, :, None] * u1[:, None, :] + u2[:, :, None] * u2[:, None, :]

    ang = mesh.corner_angles
    acc = np.zeros((V, n, n))
    wsum = np.zeros(V)
    flat_idx = t.ravel()
    flat_w = ang.ravel()
    rep = np.repeat(face_proj, 3, axis=0)
    np.add.at(acc, flat_idx, flat_w[:, None, None] * rep.reshape(-1, n, n))
    wsum = np.bincount(flat_idx, weights=flat_w, minlength=V)
    safe = np.maximum(wsum, 1e-300)
    acc /= safe[:, None, None]

    evals, evecs = np.linalg.eigh(acc)
    # top-2 eigenvectors span the fitted tangent plane
    tan = evecs[:, :, -2:]
    proj_tan = np.einsum("vik,vjk->vij", tan, tan)
    return np.eye(n)[None] - proj_tan


@dataclass
class CurvatureField:
    """Per-vertex extrinsic curvature data of a curve or mesh.

    Attributes
    ----------
    mean_curvature : (V, n)
        Mean curvature vector.
    sq_norm_A : (V,)
        Squared norm of the second fundamental form.  For meshes this is
        the Gauss-equation value max(0, |H|^2 - 2K); the clamp magnitude
        is recorded in ``clamp``.
    gauss : (V,) or None
        Angle-defect Gauss curvature (meshes only).
    normal_projector : (V, n, n)
        Orthogonal projector onto the normal space.
    vertex_area : (V,)
        Mixed Voronoi areas (meshes) or dual edge lengths (curves).
    interior : (V,) bool
        False at boundary vertices, where H and K are not trustworthy.
    kdim : int
        Intrinsic dimension (1 for curves, 2 for meshes).
    clamp : (V,)
        Amount added by the |A|^2 >= 0 clamp, zero where inactive.
    """

    mean_curvature: np.ndarray
    sq_norm_A: np.ndarray
    gauss: np.ndarray | None
    normal_projector: np.ndarray
    vertex_area: np.ndarray
    interior: np.ndarray
    kdim: int
    clamp: np.ndarray = field(default=None)

    def validate(self, tol=1e-8):
        """Check the structural invariants of the field within tol.

        The projector must be symmetric, idempotent, with trace n - k;
        |A|^2 must dominate |H|^2 / k (Cauchy-Schwarz on traces) up to
        the stated tolerance times the field scale.
        """
        P = self.normal_projector
        n = P.shape[1]
        if not np.allclose(P, np.swapaxes(P, 1, 2), atol=tol):
            raise GeometryError("normal projector not symmetric")
        if not np.allclose(np.einsum("vij,vjk->vik", P, P), P, atol=10 * tol):
            raise GeometryError("normal projector not idempotent")
        tr = np.einsum("vii->v", P)
        if not np.allclose(tr, n - self.kdim, atol=10 * tol):
            raise GeometryError("normal projector trace != n - k")
        sqH = np.einsum("vi,vi->v", self.mean_curvature, self.mean_curvature)
        scale = max(float(np.max(sqH[self.interior], initial=0.0)), 1.0)
        gap = self.sq_norm_A - sqH / self.kdim
        if np.min(gap[self.interior], initial=0.0) < -tol * scale:
            raise GeometryError("|A|^2 < |H|^2 / k beyond tolerance")
        return True

    def norm_A(self):
        return np.sqrt(self.sq_norm_A)

    def max_norm_A(self):
        vals = self.sq_norm_A[self.interior]
        return float(np.sqrt(vals.max())) if len(vals) else 0.0


def mesh_curvature(mesh, want_projectors=True):
    """Full curvature field of a triangle mesh.

    H comes from the cotangent Laplacian of position over mixed areas,
    K from angle defects over mixed areas, and |A|^2 from the Gauss
    equation |H|^2 - 2K clamped at zero (clamp recorded).  Boundary
    vertices are flagged non-interior.

    Raises GeometryError when the mesh has isolated (unreferenced)
    vertices, for which no curvature is defined.
    """
    referenced = np.bincount(mesh.triangles.ravel(),
                             minlength=len(mesh.vertices)) > 0
    if not referenced.all():
        raise GeometryError("mesh has isolated vertices")
    areas = mixed_areas(mesh)
    hvec, _ = mean_curvature_vectors(mesh, areas)
    defect = angle_defects(mesh)
    gauss = defect / np.maximum(areas, 1e-300)
    sqH = np.einsum("vi,vi->v", hvec, hvec)
    raw = sqH - 2.0 * gauss
    sqA = np.maximum(raw, 0.0)
    clamp = sqA - raw
    interior = ~mesh.connectivity.is_boundary_vertex
    if want_projectors:
        proj = vertex_normal_projectors(mesh)
    else:
        proj = None
    return CurvatureField(
        mean_curvature=hvec,
        sq_norm_A=sqA,
        gauss=gauss,
        normal_projector=proj,
        vertex_area=areas,
        interior=interior,
        kdim=2,
        clamp=clamp,
    )


def curve_curvature_field(curve):
    """Curvature field of a curve: |A|^2 = |k|^2, no Gauss curvature."""
    kvec, weights = curve_curvature(curve)
    sqk = np.einsum("vi,vi->v", kvec, kvec)
    interior = np.ones(len(curve.vertices), dtype=bool)
    if not curve.closed:
        interior[0] = interior[-1] = False
    return CurvatureField(
        mean_curvature=kvec,
        sq_norm_A=sqk,
        gauss=None,
        normal_projector=curve_normal_projectors(curve),
        vertex_area=weights,
        interior=interior,
        kdim=1,
        clamp=np.zeros(len(curve.vertices)),
    )


def curvature_field(geometry):
    """Dispatch to the mesh or curve curvature field."""
    if isinstance(geometry, TriMesh):
        return mesh_curvature(geometry)
    if isinstance(geometry, PolyCurve):
        return curve_curvature_field(geometry)
    raise GeometryError(f"no curvature field for {type(geometry).__name__}")


# ---------------------------------------------------------------------------
# topology
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class EulerData:
    """Euler characteristic and the derived genus bookkeeping."""
    chi: int
    components: int
    boundary_loops: int
    genus: int


class _UnionFind:
    def __init__(self, n):
        self.parent = np.arange(n)

    def find(self, i):
        p = self.parent
        root = i
        while p[root] != root:
            root = p[root]
        while p[i] != root:
            p[i], i = root, p[i]
        return root

    def union(self, i, j):
        ri, rj = self.find(i), self.find(j)
        if ri != rj:
            self.parent[ri] = rj


def euler_genus(mesh):
    """Euler characteristic, components, boundary loops, and genus.

    chi = V - E + F over referenced vertices; the genus follows from
    chi = 2c - 2g - h where h counts boundary loops (components of the
    boundary-edge graph) and c connected components of the surface.
    """
    conn = mesh.connectivity
    conn.validate()
    t = mesh.triangles
    referenced = np.unique(t)
    V = len(referenced)
    E = len(conn.edges)
    F = len(t)
    chi = V - E + F

    uf = _UnionFind(len(mesh.vertices))
    for a, b in conn.edges:
        uf.union(int(a), int(b))
    roots = {uf.find(int(i)) for i in referenced}
    c = len(roots)

    be = conn.boundary_edges
    if len(be):
        ufb = _UnionFind(len(mesh.vertices))
        for a, b in be:
            ufb.union(int(a), int(b))
        h = len({ufb.find(int(a)) for a in np.unique(be.ravel())})
    else:
        h = 0

    g2 = 2 * c - h - chi
    if g2 % 2 != 0:
        raise GeometryError("non-integral genus; mesh is not a valid surface")
    return EulerData(chi=chi, components=c, boundary_loops=h, genus=g2 // 2)


def mesh_components(mesh):
    """Face labels of edge-connected components, (F,) int and count."""
    conn = mesh.connectivity
    F = len(mesh.triangles)
    uf = _UnionFind(F)
    # faces sharing an edge are connected
    order = np.argsort(conn.face_edge.ravel(), kind="stable")
    flat_faces = np.repeat(np.arange(F), 3)[order]
    flat_edges = conn.face_edge.ravel()[order]
    for i in range(1, len(flat_edges)):
        if flat_edges[i] == flat_edges[i - 1]:
            uf.union(int(flat_faces[i]), int(flat_faces[i - 1]))
    labels = np.fromiter((uf.find(i) for i in range(F)), dtype=np.int64, count=F)
    _, labels = np.unique(labels, return_inverse=True)
    return labels, int(labels.max()) + 1 if F else 0
