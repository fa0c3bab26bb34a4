"""Restriction of meshes and curves to metric balls.

Triangles are clipped exactly against the sphere |x - c| = r: segment vs
sphere intersections on each edge, chordal replacement of the arcs, fan
triangulation of the clipped convex polygons.  Crossing vertices are
welded across faces so the clipped complex is a genuine edge-manifold
surface whose topology (components, boundary loops, genus) can be read
off combinatorially.
"""

from dataclasses import dataclass

import numpy as np

from .geometry import (GeometryError, PolyCurve, TriMesh, angle_defects,
                       mesh_components)

__all__ = [
    "BallRestriction",
    "ball_restrict",
    "ball_area",
    "ball_clip_length",
    "BoundaryTerm",
    "boundary_curvature_term",
    "geodesic_boundary_turning",
]

_CAP_SEGMENTS = 16


def _edge_crossings(p, q, center, r):
    """Roots t in (0,1) of |p + t (q - p) - center| = r, ascending."""
    d = q - p
    f = p - center
    A = d @ d
    B = 2.0 * (f @ d)
    C = f @ f - r * r
    disc = B * B - 4.0 * A * C
    if disc <= 1e-30 or A == 0.0:
        return []
    sq = np.sqrt(disc)
    ts = sorted(((-B - sq) / (2 * A), (-B + sq) / (2 * A)))
    eps = 1e-12
    return [t for t in ts if eps < t < 1.0 - eps]


def _point_in_triangle(q, a, b, c):
    """Barycentric strict-interior test for the in-plane point q."""
    u = b - a
    v = c - a
    w = q - a
    uu, vv, uv = u @ u, v @ v, u @ v
    wu, wv = w @ u, w @ v
    den = uu * vv - uv * uv
    if den <= 0:
        return False
    s = (vv * wu - uv * wv) / den
    t = (uu * wv - uv * wu) / den
    return s > 1e-12 and t > 1e-12 and s + t < 1.0 - 1e-12


def _polygon_fan_area(poly):
    """Area of the convex polygon given as (m, n) coordinates."""
    if len(poly) < 3:
        return 0.0
    a = poly[0]
    e1 = poly[1:-1] - a
    e2 = poly[2:] - a
    g11 = np.einsum("ij,ij->i", e1, e1)
    g22 = np.einsum("ij,ij->i", e2, e2)
    g12 = np.einsum("ij,ij->i", e1, e2)
    return 0.5 * float(np.sqrt(np.maximum(g11 * g22 - g12 * g12, 0.0)).sum())


@dataclass
class BallRestriction:
    """Restriction M ∩ B_r(center) of a mesh to a ball.

    ``clipped`` is the welded clipped complex (None when empty);
    ``face_parent`` maps clipped faces to parent faces (-1 for the
    synthetic interior-cap disks), ``face_component`` labels the
    edge-connected components.  ``vertex_parent``/``vertex_edge``/
    ``vertex_t`` record where each clipped vertex came from so parent
    vertex fields can be interpolated onto the restriction.
    """

    parent: TriMesh
    center: np.ndarray
    radius: float
    area: float
    clipped: TriMesh | None
    face_parent: np.ndarray
    face_component: np.ndarray
    n_components: int
    vertex_parent: np.ndarray   # parent vertex index or -1
    vertex_edge: np.ndarray     # (V', 2) parent edge endpoints or -1
    vertex_t: np.ndarray        # interpolation parameter along vertex_edge

    @property
    def is_empty(self):
        return self.clipped is None

    def interpolate_vertex_field(self, values):
        """Pull a per-vertex parent field onto the clipped vertices."""
        if self.is_empty:
            return np.zeros(0)
        values = np.asarray(values, float)
        out = np.empty(len(self.clipped.vertices))
        orig = self.vertex_parent >= 0
        out[orig] = values[self.vertex_parent[orig]]
        cut = ~orig
        has_edge = self.vertex_edge[:, 0] >= 0
        ce = cut & has_edge
        t = self.vertex_t[ce]
        out[ce] = ((1.0 - t) * values[self.vertex_edge[ce, 0]]
                   + t * values[self.vertex_edge[ce, 1]])
        # synthetic cap vertices: nearest parent face has no single vertex;
        # leave them at the parent-field mean as a neutral value
        synth = cut & ~has_edge
        if synth.any():
            out[synth] = values.mean()
        return out

    def face_areas(self):
        return self.clipped.face_areas if not self.is_empty else np.zeros(0)

    def component_min_distance(self):
        """Minimum distance from the ball center to each component."""
        if self.is_empty:
            return np.zeros(0)
        d = _point_triangle_distances(self.clipped, self.center)
        out = np.full(self.n_components, np.inf)
        np.minimum.at(out, self.face_component, d)
        return out

    def components_meeting(self, inner_radius):
        """Number of components meeting the open ball of inner_radius."""
        dmin = self.component_min_distance()
        return int(np.sum(dmin < inner_radius * (1.0 - 1e-12)))

    def boundary_loops(self):
        if self.is_empty:
            return 0
        from .geometry import euler_genus
        return euler_genus(self.clipped).boundary_loops


def _segment_distances(a, b, p):
    d = b - a
    L2 = np.maximum(np.einsum("ij,ij->i", d, d), 1e-300)
    t = np.clip(np.einsum("ij,ij->i", p - a, d) / L2, 0.0, 1.0)
    return np.linalg.norm(a + t[:, None] * d - p, axis=1)


def _point_triangle_distances(mesh, point):
    """Distance from a point to every triangle (any ambient dimension).

    Minimum of the three edge-segment distances and, where the planar
    foot point lies inside the triangle, the plane distance.
    """
    c = mesh.corners
    a, b, d = c[:, 0], c[:, 1], c[:, 2]
    p = np.asarray(point, float)[None, :]
    dmin = np.minimum(_segment_distances(a, b, p), _segment_distances(b, d, p))
    dmin = np.minimum(dmin, _segment_distances(d, a, p))

    u = b - a
    v = d - a
    w = p - a
    uu = np.einsum("ij,ij->i", u, u)
    vv = np.einsum("ij,ij->i", v, v)
    uv = np.einsum("ij,ij->i", u, v)
    wu = np.einsum("ij,ij->i", w, u)
    wv = np.einsum("ij,ij->i", w, v)
    den = np.maximum(uu * vv - uv * uv, 1e-300)
    s = (vv * wu - uv * wv) / den
    t = (uu * wv - uv * wu) / den
    inside = (s >= 0) & (t >= 0) & (s + t <= 1)
    foot = a + s[:, None] * u + t[:, None] * v
    dplane = np.linalg.norm(foot - p, axis=1)
    return np.where(inside, np.minimum(dmin, dplane), dmin)


def ball_restrict(mesh, center, r):
    """Clip a mesh against the ball B_r(center).

    Returns a :class:`BallRestriction`.  An empty intersection is valid
    and yields area 0.  Triangles that the sphere pierces without
    touching any edge contribute a small polygonized disk ("interior
    cap") so the clipped area stays continuous in r.
    """
    if r <= 0:
        raise GeometryError("ball radius must be positive")
    center = np.asarray(center, float)
    v = mesh.vertices
    t = mesh.triangles
    conn = mesh.connectivity
    dist = np.linalg.norm(v - center, axis=1)
    inside = dist <= r

    tri_inside = inside[t]
    n_in = tri_inside.sum(axis=1)
    full = n_in == 3
    # candidate partial faces: any face whose bounding sphere meets the
    # boundary sphere
    c = mesh.corners
    centroid = c.mean(axis=1)
    rad = np.linalg.norm(c - centroid[:, None, :], axis=2).max(axis=1)
    dcen = np.linalg.norm(centroid - center, axis=1)
    candidate = (~full) & (dcen - rad <= r) & (n_in > 0)
    touch = (~full) & (n_in == 0) & (dcen - rad <= r) & (dcen + rad >= 0)

    # crossings per unique edge
    edge_cross = {}
    edge_dist_in = inside[conn.edges]
    relevant = np.zeros(len(conn.edges), dtype=bool)
    face_ids = np.where(candidate | touch)[0]
    if len(face_ids):
        relevant[conn.face_edge[face_ids].ravel()] = True
    new_verts = []
    vert_parent = []
    vert_edge = []
    vert_t = []

    def add_vertex(pos, parent=-1, edge=(-1, -1), tpar=0.0):
        new_verts.append(pos)
        vert_parent.append(parent)
        vert_edge.append(edge)
        vert_t.append(tpar)
        return len(new_verts) - 1

    # original inside vertices first
    orig_map = np.full(len(v), -1, dtype=np.int64)
    for i in np.where(inside)[0]:
        orig_map[i] = add_vertex(v[i], parent=int(i))

    for eid in np.where(relevant)[0]:
        a, b = conn.edges[eid]
        ia, ib = inside[a], inside[b]
        ts = _edge_crossings(v[a], v[b], center, r)
        if ia != ib:
            if not ts:
                # grazing roundoff: force the crossing at the segment point
                # closest to the sphere
                d = v[b] - v[a]
                tstar = -((v[a] - center) @ d) / max(d @ d, 1e-300)
                ts = [float(np.clip(tstar, 1e-6, 1.0 - 1e-6))]
            elif len(ts) == 2:
                # keep only the transversal root separating in from out
                ts = [ts[0] if ia else ts[1]]
        elif ia and ib:
            ts = []
        ids = []
        for tpar in ts:
            pos = v[a] + tpar * (v[b] - v[a])
            ids.append(add_vertex(pos, parent=-1, edge=(int(a), int(b)),
                                  tpar=float(tpar)))
        edge_cross[eid] = list(zip(ts, ids))

    faces = []
    face_parent = []

    for f in np.where(full)[0]:
        i0, i1, i2 = t[f]
        faces.append([orig_map[i0], orig_map[i1], orig_map[i2]])
        face_parent.append(f)

    for f in face_ids:
        poly = []
        for k in range(3):
            a = t[f, k]
            b = t[f, (k + 1) % 3]
            # face_edge stores edge ids in corner order [01, 12, 20]
            eid = conn.face_edge[f, k]
            if inside[a]:
                poly.append(orig_map[a])
            crossings = edge_cross.get(int(eid), [])
            if crossings:
                lo, hi = sorted((int(a), int(b)))
                forward = (lo == a)
                cr = crossings if forward else [(1.0 - tp, vid) for tp, vid in reversed(crossings)]
                for tp, vid in cr:
                    poly.append(vid)
        # dedupe consecutive repeats
        cleaned = []
        for p in poly:
            if not cleaned or cleaned[-1] != p:
                cleaned.append(p)
        if len(cleaned) >= 3 and cleaned[0] == cleaned[-1]:
            cleaned = cleaned[:-1]
        if len(cleaned) < 3:
            continue
        coords = np.asarray([new_verts[p] for p in cleaned])
        if _polygon_fan_area(coords) <= 1e-14 * max(r, 1.0) ** 2:
            continue
        for k in range(1, len(cleaned) - 1):
            faces.append([cleaned[0], cleaned[k], cleaned[k + 1]])
            face_parent.append(f)

    # interior caps: sphere pierces the face without touching its edges
    for f in np.where(touch)[0]:
        if any(edge_cross.get(int(conn.face_edge[f, k])) for k in range(3)):
            continue
        a, b, d = v[t[f, 0]], v[t[f, 1]], v[t[f, 2]]
        u1 = b - a
        u2 = d - a
        nrm2 = np.einsum("i,i->", u1, u1)
        # orthonormal in-plane frame
        e1 = u1 / np.sqrt(nrm2)
        u2p = u2 - (u2 @ e1) * e1
        e2 = u2p / np.linalg.norm(u2p)
        w = center - a
        q = a + (w @ e1) * e1 + (w @ e2) * e2
        dplane = np.linalg.norm(q - center)
        if dplane >= r:
            continue
        if not _point_in_triangle(q, a, b, d):
            continue
        rho = np.sqrt(r * r - dplane * dplane)
        qid = add_vertex(q)
        ring = []
        for j in range(_CAP_SEGMENTS):
            th = 2.0 * np.pi * j / _CAP_SEGMENTS
            ring.append(add_vertex(q + rho * (np.cos(th) * e1 + np.sin(th) * e2)))
        for j in range(_CAP_SEGMENTS):
            faces.append([qid, ring[j], ring[(j + 1) % _CAP_SEGMENTS]])
            face_parent.append(-1)

    if not faces:
        return BallRestriction(
            parent=mesh, center=center, radius=float(r), area=0.0,
            clipped=None, face_parent=np.zeros(0, np.int64),
            face_component=np.zeros(0, np.int64), n_components=0,
            vertex_parent=np.zeros(0, np.int64),
            vertex_edge=np.zeros((0, 2), np.int64), vertex_t=np.zeros(0))

    verts = np.asarray(new_verts)
    used = np.unique(np.asarray(faces).ravel())
    remap = np.full(len(verts), -1, dtype=np.int64)
    remap[used] = np.arange(len(used))
    faces = remap[np.asarray(faces, dtype=np.int64)]
    clipped = TriMesh(verts[used], faces, validate=False)
    labels, n_comp = mesh_components(clipped)
    return BallRestriction(
        parent=mesh, center=center, radius=float(r),
        area=clipped.area, clipped=clipped,
        face_parent=np.asarray(face_parent, dtype=np.int64),
        face_component=labels, n_components=n_comp,
        vertex_parent=np.asarray(vert_parent, dtype=np.int64)[used],
        vertex_edge=np.asarray(vert_edge, dtype=np.int64)[used],
        vertex_t=np.asarray(vert_t)[used])


def ball_area(mesh, center, r):
    """Area of M ∩ B_r(center) (same clipping, no complex assembled)."""
    return ball_restrict(mesh, center, r).area


def ball_clip_length(curve, center, r):
    """Length of a curve inside the ball (exact per-edge intervals)."""
    center = np.asarray(center, float)
    v = curve.vertices
    e = curve.edges
    starts = v if curve.closed else v[:-1]
    f = starts - center
    A = np.einsum("ij,ij->i", e, e)
    B = 2.0 * np.einsum("ij,ij->i", f, e)
    C = np.einsum("ij,ij->i", f, f) - r * r
    disc = B * B - 4 * A * C
    total = 0.0
    L = np.sqrt(A)
    for i in range(len(e)):
        if disc[i] <= 0:
            if C[i] <= 0:
                total += L[i]
            continue
        sq = np.sqrt(disc[i])
        t0 = (-B[i] - sq) / (2 * A[i])
        t1 = (-B[i] + sq) / (2 * A[i])
        lo, hi = max(t0, 0.0), min(t1, 1.0)
        if hi > lo:
            total += (hi - lo) * L[i]
    return float(total)


# ---------------------------------------------------------------------------
# boundary terms
# ---------------------------------------------------------------------------

@dataclass
class BoundaryTerm:
    """Discrete geodesic-curvature integral of a boundary curve.

    ``geodesic`` is the angle-method integral of the curvature of the
    boundary paired with the inward conormal (flat unit disk gives
    +2*pi).  For ball restrictions ``bound`` carries the integrated
    comparison value (|A_M| + 1/r) / sin(alpha); boundary segments where
    sin(alpha) vanishes are excluded and their length reported.
    """

    geodesic: float
    bound: float = float("nan")
    excluded_length: float = 0.0


def geodesic_boundary_turning(mesh):
    """Sum of (pi - interior angle sum) over boundary vertices."""
    bmask = mesh.connectivity.is_boundary_vertex
    if not bmask.any():
        return 0.0
    return float(angle_defects(mesh)[bmask].sum())


def boundary_curvature_term(restriction_or_mesh, parent_field=None):
    """Boundary geodesic term, plus the sphere-frame comparison bound
    when the input is a :class:`BallRestriction`.

    The bound integrates (|A_M| + 1/r)/sin(alpha) over boundary segments
    lying on the clipping sphere, with alpha the angle between the
    surface and the sphere; it dominates the geodesic term pointwise for
    transversal intersections.
    """
    if isinstance(restriction_or_mesh, TriMesh):
        return BoundaryTerm(geodesic=geodesic_boundary_turning(restriction_or_mesh))

    b = restriction_or_mesh
    if b.is_empty:
        return BoundaryTerm(geodesic=0.0, bound=0.0)
    mesh = b.clipped
    geod = geodesic_boundary_turning(mesh)

    conn = mesh.connectivity
    bedges = conn.boundary_edges
    if len(bedges) == 0:
        return BoundaryTerm(geodesic=0.0, bound=0.0)

    if parent_field is None:
        from .geometry import mesh_curvature
        parent_field = mesh_curvature(b.parent, want_projectors=False)
    normA_parent = np.sqrt(parent_field.sq_norm_A)
    normA = b.interpolate_vertex_field(normA_parent)

    # find the face adjacent to each boundary edge to get the conormal
    edge_face = {}
    t = mesh.triangles
    for fi in range(len(t)):
        for k in range(3):
            key = tuple(sorted((int(t[fi, k]), int(t[fi, (k + 1) % 3]))))
            edge_face.setdefault(key, fi)

    v = mesh.vertices
    on_sphere = np.abs(np.linalg.norm(v - b.center, axis=1) - b.radius) \
        <= 1e-9 * max(b.radius, 1.0)

    bound = 0.0
    excluded = 0.0
    for a, c_ in bedges:
        if not (on_sphere[a] and on_sphere[c_]):
            continue  # original mesh boundary, not the spherical cut
        fi = edge_face[tuple(sorted((int(a), int(c_))))]
        tri = t[fi]
        other = [x for x in tri if x not in (a, c_)][0]
        seg = v[c_] - v[a]
        slen = np.linalg.norm(seg)
        if slen <= 0:
            continue
        sdir = seg / slen
        w = v[other] - v[a]
        conormal = w - (w @ sdir) * sdir
        cn = np.linalg.norm(conormal)
        if cn <= 1e-14:
            continue
        conormal /= cn
        mid = 0.5 * (v[a] + v[c_])
        e1 = mid - b.center
        e1 /= np.linalg.norm(e1)
        sin_alpha = abs(conormal @ e1)
        local_A = 0.5 * (normA[a] + normA[c_])
        if sin_alpha < 1e-12:
            excluded += slen
            continue
        bound += slen * (local_A + 1.0 / b.radius) / sin_alpha
    return BoundaryTerm(geodesic=geod, bound=float(bound),
                        excluded_length=float(excluded))
