"""Time integration of mean curvature flow.

Explicit (and optionally linearized-implicit) stepping for closed
curves, closed or pinned-boundary meshes, and graphical patches moving
by the quasilinear graph equation du/dt = g^{ij}(Du) D^2_{ij} u.
Trajectories are immutable sequences of time-stamped snapshots with the
step-size and remeshing history attached.
"""

from dataclasses import dataclass, field as dc_field

import numpy as np

from .geometry import (GeometryError, PolyCurve, TriMesh, curve_curvature,
                       mean_curvature_vectors, mixed_areas, angle_defects)

__all__ = [
    "FlowError",
    "FlowOptions",
    "GraphPatch",
    "Trajectory",
    "SingularityEstimate",
    "step_curve",
    "step_mesh",
    "step_graph",
    "graph_second_form",
    "run_flow",
    "detect_singularity",
    "resample_curve",
    "remesh_edges",
]


class FlowError(RuntimeError):
    """Flow step failed or was requested outside its stability contract."""


@dataclass
class FlowOptions:
    """Knobs for :func:`run_flow`.

    dt_safety scales the explicit stability bound; snapshots are taken
    either every ``snapshot_dt`` time units or every ``snapshot_every``
    steps (the initial and final states are always recorded).  Curves
    are redistributed to uniform arclength each step unless ``resample``
    is off.  ``remesh`` enables edge split/collapse for meshes with
    ``remesh_target`` the desired edge length (initial mean by default).
    The flow halts with a flag when max|A| * h_min exceeds
    ``halt_resolution``.
    """

    dt_safety: float = 0.9
    snapshot_dt: float | None = None
    snapshot_every: int | None = None
    max_dt: float | None = None
    resample: bool = True
    remesh: bool = False
    remesh_target: float | None = None
    implicit: bool = False
    pin_boundary: bool = False
    halt_resolution: float = 0.5
    grad_cap: float = 10.0
    max_steps: int = 2_000_000


# ---------------------------------------------------------------------------
# graph patches
# ---------------------------------------------------------------------------

class GraphPatch:
    """Grid-sampled vector graph over a k-plane in R^n.

    The domain is a rectangular grid with spacing ``h`` centered on
    ``origin``: node (i_1, ..., i_k) sits at domain coordinates
    xi_a = (i_a - (N_a - 1)/2) h along ``plane_basis`` and is displaced
    by u^I along ``codim_basis``.  Boundary values are held fixed by the
    flow.
    """

    def __init__(self, plane_basis, codim_basis, spacing, values,
                 origin=None, validate=True):
        self.plane_basis = np.ascontiguousarray(plane_basis, float)
        self.codim_basis = np.ascontiguousarray(codim_basis, float)
        self.spacing = float(spacing)
        self.values = np.ascontiguousarray(values, float)
        k = self.plane_basis.shape[0]
        n = self.plane_basis.shape[1]
        if origin is None:
            origin = np.zeros(n)
        self.origin = np.asarray(origin, float)
        self.values.setflags(write=False)
        self.plane_basis.setflags(write=False)
        self.codim_basis.setflags(write=False)
        if validate:
            self._validate()

    def _validate(self):
        k, n = self.plane_basis.shape
        m = self.codim_basis.shape[0]
        if self.codim_basis.shape[1] != n or k + m != n:
            raise GeometryError("bases must span complementary subspaces of R^n")
        B = np.vstack([self.plane_basis, self.codim_basis])
        if not np.allclose(B @ B.T, np.eye(n), atol=1e-12):
            raise GeometryError("bases are not orthonormal to 1e-12")
        if self.values.ndim != k + 1 or self.values.shape[-1] != m:
            raise GeometryError("values must have shape grid^k x (n-k)")
        if self.spacing <= 0:
            raise GeometryError("grid spacing must be positive")
        if not np.all(np.isfinite(self.values)):
            raise GeometryError("non-finite graph value")

    @property
    def kdim(self):
        return self.plane_basis.shape[0]

    @property
    def ambient_dim(self):
        return self.plane_basis.shape[1]

    @property
    def grid_shape(self):
        return self.values.shape[:-1]

    def domain_coords(self):
        """Domain coordinates xi, shape grid^k x k."""
        axes = [ (np.arange(N) - 0.5 * (N - 1)) * self.spacing
                 for N in self.grid_shape ]
        mesh = np.meshgrid(*axes, indexing="ij")
        return np.stack(mesh, axis=-1)

    def positions(self):
        """Ambient node positions, shape grid^k x n."""
        xi = self.domain_coords()
        pos = np.tensordot(xi, self.plane_basis, axes=([-1], [0]))
        pos = pos + np.tensordot(self.values, self.codim_basis, axes=([-1], [0]))
        return pos + self.origin

    def interior_mask(self):
        m = np.ones(self.grid_shape, dtype=bool)
        for a in range(self.kdim):
            sl = [slice(None)] * self.kdim
            sl[a] = 0
            m[tuple(sl)] = False
            sl[a] = -1
            m[tuple(sl)] = False
        return m

    def with_values(self, values):
        return GraphPatch(self.plane_basis, self.codim_basis, self.spacing,
                          values, origin=self.origin, validate=False)

    def area_elements(self):
        """sqrt(det g) h^k per node (boundary uses one-sided gradients)."""
        Du = _graph_gradient(self.values, self.spacing)
        g = _graph_metric(Du)
        return np.sqrt(np.linalg.det(g)) * self.spacing ** self.kdim


def _graph_gradient(u, h):
    """Du[..., a, I] by central differences (one-sided at edges)."""
    k = u.ndim - 1
    return np.stack([np.gradient(u, h, axis=a) for a in range(k)], axis=-2)


def _graph_metric(Du):
    k = Du.shape[-2]
    return np.eye(k) + np.einsum("...aI,...bI->...ab", Du, Du)


def _graph_hessian(u, h):
    """Compact-stencil D2u[..., a, b, I]; boundary ring is zero."""
    k = u.ndim - 1
    shape = u.shape[:-1]
    m = u.shape[-1]
    D2 = np.zeros(shape + (k, k, m))

    def shift(arr, axis, s):
        return np.roll(arr, -s, axis=axis)

    for a in range(k):
        D2[(..., a, a, slice(None))] = (
            shift(u, a, 1) - 2.0 * u + shift(u, a, -1)) / h ** 2
        for b in range(a + 1, k):
            mixed = (shift(shift(u, a, 1), b, 1) - shift(shift(u, a, 1), b, -1)
                     - shift(shift(u, a, -1), b, 1)
                     + shift(shift(u, a, -1), b, -1)) / (4.0 * h ** 2)
            D2[(..., a, b, slice(None))] = mixed
            D2[(..., b, a, slice(None))] = mixed
    # zero out the wrapped boundary ring
    for a in range(k):
        sl = [slice(None)] * len(shape)
        for edge in (0, -1):
            sl[a] = edge
            D2[tuple(sl)] = 0.0
    return D2


def graph_stability_bound(patch):
    """Explicit step bound h^2 / (2 k (1 + max |Du|^2))."""
    Du = _graph_gradient(patch.values, patch.spacing)
    sq = np.einsum("...aI,...aI->...", Du, Du)
    inz = patch.interior_mask()
    mx = float(sq[inz].max()) if inz.any() else float(sq.max())
    return patch.spacing ** 2 / (2.0 * patch.kdim * (1.0 + mx))


def step_graph(patch, dt, grad_cap=10.0):
    """One explicit step of the graph flow; boundary values fixed.

    Raises FlowError when dt exceeds the parabolic bound or the gradient
    exceeds ``grad_cap`` (the graph assumption failing).
    """
    bound = graph_stability_bound(patch)
    if dt > bound * (1.0 + 1e-12):
        raise FlowError(f"dt={dt:g} exceeds stability bound; "
                        f"admissible dt <= {bound:g}")
    u = patch.values
    h = patch.spacing
    Du = _graph_gradient(u, h)
    sq = np.einsum("...aI,...aI->...", Du, Du)
    if float(np.sqrt(sq.max())) > grad_cap:
        raise FlowError(f"|Du| exceeded cap {grad_cap}; "
                        "geometry is no longer graphical")
    g = _graph_metric(Du)
    ginv = np.linalg.inv(g)
    D2 = _graph_hessian(u, h)
    rhs = np.einsum("...ab,...abI->...I", ginv, D2)
    unew = u + dt * rhs
    mask = patch.interior_mask()
    out = np.array(u)
    out[mask] = unew[mask]
    return patch.with_values(out)


def second_form_from_jet(Du, D2u, plane_basis, codim_basis):
    """Second fundamental form of a graph from its 2-jet.

    Du : (..., k, n-k), D2u : (..., k, k, n-k).  Returns the ambient
    form A (..., k, k, n), its g-contracted squared norm (...), and the
    mean curvature vector (..., n).
    """
    g = _graph_metric(Du)
    ginv = np.linalg.inv(g)
    # ambient tangents T_a = t_a + Du_a^I w_I
    T = (plane_basis + np.einsum("...aI,Ij->...aj", Du, codim_basis))
    n = plane_basis.shape[1]
    # normal projector Pi = I - T^a ginv_ab T^b
    Pi = np.eye(n) - np.einsum("...ai,...ab,...bj->...ij", T, ginv, T)
    # A_ab = Pi (D2u_ab^I w_I)
    amb = np.einsum("...abI,Ij->...abj", D2u, codim_basis)
    A = np.einsum("...ij,...abj->...abi", Pi, amb)
    sqA = np.einsum("...ac,...bd,...abi,...cdi->...", ginv, ginv, A, A)
    H = np.einsum("...ab,...abi->...i", ginv, A)
    return A, sqA, H


def graph_second_form(patch):
    """Per-node second fundamental form data of a graph patch.

    Returns ``(A, sqA, H, mask)`` where mask flags interior nodes with a
    full finite-difference stencil; values outside it are zero.
    """
    Du = _graph_gradient(patch.values, patch.spacing)
    D2 = _graph_hessian(patch.values, patch.spacing)
    A, sqA, H = second_form_from_jet(Du, D2, patch.plane_basis,
                                     patch.codim_basis)
    mask = patch.interior_mask()
    return A, sqA, H, mask


# ---------------------------------------------------------------------------
# curve and mesh steps
# ---------------------------------------------------------------------------

def curve_stability_bound(curve):
    return 0.25 * float(curve.edge_lengths.min()) ** 2


def resample_curve(curve, m=None):
    """Uniform-arclength redistribution (closed curves keep vertex 0 as
    the parameter origin; open curves keep both endpoints)."""
    v = curve.vertices
    if m is None:
        m = len(v)
    seg = curve.edge_lengths
    s = np.concatenate([[0.0], np.cumsum(seg)])
    total = s[-1]
    if curve.closed:
        targets = np.linspace(0.0, total, m, endpoint=False)
        pts_src = np.vstack([v, v[:1]])
    else:
        targets = np.linspace(0.0, total, m)
        pts_src = v
    idx = np.clip(np.searchsorted(s, targets, side="right") - 1, 0, len(seg) - 1)
    frac = (targets - s[idx]) / np.maximum(seg[idx], 1e-300)
    pts = pts_src[idx] * (1.0 - frac[:, None]) + pts_src[idx + 1] * frac[:, None]
    return curve.with_vertices(pts)


def step_curve(curve, dt, resample=True):
    """One explicit step x -> x + dt * k of curve shortening flow.

    Open curves keep their endpoints fixed.  dt must respect the
    stability bound 0.25 * h_min^2.
    """
    bound = curve_stability_bound(curve)
    if dt > bound * (1.0 + 1e-12):
        raise FlowError(f"dt={dt:g} exceeds stability bound; "
                        f"admissible dt <= {bound:g}")
    kvec, _ = curve_curvature(curve)
    vnew = curve.vertices + dt * kvec
    out = curve.with_vertices(vnew)
    if np.any(out.edge_lengths <= 0):
        raise FlowError("step produced a zero-length edge")
    if resample and curve.closed:
        out = resample_curve(out)
    return out


def mesh_stability_bound(mesh):
    return 0.25 * float(mesh.edge_lengths.min()) ** 2


def step_mesh(mesh, dt, implicit=False, pin_boundary=False):
    """One step of mean curvature flow x -> x + dt * H for a mesh.

    Closed meshes move freely.  Meshes with boundary require
    ``pin_boundary=True``: boundary vertices stay put and the flow is
    only meaningful away from them.  The implicit variant solves the
    linearized step (cotangent weights frozen at the current geometry)
    and is unconditionally stable.
    """
    has_boundary = not mesh.is_closed
    if has_boundary and not pin_boundary:
        raise GeometryError("step_mesh requires a closed mesh "
                            "(or pin_boundary=True for patches)")
    if not implicit:
        bound = mesh_stability_bound(mesh)
        if dt > bound * (1.0 + 1e-12):
            raise FlowError(f"dt={dt:g} exceeds stability bound; "
                            f"admissible dt <= {bound:g}")
        hvec, _ = mean_curvature_vectors(mesh)
        if pin_boundary:
            hvec = hvec.copy()
            hvec[mesh.connectivity.is_boundary_vertex] = 0.0
        vnew = mesh.vertices + dt * hvec
    else:
        vnew = _implicit_mesh_step(mesh, dt, pin_boundary)
    if not np.all(np.isfinite(vnew)):
        raise FlowError("non-finite coordinates after step")
    out = mesh.with_vertices(vnew)
    areas = out.face_areas
    if areas.min() <= 1e-8 * areas.mean():
        raise FlowError("step produced a degenerate triangle; remesh needed")
    return out


def _implicit_mesh_step(mesh, dt, pin_boundary):
    import scipy.sparse as sp
    import scipy.sparse.linalg as spla

    V = len(mesh.vertices)
    t = mesh.triangles
    ang = mesh.corner_angles
    cot = 0.5 * np.cos(ang) / np.sin(ang)
    rows, cols, vals = [], [], []
    for k in range(3):
        a = t[:, (k + 1) % 3]
        b = t[:, (k + 2) % 3]
        w = cot[:, k]
        rows += [a, b, a, b]
        cols += [b, a, a, b]
        vals += [w, w, -w, -w]
    L = sp.csr_matrix((np.concatenate(vals),
                       (np.concatenate(rows), np.concatenate(cols))),
                      shape=(V, V))
    M = sp.diags(mixed_areas(mesh))
    A = (M - dt * L).tolil()
    rhs = M @ mesh.vertices
    if pin_boundary:
        bidx = np.where(mesh.connectivity.is_boundary_vertex)[0]
        for i in bidx:
            A.rows[i] = [i]
            A.data[i] = [1.0]
        rhs = rhs.copy()
        rhs[bidx] = mesh.vertices[bidx]
    return spla.spsolve(A.tocsr(), rhs)


def remesh_edges(mesh, target, max_passes=1):
    """Split edges longer than 2*target, collapse interior edges shorter
    than 0.5*target (link-condition guarded).  Returns
    ``(mesh, n_splits, n_collapses)``."""
    n_splits = n_collapses = 0
    for _ in range(max_passes):
        verts = list(map(np.array, mesh.vertices))
        faces = [list(map(int, f)) for f in mesh.triangles]
        lengths = mesh.edge_lengths
        edges = mesh.connectivity.edges

        # splits
        long_ids = np.where(lengths > 2.0 * target)[0]
        if len(long_ids):
            edge_faces = {}
            for fi, f in enumerate(faces):
                for k in range(3):
                    key = tuple(sorted((f[k], f[(k + 1) % 3])))
                    edge_faces.setdefault(key, []).append(fi)
            dead = set()
            new_faces = []
            for eid in long_ids:
                a, b = map(int, edges[eid])
                key = (min(a, b), max(a, b))
                adjacent = [fi for fi in edge_faces.get(key, []) if fi not in dead]
                if not adjacent:
                    continue
                mid = 0.5 * (verts[a] + verts[b])
                mi = len(verts)
                verts.append(mid)
                for fi in adjacent:
                    f = faces[fi]
                    c = [x for x in f if x not in (a, b)][0]
                    ia, ib = f.index(a), f.index(b)
                    # preserve orientation: replace one endpoint by mid
                    f1 = list(f)
                    f1[ib] = mi
                    f2 = list(f)
                    f2[ia] = mi
                    new_faces += [f1, f2]
                    dead.add(fi)
                n_splits += 1
            faces = [f for fi, f in enumerate(faces) if fi not in dead] + new_faces
            mesh = TriMesh(np.asarray(verts), np.asarray(faces, np.int64))
            continue  # recompute lengths before collapsing

        # collapses
        short_ids = np.where(lengths < 0.5 * target)[0]
        if not len(short_ids):
            break
        order = np.argsort(lengths[short_ids])
        boundary_v = mesh.connectivity.is_boundary_vertex
        nbrs = [set() for _ in verts]
        for a, b in edges:
            nbrs[a].add(int(b))
            nbrs[b].add(int(a))
        removed = set()
        vert_pos = np.array(mesh.vertices)
        remap = np.arange(len(verts))
        collapsed_any = False
        for eid in short_ids[order]:
            a, b = map(int, edges[eid])
            if a in removed or b in removed:
                continue
            if boundary_v[a] or boundary_v[b]:
                continue
            common = nbrs[a] & nbrs[b]
            if len(common) != 2:
                continue  # link condition
            vert_pos[a] = 0.5 * (vert_pos[a] + vert_pos[b])
            remap[b] = a
            removed.add(b)
            nbrs[a] |= (nbrs[b] - {a})
            for c in nbrs[b]:
                nbrs[c].discard(b)
                if c != a:
                    nbrs[c].add(a)
            n_collapses += 1
            collapsed_any = True
        if not collapsed_any:
            break
        new_faces = []
        for f in faces:
            g = [int(remap[x]) for x in f]
            if len(set(g)) == 3:
                new_faces.append(g)
        used = np.unique(np.asarray(new_faces).ravel())
        newidx = np.full(len(vert_pos), -1, np.int64)
        newidx[used] = np.arange(len(used))
        mesh = TriMesh(vert_pos[used], newidx[np.asarray(new_faces, np.int64)])
    return mesh, n_splits, n_collapses


# ---------------------------------------------------------------------------
# trajectories
# ---------------------------------------------------------------------------

def _geometry_kind(geom):
    if isinstance(geom, PolyCurve):
        return "curve"
    if isinstance(geom, TriMesh):
        return "mesh"
    if isinstance(geom, GraphPatch):
        return "graph"
    raise GeometryError(f"unsupported geometry {type(geom).__name__}")


class Trajectory:
    """Time-stamped sequence of geometry snapshots of one flow."""

    def __init__(self, times, geometries, meta=None):
        self.times = np.asarray(times, float)
        self.geometries = list(geometries)
        if len(self.times) != len(self.geometries):
            raise GeometryError("times and geometries length mismatch")
        if len(self.times) and np.any(np.diff(self.times) <= 0):
            raise GeometryError("snapshot times must be strictly increasing")
        kinds = {_geometry_kind(g) for g in self.geometries}
        if len(kinds) > 1:
            raise GeometryError("snapshot geometry type must be constant")
        self.kind = kinds.pop() if kinds else None
        self.meta = dict(meta or {})

    def __len__(self):
        return len(self.times)

    @property
    def span(self):
        return float(self.times[0]), float(self.times[-1])

    def snapshot(self, i):
        return self.times[i], self.geometries[i]

    def index_at(self, t):
        """Index of the last snapshot with time <= t."""
        i = int(np.searchsorted(self.times, t, side="right")) - 1
        return max(i, 0)

    def interpolate(self, t):
        """Geometry at time t, linear in vertex positions / grid values
        between the bracketing snapshots."""
        t0, t1 = self.span
        if not (t0 - 1e-12 <= t <= t1 + 1e-12):
            raise GeometryError(f"time {t} outside trajectory span [{t0}, {t1}]")
        i = min(self.index_at(t), len(self.times) - 1)
        if i == len(self.times) - 1 or abs(self.times[i] - t) < 1e-15:
            return self.geometries[i]
        j = i + 1
        w = (t - self.times[i]) / (self.times[j] - self.times[i])
        gi, gj = self.geometries[i], self.geometries[j]
        if self.kind == "curve":
            if len(gi.vertices) != len(gj.vertices):
                raise GeometryError("cannot interpolate across a remesh event")
            return gi.with_vertices((1 - w) * gi.vertices + w * gj.vertices)
        if self.kind == "mesh":
            if gi.vertices.shape != gj.vertices.shape or \
                    not np.array_equal(gi.triangles, gj.triangles):
                raise GeometryError("cannot interpolate across a remesh event")
            return gi.with_vertices((1 - w) * gi.vertices + w * gj.vertices)
        return gi.with_values((1 - w) * gi.values + w * gj.values)

    def map_geometry(self, fn, times=None, meta=None):
        """New trajectory with fn applied to every snapshot."""
        tt = self.times if times is None else times
        return Trajectory(tt, [fn(g) for g in self.geometries],
                          meta=dict(self.meta, **(meta or {})))


@dataclass
class SingularityEstimate:
    """Space-time singularity estimate fitted from curvature blow-up.

    ``type_one_ratio`` is the largest max|A| * sqrt(T_hat - t) over the
    fit window (bounded along the window under the type-I ansatz).
    """
    y_hat: np.ndarray
    T_hat: float
    type_one_ratio: float
    window_times: np.ndarray = dc_field(default=None)
    window_maxA: np.ndarray = dc_field(default=None)


def max_norm_A(geom):
    """max |A| over the (interior of the) geometry."""
    kind = _geometry_kind(geom)
    if kind == "curve":
        kvec, _ = curve_curvature(geom)
        return float(np.linalg.norm(kvec, axis=1).max())
    if kind == "mesh":
        areas = mixed_areas(geom)
        hvec, _ = mean_curvature_vectors(geom, areas)
        sqH = np.einsum("vi,vi->v", hvec, hvec)
        gauss = angle_defects(geom) / np.maximum(areas, 1e-300)
        sqA = np.maximum(sqH - 2.0 * gauss, 0.0)
        ok = ~geom.connectivity.is_boundary_vertex
        vals = sqA[ok] if ok.any() else sqA
        return float(np.sqrt(vals.max()))
    _, sqA, _, mask = graph_second_form(geom)
    return float(np.sqrt(sqA[mask].max())) if mask.any() else 0.0


def _min_scale(geom):
    kind = _geometry_kind(geom)
    if kind == "curve":
        return float(geom.edge_lengths.min())
    if kind == "mesh":
        return float(geom.edge_lengths.min())
    return geom.spacing


def run_flow(geometry, horizon, options=None, t0=0.0):
    """Integrate mean curvature flow from ``geometry`` for ``horizon``
    time units starting at t0, with adaptive explicit steps.

    Returns a :class:`Trajectory`.  The flow halts early (with
    ``meta['halt']`` set) when the resolution criterion
    max|A| * h_min > halt_resolution fires.
    """
    opts = options or FlowOptions()
    kind = _geometry_kind(geometry)
    if horizon <= 0:
        raise GeometryError("horizon must be positive")
    if kind == "mesh" and not geometry.is_closed and not opts.pin_boundary:
        raise GeometryError("open meshes flow only with pin_boundary")

    t = float(t0)
    t_end = t0 + horizon
    geom = geometry
    times = [t]
    snaps = [geom]
    dt_hist = []
    events = []
    halt = None
    next_snap_t = t + opts.snapshot_dt if opts.snapshot_dt else None
    target = opts.remesh_target
    if kind == "mesh" and opts.remesh and target is None:
        target = float(geometry.edge_lengths.mean())

    step_i = 0
    while t < t_end - 1e-15:
        if step_i >= opts.max_steps:
            halt = {"reason": "max_steps", "t": t}
            break
        if kind == "curve":
            bound = curve_stability_bound(geom)
        elif kind == "mesh":
            bound = np.inf if opts.implicit else mesh_stability_bound(geom)
        else:
            bound = graph_stability_bound(geom)
        dt = opts.dt_safety * bound
        if opts.max_dt:
            dt = min(dt, opts.max_dt)
        if opts.implicit and kind == "mesh" and not np.isfinite(dt):
            dt = opts.max_dt or (t_end - t)
        dt = min(dt, t_end - t)
        if next_snap_t is not None:
            dt = min(dt, max(next_snap_t - t, 1e-15))
        if dt <= 0 or not np.isfinite(dt):
            raise FlowError(f"non-positive step at t={t}; "
                            "geometry degenerate beyond stepping")

        if kind == "curve":
            geom = step_curve(geom, dt, resample=opts.resample)
        elif kind == "mesh":
            geom = step_mesh(geom, dt, implicit=opts.implicit,
                             pin_boundary=opts.pin_boundary)
        else:
            geom = step_graph(geom, dt, grad_cap=opts.grad_cap)
        t += dt
        dt_hist.append(dt)
        step_i += 1

        if kind == "mesh" and opts.remesh:
            geom, ns, nc = remesh_edges(geom, target)
            if ns or nc:
                events.append({"t": t, "splits": ns, "collapses": nc})

        maxA = max_norm_A(geom)
        if maxA * _min_scale(geom) > opts.halt_resolution:
            times.append(t)
            snaps.append(geom)
            halt = {"reason": "resolution", "t": t, "maxA": maxA}
            break

        take = False
        if next_snap_t is not None and t >= next_snap_t - 1e-12:
            take = True
            next_snap_t += opts.snapshot_dt
        if opts.snapshot_every and step_i % opts.snapshot_every == 0:
            take = True
        if take or t >= t_end - 1e-15:
            times.append(t)
            snaps.append(geom)

    if times[-1] < t - 1e-15:
        times.append(t)
        snaps.append(geom)
    meta = {
        "dt_history": np.asarray(dt_hist),
        "remesh_events": events,
        "halt": halt,
        "steps": step_i,
        "t0": t0,
        "horizon": horizon,
    }
    return Trajectory(times, snaps, meta=meta)


def detect_singularity(trajectory, growth_factor=2.0, window_frac=0.2,
                       weight_power=4.0):
    """Fit a Type-I singularity (y_hat, T_hat) from curvature blow-up.

    Fits max|A|^{-2} linearly in t over the trailing window of snapshots
    whose max|A| exceeds ``growth_factor`` times its initial value; the
    fitted zero crossing is T_hat.  The spatial estimate extrapolates
    the |A|^4-weighted centroid of the window snapshots to T_hat.
    Returns None when no curvature growth is detected.
    """
    if len(trajectory) < 4:
        return None
    maxA = np.array([max_norm_A(g) for g in trajectory.geometries])
    if maxA[0] <= 0 or maxA[-1] < growth_factor * maxA[0]:
        return None
    grown = np.where(maxA > growth_factor * maxA[0])[0]
    lo = grown[0]
    n_win = max(4, int(np.ceil(window_frac * (len(trajectory) - lo))))
    idx = np.arange(len(trajectory))[max(lo, len(trajectory) - n_win):]
    if len(idx) < 4:
        idx = np.arange(len(trajectory))[-4:]
    tt = trajectory.times[idx]
    y = maxA[idx] ** -2
    A = np.column_stack([np.ones_like(tt), tt])
    coef, *_ = np.linalg.lstsq(A, y, rcond=None)
    a, b = coef
    if b >= 0:
        return None
    T_hat = -a / b
    if T_hat <= trajectory.times[-1]:
        T_hat = trajectory.times[-1] + 0.25 * (
            trajectory.times[-1] - trajectory.times[-2])

    centroids = []
    for i in idx:
        geom = trajectory.geometries[i]
        kind = _geometry_kind(geom)
        if kind == "curve":
            from .geometry import curve_curvature_field
            fld = curve_curvature_field(geom)
            pos = geom.vertices
            w = fld.vertex_area * fld.sq_norm_A ** (weight_power / 2.0)
        elif kind == "mesh":
            from .geometry import mesh_curvature
            fld = mesh_curvature(geom, want_projectors=False)
            pos = geom.vertices
            w = fld.vertex_area * fld.sq_norm_A ** (weight_power / 2.0)
        else:
            _, sqA, _, mask = graph_second_form(geom)
            pos = geom.positions()[mask]
            w = (sqA[mask] ** (weight_power / 2.0)) * geom.area_elements()[mask]
            pos = pos.reshape(-1, geom.ambient_dim)
            w = w.ravel()
        w = np.maximum(w, 0.0)
        if w.sum() <= 0:
            w = np.ones(len(pos))
        centroids.append((w[:, None] * pos.reshape(len(w), -1)).sum(axis=0) / w.sum())
    centroids = np.asarray(centroids)
    # extrapolate the centroid track to T_hat
    Ac = np.column_stack([np.ones_like(tt), tt])
    cc, *_ = np.linalg.lstsq(Ac, centroids, rcond=None)
    y_hat = cc[0] + cc[1] * T_hat

    ratio = float(np.max(maxA[idx] * np.sqrt(np.maximum(T_hat - tt, 0.0))))
    return SingularityEstimate(y_hat=y_hat, T_hat=float(T_hat),
                               type_one_ratio=ratio,
                               window_times=tt, window_maxA=maxA[idx])
