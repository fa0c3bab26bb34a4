"""Curvature frames along the transverse intersection of two manifolds.

A surface M^2 and a hypersurface N^{n-1} meeting transversally in a
curve carry, at each intersection point, the frame (tau, n, e1) with tau
the curve tangent, n the surface conormal in M, and e1 the unit normal
of N.  The curve curvature k splits against the plane P spanned by n and
e1 according to the identity

    sin^2(alpha) |P k|^2 + |P^perp k|^2 = |A_M(tau,tau) - A_N(tau,tau)|^2

with sin^2(alpha) = (n . e1)^2, where A_M(tau,tau) and A_N(tau,tau) are
the tangential projections of k onto T_xM and T_xN.  Specializing N to a
round sphere of radius r bounds |k| by (|A_M| + 1/r)/sin(alpha).
"""

from dataclasses import dataclass

import numpy as np

from .geometry import GeometryError

__all__ = ["IntersectionFrame", "lemma5_identity", "random_consistent_frame",
            "FrameConsistencyError"]

_ORTHO_TOL = 1e-12


class FrameConsistencyError(GeometryError):
    """Frame data does not reproduce its own projections."""

    def __init__(self, msg, residual):
        super().__init__(f"{msg} (residual {residual:.3e})")
        self.residual = residual


@dataclass
class IntersectionFrame:
    """Pointwise frame of a transverse intersection curve.

    Attributes
    ----------
    tau : (n,) unit tangent of the intersection curve.
    nvec : (n,) unit conormal of the surface M (in T_xM, orthogonal to tau).
    e1 : (n,) unit normal of the hypersurface N.
    AM : (n,) tangential projection of the curve curvature onto T_xM.
    AN : (n,) tangential projection of the curve curvature onto T_xN.
    kvec : (n,) curvature vector of the curve (orthogonal to tau).
    """

    tau: np.ndarray
    nvec: np.ndarray
    e1: np.ndarray
    AM: np.ndarray
    AN: np.ndarray
    kvec: np.ndarray

    def __post_init__(self):
        self.tau = np.asarray(self.tau, float)
        self.nvec = np.asarray(self.nvec, float)
        self.e1 = np.asarray(self.e1, float)
        self.AM = np.asarray(self.AM, float)
        self.AN = np.asarray(self.AN, float)
        self.kvec = np.asarray(self.kvec, float)

    @property
    def sin_sq_alpha(self):
        return float(np.dot(self.nvec, self.e1) ** 2)

    def validate(self, tol=_ORTHO_TOL):
        for name, v in (("tau", self.tau), ("nvec", self.nvec), ("e1", self.e1)):
            if abs(np.linalg.norm(v) - 1.0) > 1e-9:
                raise GeometryError(f"{name} is not a unit vector")
        if abs(np.dot(self.tau, self.nvec)) > tol:
            raise GeometryError("nvec not orthogonal to tau")
        if abs(np.dot(self.tau, self.e1)) > tol:
            raise GeometryError("e1 not orthogonal to tau")
        if abs(np.dot(self.tau, self.kvec)) > max(
                tol * max(np.linalg.norm(self.kvec), 1.0), tol):
            raise GeometryError("curvature vector not orthogonal to tau")
        # consistency: AM, AN must be the stated projections of kvec
        am = np.dot(self.nvec, self.kvec) * self.nvec
        an = self.kvec - np.dot(self.e1, self.kvec) * self.e1
        scale = max(np.linalg.norm(self.kvec), 1.0)
        res = max(np.linalg.norm(am - self.AM), np.linalg.norm(an - self.AN))
        if res > 1e-9 * scale:
            raise FrameConsistencyError(
                "AM/AN inconsistent with kvec projections", res)
        return True


def _plane_basis(frame):
    """Orthonormal basis of the 2-plane P containing nvec and e1.

    When nvec and e1 are parallel (sin^2 alpha = 1) the plane is not
    unique; the completion is taken from the component of kvec
    orthogonal to nvec, falling back to an arbitrary orthogonal unit
    vector when that vanishes (the identity value is completion
    independent there).
    """
    n = frame.nvec
    e1 = frame.e1
    b2 = e1 - np.dot(e1, n) * n
    nb = np.linalg.norm(b2)
    if nb > 1e-8:
        return n, b2 / nb
    k_perp = frame.kvec - np.dot(frame.kvec, n) * n
    nk = np.linalg.norm(k_perp)
    if nk > 1e-12:
        return n, k_perp / nk
    # arbitrary completion orthogonal to n
    dim = len(n)
    for i in range(dim):
        cand = np.zeros(dim)
        cand[i] = 1.0
        cand -= np.dot(cand, n) * n
        nc = np.linalg.norm(cand)
        if nc > 0.5:
            return n, cand / nc
    raise GeometryError("could not complete the plane basis")


def lemma5_identity(frame, validate=True):
    """Evaluate both sides of the curvature splitting identity.

    Returns ``(lhs, rhs)`` with
    lhs = sin^2(alpha) |P k|^2 + |P^perp k|^2 and
    rhs = |A_M(tau,tau) - A_N(tau,tau)|^2.
    Raises :class:`FrameConsistencyError` when the frame's AM/AN do not
    reproduce the projections of kvec.
    """
    if validate:
        frame.validate()
    b1, b2 = _plane_basis(frame)
    k = frame.kvec
    pk = np.dot(k, b1) * b1 + np.dot(k, b2) * b2
    pk_sq = float(np.dot(pk, pk))
    pperp_sq = float(np.dot(k - pk, k - pk))
    lhs = frame.sin_sq_alpha * pk_sq + pperp_sq
    diff = frame.AM - frame.AN
    rhs = float(np.dot(diff, diff))
    return lhs, rhs


def sphere_frame_bound(frame, r):
    """|k| bound (|A_M(tau,tau)| + 1/r) / sin(alpha) for N = sphere of
    radius r; infinite for tangential intersections."""
    s = np.sqrt(frame.sin_sq_alpha)
    if s < 1e-12:
        return np.inf
    return (np.linalg.norm(frame.AM) + 1.0 / r) / s


def random_consistent_frame(rng, dim):
    """Random frame in R^dim with consistent (tau, n, e1, k, AM, AN).

    tau is a random unit vector; nvec, e1 random unit vectors orthogonal
    to tau; kvec a random vector orthogonal to tau; AM, AN are then the
    defining projections.
    """
    if dim < 3:
        raise GeometryError("need ambient dimension >= 3")

    def unit(v):
        return v / np.linalg.norm(v)

    tau = unit(rng.normal(size=dim))

    def orth_unit():
        while True:
            v = rng.normal(size=dim)
            v -= np.dot(v, tau) * tau
            nv = np.linalg.norm(v)
            if nv > 1e-6:
                return v / nv

    nvec = orth_unit()
    e1 = orth_unit()
    k = rng.normal(size=dim) * rng.uniform(0.1, 3.0)
    k -= np.dot(k, tau) * tau
    AM = np.dot(nvec, k) * nvec
    AN = k - np.dot(e1, k) * e1
    return IntersectionFrame(tau=tau, nvec=nvec, e1=e1, AM=AM, AN=AN, kvec=k)
