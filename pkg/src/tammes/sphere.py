"""Spherical trigonometry kernel for equilateral contact-graph geometry.

Everything here works on unit vectors in R^3 and angles in radians.
Distances are geodesic (angular) distances in [0, pi].  Polygons are
convex equilateral spherical polygons given by their common side length
and interior angles.
"""

import math
from dataclasses import dataclass

import numpy as np


class DomainError(ValueError):
    """Input outside the mathematical domain of an operation."""


class NoClosure(RuntimeError):
    """Polygon closure iteration failed to converge to a convex polygon."""


class Degenerate(RuntimeError):
    """Polygon is not strictly convex / usable for cap computations."""


class DegenerateCircle(ValueError):
    """Two points do not determine a great circle."""


UNIT_NORM_TOL = 1e-12


def unit_vector(v) -> np.ndarray:
    """Normalize *v* to a unit vector; reject near-zero input."""
    v = np.asarray(v, dtype=float)
    n = float(np.linalg.norm(v))
    if n < 1e-12:
        raise DomainError("cannot normalize near-zero vector")
    return v / n


def angular_dist(a: np.ndarray, b: np.ndarray) -> float:
    """Geodesic distance between unit vectors, in [0, pi]."""
    return math.acos(max(-1.0, min(1.0, float(np.dot(a, b)))))


def alpha(d: float) -> float:
    """Interior angle of the equilateral spherical triangle with side *d*.

    alpha(d) = arccos(cos d / (1 + cos d)), defined for 0 < d < 2*pi/3,
    strictly increasing in d (each angle grows as the triangle grows).
    """
    if not 0.0 < d:
        raise DomainError(f"side must be positive, got {d}")
    c = math.cos(d)
    if c <= -0.5:
        raise DomainError(f"degenerate triangle: cos d = {c} <= -1/2")
    return math.acos(c / (1.0 + c))


def rho(u1: float, d: float) -> float:
    """Opposite-pair angle of the equilateral spherical quadrilateral.

    A spherical rhombus with side d and one angle pair u1 has the other
    pair rho(u1, d) = 2*arccot(tan(u1/2) * cos d).  Satisfies
    cot(u1/2) * cot(rho/2) = cos d and is an involution in u1.
    """
    if not 0.0 < d < math.pi / 2:
        raise DomainError(f"quadrilateral side must lie in (0, pi/2), got {d}")
    if not 0.0 < u1 < math.pi:
        raise DomainError(f"angle {u1} outside (0, pi)")
    t = math.tan(0.5 * u1) * math.cos(d)
    # arccot with range (0, pi): atan2(1, t)
    return 2.0 * math.atan2(1.0, t)


def fejes_toth_bound(n: int) -> float:
    """Upper bound on the max-min angular separation of n points on S^2.

    arccos(c/(1-c)) with c = cos(pi*n / (3n - 6)); tight for n = 3, 4, 6, 12.
    """
    if n < 4:
        raise DomainError(f"bound requires n >= 4, got {n}")
    c = math.cos(math.pi * n / (3.0 * n - 6.0))
    return math.acos(c / (1.0 - c))


def reflect_over_great_circle(x: np.ndarray, y: np.ndarray, z: np.ndarray) -> np.ndarray:
    """Mirror image of *x* across the great circle through *y* and *z*."""
    n = np.cross(y, z)
    nn = float(np.linalg.norm(n))
    if nn < 1e-12:
        raise DegenerateCircle("points are identical or antipodal")
    n = n / nn
    return x - 2.0 * float(np.dot(x, n)) * n


def tangent_toward(p: np.ndarray, q: np.ndarray) -> np.ndarray:
    """Unit tangent at p to the great circle through p and q, pointing at q."""
    t = q - float(np.dot(p, q)) * p
    nt = float(np.linalg.norm(t))
    if nt < 1e-12:
        raise DegenerateCircle("tangent direction undefined (coincident or antipodal)")
    return t / nt


def interior_angle(prev_v: np.ndarray, at: np.ndarray, next_v: np.ndarray) -> float:
    """Angle at *at* between the geodesics toward *prev_v* and *next_v*."""
    a = tangent_toward(at, prev_v)
    b = tangent_toward(at, next_v)
    return math.acos(max(-1.0, min(1.0, float(np.dot(a, b)))))


def _rotate_tangent(v: np.ndarray, axis: np.ndarray, phi: float) -> np.ndarray:
    """Rotate tangent vector v around the (unit) axis by phi (right-hand rule)."""
    return v * math.cos(phi) + np.cross(axis, v) * math.sin(phi)


def _walk_polygon(angles, d: float) -> np.ndarray:
    """Place polygon vertices by walking edges of length d with given turns.

    Starts at the north pole heading along +x.  The interior angle at
    vertex k+1 sets the turn between incoming and outgoing edges; angles[0]
    (the angle at the start vertex) is not consumed by the walk, it is a
    closure condition.  Returns an (m+1, 3) array; row m is the landing
    point after the last edge, equal to row 0 for a closed polygon.
    """
    m = len(angles)
    pts = np.empty((m + 1, 3))
    p = np.array([0.0, 0.0, 1.0])
    h = np.array([1.0, 0.0, 0.0])
    pts[0] = p
    for k in range(m):
        q = math.cos(d) * p + math.sin(d) * h
        q = q / np.linalg.norm(q)
        t_cont = -math.sin(d) * p + math.cos(d) * h  # forward tangent at q
        pts[k + 1] = q
        if k + 1 < m:
            back = -t_cont  # tangent at q toward p
            # interior angle on the left of the walk direction
            h = _rotate_tangent(back, q, -angles[k + 1])
            h = h - float(np.dot(h, q)) * q
            h = h / np.linalg.norm(h)
        p = q
    return pts


@dataclass
class SphericalPolygon:
    """Convex equilateral spherical polygon.

    vertices[k] carries interior angle angles[k]; consecutive vertices are
    at geodesic distance side.
    """

    vertices: np.ndarray  # (m, 3)
    side: float
    angles: np.ndarray  # (m,)

    @property
    def m(self) -> int:
        return len(self.angles)

    def recomputed_sides(self) -> np.ndarray:
        m = self.m
        return np.array([
            angular_dist(self.vertices[k], self.vertices[(k + 1) % m])
            for k in range(m)
        ])

    def recomputed_angles(self) -> np.ndarray:
        m = self.m
        return np.array([
            interior_angle(self.vertices[k - 1], self.vertices[k],
                           self.vertices[(k + 1) % m])
            for k in range(m)
        ])

    def is_convex(self, tol: float = 1e-9) -> bool:
        """All interior angles strictly inside (0, pi)."""
        return bool(np.all(self.angles > tol) and np.all(self.angles < math.pi - tol))

    def contains(self, p: np.ndarray, tol: float = 1e-9) -> bool:
        """Point-in-convex-polygon test; boundary counts as inside."""
        m = self.m
        sgn = self._orientation()
        for k in range(m):
            a, b = self.vertices[k], self.vertices[(k + 1) % m]
            if sgn * float(np.dot(np.cross(a, b), p)) < -tol:
                return False
        return True

    def _orientation(self) -> float:
        # sign of the triple product on the first corner; +1 for ccw walks
        s = float(np.dot(np.cross(self.vertices[0], self.vertices[1]),
                         self.vertices[2]))
        return 1.0 if s >= 0 else -1.0


def _closure_residual(angles, d: float) -> np.ndarray:
    """3-vector closure error of the angle list: landing offset and angle gap."""
    pts = _walk_polygon(angles, d)
    start, land = pts[0], pts[-1]
    # tangent-plane coordinates of the landing point at the start vertex
    ex = np.array([1.0, 0.0, 0.0])
    ey = np.array([0.0, 1.0, 0.0])
    diff = land - start
    r0 = float(np.dot(diff, ex))
    r1 = float(np.dot(diff, ey))
    # interior angle realized at the start vertex vs requested angles[0]
    if np.linalg.norm(diff) < 0.5:
        ang = interior_angle(pts[-2], start, pts[1])
        r2 = ang - angles[0]
    else:
        r2 = float(np.dot(diff, diff))
    return np.array([r0, r1, r2])


def polygon_embed(free_angles, d: float, m: int) -> SphericalPolygon:
    """Build the convex equilateral m-gon with side d from its free angles.

    For m = 3 the polygon is the equilateral triangle (free_angles ignored);
    for m = 4 the single free angle u1 determines the rhombus
    (u1, rho(u1, d), u1, rho(u1, d)).  For m = 5, 6 the last three angles
    are solved from the closure condition by damped Newton.
    """
    if m not in (3, 4, 5, 6):
        raise DomainError(f"polygon size must be 3..6, got {m}")
    if not 0.0 < d < math.pi / 2:
        raise DomainError(f"side must lie in (0, pi/2), got {d}")
    free_angles = [float(u) for u in free_angles]
    s = m - 3
    if m > 3 and len(free_angles) != s:
        raise DomainError(f"need {s} free angles for m={m}, got {len(free_angles)}")
    a = alpha(d)
    for u in free_angles:
        if not a - 1e-9 <= u < math.pi:
            raise DomainError(f"free angle {u} outside [alpha(d), pi)")

    if m == 3:
        angles = np.array([a, a, a])
    elif m == 4:
        u1 = free_angles[0]
        u2 = rho(u1, d)
        angles = np.array([u1, u2, u1, u2])
    else:
        angles = _solve_closure(free_angles, d, m)

    pts = _walk_polygon(angles, d)
    poly = SphericalPolygon(vertices=pts[:m].copy(), side=d, angles=angles)
    res = _closure_residual(angles, d)
    if float(np.max(np.abs(res))) > 1e-8:
        raise NoClosure(f"walk does not close, residual {res}")
    if not poly.is_convex():
        raise NoClosure("closure converged to a non-convex polygon")
    return poly


def _solve_closure(free_angles, d: float, m: int) -> np.ndarray:
    """Newton iteration on the three dependent angles of an m-gon."""
    guess = float(np.mean(free_angles))
    g = np.array([guess, guess, guess])

    def full(gv):
        return np.array(list(free_angles) + list(gv))

    res = _closure_residual(full(g), d)
    for _ in range(100):
        if float(np.max(np.abs(res))) < 1e-12:
            break
        jac = np.empty((3, 3))
        h = 1e-7
        for j in range(3):
            gp = g.copy()
            gp[j] += h
            jac[:, j] = (_closure_residual(full(gp), d) - res) / h
        try:
            step = np.linalg.solve(jac, -res)
        except np.linalg.LinAlgError:
            raise NoClosure("singular closure Jacobian")
        # damped update: keep angles inside (0, pi)
        lam = 1.0
        for _damp in range(30):
            cand = g + lam * step
            if np.all(cand > 1e-6) and np.all(cand < math.pi - 1e-6):
                cres = _closure_residual(full(cand), d)
                if float(np.max(np.abs(cres))) < float(np.max(np.abs(res))):
                    g, res = cand, cres
                    break
            lam *= 0.5
        else:
            break
    if float(np.max(np.abs(res))) > 1e-10:
        raise NoClosure(f"closure Newton stalled at residual {res}")
    return full(g)


def polygon_diagonal(p: SphericalPolygon, i: int, j: int) -> float:
    """Geodesic distance between vertices i and j of the embedded polygon."""
    m = p.m
    if i == j:
        raise IndexError("diagonal endpoints must differ")
    if not (0 <= i < m and 0 <= j < m):
        raise IndexError(f"vertex index out of range for m={m}")
    return angular_dist(p.vertices[i], p.vertices[j])


def _cap_ascent(p: SphericalPolygon, c: np.ndarray, iters: int = 200) -> np.ndarray:
    """Local ascent of min-distance-to-vertices from c, staying inside p."""
    step = 0.05
    best = min(angular_dist(c, v) for v in p.vertices)
    for _ in range(iters):
        dists = np.array([angular_dist(c, v) for v in p.vertices])
        mind = float(dists.min())
        active = [k for k in range(p.m) if dists[k] <= mind + 1e-7]
        # direction away from active vertices: mean of outward tangents
        g = np.zeros(3)
        for k in active:
            g -= tangent_toward(c, p.vertices[k])
        g = g - float(np.dot(g, c)) * c
        ng = float(np.linalg.norm(g))
        if ng < 1e-14:
            step *= 0.5
            if step < 1e-13:
                break
            continue
        g /= ng
        moved = False
        while step > 1e-13:
            cand = unit_vector(math.cos(step) * c + math.sin(step) * g)
            if p.contains(cand, tol=1e-12):
                val = min(angular_dist(cand, v) for v in p.vertices)
                if val > best:
                    c, best = cand, val
                    moved = True
                    break
            step *= 0.5
        if not moved and step <= 1e-13:
            break
    return c


def lambda_max_min(p: SphericalPolygon) -> float:
    """Largest radius of a vertex-avoiding cap centered inside the polygon.

    max over points q in the polygon of min_k dist(q, vertex_k).  Candidate
    centers: circumcenters of vertex triples, bisector/edge intersections,
    vertex antipodes falling inside, edge midpoints, and the centroid; the
    best candidate is refined by local ascent.
    """
    if p.m < 5:
        raise DomainError(f"cap radius defined for m >= 5, got m={p.m}")
    if not p.is_convex(tol=1e-9):
        raise Degenerate("polygon is not strictly convex")
    V = p.vertices
    m = p.m
    cands = []
    centroid = unit_vector(V.sum(axis=0))
    cands.append(centroid)
    # circumcenters of vertex triples: intersection of two bisector planes
    for i in range(m):
        for j in range(i + 1, m):
            for k in range(j + 1, m):
                axis = np.cross(V[i] - V[j], V[i] - V[k])
                nn = float(np.linalg.norm(axis))
                if nn < 1e-12:
                    continue
                for sgn in (1.0, -1.0):
                    cands.append(sgn * axis / nn)
    # bisector of a vertex pair crossed with each boundary edge
    for i in range(m):
        for j in range(i + 1, m):
            nb = V[i] - V[j]
            for k in range(m):
                ne = np.cross(V[k], V[(k + 1) % m])
                axis = np.cross(nb, ne)
                nn = float(np.linalg.norm(axis))
                if nn < 1e-12:
                    continue
                for sgn in (1.0, -1.0):
                    q = sgn * axis / nn
                    if angular_dist(q, V[k]) <= p.side + 1e-9 and \
                       angular_dist(q, V[(k + 1) % m]) <= p.side + 1e-9:
                        cands.append(q)
    # vertex antipodes and edge midpoints
    for k in range(m):
        cands.append(-V[k])
        cands.append(unit_vector(V[k] + V[(k + 1) % m]))

    best_c, best_v = None, -1.0
    for q in cands:
        if not p.contains(q, tol=1e-9):
            continue
        val = min(angular_dist(q, v) for v in V)
        if val > best_v:
            best_c, best_v = q, val
    if best_c is None:
        best_c = centroid
    c = _cap_ascent(p, best_c)
    return min(angular_dist(c, v) for v in V)
