"""Four-bar linkage view of the ternary-mix parameter space.

Fixing the three mixing weights makes the feasible q-triples a planar
linkage: three mobile bars of lengths sqrt(p_i) closing against a fixed
bar of length 1 (the sum-one gauge).  This module classifies the
configuration space (one closed orbit or two), solves configurations at
a given crank angle by circle intersection, traces whole orbits, and
counts components by an independent grid method for cross-checking.
"""

from __future__ import annotations

import csv
import os
from dataclasses import dataclass

import numpy as np

__all__ = [
    "LinkageSpec",
    "LinkageConfig",
    "b0",
    "grashof",
    "orbit_count",
    "solve_configs",
    "orbit_trace",
    "orbit_count_bruteforce",
    "write_orbit_csv",
    "config_deltas",
]

_SUM_TOL = 1e-10
_TANGENT_TOL = 1e-9
_ZERO_RADIUS = 1e-12


@dataclass(frozen=True)
class LinkageSpec:
    """Sorted bar lengths a <= b <= c with a^2 + b^2 + c^2 = 1; ground bar 1."""

    a: float
    b: float
    c: float

    def __post_init__(self):
        if not 0 <= self.a <= self.b <= self.c <= 1:
            raise ValueError("lengths must satisfy 0 <= a <= b <= c <= 1")
        norm = self.a**2 + self.b**2 + self.c**2
        if abs(norm - 1) > _SUM_TOL:
            raise ValueError(f"squared lengths sum to {norm:.12g}, not 1")

    @classmethod
    def from_weights(cls, p) -> tuple["LinkageSpec", tuple[float, float, float]]:
        """Spec for mixing weights p, plus the slot assignment (sqrt(p) in user order)."""
        p = np.asarray(p, dtype=float)
        if p.shape != (3,) or (p < -1e-15).any() or abs(p.sum() - 1) > _SUM_TOL:
            raise ValueError("weights must be a probability triple")
        r = np.sqrt(np.maximum(p, 0.0))
        sa, sb, sc = np.sort(r)
        return cls(float(sa), float(sb), float(sc)), tuple(float(v) for v in r)

    def lengths(self) -> tuple[float, float, float]:
        return (self.a, self.b, self.c)


@dataclass(frozen=True)
class LinkageConfig:
    """One closed configuration: bar vectors summing to the ground bar."""

    q1: complex
    q2: complex
    q3: complex

    def __post_init__(self):
        total = self.q1 + self.q2 + self.q3
        if abs(total - 1) > 1e-8:
            raise ValueError(f"bars do not close: sum = {total}")

    def as_array(self) -> np.ndarray:
        return np.array([self.q1, self.q2, self.q3], dtype=complex)

    def conjugate(self) -> "LinkageConfig":
        return LinkageConfig(np.conj(self.q1), np.conj(self.q2), np.conj(self.q3))


def b0(c: float) -> float:
    """Critical middle length: two orbits exist exactly when b exceeds this."""
    return 0.5 * (1.0 - c + np.sqrt(1.0 + (2.0 - 3.0 * c) * c))


def grashof(a: float, b: float, c: float, d: float) -> bool:
    """Shortest-plus-longest strictly less than the sum of the other two.

    Lengths must be given sorted ascending (d largest).  True means the
    shortest bar can fully rotate and the configuration space splits in
    two; the equality case counts as False (the components touch).
    """
    if not a <= b <= c <= d:
        raise ValueError("lengths must be sorted ascending")
    return a + d < b + c


def orbit_count(spec: LinkageSpec) -> int:
    """1 or 2 connected components of the configuration space."""
    return 2 if spec.b > b0(spec.c) else 1


def _check_assignment(spec: LinkageSpec, assignment) -> tuple[float, float, float]:
    if assignment is None:
        return spec.lengths()
    r = tuple(float(v) for v in assignment)
    if len(r) != 3 or any(abs(x - y) > 1e-12 for x, y in zip(sorted(r), spec.lengths())):
        raise ValueError("assignment must be a permutation of the spec lengths")
    return r


def solve_configs(spec: LinkageSpec, assignment=None, theta: float = 0.0,
                  tol: float = _TANGENT_TOL) -> list[LinkageConfig]:
    """All configurations with bar 1 at angle theta: 0, 1 (tangent), or 2.

    ``assignment`` gives the bar lengths in slot order (defaults to the
    sorted spec order).  Bars 2 and 3 close the chain q2 + q3 = 1 - q1,
    solved as the intersection of two circles; the two generic solutions
    are mirror images about that chord.
    """
    r1, r2, r3 = _check_assignment(spec, assignment)
    q1 = r1 * np.exp(1j * theta)
    w = 1.0 - q1
    D = abs(w)
    if D < _ZERO_RADIUS:
        if r2 < tol and r3 < tol:
            return [LinkageConfig(q1, 0j, 0j)]
        return []
    outer_gap = (r2 + r3) - D        # < 0: bars cannot reach
    inner_gap = D - abs(r2 - r3)     # < 0: one bar swallows the chord
    if outer_gap < -tol or inner_gap < -tol:
        return []
    u = w / D
    x = (D * D + r2 * r2 - r3 * r3) / (2.0 * D)
    if outer_gap < tol or inner_gap < tol:
        q2 = x * u
        return [LinkageConfig(q1, q2, w - q2)]
    h = np.sqrt(max(r2 * r2 - x * x, 0.0))
    out = []
    for branch in (+1, -1):
        q2 = (x + 1j * branch * h) * u
        out.append(LinkageConfig(q1, q2, w - q2))
    return out


def _config_at(r1: float, r2: float, r3: float, theta: float, branch: int) -> LinkageConfig:
    """Configuration on a fixed intersection branch (clamps h^2 rounding at tangency)."""
    q1 = r1 * np.exp(1j * theta)
    w = 1.0 - q1
    D = abs(w)
    x = (D * D + r2 * r2 - r3 * r3) / (2.0 * D)
    h = np.sqrt(max(r2 * r2 - x * x, 0.0))
    q2 = (x + 1j * branch * h) * (w / D)
    return LinkageConfig(q1, q2, w - q2)


def config_deltas(cfg: LinkageConfig) -> tuple[float, float, float]:
    """Phase differences (d12, d23, d31) of a configuration; NaN on zero bars."""
    q = cfg.as_array()
    if np.abs(q).min() < _ZERO_RADIUS:
        return (float("nan"),) * 3
    ph = np.angle(q)
    wrap = lambda x: float((x + np.pi) % (2 * np.pi) - np.pi)
    return (wrap(ph[0] - ph[1]), wrap(ph[1] - ph[2]), wrap(ph[2] - ph[0]))


def _degenerate_orbits(r1, r2, r3) -> list[list[LinkageConfig]]:
    """Point orbits when some bar has zero length."""
    zero = [r < _ZERO_RADIUS for r in (r1, r2, r3)]
    if sum(zero) >= 2:
        # two zero bars force the third to span the ground bar exactly
        q = [0j, 0j, 0j]
        q[zero.index(False)] = 1.0 + 0j if not all(zero) else 0j
        return [[LinkageConfig(*q)]]
    if zero[0]:
        spec = LinkageSpec(*np.sort([r1, r2, r3]))
        return [[c] for c in solve_configs(spec, (r1, r2, r3), 0.0)]
    # zero bar in slot 2 or 3: the remaining pair meets at discrete crank angles
    other = r3 if zero[1] else r2
    t = (1.0 + r1 * r1 - other * other) / (2.0 * r1)
    if abs(t) > 1.0 + 1e-12:
        return []
    orbits = []
    angles = [np.arccos(np.clip(t, -1.0, 1.0))]
    if angles[0] > 1e-12:
        angles.append(-angles[0])
    for th in angles:
        q1 = r1 * np.exp(1j * th)
        rest = 1.0 - q1
        cfg = LinkageConfig(q1, 0j, rest) if zero[1] else LinkageConfig(q1, rest, 0j)
        orbits.append([cfg])
    return orbits


def _bar_angle_gap(c1: LinkageConfig, c2: LinkageConfig) -> float:
    a1, a2 = np.angle(c1.as_array()), np.angle(c2.as_array())
    diff = np.abs((a1 - a2 + np.pi) % (2 * np.pi) - np.pi)
    return float(diff.max())


def orbit_trace(spec: LinkageSpec, steps: int, assignment=None) -> list[list[LinkageConfig]]:
    """Ordered configurations around each connected component.

    Walks the crank angle over its feasible range and stitches the two
    intersection branches into closed loops (they meet where the moving
    circles are tangent).  Adjacent configurations — including the
    wraparound pair — differ by less than 2*pi*3/steps in every bar
    angle; extra points are inserted by bisection where a uniform grid
    is too coarse, and wherever cos(delta_ij) crosses zero so that the
    nested configurations appear in the trace.
    """
    if steps < 12:
        raise ValueError("steps must be >= 12")
    r1, r2, r3 = _check_assignment(spec, assignment)
    if min(r1, r2, r3) < _ZERO_RADIUS:
        return _degenerate_orbits(r1, r2, r3)

    lo = (1.0 + r1 * r1 - (r2 + r3) ** 2) / (2.0 * r1)
    hi = (1.0 + r1 * r1 - (r2 - r3) ** 2) / (2.0 * r1)
    teps = _TANGENT_TOL
    upper_free = hi >= 1.0 + teps
    upper_tangent = abs(hi - 1.0) < teps
    lower_free = lo <= -1.0 - teps
    lower_tangent = abs(lo + 1.0) < teps
    alpha = 0.0 if hi >= 1.0 else float(np.arccos(hi))
    beta = np.pi if lo <= -1.0 else float(np.arccos(lo))

    # each loop is a list of (theta, branch); tangency points carry h = 0
    if upper_free and lower_free:
        grid = np.linspace(0.0, 2.0 * np.pi, max(steps, 12), endpoint=False)
        loops = [[(float(t), +1) for t in grid], [(float(t), -1) for t in grid]]
        wraps = [True, True]
    elif not (upper_free or upper_tangent) and not (lower_free or lower_tangent):
        half = max(steps // 2, 6)
        arc = np.linspace(alpha, beta, half)
        loops = []
        for mirror in (+1, -1):
            fwd = [(float(mirror * t), +1) for t in arc]
            bwd = [(float(mirror * t), -1) for t in arc[-2:0:-1]]
            loops.append(fwd + bwd)
        wraps = [True, True]
    else:
        # single loop: one side of the circle is passable, the other binds
        if lower_free or lower_tangent:
            t0, t1 = alpha, 2.0 * np.pi - alpha
        else:
            t0, t1 = -beta, beta
        half = max(steps // 2, 6)
        arc = np.linspace(t0, t1, half)
        fwd = [(float(t), +1) for t in arc]
        bwd = [(float(t), -1) for t in arc[-2:0:-1]]
        loops = [fwd + bwd]
        wraps = [True]

    def build(pt):
        return _config_at(r1, r2, r3, pt[0], pt[1])

    def edge_branch(a, b):
        """Branch the loop follows between two adjacent points.

        At a branch switch the two intersection circles are tangent at one
        endpoint, where both branches give the same configuration, so the
        in-between arc lies on the other endpoint's branch.
        """
        if a[1] == b[1]:
            return a[1]
        a_tangent = _bar_angle_gap(build((a[0], +1)), build((a[0], -1))) < 1e-7
        return b[1] if a_tangent else a[1]

    max_gap = 2.0 * np.pi * 3.0 / steps
    out: list[list[LinkageConfig]] = []
    for pts, wrap in zip(loops, wraps):
        # refine until every adjacent pair respects the bar-angle bound
        for _ in range(40):
            refined: list[tuple[float, int]] = []
            grew = False
            m = len(pts)
            for i in range(m):
                nxt = pts[(i + 1) % m]
                refined.append(pts[i])
                if not wrap and i == m - 1:
                    break
                if _bar_angle_gap(build(pts[i]), build(nxt)) >= max_gap:
                    refined.append(((pts[i][0] + nxt[0]) / 2.0,
                                    edge_branch(pts[i], nxt)))
                    grew = True
            pts = refined
            if not grew:
                break
        # insert zero crossings of each cos(delta_ij) so nesting shows up exactly
        cos_at = {}

        def cosines(pt):
            if pt not in cos_at:
                cos_at[pt] = np.cos(config_deltas(build(pt)))
            return cos_at[pt]

        augmented: list[tuple[float, int]] = []
        m = len(pts)
        for i in range(m):
            nxt = pts[(i + 1) % m]
            augmented.append(pts[i])
            if not wrap and i == m - 1:
                continue
            br = edge_branch(pts[i], nxt)
            ca, cb = cosines(pts[i]), cosines(nxt)
            crossings = []
            for k in range(3):
                if ca[k] * cb[k] < 0:
                    a_t, b_t, f_a = pts[i][0], nxt[0], ca[k]
                    for _ in range(60):
                        mid = 0.5 * (a_t + b_t)
                        f_m = np.cos(config_deltas(
                            _config_at(r1, r2, r3, mid, br)))[k]
                        if f_a * f_m <= 0:
                            b_t = mid
                        else:
                            a_t, f_a = mid, f_m
                    crossings.append(0.5 * (a_t + b_t))
            direction = 1.0 if nxt[0] >= pts[i][0] else -1.0
            for t in sorted(crossings, key=lambda v: direction * v):
                augmented.append((float(t), br))
        out.append([build(pt) for pt in augmented])
    return out


def orbit_count_bruteforce(spec: LinkageSpec, resolution: int = 400) -> int:
    """Count components by flood-filling sign-change cells on the angle torus.

    The closure defect g(t1, t2) = |1 - a e^{i t1} - b e^{i t2}|^2 - c^2
    vanishes exactly on the configuration set; cells of a resolution^2
    grid whose corners straddle zero (or sit on it) are glued by
    8-neighbor adjacency with wraparound and counted.  Independent of
    the analytic classification.
    """
    if resolution < 360:
        raise ValueError("resolution must be >= 360")
    a, b, c = spec.lengths()
    t = np.linspace(0.0, 2.0 * np.pi, resolution, endpoint=False)
    w = 1.0 - a * np.exp(1j * t)[:, None] - b * np.exp(1j * t)[None, :]
    g = np.abs(w) ** 2 - c * c
    corners = np.stack([g,
                        np.roll(g, -1, axis=0),
                        np.roll(g, -1, axis=1),
                        np.roll(np.roll(g, -1, axis=0), -1, axis=1)])
    cell = (corners.min(axis=0) < 0) & (corners.max(axis=0) > 0)
    cell |= np.abs(corners).min(axis=0) < 1e-12
    idx = np.flatnonzero(cell.ravel())
    if idx.size == 0:
        return 0
    pos = {int(v): i for i, v in enumerate(idx)}
    parent = list(range(idx.size))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    n = resolution
    ii, jj = np.unravel_index(idx, (n, n))
    for k, (i, j) in enumerate(zip(ii.tolist(), jj.tolist())):
        for di in (-1, 0, 1):
            for dj in (-1, 0, 1):
                if di == 0 and dj == 0:
                    continue
                neighbor = pos.get(((i + di) % n) * n + ((j + dj) % n))
                if neighbor is not None:
                    ra, rb = find(k), find(neighbor)
                    if ra != rb:
                        parent[ra] = rb
    return len({find(k) for k in range(idx.size)})


def write_orbit_csv(orbits: list[list[LinkageConfig]], out, extra=None,
                    nested_tol: float = 1e-9) -> None:
    """CSV rows per traced configuration.

    Columns: step, orbit, Re/Im of each bar, the three deltas, and a
    nested flag (1 when some |cos delta_ij| < nested_tol).  ``extra``
    may map a config to additional columns.  ``out`` is a path or a
    file-like object.
    """
    fh = open(out, "w", newline="") if isinstance(out, (str, bytes, os.PathLike)) else out
    try:
        header = ["step", "orbit", "re_q1", "im_q1", "re_q2", "im_q2",
                  "re_q3", "im_q3", "delta12", "delta23", "delta31", "nested"]
        extra_keys: list[str] = []
        if extra is not None and orbits and orbits[0]:
            extra_keys = list(extra(orbits[0][0]).keys())
        writer = csv.writer(fh)
        writer.writerow(header + extra_keys)
        for orbit_id, orbit in enumerate(orbits):
            for step, cfg in enumerate(orbit):
                d12, d23, d31 = config_deltas(cfg)
                if np.isnan(d12):
                    nested = 0
                else:
                    nested = int(min(abs(np.cos(d12)), abs(np.cos(d23)),
                                     abs(np.cos(d31))) < nested_tol)
                row = [step, orbit_id,
                       cfg.q1.real, cfg.q1.imag, cfg.q2.real, cfg.q2.imag,
                       cfg.q3.real, cfg.q3.imag, d12, d23, d31, nested]
                if extra is not None:
                    vals = extra(cfg)
                    row += [vals[k] for k in extra_keys]
                writer.writerow([_fmt(v) for v in row])
    finally:
        if fh is not out:
            fh.close()


def _fmt(v) -> str:
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    return format(float(v), ".17g")
