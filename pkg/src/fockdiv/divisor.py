"""Divisor data model and planar disc geometry.

A divisor is a finite weighted point set; each node (center, multiplicity)
carries the disc of radius sqrt(multiplicity / alpha).  The plane is
replaced by a finite window with a boundary collar (all covering-type
conditions in the source problem are "outside a compact", so verdicts are
reported on the window minus the collar).
"""

from __future__ import annotations

import io
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError, ParameterError, PreconditionError

# Chunk size for point-vs-node distance scans (keeps memory bounded).
_CHUNK = 8192


@dataclass(frozen=True)
class Divisor:
    """Weighted point set {(center, multiplicity)} with weight parameter
    alpha; derived disc radii are sqrt(multiplicity / alpha)."""

    centers: np.ndarray
    mults: np.ndarray
    alpha: float = 1.0

    def __post_init__(self):
        centers = np.asarray(self.centers, dtype=complex).ravel()
        mults = np.asarray(self.mults, dtype=np.int64).ravel()
        if centers.size != mults.size:
            raise ParameterError("centers and multiplicities differ in length")
        if np.any(mults < 1):
            raise DomainError("multiplicities must be >= 1")
        if self.alpha <= 0:
            raise DomainError(f"alpha must be positive, got {self.alpha!r}")
        if centers.size != np.unique(centers).size:
            raise ParameterError("centers must be pairwise distinct")
        object.__setattr__(self, "centers", centers)
        object.__setattr__(self, "mults", mults)

    def __len__(self) -> int:
        return self.centers.size

    @property
    def radii(self) -> np.ndarray:
        return np.sqrt(self.mults / self.alpha)

    @property
    def total_multiplicity(self) -> int:
        return int(self.mults.sum())

    def subset(self, mask: np.ndarray) -> "Divisor":
        return Divisor(self.centers[mask], self.mults[mask], self.alpha)

    # -- file format: UTF-8 CSV, header re,im,multiplicity ----------------

    def to_csv(self, path) -> None:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(self.dumps())

    def dumps(self) -> str:
        buf = io.StringIO()
        buf.write("re,im,multiplicity\n")
        for c, m in zip(self.centers, self.mults):
            buf.write(f"{c.real:.17g},{c.imag:.17g},{int(m)}\n")
        return buf.getvalue()

    @classmethod
    def from_csv(cls, path, alpha: float = 1.0) -> "Divisor":
        with open(path, encoding="utf-8") as fh:
            return cls.loads(fh.read(), alpha=alpha, name=str(path))

    @classmethod
    def loads(cls, text: str, alpha: float = 1.0, name: str = "<string>"
              ) -> "Divisor":
        lines = text.splitlines()
        if not lines or lines[0].strip() != "re,im,multiplicity":
            raise ParameterError(
                f"{name}:1: expected header 're,im,multiplicity'")
        centers, mults = [], []
        for i, line in enumerate(lines[1:], start=2):
            if not line.strip():
                continue
            parts = line.split(",")
            if len(parts) != 3:
                raise ParameterError(f"{name}:{i}: expected 3 fields")
            try:
                re, im = float(parts[0]), float(parts[1])
                m = int(parts[2])
            except ValueError as exc:
                raise ParameterError(f"{name}:{i}: {exc}") from None
            centers.append(complex(re, im))
            mults.append(m)
        if not centers:
            raise ParameterError(f"{name}: no nodes")
        return cls(np.array(centers), np.array(mults), alpha)


def lattice(spacing: float, mult: int, extent: float, alpha: float = 1.0,
            hole_radius: float = 0.0) -> Divisor:
    """Square lattice of constant multiplicity within |Re|,|Im| <= extent,
    optionally with the nodes inside a centered hole removed."""
    if spacing <= 0 or extent <= 0:
        raise ParameterError("spacing and extent must be positive")
    n = int(math.floor(extent / spacing))
    coords = spacing * np.arange(-n, n + 1)
    xs, ys = np.meshgrid(coords, coords)
    centers = (xs + 1j * ys).ravel()
    if hole_radius > 0:
        centers = centers[np.abs(centers) >= hole_radius]
    if centers.size == 0:
        raise ParameterError("lattice is empty")
    return Divisor(centers, np.full(centers.size, mult), alpha)


def radial_rings(ring_radii, ring_mults, counts=None, alpha: float = 1.0,
                 include_center: bool = False, center_mult: int = 1) -> Divisor:
    """Nodes equally spaced on concentric rings; by default each ring gets
    enough nodes for adjacent discs to overlap along the ring."""
    centers, mults = [], []
    if include_center:
        centers.append(0.0 + 0.0j)
        mults.append(center_mult)
    for i, (radius, m) in enumerate(zip(ring_radii, ring_mults)):
        r_disc = math.sqrt(m / alpha)
        if counts is None:
            count = max(1, int(math.ceil(math.pi * radius / r_disc)))
        else:
            count = counts[i]
        angles = 2 * np.pi * np.arange(count) / count
        for ang in angles:
            centers.append(radius * complex(math.cos(ang), math.sin(ang)))
        mults.extend([m] * count)
    if not centers:
        raise ParameterError("ring family is empty")
    return Divisor(np.array(centers), np.array(mults), alpha)


@dataclass(frozen=True)
class Region:
    """Finite window: a disc (center 0, given radius) or a rectangle, with
    a scan resolution h."""

    kind: str
    h: float
    radius: float = 0.0
    rect: tuple = ()  # (xmin, xmax, ymin, ymax)

    def __post_init__(self):
        if self.h <= 0:
            raise ParameterError(f"grid resolution must be positive, got {self.h!r}")
        if self.kind == "disc":
            if self.radius <= 0:
                raise ParameterError("disc window needs a positive radius")
        elif self.kind == "rect":
            if len(self.rect) != 4 or self.rect[0] >= self.rect[1] \
                    or self.rect[2] >= self.rect[3]:
                raise ParameterError("rectangle window is empty")
        else:
            raise ParameterError(f"unknown window kind {self.kind!r}")

    @classmethod
    def disc(cls, radius: float, h: float) -> "Region":
        return cls(kind="disc", h=h, radius=radius)

    @classmethod
    def rectangle(cls, xmin, xmax, ymin, ymax, h) -> "Region":
        return cls(kind="rect", h=h, rect=(xmin, xmax, ymin, ymax))

    def grid(self) -> np.ndarray:
        if self.kind == "disc":
            xs = np.arange(-self.radius, self.radius + self.h / 2, self.h)
            gx, gy = np.meshgrid(xs, xs)
            pts = (gx + 1j * gy).ravel()
            return pts[np.abs(pts) <= self.radius]
        xmin, xmax, ymin, ymax = self.rect
        xs = np.arange(xmin, xmax + self.h / 2, self.h)
        ys = np.arange(ymin, ymax + self.h / 2, self.h)
        gx, gy = np.meshgrid(xs, ys)
        return (gx + 1j * gy).ravel()

    def contains(self, pts: np.ndarray) -> np.ndarray:
        pts = np.asarray(pts, dtype=complex)
        if self.kind == "disc":
            return np.abs(pts) <= self.radius
        xmin, xmax, ymin, ymax = self.rect
        return ((pts.real >= xmin) & (pts.real <= xmax)
                & (pts.imag >= ymin) & (pts.imag <= ymax))


def _margin_scan(points: np.ndarray, centers: np.ndarray, radii: np.ndarray
                 ) -> np.ndarray:
    """min over nodes of |z - center| - radius, chunked over points."""
    out = np.empty(points.size)
    for lo in range(0, points.size, _CHUNK):
        block = points[lo:lo + _CHUNK]
        d = np.abs(block[:, None] - centers[None, :]) - radii[None, :]
        out[lo:lo + _CHUNK] = d.min(axis=1)
    return out


def _count_scan(points: np.ndarray, centers: np.ndarray, radii: np.ndarray
                ) -> np.ndarray:
    out = np.empty(points.size, dtype=np.int64)
    for lo in range(0, points.size, _CHUNK):
        block = points[lo:lo + _CHUNK]
        d = np.abs(block[:, None] - centers[None, :]) < radii[None, :]
        out[lo:lo + _CHUNK] = d.sum(axis=1)
    return out


def _circle_intersections(c1, r1, c2, r2):
    """Intersection points of two circles (empty tuple if none)."""
    d = abs(c2 - c1)
    if d == 0 or d > r1 + r2 or d < abs(r1 - r2):
        return ()
    a = (r1 * r1 - r2 * r2 + d * d) / (2 * d)
    h_sq = r1 * r1 - a * a
    if h_sq < 0:
        return ()
    h = math.sqrt(h_sq)
    mid = c1 + a * (c2 - c1) / d
    off = 1j * h * (c2 - c1) / d
    return (mid + off, mid - off)


def overlap_count(divisor: Divisor, z: complex) -> int:
    """Number of node discs containing z (open discs)."""
    return int(_count_scan(np.array([complex(z)]), divisor.centers,
                           divisor.radii)[0])


def overlap_constant(divisor: Divisor, window: Region) -> int:
    """Max covering count over the window grid, enriched with centers and
    pairwise disc intersection points.  A certified lower bound for (and a
    heuristic estimate of) the true overlap constant."""
    pts = window.grid()
    if pts.size == 0:
        raise ParameterError("window grid is empty")
    radii = divisor.radii
    extra = [divisor.centers]
    for i in range(len(divisor)):
        for j in range(i + 1, len(divisor)):
            pts_ij = _circle_intersections(divisor.centers[i], radii[i],
                                           divisor.centers[j], radii[j])
            if pts_ij:
                # Nudge inward so open-disc membership is unambiguous.
                mid = (divisor.centers[i] + divisor.centers[j]) / 2
                extra.append(np.array(
                    [p + 1e-9 * (mid - p) for p in pts_ij]))
    all_pts = np.concatenate([pts] + extra)
    counts = _count_scan(all_pts, divisor.centers, radii)
    return int(counts.max())


def covering_margin(divisor: Divisor, C: float, window: Region,
                    shrink: bool = False) -> tuple[complex, float]:
    """Worst covering margin over the window: max_z min_node
    (|z - center| - rho), with rho = radius + C (expand) or radius - C over
    the nodes with radius > C (shrink).  margin <= 0 means covered."""
    pts = window.grid()
    if pts.size == 0:
        raise ParameterError("window grid is empty")
    radii = divisor.radii
    if shrink:
        eligible = radii > C
        if not eligible.any():
            raise PreconditionError(
                f"shrink by C={C} leaves an empty disc system")
        centers = divisor.centers[eligible]
        rho = radii[eligible] - C
    else:
        centers = divisor.centers
        rho = radii + C
    margins = _margin_scan(pts, centers, rho)
    i = int(np.argmax(margins))
    return complex(pts[i]), float(margins[i])


def disjointness_check(divisor: Divisor, C: float, expand: bool = True
                       ) -> tuple[bool, tuple]:
    """Pairwise disjointness of the discs with radii +- C (tangency counts
    as disjoint).  Returns (ok, (i, j, violation)) for the worst pair."""
    radii = divisor.radii
    if expand:
        centers = divisor.centers
        rho = radii + C
    else:
        eligible = radii > C
        centers = divisor.centers[eligible]
        rho = radii[eligible] - C
    n = centers.size
    worst = (None, None, -math.inf)
    for i in range(n):
        d = np.abs(centers[i + 1:] - centers[i])
        viol = rho[i] + rho[i + 1:] - d
        if viol.size:
            j = int(np.argmax(viol))
            if viol[j] > worst[2]:
                worst = (i, i + 1 + j, float(viol[j]))
    if worst[0] is None:
        return True, (None, None, 0.0)
    return worst[2] <= 1e-12, worst


def _lens_area(d: float, r1: float, r2: float) -> float:
    """Area of the intersection of two discs at center distance d."""
    if d >= r1 + r2:
        return 0.0
    if d <= abs(r1 - r2):
        return math.pi * min(r1, r2) ** 2
    a1 = math.acos((d * d + r1 * r1 - r2 * r2) / (2 * d * r1))
    a2 = math.acos((d * d + r2 * r2 - r1 * r1) / (2 * d * r2))
    return (r1 * r1 * (a1 - math.sin(2 * a1) / 2)
            + r2 * r2 * (a2 - math.sin(2 * a2) / 2))


def _lens_area_grid(c1, r1, c2, r2, n: int = 400) -> float:
    """Grid count of the intersection area (used as the module's own
    computation; the closed form above serves as oracle in tests)."""
    rmin = min(r1, r2)
    h = max(rmin / n, 1e-9)
    xmin = max(c1.real - r1, c2.real - r2)
    xmax = min(c1.real + r1, c2.real + r2)
    ymin = max(c1.imag - r1, c2.imag - r2)
    ymax = min(c1.imag + r1, c2.imag + r2)
    if xmin >= xmax or ymin >= ymax:
        return 0.0
    xs = np.arange(xmin + h / 2, xmax, h)
    ys = np.arange(ymin + h / 2, ymax, h)
    gx, gy = np.meshgrid(xs, ys)
    pts = gx + 1j * gy
    inside = (np.abs(pts - c1) < r1) & (np.abs(pts - c2) < r2)
    return float(inside.sum()) * h * h


def _common_point(discs) -> complex | None:
    """A point of the triple intersection, or None."""
    from scipy.optimize import minimize

    centers = np.array([complex(c) for c, _ in discs])
    radii = np.array([r for _, r in discs])

    def depth(xy):
        z = complex(xy[0], xy[1])
        return float(np.max(np.abs(z - centers) - radii))

    start = centers.mean()
    best = minimize(depth, [start.real, start.imag], method="Nelder-Mead",
                    options={"xatol": 1e-10, "fatol": 1e-12, "maxiter": 2000})
    if best.fun < -1e-12:
        return complex(best.x[0], best.x[1])
    # Enrich with pairwise circle intersections before giving up.
    for i in range(3):
        for j in range(i + 1, 3):
            for p in _circle_intersections(centers[i], radii[i],
                                           centers[j], radii[j]):
                if depth([p.real, p.imag]) < 1e-12:
                    return p
    if best.fun <= 1e-12:
        return complex(best.x[0], best.x[1])
    return None


def triple_disc_witness(d1, d2, d3) -> tuple[tuple[int, int], float, float]:
    """For three discs (center, radius) with nonempty common intersection,
    return the pair (i, j) maximizing the normalized overlap slack
    (r_i + r_j - |Z_i - Z_j|) / min(r_i, r_j), together with that slack and
    the intersection area of the pair divided by min(r_i, r_j)^2.

    Both returned quantities are bounded below by a positive constant
    uniformly over intersecting triples (estimated by the property suite)."""
    discs = [(complex(c), float(r)) for c, r in (d1, d2, d3)]
    for _, r in discs:
        if r <= 0:
            raise DomainError("disc radii must be positive")
    if _common_point(discs) is None:
        raise PreconditionError("the three discs have empty common intersection")
    best = None
    for i in range(3):
        for j in range(i + 1, 3):
            (ci, ri), (cj, rj) = discs[i], discs[j]
            slack = (ri + rj - abs(ci - cj)) / min(ri, rj)
            if best is None or slack > best[1]:
                best = ((i, j), slack)
    (i, j), slack = best
    (ci, ri), (cj, rj) = discs[i], discs[j]
    area_ratio = _lens_area_grid(ci, ri, cj, rj) / min(ri, rj) ** 2
    return (i, j), slack, area_ratio


def _uncovered_radius(divisor: Divisor, C: float, window: Region,
                      collar: float) -> float | None:
    """Smallest R such that the shrunk discs cover the window (minus the
    boundary collar) outside the centered disc of radius R.  None when no
    disc survives the shrink or nothing is covered."""
    radii = divisor.radii
    eligible = radii > C
    if not eligible.any():
        return None
    pts = window.grid()
    if window.kind == "disc":
        pts = pts[np.abs(pts) <= window.radius - collar]
    else:
        xmin, xmax, ymin, ymax = window.rect
        pts = pts[(pts.real >= xmin + collar) & (pts.real <= xmax - collar)
                  & (pts.imag >= ymin + collar) & (pts.imag <= ymax - collar)]
    if pts.size == 0:
        return None
    margins = _margin_scan(pts, divisor.centers[eligible],
                           radii[eligible] - C)
    uncovered = pts[margins > 0]
    if uncovered.size == 0:
        return 0.0
    r = float(np.abs(uncovered).max())
    if window.kind == "disc" and r >= window.radius - collar - window.h:
        return None  # uncovered all the way to the window edge
    return r


def thin_subdivisor(divisor: Divisor, window: Region, c_list) -> Divisor:
    """Iterative thinning: for step s = 1, 2, ... remove the far nodes of
    low multiplicity {|center| > R_s + s, (s-1)^2 <= mult < s^2}, where R_s
    is the radius outside of which the discs shrunk by s still cover the
    window.  The result keeps the covering property for every shrink in
    c_list while its far nodes have growing multiplicity."""
    c_list = sorted(float(c) for c in c_list)
    if not c_list or any(c2 <= c1 for c1, c2 in zip(c_list, c_list[1:])):
        raise ParameterError("c_list must be strictly increasing and nonempty")
    collar = float(divisor.radii.max()) if len(divisor) else 0.0
    for C in c_list:
        r = _uncovered_radius(divisor, C, window, collar)
        if r is None:
            raise PreconditionError(
                f"shrink-covering hypothesis fails for C={C}")
    keep = np.ones(len(divisor), dtype=bool)
    s_max = int(math.ceil(math.sqrt(float(divisor.mults.max()))))
    for s in range(1, s_max + 1):
        r_s = _uncovered_radius(divisor, float(s), window, collar)
        if r_s is None:
            continue  # no eligible discs at this shrink inside the window
        mask = ((np.abs(divisor.centers) > r_s + s)
                & (divisor.mults >= (s - 1) ** 2)
                & (divisor.mults < s * s))
        keep &= ~mask
    thinned = divisor.subset(keep)
    for C in c_list:
        if _uncovered_radius(thinned, C, window, collar) is None:
            raise PreconditionError(
                f"thinning broke the covering for C={C} (resolution too "
                "coarse or window too small)")
    return thinned
