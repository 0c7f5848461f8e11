"""
Kresling Geometry - closed-form segment geometry and fold kinematics

Handles:
- Classical and thickness-generalized segment parameters (s, b, d, theta)
- Fold kinematics h(alpha), b(alpha) between the two stable states
- Equivalent strain and normalized bistability energy
- Watertight triangle mesh of the folded/deployed body
- Enclosed volume by the divergence theorem, OBJ export

Angles are radians internally; lengths are millimeters.

Version: 1.0.0
"""

import math
import logging
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

import numpy as np

from core.exceptions import (
    ExportError,
    FoldRangeError,
    GeometryError,
    MonostableError,
    TopologyError,
)

logger = logging.getLogger(__name__)

# Relative slack when checking a fold angle against its stable stops
ALPHA_RANGE_RTOL = 1e-9


# =================== DOMAIN TYPES ===================

@dataclass(frozen=True)
class KreslingParams:
    """
    Independent parameters of a Kresling cylinder.

    n: polygon side count, m: segment count, lam: angle ratio (0, 1],
    R: outer radius (mm), h0: minimum bent segment height (mm).
    """
    n: int
    m: int
    lam: float
    R: float
    h0: float

    def __post_init__(self):
        if int(self.n) != self.n or self.n < 3:
            raise GeometryError(f"n must be an integer >= 3 (got {self.n})")
        if int(self.m) != self.m or self.m < 1:
            raise GeometryError(f"m must be an integer >= 1 (got {self.m})")
        if not (0.0 < self.lam <= 1.0):
            raise GeometryError(f"lambda must be in (0, 1] (got {self.lam})")
        if not (self.R > 0.0) or not math.isfinite(self.R):
            raise GeometryError(f"R must be a positive finite length (got {self.R})")
        if not (self.h0 >= 0.0) or not math.isfinite(self.h0):
            raise GeometryError(f"h0 must be a non-negative finite length (got {self.h0})")

    @property
    def bistable(self) -> bool:
        return self.lam > 0.5

    @classmethod
    def from_envelope(cls, n: int, m: int, lam: float, D: float, H0: float) -> "KreslingParams":
        """Build params from the cave envelope: R = D/2, h0 = H0/m."""
        if m < 1:
            raise GeometryError(f"m must be >= 1 (got {m})")
        return cls(n=n, m=m, lam=lam, R=D / 2.0, h0=H0 / m)


@dataclass(frozen=True)
class KreslingSegmentGeometry:
    """Derived quantities of one segment; none of them vary with the fold angle."""
    phi: float
    gamma: float
    s: float
    b_c: float
    d_c: float
    b_g: float
    d_g: float
    theta_g: float
    alpha_folded: float
    alpha_deployed: float
    untwisted: bool = False

    @property
    def alpha_min(self) -> float:
        return min(self.alpha_folded, self.alpha_deployed)

    @property
    def alpha_max(self) -> float:
        return max(self.alpha_folded, self.alpha_deployed)


@dataclass(frozen=True)
class FoldState:
    """Kinematic state of a segment at fold angle alpha."""
    alpha: float
    h: float
    b: float
    strain: float
    normalized_energy: float


@dataclass(frozen=True)
class TriangulatedClosedSurface:
    """Triangle mesh: float (V, 3) vertices and int (F, 3) faces, outward winding."""
    vertices: np.ndarray
    faces: np.ndarray

    @property
    def vertex_count(self) -> int:
        return int(self.vertices.shape[0])

    @property
    def face_count(self) -> int:
        return int(self.faces.shape[0])

    def undirected_edges(self) -> np.ndarray:
        """Unique undirected edges as sorted (i, j) pairs."""
        e = np.concatenate([self.faces[:, [0, 1]], self.faces[:, [1, 2]], self.faces[:, [2, 0]]])
        return np.unique(np.sort(e, axis=1), axis=0)

    def euler_characteristic(self) -> int:
        return self.vertex_count - len(self.undirected_edges()) + self.face_count

    def is_watertight(self) -> bool:
        """Every edge shared by exactly two faces with opposite directions."""
        if self.face_count == 0:
            return False
        directed = np.concatenate([self.faces[:, [0, 1]], self.faces[:, [1, 2]], self.faces[:, [2, 0]]])
        uniq_directed = np.unique(directed, axis=0)
        if len(uniq_directed) != len(directed):
            return False  # same directed edge twice: inconsistent orientation
        undirected, counts = np.unique(np.sort(directed, axis=1), axis=0, return_counts=True)
        return bool(np.all(counts == 2))


# =================== SEGMENT GEOMETRY ===================

def derive_segment(params: KreslingParams, require_bistable: bool = True) -> KreslingSegmentGeometry:
    """
    Closed-form geometry of one Kresling segment.

    Raises:
        MonostableError: lambda <= 0.5 and require_bistable is set
        GeometryError: n < 3 or a non-positive derived length
    """
    if params.n < 3:
        raise GeometryError(f"n must be >= 3 (got {params.n})")
    if require_bistable and not params.bistable:
        raise MonostableError(
            f"monostable configuration: lambda={params.lam} must be > 0.5 for a bistable segment"
        )

    n, R, lam, h0 = params.n, params.R, params.lam, params.h0
    phi = math.pi / n
    gamma = math.pi / 2.0 - phi
    s = 2.0 * R * math.sin(phi)
    d_c = 2.0 * R * math.cos(gamma - lam * gamma)
    b_c = math.sqrt(max(s * s + d_c * d_c - 2.0 * s * d_c * math.cos(lam * gamma), 0.0))
    b_g = math.sqrt(b_c * b_c + h0 * h0)
    d_g = math.sqrt(d_c * d_c + h0 * h0)

    for name, value in (("s", s), ("b_c", b_c), ("d_c", d_c), ("b_g", b_g), ("d_g", d_g)):
        if not value > 0.0:
            raise GeometryError(f"derived length {name} is not positive ({value})")

    cos_theta = (s * s + d_g * d_g - b_g * b_g) / (2.0 * s * d_g)
    theta_g = math.acos(float(np.clip(cos_theta, -1.0, 1.0)))

    untwisted = lam >= 1.0
    if untwisted:
        logger.warning(f"⚠️  lambda=1 gives an untwisted extrusion (n={n}); accepted as degenerate")

    return KreslingSegmentGeometry(
        phi=phi,
        gamma=gamma,
        s=s,
        b_c=b_c,
        d_c=d_c,
        b_g=b_g,
        d_g=d_g,
        theta_g=theta_g,
        alpha_folded=2.0 * lam * gamma,
        alpha_deployed=2.0 * (1.0 - lam) * gamma,
        untwisted=untwisted,
    )


# =================== FOLD KINEMATICS ===================

def _check_alpha(geom: KreslingSegmentGeometry, alpha: float) -> float:
    if not math.isfinite(alpha):
        raise FoldRangeError(f"fold angle must be finite (got {alpha})")
    slack = ALPHA_RANGE_RTOL * max(1.0, geom.alpha_max)
    if alpha < geom.alpha_min - slack or alpha > geom.alpha_max + slack:
        raise FoldRangeError(
            f"fold angle {math.degrees(alpha):.4f} deg outside "
            f"[{math.degrees(geom.alpha_min):.4f}, {math.degrees(geom.alpha_max):.4f}] deg"
        )
    return min(max(alpha, geom.alpha_min), geom.alpha_max)


def segment_height(geom: KreslingSegmentGeometry, params: KreslingParams, alpha: float) -> float:
    """h(alpha), with alpha_folded as the reference angle where h = h0."""
    alpha = _check_alpha(geom, alpha)
    R, phi = params.R, geom.phi
    radicand = params.h0 ** 2 + 2.0 * R * R * (
        math.cos(alpha + 2.0 * phi) - math.cos(geom.alpha_folded + 2.0 * phi)
    )
    if radicand < 0.0:
        if radicand > -1e-9 * R * R:
            radicand = 0.0
        else:
            raise FoldRangeError(f"height radicand negative at alpha={alpha:.6f} rad")
    return math.sqrt(radicand)


def fold_state(geom: KreslingSegmentGeometry, params: KreslingParams, alpha: float) -> FoldState:
    """
    Segment height, side length, strain and normalized energy at alpha.

    Raises:
        FoldRangeError: alpha outside the stable-state interval
    """
    alpha = _check_alpha(geom, alpha)
    h = segment_height(geom, params, alpha)
    b = math.sqrt(2.0 * params.R ** 2 * (1.0 - math.cos(alpha)) + h * h)
    strain = b / geom.b_g - 1.0
    return FoldState(alpha=alpha, h=h, b=b, strain=strain, normalized_energy=0.5 * strain * strain)


def fold_curve(params: KreslingParams, samples: int = 181) -> List[FoldState]:
    """Fold states on an evenly spaced alpha grid from deployed to folded."""
    if samples < 2:
        raise GeometryError(f"fold curve needs at least 2 samples (got {samples})")
    geom = derive_segment(params)
    alphas = np.linspace(geom.alpha_deployed, geom.alpha_folded, samples)
    return [fold_state(geom, params, float(a)) for a in alphas]


# =================== MESH ===================

def build_mesh(params: KreslingParams, alpha: Optional[float] = None) -> TriangulatedClosedSurface:
    """
    Closed triangle mesh of the m-segment body at fold angle alpha.

    Rings are rotated by the fold angle on odd rings only (alternate
    segments mirrored), so each pair of segments translates without twist.
    Defaults to the deployed state.
    """
    geom = derive_segment(params, require_bistable=False)
    if alpha is None:
        alpha = geom.alpha_deployed
    h = fold_state(geom, params, alpha).h
    n, m, R = params.n, params.m, params.R

    vertices = np.zeros((n * (m + 1) + 2, 3))
    base_angles = 2.0 * geom.phi * np.arange(n)
    for k in range(m + 1):
        offset = alpha if k % 2 == 1 else 0.0
        theta = base_angles + offset
        ring = slice(k * n, (k + 1) * n)
        vertices[ring, 0] = R * np.cos(theta)
        vertices[ring, 1] = R * np.sin(theta)
        vertices[ring, 2] = k * h
    bottom_center = n * (m + 1)
    top_center = bottom_center + 1
    vertices[top_center, 2] = m * h

    faces: List[Tuple[int, int, int]] = []
    for i in range(n):
        j = (i + 1) % n
        faces.append((bottom_center, j, i))
    for k in range(m):
        lo, up = k * n, (k + 1) * n
        for i in range(n):
            j = (i + 1) % n
            if k % 2 == 0:
                faces.append((lo + i, lo + j, up + j))
                faces.append((lo + i, up + j, up + i))
            else:
                faces.append((lo + i, lo + j, up + i))
                faces.append((lo + j, up + j, up + i))
    top = m * n
    for i in range(n):
        j = (i + 1) % n
        faces.append((top_center, top + i, top + j))

    return TriangulatedClosedSurface(vertices=vertices, faces=np.asarray(faces, dtype=np.int64))


def enclosed_volume(mesh: TriangulatedClosedSurface, unit_to_m: float = 1e-3) -> float:
    """
    Signed enclosed volume in m^3 (positive for outward winding).

    unit_to_m converts mesh units to meters (mm meshes by default).

    Raises:
        TopologyError: mesh is not closed and consistently oriented
    """
    if not mesh.is_watertight():
        raise TopologyError("mesh is not watertight or not consistently oriented")
    v = mesh.vertices
    f = mesh.faces
    p0, p1, p2 = v[f[:, 0]], v[f[:, 1]], v[f[:, 2]]
    signed = np.einsum('ij,ij->i', p0, np.cross(p1, p2)).sum() / 6.0
    return float(signed) * unit_to_m ** 3


def volume_expansion_ratio(params: KreslingParams) -> Tuple[float, float, float]:
    """Deployed volume, folded volume (m^3) and their ratio."""
    geom = derive_segment(params)
    deployed = enclosed_volume(build_mesh(params, geom.alpha_deployed))
    folded = enclosed_volume(build_mesh(params, geom.alpha_folded))
    if folded <= 0.0:
        raise GeometryError("folded volume is zero; expansion ratio undefined (h0 = 0?)")
    return deployed, folded, deployed / folded


# =================== EXPORT ===================

def write_obj(mesh: TriangulatedClosedSurface, path: str, header_lines: Sequence[str] = ()) -> None:
    """Write the mesh as Wavefront OBJ (millimeter units, 1-based faces)."""
    lines = [f"# {h}" for h in header_lines]
    lines.extend(f"v {x:.6f} {y:.6f} {z:.6f}" for x, y, z in mesh.vertices)
    lines.extend(f"f {a + 1} {b + 1} {c + 1}" for a, b, c in mesh.faces)
    try:
        with open(path, 'w', encoding='utf-8', newline='\n') as fh:
            fh.write("\n".join(lines) + "\n")
    except OSError as e:
        raise ExportError(f"cannot write OBJ to {path}: {e}") from e
    logger.info(f"🧊 OBJ written: {path} ({mesh.vertex_count} vertices, {mesh.face_count} faces)")
