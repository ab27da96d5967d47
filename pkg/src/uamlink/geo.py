"""Spherical-Earth geometry: geodetic/ECEF frames, distances, elevation angles
and great-circle interpolation.

Angles are degrees at the API surface, lengths are meters. The Earth is a
sphere of radius ``EARTH_RADIUS_M``; that keeps every operation closed-form,
which is all the fidelity the link-budget models downstream can resolve.
The ``_*`` kernels accept scalars or numpy arrays and are shared by the
batched simulation loop.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

EARTH_RADIUS_M = 6_371_000.0


@dataclass(frozen=True)
class GeodeticPosition:
    """Latitude/longitude in degrees, altitude in meters above the sphere."""

    latitude: float
    longitude: float
    altitude: float = 0.0

    def __post_init__(self):
        if not -90.0 <= self.latitude <= 90.0:
            raise ValueError(f"latitude {self.latitude} outside [-90, 90]")
        if not -180.0 < self.longitude <= 180.0:
            raise ValueError(f"longitude {self.longitude} outside (-180, 180]")
        if self.altitude < -1000.0:
            raise ValueError(f"altitude {self.altitude} m below the -1000 m sanity bound")


@dataclass(frozen=True)
class EcefPosition:
    """Earth-centered, Earth-fixed Cartesian position in meters."""

    x: float
    y: float
    z: float

    def __post_init__(self):
        if not (math.isfinite(self.x) and math.isfinite(self.y) and math.isfinite(self.z)):
            raise ValueError("ECEF components must be finite")


def _lla_to_ecef(lat_deg, lon_deg, alt_m):
    lat = np.radians(lat_deg)
    lon = np.radians(lon_deg)
    r = EARTH_RADIUS_M + np.asarray(alt_m, dtype=float)
    cos_lat = np.cos(lat)
    return r * cos_lat * np.cos(lon), r * cos_lat * np.sin(lon), r * np.sin(lat)


def _ecef_to_lla(x, y, z):
    r = np.sqrt(np.asarray(x, dtype=float) ** 2 + np.asarray(y) ** 2 + np.asarray(z) ** 2)
    lat = np.degrees(np.arctan2(z, np.hypot(x, y)))
    lon = np.degrees(np.arctan2(y, x))
    # atan2 yields (-180, 180]; -180.0 itself can only appear for y == -0.0
    lon = np.where(lon <= -180.0, lon + 360.0, lon)
    return lat, lon, r - EARTH_RADIUS_M


def _haversine_m(lat1_deg, lon1_deg, lat2_deg, lon2_deg):
    """Great-circle surface distance in meters; array-broadcastable."""
    lat1 = np.radians(lat1_deg)
    lat2 = np.radians(lat2_deg)
    dlat = lat2 - lat1
    dlon = np.radians(np.asarray(lon2_deg, dtype=float) - np.asarray(lon1_deg, dtype=float))
    h = np.sin(dlat / 2.0) ** 2 + np.cos(lat1) * np.cos(lat2) * np.sin(dlon / 2.0) ** 2
    return 2.0 * EARTH_RADIUS_M * np.arcsin(np.minimum(1.0, np.sqrt(h)))


def lla_to_ecef(p: GeodeticPosition) -> EcefPosition:
    """Convert a geodetic position to ECEF; |result| = EARTH_RADIUS_M + altitude."""
    x, y, z = _lla_to_ecef(p.latitude, p.longitude, p.altitude)
    return EcefPosition(float(x), float(y), float(z))


def ecef_to_lla(p: EcefPosition) -> GeodeticPosition:
    """Invert lla_to_ecef on the sphere.

    Raises ValueError for the zero vector, which has no geodetic position.
    """
    if p.x == 0.0 and p.y == 0.0 and p.z == 0.0:
        raise ValueError("zero ECEF vector: position undefined")
    lat, lon, alt = _ecef_to_lla(p.x, p.y, p.z)
    return GeodeticPosition(float(lat), float(lon), float(alt))


def euclidean_distance(a: EcefPosition, b: EcefPosition) -> float:
    """Straight-line separation in meters (2-norm of the position difference)."""
    return math.hypot(a.x - b.x, a.y - b.y, a.z - b.z)


def great_circle_distance(a: GeodeticPosition, b: GeodeticPosition) -> float:
    """Surface distance between the ground projections of two positions."""
    return float(_haversine_m(a.latitude, a.longitude, b.latitude, b.longitude))


def horizontal_vertical_split(evtol: GeodeticPosition, bs: GeodeticPosition) -> tuple[float, float]:
    """Split the aircraft-to-station geometry into ground and height components.

    Returns (horizontal, vertical) in meters: great-circle distance between the
    ground projections, and aircraft altitude minus station antenna height
    (negative when the aircraft is below the antenna).
    """
    return great_circle_distance(evtol, bs), evtol.altitude - bs.altitude


def _elevation_deg(obs_xyz, target_xyz):
    """Elevation of target above the observer's local horizontal, degrees.

    obs_xyz, target_xyz: (..., 3) arrays in ECEF meters. Local "up" is the
    radial direction at the observer (spherical Earth).
    """
    obs = np.asarray(obs_xyz, dtype=float)
    tgt = np.asarray(target_xyz, dtype=float)
    d = tgt - obs
    d_norm = np.linalg.norm(d, axis=-1)
    up = obs / np.linalg.norm(obs, axis=-1, keepdims=True)
    sin_el = np.clip(np.sum(up * d, axis=-1) / d_norm, -1.0, 1.0)
    return np.degrees(np.arcsin(sin_el))


def elevation_angle(observer: EcefPosition, target: EcefPosition) -> float:
    """Angle in [-90, 90] degrees between the observer's horizon plane and the
    observer-to-target ray. Raises ValueError for coincident points."""
    if (observer.x, observer.y, observer.z) == (target.x, target.y, target.z):
        raise ValueError("observer and target coincide: elevation angle undefined")
    if observer.x == 0.0 and observer.y == 0.0 and observer.z == 0.0:
        raise ValueError("observer at the geocenter has no local horizontal")
    return float(
        _elevation_deg((observer.x, observer.y, observer.z), (target.x, target.y, target.z))
    )


def great_circle_point(
    origin: GeodeticPosition, dest: GeodeticPosition, fraction: float
) -> GeodeticPosition:
    """Interpolate along the surface great circle from origin to dest.

    fraction 0 returns the origin, 1 the destination (both at altitude 0);
    intermediate fractions advance uniformly in arc length. Antipodal
    endpoints leave the route ambiguous and raise ValueError.
    """
    if not 0.0 <= fraction <= 1.0:
        raise ValueError(f"fraction {fraction} outside [0, 1]")
    if fraction == 0.0:
        return GeodeticPosition(origin.latitude, origin.longitude, 0.0)
    if fraction == 1.0:
        return GeodeticPosition(dest.latitude, dest.longitude, 0.0)

    u1 = np.array(_lla_to_ecef(origin.latitude, origin.longitude, 0.0)) / EARTH_RADIUS_M
    u2 = np.array(_lla_to_ecef(dest.latitude, dest.longitude, 0.0)) / EARTH_RADIUS_M
    cross = np.cross(u1, u2)
    sin_w = float(np.linalg.norm(cross))
    cos_w = float(np.dot(u1, u2))
    if sin_w < 1e-12:
        if cos_w < 0.0:
            raise ValueError("antipodal endpoints: great-circle route is ambiguous")
        return GeodeticPosition(origin.latitude, origin.longitude, 0.0)
    omega = math.atan2(sin_w, cos_w)
    v = (math.sin((1.0 - fraction) * omega) * u1 + math.sin(fraction * omega) * u2) / sin_w
    lat, lon, _ = _ecef_to_lla(v[0], v[1], v[2])
    return GeodeticPosition(float(lat), float(lon), 0.0)
