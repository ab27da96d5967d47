"""Two-body Keplerian propagation of a LEO constellation.

Elements are classical (semi-major axis in km, angles in degrees); positions
come out in ECEF meters. The inertial frame is tied to ECEF at t = 0 and the
two frames separate at the constant Earth rotation rate. Deliberately no J2,
drag or deep-space corrections: the simulator only needs visibility windows,
not meter-level ephemerides.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, replace

import numpy as np

from .geo import EARTH_RADIUS_M, EcefPosition, GeodeticPosition, _ecef_to_lla

MU_EARTH_KM3_S2 = 398_600.4418
EARTH_ROTATION_RAD_S = 7.2921159e-5
_EARTH_RADIUS_KM = EARTH_RADIUS_M / 1000.0
_TWO_PI = 2.0 * math.pi

# residual target for Kepler's equation |E - e sin E - M|
_KEPLER_TOL = 1e-14
_CONSTELLATION_CSV_FIELDS = ("id", "a_km", "e", "inc_deg", "raan_deg", "argp_deg", "nu_deg")


@dataclass(frozen=True)
class OrbitalElements:
    """Classical orbital elements valid at ``epoch_s`` seconds of simulation time."""

    semi_major_axis_km: float
    eccentricity: float
    inclination_deg: float
    raan_deg: float = 0.0
    argument_of_periapsis_deg: float = 0.0
    true_anomaly_deg: float = 0.0
    epoch_s: float = 0.0

    def __post_init__(self):
        if self.semi_major_axis_km <= _EARTH_RADIUS_KM:
            raise ValueError(
                f"semi-major axis {self.semi_major_axis_km} km is not above the surface"
            )
        if not 0.0 <= self.eccentricity < 1.0:
            raise ValueError(f"eccentricity {self.eccentricity} outside [0, 1)")

    @property
    def period_s(self) -> float:
        """Orbital period from the semi-major axis (the one source of truth)."""
        return _TWO_PI * math.sqrt(self.semi_major_axis_km**3 / MU_EARTH_KM3_S2)

    @property
    def mean_motion_rad_s(self) -> float:
        return math.sqrt(MU_EARTH_KM3_S2 / self.semi_major_axis_km**3)


@dataclass(frozen=True)
class SatelliteState:
    """Pose of one satellite at one sample time."""

    satellite_id: int
    position: GeodeticPosition
    ecef: EcefPosition
    time_s: float

    def __post_init__(self):
        if not 200_000.0 <= self.position.altitude <= 2_000_000.0:
            raise ValueError(
                f"altitude {self.position.altitude / 1000.0:.1f} km outside the "
                "[200, 2000] km LEO band"
            )


@dataclass(frozen=True)
class Constellation:
    """Immutable set of (satellite_id, OrbitalElements) pairs."""

    satellites: tuple[tuple[int, OrbitalElements], ...]

    def __post_init__(self):
        if len(self.satellites) < 1:
            raise ValueError("constellation must contain at least one satellite")
        ids = [sid for sid, _ in self.satellites]
        if len(set(ids)) != len(ids):
            raise ValueError("satellite ids must be unique")

    @property
    def size(self) -> int:
        return len(self.satellites)

    def subset(self, n: int) -> "Constellation":
        """First n satellites, preserving order (nested-constellation sweeps)."""
        if not 1 <= n <= self.size:
            raise ValueError(f"subset size {n} outside [1, {self.size}]")
        return Constellation(self.satellites[:n])


def solve_kepler(mean_anomaly: float, eccentricity: float) -> float:
    """Solve E - e sin(E) = M for the eccentric anomaly E (radians).

    Newton iteration seeded at E = M with a bisection fallback; the residual
    is driven below 1e-12 for any 0 <= e < 1. Raises ValueError for e >= 1
    (parabolic/hyperbolic orbits are unsupported).
    """
    if not 0.0 <= eccentricity < 1.0:
        raise ValueError(f"eccentricity {eccentricity} outside [0, 1): unsupported orbit")
    e = eccentricity
    m = math.fmod(mean_anomaly, _TWO_PI)
    if m < 0.0:
        m += _TWO_PI
    ecc_anom = m
    for _ in range(40):
        f = ecc_anom - e * math.sin(ecc_anom) - m
        if abs(f) < _KEPLER_TOL:
            break
        ecc_anom -= f / (1.0 - e * math.cos(ecc_anom))
    else:
        # Newton failed to settle; bisect the bracket |E - M| <= e instead
        lo, hi = m - e, m + e
        for _ in range(128):
            ecc_anom = 0.5 * (lo + hi)
            f = ecc_anom - e * math.sin(ecc_anom) - m
            if abs(f) < _KEPLER_TOL or hi - lo < 1e-16:
                break
            if f < 0.0:
                lo = ecc_anom
            else:
                hi = ecc_anom
    return ecc_anom + (mean_anomaly - m)


def _solve_kepler_array(mean_anomaly: np.ndarray, eccentricity: float) -> np.ndarray:
    """Vectorized Newton solve; falls back to the scalar path where needed."""
    m = np.mod(mean_anomaly, _TWO_PI)
    ecc_anom = m.copy()
    for _ in range(25):
        f = ecc_anom - eccentricity * np.sin(ecc_anom) - m
        ecc_anom -= f / (1.0 - eccentricity * np.cos(ecc_anom))
    residual = np.abs(ecc_anom - eccentricity * np.sin(ecc_anom) - m)
    bad = residual > 1e-12
    if np.any(bad):
        ecc_anom[bad] = [solve_kepler(mi, eccentricity) for mi in m[bad]]
    return ecc_anom + (mean_anomaly - m)


def _true_to_mean_anomaly(nu_rad: float, e: float) -> float:
    ecc_anom = 2.0 * math.atan2(
        math.sqrt(1.0 - e) * math.sin(nu_rad / 2.0),
        math.sqrt(1.0 + e) * math.cos(nu_rad / 2.0),
    )
    return ecc_anom - e * math.sin(ecc_anom)


def _propagate_xyz_m(elements: OrbitalElements, t):
    """Two-body position at time(s) t, ECEF meters. t may be a scalar or array."""
    a = elements.semi_major_axis_km
    e = elements.eccentricity
    inc = math.radians(elements.inclination_deg)
    raan = math.radians(elements.raan_deg)
    argp = math.radians(elements.argument_of_periapsis_deg)
    nu0 = math.radians(elements.true_anomaly_deg)

    t = np.asarray(t, dtype=float)
    m0 = _true_to_mean_anomaly(nu0, e)
    mean_anom = m0 + elements.mean_motion_rad_s * (t - elements.epoch_s)
    ecc_anom = _solve_kepler_array(np.atleast_1d(mean_anom), e)

    nu = 2.0 * np.arctan2(
        math.sqrt(1.0 + e) * np.sin(ecc_anom / 2.0),
        math.sqrt(1.0 - e) * np.cos(ecc_anom / 2.0),
    )
    r_km = a * (1.0 - e * np.cos(ecc_anom))
    if np.any(r_km < _EARTH_RADIUS_KM):
        raise ValueError("propagated radius fell below the Earth surface: orbit decayed")

    # inertial position from the argument of latitude
    u = argp + nu
    cos_u, sin_u = np.cos(u), np.sin(u)
    x_in = r_km * (math.cos(raan) * cos_u - math.sin(raan) * sin_u * math.cos(inc))
    y_in = r_km * (math.sin(raan) * cos_u + math.cos(raan) * sin_u * math.cos(inc))
    z_in = r_km * sin_u * math.sin(inc)

    # inertial -> ECEF: Earth rotation angle is 0 at t = 0
    theta = EARTH_ROTATION_RAD_S * np.atleast_1d(t)
    cos_t, sin_t = np.cos(theta), np.sin(theta)
    x = x_in * cos_t + y_in * sin_t
    y = -x_in * sin_t + y_in * cos_t
    out = np.stack([x, y, z_in], axis=-1) * 1000.0
    return out if np.ndim(t) else out[0]


def propagate(elements: OrbitalElements, t: float) -> EcefPosition:
    """Propagate one satellite to simulation time t >= 0 seconds (ECEF)."""
    if t < 0.0:
        raise ValueError(f"propagation time {t} s is negative")
    xyz = _propagate_xyz_m(elements, float(t))
    return EcefPosition(float(xyz[0]), float(xyz[1]), float(xyz[2]))


def constellation_states(constellation: Constellation, t: float) -> list[SatelliteState]:
    """Propagate every satellite to time t; errors carry the satellite id."""
    states = []
    for sid, elements in constellation.satellites:
        try:
            ecef = propagate(elements, t)
            lat, lon, alt = _ecef_to_lla(ecef.x, ecef.y, ecef.z)
            state = SatelliteState(
                satellite_id=sid,
                position=GeodeticPosition(float(lat), float(lon), float(alt)),
                ecef=ecef,
                time_s=t,
            )
        except ValueError as err:
            raise ValueError(f"satellite {sid}: {err}") from err
        states.append(state)
    return states


def generate_walker_constellation(
    base: OrbitalElements, m: int, planes: int
) -> Constellation:
    """Spread m satellites evenly over equally spaced orbital planes.

    Plane RAANs step 360/planes degrees; within a plane, true anomaly steps
    360*planes/m degrees. All other elements are copied from ``base``.
    Satellite ids run 0..m-1 in plane-major order.
    """
    if m < 1 or planes < 1:
        raise ValueError("satellite and plane counts must be >= 1")
    if m % planes != 0:
        raise ValueError(f"planes ({planes}) must divide the satellite count ({m})")
    per_plane = m // planes
    raan_step = 360.0 / planes
    anomaly_step = 360.0 * planes / m
    sats = []
    sid = 0
    for p in range(planes):
        raan = math.fmod(base.raan_deg + p * raan_step, 360.0)
        for s in range(per_plane):
            nu = math.fmod(base.true_anomaly_deg + s * anomaly_step, 360.0)
            sats.append((sid, replace(base, raan_deg=raan, true_anomaly_deg=nu)))
            sid += 1
    return Constellation(tuple(sats))


def load_constellation_csv(path) -> Constellation:
    """Read a constellation definition file.

    Expected CSV header: id,a_km,e,inc_deg,raan_deg,argp_deg,nu_deg
    (one satellite per row; element epochs are 0).
    """
    sats = []
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames is None or tuple(reader.fieldnames) != _CONSTELLATION_CSV_FIELDS:
            raise ValueError(
                f"{path}: expected columns {','.join(_CONSTELLATION_CSV_FIELDS)}, "
                f"got {reader.fieldnames}"
            )
        for row in reader:
            sats.append(
                (
                    int(row["id"]),
                    OrbitalElements(
                        semi_major_axis_km=float(row["a_km"]),
                        eccentricity=float(row["e"]),
                        inclination_deg=float(row["inc_deg"]),
                        raan_deg=float(row["raan_deg"]),
                        argument_of_periapsis_deg=float(row["argp_deg"]),
                        true_anomaly_deg=float(row["nu_deg"]),
                    ),
                )
            )
    return Constellation(tuple(sats))


def save_constellation_csv(constellation: Constellation, path) -> None:
    """Write the definition file read back by load_constellation_csv."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(_CONSTELLATION_CSV_FIELDS)
        for sid, el in constellation.satellites:
            writer.writerow(
                [
                    sid,
                    repr(el.semi_major_axis_km),
                    repr(el.eccentricity),
                    repr(el.inclination_deg),
                    repr(el.raan_deg),
                    repr(el.argument_of_periapsis_deg),
                    repr(el.true_anomaly_deg),
                ]
            )
