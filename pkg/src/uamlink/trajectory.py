"""Sampled eVTOL flight profiles: great-circle ground track with a trapezoidal
altitude profile, plus base-station placement along the route."""

from __future__ import annotations

import csv
from dataclasses import dataclass

from .geo import GeodeticPosition, great_circle_distance, great_circle_point

DEFAULT_ANTENNA_HEIGHT_M = 30.0


@dataclass(frozen=True)
class TripSpec:
    """One trip definition.

    Speeds and altitude bounds reflect the operating envelope of passenger
    eVTOLs: cruise 600-2000 m, 110-300 km/h.
    """

    origin: GeodeticPosition
    destination: GeodeticPosition
    cruise_altitude_m: float = 1300.0
    average_speed_kmh: float = 163.0
    slot_duration_s: float = 5.0
    climb_duration_min: float = 25.0
    descent_duration_min: float = 35.0

    def __post_init__(self):
        if not 600.0 <= self.cruise_altitude_m <= 2000.0:
            raise ValueError(
                f"cruise altitude {self.cruise_altitude_m} m outside [600, 2000] m"
            )
        if not 110.0 <= self.average_speed_kmh <= 300.0:
            raise ValueError(
                f"average speed {self.average_speed_kmh} km/h outside [110, 300] km/h"
            )
        if self.slot_duration_s <= 0.0:
            raise ValueError("slot duration must be positive")
        if self.climb_duration_min < 0.0 or self.descent_duration_min < 0.0:
            raise ValueError("climb/descent durations must be non-negative")


@dataclass(frozen=True)
class Trajectory:
    """Ordered (slot, time, position) samples; one sample per slot."""

    samples: tuple[tuple[int, float, GeodeticPosition], ...]
    slot_duration_s: float

    @property
    def n_slots(self) -> int:
        return len(self.samples)


def _altitude_at(t: float, total_s: float, cruise_m: float, climb_s: float, descent_s: float) -> float:
    if climb_s > 0.0 and t < climb_s:
        return cruise_m * (t / climb_s)
    if descent_s > 0.0 and t > total_s - descent_s:
        return cruise_m * ((total_s - t) / descent_s)
    return cruise_m


def build_trajectory(spec: TripSpec) -> Trajectory:
    """Sample the full trip every slot_duration_s seconds.

    The trip duration is route_length / average_speed, truncated to a whole
    number of slots so the final sample lands exactly on the destination;
    the altitude ramps linearly over the climb window, holds cruise, and
    ramps down over the descent window ending at touchdown.
    """
    route_m = great_circle_distance(spec.origin, spec.destination)
    speed_m_s = spec.average_speed_kmh / 3.6
    duration_s = route_m / speed_m_s
    last_slot = int(duration_s // spec.slot_duration_s)
    total_s = last_slot * spec.slot_duration_s

    climb_s = spec.climb_duration_min * 60.0
    descent_s = spec.descent_duration_min * 60.0
    if climb_s + descent_s > total_s:
        raise ValueError(
            f"climb ({spec.climb_duration_min} min) plus descent "
            f"({spec.descent_duration_min} min) exceed the {total_s / 60.0:.1f} min trip"
        )

    samples = []
    for k in range(last_slot + 1):
        t = k * spec.slot_duration_s
        fraction = k / last_slot if last_slot > 0 else 0.0
        ground = great_circle_point(spec.origin, spec.destination, fraction)
        alt = _altitude_at(t, total_s, spec.cruise_altitude_m, climb_s, descent_s)
        samples.append((k, t, GeodeticPosition(ground.latitude, ground.longitude, alt)))
    return Trajectory(tuple(samples), spec.slot_duration_s)


def place_base_stations(
    spec: TripSpec, n: int, antenna_height_m: float = DEFAULT_ANTENNA_HEIGHT_M
) -> list[GeodeticPosition]:
    """Place n base stations uniformly along the route (fractions i/(n-1)),
    all at the same antenna height."""
    if n < 2:
        raise ValueError(f"need at least 2 base stations, got {n}")
    out = []
    for i in range(n):
        ground = great_circle_point(spec.origin, spec.destination, i / (n - 1))
        out.append(GeodeticPosition(ground.latitude, ground.longitude, antenna_height_m))
    return out


def load_trajectory_csv(path) -> Trajectory:
    """Replay an externally recorded flight.

    Expected CSV header: time_s,lat_deg,lon_deg,alt_m with rows sampled at a
    uniform interval starting at time 0.
    """
    rows = []
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        expected = ("time_s", "lat_deg", "lon_deg", "alt_m")
        if reader.fieldnames is None or tuple(reader.fieldnames) != expected:
            raise ValueError(
                f"{path}: expected columns {','.join(expected)}, got {reader.fieldnames}"
            )
        for row in reader:
            rows.append(
                (
                    float(row["time_s"]),
                    GeodeticPosition(
                        float(row["lat_deg"]), float(row["lon_deg"]), float(row["alt_m"])
                    ),
                )
            )
    if len(rows) < 2:
        raise ValueError(f"{path}: need at least 2 samples")
    if rows[0][0] != 0.0:
        raise ValueError(f"{path}: first sample must be at time 0, got {rows[0][0]}")
    dt = rows[1][0] - rows[0][0]
    if dt <= 0.0:
        raise ValueError(f"{path}: non-increasing time step")
    for i in range(1, len(rows)):
        if abs(rows[i][0] - i * dt) > 1e-6:
            raise ValueError(f"{path}: non-uniform sampling at row {i}")
    samples = tuple((i, t, pos) for i, (t, pos) in enumerate(rows))
    return Trajectory(samples, dt)
