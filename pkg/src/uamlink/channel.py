"""Link budgets for the two networks an eVTOL can reach.

Cellular links blend line-of-sight and non-line-of-sight losses and only
exist inside a cylindrical service envelope around each base station
(2 km radius, 400 m above the antenna by default). Satellite links suffer
pure free-space loss and require the satellite above the local horizon.
Rates are Shannon capacities over the FDMA-widened bandwidth. Path-loss and
rate functions accept scalars or numpy arrays.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .geo import (
    EcefPosition,
    GeodeticPosition,
    _elevation_deg,
    _haversine_m,
    elevation_angle,
    euclidean_distance,
    horizontal_vertical_split,
    lla_to_ecef,
)
from .orbit import SatelliteState

SPEED_OF_LIGHT_M_S = 299_792_458.0


def db_to_linear(db: float) -> float:
    """Power ratio from decibels."""
    return 10.0 ** (db / 10.0)


def dbm_per_hz_to_w_per_hz(dbm_per_hz: float) -> float:
    """Noise power spectral density from dBm/Hz to W/Hz."""
    return 10.0 ** ((dbm_per_hz - 30.0) / 10.0)


@dataclass(frozen=True)
class CellularParams:
    """Base-station link parameters. Gains are linear, frequencies Hz."""

    carrier_frequency_hz: float = 850e6
    channel_bandwidth_hz: float = 200e3
    fdma_channels: int = 12
    path_loss_exponent: float = 2.0
    antenna_gain: float = db_to_linear(12.0)
    tx_power_w: float = 10.0
    noise_psd_w_hz: float = dbm_per_hz_to_w_per_hz(-174.0)
    los_loss_db: float = 1.0
    nlos_loss_db: float = 20.0
    los_probability: float = 0.5
    fresnel_radius_m: float = 2000.0
    fresnel_altitude_m: float = 400.0

    def __post_init__(self):
        _require_positive(
            self,
            "carrier_frequency_hz",
            "channel_bandwidth_hz",
            "path_loss_exponent",
            "antenna_gain",
            "tx_power_w",
            "noise_psd_w_hz",
            "fresnel_radius_m",
            "fresnel_altitude_m",
        )
        if self.fdma_channels < 1:
            raise ValueError("fdma_channels must be >= 1")
        if not 0.0 <= self.los_probability <= 1.0:
            raise ValueError(f"los_probability {self.los_probability} outside [0, 1]")

    @property
    def total_bandwidth_hz(self) -> float:
        return self.fdma_channels * self.channel_bandwidth_hz


@dataclass(frozen=True)
class SatelliteParams:
    """Satellite link parameters. Gains are linear, frequencies Hz."""

    carrier_frequency_hz: float = 11e9
    channel_bandwidth_hz: float = 400e3
    fdma_channels: int = 12
    path_loss_exponent: float = 2.0
    antenna_gain: float = db_to_linear(20.0)
    tx_power_w: float = 8.0
    noise_psd_w_hz: float = dbm_per_hz_to_w_per_hz(-174.0)
    los_loss_db: float = 0.1
    min_elevation_deg: float = 0.0

    def __post_init__(self):
        _require_positive(
            self,
            "carrier_frequency_hz",
            "channel_bandwidth_hz",
            "path_loss_exponent",
            "antenna_gain",
            "tx_power_w",
            "noise_psd_w_hz",
        )
        if self.fdma_channels < 1:
            raise ValueError("fdma_channels must be >= 1")
        if not 0.0 <= self.min_elevation_deg < 90.0:
            raise ValueError(
                f"min_elevation_deg {self.min_elevation_deg} outside [0, 90)"
            )

    @property
    def total_bandwidth_hz(self) -> float:
        return self.fdma_channels * self.channel_bandwidth_hz


@dataclass(frozen=True)
class LinkCandidate:
    """One selectable link at a slot: a visible base station or satellite."""

    kind: str  # "cellular" | "satellite"
    node_id: int
    distance_m: float
    rate_bps: float
    slot: int = 0

    def __post_init__(self):
        if self.kind not in ("cellular", "satellite"):
            raise ValueError(f"unknown link kind {self.kind!r}")
        if self.distance_m <= 0.0:
            raise ValueError("candidate distance must be positive")
        if self.rate_bps < 0.0:
            raise ValueError("candidate rate must be non-negative")


def _require_positive(obj, *fields):
    for name in fields:
        if getattr(obj, name) <= 0.0:
            raise ValueError(f"{name} must be positive, got {getattr(obj, name)}")


def _spreading_loss_db(distance_m, frequency_hz, antenna_gain, exponent):
    return 10.0 * exponent * np.log10(
        4.0 * np.pi * frequency_hz * np.asarray(distance_m, dtype=float)
        / (np.sqrt(antenna_gain) * SPEED_OF_LIGHT_M_S)
    )


def cellular_path_loss(
    distance_m, mode: str, params: CellularParams, exponent: float | None = None
) -> float:
    """Path loss in dB to a base station at the given 3-D distance.

    mode is "los" or "nlos" and picks the excess loss term. The default
    exponent is the in-envelope value from params; far-field evaluation
    beyond the service envelope passes exponent=4.
    """
    if np.any(np.asarray(distance_m) <= 0.0):
        raise ValueError("distance must be positive")
    if mode == "los":
        excess = params.los_loss_db
    elif mode == "nlos":
        excess = params.nlos_loss_db
    else:
        raise ValueError(f"mode must be 'los' or 'nlos', got {mode!r}")
    nu = params.path_loss_exponent if exponent is None else exponent
    return (
        _spreading_loss_db(distance_m, params.carrier_frequency_hz, params.antenna_gain, nu)
        + excess
    )


def effective_cellular_path_loss(pl_los_db, pl_nlos_db, los_probability) -> float:
    """Blend LoS/NLoS path losses in the dB domain by the LoS probability."""
    alpha = np.asarray(los_probability, dtype=float)
    if np.any(alpha < 0.0) or np.any(alpha > 1.0):
        raise ValueError(f"los_probability {los_probability} outside [0, 1]")
    return alpha * pl_los_db + (1.0 - alpha) * pl_nlos_db


def leo_path_loss(distance_m, params: SatelliteParams) -> float:
    """Free-space path loss in dB to a satellite at the given slant distance."""
    if np.any(np.asarray(distance_m) <= 0.0):
        raise ValueError("distance must be positive")
    return (
        _spreading_loss_db(
            distance_m,
            params.carrier_frequency_hz,
            params.antenna_gain,
            params.path_loss_exponent,
        )
        + params.los_loss_db
    )


def gain_from_path_loss(path_loss_db) -> float:
    """Linear amplitude gain: |gain|^2 recovers the power attenuation."""
    return 10.0 ** (-np.asarray(path_loss_db, dtype=float) / 20.0)


def shannon_rate(tx_power_w, gain, bandwidth_hz, noise_psd_w_hz) -> float:
    """Channel capacity in bit/s over the total (FDMA-widened) bandwidth."""
    bandwidth = np.asarray(bandwidth_hz, dtype=float)
    if np.any(bandwidth <= 0.0) or noise_psd_w_hz <= 0.0:
        raise ValueError("bandwidth and noise density must be positive")
    if np.any(np.asarray(gain) < 0.0):
        raise ValueError("gain must be non-negative")
    snr = tx_power_w * np.asarray(gain) ** 2 / (bandwidth * noise_psd_w_hz)
    return bandwidth * np.log2(1.0 + snr)


def cellular_rate(distance_m, params: CellularParams) -> float:
    """Full cellular chain: LoS/NLoS losses, blend, gain, Shannon rate."""
    pl = effective_cellular_path_loss(
        cellular_path_loss(distance_m, "los", params),
        cellular_path_loss(distance_m, "nlos", params),
        params.los_probability,
    )
    return shannon_rate(
        params.tx_power_w,
        gain_from_path_loss(pl),
        params.total_bandwidth_hz,
        params.noise_psd_w_hz,
    )


def satellite_rate(distance_m, params: SatelliteParams) -> float:
    """Full satellite chain: free-space loss, gain, Shannon rate."""
    return shannon_rate(
        params.tx_power_w,
        gain_from_path_loss(leo_path_loss(distance_m, params)),
        params.total_bandwidth_hz,
        params.noise_psd_w_hz,
    )


def cellular_visible(
    evtol: GeodeticPosition, bs: GeodeticPosition, params: CellularParams
) -> bool:
    """True inside the cylindrical service envelope: ground distance within
    the service radius and altitude within [0, ceiling] above the antenna."""
    horizontal, vertical = horizontal_vertical_split(evtol, bs)
    return (
        horizontal <= params.fresnel_radius_m
        and 0.0 <= vertical <= params.fresnel_altitude_m
    )


def satellite_visible(
    evtol: GeodeticPosition, sat: EcefPosition, params: SatelliteParams
) -> bool:
    """True when the satellite sits at or above the minimum elevation."""
    return elevation_angle(lla_to_ecef(evtol), sat) >= params.min_elevation_deg


def los_probability_from_elevation(elevation_deg, a: float = 9.61, b: float = 0.16):
    """Optional logistic model of LoS probability versus elevation angle.

    Not wired into the rate chain (the blend uses the constant
    CellularParams.los_probability); callers that want geometry-dependent
    blending evaluate this and substitute the result per link.
    """
    return 1.0 / (1.0 + a * np.exp(-b * (np.asarray(elevation_deg, dtype=float) - a)))


def candidate_rates(
    evtol: GeodeticPosition,
    base_stations: list[GeodeticPosition],
    satellite_states: list[SatelliteState],
    cellular: CellularParams,
    satellite: SatelliteParams,
    slot: int = 0,
) -> list[LinkCandidate]:
    """Enumerate every visible link with its achievable rate.

    Candidates come out base stations first (by index), then satellites (by
    list order); invisible nodes are dropped. An empty list is a valid
    outage state.
    """
    candidates: list[LinkCandidate] = []
    evtol_ecef = lla_to_ecef(evtol)

    if base_stations:
        bs_lat = np.array([b.latitude for b in base_stations])
        bs_lon = np.array([b.longitude for b in base_stations])
        bs_alt = np.array([b.altitude for b in base_stations])
        horizontal = _haversine_m(evtol.latitude, evtol.longitude, bs_lat, bs_lon)
        vertical = evtol.altitude - bs_alt
        visible = (
            (horizontal <= cellular.fresnel_radius_m)
            & (vertical >= 0.0)
            & (vertical <= cellular.fresnel_altitude_m)
        )
        for i in np.flatnonzero(visible):
            d = euclidean_distance(evtol_ecef, lla_to_ecef(base_stations[i]))
            candidates.append(
                LinkCandidate("cellular", int(i), d, float(cellular_rate(d, cellular)), slot)
            )

    if satellite_states:
        obs = np.array([evtol_ecef.x, evtol_ecef.y, evtol_ecef.z])
        sat_xyz = np.array([[s.ecef.x, s.ecef.y, s.ecef.z] for s in satellite_states])
        elev = _elevation_deg(obs, sat_xyz)
        for j in np.flatnonzero(elev >= satellite.min_elevation_deg):
            state = satellite_states[j]
            d = euclidean_distance(evtol_ecef, state.ecef)
            candidates.append(
                LinkCandidate(
                    "satellite", state.satellite_id, d, float(satellite_rate(d, satellite)), slot
                )
            )
    return candidates
