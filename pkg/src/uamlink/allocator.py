"""Per-slot link selection.

The selection problem is a binary integer program: pick exactly one visible
link to minimize the message delay S/r (ties broken toward cellular, the
cheaper network, then lowest node id). Because the one-hot constraint makes
the program separable it is solved in closed form; ``bilp_oracle`` keeps the
exhaustive enumeration around to guard that reasoning at test scale.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

from .channel import LinkCandidate

# tie-break order between link kinds: cellular is preferred on cost
_KIND_ORDER = {"cellular": 0, "satellite": 1}
_ORACLE_MAX_CANDIDATES = 20


@dataclass(frozen=True)
class AllocationDecision:
    """Outcome of one slot's link selection.

    On outage every binary coefficient is zero (kind/node_id/selected_index
    are None, r_opt 0, delay infinite); otherwise exactly one is set.
    """

    slot: int
    kind: str | None
    node_id: int | None
    r_opt_bps: float
    delta_opt_s: float
    selected_index: int | None = None

    @property
    def is_outage(self) -> bool:
        return self.kind is None

    def binary_vector(self, n_candidates: int) -> list[int]:
        """The X/Y coefficient vector over the candidate list."""
        vec = [0] * n_candidates
        if self.selected_index is not None:
            vec[self.selected_index] = 1
        return vec


@dataclass(frozen=True)
class MessageSchedule:
    """Message size per slot (constant or per-slot sequence) and the expiry
    limit M in slots. Data not delivered within M slots is lost; M > 1
    (caching) is carried in the model but rejected by the simulator."""

    size_bits: float | tuple[float, ...]
    expiry_slots: int = 1

    def __post_init__(self):
        sizes = self.size_bits if isinstance(self.size_bits, tuple) else (self.size_bits,)
        if not sizes or any(s <= 0.0 for s in sizes):
            raise ValueError("message sizes must be positive")
        if self.expiry_slots < 1:
            raise ValueError(f"expiry_slots must be >= 1, got {self.expiry_slots}")

    def size_at(self, slot: int) -> float:
        if isinstance(self.size_bits, tuple):
            return self.size_bits[slot]
        return self.size_bits


def compute_delay(size_bits: float, rate_bps: float) -> float:
    """Transmission delay S/r in seconds; zero rate yields the infinite marker."""
    if size_bits <= 0.0:
        raise ValueError(f"message size must be positive, got {size_bits}")
    if rate_bps < 0.0:
        raise ValueError(f"rate must be non-negative, got {rate_bps}")
    if rate_bps == 0.0:
        return math.inf
    return size_bits / rate_bps


def _outage(slot: int) -> AllocationDecision:
    return AllocationDecision(
        slot=slot, kind=None, node_id=None, r_opt_bps=0.0, delta_opt_s=math.inf
    )


def _selection_key(delay: float, candidate: LinkCandidate):
    return (delay, _KIND_ORDER[candidate.kind], candidate.node_id)


def select_link(
    candidates: Sequence[LinkCandidate],
    size_bits: float,
    slot: int | None = None,
    fixed_delay_cellular_s: float = 0.0,
    fixed_delay_satellite_s: float = 0.0,
) -> AllocationDecision:
    """Pick the delay-minimizing link, or declare an outage.

    Fixed per-link processing delays are zero in this model but kept as
    knobs; a non-zero value is charged on top of the transmission delay of
    the link it applies to.
    """
    fixed = {"cellular": fixed_delay_cellular_s, "satellite": fixed_delay_satellite_s}
    if slot is None:
        slot = candidates[0].slot if candidates else 0
    best_idx = None
    best_key = None
    for idx, cand in enumerate(candidates):
        if cand.rate_bps <= 0.0:
            continue
        key = _selection_key(compute_delay(size_bits, cand.rate_bps) + fixed[cand.kind], cand)
        if best_key is None or key < best_key:
            best_idx, best_key = idx, key
    if best_idx is None:
        return _outage(slot)
    chosen = candidates[best_idx]
    return AllocationDecision(
        slot=slot,
        kind=chosen.kind,
        node_id=chosen.node_id,
        r_opt_bps=chosen.rate_bps,
        delta_opt_s=best_key[0],
        selected_index=best_idx,
    )


def bilp_oracle(
    candidates: Sequence[LinkCandidate],
    size_bits: float,
    slot: int | None = None,
    fixed_delay_cellular_s: float = 0.0,
    fixed_delay_satellite_s: float = 0.0,
) -> AllocationDecision:
    """Exhaustive reference solver for the one-hot selection program.

    Enumerates every binary assignment with coefficient sum 1, evaluates the
    delay objective for each, and returns the minimizer under the same
    tie-break as select_link. Intentionally small-scale: refuses more than
    20 candidates.
    """
    fixed = {"cellular": fixed_delay_cellular_s, "satellite": fixed_delay_satellite_s}
    if len(candidates) > _ORACLE_MAX_CANDIDATES:
        raise ValueError(
            f"{len(candidates)} candidates exceed the oracle test scale "
            f"({_ORACLE_MAX_CANDIDATES})"
        )
    if slot is None:
        slot = candidates[0].slot if candidates else 0
    best = None  # (key, index, objective)
    for idx in range(len(candidates)):
        assignment = [1 if i == idx else 0 for i in range(len(candidates))]
        objective = 0.0
        for coeff, cand in zip(assignment, candidates):
            if coeff:
                objective += compute_delay(size_bits, cand.rate_bps) + fixed[cand.kind]
        key = _selection_key(objective, candidates[idx])
        if best is None or key < best[0]:
            best = (key, idx, objective)
    if best is None or math.isinf(best[2]):
        return _outage(slot)
    _, idx, objective = best
    chosen = candidates[idx]
    return AllocationDecision(
        slot=slot,
        kind=chosen.kind,
        node_id=chosen.node_id,
        r_opt_bps=chosen.rate_bps,
        delta_opt_s=objective,
        selected_index=idx,
    )
