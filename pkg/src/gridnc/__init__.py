"""gridnc: relay coding on d-dimensional wireless grids, simulated and verified.

A time-slotted simulator for an XOR relay code on {0..K}^d lattices with a
broadcast medium, an exact GF(2) coefficient-vector verification mode, a
shortest-path routing baseline, and closed-form energy accounting of the
routing-to-coding transmission ratio.
"""

from .analysis import (
    BenefitReport,
    EnergyModel,
    alt_model_benefit,
    alt_model_benefit_at,
    benefit_at,
    benefit_limit,
    energy_total,
    nc_tx_per_slot,
)
from .baseline import RoutingPlan, bfs_hop_oracle, build_plan, routing_total
from .engine import DecodeRecord, InvariantViolation, RunSummary, SimState, SlotLog, init, run, step
from .fastsim import BitRunResult, simulate_bits
from .symbols import BIT, COEFF, Payload, SourceTag, is_exactly, source_symbol, xor
from .theta import ThetaTable, build_theta, check_theta_identity
from .topology import (
    BACKWARD,
    FORWARD,
    Coord,
    GridConfig,
    Session,
    build_grid,
    build_sessions,
    coding_neighborhood,
    is_border,
    manhattan_dist,
    mirror,
    range_neighbors,
)

__version__ = "0.1.0"
