"""
Deterministic log-distance propagation and link budget.
"""

import math

import numpy as np

from ..models.run_models import RadioParams
from ..scenario.highway import NodeSpec, pair_distance

MIN_DISTANCE_M = 1.0


def dbm_to_mw(dbm):
    """dBm to milliwatts; accepts scalars or arrays."""
    return np.power(10.0, np.asarray(dbm, dtype=float) / 10.0)


def mw_to_dbm(mw):
    return 10.0 * np.log10(np.asarray(mw, dtype=float))


def path_loss_db(d_m: float, params: RadioParams) -> float:
    """PL(d) = PL(1 m) + 10 * n * log10(d); distances under 1 m clamp to 1 m."""
    d = max(float(d_m), MIN_DISTANCE_M)
    return params.reference_loss_db + 10.0 * params.pathloss_exponent * math.log10(d)


def rx_power_dbm(tx: NodeSpec, rx: NodeSpec, params: RadioParams) -> float:
    """Received power at `rx` for a frame sent by `tx`."""
    if tx.id == rx.id:
        raise ValueError("transmitter and receiver must be distinct nodes")
    return params.tx_power_dbm + 2.0 * params.antenna_gain_dbi - path_loss_db(pair_distance(tx, rx), params)


def rx_power_matrix_mw(distances_m: np.ndarray, params: RadioParams) -> np.ndarray:
    """
    Received power in mW for every (tx, rx) pair.

    Args:
        distances_m: (N, N) pairwise distances

    Returns:
        (N, N) array, row = transmitter; the diagonal is zero
    """
    d = np.maximum(distances_m, MIN_DISTANCE_M)
    loss_db = params.reference_loss_db + 10.0 * params.pathloss_exponent * np.log10(d)
    power_dbm = params.tx_power_dbm + 2.0 * params.antenna_gain_dbi - loss_db
    power_mw = dbm_to_mw(power_dbm)
    np.fill_diagonal(power_mw, 0.0)
    return power_mw
