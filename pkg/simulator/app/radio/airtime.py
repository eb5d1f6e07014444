"""
OFDM frame duration for the 10 MHz channel.
"""

from ..models.run_models import RadioParams

SERVICE_BITS = 16
TAIL_BITS = 6


def airtime(mpdu_bytes: int, params: RadioParams) -> int:
    """Preamble plus whole OFDM symbols for SERVICE + MPDU + tail, in microseconds."""
    if mpdu_bytes < 0:
        raise ValueError(f"mpdu_bytes must be non-negative, got {mpdu_bytes}")
    bits = SERVICE_BITS + 8 * mpdu_bytes + TAIL_BITS
    symbols = -(-bits // params.data_bits_per_symbol)
    return params.preamble_us + symbols * params.symbol_us


def frame_airtime(payload_bytes: int, params: RadioParams) -> int:
    """Airtime of a CAM payload once the emulated stack overhead is added."""
    return airtime(payload_bytes + params.frame_overhead_bytes, params)
