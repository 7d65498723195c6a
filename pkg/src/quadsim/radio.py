"""First-order radio energy accounting.

Transmission costs an electronics term per bit plus an amplifier term that
scales with the square of the distance; reception costs the electronics
term only. Aggregation at a cluster head costs a fixed amount per bit per
fused signal. Defaults are the canonical first-order values:
50 nJ/bit electronics, 100 pJ/bit/m^2 amplifier, 5 nJ/bit aggregation.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import DomainError
from .model import Position

E_ELEC_DEFAULT = 50e-9  # J/bit, TX and RX electronics
E_AMP_DEFAULT = 100e-12  # J/bit/m^2, d^2 amplifier
E_DA_DEFAULT = 5e-9  # J/bit per fused signal
BS_POSITION_DEFAULT = Position(50.0, 150.0)  # remote sink, 50 m past the top edge


@dataclass(frozen=True)
class RadioModel:
    """Radio energy constants plus the base-station coordinate.

    Args:
        e_elec: Electronics energy per bit, charged on TX and RX (J/bit).
        e_amp: Amplifier energy per bit per square meter (J/bit/m^2).
        e_da: Aggregation energy per bit per contributing signal (J/bit).
        bs_position: Base-station coordinate; may lie outside the field.
    """

    e_elec: float = E_ELEC_DEFAULT
    e_amp: float = E_AMP_DEFAULT
    e_da: float = E_DA_DEFAULT
    bs_position: Position = BS_POSITION_DEFAULT

    def __post_init__(self) -> None:
        if self.e_elec <= 0 or self.e_amp <= 0 or self.e_da <= 0:
            raise DomainError("radio energy constants must all be positive")

    def tx_cost(self, bits: int, d: float) -> float:
        """Energy to transmit ``bits`` over distance ``d`` meters."""
        if bits < 0:
            raise DomainError(f"bits must be >= 0, got {bits}")
        if d < 0:
            raise DomainError(f"distance must be >= 0, got {d}")
        return self.e_elec * bits + self.e_amp * bits * d * d

    def rx_cost(self, bits: int) -> float:
        """Energy to receive ``bits``."""
        if bits < 0:
            raise DomainError(f"bits must be >= 0, got {bits}")
        return self.e_elec * bits

    def aggregation_cost(self, bits: int, n_signals: int) -> float:
        """Energy for a cluster head to fuse ``n_signals`` frames of ``bits`` each.

        ``n_signals`` counts the members' frames plus the head's own.
        """
        if bits < 0:
            raise DomainError(f"bits must be >= 0, got {bits}")
        if n_signals < 1:
            raise DomainError(f"n_signals must be >= 1, got {n_signals}")
        return self.e_da * bits * n_signals


@dataclass(frozen=True)
class PacketSpec:
    """Packet sizes: data frames and control messages (advertise/join/schedule)."""

    data_bits: int = 2000
    ctrl_bits: int = 200

    def __post_init__(self) -> None:
        if self.data_bits < 1:
            raise DomainError(f"data_bits must be >= 1, got {self.data_bits}")
        if self.ctrl_bits < 0:
            raise DomainError(f"ctrl_bits must be >= 0, got {self.ctrl_bits}")


def rssi(d: float) -> float:
    """Received signal strength for a transmitter ``d`` meters away.

    Strictly decreasing in distance, so ranking candidate cluster heads by
    RSSI is the same as ranking them by proximity. The particular shape
    (1 / (1 + d^2)) is otherwise arbitrary.
    """
    if d < 0:
        raise DomainError(f"distance must be >= 0, got {d}")
    return 1.0 / (1.0 + d * d)
