"""Radio and baseband compute model.

Per-RU x-haul datarates for functional splits 7.2 and 7.3, Ethernet burst
framing over the PON, and RU/DU/CU processing effort. All rates are in
bits/second; compute effort is in GOPS per TTI. Byte-to-bit conversion
(factor 8) happens exactly once per formula, at the point marked in the
docstring.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, replace


class SplitVariant(enum.Enum):
    SPLIT_7_2 = "7.2"
    SPLIT_7_3 = "7.3"


# Default fraction of total baseband processing done at the RU itself;
# the remainder goes to the DU/CU on the cloud side.
_RU_FRACTION = {SplitVariant.SPLIT_7_2: 0.40, SplitVariant.SPLIT_7_3: 0.50}


@dataclass(frozen=True)
class SplitOption:
    """A functional split choice and its RU-side processing fraction."""

    variant: SplitVariant
    ru_processing_fraction: float

    def __post_init__(self):
        if not 0.0 < self.ru_processing_fraction < 1.0:
            raise ValueError(
                f"ru_processing_fraction must be in (0,1), got {self.ru_processing_fraction}"
            )

    @classmethod
    def split_7_2(cls, ru_processing_fraction: float | None = None) -> "SplitOption":
        f = _RU_FRACTION[SplitVariant.SPLIT_7_2] if ru_processing_fraction is None else ru_processing_fraction
        return cls(SplitVariant.SPLIT_7_2, f)

    @classmethod
    def split_7_3(cls, ru_processing_fraction: float | None = None) -> "SplitOption":
        f = _RU_FRACTION[SplitVariant.SPLIT_7_3] if ru_processing_fraction is None else ru_processing_fraction
        return cls(SplitVariant.SPLIT_7_3, f)


@dataclass(frozen=True)
class RadioConfig:
    """Radio configuration feeding the datarate and compute formulas.

    n_ports          number of antenna ports
    n_layers         number of spatial layers
    n_rb             number of resource blocks
    sc_per_rb        sub-carriers per resource block
    sym_per_subframe OFDM symbols per subframe
    subframe_s       subframe duration in seconds
    rb_utilization   maximum resource-block utilization, in [0, 1]
    quantizer_bits   quantizer resolution per I/Q dimension
    fh_overhead      fronthaul overhead factor, >= 1
    resource_overhead fraction of resources lost to control/reference, in [0, 1)
    modulation_order modulation constellation size (power of two)
    n_antennas       number of MIMO antennas
    modulation_bits  bits per modulated symbol
    coding_rate      channel coding rate, in (0, 1]
    """

    n_ports: int
    n_layers: int
    n_rb: int
    sc_per_rb: int
    sym_per_subframe: int
    subframe_s: float
    rb_utilization: float
    quantizer_bits: int
    fh_overhead: float
    resource_overhead: float = 0.0
    modulation_order: int = 4
    n_antennas: int = 1
    modulation_bits: int = 2
    coding_rate: float = 1.0

    def __post_init__(self):
        for name in ("n_ports", "n_layers", "sc_per_rb", "sym_per_subframe",
                     "quantizer_bits", "n_antennas", "modulation_bits"):
            if getattr(self, name) < 1:
                raise ValueError(f"{name} must be >= 1, got {getattr(self, name)}")
        if self.n_rb < 0:
            raise ValueError(f"n_rb must be >= 0, got {self.n_rb}")
        if self.subframe_s <= 0.0:
            raise ValueError(f"subframe_s must be > 0, got {self.subframe_s}")
        if not 0.0 <= self.rb_utilization <= 1.0:
            raise ValueError(f"rb_utilization must be in [0,1], got {self.rb_utilization}")
        if self.fh_overhead < 1.0:
            raise ValueError(f"fh_overhead must be >= 1, got {self.fh_overhead}")
        if not 0.0 <= self.resource_overhead < 1.0:
            raise ValueError(f"resource_overhead must be in [0,1), got {self.resource_overhead}")
        if self.modulation_order < 2 or 2 ** round(math.log2(self.modulation_order)) != self.modulation_order:
            raise ValueError(f"modulation_order must be a power of two >= 2, got {self.modulation_order}")
        if not 0.0 < self.coding_rate <= 1.0:
            raise ValueError(f"coding_rate must be in (0,1], got {self.coding_rate}")

    def with_utilization(self, rb_utilization: float) -> "RadioConfig":
        return replace(self, rb_utilization=rb_utilization)


@dataclass(frozen=True)
class BurstModel:
    """Periodic Ethernet burst transport of x-haul data over the PON.

    payload_bytes / frame_bytes are the Ethernet payload and maximum frame
    sizes; burst_interval_s is the burst period (at most one TTI).
    """

    burst_interval_s: float
    tti_s: float
    payload_bytes: int = 1500
    frame_bytes: int = 1542

    def __post_init__(self):
        if self.burst_interval_s <= 0.0:
            raise ValueError("burst_interval_s must be > 0")
        if self.tti_s <= 0.0:
            raise ValueError("tti_s must be > 0")
        if self.burst_interval_s > self.tti_s + 1e-15:
            raise ValueError("burst_interval_s must not exceed tti_s")
        if self.frame_bytes < self.payload_bytes:
            raise ValueError("frame_bytes must be >= payload_bytes")


def datarate_split72(cfg: RadioConfig) -> float:
    """Uplink-style split-7.2 x-haul datarate in bits/s.

    n_ports * n_rb * sc_per_rb * sym_per_subframe / subframe_s
    * rb_utilization * quantizer_bits * 2 (I and Q) * fh_overhead
    """
    return (
        cfg.n_ports * cfg.n_rb * cfg.sc_per_rb * cfg.sym_per_subframe
        / cfg.subframe_s
        * cfg.rb_utilization * cfg.quantizer_bits * 2.0 * cfg.fh_overhead
    )


def datarate_split73(cfg: RadioConfig) -> float:
    """Split-7.3 x-haul datarate in bits/s (modulated symbols cross the link).

    n_layers * n_rb * sc_per_rb * sym_per_subframe / subframe_s
    * rb_utilization * (1 - resource_overhead) * quantizer_bits
    * log2(modulation_order) * fh_overhead
    """
    if cfg.modulation_order < 2:
        raise ValueError("modulation_order must be >= 2 for split 7.3")
    return (
        cfg.n_layers * cfg.n_rb * cfg.sc_per_rb * cfg.sym_per_subframe
        / cfg.subframe_s
        * cfg.rb_utilization * (1.0 - cfg.resource_overhead)
        * cfg.quantizer_bits * math.log2(cfg.modulation_order) * cfg.fh_overhead
    )


def frames_per_burst(rate_bps: float, bm: BurstModel) -> int:
    """Number of Ethernet frames per burst: ceil(rate * interval / payload).

    The payload is configured in bytes; the single byte->bit conversion
    (* 8) happens in the denominator here.
    """
    if rate_bps < 0.0:
        raise ValueError(f"rate_bps must be >= 0, got {rate_bps}")
    if rate_bps == 0.0:
        return 0
    return math.ceil(rate_bps * bm.burst_interval_s / (8.0 * bm.payload_bytes))


def effective_throughput(frames: int, bm: BurstModel) -> float:
    """Actual flow throughput in bits/s given whole frames per burst.

    frame_bytes is converted to bits here (* 8), once.
    """
    if frames < 0:
        raise ValueError(f"frames must be >= 0, got {frames}")
    return frames * bm.frame_bytes * 8.0 / bm.burst_interval_s


def total_processing_gops(cfg: RadioConfig) -> float:
    """Total RU/DU/CU processing effort per TTI in giga-operations.

    (3*n_ant + n_ant^2 + (1/3)*modulation_bits*coding_rate*n_layers) * n_rb/5
    """
    return (
        3.0 * cfg.n_antennas
        + cfg.n_antennas ** 2
        + (1.0 / 3.0) * cfg.modulation_bits * cfg.coding_rate * cfg.n_layers
    ) * cfg.n_rb / 5.0


def apportion_processing(total_gops: float, split: SplitOption) -> tuple[float, float]:
    """Split a total effort into (ru_gops, ducu_gops); the parts sum exactly."""
    ru = split.ru_processing_fraction * total_gops
    return ru, total_gops - ru


def split_processing(cfg: RadioConfig, split: SplitOption) -> tuple[float, float]:
    """RU-side and DU/CU-side processing effort for cfg under a split option."""
    return apportion_processing(total_processing_gops(cfg), split)


@dataclass(frozen=True)
class CalibratedProfile:
    """A named radio parameter set with its derived reference figures."""

    name: str
    ul_config: RadioConfig   # split-7.2 uplink stream
    dl_config: RadioConfig   # split-7.3 downlink stream
    burst: BurstModel

    @property
    def ul_rate_bps(self) -> float:
        return datarate_split72(self.ul_config)

    @property
    def dl_rate_bps(self) -> float:
        return datarate_split73(self.dl_config)

    @property
    def total_gops_per_tti(self) -> float:
        return total_processing_gops(self.ul_config)


def profile_2x2_50mhz() -> CalibratedProfile:
    """Calibrated 2x2 MIMO, 2-layer, 50 MHz / 15 kHz SCS profile.

    Free parameters (utilization, quantizer resolution, overheads, coding
    rate) were fitted once so the profile lands on the reference operating
    point: ~2.3 Gbps uplink with split 7.2, ~0.43 Gbps downlink with split
    7.3, and ~600 GOPS/TTI total processing. 270 RBs at 12 sub-carriers,
    14 symbols per 0.5 ms subframe. The downlink carries already-modulated
    16-QAM symbols, so its quantizer term is 1 and the 25.6% resource
    overhead absorbs control/reference elements.
    """
    ul = RadioConfig(
        n_ports=2, n_layers=2, n_rb=270, sc_per_rb=12, sym_per_subframe=14,
        subframe_s=0.5e-3, rb_utilization=0.8, quantizer_bits=8,
        fh_overhead=1.0, resource_overhead=0.0, modulation_order=16,
        n_antennas=2, modulation_bits=4, coding_rate=0.40,
    )
    dl = RadioConfig(
        n_ports=2, n_layers=2, n_rb=270, sc_per_rb=12, sym_per_subframe=14,
        subframe_s=0.5e-3, rb_utilization=0.8, quantizer_bits=1,
        fh_overhead=1.0, resource_overhead=0.256, modulation_order=16,
        n_antennas=2, modulation_bits=4, coding_rate=0.40,
    )
    burst = BurstModel(burst_interval_s=31.25e-6, tti_s=0.5e-3)
    return CalibratedProfile(name="2x2-50mhz", ul_config=ul, dl_config=dl, burst=burst)
