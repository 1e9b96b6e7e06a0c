"""Beacon-rate congestion control simulator (Swarm FREDY and Swarm DIFRA)."""

from ._core import (
    AllTies,
    ConfigParseError,
    DegenerateSample,
    InvalidConfig,
    UndefinedBalance,
    __version__,
    aligned_friedman,
    brac_decide,
    channel_occupancy,
    clamp_dbr,
    compute_tdbr,
    config_keys,
    ks_normality,
    network_balance,
    normalize_config,
    run_replication,
    sdidi_classify,
    sdidi_probability,
    simulate,
    validate_config,
    wilcoxon_signed_rank,
)

__all__ = [name for name in dir() if not name.startswith("_")] + ["__version__"]
