"""Cell-free massive MIMO PHY simulation and fronthaul planning."""

from ._cfran import (
    __version__,
    calibrate_snr,
    default_config_json,
    default_topology_json,
    pathloss_db,
    percentile,
    place_rus_grid,
    quantization_plan,
    run_sweep,
    solve_lp_text,
    subspace_indices,
    torus_distance,
)

__all__ = [
    "__version__",
    "calibrate_snr",
    "default_config_json",
    "default_topology_json",
    "pathloss_db",
    "percentile",
    "place_rus_grid",
    "quantization_plan",
    "run_sweep",
    "solve_lp_text",
    "subspace_indices",
    "torus_distance",
]
