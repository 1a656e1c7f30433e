"""Python access to the vibron exact-diagonalization core."""

from ._core import (
    BlockFilter,
    ConfigError,
    FockBasis,
    ModeConvention,
    NumericError,
    QuantumState,
    SparseOperator,
    WignerGrid,
    build,
    coherent3,
    eigenvalues,
    energy_density_3mode,
    linear_time_grid,
    low_depletion_nx,
    max_gap,
    number_state,
    phase_space_radius,
    quench,
    r_min,
    read_grid_csv,
    separatrix_energy,
    spin_coherent2,
    squeezing_nx,
    stationary_points,
    wigner_planar,
    wigner_sphere,
)

__version__ = "0.1.0"
