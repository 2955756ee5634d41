"""Topological signal processing over cell multicomplexes."""

from .boundary import (
    IncidenceMatrix,
    cross_boundary_from_ell,
    cross_boundary_from_m,
    extract_blocks,
    mono_b1,
    mono_b2,
)
from .complex import Cell, CellMultiComplex, build_complex, cell_count, flatten
from .laplacians import (
    CrossBetti,
    CrossLaplacian,
    cone_count_oracle,
    cross_betti,
    cross_laplacian,
    harmonic_cross_hubs,
    hodge_laplacians,
)
from .learn import (
    alpha_coefficients,
    cross_hub_intensity,
    curl_energy_ratio,
    enumerate_candidates,
    learn_topology,
    select_cells,
)
from .signals import (
    CochainSignal,
    HodgeSplit,
    cft,
    cmc_ft,
    cross_curl,
    cross_divergence,
    estimate_components,
    hodge_split_cross,
    hodge_split_mono,
    icft,
    icmc_ft,
    nmse,
)
from .sparse import SparseCode, basis_pursuit, scaled_epsilon, sparsity_curve
from .spectral import EigenDecomposition, eig_sym, kernel_basis, numerical_rank, pinv
from .synth import RandomCmcConfig, denoise_experiment, gen_signals, random_cmc, sparsity_experiment

__all__ = [name for name in dir() if not name.startswith("_")]
