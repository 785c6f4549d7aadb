"""Fibonacci-run graphs and Fibonacci cubes.

Set ``RUNCUBE_BACKEND=numpy`` before import to bypass the numba kernels.
"""
from ._backend import BACKEND, HAVE_NUMBA
from .analysis import (
    DegreeProfile,
    DiameterResult,
    WitnessPair,
    asymptotic_ratios,
    bfs_distances,
    conjectured_diameter,
    degree_profile,
    diameter_witness_pair,
    exact_diameter,
    parity_imbalance,
)
from .errors import (
    ArithmeticOverflowError,
    CapacityError,
    DecompositionError,
    DomainError,
    InvalidDenominatorError,
    InvalidInputError,
    RuncubeError,
)
from .graph import (
    CsrGraph,
    build_graph,
    decompose,
    edge_count_closed_form,
    edge_recursion_check,
    fibcube_edge_count,
    injection_phi_check,
)
from .hamilton import HamiltonResult, certificate_verify, hamiltonian_cycle, hamiltonian_path
from .series import (
    BiPoly,
    IntPoly,
    SeriesTable,
    expand_rational,
    fib,
    gf_cube_census,
    gf_down_degree,
    gf_up_degree,
)
from .strings import (
    BitVertex,
    Family,
    count_by_weight,
    enumerate_vertices,
    is_fibonacci_vertex,
    is_run_vertex,
    phi,
    phi_inverse,
)
from .structure import (
    CubeCensus,
    cube_census,
    independence_number,
    is_median_graph,
    is_partial_cube,
    theta,
)

__version__ = "0.1.0"
