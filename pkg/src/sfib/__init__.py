"""Sparse filtering with information-plane instrumentation.

Trains sparse filtering (SF) modules on synthetic Gaussian data and tracks,
at every optimizer iteration, the binned mutual information I[X;T] between
the input and the learned representation and the entropy H[T] of the
representation.
"""

from .sf_core import (
    col_normalize,
    init_weights,
    row_normalize,
    sf_forward,
    sf_objective,
    sf_objective_and_gradient,
    soft_abs,
)
from .infotheory import (
    BinSpec,
    DiscreteDistribution,
    JointCounts,
    discretize,
    empirical_distribution,
    entropy,
    fdl_objective_terms,
    information_plane_point,
    joint_counts,
    kl_divergence,
    kl_joint_vs_product,
    make_bin_spec,
    mutual_information,
)
from .optim import OptimizerConfig, TerminationReason, minimize, wolfe_line_search
from .datagen import (
    Dataset,
    MvnSpec,
    make_simulation_data,
    random_spd,
    sample_isotropic_gaussian,
    sample_mvn,
)
from .harness import (
    AggregateTrajectory,
    IterationRecord,
    RunTrajectory,
    SimulationConfig,
    aggregate,
    run_batch,
    run_single,
)
from .report import export_csv, render_dynamics_panels, render_information_plane

__version__ = "0.1.0"
