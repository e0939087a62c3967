"""Exact Gromov hyperbolicity of graphs and seeded G(n, p) experiments."""

from .errors import CapacityError, CrossComponentError, HypGraphError, InputError, InternalAssertionError, ParseError
from .experiments import ExperimentSummary, TrialRecord, run_dense_experiment, run_regime_experiment, wilson_interval
from .graph import GenSpec, Graph, bfs_distances, complement, connected_components, gen_gnp, gnp
from .hyperbolicity import (
    HypResult,
    QuadEvaluation,
    certify_lower_bound,
    eval_quadruple,
    find_induced_c4,
    hyperbolicity,
    hyperbolicity_naive,
    hyperbolicity_pruned,
)
from .io import load_graph, save_graph
from .metric import INF, DiameterReport, DistanceMatrix, apsp, check_delta_diameter_bound, diameter
from .probes import ProbeReport, expansion_survey, probe_vertex
from .regime import RegimePrediction, compute_i, dense_probabilities, first_moment_estimate, predict

__version__ = "0.1.0"
