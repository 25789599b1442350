"""difflms: diffusion LMS over connected graphs, with a serial-scheduled variant.

Library + CLI for distributed parameter estimation: build a topology, pick a
combination rule, run no-cooperation / adapt-then-combine / combine-then-adapt
/ serial-scheduled LMS over seeded Monte Carlo data, and aggregate network
MSE/MSD learning curves and cost reports.
"""
from .algorithms import (Algorithm, Schedule, Trajectory, TrajectoryBatch,
                         atc_iteration, combine, cta_iteration, diffuse,
                         lms_adapt, nocoop_iteration, run_trajectories,
                         run_trajectory, si_lms_iteration)
from .combiners import (CombinationMatrix, Violation, build_rule, identity,
                        laplacian, metropolis, relative_degree, uniform,
                        validate)
from .experiment import (ConfigError, ExperimentConfig, ExperimentResult,
                         load_config, benchmark_scenarios, parse_config,
                         run_experiment, write_result)
from .graph import (ConnectivityRetriesExhausted, Graph, InvalidEdgeError,
                    Neighborhood, NotConnectedError, build_graph, degree,
                    load_edge_list, neighborhood, random_geometric_graph)
from .metrics import (CostReport, LearningCurve, average_curves, cost_report,
                      iterations_to_threshold, steady_state_mse_db)
from .signal_model import (InputProfile, NoiseProfile, Sample, draw_sample,
                           draw_samples, node_stream, random_parameter,
                           variance_profiles)

__version__ = "0.1.0"
