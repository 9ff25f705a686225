"""Bounded episodic-control memories for reinforcement learning."""

from ecmem._ecmem import (
    ActionMemory,
    AggregateRow,
    Backend,
    CentroidSnapshot,
    ConfigError,
    Env,
    EpsilonSchedule,
    EvalRecord,
    ExperimentConfig,
    GaussianProjection,
    KernelParams,
    StreamSpec,
    Strategy,
    aggregate_final,
    batch_kmeans,
    episode_returns,
    fraction_in_box,
    kernel_weight,
    make_env,
    read_csv,
    run_experiment,
    run_single,
    skew_phase_box,
    stream_study,
    synthetic_stream,
    write_csv,
)

__all__ = [
    "ActionMemory",
    "AggregateRow",
    "Backend",
    "CentroidSnapshot",
    "ConfigError",
    "Env",
    "EpsilonSchedule",
    "EvalRecord",
    "ExperimentConfig",
    "GaussianProjection",
    "KernelParams",
    "StreamSpec",
    "Strategy",
    "aggregate_final",
    "batch_kmeans",
    "episode_returns",
    "fraction_in_box",
    "kernel_weight",
    "make_env",
    "read_csv",
    "run_experiment",
    "run_single",
    "skew_phase_box",
    "stream_study",
    "synthetic_stream",
    "write_csv",
]
