from .suites import (
    SUITES,
    Setup,
    bench_model,
    data_path,
    data_text,
    derive_seed,
    example1_formula,
    fairness_formula,
    format_rows,
    run_setup,
    run_suite,
    sensitivity_formula,
    stats_unit_rows,
)
from .oracles import queue_fairness_oracle, queue_fairness_oracle_multi, thermostat_cycle_probability

__all__ = [
    "SUITES", "Setup", "bench_model", "data_path", "data_text", "derive_seed",
    "example1_formula", "fairness_formula", "format_rows", "run_setup",
    "run_suite", "sensitivity_formula", "stats_unit_rows",
    "queue_fairness_oracle", "queue_fairness_oracle_multi", "thermostat_cycle_probability",
]
