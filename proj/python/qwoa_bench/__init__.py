"""Python bindings for the non-variational QWOA maxcut benchmark."""

from ._qwoa import (
    CapacityError,
    FormatError,
    InvalidArgument,
    IoError,
    ObjectiveTable,
    WeightedGraph,
    amplification,
    apply_mixer,
    count_local_optima,
    evolve,
    exact_solve_probability,
    expand_schedule,
    expectation,
    fit_required_iterations,
    four_shot_probability,
    generate_instance,
    grover_required_iterations,
    grover_success_probability,
    interpolate_p_star,
    library_instance,
    load_library,
    local_optima,
    local_search_solve_probability,
    objective_table,
    optimal_probability,
    optimize,
    round_half_up,
    run_cli,
)

__version__ = "0.1.0"


def main(argv=None):
    """Console entry point mirroring the qwoa-bench executable."""
    import sys

    code, out, err = run_cli(list(sys.argv[1:] if argv is None else argv))
    sys.stdout.write(out)
    sys.stderr.write(err)
    return code
