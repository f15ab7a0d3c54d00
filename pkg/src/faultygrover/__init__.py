"""Grover search with one faulty marked element: reduced simulators and geometric bounds."""

from faultygrover.density import (
    SymmetricDensity,
    apply_diffusion_density,
    apply_faulty_query_density,
    init_uniform_density,
    limit_state,
    reduce3,
    step_density,
    success_probs,
    trace_distance_to_limit,
)
from faultygrover.ensemble import (
    WeightedMixture,
    evolve_exact,
    mixture_to_density,
    sample_trajectory,
)
from faultygrover.reduced_state import (
    ReducedPureState,
    SearchSpace,
    SpherePoint,
    apply_diffusion,
    apply_query,
    from_sphere,
    grover_angle,
    init_uniform,
    measure_probs,
    step,
    to_sphere,
)

__all__ = [
    "ReducedPureState",
    "SearchSpace",
    "SpherePoint",
    "SymmetricDensity",
    "WeightedMixture",
    "apply_diffusion",
    "apply_diffusion_density",
    "apply_faulty_query_density",
    "apply_query",
    "evolve_exact",
    "from_sphere",
    "grover_angle",
    "init_uniform",
    "init_uniform_density",
    "limit_state",
    "measure_probs",
    "mixture_to_density",
    "reduce3",
    "sample_trajectory",
    "step",
    "step_density",
    "success_probs",
    "to_sphere",
    "trace_distance_to_limit",
]
