"""Rainbow bounded-degree tree embeddings in random and perturbed graphs."""

from ._rainbowtrees import (
    CapacityError,
    ContractError,
    DomainError,
    Graph,
    ParameterError,
    StructuralError,
    Tree,
    embed_almost_spanning,
    embed_spanning,
    find_rainbow_spanning_tree,
    gen_gnp,
    gen_seed_graph,
    highly_connected_partition,
    is_eta_r_expander,
    lemma_stats,
    perturb,
    random_tree,
    run_single_trial,
    run_trials,
    sparsify,
    suzuki_check,
    uniform_colouring,
    vertex_connectivity,
    wilson_interval,
)

__all__ = [
    "CapacityError",
    "ContractError",
    "DomainError",
    "Graph",
    "ParameterError",
    "StructuralError",
    "Tree",
    "embed_almost_spanning",
    "embed_spanning",
    "find_rainbow_spanning_tree",
    "gen_gnp",
    "gen_seed_graph",
    "highly_connected_partition",
    "is_eta_r_expander",
    "lemma_stats",
    "perturb",
    "random_tree",
    "run_single_trial",
    "run_trials",
    "sparsify",
    "suzuki_check",
    "uniform_colouring",
    "vertex_connectivity",
    "wilson_interval",
]
