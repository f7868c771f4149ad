"""Interaction toolkit for set functions on the full subset lattice.

Extracts AND (co-appearance) and OR (any-appearance) interaction effects
from a table of 2^n values, bridges them to Shapley-style attributions,
and solves a sparsity-seeking split of a game into few strong effects.
"""

from .concepts import (
    Concept,
    ConceptReport,
    extract_salient,
    load_report,
    plot_csv,
    render_report,
    report_to_doc,
)
from .decompose import (
    DecomposerConfig,
    DecompositionResult,
    decompose,
    decomposition_to_doc,
    load_decomposition,
    mixed_faithfulness_error,
    objective,
    subgradient,
    tau_bounds,
    trace_csv,
)
from .interactions import (
    AND,
    OR,
    AxiomReport,
    InteractionVector,
    and_interactions,
    and_reconstruct,
    faithfulness_error,
    interaction_records,
    interactions_to_doc,
    mixed_reconstruct,
    or_interactions,
    or_reconstruct,
    reconstruct_all,
    verify_axioms,
)
from .lattice import (
    LatticeSizeError,
    apply_t_and,
    apply_t_and_transpose,
    apply_t_or,
    apply_t_or_transpose,
    as_lattice,
    lattice_cap,
    mask_of,
    members_of,
    mobius_transform,
    reflect,
    zeta_transform,
)
from .shapley import (
    AttributionVector,
    IndexTable,
    shapley_interaction_direct,
    shapley_interaction_index,
    shapley_taylor,
    shapley_values,
    shapley_values_permutation_oracle,
)
from .synthetic import (
    SyntheticGameSpec,
    brute_force_and,
    brute_force_or,
    dense_t_and,
    dense_t_or,
    generate_game,
    random_game,
)
from .table import (
    OracleError,
    TableFormatError,
    ValueTable,
    default_players,
    load_value_table,
    read_table,
    save_value_table,
    subprocess_oracle_fill,
    write_table,
)

__version__ = "0.1.0"

__all__ = [
    "AND",
    "OR",
    "AttributionVector",
    "AxiomReport",
    "Concept",
    "ConceptReport",
    "DecomposerConfig",
    "DecompositionResult",
    "IndexTable",
    "InteractionVector",
    "LatticeSizeError",
    "OracleError",
    "SyntheticGameSpec",
    "TableFormatError",
    "ValueTable",
    "and_interactions",
    "and_reconstruct",
    "apply_t_and",
    "apply_t_and_transpose",
    "apply_t_or",
    "apply_t_or_transpose",
    "as_lattice",
    "brute_force_and",
    "brute_force_or",
    "decompose",
    "decomposition_to_doc",
    "default_players",
    "dense_t_and",
    "dense_t_or",
    "extract_salient",
    "faithfulness_error",
    "generate_game",
    "interaction_records",
    "interactions_to_doc",
    "lattice_cap",
    "load_decomposition",
    "load_report",
    "load_value_table",
    "mask_of",
    "members_of",
    "mixed_faithfulness_error",
    "mixed_reconstruct",
    "mobius_transform",
    "objective",
    "or_interactions",
    "or_reconstruct",
    "plot_csv",
    "random_game",
    "read_table",
    "reconstruct_all",
    "reflect",
    "render_report",
    "report_to_doc",
    "save_value_table",
    "shapley_interaction_direct",
    "shapley_interaction_index",
    "shapley_taylor",
    "shapley_values",
    "shapley_values_permutation_oracle",
    "subgradient",
    "subprocess_oracle_fill",
    "tau_bounds",
    "trace_csv",
    "verify_axioms",
    "write_table",
    "zeta_transform",
]
