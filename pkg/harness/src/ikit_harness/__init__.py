"""Model-side companion for ikit.

Builds the 2**n masked variants of an input, sweeps a model over them,
and emits value tables in the core interchange formats — or serves the
model live over the EVAL/QUIT oracle protocol.  The core toolkit is only
ever reached through those formats and protocols, never imported.
"""

from .evaluate import ModelEvalError, evaluate_to_table, get_scalarizer, progress_path
from .models import additive_model, build_model, constant_model, ripple_model
from .plan import (
    MaskingPlan,
    PlanError,
    build_masked_batch,
    load_plan,
    plan_from_doc,
    plan_to_doc,
    save_plan,
)
from .serve import serve_oracle
from .tableio import read_table_file, table_bytes, write_table_file

__version__ = "0.1.0"

__all__ = [
    "MaskingPlan",
    "ModelEvalError",
    "PlanError",
    "additive_model",
    "build_masked_batch",
    "build_model",
    "constant_model",
    "evaluate_to_table",
    "get_scalarizer",
    "load_plan",
    "plan_from_doc",
    "plan_to_doc",
    "progress_path",
    "read_table_file",
    "ripple_model",
    "save_plan",
    "serve_oracle",
    "table_bytes",
    "write_table_file",
]
