"""Systems, rules, preprocessing, the runner and invariant checks."""

from alba.engine.checks import (
    check_compact_appropriate,
    check_pivotality,
    check_safety,
    check_topological_adequacy,
    is_ackermann_ready,
    is_stripped,
)
from alba.engine.preprocess import distribute, eliminate_uniform, preprocess, split_top_level
from alba.engine.run import Mode, RunResult, Status, run
from alba.engine.system import (
    Member,
    Step,
    System,
    Trace,
    ackermann,
    apply_rule,
    approximate,
    eliminate_atom,
    replay,
    residuate,
    residuate_goal,
    split,
)

__all__ = [name for name in dir() if not name.startswith("_")]
