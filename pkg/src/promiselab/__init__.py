"""promiselab: a verification laboratory for promise problems.

Boolean function families over quantifier blocks, exact brute-force promise
semantics, a catalog of checkable strong-reduction transforms, compilation of
oracle-gate circuits into quantified families, adversarially resolved oracle
machines, and a randomized isolation reduction -- everything certified by
exhaustive checking at small widths.
"""

from .errors import (
    CapExceeded, IncompleteRegistry, LevelMismatch, ParseError, PathCapExceeded,
    PromiseLabError, ShapeError, TypeMismatch, UnknownRule, WidthError,
)
from .expr import (
    And, Const, Expr, Family, Not, Or, Var,
    add_leading_variable, evaluate, fix_first_block_prefix, from_truth_table,
    negate_block_inputs, negate_output, parse_expr, print_expr, truth_table,
)
from .semantics import (
    DEFAULT_CAP, ProblemId, ProblemKind, PromiseValue, Quantifier,
    dual_value, first_block_solution_set, qbf_value, solve,
)
from .reductions import (
    DEFAULT_REGISTRY, CheckResult, ReductionRule, Registry, RuleKind,
    apply_rule, build_uval_intersection, build_val_intersection,
    check_rule, check_uval_intersection, check_val_intersection, compose_rules,
)
from .circuits import (
    CompiledSigma2, CompiledUval2, Gate, OracleCircuit, SatGate,
    compile_sigma2, compile_uval2, eval_circuit, parse_circuit, validity_parts,
)
from .oracles import AdversaryTree, MACHINES, Transcript, run_adversarial
from .isolation import (
    HashConstraint, conjoin_hash, isolation_frequency, sample_hash,
    vv_decide, vv_possible_outputs,
)
from .harness import (
    CAMPAIGNS, Verdict, emit_hierarchy_dot, enumerate_truth_tables,
    full_campaign, random_family, verify_rule_exhaustive,
)

__version__ = "0.1.0"
