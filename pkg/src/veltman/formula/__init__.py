"""Formula syntax, classes, normal forms and schemata."""
from .classes import ClassReport, classify, es2_level, in_bs1, in_es2_stage, in_es3, in_es4, in_ep2c  # noqa: F401
from .normal import (  # noqa: F401
    NormalFormError, box_set, boxed_basis, dnf_disjuncts, evaluate, full_dnf, modal_atoms,
)
from .parser import ParseError, parse_formula, render_formula  # noqa: F401
from .schemas import (  # noqa: F401
    IL_AXIOMS, Schema, SchemaError, get_schema, instantiate, is_box_cnf, match_schema,
)
from .syntax import (  # noqa: F401
    BOT, TOP, And, Bot, Box, Formula, Imp, Not, Or, Rhd, Var, conj, diamond, disj, equiv,
    flatten, iff, size, subformulas, substitute, variables,
)
