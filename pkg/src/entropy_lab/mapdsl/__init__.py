"""A small language for order-2 rational recurrences and its evaluators."""
from .parser import (Bin, MapSyntaxError, Neg, Num, ParseError, Pow, SemanticError, Var,
                     parse_ast, pretty, pretty_map, tokenize)
from .mapdef import DegenerateMapWarning, MapDef, builtin_map, parse_map
from .evaluate import (CombinedProfile, DegreeProfile, DenominatorVanished, SingularOrbit,
                       degree_profile_modp, eval_exact, laurent_stepper, profile, profile_pairs)

__all__ = [
    "Bin", "MapSyntaxError", "Neg", "Num", "ParseError", "Pow", "SemanticError", "Var",
    "parse_ast", "pretty", "pretty_map", "tokenize", "DegenerateMapWarning", "MapDef",
    "builtin_map", "parse_map", "CombinedProfile", "DegreeProfile", "DenominatorVanished",
    "SingularOrbit", "degree_profile_modp", "eval_exact", "laurent_stepper", "profile",
    "profile_pairs",
]
