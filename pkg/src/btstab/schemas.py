"""JSON schemas for the CLI outputs (draft 2020-12)."""

_int_or_null = {"type": ["integer", "null"]}
_str_list = {"type": "array", "items": {"type": "string"}}

DESCRIPTOR = {
    "type": "object",
    "required": ["kind", "spec", "a", "b", "d", "diff_val", "diff_recomputed", "e_EF", "f_EF"],
    "properties": {
        "kind": {"enum": ["unramified", "ramified"]},
        "spec": {"type": "string"},
        "a": {"type": "string"},
        "b": {"type": "string"},
        "d": {"type": ["integer", "string", "null"]},
        "diff_val": {"type": "integer", "minimum": 0},
        "diff_recomputed": {"type": "integer", "minimum": 0},
        "e_EF": {"enum": [1, 2]},
        "f_EF": {"enum": [1, 2]},
    },
}

EXTENSIONS = {"type": "array", "items": DESCRIPTOR}

PARAMS = {
    "type": "object",
    "required": ["m", "t", "eps", "del"],
    "properties": {"m": {"type": "integer"}, "t": _int_or_null, "eps": {"type": "integer"}, "del": _int_or_null},
}

STABILIZER = {
    "type": "object",
    "required": ["ext", "point", "n", "N", "params", "parse_choice", "mode", "oracle_size", "closed_size",
                 "verdict", "witnesses"],
    "properties": {
        "ext": {"type": "string"},
        "point": {"type": "string"},
        "n": {"type": "integer", "minimum": 1},
        "N": {"type": "integer", "minimum": 1},
        "params": PARAMS,
        "parse_choice": {"enum": ["union_first", "difference_last"]},
        "mode": {"enum": ["orbit", "vertex"]},
        "oracle_size": _int_or_null,
        "closed_size": _int_or_null,
        "verdict": {"enum": ["equal", "closed_subset_strict", "mismatch", None]},
        "witnesses": _str_list,
    },
}

_norm_check = {
    "type": "object",
    "required": ["ext", "name", "n", "holds"],
    "properties": {"ext": {"type": "string"}, "name": {"type": "string"}, "n": {"type": "integer"},
                   "holds": {"type": "boolean"}, "t": _int_or_null, "exponent": _int_or_null,
                   "witness": {"type": ["string", "null"]}},
}

_lemma_j = {
    "type": "object",
    "required": ["ext", "n", "N", "center", "radius", "target", "stabilizer_size", "target_size", "equal",
                 "witnesses"],
    "properties": {"equal": {"type": "boolean"}, "witnesses": _str_list,
                   "stabilizer_size": {"type": "integer"}, "target_size": {"type": "integer"}},
}

_theorem = {
    "type": "object",
    "required": ["check", "ext"],
    "properties": {"check": {"enum": ["equality", "containment", "equivariance"]}},
    "allOf": [
        {"if": {"properties": {"check": {"const": "equality"}}},
         "then": {"required": ["check", "orbit", "tree_level", "mutation"] + STABILIZER["required"]}},
        {"if": {"properties": {"check": {"const": "containment"}}},
         "then": {"required": ["point", "n", "N", "mode", "holds", "witnesses"]}},
        {"if": {"properties": {"check": {"const": "equivariance"}}},
         "then": {"required": ["point", "N", "h", "g", "oracle_equivariant", "closed_equivariant", "holds"]}},
    ],
}

_trees = {
    "type": "object",
    "required": ["ext", "check", "depth", "holds"],
    "properties": {"check": {"enum": ["dilation", "galois", "barbs"]}, "holds": {"type": "boolean"}},
}

_filtration = {
    "type": "object",
    "required": ["identity", "n", "N", "holds", "sizes"],
    "properties": {"holds": {"type": "boolean"},
                   "sizes": {"type": "array", "items": {"type": "integer"}, "minItems": 2, "maxItems": 2}},
}

_selftest = {
    "type": "object",
    "required": ["check", "trials", "failures", "holds"],
    "properties": {"trials": {"type": "integer", "minimum": 1}, "holds": {"type": "boolean"}},
}

RECORD = {"lf": _norm_check, "casselman": _norm_check, "lemma-j": _lemma_j, "theorem": _theorem,
          "trees": _trees, "filtrations": _filtration, "selftest": _selftest}


def verify_schema(suite: str) -> dict:
    return {
        "type": "object",
        "required": ["suite", "base", "passed", "results"],
        "properties": {
            "suite": {"const": suite},
            "base": {"type": "string"},
            "passed": {"type": "boolean"},
            "results": {"type": "array", "items": RECORD[suite]},
        },
    }


TREE = {
    "type": "object",
    "required": ["base", "ext", "depth", "vertices", "edges"],
    "properties": {
        "depth": {"type": "integer", "minimum": 0},
        "vertices": {"type": "array", "items": {
            "type": "object",
            "required": ["id", "x", "y", "n", "rational", "on_tree_F", "galois_fixed"],
            "properties": {"id": {"type": "integer"}, "n": {"type": "integer"}, "x": {"type": "string"},
                           "y": {"type": "string"}, "rational": {"type": "boolean"}},
        }},
        "edges": {"type": "array", "items": {"type": "array", "items": {"type": "integer"},
                                              "minItems": 2, "maxItems": 2}},
    },
}
