"""JSON Schemas (draft 2020-12) for ``--style json`` output, one per subcommand."""

_NUM = {"type": "number"}
_STR = {"type": "string"}
_BOOL = {"type": "boolean"}


def _obj(props: dict, required=None) -> dict:
    return {
        "$schema": "https://json-schema.org/draft/2020-12/schema",
        "type": "object",
        "properties": props,
        "required": sorted(required if required is not None else props),
        "additionalProperties": False,
    }


DIFF = _obj({"input": _STR, "order": {"type": "integer", "minimum": 1},
             "result": _STR, "latex": _STR})

EXPAND = _obj({
    "dependent": _STR, "independent": _STR, "order": {"type": "integer", "minimum": 1},
    "progression": {"type": ["string", "null"]},
    "result": _STR, "latex": _STR, "numerator": _STR, "denominator": _STR,
})

_PARAM = {
    "type": "object",
    "properties": {"bindings": {"type": "object", "additionalProperties": _STR},
                   "t0": _NUM, "dt_value": _NUM},
    "required": ["bindings", "t0", "dt_value"],
}

IDENTITY = _obj({
    "identity": _STR, "trials": {"type": "integer", "minimum": 1}, "max_rel_err": _NUM,
    "tolerance": _NUM, "passed": _BOOL,
    "counterexample": {
        "type": "object",
        "properties": {"parametrization": _PARAM, "lhs": _NUM, "rhs": _NUM, "rel_err": _NUM},
        "required": ["parametrization", "lhs", "rhs", "rel_err"],
    },
}, required=["identity", "trials", "max_rel_err", "tolerance", "passed"])

CHAIN2 = _obj({
    "y_of_x": _STR, "x_of_t": _STR, "naive": _STR, "faa_di_bruno": _STR, "direct": _STR,
    "naive_differs_from_direct": _BOOL, "full_form_identity_holds": _BOOL,
    "printed_form_identity_holds": _BOOL, "passed": _BOOL,
})

INVERSE = _obj({
    "y_of_x": _STR, "first_derivative": _STR, "second_derivative": _STR,
    "inverse_second_derivative": _STR, "general_identity_holds": _BOOL,
    "numeric_max_rel_err": {"type": ["number", "null"]}, "passed": _BOOL,
})

DXDX = _obj({
    "variable": _STR, "full_form": _STR, "full_form_is_zero": _BOOL,
    "bare_ratio": _STR, "bare_ratio_is_zero": _BOOL, "passed": _BOOL,
})

_BRANCH = {"type": "object", "properties": {"c1": _NUM, "c2": _NUM},
           "required": ["c1", "c2"], "additionalProperties": False}

SOLVE_ODE = _obj({
    "f": _STR, "solution": _STR,
    "constants": {"type": "object",
                  "properties": {"minus_branch": _BRANCH, "plus_branch": _BRANCH},
                  "required": ["minus_branch", "plus_branch"], "additionalProperties": False},
    "max_residual_minus_branch": _NUM, "max_residual_plus_branch": _NUM,
    "step": _NUM, "span": _NUM, "tolerance": _NUM, "passed": _BOOL,
})

EVAL = _obj({"input": _STR, "parametrization": _PARAM, "value": _NUM})

ERROR = _obj({"error": _STR, "message": _STR, "span": {"type": ["array", "null"]}})

SCHEMAS = {
    "diff": DIFF,
    "expand": EXPAND,
    "verify chain2": CHAIN2,
    "verify inverse": INVERSE,
    "verify dxdx": DXDX,
    "verify expansion-oracle": IDENTITY,
    "solve-ode": SOLVE_ODE,
    "eval": EVAL,
    "error": ERROR,
}
