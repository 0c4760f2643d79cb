"""JSON Schemas for the scenario file format and CLI JSON reports.

These are the published contracts: the command-line front end's JSON
output validates against them, and scenario files are checked against
SCENARIO_SCHEMA semantics by the loader (which is stricter: it also
verifies normalization and event legality, which no schema can).
"""

from __future__ import annotations

_COMPLEX_PAIR = {
    "type": "array",
    "items": {"type": "number"},
    "minItems": 2,
    "maxItems": 2,
}

SCENARIO_SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "title": "knowctx scenario",
    "type": "object",
    "required": ["layers", "first_layer", "transitions"],
    "additionalProperties": False,
    "properties": {
        "name": {"type": "string"},
        "layers": {
            "type": "array",
            "minItems": 1,
            "items": {
                "type": "object",
                "required": ["size", "knowability"],
                "additionalProperties": False,
                "properties": {
                    "size": {"type": "integer", "minimum": 1},
                    "knowability": {"enum": [1, 2, 3]},
                },
            },
        },
        "first_layer": {"type": "array", "items": _COMPLEX_PAIR, "minItems": 1},
        "transitions": {
            "type": "array",
            "items": {
                "type": "array",
                "items": {"type": "array", "items": _COMPLEX_PAIR, "minItems": 1},
                "minItems": 1,
            },
        },
        "events": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["n", "kind", "layer"],
                "additionalProperties": False,
                "properties": {
                    "n": {"type": "integer", "minimum": 0},
                    "kind": {"enum": ["attain", "observe", "erase", "promote"]},
                    "layer": {"type": "integer", "minimum": 0},
                    "outcome": {"type": "integer", "minimum": 0},
                },
            },
        },
    },
}

_DISTRIBUTION = {
    "type": "object",
    "required": ["layer", "labels", "values", "kind", "observable"],
    "properties": {
        "layer": {"type": "integer"},
        "labels": {"type": "array", "items": {"type": "string"}},
        "values": {"type": "array", "items": {"type": "number"}},
        "kind": {"enum": ["probability", "propensity"]},
        "observable": {"type": "boolean"},
        "conditioning": {"type": "string"},
        "normalization_deviation": {"type": "number"},
        "warnings": {"type": "array", "items": {"type": "string"}},
    },
}

EVAL_REPORT_SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "title": "knowctx eval report",
    "type": "object",
    "required": ["scenario", "seed", "rule", "trace", "distribution"],
    "properties": {
        "scenario": {"type": "string"},
        "seed": {"type": "integer"},
        "rule": {"type": "string"},
        "trace": {
            "type": "array",
            "minItems": 1,
            "items": {
                "type": "object",
                "required": ["event", "state"],
                "properties": {
                    "n": {"type": ["integer", "null"]},
                    "event": {"type": ["string", "null"]},
                    "state": {"type": "string"},
                },
            },
        },
        "distribution": _DISTRIBUTION,
        "warnings": {"type": "array", "items": {"type": "string"}},
    },
}

_DOF = {
    "type": ["object", "null"],
    "required": ["unknowns", "conditions", "available", "required"],
    "properties": {
        "unknowns": {"type": "integer"},
        "conditions": {"type": "integer"},
        "available": {"type": "integer"},
        "required": {"type": "integer"},
        "first_layer_available": {"type": "integer"},
        "first_layer_required": {"type": "integer"},
        "notes": {"type": "array", "items": {"type": "string"}},
    },
}

FEASIBILITY_REPORT_SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "title": "knowctx feasibility report",
    "type": "object",
    "required": ["shape", "rule", "verdict", "restarts", "seed", "generator"],
    "properties": {
        "shape": {
            "type": "array",
            "items": {"type": "integer", "minimum": 1},
            "minItems": 2,
            "maxItems": 2,
        },
        "rule": {"type": "string"},
        "mode": {"enum": ["polynomial", "sampled"]},
        "verdict": {
            "enum": ["feasible", "no_solution_found", "analytically_inadmissible"]
        },
        "reason": {"type": "string"},
        "restarts": {"type": "integer"},
        "seed": {"type": "integer"},
        "generator": {"type": "string"},
        "best_residual": {"type": ["number", "null"]},
        "witness": {
            "type": ["array", "null"],
            "items": {"type": "array", "items": _COMPLEX_PAIR},
        },
        "dof": _DOF,
        "jacobian_rank": {"type": ["integer", "null"]},
        "tolerance": {"type": "number"},
        "refutation_threshold": {"type": "number"},
        "propensity_floor": {"type": "number"},
        "all_restarts_refuted": {"type": ["boolean", "null"]},
        "degenerate_excluded": {"type": "integer"},
        "iterations_total": {"type": "integer"},
        "notes": {"type": "array", "items": {"type": "string"}},
        "independence_check": {"type": ["number", "null"]},
    },
}

SCAN_REPORT_SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "title": "knowctx scan report",
    "type": "object",
    "required": ["seed", "restarts", "rows"],
    "properties": {
        "seed": {"type": "integer"},
        "restarts": {"type": "integer"},
        "rows": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["m", "m_prime", "gamma", "verdict"],
                "properties": {
                    "m": {"type": "integer"},
                    "m_prime": {"type": "integer"},
                    "gamma": {"type": "number"},
                    "admissible": {"type": ["boolean", "null"]},
                    "verdict": {"type": "string"},
                    "best_residual": {"type": ["number", "null"]},
                    "dof_available": {"type": ["integer", "null"]},
                    "dof_required": {"type": ["integer", "null"]},
                },
            },
        },
    },
}

MC_REPORT_SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "title": "knowctx mc report",
    "type": "object",
    "required": ["scenario", "seed", "generator", "trials", "layer", "rows"],
    "properties": {
        "scenario": {"type": "string"},
        "seed": {"type": "integer"},
        "generator": {"type": "string"},
        "rule": {"type": "string"},
        "trials": {"type": "integer"},
        "layer": {"type": "integer"},
        "rows": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["alternative", "count", "freq"],
                "properties": {
                    "alternative": {"type": "string"},
                    "count": {"type": "integer"},
                    "freq": {"type": "number"},
                    "exact": {"type": ["number", "null"]},
                    "sigma": {"type": ["number", "null"]},
                },
            },
        },
    },
}
