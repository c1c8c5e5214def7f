"""JSON schemas (draft-07) for the torcode/1 wire format."""

SCHEMA_VERSION = "torcode/1"

QUADEXT = {
    "type": "object",
    "required": ["p", "q", "s", "D", "approx"],
    "properties": {
        "p": {"type": "integer"},
        "q": {"type": "integer"},
        "s": {"type": "integer", "minimum": 1},
        "D": {"type": "integer", "minimum": 2},
        "approx": {"type": "string"},
    },
    "additionalProperties": False,
}

MATRIX = {
    "type": "array",
    "items": {"type": "array", "items": {"type": "integer"}, "minItems": 2, "maxItems": 2},
    "minItems": 2,
    "maxItems": 2,
}

FORM = {
    "type": "object",
    "required": ["a", "b", "c", "disc"],
    "properties": {
        "a": {"type": "integer"},
        "b": {"type": "integer"},
        "c": {"type": "integer"},
        "disc": {"type": "integer"},
    },
    "additionalProperties": False,
}

TRANSFORM = {
    "type": "object",
    "required": ["m", "det"],
    "properties": {"m": MATRIX, "det": {"enum": [1, -1]}},
    "additionalProperties": False,
}

CODING_SPEC = {
    "type": "object",
    "required": ["matrix", "p", "q", "K", "xi", "eta"],
    "properties": {
        "matrix": MATRIX,
        "p": {"type": "integer"},
        "q": {"type": "integer"},
        "K": {"type": "integer", "minimum": 1},
        "xi": QUADEXT,
        "eta": QUADEXT,
    },
    "additionalProperties": False,
}

KERNEL = {"type": "array", "items": {"type": "string"}}

REPORT_SCHEMA = {
    "$schema": "http://json-schema.org/draft-07/schema#",
    "type": "object",
    "required": [
        "schema",
        "input",
        "r",
        "sigma",
        "D",
        "form",
        "integral_minimum",
        "primitive",
        "bac",
        "mac",
        "warnings",
    ],
    "properties": {
        "schema": {"const": SCHEMA_VERSION},
        "input": {
            "type": "object",
            "required": ["matrix", "normalized_matrix", "trace_negated"],
            "properties": {
                "matrix": MATRIX,
                "normalized_matrix": MATRIX,
                "trace_negated": {"type": "boolean"},
            },
            "additionalProperties": False,
        },
        "r": {"type": "integer"},
        "sigma": {"enum": [1, -1]},
        "D": {"type": "integer"},
        "form": FORM,
        "integral_minimum": {"type": "integer", "minimum": 1},
        "primitive": {"type": "boolean"},
        "root": {
            "anyOf": [
                {"type": "null"},
                {
                    "type": "object",
                    "required": ["matrix", "exponent"],
                    "properties": {"matrix": MATRIX, "exponent": {"type": "integer", "minimum": 2}},
                    "additionalProperties": False,
                },
            ]
        },
        "bac": {
            "type": "object",
            "required": ["admits", "conjugator", "generator", "exceptional"],
            "properties": {
                "admits": {"type": "boolean"},
                "conjugator": {"anyOf": [{"type": "null"}, MATRIX]},
                "generator": {"anyOf": [{"type": "null"}, QUADEXT]},
                "exceptional": {"type": "boolean"},
            },
            "additionalProperties": False,
        },
        "mac": {
            "type": "object",
            "required": ["m", "specs", "kernels"],
            "properties": {
                "m": {"type": "integer", "minimum": 1},
                "specs": {"type": "array", "items": CODING_SPEC},
                "kernels": {"type": "array", "items": KERNEL},
            },
            "additionalProperties": False,
        },
        "warnings": {"type": "array", "items": {"type": "string"}},
    },
    "additionalProperties": False,
}

SPEC_LIST_SCHEMA = {
    "$schema": "http://json-schema.org/draft-07/schema#",
    "type": "object",
    "required": ["schema", "specs"],
    "properties": {
        "schema": {"const": SCHEMA_VERSION},
        "m": {"type": "integer"},
        "generator": {"anyOf": [{"type": "null"}, QUADEXT]},
        "exceptional": {"type": "boolean"},
        "specs": {"type": "array", "items": CODING_SPEC},
        "kernels": {"type": "array", "items": KERNEL},
        "warnings": {"type": "array", "items": {"type": "string"}},
    },
    "additionalProperties": False,
}

POINT_SCHEMA = {
    "$schema": "http://json-schema.org/draft-07/schema#",
    "type": "object",
    "required": ["schema"],
    "properties": {
        "schema": {"const": SCHEMA_VERSION},
        "word": {"type": "string"},
        "point": {
            "type": "object",
            "required": ["x", "y"],
            "properties": {"x": QUADEXT, "y": QUADEXT},
            "additionalProperties": False,
        },
        "round_trip_exact": {"type": "boolean"},
        "warnings": {"type": "array", "items": {"type": "string"}},
    },
    "additionalProperties": False,
}

FORMS_SCHEMA = {
    "$schema": "http://json-schema.org/draft-07/schema#",
    "type": "object",
    "required": ["schema"],
    "properties": {
        "schema": {"const": SCHEMA_VERSION},
        "form": FORM,
        "reduced": FORM,
        "transform": {"anyOf": [{"type": "null"}, TRANSFORM]},
        "cycle": {"type": "array", "items": FORM},
        "equivalent": {"type": "boolean"},
        "minimum": {"type": "integer"},
        "target": {"type": "integer"},
        "solutions": {
            "type": "array",
            "items": {"type": "array", "items": {"type": "integer"}, "minItems": 2, "maxItems": 2},
        },
    },
    "additionalProperties": False,
}
