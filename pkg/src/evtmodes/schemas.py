"""JSON schemas for every JSON artifact the CLI emits.

The schema test validates each emitted file against these; downstream
consumers (the figure renderer) rely on them.
"""

_FINITE_OR_NULL = {"type": ["number", "null"]}

RETURNS_META = {
    "type": "object",
    "required": ["tickers", "T_day", "N_days", "delta_t"],
    "properties": {
        "tickers": {"type": "array", "items": {"type": "string"}, "minItems": 1},
        "T_day": {"type": "integer", "minimum": 1},
        "N_days": {"type": "integer", "minimum": 1},
        "delta_t": {"type": "integer", "minimum": 1},
        "kind": {"type": "string"},
    },
}

GROUND_TRUTH = {
    "type": "object",
    "required": ["market_loading", "sector_of", "sector_loadings", "profile", "seeds"],
    "properties": {
        "market_loading": {"type": "number"},
        "sector_of": {"type": "array", "items": {"type": "integer"}},
        "sector_loadings": {"type": "array", "items": {"type": "number"}},
        "idio_loadings": {"type": "array", "items": {"type": "number"}},
        "profile": {"type": "array", "items": {"type": "number"}},
        "seeds": {"type": "object"},
    },
}

FIT_RECORD = {
    "type": "object",
    "required": ["mode", "tail", "alpha", "threshold", "gamma", "se_gamma",
                 "sigma", "se_sigma", "n", "nrmsd", "theta"],
    "properties": {
        "mode": {"type": "integer", "minimum": 1},
        "tail": {"enum": ["pos", "neg"]},
        "alpha": {"type": "number", "exclusiveMinimum": 0, "exclusiveMaximum": 1},
        "threshold": _FINITE_OR_NULL,
        "gamma": _FINITE_OR_NULL,
        "se_gamma": _FINITE_OR_NULL,
        "sigma": _FINITE_OR_NULL,
        "se_sigma": _FINITE_OR_NULL,
        "n": {"type": "integer", "minimum": 0},
        "nrmsd": _FINITE_OR_NULL,
        "theta": _FINITE_OR_NULL,
        "error": {"type": ["string", "null"]},
    },
}

FIT_REPORT = {
    "type": "object",
    "required": ["kind", "records"],
    "properties": {
        "kind": {"enum": ["fixed", "rolling"]},
        "window": {"type": ["integer", "null"]},
        "residuals": {"type": "boolean"},
        "records": {"type": "array", "items": FIT_RECORD},
    },
}

GEV_RECORD = {
    "type": "object",
    "required": ["mode", "tail", "alpha", "gamma", "a", "b", "block_len", "zeta"],
    "properties": {
        "mode": {"type": "integer", "minimum": 1},
        "tail": {"enum": ["pos", "neg"]},
        "alpha": {"type": "number"},
        "gamma": {"type": "number"},
        "a": {"type": "number", "exclusiveMinimum": 0},
        "b": {"type": "number"},
        "block_len": {"type": "integer", "minimum": 1},
        "zeta": {"type": "number", "exclusiveMinimum": 0},
    },
}

GEV_TABLE = {
    "type": "object",
    "required": ["records"],
    "properties": {"records": {"type": "array", "items": GEV_RECORD}},
}

EIGENVECTOR_REPORT = {
    "type": "array",
    "items": {
        "type": "object",
        "required": ["mode", "eigenvalue", "participation_ratio",
                     "dominant_sector", "entries"],
        "properties": {
            "mode": {"type": "integer", "minimum": 1},
            "eigenvalue": {"type": "number"},
            "participation_ratio": {"type": "number", "exclusiveMinimum": 0},
            "dominant_sector": {"type": "string"},
            "sector_weights": {"type": "object"},
            "entries": {"type": "array", "items": {"type": "number"}},
        },
    },
}

ARTIFACT = {
    "type": "object",
    "required": ["kind", "path"],
    "properties": {
        "kind": {"type": "string"},
        "path": {"type": "string"},
        "mode": {"type": "integer"},
        "tail": {"enum": ["pos", "neg"]},
        "alpha": {"type": "number"},
    },
}

MANIFEST = {
    "type": "object",
    "required": ["runs"],
    "properties": {
        "runs": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["command", "config", "config_hash", "artifacts"],
                "properties": {
                    "command": {"type": "string"},
                    "config": {"type": "object"},
                    "config_hash": {"type": "string", "pattern": "^[0-9a-f]{64}$"},
                    "artifacts": {"type": "array", "items": ARTIFACT},
                },
            },
        }
    },
}

ERROR = {
    "type": "object",
    "required": ["error", "message", "command"],
    "properties": {
        "error": {"type": "string"},
        "message": {"type": "string"},
        "command": {"type": "string"},
    },
}
