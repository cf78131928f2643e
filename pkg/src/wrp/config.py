"""Canonical serialization of models, payoffs, and numeric settings.

One dict shape per object, stable key order, floats via repr (shortest
round trip), arrays via a content hash.  Fingerprints of these dicts tag
caches and output files, so two runs agree byte for byte exactly when
their inputs agree.  The same dict shapes double as the on-disk JSON
schema read by the command line tools, except that tabulated jump
measures are inlined as lists in files and hashed in fingerprints.
"""
from __future__ import annotations

import hashlib
import json

import numpy as np

from .errors import SchemaError, UsageError
from .levy import GammaNegativeJumps, LevyTriplet, TabulatedJumps
from .payoff import FourierPayoff, make_indicator, make_put

__all__ = [
    "SCHEMA_VERSION",
    "model_dict",
    "payoff_dict",
    "fingerprint",
    "dump_model",
    "load_model",
    "dump_payoff",
    "load_payoff",
    "parse_grid_spec",
]

SCHEMA_VERSION = 1


def _array_digest(arr: np.ndarray) -> str:
    return hashlib.sha256(np.ascontiguousarray(arr, dtype=float).tobytes()).hexdigest()


def model_dict(triplet: LevyTriplet) -> dict:
    """Canonical dict of a model triplet; array-backed jump tables are
    represented by a content hash, not inlined."""
    if triplet.jumps is None:
        jumps = None
    elif isinstance(triplet.jumps, GammaNegativeJumps):
        jumps = {
            "kind": "gamma",
            "params": {"alpha": triplet.jumps.alpha, "beta": triplet.jumps.beta},
        }
    elif isinstance(triplet.jumps, TabulatedJumps):
        jumps = {
            "kind": "tabulated",
            "params": {
                "grid_sha256": _array_digest(triplet.jumps.grid),
                "values_sha256": _array_digest(triplet.jumps.values),
            },
        }
    else:
        raise SchemaError(f"unknown jump family {type(triplet.jumps).__name__}")
    return {
        "schema_version": SCHEMA_VERSION,
        "mu": triplet.mu,
        "sigma": triplet.sigma,
        "zeta": triplet.zeta,
        "jumps": jumps,
    }


def payoff_dict(payoff: FourierPayoff) -> dict:
    return {"schema_version": SCHEMA_VERSION, **payoff.params}


def fingerprint(payload: dict) -> str:
    """sha256 of the canonical JSON encoding of a payload dict."""
    text = json.dumps(payload, sort_keys=True, separators=(",", ":"), allow_nan=False)
    return hashlib.sha256(text.encode()).hexdigest()


def _read_json(path) -> dict:
    try:
        with open(path) as fh:
            payload = json.load(fh)
    except FileNotFoundError:
        raise UsageError(f"file not found: {path}") from None
    except json.JSONDecodeError as exc:
        raise SchemaError(f"{path} is not valid JSON: {exc}") from None
    if not isinstance(payload, dict):
        raise SchemaError(f"{path} must hold a JSON object")
    return payload


def _check_keys(payload: dict, required: set[str], what: str) -> None:
    keys = set(payload)
    if keys != required:
        missing = sorted(required - keys)
        extra = sorted(keys - required)
        parts = []
        if missing:
            parts.append(f"missing {missing}")
        if extra:
            parts.append(f"unexpected {extra}")
        raise SchemaError(f"{what} keys wrong: " + ", ".join(parts))
    version = payload.get("schema_version")
    if version != SCHEMA_VERSION:
        raise SchemaError(
            f"{what} declares schema_version={version}, this build reads {SCHEMA_VERSION}"
        )


def _number(payload: dict, key: str, what: str) -> float:
    value = payload[key]
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise SchemaError(f"{what} field {key!r} must be a number, got {value!r}")
    return float(value)


def dump_model(path, triplet: LevyTriplet) -> None:
    """Write a model file; tabulated jump tables are inlined as lists
    so the file round trips without side channels."""
    payload = model_dict(triplet)
    if isinstance(triplet.jumps, TabulatedJumps):
        payload["jumps"] = {
            "kind": "tabulated",
            "params": {
                "grid": triplet.jumps.grid.tolist(),
                "values": triplet.jumps.values.tolist(),
            },
        }
    with open(path, "w") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")


def load_model(path) -> LevyTriplet:
    payload = _read_json(path)
    _check_keys(payload, {"schema_version", "mu", "sigma", "zeta", "jumps"}, "model")
    spec = payload["jumps"]
    if spec is None:
        jumps = None
    elif isinstance(spec, dict) and set(spec) == {"kind", "params"} and isinstance(spec["params"], dict):
        kind, params = spec["kind"], spec["params"]
        if kind == "gamma":
            if set(params) != {"alpha", "beta"}:
                raise SchemaError(f"gamma jump params have wrong keys {sorted(params)}")
            jumps = GammaNegativeJumps(
                alpha=_number(params, "alpha", "jumps"), beta=_number(params, "beta", "jumps")
            )
        elif kind == "tabulated":
            if set(params) != {"grid", "values"}:
                raise SchemaError(f"tabulated jump params have wrong keys {sorted(params)}")
            jumps = TabulatedJumps(
                grid=np.asarray(params["grid"], dtype=float),
                values=np.asarray(params["values"], dtype=float),
            )
        else:
            raise SchemaError(f"unknown jump kind {kind!r} in model file")
    else:
        raise SchemaError(f"jump spec must be null or a {{kind, params}} object, got {spec!r}")
    return LevyTriplet(
        mu=_number(payload, "mu", "model"),
        sigma=_number(payload, "sigma", "model"),
        jumps=jumps,
        zeta=_number(payload, "zeta", "model"),
    )


def dump_payoff(path, payoff: FourierPayoff) -> None:
    if payoff.params.get("kind") not in ("put", "indicator"):
        raise SchemaError(
            f"payoff kind {payoff.params.get('kind')!r} holds callables and "
            "cannot be serialized"
        )
    with open(path, "w") as fh:
        json.dump(payoff_dict(payoff), fh, indent=2, sort_keys=True)
        fh.write("\n")


def load_payoff(path) -> FourierPayoff:
    payload = _read_json(path)
    _check_keys(payload, {"schema_version", "kind", "K", "zeta"}, "payoff")
    kind = payload["kind"]
    K = _number(payload, "K", "payoff")
    zeta = _number(payload, "zeta", "payoff")
    if kind == "put":
        return make_put(K=K, zeta=zeta)
    if kind == "indicator":
        return make_indicator(K=K, zeta=zeta)
    raise SchemaError(f"unknown payoff kind {kind!r}")


def parse_grid_spec(spec: str) -> np.ndarray:
    """Parse 'start:stop:count' into a uniform grid, or a bare number
    into a one-point grid."""
    parts = str(spec).split(":")
    try:
        if len(parts) == 1:
            return np.array([float(parts[0])])
        if len(parts) == 3:
            a, b = float(parts[0]), float(parts[1])
            n = int(parts[2])
            if n < 1:
                raise ValueError
            return np.linspace(a, b, n)
    except ValueError:
        pass
    raise UsageError(
        f"cannot parse grid spec {spec!r}",
        hint="use start:stop:count with a positive count, or a single number",
    )
