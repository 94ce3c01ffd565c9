"""JSON instance files.

Layout::

    {"version": 1,
     "bidders": [{"value": 5.0, "allowance": "inf", "bid": 5.0}, ...],
     "ctrs": [1.0, 0.5],
     "metadata": {...}}

Unbounded allowances are written as the string ``"inf"``. Floats are written
with ``repr`` precision, so a parse of the canonical form reproduces every
array bit for bit.
"""
from __future__ import annotations

import json
import math

from .model import INF, AuctionInstance, ValidationError

FORMAT_VERSION = 1


def _num_out(x: float):
    x = float(x)
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return x


def _num_in(x, what: str) -> float:
    if isinstance(x, str):
        if x.strip().lower() in ("inf", "+inf", "infinity"):
            return INF
        raise ValidationError(f"{what}: expected a number or \"inf\", got {x!r}")
    if isinstance(x, bool) or not isinstance(x, (int, float)):
        raise ValidationError(f"{what}: expected a number, got {x!r}")
    return float(x)


def _plain(obj):
    """Metadata made JSON-safe (numpy scalars, non-finite floats)."""
    if isinstance(obj, dict):
        return {str(k): _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(v) for v in obj]
    if hasattr(obj, "item"):
        obj = obj.item()
    if isinstance(obj, float) and not math.isfinite(obj):
        return _num_out(obj)
    return obj


def instance_to_dict(instance: AuctionInstance) -> dict:
    return {
        "version": FORMAT_VERSION,
        "bidders": [
            {"value": float(v), "allowance": _num_out(g), "bid": float(b)}
            for v, g, b in zip(instance.values, instance.allowances, instance.bids)
        ],
        "ctrs": [float(a) for a in instance.ctrs],
        "metadata": _plain(instance.metadata),
    }


def dumps(instance: AuctionInstance) -> str:
    return json.dumps(instance_to_dict(instance), indent=2, sort_keys=True) + "\n"


def instance_from_dict(data: dict) -> AuctionInstance:
    if not isinstance(data, dict):
        raise ValidationError("instance file must hold a JSON object")
    version = data.get("version", FORMAT_VERSION)
    if version != FORMAT_VERSION:
        raise ValidationError(f"unsupported instance file version {version!r}")
    bidders = data.get("bidders")
    ctrs = data.get("ctrs")
    if not isinstance(bidders, list) or not isinstance(ctrs, list):
        raise ValidationError("instance file needs 'bidders' and 'ctrs' lists")
    values, allowances, bids = [], [], []
    for i, b in enumerate(bidders):
        if not isinstance(b, dict) or "value" not in b:
            raise ValidationError(f"bidder {i}: needs at least a 'value'")
        v = _num_in(b["value"], f"bidder {i} value")
        values.append(v)
        allowances.append(_num_in(b.get("allowance", 0.0), f"bidder {i} allowance"))
        bids.append(_num_in(b.get("bid", v), f"bidder {i} bid"))
    alphas = [_num_in(a, f"ctr {j}") for j, a in enumerate(ctrs)]
    return AuctionInstance.create(values, alphas, allowances, bids, data.get("metadata") or {})


def loads(text: str) -> AuctionInstance:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ValidationError(f"malformed instance file: {exc}") from exc
    return instance_from_dict(data)


def load(path) -> AuctionInstance:
    with open(path, encoding="utf-8") as fh:
        return loads(fh.read())


def dump(instance: AuctionInstance, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dumps(instance))
