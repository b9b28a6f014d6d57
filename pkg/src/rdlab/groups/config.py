"""Group configuration JSON: validation, construction and digests."""

from __future__ import annotations

import hashlib
import json
from fractions import Fraction
from pathlib import Path

from rdlab.errors import ConfigError
from rdlab.groups.abelian import CyclicGroup, WeightedAbelianGroup
from rdlab.groups.base import Group
from rdlab.groups.free import FreeGroup
from rdlab.groups.graph_product import VERTEX_KINDS, GraphProduct

_KEYS = {
    "free": {"type", "rank"},
    "weighted_abelian": {"type", "weights"},
    "cyclic": {"type", "order"},
    "graph_product": {"type", "vertices", "edges", "vertex_groups"},
}


def _is_int(x) -> bool:
    return isinstance(x, int) and not isinstance(x, bool)


def _weight_issue(w) -> str | None:
    if isinstance(w, bool) or not isinstance(w, (int, float, str)):
        return f"weight {w!r} is not a number"
    try:
        f = Fraction(str(w)) if isinstance(w, float) else Fraction(w)
    except (ValueError, ZeroDivisionError):
        return f"weight {w!r} is not a rational number"
    if f < 1:
        return f"weight {w} is below 1 (length would not be proper)"
    return None


def config_issues(cfg, where: str = "group", nested: bool = False) -> list[str]:
    """Every schema violation in ``cfg``; empty when valid."""
    if not isinstance(cfg, dict):
        return [f"{where}: expected an object, got {type(cfg).__name__}"]
    kind = cfg.get("type")
    if kind not in _KEYS:
        return [f"{where}: unknown type {kind!r}"]
    issues = []
    extra = set(cfg) - _KEYS[kind]
    missing = _KEYS[kind] - set(cfg)
    issues += [f"{where}: unexpected key {k!r}" for k in sorted(extra)]
    issues += [f"{where}: missing key {k!r}" for k in sorted(missing)]
    if missing:
        return issues
    if kind == "free":
        if not _is_int(cfg["rank"]) or cfg["rank"] < 1:
            issues.append(f"{where}: rank must be a positive integer")
    elif kind == "cyclic":
        if not _is_int(cfg["order"]) or cfg["order"] < 1:
            issues.append(f"{where}: order must be a positive integer")
    elif kind == "weighted_abelian":
        ws = cfg["weights"]
        if not isinstance(ws, list) or not ws:
            issues.append(f"{where}: weights must be a nonempty list")
        else:
            issues += [f"{where}: {msg}" for msg in map(_weight_issue, ws) if msg]
    else:
        if nested:
            issues.append(f"{where}: vertex groups must be one of {', '.join(VERTEX_KINDS)}")
        n = cfg["vertices"]
        if not _is_int(n) or n < 1:
            issues.append(f"{where}: vertices must be a positive integer")
            return issues
        edges = cfg["edges"]
        if not isinstance(edges, list):
            issues.append(f"{where}: edges must be a list")
        else:
            seen = set()
            for e in edges:
                if (not isinstance(e, list) or len(e) != 2
                        or not all(_is_int(i) for i in e)):
                    issues.append(f"{where}: edge {e!r} is not a pair of integers")
                    continue
                i, j = e
                if i == j:
                    issues.append(f"{where}: loop at vertex {i}")
                elif not (0 <= i < n and 0 <= j < n):
                    issues.append(f"{where}: edge {e} leaves vertex range 0..{n - 1}")
                key = (min(i, j), max(i, j))
                if key in seen:
                    issues.append(f"{where}: duplicate edge {e}")
                seen.add(key)
        vgs = cfg["vertex_groups"]
        if not isinstance(vgs, list) or len(vgs) != n:
            issues.append(f"{where}: vertex_groups must list exactly {n} configs")
        else:
            for v, sub in enumerate(vgs):
                issues += config_issues(sub, f"{where}.vertex_groups[{v}]", nested=True)
    return issues


def group_from_config(cfg: dict) -> Group:
    """Build a backend from a config dict, raising ConfigError listing all issues."""
    issues = config_issues(cfg)
    if issues:
        raise ConfigError(issues)
    kind = cfg["type"]
    if kind == "free":
        return FreeGroup(cfg["rank"])
    if kind == "cyclic":
        return CyclicGroup(cfg["order"])
    if kind == "weighted_abelian":
        return WeightedAbelianGroup(tuple(cfg["weights"]))
    return GraphProduct.build(cfg["vertices"], cfg["edges"],
                              [group_from_config(sub) for sub in cfg["vertex_groups"]])


def load_group(path: str | Path) -> Group:
    p = Path(path)
    try:
        cfg = json.loads(p.read_text())
    except OSError as exc:
        raise ConfigError([f"{p}: cannot read ({exc.strerror})"]) from exc
    except json.JSONDecodeError as exc:
        raise ConfigError([f"{p}: invalid JSON ({exc.msg} at line {exc.lineno})"]) from exc
    return group_from_config(cfg)


def config_digest(group: Group) -> str:
    """SHA-256 of the canonical JSON form of the group's config."""
    blob = json.dumps(group.config(), sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(blob.encode()).hexdigest()
