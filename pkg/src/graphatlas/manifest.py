"""Manifest schema: the single JSON artifact consumed by tools and viewer.

The manifest holds everything a renderer needs: the node table with levels
and ranks, per-level rails/routes/tiles, transition control polylines, and
global metrics.  Serialization is canonical (sorted keys, fixed separators)
so identical pipelines produce byte-identical files.
"""

from __future__ import annotations

import json
from typing import Any

FORMAT_VERSION = 1


class ManifestError(ValueError):
    pass


def dumps(manifest: dict[str, Any]) -> str:
    return json.dumps(manifest, sort_keys=True, separators=(",", ":"))


def write(manifest: dict[str, Any], path: str) -> None:
    with open(path, "w") as fh:
        fh.write(dumps(manifest))


def read(path: str) -> dict[str, Any]:
    with open(path) as fh:
        m = json.load(fh)
    if not isinstance(m, dict) or m.get("format_version") != FORMAT_VERSION:
        raise ManifestError(f"unsupported manifest: {path}")
    _check(m)
    return m


def _check(m: dict[str, Any]) -> None:
    for key in ("nodes", "edges", "levels", "transitions", "metrics",
                "config"):
        if key not in m:
            raise ManifestError(f"manifest missing {key!r}")
    ids = {n["id"] for n in m["nodes"]}
    if len(ids) != len(m["nodes"]):
        raise ManifestError("duplicate node ids")
    for e in m["edges"]:
        if e[0] not in ids or e[1] not in ids:
            raise ManifestError(f"edge {e} references unknown node")
    for lv in m["levels"]:
        have = {tuple(r["edge"]) for r in lv["routes"]}
        vis = {n["id"] for n in m["nodes"] if n["level"] <= lv["level"]}
        for u, v in m["edges"]:
            if u in vis and v in vis and (u, v) not in have:
                raise ManifestError(
                    f"level {lv['level']} lacks a route for ({u}, {v})")


def build_manifest(config: dict[str, Any], nodes: list[dict[str, Any]],
                   edges: list[list[str]], levels: list[dict[str, Any]],
                   transitions: list[dict[str, Any]],
                   metrics: dict[str, Any]) -> dict[str, Any]:
    return {
        "format_version": FORMAT_VERSION,
        "config": config,
        "nodes": nodes,
        "edges": edges,
        "levels": levels,
        "transitions": transitions,
        "metrics": metrics,
    }
