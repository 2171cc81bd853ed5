import os
import json
import logging
from typing import Any, Dict, List

import numpy as np

from ..errors import ConfigError, ModelFileError
from .forest import Forest, ForestConfig
from .tree import MODELS, InternalNode, IsolationTree, LeafNode, SplitPlane, TreeNode

logger = logging.getLogger(__name__)

MODEL_FORMAT = "isoxai-forest"
MODEL_FORMAT_VERSION = 1

# Tolerance on the stored normal's Euclidean norm
_UNIT_NORM_TOL = 1e-9


def _tree_to_dict(tree: IsolationTree) -> Dict[str, Any]:
    nodes: List[Dict[str, Any]] = []

    def visit(node: TreeNode) -> int:
        index = len(nodes)
        if node.is_leaf:
            nodes.append({"kind": "leaf", "size": node.size, "depth": node.depth})
            return index
        entry = {
            "kind": "internal",
            "normal": [float(v) for v in node.plane.normal],
            "intercept": float(node.plane.intercept),
            "size": node.size,
            "left_size": node.left_size,
            "right_size": node.right_size,
            "depth": node.depth,
            "left": None,
            "right": None,
        }
        nodes.append(entry)
        entry["left"] = visit(node.left)
        entry["right"] = visit(node.right)
        return index

    visit(tree.root)
    return {"psi": tree.psi, "nodes": nodes}


def forest_to_dict(forest: Forest) -> Dict[str, Any]:
    return {
        "version": MODEL_FORMAT_VERSION,
        "format": MODEL_FORMAT,
        "config": forest.config.to_dict(),
        "n_features": forest.n_features,
        "psi": forest.psi,
        "max_depth": forest.max_depth,
        "fitted_on": forest.fitted_on,
        "trees": [_tree_to_dict(tree) for tree in forest.trees],
    }


def save_model(forest: Forest, path: str) -> None:
    """
    Write a fitted forest as versioned JSON.

    Floats go through json's repr encoding, which round-trips IEEE-754 doubles exactly.

    Args:
        forest: Fitted forest
        path: Output file path
    """
    parent = os.path.dirname(path)
    if parent:
        os.makedirs(parent, exist_ok=True)
    with open(path, 'w', encoding='utf-8') as f:
        json.dump(forest_to_dict(forest), f, indent=1)
        f.write("\n")
    logger.info(f"Saved {forest.model} model ({len(forest.trees)} trees) to {path}")


def _node_from_dict(nodes: List[Dict[str, Any]], index: int, n_features: int, seen: set) -> TreeNode:
    if not isinstance(index, int) or index < 0 or index >= len(nodes):
        raise ModelFileError(f"Node index {index!r} out of range")
    if index in seen:
        raise ModelFileError(f"Node {index} is referenced twice")
    seen.add(index)
    entry = nodes[index]
    kind = entry.get("kind")

    if kind == "leaf":
        return LeafNode(size=int(entry["size"]), depth=int(entry["depth"]))
    if kind != "internal":
        raise ModelFileError(f"Node {index} has unknown kind {kind!r}")

    normal = np.asarray(entry["normal"], dtype=np.float64)
    if normal.shape != (n_features,):
        raise ModelFileError(f"Node {index} normal has {normal.size} components, expected {n_features}")
    if abs(np.linalg.norm(normal) - 1.0) > _UNIT_NORM_TOL:
        raise ModelFileError(f"Node {index} normal is not unit length")

    size = int(entry["size"])
    left_size = int(entry["left_size"])
    right_size = int(entry["right_size"])
    if left_size < 0 or right_size < 0 or left_size + right_size != size:
        raise ModelFileError(f"Node {index} child sizes {left_size}+{right_size} do not add up to {size}")

    return InternalNode(
        plane=SplitPlane(normal, float(entry["intercept"])),
        size=size,
        left_size=left_size,
        right_size=right_size,
        depth=int(entry["depth"]),
        left=_node_from_dict(nodes, entry["left"], n_features, seen),
        right=_node_from_dict(nodes, entry["right"], n_features, seen),
    )


def forest_from_dict(data: Dict[str, Any]) -> Forest:
    if not isinstance(data, dict) or data.get("format") != MODEL_FORMAT:
        raise ModelFileError("Not an isolation forest model file")
    if data.get("version") != MODEL_FORMAT_VERSION:
        raise ModelFileError(f"Unsupported model file version {data.get('version')!r} (expected {MODEL_FORMAT_VERSION})")

    try:
        config_data = data["config"]
        if config_data.get("model") not in MODELS:
            raise ModelFileError(f"Unknown model tag {config_data.get('model')!r}")
        config = ForestConfig.from_dict(config_data)
        n_features = int(data["n_features"])
        trees = []
        for tree_data in data["trees"]:
            nodes = tree_data["nodes"]
            root = _node_from_dict(nodes, 0, n_features, set())
            trees.append(IsolationTree(root=root, psi=int(tree_data["psi"])))
        forest = Forest(
            config=config,
            trees=trees,
            n_features=n_features,
            psi=int(data["psi"]),
            max_depth=int(data["max_depth"]),
            fitted_on=str(data.get("fitted_on", "")),
        )
    except (KeyError, TypeError, AttributeError, ValueError) as e:
        if isinstance(e, ModelFileError):
            raise
        if isinstance(e, ConfigError):
            raise ModelFileError(f"Invalid model config: {e.message}") from e
        raise ModelFileError(f"Malformed model file: {e!r}") from e

    if len(forest.trees) != config.n_trees:
        raise ModelFileError(f"Model file holds {len(forest.trees)} trees, config says {config.n_trees}")
    return forest


def load_model(path: str) -> Forest:
    """
    Read a forest written by save_model.

    Raises:
        ModelFileError: Missing, truncated or malformed file, version mismatch, unknown model tag
    """
    if not os.path.isfile(path):
        raise ModelFileError(f"Model file not found: {path}")
    try:
        with open(path, 'r', encoding='utf-8') as f:
            data = json.load(f)
    except json.JSONDecodeError as e:
        raise ModelFileError(f"Model file {path} is not valid JSON (truncated?): {e}") from e
    except UnicodeDecodeError as e:
        raise ModelFileError(f"Model file {path} is not valid UTF-8: {e}") from e
    forest = forest_from_dict(data)
    logger.info(f"Loaded {forest.model} model ({len(forest.trees)} trees) from {path}")
    return forest
