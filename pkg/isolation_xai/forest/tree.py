"""Isolation tree nodes, split sampling and path lengths.

A split is the hyperplane ``v . x = alpha``. Points with ``v . x > alpha`` go
to the left child, every other point (ties included) goes right.
"""
import math
from dataclasses import dataclass
from typing import Iterator, List, Optional, Tuple, Union

import numpy as np

# Euler-Mascheroni constant used in the harmonic number approximation
EULER_GAMMA = 0.5772156649

MODEL_IF = "IF"
MODEL_EIF = "EIF"
MODEL_EIF_PLUS = "EIF+"
MODELS = (MODEL_IF, MODEL_EIF, MODEL_EIF_PLUS)


def c_factor(n: int) -> float:
    """Average path length of an unsuccessful BST search over n points."""
    if n <= 1:
        return 0.0
    return 2.0 * (math.log(n - 1) + EULER_GAMMA) - 2.0 * (n - 1) / n


@dataclass(eq=False)
class SplitPlane:
    normal: np.ndarray
    intercept: float

    def __post_init__(self) -> None:
        self.normal = np.asarray(self.normal, dtype=np.float64)
        self.intercept = float(self.intercept)

    def project(self, X: np.ndarray) -> np.ndarray:
        return np.asarray(X, dtype=np.float64) @ self.normal

    def goes_left(self, X: np.ndarray) -> np.ndarray:
        return self.project(X) > self.intercept

    @property
    def split_feature(self) -> Optional[int]:
        """Index of the only nonzero normal component, None for oblique planes."""
        nonzero = np.flatnonzero(self.normal)
        if len(nonzero) != 1:
            return None
        return int(nonzero[0])


@dataclass(eq=False)
class LeafNode:
    size: int
    depth: int

    is_leaf = True


@dataclass(eq=False)
class InternalNode:
    plane: SplitPlane
    size: int
    left_size: int
    right_size: int
    depth: int
    left: 'TreeNode'
    right: 'TreeNode'

    is_leaf = False

    def side_size(self, left: bool) -> int:
        return self.left_size if left else self.right_size


TreeNode = Union[LeafNode, InternalNode]


@dataclass(eq=False)
class IsolationTree:
    root: TreeNode
    psi: int

    def route(self, X: np.ndarray) -> Iterator[Tuple[TreeNode, np.ndarray]]:
        """Yield every node reached by at least one row, with those row indices.

        Nodes come out in depth-first pre-order; leaves are yielded too.
        """
        X = np.asarray(X, dtype=np.float64)
        stack: List[Tuple[TreeNode, np.ndarray]] = [(self.root, np.arange(X.shape[0]))]
        while stack:
            node, idx = stack.pop()
            yield node, idx
            if node.is_leaf:
                continue
            mask = node.plane.goes_left(X[idx])
            # push right first so the left branch is visited first
            right_idx = idx[~mask]
            left_idx = idx[mask]
            if right_idx.size:
                stack.append((node.right, right_idx))
            if left_idx.size:
                stack.append((node.left, left_idx))

    def path_lengths(self, X: np.ndarray) -> np.ndarray:
        """Leaf-adjusted depth h(x) = depth + c(leaf size) for every row."""
        X = np.asarray(X, dtype=np.float64)
        out = np.zeros(X.shape[0], dtype=np.float64)
        for node, idx in self.route(X):
            if node.is_leaf:
                out[idx] = node.depth + c_factor(node.size)
        return out

    def nodes(self) -> Iterator[TreeNode]:
        """Pre-order walk of all nodes."""
        stack: List[TreeNode] = [self.root]
        while stack:
            node = stack.pop()
            yield node
            if not node.is_leaf:
                stack.append(node.right)
                stack.append(node.left)

    def internal_nodes(self) -> List[InternalNode]:
        return [node for node in self.nodes() if not node.is_leaf]


def depth_h(tree: IsolationTree, x: np.ndarray) -> float:
    """Leaf-adjusted path length of a single point."""
    x = np.asarray(x, dtype=np.float64).reshape(1, -1)
    return float(tree.path_lengths(x)[0])


# ==============================================================================
# Split sampling
# ==============================================================================
def choose_components(n_available: int, k: int, rng) -> np.ndarray:
    """k distinct indices out of range(n_available), uniformly."""
    return np.asarray(rng.choice(n_available, size=k, replace=False), dtype=np.int64)


def sample_normal_vector(p: int, dof: int, rng) -> np.ndarray:
    """
    Random unit normal with exactly ``dof`` nonzero standard-normal components.

    Args:
        p: Dimension
        dof: Number of nonzero components, 1 <= dof <= p
        rng: numpy Generator (or anything with choice/standard_normal)

    Returns:
        np.ndarray: Unit-norm p-vector
    """
    if not 1 <= dof <= p:
        raise ValueError(f"dof must be in [1, {p}], got {dof}")
    components = choose_components(p, dof, rng)
    while True:
        draws = np.asarray(rng.standard_normal(dof), dtype=np.float64)
        if np.all(draws != 0):
            break
    normal = np.zeros(p, dtype=np.float64)
    normal[components] = draws
    return normal / np.linalg.norm(normal)


def sample_intercept(projections: np.ndarray, model: str, eta: float, rng) -> float:
    """Uniform over the projection range (IF, EIF) or Normal(mean, eta * std) for EIF+."""
    projections = np.asarray(projections, dtype=np.float64)
    if model == MODEL_EIF_PLUS:
        # population std; the cut may fall outside the data and leave a side empty
        return float(rng.normal(projections.mean(), eta * projections.std()))
    low = float(projections.min())
    high = float(projections.max())
    if low == high:
        return low
    return float(rng.uniform(low, high))


def sample_split(X: np.ndarray, model: str, dof: int, eta: float, rng) -> SplitPlane:
    """Draw the split plane of a node holding the rows of X."""
    p = X.shape[1]
    if model == MODEL_IF:
        # any feature, constant ones included; those leave the left side empty
        feature = int(choose_components(p, 1, rng)[0])
        normal = np.zeros(p, dtype=np.float64)
        normal[feature] = 1.0
    else:
        normal = sample_normal_vector(p, dof, rng)
    intercept = sample_intercept(X @ normal, model, eta, rng)
    return SplitPlane(normal, intercept)


def build_tree(X: np.ndarray, model: str, max_depth: int, dof: int, eta: float, rng) -> IsolationTree:
    """Grow one isolation tree on the (already subsampled) rows of X."""
    X = np.asarray(X, dtype=np.float64)

    def grow(rows: np.ndarray, depth: int) -> TreeNode:
        size = rows.shape[0]
        if depth >= max_depth or size <= 1 or np.all(rows == rows[0]):
            return LeafNode(size=size, depth=depth)
        plane = sample_split(rows, model, dof, eta, rng)
        mask = plane.goes_left(rows)
        left_rows = rows[mask]
        right_rows = rows[~mask]
        return InternalNode(
            plane=plane,
            size=size,
            left_size=left_rows.shape[0],
            right_size=right_rows.shape[0],
            depth=depth,
            left=grow(left_rows, depth + 1),
            right=grow(right_rows, depth + 1),
        )

    return IsolationTree(root=grow(X, 0), psi=X.shape[0])
