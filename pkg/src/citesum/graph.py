"""The sentence similarity network and its small-world statistics.

Vertices are sentences, edges carry the TF-IDF cosine similarity of the pair.
The network itself is weighted and complete (minus zero-similarity pairs);
statistics that need an unweighted graph binarize it with a configurable
threshold, edge iff weight strictly above it.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .corpus import CitationSet, IdfTable
from .lexical import TokenizerConfig, cosine_similarity, tfidf_vector


@dataclass(frozen=True)
class SimilarityGraph:
    """Symmetric weighted graph over sentence ids, zero diagonal, weights in [0,1].

    Node order matches the source citation set order.
    """

    nodes: tuple[str, ...]
    weights: np.ndarray

    def __post_init__(self):
        w = self.weights
        n = len(self.nodes)
        if w.shape != (n, n):
            raise ValueError(f"weight matrix shape {w.shape} does not match {n} nodes")
        if not np.allclose(w, w.T):
            raise ValueError("weight matrix must be symmetric")
        if np.any(np.diag(w) != 0.0):
            raise ValueError("diagonal must be zero")
        if np.any(w < 0.0) or np.any(w > 1.0):
            raise ValueError("weights must lie in [0,1]")
        self.weights.setflags(write=False)

    def __len__(self) -> int:
        return len(self.nodes)

    def binarize(self, threshold: float) -> np.ndarray:
        """Boolean adjacency: edge iff weight strictly above threshold."""
        return self.weights > threshold

    def edge_count(self, threshold: float) -> int:
        return int(np.triu(self.binarize(threshold), 1).sum())

    def induced_subgraph(self, indices: list[int]) -> "SimilarityGraph":
        idx = np.asarray(indices, dtype=int)
        return SimilarityGraph(
            nodes=tuple(self.nodes[i] for i in indices),
            weights=self.weights[np.ix_(idx, idx)].copy(),
        )


def build_citation_summary_network(
    cs: CitationSet,
    idf: IdfTable,
    cfg: TokenizerConfig | None = None,
) -> SimilarityGraph:
    """Pairwise TF-IDF cosine graph over the citation set, no thresholding.

    Permutation equivariant: permuting the input sentences permutes the rows
    and columns of the weight matrix identically.
    """
    if len(cs) == 0:
        raise ValueError("citation set is empty")
    if cfg is None:
        vectors = [tfidf_vector(s.tokens, idf) for s in cs.sentences]
    else:
        from .lexical import tokenize

        vectors = [tfidf_vector(tokenize(s.text, cfg), idf) for s in cs.sentences]
    n = len(vectors)
    w = np.zeros((n, n))
    for i in range(n):
        for j in range(i + 1, n):
            w[i, j] = w[j, i] = min(1.0, cosine_similarity(vectors[i], vectors[j]))
    return SimilarityGraph(nodes=tuple(cs.ids), weights=w)


def clustering_coefficient(g: SimilarityGraph, threshold: float = 0.10) -> float:
    """Mean local clustering over all vertices of the binarized graph.

    Local value at i = triangles through i / pairs of neighbors of i,
    defined 0 for degree < 2.
    """
    adj = g.binarize(threshold)
    n = len(g)
    total = 0.0
    for i in range(n):
        neighbors = np.flatnonzero(adj[i])
        k = len(neighbors)
        if k < 2:
            continue
        links = int(np.triu(adj[np.ix_(neighbors, neighbors)], 1).sum())
        total += links / (k * (k - 1) / 2)
    return total / n


class PathStats(NamedTuple):
    """Mean hop distance over connected pairs, plus the unreachable fraction."""

    average: float
    disconnected_fraction: float


def average_shortest_path(g: SimilarityGraph, threshold: float = 0.10) -> PathStats:
    """BFS hop distances on the binarized graph, averaged over connected pairs.

    Disconnected pairs are excluded from the mean (infinity would destroy it)
    and reported as a fraction of all unordered pairs.  With no pairs at all
    (n < 2) or no connected pairs, the average is inf.
    """
    adj = g.binarize(threshold)
    n = len(g)
    neighbor_lists = [np.flatnonzero(adj[i]) for i in range(n)]
    total = 0
    connected_pairs = 0
    for source in range(n):
        dist = {source: 0}
        queue = deque([source])
        while queue:
            u = queue.popleft()
            for v in neighbor_lists[u]:
                v = int(v)
                if v not in dist:
                    dist[v] = dist[u] + 1
                    queue.append(v)
        for v, d in dist.items():
            if v > source:
                total += d
                connected_pairs += 1
    all_pairs = n * (n - 1) // 2
    if all_pairs == 0:
        return PathStats(float("inf"), 0.0)
    average = total / connected_pairs if connected_pairs else float("inf")
    return PathStats(average, (all_pairs - connected_pairs) / all_pairs)


def to_dot(g: SimilarityGraph, threshold: float = 0.10) -> str:
    """DOT rendering of the binarized graph; edge labels carry the raw weight."""
    lines = ["graph citation_summary_network {"]
    for node in g.nodes:
        lines.append(f'  "{node}";')
    adj = g.binarize(threshold)
    n = len(g)
    for i in range(n):
        for j in range(i + 1, n):
            if adj[i, j]:
                lines.append(
                    f'  "{g.nodes[i]}" -- "{g.nodes[j]}" [label="{g.weights[i, j]:.4f}"];'
                )
    lines.append("}")
    return "\n".join(lines) + "\n"
