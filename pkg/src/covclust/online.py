"""Online clustering: weighted vote over prefix-generated candidate centers.

At each epoch the offline algorithm is run on every prefix of the arrival
list; each prefix contributes kappa candidate centers (minimal cluster
indexes, sorted), weighted by its minimal inter-candidate separation. Every
path is then assigned by the weighted nearest-candidate rule. All prefix runs
share one dissimilarity matrix computed once per epoch.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .dissimilarity import DissimConfig, OpCounter, default_weights, dissimilarity_matrix
from .offline import Clustering, offline_cluster


@dataclass(frozen=True)
class OnlineSnapshot:
    """The sample paths visible at epoch t, in stable arrival order."""

    t: int
    paths: tuple

    def __len__(self) -> int:
        return len(self.paths)


def default_beta(j):
    """Default prefix weights, same summable decay family as the window weights."""
    return default_weights(j)


def online_cluster(snapshot: OnlineSnapshot, kappa: int,
                   cfg: DissimConfig = DissimConfig(), beta=default_beta,
                   counter: OpCounter | None = None, workers: int = 1,
                   D: np.ndarray | None = None) -> Clustering:
    """Cluster an online snapshot into kappa groups.

    A precomputed dissimilarity matrix over the snapshot's paths may be passed
    in; otherwise one is computed here and shared by all prefix runs.
    """
    n = len(snapshot)
    if n < kappa:
        raise ValueError(f"snapshot holds {n} paths, fewer than kappa={kappa}")
    if D is None:
        D = dissimilarity_matrix(snapshot.paths, cfg, counter=counter, workers=workers)

    candidates = []  # per prefix j: kappa sorted candidate center indexes
    gammas = []
    weights = []
    for j in range(kappa, n + 1):
        prefix = offline_cluster(D[:j, :j], kappa)
        cand = sorted(int(prefix.members(k).min()) for k in range(kappa))
        candidates.append(cand)
        sub = D[np.ix_(cand, cand)]
        gammas.append(float(sub[np.triu_indices(kappa, 1)].min()) if kappa > 1 else 0.0)
        weights.append(float(beta(j)))

    cand_idx = np.array(candidates)          # (num_prefixes, kappa)
    wg = np.array(weights) * np.array(gammas)
    eta = float(wg.sum())

    if eta == 0.0:
        # Degenerate data: every candidate set is equivalent, fall back to
        # plain nearest-center assignment against the first prefix.
        scores = D[:, cand_idx[0]]
    else:
        scores = np.einsum("j,njk->nk", wg, D[:, cand_idx]) / eta

    labels = np.argmin(scores, axis=1)
    centers = tuple(
        int(np.flatnonzero(labels == k).min()) if np.any(labels == k) else None
        for k in range(kappa)
    )
    return Clustering(kappa=kappa, labels=labels, centers=centers)
