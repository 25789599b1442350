"""Independent scalar reference for the diffusion recursions (filter length 1).

Straight-line transcriptions using plain Python complex arithmetic and
explicit neighbor loops; deliberately shares no array machinery with the
package so it can serve as an oracle for the vectorized implementations.

States are lists of complex scalars indexed by node. ``weights`` arguments
are dense row-major lists of lists; ``nbrs[k]`` is the sorted neighborhood of
node k including k itself.
"""
from __future__ import annotations


def adapt(w, x, d, mu):
    """Scalar LMS update: w + mu * x * conj(d - conj(w) * x)."""
    err = d - w.conjugate() * x
    return w + mu * x * err.conjugate()


def nocoop_step(w, x, d, mu):
    return [adapt(w[k], x[k], d[k], mu[k]) for k in range(len(w))]


def atc_step(w, x, d, weights, mu, nbrs):
    n = len(w)
    psi = [adapt(w[k], x[k], d[k], mu[k]) for k in range(n)]
    return [sum(weights[k][l] * psi[l] for l in nbrs[k]) for k in range(n)]


def cta_step(w, x, d, weights, mu, nbrs):
    n = len(w)
    psi = [sum(weights[k][l] * w[l] for l in nbrs[k]) for k in range(n)]
    return [adapt(psi[k], x[k], d[k], mu[k]) for k in range(n)]


def si_step(w, x, d, c_weights, a_weights, mu, nbrs, order):
    """Serial sweep: self + not-yet-updated neighbors contribute previous
    estimates, already-updated neighbors contribute this iteration's fresh
    values; a final combination follows the sweep."""
    n = len(w)
    pos = {node: rank for rank, node in enumerate(order)}
    phi: list[complex] = [0j] * n
    for k in order:
        s = c_weights[k][k] * w[k]
        s += sum(c_weights[k][l] * w[l]
                 for l in nbrs[k] if l != k and pos[l] >= pos[k])
        s += sum(c_weights[k][m] * phi[m]
                 for m in nbrs[k] if pos[m] < pos[k])
        phi[k] = adapt(s, x[k], d[k], mu[k])
    return [sum(a_weights[p][q] * phi[q] for q in nbrs[p]) for p in range(n)]


def trajectory(algorithm, n_nodes, nbrs, c_weights, a_weights, mu, x_seq, d_seq,
               order=None):
    """Full state history from zero initialization.

    ``x_seq[i][k]`` / ``d_seq[i][k]`` are the scalar regressor/observation of
    node k at iteration i. Returns the list of per-iteration state lists.
    """
    if order is None:
        order = list(range(n_nodes))
    w = [0j] * n_nodes
    history = []
    for x, d in zip(x_seq, d_seq):
        if algorithm == "nocoop":
            w = nocoop_step(w, x, d, mu)
        elif algorithm == "atc":
            w = atc_step(w, x, d, c_weights, mu, nbrs)
        elif algorithm == "cta":
            w = cta_step(w, x, d, c_weights, mu, nbrs)
        elif algorithm == "silms":
            w = si_step(w, x, d, c_weights, a_weights, mu, nbrs, order)
        else:
            raise ValueError(f"unknown algorithm {algorithm!r}")
        history.append(list(w))
    return history
