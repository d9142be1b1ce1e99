"""Discrete-emission hidden Markov model with Baum-Welch fitting.

Small and self-contained: three-state models over three-symbol ordering
sequences are the only use here, so the implementation favours clarity
(scaled forward/backward passes, log-space Viterbi) over generality.
Initialisation is deterministic given the seed, so fits are reproducible.
"""

from __future__ import annotations

import numpy as np

from supplygame.errors import AnalysisError


class DiscreteHMM:
    def __init__(self, n_states: int, n_symbols: int, seed: int = 0,
                 self_bias: float = 0.8):
        if n_states < 1 or n_symbols < 1:
            raise AnalysisError("model needs at least one state and one symbol")
        self.n_states = n_states
        self.n_symbols = n_symbols
        rng = np.random.default_rng(seed)
        # diagonal-heavy start: state i prefers emitting symbol i and staying put
        off = (1.0 - self_bias) / max(1, n_states - 1)
        self.transition = np.full((n_states, n_states), off)
        np.fill_diagonal(self.transition, self_bias)
        off_e = (1.0 - self_bias) / max(1, n_symbols - 1)
        self.emission = np.full((n_states, n_symbols), off_e)
        for i in range(min(n_states, n_symbols)):
            self.emission[i, i] = self_bias
        self.start = np.full(n_states, 1.0 / n_states)
        # tiny seeded jitter breaks symmetric saddle points, then renormalise
        self.emission += rng.uniform(0, 1e-3, self.emission.shape)
        self.emission /= self.emission.sum(axis=1, keepdims=True)
        self.transition /= self.transition.sum(axis=1, keepdims=True)

    def _forward_backward(self, seq: np.ndarray):
        T = len(seq)
        alpha = np.zeros((T, self.n_states))
        beta = np.zeros((T, self.n_states))
        scale = np.zeros(T)
        alpha[0] = self.start * self.emission[:, seq[0]]
        scale[0] = alpha[0].sum() or 1e-300
        alpha[0] /= scale[0]
        for t in range(1, T):
            alpha[t] = (alpha[t - 1] @ self.transition) * self.emission[:, seq[t]]
            scale[t] = alpha[t].sum() or 1e-300
            alpha[t] /= scale[t]
        beta[-1] = 1.0
        for t in range(T - 2, -1, -1):
            beta[t] = self.transition @ (self.emission[:, seq[t + 1]] * beta[t + 1])
            beta[t] /= scale[t + 1]
        return alpha, beta, scale

    def fit(self, sequences: list[list[int]], max_iter: int = 100,
            tol: float = 1e-6) -> float:
        """Baum-Welch over a set of sequences; returns final log-likelihood."""
        seqs = [np.asarray(s, dtype=int) for s in sequences if len(s) > 0]
        if not seqs:
            raise AnalysisError("no sequences to fit")
        for s in seqs:
            if s.min() < 0 or s.max() >= self.n_symbols:
                raise AnalysisError("symbol outside the emission alphabet")
        last_ll = -np.inf
        for _ in range(max_iter):
            start_acc = np.zeros(self.n_states)
            trans_acc = np.zeros((self.n_states, self.n_states))
            emit_acc = np.zeros((self.n_states, self.n_symbols))
            occupancy = np.zeros(self.n_states)
            ll = 0.0
            for seq in seqs:
                alpha, beta, scale = self._forward_backward(seq)
                ll += float(np.log(scale).sum())
                gamma = alpha * beta
                gamma /= gamma.sum(axis=1, keepdims=True)
                start_acc += gamma[0]
                for t in range(len(seq) - 1):
                    xi = (alpha[t][:, None] * self.transition
                          * self.emission[:, seq[t + 1]][None, :] * beta[t + 1][None, :])
                    total = xi.sum()
                    if total > 0:
                        trans_acc += xi / total
                for t, sym in enumerate(seq):
                    emit_acc[:, sym] += gamma[t]
                occupancy += gamma.sum(axis=0)
            self.start = start_acc / start_acc.sum()
            for i in range(self.n_states):
                # unused states keep their previous rows instead of
                # collapsing to uniform noise
                if occupancy[i] > 1e-8:
                    row = trans_acc[i]
                    if row.sum() > 0:
                        self.transition[i] = row / row.sum()
                    self.emission[i] = emit_acc[i] / emit_acc[i].sum()
            if abs(ll - last_ll) < tol:
                break
            last_ll = ll
        return last_ll

    def decode(self, sequence: list[int]) -> list[int]:
        """Most likely state path (Viterbi, log space)."""
        seq = np.asarray(sequence, dtype=int)
        if len(seq) == 0:
            return []
        with np.errstate(divide="ignore"):
            log_t = np.log(self.transition)
            log_e = np.log(self.emission)
            log_s = np.log(self.start)
        T = len(seq)
        delta = np.zeros((T, self.n_states))
        psi = np.zeros((T, self.n_states), dtype=int)
        delta[0] = log_s + log_e[:, seq[0]]
        for t in range(1, T):
            trans_scores = delta[t - 1][:, None] + log_t
            psi[t] = trans_scores.argmax(axis=0)
            delta[t] = trans_scores.max(axis=0) + log_e[:, seq[t]]
        path = [int(delta[-1].argmax())]
        for t in range(T - 1, 0, -1):
            path.append(int(psi[t][path[-1]]))
        path.reverse()
        return path

    def state_symbol_map(self) -> dict[int, int]:
        """Map each state to its most probable emission symbol."""
        return {i: int(self.emission[i].argmax()) for i in range(self.n_states)}
