"""Collapsed Gibbs sweep for LDA over flattened token arrays.

The per-token uniform variates are generated outside the kernel, so the
numba and fallback paths produce identical assignments for a given seed.
"""

import numpy as np

from ._accel import njit_or_fallback


def _sweep_python(doc_ids, word_ids, z, doc_topic, topic_word, topic_counts,
                  alpha, beta, uniforms):
    n_topics, vocab_size = topic_word.shape
    vbeta = vocab_size * beta
    probs = np.empty(n_topics, dtype=np.float64)
    for t in range(len(z)):
        d = doc_ids[t]
        w = word_ids[t]
        k = z[t]
        doc_topic[d, k] -= 1
        topic_word[k, w] -= 1
        topic_counts[k] -= 1
        total = 0.0
        for j in range(n_topics):
            p = (
                (doc_topic[d, j] + alpha)
                * (topic_word[j, w] + beta)
                / (topic_counts[j] + vbeta)
            )
            total += p
            probs[j] = total
        target = uniforms[t] * total
        new_k = n_topics - 1
        for j in range(n_topics):
            if probs[j] > target:
                new_k = j
                break
        z[t] = new_k
        doc_topic[d, new_k] += 1
        topic_word[new_k, w] += 1
        topic_counts[new_k] += 1


@njit_or_fallback(_sweep_python)
def gibbs_sweep(doc_ids, word_ids, z, doc_topic, topic_word, topic_counts,
                alpha, beta, uniforms):
    n_topics, vocab_size = topic_word.shape
    vbeta = vocab_size * beta
    probs = np.empty(n_topics, dtype=np.float64)
    for t in range(len(z)):
        d = doc_ids[t]
        w = word_ids[t]
        k = z[t]
        doc_topic[d, k] -= 1
        topic_word[k, w] -= 1
        topic_counts[k] -= 1
        total = 0.0
        for j in range(n_topics):
            p = (
                (doc_topic[d, j] + alpha)
                * (topic_word[j, w] + beta)
                / (topic_counts[j] + vbeta)
            )
            total += p
            probs[j] = total
        target = uniforms[t] * total
        new_k = n_topics - 1
        for j in range(n_topics):
            if probs[j] > target:
                new_k = j
                break
        z[t] = new_k
        doc_topic[d, new_k] += 1
        topic_word[new_k, w] += 1
        topic_counts[new_k] += 1
