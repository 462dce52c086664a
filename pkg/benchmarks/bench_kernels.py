#!/usr/bin/env python3
"""Benchmark the numba-jitted kernels against their numpy/python fallbacks.

Both implementations live side by side in jobtalk._svm_kernels and
jobtalk._lda_kernels; at import time jobtalk._accel picks the jitted one
unless JOBTALK_NO_NUMBA is set. Here we time both directly on the same
inputs and report the speedup.

Usage: python3 benchmarks/bench_kernels.py [--rows N] [--tokens N]
"""

import argparse
import time

import numpy as np

from jobtalk import _accel
from jobtalk._lda_kernels import _sweep_python, gibbs_sweep
from jobtalk._svm_kernels import _obj_grad_numpy, obj_grad


def time_fn(fn, args, repeats, setup=None):
    best = float("inf")
    for _ in range(repeats):
        state = setup() if setup else args
        start = time.perf_counter()
        fn(*state)
        best = min(best, time.perf_counter() - start)
    return best


def bench_svm(n_rows, n_cols, density, repeats):
    rng = np.random.default_rng(0)
    indptr = [0]
    indices = []
    data = []
    for _ in range(n_rows):
        k = max(1, int(n_cols * density))
        cols = np.sort(rng.choice(n_cols, size=k, replace=False))
        indices.extend(cols)
        data.extend(rng.uniform(0.5, 2.0, size=k))
        indptr.append(len(indices))
    args = (
        np.array(indptr, dtype=np.int64),
        np.array(indices, dtype=np.int64),
        np.array(data, dtype=np.float64),
        rng.choice([-1.0, 1.0], size=n_rows),
        rng.uniform(0.5, 3.0, size=n_rows),
        rng.normal(size=n_cols),
        0.1,
        1.0,
    )
    obj_grad(*args)  # warm the JIT cache
    t_jit = time_fn(obj_grad, args, repeats)
    t_np = time_fn(_obj_grad_numpy, args, repeats)
    o1 = obj_grad(*args)[0]
    o2 = _obj_grad_numpy(*args)[0]
    assert abs(o1 - o2) < 1e-9 * max(1.0, abs(o1)), "kernel outputs diverge"
    return t_jit, t_np


def bench_lda(n_tokens, n_topics, vocab_size, n_docs, repeats):
    rng = np.random.default_rng(1)
    doc_ids = rng.integers(0, n_docs, n_tokens).astype(np.int32)
    word_ids = rng.integers(0, vocab_size, n_tokens).astype(np.int32)
    uniforms = rng.random(n_tokens)

    def fresh_state():
        z = np.random.default_rng(2).integers(
            0, n_topics, n_tokens
        ).astype(np.int32)
        doc_topic = np.zeros((n_docs, n_topics), dtype=np.int64)
        topic_word = np.zeros((n_topics, vocab_size), dtype=np.int64)
        topic_counts = np.zeros(n_topics, dtype=np.int64)
        for t in range(n_tokens):
            doc_topic[doc_ids[t], z[t]] += 1
            topic_word[z[t], word_ids[t]] += 1
            topic_counts[z[t]] += 1
        return (doc_ids, word_ids, z, doc_topic, topic_word, topic_counts,
                2.5, 0.01, uniforms)

    gibbs_sweep(*fresh_state())  # warm the JIT cache
    t_jit = time_fn(gibbs_sweep, None, repeats, setup=fresh_state)
    t_py = time_fn(_sweep_python, None, repeats, setup=fresh_state)
    s1, s2 = fresh_state(), fresh_state()
    gibbs_sweep(*s1)
    _sweep_python(*s2)
    assert np.array_equal(s1[2], s2[2]), "kernel outputs diverge"
    return t_jit, t_py


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--rows", type=int, default=5000,
                        help="SVM benchmark: number of training rows")
    parser.add_argument("--cols", type=int, default=20000,
                        help="SVM benchmark: vocabulary size")
    parser.add_argument("--density", type=float, default=0.002)
    parser.add_argument("--tokens", type=int, default=200000,
                        help="LDA benchmark: total token count")
    parser.add_argument("--topics", type=int, default=20)
    parser.add_argument("--vocab", type=int, default=5000)
    parser.add_argument("--docs", type=int, default=500)
    parser.add_argument("--repeats", type=int, default=5)
    args = parser.parse_args()

    backend = "numba" if _accel.USE_NUMBA else "fallback (numba disabled)"
    print(f"active backend for library code: {backend}")
    print()

    t_jit, t_np = bench_svm(args.rows, args.cols, args.density, args.repeats)
    print(f"SVM obj_grad   ({args.rows} rows x {args.cols} cols, "
          f"density {args.density}):")
    print(f"  numba:  {t_jit * 1e3:9.2f} ms")
    print(f"  numpy:  {t_np * 1e3:9.2f} ms")
    print(f"  speedup: {t_np / t_jit:6.2f}x")
    print()

    t_jit, t_py = bench_lda(args.tokens, args.topics, args.vocab, args.docs,
                            args.repeats)
    print(f"LDA gibbs_sweep ({args.tokens} tokens, {args.topics} topics, "
          f"vocab {args.vocab}):")
    print(f"  numba:  {t_jit * 1e3:9.2f} ms")
    print(f"  python: {t_py * 1e3:9.2f} ms")
    print(f"  speedup: {t_py / t_jit:6.2f}x")


if __name__ == "__main__":
    main()
