import os
import subprocess
import sys

import numpy as np
import pytest

from jobtalk._lda_kernels import _sweep_python, gibbs_sweep
from jobtalk._svm_kernels import (
    _decision_numpy,
    _obj_grad_numpy,
    decision_values,
    obj_grad,
)


def random_csr(n_rows, n_cols, density, rng):
    indptr = [0]
    indices = []
    data = []
    for _ in range(n_rows):
        k = max(1, rng.binomial(n_cols, density))
        cols = np.sort(rng.choice(n_cols, size=k, replace=False))
        indices.extend(cols)
        data.extend(rng.uniform(0.5, 2.0, size=k))
        indptr.append(len(indices))
    return (
        np.array(indptr, dtype=np.int64),
        np.array(indices, dtype=np.int64),
        np.array(data, dtype=np.float64),
    )


class TestSvmKernelParity:
    def test_obj_grad_matches_fallback(self):
        rng = np.random.default_rng(0)
        for _ in range(10):
            n, v = 30, 50
            indptr, indices, data = random_csr(n, v, 0.1, rng)
            y = rng.choice([-1.0, 1.0], size=n)
            cw = rng.uniform(0.5, 3.0, size=n)
            w = rng.normal(size=v)
            b = float(rng.normal())
            o1, gw1, gb1 = obj_grad(indptr, indices, data, y, cw, w, b, 0.7)
            o2, gw2, gb2 = _obj_grad_numpy(indptr, indices, data, y, cw, w,
                                           b, 0.7)
            assert o1 == pytest.approx(o2, rel=1e-12)
            assert np.allclose(gw1, gw2, atol=1e-12)
            assert gb1 == pytest.approx(gb2, abs=1e-12)

    def test_decision_values_match_fallback(self):
        rng = np.random.default_rng(1)
        indptr, indices, data = random_csr(25, 40, 0.15, rng)
        w = rng.normal(size=40)
        s1 = decision_values(indptr, indices, data, w, 0.3)
        s2 = _decision_numpy(indptr, indices, data, w, 0.3)
        assert np.allclose(s1, s2, atol=1e-12)

    def test_gradient_finite_difference(self):
        rng = np.random.default_rng(2)
        indptr, indices, data = random_csr(10, 12, 0.3, rng)
        y = rng.choice([-1.0, 1.0], size=10)
        cw = np.ones(10)
        w = rng.normal(size=12) * 0.1
        b, C = 0.05, 1.3
        _, grad_w, grad_b = obj_grad(indptr, indices, data, y, cw, w, b, C)
        eps = 1e-7
        for j in range(12):
            wp = w.copy()
            wp[j] += eps
            op, _, _ = obj_grad(indptr, indices, data, y, cw, wp, b, C)
            wm = w.copy()
            wm[j] -= eps
            om, _, _ = obj_grad(indptr, indices, data, y, cw, wm, b, C)
            assert grad_w[j] == pytest.approx((op - om) / (2 * eps),
                                              abs=1e-4)
        op, _, _ = obj_grad(indptr, indices, data, y, cw, w, b + eps, C)
        om, _, _ = obj_grad(indptr, indices, data, y, cw, w, b - eps, C)
        assert grad_b == pytest.approx((op - om) / (2 * eps), abs=1e-4)


class TestLdaKernelParity:
    def make_state(self, seed=0, n_tokens=500, K=4, V=30, D=10):
        rng = np.random.default_rng(seed)
        doc_ids = rng.integers(0, D, n_tokens).astype(np.int32)
        word_ids = rng.integers(0, V, n_tokens).astype(np.int32)
        z = rng.integers(0, K, n_tokens).astype(np.int32)
        doc_topic = np.zeros((D, K), dtype=np.int64)
        topic_word = np.zeros((K, V), dtype=np.int64)
        topic_counts = np.zeros(K, dtype=np.int64)
        for t in range(n_tokens):
            doc_topic[doc_ids[t], z[t]] += 1
            topic_word[z[t], word_ids[t]] += 1
            topic_counts[z[t]] += 1
        uniforms = rng.random(n_tokens)
        return (doc_ids, word_ids, z, doc_topic, topic_word, topic_counts,
                uniforms)

    def test_sweep_matches_fallback(self):
        s1 = self.make_state()
        s2 = self.make_state()
        gibbs_sweep(s1[0], s1[1], s1[2], s1[3], s1[4], s1[5],
                    2.5, 0.01, s1[6])
        _sweep_python(s2[0], s2[1], s2[2], s2[3], s2[4], s2[5],
                      2.5, 0.01, s2[6])
        assert np.array_equal(s1[2], s2[2])  # identical assignments
        assert np.array_equal(s1[3], s2[3])
        assert np.array_equal(s1[4], s2[4])
        assert np.array_equal(s1[5], s2[5])

    def test_sweep_preserves_totals(self):
        s = self.make_state(seed=3)
        total = int(s[4].sum())
        gibbs_sweep(s[0], s[1], s[2], s[3], s[4], s[5], 2.5, 0.01, s[6])
        assert int(s[4].sum()) == total
        assert np.array_equal(s[4].sum(axis=1), s[5])
        assert (s[3] >= 0).all() and (s[4] >= 0).all()


class TestBackendSelection:
    def test_env_flag_disables_numba(self):
        code = (
            "from jobtalk import _accel\n"
            "from jobtalk import _svm_kernels as s, _lda_kernels as l\n"
            "assert not _accel.USE_NUMBA\n"
            "assert s.obj_grad is s._obj_grad_numpy\n"
            "assert l.gibbs_sweep is l._sweep_python\n"
            "print('fallback-active')\n"
        )
        env = dict(os.environ, JOBTALK_NO_NUMBA="1")
        out = subprocess.run(
            [sys.executable, "-c", code], env=env,
            capture_output=True, text=True,
        )
        assert out.returncode == 0, out.stderr
        assert "fallback-active" in out.stdout

    def test_training_identical_across_backends(self, tmp_path):
        # a small end-to-end train must give byte-identical weights under
        # JOBTALK_NO_NUMBA, since both kernels are exact
        code = (
            "import numpy as np\n"
            "from jobtalk.features import build_vocab, vectorize\n"
            "from jobtalk.model import TrainConfig, train_linear_svm\n"
            "from jobtalk.synthetic import separable_corpus\n"
            "docs = separable_corpus(80, seed=5)\n"
            "vocab = build_vocab((t for t, _ in docs))\n"
            "ex = [(vectorize(t, vocab), lab) for t, lab in docs]\n"
            "m = train_linear_svm(ex, TrainConfig(C=0.5), vocab=vocab)\n"
            "np.save(%r, np.concatenate([m.weights, [m.bias]]))\n"
        )
        results = []
        for flag, name in (("", "jit.npy"), ("1", "fb.npy")):
            path = str(tmp_path / name)
            env = dict(os.environ, JOBTALK_NO_NUMBA=flag)
            out = subprocess.run(
                [sys.executable, "-c", code % path], env=env,
                capture_output=True, text=True,
            )
            assert out.returncode == 0, out.stderr
            results.append(np.load(path))
        assert np.allclose(results[0], results[1], atol=1e-12)
