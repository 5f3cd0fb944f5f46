import itertools
import math
import os
import subprocess
import sys

import numpy as np
import pytest

from oracles import all_vectors, dense_matvec, min_weight_solution, reference_minsum
from qldpc_beam import kernels
from qldpc_beam.bp import MSG_MAX, initial_messages, masked_bp, plain_bp
from qldpc_beam.codes import preset_problem, repetition_code
from qldpc_beam.gf2 import SparseBinaryMatrix
from qldpc_beam.problem import DecodingProblem, syndrome_of

LN9 = math.log(9)


def make_problem(dense, p):
    dense = np.asarray(dense, dtype=np.uint8)
    n = dense.shape[1]
    p = np.broadcast_to(np.asarray(p, dtype=float), (n,)).copy()
    return DecodingProblem(SparseBinaryMatrix.from_dense(dense), SparseBinaryMatrix.zeros(0, n), p)


def random_instance(rng, max_m=10, max_n=16, density=0.3):
    m = int(rng.integers(1, max_m + 1))
    n = int(rng.integers(2, max_n + 1))
    dense = (rng.random((m, n)) < density).astype(np.uint8)
    p = rng.uniform(0.01, 0.4, n)
    return dense, p


def random_mask(rng, n, max_len=4):
    size = int(rng.integers(0, min(max_len, n) + 1))
    pos = rng.choice(n, size, replace=False)
    return tuple((int(j), int(rng.integers(0, 2))) for j in pos)


def test_initial_messages_closed_form():
    prob = make_problem([[1, 1]], 0.1)
    assert np.allclose(initial_messages(prob), [LN9, LN9], atol=1e-12)


def test_initial_messages_near_half():
    prob = make_problem([[1, 1, 0], [0, 1, 1]], 0.5 - 1e-9)
    msgs = initial_messages(prob)
    assert (msgs > 0).all() and (msgs < 1e-7).all()


def test_initial_messages_are_column_priors():
    rng = np.random.default_rng(0)
    dense, p = random_instance(rng)
    prob = make_problem(dense, p)
    expect = [prob.prior_llr[j] for j in range(dense.shape[1]) for i in range(dense.shape[0]) if dense[i, j]]
    assert np.array_equal(initial_messages(prob), expect)


def test_two_bit_check_zero_syndrome():
    prob = make_problem([[1, 1]], 0.1)
    out = plain_bp(prob, [0], 10)
    assert out.converged and out.iters_run == 1
    assert out.decoded.tolist() == [0, 0]
    assert np.allclose(out.posterior, 2 * LN9)
    assert np.allclose(out.sum_llr, 2 * LN9)


def test_single_neighbour_saturates():
    prob = make_problem([[1, 1]], 0.1)
    out = masked_bp(prob, initial_messages(prob), [(1, 1)], [1], 5)
    assert out.converged and out.iters_run == 1
    assert out.decoded.tolist() == [0, 1]
    assert out.posterior[0] == pytest.approx(MSG_MAX + LN9)
    assert math.isnan(out.posterior[1]) and math.isnan(out.sum_llr[1])
    assert syndrome_of(prob, out.decoded).tolist() == [1]


def test_fully_masked_converges_immediately():
    dense = np.array([[1, 1, 0], [0, 1, 1]])
    prob = make_problem(dense, 0.1)
    e = np.array([1, 1, 0], dtype=np.uint8)
    s = dense_matvec(dense, e)
    out = masked_bp(prob, initial_messages(prob), [(j, int(e[j])) for j in range(3)], s, 4)
    assert out.converged and out.iters_run == 1
    assert out.decoded.tolist() == e.tolist()


def test_failure_keeps_messages():
    prob = make_problem([[1, 1]], 0.1)
    # fully masked and violated: can never converge
    out = masked_bp(prob, initial_messages(prob), [(0, 0), (1, 0)], [1], 3)
    assert not out.converged and out.status == "failure"
    assert out.decoded is None
    assert out.iters_run == 3
    assert out.final_messages.shape == (2,)


def test_input_validation():
    prob = make_problem([[1, 1]], 0.1)
    msgs = initial_messages(prob)
    with pytest.raises(ValueError, match="out of range"):
        masked_bp(prob, msgs, [(2, 0)], [0], 3)
    with pytest.raises(ValueError, match="twice"):
        masked_bp(prob, msgs, [(0, 0), (0, 1)], [0], 3)
    with pytest.raises(ValueError, match="message vector"):
        masked_bp(prob, msgs[:1], (), [0], 3)
    with pytest.raises(ValueError, match="syndrome"):
        masked_bp(prob, msgs, (), [0, 0], 3)
    with pytest.raises(ValueError, match="max_iters"):
        masked_bp(prob, msgs, (), [0], 0)


def _check_against_reference(dense, p, s, mask, iters, msgs=None):
    prob = make_problem(dense, p)
    start = initial_messages(prob) if msgs is None else msgs
    out = masked_bp(prob, start, mask, s, iters)
    edges, history = reference_minsum(dense, prob.p, s, out.iters_run, mask, msgs)
    E_ref, post_ref, hard_ref, _ = history[-1]
    assert np.allclose(out.final_messages, [E_ref[e] for e in edges], rtol=0, atol=1e-9)
    assert np.allclose(out.posterior, post_ref, rtol=0, atol=1e-9, equal_nan=True)
    mask_ones = np.zeros(len(p), dtype=np.uint8)
    for j, v in mask:
        mask_ones[j] = v
    assert np.array_equal(out.hard_decision, hard_ref | mask_ones)
    sum_ref = np.sum([h[1] for h in history], axis=0)
    assert np.allclose(out.sum_llr, sum_ref, rtol=0, atol=1e-8, equal_nan=True)
    return out


def test_matches_reference_formulas():
    rng = np.random.default_rng(21)
    for _ in range(60):
        dense, p = random_instance(rng, 6, 9, 0.4)
        s = rng.integers(0, 2, dense.shape[0])
        mask = random_mask(rng, dense.shape[1], 3)
        _check_against_reference(dense, p, s, mask, int(rng.integers(1, 6)))


def test_warm_start_matches_reference():
    rng = np.random.default_rng(22)
    for _ in range(30):
        dense, p = random_instance(rng, 6, 9, 0.4)
        nnz = int(dense.sum())
        msgs = rng.normal(0, 3, nnz)
        s = rng.integers(0, 2, dense.shape[0])
        _check_against_reference(dense, p, s, random_mask(rng, dense.shape[1], 2), 3, msgs)


def test_masked_equals_reduced_problem():
    rng = np.random.default_rng(5)
    checked = 0
    while checked < 100:
        dense, p = random_instance(rng, 8, 12, 0.35)
        n = dense.shape[1]
        j = int(rng.integers(n))
        v = int(rng.integers(2))
        s = rng.integers(0, 2, dense.shape[0]).astype(np.uint8)
        prob = make_problem(dense, p)
        full = masked_bp(prob, initial_messages(prob), [(j, v)], s, 1)

        keep = [c for c in range(n) if c != j]
        red = make_problem(dense[:, keep], p[keep])
        s_red = s ^ (dense[:, j] * v).astype(np.uint8)
        reduced = plain_bp(red, s_red, 1)

        # edges of the unmasked columns, in the same column-major order
        col_of_edge = prob.tanner.edge_col
        live = col_of_edge != j
        assert np.array_equal(full.final_messages[live], reduced.final_messages)
        assert np.array_equal(full.posterior[keep], reduced.posterior)
        assert np.array_equal(full.hard_decision[keep], reduced.hard_decision)
        assert full.hard_decision[j] == v
        assert full.converged == reduced.converged
        checked += 1


def test_deterministic():
    _, prob = preset_problem("bb72", 0.05)
    rng = np.random.default_rng(1)
    s = syndrome_of(prob, (rng.random(prob.N) < 0.05).astype(np.uint8))
    a = masked_bp(prob, initial_messages(prob), [(3, 1), (10, 0)], s, 40)
    b = masked_bp(prob, initial_messages(prob), [(3, 1), (10, 0)], s, 40)
    for field in ("hard_decision", "final_messages", "sum_llr", "posterior"):
        assert np.array_equal(getattr(a, field), getattr(b, field), equal_nan=True)
    assert (a.converged, a.iters_run) == (b.converged, b.iters_run)


@pytest.mark.parametrize("n", range(2, 8))
def test_tree_exactness_on_chain(n):
    # generic priors so no syndrome has two equal-weight coset leaders
    rng = np.random.default_rng(n)
    p = rng.uniform(0.02, 0.3, n)
    dense = repetition_code(n).hz.to_dense()
    prob = make_problem(dense, p)
    for e in all_vectors(n):
        s = syndrome_of(prob, e)
        out = plain_bp(prob, s, n)
        assert out.converged, (n, e)
        assert np.array_equal(syndrome_of(prob, out.decoded), s)
        best, _ = min_weight_solution(dense, s, prob.prior_llr)
        assert np.array_equal(out.decoded, best)


def test_chain_with_tied_coset_leaders_does_not_converge():
    # rep4 with uniform p: 0011 and 1100 share a syndrome and a weight, the
    # posteriors cancel to 0 and the tie rule sets every bit
    prob = make_problem(repetition_code(4).hz.to_dense(), 0.1)
    out = plain_bp(prob, [0, 1, 0], 4)
    assert not out.converged
    assert out.hard_decision.tolist() == [1, 1, 1, 1]


def test_convergence_soundness_random():
    rng = np.random.default_rng(77)
    converged = 0
    for _ in range(300):
        dense, p = random_instance(rng, 12, 20, 0.25)
        prob = make_problem(dense, p)
        e = (rng.random(dense.shape[1]) < 0.15).astype(np.uint8)
        s = dense_matvec(dense, e).astype(np.uint8)
        out = masked_bp(prob, initial_messages(prob), random_mask(rng, dense.shape[1]), s, 25)
        if out.converged:
            converged += 1
            assert np.array_equal(dense_matvec(dense, out.decoded), s)
    assert converged > 50


def _run_both(prob, mask, s, iters, msgs=None):
    msgs = initial_messages(prob) if msgs is None else msgs
    a = masked_bp(prob, msgs, mask, s, iters, kernel=kernels.minsum_loops)
    b = masked_bp(prob, msgs, mask, s, iters, kernel=kernels.minsum_numpy)
    return a, b


@pytest.mark.parametrize("name, stack", [("bb72", "XZ"), ("bb90", "XYZ"), ("rep5", "XZ")])
def test_backends_bit_identical(name, stack):
    _, prob = preset_problem(name, 0.08, "X", stack)
    rng = np.random.default_rng(3)
    for _ in range(15):
        s = syndrome_of(prob, (rng.random(prob.N) < prob.p).astype(np.uint8))
        mask = random_mask(rng, prob.N, 5)
        a, b = _run_both(prob, mask, s, 25)
        assert (a.converged, a.iters_run) == (b.converged, b.iters_run)
        for field in ("hard_decision", "final_messages", "sum_llr", "posterior"):
            assert np.array_equal(getattr(a, field), getattr(b, field), equal_nan=True), field


def test_backends_agree_with_scale_and_empty_rows():
    dense = np.array([[1, 1, 0, 0], [0, 0, 0, 0], [0, 1, 1, 1]])
    prob = make_problem(dense, [0.1, 0.2, 0.05, 0.3])
    for s in itertools.product((0, 1), repeat=3):
        for mask in ((), ((1, 1),), ((3, 0), (0, 1))):
            a = masked_bp(prob, initial_messages(prob), mask, s, 6, scale=0.75, kernel=kernels.minsum_loops)
            b = masked_bp(prob, initial_messages(prob), mask, s, 6, scale=0.75, kernel=kernels.minsum_numpy)
            assert np.array_equal(a.final_messages, b.final_messages)
            assert np.array_equal(a.sum_llr, b.sum_llr, equal_nan=True)


def test_env_flag_selects_numpy_backend():
    code = (
        "import numpy as np\n"
        "from qldpc_beam import kernels\n"
        "from qldpc_beam.codes import preset_problem\n"
        "from qldpc_beam.bp import plain_bp\n"
        "_, prob = preset_problem('rep5', 0.1)\n"
        "out = plain_bp(prob, np.array([0, 1, 1, 0], dtype=np.uint8), 5)\n"
        "print(kernels.BACKEND, ''.join(map(str, out.hard_decision)))\n"
    )
    env = dict(os.environ, QLDPC_BEAM_DISABLE_NUMBA="1")
    res = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True)
    assert res.stdout.split() == ["numpy", "00100"]


def test_benchmark_script_runs(capsys):
    import runpy
    from pathlib import Path

    bench = runpy.run_path(str(Path(__file__).parents[1] / "benchmarks" / "bench_kernels.py"))
    bench["main"](["--preset", "rep5", "--iters", "3", "--syndromes", "1", "--repeat", "1"])
    assert "rep5" in capsys.readouterr().out
