import itertools
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from qmaze import adaptive, qubo
from qmaze.maze import BarAssignment


# -- independent oracles -------------------------------------------------


def flat_bar_index(n, i, j, d):
    """Index arithmetic written out separately from the implementation."""
    base = (3 * n + 1) * i
    return base + d if j == 0 else base + d + 3 * j + 1


def flat_sg_index(n, m, n2):
    return (3 * n + 1) * n + (n + 1) * m + n2


def reference_energy(n, bits, lambda1, lambda2):
    """Structural evaluation of the three cost terms, no matrix involved."""
    overlap = 0
    for j in range(n):
        for i in range(n - 1):
            if bits[flat_bar_index(n, i, j, 2)] and bits[flat_bar_index(n, i + 1, j, 0)]:
                overlap += 1
    onehot = 0.0
    for i in range(n):
        for j in range(n):
            total = sum(bits[flat_bar_index(n, i, j, d)] for d in (range(4) if j == 0 else range(3)))
            onehot += (total - 1) ** 2
    picks = sum(bits[flat_sg_index(n, m, n2)] for m in range(n + 1) for n2 in range(n + 1))
    return overlap + lambda1 * onehot + lambda2 * (picks - 2) ** 2


def count_feasible_oracle(n):
    """Constraint enumeration: per-column direction combos x candidate pairs."""
    bar_configs = 1
    for j in range(n):
        dirs = 4 if j == 0 else 3
        count = 0
        for choice in itertools.product(range(dirs), repeat=n):
            if any(choice[i] == 2 and choice[i + 1] == 0 for i in range(n - 1)):
                continue
            count += 1
        bar_configs *= count
    return bar_configs * math.comb((n + 1) ** 2, 2)


def int_to_bits(x, dim):
    return [(x >> b) & 1 for b in range(dim)]


# -- index maps ---------------------------------------------------------------


def test_bar_index_examples():
    assert qubo.index_of_bar(3, 0, 0, 0) == 0
    assert qubo.index_of_bar(3, 0, 1, 0) == 4
    assert qubo.index_of_bar(3, 1, 0, 2) == 12


def test_sg_index_examples():
    assert qubo.index_of_sg(3, 0, 0) == 30
    assert qubo.index_of_sg(3, 3, 3) == 45 == qubo.problem_dim(3) - 1
    assert qubo.index_of_sg(1, 1, 1) == 7 == qubo.problem_dim(1) - 1


def test_dim_formula():
    for n in range(1, 12):
        assert qubo.problem_dim(n) == n * (3 * n + 1) + (n + 1) ** 2
    assert qubo.problem_dim(9) == 352


def test_index_errors():
    with pytest.raises(qubo.IndexOutOfRangeError):
        qubo.index_of_bar(3, 3, 0, 0)
    with pytest.raises(qubo.IndexOutOfRangeError):
        qubo.index_of_bar(3, 0, 1, 3)  # left outside the first column
    with pytest.raises(qubo.IndexOutOfRangeError):
        qubo.index_of_sg(3, 4, 0)
    with pytest.raises(qubo.IndexOutOfRangeError):
        qubo.bar_of_index(3, qubo.num_bar_vars(3))
    with pytest.raises(qubo.IndexOutOfRangeError):
        qubo.sg_of_index(3, 0)


@given(n=st.integers(1, 10))
@settings(max_examples=20, deadline=None)
def test_index_maps_are_bijections(n):
    seen = set()
    for i in range(n):
        for j in range(n):
            for d in range(4) if j == 0 else range(3):
                k = qubo.index_of_bar(n, i, j, d)
                assert k == flat_bar_index(n, i, j, d)
                assert qubo.bar_of_index(n, k) == (i, j, d)
                seen.add(k)
    for m in range(n + 1):
        for n2 in range(n + 1):
            k = qubo.index_of_sg(n, m, n2)
            assert k == flat_sg_index(n, m, n2)
            assert qubo.sg_of_index(n, k) == (m, n2)
            seen.add(k)
    assert seen == set(range(qubo.problem_dim(n)))


# -- base QUBO ---------------------------------------------------------------


def test_overlap_coefficient_unit_weight():
    q = qubo.build_base_qubo(2)
    pair = (qubo.index_of_bar(2, 0, 0, 2), qubo.index_of_bar(2, 1, 0, 0))
    assert q.coeffs[pair] == 1.0


def test_penalty_diagonals():
    q = qubo.build_base_qubo(3, lambda1=2.0, lambda2=2.0)
    for m in range(4):
        for n2 in range(4):
            k = qubo.index_of_sg(3, m, n2)
            assert q.coeffs[(k, k)] == -3.0 * 2.0
    k = qubo.index_of_bar(3, 0, 0, 0)
    assert q.coeffs[(k, k)] == -2.0
    k2 = qubo.index_of_bar(3, 0, 0, 1)
    assert q.coeffs[(k, k2)] == 2.0 * 2.0


def test_coeff_keys_are_upper_triangular():
    q = qubo.build_base_qubo(4)
    assert all(k1 <= k2 for k1, k2 in q.coeffs)


def test_build_rejects_bad_params():
    with pytest.raises(ValueError):
        qubo.build_base_qubo(0)
    with pytest.raises(ValueError):
        qubo.build_base_qubo(2, lambda1=0.0)


# -- energy --------------------------------------------------------------------


def test_all_zeros_energy_is_penalty_constant():
    for n in (1, 2, 3):
        q = qubo.build_base_qubo(n, lambda1=2.0, lambda2=2.0)
        assert qubo.energy(q, [0] * q.dim) == 2.0 * n * n + 4.0 * 2.0


def test_double_direction_costs_lambda1():
    q = qubo.build_base_qubo(1, lambda1=2.0, lambda2=2.0)
    bits = np.zeros(q.dim, dtype=int)
    bits[qubo.index_of_bar(1, 0, 0, 0)] = 1
    bits[qubo.index_of_bar(1, 0, 0, 1)] = 1
    bits[qubo.index_of_sg(1, 0, 0)] = 1
    bits[qubo.index_of_sg(1, 1, 1)] = 1
    assert qubo.energy(q, bits) == 2.0  # (2-1)^2 * lambda1 above feasible


def test_energy_matches_structural_oracle():
    rng = np.random.default_rng(0)
    for n in (1, 2, 3):
        q = qubo.build_base_qubo(n, lambda1=2.0, lambda2=2.0)
        for _ in range(200):
            bits = rng.integers(0, 2, q.dim)
            assert qubo.energy(q, bits) == reference_energy(n, bits, 2.0, 2.0)


def test_energy_matches_dense_quadratic_form():
    q = qubo.build_base_qubo(2)
    diag, w = q.dense()
    rng = np.random.default_rng(1)
    for _ in range(50):
        b = rng.integers(0, 2, q.dim).astype(float)
        dense_val = q.offset + diag @ b + 0.5 * b @ w @ b
        assert qubo.energy(q, b.astype(int)) == pytest.approx(dense_val, abs=1e-12)


def test_energy_length_mismatch():
    q = qubo.build_base_qubo(1)
    with pytest.raises(qubo.LengthMismatchError):
        qubo.energy(q, [0, 1])


# -- brute force equivalence (n=1) ---------------------------------------------


def test_n1_brute_force_energy_decode_equivalence():
    q = qubo.build_base_qubo(1, lambda1=2.0, lambda2=2.0)
    zero_count = 0
    for x in range(2**q.dim):
        bits = int_to_bits(x, q.dim)
        e = qubo.energy(q, bits)
        decoded = qubo.decode(q, bits)
        feasible = isinstance(decoded, BarAssignment)
        assert feasible == (e == 0.0)
        if e == 0.0:
            zero_count += 1
    assert zero_count == 24 == count_feasible_oracle(1)


# -- decode ---------------------------------------------------------------------


def test_decode_reports_sg_count():
    q = qubo.build_base_qubo(1)
    bits = np.zeros(q.dim, dtype=int)
    bits[qubo.index_of_bar(1, 0, 0, 0)] = 1
    for m, n2 in [(0, 0), (0, 1), (1, 0)]:
        bits[qubo.index_of_sg(1, m, n2)] = 1
    violations = qubo.decode(q, bits)
    assert isinstance(violations, list)
    assert any("start/goal count = 3" in v for v in violations)


def test_decode_reports_overlap():
    q = qubo.build_base_qubo(2)
    bits = np.zeros(q.dim, dtype=int)
    bits[qubo.index_of_bar(2, 0, 0, 2)] = 1
    bits[qubo.index_of_bar(2, 1, 0, 0)] = 1
    bits[qubo.index_of_bar(2, 0, 1, 0)] = 1
    bits[qubo.index_of_bar(2, 1, 1, 0)] = 1
    bits[qubo.index_of_sg(2, 0, 0)] = 1
    bits[qubo.index_of_sg(2, 2, 2)] = 1
    violations = qubo.decode(q, bits)
    assert any("overlap" in v for v in violations)


def test_decode_encode_round_trip():
    q = qubo.build_base_qubo(2)
    a = BarAssignment(
        n=2,
        dirs={(0, 0): 3, (1, 0): 1, (0, 1): 0, (1, 1): 2},
        start_goal=frozenset({(0, 1), (2, 0)}),
    )
    bits = qubo.encode_assignment(q, a)
    decoded = qubo.decode(q, bits)
    assert decoded == a
    assert qubo.energy(q, bits) == 0.0


# -- update term -----------------------------------------------------------------


def test_zero_update_matrix_is_identity():
    q = qubo.build_base_qubo(2)
    state = adaptive.init_update_state(2, seed=0)
    state.matrix = np.zeros_like(state.matrix)
    q2 = qubo.apply_update_term(q, state)
    assert q2.coeffs == q.coeffs and q2.offset == q.offset
    assert q2 is not q and q2.coeffs is not q.coeffs


def test_block_masking_only_sg_changes():
    q = qubo.build_base_qubo(2)
    state = adaptive.init_update_state(2, seed=3, lambda_update1=0.0, lambda_update2=1.0)
    q2 = qubo.apply_update_term(q, state)
    split = qubo.num_bar_vars(2)
    for (k1, k2), v in q2.coeffs.items():
        base = q.coeffs.get((k1, k2), 0.0)
        if k1 < split or k2 < split:
            assert v == base
        # sg-sg entries may change


def test_identity_matrix_deltas_n1():
    q = qubo.build_base_qubo(1)
    state = adaptive.init_update_state(1, seed=0, lambda_update1=0.15, lambda_update2=0.30)
    state.matrix = np.eye(8)
    q2 = qubo.apply_update_term(q, state)
    for k in range(4):
        assert q2.coeffs[(k, k)] == pytest.approx(q.coeffs[(k, k)] + 0.15)
    for k in range(4, 8):
        assert q2.coeffs[(k, k)] == pytest.approx(q.coeffs.get((k, k), 0.0) + 0.30)
    off_diag = {key: v for key, v in q2.coeffs.items() if key[0] != key[1]}
    assert off_diag == {key: v for key, v in q.coeffs.items() if key[0] != key[1]}


def test_all_ones_matrix_deltas_n1():
    # Hand-computed 8x8 case: off-diagonal pairs fold both orders.
    q = qubo.build_base_qubo(1)
    state = adaptive.init_update_state(1, seed=0, lambda_update1=0.15, lambda_update2=0.30)
    state.matrix = np.ones((8, 8))
    q2 = qubo.apply_update_term(q, state)
    expected_delta = {}
    for k1 in range(8):
        for k2 in range(k1, 8):
            w = 0.30 if k1 >= 4 else 0.15
            expected_delta[(k1, k2)] = w if k1 == k2 else 2 * w
    for key, delta in expected_delta.items():
        assert q2.coeffs[key] == pytest.approx(q.coeffs.get(key, 0.0) + delta)


def test_update_dim_mismatch():
    q = qubo.build_base_qubo(2)
    state = adaptive.init_update_state(1, seed=0)
    with pytest.raises(qubo.DimMismatchError):
        qubo.apply_update_term(q, state)


def test_update_energy_matches_explicit_sum():
    # Merged energy = base energy + sum over ordered index pairs of the
    # block-weighted update matrix entries.
    q = qubo.build_base_qubo(1)
    state = adaptive.init_update_state(1, seed=42, lambda_update1=0.15, lambda_update2=0.30)
    merged = qubo.apply_update_term(q, state)
    m = state.matrix
    rng = np.random.default_rng(7)
    for _ in range(100):
        bits = rng.integers(0, 2, 8)
        extra = 0.0
        for k1 in range(8):
            for k2 in range(8):
                if bits[k1] and bits[k2]:
                    w = 0.30 if (k1 >= 4 and k2 >= 4) else 0.15
                    extra += w * m[k1, k2]
        assert qubo.energy(merged, bits) == pytest.approx(qubo.energy(q, bits) + extra, abs=1e-9)


# -- COO serialization -------------------------------------------------------------


def test_coo_round_trip_bit_exact():
    q = qubo.build_base_qubo(3)
    state = adaptive.init_update_state(3, seed=5)
    merged = qubo.apply_update_term(q, state)
    text = qubo.export_coo(merged)
    back = qubo.import_coo(text)
    assert back.n == merged.n and back.dim == merged.dim
    assert back.offset == merged.offset
    assert back.coeffs == dict(sorted(merged.coeffs.items()))
    assert qubo.export_coo(back) == text


def test_coo_header_shape():
    q = qubo.build_base_qubo(1)
    head = qubo.export_coo(q).splitlines()[0].split()
    assert head[0] == "1" and head[1] == "8" and float(head[2]) == q.offset
