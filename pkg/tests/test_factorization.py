import math

import numpy as np
import pytest

from mqsym.factorization import (
    FULLY_SEPARABLE,
    GLOBALLY_ENTANGLED,
    PARTIALLY_ENTANGLED,
    finest_factorization,
    is_factoring_subset,
    minimal_factoring_block,
    separates,
)
from mqsym.generators import slater
from mqsym.partitions import Partition, labels_from_mask, mask_from_labels
from mqsym.permutations import EQUIPOLLENT_STRICT, equipollent, symmetrize
from mqsym.states import StateVector, assemble_product, normalize

from oracles import (
    all_set_partitions,
    bell_amplitudes,
    brute_is_factoring,
    brute_minimal_block,
    ghz_amplitudes,
    random_unit,
    singlet_amplitudes,
)

TOL = 1e-9


def make_state(amplitudes, local_dim=2):
    amplitudes = np.asarray(amplitudes, dtype=complex)
    num_sites = round(math.log(amplitudes.size, local_dim))
    return StateVector(num_sites, local_dim, amplitudes)


def bell_times_zero():
    return make_state(np.kron(bell_amplitudes(), [1, 0]))


def mask(labels, num_sites):
    return mask_from_labels(labels, num_sites)


# ---------------------------------------------------------------- is_factoring_subset


def test_factoring_subset_bell_times_zero():
    psi = bell_times_zero()
    assert is_factoring_subset(psi, mask([3], 3), TOL)
    assert not is_factoring_subset(psi, mask([1], 3), TOL)
    assert is_factoring_subset(psi, mask([1, 2, 3], 3), TOL)


def test_factoring_subset_rejects_empty():
    with pytest.raises(ValueError):
        is_factoring_subset(bell_times_zero(), 0, TOL)


def test_factoring_subset_matches_brute_force():
    rng = np.random.default_rng(30)
    candidates = [
        bell_times_zero(),
        make_state(ghz_amplitudes(3)),
        make_state(np.kron(random_unit(2, rng), random_unit(4, rng))),
        make_state(random_unit(8, rng)),
    ]
    for psi in candidates:
        for subset_mask in range(1, 8):
            labels = labels_from_mask(subset_mask)
            expected = brute_is_factoring(psi.amplitudes, 3, 2, labels, TOL)
            assert is_factoring_subset(psi, subset_mask, TOL) == expected


def test_factoring_subset_schmidt_symmetry():
    rng = np.random.default_rng(31)
    for _ in range(10):
        psi = make_state(random_unit(16, rng))
        for subset_mask in range(1, 15):
            comp = subset_mask ^ 15
            assert is_factoring_subset(psi, subset_mask, TOL) == is_factoring_subset(
                psi, comp, TOL
            )


# ---------------------------------------------------------------- minimal block


def test_minimal_block_ghz():
    psi = make_state(ghz_amplitudes(3))
    assert minimal_factoring_block(psi, 1, TOL) == mask([1, 2, 3], 3)
    assert set(labels_from_mask(minimal_factoring_block(psi, 1, TOL))) == brute_minimal_block(
        psi.amplitudes, 3, 2, 1, TOL
    )


def test_minimal_block_product_state():
    psi = make_state([1, 0, 0, 0, 0, 0, 0, 0])  # |000>
    assert minimal_factoring_block(psi, 2, TOL) == mask([2], 3)


def test_minimal_block_bell_times_zero():
    psi = bell_times_zero()
    assert minimal_factoring_block(psi, 2, TOL) == mask([1, 2], 3)
    assert set(labels_from_mask(minimal_factoring_block(psi, 2, TOL))) == brute_minimal_block(
        psi.amplitudes, 3, 2, 2, TOL
    )


def test_minimal_block_out_of_range_label():
    with pytest.raises(ValueError):
        minimal_factoring_block(bell_times_zero(), 4, TOL)


@pytest.mark.parametrize("num_sites", [3, 4, 5])
def test_minimal_block_matches_exhaustive_search(num_sites):
    rng = np.random.default_rng(40 + num_sites)
    states = []
    # random product over a random partition
    parts = list(all_set_partitions(range(1, num_sites + 1)))
    blocks = parts[int(rng.integers(len(parts)))]
    factors = [(tuple(b), random_unit(2 ** len(b), rng)) for b in blocks]
    states.append(assemble_product(factors, num_sites, 2))
    states.append(normalize(symmetrize(make_state(random_unit(2**num_sites, rng)))))
    states.append(make_state(ghz_amplitudes(num_sites)))
    for psi in states:
        for label in range(1, num_sites + 1):
            got = set(labels_from_mask(minimal_factoring_block(psi, label, TOL)))
            expected = brute_minimal_block(psi.amplitudes, num_sites, 2, label, TOL)
            assert got == expected


# ---------------------------------------------------------------- finest factorization


def test_finest_product_basis_state():
    result = finest_factorization(make_state([1, 0, 0, 0, 0, 0, 0, 0]))
    assert result.M == 3
    assert result.entanglement_class == FULLY_SEPARABLE
    assert result.finest == Partition.singletons(3)


def test_finest_ghz():
    result = finest_factorization(make_state(ghz_amplitudes(3)))
    assert result.M == 1
    assert result.entanglement_class == GLOBALLY_ENTANGLED


def test_finest_bell_times_zero():
    result = finest_factorization(bell_times_zero())
    assert result.M == 2
    assert result.entanglement_class == PARTIALLY_ENTANGLED
    assert result.finest == Partition.from_blocks([[1, 2], [3]], 3)
    np.testing.assert_allclose(
        result.block_state_of(1).amplitudes, bell_amplitudes(), atol=1e-12
    )
    np.testing.assert_allclose(result.block_state_of(3).amplitudes, [1, 0], atol=1e-12)


def test_finest_reconstructs_input():
    rng = np.random.default_rng(32)
    for trial in range(20):
        factors = [((k,), random_unit(2, rng)) for k in range(1, 5)]
        psi = assemble_product(factors, 4, 2)
        result = finest_factorization(psi)
        assert result.M == 4
        np.testing.assert_allclose(
            result.reconstruct().amplitudes, psi.amplitudes, atol=1e-8
        )
        assert result.residual < 1e-8


def test_finest_reconstructs_with_global_phase():
    psi = make_state(-1 * np.kron([1, 0], [1, 0]).astype(complex))  # -|00>
    result = finest_factorization(psi)
    assert result.M == 2
    assert result.global_phase == pytest.approx(-1)
    # block states are canonical (phase-free); the sign lives in global_phase
    np.testing.assert_allclose(result.block_state_of(1).amplitudes, [1, 0], atol=1e-12)
    np.testing.assert_allclose(result.reconstruct().amplitudes, psi.amplitudes, atol=1e-12)


def test_finest_block_states_have_positive_leading_amplitude():
    rng = np.random.default_rng(33)
    factors = [((k,), random_unit(2, rng)) for k in range(1, 4)]
    result = finest_factorization(assemble_product(factors, 3, 2))
    for _, state in result.blocks:
        leading = state.amplitudes[np.flatnonzero(np.abs(state.amplitudes) > 1e-6)[0]]
        assert abs(leading.imag) < 1e-12 and leading.real > 0


@pytest.mark.parametrize("num_sites", [3, 4, 5])
def test_lemma1_brute_force_equivalence(num_sites):
    # every coarsening of the construction partition factors block-by-block,
    # and the finest factorization refines every factoring partition
    rng = np.random.default_rng(50 + num_sites)
    partitions = list(all_set_partitions(range(1, num_sites + 1)))
    for trial in range(6):
        blocks = partitions[int(rng.integers(len(partitions)))]
        factors = [(tuple(b), random_unit(2 ** len(b), rng)) for b in blocks]
        psi = assemble_product(factors, num_sites, 2)
        construction = Partition.from_blocks(blocks, num_sites)
        result = finest_factorization(psi)
        assert result.finest.refines(construction)
        for candidate in partitions:
            part = Partition.from_blocks(candidate, num_sites)
            if construction.refines(part):
                for block in part.blocks:
                    assert is_factoring_subset(psi, block, TOL)
            # finest refines every partition the state actually factors over
            if all(is_factoring_subset(psi, b, TOL) for b in part.blocks):
                assert result.finest.refines(part)


def test_theorem1_slater_states_globally_entangled():
    for num_sites, local_dim in [(2, 2), (3, 3), (4, 4)]:
        rng = np.random.default_rng(60 + num_sites)
        for _ in range(5):
            levels = rng.choice(local_dim, size=num_sites, replace=False)
            psi = slater(num_sites, local_dim, [int(l) for l in levels])
            assert finest_factorization(psi).M == 1


def test_theorem1_symmetrized_states_dichotomy():
    rng = np.random.default_rng(34)
    for _ in range(25):
        psi = normalize(symmetrize(make_state(random_unit(16, rng))))
        result = finest_factorization(psi)
        assert result.M in (1, 4)
        if result.M == 4:
            states = [s for _, s in result.blocks]
            for a in range(4):
                for b in range(a + 1, 4):
                    verdict = equipollent(states[a].amplitudes, states[b].amplitudes)
                    assert verdict.status == EQUIPOLLENT_STRICT


def test_corollary1_antisymmetric_pair_never_separates():
    rng = np.random.default_rng(35)
    for _ in range(10):
        rest = random_unit(4, rng)
        psi = assemble_product([((1, 2), singlet_amplitudes()), ((3, 4), rest)], 4, 2)
        result = finest_factorization(psi)
        assert not separates(result, 1, 2)


# ---------------------------------------------------------------- separates


def test_separates_examples():
    result = finest_factorization(bell_times_zero())
    assert separates(result, 1, 3)
    assert not separates(result, 1, 2)
    product = finest_factorization(make_state([1, 0, 0, 0, 0, 0, 0, 0]))
    for i in range(1, 4):
        for j in range(i + 1, 4):
            assert separates(product, i, j)


def test_separates_rejects_bad_labels():
    result = finest_factorization(bell_times_zero())
    with pytest.raises(ValueError):
        separates(result, 0, 1)
