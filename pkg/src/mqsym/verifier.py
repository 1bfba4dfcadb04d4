"""Randomized, seeded verification suites for the package's core claims.

Each suite turns one mathematical claim into a falsification attempt over
constructed random instances and returns a structured verdict. Premise
filters count skipped trials separately, so a pass never means the suite
ran vacuously. Given the same (trials, num_sites, local_dim, seed) a suite
is fully deterministic and failed trials carry enough data to replay.

Claims covered:
    lemma1      two product decompositions extend to their meet partition
    theorem1    (i) antisymmetric states are globally entangled;
                (ii) symmetric states are globally entangled or fully
                separable with strictly equipollent constituent states
    prop1       a transposition eigenstate that splits the swapped pair
                has eigenvalue +1 and strictly equipollent factors there
    prop2       no product state is orthogonal to the symmetric subspace
    prop3       symmetrizing a non-symmetric product never yields a product
    corollary2  fully separable symmetric states are collective rotations
                of |0...0>, and conversely
    lemma3      direct separability w.r.t. two partitions implies it for
                their meet (mixed states)
    commutation collective single-site rotations commute with the
                symmetrizer
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import mixed
from .errors import FactorizationError, ZeroStateError
from .factorization import finest_factorization, is_factoring_subset, separates
from .generators import (
    equipollent_product,
    random_local_unitary,
    random_product,
    random_state,
    random_symmetric,
    slater,
)
from .io import state_to_document
from .partitions import Partition, labels_from_mask, mask_size
from .permutations import (
    EQUIPOLLENT_STRICT,
    SYMMETRIC,
    Permutation,
    apply_collective_unitary,
    apply_permutation,
    classify_exchange,
    equipollent,
    project_perp,
    symmetrize,
)
from .states import (
    DensityMatrix,
    EPS_PURE,
    StateVector,
    assemble_product,
    normalize,
    partial_trace,
    permute_density_sites,
    purity,
    tensor_density,
)

_MAX_STORED_COUNTEREXAMPLES = 10
_EQUIPOLLENCE_TOL = 1e-8
_RECONSTRUCTION_TOL = 1e-8


@dataclass
class CheckVerdict:
    claim: str
    trials: int = 0
    skipped: int = 0
    failures: int = 0
    max_residual: float = 0.0
    metrics: dict = field(default_factory=dict)
    counterexamples: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return self.failures == 0

    def _record(self, ok: bool, residual: float, trial_seed: int, message: str,
                state: StateVector | None = None):
        self.trials += 1
        self.max_residual = max(self.max_residual, residual)
        if not ok:
            self.failures += 1
            if len(self.counterexamples) < _MAX_STORED_COUNTEREXAMPLES:
                example = {"trial_seed": int(trial_seed), "message": message}
                if state is not None:
                    example["state"] = state_to_document(state)
                self.counterexamples.append(example)

    def _skip(self):
        self.skipped += 1

    def _metric_max(self, name: str, value: float):
        self.metrics[name] = max(self.metrics.get(name, -np.inf), float(value))

    def _metric_min(self, name: str, value: float):
        self.metrics[name] = min(self.metrics.get(name, np.inf), float(value))

    def to_dict(self) -> dict:
        return {
            "claim": self.claim,
            "trials": self.trials,
            "skipped": self.skipped,
            "failures": self.failures,
            "passed": self.passed,
            "max_residual": self.max_residual,
            "metrics": {k: float(v) for k, v in sorted(self.metrics.items())},
            "counterexamples": self.counterexamples,
        }


def _trial_seeds(seed, trials: int) -> np.ndarray:
    return np.random.default_rng(seed).integers(0, 2**63, size=max(trials, 0))


def _random_partition(rng: np.random.Generator, num_sites: int, min_blocks: int = 1) -> Partition:
    """Uniformly scattered partition with at least ``min_blocks`` blocks."""
    count = int(rng.integers(min_blocks, num_sites + 1))
    labels = rng.permutation(num_sites) + 1
    masks = [0] * count
    for pos, label in enumerate(labels):
        target = pos if pos < count else int(rng.integers(count))
        masks[target] |= 1 << (int(label) - 1)
    return Partition(num_sites, tuple(masks))


def _random_coarsening(rng: np.random.Generator, partition: Partition) -> Partition:
    """Merge blocks of ``partition`` along a random partition of the block set."""
    grouping = _random_partition(rng, len(partition))
    merged = []
    for group in grouping.blocks:
        mask = 0
        for index in labels_from_mask(group):
            mask |= partition.blocks[index - 1]
        merged.append(mask)
    return Partition(partition.num_sites, tuple(merged))


def _coarsening_pair(rng, partition: Partition, attempts: int = 64):
    """Two coarsenings whose meet recovers ``partition``, or None."""
    for _ in range(attempts):
        a = _random_coarsening(rng, partition)
        b = _random_coarsening(rng, partition)
        if a.meet(b) == partition:
            return a, b
    return None


def _random_block_product(rng, partition: Partition, local_dim: int) -> StateVector:
    """State drawn as an independent random factor on every block."""
    parts = []
    for mask in partition.blocks:
        dim = local_dim ** mask_size(mask)
        v = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
        parts.append((labels_from_mask(mask), v / np.linalg.norm(v)))
    return assemble_product(parts, partition.num_sites, local_dim)


def check_lemma1(trials: int, num_sites: int, local_dim: int, seed,
                 tol: float = EPS_PURE) -> CheckVerdict:
    """States factoring over two partitions factor over the meet."""
    verdict = CheckVerdict("lemma1")
    for trial_seed in _trial_seeds(seed, trials):
        rng = np.random.default_rng(trial_seed)
        fine = _random_partition(rng, num_sites, min_blocks=min(2, num_sites))
        pair = _coarsening_pair(rng, fine)
        if pair is None:
            verdict._skip()
            continue
        part_a, part_b = pair
        psi = _random_block_product(rng, fine, local_dim)
        cache: dict = {}
        premises = [
            is_factoring_subset(psi, mask, tol=tol, cache=cache)
            for mask in part_a.blocks + part_b.blocks
        ]
        if not all(premises):
            verdict._skip()  # construction failed the premise; log, do not assert
            continue
        worst = 0.0
        for mask in fine.blocks:
            if mask_size(mask) == num_sites:
                continue
            deficit = 1.0 - purity(partial_trace(psi, labels_from_mask(mask)))
            worst = max(worst, deficit)
        ok = worst < tol
        verdict._metric_max("max_purity_deficit", worst)
        verdict._record(ok, worst, trial_seed, "meet block failed to factor", psi)
    return verdict


def check_theorem1(trials: int, num_sites: int, local_dim: int, seed,
                   tol: float = EPS_PURE, part: str = "both") -> CheckVerdict:
    """Antisymmetric states have M=1; symmetric states have M in {1, N}."""
    if part not in ("i", "ii", "both"):
        raise ValueError("part must be 'i', 'ii' or 'both'")
    verdict = CheckVerdict("theorem1")
    run_i = part in ("i", "both")
    run_ii = part in ("ii", "both")
    if part == "i" and local_dim < num_sites:
        raise ValueError("part (i) needs local_dim >= num_sites for Slater states")
    if part == "both" and local_dim < num_sites:
        run_i = False
        verdict.metrics["part_i_skipped_low_dim"] = 1.0

    for trial_seed in _trial_seeds(seed, trials):
        rng = np.random.default_rng(trial_seed)
        if run_i:
            levels = rng.choice(local_dim, size=num_sites, replace=False)
            psi = slater(num_sites, local_dim, [int(l) for l in levels])
            try:
                fact = finest_factorization(psi, tol=tol)
                ok, residual, msg = fact.M == 1, fact.residual, f"Slater state got M={fact.M}"
            except FactorizationError as exc:
                ok, residual, msg = False, np.inf, str(exc)
            verdict._record(ok, residual if np.isfinite(residual) else 1.0, trial_seed, msg, psi)
        if run_ii:
            psi = random_symmetric(num_sites, local_dim, rng)
            ok, residual, msg = _symmetric_dichotomy_trial(psi, tol, verdict)
            verdict._record(ok, residual, trial_seed, msg, psi)
    return verdict


def _symmetric_dichotomy_trial(psi: StateVector, tol: float, verdict: CheckVerdict):
    """One theorem1(ii) assertion: M in {1, N}, and M=N blocks equipollent."""
    try:
        fact = finest_factorization(psi, tol=tol)
    except FactorizationError as exc:
        return False, 1.0, str(exc)
    if fact.M not in (1, psi.num_sites):
        return False, float(fact.M), f"symmetric state got M={fact.M}"
    if fact.M == 1:
        return True, fact.residual, ""
    worst = 0.0
    states = [state for _, state in fact.blocks]
    for a in range(len(states)):
        for b in range(a + 1, len(states)):
            result = equipollent(states[a].amplitudes, states[b].amplitudes,
                                 tol=_EQUIPOLLENCE_TOL)
            worst = max(worst, result.deviation)
            if result.status != EQUIPOLLENT_STRICT:
                return False, result.deviation, (
                    f"blocks {a + 1} and {b + 1} not strictly equipollent "
                    f"({result.status}, deviation {result.deviation:.3e})"
                )
    verdict._metric_max("max_equipollence_deviation", worst)
    rec_error = float(np.linalg.norm(fact.reconstruct().amplitudes - psi.amplitudes))
    verdict._metric_max("max_reconstruction_error", rec_error)
    if rec_error > _RECONSTRUCTION_TOL:
        return False, rec_error, f"block product misses the state by {rec_error:.3e}"
    return True, max(worst, rec_error), ""


def check_prop1(trials: int, num_sites: int, local_dim: int, seed,
                tol: float = EPS_PURE) -> CheckVerdict:
    """Transposition eigenstates: -1 forbids splitting the pair; +1 splits
    only into strictly equipollent singleton factors."""
    if num_sites < 2:
        raise ValueError("need at least two sites")
    verdict = CheckVerdict("prop1")
    for trial_seed in _trial_seeds(seed, trials):
        rng = np.random.default_rng(trial_seed)
        i, j = sorted(rng.choice(num_sites, size=2, replace=False) + 1)
        kind = ["plus", "minus", "product"][int(rng.integers(3))]
        core = _transposition_core(rng, local_dim, kind)
        if core is None:
            verdict._skip()
            continue
        lam = -1 if kind == "minus" else 1
        rest_labels = [l for l in range(1, num_sites + 1) if l not in (i, j)]
        if rest_labels:
            dim = local_dim ** len(rest_labels)
            rest = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
            rest = rest / np.linalg.norm(rest)
            psi = assemble_product([((i, j), core), (rest_labels, rest)], num_sites, local_dim)
        else:
            psi = StateVector(num_sites, local_dim, core)

        swap = apply_permutation(Permutation.transposition(i, j, num_sites), psi)
        eigen_residual = float(np.linalg.norm(swap.amplitudes - lam * psi.amplitudes))
        if eigen_residual > 1e-10:
            verdict._record(False, eigen_residual, trial_seed,
                            f"construction is not a clean eigenstate ({kind})", psi)
            continue
        try:
            fact = finest_factorization(psi, tol=tol)
        except FactorizationError as exc:
            verdict._record(False, 1.0, trial_seed, str(exc), psi)
            continue
        if lam == -1:
            ok = not separates(fact, i, j)
            verdict._record(ok, eigen_residual, trial_seed,
                            "eigenvalue -1 pair was separated", psi)
        else:
            if not separates(fact, i, j):
                verdict._record(True, eigen_residual, trial_seed, "")
                continue
            ok, deviation, msg = _split_pair_equipollent(fact, i, j)
            verdict._metric_max("max_equipollence_deviation", deviation)
            verdict._record(ok, deviation, trial_seed, msg, psi)
    return verdict


def _transposition_core(rng, local_dim: int, kind: str) -> np.ndarray | None:
    """Two-site eigenvector of the swap: symmetrized, antisymmetrized or |phi>|phi>."""
    if kind == "product":
        v = rng.standard_normal(local_dim) + 1j * rng.standard_normal(local_dim)
        v = v / np.linalg.norm(v)
        return np.kron(v, v)
    g = rng.standard_normal(local_dim**2) + 1j * rng.standard_normal(local_dim**2)
    swapped = g.reshape(local_dim, local_dim).T.reshape(-1)
    core = g + swapped if kind == "plus" else g - swapped
    n = np.linalg.norm(core)
    if n < 1e-8:
        return None
    return core / n


def _split_pair_equipollent(fact, i: int, j: int):
    """For a +1 eigenstate split across blocks, require singleton equipollent factors."""
    mask_i, mask_j = fact.finest.block_of(i), fact.finest.block_of(j)
    if mask_size(mask_i) != 1 or mask_size(mask_j) != 1:
        return False, 1.0, f"pair ({i},{j}) split into non-singleton blocks"
    result = equipollent(fact.block_state_of(i).amplitudes,
                         fact.block_state_of(j).amplitudes, tol=_EQUIPOLLENCE_TOL)
    if result.status != EQUIPOLLENT_STRICT:
        return False, result.deviation, (
            f"split pair ({i},{j}) not strictly equipollent ({result.status})"
        )
    return True, result.deviation, ""


def check_prop2(trials: int, num_sites: int, local_dim: int, seed,
                tol: float = 1e-12) -> CheckVerdict:
    """Product states always have a nonzero symmetric component."""
    verdict = CheckVerdict("prop2")
    for trial_seed in _trial_seeds(seed, trials):
        psi = random_product(num_sites, local_dim, trial_seed)
        sym = symmetrize(psi)
        recomposed = sym.amplitudes + project_perp(psi).amplitudes
        decomposition_error = float(np.max(np.abs(recomposed - psi.amplitudes)))
        norm = sym.norm()
        verdict._metric_min("min_symmetrized_norm", norm)
        verdict._metric_max("max_decomposition_error", decomposition_error)
        ok = norm > tol and decomposition_error < 1e-12
        verdict._record(ok, decomposition_error, trial_seed,
                        f"symmetrized norm {norm:.3e}", psi)
    return verdict


def check_prop3(trials: int, num_sites: int, local_dim: int, seed,
                tol: float = EPS_PURE) -> CheckVerdict:
    """Symmetrizing a non-symmetric product state destroys full separability."""
    verdict = CheckVerdict("prop3")
    for trial_seed in _trial_seeds(seed, trials):
        psi = random_product(num_sites, local_dim, trial_seed)
        if classify_exchange(psi).exchange_class == SYMMETRIC:
            verdict._skip()  # outside the contrapositive's premise
            continue
        try:
            projected = normalize(symmetrize(psi))
            fact = finest_factorization(projected, tol=tol)
            ok, residual, msg = fact.M == 1, fact.residual, f"T psi got M={fact.M}"
        except (ZeroStateError, FactorizationError) as exc:
            ok, residual, msg = False, 1.0, str(exc)
        verdict._record(ok, residual, trial_seed, msg, psi)
    return verdict


def complete_unitary(column: np.ndarray) -> np.ndarray:
    """Deterministic unitary whose first column is the given unit vector."""
    column = np.asarray(column, dtype=np.complex128).reshape(-1)
    n = column.size
    column = column / np.linalg.norm(column)
    pivot = int(np.argmax(np.abs(column)))
    basis = [column] + [np.eye(n, dtype=np.complex128)[:, k] for k in range(n) if k != pivot]
    q, r = np.linalg.qr(np.column_stack(basis))
    q = q * (np.diagonal(r) / np.abs(np.diagonal(r)))
    q[:, 0] = column
    return q


def check_corollary2(trials: int, num_sites: int, local_dim: int, seed,
                     tol: float = EPS_PURE) -> CheckVerdict:
    """Collective rotations of |0...0> are exactly the separable symmetric states."""
    verdict = CheckVerdict("corollary2")
    for trial_seed in _trial_seeds(seed, trials):
        rng = np.random.default_rng(trial_seed)
        unitary = random_local_unitary(local_dim, rng)
        psi = equipollent_product(num_sites, local_dim, unitary)
        ok, residual, msg = _collective_rotation_trial(psi, num_sites, local_dim, tol, verdict)
        verdict._record(ok, residual, trial_seed, msg, psi)

        sym = random_symmetric(num_sites, local_dim, rng)
        try:
            fact = finest_factorization(sym, tol=tol)
        except FactorizationError as exc:
            verdict._record(False, 1.0, trial_seed, str(exc), sym)
            continue
        if fact.M not in (1, num_sites):
            verdict._record(False, float(fact.M), trial_seed,
                            f"symmetric state got M={fact.M}", sym)
        elif fact.M == num_sites:
            residual = _reverse_reconstruction(fact, sym, num_sites, local_dim)
            verdict._metric_max("max_reverse_residual", residual)
            verdict._record(residual < _RECONSTRUCTION_TOL, residual, trial_seed,
                            "reverse reconstruction failed", sym)
        else:
            verdict._record(True, 0.0, trial_seed, "")
    return verdict


def _collective_rotation_trial(psi, num_sites, local_dim, tol, verdict):
    if classify_exchange(psi).exchange_class != SYMMETRIC:
        return False, 1.0, "collective rotation of |0...0> not symmetric"
    try:
        fact = finest_factorization(psi, tol=tol)
    except FactorizationError as exc:
        return False, 1.0, str(exc)
    if fact.M != num_sites:
        return False, float(fact.M), f"collective rotation got M={fact.M}"
    states = [state for _, state in fact.blocks]
    for a in range(len(states)):
        for b in range(a + 1, len(states)):
            result = equipollent(states[a].amplitudes, states[b].amplitudes,
                                 tol=_EQUIPOLLENCE_TOL)
            if result.status != EQUIPOLLENT_STRICT:
                return False, result.deviation, "rotation blocks not strictly equipollent"
    residual = _reverse_reconstruction(fact, psi, num_sites, local_dim)
    verdict._metric_max("max_reverse_residual", residual)
    if residual > _RECONSTRUCTION_TOL:
        return False, residual, f"reverse reconstruction missed by {residual:.3e}"
    return True, residual, ""


def _reverse_reconstruction(fact, psi, num_sites, local_dim) -> float:
    """Rebuild psi as a collective rotation of |0...0> from its first block."""
    common = fact.blocks[0][1].amplitudes
    phase_root = np.exp(1j * np.angle(fact.global_phase) / num_sites)
    unitary = phase_root * complete_unitary(common)
    rebuilt = equipollent_product(num_sites, local_dim, unitary)
    return float(np.linalg.norm(rebuilt.amplitudes - psi.amplitudes))


def check_lemma3(trials: int, num_sites: int, local_dim: int, seed,
                 tol: float = 1e-10) -> CheckVerdict:
    """Directly separable mixed states stay separable over the meet partition."""
    verdict = CheckVerdict("lemma3")
    for index, trial_seed in enumerate(_trial_seeds(seed, trials)):
        rng = np.random.default_rng(trial_seed)
        correlated = index % 2 == 1
        if correlated:
            fine = _random_partition(rng, num_sites, min_blocks=min(2, num_sites))
            pair = _coarsening_pair(rng, fine)
            if pair is None:
                verdict._skip()
                continue
            part_a, part_b = pair
        else:
            fine = Partition.singletons(num_sites)
            part_a = _random_coarsening(rng, fine)
            part_b = _random_coarsening(rng, fine)
        rho = _block_product_density(rng, fine, local_dim)
        result = mixed.check_lemma3(rho, part_a, part_b, tol=tol)
        if result.status == mixed.LEMMA3_PREMISE_FAILED:
            verdict._skip()
            continue
        deviation = result.conclusion.deviation
        verdict._metric_max("max_meet_deviation", deviation)
        verdict._record(result.status == mixed.LEMMA3_HOLDS, deviation, trial_seed,
                        f"meet separability violated (deviation {deviation:.3e})")
    return verdict


def _block_product_density(rng, partition: Partition, local_dim: int) -> DensityMatrix:
    """Density matrix built as independent random factors on each block."""
    factors = []
    for mask in partition.blocks:
        labels = labels_from_mask(mask)
        dim = local_dim ** len(labels)
        g = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
        rho = g @ g.conj().T
        factors.append(DensityMatrix(labels, local_dim, rho / np.trace(rho)))
    product = tensor_density(factors)
    return permute_density_sites(product, tuple(range(1, partition.num_sites + 1)))


def check_commutation(trials: int, num_sites: int, local_dim: int, seed,
                      tol: float = 1e-10) -> CheckVerdict:
    """Collective single-site rotations commute with the symmetrizer."""
    verdict = CheckVerdict("commutation")
    for trial_seed in _trial_seeds(seed, trials):
        rng = np.random.default_rng(trial_seed)
        unitary = random_local_unitary(local_dim, rng)
        psi = random_state(num_sites, local_dim, rng)
        rotated_then_sym = symmetrize(apply_collective_unitary(unitary, psi))
        sym_then_rotated = apply_collective_unitary(unitary, symmetrize(psi))
        residual = float(np.linalg.norm(rotated_then_sym.amplitudes
                                        - sym_then_rotated.amplitudes))
        verdict._record(residual < tol, residual, trial_seed,
                        f"commutator norm {residual:.3e}", psi)
    return verdict


SUITES = {
    "lemma1": check_lemma1,
    "theorem1": check_theorem1,
    "theorem1_i": lambda trials, num_sites, local_dim, seed, tol=EPS_PURE: check_theorem1(
        trials, num_sites, local_dim, seed, tol=tol, part="i"
    ),
    "theorem1_ii": lambda trials, num_sites, local_dim, seed, tol=EPS_PURE: check_theorem1(
        trials, num_sites, local_dim, seed, tol=tol, part="ii"
    ),
    "prop1": check_prop1,
    "prop2": check_prop2,
    "prop3": check_prop3,
    "corollary2": check_corollary2,
    "lemma3": check_lemma3,
    "commutation": check_commutation,
}


def run_suite(suite: str, trials: int, num_sites: int, local_dim: int, seed,
              tol: float | None = None) -> CheckVerdict:
    """Dispatch a named suite; ``tol`` of None keeps the suite's default."""
    if suite not in SUITES:
        raise ValueError(f"unknown suite {suite!r}; choose from {sorted(SUITES)}")
    runner = SUITES[suite]
    if tol is None:
        return runner(trials, num_sites, local_dim, seed)
    return runner(trials, num_sites, local_dim, seed, tol=tol)
