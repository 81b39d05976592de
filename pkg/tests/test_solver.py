"""Exact search: oracle equivalence, witnesses, properties, verification."""

import pytest

from starlab import (
    GroundSet,
    ParameterError,
    SearchLimits,
    SetFamily,
    atoms_ground,
    build_instance,
    chi_probe,
    classify_properties,
    gen_example1,
    gen_level,
    gen_multisets,
    gen_sequences,
    largest_stars,
    max_product_pair,
    max_product_tuple,
    single_set_family,
    verify_main_theorem,
)
from starlab.core import bits_of

from oracles import oracle_pair, oracle_tuple3, random_family


def star_pair_indices(fam, element):
    idx = tuple(
        i for i, m in enumerate(fam.members) if m.bits >> element & 1
    )
    return (idx, idx)


class TestBuildInstance:
    def test_level_edge_count(self):
        fam = gen_level(6, 2)
        inst = build_instance(fam, fam, 1)
        assert inst.edge_count == 135

    def test_single_edge(self):
        fam = SetFamily.from_bits(atoms_ground(2), [0b11])
        inst = build_instance(fam, fam, 1)
        assert inst.edge_count == 1

    def test_no_edges_above_member_size(self):
        fam = gen_level(5, 2)
        assert build_instance(fam, fam, 3).edge_count == 0

    def test_adjacency_symmetric_under_transpose(self):
        fam = gen_level(5, 2)
        other = gen_level(5, 3)
        inst = build_instance(fam, other, 2)
        cols = inst.transposed_adjacency()
        for i, mask in enumerate(inst.adjacency):
            for j in range(len(other.members)):
                assert bool(mask >> j & 1) == bool(cols[j] >> i & 1)

    def test_cross_ground_alignment_by_label(self):
        left = SetFamily.from_bits(GroundSet(("a", "b", "c")), [0b011, 0b110])
        right = SetFamily.from_bits(GroundSet(("c", "d")), [0b01, 0b10])
        inst = build_instance(left, right, 1)
        # only {b,c} meets {c}; the label "d" never matches anything
        assert inst.adjacency == (0, 1)

    def test_level_must_be_positive(self):
        fam = gen_level(3, 2)
        with pytest.raises(ParameterError):
            build_instance(fam, fam, 0)


class TestMaxProductPair:
    def test_level_6_2(self):
        fam = gen_level(6, 2)
        res = max_product_pair(build_instance(fam, fam, 1))
        assert res.best_product == 25
        assert res.witness_total == 6
        assert sorted(res.witnesses) == sorted(
            star_pair_indices(fam, e) for e in range(6)
        )

    def test_block_construction_pair(self):
        f1, f2 = gen_example1(1, [2, 2], [3, 2])
        res = max_product_pair(build_instance(f1, f2, 1))
        assert res.best_product == 4
        assert res.witness_total == 1
        (witness,) = res.witnesses
        a_idx, b_idx = witness
        assert len(a_idx) == 1 and len(b_idx) == 4
        tail = f1.members[a_idx[0]]
        assert all(label.startswith("rho") for label in tail.labels())

    def test_zero_edge_instance(self):
        fam = gen_level(5, 2)
        res = max_product_pair(build_instance(fam, fam, 3))
        assert res.best_product == 0
        assert res.witnesses == () and res.witness_total == 0

    def test_budget_exhaustion_reports_non_optimal(self):
        fam = gen_level(7, 2)
        res = max_product_pair(build_instance(fam, fam, 1), SearchLimits(node_budget=1))
        assert not res.optimal

    def test_witness_cap_keeps_exact_total(self):
        fam = gen_level(6, 2)
        res = max_product_pair(build_instance(fam, fam, 1), SearchLimits(witness_cap=2))
        assert res.witness_total == 6
        assert len(res.witnesses) == 2

    def test_witnesses_recheck_cross_intersecting(self):
        fam = gen_level(7, 2)
        res = max_product_pair(build_instance(fam, fam, 1))
        for a_idx, b_idx in res.witnesses:
            for i in a_idx:
                for j in b_idx:
                    overlap = fam.members[i].bits & fam.members[j].bits
                    assert overlap.bit_count() >= 1


class TestOracleEquivalence:
    def test_random_instances_match_closed_pair_oracle(self, rng):
        for trial in range(150):
            left = random_family(rng, rng.randint(4, 10), 12, 5)
            right = random_family(rng, left.ground.size, 12, 5)
            t = rng.choice([1, 2])
            res = max_product_pair(build_instance(left, right, t))
            best, witnesses = oracle_pair(left, right, t)
            assert res.best_product == best, (trial, left, right, t)
            assert set(res.witnesses) == witnesses, (trial, left, right, t)
            assert res.witness_total == len(witnesses)

    def test_closure_optimality(self, rng):
        # the optimum is always attained by a closed pair found by the oracle
        for _ in range(40):
            left = random_family(rng, 8, 10, 4)
            right = random_family(rng, 8, 10, 4)
            best, witnesses = oracle_pair(left, right, 1)
            if best == 0:
                continue
            for a_idx, b_idx in witnesses:
                assert len(a_idx) * len(b_idx) == best


class TestMaxProductTuple:
    def test_pair_consistency(self, rng):
        for _ in range(60):
            left = random_family(rng, rng.randint(4, 8), 10, 4)
            right = random_family(rng, left.ground.size, 10, 4)
            t = rng.choice([1, 2])
            pair = max_product_pair(build_instance(left, right, t))
            tup = max_product_tuple([left, right], t)
            assert pair.best_product == tup.best_product
            assert pair.witnesses == tup.witnesses
            assert pair.witness_total == tup.witness_total

    def test_triple_against_oracle(self, rng):
        for _ in range(25):
            fams = [random_family(rng, 6, 7, 3) for _ in range(3)]
            t = 1
            res = max_product_tuple(fams, t)
            best, witnesses = oracle_tuple3(*fams, t)
            assert res.best_product == best
            assert set(res.witnesses) == witnesses

    def test_level_triple(self):
        fam = gen_level(6, 2)
        res = max_product_tuple([fam, fam, fam], 1)
        assert res.best_product == 125
        expected = sorted(
            (idx, idx, idx)
            for idx, _ in (star_pair_indices(fam, e) for e in range(6))
        )
        assert sorted(res.witnesses) == expected

    def test_k_must_be_at_least_two(self):
        with pytest.raises(ParameterError):
            max_product_tuple([gen_level(4, 2)], 1)


class TestClassifyProperties:
    def test_identical_level_pair_has_all_four(self):
        fam = gen_level(6, 2)
        report = classify_properties([fam, fam], 1)
        assert report.cross_star.holds
        assert report.strict.holds
        assert report.strong.holds
        assert report.extrastrong.holds
        assert report.strong.witness_t_set is not None
        assert len(report.strong.witness_t_set) == 1

    def test_block_construction_strict_but_not_strong(self):
        fams = gen_example1(1, [2, 2], [3, 2])
        report = classify_properties(fams, 1)
        assert report.cross_star.holds
        assert report.strict.holds
        assert not report.strong.holds
        assert not report.extrastrong.holds
        assert report.best_product == 4
        assert report.star_product == 6

    def test_filtered_sequences_break_the_bound(self):
        seq = gen_sequences(single_set_family(4), 2)
        report = classify_properties([seq, seq], 2)
        assert report.cross_star.holds is False
        assert report.best_product > report.star_product
        assert report.cross_star.counterexample is not None

    def test_implication_chain_on_random_instances(self, rng):
        for _ in range(40):
            left = random_family(rng, 7, 9, 4)
            right = random_family(rng, 7, 9, 4)
            t = rng.choice([1, 2])
            rep = classify_properties([left, right], t)
            a, b, c, d = (
                rep.cross_star.holds,
                rep.strict.holds,
                rep.strong.holds,
                rep.extrastrong.holds,
            )
            assert not b or a
            assert not c or a
            assert not d or (a and b and c)

    def test_identical_families_upgrade(self, rng):
        # with equal families, (a) forces (c) and (b) forces (d)
        for _ in range(40):
            fam = random_family(rng, 7, 9, 4)
            t = rng.choice([1, 2])
            rep = classify_properties([fam, fam], t)
            if rep.cross_star.holds:
                assert rep.strong.holds
            if rep.strict.holds:
                assert rep.extrastrong.holds

    def test_pairwise_bound_extends_to_triples(self, rng):
        # whenever all three pairs satisfy the product bound, so does the triple
        checked = 0
        while checked < 10:
            fams = [random_family(rng, 6, 7, 3) for _ in range(3)]
            pair_ok = all(
                classify_properties([fams[i], fams[j]], 1).cross_star.holds
                for i in range(3)
                for j in range(i + 1, 3)
            )
            if not pair_ok:
                continue
            rep = classify_properties(fams, 1)
            assert rep.cross_star.holds
            checked += 1

    def test_budget_exhaustion_is_inconclusive(self):
        fam = gen_level(6, 2)
        rep = classify_properties([fam, fam], 1, SearchLimits(node_budget=1))
        assert rep.inconclusive
        assert rep.cross_star.holds is None


class TestVerifyMainTheorem:
    def test_level_6_verified(self):
        fam = gen_level(6, 2)
        rep = verify_main_theorem(fam, fam, 2, 2, 1)
        assert rep.status == "verified"
        assert rep.best_product == 25 and rep.bound == 25
        assert rep.uniqueness_ok

    def test_level_5_premise_unmet(self):
        fam = gen_level(5, 2)
        rep = verify_main_theorem(fam, fam, 2, 2, 1)
        assert rep.status == "premise-unmet"
        assert rep.best_product is None

    def test_multisets_5_2(self):
        fam = gen_multisets(5, 2)
        rep = verify_main_theorem(fam, fam, 2, 2, 1)
        assert rep.status == "verified"
        assert rep.best_product == 25

    def test_degenerate_zero_stars(self):
        fam = gen_level(5, 1)
        rep = verify_main_theorem(fam, fam, 1, 1, 2)
        assert rep.status == "verified"
        assert rep.degenerate
        assert rep.best_product == 0 and rep.bound == 0
        assert rep.uniqueness_ok is None

    def test_oversized_family_rejected(self):
        fam = gen_level(5, 3)
        with pytest.raises(ParameterError):
            verify_main_theorem(fam, fam, 2, 2, 1)

    def test_budget_exhaustion_inconclusive(self):
        fam = gen_level(6, 2)
        rep = verify_main_theorem(fam, fam, 2, 2, 1, SearchLimits(node_budget=1))
        assert rep.status == "inconclusive"


class TestChiProbe:
    def test_levels_sweep(self):
        report = chi_probe(2, 2, 1, [{"class": "level", "params": {"n": [3, 8], "r": 2}}])
        assert report.c_value == 5
        by_label = {row.label: row for row in report.instances}
        assert not by_label["level(n=3,r=2)"].bound_holds
        assert by_label["level(n=3,r=2)"].best_product == 9
        for n in range(4, 9):
            assert by_label[f"level(n={n},r=2)"].bound_holds
        assert str(report.largest_failing_ratio) == "2/1"
        assert str(report.smallest_holding_ratio) == "3/1"
        assert report.true_violations == 0

    def test_threshold_only_corpus_has_no_failures(self):
        report = chi_probe(2, 2, 1, [{"class": "level", "params": {"n": [6, 9], "r": 2}}])
        assert report.largest_failing_ratio is None
        assert report.smallest_holding_ratio is not None
        assert report.true_violations == 0

    def test_empty_corpus_rejected(self):
        with pytest.raises(ParameterError):
            chi_probe(2, 2, 1, [])

    def test_random_corpus_is_seed_deterministic(self):
        spec = [{"class": "random", "params": {"count": 5, "ground": 6, "members": 6, "max_size": 3}}]
        first = chi_probe(2, 2, 1, spec, seed=7)
        second = chi_probe(2, 2, 1, spec, seed=7)
        assert [row.best_product for row in first.instances] == [
            row.best_product for row in second.instances
        ]
        assert first.true_violations == 0


class TestDeterminism:
    def test_results_independent_of_parallelism(self):
        fam = gen_level(7, 2)
        inst = build_instance(fam, fam, 1)
        runs = [
            max_product_pair(inst, SearchLimits(parallelism=p))
            for p in (1, 2, 4, 1)
        ]
        baseline = runs[0]
        for res in runs[1:]:
            assert res.best_product == baseline.best_product
            assert res.witnesses == baseline.witnesses
            assert res.witness_total == baseline.witness_total
            assert res.optimal == baseline.optimal


class TestSearchLimitsValidation:
    def test_bad_values_rejected(self):
        with pytest.raises(ParameterError):
            SearchLimits(node_budget=0)
        with pytest.raises(ParameterError):
            SearchLimits(time_budget_s=0)
        with pytest.raises(ParameterError):
            SearchLimits(parallelism=0)
        with pytest.raises(ParameterError):
            SearchLimits(witness_cap=0)
