import pytest

from sma import (
    BoundExceeded,
    RATIONALS,
    Relation,
    brute_cocycle_rank,
    brute_relation_automorphisms,
    cocycle_rank,
    enumerate_quasiorders,
    enumerate_relation_automorphisms,
    gf,
    is_block_form,
    build_block_form,
    validate,
    verify_automorphism,
)
from sma.oracle import random_factored_automorphism


class TestBruteAutomorphisms:
    def test_sym6_count_matches_hand_count(self, sym6):
        # classes of sizes 3, 2, 1 cannot swap: 3! * 2! * 1! = 12
        assert len(brute_relation_automorphisms(sym6)) == 12

    def test_vee_block(self, vee3_block):
        autos = brute_relation_automorphisms(vee3_block)
        assert [a.image for a in autos] == [(1, 2, 3), (2, 1, 3)]

    def test_full_relation(self):
        assert len(brute_relation_automorphisms(Relation.full(3))) == 6

    def test_bound(self):
        with pytest.raises(BoundExceeded):
            brute_relation_automorphisms(Relation.identity(9))


class TestBruteCocycleRank:
    def test_crown_block(self, crown6_block):
        assert brute_cocycle_rank(crown6_block) == 1

    def test_vee_block(self, vee3_block):
        assert brute_cocycle_rank(vee3_block) == 0

    def test_identity_relation(self):
        assert brute_cocycle_rank(Relation.identity(4)) == 0


class TestQuasiorderEnumeration:
    def test_known_counts(self):
        assert sum(1 for _ in enumerate_quasiorders(1)) == 1
        assert sum(1 for _ in enumerate_quasiorders(2)) == 4
        assert sum(1 for _ in enumerate_quasiorders(3)) == 29

    def test_two_element_relations_are_the_expected_four(self):
        found = {tuple(sorted(r.pairs)) for r in enumerate_quasiorders(2)}
        diag = ((1, 1), (2, 2))
        assert found == {
            diag,
            tuple(sorted(diag + ((1, 2),))),
            tuple(sorted(diag + ((2, 1),))),
            tuple(sorted(diag + ((1, 2), (2, 1)))),
        }

    def test_all_results_are_valid(self):
        for rel in enumerate_quasiorders(3):
            assert validate(rel).ok

    def test_bound(self):
        with pytest.raises(BoundExceeded):
            next(enumerate_quasiorders(5))


class TestSmallSweeps:
    def test_enumeration_matches_brute_up_to_three(self):
        for n in (1, 2, 3):
            for rel in enumerate_quasiorders(n):
                assert enumerate_relation_automorphisms(rel) == brute_relation_automorphisms(rel)

    def test_rank_matches_brute_up_to_three(self):
        for n in (1, 2, 3):
            for rel in enumerate_quasiorders(n):
                assert cocycle_rank(rel).rank == brute_cocycle_rank(rel)

    def test_oracles_agree_on_golden_relations(self, sym6, vee3_block, crown6_block):
        for rel in (sym6, vee3_block, crown6_block):
            assert enumerate_relation_automorphisms(rel) == brute_relation_automorphisms(rel)
            assert cocycle_rank(rel).rank == brute_cocycle_rank(rel)

    def test_block_forms_up_to_three(self):
        for n in (1, 2, 3):
            for rel in enumerate_quasiorders(n):
                assert is_block_form(build_block_form(rel).permuted)


class TestRandomSpecs:
    def test_construction_verifies(self, crown6_block):
        for field in (RATIONALS, gf(5)):
            phi = random_factored_automorphism(crown6_block, field, 42)
            assert verify_automorphism(phi).ok

    def test_seed_determinism(self, crown6_block):
        a = random_factored_automorphism(crown6_block, gf(5), 9)
        b = random_factored_automorphism(crown6_block, gf(5), 9)
        assert a.conjugator == b.conjugator
        assert a.scaling == b.scaling
        assert a.permutation == b.permutation

    def test_seeds_differ(self, crown6_block):
        a = random_factored_automorphism(crown6_block, gf(5), 1)
        b = random_factored_automorphism(crown6_block, gf(5), 2)
        assert (a.conjugator, a.scaling, a.permutation) != (b.conjugator, b.scaling, b.permutation)
