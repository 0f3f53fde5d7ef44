from fractions import Fraction

import pytest

from volcount.assembler import (
    BLOCK_KINDS,
    BlockInstance,
    BuildingBlock,
    ManifoldDescriptor,
    Parcel,
    assemble,
    commensurability_verdict,
    count_lower_bound,
    default_parcel,
    descriptor_from_json,
    descriptor_to_json,
    descriptors_for_index,
    emit_descriptors,
    trace_word,
    volume_bound,
    with_block_volumes,
)
from volcount.decorated_graphs import DecoratedGraph, from_subgroup
from volcount.free_groups import Word, distinguishing_word, enumerate_subgroups

LOOP = DecoratedGraph(1, (0,), (0,), frozenset({0}))
TWO = DecoratedGraph(2, (1, 0), (0, 1), frozenset({0}))


@pytest.fixture(scope="module")
def parcel():
    return default_parcel(4, compact=False)


@pytest.fixture(scope="module")
def compact_parcel():
    return default_parcel(4, compact=True)


class TestParcels:
    def test_default_isotropic(self, parcel):
        assert parcel.parcel_id == "isotropic-n4"
        assert tuple(b.kind for b in parcel.blocks) == BLOCK_KINDS
        assert [b.form_id for b in parcel.blocks] == [
            "q_5", "q_13", "q_29", "q_37", "q_53", "q_61",
        ]
        assert parcel.max_volume == 1
        assert not parcel.compact
        assert parcel.torsion_free_assumed

    def test_default_compact(self, compact_parcel):
        assert compact_parcel.parcel_id == "anisotropic-n4"
        assert [b.form_id for b in compact_parcel.blocks] == [
            "r_17", "r_41", "r_97", "r_137", "r_193", "r_241",
        ]
        assert compact_parcel.compact

    def test_certificates_complete(self, parcel, compact_parcel):
        for p in (parcel, compact_parcel):
            for i in range(6):
                for j in range(6):
                    entry = p.certificates[i][j]
                    assert (entry is None) == (i == j)

    def test_slot_counts(self, parcel):
        assert [b.boundary_slots for b in parcel.blocks] == [4, 4, 2, 2, 2, 2]

    def test_volume_override(self, parcel):
        bumped = with_block_volumes(parcel, (1, 1, 1, 1, 1, 2))
        assert bumped.max_volume == 2
        assert bumped.parcel_id == parcel.parcel_id

    def test_parcel_validation(self, parcel):
        with pytest.raises(ValueError):
            Parcel("x", 4, parcel.blocks[:5], parcel.certificates, parcel.boundary_form)
        broken = tuple(
            tuple(None for _ in range(6)) for _ in range(6)
        )
        with pytest.raises(ValueError):
            Parcel("x", 4, parcel.blocks, broken, parcel.boundary_form)

    def test_block_validation(self):
        with pytest.raises(ValueError):
            BuildingBlock("V2", Fraction(1), "q_5", False)
        with pytest.raises(ValueError):
            BuildingBlock("V0", Fraction(0), "q_5", False)


class TestAssembly:
    def test_one_vertex_shape(self, parcel):
        descriptor = assemble(LOOP, parcel)
        assert len(descriptor.instances) == 5
        # 12 slot ends matched in pairs.
        assert len(descriptor.gluings) == 6
        kinds = sorted(instance.kind for instance in descriptor.instances)
        assert kinds == ["A_minus", "A_plus", "B_minus", "B_plus", "V1"]

    def test_instance_count_scales(self, parcel):
        for k in (1, 2, 3, 4):
            table = enumerate_subgroups(k)[0]
            graph = from_subgroup(table, frozenset({0}))
            descriptor = assemble(graph, parcel)
            assert len(descriptor.instances) == 5 * k
            assert len(descriptor.gluings) == 6 * k

    def test_vertex_kinds_follow_colors(self, parcel):
        descriptor = assemble(TWO, parcel)
        kinds = {i.instance_id: i.kind for i in descriptor.instances}
        assert kinds["v0"] == "V1" and kinds["v1"] == "V0"

    def test_closedness_exhaustive_small_indices(self, parcel):
        # Constructor-level invariant: every slot glued exactly once, for all
        # graphs of index <= 4 under both decorations.
        for k in (1, 2, 3, 4):
            for table in enumerate_subgroups(k):
                for colored in (frozenset({0}), frozenset()):
                    graph = from_subgroup(table, colored)
                    descriptor = assemble(graph, parcel)
                    assert volume_bound(descriptor, parcel) == 5 * k

    def test_disconnected_rejected(self, parcel):
        disconnected = DecoratedGraph(2, (0, 1), (0, 1), frozenset())
        with pytest.raises(ValueError):
            assemble(disconnected, parcel)

    def test_unglued_slot_rejected(self, parcel):
        descriptor = assemble(LOOP, parcel)
        with pytest.raises(ValueError):
            ManifoldDescriptor(
                descriptor.source_graph,
                descriptor.parcel_id,
                descriptor.instances,
                descriptor.gluings[:-1],
                descriptor.volume_bound,
            )

    def test_doubly_glued_slot_rejected(self, parcel):
        descriptor = assemble(LOOP, parcel)
        doubled = descriptor.gluings[:-1] + (descriptor.gluings[0],)
        with pytest.raises(ValueError):
            ManifoldDescriptor(
                descriptor.source_graph,
                descriptor.parcel_id,
                descriptor.instances,
                doubled,
                descriptor.volume_bound,
            )

    def test_duplicate_instance_rejected(self, parcel):
        descriptor = assemble(LOOP, parcel)
        with pytest.raises(ValueError):
            ManifoldDescriptor(
                descriptor.source_graph,
                descriptor.parcel_id,
                descriptor.instances + (BlockInstance("v0", "V0", "dup"),),
                descriptor.gluings,
                descriptor.volume_bound,
            )


class TestVolumeBound:
    def test_equal_volumes_give_equality(self, parcel):
        for k in (1, 2, 3):
            table = enumerate_subgroups(k)[0]
            descriptor = assemble(from_subgroup(table, frozenset({0})), parcel)
            assert volume_bound(descriptor, parcel) == 5 * k

    def test_mixed_volumes_stay_below_cap(self, parcel):
        mixed = with_block_volumes(parcel, (1, 1, 1, 1, 1, 2))
        for table in enumerate_subgroups(3):
            descriptor = assemble(from_subgroup(table, frozenset({0})), mixed)
            assert volume_bound(descriptor, mixed) <= 5 * 3 * 2


class TestTracing:
    def test_empty_word_stays_home(self, parcel):
        descriptor = assemble(TWO, parcel)
        result = trace_word(descriptor, Word(()))
        assert result.kinds == ("V1",)
        assert result.terminal_kind == "V1"
        assert result.crossings == 0

    def test_forward_letter(self, parcel):
        descriptor = assemble(TWO, parcel)
        result = trace_word(descriptor, Word.from_string("a"))
        assert result.kinds == ("V1", "A_minus", "A_plus", "V0")
        assert result.crossings == 3

    def test_inverse_letter_enters_plus_side(self, parcel):
        descriptor = assemble(TWO, parcel)
        result = trace_word(descriptor, Word.from_string("A"))
        assert result.kinds == ("V1", "A_plus", "A_minus", "V0")

    def test_crossing_count(self, parcel):
        descriptor = assemble(TWO, parcel)
        for text in ("a", "ab", "aBab", "bbbb"):
            word = Word.from_string(text)
            assert trace_word(descriptor, word).crossings == 3 * len(word)

    def test_decoration_required(self, parcel):
        uncolored = assemble(DecoratedGraph(1, (0,), (0,), frozenset()), parcel)
        with pytest.raises(ValueError):
            trace_word(uncolored, Word.from_string("a"))
        two_colored = assemble(
            DecoratedGraph(2, (1, 0), (0, 1), frozenset({0, 1})), parcel
        )
        with pytest.raises(ValueError):
            trace_word(two_colored, Word.from_string("a"))

    def test_distinguishing_word_separates_terminals(self, parcel):
        tables = enumerate_subgroups(2)
        descriptors = [
            assemble(from_subgroup(t, frozenset({0})), parcel) for t in tables
        ]
        word = distinguishing_word(tables[0], tables[1])
        t0 = trace_word(descriptors[0], word)
        t1 = trace_word(descriptors[1], word)
        assert {t0.terminal_kind, t1.terminal_kind} == {"V0", "V1"}


class TestCounting:
    def test_frozen_budget_30(self, parcel):
        report = count_lower_bound(Fraction(30), parcel)
        assert report.k == 6
        assert report.descriptor_count == 3447
        assert report.floor_bound == 216

    def test_one_block_budget(self, parcel):
        report = count_lower_bound(Fraction(5), parcel)
        assert (report.k, report.descriptor_count, report.floor_bound) == (1, 1, 1)

    def test_budget_too_small(self, parcel):
        with pytest.raises(ValueError):
            count_lower_bound(Fraction(4), parcel)

    def test_monotone_in_budget(self, parcel):
        counts = [count_lower_bound(v, parcel).descriptor_count for v in (5, 10, 17, 25, 30)]
        assert counts == sorted(counts)

    def test_volume_scale_shifts_threshold(self, parcel):
        halved = with_block_volumes(parcel, [Fraction(1, 2)] * 6)
        assert count_lower_bound(Fraction(15), halved).k == 6

    def test_descriptor_stream_matches_count(self, parcel):
        assert sum(1 for _ in descriptors_for_index(3, parcel)) == 13


class TestSerialization:
    def test_round_trip_exact(self, parcel):
        descriptor = assemble(TWO, parcel)
        text = descriptor_to_json(descriptor)
        back = descriptor_from_json(text)
        assert descriptor_to_json(back) == text
        assert back.source_graph == descriptor.source_graph
        assert back.volume_bound == descriptor.volume_bound
        assert back.instances == descriptor.instances
        assert back.gluings == descriptor.gluings

    def test_document_is_stable(self, parcel):
        descriptor = assemble(LOOP, parcel)
        assert descriptor_to_json(descriptor) == descriptor_to_json(descriptor)
        assert descriptor_to_json(descriptor).endswith("\n")

    def test_fractional_volume_survives(self, parcel):
        halved = with_block_volumes(parcel, [Fraction(1, 2)] * 6)
        descriptor = assemble(LOOP, halved)
        back = descriptor_from_json(descriptor_to_json(descriptor))
        assert back.volume_bound == Fraction(5, 2)

    def test_emit_writes_all_files(self, parcel, tmp_path):
        written = emit_descriptors(2, parcel, tmp_path)
        files = sorted(tmp_path.glob("descriptor_*.json"))
        assert written == len(files) == 3
        for path in files:
            descriptor = descriptor_from_json(path.read_text())
            assert volume_bound(descriptor, parcel) == 10


class TestVerdicts:
    def test_same_graph_commensurable(self, parcel):
        d1 = assemble(TWO, parcel)
        relabeled = DecoratedGraph(2, (1, 0), (0, 1), frozenset({1}))
        d2 = assemble(relabeled, parcel)
        verdict = commensurability_verdict(d1, d2, parcel)
        assert verdict.commensurable
        assert verdict.assumed  # geometric steps are declared, not computed

    def test_different_graphs_not_commensurable(self, parcel):
        d1 = assemble(LOOP, parcel)
        d2 = assemble(TWO, parcel)
        assert not commensurability_verdict(d1, d2, parcel).commensurable

    def test_parcel_mismatch_rejected(self, parcel, compact_parcel):
        d1 = assemble(LOOP, parcel)
        d2 = assemble(LOOP, compact_parcel)
        with pytest.raises(ValueError):
            commensurability_verdict(d1, d2, parcel)
