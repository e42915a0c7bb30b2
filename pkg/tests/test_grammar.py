import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from vidspect import grammar
from vidspect.grammar import (
    BBox,
    BlockKind,
    EvidenceBlock,
    KindMismatch,
    Label,
    TimeSpan,
    count_check_blocks,
    parse_response,
    serialize_block,
    serialize_target,
    validate_evidence,
)

from helpers import FAKE_BLOCK, REAL_BLOCK, make_sample


class TestParse:
    def test_fake_with_block(self):
        text = (
            "<thinking>odd region: <type>Shape Distortion</type> in <t>[1.0, 2.5]</t> "
            "at <bbox>[10, 20, 110, 220]</bbox> looks wrong</thinking><answer>Fake</answer>"
        )
        p = parse_response(text)
        assert p.answer is Label.FAKE
        assert p.outer_format_ok
        assert p.n_check == 1
        block = p.blocks[0]
        assert block.kind is BlockKind.FAKE_EVIDENCE
        assert block.type_label == "Shape Distortion"
        assert block.span == TimeSpan(1.0, 2.5)
        assert block.bbox == BBox(10, 20, 110, 220)

    def test_real_no_blocks(self):
        p = parse_response("<thinking>looks fine</thinking><answer>Real</answer>")
        assert p.answer is Label.REAL
        assert p.outer_format_ok
        assert p.n_check == 0
        assert p.thinking == "looks fine"

    def test_untagged_text(self):
        p = parse_response("I think it is fake.")
        assert p.answer is None
        assert not p.outer_format_ok
        assert p.n_check == 0

    def test_case_insensitive_answer_strict_serialization(self):
        p = parse_response("<thinking>x</thinking><answer>fAkE</answer>")
        assert p.answer is Label.FAKE
        assert p.answer.value == "Fake"

    def test_invalid_answer_word(self):
        p = parse_response("<thinking>x</thinking><answer>Maybe</answer>")
        assert p.answer is None
        assert not p.outer_format_ok

    def test_multiple_answers_first_wins_format_broken(self):
        p = parse_response("<thinking>x</thinking><answer>Fake</answer><answer>Real</answer>")
        assert p.answer is Label.FAKE
        assert not p.outer_format_ok

    def test_answer_inside_thinking_counts_as_duplicate(self):
        p = parse_response("<thinking><answer>Real</answer></thinking><answer>Fake</answer>")
        assert p.answer is Label.REAL  # first well-formed tag
        assert not p.outer_format_ok

    def test_leading_trailing_whitespace_ok(self):
        p = parse_response("  <thinking>x</thinking>\n<answer>Real</answer>\n ")
        assert p.outer_format_ok

    def test_trailing_text_breaks_format(self):
        p = parse_response("<thinking>x</thinking><answer>Real</answer> extra")
        assert p.answer is Label.REAL
        assert not p.outer_format_ok

    def test_missing_thinking_breaks_format(self):
        p = parse_response("<answer>Real</answer>")
        assert p.answer is Label.REAL
        assert not p.outer_format_ok
        assert p.thinking == ""

    def test_stray_inner_tags_are_literal(self):
        text = "<thinking>a <t>not a block</t> b</thinking><answer>Real</answer>"
        p = parse_response(text)
        assert p.outer_format_ok
        assert p.n_check == 0

    def test_blocks_of_wrong_kind_not_counted(self):
        text = f"<thinking>{FAKE_BLOCK}</thinking><answer>Real</answer>"
        p = parse_response(text)
        assert p.answer is Label.REAL
        assert p.n_check == 0
        assert len(p.blocks) == 1  # the fake block is parsed, just not counted

    def test_whitespace_tolerant_blocks(self):
        text = (
            "<thinking><type> Texture Jittering </type>  in\n<t> [ 1 , 2.5 ] </t>\tat "
            "<bbox> [ 0.5, 1, 7.25, 9 ] </bbox></thinking><answer>Fake</answer>"
        )
        p = parse_response(text)
        assert p.n_check == 1
        assert p.blocks[0].type_label == "Texture Jittering"
        assert p.blocks[0].bbox == BBox(0.5, 1, 7.25, 9)

    def test_bracketless_numbers_accepted(self):
        text = "<thinking><t>1.5, 2</t> at <bbox>1, 2, 3, 4</bbox></thinking><answer>Real</answer>"
        assert parse_response(text).n_check == 1

    def test_malformed_blocks_skipped(self):
        text = (
            "<thinking><type>A</type> in <t>[1]</t> at <bbox>[1,2,3,4]</bbox>"
            "<t>[1, 2, 3]</t> at <bbox>[1,2,3,4]</bbox></thinking><answer>Fake</answer>"
        )
        p = parse_response(text)
        assert p.n_check == 0


class TestCountCheckBlocks:
    def test_two_fake_blocks(self):
        text = f"stuff {FAKE_BLOCK} and {FAKE_BLOCK}"
        assert count_check_blocks(text, Label.FAKE) == 2

    def test_fake_blocks_never_match_real_pattern(self):
        text = f"stuff {FAKE_BLOCK} and {FAKE_BLOCK}"
        assert count_check_blocks(text, Label.REAL) == 0

    def test_five_real_blocks_uncapped(self):
        text = " ".join([REAL_BLOCK] * 5)
        assert count_check_blocks(text, Label.REAL) == 5
        assert count_check_blocks(text, Label.FAKE) == 0

    def test_exclusivity_mixed_text(self):
        text = f"{FAKE_BLOCK} {REAL_BLOCK} {FAKE_BLOCK}"
        assert count_check_blocks(text, Label.FAKE) == 2
        assert count_check_blocks(text, Label.REAL) == 1

    def test_syntactic_only(self):
        # unknown taxonomy label and inverted span still count
        text = "<type>Spatial Vibes</type> in <t>[5, 2]</t> at <bbox>[1, 2, 3, 4]</bbox>"
        assert count_check_blocks(text, Label.FAKE) == 1

    def test_matches_parse_n_check(self):
        texts = [
            f"<thinking>{FAKE_BLOCK} {REAL_BLOCK}</thinking><answer>Fake</answer>",
            f"<thinking>{REAL_BLOCK}</thinking><answer>Real</answer>",
            f"{FAKE_BLOCK}<answer>Fake</answer> broken",
        ]
        for text in texts:
            p = parse_response(text)
            assert p.n_check == count_check_blocks(text, p.answer)


class TestSerialize:
    def test_fake_single_block_template(self):
        block = EvidenceBlock(BlockKind.FAKE_EVIDENCE, TimeSpan(1.0, 2.5), BBox(10, 20, 110, 220), "Shape Distortion")
        out = serialize_target(Label.FAKE, "suspicious", [block])
        assert out.count("<type>") == 1
        assert "<type>Shape Distortion</type> in <t>[1.00, 2.50]</t> at <bbox>[10, 20, 110, 220]</bbox>" in out
        assert out.endswith("</thinking><answer>Fake</answer>")

    def test_real_empty_blocks(self):
        assert serialize_target(Label.REAL, "...", []) == "<thinking>...</thinking><answer>Real</answer>"

    def test_kind_mismatch(self):
        block = EvidenceBlock(BlockKind.REAL_INSPECTION, TimeSpan(0, 1), BBox(0, 0, 1, 1))
        with pytest.raises(KindMismatch):
            serialize_target(Label.FAKE, "x", [block])

    def test_real_inspection_block_has_no_type(self):
        block = EvidenceBlock(BlockKind.REAL_INSPECTION, TimeSpan(0, 1.125), BBox(0.5, 0, 1, 1))
        assert "<type>" not in serialize_block(block)

    def test_roundtrip_simple(self):
        blocks = [
            EvidenceBlock(BlockKind.FAKE_EVIDENCE, TimeSpan(0.5, 1.75), BBox(3, 4, 90.5, 100), "Text Distortion"),
            EvidenceBlock(BlockKind.FAKE_EVIDENCE, TimeSpan(2, 3), BBox(1, 2, 3, 4), "Unnatural Blur"),
        ]
        p = parse_response(serialize_target(Label.FAKE, "thinking prose", blocks))
        assert p.outer_format_ok
        assert p.answer is Label.FAKE
        assert p.n_check == 2
        assert p.blocks[0].bbox == BBox(3, 4, 90.5, 100)
        assert p.blocks[0].span == TimeSpan(0.5, 1.75)


_label_names = st.sampled_from(["Shape Distortion", "Text Distortion", "Unnatural Blur", "weird stuff"])
_prose = st.text(alphabet=st.characters(blacklist_characters="<", blacklist_categories=("Cs",)), max_size=60)
_times = st.floats(min_value=0, max_value=9999, allow_nan=False, allow_infinity=False)
_coords = st.floats(min_value=0, max_value=4096, allow_nan=False, allow_infinity=False)


@st.composite
def _block(draw, kind: BlockKind):
    t0 = draw(_times)
    t1 = draw(_times)
    if t1 < t0:
        t0, t1 = t1, t0
    x0 = draw(_coords)
    x1 = draw(_coords.filter(lambda v: v > x0)) if x0 < 4096 else x0 + 1
    y0 = draw(_coords)
    y1 = draw(_coords.filter(lambda v: v > y0)) if y0 < 4096 else y0 + 1
    label = draw(_label_names) if kind is BlockKind.FAKE_EVIDENCE else None
    return EvidenceBlock(kind, TimeSpan(t0, t1), BBox(x0, y0, x1, y1), label)


@st.composite
def _target_inputs(draw):
    label = draw(st.sampled_from([Label.FAKE, Label.REAL]))
    kind = BlockKind.FAKE_EVIDENCE if label is Label.FAKE else BlockKind.REAL_INSPECTION
    blocks = draw(st.lists(_block(kind), max_size=5))
    thinking = draw(_prose)
    return label, thinking, blocks


@settings(max_examples=200, deadline=None)
@given(_target_inputs())
def test_roundtrip_property(inputs):
    label, thinking, blocks = inputs
    parsed = parse_response(serialize_target(label, thinking, blocks))
    assert parsed.outer_format_ok
    assert parsed.answer is label
    assert parsed.n_check == len(blocks)
    assert len(parsed.blocks) == len(blocks)
    for orig, got in zip(blocks, parsed.blocks):
        assert got.kind is orig.kind
        # timestamps round-trip at the serialized two-decimal precision
        assert got.span.t_start == float(f"{orig.span.t_start:.2f}")
        assert got.span.t_end == float(f"{orig.span.t_end:.2f}")
        # bbox coordinates round-trip exactly (minimal-decimal rendering)
        assert got.bbox == orig.bbox


@settings(max_examples=300, deadline=None)
@given(st.text(max_size=200))
def test_parse_total_on_arbitrary_text(text):
    p = parse_response(text)
    assert isinstance(p.n_check, int)
    assert p.n_check >= 0


def test_parse_total_on_tag_soup():
    rng = random.Random(42)
    frags = [
        "<thinking>", "</thinking>", "<answer>", "</answer>", "Fake", "Real",
        "<t>", "</t>", "<bbox>", "</bbox>", "<type>", "</type>", "[1.5, 2]",
        "[1,2,3,4]", " in ", " at ", "\x00", "\xff", "plain", "<", ">", "]",
    ]
    for _ in range(5000):
        text = "".join(rng.choices(frags, k=rng.randrange(0, 16)))
        p = parse_response(text)
        if p.answer is not None:
            assert p.n_check == count_check_blocks(text, p.answer)
        else:
            assert p.n_check == 0


class TestValidateEvidence:
    def _block(self, t0=1.0, t1=2.0, bbox=(10, 20, 110, 220), label="Shape Distortion"):
        return EvidenceBlock(BlockKind.FAKE_EVIDENCE, TimeSpan(t0, t1), BBox(*bbox), label)

    def test_clean(self):
        meta = make_sample("s1", duration=10.0, width=455, height=256)
        assert validate_evidence(self._block(), meta) == []

    def test_span_out_of_range(self):
        meta = make_sample("s1", duration=10.0)
        codes = [v.code for v in validate_evidence(self._block(t0=1, t1=12), meta)]
        assert codes == ["SpanOutOfRange"]

    def test_unknown_taxonomy_label(self):
        meta = make_sample("s1", duration=10.0)
        codes = [v.code for v in validate_evidence(self._block(label="Spatial Vibes"), meta)]
        assert codes == ["UnknownTaxonomyLabel"]

    def test_degenerate_span_and_bbox(self):
        meta = make_sample("s1", duration=10.0)
        block = EvidenceBlock(
            BlockKind.FAKE_EVIDENCE, TimeSpan(3.0, 2.0), BBox(5, 5, 5, 9), "Shape Distortion"
        )
        codes = {v.code for v in validate_evidence(block, meta)}
        assert "DegenerateSpan" in codes
        assert "DegenerateBBox" in codes

    def test_bbox_out_of_frame(self):
        meta = make_sample("s1", width=100, height=100)
        codes = [v.code for v in validate_evidence(self._block(bbox=(10, 10, 150, 90)), meta)]
        assert codes == ["BBoxOutOfFrame"]

    def test_real_inspection_never_checks_taxonomy(self):
        meta = make_sample("s1")
        block = EvidenceBlock(BlockKind.REAL_INSPECTION, TimeSpan(1, 2), BBox(1, 2, 3, 4))
        assert validate_evidence(block, meta) == []
