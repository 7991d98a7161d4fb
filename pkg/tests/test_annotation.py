import io

import pytest

from conftest import make_set
from ddtool.annotation import (
    EXP1,
    EXP2,
    AnnotationRecord,
    AnnotationSet,
    DdannSyntaxError,
    DuplicateKey,
    InvalidTransition,
    MissingAntecedentSurface,
    ScriptMissingComment,
    ScriptMissingLink,
    ScriptState,
    UnknownScheme,
    convert_scheme,
    dumps_ddann,
    loads_ddann,
    read_ddann,
    run_script,
    script_answer,
    validate_annotation_set,
    write_ddann,
)
from ddtool.extraction import DefiniteDescription


def test_scheme_constants():
    assert EXP1.categories == ("ASH", "ASS", "LSU", "IDIOM", "DOUBT")
    assert EXP1.link_classes == frozenset()
    assert EXP1.preference_ranking == ("ASH", "LSU", "ASS")
    assert EXP2.categories == ("COREF", "BRIDGE", "LSIT", "UNFAM", "DOUBT")
    assert EXP2.link_classes == {"COREF", "BRIDGE"}


def test_script_bridging_path():
    state = script_answer(ScriptState(), "no")
    state = script_answer(state, "yes", link=(1, 5))
    assert state.label == "BRIDGE"
    assert state.link == (1, 5)
    assert state.answers == ("no", "yes")


def test_script_larger_situation_path():
    state = run_script(["no", "no", "yes"])
    assert state.label == "LSIT"
    assert state.link is None


def test_script_unfamiliar_path():
    assert run_script(["no", "no", "no", "yes"]).label == "UNFAM"


def test_script_coref_needs_link():
    with pytest.raises(ScriptMissingLink):
        script_answer(ScriptState(), "yes")


def test_script_doubt_needs_comment():
    with pytest.raises(ScriptMissingComment):
        run_script(["no", "no", "no", "no"])
    state = run_script(["no", "no", "no", "no"], comment="unclear reference")
    assert state.label == "DOUBT"


def test_script_terminal_rejects_answers():
    state = run_script(["no", "no", "yes"])
    with pytest.raises(InvalidTransition):
        script_answer(state, "no")


def test_script_single_terminal_label():
    seen = set()
    paths = [
        (["yes"], (1, 1), None),
        (["no", "yes"], (1, 1), None),
        (["no", "no", "yes"], None, None),
        (["no", "no", "no", "yes"], None, None),
        (["no", "no", "no", "no"], None, "hmm"),
    ]
    for answers, link, comment in paths:
        seen.add(run_script(answers, link=link, comment=comment).label)
    assert seen == {"COREF", "BRIDGE", "LSIT", "UNFAM", "DOUBT"}


def sample_set():
    records = {
        (1, 6): AnnotationRecord(
            key=(1, 6), label="BRIDGE", antecedent=(1, 5), surface="the price"
        ),
        (3, 1): AnnotationRecord(
            key=(3, 1), label="COREF", antecedent=(1, 2), surface="the 33-year-old housewife"
        ),
        (9, 1): AnnotationRecord(key=(9, 1), label="LSIT", surface="the past 15 years"),
        (22, 4): AnnotationRecord(
            key=(22, 4), label="UNFAM", surface="the inequities in the system"
        ),
    }
    return AnnotationSet(coder_id="C", doc_id="text0", scheme_id="EXP2", records=records)


def test_ddann_round_trip():
    text = dumps_ddann(sample_set())
    again = loads_ddann(text)
    assert again == sample_set()
    assert dumps_ddann(again) == text


def test_ddann_layout():
    aset = AnnotationSet(
        coder_id="C",
        doc_id="d",
        scheme_id="EXP2",
        records={(1, 1): AnnotationRecord(key=(1, 1), label="LSIT", surface="the year")},
    )
    assert dumps_ddann(aset) == (
        "ddann 1 EXP2\ncoder C\ndoc d\n1/1\tthe year\tLSIT\t-\t-\n"
    )


def test_ddann_comment_lines_ignored():
    text = dumps_ddann(sample_set())
    with_comments = text.replace("doc text0", "doc text0\n# a comment line")
    assert loads_ddann(with_comments) == sample_set()


def test_ddann_duplicate_key():
    text = (
        "ddann 1 EXP2\ncoder C\ndoc d\n"
        "3/2\tthe x\tLSIT\t-\t-\n3/2\tthe x\tLSIT\t-\t-\n"
    )
    with pytest.raises(DuplicateKey):
        loads_ddann(text)


def test_ddann_bad_inputs():
    with pytest.raises(DdannSyntaxError):
        loads_ddann("ddann 9 EXP2\ncoder C\ndoc d\n")
    with pytest.raises(UnknownScheme):
        loads_ddann("ddann 1 NOPE\ncoder C\ndoc d\n")
    with pytest.raises(DdannSyntaxError):
        loads_ddann("ddann 1 EXP2\ncoder C\ndoc d\n1/1\tonly three fields\tX\n")
    with pytest.raises(DdannSyntaxError):
        loads_ddann("ddann 1 EXP2\ncoder C\ndoc d\nbad\tx\tLSIT\t-\t-\n")


def test_ddann_file_round_trip(tmp_path):
    path = tmp_path / "c.ddann"
    write_ddann(sample_set(), path)
    assert read_ddann(path) == sample_set()
    first = path.read_bytes()
    write_ddann(read_ddann(path), path)
    assert path.read_bytes() == first


def dd(key, surface="the x", head="x"):
    return DefiniteDescription(key=key, surface=surface, head=head, head_pos="NN")


def test_validate_clean_set():
    extracted = [dd((1, 6)), dd((3, 1)), dd((9, 1)), dd((22, 4))]
    assert validate_annotation_set(sample_set(), extracted) == []


def test_validate_reports_problems():
    extracted = [dd((1, 1)), dd((2, 1))]
    records = {
        (2, 1): AnnotationRecord(key=(2, 1), label="COREF", antecedent=None, surface="x"),
        (3, 1): AnnotationRecord(key=(3, 1), label="WEIRD", antecedent=(5, 2), surface="x"),
        (4, 1): AnnotationRecord(key=(4, 1), label="DOUBT", surface="x"),
    }
    aset = AnnotationSet(coder_id="C", doc_id="d", scheme_id="EXP2", records=records)
    violations = validate_annotation_set(aset, extracted)
    text = "\n".join(violations)
    assert "missing key 1/1" in text
    assert "extra key 3/1" in text
    assert "COREF record 2/1 has no antecedent" in text
    assert "label WEIRD" in text
    assert "does not precede" in text
    assert "doubt at 4/1 has no comment" in text


def test_convert_scheme_rules():
    records = {
        (2, 1): AnnotationRecord(key=(2, 1), label="COREF", antecedent=(1, 1), surface="the rig"),
        (3, 1): AnnotationRecord(key=(3, 1), label="COREF", antecedent=(1, 2), surface="the house"),
        (4, 1): AnnotationRecord(key=(4, 1), label="BRIDGE", antecedent=(1, 1), surface="the crew"),
        (5, 1): AnnotationRecord(key=(5, 1), label="LSIT", surface="the third quarter"),
        (6, 1): AnnotationRecord(key=(6, 1), label="UNFAM", surface="the fact that"),
        (7, 1): AnnotationRecord(key=(7, 1), label="DOUBT", comment="?", surface="the soup"),
    }
    aset = AnnotationSet(coder_id="C", doc_id="d", scheme_id="EXP2", records=records)
    extracted = [
        dd((2, 1), head="rig"),
        dd((3, 1), head="house"),
        dd((4, 1), head="crew"),
        dd((5, 1), head="quarter"),
        dd((6, 1), head="fact"),
        dd((7, 1), head="soup"),
    ]
    heads = {(1, 1): "rig", (1, 2): "home"}
    converted = convert_scheme(aset, extracted, antecedent_heads=heads)
    assert converted.scheme_id == "EXP1"
    labels = converted.labels()
    assert labels[(2, 1)] == "ASH"  # same head as antecedent
    assert labels[(3, 1)] == "ASS"  # "the house" back to "a home"
    assert labels[(4, 1)] == "ASS"
    assert labels[(5, 1)] == "LSU"
    assert labels[(6, 1)] == "LSU"
    assert labels[(7, 1)] == "DOUBT"
    assert all(rec.antecedent is None for rec in converted.records.values())
    assert len(converted.records) == len(records)


def test_convert_scheme_missing_antecedent_head():
    records = {
        (2, 1): AnnotationRecord(key=(2, 1), label="COREF", antecedent=(1, 9), surface="the rig")
    }
    aset = AnnotationSet(coder_id="C", doc_id="d", scheme_id="EXP2", records=records)
    with pytest.raises(MissingAntecedentSurface):
        convert_scheme(aset, [dd((2, 1), head="rig")])


def test_convert_scheme_requires_exp2():
    with pytest.raises(UnknownScheme):
        convert_scheme(make_set("A", ["ASH"], scheme="EXP1"), [])


def test_convert_preserves_doubt_count():
    aset = make_set("C", ["DOUBT", "LSIT", "DOUBT"], scheme="EXP2")
    converted = convert_scheme(aset, [dd((i, 1)) for i in (1, 2, 3)])
    doubts = [l for l in converted.labels().values() if l == "DOUBT"]
    assert len(doubts) == 2


def test_write_to_stream():
    buf = io.StringIO()
    write_ddann(sample_set(), buf)
    assert buf.getvalue().startswith("ddann 1 EXP2\n")
