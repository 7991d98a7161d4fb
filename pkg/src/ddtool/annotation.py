"""Annotation schemes, the four-question decision script, .ddann files,
validation, and scheme conversion."""

from __future__ import annotations

import io
import os
import tempfile
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import IO, Iterable, Mapping, Sequence

from .extraction import DefiniteDescription, Key

FORMAT_VERSION = "1"


@dataclass(frozen=True)
class AnnotationScheme:
    scheme_id: str
    categories: tuple[str, ...]
    link_classes: frozenset[str] = frozenset()
    preference_ranking: tuple[str, ...] = ()
    doubt_allowed: bool = True


#: Experiment-1 scheme: label-only, with an explicit preference ranking
#: given to coders as guidance.
EXP1 = AnnotationScheme(
    scheme_id="EXP1",
    categories=("ASH", "ASS", "LSU", "IDIOM", "DOUBT"),
    preference_ranking=("ASH", "LSU", "ASS"),
)

#: Experiment-2 scheme: the decision-script scheme; co-referential and
#: bridging records carry an antecedent link.
EXP2 = AnnotationScheme(
    scheme_id="EXP2",
    categories=("COREF", "BRIDGE", "LSIT", "UNFAM", "DOUBT"),
    link_classes=frozenset({"COREF", "BRIDGE"}),
)

#: Output scheme of the automatic classifier.
SYS = AnnotationScheme(
    scheme_id="SYS",
    categories=("ASH", "LSU", "UNFAM", "UNCLASS"),
    link_classes=frozenset({"ASH"}),
    doubt_allowed=False,
)

SCHEMES = {s.scheme_id: s for s in (EXP1, EXP2, SYS)}


class UnknownScheme(ValueError):
    pass


def get_scheme(scheme_id: str) -> AnnotationScheme | None:
    return SCHEMES.get(scheme_id)


def require_scheme(scheme_id: str) -> AnnotationScheme:
    scheme = SCHEMES.get(scheme_id)
    if scheme is None:
        raise UnknownScheme(f"unknown annotation scheme {scheme_id!r}")
    return scheme


@dataclass(frozen=True)
class AnnotationRecord:
    key: Key
    label: str
    antecedent: Key | None = None
    comment: str | None = None
    surface: str = ""


@dataclass(frozen=True)
class AnnotationSet:
    """One coder's labels (and links) over one document."""

    coder_id: str
    doc_id: str
    scheme_id: str
    records: dict[Key, AnnotationRecord] = field(default_factory=dict)

    def labels(self) -> dict[Key, str]:
        return {key: rec.label for key, rec in self.records.items()}


# --- decision script ------------------------------------------------------

#: Question wording from the instrument handed to the coders.
SCRIPT_QUESTIONS = {
    1: "Does the DD describe an entity mentioned before?",
    2: "Is the entity new but related to something mentioned before?",
    3: "Is the entity new in the text, but something mutually known by "
       "writer and general readers?",
    4: "Is the entity new in the text, but self-explanatory or accompanied "
       "by its identification?",
}

#: label produced on a yes answer at each question
_YES_LABEL = {1: "COREF", 2: "BRIDGE", 3: "LSIT", 4: "UNFAM"}
_LINK_QUESTIONS = (1, 2)


class InvalidTransition(RuntimeError):
    """Answering a script state that already reached a label."""


class ScriptMissingLink(ValueError):
    """Yes at question 1 or 2 without an antecedent."""


class ScriptMissingComment(ValueError):
    """A doubt verdict without the mandatory comment."""


@dataclass(frozen=True)
class ScriptState:
    question: int = 1
    answers: tuple[str, ...] = ()
    label: str | None = None
    link: Key | None = None
    comment: str | None = None

    @property
    def terminal(self) -> bool:
        return self.label is not None


def script_answer(
    state: ScriptState,
    answer: str,
    link: Key | None = None,
    comment: str | None = None,
) -> ScriptState:
    """Advance the decision script one yes/no answer."""
    if state.terminal:
        raise InvalidTransition(f"script already resolved to {state.label}")
    if answer not in ("yes", "no"):
        raise ValueError(f"answer must be 'yes' or 'no', got {answer!r}")
    answers = state.answers + (answer,)
    q = state.question
    if answer == "yes":
        if q in _LINK_QUESTIONS:
            if link is None:
                raise ScriptMissingLink(f"question {q} answered yes without an antecedent")
            return replace(state, answers=answers, label=_YES_LABEL[q], link=link)
        return replace(state, answers=answers, label=_YES_LABEL[q])
    if q < 4:
        return replace(state, answers=answers, question=q + 1)
    if not comment or not comment.strip():
        raise ScriptMissingComment("a doubt requires a comment")
    return replace(state, answers=answers, label="DOUBT", comment=comment)


def run_script(
    answers: Sequence[str], link: Key | None = None, comment: str | None = None
) -> ScriptState:
    """Replay a full answer path; the link/comment applies to the last step."""
    state = ScriptState()
    for i, answer in enumerate(answers):
        last = i == len(answers) - 1
        state = script_answer(
            state,
            answer,
            link=link if last else None,
            comment=comment if last else None,
        )
    return state


# --- validation -----------------------------------------------------------


def validate_annotation_set(
    aset: AnnotationSet, extracted: Sequence[DefiniteDescription]
) -> list[str]:
    """Violation report; an empty list means the set is well-formed."""
    violations: list[str] = []
    scheme = get_scheme(aset.scheme_id)
    expected = {dd.key for dd in extracted}
    have = set(aset.records)
    for key in sorted(expected - have):
        violations.append(f"missing key {key[0]}/{key[1]}")
    for key in sorted(have - expected):
        violations.append(f"extra key {key[0]}/{key[1]}")
    for key, rec in aset.records.items():
        pretty = f"{key[0]}/{key[1]}"
        if scheme is not None and rec.label not in scheme.categories:
            violations.append(f"label {rec.label} at {pretty} not in scheme {aset.scheme_id}")
        link_class = scheme is not None and rec.label in scheme.link_classes
        if link_class and rec.antecedent is None:
            violations.append(f"{rec.label} record {pretty} has no antecedent")
        if rec.antecedent is not None and rec.antecedent >= rec.key:
            violations.append(
                f"antecedent {rec.antecedent[0]}/{rec.antecedent[1]} does not precede {pretty}"
            )
        if rec.label == "DOUBT" and not (rec.comment and rec.comment.strip()):
            violations.append(f"doubt at {pretty} has no comment")
    return violations


# --- .ddann serialization -------------------------------------------------


class DdannSyntaxError(ValueError):
    def __init__(self, line_no: int, reason: str):
        super().__init__(f"line {line_no}: {reason}")
        self.line_no = line_no
        self.reason = reason


class DuplicateKey(DdannSyntaxError):
    def __init__(self, line_no: int, key: Key):
        super().__init__(line_no, f"duplicate key {key[0]}/{key[1]}")
        self.key = key


def _format_key(key: Key) -> str:
    return f"{key[0]}/{key[1]}"


def _parse_key(text: str, line_no: int) -> Key:
    try:
        sent, idx = text.split("/")
        return (int(sent), int(idx))
    except ValueError:
        raise DdannSyntaxError(line_no, f"bad key {text!r}") from None


def _check_field(value: str, what: str) -> str:
    if "\t" in value or "\n" in value:
        raise ValueError(f"{what} may not contain tabs or newlines: {value!r}")
    return value


def write_ddann(aset: AnnotationSet, dest: str | Path | IO[str]) -> None:
    """Write the tab-separated .ddann file; file writes are atomic."""
    lines = [
        f"ddann {FORMAT_VERSION} {aset.scheme_id}",
        f"coder {_check_field(aset.coder_id, 'coder id')}",
        f"doc {_check_field(aset.doc_id, 'doc id')}",
    ]
    for key in sorted(aset.records):
        rec = aset.records[key]
        lines.append(
            "\t".join(
                (
                    _format_key(key),
                    _check_field(rec.surface, "surface"),
                    _check_field(rec.label, "label"),
                    _format_key(rec.antecedent) if rec.antecedent is not None else "-",
                    _check_field(rec.comment, "comment") if rec.comment is not None else "-",
                )
            )
        )
    payload = "\n".join(lines) + "\n"
    if isinstance(dest, (str, Path)):
        path = Path(dest)
        fd, tmp = tempfile.mkstemp(dir=path.parent or Path("."), suffix=".tmp")
        try:
            with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as fh:
                fh.write(payload)
            os.replace(tmp, path)
        except BaseException:
            if os.path.exists(tmp):
                os.unlink(tmp)
            raise
    else:
        dest.write(payload)


def dumps_ddann(aset: AnnotationSet) -> str:
    buf = io.StringIO()
    write_ddann(aset, buf)
    return buf.getvalue()


def read_ddann(source: str | Path | IO[str]) -> AnnotationSet:
    if isinstance(source, (str, Path)):
        text = Path(source).read_bytes().decode("utf-8")
    else:
        text = source.read()
    return loads_ddann(text)


def loads_ddann(text: str) -> AnnotationSet:
    lines = text.split("\n")
    header: list[tuple[int, str]] = []
    records: dict[Key, AnnotationRecord] = {}
    body: list[tuple[int, str]] = []
    for line_no, line in enumerate(lines, start=1):
        if not line.strip() or line.startswith("#"):
            continue
        if len(header) < 3:
            header.append((line_no, line))
        else:
            body.append((line_no, line))
    if len(header) < 3:
        raise DdannSyntaxError(len(lines), "truncated header")

    (no1, l1), (no2, l2), (no3, l3) = header
    parts = l1.split()
    if len(parts) != 3 or parts[0] != "ddann" or parts[1] != FORMAT_VERSION:
        raise DdannSyntaxError(no1, f"bad format line {l1!r}")
    scheme = require_scheme(parts[2])
    if not l2.startswith("coder "):
        raise DdannSyntaxError(no2, "expected 'coder <id>'")
    if not l3.startswith("doc "):
        raise DdannSyntaxError(no3, "expected 'doc <id>'")
    coder_id = l2[len("coder "):]
    doc_id = l3[len("doc "):]

    for line_no, line in body:
        fields = line.split("\t")
        if len(fields) != 5:
            raise DdannSyntaxError(line_no, f"expected 5 tab-separated fields, got {len(fields)}")
        key_text, surface, label, ant_text, comment = fields
        key = _parse_key(key_text, line_no)
        if key in records:
            raise DuplicateKey(line_no, key)
        antecedent = None if ant_text == "-" else _parse_key(ant_text, line_no)
        records[key] = AnnotationRecord(
            key=key,
            label=label,
            antecedent=antecedent,
            comment=None if comment == "-" else comment,
            surface=surface,
        )
    return AnnotationSet(
        coder_id=coder_id, doc_id=doc_id, scheme_id=scheme.scheme_id, records=records
    )


# --- scheme conversion ----------------------------------------------------


class MissingAntecedentSurface(LookupError):
    """Head comparison impossible: no head known for an antecedent key."""

    def __init__(self, key: Key):
        super().__init__(f"no head available for antecedent {key[0]}/{key[1]}")
        self.key = key


def convert_scheme(
    aset: AnnotationSet,
    extracted: Sequence[DefiniteDescription],
    antecedent_heads: Mapping[Key, str] | None = None,
) -> AnnotationSet:
    """Convert an EXP2 annotation set to the EXP1 scheme.

    Co-referential records split on head identity between the description
    and its antecedent: same head -> ASH, different head -> ASS.  Bridging
    maps to ASS, larger-situation and unfamiliar to LSU.  Links are dropped
    (EXP1 is label-only).
    """
    if aset.scheme_id != "EXP2":
        raise UnknownScheme(f"convert_scheme expects an EXP2 set, got {aset.scheme_id}")
    heads: dict[Key, str] = {dd.key: dd.head for dd in extracted}
    if antecedent_heads:
        for key, head in antecedent_heads.items():
            heads.setdefault(key, head)
    records: dict[Key, AnnotationRecord] = {}
    for key, rec in aset.records.items():
        if rec.label == "COREF":
            own = heads.get(key)
            other = heads.get(rec.antecedent) if rec.antecedent is not None else None
            if own is None or other is None:
                raise MissingAntecedentSurface(rec.antecedent if rec.antecedent else key)
            label = "ASH" if own.lower() == other.lower() else "ASS"
        elif rec.label == "BRIDGE":
            label = "ASS"
        elif rec.label in ("LSIT", "UNFAM"):
            label = "LSU"
        elif rec.label == "DOUBT":
            label = "DOUBT"
        else:
            raise UnmappedLabel(rec.label)
        records[key] = AnnotationRecord(
            key=key, label=label, antecedent=None, comment=rec.comment, surface=rec.surface
        )
    return AnnotationSet(
        coder_id=aset.coder_id, doc_id=aset.doc_id, scheme_id="EXP1", records=records
    )


class UnmappedLabel(KeyError):
    pass
