"""Dual-process heuristic classifier: same-head resolution against a
discourse model plus discourse-new classification from surface features."""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

from .extraction import (
    DefiniteDescription,
    HeadNotFound,
    Key,
    LexiconConfig,
    _build_dd,
    _head_leaf,
    _premodifiers,
    starts_with_the,
)
from .treebank import Document, ParseTree, np_nodes


class MatchMode(str, enum.Enum):
    STRICT = "strict"
    LOOSE = "loose"


class ApplyOrder(str, enum.Enum):
    RESOLVE_FIRST = "resolve-first"
    CLASSIFY_FIRST = "classify-first"


class LabelKind(str, enum.Enum):
    ANAPHORIC_SAME_HEAD = "anaphoric-same-head"
    LARGER_SITUATION = "larger-situation"
    UNFAMILIAR = "unfamiliar"
    UNCLASSIFIED = "unclassified"


@dataclass(frozen=True)
class SystemLabel:
    kind: LabelKind
    antecedent: Key | None = None


@dataclass(frozen=True)
class Mention:
    key: Key
    head: str
    premodifiers: frozenset[str]
    surface: str
    is_definite: bool
    sentence_no: int
    offsets: tuple[int, int]


@dataclass
class DiscourseModel:
    """Ordered record of mentions built during a left-to-right pass."""

    mentions: list[Mention] = field(default_factory=list)

    def append(self, mention: Mention) -> None:
        self.mentions.append(mention)


@dataclass(frozen=True)
class ClassifierConfig:
    order: ApplyOrder = ApplyOrder.RESOLVE_FIRST
    matching: MatchMode = MatchMode.STRICT
    lexicon: LexiconConfig = field(default_factory=LexiconConfig)


def _premod_tokens(dd: DefiniteDescription) -> set[str]:
    return {tok.lower() for tok, _ in dd.premodifiers}


def resolve_same_head(
    dd: DefiniteDescription,
    model: DiscourseModel,
    matching: MatchMode = MatchMode.STRICT,
) -> Key | None:
    """Most recent same-head mention passing the premodifier test, if any."""
    wanted = dd.head.lower()
    premods = _premod_tokens(dd)
    for mention in reversed(model.mentions):
        if mention.head.lower() != wanted:
            continue
        if matching is MatchMode.STRICT:
            allowed = {p.lower() for p in mention.premodifiers} | {mention.head.lower()}
            if not premods <= allowed:
                continue
        return mention.key
    return None


def classify_discourse_new(dd: DefiniteDescription) -> LabelKind:
    """Discourse-new verdict from surface features; unfamiliar test first."""
    f = dd.features
    if (
        f.has_unexplanatory_modifier
        or f.in_apposition
        or f.in_copula
        or f.has_relative_or_pp_postmod
        or f.has_np_complement
    ):
        return LabelKind.UNFAMILIAR
    if f.has_temporal_head or f.has_proper_head_or_premod:
        return LabelKind.LARGER_SITUATION
    return LabelKind.UNCLASSIFIED


def _mention_for(key: Key, np: ParseTree) -> Mention | None:
    try:
        head_leaf, base = _head_leaf(np)
    except HeadNotFound:
        return None
    premods = frozenset(tok.lower() for tok, _ in _premodifiers(base, head_leaf))
    return Mention(
        key=key,
        head=head_leaf.token,
        premodifiers=premods,
        surface=np.surface(),
        is_definite=starts_with_the(np),
        sentence_no=key[0],
        offsets=np.leaf_offsets,
    )


def classify_document(doc: Document, cfg: ClassifierConfig | None = None) -> dict[Key, SystemLabel]:
    """Single left-to-right pass over all NPs; labels every the-NP.

    Every NP, definite or not, enters the discourse model after processing,
    so later definites can take indefinites as antecedents.
    """
    cfg = cfg or ClassifierConfig()
    model = DiscourseModel()
    labels: dict[Key, SystemLabel] = {}
    for sentence_no, np_index, np in np_nodes(doc):
        key = (sentence_no, np_index)
        if starts_with_the(np):
            labels[key] = _classify_one(key, np, doc.sentence(sentence_no), model, cfg)
        mention = _mention_for(key, np)
        if mention is not None:
            model.append(mention)
    return labels


def _classify_one(
    key: Key,
    np: ParseTree,
    sentence: ParseTree,
    model: DiscourseModel,
    cfg: ClassifierConfig,
) -> SystemLabel:
    try:
        dd = _build_dd(key, np, sentence, cfg.lexicon)
    except HeadNotFound:
        return SystemLabel(LabelKind.UNCLASSIFIED)

    # ancestors of the DD's NP are not textually preceding mentions
    start, end = np.leaf_offsets
    preceding = DiscourseModel(
        [
            m
            for m in model.mentions
            if not (m.sentence_no == key[0] and m.offsets[0] <= start and m.offsets[1] >= end)
        ]
    )

    def resolved() -> SystemLabel | None:
        antecedent = resolve_same_head(dd, preceding, cfg.matching)
        if antecedent is not None:
            return SystemLabel(LabelKind.ANAPHORIC_SAME_HEAD, antecedent)
        return None

    def classified() -> SystemLabel | None:
        kind = classify_discourse_new(dd)
        if kind is not LabelKind.UNCLASSIFIED:
            return SystemLabel(kind)
        return None

    first, second = (resolved, classified)
    if cfg.order is ApplyOrder.CLASSIFY_FIRST:
        first, second = (classified, resolved)
    return first() or second() or SystemLabel(LabelKind.UNCLASSIFIED)
