"""Extraction of definite descriptions (the-NPs) and their surface features."""

from __future__ import annotations

import json
from dataclasses import dataclass, field, fields, replace
from pathlib import Path

from .treebank import Document, ParseTree, np_nodes

Key = tuple[int, int]

#: Categories that postmodify a head noun.
POSTMOD_CATEGORIES = ("PP", "SBAR", "VP", "RRC")

DEFAULT_UNEXPLANATORY_MODIFIERS = frozenset(
    {"first", "last", "same", "only", "best", "fastest", "biggest",
     "largest", "maximum", "minimum", "most"}
)
DEFAULT_TEMPORAL_HEADS = frozenset(
    {"year", "month", "quarter", "week", "day", "time", "period",
     "morning", "afternoon", "moment", "decade"}
)
DEFAULT_COMPLEMENT_TAKING_NOUNS = frozenset(
    {"fact", "conclusion", "rumour", "rumor", "idea", "belief", "claim",
     "time", "report", "possibility"}
)
DEFAULT_COPULA_FORMS = frozenset(
    {"is", "are", "was", "were", "be", "been", "being", "'s"}
)


class HeadNotFound(LookupError):
    """An the-NP without a noun-tagged leaf in head position."""

    def __init__(self, key: Key | None = None, detail: str = ""):
        super().__init__(f"no head noun found{f' for {key}' if key else ''} {detail}".rstrip())
        self.key = key


@dataclass(frozen=True)
class LexiconConfig:
    """The small word lists the classification heuristics consult."""

    unexplanatory_modifiers: frozenset[str] = DEFAULT_UNEXPLANATORY_MODIFIERS
    temporal_heads: frozenset[str] = DEFAULT_TEMPORAL_HEADS
    complement_taking_nouns: frozenset[str] = DEFAULT_COMPLEMENT_TAKING_NOUNS
    copula_forms: frozenset[str] = DEFAULT_COPULA_FORMS

    def __post_init__(self):
        for f in fields(self):
            words = getattr(self, f.name)
            if not words:
                raise ValueError(f"lexicon set {f.name} must be non-empty")
            if any(w != w.lower() for w in words):
                raise ValueError(f"lexicon set {f.name} entries must be lower-case")

    @classmethod
    def load(cls, path: str | Path) -> "LexiconConfig":
        """Load word lists from a JSON object of four string arrays."""
        data = json.loads(Path(path).read_text(encoding="utf-8"))
        kwargs = {}
        for f in fields(cls):
            if f.name in data:
                kwargs[f.name] = frozenset(w.lower() for w in data[f.name])
        return cls(**kwargs)


@dataclass(frozen=True)
class FeatureSet:
    """Boolean surface indicators of discourse novelty."""

    has_np_complement: bool = False
    has_relative_or_pp_postmod: bool = False
    in_apposition: bool = False
    in_copula: bool = False
    has_unexplanatory_modifier: bool = False
    has_temporal_head: bool = False
    has_proper_head_or_premod: bool = False

    def bitstring(self) -> str:
        return "".join("1" if getattr(self, f.name) else "0" for f in fields(self))


@dataclass(frozen=True)
class DefiniteDescription:
    key: Key
    surface: str
    head: str
    head_pos: str
    premodifiers: tuple[tuple[str, str], ...] = ()
    postmodifiers: tuple[str, ...] = ()
    features: FeatureSet = field(default_factory=FeatureSet)


@dataclass(frozen=True)
class ExtractionResult:
    definites: tuple[DefiniteDescription, ...]
    skipped: tuple[tuple[Key, str], ...] = ()


def is_punctuation(token: str) -> bool:
    """Tokens consisting solely of non-alphanumeric characters."""
    return not any(ch.isalnum() for ch in token)


def _content_leaves(np: ParseTree) -> list[ParseTree]:
    return [leaf for leaf in np.surface_leaves() if not is_punctuation(leaf.token)]


def starts_with_the(np: ParseTree) -> bool:
    leaves = _content_leaves(np)
    return bool(leaves) and leaves[0].token.lower() == "the"


def _starts_with_determiner(np: ParseTree) -> bool:
    leaves = _content_leaves(np)
    return bool(leaves) and leaves[0].label == "DT"


def _head_leaf(np: ParseTree) -> tuple[ParseTree, ParseTree]:
    """Return (head leaf, base NP directly containing it)."""
    kids = np.children
    if kids and not kids[0].is_leaf and kids[0].label.startswith("NP"):
        # coordination/apposition shell: descend into the determiner-initial NP
        for child in kids:
            if not child.is_leaf and child.label.startswith("NP") and _starts_with_determiner(child):
                return _head_leaf(child)
    candidates: list[ParseTree] = []
    for i, child in enumerate(kids):
        postmod = child.label in POSTMOD_CATEGORIES or child.label.startswith("NP")
        if i > 0 and not child.is_leaf and postmod:
            break
        if child.is_leaf:
            if not child.is_empty_category and not is_punctuation(child.token):
                candidates.append(child)
        else:
            candidates.extend(_content_leaves(child))
    for leaf in reversed(candidates):
        if leaf.label.startswith("NN"):
            return leaf, np
    raise HeadNotFound()


def find_head(np: ParseTree) -> tuple[str, str]:
    """Head noun of an NP: the rightmost NN-tagged leaf before postmodification."""
    leaf, _ = _head_leaf(np)
    return leaf.token, leaf.label


def _premodifiers(base: ParseTree, head: ParseTree) -> tuple[tuple[str, str], ...]:
    """Leaves between the determiner (if any) and the head, hyphens kept."""
    leaves = _content_leaves(base)
    head_at = next(i for i, leaf in enumerate(leaves) if leaf is head)
    start = 0
    if leaves and leaves[0].label in ("DT", "PDT"):
        start = 1
    return tuple((leaf.token, leaf.label) for leaf in leaves[start:head_at])


def _path_to(node: ParseTree, target: ParseTree) -> list[ParseTree]:
    if node is target:
        return [node]
    for child in node.children:
        if not child.is_leaf:
            tail = _path_to(child, target)
            if tail:
                return [node] + tail
    return []


def _postmodifiers(np: ParseTree, base: ParseTree, head: ParseTree) -> tuple[str, ...]:
    """Constituent categories following the head inside the extracted NP."""
    cats: list[str] = []
    for node in _path_to(np, base) or [base]:
        for child in node.children:
            if not child.is_leaf and child.leaf_offsets[0] >= head.leaf_offsets[1]:
                cats.append(child.label)
    return tuple(cats)


def _parent_map(sentence: ParseTree) -> dict[int, ParseTree]:
    parents: dict[int, ParseTree] = {}
    for node in sentence.subtrees():
        for child in node.children:
            parents[id(child)] = node
    return parents


def _in_apposition(np: ParseTree, parents: dict[int, ParseTree]) -> bool:
    parent = parents.get(id(np))
    if parent is None or not parent.label.startswith("NP"):
        return False
    kids = parent.children
    at = next(i for i, child in enumerate(kids) if child is np)
    for j, sibling in enumerate(kids):
        if sibling is np or sibling.is_leaf or not sibling.label.startswith("NP"):
            continue
        lo, hi = sorted((at, j))
        between = kids[lo + 1 : hi]
        if any(k.is_leaf and k.token == "," for k in between):
            return True
    return False


def _in_copula(np: ParseTree, parents: dict[int, ParseTree], lex: LexiconConfig) -> bool:
    parent = parents.get(id(np))
    if parent is None or parent.label != "VP":
        return False
    first_np = next(
        (c for c in parent.children if not c.is_leaf and c.label.startswith("NP")), None
    )
    if first_np is not np:
        return False
    return any(
        child.is_leaf and child.label.startswith("VB") and child.token.lower() in lex.copula_forms
        for child in parent.children
    )


def _lexicon_match(token: str, entries: frozenset[str]) -> bool:
    """Case-insensitive lexicon lookup tolerating a plain plural -s."""
    word = token.lower()
    return word in entries or (word.endswith("s") and word[:-1] in entries)


def compute_features(
    dd: DefiniteDescription,
    np: ParseTree,
    parent_context: ParseTree,
    lex: LexiconConfig,
) -> FeatureSet:
    """Surface-feature flags for one definite description."""
    parents = _parent_map(parent_context)
    has_sbar = "SBAR" in dd.postmodifiers
    return FeatureSet(
        has_np_complement=has_sbar and dd.head.lower() in lex.complement_taking_nouns,
        has_relative_or_pp_postmod=any(c in POSTMOD_CATEGORIES for c in dd.postmodifiers),
        in_apposition=_in_apposition(np, parents),
        in_copula=_in_copula(np, parents, lex),
        has_unexplanatory_modifier=any(
            tok.lower() in lex.unexplanatory_modifiers for tok, _ in dd.premodifiers
        ),
        has_temporal_head=_lexicon_match(dd.head, lex.temporal_heads),
        has_proper_head_or_premod=dd.head_pos.startswith("NNP")
        or any(pos.startswith("NNP") for _, pos in dd.premodifiers),
    )


def _build_dd(key: Key, np: ParseTree, sentence: ParseTree, lex: LexiconConfig) -> DefiniteDescription:
    head_leaf, base = _head_leaf(np)
    dd = DefiniteDescription(
        key=key,
        surface=np.surface(),
        head=head_leaf.token,
        head_pos=head_leaf.label,
        premodifiers=_premodifiers(base, head_leaf),
        postmodifiers=_postmodifiers(np, base, head_leaf),
    )
    features = compute_features(dd, np, sentence, lex)
    return replace(dd, features=features)


def extract(doc: Document, lex: LexiconConfig | None = None) -> ExtractionResult:
    """Extract every the-NP of the document, skipping headless ones."""
    lex = lex or LexiconConfig()
    definites: list[DefiniteDescription] = []
    skipped: list[tuple[Key, str]] = []
    for sentence_no, np_index, np in np_nodes(doc):
        if not starts_with_the(np):
            continue
        key = (sentence_no, np_index)
        try:
            definites.append(_build_dd(key, np, doc.sentence(sentence_no), lex))
        except HeadNotFound:
            skipped.append((key, f"no head noun in {np.surface()!r}"))
    return ExtractionResult(tuple(definites), tuple(skipped))


def extract_definites(doc: Document, lex: LexiconConfig | None = None) -> list[DefiniteDescription]:
    return list(extract(doc, lex).definites)


def mention_heads(doc: Document) -> dict[Key, str]:
    """Head token for every NP in the document that has one."""
    heads: dict[Key, str] = {}
    for sentence_no, np_index, np in np_nodes(doc):
        try:
            token, _ = find_head(np)
        except HeadNotFound:
            continue
        heads[(sentence_no, np_index)] = token
    return heads
