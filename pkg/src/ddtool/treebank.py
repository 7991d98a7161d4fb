"""Reader for Penn-Treebank-style bracketed parse files."""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterator


class TreebankError(ValueError):
    """Malformed bracketed input; carries 1-based line/column."""

    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"{message} at line {line}, column {column}")
        self.line = line
        self.column = column


class UnbalancedParens(TreebankError):
    pass


class EmptyNode(TreebankError):
    """A bare ``()`` with neither label nor children."""


EMPTY_CATEGORY_POS = "-NONE-"


def bare_category(raw_label: str) -> str:
    """Strip functional tags and coindices: ``NP-SBJ-1`` -> ``NP``.

    Labels that themselves start with ``-`` (``-NONE-``, ``-LRB-``) are
    kept whole.
    """
    if not raw_label or raw_label.startswith("-"):
        return raw_label
    cut = len(raw_label)
    for sep in "-=":
        pos = raw_label.find(sep)
        if pos != -1:
            cut = min(cut, pos)
    return raw_label[:cut]


@dataclass(frozen=True)
class ParseTree:
    """One node of a constituency tree.

    ``label`` is the bare category; ``raw_label`` keeps functional tags.
    ``leaf_offsets`` is the half-open surface-token range covered by the
    node; empty-category leaves (POS ``-NONE-``) span zero tokens.
    """

    label: str
    raw_label: str
    children: tuple["ParseTree", ...] = ()
    token: str | None = None
    leaf_offsets: tuple[int, int] = (0, 0)

    @property
    def is_leaf(self) -> bool:
        return self.token is not None

    @property
    def is_empty_category(self) -> bool:
        return self.is_leaf and self.raw_label == EMPTY_CATEGORY_POS

    def leaves(self) -> Iterator["ParseTree"]:
        if self.is_leaf:
            yield self
        for child in self.children:
            yield from child.leaves()

    def surface_leaves(self) -> Iterator["ParseTree"]:
        """Leaves excluding empty categories (traces, null elements)."""
        for leaf in self.leaves():
            if not leaf.is_empty_category:
                yield leaf

    def surface(self) -> str:
        return " ".join(leaf.token for leaf in self.surface_leaves())

    def subtrees(self) -> Iterator["ParseTree"]:
        """Depth-first, outermost-first traversal including self."""
        yield self
        for child in self.children:
            yield from child.subtrees()

    def pretty(self) -> str:
        if self.is_leaf:
            return f"({self.raw_label} {self.token})"
        inner = " ".join(child.pretty() for child in self.children)
        return f"({self.raw_label} {inner})"


@dataclass(frozen=True)
class Document:
    """An ordered sequence of sentence trees; sentence numbers are 1-based."""

    doc_id: str
    sentences: tuple[ParseTree, ...]
    source_path: str = ""

    def sentence(self, sentence_no: int) -> ParseTree:
        return self.sentences[sentence_no - 1]


_TOKEN_RE = re.compile(r"\(|\)|[^()\s]+")


def _lex(text: str) -> Iterator[tuple[str, int, int]]:
    for lineno, line in enumerate(text.split("\n"), start=1):
        for match in _TOKEN_RE.finditer(line):
            yield match.group(), lineno, match.start() + 1


@dataclass
class _RawNode:
    label: str
    line: int
    column: int
    children: list = field(default_factory=list)
    words: list = field(default_factory=list)


def _attach_offsets(node: _RawNode, counter: list[int]) -> ParseTree:
    if node.words and node.children:
        raise TreebankError("mixed tokens and constituents", node.line, node.column)
    if node.words:
        if len(node.words) > 1:
            raise TreebankError("multiple tokens under one label", node.line, node.column)
        start = counter[0]
        width = 0 if node.label == EMPTY_CATEGORY_POS else 1
        counter[0] += width
        return ParseTree(
            label=bare_category(node.label),
            raw_label=node.label,
            token=node.words[0],
            leaf_offsets=(start, start + width),
        )
    children = tuple(_attach_offsets(child, counter) for child in node.children)
    if children:
        offsets = (children[0].leaf_offsets[0], children[-1].leaf_offsets[1])
    else:
        offsets = (counter[0], counter[0])
    return ParseTree(
        label=bare_category(node.label),
        raw_label=node.label,
        children=children,
        leaf_offsets=offsets,
    )


def _parse_exprs(text: str) -> list[_RawNode]:
    roots: list[_RawNode] = []
    stack: list[_RawNode] = []
    last_line, last_col = 1, 1
    for tok, line, col in _lex(text):
        last_line, last_col = line, col
        if tok == "(":
            node = _RawNode(label="", line=line, column=col)
            if stack:
                stack[-1].children.append(node)
            stack.append(node)
        elif tok == ")":
            if not stack:
                raise UnbalancedParens("unexpected ')'", line, col)
            node = stack.pop()
            if not node.label and not node.children and not node.words:
                raise EmptyNode("empty node '()'", node.line, node.column)
            if not stack:
                roots.append(node)
        else:
            if not stack:
                raise UnbalancedParens(f"token {tok!r} outside parentheses", line, col)
            top = stack[-1]
            if not top.label and not top.children:
                top.label = tok
            else:
                top.words.append(tok)
    if stack:
        raise UnbalancedParens("unclosed '('", stack[-1].line, stack[-1].column)
    if not roots and text.strip():
        raise UnbalancedParens("no parse found", last_line, last_col)
    return roots


def parse_treebank(raw_text: str, doc_id: str, source_path: str = "") -> Document:
    """Parse bracketed text into a Document, one tree per top-level expression.

    An extra label-less outer wrapper per sentence (old ACL/DCI style,
    ``( (S ...) )``) is tolerated and spliced away.
    """
    sentences: list[ParseTree] = []
    for root in _parse_exprs(raw_text):
        if not root.label and not root.words:
            unwrapped = root.children
        else:
            unwrapped = [root]
        for raw in unwrapped:
            sentences.append(_attach_offsets(raw, [0]))
    return Document(doc_id=doc_id, sentences=tuple(sentences), source_path=source_path)


def read_treebank_file(path: str | Path, doc_id: str | None = None) -> Document:
    """Read one .mrg-style file; the file name stem is the default doc_id."""
    path = Path(path)
    raw = path.read_bytes().decode("utf-8")  # reject non-UTF-8 whole-file
    return parse_treebank(raw, doc_id or path.stem, source_path=str(path))


def np_nodes(doc: Document) -> list[tuple[int, int, ParseTree]]:
    """All NP nodes in document order, depth-first, outermost-first.

    np_index is 1-based per sentence.
    """
    result = []
    for sentence_no, tree in enumerate(doc.sentences, start=1):
        np_index = 0
        for node in tree.subtrees():
            if not node.is_leaf and node.label.startswith("NP"):
                np_index += 1
                result.append((sentence_no, np_index, node))
    return result
