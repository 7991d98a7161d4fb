"""Multi-rater agreement statistics over coded definite descriptions.

Implements the Siegel & Castellan style K coefficient with its
intermediates (per-item S_i, PA, PE), per-class pairwise agreement,
two-coder confusion matrices, class remapping, item dropping, and
antecedent (entity) agreement.  All proportions are computed with exact
rational arithmetic and converted to floats only at the boundary, so the
same data always yields bit-identical results regardless of the route
taken to build the coding matrix.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .annotation import AnnotationSet, get_scheme


class CoverageMismatch(ValueError):
    """Coders do not cover the same items."""

    def __init__(self, keys):
        self.keys = sorted(keys)
        super().__init__(f"item coverage differs between coders: {self.keys}")


class DegenerateChance(ArithmeticError):
    """PE = 1 (all judgments in one category); K is undefined."""


class UnmappedCategory(KeyError):
    def __init__(self, name: str):
        super().__init__(name)
        self.name = name


class MissingLink(ValueError):
    def __init__(self, coder: str, key):
        super().__init__(f"coder {coder} has no antecedent for {key}")
        self.coder = coder
        self.key = key


@dataclass(frozen=True)
class CodingMatrix:
    """N items x m categories matrix of coder counts n_ij."""

    items: tuple[str, ...]
    categories: tuple[str, ...]
    counts: tuple[tuple[int, ...], ...]
    coders: int

    def __post_init__(self):
        if len(self.items) < 1:
            raise ValueError("need at least one item")
        if len(self.categories) < 2:
            raise ValueError("need at least two categories")
        if len(set(self.categories)) != len(self.categories):
            raise ValueError("category names must be unique")
        if self.coders < 2:
            raise ValueError("need at least two coders")
        for item, row in zip(self.items, self.counts):
            if len(row) != len(self.categories):
                raise ValueError(f"row width mismatch for {item}")
            if any(n < 0 for n in row):
                raise ValueError(f"negative count for {item}")
            if sum(row) != self.coders:
                raise ValueError(f"row for {item} sums to {sum(row)}, expected {self.coders}")

    @property
    def n_items(self) -> int:
        return len(self.items)

    def column_totals(self) -> tuple[int, ...]:
        return tuple(sum(row[j] for row in self.counts) for j in range(len(self.categories)))


@dataclass(frozen=True)
class KappaResult:
    per_item_S: tuple[float, ...]
    PA: float
    PE: float
    K: float
    T: int
    Z: float


@dataclass(frozen=True)
class PerClassRow:
    category: str
    total: int
    comparisons: int
    agreements: int
    percentage: float | None


@dataclass(frozen=True)
class ConfusionMatrix:
    """cells[x][y] = number of items labeled x by coder A and y by coder B."""

    categories: tuple[str, ...]
    cells: tuple[tuple[int, ...], ...]
    coder_a: str = "A"
    coder_b: str = "B"

    @property
    def total(self) -> int:
        return sum(sum(row) for row in self.cells)

    def cell(self, x: str, y: str) -> int:
        return self.cells[self.categories.index(x)][self.categories.index(y)]


def _ordered_categories(sets: Sequence[AnnotationSet]) -> tuple[str, ...]:
    """Scheme-declared categories first, then any extra observed labels."""
    scheme = get_scheme(sets[0].scheme_id)
    declared = list(scheme.categories) if scheme else []
    observed = sorted(
        {rec.label for aset in sets for rec in aset.records.values()} - set(declared)
    )
    return tuple(declared + observed)


def _check_coverage(sets: Sequence[AnnotationSet]) -> list:
    key_sets = [set(aset.records) for aset in sets]
    union = set.union(*key_sets)
    intersection = set.intersection(*key_sets)
    if union != intersection:
        raise CoverageMismatch(union - intersection)
    return sorted(union)


def build_coding_matrix(sets: Sequence[AnnotationSet]) -> CodingMatrix:
    """Tally n_ij over the common items of two or more annotation sets."""
    if len(sets) < 2:
        raise ValueError("need at least two annotation sets")
    keys = _check_coverage(sets)
    categories = _ordered_categories(sets)
    index = {cat: j for j, cat in enumerate(categories)}
    counts = []
    for key in keys:
        row = [0] * len(categories)
        for aset in sets:
            row[index[aset.records[key].label]] += 1
        counts.append(tuple(row))
    items = tuple(f"{s}/{i}" for s, i in keys)
    return CodingMatrix(items, categories, tuple(counts), coders=len(sets))


def _kappa_fractions(cm: CodingMatrix) -> tuple[list[Fraction], Fraction, Fraction, Fraction]:
    c = cm.coders
    pairs = c * (c - 1)
    per_item = [Fraction(sum(n * (n - 1) for n in row), pairs) for row in cm.counts]
    z = sum(per_item, Fraction(0))
    pa = z / cm.n_items
    t = cm.n_items * c
    pe = sum((Fraction(cj, t) ** 2 for cj in cm.column_totals()), Fraction(0))
    if pe == 1:
        raise DegenerateChance("all judgments fall in one category; K undefined")
    k = (pa - pe) / (1 - pe)
    return per_item, pa, pe, k


def kappa(cm: CodingMatrix) -> KappaResult:
    """K = (PA - PE)/(1 - PE) with S_i = sum_j n_ij(n_ij - 1) / c(c-1)."""
    per_item, pa, pe, k = _kappa_fractions(cm)
    return KappaResult(
        per_item_S=tuple(float(s) for s in per_item),
        PA=float(pa),
        PE=float(pe),
        K=float(k),
        T=cm.n_items * cm.coders,
        Z=float(sum(per_item, Fraction(0))),
    )


def per_class_agreement(cm: CodingMatrix) -> list[PerClassRow]:
    """Pairwise agreements over pairwise comparisons attributed per class."""
    rows = []
    for j, category in enumerate(cm.categories):
        total = sum(row[j] for row in cm.counts)
        comparisons = total * (cm.coders - 1)
        agreements = sum(row[j] * (row[j] - 1) for row in cm.counts)
        percentage = float(Fraction(agreements, comparisons)) if comparisons else None
        rows.append(PerClassRow(category, total, comparisons, agreements, percentage))
    return rows


def confusion_matrix(a: AnnotationSet, b: AnnotationSet) -> ConfusionMatrix:
    """Two-coder contingency table: cell(x, y) = labeled x by a, y by b."""
    keys = _check_coverage([a, b])
    categories = _ordered_categories([a, b])
    index = {cat: j for j, cat in enumerate(categories)}
    cells = [[0] * len(categories) for _ in categories]
    for key in keys:
        cells[index[a.records[key].label]][index[b.records[key].label]] += 1
    return ConfusionMatrix(
        categories=categories,
        cells=tuple(tuple(row) for row in cells),
        coder_a=a.coder_id,
        coder_b=b.coder_id,
    )


def confusion_to_coding(conf: ConfusionMatrix) -> CodingMatrix:
    """Expand a two-coder confusion matrix into per-item coder counts."""
    items: list[str] = []
    counts: list[tuple[int, ...]] = []
    m = len(conf.categories)
    for x in range(m):
        for y in range(m):
            cell = conf.cells[x][y]
            for k in range(cell):
                row = [0] * m
                row[x] += 1
                row[y] += 1
                items.append(f"{conf.categories[x]}/{conf.categories[y]}#{k + 1}")
                counts.append(tuple(row))
    return CodingMatrix(tuple(items), conf.categories, tuple(counts), coders=2)


def remap_classes(aset: AnnotationSet, mapping: Mapping[str, str]) -> AnnotationSet:
    """Replace labels through a category mapping; links are kept untouched.

    Every label actually used in the set must be mapped.
    """
    records = {}
    for key, rec in aset.records.items():
        if rec.label not in mapping:
            raise UnmappedCategory(rec.label)
        records[key] = replace(rec, label=mapping[rec.label])
    return replace(aset, records=records)


def drop_items_with_labels(
    sets: Sequence[AnnotationSet], drop: Iterable[str]
) -> list[AnnotationSet]:
    """Remove every item that ANY coder labeled with a dropped category."""
    drop = set(drop)
    keys = _check_coverage(sets)
    doomed = {
        key for key in keys for aset in sets if aset.records[key].label in drop
    }
    return [
        replace(
            aset,
            records={k: r for k, r in aset.records.items() if k not in doomed},
        )
        for aset in sets
    ]


@dataclass(frozen=True)
class EntityAgreementReport:
    eligible: int
    entity_agree: int


class _UnionFind:
    def __init__(self):
        self.parent: dict = {}

    def find(self, x):
        self.parent.setdefault(x, x)
        root = x
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[x] != root:
            self.parent[x], x = root, self.parent[x]
        return root

    def union(self, x, y):
        self.parent[self.find(x)] = self.find(y)


def _links_of(aset: AnnotationSet, link_class: str) -> list:
    links = []
    for key, rec in aset.records.items():
        if rec.label == link_class:
            if rec.antecedent is None:
                raise MissingLink(aset.coder_id, key)
            links.append((key, rec.antecedent))
    return links


def entity_agreement(
    sets: Sequence[AnnotationSet], link_class: str, mode: str = "union"
) -> EntityAgreementReport:
    """Agreement on the referent entity for items all coders gave link_class.

    ``union`` (default) closes over all coders' link chains together;
    ``per-coder`` requires every coder pair to land in one chain of their
    two combined link sets.
    """
    if mode not in ("union", "per-coder"):
        raise ValueError(f"unknown entity-agreement mode {mode!r}")
    keys = _check_coverage(sets)
    eligible = [
        key for key in keys if all(s.records[key].label == link_class for s in sets)
    ]
    per_set_links = [_links_of(s, link_class) for s in sets]

    def same_entity(link_groups: Sequence[list], item, chosen) -> bool:
        # the item's own links must not pre-merge its coders' antecedents
        uf = _UnionFind()
        for links in link_groups:
            for key, antecedent in links:
                if key != item:
                    uf.union(key, antecedent)
        return len({uf.find(a) for a in chosen}) == 1

    agreeing = set()
    for item in eligible:
        chosen = [s.records[item].antecedent for s in sets]
        if mode == "union":
            if same_entity(per_set_links, item, chosen):
                agreeing.add(item)
        else:
            ok = all(
                same_entity(
                    [per_set_links[i], per_set_links[j]],
                    item,
                    [chosen[i], chosen[j]],
                )
                for i in range(len(sets))
                for j in range(i + 1, len(sets))
            )
            if ok:
                agreeing.add(item)
    return EntityAgreementReport(len(eligible), len(agreeing))
