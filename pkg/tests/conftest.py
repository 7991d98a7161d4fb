import pytest

from ddtool.agreement import CodingMatrix, ConfusionMatrix
from ddtool.annotation import AnnotationRecord, AnnotationSet

#: Acceptance-gate tests and the criterion each one certifies.
ACCEPTANCE_CRITERIA = {
    "test_table4_reproduction": "13-item 3-coder matrix: PA/PE/K round to 0.77/0.35/0.65, K within 0.005 of 0.6476",
    "test_experiment1_two_coder_kappa": "two-coder 5x5 confusion matrix (1040 items) yields K = 0.68 +/- 0.01",
    "test_per_class_formula": "per-class agreement: (2,1,0) item gives 50%/0%; total 930 at c=3 gives 1860 comparisons, 1646/1860 = 88%",
    "test_two_path_oracle_equivalence": "1000 random coder pairs: coding-matrix route equals confusion-matrix route bit-for-bit",
    "test_brute_force_pa_oracle": "500 random matrices: PA matches direct pairwise enumeration within 1e-12",
    "test_kappa_properties": "K properties: unanimity, degenerate chance, permutation invariance, merge monotonicity, 464->430 doubt drop",
    "test_classifier_fixture_suite": "classifier fixtures: same-head, unfamiliar, larger-situation and unclassified verdicts",
    "test_format_round_trip_and_validator": "10,000-record .ddann round-trips byte-identically; script-generated session validates cleanly",
}

_acceptance_outcomes = {}


def pytest_runtest_logreport(report):
    name = report.nodeid.rsplit("::", 1)[-1]
    if name in ACCEPTANCE_CRITERIA and report.when == "call":
        _acceptance_outcomes[name] = report.passed


def pytest_terminal_summary(terminalreporter):
    if not _acceptance_outcomes:
        return
    terminalreporter.section("acceptance criteria")
    for name, criterion in ACCEPTANCE_CRITERIA.items():
        if name in _acceptance_outcomes:
            status = "PASS" if _acceptance_outcomes[name] else "FAIL"
            terminalreporter.write_line(f"ACCEPT {status} {criterion}")

#: The worked 13-item, 3-coder example matrix (categories ASH/ASS/LSU).
TABLE4_ROWS = (
    (0, 0, 3),
    (0, 2, 1),
    (0, 3, 0),
    (0, 2, 1),
    (3, 0, 0),
    (1, 1, 1),
    (0, 0, 3),
    (0, 0, 3),
    (0, 2, 1),
    (3, 0, 0),
    (3, 0, 0),
    (3, 0, 0),
    (3, 0, 0),
)

#: Experiment-1 two-coder 5x5 confusion matrix (rows coder A, columns coder B).
EXP1_CONFUSION_CELLS = (
    (274, 26, 32, 0, 0),
    (9, 97, 44, 0, 0),
    (8, 37, 465, 38, 1),
    (0, 0, 1, 1, 0),
    (3, 0, 4, 0, 0),
)
EXP1_CATEGORIES = ("ASH", "ASS", "LSU", "IDIOM", "DOUBT")


@pytest.fixture
def table4_matrix():
    return CodingMatrix(
        items=tuple(f"{i}/1" for i in range(1, 14)),
        categories=("ASH", "ASS", "LSU"),
        counts=TABLE4_ROWS,
        coders=3,
    )


@pytest.fixture
def exp1_confusion():
    return ConfusionMatrix(categories=EXP1_CATEGORIES, cells=EXP1_CONFUSION_CELLS)


def make_set(coder, labels, scheme="EXP1", doc="doc", antecedents=None):
    """Annotation set over keys (1,1)..(n,1) from a label list."""
    antecedents = antecedents or {}
    records = {}
    for i, label in enumerate(labels, start=1):
        key = (i, 1)
        records[key] = AnnotationRecord(
            key=key,
            label=label,
            antecedent=antecedents.get(key),
            comment="why" if label == "DOUBT" else None,
            surface=f"the thing {i}",
        )
    return AnnotationSet(coder_id=coder, doc_id=doc, scheme_id=scheme, records=records)


def table4_sets():
    """Three EXP1 coders whose tallies reproduce the 13-item matrix."""
    categories = ("ASH", "ASS", "LSU")
    per_coder = {c: [] for c in "ABC"}
    for row in TABLE4_ROWS:
        labels = []
        for j, n in enumerate(row):
            labels.extend([categories[j]] * n)
        for coder, label in zip("ABC", labels):
            per_coder[coder].append(label)
    return [make_set(c, per_coder[c]) for c in "ABC"]
