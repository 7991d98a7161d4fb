"""Command-line front end: extract, classify, agree, report, serve."""

from __future__ import annotations

import sys
from pathlib import Path

import click

from . import agreement, annotation, classifier, extraction, treebank

#: exit code for data errors (malformed files, coverage mismatch, ...)
DATA_ERROR = 1

_DATA_ERRORS = (
    treebank.TreebankError,
    agreement.CoverageMismatch,
    agreement.DegenerateChance,
    agreement.UnmappedCategory,
    agreement.MissingLink,
    annotation.DdannSyntaxError,
    annotation.UnknownScheme,
    annotation.MissingAntecedentSurface,
    UnicodeDecodeError,
    OSError,
)


def _fail(message: str) -> None:
    click.echo(f"error: {message}", err=True)
    sys.exit(DATA_ERROR)


def _load_lexicon(path: str | None) -> extraction.LexiconConfig:
    path = path or None
    if path is None:
        import os

        path = os.environ.get("DD_LEXICON") or None
    if path is None:
        return extraction.LexiconConfig()
    return extraction.LexiconConfig.load(path)


def _read_sets(files: tuple[str, ...]) -> list[annotation.AnnotationSet]:
    return [annotation.read_ddann(f) for f in files]


def _format_key(key) -> str:
    return f"{key[0]}/{key[1]}"


@click.group()
def main():
    """Definite-description toolkit."""


@main.command()
@click.argument("files", nargs=-1, required=True, type=click.Path(exists=True))
@click.option("--format", "fmt", type=click.Choice(["tsv"]), default="tsv", show_default=True)
@click.option("--lexicon", type=click.Path(exists=True), help="lexicon JSON (default $DD_LEXICON)")
@click.option("--out", type=click.Path(), help="write output here instead of stdout")
def extract(files, fmt, lexicon, out):
    """Extract definite descriptions from bracketed parse FILES."""
    try:
        lex = _load_lexicon(lexicon)
        lines = ["key\tsurface\thead\tfeatures"]
        for path in files:
            doc = treebank.read_treebank_file(path)
            for dd in extraction.extract_definites(doc, lex):
                lines.append(
                    f"{_format_key(dd.key)}\t{dd.surface}\t{dd.head}\t{dd.features.bitstring()}"
                )
        text = "\n".join(lines) + "\n"
        if out:
            Path(out).write_text(text, encoding="utf-8")
        else:
            click.echo(text, nl=False)
    except _DATA_ERRORS as exc:
        _fail(str(exc))


_SYSTEM_LABELS = {
    classifier.LabelKind.ANAPHORIC_SAME_HEAD: "ASH",
    classifier.LabelKind.LARGER_SITUATION: "LSU",
    classifier.LabelKind.UNFAMILIAR: "UNFAM",
    classifier.LabelKind.UNCLASSIFIED: "UNCLASS",
}


def classify_to_annotation_set(doc, cfg) -> annotation.AnnotationSet:
    """Run the classifier and package its verdicts as a SYS-scheme set."""
    labels = classifier.classify_document(doc, cfg)
    result = extraction.extract(doc, cfg.lexicon)
    surfaces = {dd.key: dd.surface for dd in result.definites}
    records = {}
    for key, label in labels.items():
        records[key] = annotation.AnnotationRecord(
            key=key,
            label=_SYSTEM_LABELS[label.kind],
            antecedent=label.antecedent,
            surface=surfaces.get(key, ""),
        )
    return annotation.AnnotationSet(
        coder_id="system", doc_id=doc.doc_id, scheme_id="SYS", records=records
    )


@main.command()
@click.argument("files", nargs=-1, required=True, type=click.Path(exists=True))
@click.option(
    "--order",
    type=click.Choice([o.value for o in classifier.ApplyOrder]),
    default=classifier.ApplyOrder.RESOLVE_FIRST.value,
    show_default=True,
)
@click.option(
    "--matching",
    type=click.Choice([m.value for m in classifier.MatchMode]),
    default=classifier.MatchMode.STRICT.value,
    show_default=True,
)
@click.option("--lexicon", type=click.Path(exists=True))
@click.option("--out", type=click.Path(), help="output .ddann file (or directory for many inputs)")
def classify(files, order, matching, lexicon, out):
    """Classify the definite descriptions of FILES; emits .ddann."""
    try:
        cfg = classifier.ClassifierConfig(
            order=classifier.ApplyOrder(order),
            matching=classifier.MatchMode(matching),
            lexicon=_load_lexicon(lexicon),
        )
        out_path = Path(out) if out else None
        if out_path and len(files) > 1 and not out_path.is_dir():
            raise click.UsageError("--out must be a directory when classifying several files")
        for path in files:
            doc = treebank.read_treebank_file(path)
            aset = classify_to_annotation_set(doc, cfg)
            if out_path is None:
                click.echo(annotation.dumps_ddann(aset), nl=False)
            elif out_path.is_dir():
                annotation.write_ddann(aset, out_path / f"{doc.doc_id}.ddann")
            else:
                annotation.write_ddann(aset, out_path)
    except _DATA_ERRORS as exc:
        _fail(str(exc))


def _parse_merge_spec(spec: str) -> dict[str, str]:
    """Parse ``A+B=C`` into {A: C, B: C}."""
    if "=" not in spec:
        raise click.UsageError(f"bad --merge spec {spec!r}; expected 'A+B=C'")
    left, target = spec.rsplit("=", 1)
    sources = [s.strip() for s in left.split("+") if s.strip()]
    if not sources or not target.strip():
        raise click.UsageError(f"bad --merge spec {spec!r}; expected 'A+B=C'")
    return {source: target.strip() for source in sources}


FRAURUD_MERGE = {
    "COREF": "SUBSEQUENT",
    "BRIDGE": "FIRST",
    "LSIT": "FIRST",
    "UNFAM": "FIRST",
    "DOUBT": "DOUBT",
}


def _apply_remap(sets, mapping):
    full = [dict(mapping) for _ in sets]
    remapped = []
    for aset, m in zip(sets, full):
        for label in set(aset.labels().values()):
            m.setdefault(label, label)
        remapped.append(agreement.remap_classes(aset, m))
    return remapped


@main.command()
@click.argument("files", nargs=-1, required=True, type=click.Path(exists=True))
@click.option("--drop", help="comma-separated categories; drop items any coder labeled so")
@click.option("--merge", "merges", multiple=True, help="merge spec like 'LSIT+UNFAM=DNEW'")
@click.option("--binary", type=click.Choice(["fraurud"]), help="first/subsequent-mention split")
@click.option("--per-class", is_flag=True, help="print the per-class agreement table")
@click.option("--confusion", is_flag=True, help="print pairwise confusion matrices")
def agree(files, drop, merges, binary, per_class, confusion):
    """Compute the K coefficient of agreement over two or more .ddann FILES.

    --drop and --merge compose in that order: items are dropped first,
    then categories merged.
    """
    if len(files) < 2:
        raise click.UsageError("agree needs at least two annotation files")
    try:
        sets = _read_sets(files)
        if drop:
            sets = agreement.drop_items_with_labels(sets, [c.strip() for c in drop.split(",")])
        mapping: dict[str, str] = {}
        for spec in merges:
            mapping.update(_parse_merge_spec(spec))
        if binary == "fraurud":
            mapping.update(FRAURUD_MERGE)
        if mapping:
            sets = _apply_remap(sets, mapping)
        cm = agreement.build_coding_matrix(sets)
        result = agreement.kappa(cm)
        click.echo(f"N {cm.n_items}")
        click.echo(f"coders {cm.coders}")
        click.echo(f"categories {' '.join(cm.categories)}")
        click.echo(f"PA {result.PA:.2f}")
        click.echo(f"PE {result.PE:.2f}")
        click.echo(f"K {result.K:.2f}")
        if per_class:
            click.echo("")
            click.echo("class\ttotal\tcomparisons\tagreements\tpercentage")
            for row in agreement.per_class_agreement(cm):
                pct = f"{row.percentage:.0%}" if row.percentage is not None else "-"
                click.echo(
                    f"{row.category}\t{row.total}\t{row.comparisons}\t{row.agreements}\t{pct}"
                )
        if confusion:
            for i in range(len(sets)):
                for j in range(i + 1, len(sets)):
                    click.echo("")
                    _print_confusion(agreement.confusion_matrix(sets[i], sets[j]))
    except _DATA_ERRORS as exc:
        _fail(str(exc))


def _print_confusion(conf: agreement.ConfusionMatrix) -> None:
    click.echo(f"confusion {conf.coder_a} (rows) x {conf.coder_b} (columns)")
    click.echo("\t" + "\t".join(conf.categories))
    for category, row in zip(conf.categories, conf.cells):
        click.echo(category + "\t" + "\t".join(str(n) for n in row))


@main.command()
@click.argument("files", nargs=-1, required=True, type=click.Path(exists=True))
def report(files):
    """Class distributions per coder and pairwise confusion matrices."""
    try:
        sets = _read_sets(files)
        for aset in sets:
            total = len(aset.records)
            click.echo(f"coder {aset.coder_id} ({total} items)")
            scheme = annotation.get_scheme(aset.scheme_id)
            categories = list(scheme.categories) if scheme else sorted(
                set(aset.labels().values())
            )
            counts = {c: 0 for c in categories}
            for label in aset.labels().values():
                counts[label] = counts.get(label, 0) + 1
            for category, count in counts.items():
                pct = 100 * count / total if total else 0.0
                click.echo(f"{category}\t{count}\t{pct:.2f}")
            click.echo("")
        if len(sets) >= 2:
            agreement._check_coverage(sets)
            for i in range(len(sets)):
                for j in range(i + 1, len(sets)):
                    _print_confusion(agreement.confusion_matrix(sets[i], sets[j]))
                    click.echo("")
    except _DATA_ERRORS as exc:
        _fail(str(exc))


@main.command()
@click.option("--port", type=int, default=8000, show_default=True)
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--corpus", type=click.Path(exists=True, file_okay=False), required=True)
@click.option("--store", type=click.Path(file_okay=False), required=True)
@click.option("--static", "static_dir", type=click.Path(exists=True, file_okay=False),
              help="directory with the annotation UI build to serve at /")
def serve(port, host, corpus, store, static_dir):
    """Serve the annotation HTTP API (and optionally the web UI)."""
    import uvicorn

    from .service import create_app

    app = create_app(Path(corpus), Path(store), static_dir=Path(static_dir) if static_dir else None)
    uvicorn.run(app, host=host, port=port, log_level="warning")


if __name__ == "__main__":
    main()
