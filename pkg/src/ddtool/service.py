"""HTTP API serving corpus texts and annotation sessions to the web UI.

Storage layout under the store directory, per session:
``<id>.ddann`` (the system of record) and ``<id>.journal`` (one JSON line
per raw answer, enough to reconstruct the session).
"""

from __future__ import annotations

import json
import threading
import uuid
from dataclasses import dataclass, field
from pathlib import Path

from fastapi import FastAPI, HTTPException
from fastapi.responses import PlainTextResponse
from pydantic import BaseModel

from .annotation import (
    AnnotationRecord,
    AnnotationSet,
    ScriptMissingComment,
    ScriptMissingLink,
    dumps_ddann,
    require_scheme,
    run_script,
    write_ddann,
    SCRIPT_QUESTIONS,
)
from .extraction import DefiniteDescription, Key, extract
from .treebank import Document, np_nodes, read_treebank_file


def _parse_key(text: str) -> Key:
    sent, idx = text.split("/")
    return (int(sent), int(idx))


def _format_key(key: Key) -> str:
    return f"{key[0]}/{key[1]}"


@dataclass
class CorpusDoc:
    doc: Document
    definites: tuple[DefiniteDescription, ...]

    def display_keys(self) -> dict[Key, str]:
        """Paper-style keys: sentence number / running DD counter."""
        return {
            dd.key: f"{dd.key[0]}/{ordinal}"
            for ordinal, dd in enumerate(self.definites, start=1)
        }

    def payload(self) -> dict:
        sentences = []
        mentions_by_sentence: dict[int, list] = {}
        for sentence_no, np_index, np in np_nodes(self.doc):
            mentions_by_sentence.setdefault(sentence_no, []).append(
                {
                    "key": _format_key((sentence_no, np_index)),
                    "start": np.leaf_offsets[0],
                    "end": np.leaf_offsets[1],
                    "surface": np.surface(),
                }
            )
        for sentence_no, tree in enumerate(self.doc.sentences, start=1):
            sentences.append(
                {
                    "no": sentence_no,
                    "tokens": [leaf.token for leaf in tree.surface_leaves()],
                    "mentions": mentions_by_sentence.get(sentence_no, []),
                }
            )
        return {"doc": self.doc.doc_id, "sentences": sentences}


@dataclass
class Session:
    session_id: str
    coder_id: str
    doc_id: str
    scheme_id: str
    records: dict[Key, AnnotationRecord] = field(default_factory=dict)
    last_answer: dict | None = None
    lock: threading.Lock = field(default_factory=threading.Lock, repr=False)

    def cursor(self, definites) -> Key | None:
        for dd in definites:
            if dd.key not in self.records:
                return dd.key
        return None

    def annotation_set(self) -> AnnotationSet:
        return AnnotationSet(
            coder_id=self.coder_id,
            doc_id=self.doc_id,
            scheme_id=self.scheme_id,
            records=dict(self.records),
        )

    def info(self, definites) -> dict:
        cursor = self.cursor(definites)
        return {
            "session": self.session_id,
            "coder": self.coder_id,
            "doc": self.doc_id,
            "scheme": self.scheme_id,
            "done": len(self.records),
            "total": len(definites),
            "cursor": _format_key(cursor) if cursor else None,
            "complete": cursor is None,
        }


class SessionCreate(BaseModel):
    coder: str
    doc: str
    scheme: str = "EXP2"


class AnswerBody(BaseModel):
    key: str
    answer_path: list[str]
    label: str
    antecedent: str | None = None
    comment: str | None = None


def create_app(corpus_dir: Path, store_dir: Path, static_dir: Path | None = None) -> FastAPI:
    app = FastAPI(title="dd annotation service")
    corpus_dir = Path(corpus_dir)
    store_dir = Path(store_dir)
    store_dir.mkdir(parents=True, exist_ok=True)

    docs: dict[str, CorpusDoc] = {}
    for path in sorted(corpus_dir.glob("*.mrg")):
        doc = read_treebank_file(path)
        docs[doc.doc_id] = CorpusDoc(doc=doc, definites=extract(doc).definites)

    sessions: dict[str, Session] = {}
    for journal in sorted(store_dir.glob("*.journal")):
        session = _replay_journal(journal)
        if session is not None:
            sessions[session.session_id] = session

    def get_doc(doc_id: str) -> CorpusDoc:
        if doc_id not in docs:
            raise HTTPException(404, f"unknown document {doc_id!r}")
        return docs[doc_id]

    def get_session(session_id: str) -> Session:
        if session_id not in sessions:
            raise HTTPException(404, f"unknown session {session_id!r}")
        return sessions[session_id]

    def persist(session: Session, answer: dict) -> None:
        # journal line first, then the .ddann system of record (atomic write)
        with open(store_dir / f"{session.session_id}.journal", "a", encoding="utf-8") as fh:
            fh.write(json.dumps(answer, sort_keys=True) + "\n")
            fh.flush()
        write_ddann(session.annotation_set(), store_dir / f"{session.session_id}.ddann")

    @app.get("/api/texts")
    def list_texts():
        return {"texts": sorted(docs)}

    @app.get("/api/texts/{doc_id}")
    def get_text(doc_id: str):
        return get_doc(doc_id).payload()

    @app.post("/api/sessions")
    def create_session(body: SessionCreate):
        scheme = require_scheme(body.scheme)
        if scheme.scheme_id != "EXP2":
            raise HTTPException(422, "only the EXP2 decision-script scheme is served")
        corpus_doc = get_doc(body.doc)
        session = Session(
            session_id=uuid.uuid4().hex[:12],
            coder_id=body.coder,
            doc_id=body.doc,
            scheme_id=scheme.scheme_id,
        )
        sessions[session.session_id] = session
        meta = {
            "meta": {
                "session": session.session_id,
                "coder": session.coder_id,
                "doc": session.doc_id,
                "scheme": session.scheme_id,
            }
        }
        with open(store_dir / f"{session.session_id}.journal", "a", encoding="utf-8") as fh:
            fh.write(json.dumps(meta, sort_keys=True) + "\n")
        return session.info(corpus_doc.definites)

    @app.get("/api/sessions/{session_id}")
    def session_info(session_id: str):
        session = get_session(session_id)
        return session.info(get_doc(session.doc_id).definites)

    @app.get("/api/sessions/{session_id}/next")
    def next_dd(session_id: str):
        session = get_session(session_id)
        corpus_doc = get_doc(session.doc_id)
        cursor = session.cursor(corpus_doc.definites)
        if cursor is None:
            raise HTTPException(409, "session complete")
        dd = next(d for d in corpus_doc.definites if d.key == cursor)
        display = corpus_doc.display_keys()
        return {
            "dd": {
                "key": _format_key(dd.key),
                "display_key": display[dd.key],
                "surface": dd.surface,
                "sentence": dd.key[0],
            },
            "context": corpus_doc.payload(),
            "question": {"number": 1, "text": SCRIPT_QUESTIONS[1]},
            "progress": {"done": len(session.records), "total": len(corpus_doc.definites)},
        }

    @app.post("/api/sessions/{session_id}/answers")
    def post_answer(session_id: str, body: AnswerBody):
        session = get_session(session_id)
        corpus_doc = get_doc(session.doc_id)
        with session.lock:
            key = _parse_key(body.key)
            raw = body.model_dump()
            if session.last_answer == raw:
                return session.info(corpus_doc.definites)  # idempotent retry
            cursor = session.cursor(corpus_doc.definites)
            if cursor is None:
                raise HTTPException(409, "session complete")
            if key != cursor:
                raise HTTPException(409, f"stale key {body.key}; cursor is {_format_key(cursor)}")
            antecedent = _parse_key(body.antecedent) if body.antecedent else None
            try:
                state = run_script(body.answer_path, link=antecedent, comment=body.comment)
            except (ScriptMissingLink, ScriptMissingComment, ValueError) as exc:
                raise HTTPException(422, str(exc)) from exc
            if not state.terminal or state.label != body.label:
                raise HTTPException(
                    422,
                    f"label {body.label!r} inconsistent with script path {body.answer_path}",
                )
            if antecedent is not None and antecedent >= key:
                raise HTTPException(422, "antecedent must precede the description")
            dd = next(d for d in corpus_doc.definites if d.key == key)
            session.records[key] = AnnotationRecord(
                key=key,
                label=state.label,
                antecedent=state.link,
                comment=state.comment,
                surface=dd.surface,
            )
            session.last_answer = raw
            persist(session, raw | {"session": session.session_id, "surface": dd.surface})
            return session.info(corpus_doc.definites)

    @app.get("/api/sessions/{session_id}/export")
    def export(session_id: str):
        session = get_session(session_id)
        return PlainTextResponse(dumps_ddann(session.annotation_set()))

    if static_dir is not None:
        from fastapi.staticfiles import StaticFiles

        app.mount("/", StaticFiles(directory=static_dir, html=True), name="ui")

    return app


def _replay_journal(journal_path: Path) -> Session | None:
    """Rebuild a session from its raw-answer journal."""
    session: Session | None = None
    for line in journal_path.read_text(encoding="utf-8").splitlines():
        if not line.strip():
            continue
        entry = json.loads(line)
        if "meta" in entry:
            meta = entry["meta"]
            session = Session(
                session_id=meta["session"],
                coder_id=meta["coder"],
                doc_id=meta["doc"],
                scheme_id=meta["scheme"],
            )
            continue
        if session is None:
            return None
        key = _parse_key(entry["key"])
        antecedent = _parse_key(entry["antecedent"]) if entry.get("antecedent") else None
        state = run_script(entry["answer_path"], link=antecedent, comment=entry.get("comment"))
        session.records[key] = AnnotationRecord(
            key=key,
            label=state.label,
            antecedent=state.link,
            comment=state.comment,
            surface=entry.get("surface", ""),
        )
        session.last_answer = {
            k: entry[k] for k in ("key", "answer_path", "label", "antecedent", "comment")
            if k in entry
        }
    return session
