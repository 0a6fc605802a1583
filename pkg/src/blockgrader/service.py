"""HTTP facade: problem bank views, grading, and an append-only attempt log.

Bank views expose only what a student may see (tag, display text, and a
problem-wide indentation hint); dependency structure, declared indents,
and final/distractor flags stay server-side. Attempts are appended to
one JSON-lines file per problem and re-read from disk on every request,
so the log survives restarts.
"""

from __future__ import annotations

import json
import random
import threading
import time
import uuid
from pathlib import Path

from fastapi import FastAPI, HTTPException
from fastapi.middleware.cors import CORSMiddleware
from pydantic import BaseModel, Field

from .errors import BlockGraderError, InvalidMultigraphError, UnknownTagError
from .grading import grade
from .model import ProblemMultigraph, Submission
from .parsing import load_problem

__all__ = ["create_app", "run_service"]

DEFAULT_PORT = 8080


class PlacedBlock(BaseModel):
    tag: str
    indent: int = 0


class GradeRequest(BaseModel):
    placed: list[PlacedBlock] = Field(default_factory=list)


class ProblemStore:
    """Reads problem files from a flat directory; id = filename stem."""

    def __init__(self, root: Path):
        self.root = root

    def _paths(self) -> dict[str, Path]:
        paths: dict[str, Path] = {}
        for path in sorted(p for p in self.root.iterdir()
                           if p.is_file() and not p.name.startswith(".")):
            if path.stem in paths:
                raise HTTPException(
                    status_code=500,
                    detail=f"duplicate problem id {path.stem!r} "
                           f"({paths[path.stem].name} and {path.name})",
                )
            paths[path.stem] = path
        return paths

    def ids(self) -> list[str]:
        return sorted(self._paths())

    def load(self, problem_id: str) -> ProblemMultigraph:
        path = self._paths().get(problem_id)
        if path is None:
            raise HTTPException(status_code=404, detail=f"no problem {problem_id!r}")
        return self._parse(path)

    def load_all(self) -> list[tuple[str, ProblemMultigraph]]:
        return [(pid, self._parse(path)) for pid, path in sorted(self._paths().items())]

    @staticmethod
    def _parse(path: Path) -> ProblemMultigraph:
        try:
            return load_problem(path.read_text(encoding="utf-8"))
        except (OSError, BlockGraderError) as exc:
            raise HTTPException(status_code=500, detail=f"{path.name}: {exc}") from exc


class AttemptLog:
    """Append-only JSON-lines log, one file per problem, single writer."""

    def __init__(self, root: Path):
        self.root = root
        self._lock = threading.Lock()

    def _path(self, problem_id: str) -> Path:
        return self.root / f"{problem_id}.attempts.jsonl"

    def append(self, record: dict) -> None:
        with self._lock:
            self.root.mkdir(parents=True, exist_ok=True)
            with self._path(record["problem_id"]).open("a", encoding="utf-8") as fh:
                fh.write(json.dumps(record) + "\n")
                fh.flush()

    def read(self, problem_id: str) -> list[dict]:
        path = self._path(problem_id)
        if not path.exists():
            return []
        return [json.loads(line) for line in path.read_text(encoding="utf-8").splitlines() if line]


def _title_of(problem_id: str) -> str:
    return problem_id.replace("_", " ").replace("-", " ")


def create_app(
    problems_dir: Path,
    data_dir: Path,
    *,
    seed: int | None = None,
    cors_origins: tuple[str, ...] = ("*",),
) -> FastAPI:
    """Build the service over a problems directory and a data directory."""
    store = ProblemStore(Path(problems_dir))
    log = AttemptLog(Path(data_dir))
    seed_rng = random.Random(seed)

    app = FastAPI(title="blockgrader")
    app.add_middleware(
        CORSMiddleware,
        allow_origins=list(cors_origins),
        allow_methods=["*"],
        allow_headers=["*"],
    )

    @app.get("/api/problems")
    def list_problems() -> list[dict]:
        entries = []
        for problem_id, _problem in store.load_all():
            entries.append({"problem_id": problem_id, "title": _title_of(problem_id)})
        return entries

    @app.get("/api/problems/{problem_id}")
    def bank_view(problem_id: str, seed: int | None = None) -> dict:
        problem = store.load(problem_id)
        shuffle_seed = seed if seed is not None else seed_rng.getrandbits(31)
        blocks = list(problem.blocks.values())
        random.Random(shuffle_seed).shuffle(blocks)
        max_indent = max(b.indent for b in problem.blocks.values())
        return {
            "problem_id": problem_id,
            "shuffle_seed": shuffle_seed,
            "blocks": [
                {"tag": b.tag, "text": b.text, "max_indent_hint": max_indent}
                for b in blocks
            ],
        }

    @app.post("/api/problems/{problem_id}/grade")
    def grade_submission(problem_id: str, request: GradeRequest) -> dict:
        problem = store.load(problem_id)
        try:
            submission = Submission.of((p.tag, p.indent) for p in request.placed)
            report = grade(problem, submission)
        except (UnknownTagError, InvalidMultigraphError) as exc:
            raise HTTPException(status_code=422, detail=str(exc)) from exc
        except BlockGraderError as exc:
            raise HTTPException(status_code=500, detail=str(exc)) from exc
        log.append({
            "attempt_id": uuid.uuid4().hex,
            "problem_id": problem_id,
            "timestamp": int(time.time()),
            "submission": [{"tag": t, "indent": i} for t, i in submission.placed],
            "score": report.score,
            "exact": report.exact,
            "first_error_index": report.first_error_index,
        })
        return report.to_dict()

    @app.get("/api/problems/{problem_id}/attempts")
    def attempts(problem_id: str) -> list[dict]:
        store.load(problem_id)  # 404 for unknown ids
        return log.read(problem_id)

    return app


def run_service(
    problems_dir: Path,
    data_dir: Path,
    port: int = DEFAULT_PORT,
    seed: int | None = None,
) -> None:
    import uvicorn

    app = create_app(problems_dir, data_dir, seed=seed)
    uvicorn.run(app, host="0.0.0.0", port=port)
