import json

import pytest
from fastapi.testclient import TestClient

from blockgrader.cli import main
from blockgrader.service import create_app
from conftest import SUM_PROBLEM


@pytest.fixture
def service_dirs(tmp_path):
    problems = tmp_path / "problems"
    problems.mkdir()
    (problems / "sum.html").write_text(SUM_PROBLEM.read_text(encoding="utf-8"))
    (problems / "chain.html").write_text(
        '<pl-answer tag="A" depends="">a</pl-answer>\n'
        '<pl-answer tag="B" depends="A" final="true">b</pl-answer>\n'
    )
    data = tmp_path / "data"
    return problems, data


@pytest.fixture
def client(service_dirs):
    problems, data = service_dirs
    return TestClient(create_app(problems, data))


class TestProblemList:
    def test_lists_problems_sorted(self, client):
        response = client.get("/api/problems")
        assert response.status_code == 200
        assert response.json() == [
            {"problem_id": "chain", "title": "chain"},
            {"problem_id": "sum", "title": "sum"},
        ]

    def test_empty_directory(self, tmp_path):
        problems = tmp_path / "problems"
        problems.mkdir()
        client = TestClient(create_app(problems, tmp_path / "data"))
        assert client.get("/api/problems").json() == []

    def test_broken_file_is_a_server_error(self, service_dirs):
        problems, data = service_dirs
        (problems / "broken.html").write_text('<pl-answer tag="A">unclosed')
        client = TestClient(create_app(problems, data))
        response = client.get("/api/problems")
        assert response.status_code == 500
        assert "broken.html" in response.json()["detail"]


class TestBankView:
    def test_same_seed_same_view(self, client):
        first = client.get("/api/problems/sum", params={"seed": 7}).json()
        second = client.get("/api/problems/sum", params={"seed": 7}).json()
        assert first == second
        assert first["shuffle_seed"] == 7

    def test_unknown_problem(self, client):
        assert client.get("/api/problems/nope").status_code == 404

    def test_no_solution_information_leaks(self, client):
        view = client.get("/api/problems/sum").json()
        assert len(view["blocks"]) == 6
        for block in view["blocks"]:
            assert set(block) == {"tag", "text", "max_indent_hint"}
        assert {b["tag"] for b in view["blocks"]} == set("ABCDEF")

    def test_bank_includes_distractors_without_marking_them(self, tmp_path):
        problems = tmp_path / "problems"
        problems.mkdir()
        (problems / "noisy.html").write_text(
            '<pl-answer tag="A" depends="">a</pl-answer>\n'
            '<pl-answer tag="F" depends="A" final="true">f</pl-answer>\n'
            '<pl-answer tag="X" correct="false">red herring</pl-answer>\n'
        )
        client = TestClient(create_app(problems, tmp_path / "data"))
        view = client.get("/api/problems/noisy").json()
        assert {b["tag"] for b in view["blocks"]} == {"A", "F", "X"}
        for block in view["blocks"]:
            assert set(block) == {"tag", "text", "max_indent_hint"}

    def test_random_seed_is_returned_and_reusable(self, client):
        view = client.get("/api/problems/sum").json()
        again = client.get(
            "/api/problems/sum", params={"seed": view["shuffle_seed"]}
        ).json()
        assert again == view

    def test_seeded_service_is_deterministic(self, service_dirs):
        problems, data = service_dirs
        views = []
        for _ in range(2):
            client = TestClient(create_app(problems, data, seed=99))
            views.append(client.get("/api/problems/sum").json())
        assert views[0] == views[1]


GRADE_URL = "/api/problems/sum/grade"


class TestGrading:
    def test_exact_submission(self, client):
        response = client.post(GRADE_URL, json={"placed": [
            {"tag": "A", "indent": 0},
            {"tag": "E", "indent": 1},
            {"tag": "F", "indent": 1},
        ]})
        assert response.status_code == 200
        body = response.json()
        assert body["score"] == 1.0
        assert body["exact"] is True

    def test_all_blocks_submission(self, client):
        placed = [{"tag": t, "indent": 0 if t == "A" else 1} for t in "ABCDEF"]
        body = client.post(GRADE_URL, json={"placed": placed}).json()
        assert body["score"] == 0.8
        assert body["edit_distance"] == 1

    def test_unknown_tag_rejected(self, client):
        response = client.post(GRADE_URL, json={"placed": [{"tag": "Z"}]})
        assert response.status_code == 422

    def test_malformed_body_rejected(self, client):
        response = client.post(GRADE_URL, json={"placed": "nope"})
        assert response.status_code == 422

    def test_unknown_problem(self, client):
        response = client.post("/api/problems/nope/grade", json={"placed": []})
        assert response.status_code == 404

    def test_matches_cli_grade_output(self, client, tmp_path, capsys):
        placed = [("A", 0), ("B", 1), ("C", 1), ("D", 1), ("E", 1), ("F", 1)]
        submission = tmp_path / "submission.json"
        submission.write_text(json.dumps({
            "problem_id": "sum",
            "placed": [{"tag": t, "indent": i} for t, i in placed],
        }))
        main(["grade", str(SUM_PROBLEM), "--submission", str(submission), "--json"])
        cli_report = json.loads(capsys.readouterr().out)
        service_report = client.post(GRADE_URL, json={
            "placed": [{"tag": t, "indent": i} for t, i in placed],
        }).json()
        assert service_report == cli_report


class TestAttemptLog:
    def test_attempts_are_recorded(self, client):
        client.post(GRADE_URL, json={"placed": [{"tag": "A", "indent": 0}]})
        client.post(GRADE_URL, json={"placed": [
            {"tag": "A", "indent": 0},
            {"tag": "E", "indent": 1},
            {"tag": "F", "indent": 1},
        ]})
        attempts = client.get("/api/problems/sum/attempts").json()
        assert len(attempts) == 2
        assert attempts[1]["exact"] is True
        assert attempts[0]["problem_id"] == "sum"
        assert len({a["attempt_id"] for a in attempts}) == 2

    def test_log_survives_restart(self, service_dirs):
        problems, data = service_dirs
        first = TestClient(create_app(problems, data))
        first.post(GRADE_URL, json={"placed": []})
        reborn = TestClient(create_app(problems, data))
        attempts = reborn.get("/api/problems/sum/attempts").json()
        assert len(attempts) == 1
        assert attempts[0]["score"] == 0.0

    def test_unknown_problem_attempts(self, client):
        assert client.get("/api/problems/nope/attempts").status_code == 404
