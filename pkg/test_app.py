"""
Tests for the Flask API and the Celery verification tasks
"""
import json
import os
from datetime import datetime, timedelta
from unittest.mock import Mock

import pytest

# Set up test environment before the app module reads it
os.environ["DATABASE_URL"] = "sqlite:///:memory:"
os.environ["LOG_TO_FILE"] = "false"
os.environ["SECRET_KEY"] = "test-secret-key"

from app import create_app
from models import JobStatus, VerificationJob, db
import tasks

DATA_DIR = os.path.join(os.path.dirname(os.path.abspath(__file__)), "data")


@pytest.fixture
def app():
    """App bound to a fresh in-memory database (picked up by pytest-flask's client)"""
    return create_app(
        {
            "TESTING": True,
            "SQLALCHEMY_DATABASE_URI": "sqlite:///:memory:",
            "MAX_SAMPLES": 50,
        }
    )


@pytest.fixture
def queued(mocker):
    """Replace the Celery task so submissions never touch a broker"""
    task = mocker.patch("app.run_verification_check")
    task.delay.return_value = Mock(id="task-123")
    return task


def make_job(check_kind, parameters, **fields):
    job = VerificationJob(check_kind=check_kind, parameters=parameters, **fields)
    db.session.add(job)
    db.session.commit()
    return job


class TestInlineEndpoints:
    def test_health(self, client):
        response = client.get("/api/health")
        assert response.status_code == 200
        assert response.get_json()["status"] == "ok"

    def test_rootsys(self, client):
        response = client.get("/api/rootsys?type=E&rank=8")
        assert response.status_code == 200
        assert response.get_json()["root_count"] == 240

    @pytest.mark.parametrize("query", ["", "?type=E&rank=abc", "?type=Q&rank=2"])
    def test_rootsys_bad_input(self, client, query):
        response = client.get(f"/api/rootsys{query}")
        assert response.status_code == 400
        assert "error" in response.get_json()

    def test_leaf_dim_from_example(self, client):
        response = client.post("/api/leaf-dim", json={"example": "calogero", "n": 4})
        assert response.status_code == 200
        data = response.get_json()
        assert data["dimension"] == 8
        assert data["pass"] is True

    def test_leaf_dim_from_document(self, client):
        with open(os.path.join(DATA_DIR, "quadric_n3.json"), encoding="utf-8") as f:
            document = json.load(f)
        response = client.post("/api/leaf-dim", json=document)
        assert response.status_code == 200
        assert response.get_json()["dimension"] == 8

    def test_hecke_dim(self, client):
        response = client.post("/api/hecke-dim", json={"example": "quadric", "n": 3})
        assert response.status_code == 200
        assert response.get_json()["dimension"] == 8

    @pytest.mark.parametrize(
        "body",
        [{"example": "cubic"}, {"example": "calogero", "n": "four"}, {"schema": 1, "tau": [0, 1]}],
    )
    def test_leaf_dim_bad_input(self, client, body):
        assert client.post("/api/leaf-dim", json=body).status_code == 400

    def test_body_must_be_json(self, client):
        response = client.post("/api/leaf-dim", data="not json", content_type="text/plain")
        assert response.status_code == 400

    def test_parabolics(self, client):
        assert client.get("/api/parabolics?type=E7").get_json()["compact_orbit_roots"] == [7]
        rows = client.get("/api/parabolics?max_rank=3").get_json()["rows"]
        assert {row["type"] for row in rows} >= {"A1", "B3", "C3", "D3", "G2"}
        assert client.get("/api/parabolics").status_code == 400

    def test_genus(self, client):
        data = client.get("/api/genus?example=quadric&n=3").get_json()
        assert data["fiber_dimension"] == 4
        assert data["leaf_dimension"] == 8

    def test_toric_hilbert(self, client):
        data = client.get("/api/toric/hilbert?k=1").get_json()
        assert data["relation_text"] == "x^2 = w*z"

    def test_divisor_equiv(self, client):
        balanced = client.post("/api/divisor-equiv", json={"example": "calogero", "n": 4})
        assert balanced.get_json()["pass"] is True
        shifted = client.post("/api/divisor-equiv", json={"example": "calogero", "n": 4, "shift": ["1/7", "0"]})
        assert shifted.status_code == 200
        assert shifted.get_json()["linearly_equivalent"] is False

    @pytest.mark.parametrize("shift", [["x", "0"], ["1/7"], 3])
    def test_divisor_equiv_bad_shift(self, client, shift):
        response = client.post("/api/divisor-equiv", json={"example": "calogero", "n": 4, "shift": shift})
        assert response.status_code == 400
        assert "shift" in response.get_json()["error"]

    def test_unknown_route(self, client):
        response = client.get("/api/nothing-here")
        assert response.status_code == 404
        assert "error" in response.get_json()


class TestCheckSubmission:
    def test_submit_queues_a_job(self, client, queued):
        response = client.post("/api/checks", json={"check": "cdybe", "algebra": "sl3", "tau": "0.3,0.8"})
        assert response.status_code == 202
        data = response.get_json()
        assert data["task_id"] == "task-123"
        queued.delay.assert_called_once_with(data["job_id"])

        job = db.session.get(VerificationJob, data["job_id"])
        assert job.status == JobStatus.PENDING.value
        assert job.parameters == {
            "tau": [0.3, 0.8],
            "seed": 0,
            "algebra": "sl3",
            "samples": 20,
            "tol": 1e-6,
        }

    @pytest.mark.parametrize(
        "body",
        [
            {"check": "hodge", "tau": [0, 1]},
            {"check": "ellfun"},
            {"check": "ellfun", "tau": [0, 1], "samples": 500},
            {"check": "cdybe", "tau": [0, 1], "algebra": "so5"},
            {"check": "projection", "tau": [0, 1], "radius": -1},
        ],
    )
    def test_rejected_submissions(self, client, queued, body):
        response = client.post("/api/checks", json=body)
        assert response.status_code == 400
        queued.delay.assert_not_called()

    def test_queue_unavailable(self, client, queued):
        queued.delay.side_effect = ConnectionError("broker down")
        response = client.post("/api/checks", json={"check": "ellfun", "tau": [0, 1]})
        assert response.status_code == 503
        job_id = response.get_json()["job_id"]
        db.session.expire_all()
        assert db.session.get(VerificationJob, job_id).status == JobStatus.FAILED.value

    def test_get_and_list(self, client, queued):
        job_id = client.post("/api/checks", json={"check": "ellfun", "tau": [0, 1]}).get_json()["job_id"]
        data = client.get(f"/api/checks/{job_id}").get_json()
        assert data["check_kind"] == "ellfun"
        assert data["status"] == "pending"

        listing = client.get("/api/checks?status=pending").get_json()
        assert listing["total"] == 1
        assert client.get("/api/checks?status=completed").get_json()["total"] == 0
        assert client.get("/api/checks/missing").status_code == 404


class TestVerificationTasks:
    def test_run_ellfun_job(self, app, mocker):
        mocker.patch("app.app", app)
        job_id = make_job("ellfun", {"tau": [0.0, 1.0], "seed": 0, "samples": 5, "tol": 1e-10}).id

        result = tasks.run_verification_check.run(job_id)

        assert result == {"job_id": job_id, "pass": True}
        db.session.expire_all()
        stored = db.session.get(VerificationJob, job_id)
        assert stored.status == JobStatus.COMPLETED.value
        assert stored.progress == 100
        assert stored.passed is True
        assert stored.result_data["command"] == "ellfun check"
        assert stored.processing_time is not None

    def test_failed_job_is_recorded(self, app, mocker):
        mocker.patch("app.app", app)
        job_id = make_job("projection", {"tau": [0.0, 1.0], "seed": 0}).id

        with pytest.raises(KeyError):
            tasks.run_verification_check.run(job_id)

        db.session.expire_all()
        stored = db.session.get(VerificationJob, job_id)
        assert stored.status == JobStatus.FAILED.value
        assert "projection sweep failed" in stored.error_message

    def test_missing_job(self, app, mocker):
        mocker.patch("app.app", app)
        assert tasks.run_verification_check.run("no-such-job") == {"error": "Job not found"}

    def test_purge_old_jobs(self, app, mocker):
        mocker.patch("app.app", app)
        now = datetime.utcnow()
        old = make_job("ellfun", {}, status=JobStatus.COMPLETED.value, completed_at=now - timedelta(hours=100)).id
        recent = make_job("ellfun", {}, status=JobStatus.FAILED.value, completed_at=now - timedelta(hours=1)).id
        pending = make_job("ellfun", {}).id

        assert tasks.purge_old_jobs.run(retention_hours=72) == {"purged_jobs": 1}

        db.session.expire_all()
        assert db.session.get(VerificationJob, old) is None
        assert db.session.get(VerificationJob, recent) is not None
        assert db.session.get(VerificationJob, pending) is not None

    def test_beat_schedule(self):
        assert tasks.celery.conf.beat_schedule["purge-old-jobs"]["task"] == "purge_old_jobs"
