"""
Flask JSON API over the sklyanin computations.

Cheap computations answer inline; sampled verification sweeps are queued
as Celery tasks and tracked as VerificationJob rows.
"""
import logging
import os
import time

from flask import Flask, jsonify, request
from flask_cors import CORS
from werkzeug.exceptions import HTTPException

from catalog import EXAMPLE_TAGS, build_example
from config import DATABASE_URL, MAX_SAMPLES, SECRET_KEY, configure_logging
from dataformat import parse_singularity_data, parse_tau
from errors import InputError, NumericalError
from models import JobStatus, VerificationJob, db
from reports import (
    divisor_report,
    genus_report,
    hecke_report,
    leaf_report,
    parabolics_report,
    parse_cartan,
    rootsys_report,
    toric_hilbert_report,
)
from tasks import normalize_check_parameters, run_verification_check

configure_logging()
logger = logging.getLogger(__name__)


def create_app(test_config=None):
    """Build the Flask app; test_config overrides the environment settings."""
    app = Flask(__name__)
    app.config["SECRET_KEY"] = SECRET_KEY
    app.config["SQLALCHEMY_DATABASE_URI"] = DATABASE_URL
    app.config["SQLALCHEMY_TRACK_MODIFICATIONS"] = False
    app.config["MAX_SAMPLES"] = MAX_SAMPLES
    if test_config:
        app.config.update(test_config)

    CORS(app)
    db.init_app(app)
    register_error_handlers(app)
    register_routes(app)

    with app.app_context():
        db.create_all()
        logger.info("Database tables created/verified")
    return app


def register_error_handlers(app):
    @app.errorhandler(InputError)
    def handle_input_error(e):
        logger.warning(f"Rejected request to {request.path}: {str(e)}")
        return jsonify({"error": str(e)}), 400

    @app.errorhandler(NumericalError)
    def handle_numerical_error(e):
        logger.error(f"Numerical failure on {request.path}: {str(e)}")
        return jsonify({"error": str(e)}), 422

    @app.errorhandler(Exception)
    def handle_unexpected(e):
        if isinstance(e, HTTPException):
            return jsonify({"error": e.description}), e.code
        logger.error(f"Error handling {request.path}: {str(e)}", exc_info=True)
        return jsonify({"error": f"Request failed: {str(e)}"}), 500


def _json_body():
    body = request.get_json(silent=True)
    if not isinstance(body, dict):
        raise InputError("Request body must be a JSON object")
    return body


def _int_arg(name, default=None, required=False):
    raw = request.args.get(name)
    if raw is None:
        if required:
            raise InputError(f"Query parameter '{name}' is required")
        return default
    try:
        return int(raw)
    except ValueError as e:
        raise InputError(f"Query parameter '{name}' must be an integer") from e


def _int_field(body, name, default):
    try:
        return int(body.get(name, default))
    except (TypeError, ValueError) as e:
        raise InputError(f"'{name}' must be an integer") from e


def _singularity_data(body):
    """A schema-1 document, or {"example": tag, "n": .., "k": .., "tau": ..}"""
    if "example" in body:
        tag = body["example"]
        if tag not in EXAMPLE_TAGS:
            raise InputError(f"Unknown example {tag!r}; expected one of: {', '.join(EXAMPLE_TAGS)}")
        tau = parse_tau(body.get("tau", [0.0, 1.0]))
        return build_example(tag, _int_field(body, "n", 3), k=_int_field(body, "k", 1), tau=tau)
    return parse_singularity_data(body)


def register_routes(app):
    @app.route("/api/health", methods=["GET"])
    def health():
        return jsonify({"status": "ok", "message": "Sklyanin API is running"})

    @app.route("/api/rootsys", methods=["GET"])
    def rootsys_info():
        family = request.args.get("type")
        if not family:
            raise InputError("Query parameter 'type' is required")
        return jsonify(rootsys_report(parse_cartan(family, _int_arg("rank"))))

    @app.route("/api/leaf-dim", methods=["POST"])
    def leaf_dim():
        return jsonify(leaf_report(_singularity_data(_json_body())))

    @app.route("/api/hecke-dim", methods=["POST"])
    def hecke_dim():
        return jsonify(hecke_report(_singularity_data(_json_body())))

    @app.route("/api/parabolics", methods=["GET"])
    def parabolics():
        family = request.args.get("type")
        if family:
            return jsonify(parabolics_report(cartan_type=parse_cartan(family, _int_arg("rank"))))
        return jsonify(parabolics_report(max_rank=_int_arg("max_rank", required=True)))

    @app.route("/api/genus", methods=["GET"])
    def genus():
        example = request.args.get("example")
        if not example:
            raise InputError("Query parameter 'example' is required")
        return jsonify(genus_report(example, _int_arg("n", required=True), _int_arg("k", default=1)))

    @app.route("/api/toric/hilbert", methods=["GET"])
    def toric_hilbert():
        return jsonify(toric_hilbert_report(_int_arg("k", required=True)))

    @app.route("/api/divisor-equiv", methods=["POST"])
    def divisor_equiv():
        body = _json_body()
        return jsonify(
            divisor_report(
                parse_tau(body.get("tau", [0.0, 1.0])),
                lhs=body.get("lhs"),
                rhs=body.get("rhs"),
                example=body.get("example"),
                n=_int_field(body, "n", 3),
                shift=body.get("shift"),
            )
        )

    @app.route("/api/checks", methods=["POST"])
    def submit_check():
        """Queue a cdybe / projection / ellfun sweep"""
        request_start = time.perf_counter()
        body = _json_body()
        check_kind, params = normalize_check_parameters(
            body.get("check"), body, max_samples=app.config["MAX_SAMPLES"]
        )

        job = VerificationJob(check_kind=check_kind, parameters=params)
        db.session.add(job)
        db.session.commit()

        try:
            task = run_verification_check.delay(job.id)
        except Exception as e:
            logger.error(f"Could not queue job {job.id}: {str(e)}", exc_info=True)
            job.update_status(JobStatus.FAILED.value, progress=0, error_message=f"Queueing failed: {str(e)}")
            db.session.commit()
            return jsonify({"error": "Task queue unavailable", "job_id": job.id}), 503

        job.celery_task_id = task.id
        db.session.commit()

        logger.info(f"Job {job.id} submitted ({check_kind}, task: {task.id})")
        logger.info(f"Request completed in {time.perf_counter() - request_start:.2f}s")
        return (
            jsonify(
                {
                    "success": True,
                    "job_id": job.id,
                    "task_id": task.id,
                    "status": JobStatus.PENDING.value,
                    "message": f"Check submitted. Use /api/checks/{job.id} to follow it.",
                }
            ),
            202,
        )

    @app.route("/api/checks/<job_id>", methods=["GET"])
    def get_check(job_id):
        job = db.session.get(VerificationJob, job_id)
        if not job:
            return jsonify({"error": "Job not found"}), 404
        return jsonify(job.to_dict())

    @app.route("/api/checks", methods=["GET"])
    def list_checks():
        page = request.args.get("page", 1, type=int)
        per_page = request.args.get("per_page", 20, type=int)
        status_filter = request.args.get("status")

        query = VerificationJob.query
        if status_filter:
            query = query.filter_by(status=status_filter)
        jobs = query.order_by(VerificationJob.created_at.desc()).paginate(
            page=page, per_page=per_page, error_out=False
        )
        return jsonify(
            {
                "jobs": [job.to_dict() for job in jobs.items],
                "total": jobs.total,
                "page": jobs.page,
                "per_page": jobs.per_page,
                "pages": jobs.pages,
            }
        )


app = create_app()


if __name__ == "__main__":
    port = int(os.environ.get("PORT", 5001))
    app.run(host="0.0.0.0", port=port, debug=False)
