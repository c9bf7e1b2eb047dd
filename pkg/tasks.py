"""
Celery tasks for background verification sweeps
"""
import logging
import time
from datetime import datetime, timedelta

from config import CHECK_TOLERANCE, CONTOUR_RADIUS, JOB_RETENTION_HOURS, MAX_SAMPLES
from dataformat import parse_tau
from errors import InputError
from models import CheckKind, JobStatus, VerificationJob, db
from reports import cdybe_report, ellfun_report, projection_report
from rmatrix import parse_algebra
from worker import make_celery

logger = logging.getLogger(__name__)

celery = make_celery("sklyanin")

_DEFAULT_SAMPLES = {
    CheckKind.CDYBE.value: 20,
    CheckKind.ELLFUN.value: 100,
}


def _number(payload, key, kind, default):
    value = payload.get(key, default)
    try:
        return kind(value)
    except (TypeError, ValueError) as e:
        raise InputError(f"'{key}' must be a {kind.__name__}, got {value!r}") from e


def normalize_check_parameters(check_kind, payload, max_samples=MAX_SAMPLES):
    """Validate a submitted sweep and return the JSON-safe parameters stored on the job.

    Raises:
        InputError: unknown check kind, bad algebra or tau, or too many samples.
    """
    try:
        kind = CheckKind(check_kind)
    except ValueError as e:
        choices = ", ".join(k.value for k in CheckKind)
        raise InputError(f"Unknown check {check_kind!r}; expected one of: {choices}") from e

    payload = payload or {}
    if "tau" not in payload:
        raise InputError("'tau' is required")
    tau = parse_tau(payload["tau"])
    params = {"tau": [tau.real, tau.imag], "seed": _number(payload, "seed", int, 0)}

    if kind in (CheckKind.CDYBE, CheckKind.PROJECTION):
        algebra = str(payload.get("algebra", "sl2"))
        parse_algebra(algebra)
        params["algebra"] = algebra

    if kind == CheckKind.PROJECTION:
        params["radius"] = _number(payload, "radius", float, CONTOUR_RADIUS)
        if params["radius"] <= 0:
            raise InputError("'radius' must be positive")
    else:
        samples = _number(payload, "samples", int, _DEFAULT_SAMPLES[kind.value])
        if not 1 <= samples <= max_samples:
            raise InputError(f"'samples' must be between 1 and {max_samples}, got {samples}")
        params["samples"] = samples
        default_tol = CHECK_TOLERANCE if kind == CheckKind.CDYBE else 1e-10
        params["tol"] = _number(payload, "tol", float, default_tol)
    return kind.value, params


def run_check(check_kind, params):
    """Run one sweep synchronously from stored job parameters"""
    tau = parse_tau(params["tau"])
    if check_kind == CheckKind.CDYBE.value:
        return cdybe_report(params["algebra"], tau, params["samples"], params["seed"], params["tol"])
    if check_kind == CheckKind.PROJECTION.value:
        return projection_report(params["algebra"], tau, params["seed"], params["radius"])
    if check_kind == CheckKind.ELLFUN.value:
        return ellfun_report(tau, params["samples"], params["seed"], params["tol"])
    raise InputError(f"Unknown check {check_kind!r}")


@celery.task(bind=True, name="run_verification_check")
def run_verification_check(self, job_id):
    """
    Run a queued verification sweep and store its report on the job

    Args:
        job_id (str): VerificationJob id
    """
    from app import app

    with app.app_context():
        job = db.session.get(VerificationJob, job_id)
        if not job:
            logger.error(f"Job {job_id} not found")
            return {"error": "Job not found"}

        try:
            job.update_status(JobStatus.PROCESSING.value, progress=10)
            if self.request.id:
                job.celery_task_id = self.request.id
            db.session.commit()
            logger.info(f"Starting {job.check_kind} sweep for job {job_id} with {job.parameters}")

            start = time.perf_counter()
            report = run_check(job.check_kind, job.parameters or {})
            elapsed = time.perf_counter() - start

            job.result_data = report
            job.passed = bool(report.get("pass"))
            job.update_status(JobStatus.COMPLETED.value, progress=100)
            db.session.commit()

            logger.info(f"Job {job_id} finished in {elapsed:.2f}s (pass={job.passed})")
            return {"job_id": job_id, "pass": job.passed}

        except Exception as e:
            error_msg = f"{job.check_kind} sweep failed: {str(e)}"
            logger.error(error_msg, exc_info=True)
            job.update_status(JobStatus.FAILED.value, progress=0, error_message=error_msg)
            db.session.commit()
            raise


@celery.task(name="purge_old_jobs")
def purge_old_jobs(retention_hours=JOB_RETENTION_HOURS):
    """
    Periodic task removing finished sweeps older than the retention window
    """
    from app import app

    with app.app_context():
        cutoff_time = datetime.utcnow() - timedelta(hours=retention_hours)
        old_jobs = VerificationJob.query.filter(
            VerificationJob.completed_at < cutoff_time,
            VerificationJob.status.in_(
                [JobStatus.COMPLETED.value, JobStatus.FAILED.value, JobStatus.CANCELLED.value]
            ),
        ).all()

        for job in old_jobs:
            db.session.delete(job)
        db.session.commit()

        logger.info(f"Purge completed. Removed {len(old_jobs)} old jobs")
        return {"purged_jobs": len(old_jobs)}


celery.conf.beat_schedule = {
    "purge-old-jobs": {
        "task": "purge_old_jobs",
        "schedule": 3600.0,  # Run every hour
    },
}
