"""
Celery worker configuration for the sklyanin verification service
"""
from celery import Celery

from config import (
    CELERY_BROKER_URL,
    CELERY_RESULT_BACKEND,
    CELERY_TASK_TIMEOUT,
    CELERY_WORKER_CONCURRENCY,
)


def make_celery(app_name=__name__):
    """Create and configure Celery instance; tasks live in tasks.py"""
    celery = Celery(app_name, include=["tasks"])

    celery.conf.update(
        broker_url=CELERY_BROKER_URL,
        result_backend=CELERY_RESULT_BACKEND,
        task_serializer="json",
        accept_content=["json"],
        result_serializer="json",
        timezone="UTC",
        enable_utc=True,
        task_track_started=True,
        task_time_limit=CELERY_TASK_TIMEOUT,
        task_soft_time_limit=CELERY_TASK_TIMEOUT - 60,
        worker_prefetch_multiplier=1,
        worker_max_tasks_per_child=1,  # Restart worker after each sweep to free memory
        worker_concurrency=CELERY_WORKER_CONCURRENCY,
        task_routes={
            "run_verification_check": "verification",
            "purge_old_jobs": "maintenance",
        },
    )
    return celery


if __name__ == "__main__":
    from tasks import celery

    celery.start()
