"""
Spark backend for parameter sweeps.

pyspark is an optional dependency (extra "spark"); it is imported only when
a session is first requested. Sweep points are shipped to executors with
their grid index and reassembled in grid order by ordered_map.

Example:
    with SparkSessionManager(master="local[4]") as manager:
        squares = manager.map(lambda x: x * x, [1.0, 2.0, 3.0])
"""

import logging
import shutil
from typing import Any, Callable, Optional, Sequence, TypeVar

from clapp_chaos.core.exceptions import InputError

logger = logging.getLogger(__name__)

T = TypeVar("T")
R = TypeVar("R")

# JDK 17 closes these packages by default; Spark's off-heap code needs them
_OPENED_PACKAGES = ("java.nio", "sun.nio.ch", "java.lang", "java.util")
JAVA_OPTIONS = " ".join(
    f"--add-opens=java.base/{package}=ALL-UNNAMED" for package in _OPENED_PACKAGES
)

SWEEP_DEFAULTS = {
    "spark.driver.extraJavaOptions": JAVA_OPTIONS,
    "spark.executor.extraJavaOptions": JAVA_OPTIONS,
    "spark.ui.showConsoleProgress": "false",
    "spark.ui.enabled": "false",
}


def spark_available() -> bool:
    """Whether pyspark is importable and a java executable is on PATH."""
    try:
        import pyspark  # noqa: F401
    except ImportError:
        return False
    return shutil.which("java") is not None


def ordered_map(spark: Any, func: Callable[[T], R], items: Sequence[T]) -> list[R]:
    """
    Apply func to every item on the cluster and return results in item order.

    One partition per item up to the context's default parallelism.
    """
    if not items:
        return []
    sc = spark.sparkContext
    slices = max(1, min(len(items), sc.defaultParallelism))
    evaluated = (
        sc.parallelize(list(enumerate(items)), numSlices=slices)
        .map(lambda pair: (pair[0], func(pair[1])))
        .collect()
    )
    return [value for _, value in sorted(evaluated, key=lambda pair: pair[0])]


class SparkSessionManager:
    """
    Owns one Spark session for the lifetime of a sweep.

    Attributes:
        app_name: Spark application name
        master: Spark master URL
        options: Spark configuration, SWEEP_DEFAULTS overlaid with caller entries
    """

    def __init__(
        self,
        app_name: str = "ClappChaosSweep",
        master: str = "local[*]",
        options: Optional[dict[str, str]] = None,
    ):
        self.app_name = app_name
        self.master = master
        self.options = {**SWEEP_DEFAULTS, **(options or {})}
        self._session: Optional[Any] = None

    def get_or_create(self) -> Any:
        """
        Session for this manager, started on first use.

        Raises:
            InputError: pyspark is not installed
        """
        if self._session is None:
            try:
                from pyspark.sql import SparkSession
            except ImportError as e:
                raise InputError(
                    "sweep backend 'spark' needs pyspark: pip install 'clapp-chaos[spark]'",
                    field="sweep_backend",
                ) from e

            builder = SparkSession.builder.appName(self.app_name).master(self.master)
            for key, value in self.options.items():
                builder = builder.config(key, value)
            self._session = builder.getOrCreate()
            logger.info("spark session %s started on %s", self.app_name, self.master)
        return self._session

    def map(self, func: Callable[[T], R], items: Sequence[T]) -> list[R]:
        """ordered_map on this manager's session."""
        return ordered_map(self.get_or_create(), func, items)

    @property
    def is_active(self) -> bool:
        return self._session is not None

    def stop(self) -> None:
        if self._session is not None:
            self._session.stop()
            self._session = None
            logger.info("spark session %s stopped", self.app_name)

    def __enter__(self) -> "SparkSessionManager":
        return self

    def __exit__(self, *exc_info) -> None:
        self.stop()
