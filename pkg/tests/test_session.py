"""Tests for the Spark sweep backend helpers (no JVM needed)."""

import importlib.util

import pytest

from clapp_chaos.analysis.chaos import sweep_re
from clapp_chaos.core.base import SweepBackend
from clapp_chaos.core.exceptions import InputError
from clapp_chaos.core.session import (
    JAVA_OPTIONS,
    SWEEP_DEFAULTS,
    SparkSessionManager,
    ordered_map,
)


class FakeRdd:
    def __init__(self, items):
        self.items = items

    def map(self, func):
        return FakeRdd([func(item) for item in self.items])

    def collect(self):
        # executors hand results back in arbitrary order
        return list(reversed(self.items))


class FakeContext:
    defaultParallelism = 3

    def __init__(self):
        self.slices = None

    def parallelize(self, items, numSlices):
        self.slices = numSlices
        return FakeRdd(items)


class FakeSpark:
    def __init__(self):
        self.sparkContext = FakeContext()


class FakeSession(FakeSpark):
    def __init__(self):
        super().__init__()
        self.stopped = False

    def stop(self):
        self.stopped = True


def test_ordered_map_restores_item_order():
    spark = FakeSpark()
    assert ordered_map(spark, lambda x: x * x, [1.0, 2.0, 3.0, 4.0, 5.0]) == [
        1.0, 4.0, 9.0, 16.0, 25.0
    ]
    assert spark.sparkContext.slices == 3


def test_ordered_map_small_and_empty_inputs():
    spark = FakeSpark()
    assert ordered_map(spark, str, [7]) == ["7"]
    assert spark.sparkContext.slices == 1
    assert ordered_map(spark, str, []) == []


def test_manager_options_overlay_defaults():
    manager = SparkSessionManager(options={"spark.ui.enabled": "true", "spark.foo": "1"})
    assert manager.options["spark.ui.enabled"] == "true"
    assert manager.options["spark.foo"] == "1"
    assert manager.options["spark.driver.extraJavaOptions"] == JAVA_OPTIONS
    assert SWEEP_DEFAULTS["spark.ui.enabled"] == "false"
    assert not manager.is_active


def test_java_options_open_required_packages():
    assert "--add-opens=java.base/sun.nio.ch=ALL-UNNAMED" in JAVA_OPTIONS
    assert JAVA_OPTIONS.count("--add-opens") == 4


@pytest.mark.skipif(importlib.util.find_spec("pyspark") is not None, reason="pyspark installed")
def test_missing_pyspark_is_input_error():
    with SparkSessionManager() as manager:
        with pytest.raises(InputError, match="pyspark"):
            manager.get_or_create()


def test_manager_map_uses_its_session():
    manager = SparkSessionManager()
    manager._session = FakeSession()
    assert manager.map(lambda x: -x, [3, 1, 2]) == [-3, -1, -2]
    assert manager.is_active
    manager.stop()
    assert not manager.is_active


def test_sweep_on_given_session_matches_serial(published_circuit, published_bjt):
    grid = [50.0, 2.0, 10.0, 1.0]
    serial = sweep_re(published_circuit, published_bjt, grid)
    spark = sweep_re(
        published_circuit, published_bjt, grid, backend=SweepBackend.SPARK, spark=FakeSpark()
    )
    assert [p.r_e for p in spark.points] == [1.0, 2.0, 10.0, 50.0]
    assert spark.points == serial.points
