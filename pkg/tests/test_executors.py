from __future__ import annotations

from src.executors import SerialExecutor, ThreadedExecutor, executor_from_env, thread_cap


def test_serial_and_threaded_executors_keep_input_order() -> None:
    items = list(range(20))

    serial = SerialExecutor().map(lambda x: x * x, items)
    threaded = ThreadedExecutor(max_workers=4).map(lambda x: x * x, items)

    assert serial == threaded == [x * x for x in items]


def test_executor_from_env_defaults_to_serial(monkeypatch) -> None:
    monkeypatch.delenv("QTORIC_THREADS", raising=False)

    assert isinstance(executor_from_env(), SerialExecutor)


def test_executor_from_env_reads_thread_cap(monkeypatch) -> None:
    monkeypatch.setenv("QTORIC_THREADS", "3")

    executor = executor_from_env()

    assert executor == ThreadedExecutor(max_workers=3)


def test_bad_thread_cap_falls_back_to_one(monkeypatch) -> None:
    monkeypatch.setenv("QTORIC_THREADS", "many")
    assert thread_cap() == 1

    monkeypatch.setenv("QTORIC_THREADS", "0")
    assert thread_cap() == 1
