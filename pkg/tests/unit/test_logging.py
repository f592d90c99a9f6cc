import json
import logging
from collections import defaultdict
from contextlib import contextmanager

from bench.harness import SuiteEntry, parse_config, run_matrix
from common.logging_config import CustomJsonFormatter, RunLogger
from common.models import SolverConfig
from solver import solve


class ListHandler(logging.Handler):
    def __init__(self):
        super().__init__()
        self.records = []

    def emit(self, record):
        self.records.append(record)


@contextmanager
def captured(name):
    handler = ListHandler()
    target = logging.getLogger(name)
    target.addHandler(handler)
    try:
        yield handler.records
    finally:
        target.removeHandler(handler)


def test_run_logger_keeps_ids_apart():
    """Test interleaved adapters on one logger each stamp their own id"""
    with captured("solver") as records:
        first = RunLogger(logging.getLogger("solver"), "run-a")
        second = RunLogger(logging.getLogger("solver"), "run-b")
        first.info("one", extra={"step": 1})
        second.info("two")
        first.info("three")

    assert [(r.getMessage(), r.run_id) for r in records] == [
        ("one", "run-a"),
        ("two", "run-b"),
        ("three", "run-a"),
    ]
    assert records[0].step == 1
    assert not logging.getLogger("solver").filters


def test_run_id_in_json_output():
    """Test the formatter writes the run id field"""
    with captured("solver") as records:
        RunLogger(logging.getLogger("solver"), "run-c").info("hello")
    line = json.loads(CustomJsonFormatter("%(message)s").format(records[0]))
    assert line["run_id"] == "run-c"
    assert line["logger"] == "solver"


def test_solve_stamps_given_run_id(example_instance):
    """Test every solver record of a run carries the id passed by the caller"""
    with captured("solver") as records:
        solve(example_instance, SolverConfig(), run_id="row-a")
    own = [r for r in records if r.name == "solver"]
    assert own
    assert {r.run_id for r in own} == {"row-a"}


async def test_concurrent_rows_keep_own_ids(example_instance, two_machine_instance):
    """Test rows solved side by side never log under another row's id"""
    suite = [SuiteEntry("example", example_instance), SuiteEntry("pair", two_machine_instance)]
    configs = [parse_config("ia:ipf", 10.0), parse_config("h+sb:bc", 10.0)]
    with captured("bench") as records:
        await run_matrix(suite, configs, out_dir=None, workers=4)

    ids = defaultdict(set)
    for record in records:
        if not hasattr(record, "config"):
            continue
        ids[(record.instance, record.config)].add(record.run_id)
    assert len(ids) == 4
    assert all(len(found) == 1 for found in ids.values())
    assert len({next(iter(found)) for found in ids.values()}) == 4
    assert not logging.getLogger("bench").filters
