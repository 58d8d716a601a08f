import pytest

from services.cli.bench import BenchOp, run_bench, time_call
from services.oracle.report import seeded_rng
from services.tt_format.cores import random_tt
from services.tt_linops.arithmetic import tt_dot


def _dot_seconds(order, rng, repeats=5):
    x = random_tt([4] * order, [8] * (order - 1), rng)
    y = random_tt([4] * order, [8] * (order - 1), rng)
    tt_dot(x, y)
    return time_call(lambda: tt_dot(x, y), repeats)


@pytest.mark.slow
def test_dot_time_grows_linearly_in_order():
    rng = seeded_rng(0)
    short, long = _dot_seconds(8, rng), _dot_seconds(64, rng)
    assert long <= 16 * short


def test_bench_writes_one_row_per_order(capsys):
    records = run_bench(BenchOp.ADD, orders=[2, 3], mode_size=2, rank=2, repeats=1, seed=1)
    lines = capsys.readouterr().out.splitlines()
    assert lines[0] == "n,i,r,op,seconds,bytes"
    assert [record.n for record in records] == [2, 3]
    assert lines[1].startswith("2,2,2,add,")
    # two operands, cores 1x2x2 + 2x2x1 each
    assert records[0].bytes == 2 * 8 * (4 + 4)
