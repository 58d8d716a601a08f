"""
Verb dispatch for the command-line front end.

Each verb maps onto one library operation. Operand kinds are checked from the
file suffixes before anything is read.
"""
import sys
from enum import Enum
from pathlib import Path
from typing import Callable, Dict, List, Optional, Sequence, TextIO, Tuple

from pydantic import BaseModel, Field, model_validator

from services.cli.bench import BenchOp, run_bench
from services.oracle.report import seeded_rng
from services.tensor_core.dense import DenseTensor, random_dense
from services.tensor_core.io import DENSE_SUFFIX, read_dense, write_dense
from services.tt_format.cores import random_tt
from services.tt_format.decomposition import tt_round, tt_svd
from services.tt_format.evaluation import tt_to_dense
from services.tt_format.io import TT_SUFFIX, read_tt, write_tt
from services.tt_format.orthogonal import OrthMode, orthogonalize
from services.tt_format.truncation import TruncationSpec
from services.tt_linops.arithmetic import quadratic_form, tt_add, tt_dot, tt_hadamard, ttm_apply
from services.tt_linops.io import TTM_SUFFIX, read_ttm, write_ttm
from services.tt_linops.matrix_tt import random_ttm, ttm_to_dense
from shared.config.loader import numerics_overrides
from shared.errors import TensorTrainError
from shared.utils.logger import LogContext, get_logger

logger = get_logger(__name__)

EXIT_OK = 0
EXIT_INVALID = 2
EXIT_MEMORY = 3

ANY_KIND = (DENSE_SUFFIX, TT_SUFFIX, TTM_SUFFIX)


class Verb(str, Enum):
    RANDOM = "random"
    DECOMPOSE = "decompose"
    ROUND = "round"
    ORTHOGONALIZE = "orthogonalize"
    INFO = "info"
    DENSIFY = "densify"
    ADD = "add"
    HADAMARD = "hadamard"
    DOT = "dot"
    MATVEC = "matvec"
    QUADFORM = "quadform"
    BENCH = "bench"


# Allowed suffixes per positional input, and for the output (None: no output file)
OPERANDS: Dict[Verb, Tuple[Tuple[Tuple[str, ...], ...], Optional[Tuple[str, ...]]]] = {
    Verb.RANDOM: ((), ANY_KIND),
    Verb.DECOMPOSE: (((DENSE_SUFFIX,),), (TT_SUFFIX,)),
    Verb.ROUND: (((TT_SUFFIX,),), (TT_SUFFIX,)),
    Verb.ORTHOGONALIZE: (((TT_SUFFIX,),), (TT_SUFFIX,)),
    Verb.INFO: ((ANY_KIND,), None),
    Verb.DENSIFY: (((TT_SUFFIX, TTM_SUFFIX),), (DENSE_SUFFIX,)),
    Verb.ADD: (((TT_SUFFIX,), (TT_SUFFIX,)), (TT_SUFFIX,)),
    Verb.HADAMARD: (((TT_SUFFIX,), (TT_SUFFIX,)), (TT_SUFFIX,)),
    Verb.DOT: (((TT_SUFFIX,), (TT_SUFFIX,)), None),
    Verb.MATVEC: (((TTM_SUFFIX,), (TT_SUFFIX,)), (TT_SUFFIX,)),
    Verb.QUADFORM: (((TTM_SUFFIX,), (TT_SUFFIX,)), None),
    Verb.BENCH: ((), None),
}


class CommandSpec(BaseModel):
    """One parsed invocation."""
    verb: Verb
    inputs: List[str] = Field(default_factory=list)
    output: Optional[str] = None

    epsilon: float = Field(default=0.0, ge=0.0)
    max_ranks: Optional[Tuple[int, ...]] = None
    seed: Optional[int] = Field(default=None, ge=0, lt=2**64)
    site: Optional[int] = Field(default=None, ge=1)
    mode: OrthMode = OrthMode.MIXED
    mem_cap: Optional[int] = Field(default=None, ge=1)

    # random
    dims: Optional[Tuple[int, ...]] = None
    cols: Optional[Tuple[int, ...]] = None
    ranks: Optional[Tuple[int, ...]] = None

    # bench
    bench_op: Optional[BenchOp] = None
    orders: Optional[Tuple[int, ...]] = None
    mode_size: Optional[int] = Field(default=None, ge=1)
    rank: Optional[int] = Field(default=None, ge=1)
    repeats: Optional[int] = Field(default=None, ge=1)

    @model_validator(mode="after")
    def check_operands(self) -> "CommandSpec":
        input_kinds, output_kinds = OPERANDS[self.verb]
        if len(self.inputs) != len(input_kinds):
            raise ValueError(f"{self.verb.value} takes {len(input_kinds)} input file(s), got {len(self.inputs)}")
        for position, (path, allowed) in enumerate(zip(self.inputs, input_kinds), start=1):
            if Path(path).suffix not in allowed:
                raise ValueError(f"{path}: input {position} must be one of {', '.join(allowed)}")
        if output_kinds is None:
            if self.output is not None:
                raise ValueError(f"{self.verb.value} does not write an output file")
        elif self.output is None:
            raise ValueError(f"{self.verb.value} needs an output file (-o)")
        elif Path(self.output).suffix not in output_kinds:
            raise ValueError(f"{self.output}: output must be one of {', '.join(output_kinds)}")

        if self.verb is Verb.ORTHOGONALIZE and self.site is None:
            raise ValueError("orthogonalize needs --site")
        if self.verb is Verb.RANDOM and not self.dims:
            raise ValueError("random needs --dims")
        if self.verb is Verb.BENCH and self.bench_op is None:
            raise ValueError("bench needs an operation")
        return self

    @property
    def truncation(self) -> TruncationSpec:
        return TruncationSpec(epsilon=self.epsilon, max_ranks=self.max_ranks)


def format_scalar(value: float) -> str:
    return f"{value:.17g}"


def _join(values: Sequence) -> str:
    return ",".join(str(v) for v in values)


def _random(spec: CommandSpec, out: TextIO):
    rng = seeded_rng(spec.seed)
    dims = list(spec.dims)
    suffix = Path(spec.output).suffix
    if suffix == DENSE_SUFFIX:
        write_dense(spec.output, random_dense(dims, rng))
        return
    ranks = list(spec.ranks) if spec.ranks is not None else [1] * (len(dims) - 1)
    if suffix == TT_SUFFIX:
        write_tt(spec.output, random_tt(dims, ranks, rng))
    else:
        cols = list(spec.cols) if spec.cols is not None else dims
        write_ttm(spec.output, random_ttm(dims, cols, ranks, rng))


def _decompose(spec: CommandSpec, out: TextIO):
    write_tt(spec.output, tt_svd(read_dense(spec.inputs[0]), spec.truncation))


def _round(spec: CommandSpec, out: TextIO):
    write_tt(spec.output, tt_round(read_tt(spec.inputs[0]), spec.truncation))


def _orthogonalize(spec: CommandSpec, out: TextIO):
    write_tt(spec.output, orthogonalize(read_tt(spec.inputs[0]), spec.mode, spec.site))


def _info(spec: CommandSpec, out: TextIO):
    path = spec.inputs[0]
    suffix = Path(path).suffix
    if suffix == DENSE_SUFFIX:
        x = read_dense(path)
        lines = [("kind", "dense"), ("order", x.order), ("mode_sizes", _join(x.dims)),
                 ("storage_bytes", x.nbytes)]
    elif suffix == TT_SUFFIX:
        x = read_tt(path)
        lines = [("kind", "tt"), ("order", x.order), ("mode_sizes", _join(x.dims)),
                 ("ranks", _join(x.ranks)), ("orth_flags", _join(flag.value for flag in x.orth_flags)),
                 ("storage_bytes", x.storage_bytes)]
    else:
        a = read_ttm(path)
        lines = [("kind", "ttm"), ("order", a.order), ("row_sizes", _join(a.row_dims)),
                 ("col_sizes", _join(a.col_dims)), ("ranks", _join(a.ranks)),
                 ("storage_bytes", a.storage_bytes)]
    for key, value in lines:
        out.write(f"{key}: {value}\n")


def _densify(spec: CommandSpec, out: TextIO):
    path = spec.inputs[0]
    if Path(path).suffix == TT_SUFFIX:
        write_dense(spec.output, tt_to_dense(read_tt(path)))
    else:
        write_dense(spec.output, DenseTensor(ttm_to_dense(read_ttm(path))))


def _add(spec: CommandSpec, out: TextIO):
    write_tt(spec.output, tt_add(read_tt(spec.inputs[0]), read_tt(spec.inputs[1])))


def _hadamard(spec: CommandSpec, out: TextIO):
    write_tt(spec.output, tt_hadamard(read_tt(spec.inputs[0]), read_tt(spec.inputs[1])))


def _dot(spec: CommandSpec, out: TextIO):
    out.write(format_scalar(tt_dot(read_tt(spec.inputs[0]), read_tt(spec.inputs[1]))) + "\n")


def _matvec(spec: CommandSpec, out: TextIO):
    write_tt(spec.output, ttm_apply(read_ttm(spec.inputs[0]), read_tt(spec.inputs[1])))


def _quadform(spec: CommandSpec, out: TextIO):
    out.write(format_scalar(quadratic_form(read_tt(spec.inputs[1]), read_ttm(spec.inputs[0]))) + "\n")


def _bench(spec: CommandSpec, out: TextIO):
    run_bench(
        spec.bench_op,
        orders=spec.orders,
        mode_size=spec.mode_size,
        rank=spec.rank,
        repeats=spec.repeats,
        seed=spec.seed,
        out=out,
    )


HANDLERS: Dict[Verb, Callable[[CommandSpec, TextIO], None]] = {
    Verb.RANDOM: _random,
    Verb.DECOMPOSE: _decompose,
    Verb.ROUND: _round,
    Verb.ORTHOGONALIZE: _orthogonalize,
    Verb.INFO: _info,
    Verb.DENSIFY: _densify,
    Verb.ADD: _add,
    Verb.HADAMARD: _hadamard,
    Verb.DOT: _dot,
    Verb.MATVEC: _matvec,
    Verb.QUADFORM: _quadform,
    Verb.BENCH: _bench,
}


def run(spec: CommandSpec, out: Optional[TextIO] = None, err: Optional[TextIO] = None) -> int:
    """
    Execute one verb.

    Returns:
        0 on success, 2 on a validation, format or I/O error, 3 when a dense
        allocation is refused by the memory cap
    """
    out = out or sys.stdout
    err = err or sys.stderr
    overrides = {} if spec.mem_cap is None else {"memory_cap_bytes": spec.mem_cap}

    with LogContext(verb=spec.verb.value):
        try:
            with numerics_overrides(**overrides):
                HANDLERS[spec.verb](spec, out)
            logger.info("command_complete", output=spec.output)
            return EXIT_OK

        except (MemoryError, OverflowError) as e:
            logger.warning("command_refused", error=str(e))
            err.write(f"error: {e}\n")
            return EXIT_MEMORY

        except (TensorTrainError, ValueError, OSError) as e:
            logger.warning("command_failed", error=str(e))
            err.write(f"error: {e}\n")
            return EXIT_INVALID
