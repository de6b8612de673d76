"""JSON formats for matrices, sequences, symbols, multiplier bundles and experiments.

Complex scalars are written as [re, im] pairs. Plain real numbers are accepted on
input. Every decoder reports the path of the offending field in its InputError.
"""

import json
from pathlib import Path

import numpy as np

from . import symbols
from .command_errors import InputError, MultiplierError
from .multiplier import build
from .perturbation import ConvergenceExperiment, NormMode, ScheduleStep
from .sequences import SequenceSystem
from .symbols import SymbolKind


def load_json(path):
    path = Path(path)
    try:
        return json.loads(path.read_text())
    except OSError as e:
        raise InputError(f"Could not read {path}: {e}")
    except json.JSONDecodeError as e:
        raise InputError(f"{path} is not valid JSON: {e}")


def dumps(data):
    """Stable JSON text: sorted keys, so equal reports are byte-identical."""
    return json.dumps(data, indent=2, sort_keys=True) + "\n"


def _require(data, key, where):
    if not isinstance(data, dict):
        raise InputError(f"{where} must be a JSON object.")
    if key not in data:
        raise InputError(f"{where} is missing the field '{key}'.")
    return data[key]


def _require_list(value, where):
    if not isinstance(value, list):
        raise InputError(f"{where} must be a list.")
    return value


def _require_int(value, where, minimum=1):
    if isinstance(value, bool) or not isinstance(value, int) or value < minimum:
        raise InputError(f"{where} must be an integer >= {minimum}, got {value!r}.")
    return value


# --- Scalars, vectors, matrices ---


def encode_complex(z):
    z = complex(z)
    return [z.real, z.imag]


def decode_complex(value, where="value"):
    if isinstance(value, bool):
        raise InputError(f"{where} must be a number or an [re, im] pair.")
    if isinstance(value, (int, float)):
        return complex(value)
    if (
        isinstance(value, list)
        and len(value) == 2
        and all(isinstance(v, (int, float)) and not isinstance(v, bool) for v in value)
    ):
        return complex(value[0], value[1])
    raise InputError(f"{where} must be a number or an [re, im] pair, got {value!r}.")


def encode_vector(v):
    return [encode_complex(z) for z in np.asarray(v).ravel()]


def decode_vector(value, where="vector"):
    entries = _require_list(value, where)
    if not entries:
        raise InputError(f"{where} is empty.")
    return np.array([decode_complex(z, f"{where}[{i}]") for i, z in enumerate(entries)])


def encode_matrix(a):
    a = np.asarray(a)
    return {
        "rows": int(a.shape[0]),
        "cols": int(a.shape[1]),
        "entries": [encode_vector(row) for row in a],
    }


def decode_matrix(data, where="matrix"):
    rows = _require_int(_require(data, "rows", where), f"{where}.rows")
    cols = _require_int(_require(data, "cols", where), f"{where}.cols")
    entries = _require_list(_require(data, "entries", where), f"{where}.entries")
    if len(entries) != rows:
        raise InputError(f"{where}.entries has {len(entries)} rows, expected {rows}.")
    decoded = [decode_vector(row, f"{where}.entries[{i}]") for i, row in enumerate(entries)]
    for i, row in enumerate(decoded):
        if row.size != cols:
            raise InputError(f"{where}.entries[{i}] has {row.size} entries, expected {cols}.")
    return np.array(decoded)


# --- Sequences and symbols ---


def encode_sequence(seq):
    return {"dim": seq.dim, "vectors": [encode_vector(v) for v in seq.vectors]}


def decode_sequence(data, where="sequence"):
    dim = _require_int(_require(data, "dim", where), f"{where}.dim")
    raw = _require_list(_require(data, "vectors", where), f"{where}.vectors")
    if not raw:
        raise InputError(f"{where}.vectors is empty.")
    vectors = [decode_vector(v, f"{where}.vectors[{k}]") for k, v in enumerate(raw)]
    for k, v in enumerate(vectors):
        if v.size != dim:
            raise InputError(f"{where}.vectors[{k}] has {v.size} entries, dim is {dim}.")
    return SequenceSystem.from_vectors(vectors)


def encode_symbol(u):
    u = symbols.as_symbol(u)
    data = encode_matrix(u.matrix)
    data["kind"] = u.kind.value
    if u.kind is SymbolKind.DIAGONAL:
        data["m"] = encode_vector(u.params["m"])
    elif u.kind is SymbolKind.CONVOLUTION:
        data["kernel"] = encode_vector(u.params["kernel"])
        data["offset"] = u.params["offset"]
    elif u.kind is SymbolKind.TRIBLOCK:
        data["n"] = u.params["n"]
    return data


def decode_symbol(data, where="symbol"):
    """Build a symbol from its constructor parameters, or from entries for dense input."""
    if not isinstance(data, dict):
        raise InputError(f"{where} must be a JSON object.")
    try:
        kind = SymbolKind(data.get("kind", SymbolKind.DENSE.value))
    except ValueError:
        kinds = ", ".join(k.value for k in SymbolKind)
        raise InputError(f"{where}.kind must be one of {kinds}, got {data.get('kind')!r}.")

    if kind is SymbolKind.DIAGONAL and "m" in data:
        return symbols.diagonal_symbol(decode_vector(data["m"], f"{where}.m"))
    if kind is SymbolKind.CONVOLUTION and "kernel" in data:
        n = _require_int(data.get("n", data.get("rows")), f"{where}.n")
        offset = data.get("offset")
        if offset is not None:
            offset = _require_int(offset, f"{where}.offset", minimum=0)
        return symbols.convolution_symbol(decode_vector(data["kernel"], f"{where}.kernel"), n, offset)
    if kind is SymbolKind.FROBENIUS and "a" in data:
        return symbols.frobenius_symbol(decode_matrix(data["a"], f"{where}.a"))
    if kind is SymbolKind.TRIBLOCK and "n" in data:
        return symbols.triblock_example(_require_int(data["n"], f"{where}.n", minimum=2))

    matrix = decode_matrix(data, where)
    if kind is SymbolKind.FROBENIUS:
        return symbols.frobenius_symbol(matrix)
    if kind is not SymbolKind.DENSE:
        raise InputError(f"{where}: a {kind.value} symbol needs its constructor parameters.")
    return symbols.dense_symbol(matrix)


# --- Bundles and experiments ---


def decode_bundle(data, where="bundle"):
    """{"symbol": ..., "synthesis": ..., "analysis": ...} as a GeneralizedMultiplier."""
    symbol = decode_symbol(_require(data, "symbol", where), f"{where}.symbol")
    synthesis = decode_sequence(_require(data, "synthesis", where), f"{where}.synthesis")
    analysis = decode_sequence(_require(data, "analysis", where), f"{where}.analysis")
    return build(symbol, synthesis, analysis)


def encode_bundle(mult):
    return {
        "symbol": encode_symbol(mult.symbol),
        "synthesis": encode_sequence(mult.synthesis_seq),
        "analysis": encode_sequence(mult.analysis_seq),
    }


def decode_experiment(data, where="experiment"):
    base = decode_bundle(data, where)
    raw_steps = _require_list(_require(data, "schedule", where), f"{where}.schedule")

    steps = []
    for i, raw in enumerate(raw_steps):
        step_where = f"{where}.schedule[{i}]"
        l = _require_int(_require(raw, "l", step_where), f"{step_where}.l")
        fields = {}
        if "symbol" in raw:
            fields["symbol"] = decode_symbol(raw["symbol"], f"{step_where}.symbol")
        for side in ("synthesis", "analysis"):
            if side in raw:
                fields[side] = decode_sequence(raw[side], f"{step_where}.{side}")
        steps.append(ScheduleStep(l=l, **fields))

    norms = _require_list(data.get("norms", ["op", "s1", "s2"]), f"{where}.norms")
    try:
        norms = tuple(NormMode(n) for n in norms)
    except ValueError:
        raise InputError(f"{where}.norms must contain only op, s1, s2; got {norms!r}.")

    try:
        return ConvergenceExperiment(base=base, schedule=tuple(steps), norms=norms)
    except MultiplierError as e:
        # Schedule-level errors are reported as bad input.
        raise InputError(f"{where}: {e.message}")
