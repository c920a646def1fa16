"""FunctionSpec parsing and deterministic JSON output.

A FunctionSpec is a JSON object tagged by ``kind``:

* ``constant`` ``{re, im}``
* ``blaschke`` ``{zeros: [[re, im], ...]}``
* ``singular_inner`` ``{masses: [[angle, mass], ...]}``
* ``closed_form`` ``{name, reciprocal}``
* ``outer`` ``{log_rho: [...] | log_rho_file: path, c_angle}``
* ``quotient`` ``{num, den}``, ``product`` ``{factors}``
* ``compose`` ``{f, psi}`` with ``psi`` a Schur-map spec
* ``reciprocal`` ``{of}``, shorthand for ``quotient`` with numerator 1

Any spec may carry ``chain: [psi_1, ..., psi_m]``, read as
``f o psi_1 o ... o psi_m``.  Parsing always yields the canonical nested
form, so ``dump(parse(dump(f)))`` equals ``dump(f)``.
"""
import json
import math
from pathlib import Path

import numpy as np

from .errors import HardyLabError, SpecParseError
from .functions import (
    BlaschkeProduct,
    ClosedForm,
    Composition,
    Constant,
    Outer,
    Product,
    Quotient,
    SingularInner,
)
from .schur import map_from_dict

SCHEMA_VERSION = "1.0"


def _pair(v, what):
    if not (isinstance(v, (list, tuple)) and len(v) == 2):
        raise SpecParseError(f"{what} must be a [re, im] pair, got {v!r}")
    return complex(float(v[0]), float(v[1]))


def read_samples(path):
    """Boundary samples from a text file: one real per line.

    A first line reading ``modulus`` marks the values as ``rho`` rather than
    ``log rho``; they are then logged elementwise.  Blank lines and lines
    starting with ``#`` are skipped.
    """
    try:
        lines = Path(path).read_text(encoding="utf-8").splitlines()
    except OSError as exc:
        raise SpecParseError(f"cannot read {path}: {exc}") from exc
    lines = [s.strip() for s in lines if s.strip() and not s.strip().startswith("#")]
    modulus = bool(lines) and lines[0].lower() == "modulus"
    if modulus:
        lines = lines[1:]
    try:
        values = np.array([float(s) for s in lines], dtype=float)
    except ValueError as exc:
        raise SpecParseError(f"{path}: {exc}") from exc
    if values.size == 0:
        raise SpecParseError(f"{path} holds no samples")
    if modulus:
        with np.errstate(divide="ignore", invalid="ignore"):
            values = np.log(values)
    return values


def _parse(d, base):
    if not isinstance(d, dict) or "kind" not in d:
        raise SpecParseError(f"a function spec must be an object with a 'kind', got {d!r}")
    kind = d["kind"]
    if kind == "constant":
        f = Constant(complex(float(d.get("re", 0.0)), float(d.get("im", 0.0))))
    elif kind == "blaschke":
        f = BlaschkeProduct([_pair(z, "zero") for z in d["zeros"]])
    elif kind == "singular_inner":
        f = SingularInner([(float(a), float(m)) for a, m in d["masses"]])
    elif kind == "closed_form":
        f = ClosedForm(d["name"], bool(d.get("reciprocal", False)))
    elif kind == "outer":
        if "log_rho_file" in d:
            path = Path(d["log_rho_file"])
            log_rho = read_samples(path if path.is_absolute() else base / path)
        else:
            log_rho = np.array(d["log_rho"], dtype=float)
        f = Outer(log_rho, float(d.get("c_angle", 0.0)))
    elif kind == "quotient":
        f = Quotient(_parse(d["num"], base), _parse(d["den"], base))
    elif kind == "reciprocal":
        f = Quotient(Constant(1.0), _parse(d["of"], base))
    elif kind == "product":
        f = Product([_parse(g, base) for g in d["factors"]])
    elif kind == "compose":
        f = Composition(_parse(d["f"], base), map_from_dict(d["psi"]))
    else:
        raise SpecParseError(f"unknown function kind {kind!r}")
    for psi in d.get("chain", ()):
        f = Composition(f, map_from_dict(psi))
    return f


def parse_function(spec, base=None):
    """AnalyticFunction from a spec dict; relative sample files resolve against ``base``."""
    base = Path(base) if base is not None else Path.cwd()
    try:
        return _parse(spec, base)
    except SpecParseError:
        raise
    except (KeyError, TypeError, ValueError, HardyLabError) as exc:
        raise SpecParseError(f"invalid function spec: {exc!r}") from exc


def load_function(source):
    """Parse a spec given as inline JSON text or as the path of a JSON file.

    A ``synth`` artifact (``{schema_version, function}``) is unwrapped first.
    """
    text = str(source)
    base = None
    if not text.lstrip().startswith("{"):
        path = Path(text)
        try:
            text = path.read_text(encoding="utf-8")
        except OSError as exc:
            raise SpecParseError(f"cannot read spec {source}: {exc}") from exc
        base = path.parent
    try:
        spec = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SpecParseError(f"spec is not valid JSON: {exc}") from exc
    if isinstance(spec, dict) and "kind" not in spec and isinstance(spec.get("function"), dict):
        spec = spec["function"]
    return parse_function(spec, base), spec


def format_float(x):
    """17 significant digits, so every double round-trips exactly."""
    x = float(x)
    if not math.isfinite(x):
        return "null"
    if x == 0.0:
        return "0.0"
    s = format(x, ".17g")
    if "e" not in s and "." not in s and "n" not in s:
        s += ".0"
    return s


def _emit(obj, indent, level, out):
    pad = " " * (indent * (level + 1))
    end = " " * (indent * level)
    if obj is None or isinstance(obj, (bool, np.bool_)):
        out.append("null" if obj is None else ("true" if obj else "false"))
    elif isinstance(obj, (int, np.integer)):
        out.append(str(int(obj)))
    elif isinstance(obj, (float, np.floating)):
        out.append(format_float(obj))
    elif isinstance(obj, (complex, np.complexfloating)):
        _emit([obj.real, obj.imag], indent, level, out)
    elif isinstance(obj, str):
        out.append(json.dumps(obj))
    elif isinstance(obj, dict):
        if not obj:
            out.append("{}")
            return
        out.append("{\n")
        for i, (k, v) in enumerate(obj.items()):
            out.append(f"{pad}{json.dumps(str(k))}: ")
            _emit(v, indent, level + 1, out)
            out.append(",\n" if i < len(obj) - 1 else "\n")
        out.append(end + "}")
    elif isinstance(obj, (list, tuple, np.ndarray)):
        items = list(obj)
        if not items:
            out.append("[]")
            return
        # flat numeric rows stay on one line to keep reports readable
        if all(isinstance(v, (int, float, np.integer, np.floating)) and
               not isinstance(v, (bool, np.bool_)) for v in items):
            out.append("[" + ", ".join(
                str(int(v)) if isinstance(v, (int, np.integer)) else format_float(v)
                for v in items) + "]")
            return
        out.append("[\n")
        for i, v in enumerate(items):
            out.append(pad)
            _emit(v, indent, level + 1, out)
            out.append(",\n" if i < len(items) - 1 else "\n")
        out.append(end + "]")
    else:
        raise TypeError(f"cannot serialize {type(obj).__name__}")


def dumps(obj, indent=2):
    """Deterministic JSON text: insertion-ordered keys, fixed float format, NaN as null."""
    out = []
    _emit(obj, indent, 0, out)
    return "".join(out) + "\n"


def dump_function(f):
    """Versioned JSON text for an AnalyticFunction."""
    return dumps({"schema_version": SCHEMA_VERSION, "function": f.to_dict()})


def read_function_artifact(text):
    """Inverse of ``dump_function``; a bare spec object is accepted too."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SpecParseError(f"artifact is not valid JSON: {exc}") from exc
    return parse_function(doc.get("function", doc))
