"""MPS ingestion: parse MPS files into an immutable MILP instance model.

Supports both fixed-column and whitespace-delimited layouts, MARKER
INTORG/INTEND integrality toggles, RHS, RANGES and BOUNDS sections, and
an OBJSENSE section (default MIN).  Also provides a free-format MPS
serializer and a deterministic set-partitioning instance generator used
as an offline test double for crew-scheduling style instances.
"""

from __future__ import annotations

import enum
import io
import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

INF = math.inf

# Column spans (0-based, half-open) of the six fields in fixed-layout MPS.
_FIXED_SPANS = ((1, 3), (4, 12), (14, 22), (24, 36), (39, 47), (49, 61))


class Sense(enum.Enum):
    """Row sense of a linear constraint."""

    LE = "LE"
    EQ = "EQ"
    GE = "GE"


class ObjSense(enum.Enum):
    MIN = "MIN"
    MAX = "MAX"


class MpsParseError(ValueError):
    """Structured parse failure carrying the offending 1-based line number."""

    def __init__(self, message: str, line_no: int | None = None):
        self.line_no = line_no
        if line_no is not None:
            message = f"line {line_no}: {message}"
        super().__init__(message)


@dataclass(frozen=True)
class VariableRecord:
    name: str
    obj_coeff: float = 0.0
    lower_bound: float = 0.0
    upper_bound: float = INF
    is_integer: bool = False

    def __post_init__(self):
        if self.lower_bound > self.upper_bound:
            raise ValueError(
                f"variable {self.name!r}: lower bound {self.lower_bound} "
                f"exceeds upper bound {self.upper_bound}"
            )


@dataclass(frozen=True)
class ConstraintRecord:
    name: str
    sense: Sense
    rhs: float = 0.0


@dataclass(frozen=True)
class SparseMatrix:
    """Nonzero coefficients of the constraint matrix in COO form."""

    n_rows: int
    n_cols: int
    entries: tuple[tuple[int, int, float], ...]

    def __post_init__(self):
        seen = set()
        for row, col, value in self.entries:
            if not (0 <= row < self.n_rows and 0 <= col < self.n_cols):
                raise ValueError(f"entry ({row}, {col}) out of range")
            if value == 0.0:
                raise ValueError(f"entry ({row}, {col}) stores a zero value")
            if (row, col) in seen:
                raise ValueError(f"duplicate entry at ({row}, {col})")
            seen.add((row, col))

    @property
    def nnz(self) -> int:
        return len(self.entries)

    def column_counts(self) -> np.ndarray:
        counts = np.zeros(self.n_cols, dtype=np.int64)
        for _, col, _ in self.entries:
            counts[col] += 1
        return counts

    def row_counts(self) -> np.ndarray:
        counts = np.zeros(self.n_rows, dtype=np.int64)
        for row, _, _ in self.entries:
            counts[row] += 1
        return counts


@dataclass(frozen=True)
class MilpInstance:
    """Immutable in-memory MILP instance; safe to share across threads."""

    name: str
    objective_sense: ObjSense
    variables: tuple[VariableRecord, ...]
    constraints: tuple[ConstraintRecord, ...]
    matrix: SparseMatrix

    def __post_init__(self):
        if self.matrix.n_rows != len(self.constraints) or self.matrix.n_cols != len(
            self.variables
        ):
            raise ValueError(
                f"matrix shape ({self.matrix.n_rows}, {self.matrix.n_cols}) does not "
                f"match ({len(self.constraints)}, {len(self.variables)})"
            )
        var_names = [v.name for v in self.variables]
        if len(set(var_names)) != len(var_names):
            raise ValueError("variable names are not unique")
        con_names = [c.name for c in self.constraints]
        if len(set(con_names)) != len(con_names):
            raise ValueError("constraint names are not unique")

    @property
    def n_vars(self) -> int:
        return len(self.variables)

    @property
    def n_cons(self) -> int:
        return len(self.constraints)


@dataclass(frozen=True)
class InstanceStats:
    n_vars: int
    n_cons: int
    n_integer_vars: int
    nnz: int
    density: float

    def as_dict(self) -> dict:
        return {
            "n_vars": self.n_vars,
            "n_cons": self.n_cons,
            "n_integer_vars": self.n_integer_vars,
            "nnz": self.nnz,
            "density": self.density,
        }


def instance_stats(inst: MilpInstance) -> InstanceStats:
    """Structural counts and the nonzero density nnz / (n_vars * n_cons)."""
    n_vars = inst.n_vars
    n_cons = inst.n_cons
    nnz = inst.matrix.nnz
    cells = n_vars * n_cons
    density = nnz / cells if cells else 0.0
    n_int = sum(1 for v in inst.variables if v.is_integer)
    return InstanceStats(n_vars, n_cons, n_int, nnz, density)


# ---------------------------------------------------------------------------
# Parsing
# ---------------------------------------------------------------------------

_SECTION_ORDER = {
    "NAME": 0,
    "OBJSENSE": 1,
    "OBJNAME": 2,
    "ROWS": 3,
    "COLUMNS": 4,
    "RHS": 5,
    "RANGES": 6,
    "BOUNDS": 7,
    "ENDATA": 8,
}

_BOUND_TYPES_NO_VALUE = {"FR", "MI", "PL", "BV"}
_BOUND_TYPES_WITH_VALUE = {"LO", "UP", "FX", "LI", "UI"}


def _to_float(token: str, line_no: int) -> float:
    # Fortran-style exponents (1.5D+2) occur in old fixed-format files.
    try:
        return float(token.replace("D", "E").replace("d", "e"))
    except ValueError:
        raise MpsParseError(f"non-numeric field {token!r}", line_no)


def _is_fixed_layout(lines: Sequence[str]) -> bool:
    """Heuristic layout detection: tabs or fields outside the classic column
    windows mean free format.  Fixed slicing is only worth using when it
    disagrees with whitespace splitting (names with embedded blanks)."""
    any_fixed_gain = False
    for line in lines:
        if not line or line.lstrip().startswith("*"):
            continue
        if line[0] not in (" ", "\t"):
            continue  # section header
        if "\t" in line:
            return False
        if len(line.rstrip()) > 61:
            return False
        # every non-blank character must fall inside a fixed field window
        for pos, ch in enumerate(line.rstrip("\n")):
            if ch == " ":
                continue
            if not any(lo <= pos < hi for lo, hi in _FIXED_SPANS):
                return False
        fields = [line[lo:hi].strip() for lo, hi in _FIXED_SPANS]
        fields = [f for f in fields if f]
        if fields != line.split():
            any_fixed_gain = True
    return any_fixed_gain


def _tokenize(line: str, fixed: bool) -> list[str]:
    if fixed:
        fields = [line[lo:hi].strip() for lo, hi in _FIXED_SPANS]
        return [f for f in fields if f]
    return line.split()


class _ParserState:
    def __init__(self):
        self.name = ""
        self.objective_sense = ObjSense.MIN
        self.obj_row: str | None = None
        self.free_rows: set[str] = set()
        self.row_sense: dict[str, Sense] = {}
        self.row_order: list[str] = []
        self.rhs: dict[str, float] = {}
        self.ranges: dict[str, float] = {}
        self.var_order: list[str] = []
        self.var_index: dict[str, int] = {}
        self.obj_coeffs: dict[int, float] = {}
        self.integer_vars: set[int] = set()
        self.explicit_lower: dict[int, float] = {}
        self.explicit_upper: dict[int, float] = {}
        self.lower_was_set: set[int] = set()
        self.entries: dict[str, dict[int, float]] = {}
        self.entry_order: list[tuple[str, int, float]] = []

    def var(self, name: str, line_no: int, create: bool) -> int:
        idx = self.var_index.get(name)
        if idx is None:
            if not create:
                raise MpsParseError(f"unknown column {name!r}", line_no)
            idx = len(self.var_order)
            self.var_index[name] = idx
            self.var_order.append(name)
        return idx


def parse_mps(source) -> MilpInstance:
    """Parse MPS text (str, bytes, or a text/byte stream) into a MilpInstance.

    The objective row (first N row) is routed to the variables' objective
    coefficients; later N rows are free rows whose coefficients are dropped.
    RANGES rows expand into a primary and a companion row per standard MPS
    semantics; the companion carries the original name plus a ``__rng``
    suffix and duplicates the row's coefficients.
    """
    if isinstance(source, bytes):
        text = source.decode("utf-8", errors="replace")
    elif isinstance(source, str):
        text = source
    elif isinstance(source, io.IOBase) or hasattr(source, "read"):
        raw = source.read()
        text = raw.decode("utf-8", errors="replace") if isinstance(raw, bytes) else raw
    else:
        raise TypeError(f"cannot parse MPS from {type(source).__name__}")

    lines = text.splitlines()
    fixed = _is_fixed_layout(lines)

    st = _ParserState()
    section: str | None = None
    section_rank = -1
    in_integer_block = False
    saw_endata = False

    for line_no, line in enumerate(lines, start=1):
        stripped = line.rstrip()
        if not stripped or stripped.lstrip().startswith("*"):
            continue
        if saw_endata:
            raise MpsParseError("content after ENDATA", line_no)

        if stripped[0] not in (" ", "\t"):
            tokens = stripped.split()
            keyword = tokens[0].upper()
            if keyword not in _SECTION_ORDER:
                raise MpsParseError(f"unknown section {tokens[0]!r}", line_no)
            rank = _SECTION_ORDER[keyword]
            if rank <= section_rank:
                raise MpsParseError(f"section {keyword} out of order", line_no)
            section_rank = rank
            section = keyword
            if keyword == "NAME":
                st.name = tokens[1] if len(tokens) > 1 else ""
            elif keyword == "OBJSENSE" and len(tokens) > 1:
                _apply_objsense(st, tokens[1], line_no)
            elif keyword == "ENDATA":
                saw_endata = True
            continue

        if section is None:
            raise MpsParseError("data before any section header", line_no)

        tokens = _tokenize(line, fixed)
        if not tokens:
            continue

        if section == "OBJSENSE":
            _apply_objsense(st, tokens[0], line_no)
        elif section == "OBJNAME":
            pass  # objective row is identified by its N marker
        elif section == "ROWS":
            _parse_row(st, tokens, line_no)
        elif section == "COLUMNS":
            in_integer_block = _parse_column(st, tokens, line_no, in_integer_block)
        elif section == "RHS":
            _parse_pairs(st, tokens, line_no, st.rhs)
        elif section == "RANGES":
            _parse_pairs(st, tokens, line_no, st.ranges)
        elif section == "BOUNDS":
            _parse_bound(st, tokens, line_no)
        else:
            raise MpsParseError(f"data in section {section}", line_no)

    if section_rank < _SECTION_ORDER["COLUMNS"]:
        raise MpsParseError("missing COLUMNS section", len(lines))
    if not saw_endata:
        raise MpsParseError("missing ENDATA", len(lines))
    return _finalize(st)


def parse_mps_file(path) -> MilpInstance:
    with open(path, "rb") as fh:
        return parse_mps(fh)


def _apply_objsense(st: _ParserState, token: str, line_no: int) -> None:
    up = token.upper()
    if up in ("MAX", "MAXIMIZE"):
        st.objective_sense = ObjSense.MAX
    elif up in ("MIN", "MINIMIZE"):
        st.objective_sense = ObjSense.MIN
    else:
        raise MpsParseError(f"unknown OBJSENSE value {token!r}", line_no)


def _parse_row(st: _ParserState, tokens: list[str], line_no: int) -> None:
    if len(tokens) < 2:
        raise MpsParseError("ROWS entry needs a type and a name", line_no)
    rtype, name = tokens[0].upper(), tokens[1]
    if name in st.row_sense or name in st.free_rows or name == st.obj_row:
        raise MpsParseError(f"duplicate row {name!r}", line_no)
    if rtype == "N":
        if st.obj_row is None:
            st.obj_row = name
        else:
            st.free_rows.add(name)
    elif rtype == "L":
        st.row_sense[name] = Sense.LE
        st.row_order.append(name)
        st.entries[name] = {}
    elif rtype == "G":
        st.row_sense[name] = Sense.GE
        st.row_order.append(name)
        st.entries[name] = {}
    elif rtype == "E":
        st.row_sense[name] = Sense.EQ
        st.row_order.append(name)
        st.entries[name] = {}
    else:
        raise MpsParseError(f"unknown row type {tokens[0]!r}", line_no)


def _parse_column(
    st: _ParserState, tokens: list[str], line_no: int, in_integer_block: bool
) -> bool:
    if "'MARKER'" in tokens:
        if "'INTORG'" in tokens:
            return True
        if "'INTEND'" in tokens:
            return False
        raise MpsParseError("MARKER line without INTORG/INTEND", line_no)
    if len(tokens) < 3 or len(tokens) % 2 == 0:
        raise MpsParseError("COLUMNS entry needs name plus (row, value) pairs", line_no)
    idx = st.var(tokens[0], line_no, create=True)
    if in_integer_block:
        st.integer_vars.add(idx)
    for k in range(1, len(tokens), 2):
        row, value = tokens[k], _to_float(tokens[k + 1], line_no)
        if row == st.obj_row:
            if idx in st.obj_coeffs:
                raise MpsParseError(
                    f"duplicate objective coefficient for column {tokens[0]!r}", line_no
                )
            st.obj_coeffs[idx] = value
        elif row in st.row_sense:
            row_entries = st.entries[row]
            if idx in row_entries:
                raise MpsParseError(
                    f"duplicate coefficient for ({row!r}, {tokens[0]!r})", line_no
                )
            row_entries[idx] = value
            if value != 0.0:
                st.entry_order.append((row, idx, value))
        elif row in st.free_rows:
            continue  # free rows beyond the first N are ignored
        else:
            raise MpsParseError(f"unknown row {row!r}", line_no)
    return in_integer_block


def _parse_pairs(
    st: _ParserState, tokens: list[str], line_no: int, target: dict[str, float]
) -> None:
    # layout: set_name (row value)+ ; tolerate a missing set name
    start = 1 if len(tokens) % 2 == 1 else 0
    if len(tokens) - start < 2:
        raise MpsParseError("entry needs (row, value) pairs", line_no)
    for k in range(start, len(tokens), 2):
        row, value = tokens[k], _to_float(tokens[k + 1], line_no)
        if row == st.obj_row or row in st.free_rows:
            continue  # objective-row RHS (constant term) is out of scope
        if row not in st.row_sense:
            raise MpsParseError(f"unknown row {row!r}", line_no)
        target[row] = value


def _parse_bound(st: _ParserState, tokens: list[str], line_no: int) -> None:
    btype = tokens[0].upper()
    if btype in _BOUND_TYPES_NO_VALUE:
        if len(tokens) < 2:
            raise MpsParseError("BOUNDS entry needs a variable name", line_no)
        # bound-set name is optional; the variable is the last token
        var_name = tokens[-1] if len(tokens) == 2 else tokens[2]
        idx = st.var(var_name, line_no, create=False)
        value = None
    elif btype in _BOUND_TYPES_WITH_VALUE:
        if len(tokens) == 3:
            var_name, raw = tokens[1], tokens[2]
        elif len(tokens) >= 4:
            var_name, raw = tokens[2], tokens[3]
        else:
            raise MpsParseError("BOUNDS entry needs a variable and a value", line_no)
        idx = st.var(var_name, line_no, create=False)
        value = _to_float(raw, line_no)
    else:
        raise MpsParseError(f"unknown bound type {tokens[0]!r}", line_no)

    if btype == "LO":
        st.explicit_lower[idx] = value
        st.lower_was_set.add(idx)
    elif btype == "UP":
        st.explicit_upper[idx] = value
        # classic MPS convention: a negative upper bound on a variable whose
        # lower bound was never set frees the lower bound
        if value < 0.0 and idx not in st.lower_was_set:
            st.explicit_lower[idx] = -INF
    elif btype == "FX":
        st.explicit_lower[idx] = value
        st.explicit_upper[idx] = value
        st.lower_was_set.add(idx)
    elif btype == "FR":
        st.explicit_lower[idx] = -INF
        st.explicit_upper[idx] = INF
        st.lower_was_set.add(idx)
    elif btype == "MI":
        st.explicit_lower[idx] = -INF
        st.lower_was_set.add(idx)
    elif btype == "PL":
        st.explicit_upper[idx] = INF
    elif btype == "BV":
        st.explicit_lower[idx] = 0.0
        st.explicit_upper[idx] = 1.0
        st.lower_was_set.add(idx)
        st.integer_vars.add(idx)
    elif btype == "LI":
        st.explicit_lower[idx] = value
        st.lower_was_set.add(idx)
        st.integer_vars.add(idx)
    elif btype == "UI":
        st.explicit_upper[idx] = value
        st.integer_vars.add(idx)


def _finalize(st: _ParserState) -> MilpInstance:
    variables = []
    for idx, name in enumerate(st.var_order):
        is_int = idx in st.integer_vars
        lower = st.explicit_lower.get(idx, 0.0)
        upper = st.explicit_upper.get(idx, INF)
        variables.append(
            VariableRecord(
                name=name,
                obj_coeff=st.obj_coeffs.get(idx, 0.0),
                lower_bound=lower,
                upper_bound=upper,
                is_integer=is_int,
            )
        )

    constraints: list[ConstraintRecord] = []
    companions: list[tuple[ConstraintRecord, str]] = []
    for name in st.row_order:
        sense = st.row_sense[name]
        rhs = st.rhs.get(name, 0.0)
        rng = st.ranges.get(name)
        if rng is None or (sense is Sense.EQ and rng == 0.0):
            constraints.append(ConstraintRecord(name, sense, rhs))
            continue
        # standard RANGES semantics: the row becomes two-sided; the primary
        # keeps its own rhs and the companion carries the other side
        if sense is Sense.LE:
            primary = ConstraintRecord(name, Sense.LE, rhs)
            companion = ConstraintRecord(f"{name}__rng", Sense.GE, rhs - abs(rng))
        elif sense is Sense.GE:
            primary = ConstraintRecord(name, Sense.GE, rhs)
            companion = ConstraintRecord(f"{name}__rng", Sense.LE, rhs + abs(rng))
        elif rng > 0:  # EQ: interval [rhs, rhs + rng]
            primary = ConstraintRecord(name, Sense.GE, rhs)
            companion = ConstraintRecord(f"{name}__rng", Sense.LE, rhs + rng)
        else:  # EQ: interval [rhs + rng, rhs]
            primary = ConstraintRecord(name, Sense.LE, rhs)
            companion = ConstraintRecord(f"{name}__rng", Sense.GE, rhs + rng)
        constraints.append(primary)
        companions.append((companion, name))

    source_of: dict[str, str] = {}
    for companion, source in companions:
        if companion.name in st.row_sense:
            raise MpsParseError(
                f"row name {companion.name!r} collides with a RANGES companion"
            )
        constraints.append(companion)
        source_of[companion.name] = source

    row_index = {c.name: i for i, c in enumerate(constraints)}
    entries = [
        (row_index[row], col, value) for row, col, value in st.entry_order
    ]
    for companion, source in companions:
        for col, value in st.entries[source].items():
            if value != 0.0:
                entries.append((row_index[companion.name], col, value))

    matrix = SparseMatrix(
        n_rows=len(constraints), n_cols=len(variables), entries=tuple(entries)
    )
    return MilpInstance(
        name=st.name,
        objective_sense=st.objective_sense,
        variables=tuple(variables),
        constraints=tuple(constraints),
        matrix=matrix,
    )


# ---------------------------------------------------------------------------
# Serialization (free format)
# ---------------------------------------------------------------------------


def _fmt(value: float) -> str:
    if value == int(value) and abs(value) < 1e15:
        return str(int(value))
    return repr(float(value))


def write_mps(inst: MilpInstance) -> str:
    """Serialize an instance as free-format MPS text (round-trips through
    parse_mps field-for-field)."""
    out = [f"NAME          {inst.name}".rstrip()]
    if inst.objective_sense is ObjSense.MAX:
        out.append("OBJSENSE")
        out.append("    MAX")
    out.append("ROWS")
    out.append(" N  OBJ")
    sense_letter = {Sense.LE: "L", Sense.EQ: "E", Sense.GE: "G"}
    for con in inst.constraints:
        out.append(f" {sense_letter[con.sense]}  {con.name}")

    by_col: dict[int, list[tuple[str, float]]] = {}
    for row, col, value in inst.matrix.entries:
        by_col.setdefault(col, []).append((inst.constraints[row].name, value))

    out.append("COLUMNS")
    in_int = False
    marker_id = 0
    for idx, var in enumerate(inst.variables):
        if var.is_integer and not in_int:
            out.append(f"    M{marker_id}  'MARKER'  'INTORG'")
            marker_id += 1
            in_int = True
        elif not var.is_integer and in_int:
            out.append(f"    M{marker_id}  'MARKER'  'INTEND'")
            marker_id += 1
            in_int = False
        pairs = [("OBJ", var.obj_coeff)]
        pairs += by_col.get(idx, [])
        for k in range(0, len(pairs), 2):
            chunk = pairs[k : k + 2]
            fields = "  ".join(f"{row}  {_fmt(v)}" for row, v in chunk)
            out.append(f"    {var.name}  {fields}")
    if in_int:
        out.append(f"    M{marker_id}  'MARKER'  'INTEND'")

    out.append("RHS")
    for con in inst.constraints:
        if con.rhs != 0.0:
            out.append(f"    RHS  {con.name}  {_fmt(con.rhs)}")

    bound_lines = []
    for var in inst.variables:
        lo, up = var.lower_bound, var.upper_bound
        if var.is_integer and lo == 0.0 and up == 1.0:
            bound_lines.append(f" BV BND  {var.name}")
            continue
        if lo == 0.0 and up == INF:
            continue
        if lo == -INF and up == INF:
            bound_lines.append(f" FR BND  {var.name}")
            continue
        if lo == up:
            bound_lines.append(f" FX BND  {var.name}  {_fmt(lo)}")
            continue
        if lo == -INF:
            bound_lines.append(f" MI BND  {var.name}")
        elif lo != 0.0:
            bound_lines.append(f" LO BND  {var.name}  {_fmt(lo)}")
        if up != INF:
            bound_lines.append(f" UP BND  {var.name}  {_fmt(up)}")
    if bound_lines:
        out.append("BOUNDS")
        out.extend(bound_lines)

    out.append("ENDATA")
    return "\n".join(out) + "\n"


def write_mps_file(inst: MilpInstance, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(write_mps(inst))


# ---------------------------------------------------------------------------
# Synthetic set-partitioning generator
# ---------------------------------------------------------------------------


def generate_set_partitioning(
    seed: int, n_flights: int, n_pairings: int
) -> MilpInstance:
    """Deterministic, feasible-by-construction set-partitioning instance.

    One EQ constraint per flight (rhs 1), binary pairing variables with
    positive integer costs, each pairing covering 2-6 flights (clamped for
    tiny flight counts).  A full partition of the flights is planted so at
    least one feasible cover exists.
    """
    if n_flights < 1:
        raise ValueError("n_flights must be >= 1")
    if n_pairings < n_flights:
        raise ValueError("n_pairings must be >= n_flights")

    rng = np.random.default_rng(seed)
    lo_cover = min(2, n_flights)
    hi_cover = min(6, n_flights)

    # plant a partition: shuffle flights and chop into chunks of 2-6
    perm = rng.permutation(n_flights)
    chunks: list[np.ndarray] = []
    pos = 0
    while pos < n_flights:
        remaining = n_flights - pos
        if remaining <= hi_cover:
            size = remaining
        else:
            size = int(rng.integers(lo_cover, hi_cover + 1))
            if remaining - size == 1:  # never strand a single flight
                size = size + 1 if size < hi_cover else size - 1
        chunks.append(perm[pos : pos + size])
        pos += size

    covers: list[np.ndarray] = [np.sort(c) for c in chunks]
    while len(covers) < n_pairings:
        size = int(rng.integers(lo_cover, hi_cover + 1))
        covers.append(np.sort(rng.choice(n_flights, size=size, replace=False)))
    order = rng.permutation(len(covers))
    covers = [covers[i] for i in order]

    costs = rng.integers(1, 101, size=n_pairings)
    width = len(str(n_pairings))
    variables = tuple(
        VariableRecord(
            name=f"PAIR{j + 1:0{width}d}",
            obj_coeff=float(costs[j]),
            lower_bound=0.0,
            upper_bound=1.0,
            is_integer=True,
        )
        for j in range(n_pairings)
    )
    fwidth = len(str(n_flights))
    constraints = tuple(
        ConstraintRecord(name=f"FLT{i + 1:0{fwidth}d}", sense=Sense.EQ, rhs=1.0)
        for i in range(n_flights)
    )
    entries = tuple(
        (int(flight), j, 1.0) for j, cover in enumerate(covers) for flight in cover
    )
    matrix = SparseMatrix(n_rows=n_flights, n_cols=n_pairings, entries=entries)
    return MilpInstance(
        name=f"SETPART_S{seed}_F{n_flights}_P{n_pairings}",
        objective_sense=ObjSense.MIN,
        variables=variables,
        constraints=constraints,
        matrix=matrix,
    )
