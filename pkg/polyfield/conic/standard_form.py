"""
Plain-text standard form for conic programs.

Layout (``#`` starts a comment line)::

    VARS <group count>
    <kind> <size> <name>          one line per group, declaration order
    OBJ <nonzero count>
    c <column> <value>
    EQ <rows> <nonzero count>
    b <row> <rhs> <label>
    a <row> <column> <value>

Floats are written with ``repr`` so a re-import reproduces every bit.
"""

import logging
from pathlib import Path
from typing import List, TextIO, Union

import numpy as np

from ..errors import PolyfieldError, ProgramError
from ..types import ConeKind
from .program import ConicProgram, VariableRegistry, _matrix_from_triplets

logger = logging.getLogger(__name__)

Destination = Union[str, Path, TextIO]


def format_standard_form(program: ConicProgram) -> str:
    lines: List[str] = ["# polyfield conic program, standard form"]
    lines.append(f"VARS {len(program.groups)}")
    for g in program.groups:
        lines.append(f"{g.kind.value} {g.size} {g.name}")

    nz = np.nonzero(program.c)[0]
    lines.append(f"OBJ {nz.size}")
    for j in nz:
        lines.append(f"c {int(j)} {float(program.c[j])!r}")

    A = program.A.tocoo()
    order = np.lexsort((A.col, A.row))
    lines.append(f"EQ {program.num_equalities} {A.nnz}")
    for i, (rhs, label) in enumerate(zip(program.b, program.row_labels)):
        lines.append(f"b {i} {float(rhs)!r} {label}")
    for k in order:
        lines.append(f"a {int(A.row[k])} {int(A.col[k])} {float(A.data[k])!r}")
    return "\n".join(lines) + "\n"


def export_standard_form(program: ConicProgram, destination: Destination) -> str:
    """
    Write the standard-form text of ``program``.

    Args:
        program: Program to export
        destination: Path or writable text stream

    Returns:
        The written text

    Raises:
        PolyfieldError: If the destination cannot be written
    """
    text = format_standard_form(program)
    try:
        if isinstance(destination, (str, Path)):
            Path(destination).write_text(text, encoding="ascii")
            logger.info(f"Wrote standard form to {destination}")
        else:
            destination.write(text)
    except OSError as error:
        raise PolyfieldError(f"Could not write standard form: {error}", "WRITE_FAILED") from error
    return text


def _content_lines(text: str) -> List[List[str]]:
    out = []
    for raw in text.splitlines():
        line = raw.strip()
        if line and not line.startswith("#"):
            out.append(line.split())
    return out


def parse_standard_form(text: str) -> ConicProgram:
    """Inverse of ``format_standard_form``."""
    lines = _content_lines(text)
    pos = 0

    def expect(keyword: str) -> List[str]:
        nonlocal pos
        if pos >= len(lines) or lines[pos][0] != keyword:
            raise ProgramError(f"Expected section {keyword} at content line {pos + 1}")
        pos += 1
        return lines[pos - 1]

    registry = VariableRegistry()
    for _ in range(int(expect("VARS")[1])):
        kind, size, name = lines[pos]
        registry.declare(name, ConeKind(kind), int(size))
        pos += 1

    dim = registry.dimension
    c = np.zeros(dim)
    for _ in range(int(expect("OBJ")[1])):
        tag, j, v = lines[pos]
        if tag != "c":
            raise ProgramError(f"Bad objective line {' '.join(lines[pos])}")
        c[int(j)] = float(v)
        pos += 1

    header = expect("EQ")
    m, nnz = int(header[1]), int(header[2])
    b = np.zeros(m)
    labels = [""] * m
    rows, cols, vals = [], [], []
    for _ in range(m):
        tag, i, rhs, label = lines[pos]
        if tag != "b":
            raise ProgramError(f"Bad rhs line {' '.join(lines[pos])}")
        b[int(i)] = float(rhs)
        labels[int(i)] = label
        pos += 1
    for _ in range(nnz):
        tag, i, j, v = lines[pos]
        if tag != "a":
            raise ProgramError(f"Bad matrix line {' '.join(lines[pos])}")
        rows.append(int(i))
        cols.append(int(j))
        vals.append(float(v))
        pos += 1
    if pos != len(lines):
        raise ProgramError("Trailing content after EQ section")

    return ConicProgram(
        tuple(registry.groups),
        _matrix_from_triplets(rows, cols, vals, (m, dim)),
        b,
        c,
        tuple(labels),
    )


def import_standard_form(source: Union[str, Path, TextIO]) -> ConicProgram:
    """Read a program from a path or a text stream."""
    if isinstance(source, (str, Path)):
        return parse_standard_form(Path(source).read_text(encoding="ascii"))
    return parse_standard_form(source.read())
