"""CPLEX LP text for :class:`MilpModel`, and a reader for the subset we write.

Layout::

    \\ Problem name: <name>
    \\ big_m = <value>
    Maximize
     obj: + y_1_1 + y_2_1
    Subject To
     c3b_out_1: + x_0_1_1 + x_0_2_1 - z_1 = 0
       + ...            (continuation lines are indented)
    Bounds
     x_0_0_1 = 0
     s_0_1 >= 0
    Binaries
     x_0_0_1 x_0_1_1 ...
    End

Only integral coefficients occur because rows are scaled when the model is
built.  The reader rebuilds an identical model from this text.
"""

from __future__ import annotations

from fractions import Fraction
from pathlib import Path

from fleet_design.errors import ParseError
from fleet_design.milp.model import EQ, GE, LE, Constraint, MilpModel, Terms, Variable
from fleet_design.models.quantities import dump_rational

TERMS_PER_LINE = 8
SECTIONS = ("maximize", "subject to", "bounds", "binaries", "end")


def _format_number(value: Fraction) -> str:
    return str(dump_rational(value))


def _format_terms(terms: Terms) -> list[str]:
    parts: list[str] = []
    for coef, name in terms:
        sign = "-" if coef < 0 else "+"
        magnitude = abs(coef)
        if magnitude == 1:
            parts.append(f"{sign} {name}")
        else:
            parts.append(f"{sign} {_format_number(magnitude)} {name}")
    return parts


def _wrap(head: str, parts: list[str], tail: str = "") -> list[str]:
    lines: list[str] = []
    for start in range(0, max(len(parts), 1), TERMS_PER_LINE):
        chunk = " ".join(parts[start : start + TERMS_PER_LINE])
        lines.append(f" {head} {chunk}".rstrip() if start == 0 else f"   {chunk}")
    if tail:
        lines[-1] = f"{lines[-1]} {tail}"
    return lines


def write_lp(model: MilpModel) -> str:
    """Render *model* as LP text (newline terminated)."""
    out = [f"\\ Problem name: {model.name}", f"\\ big_m = {_format_number(model.big_m)}"]
    out.append("Maximize")
    out.extend(_wrap("obj:", _format_terms(model.objective)))
    out.append("Subject To")
    for row in model.constraints:
        out.extend(
            _wrap(
                f"{row.name}:",
                _format_terms(row.terms),
                f"{row.sense} {_format_number(row.rhs)}",
            )
        )
    out.append("Bounds")
    for var in model.variables:
        if var.fixed:
            out.append(f" {var.name} = {_format_number(var.lower)}")
        elif not var.binary:
            out.append(f" {var.name} >= {_format_number(var.lower)}")
    out.append("Binaries")
    binaries = [var.name for var in model.variables if var.binary]
    for start in range(0, len(binaries), TERMS_PER_LINE):
        out.append(" " + " ".join(binaries[start : start + TERMS_PER_LINE]))
    out.append("End")
    return "\n".join(out) + "\n"


def save_lp(model: MilpModel, path: Path) -> Path:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(write_lp(model), encoding="utf-8")
    return path


# ---------------------------------------------------------------------------
# Reader
# ---------------------------------------------------------------------------


def _parse_terms(tokens: list[str], *, source: str, line: int) -> Terms:
    terms: list[tuple[Fraction, str]] = []
    pos = 0
    while pos < len(tokens):
        sign = tokens[pos]
        if sign not in ("+", "-"):
            raise ParseError(f"expected '+' or '-', got {sign!r}", source=source, line=line)
        pos += 1
        if pos >= len(tokens):
            raise ParseError("dangling sign", source=source, line=line)
        coef = Fraction(1)
        if tokens[pos][0].isdigit():
            try:
                coef = Fraction(tokens[pos])
            except ValueError as exc:
                raise ParseError(
                    f"bad coefficient {tokens[pos]!r}", source=source, line=line
                ) from exc
            pos += 1
        if pos >= len(tokens):
            raise ParseError("coefficient without a variable", source=source, line=line)
        terms.append((-coef if sign == "-" else coef, tokens[pos]))
        pos += 1
    return tuple(terms)


def _entries(lines: list[tuple[int, str]]) -> list[tuple[int, str]]:
    """Join continuation lines (indented by three spaces) onto their entry."""
    joined: list[tuple[int, str]] = []
    for number, text in lines:
        if text.startswith("   ") and joined:
            first, previous = joined[-1]
            joined[-1] = (first, f"{previous} {text.strip()}")
        else:
            joined.append((number, text.strip()))
    return joined


def read_lp(text: str, *, source: str = "<lp>") -> MilpModel:
    """Parse LP text produced by :func:`write_lp`.

    Raises:
        ParseError: On a missing section or a malformed line.
    """
    name = ""
    big_m: Fraction | None = None
    sections: dict[str, list[tuple[int, str]]] = {}
    current: str | None = None
    for number, raw in enumerate(text.splitlines(), start=1):
        if not raw.strip():
            continue
        if raw.startswith("\\"):
            comment = raw[1:].strip()
            if comment.startswith("Problem name:"):
                name = comment.split(":", 1)[1].strip()
            elif comment.startswith("big_m ="):
                big_m = Fraction(comment.split("=", 1)[1].strip())
            continue
        header = raw.strip().lower()
        if header in SECTIONS:
            current = header
            sections[current] = []
            continue
        if current is None:
            raise ParseError("content before the first section", source=source, line=number)
        sections[current].append((number, raw))

    for section in SECTIONS:
        if section not in sections:
            raise ParseError(f"missing section '{section.title()}'", source=source, field=section)
    if big_m is None:
        raise ParseError("missing big_m comment", source=source, field="big_m")

    objective: Terms = ()
    for number, entry in _entries(sections["maximize"]):
        label, _, body = entry.partition(":")
        if label.strip() != "obj":
            raise ParseError("objective must be named 'obj'", source=source, line=number)
        objective = _parse_terms(body.split(), source=source, line=number)

    rows: list[Constraint] = []
    for number, entry in _entries(sections["subject to"]):
        label, colon, body = entry.partition(":")
        tokens = body.split()
        if not colon or len(tokens) < 2 or tokens[-2] not in (LE, GE, EQ):
            raise ParseError("malformed constraint", source=source, line=number)
        rows.append(
            Constraint(
                name=label.strip(),
                terms=_parse_terms(tokens[:-2], source=source, line=number),
                sense=tokens[-2],
                rhs=Fraction(tokens[-1]),
            )
        )

    binaries: list[str] = []
    for _, entry in _entries(sections["binaries"]):
        binaries.extend(entry.split())
    bounds: dict[str, tuple[str, Fraction]] = {}
    continuous: list[str] = []
    for number, entry in _entries(sections["bounds"]):
        tokens = entry.split()
        if len(tokens) != 3 or tokens[1] not in (EQ, GE):
            raise ParseError("malformed bound", source=source, line=number)
        bounds[tokens[0]] = (tokens[1], Fraction(tokens[2]))
        if tokens[0] not in binaries and tokens[0] not in continuous:
            continuous.append(tokens[0])

    variables: list[Variable] = []
    for var_name in binaries:
        bound = bounds.get(var_name)
        if bound is not None and bound[0] == EQ:
            variables.append(Variable(var_name, binary=True, lower=bound[1], upper=bound[1]))
        else:
            variables.append(Variable(var_name, binary=True, upper=Fraction(1)))
    for var_name in continuous:
        sense, value = bounds[var_name]
        upper = value if sense == EQ else None
        variables.append(Variable(var_name, binary=False, lower=value, upper=upper))

    return MilpModel(
        name=name,
        objective=objective,
        constraints=tuple(rows),
        variables=tuple(variables),
        big_m=big_m,
    )


def load_lp(path: Path) -> MilpModel:
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ParseError(f"cannot read file: {exc.strerror}", source=str(path)) from exc
    return read_lp(text, source=str(path))
