"""Scenario files: a line-oriented ``key: value`` format with nested blocks.

Grammar (two-space indentation per level, ``#`` starts a comment line):

    name: eq9-qubit
    seed: 7
    construction: coherent_measurement_channel
      beta: 1.0
    epsilon_grid:
      min: 1e-3
      max: 1.0
      points_per_decade: 25
    checks: validate gibbs recovery C delta bounds

Scalar values parse as int, then float, then string; a value of several
whitespace-separated numbers parses as a list of floats.  Complex matrices
are blocks of repeated ``row:`` lines whose entries are ``[re, im]`` pairs
in row-major order:

    eta:
      row: [0.5, 0.0] [0.5, 0.0]
      row: [0.5, 0.0] [0.5, 0.0]

This module also owns the channel serialization record (input system,
output system, Kraus operators as ``[re, im]`` pair rows).
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

import numpy as np

from .channels import QuantumChannel
from .errors import ScenarioParseError
from .quantum import SystemSpec

__all__ = [
    "Scenario",
    "EpsilonGridSpec",
    "parse_scenario_text",
    "load_scenario",
    "parse_matrix_block",
    "channel_to_record",
    "channel_from_record",
]

_INDENT = "  "
_PAIR_RE = re.compile(r"\[\s*([^\[\],]+)\s*,\s*([^\[\],]+)\s*\]")


@dataclass
class Node:
    """One parsed line: optional scalar value plus nested children."""

    value: object = None
    children: dict = field(default_factory=dict)
    repeated: list = field(default_factory=list)


@dataclass(frozen=True)
class EpsilonGridSpec:
    minimum: float = 1e-3
    maximum: float = 1.0
    points_per_decade: int = 25


@dataclass(frozen=True)
class Scenario:
    name: str
    construction: str
    params: dict
    epsilon_grid: EpsilonGridSpec
    checks: tuple
    seed: int


def _parse_scalar(text: str):
    text = text.strip()
    try:
        return int(text)
    except ValueError:
        pass
    try:
        return float(text)
    except ValueError:
        pass
    tokens = text.split()
    if len(tokens) > 1:
        try:
            return [float(t) for t in tokens]
        except ValueError:
            pass
    return text


def _parse_complex_row(text: str, lineno: int) -> list[complex]:
    pairs = _PAIR_RE.findall(text)
    if not pairs or _PAIR_RE.sub("", text).strip():
        raise ScenarioParseError(
            f"line {lineno}: matrix row must be a sequence of [re, im] pairs, got {text!r}"
        )
    try:
        return [complex(float(re_part), float(im_part)) for re_part, im_part in pairs]
    except ValueError as exc:
        raise ScenarioParseError(f"line {lineno}: bad complex entry ({exc})") from exc


def _parse_block(lines: list[tuple[int, int, str]], start: int, level: int) -> tuple[Node, int]:
    node = Node()
    idx = start
    while idx < len(lines):
        lineno, indent, text = lines[idx]
        if indent < level:
            break
        if indent > level:
            raise ScenarioParseError(f"line {lineno}: unexpected indentation")
        if ":" not in text:
            raise ScenarioParseError(f"line {lineno}: expected 'key: value', got {text!r}")
        key, _, rest = text.partition(":")
        key = key.strip()
        rest = rest.strip()
        idx += 1
        child = Node()
        if rest:
            if key == "row":
                child.value = _parse_complex_row(rest, lineno)
            else:
                child.value = _parse_scalar(rest)
        if idx < len(lines) and lines[idx][1] > level:
            if lines[idx][1] != level + 1:
                raise ScenarioParseError(f"line {lines[idx][0]}: indentation must grow by one level")
            sub, idx = _parse_block(lines, idx, level + 1)
            child.children = sub.children
        if key in node.children:
            node.children[key].append(child)
        else:
            node.children[key] = [child]
    return node, idx


def _tokenize(text: str) -> list[tuple[int, int, str]]:
    out = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        stripped = raw.strip()
        if not stripped or stripped.startswith("#"):
            continue
        body = raw.rstrip()
        leading = body[: len(body) - len(body.lstrip())]
        if "\t" in leading:
            raise ScenarioParseError(f"line {lineno}: tabs are not allowed in indentation")
        spaces = len(leading)
        if spaces % len(_INDENT) != 0:
            raise ScenarioParseError(f"line {lineno}: indentation must be multiples of two spaces")
        out.append((lineno, spaces // len(_INDENT), body.strip()))
    return out


def _single(node: Node, key: str, required: bool = True):
    entries = node.children.get(key, [])
    if not entries:
        if required:
            raise ScenarioParseError(f"missing required key {key!r}")
        return None
    if len(entries) > 1:
        raise ScenarioParseError(f"key {key!r} given more than once")
    return entries[0]


def parse_matrix_block(entry: Node, what: str = "matrix") -> np.ndarray:
    rows = entry.children.get("row", [])
    if not rows:
        raise ScenarioParseError(f"{what}: expected one or more 'row:' lines")
    data = [r.value for r in rows]
    width = len(data[0])
    if any(len(r) != width for r in data):
        raise ScenarioParseError(f"{what}: rows have unequal lengths")
    return np.array(data, dtype=complex)


def _node_to_param(entry: Node):
    if entry.children.get("row"):
        return parse_matrix_block(entry)
    if entry.children:
        return {k: _node_to_param(v[0]) for k, v in entry.children.items()}
    return entry.value


def parse_scenario_text(text: str) -> Scenario:
    """Parse scenario text; raises :class:`ScenarioParseError` on any
    malformed input."""
    lines = _tokenize(text)
    root, consumed = _parse_block(lines, 0, 0)
    if consumed != len(lines):
        raise ScenarioParseError("trailing unparsed lines")

    name_entry = _single(root, "name")
    name = str(name_entry.value)
    if not re.fullmatch(r"[A-Za-z0-9_.-]+", name):
        raise ScenarioParseError(f"scenario name {name!r} must be a file-safe identifier")

    ctor_entry = _single(root, "construction")
    construction = str(ctor_entry.value)
    if not construction or construction == "None":
        raise ScenarioParseError("construction requires an identifier value")
    params = {k: _node_to_param(v[0]) for k, v in ctor_entry.children.items()}

    grid_entry = _single(root, "epsilon_grid", required=False)
    if grid_entry is None:
        grid = EpsilonGridSpec()
    else:
        defaults = EpsilonGridSpec()
        minimum = _single(grid_entry, "min", required=False)
        maximum = _single(grid_entry, "max", required=False)
        ppd = _single(grid_entry, "points_per_decade", required=False)
        grid = EpsilonGridSpec(
            minimum=float(minimum.value) if minimum else defaults.minimum,
            maximum=float(maximum.value) if maximum else defaults.maximum,
            points_per_decade=int(ppd.value) if ppd else defaults.points_per_decade,
        )
        if not (0 < grid.minimum < grid.maximum):
            raise ScenarioParseError("epsilon_grid requires 0 < min < max")

    checks_entry = _single(root, "checks", required=False)
    if checks_entry is None:
        checks: tuple = ()
    else:
        value = checks_entry.value
        names = value.split() if isinstance(value, str) else [str(value)]
        checks = tuple(names)

    seed_entry = _single(root, "seed", required=False)
    seed = int(seed_entry.value) if seed_entry is not None else 0

    return Scenario(
        name=name,
        construction=construction,
        params=params,
        epsilon_grid=grid,
        checks=checks,
        seed=seed,
    )


def load_scenario(path) -> Scenario:
    try:
        with open(path, "r", encoding="utf-8") as handle:
            text = handle.read()
    except OSError as exc:
        raise ScenarioParseError(f"cannot read scenario file {path!r}: {exc}") from exc
    return parse_scenario_text(text)


# -- channel serialization -------------------------------------------------------


def _matrix_lines(m: np.ndarray, indent: str) -> list[str]:
    lines = []
    for row in np.asarray(m, dtype=complex):
        cells = " ".join(f"[{z.real:.17g}, {z.imag:.17g}]" for z in row)
        lines.append(f"{indent}row: {cells}")
    return lines


def _system_lines(tag: str, system: SystemSpec, indent: str) -> list[str]:
    lines = [
        f"{indent}{tag}:",
        f"{indent}  label: {system.label}",
        f"{indent}  dim: {system.dim}",
        f"{indent}  beta: {system.beta:.17g}",
        f"{indent}  hamiltonian:",
    ]
    lines.extend(_matrix_lines(system.hamiltonian, indent + "    "))
    return lines


def channel_to_record(ch: QuantumChannel, name: str = "channel") -> str:
    """Serialize a channel as a scenario-format text record."""
    lines = [f"name: {name}", "kind: channel"]
    lines.extend(_system_lines("input", ch.input, ""))
    lines.extend(_system_lines("output", ch.output, ""))
    lines.append("kraus:")
    for k in ch.kraus:
        lines.append("  operator:")
        lines.extend(_matrix_lines(k, "    "))
    return "\n".join(lines) + "\n"


def _system_from_node(entry: Node, tag: str) -> SystemSpec:
    label = _single(entry, "label")
    dim = _single(entry, "dim")
    beta = _single(entry, "beta")
    ham = parse_matrix_block(_single(entry, "hamiltonian"), f"{tag}.hamiltonian")
    return SystemSpec(str(label.value), int(dim.value), ham, float(beta.value))


def channel_from_record(text: str) -> QuantumChannel:
    """Rebuild a channel from :func:`channel_to_record` output."""
    root, _ = _parse_block(_tokenize(text), 0, 0)
    kind = _single(root, "kind")
    if str(kind.value) != "channel":
        raise ScenarioParseError(f"record kind {kind.value!r} is not 'channel'")
    input_system = _system_from_node(_single(root, "input"), "input")
    output_system = _system_from_node(_single(root, "output"), "output")
    kraus_entry = _single(root, "kraus")
    ops = [
        parse_matrix_block(op, "kraus.operator")
        for op in kraus_entry.children.get("operator", [])
    ]
    if not ops:
        raise ScenarioParseError("channel record has no Kraus operators")
    return QuantumChannel(tuple(ops), input_system, output_system)
