"""Poset text format, witness serialisation and Hasse-diagram output.

Format: a ``poset <n>`` header, relation lines ``<i> < <j>`` (closure is
applied on read), optional ``# name <i> <label>`` comment lines, and an
optional ``convex-family`` companion section of ``set <id>: i j k ...``
lines.  Whitespace separated, LF endings.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

from .core import Poset, bits, poset_from_covers, subset_from_iter
from .errors import ParseError


@dataclass
class Document:
    poset: Poset
    labels: dict = field(default_factory=dict)
    convex_family: dict = field(default_factory=dict)


def parse_document(text):
    n = None
    covers = []
    labels = {}
    family = {}
    in_family = False
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line:
            continue
        tokens = line.split()
        if tokens[0] == "#":
            if len(tokens) >= 4 and tokens[1] == "name":
                try:
                    labels[int(tokens[2])] = tokens[3]
                except ValueError:
                    raise ParseError(f"line {lineno}: bad name index")
            continue
        if tokens[0] == "poset":
            if n is not None:
                raise ParseError(f"line {lineno}: duplicate header")
            try:
                n = int(tokens[1])
            except (IndexError, ValueError):
                raise ParseError(f"line {lineno}: bad poset header")
            continue
        if tokens[0] == "convex-family":
            in_family = True
            continue
        if in_family and tokens[0] == "set":
            try:
                ident = int(tokens[1].rstrip(":"))
                members = [int(t) for t in tokens[2:]]
            except ValueError:
                raise ParseError(f"line {lineno}: bad set line")
            family[ident] = subset_from_iter(members)
            continue
        if len(tokens) == 3 and tokens[1] == "<":
            try:
                covers.append((int(tokens[0]), int(tokens[2])))
            except ValueError:
                raise ParseError(f"line {lineno}: bad relation line")
            continue
        raise ParseError(f"line {lineno}: unrecognised line {line!r}")
    if n is None:
        raise ParseError("missing 'poset <n>' header")
    try:
        P = poset_from_covers(n, covers)
    except Exception as exc:
        raise ParseError(f"relation is not a partial order: {exc}")
    return Document(P, labels, family)


def parse_poset(text):
    doc = parse_document(text)
    return doc.poset, doc.labels


def format_poset(P, labels=None, families=None):
    lines = [f"poset {P.n}"]
    for i, j in P.covers():
        lines.append(f"{i} < {j}")
    if labels:
        for i in sorted(labels):
            lines.append(f"# name {i} {labels[i]}")
    if families:
        lines.append("convex-family")
        for ident in sorted(families):
            members = " ".join(str(x) for x in bits(families[ident]))
            lines.append(f"set {ident}: {members}")
    return "\n".join(lines) + "\n"


def format_multimap(mm):
    """Witness map lines: ``map: x -> {a b c}``."""
    out = []
    for x, m in enumerate(mm.values):
        inner = " ".join(str(y) for y in bits(m))
        out.append(f"map: {x} -> {{{inner}}}")
    return "\n".join(out)


def format_endomap(f):
    return "\n".join(
        f"map: {x} -> {{{v}}}" for x, v in enumerate(f.values)
    )


def format_selection(sel, set_ids=None):
    """Selection lines: ``select <set-id> -> <element>``."""
    out = []
    for i, v in enumerate(sel.values):
        ident = i if set_ids is None else set_ids[i]
        out.append(f"select {ident} -> {v}")
    return "\n".join(out)


def verdict_record(v):
    return json.dumps(
        {
            "property": v.prop,
            "holds": v.holds,
            "fast_path": v.fast_path,
            "nodes": v.nodes,
        }
    )


def format_witness(witness):
    """Serialise whichever witness a verdict carries, for reports."""
    from .core import MonotoneMap
    from .deciders import MultiMap

    if witness is None:
        return ""
    if isinstance(witness, MultiMap):
        return format_multimap(witness)
    if isinstance(witness, MonotoneMap):
        return format_endomap(witness)
    if isinstance(witness, tuple) and all(
        isinstance(w, MonotoneMap) for w in witness
    ):
        parts = []
        for name, w in zip(("s", "r"), witness):
            body = " ".join(f"{x}->{v}" for x, v in enumerate(w.values))
            parts.append(f"{name}: {body}")
        return "\n".join(parts)
    if isinstance(witness, dict):
        return json.dumps(witness, sort_keys=True)
    return str(witness)


# --- Hasse diagrams -----------------------------------------------------


def _dot_text(names, edges, graph_name):
    lines = [f"digraph {graph_name} {{", "  rankdir=BT;"]
    for i, name in enumerate(names):
        safe = name.replace('"', "'")
        lines.append(f'  n{i} [label="{safe}"];')
    for i, j in edges:
        lines.append(f"  n{i} -> n{j};")
    lines.append("}")
    return "\n".join(lines) + "\n"


def poset_dot(P, labels=None, graph_name="hasse"):
    names = [
        labels.get(i, str(i)) if labels else str(i) for i in range(P.n)
    ]
    return _dot_text(names, P.covers(), graph_name)


def _set_name(mask, labels):
    inner = ",".join(
        labels.get(x, str(x)) if labels else str(x) for x in bits(mask)
    )
    return "{" + inner + "}"


def cposet_dot(cp, labels=None, graph_name="convex_sets"):
    names = [_set_name(m, labels) for m in cp.sets]
    return _dot_text(names, cp.as_poset().covers(), graph_name)


def cllattice_dot(cl, labels=None, graph_name="convex_sublattices"):
    names = [_set_name(m, labels) for m in cl.sets]
    return _dot_text(names, cl.order.covers(), graph_name)
