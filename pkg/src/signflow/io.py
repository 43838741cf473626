"""Text formats: signed graph files, flow certificates, DOT export.

Graph file::

    sg <n> <m>
    <u> <v> <+|->        (m lines, 0-based vertex ids)

Blank lines and ``#`` comments are ignored.

Certificate file::

    cert k=<k> p=<p> q=<q>
    graph <sha256 of the rendered graph>
    guaranteed <yes|no>
    repairs <count>
    <edge_id> <eta_u> <eta_v> <value>     (one line per edge)
    stage <name>
    <key> = <scalar>
    <key> : <int> <int> ...
    <key> :: <count>
    - <int> <int> ...                      (count lines)

Scalars are integers, ``yes``/``no`` or a single word.
"""

from __future__ import annotations

import hashlib
import re
from dataclasses import dataclass

from .core import BiOrientation, Circulation, SignedGraph
from .errors import CertificateMismatch, GraphError, ParseError
from .pipeline import FlowCertificate, StageRecord


def _content_lines(text: str):
    for no, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if line:
            yield no, line


def _int(token: str, no: int, what: str) -> int:
    if not re.fullmatch(r"-?\d+", token):
        raise ParseError(f"{what} must be an integer, got {token!r}", no)
    return int(token)


def parse_graph(text: str) -> SignedGraph:
    lines = list(_content_lines(text))
    if not lines:
        raise ParseError("empty file, expected header 'sg <n> <m>'", 1)
    no, header = lines[0]
    parts = header.split()
    if len(parts) != 3 or parts[0] != "sg":
        raise ParseError(f"expected header 'sg <n> <m>', got {header!r}", no)
    n = _int(parts[1], no, "vertex count")
    m = _int(parts[2], no, "edge count")
    if n < 0 or m < 0:
        raise ParseError("counts must be non-negative", no)
    body = lines[1:]
    if len(body) != m:
        where = body[m][0] if len(body) > m else (body[-1][0] + 1 if body else no + 1)
        raise ParseError(f"header announces {m} edges, found {len(body)}", where)
    edges = []
    for no, line in body:
        parts = line.split()
        if len(parts) != 3 or parts[2] not in "+-" or len(parts[2]) != 1:
            raise ParseError(f"expected '<u> <v> <+|->', got {line!r}", no)
        u = _int(parts[0], no, "vertex id")
        v = _int(parts[1], no, "vertex id")
        for x in (u, v):
            if not 0 <= x < n:
                raise ParseError(f"vertex {x} out of range 0..{n - 1}", no)
        if u == v:
            raise ParseError(f"loop at vertex {u}", no)
        edges.append((u, v, 1 if parts[2] == "+" else -1))
    try:
        return SignedGraph.from_edges(n, edges)
    except GraphError as exc:
        raise ParseError(str(exc)) from exc


def render_graph(g: SignedGraph, comments: list[str] | None = None) -> str:
    out = [f"# {c}" for c in comments or []]
    out.append(f"sg {g.vertex_count} {g.m}")
    out += [f"{e.u} {e.v} {'+' if e.sign > 0 else '-'}" for e in g.edges]
    return "\n".join(out) + "\n"


def graph_digest(g: SignedGraph) -> str:
    """sha256 of the canonical rendering (comments and spacing do not matter)."""
    return hashlib.sha256(render_graph(g).encode()).hexdigest()


# --- certificates ---------------------------------------------------------------

def _sign(x: int) -> str:
    return "+" if x > 0 else "-"


def _render_value(key: str, value) -> list[str]:
    if isinstance(value, bool):
        return [f"{key} = {'yes' if value else 'no'}"]
    if isinstance(value, (int, str)):
        text = str(value)
        if isinstance(value, str) and (not text or " " in text):
            raise ValueError(f"stage value for {key!r} must be a single word")
        return [f"{key} = {text}"]
    items = tuple(value)
    if all(isinstance(x, int) and not isinstance(x, bool) for x in items):
        return [f"{key} :" + "".join(f" {x}" for x in items)]
    out = [f"{key} :: {len(items)}"]
    for row in items:
        out.append("-" + "".join(f" {int(x)}" for x in row))
    return out


def render_certificate(cert: FlowCertificate, digest: str | None = None) -> str:
    c = cert.flow
    out = [f"cert k={cert.k} p={cert.p} q={cert.q}",
           f"graph {digest or graph_digest(cert.graph)}",
           f"guaranteed {'yes' if cert.guaranteed else 'no'}",
           f"repairs {cert.repair_count}"]
    for e in c.graph.edges:
        a, b = c.orientation.eta[e.id]
        out.append(f"{e.id} {_sign(a)} {_sign(b)} {c.values[e.id]}")
    for stage in cert.stages:
        out.append(f"stage {stage.name}")
        for key, value in stage.data.items():
            out += _render_value(key, value)
    return "\n".join(out) + "\n"


@dataclass(frozen=True)
class CertificateData:
    """A parsed certificate, not yet tied to a graph."""

    k: int
    p: int
    q: int
    digest: str
    guaranteed: bool
    repair_count: int
    eta: tuple[tuple[int, int], ...]
    values: tuple[int, ...]
    stages: tuple[StageRecord, ...]

    def bind(self, g: SignedGraph) -> FlowCertificate:
        """Attach to ``g`` after checking the digest and edge count."""
        if graph_digest(g) != self.digest:
            raise CertificateMismatch("certificate was issued for a different graph (digest mismatch)")
        if len(self.values) != g.m:
            raise CertificateMismatch(f"certificate lists {len(self.values)} edges, graph has {g.m}")
        flow = Circulation(g, BiOrientation(self.eta), self.values)
        return FlowCertificate(flow, self.k, self.stages, self.repair_count, self.guaranteed)


def _scalar(token: str):
    if re.fullmatch(r"-?\d+", token):
        return int(token)
    if token in ("yes", "no"):
        return token == "yes"
    return token


def parse_certificate(text: str) -> CertificateData:
    lines = list(_content_lines(text))
    if not lines:
        raise ParseError("empty certificate", 1)
    no, head = lines[0]
    match = re.fullmatch(r"cert k=(\d+) p=(\d+) q=(\d+)", head)
    if not match:
        raise ParseError(f"expected 'cert k=<k> p=<p> q=<q>', got {head!r}", no)
    k, p, q = (int(x) for x in match.groups())
    fields = {}
    i = 1
    for name in ("graph", "guaranteed", "repairs"):
        if i >= len(lines):
            raise ParseError(f"missing '{name}' line", lines[-1][0] + 1)
        no, line = lines[i]
        parts = line.split()
        if len(parts) != 2 or parts[0] != name:
            raise ParseError(f"expected '{name} <value>', got {line!r}", no)
        fields[name] = parts[1]
        i += 1
    if fields["guaranteed"] not in ("yes", "no"):
        raise ParseError("guaranteed must be yes or no", lines[2][0])
    repairs = _int(fields["repairs"], lines[3][0], "repair count")

    eta, values = [], []
    while i < len(lines) and not lines[i][1].startswith("stage "):
        no, line = lines[i]
        parts = line.split()
        if len(parts) != 4 or parts[1] not in ("+", "-") or parts[2] not in ("+", "-"):
            raise ParseError(f"expected '<edge_id> <+|-> <+|-> <value>', got {line!r}", no)
        if _int(parts[0], no, "edge id") != len(values):
            raise ParseError(f"edge ids must run 0, 1, 2, ...; expected {len(values)}", no)
        eta.append((1 if parts[1] == "+" else -1, 1 if parts[2] == "+" else -1))
        values.append(_int(parts[3], no, "value"))
        i += 1

    stages = []
    while i < len(lines):
        no, line = lines[i]
        if not line.startswith("stage "):
            raise ParseError(f"expected 'stage <name>', got {line!r}", no)
        name = line.split(None, 1)[1].strip()
        data = {}
        i += 1
        while i < len(lines) and not lines[i][1].startswith("stage "):
            no, line = lines[i]
            m1 = re.fullmatch(r"(\w+) = (\S+)", line)
            m2 = re.fullmatch(r"(\w+) :((?: -?\d+)*)", line)
            m3 = re.fullmatch(r"(\w+) :: (\d+)", line)
            if m1:
                data[m1.group(1)] = _scalar(m1.group(2))
            elif m3:
                count = int(m3.group(2))
                rows = []
                for j in range(count):
                    i += 1
                    if i >= len(lines) or not re.fullmatch(r"-((?: -?\d+)*)", lines[i][1]):
                        raise ParseError(f"expected {count} '- ...' rows for {m3.group(1)!r}",
                                         lines[i][0] if i < len(lines) else no)
                    rows.append(tuple(int(x) for x in lines[i][1][1:].split()))
                data[m3.group(1)] = tuple(rows)
            elif m2:
                data[m2.group(1)] = tuple(int(x) for x in m2.group(2).split())
            else:
                raise ParseError(f"unreadable stage line {line!r}", no)
            i += 1
        stages.append(StageRecord(name, data))
    return CertificateData(k, p, q, fields["graph"], fields["guaranteed"] == "yes", repairs,
                           tuple(eta), tuple(values), tuple(stages))


# --- DOT --------------------------------------------------------------------------

def render_dot(c: Circulation, name: str = "signflow") -> str:
    """Positive edges as arrows tail -> head; sink edges with arrowheads at both
    ends, source edges with none; negative edges dashed; values as labels."""
    g = c.graph
    out = [f"digraph {name} {{", "  node [shape=circle];"]
    for x in range(g.vertex_count):
        out.append(f"  {x};")
    for e in g.edges:
        a, b = c.orientation.eta[e.id]
        label = f'label="{c.values[e.id]}"'
        if e.sign > 0:
            t, h = (e.u, e.v) if a == 1 else (e.v, e.u)
            out.append(f"  {t} -> {h} [{label}, id=\"e{e.id}\"];")
        else:
            style = "dir=both" if (a, b) == (1, 1) else "dir=none"
            out.append(f"  {e.u} -> {e.v} [{label}, {style}, style=dashed, color=red, id=\"e{e.id}\"];")
    out.append("}")
    return "\n".join(out) + "\n"
