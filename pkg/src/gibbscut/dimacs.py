"""DIMACS max-flow dumps of the solver's networks.

Format: the classic "p max N A" header with 1-based node ids, "n <id> s" /
"n <id> t" designations, and "a <u> <v> <cap>" arc lines.  Capacities are
written as integers after clearing denominators; the scale and the value
offset needed to recover polynomial minima ride along in comment lines:

    c scale <integer>
    c offset <p/q>

so any external max-flow solver reproduces min_value as flow/scale + offset.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import IO

from . import kernels
from .errors import GibbsCutError
from .graphcut import FlowNetwork


class DimacsError(GibbsCutError):
    pass


@dataclass(frozen=True)
class ParsedNetwork:
    """A parsed dump, back in 0-based node ids and integer capacities."""

    n_nodes: int
    s: int
    t: int
    arcs: tuple[tuple[int, int, int], ...]
    scale: int
    offset: Fraction


def dump_network(net: FlowNetwork, fh: IO[str]) -> int:
    """Write a network; returns the capacity scale that was applied."""
    caps = [c for _, _, c in net.arcs]
    scaled, scale = kernels.scale_to_integers(caps)
    fh.write("c gibbscut flow network\n")
    fh.write(f"c scale {scale}\n")
    fh.write(f"c offset {net.offset}\n")
    for var, node in sorted(net.var_nodes.items()):
        fh.write(f"c var {var} {node + 1}\n")
    for node in net.aux_nodes:
        fh.write(f"c aux {node + 1}\n")
    fh.write(f"p max {net.n_nodes} {len(net.arcs)}\n")
    fh.write(f"n {net.s + 1} s\n")
    fh.write(f"n {net.t + 1} t\n")
    for (u, v, _), cap in zip(net.arcs, scaled):
        fh.write(f"a {u + 1} {v + 1} {cap}\n")
    return scale


def parse_network(fh: IO[str]) -> ParsedNetwork:
    n_nodes = None
    n_arcs = None
    s = t = None
    scale = 1
    offset = Fraction(0)
    arcs: list[tuple[int, int, int]] = []
    for lineno, raw in enumerate(fh, start=1):
        line = raw.strip()
        if not line:
            continue
        fields = line.split()
        kind = fields[0]
        try:
            if kind == "c":
                if len(fields) >= 3 and fields[1] == "scale":
                    scale = int(fields[2])
                elif len(fields) >= 3 and fields[1] == "offset":
                    offset = Fraction(fields[2])
            elif kind == "p":
                if fields[1] != "max":
                    raise DimacsError(f"line {lineno}: not a max-flow problem")
                n_nodes = int(fields[2])
                n_arcs = int(fields[3])
            elif kind == "n":
                node = int(fields[1]) - 1
                if fields[2] == "s":
                    s = node
                elif fields[2] == "t":
                    t = node
                else:
                    raise DimacsError(f"line {lineno}: unknown designation {fields[2]!r}")
            elif kind == "a":
                arcs.append((int(fields[1]) - 1, int(fields[2]) - 1, int(fields[3])))
            else:
                raise DimacsError(f"line {lineno}: unknown record {kind!r}")
        except (IndexError, ValueError) as exc:
            raise DimacsError(f"line {lineno}: {exc}") from exc
    if n_nodes is None or s is None or t is None:
        raise DimacsError("missing problem line or source/sink designation")
    if n_arcs is not None and n_arcs != len(arcs):
        raise DimacsError(f"header promised {n_arcs} arcs, found {len(arcs)}")
    for u, v, cap in arcs:
        if not (0 <= u < n_nodes and 0 <= v < n_nodes) or cap < 0:
            raise DimacsError(f"bad arc ({u + 1},{v + 1},{cap})")
    return ParsedNetwork(n_nodes, s, t, tuple(arcs), scale, offset)
