"""Model files.

Format, one directive per line::

    size <n>
    leq <i> <j>                 # i <= j; reflexive-transitive closure is taken
    op <name> <args...> = <v>   # one line per table entry

Blank lines and lines starting with ``%`` or ``;`` are ignored.
"""

from __future__ import annotations

import itertools

import numpy as np

from alba.errors import ModelError
from alba.models.lattice import FiniteLE, validate_model
from alba.syntax.signature import Signature


def parse_model(text: str, sig: Signature, name: str = "") -> FiniteLE:
    size = None
    pairs: list[tuple[int, int]] = []
    ops: dict[str, dict[tuple[int, ...], int]] = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line[0] in "%;":
            continue
        parts = line.split()
        try:
            if parts[0] == "size" and len(parts) == 2:
                size = int(parts[1])
            elif parts[0] == "leq" and len(parts) == 3:
                pairs.append((int(parts[1]), int(parts[2])))
            elif parts[0] == "op" and len(parts) >= 4 and parts[-2] == "=":
                args = tuple(int(x) for x in parts[2:-2])
                ops.setdefault(parts[1], {})[args] = int(parts[-1])
            else:
                raise ValueError("unrecognised directive")
        except ValueError as exc:
            raise ModelError(f"line {lineno}: {exc}: {line!r}") from None
    if size is None or size < 1:
        raise ModelError("missing or invalid 'size' line")
    tables = {}
    for cname, entries in ops.items():
        if cname in sig and sig[cname].arity == 0:
            if () not in entries:
                raise ModelError(f"{cname}: missing value")
            tables[cname] = np.array(entries[()], dtype=np.intp)
        else:
            tables[cname] = entries
    return validate_model(size, pairs, tables, sig, name)


def format_model(m: FiniteLE) -> str:
    lat = m.lattice
    lines = [f"size {m.size}"]
    for a in range(m.size):
        for b in range(m.size):
            if a != b and lat.leq[a, b]:
                # covers only
                if not any(c not in (a, b) and lat.leq[a, c] and lat.leq[c, b] for c in range(m.size)):
                    lines.append(f"leq {a} {b}")
    for name in m.sig.base():
        table = m.ops[name]
        arity = m.sig[name].arity
        for args in itertools.product(range(m.size), repeat=arity):
            argstr = " ".join(map(str, args))
            sep = " " if argstr else ""
            lines.append(f"op {name}{sep}{argstr} = {int(table[args])}")
    return "\n".join(lines) + "\n"


def load_model(path: str, sig: Signature) -> FiniteLE:
    with open(path, encoding="utf-8") as fh:
        return parse_model(fh.read(), sig, name=path)
