"""Signatures of lattice expansions and their expansion to the tense language.

A base signature lists connectives in four families: normal and regular
members of F (join-side operations) and G (meet-side operations).  The
expanded signature adds a normalization for every regular connective and
residuals (or Galois adjoints) for every normal one, including the
normalizations.

Every normal connective of the expanded signature belongs to a *residuation
family*.  A family is rooted at a base normal connective or a normalization
``h`` of arity ``n`` and describes the relation ``h(a_1..a_n) <= b`` (for
``h`` in F) or ``b <= h(a_1..a_n)`` (for ``h`` in G) over ``n + 1`` slots:
slot 0 holds ``b`` and slot ``i`` holds ``a_i``.  The member solving slot
``s`` is ``h`` itself for ``s = 0`` and the residual in coordinate ``s``
otherwise.  This is what lets the engine residuate any normal connective,
including a residual of a residual.
"""

from __future__ import annotations

import re
from collections.abc import Iterable, Iterator, Mapping
from dataclasses import dataclass
from enum import Enum

from alba.errors import (
    DuplicateName,
    OrderTypeLengthMismatch,
    RegularArityViolation,
    SignatureError,
)


class Pol(str, Enum):
    """An entry of an order-type: monotone (1) or antitone (d)."""

    ONE = "1"
    DUAL = "d"

    @property
    def opposite(self) -> Pol:
        return Pol.DUAL if self is Pol.ONE else Pol.ONE

    @classmethod
    def parse(cls, text: str) -> Pol:
        if text == "1":
            return cls.ONE
        if text in ("d", "∂"):
            return cls.DUAL
        raise SignatureError(f"bad order-type entry {text!r}")


class Family(str, Enum):
    F_NORMAL = "fn"
    F_REGULAR = "fr"
    G_NORMAL = "gn"
    G_REGULAR = "gr"

    @property
    def is_f(self) -> bool:
        return self in (Family.F_NORMAL, Family.F_REGULAR)

    @property
    def is_normal(self) -> bool:
        return self in (Family.F_NORMAL, Family.G_NORMAL)

    @property
    def dual(self) -> Family:
        return {
            Family.F_NORMAL: Family.G_NORMAL,
            Family.G_NORMAL: Family.F_NORMAL,
            Family.F_REGULAR: Family.G_REGULAR,
            Family.G_REGULAR: Family.F_REGULAR,
        }[self]


@dataclass(frozen=True)
class Origin:
    """Provenance of a connective.

    ``kind`` is one of ``base``, ``residual``, ``normalization`` or
    ``adjoint``.  For residuals ``parent`` is the residuated connective and
    ``coordinate`` the (1-based) coordinate; normalizations and black
    adjoints point at the regular base connective they come from.
    """

    kind: str = "base"
    parent: str | None = None
    coordinate: int | None = None


BASE = Origin()

OrderType = tuple[Pol, ...]


@dataclass(frozen=True)
class Connective:
    name: str
    family: Family
    arity: int
    order_type: OrderType
    origin: Origin = BASE

    def __post_init__(self) -> None:
        if len(self.order_type) != self.arity:
            raise OrderTypeLengthMismatch(
                f"{self.name}: order-type has {len(self.order_type)} entries, arity is {self.arity}"
            )
        if not self.family.is_normal and self.arity != 1:
            raise RegularArityViolation(f"{self.name}: regular connectives must be unary")

    @property
    def is_f(self) -> bool:
        return self.family.is_f

    @property
    def is_g(self) -> bool:
        return not self.family.is_f

    @property
    def is_normal(self) -> bool:
        return self.family.is_normal

    @property
    def is_regular(self) -> bool:
        return not self.family.is_normal

    @property
    def is_base(self) -> bool:
        return self.origin.kind == "base"

    def eps(self, i: int) -> Pol:
        """Order-type entry of the 1-based coordinate ``i``."""
        return self.order_type[i - 1]


_NAME_RE = re.compile(r"^[^\s(),#@][^\s(),]*$")
_RESERVED = {"top", "bot", "<=", "/\\", "\\/"}


def residual_name(name: str, i: int, is_f: bool) -> str:
    return f"{name}#{i}" if is_f else f"{name}b{i}"


def normalization_name(base: Connective) -> str:
    if base.is_f:
        return ("dia_" if base.eps(1) is Pol.ONE else "tri_") + base.name
    return ("box_" if base.eps(1) is Pol.ONE else "trr_") + base.name


def black_adjoint_name(base: Connective) -> str:
    if base.is_f:
        return ("bbox_" if base.eps(1) is Pol.ONE else "btl_") + base.name
    return ("bdia_" if base.eps(1) is Pol.ONE else "btr_") + base.name


def slot_is_down(root: Connective, slot: int) -> bool:
    """Whether the family relation of ``root`` is down-closed in ``slot``."""
    if slot == 0:
        return root.is_g
    one = root.eps(slot) is Pol.ONE
    return one if root.is_f else not one


def solver_order_type(root: Connective, slot: int) -> OrderType:
    """Order-type of the family member solving ``slot``.

    Independent of the residual clauses used by :func:`expand_signature`;
    the test-suite checks that both agree.
    """
    solver_is_g = slot_is_down(root, slot)
    out = []
    for k in range(1, root.arity + 1):
        other = 0 if k == slot else k
        up = not slot_is_down(root, other)
        if solver_is_g:
            out.append(Pol.ONE if up else Pol.DUAL)
        else:
            out.append(Pol.DUAL if up else Pol.ONE)
    return tuple(out)


class Signature(Mapping[str, Connective]):
    """An immutable, name-indexed collection of connectives."""

    def __init__(self, connectives: Iterable[Connective], expanded: bool = False):
        table: dict[str, Connective] = {}
        for c in connectives:
            if c.name in table:
                raise DuplicateName(f"connective {c.name!r} declared twice")
            if c.name in _RESERVED or not _NAME_RE.match(c.name):
                raise SignatureError(f"invalid connective name {c.name!r}")
            table[c.name] = c
        self._table = table
        self.expanded = expanded
        # (root, slot) <-> member, populated by expand_signature
        self._member_of: dict[str, tuple[str, int]] = {}
        self._solver: dict[tuple[str, int], str] = {}

    def __getitem__(self, name: str) -> Connective:
        return self._table[name]

    def __iter__(self) -> Iterator[str]:
        return iter(self._table)

    def __len__(self) -> int:
        return len(self._table)

    def __repr__(self) -> str:
        kind = "expanded " if self.expanded else ""
        return f"<{kind}Signature {sorted(self._table)}>"

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Signature):
            return NotImplemented
        return self._table == other._table and self.expanded == other.expanded

    __hash__ = None  # type: ignore[assignment]

    def base(self) -> Signature:
        return Signature(c for c in self._table.values() if c.is_base)

    def of_family(self, family: Family) -> list[Connective]:
        return [c for c in self._table.values() if c.family is family]

    # -- residuation families ------------------------------------------

    def family_member(self, name: str) -> tuple[str, int] | None:
        """``(root, slot)`` for a normal connective of an expanded signature."""
        return self._member_of.get(name)

    def solver(self, root: str, slot: int) -> str:
        return self._solver[(root, slot)]

    def _register_family(self, root: str, members: list[str]) -> None:
        for slot, name in enumerate(members):
            self._member_of[name] = (root, slot)
            self._solver[(root, slot)] = name


def validate_signature(entries: Iterable) -> Signature:
    """Build a base signature from ``(name, family, arity, order_type)`` rows.

    ``family`` may be a :class:`Family` or its code (``fn``, ``fr``, ``gn``,
    ``gr``); ``order_type`` may be a sequence of :class:`Pol` or a string
    such as ``"1d"``.
    """
    conns = []
    for entry in entries:
        if isinstance(entry, Connective):
            conns.append(entry)
            continue
        name, family, arity, otype = entry
        family = Family(family)
        if isinstance(otype, str):
            otype = "" if otype == "-" else otype
            otype = tuple(Pol.parse(ch) for ch in otype)
        else:
            otype = tuple(Pol(x) if not isinstance(x, Pol) else x for x in otype)
        conns.append(Connective(name, family, int(arity), otype))
    for c in conns:
        if not c.is_base:
            raise SignatureError(f"{c.name}: base signatures hold base connectives only")
    return Signature(conns)


def _residual(f: Connective, i: int) -> Connective:
    keep = f.eps(i)
    if f.is_f:
        family = Family.G_NORMAL if keep is Pol.ONE else Family.F_NORMAL
    else:
        family = Family.F_NORMAL if keep is Pol.ONE else Family.G_NORMAL
    otype = []
    for h in range(1, f.arity + 1):
        if h == i:
            otype.append(keep)
        elif keep is Pol.ONE:
            otype.append(f.eps(h).opposite)
        else:
            otype.append(f.eps(h))
    return Connective(
        residual_name(f.name, i, f.is_f),
        family,
        f.arity,
        tuple(otype),
        Origin("residual", f.name, i),
    )


def expand_signature(sig: Signature) -> Signature:
    """Return the expanded (tense) signature; idempotent."""
    if sig.expanded:
        return sig
    base = list(sig.values())
    out: list[Connective] = list(base)
    roots: list[Connective] = [c for c in base if c.is_normal]
    adjoint_of: dict[str, Connective] = {}
    for r in base:
        if r.is_normal:
            continue
        norm = Connective(
            normalization_name(r),
            Family.F_NORMAL if r.is_f else Family.G_NORMAL,
            1,
            r.order_type,
            Origin("normalization", r.name),
        )
        black = _residual(norm, 1)
        black = Connective(
            black_adjoint_name(r), black.family, 1, black.order_type, Origin("adjoint", r.name, 1)
        )
        out.append(norm)
        roots.append(norm)
        adjoint_of[norm.name] = black
    families: list[tuple[str, list[str]]] = []
    for root in roots:
        members = [root.name]
        if root.name in adjoint_of:
            members.append(adjoint_of[root.name].name)
            out.append(adjoint_of[root.name])
        else:
            for i in range(1, root.arity + 1):
                res = _residual(root, i)
                members.append(res.name)
                out.append(res)
        families.append((root.name, members))
    expanded = Signature(out, expanded=True)
    for root, members in families:
        expanded._register_family(root, members)
    return expanded


def dual_signature(sig: Signature) -> Signature:
    """Swap the F and G families, keeping names, arities and order-types."""
    conns = [
        Connective(c.name, c.family.dual, c.arity, c.order_type, c.origin)
        for c in sig.base().values()
    ]
    return Signature(conns)


def parse_signature(text: str) -> Signature:
    """Parse signature-file text: ``conn <name> <fn|fr|gn|gr> <arity> <order-type>``.

    Blank lines and lines starting with ``#``, ``%`` or ``;`` are ignored.  The
    order-type of a nullary connective is written ``-``.
    """
    rows = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line[0] in "#%;":
            continue
        parts = line.split()
        if len(parts) != 5 or parts[0] != "conn":
            raise SignatureError(f"line {lineno}: expected 'conn <name> <family> <arity> <order-type>'")
        _, name, family, arity, otype = parts
        try:
            fam = Family(family)
            n = int(arity)
        except ValueError as exc:
            raise SignatureError(f"line {lineno}: {exc}") from None
        rows.append((name, fam, n, otype))
    return validate_signature(rows)


def format_signature(sig: Signature) -> str:
    lines = []
    for c in sig.base().values():
        otype = "".join(p.value for p in c.order_type) or "-"
        lines.append(f"conn {c.name} {c.family.value} {c.arity} {otype}")
    return "\n".join(lines) + "\n"
