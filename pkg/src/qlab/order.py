"""Finite join-semilattices with dense integer handles.

A carrier is stored as its binary join table. The order is always derived
from the table (``a <= b`` iff ``join(a, b) == b``), never stored on its own.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property, reduce
from typing import Iterable, Sequence


class InputError(ValueError):
    """Raised for malformed inputs (bad shapes, empty joins, unknown labels)."""


@dataclass(frozen=True)
class Violation:
    axiom: str
    witness: tuple
    detail: str = ""

    def to_json(self) -> dict:
        return {"axiom": self.axiom, "witness": list(self.witness), "detail": self.detail}


@dataclass
class ValidationReport:
    violations: list[Violation] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def add(self, axiom: str, witness: tuple, detail: str = "") -> None:
        self.violations.append(Violation(axiom, tuple(witness), detail))

    def axioms(self) -> set[str]:
        return {v.axiom for v in self.violations}

    def extend(self, other: "ValidationReport") -> None:
        self.violations.extend(other.violations)

    def to_json(self) -> dict:
        return {"ok": self.ok, "violations": [v.to_json() for v in self.violations]}

    def __bool__(self) -> bool:
        return self.ok


@dataclass(frozen=True)
class Carrier:
    """A finite join-semilattice; handles are ``0..size-1``."""

    names: tuple[str, ...]
    join_table: tuple[tuple[int, ...], ...]
    top: int

    @staticmethod
    def from_table(names: Sequence[str], join: Sequence[Sequence[int]], top: int) -> "Carrier":
        return Carrier(tuple(str(n) for n in names), tuple(tuple(int(x) for x in row) for row in join), int(top))

    @property
    def size(self) -> int:
        return len(self.names)

    def join(self, a: int, b: int) -> int:
        return self.join_table[a][b]

    def elements(self) -> range:
        return range(self.size)

    @cached_property
    def leq_matrix(self) -> tuple[tuple[bool, ...], ...]:
        j = self.join_table
        return tuple(tuple(j[a][b] == b for b in range(self.size)) for a in range(self.size))

    def leq(self, a: int, b: int) -> bool:
        return self.leq_matrix[a][b]

    @cached_property
    def down_masks(self) -> tuple[int, ...]:
        """Bitmask of the principal down-set of each element."""
        n = self.size
        return tuple(sum(1 << x for x in range(n) if self.leq_matrix[x][a]) for a in range(n))

    @cached_property
    def up_masks(self) -> tuple[int, ...]:
        n = self.size
        return tuple(sum(1 << x for x in range(n) if self.leq_matrix[a][x]) for a in range(n))

    @cached_property
    def bottom(self) -> int | None:
        """The least element, or None when the carrier has none."""
        full = (1 << self.size) - 1
        for a in range(self.size):
            if self.up_masks[a] == full:
                return a
        return None

    def join_set(self, items: Iterable[int]) -> int:
        items = list(items)
        if not items:
            raise InputError("join of an empty set is undefined")
        j = self.join_table
        return reduce(lambda x, y: j[x][y], items)

    def join_mask(self, mask: int) -> int:
        if not mask:
            raise InputError("join of an empty set is undefined")
        return self.join_set(iter_bits(mask))

    def meet(self, a: int, b: int) -> int | None:
        """Join of the common lower set, or None when that set is empty."""
        common = self.down_masks[a] & self.down_masks[b]
        if not common:
            return None
        return self.join_mask(common)

    def index(self, label: str) -> int:
        try:
            return self.names.index(label)
        except ValueError:
            raise InputError(f"unknown element label {label!r}") from None

    def up_closure(self, mask: int) -> int:
        out = 0
        for x in iter_bits(mask):
            out |= self.up_masks[x]
        return out

    def minimal_elements(self, mask: int) -> list[int]:
        items = list(iter_bits(mask))
        return [a for a in items if not any(b != a and self.leq(b, a) for b in items)]

    def maximal_elements(self, mask: int) -> list[int]:
        items = list(iter_bits(mask))
        return [a for a in items if not any(b != a and self.leq(a, b) for b in items)]

    def to_json(self) -> dict:
        return {
            "kind": "table",
            "names": list(self.names),
            "join": [list(r) for r in self.join_table],
            "top": self.top,
        }


def iter_bits(mask: int):
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def mask_of(items: Iterable[int]) -> int:
    m = 0
    for x in items:
        m |= 1 << x
    return m


def check_table_shape(table, rows: int, cols: int, target: int, what: str, report: ValidationReport) -> bool:
    """Check that ``table`` is a ``rows x cols`` table of handles below ``target``."""
    if not isinstance(table, (list, tuple)) or len(table) != rows:
        report.add("shape", (what,), f"{what} table must have {rows} rows")
        return False
    for i, row in enumerate(table):
        if not isinstance(row, (list, tuple)) or len(row) != cols:
            report.add("shape", (what, i), f"{what} row {i} must have {cols} entries")
            return False
        for j, v in enumerate(row):
            if not isinstance(v, int) or isinstance(v, bool) or not 0 <= v < target:
                report.add("range", (what, i, j), f"{what}[{i}][{j}] = {v!r} is not a handle")
                return False
    return True


def validate_carrier(c: Carrier) -> ValidationReport:
    """Check the join-semilattice axioms; every violation carries a witness."""
    report = ValidationReport()
    n = c.size
    if n < 1:
        report.add("shape", (), "carrier must be nonempty")
        return report
    if len(set(c.names)) != n:
        report.add("labels", (), "element labels must be distinct")
    if not check_table_shape(c.join_table, n, n, n, "join", report):
        return report
    if not 0 <= c.top < n:
        report.add("range", ("top",), f"top {c.top} is not a handle")
        return report
    j = c.join_table
    for a in range(n):
        if j[a][a] != a:
            report.add("idempotence", (a,), f"{a}+{a} = {j[a][a]}")
        if j[c.top][a] != c.top:
            report.add("top", (a,), f"top+{a} = {j[c.top][a]}")
        for b in range(a + 1, n):
            if j[a][b] != j[b][a]:
                report.add("commutativity", (a, b), f"{a}+{b} = {j[a][b]} but {b}+{a} = {j[b][a]}")
    for a in range(n):
        for b in range(n):
            ab = j[a][b]
            for d in range(n):
                if j[ab][d] != j[a][j[b][d]]:
                    report.add("associativity", (a, b, d))
                    break
            else:
                continue
            break
    if report.ok:
        # with the axioms above the derived relation is a partial order;
        # still scan it so a broken derivation would be caught
        leq = c.leq_matrix
        for a in range(n):
            for b in range(n):
                if a != b and leq[a][b] and leq[b][a]:
                    report.add("antisymmetry", (a, b))
                for d in range(n):
                    if leq[a][b] and leq[b][d] and not leq[a][d]:
                        report.add("transitivity", (a, b, d))
    return report


def is_noetherian(c: Carrier) -> bool:
    """Every nonempty subset has a maximal element (checked on all principal
    up-sets and the whole carrier, which suffices for ascending chains in a
    finite poset)."""
    # A strictly ascending chain stalls once every nonempty set has a maximal
    # element; on a finite carrier we scan the up-sets, where chains live.
    for a in range(c.size):
        if not c.maximal_elements(c.up_masks[a]):
            return False
    return True


def is_compact_lattice(c: Carrier) -> bool:
    """The top is below a finite subjoin of any cover of it."""
    # Every cover of top inside a finite carrier is itself finite, so the
    # finite subfamily is the cover; we still exhibit it for the maximal cover.
    cover = [x for x in range(c.size)]
    return c.join_set(cover) == c.top
