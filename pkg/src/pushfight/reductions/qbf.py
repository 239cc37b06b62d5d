"""Quantified 3-CNF formulas and a QDIMACS-subset reader."""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass

FORALL = "a"
EXISTS = "e"


@dataclass(frozen=True)
class QbfFormula:
    """``prefix`` lists (quantifier, variable) outermost first; literals are signed ints."""

    prefix: tuple[tuple[str, int], ...]
    clauses: tuple[tuple[int, ...], ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "prefix", tuple((q, int(v)) for q, v in self.prefix))
        object.__setattr__(self, "clauses", tuple(tuple(int(x) for x in c) for c in self.clauses))
        seen = set()
        for q, v in self.prefix:
            if q not in (FORALL, EXISTS):
                raise ValueError(f"unknown quantifier {q!r}")
            if v <= 0 or v in seen:
                raise ValueError(f"variable {v} quantified twice or non-positive")
            seen.add(v)
        for c in self.clauses:
            if not c:
                raise ValueError("empty clause")
            if len(c) > 3:
                raise ValueError(f"clause {c} has more than 3 literals")
            for lit in c:
                if lit == 0 or abs(lit) not in seen:
                    raise ValueError(f"literal {lit} has no quantified variable")

    @property
    def variables(self) -> list[int]:
        return [v for _, v in self.prefix]

    def occurrences(self) -> Counter:
        return Counter(lit for c in self.clauses for lit in c)

    @property
    def p(self) -> int:
        """One more than the largest number of occurrences of any literal."""
        occ = self.occurrences()
        return 1 + max(occ.values(), default=0)


def parse_qdimacs(text: str) -> QbfFormula:
    header = None
    prefix: list[tuple[str, int]] = []
    clauses: list[tuple[int, ...]] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("c"):
            continue
        parts = line.split()
        if parts[0] == "p":
            if header is not None or len(parts) != 4 or parts[1] != "cnf":
                raise ValueError(f"line {lineno}: expected one 'p cnf V C' header")
            try:
                header = (int(parts[2]), int(parts[3]))
            except ValueError:
                raise ValueError(f"line {lineno}: non-integer header") from None
            continue
        if header is None:
            raise ValueError(f"line {lineno}: content before 'p cnf' header")
        try:
            nums = [int(x) for x in (parts[1:] if parts[0] in (FORALL, EXISTS) else parts)]
        except ValueError:
            raise ValueError(f"line {lineno}: non-integer token") from None
        if not nums or nums[-1] != 0 or 0 in nums[:-1]:
            raise ValueError(f"line {lineno}: line must end with a single 0")
        nums.pop()
        if parts[0] in (FORALL, EXISTS):
            if clauses:
                raise ValueError(f"line {lineno}: quantifier after clauses")
            for v in nums:
                if not 1 <= v <= header[0]:
                    raise ValueError(f"line {lineno}: variable {v} out of range")
                prefix.append((parts[0], v))
        else:
            if len(nums) > 3:
                raise ValueError(f"line {lineno}: clause has {len(nums)} literals, at most 3 allowed")
            if not nums:
                raise ValueError(f"line {lineno}: empty clause")
            clauses.append(tuple(nums))
    if header is None:
        raise ValueError("missing 'p cnf' header")
    if len(clauses) != header[1]:
        raise ValueError(f"header announces {header[1]} clauses, found {len(clauses)}")
    bound = {v for _, v in prefix}
    if len(bound) != len(prefix):
        raise ValueError("a variable is quantified twice")
    for c in clauses:
        for lit in c:
            if abs(lit) not in bound:
                raise ValueError(f"free variable {abs(lit)}")
    return QbfFormula(tuple(prefix), tuple(clauses))


def format_qdimacs(f: QbfFormula) -> str:
    lines = [f"p cnf {max(f.variables, default=0)} {len(f.clauses)}"]
    for q, v in f.prefix:
        if lines[-1].startswith(q + " "):
            lines[-1] = lines[-1][:-2] + f" {v} 0"
        else:
            lines.append(f"{q} {v} 0")
    lines += [" ".join(map(str, c)) + " 0" for c in f.clauses]
    return "\n".join(lines) + "\n"
