"""Ground theory model shared by the grounder, the .tdc format and the
solver.

Atom ids are dense 1..N in order of first appearance; cardinality
constructs take ids N+1..N+C and hold atom ids as members, with hi = -1
meaning no upper bound. Clause literals are signed ids referring to
either kind.
"""

from __future__ import annotations

from dataclasses import dataclass

from .model import Const


@dataclass(frozen=True)
class GroundAtom:
    id: int
    pred: str
    args: tuple[Const, ...]
    text: str


@dataclass(frozen=True)
class CardConstruct:
    id: int
    lo: int
    hi: int  # -1 encodes "no upper bound"
    members: tuple[int, ...]


@dataclass(frozen=True)
class GroundClause:
    literals: tuple[int, ...]


@dataclass(frozen=True)
class GroundTheory:
    atoms: tuple[GroundAtom, ...]
    cards: tuple[CardConstruct, ...]
    clauses: tuple[GroundClause, ...]

    @property
    def n_atoms(self) -> int:
        return len(self.atoms)

    def card_by_id(self, cid: int) -> CardConstruct:
        return self.cards[cid - len(self.atoms) - 1]


EMPTY_THEORY = GroundTheory((), (), ())


def ground_atom_text(pred: str, args: tuple[Const, ...]) -> str:
    """Canonical space-free rendering, e.g. clr(1,r)."""
    if not args:
        return pred
    return f"{pred}({','.join(str(a) for a in args)})"


def parse_ground_atom_text(text: str) -> tuple[str, tuple[Const, ...]]:
    """Inverse of ground_atom_text, used when reading theories back in."""
    if "(" not in text:
        return text, ()
    if not text.endswith(")"):
        raise ValueError(f"malformed atom text {text!r}")
    pred, inner = text[:-1].split("(", 1)
    args = []
    for part in inner.split(","):
        try:
            args.append(int(part, 10))
        except ValueError:
            args.append(part)
    return pred, tuple(args)
