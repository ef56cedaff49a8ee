"""Grounding: turn a checked program plus data into a ground theory.

Each clause is instantiated once per binding of its global variables
over their declared domains. Data and predefined atoms evaluate to
constants and simplify the clause; program atoms whose arguments fall
outside their declared types or restriction are constant false; e-atoms
and cardinality atoms become cardinality constructs, with structurally
identical constructs sharing one id. Every step is deterministic, so
grounding the same input twice produces byte-identical output.

Variables occurring in a cardinality schema's conditions and nowhere
else in the clause are local to the schema and enumerate its members;
all other variables (including ones occurring only in the member atom)
are global to the clause. The binder of an e-atom is local to it.
"""

from __future__ import annotations

import itertools
from pathlib import PurePath

from .database import DataDatabase
from .errors import GroundError
from .model import (
    COMPARISONS,
    INT_MAX,
    INT_MIN,
    ArithExpr,
    CAtomList,
    CAtomSchema,
    Clause,
    EAtom,
    PlainAtom,
    Program,
    Variable,
    term_variables,
)
from .theory import CardConstruct, GroundAtom, GroundClause, GroundTheory, ground_atom_text


def _trunc_div(a, b):
    q = a // b
    if q < 0 and q * b != a:
        q += 1
    return q


def eval_arith(term, binding) -> int:
    """Evaluate a term to an integer. Division truncates toward zero and
    mod(a,b) = a - b*trunc(a/b); anything symbolic, unbound, overflowing
    or divided by zero is an error."""
    if isinstance(term, int) and not isinstance(term, bool):
        return term
    if isinstance(term, str):
        raise GroundError(f"symbolic constant {term!r} in arithmetic")
    if isinstance(term, Variable):
        v = binding.get(term.name)
        if v is None:
            raise GroundError(f"variable {term.name} is not bound")
        if isinstance(v, str):
            raise GroundError(f"symbolic constant {v!r} in arithmetic")
        return v
    op = term.op
    a = eval_arith(term.operands[0], binding)
    if op == "abs":
        r = -a if a < 0 else a
    else:
        b = eval_arith(term.operands[1], binding)
        if op == "+":
            r = a + b
        elif op == "-":
            r = a - b
        elif op == "*":
            r = a * b
        elif op == "/":
            if b == 0:
                raise GroundError("division by zero")
            r = _trunc_div(a, b)
        elif op == "mod":
            if b == 0:
                raise GroundError("mod by zero")
            r = a - b * _trunc_div(a, b)
        elif op == "max":
            r = a if a >= b else b
        else:
            r = a if a <= b else b
    if not INT_MIN <= r <= INT_MAX:
        raise GroundError("arithmetic overflow")
    return r


def eval_ground_term(term, binding):
    """Reduce a term to a constant under a binding."""
    if isinstance(term, Variable):
        v = binding.get(term.name)
        if v is None:
            raise GroundError(f"variable {term.name} is not bound")
        return v
    if isinstance(term, ArithExpr):
        return eval_arith(term, binding)
    return term


def eval_predefined(atom: PlainAtom, binding) -> bool:
    """Evaluate a comparison atom. == works on any constants by
    identity; the order comparisons require integers."""
    if atom.pred not in COMPARISONS or len(atom.args) != 2:
        raise GroundError(f"malformed predefined atom {atom.pred}/{len(atom.args)}")
    a = eval_ground_term(atom.args[0], binding)
    b = eval_ground_term(atom.args[1], binding)
    if atom.pred == "==":
        return a == b
    if isinstance(a, str) or isinstance(b, str):
        raise GroundError(f"order comparison {atom.pred} on symbolic constants")
    if atom.pred == "<=":
        return a <= b
    if atom.pred == ">=":
        return a >= b
    if atom.pred == "<":
        return a < b
    return a > b


# ---------------------------------------------------------------------------
# Static checks.


def check_program(prog: Program, db: DataDatabase) -> list[str]:
    """Validate declarations, arities and variable usage against the
    data. Returns a list of diagnostics; empty means the program may be
    grounded."""
    diags: list[str] = []
    decls: dict[str, object] = {}
    for d in prog.pred_decls:
        if d.name in decls:
            diags.append(f"predicate {d.name} declared twice")
        decls[d.name] = d

    data_names = db.predicate_names()
    for d in prog.pred_decls:
        if d.name in data_names:
            diags.append(
                f"predicate {d.name} is declared as a program predicate but also defined by data"
            )
        for ty in d.arg_types:
            diags.extend(_check_type_pred(ty, decls, db, f"declaration of {d.name}"))
        if d.restriction is not None:
            if d.restriction in decls:
                diags.append(f"restriction {d.restriction} of {d.name} must be a data predicate")
            elif (d.restriction, len(d.arg_types)) not in db.extensions:
                diags.append(
                    f"restriction {d.restriction}/{len(d.arg_types)} of {d.name}"
                    " is not defined by the data"
                )

    var_types: dict[str, str] = {}
    for v in prog.var_decls:
        for name in v.var_names:
            if name in var_types:
                diags.append(f"variable {name} declared twice")
            var_types[name] = v.type_pred
        diags.extend(_check_type_pred(v.type_pred, decls, db, f"declaration of {v.var_names[0]}"))

    for idx, clause in enumerate(prog.clauses, 1):
        where = f"clause {idx}" + (f" (line {clause.line})" if clause.line else "")
        diags.extend(_check_clause(clause, where, decls, var_types, db))
    return diags


def _check_type_pred(ty, decls, db, where):
    if ty in decls:
        return [f"type predicate {ty} in {where} must be a data predicate"]
    if any(name == ty for name, _ in db.extensions) and (ty, 1) not in db.extensions:
        return [f"type predicate {ty} in {where} has no unary extension"]
    return []


def _check_clause(clause, where, decls, var_types, db):
    diags = []
    atoms = clause.body + clause.head

    def check_vars(terms):
        for t in terms:
            for v in term_variables(t):
                if v not in var_types:
                    diags.append(f"variable {v} not declared in {where}")

    def check_plain(a, role="atom"):
        if a.pred in COMPARISONS:
            if len(a.args) != 2:
                diags.append(f"predefined {a.pred} takes 2 operands in {where}")
        elif a.pred in decls:
            if role == "condition":
                diags.append(
                    f"condition {a.pred} in {where} must use a data or predefined predicate"
                )
            elif len(a.args) != len(decls[a.pred].arg_types):
                diags.append(
                    f"predicate {a.pred} expects {len(decls[a.pred].arg_types)}"
                    f" argument(s), got {len(a.args)} in {where}"
                )
        check_vars(a.args)

    def check_bounds(a):
        if a.lo is not None and a.lo < 0:
            diags.append(f"negative cardinality bound in {where}")
        if a.lo is not None and a.hi is not None and a.lo > a.hi:
            diags.append(f"lower bound {a.lo} exceeds upper bound {a.hi} in {where}")

    def check_member_pred(pred, nargs, what):
        if pred not in decls:
            diags.append(f"{what} {pred} in {where} must be a declared program predicate")
        elif len(decls[pred].arg_types) != nargs:
            diags.append(
                f"predicate {pred} expects {len(decls[pred].arg_types)}"
                f" argument(s), got {nargs} in {where}"
            )

    for pos, atom in enumerate(atoms):
        if isinstance(atom, PlainAtom):
            check_plain(atom)
        elif isinstance(atom, EAtom):
            check_member_pred(atom.pred, len(atom.args), "e-atom predicate")
            if atom.domain_pred in decls:
                diags.append(
                    f"e-atom domain {atom.domain_pred} in {where} must be a data predicate"
                )
            else:
                diags.extend(_check_type_pred(atom.domain_pred, decls, db, where))
            if atom.bound_var not in var_types:
                diags.append(f"variable {atom.bound_var} not declared in {where}")
            if not atom.args or atom.args[-1] != Variable(atom.bound_var):
                diags.append(f"e-atom binder must be the final argument in {where}")
            check_vars(atom.args[:-1])
            if any(atom.bound_var in set(term_variables(t)) for t in atom.args[:-1]):
                diags.append(
                    f"e-atom binder {atom.bound_var} may only occur as the final argument in {where}"
                )
            for other_pos, other in enumerate(atoms):
                if other_pos != pos and atom.bound_var in _atom_var_set(other):
                    diags.append(
                        f"e-atom binder {atom.bound_var} may not occur outside its atom in {where}"
                    )
                    break
        elif isinstance(atom, CAtomSchema):
            check_member_pred(atom.member.pred, len(atom.member.args), "cardinality member")
            check_vars(atom.member.args)
            for c in atom.conds:
                check_plain(c, role="condition")
            check_bounds(atom)
        else:
            for p in atom.preds:
                check_member_pred(p, len(atom.args), "cardinality member")
            check_vars(atom.args)
            check_bounds(atom)
    return diags


def _atom_var_set(atom):
    out = set()
    if isinstance(atom, PlainAtom):
        terms = atom.args
    elif isinstance(atom, EAtom):
        terms = atom.args
    elif isinstance(atom, CAtomSchema):
        terms = atom.member.args + tuple(t for c in atom.conds for t in c.args)
    else:
        terms = atom.args
    for t in terms:
        out |= set(term_variables(t))
    return out


# ---------------------------------------------------------------------------
# Grounding proper.


class Grounder:
    """Holds the interning tables while a program is ground.

    Atom ids are final as soon as they are interned; cardinality
    constructs are numbered after the total atom count is known.
    """

    def __init__(self, prog: Program, db: DataDatabase):
        self.prog = prog
        self.db = db
        self.pred_decls = {d.name: d for d in prog.pred_decls}
        self.var_types = {n: v.type_pred for v in prog.var_decls for n in v.var_names}
        self.atom_ids: dict[tuple, int] = {}
        self.atom_keys: list[tuple] = []
        self.card_ids: dict[tuple, int] = {}
        self.card_list: list[tuple] = []
        self.raw_clauses: list[tuple] = []

    # -- atoms ------------------------------------------------------------

    def resolve_program_atom(self, pred, args):
        """Intern a ground program atom, or None when an argument falls
        outside its declared type or the restriction."""
        decl = self.pred_decls[pred]
        for a, ty in zip(args, decl.arg_types):
            if not self.db.contains(ty, (a,)):
                return None
        if decl.restriction is not None and not self.db.contains(decl.restriction, args):
            return None
        key = (pred, tuple(args))
        aid = self.atom_ids.get(key)
        if aid is None:
            aid = len(self.atom_keys) + 1
            self.atom_ids[key] = aid
            self.atom_keys.append(key)
        return aid

    def instantiate_eatom(self, atom: EAtom, binding):
        """An e-atom becomes a 1{...} construct over the instances drawn
        from the domain predicate; with no instances it is plain false."""
        if atom.pred not in self.pred_decls:
            raise GroundError(f"e-atom predicate {atom.pred} is not declared")
        prefix = tuple(eval_ground_term(t, binding) for t in atom.args[:-1])
        members, seen = [], set()
        for y in self.db.unary_domain(atom.domain_pred):
            aid = self.resolve_program_atom(atom.pred, prefix + (y,))
            if aid is not None and aid not in seen:
                seen.add(aid)
                members.append(aid)
        if not members:
            return False
        return self._make_card(1, None, members)

    def instantiate_catom(self, atom, binding):
        """Build the member set of a cardinality atom under a binding and
        fold constant cases. Local variables of a schema are the
        condition variables absent from the binding."""
        if isinstance(atom, CAtomList):
            args = tuple(eval_ground_term(t, binding) for t in atom.args)
            members, seen = [], set()
            for p in atom.preds:
                if p not in self.pred_decls:
                    raise GroundError(f"cardinality member {p} is not declared")
                aid = self.resolve_program_atom(p, args)
                if aid is not None and aid not in seen:
                    seen.add(aid)
                    members.append(aid)
            return self._make_card(atom.lo, atom.hi, members)
        if atom.member.pred not in self.pred_decls:
            raise GroundError(f"cardinality member {atom.member.pred} is not declared")
        var_order: list[str] = []
        seen_vars = set()
        for t in atom.member.args:
            for v in term_variables(t):
                if v not in seen_vars:
                    seen_vars.add(v)
                    var_order.append(v)
        cond_vars = set()
        for c in atom.conds:
            for t in c.args:
                for v in term_variables(t):
                    cond_vars.add(v)
                    if v not in seen_vars:
                        seen_vars.add(v)
                        var_order.append(v)
        locals_ = [v for v in var_order if v in cond_vars and v not in binding]
        domains = []
        for v in locals_:
            ty = self.var_types.get(v)
            if ty is None:
                raise GroundError(f"local variable {v} has no declared type")
            domains.append(self.db.unary_domain(ty))
        members, seen = [], set()
        for combo in itertools.product(*domains):
            b = dict(binding)
            b.update(zip(locals_, combo))
            if not all(self._condition_holds(c, b) for c in atom.conds):
                continue
            args = tuple(eval_ground_term(t, b) for t in atom.member.args)
            aid = self.resolve_program_atom(atom.member.pred, args)
            if aid is not None and aid not in seen:
                seen.add(aid)
                members.append(aid)
        return self._make_card(atom.lo, atom.hi, members)

    def _condition_holds(self, cond, binding):
        if cond.pred in COMPARISONS:
            return eval_predefined(cond, binding)
        if cond.pred in self.pred_decls:
            raise GroundError(f"condition {cond.pred} must use a data or predefined predicate")
        args = tuple(eval_ground_term(t, binding) for t in cond.args)
        return self.db.contains(cond.pred, args)

    def _make_card(self, lo, hi, members):
        """Fold a member set with bounds into True, False or an interned
        construct; upper bounds clamp to the member count."""
        lo = 0 if lo is None else lo
        n = len(members)
        if n < lo:
            return False
        hi = -1 if hi is None else hi
        if hi != -1 and hi > n:
            hi = n
        if hi != -1 and lo > hi:
            return False
        if lo == 0 and (hi == -1 or hi >= n):
            return True
        key = (lo, hi, frozenset(members))
        idx = self.card_ids.get(key)
        if idx is None:
            idx = len(self.card_list)
            self.card_ids[key] = idx
            self.card_list.append((lo, hi, tuple(sorted(members))))
        return ("c", idx)

    def _atom_value(self, atom, binding):
        """True/False for constant atoms, otherwise an ('a', id) or
        ('c', index) reference."""
        if isinstance(atom, PlainAtom):
            if atom.pred in self.pred_decls:
                args = tuple(eval_ground_term(t, binding) for t in atom.args)
                aid = self.resolve_program_atom(atom.pred, args)
                return False if aid is None else ("a", aid)
            if atom.pred in COMPARISONS:
                return eval_predefined(atom, binding)
            args = tuple(eval_ground_term(t, binding) for t in atom.args)
            return self.db.contains(atom.pred, args)
        if isinstance(atom, EAtom):
            return self.instantiate_eatom(atom, binding)
        return self.instantiate_catom(atom, binding)

    # -- clauses ----------------------------------------------------------

    def ground_clause(self, clause: Clause, binding):
        """One ground instance: body atoms contribute negated literals,
        head atoms positive ones. Returns None for satisfied (dropped)
        instances, otherwise the literal tuple; () is the empty clause."""
        lits, seen = [], set()
        sat = False
        nbody = len(clause.body)
        for pos, atom in enumerate(clause.body + clause.head):
            positive = pos >= nbody
            val = self._atom_value(atom, binding)
            if isinstance(val, bool):
                if val is positive:
                    sat = True
                continue
            lit = (val[0], val[1], positive)
            if (val[0], val[1], not positive) in seen:
                sat = True
            if lit not in seen:
                seen.add(lit)
                lits.append(lit)
        return None if sat else tuple(lits)

    def global_vars(self, clause: Clause) -> list[str]:
        """Clause variables in first-occurrence order, minus e-atom
        binders and schema-local condition variables."""
        atoms = clause.body + clause.head
        occ: dict[str, set[int]] = {}
        order: list[str] = []
        cond_vars: dict[int, set[str]] = {}
        ebound: set[str] = set()

        def note(v, pos):
            if v not in occ:
                occ[v] = set()
                order.append(v)
            occ[v].add(pos)

        for pos, atom in enumerate(atoms):
            if isinstance(atom, PlainAtom):
                for t in atom.args:
                    for v in term_variables(t):
                        note(v, pos)
            elif isinstance(atom, EAtom):
                for t in atom.args:
                    for v in term_variables(t):
                        note(v, pos)
                ebound.add(atom.bound_var)
            elif isinstance(atom, CAtomSchema):
                cv = set()
                for t in atom.member.args:
                    for v in term_variables(t):
                        note(v, pos)
                for c in atom.conds:
                    for t in c.args:
                        for v in term_variables(t):
                            note(v, pos)
                            cv.add(v)
                cond_vars[pos] = cv
            else:
                for t in atom.args:
                    for v in term_variables(t):
                        note(v, pos)

        local = set()
        for pos, cv in cond_vars.items():
            for v in cv:
                if occ[v] == {pos}:
                    local.add(v)
        return [v for v in order if v not in ebound and v not in local]

    def ground(self) -> GroundTheory:
        for clause in self.prog.clauses:
            gvars = self.global_vars(clause)
            domains = []
            for v in gvars:
                ty = self.var_types.get(v)
                if ty is None:
                    raise GroundError(f"variable {v} is not declared")
                domains.append(self.db.unary_domain(ty))
            for combo in itertools.product(*domains):
                result = self.ground_clause(clause, dict(zip(gvars, combo)))
                if result is not None:
                    self.raw_clauses.append(result)
        return self._assemble()

    def _assemble(self) -> GroundTheory:
        n = len(self.atom_keys)
        atoms = tuple(
            GroundAtom(i + 1, pred, args, ground_atom_text(pred, args))
            for i, (pred, args) in enumerate(self.atom_keys)
        )
        cards = tuple(
            CardConstruct(n + 1 + i, lo, hi, members)
            for i, (lo, hi, members) in enumerate(self.card_list)
        )

        def to_int(lit):
            kind, idx, positive = lit
            value = idx if kind == "a" else n + 1 + idx
            return value if positive else -value

        clauses = tuple(
            GroundClause(tuple(to_int(l) for l in lits)) for lits in self.raw_clauses
        )
        return GroundTheory(atoms, cards, clauses)


def ground_theory(prog: Program, db: DataDatabase) -> GroundTheory:
    """Ground a program that already passed check_program."""
    return Grounder(prog, db).ground()


def output_name(consts: dict[str, str], rule_file: str, data_files: list[str]) -> str:
    """Output file name: name=value pairs in command-line order, then the
    base names of the rule file and data files, hyphen-joined, plus .tdc."""
    parts = [f"{k}={v}" for k, v in consts.items()]
    parts.append(PurePath(rule_file).stem)
    parts.extend(PurePath(f).stem for f in data_files)
    return "-".join(parts) + ".tdc"
