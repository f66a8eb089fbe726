"""Parser, printer and grounder for the STRIPS + typing subset of PDDL.

Supported requirements are ``:strips``, ``:typing``, ``:equality`` and
``:action-costs``.  Preconditions and goals are conjunctions of positive
atoms; the only negation accepted is ``(not (= ?x ?y))``, which is compiled
away during grounding together with ``(= ?x ?y)``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterator

from .task import GroundAction, GroundTask

SUPPORTED_REQUIREMENTS = frozenset({":strips", ":typing", ":equality", ":action-costs"})


class PDDLError(Exception):
    pass


class PDDLSyntaxError(PDDLError):
    def __init__(self, msg: str, line: int = 0, col: int = 0):
        super().__init__(f"{line}:{col}: {msg}" if line else msg)
        self.line = line
        self.col = col


class UnsupportedRequirementError(PDDLError):
    def __init__(self, requirement: str):
        super().__init__(f"unsupported requirement {requirement}")
        self.requirement = requirement


class PDDLSemanticError(PDDLError):
    pass


# ---------------------------------------------------------------------------
# s-expressions


class Sym(str):
    line = 0
    col = 0


class SList(list):
    line = 0
    col = 0


def _sym(text: str, line: int, col: int) -> Sym:
    s = Sym(text.lower())
    s.line, s.col = line, col
    return s


def tokenize(text: str) -> Iterator[Sym]:
    line, col = 1, 0
    i, n = 0, len(text)
    while i < n:
        ch = text[i]
        if ch == "\n":
            line += 1
            col = 0
            i += 1
            continue
        if ch.isspace():
            i += 1
            col += 1
            continue
        if ch == ";":
            while i < n and text[i] != "\n":
                i += 1
            continue
        if ch in "()":
            yield _sym(ch, line, col + 1)
            i += 1
            col += 1
            continue
        start, start_col = i, col + 1
        while i < n and not text[i].isspace() and text[i] not in "();":
            i += 1
            col += 1
        yield _sym(text[start:i], line, start_col)


def read_sexpr(text: str) -> SList:
    """Read exactly one top-level s-expression."""
    stack: list[SList] = []
    result = None
    for tok in tokenize(text):
        if result is not None:
            raise PDDLSyntaxError(f"unexpected {tok!s} after end of expression", tok.line, tok.col)
        if tok == "(":
            lst = SList()
            lst.line, lst.col = tok.line, tok.col
            stack.append(lst)
        elif tok == ")":
            if not stack:
                raise PDDLSyntaxError("unbalanced ')'", tok.line, tok.col)
            done = stack.pop()
            if stack:
                stack[-1].append(done)
            else:
                result = done
        else:
            if not stack:
                raise PDDLSyntaxError(f"atom {tok!s} outside of any list", tok.line, tok.col)
            stack[-1].append(tok)
    if stack:
        raise PDDLSyntaxError("unexpected end of input: unclosed '('", stack[-1].line, stack[-1].col)
    if result is None:
        raise PDDLSyntaxError("empty input")
    return result


def _where(x) -> tuple[int, int]:
    return getattr(x, "line", 0), getattr(x, "col", 0)


def _fail(msg: str, x) -> PDDLSyntaxError:
    return PDDLSyntaxError(msg, *_where(x))


# ---------------------------------------------------------------------------
# AST


@dataclass(frozen=True)
class Atom:
    predicate: str
    args: tuple[str, ...] = ()

    def __str__(self) -> str:
        return "(" + " ".join((self.predicate,) + self.args) + ")"


@dataclass(frozen=True)
class TypedName:
    name: str
    type: str = "object"


@dataclass(frozen=True)
class PredicateSchema:
    name: str
    params: tuple[TypedName, ...] = ()


@dataclass(frozen=True)
class ActionSchema:
    name: str
    params: tuple[TypedName, ...]
    pre: tuple[Atom, ...] = ()
    # pairs compiled from (not (= a b))
    distinct: tuple[tuple[str, str], ...] = ()
    add: tuple[Atom, ...] = ()
    delete: tuple[Atom, ...] = ()
    # a number, a ground-able function term, or None when no cost is given
    cost: int | Atom | None = None


@dataclass(frozen=True)
class DomainAst:
    name: str
    requirements: tuple[str, ...] = ()
    types: tuple[TypedName, ...] = ()  # (type, parent type)
    constants: tuple[TypedName, ...] = ()
    predicates: tuple[PredicateSchema, ...] = ()
    functions: tuple[PredicateSchema, ...] = ()
    actions: tuple[ActionSchema, ...] = ()

    @property
    def type_parents(self) -> dict[str, str]:
        parents = {"object": ""}
        for t in self.types:
            if t.name != "object":
                parents[t.name] = t.type
        for t in self.types:
            parents.setdefault(t.type, "object")
        return parents

    def predicate(self, name: str) -> PredicateSchema | None:
        for p in self.predicates:
            if p.name == name:
                return p
        return None


@dataclass(frozen=True)
class ProblemAst:
    name: str
    domain_name: str
    objects: tuple[TypedName, ...] = ()
    init: tuple[Atom, ...] = ()
    numeric_init: tuple[tuple[Atom, float], ...] = ()
    goal: tuple[Atom, ...] = ()
    metric: str | None = None


# ---------------------------------------------------------------------------
# parsing helpers


def _typed_list(items, *, variables: bool) -> list[TypedName]:
    out: list[TypedName] = []
    pending: list[Sym] = []
    i = 0
    while i < len(items):
        x = items[i]
        if isinstance(x, list):
            raise _fail("unexpected list in typed list", x)
        if x == "-":
            if i + 1 >= len(items):
                raise _fail("missing type after '-'", x)
            t = items[i + 1]
            if isinstance(t, list):
                raise _fail("'either' types are not supported", t)
            if not pending:
                raise _fail("type annotation without names", x)
            out.extend(TypedName(str(p), str(t)) for p in pending)
            pending = []
            i += 2
            continue
        if variables and not x.startswith("?"):
            raise _fail(f"expected a variable, got {x!s}", x)
        if not variables and x.startswith("?"):
            raise _fail(f"unexpected variable {x!s}", x)
        pending.append(x)
        i += 1
    out.extend(TypedName(str(p)) for p in pending)
    return out


def _atom(x, what: str) -> Atom:
    if not isinstance(x, list) or not x or isinstance(x[0], list):
        raise _fail(f"expected an atom in {what}", x)
    for a in x[1:]:
        if isinstance(a, list):
            raise _fail(f"nested term in {what} (function symbols are not supported)", a)
    return Atom(str(x[0]), tuple(str(a) for a in x[1:]))


def _conjunction(x, what: str) -> list:
    if not isinstance(x, list):
        raise _fail(f"expected a formula in {what}", x)
    if not x:
        return []
    if x[0] == "and":
        out = []
        for part in x[1:]:
            out.extend(_conjunction(part, what))
        return out
    return [x]


_UNSUPPORTED_CONNECTIVES = {"or", "imply", "forall", "exists", "when"}


def _precondition(x) -> tuple[list[Atom], list[tuple[str, str]]]:
    pos: list[Atom] = []
    distinct: list[tuple[str, str]] = []
    for lit in _conjunction(x, "precondition"):
        head = lit[0] if lit else None
        if head == "not":
            if len(lit) != 2:
                raise _fail("malformed negation", lit)
            inner = _atom(lit[1], "precondition")
            if inner.predicate != "=":
                raise _fail("negative preconditions are not supported", lit)
            if len(inner.args) != 2:
                raise _fail("'=' takes two arguments", lit)
            distinct.append(inner.args)  # type: ignore[arg-type]
        elif head in _UNSUPPORTED_CONNECTIVES:
            raise _fail(f"'{head}' in preconditions is not supported", lit)
        else:
            a = _atom(lit, "precondition")
            if a.predicate == "=" and len(a.args) != 2:
                raise _fail("'=' takes two arguments", lit)
            pos.append(a)
    return pos, distinct


def _effect(x) -> tuple[list[Atom], list[Atom], int | Atom | None]:
    add: list[Atom] = []
    delete: list[Atom] = []
    cost: int | Atom | None = None
    for lit in _conjunction(x, "effect"):
        head = lit[0] if lit else None
        if head == "not":
            if len(lit) != 2:
                raise _fail("malformed negation", lit)
            delete.append(_atom(lit[1], "effect"))
        elif head == "increase":
            if len(lit) != 3 or not isinstance(lit[1], list) or list(lit[1]) != ["total-cost"]:
                raise _fail("only (increase (total-cost) ...) is supported", lit)
            amount = lit[2]
            if isinstance(amount, list):
                cost = _atom(amount, "cost term")
            else:
                try:
                    cost = int(amount)
                except ValueError:
                    raise _fail(f"non-integer action cost {amount!s}", amount) from None
                if cost < 0:
                    raise _fail("negative action cost", amount)
        elif head in _UNSUPPORTED_CONNECTIVES or head in {"decrease", "assign"}:
            raise _fail(f"'{head}' in effects is not supported", lit)
        else:
            add.append(_atom(lit, "effect"))
    return add, delete, cost


def _keyword_args(items, start: int) -> dict[str, object]:
    out = {}
    i = start
    while i < len(items):
        key = items[i]
        if isinstance(key, list) or not key.startswith(":"):
            raise _fail(f"expected a keyword, got {key!s}", key)
        if i + 1 >= len(items):
            raise _fail(f"missing value for {key!s}", key)
        out[str(key)] = items[i + 1]
        i += 2
    return out


def _header(expr, kind: str) -> str:
    if not isinstance(expr, list) or len(expr) < 2 or expr[0] != "define":
        raise _fail("expected (define ...)", expr)
    head = expr[1]
    if not isinstance(head, list) or len(head) != 2 or head[0] != kind:
        raise _fail(f"expected ({kind} <name>)", head)
    return str(head[1])


# ---------------------------------------------------------------------------
# domain


def parse_domain(text: str) -> DomainAst:
    expr = read_sexpr(text)
    name = _header(expr, "domain")
    requirements: list[str] = []
    types: list[TypedName] = []
    constants: list[TypedName] = []
    predicates: list[PredicateSchema] = []
    functions: list[PredicateSchema] = []
    actions: list[ActionSchema] = []
    for section in expr[2:]:
        if not isinstance(section, list) or not section:
            raise _fail("expected a domain section", section)
        key = section[0]
        if key == ":requirements":
            for r in section[1:]:
                if str(r) not in SUPPORTED_REQUIREMENTS:
                    raise UnsupportedRequirementError(str(r))
                requirements.append(str(r))
        elif key == ":types":
            types = _typed_list(section[1:], variables=False)
        elif key == ":constants":
            constants = _typed_list(section[1:], variables=False)
        elif key == ":predicates":
            for p in section[1:]:
                if not isinstance(p, list) or not p:
                    raise _fail("malformed predicate declaration", p)
                predicates.append(PredicateSchema(str(p[0]), tuple(_typed_list(p[1:], variables=True))))
        elif key == ":functions":
            items = [f for f in section[1:] if isinstance(f, list)]
            for f in items:
                functions.append(PredicateSchema(str(f[0]), tuple(_typed_list(f[1:], variables=True))))
        elif key == ":action":
            actions.append(_parse_action(section))
        elif key in (":derived", ":durative-action", ":axiom"):
            raise _fail(f"{key!s} is not supported", section)
        else:
            raise _fail(f"unknown domain section {key!s}", section)
    dom = DomainAst(name, tuple(requirements), tuple(types), tuple(constants),
                    tuple(predicates), tuple(functions), tuple(actions))
    _check_domain(dom)
    return dom


def _parse_action(section) -> ActionSchema:
    if len(section) < 2 or isinstance(section[1], list):
        raise _fail("action without a name", section)
    kw = _keyword_args(section, 2)
    unknown = set(kw) - {":parameters", ":precondition", ":effect"}
    if unknown:
        raise _fail(f"unknown action keyword {sorted(unknown)[0]}", section)
    params_expr = kw.get(":parameters", SList())
    if not isinstance(params_expr, list):
        raise _fail(":parameters must be a list", params_expr)
    params = _typed_list(params_expr, variables=True)
    pre, distinct = _precondition(kw.get(":precondition", SList()))
    add, delete, cost = _effect(kw.get(":effect", SList()))
    return ActionSchema(str(section[1]), tuple(params), tuple(pre), tuple(distinct),
                        tuple(add), tuple(delete), cost)


def _check_domain(dom: DomainAst) -> None:
    parents = dom.type_parents

    def check_type(t: str, where: str):
        if t not in parents:
            raise PDDLSemanticError(f"unknown type {t} in {where}")

    for t in dom.types:
        check_type(t.type, "type hierarchy")
        seen, cur = set(), t.name
        while cur:
            if cur in seen:
                raise PDDLSemanticError(f"cyclic type hierarchy at {t.name}")
            seen.add(cur)
            cur = parents.get(cur, "")
    for c in dom.constants:
        check_type(c.type, f"constant {c.name}")
    arity = {p.name: len(p.params) for p in dom.predicates}
    for p in dom.predicates:
        for v in p.params:
            check_type(v.type, f"predicate {p.name}")
    constants = {c.name for c in dom.constants}
    fn_arity = {f.name: len(f.params) for f in dom.functions}
    for a in dom.actions:
        declared = set()
        for v in a.params:
            check_type(v.type, f"action {a.name}")
            if v.name in declared:
                raise PDDLSemanticError(f"duplicate parameter {v.name} in action {a.name}")
            declared.add(v.name)
        if any(at.predicate == "=" for at in a.add + a.delete):
            raise PDDLSemanticError(f"'=' cannot appear in effects of {a.name}")
        atoms = list(a.pre) + list(a.add) + list(a.delete)
        atoms += [Atom("=", pair) for pair in a.distinct]
        for at in atoms:
            if at.predicate != "=":
                if at.predicate not in arity:
                    raise PDDLSemanticError(f"undeclared predicate {at.predicate} in action {a.name}")
                if arity[at.predicate] != len(at.args):
                    raise PDDLSemanticError(f"wrong arity for {at.predicate} in action {a.name}")
            for arg in at.args:
                if arg.startswith("?"):
                    if arg not in declared:
                        raise PDDLSemanticError(f"undeclared variable {arg} in action {a.name}")
                elif arg not in constants:
                    raise PDDLSemanticError(f"undeclared constant {arg} in action {a.name}")
        if isinstance(a.cost, Atom):
            if a.cost.predicate not in fn_arity:
                raise PDDLSemanticError(f"undeclared function {a.cost.predicate} in action {a.name}")
            for arg in a.cost.args:
                if arg.startswith("?") and arg not in declared:
                    raise PDDLSemanticError(f"undeclared variable {arg} in action {a.name}")


# ---------------------------------------------------------------------------
# problem


def parse_problem(text: str, domain: DomainAst | None = None) -> ProblemAst:
    """Parse a problem file.

    With ``domain`` given, predicates, arities, object types and object names
    are checked against it.
    """
    expr = read_sexpr(text)
    name = _header(expr, "problem")
    domain_name = ""
    objects: list[TypedName] = []
    init: list[Atom] = []
    numeric: list[tuple[Atom, float]] = []
    goal: list[Atom] = []
    metric = None
    for section in expr[2:]:
        if not isinstance(section, list) or not section:
            raise _fail("expected a problem section", section)
        key = section[0]
        if key == ":domain":
            domain_name = str(section[1])
        elif key == ":requirements":
            for r in section[1:]:
                if str(r) not in SUPPORTED_REQUIREMENTS:
                    raise UnsupportedRequirementError(str(r))
        elif key == ":objects":
            objects = _typed_list(section[1:], variables=False)
        elif key == ":init":
            for lit in section[1:]:
                if isinstance(lit, list) and lit and lit[0] == "=":
                    if len(lit) != 3 or not isinstance(lit[1], list):
                        raise _fail("malformed numeric initialisation", lit)
                    try:
                        value = float(lit[2])
                    except (TypeError, ValueError):
                        raise _fail("non-numeric fluent value", lit) from None
                    numeric.append((_atom(lit[1], "init"), value))
                else:
                    init.append(_atom(lit, "init"))
        elif key == ":goal":
            if len(section) != 2:
                raise _fail("malformed goal", section)
            for lit in _conjunction(section[1], "goal"):
                if lit and lit[0] in ("not", "=") or lit and lit[0] in _UNSUPPORTED_CONNECTIVES:
                    raise _fail("goals must be conjunctions of positive atoms", lit)
                goal.append(_atom(lit, "goal"))
        elif key == ":metric":
            metric = " ".join(_flatten(section[1:]))
        else:
            raise _fail(f"unknown problem section {key!s}", section)
    prob = ProblemAst(name, domain_name, tuple(objects), tuple(init), tuple(numeric), tuple(goal), metric)
    if domain is not None:
        check_problem(domain, prob)
    return prob


def _flatten(x) -> list[str]:
    if isinstance(x, list):
        out = ["("]
        for y in x:
            out.extend(_flatten(y))
        return out + [")"]
    return [str(x)]


def check_problem(domain: DomainAst, prob: ProblemAst) -> None:
    parents = domain.type_parents
    for o in prob.objects:
        if o.type not in parents:
            raise PDDLSemanticError(f"unknown type {o.type} for object {o.name}")
    names = {o.name for o in prob.objects} | {c.name for c in domain.constants}
    arity = {p.name: len(p.params) for p in domain.predicates}
    for where, atoms in (("init", prob.init), ("goal", prob.goal)):
        for at in atoms:
            if at.predicate not in arity:
                raise PDDLSemanticError(f"undeclared predicate {at.predicate} in {where}")
            if arity[at.predicate] != len(at.args):
                raise PDDLSemanticError(f"wrong arity for {at} in {where}")
            for arg in at.args:
                if arg not in names:
                    raise PDDLSemanticError(f"undeclared object {arg} in {where}")


# ---------------------------------------------------------------------------
# printing


def _typed_text(items: tuple[TypedName, ...]) -> str:
    parts = []
    for tname, group in itertools.groupby(items, key=lambda t: t.type):
        parts.append(" ".join(t.name for t in group) + f" - {tname}")
    return " ".join(parts)


def domain_to_pddl(dom: DomainAst) -> str:
    out = [f"(define (domain {dom.name})"]
    if dom.requirements:
        out.append(f"  (:requirements {' '.join(dom.requirements)})")
    if dom.types:
        out.append(f"  (:types {_typed_text(dom.types)})")
    if dom.constants:
        out.append(f"  (:constants {_typed_text(dom.constants)})")
    if dom.predicates:
        preds = " ".join(f"({p.name} {_typed_text(p.params)})".replace(" )", ")") for p in dom.predicates)
        out.append(f"  (:predicates {preds})")
    if dom.functions:
        fns = " ".join(f"({f.name} {_typed_text(f.params)})".replace(" )", ")") for f in dom.functions)
        out.append(f"  (:functions {fns})")
    for a in dom.actions:
        pre = [str(x) for x in a.pre] + [f"(not (= {x} {y}))" for x, y in a.distinct]
        eff = [str(x) for x in a.add] + [f"(not {x})" for x in a.delete]
        if a.cost is not None:
            eff.append(f"(increase (total-cost) {a.cost})")
        out.append(f"  (:action {a.name}")
        out.append(f"   :parameters ({_typed_text(a.params)})")
        out.append(f"   :precondition (and {' '.join(pre)})")
        out.append(f"   :effect (and {' '.join(eff)}))")
    out.append(")")
    return "\n".join(out) + "\n"


def problem_to_pddl(prob: ProblemAst) -> str:
    out = [f"(define (problem {prob.name})", f"  (:domain {prob.domain_name})"]
    if prob.objects:
        out.append(f"  (:objects {_typed_text(prob.objects)})")
    init = [str(a) for a in prob.init]
    init += [f"(= {a} {v:g})" for a, v in prob.numeric_init]
    out.append(f"  (:init {' '.join(init)})")
    out.append(f"  (:goal (and {' '.join(str(g) for g in prob.goal)}))")
    if prob.metric:
        out.append(f"  (:metric {prob.metric})")
    out.append(")")
    return "\n".join(out) + "\n"


# ---------------------------------------------------------------------------
# grounding


def _objects_by_type(dom: DomainAst, prob: ProblemAst) -> dict[str, list[str]]:
    parents = dom.type_parents
    by_type: dict[str, list[str]] = {t: [] for t in parents}
    seen = set()
    for o in list(dom.constants) + list(prob.objects):
        if o.name in seen:
            continue
        seen.add(o.name)
        t = o.type
        while t:
            by_type.setdefault(t, []).append(o.name)
            t = parents.get(t, "")
    return by_type


@dataclass
class _Grounder:
    dom: DomainAst
    prob: ProblemAst
    use_costs: bool
    static_init: set[Atom] = field(default_factory=set)
    fluent: set[str] = field(default_factory=set)

    def run(self, prune_unreachable: bool) -> GroundTask:
        dom, prob = self.dom, self.prob
        if prob.domain_name and prob.domain_name != dom.name:
            raise PDDLSemanticError(f"problem is for domain {prob.domain_name}, not {dom.name}")
        check_problem(dom, prob)
        fluent = self.fluent = {a.predicate for s in dom.actions for a in s.add + s.delete}
        init = list(dict.fromkeys(prob.init))
        self.static_init = {a for a in init if a.predicate not in fluent}
        numeric = dict(prob.numeric_init)
        by_type = _objects_by_type(dom, prob)
        has_costs = ":action-costs" in dom.requirements

        ground: list[tuple[ActionSchema, tuple[str, ...], list[Atom], list[Atom], list[Atom], int]] = []
        for schema in dom.actions:
            for binding in self._bindings(schema, by_type):
                sub = lambda at: Atom(at.predicate, tuple(binding.get(x, x) for x in at.args))  # noqa: E731
                pre = [sub(x) for x in schema.pre if x.predicate != "=" and x.predicate in fluent]
                add = [sub(x) for x in schema.add]
                delete = [sub(x) for x in schema.delete]
                if not self.use_costs:
                    cost = 1
                elif schema.cost is None:
                    cost = 0 if has_costs else 1
                elif isinstance(schema.cost, Atom):
                    term = sub(schema.cost)
                    if term not in numeric:
                        raise PDDLSemanticError(f"no initial value for cost term {term}")
                    cost = int(numeric[term])
                else:
                    cost = schema.cost
                args = tuple(binding[p.name] for p in schema.params)
                ground.append((schema, args, pre, add, delete, cost))

        goal = list(dict.fromkeys(prob.goal))
        # static goal facts are decided now: true ones vanish, false ones stay unreachable
        goal = [g for g in goal if g.predicate in fluent or g not in self.static_init]
        init_fluent = [a for a in init if a.predicate in fluent]

        if prune_unreachable:
            ground, reached = _relaxed_reachable(init_fluent, ground)
        else:
            reached = None

        facts: dict[Atom, int] = {}

        def fid(at: Atom) -> int:
            if at not in facts:
                facts[at] = len(facts)
            return facts[at]

        for at in init_fluent:
            fid(at)
        for _, _, pre, add, delete, _ in ground:
            for at in pre + add + delete:
                if reached is None or at in reached or at in add:
                    fid(at)
        for g in goal:
            fid(g)
        actions = []
        for schema, args, pre, add, delete, cost in ground:
            dels = frozenset(facts[d] for d in delete if d in facts)
            actions.append(GroundAction(schema.name, args, frozenset(fid(p) for p in pre),
                                        frozenset(fid(a) for a in add), dels, cost, len(actions)))
        return GroundTask(
            facts=tuple(str(f) for f in facts),
            actions=tuple(actions),
            init=frozenset(facts[a] for a in init_fluent),
            goal=frozenset(facts[g] for g in goal),
            name=prob.name,
            domain_name=dom.name,
        )

    def _bindings(self, schema: ActionSchema, by_type: dict[str, list[str]]) -> Iterator[dict[str, str]]:
        params = [p.name for p in schema.params]
        pos = {v: i for i, v in enumerate(params)}

        def ready_at(args: tuple[str, ...]) -> int:
            idx = [pos[a] for a in args if a.startswith("?")]
            return max(idx) if idx else -1

        # check each static atom / equality as soon as its last variable is bound
        checks: dict[int, list[tuple[str, Atom]]] = {}
        for at in schema.pre:
            if at.predicate == "=":
                checks.setdefault(ready_at(at.args), []).append(("eq", at))
            elif at.predicate not in self.fluent:
                checks.setdefault(ready_at(at.args), []).append(("static", at))
        for x, y in schema.distinct:
            checks.setdefault(ready_at((x, y)), []).append(("neq", Atom("=", (x, y))))

        binding: dict[str, str] = {}

        def ok(level: int) -> bool:
            for kind, at in checks.get(level, ()):
                args = tuple(binding.get(a, a) for a in at.args)
                if kind == "eq" and args[0] != args[1]:
                    return False
                if kind == "neq" and args[0] == args[1]:
                    return False
                if kind == "static" and Atom(at.predicate, args) not in self.static_init:
                    return False
            return True

        if not ok(-1):
            return
        domains = [by_type.get(p.type, []) for p in schema.params]

        def rec(level: int) -> Iterator[dict[str, str]]:
            if level == len(params):
                yield dict(binding)
                return
            for obj in domains[level]:
                binding[params[level]] = obj
                if ok(level):
                    yield from rec(level + 1)
            binding.pop(params[level], None)

        yield from rec(0)


def _relaxed_reachable(init, ground):
    """Keep only actions reachable in the delete relaxation from ``init``."""
    reached = set(init)
    waiting = {}
    todo = []
    remaining = []
    for k, (_, _, pre, add, _, _) in enumerate(ground):
        missing = set(pre) - reached
        remaining.append(len(missing))
        for p in missing:
            waiting.setdefault(p, []).append(k)
        if not missing:
            todo.append(k)
    used = [False] * len(ground)
    while todo:
        k = todo.pop()
        if used[k]:
            continue
        used[k] = True
        for f in ground[k][3]:
            if f not in reached:
                reached.add(f)
                for j in waiting.get(f, ()):
                    remaining[j] -= 1
                    if remaining[j] == 0:
                        todo.append(j)
    return [g for k, g in enumerate(ground) if used[k]], reached


def ground(domain: DomainAst, problem: ProblemAst, *, use_costs: bool = False,
           prune_unreachable: bool = True) -> GroundTask:
    """Instantiate ``domain`` on ``problem``.

    Action schemas are instantiated over type-consistent object tuples;
    instances whose static preconditions do not hold initially are dropped and
    static facts are compiled out of the task.  With ``prune_unreachable``
    (the default) only actions reachable in the delete relaxation are kept.
    ``use_costs=False`` forces unit costs.
    """
    return _Grounder(domain, problem, use_costs).run(prune_unreachable)


def load_task(domain_path, problem_path, **kwargs) -> GroundTask:
    with open(domain_path, encoding="utf-8") as f:
        dom = parse_domain(f.read())
    with open(problem_path, encoding="utf-8") as f:
        prob = parse_problem(f.read(), dom)
    return ground(dom, prob, **kwargs)
