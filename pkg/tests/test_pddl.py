import pytest

from banditplan.bench import BENCHMARK_DIR, fixture_problems
from banditplan.pddl import (
    PDDLSemanticError,
    PDDLSyntaxError,
    UnsupportedRequirementError,
    domain_to_pddl,
    ground,
    load_task,
    parse_domain,
    parse_problem,
    problem_to_pddl,
)

from helpers import naive_ground_names

MINIMAL = """
(define (domain tiny)
  (:requirements :strips)
  (:predicates (done))
  (:action finish :parameters () :precondition (and) :effect (done)))
"""

TYPED = """
(define (domain typed)
  (:requirements :strips :typing)
  (:types room - object)
  (:predicates (at ?r - room) (linked ?a - room ?b - room) (nowhere ?r - room))
  (:action visit :parameters (?r - room) :precondition (and) :effect (at ?r))
  (:action go :parameters (?a - room ?b - room)
    :precondition (and (at ?a) (linked ?a ?b)) :effect (and (at ?b) (not (at ?a))))
  (:action vanish :parameters (?r - room) :precondition (nowhere ?r) :effect (not (at ?r))))
"""

TYPED_PROBLEM = """
(define (problem two) (:domain typed)
  (:objects r1 r2 - room)
  (:init (linked r1 r2))
  (:goal (and (at r2))))
"""


def _read(domain, problem=None):
    dom = parse_domain((BENCHMARK_DIR / domain / "domain.pddl").read_text())
    if problem is None:
        return dom
    return dom, parse_problem((BENCHMARK_DIR / domain / f"{problem}.pddl").read_text(), dom)


def test_minimal_domain():
    dom = parse_domain(MINIMAL)
    assert dom.name == "tiny"
    assert len(dom.actions) == 1
    assert dom.actions[0].add[0].predicate == "done"


def test_adl_rejected():
    with pytest.raises(UnsupportedRequirementError) as exc:
        parse_domain(MINIMAL.replace(":strips", ":adl"))
    assert exc.value.requirement == ":adl"
    assert ":adl" in str(exc.value)


def test_negative_preconditions_rejected():
    with pytest.raises(UnsupportedRequirementError):
        parse_domain(MINIMAL.replace(":strips", ":strips :negative-preconditions"))
    neg = MINIMAL.replace(":precondition (and)", ":precondition (not (done))")
    with pytest.raises(PDDLSyntaxError):
        parse_domain(neg)


def test_syntax_error_position():
    with pytest.raises(PDDLSyntaxError) as exc:
        parse_domain("(define (domain x)\n  (:predicates (p)\n")
    assert exc.value.line >= 2
    with pytest.raises(PDDLSyntaxError) as exc:
        parse_domain("(define (domain x))\n   )")
    assert (exc.value.line, exc.value.col) == (2, 4)


def test_case_and_comments():
    dom = parse_domain("; leading comment\n" + MINIMAL.upper() + " ; trailing (comment\n")
    assert dom.name == "tiny" and dom.predicates[0].name == "done"


def test_undeclared_variable_rejected():
    bad = MINIMAL.replace(":effect (done)", ":effect (done ?x)")
    with pytest.raises(PDDLSemanticError):
        parse_domain(bad)


def test_undeclared_type_rejected():
    with pytest.raises(PDDLSemanticError):
        parse_domain(TYPED.replace("(?r - room) :precondition (and)", "(?r - hall) :precondition (and)"))


def test_blocksworld_counts():
    dom = _read("blocksworld")
    assert len(dom.actions) == 4
    assert len(dom.predicates) == 5


def test_three_block_problem():
    _, prob = _read("blocksworld", "p01")
    assert len(prob.objects) == 3
    assert len(prob.goal) == 2


def test_empty_goal():
    dom = parse_domain(MINIMAL)
    prob = parse_problem("(define (problem p) (:domain tiny) (:init) (:goal (and)))", dom)
    assert prob.goal == ()
    task = ground(dom, prob)
    assert task.goal == frozenset()


def test_goal_undeclared_object():
    dom = parse_domain(TYPED)
    with pytest.raises(PDDLSemanticError):
        parse_problem(TYPED_PROBLEM.replace("(at r2)", "(at r3)"), dom)


def test_goal_undeclared_predicate_and_arity():
    dom = parse_domain(TYPED)
    with pytest.raises(PDDLSemanticError):
        parse_problem(TYPED_PROBLEM.replace("(at r2)", "(on r2)"), dom)
    with pytest.raises(PDDLSemanticError):
        parse_problem(TYPED_PROBLEM.replace("(at r2)", "(at r1 r2)"), dom)


def test_negative_goal_rejected():
    dom = parse_domain(TYPED)
    with pytest.raises(PDDLSyntaxError):
        parse_problem(TYPED_PROBLEM.replace("(and (at r2))", "(and (not (at r2)))"), dom)


def test_domain_mismatch():
    dom = parse_domain(TYPED)
    prob = parse_problem(TYPED_PROBLEM.replace("(:domain typed)", "(:domain other)"))
    with pytest.raises(PDDLSemanticError):
        ground(dom, prob)


def test_one_param_two_objects():
    dom = parse_domain(TYPED)
    prob = parse_problem(TYPED_PROBLEM, dom)
    task = ground(dom, prob, prune_unreachable=False)
    visits = [a for a in task.actions if a.name == "visit"]
    assert len(visits) == 2


def test_static_pruning():
    dom = parse_domain(TYPED)
    prob = parse_problem(TYPED_PROBLEM, dom)
    task = ground(dom, prob, prune_unreachable=False)
    # nowhere is in no effect and not in init
    assert not [a for a in task.actions if a.name == "vanish"]
    # linked is static: only (go r1 r2) survives, and the fact is compiled out
    assert [a.args for a in task.actions if a.name == "go"] == [("r1", "r2")]
    assert not any("linked" in f for f in task.facts)


def test_equality_compiled_away():
    dom, prob = _read("gripper", "p01")
    task = ground(dom, prob)
    moves = [a for a in task.actions if a.name == "move"]
    assert moves and all(a.args[0] != a.args[1] for a in moves)


@pytest.mark.parametrize("dom_path,prob_path", fixture_problems())
def test_round_trip(dom_path, prob_path):
    dom = parse_domain(open(dom_path).read())
    again = parse_domain(domain_to_pddl(dom))
    assert again == dom
    prob = parse_problem(open(prob_path).read(), dom)
    assert parse_problem(problem_to_pddl(prob), dom) == prob


def test_three_block_grounding_oracle():
    dom, prob = _read("blocksworld", "p01")
    task = ground(dom, prob, prune_unreachable=False)
    names = {str(a) for a in task.actions}
    assert names == naive_ground_names(dom, prob)
    assert len(task.actions) == 24


def _relaxed_closure(task):
    reached = set(task.init)
    changed = True
    while changed:
        changed = False
        for a in task.actions:
            if a.pre <= reached and not a.add <= reached:
                reached |= a.add
                changed = True
    return {str(a) for a in task.actions if a.pre <= reached}


# (full instantiation, relaxed-reachable) action counts
RECORDED = {
    ("blocksworld", "p01"): (24, 24), ("blocksworld", "p02"): (40, 40),
    ("blocksworld", "p03"): (60, 60), ("blocksworld", "p04"): (84, 84),
    ("bridges", "p01"): (21, 11), ("bridges", "p02"): (38, 17), ("bridges", "p03"): (59, 23),
    ("gripper", "p01"): (18, 18), ("gripper", "p02"): (26, 26),
    ("gripper", "p03"): (34, 34), ("gripper", "p04"): (42, 42),
    ("miconic", "p01"): (10, 10), ("miconic", "p02"): (18, 18),
    ("miconic", "p03"): (28, 28), ("miconic", "p04"): (40, 40),
}


@pytest.mark.parametrize("dom_path,prob_path", fixture_problems())
def test_fixture_ground_counts(dom_path, prob_path):
    key = (dom_path.split("/")[-2], prob_path.split("/")[-1][:-5])
    dom = parse_domain(open(dom_path).read())
    prob = parse_problem(open(prob_path).read(), dom)
    full = ground(dom, prob, prune_unreachable=False)
    pruned = ground(dom, prob)
    assert {str(a) for a in full.actions} == naive_ground_names(dom, prob)
    assert {str(a) for a in pruned.actions} == _relaxed_closure(full)
    assert (len(full.actions), len(pruned.actions)) == RECORDED[key]
    n = len(pruned.facts)
    for a in pruned.actions:
        assert all(f < n for f in a.pre | a.add | a.delete)


def test_action_costs():
    text = """
    (define (domain costly) (:requirements :strips :action-costs)
      (:predicates (p) (q))
      (:functions (total-cost) (step-cost))
      (:action a :parameters () :precondition (p) :effect (and (q) (increase (total-cost) (step-cost))))
      (:action b :parameters () :precondition (p) :effect (and (q) (increase (total-cost) 5)))
      (:action c :parameters () :precondition (q) :effect (p)))
    """
    dom = parse_domain(text)
    prob = parse_problem("""(define (problem x) (:domain costly) (:init (p) (= (step-cost) 3))
                             (:goal (and (q))) (:metric minimize (total-cost)))""", dom)
    costs = {a.name: a.cost for a in ground(dom, prob, use_costs=True).actions}
    assert costs == {"a": 3, "b": 5, "c": 0}
    assert {a.cost for a in ground(dom, prob).actions} == {1}


def test_load_task_blocksworld():
    bw = BENCHMARK_DIR / "blocksworld"
    task = load_task(bw / "domain.pddl", bw / "p01.pddl")
    assert len(task.facts) == 19
    assert len(task.goal) == 2
