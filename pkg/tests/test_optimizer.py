
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from sjaya import (
    Bounds,
    Counters,
    EvaluationError,
    Individual,
    OptimizerConfig,
    Population,
    Problem,
    RVector,
    accept,
    draw_rvector,
    initialize_population,
    jaya_generation,
    make_candidate,
    rng_streams,
    run,
    sjaya_generation,
)
from sjaya.optimizer import scan_best, scan_worst

from _reference import reference_sweep


def sphere3() -> Problem:
    return Problem(
        name="sphere3",
        objective=lambda x: float(x @ x),
        bounds=Bounds.uniform(-5.0, 5.0, 3),
        optimum_value=0.0,
        success_target=1e-6,
    )


def shifted_abs2() -> Problem:
    # optimum at (-2, 3); exercises negative coordinates and the |x| asymmetry
    return Problem(
        name="shifted_abs2",
        objective=lambda x: float(abs(x[0] + 2.0) + abs(x[1] - 3.0)),
        bounds=Bounds.uniform(-4.0, 4.0, 2),
        optimum_value=0.0,
    )


def one_dim(objective) -> Problem:
    return Problem(name="one_dim", objective=objective, bounds=Bounds.uniform(-10.0, 10.0, 1))


def rvec(r1, r2):
    return RVector(np.atleast_1d(np.asarray(r1, dtype=float)),
                   np.atleast_1d(np.asarray(r2, dtype=float)))


# ---------------------------------------------------------------------------
# candidate construction

def test_candidate_hand_value():
    # 2 + 0.5*(1-2) - 0.5*(5-2) = 0
    bounds = Bounds.uniform(-10.0, 10.0, 1)
    cand = make_candidate(
        Individual(np.array([2.0]), 4.0),
        Individual(np.array([1.0]), 1.0),
        Individual(np.array([5.0]), 25.0),
        rvec(0.5, 0.5), bounds,
    )
    assert cand[0] == 0.0


def test_candidate_clamped_at_lower_bound():
    # -9 + 1*(-10-9) - 1*(10-9) = -29, clamped to -10
    bounds = Bounds.uniform(-10.0, 10.0, 1)
    cand = make_candidate(
        Individual(np.array([-9.0]), 0.0),
        Individual(np.array([-10.0]), 0.0),
        Individual(np.array([10.0]), 0.0),
        rvec(1.0, 1.0), bounds,
    )
    assert cand[0] == -10.0


def test_candidate_all_zero_is_fixed():
    bounds = Bounds.uniform(-1.0, 1.0, 4)
    zero = Individual(np.zeros(4), 0.0)
    cand = make_candidate(zero, zero, zero, draw_rvector(np.random.default_rng(0), 4), bounds)
    assert np.array_equal(cand, np.zeros(4))


def test_candidate_dimension_mismatch():
    bounds = Bounds.uniform(-1.0, 1.0, 2)
    with pytest.raises(ValueError, match="dimension"):
        make_candidate(
            Individual(np.zeros(2), 0.0),
            Individual(np.zeros(3), 0.0),
            Individual(np.zeros(2), 0.0),
            rvec([0.5, 0.5], [0.5, 0.5]), bounds,
        )


@settings(max_examples=200, deadline=None)
@given(st.data())
def test_candidate_formula_and_bounds(data):
    d = data.draw(st.integers(1, 8))
    finite = st.floats(-100.0, 100.0, allow_nan=False)
    cur = np.array(data.draw(st.lists(finite, min_size=d, max_size=d)))
    best = np.array(data.draw(st.lists(finite, min_size=d, max_size=d)))
    worst = np.array(data.draw(st.lists(finite, min_size=d, max_size=d)))
    unit = st.floats(0.0, 1.0, exclude_min=True, allow_nan=False)
    r1 = np.array(data.draw(st.lists(unit, min_size=d, max_size=d)))
    r2 = np.array(data.draw(st.lists(unit, min_size=d, max_size=d)))
    bounds = Bounds.uniform(-100.0, 100.0, d)

    cand = make_candidate(Individual(cur, 0.0), Individual(best, 0.0),
                          Individual(worst, 0.0), rvec(r1, r2), bounds)
    expected = np.clip(
        (r1 * (best - np.abs(cur)) - r2 * (worst - np.abs(cur))) + cur,
        bounds.lower, bounds.upper,
    )
    assert np.array_equal(cand, expected)
    assert np.all(cand >= bounds.lower) and np.all(cand <= bounds.upper)


# ---------------------------------------------------------------------------
# acceptance rule

def test_accept_tie_handling():
    assert accept(5.0, 5.0, "sjaya") is True
    assert accept(5.0, 5.0, "jaya") is False
    assert accept(4.0, 5.0, "sjaya") is True
    assert accept(4.0, 5.0, "jaya") is True
    assert accept(6.0, 5.0, "sjaya") is False
    assert accept(6.0, 5.0, "jaya") is False


def test_accept_rejects_nan():
    with pytest.raises(EvaluationError):
        accept(float("nan"), 1.0, "sjaya")
    with pytest.raises(EvaluationError):
        accept(1.0, float("nan"), "jaya")


def test_accept_unknown_variant():
    with pytest.raises(ValueError):
        accept(1.0, 2.0, "annealing")


# ---------------------------------------------------------------------------
# population and rng plumbing

def test_initialize_population_contract():
    problem = Problem(name="sphere30",
                      objective=lambda x: float(x @ x),
                      bounds=Bounds.uniform(-100.0, 100.0, 30))
    counters = Counters()
    pop = initialize_population(problem, 20, np.random.default_rng(0), counters)
    assert pop.size == 20 and pop.dimension == 30
    assert counters.evaluations == 20
    assert np.all(pop.x >= -100.0) and np.all(pop.x <= 100.0)
    assert np.array_equal(pop.fitness, [problem.objective(row) for row in pop.x])


def test_best_worst_scan_and_tie_break():
    pop = Population(np.zeros((3, 1)), np.array([3.0, 1.0, 7.0]))
    assert (pop.best_index, pop.worst_index) == (1, 2)
    tied = Population(np.zeros((2, 1)), np.array([2.0, 2.0]))
    assert (tied.best_index, tied.worst_index) == (0, 0)
    assert scan_best(np.array([5.0, 1.0, 1.0])) == 1
    assert scan_worst(np.array([5.0, 5.0, 1.0])) == 0


def test_rvector_range_and_validation():
    rng = np.random.default_rng(42)
    for _ in range(100):
        r = draw_rvector(rng, 30)
        assert np.all(r.r1 > 0.0) and np.all(r.r1 <= 1.0)
        assert np.all(r.r2 > 0.0) and np.all(r.r2 <= 1.0)
    with pytest.raises(ValueError):
        RVector(np.array([0.0]), np.array([0.5]))
    with pytest.raises(ValueError):
        RVector(np.array([0.5]), np.array([1.5]))


def test_config_validation():
    with pytest.raises(ValueError):
        OptimizerConfig(pop_size=1, generations=10)
    with pytest.raises(ValueError):
        OptimizerConfig(pop_size=5, generations=-1)
    with pytest.raises(ValueError):
        OptimizerConfig(pop_size=5, generations=1, variant="pso")
    with pytest.raises(ValueError):
        OptimizerConfig(pop_size=5, generations=1, r_schedule="weekly")


def test_invalid_bounds_rejected():
    with pytest.raises(ValueError):
        Bounds(np.array([1.0, 0.0]), np.array([2.0, 0.0]))
    with pytest.raises(ValueError):
        Bounds(np.array([]), np.array([]))


def test_init_stream_is_variant_independent():
    problem = sphere3()
    pop_a = initialize_population(problem, 6, rng_streams(9)[0])
    pop_b = initialize_population(problem, 6, rng_streams(9)[0])
    assert np.array_equal(pop_a.x, pop_b.x)


# ---------------------------------------------------------------------------
# hand-worked generation semantics

def test_sjaya_generation_hand_case():
    """Maximize x (f = -x on [-10, 10]); pop [5, 7, 2], r1 = r2 = 1.

    Member 0 jumps to the bound and becomes the global best immediately;
    member 1 must therefore be pulled toward the *new* best; the worst is
    rescanned at j=2 and the all-tie population resolves to index 0.
    """
    problem = one_dim(lambda x: -float(x[0]))
    pop = Population(np.array([[5.0], [7.0], [2.0]]), np.array([-5.0, -7.0, -2.0]))
    assert (pop.best_index, pop.worst_index) == (1, 2)
    counters = Counters()
    sjaya_generation(pop, problem, rvec(1.0, 1.0), counters)
    assert pop.x[:, 0].tolist() == [10.0, 10.0, 10.0]
    assert pop.fitness.tolist() == [-10.0, -10.0, -10.0]
    assert pop.best_index == 0   # set at j=0, kept on later ties
    assert pop.worst_index == 0  # rescan after j=2: all tied, lowest index
    assert counters.evaluations == 3


def test_jaya_generation_hand_case():
    """Same setup as the sjaya hand case but with frozen snapshots.

    Member 2 is pulled toward the generation-start best (7), not the
    improved member 0, landing at 7 instead of the bound."""
    problem = one_dim(lambda x: -float(x[0]))
    pop = Population(np.array([[5.0], [7.0], [2.0]]), np.array([-5.0, -7.0, -2.0]))
    counters = Counters()
    jaya_generation(pop, problem, rvec(1.0, 1.0), counters)
    assert pop.x[:, 0].tolist() == [10.0, 10.0, 7.0]
    assert pop.best_index == 0 and pop.worst_index == 2
    assert counters.evaluations == 3


def test_jaya_uses_stale_best_vector_sjaya_uses_fresh():
    """Paired one-generation differential on f = x^2, pop [2, 3], r=(0.5, 0.25).

    Member 0 improves itself to 1.75.  Jaya's member 1 still moves toward
    the snapshot best 2 (-> 2.5); sjaya's member 1 moves toward the live
    best 1.75 (-> 2.375)."""
    problem = one_dim(lambda x: float(x[0]) ** 2)

    pop = Population(np.array([[2.0], [3.0]]), np.array([4.0, 9.0]))
    jaya_generation(pop, problem, rvec(0.5, 0.25), Counters())
    assert pop.x[:, 0].tolist() == [1.75, 2.5]

    pop = Population(np.array([[2.0], [3.0]]), np.array([4.0, 9.0]))
    sjaya_generation(pop, problem, rvec(0.5, 0.25), Counters())
    assert pop.x[:, 0].tolist() == [1.75, 2.375]


def test_clone_population_is_sjaya_fixed_point():
    problem = sphere3()
    x = np.tile([1.5, 0.0, 4.25], (6, 1))  # non-negative orthant clones
    pop = Population(x.copy(), np.array([problem.objective(row) for row in x]))
    counters = Counters()
    sjaya_generation(pop, problem, draw_rvector(np.random.default_rng(5), 3), counters)
    assert np.array_equal(pop.x, x)
    assert pop.best_index == 0 and pop.worst_index == 0
    assert counters.evaluations == 6


def test_generation_costs_exactly_pop_size_evaluations():
    problem = sphere3()
    for maker in (sjaya_generation, jaya_generation):
        pop = initialize_population(problem, 7, np.random.default_rng(1))
        counters = Counters()
        maker(pop, problem, draw_rvector(np.random.default_rng(2), 3), counters)
        assert counters.evaluations == 7


# ---------------------------------------------------------------------------
# production sweep vs naive reference (bit-exact), shadow scans included

@pytest.mark.parametrize("variant", ["sjaya", "jaya"])
@pytest.mark.parametrize("problem_maker,pop_size", [
    (sphere3, 2), (sphere3, 3), (sphere3, 10),
    (shifted_abs2, 5), (shifted_abs2, 10),
])
def test_sweep_matches_reference(variant, problem_maker, pop_size):
    problem = problem_maker()
    init_rng, sweep_rng = rng_streams(1234 + pop_size)
    pop = initialize_population(problem, pop_size, init_rng)
    ref_x = [row.copy() for row in pop.x]
    ref_fit = list(pop.fitness)
    ref_bi, ref_wi = pop.best_index, pop.worst_index

    generation = sjaya_generation if variant == "sjaya" else jaya_generation
    for t in range(1, 51):
        r = draw_rvector(sweep_rng, problem.dimension, t)
        generation(pop, problem, r, Counters())
        ref_x, ref_fit, ref_bi, ref_wi = reference_sweep(
            ref_x, ref_fit, ref_bi, ref_wi, problem, r, variant)
        assert np.array_equal(pop.x, np.array(ref_x))
        assert pop.fitness.tolist() == ref_fit
        assert (pop.best_index, pop.worst_index) == (ref_bi, ref_wi)


# ---------------------------------------------------------------------------
# whole runs

def test_zero_generations_run_is_initialization_only():
    trace = run(sphere3(), OptimizerConfig(pop_size=8, generations=0, seed=3))
    assert trace.evaluations == 8
    assert trace.improvements[0][0] >= 1
    assert trace.improvements[-1][1] == trace.best_fitness


def test_run_evaluation_accounting_and_monotonicity():
    for variant in ("sjaya", "jaya"):
        trace = run(sphere3(), OptimizerConfig(pop_size=6, generations=40,
                                               seed=11, variant=variant))
        assert trace.evaluations == 6 * 41
        evals = [e for e, _ in trace.improvements]
        fits = [f for _, f in trace.improvements]
        assert evals == sorted(evals)
        assert all(a > b for a, b in zip(fits, fits[1:]))
        assert trace.best_fitness == fits[-1]
        assert trace.best.fitness == problem_value(trace)


def problem_value(trace):
    return float(trace.best.x @ trace.best.x)


def test_run_best_member_within_bounds():
    problem = shifted_abs2()
    trace = run(problem, OptimizerConfig(pop_size=5, generations=30, seed=2))
    assert problem.bounds.contains(trace.best.x)


def test_run_is_deterministic():
    config = OptimizerConfig(pop_size=6, generations=25, seed=99, variant="sjaya")
    a = run(sphere3(), config)
    b = run(sphere3(), config)
    assert a.improvements == b.improvements
    assert np.array_equal(a.best.x, b.best.x)
    assert a.best.fitness == b.best.fitness


def test_paired_variants_share_initial_population():
    for seed in (0, 5):
        a = run(sphere3(), OptimizerConfig(pop_size=9, generations=0, seed=seed, variant="sjaya"))
        b = run(sphere3(), OptimizerConfig(pop_size=9, generations=0, seed=seed, variant="jaya"))
        assert a.improvements == b.improvements
        assert np.array_equal(a.best.x, b.best.x)


def test_per_individual_schedule_runs_and_differs():
    shared = run(sphere3(), OptimizerConfig(6, 20, seed=4, r_schedule="per_generation"))
    perind = run(sphere3(), OptimizerConfig(6, 20, seed=4, r_schedule="per_individual"))
    assert shared.evaluations == perind.evaluations == 6 * 21
    assert shared.improvements != perind.improvements


def test_nan_objective_aborts_run():
    problem = Problem(
        name="nan_trap",
        objective=lambda x: float("nan") if x[0] > 0 else float(x[0]),
        bounds=Bounds.uniform(-1.0, 1.0, 1),
    )
    with pytest.raises(EvaluationError):
        run(problem, OptimizerConfig(pop_size=4, generations=5, seed=0))
