import numpy as np
import pytest
from scipy import stats

from colliderlab import (
    Assignment,
    Dataset,
    Noise,
    SemSpec,
    Term,
    compile_sem,
    describe,
    generate,
    generate_do,
    implied_moments,
    library,
    population_ols,
    spearman_matrix,
)
from colliderlab.errors import (
    ConstantColumn,
    DuplicateVariable,
    ForwardReference,
    NegativeSd,
    SingularDesign,
    UnknownVariable,
)

from .oracles import (
    CONFOUNDER_DEMO_ASSIGNMENTS,
    fraction_moments,
    sodium_assignments,
)


class TestCompile:
    def test_confounder_demo_order(self, confounder_sem):
        assert confounder_sem.order == ("W", "A", "Y")

    def test_forward_reference(self):
        spec = SemSpec(assignments=(
            Assignment("A", parents=(Term("B", 1.0),)),
            Assignment("B"),
        ))
        with pytest.raises(ForwardReference):
            compile_sem(spec)

    def test_duplicate_variable(self):
        spec = SemSpec(assignments=(Assignment("A"), Assignment("A")))
        with pytest.raises(DuplicateVariable):
            compile_sem(spec)

    def test_indicator_name_collision(self):
        from colliderlab import Indicator

        spec = SemSpec(
            assignments=(Assignment("A"),),
            indicators=(Indicator("A", "A", 0.0),),
        )
        with pytest.raises(DuplicateVariable):
            compile_sem(spec)

    def test_negative_sd(self):
        spec = SemSpec(assignments=(Assignment("A", noise=Noise(0.0, -1.0)),))
        with pytest.raises(NegativeSd):
            compile_sem(spec)

    def test_indicator_unknown_source(self):
        from colliderlab import Indicator

        spec = SemSpec(assignments=(Assignment("A"),),
                       indicators=(Indicator("H", "B", 0.0),))
        with pytest.raises(UnknownVariable):
            compile_sem(spec)

    def test_empty_spec(self):
        sem = compile_sem(SemSpec())
        assert sem.order == ()
        assert sem.dag.nodes == ()

    def test_sodium_model_dag_matches_short_label_fixture(self, sodium_sem):
        mapping = {
            library.AGE: "AGE",
            library.SODIUM: "SOD",
            library.SBP: "SBP",
            library.PROTEINURIA: "PRO",
        }
        derived = {
            (mapping[a], mapping[b])
            for a, b in sodium_sem.dag.edges
            if a in mapping and b in mapping
        }
        assert derived == set(library.sodium_pressure_dag().edges)
        # indicator rides along as a node fed by its source
        assert library.HYPERTENSION in sodium_sem.dag.nodes
        assert sodium_sem.dag.parents(library.HYPERTENSION) == {library.SBP}


class TestGenerate:
    def test_bit_identical_reproduction(self, sodium_sem):
        a = generate(sodium_sem, 500, 123)
        b = generate(sodium_sem, 500, 123)
        for name in a.names():
            assert np.array_equal(a.column(name), b.column(name))

    def test_different_seeds_differ(self, sodium_sem):
        a = generate(sodium_sem, 100, 1)
        b = generate(sodium_sem, 100, 2)
        assert not np.array_equal(a.column(library.SBP), b.column(library.SBP))

    def test_prefix_stability_across_n(self, sodium_sem):
        short = generate(sodium_sem, 100, 9)
        long = generate(sodium_sem, 1000, 9)
        for name in short.names():
            assert np.array_equal(short.column(name), long.column(name)[:100])

    def test_chunk_boundary_determinism(self, confounder_sem):
        from colliderlab.sem import GENERATION_CHUNK

        n = GENERATION_CHUNK + 7
        data = generate(confounder_sem, n, 5)
        again = generate(confounder_sem, n, 5)
        assert np.array_equal(data.column("Y"), again.column("Y"))

    def test_sodium_means_at_one_million(self, sodium_data_1m):
        assert abs(sodium_data_1m.column(library.SBP).mean() - 133.79) < 0.05
        assert abs(sodium_data_1m.column(library.HYPERTENSION).mean() - 0.275) < 0.005

    def test_degenerate_noise_is_exact(self):
        sem = compile_sem(SemSpec(assignments=(
            Assignment("X", intercept=7.0, noise=Noise(0.0, 0.0)),
        )))
        data = generate(sem, 3, 42)
        assert np.array_equal(data.column("X"), np.array([7.0, 7.0, 7.0]))

    def test_indicator_consistency(self, sodium_data_1k):
        sbp = sodium_data_1k.column(library.SBP)
        hyp = sodium_data_1k.column(library.HYPERTENSION)
        assert np.array_equal(hyp, (sbp > 140.0).astype(float))
        assert set(np.unique(hyp)) <= {0.0, 1.0}

    def test_columns_are_immutable(self, sodium_data_1k):
        with pytest.raises(ValueError):
            sodium_data_1k.column(library.SBP)[0] = 0.0

    def test_provenance_recorded(self, sodium_sem):
        data = generate(sodium_sem, 10, 99)
        assert data.provenance.seed == 99
        assert data.provenance.spec_digest == sodium_sem.digest

    def test_rejects_nonpositive_n(self, sodium_sem):
        with pytest.raises(ValueError):
            generate(sodium_sem, 0, 1)


class TestGenerateDo:
    def test_average_treatment_effect(self, confounder_sem):
        n = 1_000_000
        treated = generate_do(confounder_sem, {"A": 1.0}, n, 7)
        control = generate_do(confounder_sem, {"A": 0.0}, n, 7)
        ate = treated.column("Y").mean() - control.column("Y").mean()
        assert abs(ate - 0.300) < 0.01

    def test_sodium_intervention_shifts_sbp(self, sodium_sem):
        n = 1_000_000
        for dose in (2.0, 5.0):
            data = generate_do(sodium_sem, {library.SODIUM: dose}, n, 11)
            assert abs(data.column(library.SBP).mean() - (1.05 * dose + 130.0)) < 0.05

    def test_do_on_childless_root_is_constant(self):
        sem = compile_sem(SemSpec(assignments=(Assignment("R"), Assignment("S"))))
        data = generate_do(sem, {"R": 3.5}, 50, 0)
        assert np.array_equal(data.column("R"), np.full(50, 3.5))

    def test_no_interventions_equals_generate(self, sodium_sem):
        plain = generate(sodium_sem, 200, 13)
        via_do = generate_do(sodium_sem, {}, 200, 13)
        for name in plain.names():
            assert np.array_equal(plain.column(name), via_do.column(name))

    def test_unknown_variable(self, sodium_sem):
        with pytest.raises(UnknownVariable):
            generate_do(sodium_sem, {"nope": 1.0}, 10, 0)
        with pytest.raises(UnknownVariable):
            # indicators have no structural equation to replace
            generate_do(sodium_sem, {library.HYPERTENSION: 1.0}, 10, 0)


class TestImpliedMoments:
    def test_confounder_demo_values(self, confounder_sem):
        mom = implied_moments(confounder_sem)
        assert mom.var_of("A") == pytest.approx(1.25, abs=1e-12)
        assert mom.cov_of("A", "Y") == pytest.approx(0.575, abs=1e-12)
        # hand recursion: Y = 0.55 W + 0.3 eA + eY so Var(Y) = 1.3925
        assert mom.var_of("Y") == pytest.approx(1.3925, abs=1e-12)

    def test_sodium_model_values(self, sodium_sem):
        mom = implied_moments(sodium_sem)
        assert mom.var_of(library.SBP) == pytest.approx(108.02, abs=0.005)
        assert mom.cov_of(library.SODIUM, library.SBP) == pytest.approx(3.9088, abs=5e-5)
        assert mom.mean_of(library.SBP) == pytest.approx(133.7916667, abs=1e-6)

    def test_single_standard_normal_root(self):
        sem = compile_sem(SemSpec(assignments=(Assignment("Z"),)))
        mom = implied_moments(sem)
        assert mom.mean_of("Z") == 0.0
        assert mom.var_of("Z") == 1.0

    def test_matches_fraction_oracle(self, confounder_sem, sodium_sem):
        for sem, assignments in (
            (confounder_sem, CONFOUNDER_DEMO_ASSIGNMENTS),
            (sodium_sem, sodium_assignments()),
        ):
            names, mean, cov = fraction_moments(assignments)
            mom = implied_moments(sem)
            for a in names:
                assert mom.mean_of(a) == pytest.approx(float(mean[a]), abs=1e-9)
                for b in names:
                    want = cov[(a, b)] if (a, b) in cov else cov[(b, a)]
                    assert mom.cov_of(a, b) == pytest.approx(float(want), abs=1e-9)

    def test_covariance_is_positive_semidefinite(self, sodium_sem):
        mom = implied_moments(sodium_sem)
        assert np.linalg.eigvalsh(mom.cov).min() >= -1e-9

    def test_sample_moments_within_five_se(self, sodium_sem, sodium_data_1m):
        mom = implied_moments(sodium_sem)
        n = sodium_data_1m.n
        for name in sodium_sem.order:
            col = sodium_data_1m.column(name)
            se_mean = np.sqrt(mom.var_of(name) / n)
            assert abs(col.mean() - mom.mean_of(name)) < 5 * se_mean
            se_var = mom.var_of(name) * np.sqrt(2.0 / (n - 1))
            assert abs(col.var(ddof=1) - mom.var_of(name)) < 5 * se_var


class TestPopulationOls:
    def test_collider_demo_crude(self, collider_sem):
        coefs = population_ols(collider_sem, "Y", ["A"])
        assert coefs["A"] == pytest.approx(0.300, abs=1e-12)

    def test_collider_demo_adjusted(self, collider_sem):
        coefs = population_ols(collider_sem, "Y", ["A", "C"])
        # exact fractions -78/181 and 90/181 from the moment equations
        assert coefs["A"] == pytest.approx(-78.0 / 181.0, abs=1e-12)
        assert coefs["C"] == pytest.approx(90.0 / 181.0, abs=1e-12)

    def test_sodium_collider_model(self, sodium_sem):
        coefs = population_ols(
            sodium_sem, library.SBP, [library.SODIUM, library.AGE, library.PROTEINURIA]
        )
        assert coefs[library.SODIUM] == pytest.approx(-0.910, abs=1e-9)
        assert coefs[library.AGE] == pytest.approx(0.400, abs=1e-9)
        assert coefs[library.PROTEINURIA] == pytest.approx(0.400, abs=1e-9)

    def test_structural_recovery_is_exact(self, sodium_sem):
        coefs = population_ols(sodium_sem, library.SBP, [library.SODIUM, library.AGE])
        assert coefs[library.SODIUM] == pytest.approx(1.05, abs=1e-9)
        assert coefs[library.AGE] == pytest.approx(2.00, abs=1e-9)
        assert coefs["intercept"] == pytest.approx(0.0, abs=1e-9)

    def test_univariate_slope(self, sodium_sem):
        from .oracles import fraction_population_ols, sodium_assignments

        crude = population_ols(sodium_sem, library.SBP, [library.SODIUM])
        exact = fraction_population_ols(sodium_assignments(), library.SBP,
                                        [library.SODIUM])
        assert crude[library.SODIUM] == pytest.approx(float(exact[1]), abs=1e-9)
        assert crude[library.SODIUM] == pytest.approx(3.6287966, abs=1e-6)

    def test_singular_design(self, sodium_sem):
        with pytest.raises(SingularDesign):
            population_ols(sodium_sem, library.SBP, [library.AGE, library.AGE])

    def test_indicator_not_continuous(self, sodium_sem):
        with pytest.raises(UnknownVariable):
            population_ols(sodium_sem, library.SBP, [library.HYPERTENSION])


class TestDescribe:
    def test_constant_column(self):
        data = Dataset(4, {"c": np.full(4, 5.0)})
        summary = describe(data)["c"]
        assert (summary.min, summary.q1, summary.median, summary.mean,
                summary.q3, summary.max) == (5.0, 5.0, 5.0, 5.0, 5.0, 5.0)

    def test_linear_interpolation_quartiles(self):
        data = Dataset(4, {"x": np.array([1.0, 2.0, 3.0, 4.0])})
        summary = describe(data)["x"]
        assert summary.q1 == pytest.approx(1.75)
        assert summary.median == pytest.approx(2.5)
        assert summary.q3 == pytest.approx(3.25)

    def test_sodium_medians_and_means(self, sodium_data_1m):
        summary = describe(sodium_data_1m)
        assert abs(summary[library.AGE].median - 65.0) < 0.05
        assert abs(summary[library.PROTEINURIA].mean - 277.69) < 0.2


class TestSpearman:
    def test_self_correlation_is_one(self, sodium_data_1k):
        rho = spearman_matrix(sodium_data_1k, [library.SBP, library.SBP])
        assert rho[0, 0] == 1.0 and rho[1, 1] == 1.0
        assert rho[0, 1] == pytest.approx(1.0)

    def test_sbp_proteinuria_strongly_monotone(self, sodium_sem):
        data = generate(sodium_sem, 10_000, 4242)
        rho = spearman_matrix(data, [library.SBP, library.PROTEINURIA])
        assert rho[0, 1] > 0.99

    def test_independent_roots_near_zero(self):
        sem = compile_sem(SemSpec(assignments=(Assignment("U"), Assignment("V"))))
        data = generate(sem, 100_000, 8)
        rho = spearman_matrix(data, ["U", "V"])
        assert abs(rho[0, 1]) < 0.02

    def test_matches_scipy(self, sodium_data_1k):
        names = [library.SODIUM, library.AGE, library.SBP, library.PROTEINURIA]
        mine = spearman_matrix(sodium_data_1k, names)
        ref = stats.spearmanr(
            np.column_stack([sodium_data_1k.column(v) for v in names])
        ).statistic
        assert np.allclose(mine, ref, atol=1e-12)

    def test_ties_use_average_ranks(self):
        x = np.array([1.0, 1.0, 2.0, 3.0, 3.0, 4.0])
        y = np.array([2.0, 1.0, 3.0, 5.0, 4.0, 6.0])
        data = Dataset(6, {"x": x.copy(), "y": y.copy()})
        mine = spearman_matrix(data, ["x", "y"])[0, 1]
        assert mine == pytest.approx(stats.spearmanr(x, y).statistic, abs=1e-12)

    def test_constant_column_rejected(self):
        data = Dataset(3, {"c": np.full(3, 1.0), "x": np.array([1.0, 2.0, 3.0])})
        with pytest.raises(ConstantColumn):
            spearman_matrix(data, ["c", "x"])


def test_digest_distinguishes_coefficients():
    a = library.sodium_pressure_spec().digest()
    b = library.sodium_pressure_spec(beta1=1.06).digest()
    assert a != b
