//! Statistical and structural checks against independent oracles.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use statrs::distribution::{ChiSquared, ContinuousCDF};

use tailcovar::covar::coes_extrap_iii;
use tailcovar::io::{rolling_estimates, RollingConfig};
use tailcovar::simulation::truth::{mc_conditional_mean, mc_joint_exceedance};
use tailcovar::simulation::{
    grid_search, run_msre, sample_model, true_coes, true_covar, true_var_y, ModelSpec,
};
use tailcovar::{
    compute_ranks, covar_extrap_i, covar_extrap_ii, empirical_var, estimate_all, intermediate_covar,
    xi_hat, BivariateSample, ExtrapolationInputs, TailConfig,
};

fn models() -> [ModelSpec; 3] {
    [ModelSpec::model1(), ModelSpec::model2(), ModelSpec::model3()]
}

#[test]
fn ranks_of_iid_draws_are_uniform() {
    let n = 6;
    let reps = 60_000;
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut counts = vec![0u64; n];
    for _ in 0..reps {
        let x: Vec<f64> = (0..n).map(|_| rng.random()).collect();
        let s = BivariateSample::new(x.clone(), x).unwrap();
        counts[compute_ranks(&s).rx[0] - 1] += 1;
    }
    let expected = reps as f64 / n as f64;
    let stat: f64 = counts
        .iter()
        .map(|&c| (c as f64 - expected).powi(2) / expected)
        .sum();
    let critical = ChiSquared::new((n - 1) as f64).unwrap().inverse_cdf(0.999);
    assert!(stat < critical, "chi-square {stat} >= {critical}");
}

#[test]
fn comonotone_covar_is_mth_largest_of_top_block() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for _ in 0..50 {
        let n = rng.random_range(10..300);
        let k = rng.random_range(1..n);
        let x: Vec<f64> = (0..n).map(|_| rng.random::<f64>() * 100.0).collect();
        let s = BivariateSample::new(x.clone(), x.clone()).unwrap();
        let mut sorted = x;
        sorted.sort_by(f64::total_cmp);
        let block = &sorted[n - k - 1..];
        let m = (k * k).div_ceil(n);
        let want = if m <= block.len() {
            Some(block[block.len() - m])
        } else {
            None
        };
        assert_eq!(intermediate_covar(&s, k).ok(), want, "n={n} k={k}");
    }
}

#[test]
fn empirical_var_on_pareto() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let x: Vec<f64> = (0..100_000)
        .map(|_| (1.0 - rng.random::<f64>()).powf(-1.0 / 3.0))
        .collect();
    let v = empirical_var(&x, 1000).unwrap();
    let truth = 0.01f64.powf(-1.0 / 3.0);
    assert!((v / truth - 1.0).abs() < 0.05, "{v} vs {truth}");
}

#[test]
fn xi_hat_on_model1() {
    let n = 100_000;
    let k = 3000;
    let s = sample_model(&ModelSpec::model1(), n, 4).unwrap();
    let xi = xi_hat(&s, k, 0.75).unwrap();
    let target = (k as f64 / n as f64).powf(2.0 / 3.0);
    assert!((xi / target - 1.0).abs() < 0.3, "{xi} vs {target}");
}

#[test]
fn marginals_pass_ks() {
    let n = 100_000;
    let critical = 1.628 / (n as f64).sqrt();
    for (i, m) in models().iter().enumerate() {
        let s = sample_model(m, n, 10 + i as u64).unwrap();
        for sorted in [s.sorted_x(), s.sorted_y()] {
            let d = sorted
                .iter()
                .enumerate()
                .map(|(j, &v)| {
                    let cdf = 1.0 - m.marginal_survival(v);
                    let hi = (j + 1) as f64 / n as f64 - cdf;
                    let lo = cdf - j as f64 / n as f64;
                    hi.max(lo)
                })
                .fold(0.0, f64::max);
            assert!(d < critical, "{} KS {d} >= {critical}", m.label());
        }
    }
}

/// Marshall-Olkin joint tails are exactly homogeneous past a small threshold,
/// so the scaled MC tail is compared with the limit C(x, y). The mixture
/// margin carries an `x^{-4}` term that decays only like `t^{-1/3}`; there the
/// MC tail is compared with the exact pre-limit value, which must approach C.
#[test]
fn joint_tail_matches_tail_copula() {
    let draws = 4_000_000;
    for (i, m) in models().iter().enumerate() {
        let inv_eta = 1.0 / m.eta();
        let exact_limit = matches!(m, ModelSpec::MarshallOlkinPareto { .. });
        for (x, y) in [(1.0, 1.0), (0.5, 1.0), (1.0, 0.5)] {
            let limit = m.tail_copula(x, y);
            let mut last_gap = f64::INFINITY;
            for t in [100.0, 200.0, 1e4] {
                let cx = true_var_y(m, 1.0 - x / t).unwrap();
                let cy = true_var_y(m, 1.0 - y / t).unwrap();
                let scale = t.powf(inv_eta);
                let pre_limit = scale * m.joint_survival(cx, cy);
                let gap = (pre_limit - limit).abs();
                assert!(exact_limit || gap < last_gap, "{} ({x},{y}) t={t}", m.label());
                last_gap = gap;
                if t > 200.0 {
                    continue;
                }
                let target = if exact_limit {
                    assert!(gap < 1e-9 * limit, "{} ({x},{y}) t={t}", m.label());
                    limit
                } else {
                    pre_limit
                };
                let p = mc_joint_exceedance(m, cx, cy, draws, 20 + i as u64).unwrap();
                let z = (scale * p.value - target) / (scale * p.std_error);
                assert!(
                    z.abs() < 4.0,
                    "{} t={t} ({x},{y}): {} vs {target} (z={z:.2})",
                    m.label(),
                    scale * p.value
                );
            }
        }
    }
}

#[test]
fn quadrature_matches_mc_conditional_mean() {
    for (i, m) in models().iter().enumerate() {
        let tau = 0.99;
        let covar = true_covar(m, tau).unwrap();
        let q = true_var_y(m, tau).unwrap();
        let joint = mc_joint_exceedance(m, covar, q, 10_000_000, 30 + i as u64).unwrap();
        assert!(joint.z_score(1e-4).abs() < 3.0, "{} joint", m.label());
        let mean = mc_conditional_mean(m, covar, q, 10_000_000, 40 + i as u64).unwrap();
        let coes = true_coes(m, tau).unwrap();
        assert!(
            mean.z_score(coes).abs() < 3.0,
            "{}: MC {} ± {} vs {coes}",
            m.label(),
            mean.value,
            mean.std_error
        );
    }
}

fn all_outputs(s: &BivariateSample, tail: &TailConfig) -> Vec<f64> {
    let e = estimate_all(s, tail).unwrap();
    let mut v = vec![
        *e.intermediate.covar_int.as_ref().unwrap(),
        *e.intermediate.coes_int.as_ref().unwrap(),
    ];
    v.extend(e.extrapolations.results().map(|r| *r.as_ref().unwrap()));
    v
}

#[test]
fn scale_equivariance() {
    let tail = TailConfig::new(137, 143, 143, 0.99);
    for seed in 0..20 {
        let s = sample_model(&ModelSpec::model1(), 500, 50 + seed).unwrap();
        let base = all_outputs(&s, &tail);
        for (c, tol) in [(0.25, 0.0), (8.0, 0.0), (3.7, 1e-12), (0.013, 1e-12)] {
            let scaled = BivariateSample::new(s.x().iter().map(|v| v * c).collect(), s.y().to_vec()).unwrap();
            for (a, b) in base.iter().zip(all_outputs(&scaled, &tail)) {
                assert!((b / (a * c) - 1.0).abs() <= tol, "c={c}: {b} vs {}", a * c);
            }
        }
    }
}

#[test]
fn extrapolations_grow_with_tau_prime() {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    for _ in 0..200 {
        let n = rng.random_range(100..5000);
        let k = rng.random_range(1..n);
        let mut inputs = ExtrapolationInputs {
            gamma1_hat: rng.random_range(0.0..0.9),
            eta_hat: rng.random_range(0.34..1.5),
            xi_hat: Some(rng.random_range(0.01..1.0)),
            var_x_int: rng.random_range(0.5..10.0),
            covar_int: Some(rng.random_range(0.5..10.0)),
            coes_int: Some(rng.random_range(0.5..20.0)),
            k,
            n,
            tau_prime: 0.0,
        };
        let mut taus: Vec<f64> = (0..8).map(|_| rng.random_range(0.5..0.99999)).collect();
        taus.shuffle(&mut rng);
        taus.sort_by(f64::total_cmp);
        let mut last = [0.0; 3];
        for tau in taus {
            inputs.tau_prime = tau;
            let now = [
                covar_extrap_i(&inputs).unwrap(),
                covar_extrap_ii(&inputs).unwrap(),
                coes_extrap_iii(&inputs).unwrap(),
            ];
            if inputs.exponent() > 0.0 {
                for (a, b) in last.iter().zip(&now) {
                    assert!(b >= a, "{inputs:?}");
                }
            }
            last = now;
        }
    }
}

#[test]
fn rolling_paths_move_together() {
    let s = sample_model(&ModelSpec::model1(), 1500 + 150 * 21, 7).unwrap();
    let rc = RollingConfig {
        window: 1500,
        step: 21,
        tail: TailConfig::new(300, 330, 330, 0.99),
    };
    let rows = rolling_estimates(s.x(), s.y(), &rc).unwrap();
    let pairs: Vec<(f64, f64)> = rows
        .iter()
        .map(|r| {
            let e = r.estimates.as_ref().unwrap();
            (
                *e.extrapolations.covar_i.as_ref().unwrap(),
                *e.extrapolations.covar_ii.as_ref().unwrap(),
            )
        })
        .collect();
    let n = pairs.len() as f64;
    let (ma, mb) = pairs.iter().fold((0.0, 0.0), |acc, p| (acc.0 + p.0 / n, acc.1 + p.1 / n));
    let (mut sab, mut saa, mut sbb) = (0.0, 0.0, 0.0);
    for (a, b) in &pairs {
        sab += (a - ma) * (b - mb);
        saa += (a - ma).powi(2);
        sbb += (b - mb).powi(2);
    }
    let corr = sab / (saa * sbb).sqrt();
    assert!(corr > 0.9, "correlation {corr}");
}

#[test]
fn iqr_shrinks_for_models_2_and_3() {
    let cases = [
        (
            ModelSpec::model2(),
            [(500, 84, 150), (2000, 274, 384), (5000, 697, 697)],
        ),
        (
            ModelSpec::model3(),
            [(500, 71, 137), (2000, 274, 384), (5000, 382, 724)],
        ),
    ];
    for (m, configs) in cases {
        let iqrs: Vec<Vec<f64>> = configs
            .iter()
            .map(|&(n, k, k1)| {
                run_msre(&m, n, &TailConfig::new(k, k1, k1, 0.99), 200, 8)
                    .unwrap()
                    .iter()
                    .map(|r| r.interquartile_range().unwrap())
                    .collect()
            })
            .collect();
        for e in 0..5 {
            assert!(
                iqrs[0][e] > iqrs[1][e] && iqrs[1][e] > iqrs[2][e],
                "{} estimator {e}: {:?}",
                m.label(),
                iqrs.iter().map(|v| v[e]).collect::<Vec<_>>()
            );
        }
    }
}

#[test]
fn table_pair_is_near_the_grid_minimum() {
    let m = ModelSpec::model1();
    let (n, reps, seed) = (500, 200, 9);
    let grid = grid_search(&m, n, 0.99, &[100, 137, 180], &[110, 143, 190], reps, seed).unwrap();
    let best = grid.best.unwrap().msre.unwrap();
    let reports = run_msre(&m, n, &TailConfig::new(137, 143, 143, 0.99), reps, seed).unwrap();
    let sq: Vec<f64> = reports[0].ratios.iter().map(|r| (r - 1.0).powi(2)).collect();
    let mean = sq.iter().sum::<f64>() / sq.len() as f64;
    let sd = (sq.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (sq.len() - 1) as f64).sqrt();
    let se = sd / (sq.len() as f64).sqrt();
    let cell = grid
        .surface
        .iter()
        .find(|c| (c.k, c.k1) == (137, 143))
        .unwrap();
    assert_eq!(cell.msre, reports[0].msre);
    assert!(mean - best <= 3.0 * se, "{mean} vs min {best} (se {se})");
}
