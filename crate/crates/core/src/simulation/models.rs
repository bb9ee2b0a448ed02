//! The three bivariate benchmark models and their samplers.
//!
//! `MarshallOlkinPareto` has Pareto(a) margins joined by the Marshall-Olkin
//! survival copula `C̄(u, v) = uv·min(u^{-a1}, v^{-a2})`. It is sampled with
//! three exponential shocks `E1 ~ Exp(1/a1 − 1)`, `E2 ~ Exp(1/a2 − 1)`,
//! `E12 ~ Exp(1)`: with `T1 = min(E1, E12)`, `T2 = min(E2, E12)` and
//! `U = exp(−T1/a1)`, `V = exp(−T2/a2)`,
//!
//! ```text
//! P(U < u, V < v) = P(E1 > s, E2 > t, E12 > max(s, t))      s = −a1 ln u, t = −a2 ln v
//!                 = exp(−s/a1 − t/a2 + min(s, t))
//!                 = uv·min(u^{-a1}, v^{-a2})
//! ```
//!
//! and `(X, Y) = (U^{-1/a}, V^{-1/a})`.
//!
//! `ParetoMixture` is `(X, Y) = B(Z1, Z3) + (1 − B)(Z2, Z2)` with
//! `B ~ Bernoulli(1/2)`, `Z1, Z3 ~ Pareto(a)`, `Z2 ~ Pareto(b)`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Exp, Pareto};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::sample::BivariateSample;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "model", rename_all = "snake_case")]
pub enum ModelSpec {
    MarshallOlkinPareto { a: f64, a1: f64, a2: f64 },
    ParetoMixture { a: f64, b: f64 },
}

impl ModelSpec {
    /// a = 3, a1 = 5/6, a2 = 2/3: γ₁ = 1/3, η = 3/4.
    pub fn model1() -> Self {
        ModelSpec::MarshallOlkinPareto {
            a: 3.0,
            a1: 5.0 / 6.0,
            a2: 2.0 / 3.0,
        }
    }

    /// a = 3, a1 = a2 = 7/10: γ₁ = 1/3, η = 10/13.
    pub fn model2() -> Self {
        ModelSpec::MarshallOlkinPareto {
            a: 3.0,
            a1: 0.7,
            a2: 0.7,
        }
    }

    /// a = 3, b = 4: γ₁ = 1/3, η = 3/4.
    pub fn model3() -> Self {
        ModelSpec::ParetoMixture { a: 3.0, b: 4.0 }
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            ModelSpec::MarshallOlkinPareto { a, a1, a2 } => {
                if !(a > 0.0 && a.is_finite()) {
                    return Err(Error::InvalidModel(format!("a = {a} must be positive")));
                }
                for (name, v) in [("a1", a1), ("a2", a2)] {
                    if !(v > 0.0 && v < 1.0) {
                        return Err(Error::InvalidModel(format!("{name} = {v} must lie in (0, 1)")));
                    }
                }
            }
            ModelSpec::ParetoMixture { a, b } => {
                if !(a > 0.0 && b > a && b.is_finite()) {
                    return Err(Error::InvalidModel(format!("need b > a > 0, got a = {a}, b = {b}")));
                }
            }
        }
        Ok(())
    }

    pub fn label(&self) -> String {
        match *self {
            ModelSpec::MarshallOlkinPareto { a, a1, a2 } => format!("mo(a={a},a1={a1},a2={a2})"),
            ModelSpec::ParetoMixture { a, b } => format!("mix(a={a},b={b})"),
        }
    }

    /// Extreme value index of X.
    pub fn gamma1(&self) -> f64 {
        match *self {
            ModelSpec::MarshallOlkinPareto { a, .. } | ModelSpec::ParetoMixture { a, .. } => 1.0 / a,
        }
    }

    /// Coefficient of tail dependence.
    pub fn eta(&self) -> f64 {
        match *self {
            ModelSpec::MarshallOlkinPareto { a1, a2, .. } => 1.0 / (2.0 - a1.min(a2)),
            ModelSpec::ParetoMixture { a, b } => a / b,
        }
    }

    /// Limit `C(x, y)` of `t^{1/η} P(F̄_X(X) < x/t, F̄_Y(Y) < y/t)`.
    pub fn tail_copula(&self, x: f64, y: f64) -> f64 {
        if x <= 0.0 || y <= 0.0 {
            return 0.0;
        }
        match *self {
            ModelSpec::MarshallOlkinPareto { a1, a2, .. } => {
                if a1 < a2 {
                    x.powf(1.0 - a1) * y
                } else if a1 > a2 {
                    x * y.powf(1.0 - a2)
                } else {
                    x * y * x.max(y).powf(-a1)
                }
            }
            ModelSpec::ParetoMixture { a, b } => 2f64.powf(b / a - 1.0) * x.min(y).powf(b / a),
        }
    }

    /// `P(X ≥ x)`; both margins share this law.
    pub fn marginal_survival(&self, x: f64) -> f64 {
        let x = x.max(1.0);
        match *self {
            ModelSpec::MarshallOlkinPareto { a, .. } => x.powf(-a),
            ModelSpec::ParetoMixture { a, b } => 0.5 * x.powf(-a) + 0.5 * x.powf(-b),
        }
    }

    /// `P(X ≥ x, Y ≥ y)`.
    pub fn joint_survival(&self, x: f64, y: f64) -> f64 {
        let (x, y) = (x.max(1.0), y.max(1.0));
        match *self {
            ModelSpec::MarshallOlkinPareto { a, a1, a2 } => {
                survival_copula_mo(x.powf(-a), y.powf(-a), a1, a2)
            }
            ModelSpec::ParetoMixture { a, b } => {
                0.5 * (x * y).powf(-a) + 0.5 * x.max(y).powf(-b)
            }
        }
    }

    /// Points where `x ↦ P(X ≥ x, Y ≥ y)` has a kink.
    pub fn joint_survival_kinks(&self, y: f64) -> Vec<f64> {
        match *self {
            // u^{-a1} = v^{-a2} with u = x^{-a}, v = y^{-a}
            ModelSpec::MarshallOlkinPareto { a1, a2, .. } => vec![1.0, y.max(1.0).powf(a2 / a1)],
            ModelSpec::ParetoMixture { .. } => vec![1.0, y.max(1.0)],
        }
    }

    /// Draws one pair.
    pub fn draw<R: Rng + ?Sized>(&self, rng: &mut R) -> (f64, f64) {
        match *self {
            ModelSpec::MarshallOlkinPareto { a, a1, a2 } => {
                let e1 = Exp::new(1.0 / a1 - 1.0).expect("validated rate").sample(rng);
                let e2 = Exp::new(1.0 / a2 - 1.0).expect("validated rate").sample(rng);
                let e12: f64 = rng.sample(rand_distr::Exp1);
                let t1 = e1.min(e12);
                let t2 = e2.min(e12);
                // U^{-1/a} with U = exp(-T/a_i)
                ((t1 / (a * a1)).exp(), (t2 / (a * a2)).exp())
            }
            ModelSpec::ParetoMixture { a, b } => {
                if rng.random_bool(0.5) {
                    let z = Pareto::new(1.0, a).expect("validated shape");
                    (z.sample(rng), z.sample(rng))
                } else {
                    let z2 = Pareto::new(1.0, b).expect("validated shape").sample(rng);
                    (z2, z2)
                }
            }
        }
    }
}

/// `C̄_MO(u, v) = uv·min(u^{-a1}, v^{-a2})`
pub fn survival_copula_mo(u: f64, v: f64, a1: f64, a2: f64) -> f64 {
    u * v * u.powf(-a1).min(v.powf(-a2))
}

/// Generator for stream `stream` of base seed `seed` (ChaCha8).
///
/// Stream `r` is replication `r` of a Monte Carlo run; stream 0 is what
/// [`sample_model`] uses.
pub fn stream_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// `n` pairs drawn from `spec` using `rng`.
pub fn draw_pairs<R: Rng + ?Sized>(spec: &ModelSpec, n: usize, rng: &mut R) -> Result<(Vec<f64>, Vec<f64>)> {
    spec.validate()?;
    if n == 0 {
        return Err(Error::InvalidParameter("n must be at least 1".into()));
    }
    let mut x = Vec::with_capacity(n);
    let mut y = Vec::with_capacity(n);
    for _ in 0..n {
        let (a, b) = spec.draw(rng);
        x.push(a);
        y.push(b);
    }
    Ok((x, y))
}

pub fn sample_model(spec: &ModelSpec, n: usize, seed: u64) -> Result<BivariateSample> {
    sample_model_stream(spec, n, seed, 0)
}

pub fn sample_model_stream(spec: &ModelSpec, n: usize, seed: u64, stream: u64) -> Result<BivariateSample> {
    let (x, y) = draw_pairs(spec, n, &mut stream_rng(seed, stream))?;
    BivariateSample::new(x, y)
}
