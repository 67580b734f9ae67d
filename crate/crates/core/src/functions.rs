//! Benchmark objectives: De Jong F1–F5, Goldstein-Price and Easom, plus
//! user expressions. Analytic gradients where the function is smooth and
//! central finite differences otherwise.

use std::f64::consts::PI;
use std::sync::Arc;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::domain::BoxDomain;
use crate::error::{Error, Result};
use crate::expr::Expr;

/// Registry names accepted by [`Objective::by_name`].
pub const OBJECTIVE_NAMES: [&str; 8] = [
    "f1",
    "f2",
    "f3",
    "f4",
    "f4-noiseless",
    "f5",
    "goldstein-price",
    "easom",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
pub enum DomainPolicy {
    #[default]
    Error,
    Clamp,
}

#[derive(Debug, Clone)]
enum Kind {
    Sphere,
    Rosenbrock,
    Step,
    Quartic { noisy: bool },
    Foxholes,
    GoldsteinPrice,
    Easom,
    Expr(Arc<Expr>),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KnownOptimum {
    pub x: Vec<f64>,
    pub f: f64,
}

#[derive(Debug, Clone)]
pub struct Objective {
    name: String,
    domain: BoxDomain,
    kind: Kind,
    known_optimum: Option<KnownOptimum>,
    policy: DomainPolicy,
}

impl Objective {
    fn builtin(name: &str, domain: BoxDomain, kind: Kind, opt: Option<(Vec<f64>, f64)>) -> Self {
        Self {
            name: name.to_string(),
            domain,
            kind,
            known_optimum: opt.map(|(x, f)| KnownOptimum { x, f }),
            policy: DomainPolicy::Error,
        }
    }

    /// F1, sphere on `[-5.12, 5.12]^3`.
    pub fn dejong_f1() -> Self {
        let b = BoxDomain::cube(-5.12, 5.12, 3).unwrap();
        Self::builtin("f1", b, Kind::Sphere, Some((vec![0.0; 3], 0.0)))
    }

    /// F2, Rosenbrock's saddle on `[-2.048, 2.048]^2`.
    pub fn dejong_f2() -> Self {
        let b = BoxDomain::cube(-2.048, 2.048, 2).unwrap();
        Self::builtin("f2", b, Kind::Rosenbrock, Some((vec![1.0, 1.0], 0.0)))
    }

    /// F3, step function on `[-5.12, 5.12]^5`. The optimum is the whole
    /// corner slab `[-5.12, -5)^5`; the lower corner stands in for it.
    pub fn dejong_f3() -> Self {
        let b = BoxDomain::cube(-5.12, 5.12, 5).unwrap();
        Self::builtin("f3", b, Kind::Step, Some((vec![-5.12; 5], 0.0)))
    }

    /// F4, quartic with Gaussian noise on `[-1.28, 1.28]^30`.
    pub fn dejong_f4() -> Self {
        let b = BoxDomain::cube(-1.28, 1.28, 30).unwrap();
        Self::builtin("f4", b, Kind::Quartic { noisy: true }, Some((vec![0.0; 30], 0.0)))
    }

    /// Noise-free companion of F4.
    pub fn dejong_f4_noiseless() -> Self {
        let b = BoxDomain::cube(-1.28, 1.28, 30).unwrap();
        Self::builtin(
            "f4-noiseless",
            b,
            Kind::Quartic { noisy: false },
            Some((vec![0.0; 30], 0.0)),
        )
    }

    /// F5, Shekel's foxholes on `[-65.536, 65.536]^2`.
    pub fn dejong_f5() -> Self {
        let b = BoxDomain::cube(-65.536, 65.536, 2).unwrap();
        let f = dejong_f5(&[-32.0, -32.0]);
        Self::builtin("f5", b, Kind::Foxholes, Some((vec![-32.0, -32.0], f)))
    }

    pub fn goldstein_price() -> Self {
        let b = BoxDomain::cube(-2.0, 2.0, 2).unwrap();
        Self::builtin("goldstein-price", b, Kind::GoldsteinPrice, Some((vec![0.0, -1.0], 3.0)))
    }

    pub fn easom() -> Self {
        let b = BoxDomain::cube(-100.0, 100.0, 2).unwrap();
        Self::builtin("easom", b, Kind::Easom, Some((vec![PI, PI], -1.0)))
    }

    pub fn by_name(name: &str) -> Result<Self> {
        Ok(match name.to_ascii_lowercase().as_str() {
            "f1" => Self::dejong_f1(),
            "f2" => Self::dejong_f2(),
            "f3" => Self::dejong_f3(),
            "f4" => Self::dejong_f4(),
            "f4-noiseless" => Self::dejong_f4_noiseless(),
            "f5" => Self::dejong_f5(),
            "goldstein-price" | "gp" => Self::goldstein_price(),
            "easom" => Self::easom(),
            _ => return Err(Error::UnknownObjective(name.to_string())),
        })
    }

    /// Objective defined by an expression over `x1..xn` on `domain`.
    pub fn from_expr(src: &str, domain: BoxDomain) -> Result<Self> {
        let expr = Expr::parse(src, domain.dim())?;
        Ok(Self {
            name: format!("expr:{src}"),
            domain,
            kind: Kind::Expr(Arc::new(expr)),
            known_optimum: None,
            policy: DomainPolicy::Error,
        })
    }

    pub fn with_policy(mut self, policy: DomainPolicy) -> Self {
        self.policy = policy;
        self
    }

    pub fn with_known_optimum(mut self, x: Vec<f64>, f: f64) -> Self {
        self.known_optimum = Some(KnownOptimum { x, f });
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn dim(&self) -> usize {
        self.domain.dim()
    }

    pub fn domain(&self) -> &BoxDomain {
        &self.domain
    }

    pub fn known_optimum(&self) -> Option<&KnownOptimum> {
        self.known_optimum.as_ref()
    }

    pub fn is_stochastic(&self) -> bool {
        matches!(self.kind, Kind::Quartic { noisy: true })
    }

    pub fn has_analytic_gradient(&self) -> bool {
        matches!(
            self.kind,
            Kind::Sphere | Kind::Rosenbrock | Kind::Foxholes | Kind::GoldsteinPrice | Kind::Easom
        )
    }

    /// The deterministic part of the objective (identical unless noisy).
    pub fn noiseless(&self) -> Self {
        match self.kind {
            Kind::Quartic { noisy: true } => {
                let mut o = Self::dejong_f4_noiseless();
                o.domain = self.domain.clone();
                o.policy = self.policy;
                o
            }
            _ => self.clone(),
        }
    }

    fn admit<'a>(&self, x: &'a [f64], buf: &'a mut Vec<f64>) -> Result<&'a [f64]> {
        if x.len() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                got: x.len(),
            });
        }
        if self.domain.contains(x) {
            return Ok(x);
        }
        match self.policy {
            DomainPolicy::Error => Err(Error::OutOfDomain {
                objective: self.name.clone(),
                point: x.to_vec(),
            }),
            DomainPolicy::Clamp => {
                buf.clear();
                buf.extend_from_slice(x);
                self.domain.clamp(buf);
                Ok(buf)
            }
        }
    }

    /// Evaluate at `x`. `noise_seed` selects the noise realization of a
    /// stochastic objective and is ignored otherwise.
    pub fn eval(&self, x: &[f64], noise_seed: u64) -> Result<f64> {
        let mut buf = Vec::new();
        let x = self.admit(x, &mut buf)?;
        Ok(match &self.kind {
            Kind::Sphere => dejong_f1(x),
            Kind::Rosenbrock => dejong_f2(x),
            Kind::Step => dejong_f3(x),
            Kind::Quartic { noisy: false } => dejong_f4_noiseless(x),
            Kind::Quartic { noisy: true } => {
                let mut rng = ChaCha8Rng::seed_from_u64(noise_seed);
                dejong_f4(x, &mut rng)
            }
            Kind::Foxholes => dejong_f5(x),
            Kind::GoldsteinPrice => goldstein_price(x),
            Kind::Easom => easom(x),
            Kind::Expr(e) => e.eval(x)?,
        })
    }

    /// Analytic gradient where one exists, central differences for
    /// expressions, and `GradientUnavailable` for F3 and F4.
    pub fn gradient(&self, x: &[f64]) -> Result<Vec<f64>> {
        let mut buf = Vec::new();
        let x = self.admit(x, &mut buf)?;
        match &self.kind {
            Kind::Sphere => Ok(x.iter().map(|v| 2.0 * v).collect()),
            Kind::Rosenbrock => Ok(rosenbrock_grad(x)),
            Kind::Foxholes => Ok(foxholes_grad(x)),
            Kind::GoldsteinPrice => Ok(goldstein_price_grad(x)),
            Kind::Easom => Ok(easom_grad(x)),
            Kind::Step | Kind::Quartic { .. } => Err(Error::GradientUnavailable(self.name.clone())),
            Kind::Expr(_) => finite_difference_gradient(self, x),
        }
    }
}

pub fn gradient(obj: &Objective, x: &[f64]) -> Result<Vec<f64>> {
    obj.gradient(x)
}

/// Central differences with `δ_d = ε^(1/3) · max(1, |x_d|)`, the step that
/// balances truncation against cancellation. Probes that would
/// leave the box are shifted to one-sided differences.
pub fn finite_difference_gradient(obj: &Objective, x: &[f64]) -> Result<Vec<f64>> {
    let b = obj.domain();
    let mut g = Vec::with_capacity(x.len());
    let mut probe = x.to_vec();
    for d in 0..x.len() {
        let delta = f64::EPSILON.cbrt() * x[d].abs().max(1.0);
        let hi = (x[d] + delta).min(b.upper()[d]);
        let lo = (x[d] - delta).max(b.lower()[d]);
        probe[d] = hi;
        let fh = obj.eval(&probe, 0)?;
        probe[d] = lo;
        let fl = obj.eval(&probe, 0)?;
        probe[d] = x[d];
        g.push((fh - fl) / (hi - lo));
    }
    Ok(g)
}

pub fn dejong_f1(x: &[f64]) -> f64 {
    x.iter().map(|v| v * v).sum()
}

pub fn dejong_f2(x: &[f64]) -> f64 {
    let a = x[0] * x[0] - x[1];
    100.0 * a * a + (1.0 - x[0]) * (1.0 - x[0])
}

fn rosenbrock_grad(x: &[f64]) -> Vec<f64> {
    let a = x[0] * x[0] - x[1];
    vec![400.0 * x[0] * a - 2.0 * (1.0 - x[0]), -200.0 * a]
}

pub fn dejong_f3(x: &[f64]) -> f64 {
    30.0 + x.iter().map(|v| v.floor()).sum::<f64>()
}

pub fn dejong_f4_noiseless(x: &[f64]) -> f64 {
    x.iter()
        .enumerate()
        .map(|(i, v)| (i + 1) as f64 * v.powi(4))
        .sum()
}

/// One standard-normal draw per term from `rng`.
pub fn dejong_f4<R: rand::Rng + ?Sized>(x: &[f64], rng: &mut R) -> f64 {
    x.iter()
        .enumerate()
        .map(|(i, v)| {
            let z: f64 = StandardNormal.sample(rng);
            (i + 1) as f64 * v.powi(4) + z
        })
        .sum()
}

const FOXHOLE_AXIS: [f64; 5] = [-32.0, -16.0, 0.0, 16.0, 32.0];

fn foxhole(i: usize) -> [f64; 2] {
    [FOXHOLE_AXIS[i % 5], FOXHOLE_AXIS[i / 5]]
}

fn foxhole_denominator(x: &[f64], i: usize) -> f64 {
    let a = foxhole(i);
    (i + 1) as f64 + (x[0] - a[0]).powi(6) + (x[1] - a[1]).powi(6)
}

pub fn dejong_f5(x: &[f64]) -> f64 {
    let s: f64 = (0..25).map(|i| 1.0 / foxhole_denominator(x, i)).sum();
    1.0 / (0.002 + s)
}

fn foxholes_grad(x: &[f64]) -> Vec<f64> {
    let mut s = 0.002;
    let mut ds = [0.0; 2];
    for i in 0..25 {
        let a = foxhole(i);
        let d = foxhole_denominator(x, i);
        s += 1.0 / d;
        for j in 0..2 {
            ds[j] -= 6.0 * (x[j] - a[j]).powi(5) / (d * d);
        }
    }
    ds.iter().map(|v| -v / (s * s)).collect()
}

pub fn goldstein_price(x: &[f64]) -> f64 {
    let (x1, x2) = (x[0], x[1]);
    let s = x1 + x2 + 1.0;
    let p = 19.0 - 14.0 * x1 + 3.0 * x1 * x1 - 14.0 * x2 + 6.0 * x1 * x2 + 3.0 * x2 * x2;
    let t = 2.0 * x1 - 3.0 * x2;
    let q = 18.0 - 32.0 * x1 + 12.0 * x1 * x1 + 48.0 * x2 - 36.0 * x1 * x2 + 27.0 * x2 * x2;
    (1.0 + s * s * p) * (30.0 + t * t * q)
}

fn goldstein_price_grad(x: &[f64]) -> Vec<f64> {
    let (x1, x2) = (x[0], x[1]);
    let s = x1 + x2 + 1.0;
    let p = 19.0 - 14.0 * x1 + 3.0 * x1 * x1 - 14.0 * x2 + 6.0 * x1 * x2 + 3.0 * x2 * x2;
    let t = 2.0 * x1 - 3.0 * x2;
    let q = 18.0 - 32.0 * x1 + 12.0 * x1 * x1 + 48.0 * x2 - 36.0 * x1 * x2 + 27.0 * x2 * x2;
    let a = 1.0 + s * s * p;
    let b = 30.0 + t * t * q;
    let dp = -14.0 + 6.0 * x1 + 6.0 * x2;
    let da = [2.0 * s * p + s * s * dp, 2.0 * s * p + s * s * dp];
    let db = [
        4.0 * t * q + t * t * (-32.0 + 24.0 * x1 - 36.0 * x2),
        -6.0 * t * q + t * t * (48.0 - 36.0 * x1 + 54.0 * x2),
    ];
    vec![da[0] * b + a * db[0], da[1] * b + a * db[1]]
}

pub fn easom(x: &[f64]) -> f64 {
    let (x1, x2) = (x[0], x[1]);
    -x1.cos() * x2.cos() * (-((x1 - PI).powi(2) + (x2 - PI).powi(2))).exp()
}

fn easom_grad(x: &[f64]) -> Vec<f64> {
    let (x1, x2) = (x[0], x[1]);
    let e = (-((x1 - PI).powi(2) + (x2 - PI).powi(2))).exp();
    let (c1, c2) = (x1.cos(), x2.cos());
    vec![
        x1.sin() * c2 * e + 2.0 * (x1 - PI) * c1 * c2 * e,
        c1 * x2.sin() * e + 2.0 * (x2 - PI) * c1 * c2 * e,
    ]
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    // Frozen with an independent mpmath evaluation at 50 digits.
    const GP_AT_MINUS2_MINUS2: f64 = 24_376.0;
    const F5_AT_MINUS32: f64 = 0.998_003_838_818_648_9;
    const F5_AT_32: f64 = 23.809_436_615_621_901;
    const F5_AT_ORIGIN: f64 = 12.670_505_812_885_985;

    #[test]
    fn goldstein_price_values() {
        assert_eq!(goldstein_price(&[0.0, -1.0]), 3.0);
        assert_eq!(goldstein_price(&[0.0, 0.0]), 600.0);
        assert_eq!(goldstein_price(&[-2.0, -2.0]), GP_AT_MINUS2_MINUS2);
    }

    #[test]
    fn easom_values() {
        assert_relative_eq!(easom(&[PI, PI]), -1.0, epsilon = 1e-15);
        assert_relative_eq!(easom(&[0.0, 0.0]), -(-2.0 * PI * PI).exp(), max_relative = 1e-12);
        assert!(easom(&[PI, PI + 10.0]).abs() < 1e-43);
    }

    #[test]
    fn dejong_values() {
        assert_eq!(dejong_f1(&[0.0, 0.0, 0.0]), 0.0);
        assert_eq!(dejong_f1(&[1.0, -2.0, 3.0]), 14.0);
        assert_relative_eq!(dejong_f1(&[5.12; 3]), 78.6432, max_relative = 1e-14);
        assert_eq!(dejong_f2(&[1.0, 1.0]), 0.0);
        assert_eq!(dejong_f2(&[0.0, 0.0]), 1.0);
        let a: f64 = 2.048 * 2.048 - 2.048;
        assert_relative_eq!(dejong_f2(&[-2.048, 2.048]), 100.0 * a * a + 3.048 * 3.048, max_relative = 1e-14);
        assert_eq!(dejong_f3(&[0.0; 5]), 30.0);
        assert_eq!(dejong_f3(&[-5.12; 5]), 0.0);
        assert_eq!(dejong_f3(&[1.9; 5]), 35.0);
        assert_eq!(dejong_f4_noiseless(&[0.0; 30]), 0.0);
        assert_eq!(dejong_f4_noiseless(&[1.0; 30]), 465.0);
    }

    #[test]
    fn foxhole_values() {
        assert_relative_eq!(dejong_f5(&[-32.0, -32.0]), F5_AT_MINUS32, max_relative = 1e-12);
        assert!((dejong_f5(&[-32.0, -32.0]) - 0.998004).abs() < 1e-5);
        assert_relative_eq!(dejong_f5(&[32.0, 32.0]), F5_AT_32, max_relative = 1e-12);
        assert_relative_eq!(dejong_f5(&[0.0, 0.0]), F5_AT_ORIGIN, max_relative = 1e-12);
    }

    #[test]
    fn f4_seeded_noise() {
        let f4 = Objective::dejong_f4();
        let x = vec![0.3; 30];
        assert_eq!(f4.eval(&x, 11).unwrap(), f4.eval(&x, 11).unwrap());
        assert_ne!(f4.eval(&x, 11).unwrap(), f4.eval(&x, 12).unwrap());
        let n = 10_000u64;
        let mean = (0..n).map(|s| f4.eval(&[0.0; 30], s).unwrap()).sum::<f64>() / n as f64;
        assert!(mean.abs() < 0.5, "mean {mean}");
    }

    #[test]
    fn noiseless_is_even() {
        let f = Objective::dejong_f4_noiseless();
        let mut x: Vec<f64> = (0..30).map(|i| (i as f64 * 0.04) - 0.6).collect();
        let a = f.eval(&x, 0).unwrap();
        x[7] = -x[7];
        x[19] = -x[19];
        assert_eq!(a, f.eval(&x, 0).unwrap());
    }

    #[test]
    fn registry_and_known_optima() {
        for name in OBJECTIVE_NAMES {
            let o = Objective::by_name(name).unwrap();
            assert_eq!(o.name(), name);
            if let Some(opt) = o.known_optimum() {
                if !o.is_stochastic() {
                    let tol = if name == "f5" { 1e-5 } else { 1e-9 };
                    assert!((o.eval(&opt.x, 0).unwrap() - opt.f).abs() <= tol, "{name}");
                }
            }
        }
        assert!(matches!(Objective::by_name("f9"), Err(Error::UnknownObjective(_))));
    }

    #[test]
    fn domain_policy() {
        let o = Objective::dejong_f1();
        assert!(matches!(o.eval(&[6.0, 0.0, 0.0], 0), Err(Error::OutOfDomain { .. })));
        let c = o.with_policy(DomainPolicy::Clamp);
        assert_relative_eq!(c.eval(&[6.0, 0.0, 0.0], 0).unwrap(), 5.12 * 5.12);
        assert!(matches!(
            Objective::dejong_f2().eval(&[0.0], 0),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn gradients() {
        assert_eq!(Objective::dejong_f1().gradient(&[1.0, 1.0, 1.0]).unwrap(), vec![2.0; 3]);
        assert_eq!(Objective::dejong_f2().gradient(&[1.0, 1.0]).unwrap(), vec![0.0, 0.0]);
        let g = Objective::easom().gradient(&[PI, PI]).unwrap();
        assert!(g.iter().all(|v| v.abs() < 1e-15));
        let fd = finite_difference_gradient(&Objective::easom(), &[PI, PI]).unwrap();
        assert!(fd.iter().all(|v| v.abs() < 1e-6));
        assert!(matches!(
            Objective::dejong_f3().gradient(&[0.0; 5]),
            Err(Error::GradientUnavailable(_))
        ));
        assert!(Objective::dejong_f4().gradient(&[0.0; 30]).is_err());
    }
}
