//! Randomized checks of the one-dimensional trace and Poincaré-type inequalities used
//! by the stability estimates, with counterexample reporting.

use std::f64::consts::PI;
use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};

/// Highest Fourier mode of a random test function.
pub const MAX_DEGREE: usize = 16;
/// Number of quadrature cells used for every check, whatever is requested.
pub const MIN_LEMMA_NX: usize = 400;
/// Exponents cycled through by the weighted-trace check.
pub const FUZZ_MUS: [f64; 3] = [0.1, 0.5, 1.0];

const GAUSS_NODES: [f64; 5] = [
    -0.906_179_845_938_664,
    -0.538_469_310_105_683,
    0.0,
    0.538_469_310_105_683,
    0.906_179_845_938_664,
];
const GAUSS_WEIGHTS: [f64; 5] = [
    0.236_926_885_056_189_1,
    0.478_628_670_499_366_5,
    0.568_888_888_888_888_9,
    0.478_628_670_499_366_5,
    0.236_926_885_056_189_1,
];

/// Composite five-point Gauss-Legendre rule on `nx` equal cells of `[0, 1]`.
fn integrate(nx: usize, f: impl Fn(f64) -> f64) -> f64 {
    let h = 1.0 / nx as f64;
    (0..nx)
        .map(|i| {
            let mid = (i as f64 + 0.5) * h;
            GAUSS_NODES
                .iter()
                .zip(GAUSS_WEIGHTS)
                .map(|(z, w)| w * f(mid + 0.5 * h * z))
                .sum::<f64>()
        })
        .sum::<f64>()
        * 0.5
        * h
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Constraint {
    None,
    VanishAt0,
}

/// `a0 + Σ_k (sin_k sin(kπx) + cos_k cos(kπx)) + linear · x`.
#[derive(Debug, Clone, PartialEq)]
pub struct TestFunction {
    pub a0: f64,
    pub sin: Vec<f64>,
    pub cos: Vec<f64>,
    pub linear: f64,
    pub constraint: Constraint,
}

impl TestFunction {
    /// `c0 + c1 x`.
    pub fn affine(c0: f64, c1: f64) -> Self {
        Self {
            a0: c0,
            sin: Vec::new(),
            cos: Vec::new(),
            linear: c1,
            constraint: if c0 == 0.0 {
                Constraint::VanishAt0
            } else {
                Constraint::None
            },
        }
    }

    pub fn value(&self, x: f64) -> f64 {
        let mut s = self.a0 + self.linear * x;
        for (k, (a, b)) in self.sin.iter().zip(&self.cos).enumerate() {
            let w = (k + 1) as f64 * PI;
            s += a * (w * x).sin() + b * (w * x).cos();
        }
        s
    }

    pub fn derivative(&self, x: f64) -> f64 {
        let mut s = self.linear;
        for (k, (a, b)) in self.sin.iter().zip(&self.cos).enumerate() {
            let w = (k + 1) as f64 * PI;
            s += w * (a * (w * x).cos() - b * (w * x).sin());
        }
        s
    }

    fn require_vanishing(&self, what: &str) -> Result<()> {
        if self.constraint != Constraint::VanishAt0 || self.value(0.0).abs() > 1e-12 {
            return Err(Error::Precondition(format!("{what} must vanish at x = 0")));
        }
        Ok(())
    }
}

/// Coefficients drawn uniformly from `[-1, 1]`, deterministic in `seed`.
pub fn random_test_function(seed: u64, degree: usize, constraint: Constraint) -> Result<TestFunction> {
    if !(1..=MAX_DEGREE).contains(&degree) {
        return Err(Error::Input(format!(
            "degree must lie in [1, {MAX_DEGREE}], got {degree}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut draw = || rng.gen_range(-1.0..=1.0);
    let a0 = draw();
    let sin: Vec<f64> = (0..degree).map(|_| draw()).collect();
    let cos: Vec<f64> = (0..degree).map(|_| draw()).collect();
    let linear = draw();
    let mut f = TestFunction {
        a0,
        sin,
        cos,
        linear,
        constraint,
    };
    if constraint == Constraint::VanishAt0 {
        f.a0 -= f.value(0.0);
    }
    Ok(f)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum LemmaId {
    /// `|w(1)|² ≤ 2|w(0)|² + 2∫w_x²`
    A1,
    /// `|p(1)|² ≤ ‖p_x‖` as printed, `|p(1)|² ≤ ∫p_x²` asserted, for `p(0) = 0`
    A2,
    /// `-μ∫e^{μx}(u_x + v)² + e^{-μx}(u_x - v)² ≤ -2μe^{-μ}|u(1)|²` for `u(0) = 0`
    A3,
    /// `∫w² ≤ |w(0)|² + (4/π²)∫w_x²` as printed, doubled constants asserted
    A4I0,
    /// same at x = 1
    A4I1,
}

impl LemmaId {
    pub const ALL: [LemmaId; 5] = [LemmaId::A1, LemmaId::A2, LemmaId::A3, LemmaId::A4I0, LemmaId::A4I1];
}

impl fmt::Display for LemmaId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            LemmaId::A1 => "A1",
            LemmaId::A2 => "A2",
            LemmaId::A3 => "A3",
            LemmaId::A4I0 => "A4_i0",
            LemmaId::A4I1 => "A4_i1",
        })
    }
}

/// One side-by-side evaluation `lhs ≤ rhs`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Comparison {
    pub lhs: f64,
    pub rhs: f64,
    pub satisfied: bool,
}

impl Comparison {
    fn new(lhs: f64, rhs: f64) -> Self {
        Self {
            lhs,
            rhs,
            satisfied: lhs <= rhs,
        }
    }

    pub fn margin(&self) -> f64 {
        self.rhs - self.lhs
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LemmaCheck {
    pub lemma: LemmaId,
    /// The inequality in its stated form.
    pub printed: Comparison,
    /// The form that is asserted: squared for A2, doubled constants for A4, else as printed.
    pub asserted: Comparison,
}

/// Evaluates one inequality by quadrature on `max(nx, 400)` cells.
///
/// `v` is the velocity of the A3 pair and `mu` its exponent; both are ignored otherwise.
pub fn check_lemma(
    lemma: LemmaId,
    f: &TestFunction,
    v: Option<&TestFunction>,
    nx: usize,
    mu: Option<f64>,
) -> Result<LemmaCheck> {
    let nx = nx.max(MIN_LEMMA_NX);
    let dx2 = || integrate(nx, |x| f.derivative(x).powi(2));
    let (printed, asserted) = match lemma {
        LemmaId::A1 => {
            let c = Comparison::new(f.value(1.0).powi(2), 2.0 * f.value(0.0).powi(2) + 2.0 * dx2());
            (c, c)
        }
        LemmaId::A2 => {
            f.require_vanishing("p")?;
            let lhs = f.value(1.0).powi(2);
            let d = dx2();
            (Comparison::new(lhs, d.sqrt()), Comparison::new(lhs, d))
        }
        LemmaId::A3 => {
            f.require_vanishing("u")?;
            let v = v.ok_or_else(|| Error::Precondition("A3 needs a velocity function".into()))?;
            let mu = mu.ok_or_else(|| Error::Precondition("A3 needs mu".into()))?;
            if !(mu > 0.0) {
                return Err(Error::Precondition(format!("A3 needs mu > 0, got {mu}")));
            }
            let lhs = -mu
                * integrate(nx, |x| {
                    let (ux, vx) = (f.derivative(x), v.value(x));
                    (mu * x).exp() * (ux + vx).powi(2) + (-mu * x).exp() * (ux - vx).powi(2)
                });
            let c = Comparison::new(lhs, -2.0 * mu * (-mu).exp() * f.value(1.0).powi(2));
            (c, c)
        }
        LemmaId::A4I0 | LemmaId::A4I1 => {
            let at = if lemma == LemmaId::A4I0 { 0.0 } else { 1.0 };
            let lhs = integrate(nx, |x| f.value(x).powi(2));
            let (trace, d) = (f.value(at).powi(2), dx2());
            let k = 4.0 / (PI * PI);
            (
                Comparison::new(lhs, trace + k * d),
                Comparison::new(lhs, 2.0 * trace + 2.0 * k * d),
            )
        }
    };
    Ok(LemmaCheck {
        lemma,
        printed,
        asserted,
    })
}

/// A failing or extremal instance, with everything needed to reproduce it.
#[derive(Debug, Clone, PartialEq)]
pub struct Witness {
    pub trial: usize,
    pub functions: Vec<TestFunction>,
    pub mu: Option<f64>,
    pub comparison: Comparison,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LemmaSummary {
    pub lemma: LemmaId,
    pub trials: usize,
    /// Trials satisfying the asserted form.
    pub passes: usize,
    /// Trials satisfying the printed form.
    pub printed_passes: usize,
    /// Smallest `rhs - lhs` of the asserted form.
    pub min_margin: Option<Witness>,
    /// Failures of the asserted form.
    pub counterexamples: Vec<Witness>,
    /// Failures of the printed form.
    pub printed_counterexamples: Vec<Witness>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FuzzSummary {
    pub seed: u64,
    pub lemmas: Vec<LemmaSummary>,
}

impl FuzzSummary {
    pub fn lemma(&self, id: LemmaId) -> Option<&LemmaSummary> {
        self.lemmas.iter().find(|l| l.lemma == id)
    }
}

/// Per-trial seed, mixed so neighbouring trials and lemmas draw unrelated streams.
fn trial_seed(seed: u64, lemma: usize, trial: usize) -> u64 {
    let mut z = seed
        .wrapping_add((lemma as u64) << 40)
        .wrapping_add(trial as u64)
        .wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

fn trial_inputs(lemma: LemmaId, li: usize, seed: u64, trial: usize) -> Result<(Vec<TestFunction>, Option<f64>)> {
    // The first trial of each A4 variant is the affine witness rising away from the trace point.
    match (lemma, trial) {
        (LemmaId::A4I0, 0) => return Ok((vec![TestFunction::affine(1.0, 1.0)], None)),
        (LemmaId::A4I1, 0) => return Ok((vec![TestFunction::affine(2.0, -1.0)], None)),
        _ => {}
    }
    let mut rng = ChaCha8Rng::seed_from_u64(trial_seed(seed, li, trial));
    let mut next = |constraint| {
        let degree = rng.gen_range(1..=MAX_DEGREE);
        random_test_function(rng.gen(), degree, constraint)
    };
    Ok(match lemma {
        LemmaId::A1 | LemmaId::A4I0 | LemmaId::A4I1 => (vec![next(Constraint::None)?], None),
        LemmaId::A2 => (vec![next(Constraint::VanishAt0)?], None),
        LemmaId::A3 => (
            vec![next(Constraint::VanishAt0)?, next(Constraint::None)?],
            Some(FUZZ_MUS[trial % FUZZ_MUS.len()]),
        ),
    })
}

/// Runs every inequality on `trials` random functions each. Deterministic in `seed`.
pub fn fuzz_lemmas(trials: usize, seed: u64) -> Result<FuzzSummary> {
    if trials == 0 {
        return Err(Error::Input("trials must be at least 1".into()));
    }
    let mut lemmas = Vec::with_capacity(LemmaId::ALL.len());
    for (li, &lemma) in LemmaId::ALL.iter().enumerate() {
        let results = (0..trials)
            .into_par_iter()
            .map(|trial| {
                let (fs, mu) = trial_inputs(lemma, li, seed, trial)?;
                let check = check_lemma(lemma, &fs[0], fs.get(1), MIN_LEMMA_NX, mu)?;
                Ok((trial, fs, mu, check))
            })
            .collect::<Result<Vec<_>>>()?;
        let mut summary = LemmaSummary {
            lemma,
            trials,
            passes: 0,
            printed_passes: 0,
            min_margin: None,
            counterexamples: Vec::new(),
            printed_counterexamples: Vec::new(),
        };
        for (trial, functions, mu, check) in results {
            let witness = |comparison| Witness {
                trial,
                functions: functions.clone(),
                mu,
                comparison,
            };
            if check.asserted.satisfied {
                summary.passes += 1;
            } else {
                summary.counterexamples.push(witness(check.asserted));
            }
            if check.printed.satisfied {
                summary.printed_passes += 1;
            } else {
                summary.printed_counterexamples.push(witness(check.printed));
            }
            let better = summary
                .min_margin
                .as_ref()
                .is_none_or(|w| check.asserted.margin() < w.comparison.margin());
            if better {
                summary.min_margin = Some(witness(check.asserted));
            }
        }
        lemmas.push(summary);
    }
    Ok(FuzzSummary { seed, lemmas })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn quadrature_is_exact_on_polynomials() {
        assert!((integrate(400, |x| x.powi(9)) - 0.1).abs() < 1e-15);
        assert!((integrate(400, |x| (3.0 * PI * x).sin().powi(2)) - 0.5).abs() < 1e-14);
    }

    #[test]
    fn constant_function_a1() {
        let c = check_lemma(LemmaId::A1, &TestFunction::affine(1.0, 0.0), None, 400, None).unwrap();
        assert!((c.asserted.lhs - 1.0).abs() < 1e-15);
        assert!((c.asserted.rhs - 2.0).abs() < 1e-15);
        assert!(c.asserted.satisfied);
    }

    #[test]
    fn linear_pair_a3() {
        let c = check_lemma(
            LemmaId::A3,
            &TestFunction::affine(0.0, 1.0),
            Some(&TestFunction::affine(0.0, 0.0)),
            400,
            Some(1.0),
        )
        .unwrap();
        let e = 1f64.exp();
        assert!((c.printed.lhs + (e - 1.0) + (1.0 - 1.0 / e)).abs() < 1e-12);
        assert!((c.printed.lhs + 2.3504).abs() < 1e-4);
        assert!((c.printed.rhs + 2.0 / e).abs() < 1e-15);
        assert!(c.printed.satisfied);
    }

    #[test]
    fn affine_witness_breaks_printed_a4() {
        let c = check_lemma(LemmaId::A4I0, &TestFunction::affine(1.0, 1.0), None, 400, None).unwrap();
        assert!((c.printed.lhs - 7.0 / 3.0).abs() < 1e-12);
        assert!((c.printed.rhs - (1.0 + 4.0 / (PI * PI))).abs() < 1e-12);
        assert!(!c.printed.satisfied);
        assert!(c.asserted.satisfied);
        let m = check_lemma(LemmaId::A4I1, &TestFunction::affine(2.0, -1.0), None, 400, None).unwrap();
        assert!(!m.printed.satisfied);
    }

    #[test]
    fn constraints_are_checked() {
        let f = TestFunction::affine(1.0, 1.0);
        assert!(matches!(
            check_lemma(LemmaId::A2, &f, None, 400, None),
            Err(Error::Precondition(_))
        ));
        let u = TestFunction::affine(0.0, 1.0);
        assert!(check_lemma(LemmaId::A3, &u, None, 400, Some(1.0)).is_err());
        assert!(check_lemma(LemmaId::A3, &u, Some(&u), 400, Some(0.0)).is_err());
    }

    #[test]
    fn random_functions() {
        let a = random_test_function(7, 5, Constraint::None).unwrap();
        assert_eq!(a, random_test_function(7, 5, Constraint::None).unwrap());
        assert_ne!(a, random_test_function(8, 5, Constraint::None).unwrap());
        assert_eq!(a.sin.len(), 5);
        let z = random_test_function(7, 5, Constraint::VanishAt0).unwrap();
        assert!(z.value(0.0).abs() < 1e-14);
        assert!(random_test_function(1, 0, Constraint::None).is_err());
        assert!(random_test_function(1, 17, Constraint::None).is_err());
    }

    #[test]
    fn fuzz_small() {
        assert!(fuzz_lemmas(0, 1).is_err());
        let s = fuzz_lemmas(60, 3).unwrap();
        for id in LemmaId::ALL {
            let l = s.lemma(id).unwrap();
            assert_eq!(l.passes, 60, "{id}");
            assert!(l.counterexamples.is_empty());
        }
        let a4 = s.lemma(LemmaId::A4I0).unwrap();
        assert_eq!(a4.printed_counterexamples[0].trial, 0);
        assert_eq!(s, fuzz_lemmas(60, 3).unwrap());
    }

    proptest! {
        #[test]
        fn refinement_changes_little(seed in any::<u64>(), degree in 1usize..=16) {
            let u = random_test_function(seed, degree, Constraint::VanishAt0).unwrap();
            let v = random_test_function(seed ^ 1, degree, Constraint::None).unwrap();
            for lemma in LemmaId::ALL {
                let a = check_lemma(lemma, &u, Some(&v), 400, Some(0.5)).unwrap();
                let b = check_lemma(lemma, &u, Some(&v), 800, Some(0.5)).unwrap();
                for (x, y) in [(a.printed.lhs, b.printed.lhs), (a.printed.rhs, b.printed.rhs),
                               (a.asserted.lhs, b.asserted.lhs), (a.asserted.rhs, b.asserted.rhs)] {
                    prop_assert!((x - y).abs() <= 1e-6 * y.abs().max(1e-300));
                }
            }
        }

        #[test]
        fn squared_trace_and_weighted_trace_hold(seed in any::<u64>(), degree in 1usize..=16, mi in 0usize..3) {
            let u = random_test_function(seed, degree, Constraint::VanishAt0).unwrap();
            let v = random_test_function(seed.wrapping_add(1), degree, Constraint::None).unwrap();
            prop_assert!(check_lemma(LemmaId::A2, &u, None, 400, None).unwrap().asserted.satisfied);
            prop_assert!(check_lemma(LemmaId::A3, &u, Some(&v), 400, Some(FUZZ_MUS[mi])).unwrap().asserted.satisfied);
        }
    }
}
