//! Closed-form admissibility quantities and the hypothesis checks for the
//! stability, decay and approximation results.
//!
//! All comparisons are exact floating-point comparisons; equality on an
//! inequality condition counts as satisfied.

use std::f64::consts::PI;
use std::fmt;

use crate::error::{Error, Result};
use crate::state::Parameters;

/// Which hypothesis set a report refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TheoremId {
    /// Well-posedness and exponential stability for every ε.
    T1_1,
    /// Small-ε decay in `H¹ × L² × L²`.
    T1_3i,
    /// Small-ε decay in `H¹ × L² × H¹`.
    T1_3ii,
    /// Approximation by the reduced and boundary-layer systems.
    T1_4,
}

impl fmt::Display for TheoremId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            TheoremId::T1_1 => "T1_1",
            TheoremId::T1_3i => "T1_3_i",
            TheoremId::T1_3ii => "T1_3_ii",
            TheoremId::T1_4 => "T1_4",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relation {
    Le,
    Ge,
    Ne,
}

impl Relation {
    fn holds(self, lhs: f64, rhs: f64) -> bool {
        match self {
            Relation::Le => lhs <= rhs,
            Relation::Ge => lhs >= rhs,
            Relation::Ne => lhs != rhs,
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            Relation::Le => "<=",
            Relation::Ge => ">=",
            Relation::Ne => "!=",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Condition {
    pub label: String,
    pub lhs: f64,
    pub rhs: f64,
    pub relation: Relation,
    pub satisfied: bool,
}

impl Condition {
    pub fn new(label: impl Into<String>, lhs: f64, relation: Relation, rhs: f64) -> Self {
        Self {
            label: label.into(),
            lhs,
            rhs,
            relation,
            satisfied: relation.holds(lhs, rhs),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConditionReport {
    pub theorem_id: TheoremId,
    pub conditions: Vec<Condition>,
    pub all_satisfied: bool,
    /// Informational remarks that do not enter the verdict.
    pub notes: Vec<String>,
}

impl ConditionReport {
    fn new(theorem_id: TheoremId, conditions: Vec<Condition>, notes: Vec<String>) -> Self {
        let all_satisfied = conditions.iter().all(|c| c.satisfied);
        Self {
            theorem_id,
            conditions,
            all_satisfied,
            notes,
        }
    }

    pub fn condition(&self, label_prefix: &str) -> Option<&Condition> {
        self.conditions
            .iter()
            .find(|c| c.label.starts_with(label_prefix))
    }
}

/// `η = (√3 - 1)/(√3 + 1) = 2 - √3`.
pub fn eta() -> f64 {
    let s3 = 3f64.sqrt();
    (s3 - 1.0) / (s3 + 1.0)
}

/// `q(a, μ) = -3/2 e^μ (1-a)² + 1/2 e^{-μ} (1+a)²`.
pub fn q_of(a: f64, mu: f64) -> f64 {
    -1.5 * mu.exp() * (1.0 - a).powi(2) + 0.5 * (-mu).exp() * (1.0 + a).powi(2)
}

/// `F(μ) = 2 sinh μ + 10 cosh μ`.
pub fn big_f(mu: f64) -> f64 {
    2.0 * mu.sinh() + 10.0 * mu.cosh()
}

/// The two candidate upper limits for μ.
///
/// `closed_form` is `ln(|1+a| / (√2 |1-a|))` as printed next to condition (iv);
/// `q_root` is the positive root of `q(a, ·)` on (0, 10], which is the quantity
/// the dissipation estimate needs. Either is `None` when it has no positive value.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MuStar {
    pub closed_form: Option<f64>,
    pub q_root: Option<f64>,
}

impl MuStar {
    pub const ROOT_TOL: f64 = 1e-12;
    const UPPER: f64 = 10.0;

    /// True when both values exist and differ by more than the bisection tolerance,
    /// or when exactly one of them exists.
    pub fn disagree(&self) -> bool {
        match (self.closed_form, self.q_root) {
            (Some(x), Some(y)) => (x - y).abs() > 10.0 * Self::ROOT_TOL,
            (None, None) => false,
            _ => true,
        }
    }
}

pub fn mu_star(a: f64) -> Result<MuStar> {
    if a == 1.0 {
        return Err(Error::Parameter(
            "mu* is undefined for a = 1 (division by zero)".into(),
        ));
    }
    let arg = (1.0 + a).abs() / (2f64.sqrt() * (1.0 - a).abs());
    let closed_form = (arg > 1.0).then(|| arg.ln());

    let q_root = if q_of(a, 0.0) > 0.0 && q_of(a, MuStar::UPPER) < 0.0 {
        let (mut lo, mut hi) = (0.0, MuStar::UPPER);
        while hi - lo > MuStar::ROOT_TOL {
            let mid = 0.5 * (lo + hi);
            if q_of(a, mid) > 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        Some(0.5 * (lo + hi))
    } else {
        None
    };
    Ok(MuStar {
        closed_form,
        q_root,
    })
}

fn base_conditions(p: &Parameters) -> (Vec<Condition>, Vec<String>) {
    let e = eta();
    let (lo, hi) = (e.min(1.0 / e), e.max(1.0 / e));
    let mu = p.mu;
    let mut conds = vec![
        Condition::new("(i) a >= min(eta, 1/eta)", p.a, Relation::Ge, lo),
        Condition::new("(i) a <= max(eta, 1/eta)", p.a, Relation::Le, hi),
        Condition::new("(i) a != 1", p.a, Relation::Ne, 1.0),
        Condition::new("(ii) |bd/c| <= 1", (p.b * p.d / p.c).abs(), Relation::Le, 1.0),
        Condition::new("(iii) c >= pi^2/8", p.c, Relation::Ge, PI * PI / 8.0),
        Condition::new(
            "(iv) 1 + 2(sinh mu + 2 cosh mu) b^2 <= c",
            1.0 + 2.0 * (mu.sinh() + 2.0 * mu.cosh()) * p.b * p.b,
            Relation::Le,
            p.c,
        ),
    ];
    let mut notes = Vec::new();
    match mu_star(p.a) {
        Ok(ms) => {
            let root = ms.q_root.unwrap_or(f64::NEG_INFINITY);
            conds.push(Condition::new(
                "(iv) mu <= mu* (root of q)",
                mu,
                Relation::Le,
                root,
            ));
            match ms.closed_form {
                Some(cf) => notes.push(format!(
                    "closed-form mu* (sqrt2) = {cf:.12}; mu {} it",
                    if mu <= cf { "<=" } else { ">" }
                )),
                None => notes.push("closed-form mu* (sqrt2) has no positive value".into()),
            }
            if ms.disagree() {
                notes.push(format!(
                    "mu* disagreement: closed form {:?} vs q-root {:?}",
                    ms.closed_form, ms.q_root
                ));
            }
        }
        Err(_) => {
            conds.push(Condition::new(
                "(iv) mu <= mu* (root of q)",
                mu,
                Relation::Le,
                f64::NAN,
            ));
            notes.push("mu* undefined at a = 1".into());
        }
    }
    conds.push(Condition::new(
        "(v) |d| <= 2 sqrt(mu e^-mu)",
        p.d.abs(),
        Relation::Le,
        2.0 * (mu * (-mu).exp()).sqrt(),
    ));
    (conds, notes)
}

fn stability_pair(p: &Parameters) -> [Condition; 2] {
    [
        Condition::new("(stab) c >= pi^2/4", p.c, Relation::Ge, PI * PI / 4.0),
        Condition::new(
            "(stab) |d| <= sqrt(mu e^-mu)",
            p.d.abs(),
            Relation::Le,
            (p.mu * (-p.mu).exp()).sqrt(),
        ),
    ]
}

/// Conditions (i)-(v) plus the pair `c ≥ π²/4`, `|d| ≤ √(μe^{-μ})` required for
/// exponential stability.
pub fn check_theorem_1_1(params: &Parameters) -> ConditionReport {
    let (mut conds, notes) = base_conditions(params);
    conds.extend(stability_pair(params));
    ConditionReport::new(TheoremId::T1_1, conds, notes)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DecayVariant {
    /// `π²/4 + F(μ) b² ≤ c`
    I,
    /// `3 F(μ) b² ≤ c`
    II,
}

pub fn check_theorem_1_3(params: &Parameters, variant: DecayVariant) -> ConditionReport {
    let (mut conds, notes) = base_conditions(params);
    let f = big_f(params.mu);
    let b2 = params.b * params.b;
    conds.push(Condition::new(
        "(shared) |bd|/c <= sqrt(mu e^-mu / F(mu))",
        (params.b * params.d).abs() / params.c,
        Relation::Le,
        (params.mu * (-params.mu).exp() / f).sqrt(),
    ));
    let (id, cond) = match variant {
        DecayVariant::I => (
            TheoremId::T1_3i,
            Condition::new(
                "(i) pi^2/4 + F(mu) b^2 <= c",
                PI * PI / 4.0 + f * b2,
                Relation::Le,
                params.c,
            ),
        ),
        DecayVariant::II => (
            TheoremId::T1_3ii,
            Condition::new("(ii) 3 F(mu) b^2 <= c", 3.0 * f * b2, Relation::Le, params.c),
        ),
    };
    conds.push(cond);
    ConditionReport::new(id, conds, notes)
}

pub fn check_theorem_1_4(params: &Parameters) -> ConditionReport {
    let (mut conds, notes) = base_conditions(params);
    let f = big_f(params.mu);
    conds.push(Condition::new(
        "(1) c >= pi^2/4",
        params.c,
        Relation::Ge,
        PI * PI / 4.0,
    ));
    conds.push(Condition::new(
        "(2) (pi^2+2)/4 + F(mu) b^2 <= c",
        (PI * PI + 2.0) / 4.0 + f * params.b * params.b,
        Relation::Le,
        params.c,
    ));
    conds.push(Condition::new(
        "(3) |d| <= sqrt(mu e^-mu)",
        params.d.abs(),
        Relation::Le,
        (params.mu * (-params.mu).exp()).sqrt(),
    ));
    ConditionReport::new(TheoremId::T1_4, conds, notes)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn params(a: f64, b: f64, c: f64, d: f64, mu: f64) -> Parameters {
        Parameters {
            a,
            b,
            c,
            d,
            epsilon: 0.01,
            mu,
        }
    }

    #[test]
    fn eta_values() {
        assert!((eta() - (2.0 - 3f64.sqrt())).abs() < 1e-15);
        assert!((eta() - 0.267_949_192_431_122_7).abs() < 1e-12);
        assert!((eta() * (1.0 / eta()) - 1.0).abs() < 1e-15);
        assert!(eta() < 1.0 && 1.0 < 1.0 / eta());
    }

    #[test]
    fn q_values() {
        for mu in [0.1, 0.7, 2.0] {
            assert!((q_of(1.0, mu) - 2.0 * (-mu).exp()).abs() < 1e-15);
        }
        let oracle = |mu: f64| -1.5 * mu.exp() * 4.0 + 0.5 * (-mu).exp() * 16.0;
        assert!((q_of(3.0, 0.1) - 0.6077).abs() < 1e-3);
        assert!((q_of(3.0, 0.1) - oracle(0.1)).abs() < 1e-14);
        assert!((q_of(3.0, 0.2) + 0.7786).abs() < 1e-3);
    }

    #[test]
    fn q_strictly_decreasing_in_mu() {
        for a in [0.3, 0.5, 0.9, 1.5, 3.0, 3.7] {
            let vals: Vec<f64> = (0..=200).map(|i| q_of(a, i as f64 * 0.05)).collect();
            assert!(vals.windows(2).all(|w| w[1] < w[0]), "a = {a}");
        }
    }

    #[test]
    fn mu_star_values() {
        let ms = mu_star(3.0).unwrap();
        assert!((ms.closed_form.unwrap() - 2f64.sqrt().ln()).abs() < 1e-12);
        assert!((ms.closed_form.unwrap() - 0.346_574).abs() < 1e-6);
        let root = (2.0 / 3f64.sqrt()).ln();
        assert!((ms.q_root.unwrap() - root).abs() < 1e-11);
        assert!((ms.q_root.unwrap() - 0.143_841).abs() < 1e-6);
        assert!(ms.disagree());

        let half = mu_star(0.5).unwrap();
        assert!((half.closed_form.unwrap() - 0.752_039).abs() < 1e-6);
        assert!(matches!(mu_star(1.0), Err(Error::Parameter(_))));

        // a = -1 puts zero inside the logarithm; a = 10 gives an argument below 1.
        let neg = mu_star(-1.0).unwrap();
        assert_eq!(neg.closed_form, None);
        assert_eq!(neg.q_root, None);
        assert_eq!(mu_star(10.0).unwrap().closed_form, None);
    }

    #[test]
    fn q_positive_below_root() {
        let e = eta();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..200 {
            let a = rng.gen_range(e..1.0 / e);
            if (a - 1.0).abs() < 1e-3 {
                continue;
            }
            let root = mu_star(a).unwrap().q_root.unwrap();
            for i in 1..50 {
                let mu = root * i as f64 / 50.0;
                assert!(q_of(a, mu) > 0.0, "a = {a}, mu = {mu}");
            }
        }
    }

    #[test]
    fn big_f_values() {
        assert_eq!(big_f(0.0), 10.0);
        assert!((big_f(0.1) - 10.2504).abs() < 1e-3);
        let samples: Vec<f64> = (0..100).map(|i| big_f(2.0 * i as f64 / 99.0)).collect();
        assert!(samples.windows(2).all(|w| w[1] > w[0]));
    }

    #[test]
    fn theorem_1_1_examples() {
        let ok = check_theorem_1_1(&params(0.5, 0.1, 4.0, 0.2, 0.1));
        assert!(ok.all_satisfied, "{ok:#?}");
        let v = ok.condition("(v)").unwrap();
        assert!((v.rhs - 0.60161).abs() < 1e-5);

        let a1 = check_theorem_1_1(&params(1.0, 0.1, 4.0, 0.2, 0.1));
        assert!(!a1.all_satisfied);
        assert!(!a1.condition("(i) a != 1").unwrap().satisfied);

        let c1 = check_theorem_1_1(&params(0.5, 0.1, 1.0, 0.2, 0.1));
        let iii = c1.condition("(iii)").unwrap();
        assert!(!iii.satisfied);
        assert!((iii.rhs - 1.2337).abs() < 1e-4);
    }

    #[test]
    fn interval_is_read_in_increasing_order() {
        let lo = check_theorem_1_1(&params(eta(), 0.0, 4.0, 0.0, 0.01));
        assert!(lo.condition("(i) a >= min").unwrap().satisfied);
        let below = check_theorem_1_1(&params(0.25, 0.0, 4.0, 0.0, 0.01));
        assert!(!below.condition("(i) a >= min").unwrap().satisfied);
        let above = check_theorem_1_1(&params(3.8, 0.0, 4.0, 0.0, 0.01));
        assert!(!above.condition("(i) a <= max").unwrap().satisfied);
    }

    #[test]
    fn theorem_1_3_examples() {
        let r = check_theorem_1_3(&params(0.5, 0.1, 4.0, 0.25, 0.1), DecayVariant::I);
        assert!(r.all_satisfied);
        let var = r.condition("(i) pi^2/4").unwrap();
        assert!((var.lhs - 2.5699).abs() < 1e-4);
        let shared = r.condition("(shared)").unwrap();
        assert!((shared.lhs - 0.00625).abs() < 1e-12);
        assert!((shared.rhs - 0.09395).abs() < 1e-5);

        let b0 = check_theorem_1_3(&params(0.5, 0.0, 2.5, 0.25, 0.1), DecayVariant::I);
        let var = b0.condition("(i) pi^2/4").unwrap();
        assert_eq!(var.lhs, PI * PI / 4.0);
        assert!(var.satisfied);

        let r2 = check_theorem_1_3(&params(0.5, 0.1, 4.0, 0.25, 0.1), DecayVariant::II);
        let var = r2.condition("(ii) 3 F").unwrap();
        assert!((var.lhs - 0.30751).abs() < 1e-5);
        assert!(r2.all_satisfied);
    }

    #[test]
    fn theorem_1_4_examples() {
        let r = check_theorem_1_4(&params(0.5, 0.1, 4.0, 0.25, 0.1));
        assert!(r.all_satisfied);
        assert!((r.condition("(2)").unwrap().lhs - 3.0699).abs() < 1e-4);
        assert!((r.condition("(3)").unwrap().rhs - 0.30081).abs() < 1e-5);
        let bad_d = check_theorem_1_4(&params(0.5, 0.1, 4.0, 0.31, 0.1));
        assert!(!bad_d.condition("(3)").unwrap().satisfied);
        let bad_c = check_theorem_1_4(&params(0.5, 0.1, 3.0, 0.25, 0.1));
        assert!(!bad_c.condition("(2)").unwrap().satisfied);
    }

    #[test]
    fn theorem_1_4_nests_theorem_1_1() {
        let mut rng = ChaCha8Rng::seed_from_u64(99);
        let mut passing = 0;
        for _ in 0..5000 {
            let p = params(
                rng.gen_range(0.0..4.0),
                rng.gen_range(-0.5..0.5),
                rng.gen_range(0.0..8.0),
                rng.gen_range(-1.0..1.0),
                rng.gen_range(0.01..1.0),
            );
            if check_theorem_1_4(&p).all_satisfied {
                passing += 1;
                assert!(check_theorem_1_1(&p).all_satisfied, "{p:?}");
            }
        }
        assert!(passing > 50);
    }

    #[test]
    fn all_satisfied_is_conjunction() {
        let r = check_theorem_1_1(&params(0.5, 0.1, 1.0, 0.2, 0.1));
        assert_eq!(r.all_satisfied, r.conditions.iter().all(|c| c.satisfied));
    }
}
