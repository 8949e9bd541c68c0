//! Pearson goodness-of-fit with chi-squared p-values from the regularized
//! upper incomplete gamma function.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

const EPS: f64 = 1e-15;
const MAX_ITER: usize = 500;

/// How the null-hypothesis label distribution of a leaf is formed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ExpectedMode {
    /// Every label equally likely.
    Uniform,
    /// Label marginals of the training instances.
    Empirical,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct Chi2Config {
    pub alpha: f64,
    pub expected_mode: ExpectedMode,
    pub min_leaf_support: usize,
}

impl Default for Chi2Config {
    fn default() -> Self {
        Chi2Config {
            alpha: 0.05,
            expected_mode: ExpectedMode::Empirical,
            min_leaf_support: 10,
        }
    }
}

impl Chi2Config {
    pub fn validate(&self) -> Result<()> {
        if !(self.alpha > 0.0 && self.alpha < 1.0) {
            return Err(Error::Config(format!("alpha {} outside (0, 1)", self.alpha)));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Significant,
    Inconclusive,
    Default,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Chi2Outcome {
    pub statistic: f64,
    pub df: usize,
    pub p_value: f64,
    pub verdict: Verdict,
    /// Index of the dominant count.
    pub label: usize,
}

/// `ln Γ(x)` for `x > 0` (Lanczos, g = 7).
pub fn ln_gamma(x: f64) -> f64 {
    const G: f64 = 7.0;
    const COEF: [f64; 9] = [
        0.999_999_999_999_809_9,
        676.520_368_121_885_1,
        -1_259.139_216_722_402_8,
        771.323_428_777_653_1,
        -176.615_029_162_140_6,
        12.507_343_278_686_905,
        -0.138_571_095_265_720_12,
        9.984_369_578_019_572e-6,
        1.505_632_735_149_311_6e-7,
    ];
    if x < 0.5 {
        // reflection
        let pi = std::f64::consts::PI;
        return (pi / (pi * x).sin()).ln() - ln_gamma(1.0 - x);
    }
    let x = x - 1.0;
    let mut sum = COEF[0];
    for (i, &c) in COEF.iter().enumerate().skip(1) {
        sum += c / (x + i as f64);
    }
    let t = x + G + 0.5;
    0.5 * (2.0 * std::f64::consts::PI).ln() + (x + 0.5) * t.ln() - t + sum.ln()
}

/// Regularized upper incomplete gamma `Q(a, x) = Γ(a, x) / Γ(a)`.
pub fn gamma_q(a: f64, x: f64) -> f64 {
    assert!(a > 0.0, "shape must be positive");
    if x <= 0.0 {
        return 1.0;
    }
    if x < a + 1.0 {
        1.0 - lower_series(a, x)
    } else {
        upper_fraction(a, x)
    }
}

/// `P(a, x)` by its power series.
fn lower_series(a: f64, x: f64) -> f64 {
    let mut term = 1.0 / a;
    let mut sum = term;
    let mut denom = a;
    for _ in 0..MAX_ITER {
        denom += 1.0;
        term *= x / denom;
        sum += term;
        if term.abs() < sum.abs() * EPS {
            break;
        }
    }
    (sum.ln() - x + a * x.ln() - ln_gamma(a)).exp()
}

/// `Q(a, x)` by its continued fraction (modified Lentz).
fn upper_fraction(a: f64, x: f64) -> f64 {
    const TINY: f64 = 1e-300;
    let mut b = x + 1.0 - a;
    let mut c = 1.0 / TINY;
    let mut d = 1.0 / b;
    let mut h = d;
    for i in 1..=MAX_ITER {
        let an = -(i as f64) * (i as f64 - a);
        b += 2.0;
        d = an * d + b;
        if d.abs() < TINY {
            d = TINY;
        }
        c = b + an / c;
        if c.abs() < TINY {
            c = TINY;
        }
        d = 1.0 / d;
        let delta = d * c;
        h *= delta;
        if (delta - 1.0).abs() < EPS {
            break;
        }
    }
    (-x + a * x.ln() - ln_gamma(a)).exp() * h
}

/// Survival function of the chi-squared distribution.
pub fn chi2_sf(statistic: f64, df: usize) -> f64 {
    if df == 0 {
        return 1.0;
    }
    gamma_q(df as f64 / 2.0, statistic / 2.0).clamp(0.0, 1.0)
}

/// Pearson statistic `Σ (O − E)² / E` with `E = p·n`, and its degrees of
/// freedom (categories with `p > 0`, minus one).
pub fn pearson(counts: &[usize], expected: &[f64]) -> Result<(f64, usize)> {
    if counts.len() != expected.len() {
        return Err(Error::IllPosedTest(format!(
            "{} counts against {} expected probabilities",
            counts.len(),
            expected.len()
        )));
    }
    let total: f64 = expected.iter().sum();
    if (total - 1.0).abs() > 1e-9 || expected.iter().any(|&p| p < 0.0) {
        return Err(Error::IllPosedTest("expected probabilities must sum to 1".into()));
    }
    let n: usize = counts.iter().sum();
    let n = n as f64;
    let mut statistic = 0.0;
    let mut categories = 0usize;
    for (&o, &p) in counts.iter().zip(expected) {
        if p == 0.0 {
            if o > 0 {
                return Err(Error::IllPosedTest(
                    "observed count under a zero-probability label".into(),
                ));
            }
            continue;
        }
        categories += 1;
        let e = p * n;
        let diff = o as f64 - e;
        statistic += diff * diff / e;
    }
    Ok((statistic, categories.saturating_sub(1)))
}

/// Test a leaf's label counts against the null distribution.
///
/// The leaf is significant when `p < alpha`, it holds at least
/// `min_leaf_support` rows, its dominant label is over-represented relative
/// to `expected`, and (when `required` is set) the dominant label is the
/// required one.
pub fn chi2_relabel(
    counts: &[usize],
    expected: &[f64],
    config: &Chi2Config,
    required: Option<usize>,
) -> Result<Chi2Outcome> {
    config.validate()?;
    let n: usize = counts.iter().sum();
    if n == 0 {
        return Err(Error::IllPosedTest("leaf has no observations".into()));
    }
    let (statistic, df) = pearson(counts, expected)?;
    let p_value = chi2_sf(statistic, df);
    let label = crate::learners::argmax(counts);
    let share = counts[label] as f64 / n as f64;
    let enriched = share > expected[label];
    let wanted = required.is_none_or(|r| r == label);
    let verdict = if p_value < config.alpha && n >= config.min_leaf_support && enriched && wanted {
        Verdict::Significant
    } else {
        Verdict::Inconclusive
    };
    Ok(Chi2Outcome {
        statistic,
        df,
        p_value,
        verdict,
        label,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg() -> Chi2Config {
        Chi2Config {
            min_leaf_support: 1,
            ..Chi2Config::default()
        }
    }

    #[test]
    fn thirty_ten_against_uniform() {
        let out = chi2_relabel(&[30, 10], &[0.5, 0.5], &cfg(), None).unwrap();
        assert_eq!(out.statistic, 10.0);
        assert_eq!(out.df, 1);
        assert_eq!(out.verdict, Verdict::Significant);
        assert_eq!(out.label, 0);
    }

    #[test]
    fn exact_fit_is_inconclusive() {
        let out = chi2_relabel(&[20, 20], &[0.5, 0.5], &cfg(), None).unwrap();
        assert_eq!(out.statistic, 0.0);
        assert!((out.p_value - 1.0).abs() < 1e-12);
        assert_eq!(out.verdict, Verdict::Inconclusive);
    }

    #[test]
    fn three_way_empirical() {
        let out = chi2_relabel(&[60, 25, 15], &[0.5, 0.3, 0.2], &cfg(), None).unwrap();
        assert!((out.statistic - 4.083_333_333_333_333).abs() < 1e-12);
        assert_eq!(out.df, 2);
        // df = 2: Q(1, x/2) = exp(-x/2)
        assert!((out.p_value - (-out.statistic / 2.0).exp()).abs() < 1e-12);
        assert_eq!(out.verdict, Verdict::Inconclusive);
    }

    #[test]
    fn critical_value_df1() {
        let p = chi2_sf(3.841_458_820_694_124, 1);
        assert!((p - 0.05).abs() < 1e-9, "{p}");
    }

    #[test]
    fn zero_expected_with_observation_is_ill_posed() {
        assert!(matches!(
            chi2_relabel(&[3, 1], &[1.0, 0.0], &cfg(), None),
            Err(Error::IllPosedTest(_))
        ));
    }

    #[test]
    fn required_label_and_support() {
        let needs_one = chi2_relabel(&[30, 10], &[0.5, 0.5], &cfg(), Some(1)).unwrap();
        assert_eq!(needs_one.verdict, Verdict::Inconclusive);
        let strict = Chi2Config::default();
        let small = chi2_relabel(&[9, 0], &[0.5, 0.5], &strict, None).unwrap();
        assert_eq!(small.verdict, Verdict::Inconclusive);
    }

    #[test]
    fn under_represented_label_is_not_a_rule() {
        // label 1 dominates the leaf but less than its marginal share
        let out = chi2_relabel(&[90, 110], &[0.275, 0.725], &cfg(), Some(1)).unwrap();
        assert!(out.p_value < 0.05);
        assert_eq!(out.label, 1);
        assert_eq!(out.verdict, Verdict::Inconclusive);
    }

    #[test]
    fn ln_gamma_matches_factorials() {
        let mut fact = 1.0f64;
        for n in 1..20 {
            assert!((ln_gamma(n as f64) - fact.ln()).abs() < 1e-10, "n={n}");
            fact *= n as f64;
        }
        assert!((ln_gamma(0.5) - std::f64::consts::PI.sqrt().ln()).abs() < 1e-12);
    }
}
