//! Union-bound feasibility of the random-coloring argument.
//!
//! A uniformly random coloring leaves a fixed `n`-set without a good triple
//! with probability at most `(3/4)^f`, where `f` is the size of a partial
//! Steiner system on the `n` positions (its triples are pair-disjoint, so
//! their bad events are independent). Over the `C(D, n)` sets the expected
//! number of bad sets is below `C(D, n) (3/4)^f`, and the argument goes
//! through when this is below 1.

use statrs::function::gamma::ln_gamma;

use super::steiner::greedy_partial_steiner;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct BoundReport {
    pub n: usize,
    pub c0: f64,
    /// `floor(2^(c0 * n))`.
    pub domain: u64,
    pub triple_count: usize,
    /// `ln C(D, n) + triple_count * ln(3/4)`.
    pub log_expectation: f64,
    pub feasible: bool,
}

/// Longest product summed term by term in [`ln_binomial`].
const SUM_TERMS: u64 = 4096;

/// Natural log of the binomial coefficient. Short products are summed as
/// logs, which stays accurate for `n` near `2^64`; long ones go through
/// log-gamma.
pub fn ln_binomial(n: u64, k: u64) -> f64 {
    let k = k.min(n - k);
    if k == 0 {
        return 0.0;
    }
    if k <= SUM_TERMS {
        return (0..k)
            .map(|i| ((n - i) as f64).ln() - ((i + 1) as f64).ln())
            .sum();
    }
    ln_gamma(n as f64 + 1.0) - ln_gamma(k as f64 + 1.0) - ln_gamma((n - k) as f64 + 1.0)
}

pub fn probabilistic_bound(n: usize, c0: f64) -> Result<BoundReport> {
    if n < 3 {
        return Err(Error::BadArity { n, d: n });
    }
    if !(c0 > 0.0 && c0.is_finite()) {
        return Err(Error::BadParameters(format!(
            "c0 must be positive, got {c0}"
        )));
    }
    let exponent = c0 * n as f64;
    if exponent >= 64.0 {
        return Err(Error::BadParameters(format!(
            "2^(c0*n) = 2^{exponent} does not fit in 64 bits"
        )));
    }
    let domain = exponent.exp2().floor() as u64;
    if domain < n as u64 {
        return Err(Error::DomainTooSmall { d: domain, n });
    }
    let triple_count = greedy_partial_steiner(n)?.count();
    let log_expectation = ln_binomial(domain, n as u64) + triple_count as f64 * (0.75f64).ln();
    Ok(BoundReport {
        n,
        c0,
        domain,
        triple_count,
        log_expectation,
        feasible: log_expectation < 0.0,
    })
}

impl std::fmt::Display for BoundReport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "n={}", self.n)?;
        writeln!(f, "c0={}", self.c0)?;
        writeln!(f, "D={}", self.domain)?;
        writeln!(f, "triple_count={}", self.triple_count)?;
        writeln!(f, "log_expectation={:.6}", self.log_expectation)?;
        writeln!(f, "feasible={}", self.feasible)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ln_binomial_gamma(n: u64, k: u64) -> f64 {
        ln_gamma(n as f64 + 1.0) - ln_gamma(k as f64 + 1.0) - ln_gamma((n - k) as f64 + 1.0)
    }

    #[test]
    fn ln_binomial_agrees_with_log_gamma() {
        for n in 1..200u64 {
            for k in 0..=n {
                let (a, b) = (ln_binomial(n, k), ln_binomial_gamma(n, k));
                assert!((a - b).abs() < 1e-9 * b.abs().max(1.0), "C({n},{k})");
            }
        }
        let (a, b) = (ln_binomial(20_000, 9_000), ln_binomial_gamma(20_000, 9_000));
        assert!((a - b).abs() < 1e-9 * b);
    }

    #[test]
    fn ln_binomial_huge_n() {
        // k ln n - ln k! - k(k-1)/(2n) up to O(k^3 / n^2)
        for &(n, k) in &[(1u64 << 60, 30u64), (u64::MAX, 100), (1 << 40, 7)] {
            let ln_fact: f64 = (1..=k).map(|i| (i as f64).ln()).sum();
            let approx =
                k as f64 * (n as f64).ln() - ln_fact - (k * (k - 1)) as f64 / (2.0 * n as f64);
            let got = ln_binomial(n, k);
            assert!(
                (got - approx).abs() < 1e-9 * approx,
                "C({n},{k}): {got} vs {approx}"
            );
        }
    }

    #[test]
    fn small_feasible_case() {
        // 2^(0.55 * 3) = 3.14, D = 3: one set, one triple
        let r = probabilistic_bound(3, 0.55).unwrap();
        assert_eq!(r.domain, 3);
        assert_eq!(r.triple_count, 1);
        assert!((r.log_expectation - 0.75f64.ln()).abs() < 1e-12);
        assert!(r.feasible);
    }

    #[test]
    fn domain_too_small() {
        assert_eq!(
            probabilistic_bound(20, 0.05),
            Err(Error::DomainTooSmall { d: 2, n: 20 })
        );
        assert!(probabilistic_bound(20, 0.0).is_err());
    }

    #[test]
    fn log_expectation_monotone_in_c0() {
        let n = 40;
        let mut previous = f64::INFINITY;
        let mut c0 = 0.5;
        while c0 > 0.13 {
            let r = probabilistic_bound(n, c0).unwrap();
            assert!(r.log_expectation <= previous);
            previous = r.log_expectation;
            c0 -= 0.005;
        }
    }
}
