//! Exact composition counting by dynamic programming over big integers,
//! plus the statistics the asymptotic constants predict.
//!
//! For parts {H_i : i ≥ m} and 0 ≤ n ≤ limit the table holds
//!
//! ```text
//! c(n) = # compositions of n           c(0) = 1
//! w(n) = Σ over compositions of (number of summands)
//! u(n) = Σ over compositions of (number of summands equal to 1)
//! ```
//!
//! via the renewal recurrences c(n) = Σ_p c(n−p), w(n) = Σ_p (w(n−p) +
//! c(n−p)), u(n) = Σ_p u(n−p) + [1 ∈ parts]·c(n−1). Everything is exact;
//! floating point appears only in the convenience accessors.

use num_bigint::BigUint;
use num_traits::{One, Zero};

use crate::dyadic::{Dyadic, Interval, Round};
use crate::error::{Error, Result};
use crate::root::RootAnalysis;
use crate::series::RestrictedSeries;

/// Default memory budget for [`build_count_table`]: 1 GiB.
pub const DEFAULT_MEMORY_BUDGET: u64 = 1 << 30;

/// Hard cap for [`brute_force_count`]; the walk is exponential by design.
pub const BRUTE_FORCE_CAP: u64 = 30;

/// Exact counts and summand totals for one series up to a limit.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CountTable {
    series: RestrictedSeries,
    limit: u64,
    counts: Vec<BigUint>,
    summand_totals: Vec<BigUint>,
    ones_totals: Vec<BigUint>,
}

/// Exact values plus float conveniences for one n.
#[derive(Debug, Clone, PartialEq)]
pub struct Stats {
    pub count: BigUint,
    pub total_summands: BigUint,
    pub total_ones: BigUint,
    /// w(n)/c(n); `None` for the empty composition of 0 (no summands).
    pub mean_summands: Option<f64>,
    /// u(n)/w(n); `None` when there are no summands at all.
    pub ones_density: Option<f64>,
}

impl CountTable {
    pub fn series(&self) -> &RestrictedSeries {
        &self.series
    }

    pub fn limit(&self) -> u64 {
        self.limit
    }

    /// c(n); panics beyond the limit.
    pub fn count(&self, n: u64) -> &BigUint {
        &self.counts[n as usize]
    }

    pub fn summand_total(&self, n: u64) -> &BigUint {
        &self.summand_totals[n as usize]
    }

    pub fn ones_total(&self, n: u64) -> &BigUint {
        &self.ones_totals[n as usize]
    }

    pub(crate) fn from_raw(
        series: RestrictedSeries,
        counts: Vec<BigUint>,
        summand_totals: Vec<BigUint>,
        ones_totals: Vec<BigUint>,
    ) -> CountTable {
        assert!(!counts.is_empty());
        assert_eq!(counts.len(), summand_totals.len());
        assert_eq!(counts.len(), ones_totals.len());
        CountTable {
            series,
            limit: (counts.len() - 1) as u64,
            counts,
            summand_totals,
            ones_totals,
        }
    }

    /// Exact and float statistics at n, or NO_COMPOSITIONS / OUT_OF_RANGE.
    pub fn stats_at(&self, n: u64) -> Result<Stats> {
        if n > self.limit {
            return Err(Error::OutOfRange { what: "n", got: n, limit: self.limit });
        }
        let c = &self.counts[n as usize];
        if c.is_zero() {
            return Err(Error::NoCompositions { n });
        }
        let w = &self.summand_totals[n as usize];
        let u = &self.ones_totals[n as usize];
        let ratio = |num: &BigUint, den: &BigUint| -> f64 {
            Dyadic::from_biguint(num)
                .div(&Dyadic::from_biguint(den), 64, Round::Down)
                .to_f64()
        };
        let mean_summands = if w.is_zero() { None } else { Some(ratio(w, c)) };
        let ones_density = if w.is_zero() { None } else { Some(ratio(u, w)) };
        Ok(Stats {
            count: c.clone(),
            total_summands: w.clone(),
            total_ones: u.clone(),
            mean_summands,
            ones_density,
        })
    }
}

/// All parts ≤ limit, in increasing order.
fn parts_up_to(series: &RestrictedSeries, limit: u64) -> Vec<u64> {
    let mut parts = Vec::new();
    for h in series.exponents() {
        match u64::try_from(&h) {
            Ok(v) if v <= limit => parts.push(v),
            _ => break,
        }
    }
    parts
}

/// Pessimistic size estimate: c(n) ≤ 2^{n−1} and w, u ≤ n·c(n), so each of
/// the three columns stores O(n/8) bytes at row n plus allocator overhead.
fn estimate_bytes(limit: u64) -> u64 {
    let l = limit as u128;
    let est = 3 * (l * l / 16 + 32 * (l + 1));
    u64::try_from(est).unwrap_or(u64::MAX)
}

/// [`build_count_table_with_budget`] under the default 1 GiB budget.
pub fn build_count_table(series: &RestrictedSeries, limit: u64) -> Result<CountTable> {
    build_count_table_with_budget(series, limit, DEFAULT_MEMORY_BUDGET)
}

/// Exact DP table for 0..=limit, refusing up front if the projected
/// allocation exceeds `budget_bytes`.
pub fn build_count_table_with_budget(
    series: &RestrictedSeries,
    limit: u64,
    budget_bytes: u64,
) -> Result<CountTable> {
    let estimate = estimate_bytes(limit);
    if estimate > budget_bytes {
        return Err(Error::LimitTooLarge { limit, estimate, budget: budget_bytes });
    }
    let parts = parts_up_to(series, limit);
    let has_one = parts.first() == Some(&1);
    let len = (limit + 1) as usize;
    let mut c = Vec::with_capacity(len);
    let mut w = Vec::with_capacity(len);
    let mut u = Vec::with_capacity(len);
    c.push(BigUint::one());
    w.push(BigUint::zero());
    u.push(BigUint::zero());
    for n in 1..=limit {
        let mut cn = BigUint::zero();
        let mut wn = BigUint::zero();
        let mut un = BigUint::zero();
        for &p in &parts {
            if p > n {
                break;
            }
            let i = (n - p) as usize;
            cn += &c[i];
            wn += &w[i];
            wn += &c[i];
            un += &u[i];
        }
        if has_one {
            un += &c[(n - 1) as usize];
        }
        c.push(cn);
        w.push(wn);
        u.push(un);
    }
    Ok(CountTable::from_raw(series.clone(), c, w, u))
}

/// Exhaustive depth-first enumeration of compositions — deliberately free
/// of the DP recurrence so the two can vouch for each other. Exponential;
/// capped at n = 30.
pub fn brute_force_count(series: &RestrictedSeries, n: u64) -> Result<BigUint> {
    if n > BRUTE_FORCE_CAP {
        return Err(Error::NTooLarge { n, cap: BRUTE_FORCE_CAP });
    }
    let parts = parts_up_to(series, n);
    fn walk(parts: &[u64], remaining: u64) -> BigUint {
        if remaining == 0 {
            return BigUint::one();
        }
        let mut total = BigUint::zero();
        for &p in parts {
            if p > remaining {
                break;
            }
            total += walk(parts, remaining - p);
        }
        total
    }
    Ok(walk(&parts, n))
}

/// Signed relative residual of the leading-order asymptotic at n:
/// c(n)·γ^{n+1}·S′(γ) − 1, evaluated in interval arithmetic over the
/// certified enclosures and collapsed to the midpoint.
pub fn asymptotic_residual(
    table: &CountTable,
    analysis: &RootAnalysis,
    n: u64,
) -> Result<f64> {
    if analysis.series != table.series {
        return Err(Error::MismatchedSeries);
    }
    if n > table.limit {
        return Err(Error::OutOfRange { what: "n", got: n, limit: table.limit });
    }
    let prec = analysis.precision_bits.max(192);
    let e = BigUint::from(n) + BigUint::one();
    let pow = analysis.gamma_interval.as_interval().pow_frac(&e, prec);
    let c = Interval::point(Dyadic::from_biguint(table.count(n)));
    let d = analysis.derivative_interval.as_interval();
    let one = Interval::point(Dyadic::one());
    let r = c.mul(&pow, prec).mul(&d, prec).sub(&one, prec);
    Ok(r.midpoint(prec).to_f64())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::root::find_root;
    use crate::spec::SequenceSpec;

    fn series(spec: SequenceSpec, m: u64) -> RestrictedSeries {
        RestrictedSeries::new(spec, m).unwrap()
    }

    fn fib(m: u64) -> RestrictedSeries {
        series(SequenceSpec::Fibonacci, m)
    }

    fn nums(v: &[u64]) -> Vec<BigUint> {
        v.iter().map(|&x| BigUint::from(x)).collect()
    }

    #[test]
    fn fibonacci_m2_small_table() {
        let t = build_count_table(&fib(2), 6).unwrap();
        assert_eq!(t.counts, nums(&[1, 1, 2, 4, 7, 14, 26]));
        assert_eq!(t.summand_totals[..6], nums(&[0, 1, 3, 8, 19, 44])[..]);
        assert_eq!(t.ones_totals[..5], nums(&[0, 1, 2, 5, 12])[..]);
    }

    #[test]
    fn fibonacci_m3_skips_ones() {
        let t = build_count_table(&fib(3), 5).unwrap();
        assert_eq!(t.counts, nums(&[1, 0, 1, 1, 1, 3]));
        assert!(t.ones_totals.iter().all(|v| v.is_zero()));
        assert_eq!(t.stats_at(1).unwrap_err().code(), "NO_COMPOSITIONS");
        // parts exist but none equal 1, so the density is exactly zero
        assert_eq!(t.stats_at(5).unwrap().ones_density, Some(0.0));
    }

    #[test]
    fn powers_of_two_parts() {
        let s = series(SequenceSpec::plrs(&[2]).unwrap(), 1);
        let t = build_count_table(&s, 5).unwrap();
        assert_eq!(t.count(5), &BigUint::from(10u32));
    }

    #[test]
    fn stats_values() {
        let t = build_count_table(&fib(2), 10).unwrap();
        let s = t.stats_at(4).unwrap();
        assert_eq!(s.count, BigUint::from(7u32));
        assert_eq!(s.total_summands, BigUint::from(19u32));
        assert_eq!(s.total_ones, BigUint::from(12u32));
        assert!((s.mean_summands.unwrap() - 19.0 / 7.0).abs() < 1e-12);
        assert!((s.ones_density.unwrap() - 12.0 / 19.0).abs() < 1e-12);

        // the empty composition of 0 exists but has no summands
        let s0 = t.stats_at(0).unwrap();
        assert_eq!(s0.count, BigUint::one());
        assert_eq!(s0.mean_summands, None);
        assert_eq!(s0.ones_density, None);

        assert_eq!(t.stats_at(11).unwrap_err().code(), "OUT_OF_RANGE");
    }

    #[test]
    fn dp_matches_brute_force() {
        let configs = [
            fib(2),
            fib(3),
            series(SequenceSpec::plrs(&[2]).unwrap(), 1),
            series(SequenceSpec::plrs(&[1, 1, 1]).unwrap(), 2),
            series(SequenceSpec::monomial(2).unwrap(), 2),
            series(SequenceSpec::polynomial(&[1, 0]).unwrap(), 1),
        ];
        for s in &configs {
            let t = build_count_table(s, 12).unwrap();
            for n in 0..=12 {
                assert_eq!(
                    t.count(n),
                    &brute_force_count(s, n).unwrap(),
                    "mismatch at n = {n} for {s}"
                );
            }
        }
    }

    #[test]
    fn brute_force_cap() {
        assert_eq!(brute_force_count(&fib(2), 31).unwrap_err().code(), "N_TOO_LARGE");
    }

    #[test]
    fn memory_budget_guard() {
        let err = build_count_table_with_budget(&fib(2), 1000, 10_000).unwrap_err();
        match err {
            Error::LimitTooLarge { limit, estimate, budget } => {
                assert_eq!(limit, 1000);
                assert!(estimate > budget);
            }
            other => panic!("expected LIMIT_TOO_LARGE, got {other:?}"),
        }
    }

    #[test]
    fn residual_tracks_the_asymptotic() {
        let s = fib(2);
        let t = build_count_table(&s, 100).unwrap();
        let r = find_root(&s, &Dyadic::from_f64(1e-30)).unwrap();
        let r10 = asymptotic_residual(&t, &r, 10).unwrap().abs();
        let r50 = asymptotic_residual(&t, &r, 50).unwrap().abs();
        assert!(r10 < 1e-2, "r10 = {r10}");
        assert!(r50 < 1e-11, "r50 = {r50}");
        assert!(r50 < r10);
    }

    #[test]
    fn residual_guards() {
        let t = build_count_table(&fib(2), 20).unwrap();
        let r3 = find_root(&fib(3), &Dyadic::from_f64(1e-9)).unwrap();
        assert_eq!(asymptotic_residual(&t, &r3, 5).unwrap_err().code(), "MISMATCHED_SERIES");
        let r2 = find_root(&fib(2), &Dyadic::from_f64(1e-9)).unwrap();
        assert_eq!(asymptotic_residual(&t, &r2, 21).unwrap_err().code(), "OUT_OF_RANGE");
    }
}
