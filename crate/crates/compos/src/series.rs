//! Certified evaluation of the restricted part-generating series
//! S_m(x) = Σ_{i≥m} x^{H_i} and its derivative on (0, 1).
//!
//! Values come back as [`CertifiedValue`] enclosures: the partial sum is
//! evaluated in directed-rounding interval arithmetic and the infinite tail
//! is absorbed into the upper bound. Because the exponents are strictly
//! increasing positive integers, the tail after a partial sum ending before
//! H_N is at most the full geometric tail Σ_{n≥H_N} x^n = x^{H_N}/(1−x),
//! and the derivative tail at most Σ_{n≥H_N} n·x^{n−1}, which has the
//! closed form x^{H_N−1}·(H_N(1−x)+x)/(1−x)².

use std::cmp::Ordering;

use num_bigint::BigUint;
use num_traits::{One, Zero};

use crate::dyadic::{Dyadic, Interval, Round};
use crate::error::{Error, Result};
use crate::spec::{generate_terms, SequenceSpec};

/// Series evaluation stops with TAIL_NOT_CONVERGED after this many terms.
pub const TERM_CAP: u64 = 1_000_000;

/// Default working mantissa precision in bits.
pub const DEFAULT_PRECISION_BITS: u32 = 96;

/// Default ceiling for precision escalation.
pub const DEFAULT_PRECISION_CAP: u32 = 512;

/// A part-generating series: a sequence spec plus the cut index m, i.e.
/// S(x) = Σ_{i≥m} x^{H_i}.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RestrictedSeries {
    spec: SequenceSpec,
    cut_index: u64,
}

impl RestrictedSeries {
    /// Validates the cut index against the spec's admissible range
    /// (Fibonacci ≥ 2, PLRS ≥ 1, polynomial ≥ its certified
    /// positive-and-increasing index).
    pub fn new(spec: SequenceSpec, cut_index: u64) -> Result<RestrictedSeries> {
        let min = spec.min_index()?;
        if cut_index < min {
            return Err(Error::InadmissibleCut { cut: cut_index, min });
        }
        Ok(RestrictedSeries { spec, cut_index })
    }

    pub fn spec(&self) -> &SequenceSpec {
        &self.spec
    }

    pub fn cut_index(&self) -> u64 {
        self.cut_index
    }

    /// H_cut, the smallest allowed part.
    pub fn smallest_part(&self) -> BigUint {
        self.exponents().next().unwrap()
    }

    /// The strictly increasing exponent stream H_cut, H_{cut+1}, …
    pub fn exponents(&self) -> Exponents {
        Exponents::new(&self.spec, self.cut_index)
    }
}

impl std::fmt::Display for RestrictedSeries {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}@{}", self.spec, self.cut_index)
    }
}

/// Infinite iterator over the exponents of a series.
pub struct Exponents {
    kind: ExponentsKind,
}

enum ExponentsKind {
    Fib { prev: BigUint, cur: BigUint },
    Plrs { coeffs: Vec<BigUint>, window: Vec<BigUint>, emitted_from_window: usize },
    Poly { coeffs: Vec<num_bigint::BigInt>, next: u64 },
}

impl Exponents {
    fn new(spec: &SequenceSpec, cut: u64) -> Exponents {
        let kind = match spec {
            SequenceSpec::Fibonacci => {
                // position at (F_{cut-1}, F_cut)
                let (mut prev, mut cur) = (BigUint::zero(), BigUint::one()); // F_0, F_1
                for _ in 1..cut {
                    let next = &prev + &cur;
                    prev = std::mem::replace(&mut cur, next);
                }
                ExponentsKind::Fib { prev, cur }
            }
            SequenceSpec::Plrs { coeffs } => {
                let depth = coeffs.len() as u64;
                // generate prefix through max(cut-1, depth) so the pure
                // recurrence window is fully warmed up
                let warm = (cut - 1).max(depth).max(1);
                let window = generate_terms(spec, 1, warm)
                    .expect("PLRS windows are always generable")
                    .terms;
                let emitted_from_window = (cut - 1) as usize;
                ExponentsKind::Plrs { coeffs: coeffs.clone(), window, emitted_from_window }
            }
            SequenceSpec::Polynomial { coeffs } => {
                ExponentsKind::Poly { coeffs: coeffs.clone(), next: cut }
            }
        };
        Exponents { kind }
    }
}

impl Iterator for Exponents {
    type Item = BigUint;

    fn next(&mut self) -> Option<BigUint> {
        match &mut self.kind {
            ExponentsKind::Fib { prev, cur } => {
                let out = cur.clone();
                let next = &*prev + &*cur;
                *prev = std::mem::replace(cur, next);
                Some(out)
            }
            ExponentsKind::Plrs { coeffs, window, emitted_from_window } => {
                if *emitted_from_window < window.len() {
                    let out = window[*emitted_from_window].clone();
                    *emitted_from_window += 1;
                    return Some(out);
                }
                let depth = coeffs.len();
                let mut s = BigUint::zero();
                let len = window.len();
                for (j, c) in coeffs.iter().enumerate() {
                    s += c * &window[len - 1 - j];
                }
                // slide: drop the oldest entry once past the warm-up prefix
                window.push(s.clone());
                if window.len() > 2 * depth + 4 {
                    window.drain(..window.len() - depth);
                    *emitted_from_window = window.len();
                } else {
                    *emitted_from_window = window.len();
                }
                Some(s)
            }
            ExponentsKind::Poly { coeffs, next } => {
                let v = crate::spec::eval_poly(coeffs, &num_bigint::BigInt::from(*next));
                *next += 1;
                Some(v.to_biguint().expect("admissible polynomial windows are positive"))
            }
        }
    }
}

/// A certified enclosure: the true value lies in [lower, upper].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CertifiedValue {
    pub lower: Dyadic,
    pub upper: Dyadic,
}

impl CertifiedValue {
    pub fn from_interval(iv: Interval) -> CertifiedValue {
        CertifiedValue { lower: iv.lo, upper: iv.hi }
    }

    pub fn as_interval(&self) -> Interval {
        Interval::new(self.lower.clone(), self.upper.clone())
    }

    pub fn width(&self) -> Dyadic {
        self.upper.sub(&self.lower, 64, Round::Up)
    }

    /// Exact midpoint — guaranteed to lie inside the enclosure even when
    /// the width is far below any fixed rounding precision.
    pub fn midpoint(&self) -> Dyadic {
        self.lower.add_exact(&self.upper).half()
    }

    pub fn contains(&self, d: &Dyadic) -> bool {
        self.lower <= *d && *d <= self.upper
    }

    pub fn lower_f64(&self) -> f64 {
        self.lower.to_f64()
    }

    pub fn upper_f64(&self) -> f64 {
        self.upper.to_f64()
    }

    pub fn midpoint_f64(&self) -> f64 {
        self.midpoint().to_f64()
    }
}

fn check_x(x: &Dyadic) -> Result<()> {
    if x.signum() <= 0 || *x >= Dyadic::one() {
        return Err(Error::XOutOfRange { x: format!("{}", x.to_f64()) });
    }
    Ok(())
}

/// Working precision to resolve an absolute tolerance, with headroom for
/// rounding accumulation across the partial sum.
pub(crate) fn precision_for(abs_tol: &Dyadic, cap: u32) -> u32 {
    let lo = abs_tol.mag_log2_range().map(|(lo, _)| lo).unwrap_or(-64);
    let need = if lo < 0 { (-lo) as u32 + 48 } else { 48 };
    need.max(DEFAULT_PRECISION_BITS).min(cap)
}

enum Attempt<T> {
    Done(T),
    NeedMorePrecision,
}

/// Enclose S(x) within width ≤ 2·abs_tol.
///
/// The partial sum grows until the geometric tail bound x^{H_next}/(1−x)
/// drops under abs_tol; precision escalates (doubling, up to `cap_bits`)
/// if rounding noise keeps the enclosure wider than promised.
pub fn evaluate_series_with_cap(
    series: &RestrictedSeries,
    x: &Dyadic,
    abs_tol: &Dyadic,
    cap_bits: u32,
) -> Result<CertifiedValue> {
    check_x(x)?;
    assert!(abs_tol.signum() > 0, "abs_tol must be positive");
    let mut prec = precision_for(abs_tol, cap_bits);
    loop {
        match eval_attempt(series, x, abs_tol, prec, false)? {
            Attempt::Done(v) => return Ok(v),
            Attempt::NeedMorePrecision => {
                if prec >= cap_bits {
                    return Err(Error::PrecisionExhausted {
                        cap_bits,
                        context: format!("evaluating {series} at x = {}", x.to_f64()),
                    });
                }
                prec = (prec * 2).min(cap_bits);
            }
        }
    }
}

/// [`evaluate_series_with_cap`] with the default 512-bit escalation cap.
pub fn evaluate_series(
    series: &RestrictedSeries,
    x: &Dyadic,
    abs_tol: &Dyadic,
) -> Result<CertifiedValue> {
    evaluate_series_with_cap(series, x, abs_tol, DEFAULT_PRECISION_CAP)
}

/// Enclose S′(x) = Σ H_i·x^{H_i−1} within width ≤ 2·abs_tol.
pub fn evaluate_series_derivative_with_cap(
    series: &RestrictedSeries,
    x: &Dyadic,
    abs_tol: &Dyadic,
    cap_bits: u32,
) -> Result<CertifiedValue> {
    check_x(x)?;
    assert!(abs_tol.signum() > 0, "abs_tol must be positive");
    let mut prec = precision_for(abs_tol, cap_bits);
    loop {
        match eval_attempt(series, x, abs_tol, prec, true)? {
            Attempt::Done(v) => return Ok(v),
            Attempt::NeedMorePrecision => {
                if prec >= cap_bits {
                    return Err(Error::PrecisionExhausted {
                        cap_bits,
                        context: format!("evaluating d/dx {series} at x = {}", x.to_f64()),
                    });
                }
                prec = (prec * 2).min(cap_bits);
            }
        }
    }
}

/// [`evaluate_series_derivative_with_cap`] with the default cap.
pub fn evaluate_series_derivative(
    series: &RestrictedSeries,
    x: &Dyadic,
    abs_tol: &Dyadic,
) -> Result<CertifiedValue> {
    evaluate_series_derivative_with_cap(series, x, abs_tol, DEFAULT_PRECISION_CAP)
}

fn eval_attempt(
    series: &RestrictedSeries,
    x: &Dyadic,
    abs_tol: &Dyadic,
    prec: u32,
    derivative: bool,
) -> Result<Attempt<CertifiedValue>> {
    let one = Dyadic::one();
    let omx_lo = one.sub(x, prec, Round::Down); // 1-x, lower
    let omx_hi = one.sub(x, prec, Round::Up);
    debug_assert!(omx_lo.signum() > 0);
    let inv_omx_hi = one.div(&omx_lo, prec, Round::Up); // ≥ 1/(1-x)
    let x_iv = Interval::point(x.clone());

    let mut it = series.exponents();
    let mut h = it.next().unwrap();
    // `pow` encloses x^H (value mode) or x^{H-1} (derivative mode), updated
    // incrementally by x^{ΔH} so linear exponent streams cost one interval
    // multiply per term instead of a fresh exponentiation.
    let mut pow = if derivative {
        x_iv.pow_frac(&(&h - BigUint::one()), prec)
    } else {
        x_iv.pow_frac(&h, prec)
    };
    let mut sum = Interval::point(Dyadic::zero());
    let mut terms: u64 = 0;
    loop {
        let term = if derivative {
            pow.mul(&Interval::point(Dyadic::from_biguint(&h)), prec)
        } else {
            pow.clone()
        };
        sum = sum.add(&term, prec);
        terms += 1;
        let next = it.next().unwrap();
        let delta = &next - &h;
        pow = pow.mul(&x_iv.pow_frac(&delta, prec), prec);

        let tail = if derivative {
            derivative_tail_upper(&pow.hi, &next, x, &omx_hi, &inv_omx_hi, prec)
        } else {
            pow.hi.mul(&inv_omx_hi, prec, Round::Up)
        };
        if tail <= *abs_tol {
            let upper = sum.hi.add(&tail, prec, Round::Up);
            let out = CertifiedValue { lower: sum.lo, upper };
            if out.width() <= abs_tol.scale2(1) {
                return Ok(Attempt::Done(out));
            }
            return Ok(Attempt::NeedMorePrecision);
        }
        if terms >= TERM_CAP {
            return Err(Error::TailNotConverged { terms });
        }
        h = next;
    }
}

/// Upper bound for Σ_{n≥N} n·x^{n−1} = x^{N−1}·(N(1−x)+x)/(1−x)², which
/// dominates the derivative tail because the H_i are a subset of the
/// integers ≥ N. `xpow_hi` must be an upper bound on x^{N−1}.
fn derivative_tail_upper(
    xpow_hi: &Dyadic,
    n: &BigUint,
    x: &Dyadic,
    omx_hi: &Dyadic,
    inv_omx_hi: &Dyadic,
    prec: u32,
) -> Dyadic {
    let n_dy = Dyadic::from_biguint(n);
    let b = n_dy.mul(omx_hi, prec, Round::Up).add(x, prec, Round::Up);
    xpow_hi
        .mul(&b, prec, Round::Up)
        .mul(inv_omx_hi, prec, Round::Up)
        .mul(inv_omx_hi, prec, Round::Up)
}

/// Certified comparison of S(x) against 1 with early exit: `Some(Greater)`
/// as soon as the partial-sum lower bound clears 1, `Some(Less)` as soon
/// as upper bound plus tail stays under 1, `None` once the tail bound is
/// below `floor_tol` without a decision (the value is within `floor_tol`-ish
/// of 1 at this precision).
pub(crate) fn certified_cmp_one(
    series: &RestrictedSeries,
    x: &Dyadic,
    prec: u32,
    floor_tol: &Dyadic,
) -> Result<Option<Ordering>> {
    debug_assert!(x.signum() > 0 && *x < Dyadic::one());
    let one = Dyadic::one();
    let omx_lo = one.sub(x, prec, Round::Down);
    let inv_omx_hi = one.div(&omx_lo, prec, Round::Up);
    let x_iv = Interval::point(x.clone());

    let mut it = series.exponents();
    let mut h = it.next().unwrap();
    let mut pow = x_iv.pow_frac(&h, prec);
    let mut sum = Interval::point(Dyadic::zero());
    let mut terms: u64 = 0;
    loop {
        sum = sum.add(&pow, prec);
        terms += 1;
        if sum.lo > one {
            return Ok(Some(Ordering::Greater));
        }
        let next = it.next().unwrap();
        let delta = &next - &h;
        pow = pow.mul(&x_iv.pow_frac(&delta, prec), prec);
        let tail = pow.hi.mul(&inv_omx_hi, prec, Round::Up);
        if sum.hi.add(&tail, prec, Round::Up) < one {
            return Ok(Some(Ordering::Less));
        }
        if tail <= *floor_tol {
            return Ok(None);
        }
        if terms >= TERM_CAP {
            return Err(Error::TailNotConverged { terms });
        }
        h = next;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    fn fib_series(m: u64) -> RestrictedSeries {
        RestrictedSeries::new(SequenceSpec::Fibonacci, m).unwrap()
    }

    fn tol(t: f64) -> Dyadic {
        Dyadic::from_f64(t)
    }

    /// |v - p/q| <= bound where bound = b_num/b_den, all exact.
    fn within(v: &Dyadic, num: i64, den: u64, b_num: i64, b_den: u64) -> bool {
        let lo_n = BigInt::from(num) * b_den - BigInt::from(b_num) * den;
        let hi_n = BigInt::from(num) * b_den + BigInt::from(b_num) * den;
        let d = BigInt::from(den) * b_den;
        v.cmp_rational(&lo_n, &d) != Ordering::Less
            && v.cmp_rational(&hi_n, &d) != Ordering::Greater
    }

    #[test]
    fn admissibility_checks() {
        assert!(RestrictedSeries::new(SequenceSpec::Fibonacci, 2).is_ok());
        assert_eq!(
            RestrictedSeries::new(SequenceSpec::Fibonacci, 1).unwrap_err().code(),
            "INADMISSIBLE_CUT"
        );
        let p = SequenceSpec::polynomial(&[1, 0, -2]).unwrap();
        assert!(RestrictedSeries::new(p.clone(), 2).is_ok());
        assert_eq!(RestrictedSeries::new(p, 1).unwrap_err().code(), "INADMISSIBLE_CUT");
    }

    #[test]
    fn exponent_streams() {
        let take = |s: &RestrictedSeries, n: usize| -> Vec<u64> {
            s.exponents().take(n).map(|b| u64::try_from(&b).unwrap()).collect()
        };
        assert_eq!(take(&fib_series(2), 6), vec![1, 2, 3, 5, 8, 13]);
        assert_eq!(take(&fib_series(5), 4), vec![5, 8, 13, 21]);
        let plrs = RestrictedSeries::new(SequenceSpec::plrs(&[1, 1, 1]).unwrap(), 3).unwrap();
        assert_eq!(take(&plrs, 5), vec![4, 7, 13, 24, 44]);
        assert_eq!(plrs.smallest_part(), BigUint::from(4u32));
        let poly =
            RestrictedSeries::new(SequenceSpec::polynomial(&[1, 0, -2]).unwrap(), 2).unwrap();
        assert_eq!(take(&poly, 4), vec![2, 7, 14, 23]);
    }

    #[test]
    fn x_out_of_range() {
        let s = fib_series(2);
        let t = tol(1e-9);
        for x in [Dyadic::zero(), Dyadic::one(), Dyadic::from_i64(-1), Dyadic::from_u64(2)] {
            assert_eq!(evaluate_series(&s, &x, &t).unwrap_err().code(), "X_OUT_OF_RANGE");
        }
    }

    #[test]
    fn fib2_series_at_half() {
        // S_2(1/2) = sum 2^{-F_i} = 0.91027879720786589179... (exact
        // reference from 60-digit arithmetic)
        let s = fib_series(2);
        let v = evaluate_series(&s, &Dyadic::two_pow(-1), &tol(1e-12)).unwrap();
        assert!(v.width() <= tol(2e-12));
        // 0.910278797207 <= v <= 0.910278797208
        let lo = BigInt::from(910278797207u64);
        let hi = BigInt::from(910278797208u64);
        let den = BigInt::from(10u64.pow(12));
        assert_eq!(v.lower.cmp_rational(&hi, &den), Ordering::Less);
        assert_eq!(v.upper.cmp_rational(&lo, &den), Ordering::Greater);
    }

    #[test]
    fn fib2_derivative_at_half() {
        // S_2'(1/2) = 3.1281938592437685265...
        let s = fib_series(2);
        let v = evaluate_series_derivative(&s, &Dyadic::two_pow(-1), &tol(1e-12)).unwrap();
        assert!(v.width() <= tol(2e-12));
        let lo = BigInt::from(3128193859243u64);
        let hi = BigInt::from(3128193859244u64);
        let den = BigInt::from(10u64.pow(12));
        assert_eq!(v.lower.cmp_rational(&hi, &den), Ordering::Less);
        assert_eq!(v.upper.cmp_rational(&lo, &den), Ordering::Greater);
    }

    #[test]
    fn near_root_value_is_near_one() {
        // S_2(0.5276126) = 1.0000000672... — the enclosure must contain a
        // value within 1e-7 of 1.
        let s = fib_series(2);
        let x = Dyadic::from_decimal("0.5276126", 128, Round::Down).unwrap();
        let v = evaluate_series(&s, &x, &tol(1e-9)).unwrap();
        assert!(within(&v.midpoint(), 1, 1, 1, 10_000_000));
    }

    #[test]
    fn fib3_near_root() {
        let s = fib_series(3);
        let x = Dyadic::from_decimal("0.6855205", 128, Round::Down).unwrap();
        let v = evaluate_series(&s, &x, &tol(1e-9)).unwrap();
        assert!(within(&v.midpoint(), 1, 1, 1, 10_000_000));
        // S_3'(alpha_3) ≈ 4.6054074
        let d = evaluate_series_derivative(&s, &x, &tol(1e-9)).unwrap();
        assert!(within(&d.midpoint(), 46054074, 10_000_000, 1, 1_000_000));
    }

    #[test]
    fn tiny_x_first_term_dominates() {
        // For fib m=2 the first exponent is 1, so S(x) ≈ x as x → 0+.
        let s = fib_series(2);
        let x = Dyadic::from_decimal("1e-9", 128, Round::Down).unwrap();
        let v = evaluate_series(&s, &x, &tol(1e-12)).unwrap();
        assert!(within(&v.midpoint(), 1, 1_000_000_000, 1, 100_000_000_000));
        // derivative → 1 as x → 0+
        let d = evaluate_series_derivative(&s, &x, &tol(1e-12)).unwrap();
        assert!(within(&d.midpoint(), 1, 1, 1, 100_000_000));
    }

    #[test]
    fn huge_exponents_converge_fast() {
        // k^9 at m = 75: exponents near 7.5e16; evaluation must stay
        // cheap and certified at points near 1.
        let k9 = SequenceSpec::monomial(9).unwrap();
        let s = RestrictedSeries::new(k9, 75).unwrap();
        let x = Dyadic::one().sub(&Dyadic::two_pow(-40), 128, Round::Down);
        let v = evaluate_series(&s, &x, &tol(1e-9)).unwrap();
        // x = 1-2^-40 is far below the root (1-gamma ≈ 1.3e-17), so S < 1
        assert!(v.upper < Dyadic::one());
    }

    #[test]
    fn dense_exponents_near_one_hit_term_cap() {
        // P(n) = n admits every integer part; at x = 1-2^-21 the geometric
        // tail needs ~10^8 terms to drop under 1e-9, so the cap trips.
        let p = SequenceSpec::polynomial(&[1, 0]).unwrap();
        let s = RestrictedSeries::new(p, 1).unwrap();
        let x = Dyadic::one().sub_exact(&Dyadic::two_pow(-21));
        let err = evaluate_series(&s, &x, &tol(1e-9)).unwrap_err();
        assert_eq!(err.code(), "TAIL_NOT_CONVERGED");
    }

    #[test]
    fn certified_sign_queries() {
        let s = fib_series(2);
        let floor = tol(1e-12);
        let below = Dyadic::from_decimal("0.52", 96, Round::Down).unwrap();
        let above = Dyadic::from_decimal("0.54", 96, Round::Down).unwrap();
        assert_eq!(certified_cmp_one(&s, &below, 96, &floor).unwrap(), Some(Ordering::Less));
        assert_eq!(certified_cmp_one(&s, &above, 96, &floor).unwrap(), Some(Ordering::Greater));
    }

    #[test]
    fn exact_root_sign_query_indeterminate() {
        // poly:1,0 at m=1 has S(x) = x/(1-x), exact root 1/2: the sign
        // query at the root itself must refuse to decide.
        let p = SequenceSpec::polynomial(&[1, 0]).unwrap();
        let s = RestrictedSeries::new(p, 1).unwrap();
        let r = certified_cmp_one(&s, &Dyadic::two_pow(-1), 128, &tol(1e-20)).unwrap();
        assert_eq!(r, None);
    }
}
