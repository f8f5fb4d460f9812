//! Part-sequence specifications and exact integer generation.
//!
//! Three families of strictly increasing positive part sequences are
//! supported:
//!
//! * `Fibonacci` — F_1 = 1, F_2 = 1, F_k = F_{k-1} + F_{k-2}. Windows start
//!   at index 2 so the values seen are 1, 2, 3, 5, 8, …
//! * `Plrs` — a positive linear recurrence sequence of depth L with
//!   coefficients c_1..c_L: H_1 = 1, an initial segment
//!   H_{n+1} = c_1 H_n + … + c_n H_1 + 1 for 1 ≤ n < L, and the pure
//!   recurrence H_{n+1} = c_1 H_n + … + c_L H_{n+1-L} afterwards.
//! * `Polynomial` — H_i = P(i) for an integer polynomial with positive
//!   leading coefficient and degree ≥ 1, restricted to the index range on
//!   which P is positive and strictly increasing.

use std::fmt;
use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Declarative description of a part sequence.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum SequenceSpec {
    Fibonacci,
    Plrs { coeffs: Vec<BigUint> },
    /// Coefficients in degree-descending order: a_s, …, a_1, a_0.
    Polynomial { coeffs: Vec<BigInt> },
}

impl SequenceSpec {
    /// Fibonacci spec.
    pub fn fibonacci() -> Self {
        SequenceSpec::Fibonacci
    }

    /// PLRS spec from small coefficients, validated.
    pub fn plrs(coeffs: &[u64]) -> Result<Self> {
        Self::plrs_big(coeffs.iter().map(|&c| BigUint::from(c)).collect())
    }

    /// PLRS spec from arbitrary-precision coefficients, validated.
    pub fn plrs_big(coeffs: Vec<BigUint>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::InvalidSpec("PLRS needs at least one coefficient".into()));
        }
        if coeffs[0].is_zero() {
            return Err(Error::InvalidSpec("PLRS requires c_1 > 0".into()));
        }
        if coeffs.last().unwrap().is_zero() {
            return Err(Error::InvalidSpec("PLRS requires c_L > 0".into()));
        }
        if coeffs.len() == 1 && coeffs[0].is_one() {
            return Err(Error::InvalidSpec(
                "the depth-1 PLRS with c_1 = 1 is the constant all-ones sequence and is rejected"
                    .into(),
            ));
        }
        Ok(SequenceSpec::Plrs { coeffs })
    }

    /// Polynomial spec from small coefficients (degree-descending), validated.
    pub fn polynomial(coeffs: &[i64]) -> Result<Self> {
        Self::polynomial_big(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    /// Polynomial spec from arbitrary-precision coefficients, validated.
    pub fn polynomial_big(coeffs: Vec<BigInt>) -> Result<Self> {
        if coeffs.len() < 2 {
            return Err(Error::InvalidSpec(
                "polynomial must have degree at least 1 (constants are not sensible part sequences)"
                    .into(),
            ));
        }
        if coeffs[0].sign() != num_bigint::Sign::Plus {
            return Err(Error::InvalidSpec("polynomial leading coefficient must be positive".into()));
        }
        Ok(SequenceSpec::Polynomial { coeffs })
    }

    /// The monomial n^degree (the `k4`-style table shorthand).
    pub fn monomial(degree: u32) -> Result<Self> {
        if degree == 0 {
            return Err(Error::InvalidSpec("monomial degree must be at least 1".into()));
        }
        let mut coeffs = vec![BigInt::zero(); degree as usize + 1];
        coeffs[0] = BigInt::one();
        Self::polynomial_big(coeffs)
    }

    /// Smallest index at which windows of this spec may start: 2 for
    /// Fibonacci (F_2 = 1 is the first positive, distinct-valued start),
    /// 1 for PLRS, and the certified positive-and-increasing index for
    /// polynomials.
    pub fn min_index(&self) -> Result<u64> {
        match self {
            SequenceSpec::Fibonacci => Ok(2),
            SequenceSpec::Plrs { .. } => Ok(1),
            SequenceSpec::Polynomial { .. } => min_admissible_index(self),
        }
    }
}

impl fmt::Display for SequenceSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SequenceSpec::Fibonacci => f.write_str("fib"),
            SequenceSpec::Plrs { coeffs } => {
                f.write_str("plrs:")?;
                for (i, c) in coeffs.iter().enumerate() {
                    if i > 0 {
                        f.write_str(",")?;
                    }
                    write!(f, "{c}")?;
                }
                Ok(())
            }
            SequenceSpec::Polynomial { coeffs } => {
                f.write_str("poly:")?;
                for (i, c) in coeffs.iter().enumerate() {
                    if i > 0 {
                        f.write_str(",")?;
                    }
                    write!(f, "{c}")?;
                }
                Ok(())
            }
        }
    }
}

impl FromStr for SequenceSpec {
    type Err = Error;

    /// Parses the spec text grammar: `fib`, `plrs:c1,...,cL`, or
    /// `poly:a_s,...,a_0` (degree-descending integers). Errors carry the
    /// byte position of the offending token.
    fn from_str(s: &str) -> Result<Self> {
        if s == "fib" {
            return Ok(SequenceSpec::Fibonacci);
        }
        if let Some(rest) = s.strip_prefix("plrs:") {
            let mut coeffs = Vec::new();
            for (pos, tok) in split_with_positions(rest, 5) {
                let c: BigUint = tok.parse().map_err(|_| {
                    Error::InvalidSpec(format!(
                        "expected a non-negative integer coefficient at position {pos}, got {tok:?}"
                    ))
                })?;
                coeffs.push(c);
            }
            return SequenceSpec::plrs_big(coeffs);
        }
        if let Some(rest) = s.strip_prefix("poly:") {
            let mut coeffs = Vec::new();
            for (pos, tok) in split_with_positions(rest, 5) {
                let c: BigInt = tok.parse().map_err(|_| {
                    Error::InvalidSpec(format!(
                        "expected an integer coefficient at position {pos}, got {tok:?}"
                    ))
                })?;
                coeffs.push(c);
            }
            return SequenceSpec::polynomial_big(coeffs);
        }
        Err(Error::InvalidSpec(format!(
            "unrecognized spec {s:?} at position 0: expected `fib`, `plrs:...`, or `poly:...`"
        )))
    }
}

/// Comma-separated tokens of `rest`, each paired with its byte position in
/// the original spec string (`offset` = length of the stripped prefix).
fn split_with_positions(rest: &str, offset: usize) -> impl Iterator<Item = (usize, &str)> {
    let mut pos = offset;
    rest.split(',').map(move |tok| {
        let here = pos;
        pos += tok.len() + 1;
        (here, tok)
    })
}

/// A finite, validated window of sequence terms.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SequenceWindow {
    pub spec: SequenceSpec,
    pub start_index: u64,
    pub terms: Vec<BigUint>,
}

/// Exact terms H_{start}..H_{start+count-1} of the sequence.
///
/// For polynomials the start index must be admissible (see
/// [`min_admissible_index`]); every returned window is checked to be
/// strictly increasing and positive.
pub fn generate_terms(spec: &SequenceSpec, start_index: u64, count: u64) -> Result<SequenceWindow> {
    if start_index == 0 {
        return Err(Error::InadmissibleCut { cut: 0, min: spec.min_index()? });
    }
    let min = spec.min_index()?;
    if start_index < min {
        return Err(Error::InadmissibleCut { cut: start_index, min });
    }
    let terms: Vec<BigUint> = match spec {
        SequenceSpec::Fibonacci => {
            let mut out = Vec::with_capacity(count as usize);
            // a = F_{i-1}, b = F_i, starting at i = 1
            let (mut a, mut b) = (BigUint::zero(), BigUint::one());
            for i in 1..start_index + count {
                if i >= start_index {
                    out.push(b.clone());
                }
                let next = &a + &b;
                a = std::mem::replace(&mut b, next);
            }
            out
        }
        SequenceSpec::Plrs { coeffs } => {
            let need = (start_index + count - 1) as usize;
            let h = plrs_prefix(coeffs, need);
            h[(start_index - 1) as usize..].to_vec()
        }
        SequenceSpec::Polynomial { coeffs } => {
            let mut out = Vec::with_capacity(count as usize);
            for i in start_index..start_index + count {
                let v = eval_poly(coeffs, &BigInt::from(i));
                match v.to_biguint() {
                    Some(u) if !u.is_zero() => out.push(u),
                    _ => return Err(Error::NonIncreasingWindow { start: start_index }),
                }
            }
            out
        }
    };
    for pair in terms.windows(2) {
        if pair[1] <= pair[0] {
            return Err(Error::NonIncreasingWindow { start: start_index });
        }
    }
    Ok(SequenceWindow { spec: spec.clone(), start_index, terms })
}

/// H_1..H_n of a PLRS (both recurrence clauses of the definition).
fn plrs_prefix(coeffs: &[BigUint], n: usize) -> Vec<BigUint> {
    let depth = coeffs.len();
    let mut h: Vec<BigUint> = Vec::with_capacity(n);
    if n == 0 {
        return h;
    }
    h.push(BigUint::one());
    // initial segment: H_{n+1} = c_1 H_n + ... + c_n H_1 + 1 for 1 <= n < L
    for k in 1..depth.min(n) {
        let mut s = BigUint::one();
        for j in 0..k {
            s += &coeffs[j] * &h[k - 1 - j];
        }
        h.push(s);
    }
    // pure recurrence afterwards
    while h.len() < n {
        let k = h.len();
        let mut s = BigUint::zero();
        for j in 0..depth {
            s += &coeffs[j] * &h[k - 1 - j];
        }
        h.push(s);
    }
    h
}

/// Exact P(n) by Horner evaluation (degree-descending coefficients).
pub(crate) fn eval_poly(coeffs: &[BigInt], n: &BigInt) -> BigInt {
    let mut v = BigInt::zero();
    for c in coeffs {
        v = v * n + c;
    }
    v
}

/// Cauchy root bound for a polynomial given degree-descending coefficients:
/// all real roots lie in (-B, B) with B = 1 + max |a_i| / |a_lead|.
/// Returns the smallest integer ≥ B.
fn cauchy_bound_ceil(coeffs: &[BigInt]) -> u64 {
    debug_assert!(!coeffs[0].is_zero());
    let lead = coeffs[0].abs();
    let mut max = BigInt::zero();
    for c in &coeffs[1..] {
        let a = c.abs();
        if a > max {
            max = a;
        }
    }
    // ceil(max/lead) via (max + lead - 1) / lead
    let q = (&max + &lead - BigInt::one()) / &lead;
    let b = q + BigInt::one();
    u64::try_from(&b).unwrap_or(u64::MAX)
}

/// Derivative coefficients, degree-descending. Empty when P is constant.
fn derivative_coeffs(coeffs: &[BigInt]) -> Vec<BigInt> {
    let s = coeffs.len() - 1; // degree
    coeffs[..s]
        .iter()
        .enumerate()
        .map(|(idx, c)| c * BigInt::from((s - idx) as u64))
        .collect()
}

const SCAN_CAP: u64 = 1_000_000;

/// Smallest index i₀ such that P is ≥ 1 and strictly increasing on all
/// integers ≥ i₀.
///
/// Certificate: beyond the Cauchy root bound of P′ the derivative is
/// positive (its leading coefficient is), so P is strictly increasing
/// there; an exact integer scan locates the first admissible point and
/// walks it back down as far as the pointwise conditions keep holding.
pub fn min_admissible_index(spec: &SequenceSpec) -> Result<u64> {
    let coeffs = match spec {
        SequenceSpec::Polynomial { coeffs } => coeffs,
        SequenceSpec::Fibonacci => return Ok(2),
        SequenceSpec::Plrs { .. } => return Ok(1),
    };
    let deriv = derivative_coeffs(coeffs);
    // past this point P is certified strictly increasing
    let incr_from = if deriv.len() == 1 { 1 } else { cauchy_bound_ceil(&deriv) + 1 };
    let one = BigInt::one();
    let mut k = incr_from.max(1);
    let mut p_k = eval_poly(coeffs, &BigInt::from(k));
    while p_k < one {
        k += 1;
        if k - incr_from > SCAN_CAP {
            return Err(Error::InvalidSpec(
                "polynomial admissibility scan exceeded the iteration cap".into(),
            ));
        }
        p_k = eval_poly(coeffs, &BigInt::from(k));
    }
    // k is admissible; walk down while P(i) >= 1 and P(i+1) > P(i) pointwise
    let mut i0 = k;
    while i0 > 1 {
        let i = i0 - 1;
        let p_i = eval_poly(coeffs, &BigInt::from(i));
        let p_next = eval_poly(coeffs, &BigInt::from(i + 1));
        if p_i >= one && p_next > p_i {
            i0 = i;
        } else {
            break;
        }
    }
    Ok(i0)
}

/// Smallest n ≤ horizon with A_k > B_k for every k in [n, horizon], or
/// `None` if even the final index fails. Comparison starts at the larger
/// of the two specs' minimal indices; this is an empirical witness over
/// the horizon, not a proof beyond it.
pub fn outpacing_index(a: &SequenceSpec, b: &SequenceSpec, horizon: u64) -> Result<Option<u64>> {
    let start = a.min_index()?.max(b.min_index()?);
    if horizon < start {
        return Ok(None);
    }
    let count = horizon - start + 1;
    let wa = generate_terms(a, start, count)?;
    let wb = generate_terms(b, start, count)?;
    let mut first: Option<u64> = None;
    for (off, (ta, tb)) in wa.terms.iter().zip(&wb.terms).enumerate() {
        if ta > tb {
            first.get_or_insert(start + off as u64);
        } else {
            first = None;
        }
    }
    Ok(first)
}

/// F_k for k ≥ 0 (F_0 = 0, F_1 = F_2 = 1).
pub fn fibonacci_number(k: u64) -> BigUint {
    let (mut a, mut b) = (BigUint::zero(), BigUint::one());
    for _ in 0..k {
        let next = &a + &b;
        a = std::mem::replace(&mut b, next);
    }
    a
}

/// The smallest m such that F_k > P(k) for **all** k ≥ m, with an
/// analytical tail certificate.
///
/// The certificate: F_{k+1} ≥ (3/2)·F_k holds for every k ≥ 2 (equivalent
/// to F_{k-1} ≥ F_{k-2}, checked inductively on the scan range), while
/// 2·P(k+1) ≤ 3·P(k) holds beyond the Cauchy bound of
/// Q(k) = 3P(k) − 2P(k+1), whose leading coefficient is the (positive)
/// leading coefficient of P. P itself is positive beyond its own Cauchy
/// bound. Once F_K > P(K) > 0 with both ratio facts in force, F_k > P(k)
/// follows for all k ≥ K by induction, and an exhaustive exact scan of
/// [1, K] finds the last violation.
pub fn certified_fibonacci_threshold(spec: &SequenceSpec) -> Result<u64> {
    let coeffs = match spec {
        SequenceSpec::Polynomial { coeffs } => coeffs,
        _ => return Err(Error::InvalidSpec("threshold is defined for polynomial specs".into())),
    };
    // Q(k) = 3 P(k) - 2 P(k+1), degree-descending: expand P(k+1) by binomials.
    let q = three_p_minus_two_p_shift(coeffs);
    let k_q = cauchy_bound_ceil(&q) + 1;
    let k_p = cauchy_bound_ceil(coeffs) + 1;
    let mut k = k_q.max(k_p).max(2);

    // Advance until F_k > P(k); termination is guaranteed because the
    // Fibonacci ratio stays ≥ 3/2 while P's falls under it from k onward.
    let mut fk = fibonacci_number(k);
    let mut fk1 = fibonacci_number(k + 1);
    loop {
        let p = eval_poly(coeffs, &BigInt::from(k));
        if p.sign() != num_bigint::Sign::Plus || BigInt::from(fk.clone()) > p {
            break;
        }
        // inductive ratio fact used by the certificate, verified as we go:
        // F_{k+1} >= (3/2) F_k
        debug_assert!(BigUint::from(2u32) * &fk1 >= BigUint::from(3u32) * &fk);
        let next = &fk + &fk1;
        fk = std::mem::replace(&mut fk1, next);
        k += 1;
        if k > SCAN_CAP {
            return Err(Error::InvalidSpec("threshold scan exceeded the iteration cap".into()));
        }
    }

    // Exhaustive scan of [1, k] for the last violation F_j <= P(j).
    let mut last_violation = 0u64;
    let (mut a, mut b) = (BigUint::zero(), BigUint::one()); // F_0, F_1
    for j in 1..=k {
        let next = &a + &b;
        a = std::mem::replace(&mut b, next); // a = F_j
        let p = eval_poly(coeffs, &BigInt::from(j));
        if BigInt::from(a.clone()) <= p {
            last_violation = j;
        }
    }
    Ok(last_violation + 1)
}

/// Coefficients of Q(k) = 3·P(k) − 2·P(k+1), degree-descending.
fn three_p_minus_two_p_shift(coeffs: &[BigInt]) -> Vec<BigInt> {
    let s = coeffs.len() - 1;
    // P(k+1) = sum_j a_j (k+1)^{s-j}; expand into degree-descending coeffs.
    let mut shifted = vec![BigInt::zero(); s + 1];
    for (j, a) in coeffs.iter().enumerate() {
        let d = s - j; // this term is a * (k+1)^d
        let mut binom = BigInt::one();
        for t in 0..=d {
            // coefficient of k^{d-t} in (k+1)^d is C(d, t)
            shifted[s - (d - t)] += a * &binom;
            binom = binom * BigInt::from((d - t) as u64) / BigInt::from(t as u64 + 1);
        }
    }
    coeffs
        .iter()
        .zip(&shifted)
        .map(|(a, sh)| BigInt::from(3) * a - BigInt::from(2) * sh)
        .collect()
}
