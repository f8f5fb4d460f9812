//! Certified isolation of the unique root γ ∈ (0, 1) of S(x) = 1.
//!
//! S is continuous and strictly increasing on (0, 1) with S(0⁺) = 0 and
//! S(x) → ∞ as x → 1⁻, so the root exists and is unique. The finder works
//! entirely from certified sign queries and interval arithmetic:
//!
//! 1. a probe ladder at x = 1 − 2^-k brackets the root;
//! 2. bisection shrinks the bracket, switching to an interval Newton step
//!    (quotient by a derivative enclosure, intersected with the bracket)
//!    once the bracket is narrow enough for Newton to contract;
//! 3. when a sign query cannot decide — the probe sits within the noise
//!    floor of S(x) = 1, e.g. exactly on a dyadic root — the point is
//!    certified directly by side queries at a distance calibrated to the
//!    local derivative.
//!
//! The final bracket [a, b] satisfies b − a ≤ tol and (b − a)·sup S′ ≤ 8·tol,
//! so the returned midpoint carries |S(γ) − 1| ≤ 4·tol, comfortably inside
//! the documented 10·tol residual guarantee. Precision escalates by doubling
//! when queries stall, up to a configurable cap.

use std::cmp::Ordering;

use crate::dyadic::{Dyadic, Interval, Round};
use crate::error::{Error, Result};
use crate::series::{
    certified_cmp_one, evaluate_series_derivative_with_cap, evaluate_series_with_cap,
    precision_for, CertifiedValue, RestrictedSeries, DEFAULT_PRECISION_CAP,
};
use crate::spec::SequenceSpec;

/// Defensive iteration bound for one refinement pass; tolerances down to
/// ~1e-300 use well under a thousand steps.
const MAX_REFINE_ITERS: u32 = 10_000;

/// Probe ladder bound. Roots satisfy 1 − γ ≳ ln(H_min)/(2·H_min), so any
/// sequence whose smallest part fits in this many bits brackets far sooner.
const MAX_PROBES: i64 = 100_000;

/// Everything the root certification produces: the root, the derivative
/// there, and the two asymptotic constants, each as a point value with a
/// certified enclosure. The count of compositions of n grows like
/// `count_constant · γ^{−n−1}` and the mean number of summands like
/// `mean_slope · n`.
#[derive(Debug, Clone)]
pub struct RootAnalysis {
    pub series: RestrictedSeries,
    /// Midpoint of the final bracket (exact dyadic).
    pub gamma: Dyadic,
    /// Certified bound on |gamma − γ_true|; at most the requested tolerance.
    pub gamma_error: Dyadic,
    /// S′(gamma) point estimate (midpoint of `derivative_interval`).
    pub derivative_at_root: Dyadic,
    /// 1 / derivative_at_root, the leading coefficient of the count.
    pub count_constant: Dyadic,
    /// count_constant / gamma, the slope of the mean number of summands.
    /// Derived from the two fields above by one directed division at
    /// `precision_bits`, never computed independently.
    pub mean_slope: Dyadic,
    pub gamma_interval: CertifiedValue,
    pub derivative_interval: CertifiedValue,
    pub count_constant_interval: CertifiedValue,
    pub mean_slope_interval: CertifiedValue,
    /// Working mantissa precision the accepted pass ran at.
    pub precision_bits: u32,
}

impl RootAnalysis {
    pub fn gamma_f64(&self) -> f64 {
        self.gamma.to_f64()
    }

    pub fn derivative_f64(&self) -> f64 {
        self.derivative_at_root.to_f64()
    }

    pub fn count_constant_f64(&self) -> f64 {
        self.count_constant.to_f64()
    }

    pub fn mean_slope_f64(&self) -> f64 {
        self.mean_slope.to_f64()
    }
}

/// Isolate the root of S(x) = 1 to within `abs_tol`, escalating working
/// precision up to the default 512-bit cap.
///
/// Panics if `abs_tol` is outside (0, 1).
pub fn find_root(series: &RestrictedSeries, abs_tol: &Dyadic) -> Result<RootAnalysis> {
    find_root_with_cap(series, abs_tol, DEFAULT_PRECISION_CAP)
}

/// [`find_root`] with an explicit precision ceiling in mantissa bits.
pub fn find_root_with_cap(
    series: &RestrictedSeries,
    abs_tol: &Dyadic,
    cap_bits: u32,
) -> Result<RootAnalysis> {
    assert!(
        abs_tol.signum() > 0 && *abs_tol < Dyadic::one(),
        "abs_tol must lie in (0, 1)"
    );
    let mut prec = precision_for(abs_tol, cap_bits);
    loop {
        if let Some(analysis) = attempt_root(series, abs_tol, prec, cap_bits)? {
            return Ok(analysis);
        }
        if prec >= cap_bits {
            return Err(Error::PrecisionExhausted {
                cap_bits,
                context: format!("isolating the root of {series}"),
            });
        }
        prec = (prec * 2).min(cap_bits);
    }
}

/// Roots for every cut index in `m_from..=m_to`, in order. The sequence is
/// checked to be strictly increasing (it must be: dropping the smallest
/// part shrinks S pointwise); a violation means the tolerance was too loose
/// to separate adjacent roots and surfaces as INDETERMINATE.
pub fn root_sequence(
    spec: &SequenceSpec,
    m_from: u64,
    m_to: u64,
    abs_tol: &Dyadic,
) -> Result<Vec<RootAnalysis>> {
    if m_from > m_to {
        return Err(Error::OutOfRange { what: "m_from", got: m_from, limit: m_to });
    }
    let mut out: Vec<RootAnalysis> = Vec::with_capacity((m_to - m_from + 1) as usize);
    for m in m_from..=m_to {
        let series = RestrictedSeries::new(spec.clone(), m)?;
        let analysis = find_root(&series, abs_tol)?;
        if let Some(prev) = out.last() {
            if prev.gamma >= analysis.gamma {
                return Err(Error::Indeterminate { tol: format!("{:e}", abs_tol.to_f64()) });
            }
        }
        out.push(analysis);
    }
    Ok(out)
}

/// Outcome of a certified sign query at one point.
enum SignOr {
    /// S(x) − 1 has this certified sign.
    Sign(Ordering),
    /// x is so close to the root that a bracket of width ≤ tol with
    /// (width)·(sup S′) ≤ 5·tol was certified around it directly.
    TinyBracket(Dyadic, Dyadic),
    /// Undecidable at this precision.
    Unknown,
}

/// One full refinement pass at fixed precision. `Ok(None)` requests more
/// precision.
fn attempt_root(
    series: &RestrictedSeries,
    tol: &Dyadic,
    prec: u32,
    cap: u32,
) -> Result<Option<RootAnalysis>> {
    let floor_tol = tol.scale2(-4);
    let (mut a, mut b, tiny) = match probe_bracket(series, tol, &floor_tol, prec, cap)? {
        Some(t) => t,
        None => return Ok(None),
    };

    if !tiny {
        let one = Dyadic::one();
        let newton_width = Dyadic::two_pow(-8);
        let eight_tol = tol.scale2(3);
        let coarse = coarse_derivative_tol(tol);
        let mut iters = 0u32;
        loop {
            iters += 1;
            if iters > MAX_REFINE_ITERS {
                return Ok(None);
            }
            let w = b.sub(&a, prec, Round::Up);
            let mut cur_d: Option<Interval> = None;
            if w <= *tol {
                let d = derivative_bracket(series, &a, &b, &coarse, cap)?;
                if w.mul(&d.hi, prec, Round::Up) <= eight_tol {
                    break;
                }
                cur_d = Some(d);
            }
            if w <= newton_width {
                let d = match cur_d {
                    Some(d) => d,
                    None => derivative_bracket(series, &a, &b, &coarse, cap)?,
                };
                if d.lo.signum() > 0 {
                    // Interval Newton: the root lies in x0 − (S(x0)−1)/D for
                    // any enclosure D of S′ over [a, b].
                    let x0 = a.add_exact(&b).half();
                    let wt = if w < *tol { &w } else { tol };
                    let tf = wt.mul(&d.lo, prec, Round::Down).scale2(-5);
                    if tf.signum() > 0 {
                        let f = evaluate_series_with_cap(series, &x0, &tf, cap)?;
                        let n_iv = Interval::new(
                            f.lower.sub(&one, prec, Round::Down),
                            f.upper.sub(&one, prec, Round::Up),
                        );
                        let q = n_iv.div(&d, prec);
                        let cand = Interval::point(x0).sub(&q, prec);
                        match cand.intersect(&Interval::new(a.clone(), b.clone())) {
                            None => return Ok(None),
                            Some(x2) => {
                                if x2.width(prec) <= w.half() {
                                    a = x2.lo;
                                    b = x2.hi;
                                    continue;
                                }
                            }
                        }
                    }
                }
            }
            let mid = a.add_exact(&b).half();
            debug_assert!(a < mid && mid < b);
            match sign_or_bracket(series, &mid, tol, &floor_tol, prec, cap)? {
                SignOr::Sign(Ordering::Less) => a = mid,
                SignOr::Sign(Ordering::Greater) => b = mid,
                SignOr::Sign(Ordering::Equal) => unreachable!("sign queries never return Equal"),
                SignOr::TinyBracket(u, v) => {
                    // both brackets contain the root, so they intersect
                    if u > a {
                        a = u;
                    }
                    if v < b {
                        b = v;
                    }
                    assert!(a <= b, "certified brackets must intersect");
                    break;
                }
                SignOr::Unknown => return Ok(None),
            }
        }
    }

    finalize(series, a, b, tol, prec, cap)
}

/// Bracket the root with probes at 1 − 2^-k. Returns (a, b, certified_tiny).
fn probe_bracket(
    series: &RestrictedSeries,
    tol: &Dyadic,
    floor_tol: &Dyadic,
    prec: u32,
    cap: u32,
) -> Result<Option<(Dyadic, Dyadic, bool)>> {
    let one = Dyadic::one();
    let mut below: Option<Dyadic> = None;
    for k in 1..=MAX_PROBES {
        let x = one.sub_exact(&Dyadic::two_pow(-k));
        match sign_or_bracket(series, &x, tol, floor_tol, prec, cap)? {
            SignOr::Sign(Ordering::Less) => below = Some(x),
            SignOr::Sign(Ordering::Greater) => {
                if let Some(a) = below {
                    return Ok(Some((a, x, false)));
                }
                // S(1/2) > 1 cannot happen for integer part sets (S(x) ≤
                // x/(1−x) pins γ ≥ 1/2), but descend defensively.
                return descend_below_half(series, x, tol, floor_tol, prec, cap);
            }
            SignOr::Sign(Ordering::Equal) => unreachable!("sign queries never return Equal"),
            SignOr::TinyBracket(u, v) => return Ok(Some((u, v, true))),
            SignOr::Unknown => return Ok(None),
        }
    }
    Ok(None)
}

fn descend_below_half(
    series: &RestrictedSeries,
    mut hi: Dyadic,
    tol: &Dyadic,
    floor_tol: &Dyadic,
    prec: u32,
    cap: u32,
) -> Result<Option<(Dyadic, Dyadic, bool)>> {
    for j in 2..=MAX_PROBES {
        let y = Dyadic::two_pow(-j);
        match sign_or_bracket(series, &y, tol, floor_tol, prec, cap)? {
            SignOr::Sign(Ordering::Less) => return Ok(Some((y, hi, false))),
            SignOr::Sign(Ordering::Greater) => hi = y,
            SignOr::Sign(Ordering::Equal) => unreachable!("sign queries never return Equal"),
            SignOr::TinyBracket(u, v) => return Ok(Some((u, v, true))),
            SignOr::Unknown => return Ok(None),
        }
    }
    Ok(None)
}

/// Certified sign of S(x) − 1, or a direct tiny bracket when x sits inside
/// the sign-query noise floor (which only happens within ~tol/8 of the
/// root, so the local derivative is the one at the root).
fn sign_or_bracket(
    series: &RestrictedSeries,
    x: &Dyadic,
    tol: &Dyadic,
    floor_tol: &Dyadic,
    prec: u32,
    cap: u32,
) -> Result<SignOr> {
    if let Some(ord) = certified_cmp_one(series, x, prec, floor_tol)? {
        return Ok(SignOr::Sign(ord));
    }
    let one = Dyadic::one();
    // Upper-bound S′ on a neighbourhood reaching past x by up to tol
    // (S′ is increasing, so evaluating at the right edge suffices).
    let mut x_hi = x.add(tol, prec, Round::Up);
    let ceil = one.add_exact(x).half();
    if x_hi >= ceil {
        x_hi = ceil;
    }
    let d_up =
        evaluate_series_derivative_with_cap(series, &x_hi, &coarse_derivative_tol(tol), cap)?
            .upper;
    if d_up.signum() <= 0 {
        return Ok(SignOr::Unknown);
    }
    // eps = min(tol/2, 2·tol/d_up, (x_hi−x)/2, x/2) keeps the side probes
    // inside the region d_up covers and the bracket quality within spec.
    let mut eps = tol.half();
    let q = tol.scale2(1).div(&d_up, prec, Round::Down);
    if q < eps {
        eps = q;
    }
    let gap2 = x_hi.sub(x, prec, Round::Down).half();
    if gap2 < eps {
        eps = gap2;
    }
    let xh = x.half();
    if xh < eps {
        eps = xh;
    }
    if eps.signum() <= 0 {
        return Ok(SignOr::Unknown);
    }
    let xm = x.sub(&eps, prec, Round::Down);
    let xp = x.add(&eps, prec, Round::Up);
    debug_assert!(xm.signum() > 0 && xp < one);
    let qm = certified_cmp_one(series, &xm, prec, floor_tol)?;
    let qp = certified_cmp_one(series, &xp, prec, floor_tol)?;
    Ok(match (qm, qp) {
        (Some(Ordering::Less), Some(Ordering::Greater)) => SignOr::TinyBracket(xm, xp),
        // Monotonicity lifts a decided side probe back to x itself.
        (Some(Ordering::Greater), _) => SignOr::Sign(Ordering::Greater),
        (_, Some(Ordering::Less)) => SignOr::Sign(Ordering::Less),
        _ => SignOr::Unknown,
    })
}

/// Tolerance for derivative enclosures that only steer step sizes and stop
/// checks: 2^-24 absolute, or tighter when the caller's tolerance is.
fn coarse_derivative_tol(tol: &Dyadic) -> Dyadic {
    let c = Dyadic::two_pow(-24);
    if *tol < c {
        tol.clone()
    } else {
        c
    }
}

/// [S′(a) lower, S′(b) upper] encloses S′ on all of [a, b] because S′ is
/// increasing there (S″ ≥ 0 on (0, 1)).
fn derivative_bracket(
    series: &RestrictedSeries,
    a: &Dyadic,
    b: &Dyadic,
    d_tol: &Dyadic,
    cap: u32,
) -> Result<Interval> {
    let lo = evaluate_series_derivative_with_cap(series, a, d_tol, cap)?.lower;
    let hi = evaluate_series_derivative_with_cap(series, b, d_tol, cap)?.upper;
    Ok(Interval::new(lo, hi))
}

fn finalize(
    series: &RestrictedSeries,
    a: Dyadic,
    b: Dyadic,
    tol: &Dyadic,
    prec: u32,
    cap: u32,
) -> Result<Option<RootAnalysis>> {
    let one = Dyadic::one();
    let d_out = derivative_bracket(series, &a, &b, &coarse_derivative_tol(tol), cap)?;
    if d_out.lo.signum() <= 0 {
        // S′(γ) ≥ 1/γ > 1, so a nonpositive lower bound is pure noise.
        return Ok(None);
    }
    let gamma = a.add_exact(&b).half();
    let gamma_error = b.sub_exact(&a).half().round(64, Round::Up);
    let derivative_at_root = d_out.lo.add_exact(&d_out.hi).half();
    let count_constant = one.div(&derivative_at_root, prec, Round::Down);
    let mean_slope = count_constant.div(&gamma, prec, Round::Down);

    let cc_iv = d_out.recip(prec);
    let ms_iv = Interval::new(a.clone(), b.clone()).mul(&d_out, prec).recip(prec);
    Ok(Some(RootAnalysis {
        series: series.clone(),
        gamma,
        gamma_error,
        derivative_at_root,
        count_constant,
        mean_slope,
        gamma_interval: CertifiedValue { lower: a, upper: b },
        derivative_interval: CertifiedValue { lower: d_out.lo, upper: d_out.hi },
        count_constant_interval: CertifiedValue { lower: cc_iv.lo, upper: cc_iv.hi },
        mean_slope_interval: CertifiedValue { lower: ms_iv.lo, upper: ms_iv.hi },
        precision_bits: prec,
    }))
}
