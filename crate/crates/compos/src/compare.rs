//! Cross-sequence count-ratio classification and the report tables.
//!
//! For two restricted series with roots γ_num and γ_den, the counts obey
//! c(n) ~ K·γ^{−n−1}, so the ratio c_num(n)/c_den(n) grows like
//! (γ_den/γ_num)^n: it tends to zero when γ_num > γ_den, to +∞ when
//! γ_num < γ_den, and to a finite positive constant exactly when the roots
//! coincide. Equal roots are only ever certified structurally — two
//! exponent streams that satisfy linear recurrences and agree on a long
//! enough prefix agree forever — because no finite amount of interval
//! arithmetic can tell "equal" apart from "closer than the working
//! tolerance". A `FINITE_POSITIVE` verdict is therefore always the product
//! of an exact integer identity, never of numerics.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigUint;

use crate::dyadic::{Dyadic, Round};
use crate::error::{Error, Result};
use crate::root::{find_root, root_sequence, RootAnalysis};
use crate::series::{CertifiedValue, RestrictedSeries};
use crate::spec::{fibonacci_number, generate_terms, SequenceSpec};

/// Working precision for root quotients. Roots live in (0, 1) with error
/// bounds far above 2^-96, so quotient rounding never affects a verdict.
const RATIO_PRECISION: u32 = 96;

/// Tolerance ladder for [`classify_plrs_vs_fibonacci`], which exposes no
/// tolerance parameter: retry with sharper roots before conceding.
const LADDER: [f64; 3] = [1e-9, 1e-18, 1e-30];

/// Limit classification of a count ratio c_num(n)/c_den(n).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Verdict {
    /// The ratio tends to zero: the numerator's root is certifiably larger.
    Zero,
    /// The ratio tends to a finite positive constant: the exponent streams
    /// are identical, certified by an exact integer argument.
    FinitePositive,
    /// The ratio tends to +∞: the numerator's root is certifiably smaller.
    Infinite,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Zero => "ZERO",
            Verdict::FinitePositive => "FINITE_POSITIVE",
            Verdict::Infinite => "INFINITE",
        })
    }
}

/// Outcome of comparing two restricted series by their count asymptotics.
#[derive(Debug, Clone)]
pub struct RatioClassification {
    /// Series whose counts sit in the numerator.
    pub numerator: RestrictedSeries,
    /// Series whose counts sit in the denominator.
    pub denominator: RestrictedSeries,
    /// Limit classification of c_num(n)/c_den(n).
    pub verdict: Verdict,
    /// Point estimate of γ_den/γ_num, the n-th root of the count ratio.
    pub root_ratio: Dyadic,
    /// Certified lower bound on the distance of the true root ratio from 1,
    /// net of all root error bounds. Zero for identity verdicts and for the
    /// purely structural ZERO fallback, where no numerical margin exists.
    pub certified_margin: Dyadic,
}

/// Order of a linear recurrence with constant coefficients that every
/// exponent stream of this spec satisfies from position `order + 1` on:
/// Fibonacci tails obey the order-2 Fibonacci recurrence, PLRS tails their
/// depth-L recurrence, and a degree-s polynomial sequence is annihilated by
/// the (s+1)-st finite difference at every position.
fn recurrence_order(spec: &SequenceSpec) -> u64 {
    match spec {
        SequenceSpec::Fibonacci => 2,
        SequenceSpec::Plrs { coeffs } => coeffs.len() as u64,
        SequenceSpec::Polynomial { coeffs } => coeffs.len() as u64,
    }
}

/// Exact identity test for two exponent streams.
///
/// The difference of the streams is annihilated by the product of their
/// recurrences (order r_a + r_b) once both are past their seed segments, so
/// a difference that vanishes on a prefix covering the seeds plus one full
/// product order vanishes identically. The window below is a comfortable
/// over-estimate of that bound.
fn streams_identical(a: &RestrictedSeries, b: &RestrictedSeries) -> bool {
    let r = recurrence_order(a.spec()) + recurrence_order(b.spec());
    let window = 64.max(2 * r + 8) as usize;
    a.exponents().take(window).eq(b.exponents().take(window))
}

/// Directed enclosure of γ_den/γ_num plus the midpoint quotient.
fn ratio_enclosure(num: &RootAnalysis, den: &RootAnalysis) -> (Dyadic, Dyadic, Dyadic) {
    let lo = den
        .gamma_interval
        .lower
        .div(&num.gamma_interval.upper, RATIO_PRECISION, Round::Down);
    let hi = den
        .gamma_interval
        .upper
        .div(&num.gamma_interval.lower, RATIO_PRECISION, Round::Up);
    let point = den.gamma.div(&num.gamma, RATIO_PRECISION, Round::Down);
    (lo, hi, point)
}

/// Classification core, shared by the public entry points. Unlike
/// [`classify_ratio`] it accepts value-aligned series whose cut indices
/// differ (the PLRS classifier compares cut m against Fibonacci cut m+1).
fn classify_core(
    numerator: RestrictedSeries,
    denominator: RestrictedSeries,
    abs_tol: &Dyadic,
) -> Result<RatioClassification> {
    if streams_identical(&numerator, &denominator) {
        return Ok(RatioClassification {
            numerator,
            denominator,
            verdict: Verdict::FinitePositive,
            root_ratio: Dyadic::one(),
            certified_margin: Dyadic::zero(),
        });
    }
    let num = find_root(&numerator, abs_tol)?;
    let den = find_root(&denominator, abs_tol)?;
    let (lo, hi, point) = ratio_enclosure(&num, &den);
    let one = Dyadic::one();
    let (verdict, margin) = if lo > one {
        (Verdict::Infinite, lo.sub(&one, 64, Round::Down))
    } else if hi < one {
        (Verdict::Zero, one.sub(&hi, 64, Round::Down))
    } else {
        return Err(Error::Indeterminate { tol: format!("{:e}", abs_tol.to_f64()) });
    };
    Ok(RatioClassification {
        numerator,
        denominator,
        verdict,
        root_ratio: point,
        certified_margin: margin,
    })
}

/// Classifies the limit of c_num(n)/c_den(n) for two series sharing a cut
/// index.
///
/// `FINITE_POSITIVE` is returned exactly when the exponent streams are
/// provably identical. Otherwise both roots are isolated to `abs_tol` and
/// the verdict follows from a certified separation of γ_den/γ_num from 1;
/// if the enclosures still straddle 1 the comparison fails with
/// [`Error::Indeterminate`] rather than guessing a side.
///
/// # Panics
///
/// Panics if the series have different cut indices: count ratios are only
/// meaningful between sequences restricted at the same point.
pub fn classify_ratio(
    numerator: RestrictedSeries,
    denominator: RestrictedSeries,
    abs_tol: &Dyadic,
) -> Result<RatioClassification> {
    assert_eq!(
        numerator.cut_index(),
        denominator.cut_index(),
        "classify_ratio requires matching cut indices, got {} and {}",
        numerator.cut_index(),
        denominator.cut_index()
    );
    classify_core(numerator, denominator, abs_tol)
}

/// Compares a PLRS (or Fibonacci) family against the Fibonacci baseline at
/// cut index m ≥ 2.
///
/// The comparison is value-aligned: the PLRS stream H_m, H_{m+1}, … is set
/// against the Fibonacci stream renumbered to start 1, 2, 3, 5 — cut m+1 in
/// this crate's indexing — so that the depth-2 sequence with coefficients
/// (1, 1) is literally the same stream and classifies as FINITE_POSITIVE.
/// Every other admissible coefficient vector that dominates the Fibonacci
/// numbers termwise yields ZERO; the verdict is cross-checked numerically,
/// and when a sequence fails the termwise domination test (possible from
/// depth 3 on, e.g. coefficients 1, 0, 1) the numerical comparison alone
/// decides, which can legitimately produce INFINITE.
pub fn classify_plrs_vs_fibonacci(spec: &SequenceSpec, m: u64) -> Result<RatioClassification> {
    if m < 2 {
        return Err(Error::InadmissibleCut { cut: m, min: 2 });
    }
    let coeffs = match spec {
        SequenceSpec::Polynomial { .. } => {
            return Err(Error::InvalidSpec(
                "classify_plrs_vs_fibonacci compares PLRS-style sequences against Fibonacci; \
                 use classify_ratio for polynomial specs"
                    .into(),
            ))
        }
        SequenceSpec::Fibonacci => {
            let num = RestrictedSeries::new(SequenceSpec::Fibonacci, m)?;
            let den = RestrictedSeries::new(SequenceSpec::Fibonacci, m)?;
            return classify_core(num, den, &Dyadic::from_f64(LADDER[0]));
        }
        SequenceSpec::Plrs { coeffs } => coeffs,
    };

    let num = RestrictedSeries::new(spec.clone(), m)?;
    let den = RestrictedSeries::new(SequenceSpec::Fibonacci, m + 1)?;

    // Structural gate: the ZERO argument needs H_k ≥ F_{k+1} along the
    // whole stream. Check it on a window long enough that the recurrences
    // pin everything beyond, remembering whether the gap is ever strict.
    let window_len = 200.max(2 * coeffs.len() as u64 + 80);
    let h = generate_terms(spec, 1, window_len)?;
    let mut dominates = true;
    let mut strict = false;
    for (k, hk) in h.terms.iter().enumerate() {
        match hk.cmp(&fibonacci_number(k as u64 + 2)) {
            Ordering::Less => {
                dominates = false;
                break;
            }
            Ordering::Greater => strict = true,
            Ordering::Equal => {}
        }
    }

    let mut last = None;
    for t in LADDER {
        match classify_core(num.clone(), den.clone(), &Dyadic::from_f64(t)) {
            Err(Error::Indeterminate { tol }) => last = Some(Error::Indeterminate { tol }),
            other => return other,
        }
    }
    // The ladder could not separate the roots. When termwise domination
    // held with a strict step the roots are ordered anyway — S_H ≤ S_F
    // pointwise with strict inequality at the root — so ZERO is certain
    // even though no useful numerical margin exists (the streams may first
    // diverge at an enormous exponent).
    if dominates && strict {
        let tight = Dyadic::from_f64(LADDER[LADDER.len() - 1]);
        let na = find_root(&num, &tight)?;
        let da = find_root(&den, &tight)?;
        let (_, _, point) = ratio_enclosure(&na, &da);
        return Ok(RatioClassification {
            numerator: num,
            denominator: den,
            verdict: Verdict::Zero,
            root_ratio: point,
            certified_margin: Dyadic::zero(),
        });
    }
    Err(last.expect("tolerance ladder is non-empty"))
}

/// One row of a report table.
///
/// A row describes a single restricted series together with its certified
/// root; `companion_gamma` carries the Fibonacci root at the same cut when
/// the derived column is a cross-sequence ratio. Every real in a row comes
/// from an interval enclosure, and the paired `*_error` field bounds its
/// distance from the true quantity.
#[derive(Debug, Clone)]
pub struct TableRow {
    /// Cut index: parts below the m-th sequence value are forbidden.
    pub m: u64,
    /// Text form of the part-sequence spec, e.g. `fib` or `poly:1,0,0,0,0`.
    pub sequence_label: String,
    /// Smallest allowed part H_m.
    pub smallest_part: BigUint,
    /// Certified root γ_m of the series.
    pub gamma: Dyadic,
    /// Error bound for `gamma`.
    pub gamma_error: Dyadic,
    /// Fibonacci root α_m at the same cut, for ratio tables.
    pub companion_gamma: Option<Dyadic>,
    /// Error bound for `companion_gamma`.
    pub companion_error: Option<Dyadic>,
    /// Mean-summand slope 1/(γ_m·S′(γ_m)) for the Fibonacci table; root
    /// ratio α_m/γ_m for a polynomial table.
    pub derived_column: Dyadic,
    /// Error bound for `derived_column`.
    pub derived_error: Dyadic,
}

/// Upper bound on |value − true| when the true quantity lies in `cv` and
/// `value` does too.
fn deviation_bound(value: &Dyadic, cv: &CertifiedValue) -> Dyadic {
    let below = value.sub(&cv.lower, 64, Round::Up);
    let above = cv.upper.sub(value, 64, Round::Up);
    if below > above {
        below
    } else {
        above
    }
}

/// Rows m = m_from..=m_to of the Fibonacci table: smallest allowed part
/// F_m, root α_m, and the mean-summand slope 1/(α_m·S′_m(α_m)).
///
/// Requires 2 ≤ m_from ≤ m_to.
pub fn build_table_fibonacci(m_from: u64, m_to: u64, abs_tol: &Dyadic) -> Result<Vec<TableRow>> {
    if m_from < 2 {
        return Err(Error::InadmissibleCut { cut: m_from, min: 2 });
    }
    let analyses = root_sequence(&SequenceSpec::Fibonacci, m_from, m_to, abs_tol)?;
    let mut rows = Vec::with_capacity(analyses.len());
    for (i, a) in analyses.iter().enumerate() {
        let m = m_from + i as u64;
        rows.push(TableRow {
            m,
            sequence_label: SequenceSpec::Fibonacci.to_string(),
            smallest_part: fibonacci_number(m),
            gamma: a.gamma.clone(),
            gamma_error: a.gamma_error.clone(),
            companion_gamma: None,
            companion_error: None,
            derived_column: a.mean_slope.clone(),
            derived_error: deviation_bound(&a.mean_slope, &a.mean_slope_interval),
        });
    }
    Ok(rows)
}

/// Rows of the polynomial comparison table at the given cut indices: root
/// γ_m of the polynomial series, Fibonacci companion α_m at the same cut,
/// and their ratio α_m/γ_m.
///
/// Requires a polynomial spec; each cut must be admissible for the
/// polynomial and at least 2 for the Fibonacci companion.
pub fn build_table_polynomial(
    spec: &SequenceSpec,
    m_values: &[u64],
    abs_tol: &Dyadic,
) -> Result<Vec<TableRow>> {
    if !matches!(spec, SequenceSpec::Polynomial { .. }) {
        return Err(Error::InvalidSpec(format!(
            "build_table_polynomial needs a polynomial spec, got `{spec}`"
        )));
    }
    let mut rows = Vec::with_capacity(m_values.len());
    for &m in m_values {
        let series = RestrictedSeries::new(spec.clone(), m)?;
        let fib_series = RestrictedSeries::new(SequenceSpec::Fibonacci, m)?;
        let poly = find_root(&series, abs_tol)?;
        let fib = find_root(&fib_series, abs_tol)?;
        let (ratio_lo, ratio_hi, ratio) = ratio_enclosure(&poly, &fib);
        let enclosure = CertifiedValue { lower: ratio_lo, upper: ratio_hi };
        let ratio_error = deviation_bound(&ratio, &enclosure);
        rows.push(TableRow {
            m,
            sequence_label: spec.to_string(),
            smallest_part: generate_terms(spec, m, 1)?.terms[0].clone(),
            gamma: poly.gamma.clone(),
            gamma_error: poly.gamma_error.clone(),
            companion_gamma: Some(fib.gamma.clone()),
            companion_error: Some(fib.gamma_error.clone()),
            derived_column: ratio,
            derived_error: ratio_error,
        });
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::reference;
    use num_bigint::BigInt;

    fn tol(t: f64) -> Dyadic {
        Dyadic::from_f64(t)
    }

    fn fib(m: u64) -> RestrictedSeries {
        RestrictedSeries::new(SequenceSpec::Fibonacci, m).unwrap()
    }

    fn plrs(coeffs: &[u64], m: u64) -> RestrictedSeries {
        RestrictedSeries::new(SequenceSpec::plrs(coeffs).unwrap(), m).unwrap()
    }

    fn quartic(m: u64) -> RestrictedSeries {
        RestrictedSeries::new(SequenceSpec::monomial(4).unwrap(), m).unwrap()
    }

    /// |v − num/den| ≤ b_num/b_den, checked exactly.
    fn within(v: &Dyadic, num: i64, den: u64, b_num: i64, b_den: u64) -> bool {
        let lo_n = BigInt::from(num) * b_den - BigInt::from(b_num) * den;
        let hi_n = BigInt::from(num) * b_den + BigInt::from(b_num) * den;
        let d = BigInt::from(den) * b_den;
        v.cmp_rational(&lo_n, &d) != Ordering::Less
            && v.cmp_rational(&hi_n, &d) != Ordering::Greater
    }

    #[test]
    fn identity_is_finite_positive() {
        let c = classify_ratio(fib(5), fib(5), &tol(1e-9)).unwrap();
        assert_eq!(c.verdict, Verdict::FinitePositive);
        assert_eq!(c.verdict.to_string(), "FINITE_POSITIVE");
        assert_eq!(c.root_ratio, Dyadic::one());
        assert!(c.certified_margin.is_zero());

        // plrs:1,1 from cut 7 is the Fibonacci stream from cut 8; the
        // aligned classifier sees the identity without isolating any root.
        let c = classify_plrs_vs_fibonacci(&SequenceSpec::plrs(&[1, 1]).unwrap(), 7).unwrap();
        assert_eq!(c.verdict, Verdict::FinitePositive);
        assert_eq!(c.root_ratio, Dyadic::one());
    }

    #[test]
    fn strict_domination_gives_zero() {
        let c = classify_ratio(plrs(&[1, 1, 1], 3), fib(3), &tol(1e-9)).unwrap();
        assert_eq!(c.verdict, Verdict::Zero);
        assert_eq!(c.verdict.to_string(), "ZERO");
        // γ_fib(3)/γ_H(3) = 0.6855205/0.8520303
        assert!(within(&c.root_ratio, 8_045_729, 10_000_000, 10, 10_000_000));
        assert!(c.certified_margin.signum() > 0);
    }

    #[test]
    fn quartic_crossover_versus_fibonacci() {
        // Quartic parts win below the crossover (bigger root, ratio < 1,
        // counts vanish relative to Fibonacci) and lose above it.
        let c22 = classify_ratio(quartic(22), fib(22), &tol(1e-9)).unwrap();
        assert_eq!(c22.verdict, Verdict::Zero);
        assert!(within(&c22.root_ratio, 9_999_646, 10_000_000, 10, 10_000_000));

        let c31 = classify_ratio(quartic(31), fib(31), &tol(1e-9)).unwrap();
        assert_eq!(c31.verdict, Verdict::Infinite);
        assert_eq!(c31.verdict.to_string(), "INFINITE");
        assert!(within(&c31.root_ratio, 10_000_011, 10_000_000, 10, 10_000_000));
    }

    #[test]
    fn unresolvable_overlap_is_indeterminate() {
        // At tolerance 1/2 the refinement stops with brackets that touch
        // at 3/4, so neither side of 1 can be certified.
        let e = classify_ratio(plrs(&[1, 1, 1], 3), fib(3), &tol(0.5)).unwrap_err();
        assert_eq!(e.code(), "INDETERMINATE");
    }

    #[test]
    #[should_panic(expected = "matching cut indices")]
    fn mismatched_cuts_are_rejected() {
        let _ = classify_ratio(fib(2), fib(3), &tol(1e-9));
    }

    #[test]
    fn plrs_classifier_structural_family() {
        // Depth-1 and depth-2/3 coefficient vectors other than (1, 1) all
        // dominate the Fibonacci numbers termwise: count ratios vanish.
        for coeffs in [&[2u64][..], &[1, 2], &[2, 1], &[2, 2], &[1, 1, 1]] {
            let spec = SequenceSpec::plrs(coeffs).unwrap();
            for m in [2u64, 4] {
                let c = classify_plrs_vs_fibonacci(&spec, m).unwrap();
                assert_eq!(c.verdict, Verdict::Zero, "plrs {coeffs:?} at cut {m}");
                assert!(c.certified_margin.signum() > 0);
            }
        }
        let c = classify_plrs_vs_fibonacci(&SequenceSpec::fibonacci(), 6).unwrap();
        assert_eq!(c.verdict, Verdict::FinitePositive);
    }

    #[test]
    fn broken_domination_falls_back_to_numerics() {
        // H = 1, 2, 3, 4, 6, 9, … falls below the Fibonacci numbers from
        // the fourth term on, so the domination argument does not apply;
        // the numerical comparison shows the count ratio diverges.
        let spec = SequenceSpec::plrs(&[1, 0, 1]).unwrap();
        let c = classify_plrs_vs_fibonacci(&spec, 2).unwrap();
        assert_eq!(c.verdict, Verdict::Infinite);
        assert!(within(&c.root_ratio, 10_464_876, 10_000_000, 10, 10_000_000));
        assert!(c.certified_margin.signum() > 0);
    }

    #[test]
    fn plrs_classifier_guards() {
        let e = classify_plrs_vs_fibonacci(&SequenceSpec::plrs(&[2]).unwrap(), 1).unwrap_err();
        assert_eq!(e.code(), "INADMISSIBLE_CUT");
        let e = classify_plrs_vs_fibonacci(&SequenceSpec::monomial(2).unwrap(), 4).unwrap_err();
        assert_eq!(e.code(), "INVALID_SPEC");
    }

    #[test]
    fn fibonacci_table_matches_published_values() {
        let rows = build_table_fibonacci(2, 6, &tol(1e-9)).unwrap();
        assert_eq!(rows.len(), 5);
        for (row, printed) in rows.iter().zip(&reference::TABLE1) {
            assert_eq!(row.m, printed.m);
            assert_eq!(row.sequence_label, "fib");
            assert_eq!(row.smallest_part, BigUint::from(printed.f_m));
            assert!(reference::matches_printed(&row.gamma, printed.alpha, 10));
            let slope = if row.m == 2 {
                reference::TABLE1_SLOPE_M2_CORRECTED
            } else {
                printed.slope
            };
            assert!(reference::matches_printed(&row.derived_column, slope, 10));
            assert!(row.companion_gamma.is_none());
            assert!(row.gamma_error.signum() >= 0);
            assert!(within(&row.gamma_error, 0, 1, 1, 100_000_000));
            assert!(within(&row.derived_error, 0, 1, 1, 10_000_000));
        }
    }

    #[test]
    fn polynomial_table_recomputes_corrected_ratios() {
        let spec = SequenceSpec::monomial(4).unwrap();
        let rows = build_table_polynomial(&spec, &[4, 22], &tol(1e-9)).unwrap();
        assert_eq!(rows.len(), 2);

        let r4 = &rows[0];
        assert_eq!(r4.m, 4);
        assert_eq!(r4.sequence_label, "poly:1,0,0,0,0");
        assert_eq!(r4.smallest_part, BigUint::from(256u32));
        assert!(within(&r4.gamma, 9_980_687, 10_000_000, 10, 10_000_000));
        assert!(within(r4.companion_gamma.as_ref().unwrap(), 7_889_604, 10_000_000, 10, 10_000_000));
        assert!(within(&r4.derived_column, 7_904_871, 10_000_000, 10, 10_000_000));

        let r22 = &rows[1];
        assert!(within(&r22.derived_column, 9_999_646, 10_000_000, 10, 10_000_000));
        assert!(r22.companion_error.as_ref().unwrap().signum() >= 0);
    }

    #[test]
    fn table_builder_guards() {
        let t = tol(1e-9);
        assert_eq!(build_table_fibonacci(1, 5, &t).unwrap_err().code(), "INADMISSIBLE_CUT");
        assert_eq!(build_table_fibonacci(5, 3, &t).unwrap_err().code(), "OUT_OF_RANGE");
        assert_eq!(
            build_table_polynomial(&SequenceSpec::fibonacci(), &[4], &t).unwrap_err().code(),
            "INVALID_SPEC"
        );
        // The Fibonacci companion needs m ≥ 2 even though k² admits cut 1.
        assert_eq!(
            build_table_polynomial(&SequenceSpec::monomial(2).unwrap(), &[1], &t)
                .unwrap_err()
                .code(),
            "INADMISSIBLE_CUT"
        );
    }
}
