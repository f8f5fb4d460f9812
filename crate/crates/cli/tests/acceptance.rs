//! Acceptance suite: one test per release criterion, each printing a
//! single `criterion NN <name>: pass/FAIL` line (visible with
//! `--nocapture` and in failure output).
//!
//! Where the published tables are internally inconsistent (the Table 1
//! m=2 slope digit slip, the systematically corrupted Table 2), the
//! criteria pin the values implied by the paper's own definitions and
//! additionally *prove* the misprint mechanism from the embedded printed
//! cells. See the errata notes in `compos::reference`.

use std::panic::{catch_unwind, resume_unwind, AssertUnwindSafe};
use std::time::Instant;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, ToPrimitive, Zero};

use compos::reference::{
    matches_printed, printed_units, TABLE1, TABLE1_SLOPE_M2_CORRECTED, TABLE2, TABLE2_FLAGGED,
};
use compos::{
    asymptotic_residual, brute_force_count, build_count_table, build_table_fibonacci,
    build_table_polynomial, certified_fibonacci_threshold, classify_plrs_vs_fibonacci,
    classify_ratio, fibonacci_number, find_root, outpacing_index, root_sequence, CountTable,
    Dyadic, RestrictedSeries, RootAnalysis, Round, SequenceSpec, Verdict,
};

fn criterion(id: u32, name: &str, body: impl FnOnce()) {
    let outcome = catch_unwind(AssertUnwindSafe(body));
    match &outcome {
        Ok(()) => println!("criterion {id:02} {name}: pass"),
        Err(_) => println!("criterion {id:02} {name}: FAIL"),
    }
    if let Err(cause) = outcome {
        resume_unwind(cause);
    }
}

/// 1e-9, the tolerance the table comparisons run at.
fn tol9() -> Dyadic {
    Dyadic::from_ratio(&BigInt::one(), &BigInt::from(1_000_000_000u64), 64, Round::Down)
}

fn series(spec: SequenceSpec, m: u64) -> RestrictedSeries {
    RestrictedSeries::new(spec, m).unwrap()
}

fn fib_root(m: u64) -> RootAnalysis {
    find_root(&series(SequenceSpec::fibonacci(), m), &tol9()).unwrap()
}

fn count_f64(table: &CountTable, n: u64) -> f64 {
    table.count(n).to_f64().expect("count fits in f64 range")
}

// --- criterion 1 -----------------------------------------------------------

#[test]
fn a01_table1_reproduction() {
    criterion(1, "table-1-reproduction", || {
        let started = Instant::now();
        let rows = build_table_fibonacci(2, 20, &tol9()).unwrap();
        let elapsed = started.elapsed();
        assert_eq!(rows.len(), 19);
        for (row, published) in rows.iter().zip(&TABLE1) {
            assert_eq!(row.m, published.m);
            assert_eq!(row.smallest_part, BigUint::from(published.f_m));
            assert!(
                matches_printed(&row.gamma, published.alpha, 10),
                "alpha deviates at m={}",
                row.m
            );
            // The m=2 slope cell is the documented digit slip: the
            // recomputed value matches the erratum, not the printed cell.
            let slope_cell =
                if published.m == 2 { TABLE1_SLOPE_M2_CORRECTED } else { published.slope };
            assert!(
                matches_printed(&row.derived_column, slope_cell, 10),
                "slope deviates at m={}",
                row.m
            );
        }
        assert!(!matches_printed(&rows[0].derived_column, TABLE1[0].slope, 10));
        assert!(elapsed.as_secs_f64() < 10.0, "table build took {elapsed:?}");
    });
}

// --- criterion 2 -----------------------------------------------------------

#[test]
fn a02_theorem_3_1_constants() {
    criterion(2, "theorem-3.1-constants", || {
        let a = fib_root(2);
        assert!(matches_printed(&a.gamma, "0.5276126", 10));
        assert!(matches_printed(&a.derivative_at_root, "3.3749752", 10));
        // The paper's own alpha and S' force 0.5615834; its table prints
        // 0.5615856. Assert the implied value and the inconsistency.
        assert!(matches_printed(&a.mean_slope, TABLE1_SLOPE_M2_CORRECTED, 10));
        assert!(!matches_printed(&a.mean_slope, "0.5615856", 10));
    });
}

// --- criterion 3 -----------------------------------------------------------

#[test]
fn a03_example_3_5_constants() {
    criterion(3, "example-3.5-constants", || {
        let a = fib_root(3);
        assert!(matches_printed(&a.gamma, "0.6855205", 10));
        assert!(matches_printed(&a.derivative_at_root, "4.6054074", 10));
        assert!(matches_printed(&a.mean_slope, "0.3167463", 10));
    });
}

// --- criterion 4 -----------------------------------------------------------

/// Unique root in (0, 1) of x^N = 1 - x, certified bisection. This is the
/// *wrong* equation for the sparse series — it is exactly the truncation
/// the published gamma column turns out to solve.
fn truncation_root(big_n: &BigUint) -> Dyadic {
    let prec = 192;
    let one = Dyadic::one();
    let mut lo = Dyadic::one().half();
    let mut hi = one.sub_exact(&Dyadic::two_pow(-20));
    for _ in 0..40 {
        let mid = lo.add(&hi, prec, Round::Down).half();
        // f(x) = x^N + x - 1 is strictly increasing on (0, 1)
        let f_lo = mid.pow_frac(big_n, prec, Round::Down, -400).add_exact(&mid).sub_exact(&one);
        if f_lo.signum() >= 0 {
            hi = mid;
            continue;
        }
        let f_hi = mid.pow_frac(big_n, prec, Round::Up, -400).add_exact(&mid).sub_exact(&one);
        assert!(f_hi.signum() <= 0, "ambiguous sign in truncation bisection");
        lo = mid;
    }
    lo.add(&hi, prec, Round::Down).half()
}

#[test]
fn a04_table2_ratio_columns() {
    criterion(4, "table-2-ratio-columns", || {
        let k4 = SequenceSpec::monomial(4).unwrap();
        let rows = build_table_polynomial(&k4, &[4, 13, 22, 31], &tol9()).unwrap();
        let by_m = |m: u64| rows.iter().find(|r| r.m == m).unwrap();

        // Recomputed ratio column. The spec pins 1.0000273 / 1.0000120 at
        // m = 22 / 31, but those are quotients of two corrupted columns;
        // the series' own roots give these values instead, and the
        // ZERO -> INFINITE crossing sits between 22 and 31.
        assert!(matches_printed(&by_m(4).derived_column, "0.7904871", 10));
        assert!(matches_printed(&by_m(22).derived_column, "0.9999646", 20));
        assert!(matches_printed(&by_m(31).derived_column, "1.0000011", 20));
        assert!(!matches_printed(&by_m(22).derived_column, "1.0000273", 20));
        assert!(!matches_printed(&by_m(31).derived_column, "1.0000120", 20));
        assert!(by_m(13).derived_column < Dyadic::one());
        assert!(by_m(22).derived_column < Dyadic::one());
        assert!(by_m(31).derived_column > Dyadic::one());

        // Recomputed gamma column (the spec's 0.9839813 example for m=4
        // solves the truncated equation below, not the series).
        assert!(matches_printed(&by_m(4).gamma, "0.9980687", 10));
        assert!(!matches_printed(&by_m(4).gamma, "0.9839813", 10));

        // The tool flags exactly the rows whose printed cells deviate.
        let mut flagged = Vec::new();
        for published in &TABLE2 {
            let spec = SequenceSpec::monomial(published.degree).unwrap();
            let alpha = fib_root(published.m);
            let gamma = find_root(&series(spec, published.m), &tol9()).unwrap();
            let ratio = alpha.gamma.div(&gamma.gamma, 96, Round::Down);
            if !matches_printed(&alpha.gamma, published.alpha, 10)
                || !matches_printed(&gamma.gamma, published.gamma, 10)
                || !matches_printed(&ratio, published.ratio, 10)
            {
                flagged.push((published.m, published.degree));
            }
        }
        assert_eq!(flagged, TABLE2_FLAGGED);

        let check = std::process::Command::new(env!("CARGO_BIN_EXE_compos"))
            .args(["table", "poly", "k4", "4,13,22,31", "--check-paper"])
            .output()
            .unwrap();
        let text = String::from_utf8(check.stdout).unwrap();
        assert!(text.contains("table2 check: 4 rows, 4 flagged"));

        // Forensics (i): the printed alpha column is alpha_{m+2}. For
        // m = 4 and 13 the shifted values literally appear in Table 1 at
        // m = 6 and 15; for m = 22 and 31 recompute the shifted roots.
        assert_eq!(printed_units(TABLE2[0].alpha), printed_units(TABLE1[4].alpha));
        assert_eq!(printed_units(TABLE2[1].alpha), printed_units(TABLE1[13].alpha));
        assert!(matches_printed(&fib_root(24).gamma, TABLE2[2].alpha, 10));
        assert!(matches_printed(&fib_root(33).gamma, TABLE2[3].alpha, 10));

        // Forensics (ii): the printed gamma column solves x^{m^d} = 1 - x.
        for published in TABLE2.iter().filter(|r| r.degree == 4) {
            let big_n = BigUint::from(published.m).pow(4);
            assert!(
                matches_printed(&truncation_root(&big_n), published.gamma, 2),
                "truncation diagnosis fails at m={}",
                published.m
            );
        }

        // Forensics (iii): on every flagged row the printed ratio is
        // exactly the quotient of the two corrupted columns. (Off the
        // flagged set everything prints as 1.0000000 give or take a unit,
        // and the d=9 m=31 ratio is not even its own cells' quotient.)
        for published in TABLE2
            .iter()
            .filter(|r| TABLE2_FLAGGED.contains(&(r.m, r.degree)))
        {
            let a = i128::from(printed_units(published.alpha));
            let g = i128::from(printed_units(published.gamma));
            let q = (a * 10_000_000 + g / 2) / g;
            assert!(
                (q - i128::from(printed_units(published.ratio))).abs() <= 1,
                "printed ratio is not alpha/gamma at m={} d={}",
                published.m,
                published.degree
            );
        }
    });
}

// --- criterion 5 -----------------------------------------------------------

#[test]
fn a05_oracle_equivalence() {
    criterion(5, "oracle-equivalence", || {
        let started = Instant::now();
        let cases: Vec<RestrictedSeries> = vec![
            series(SequenceSpec::fibonacci(), 2),
            series(SequenceSpec::fibonacci(), 3),
            series(SequenceSpec::fibonacci(), 4),
            series(SequenceSpec::plrs(&[1, 1, 1]).unwrap(), 1),
            series(SequenceSpec::plrs(&[1, 1, 1]).unwrap(), 2),
            series(SequenceSpec::monomial(2).unwrap(), 2),
        ];
        for s in &cases {
            let table = build_count_table(s, 25).unwrap();
            for n in 0..=25 {
                let direct = brute_force_count(s, n).unwrap();
                assert_eq!(table.count(n), &direct, "{s} disagrees at n={n}");
            }
        }
        let elapsed = started.elapsed();
        assert!(elapsed.as_secs_f64() < 60.0, "oracle equivalence took {elapsed:?}");
    });
}

// --- criterion 6 -----------------------------------------------------------

#[test]
fn a06_asymptotic_residual() {
    criterion(6, "asymptotic-residual", || {
        // The residual floor is (n+1)·(root error)/gamma, which *grows*
        // with n; observing the decay from n=100 to n=1000 needs a root
        // far tighter than the default. 1e-80 also exercises precision
        // escalation well past the 80-bit starting point.
        let tol80 = Dyadic::from_ratio(&BigInt::one(), &BigInt::from(10u32).pow(80), 320, Round::Down);
        let median = |mut v: Vec<f64>| -> f64 {
            v.sort_by(|a, b| a.partial_cmp(b).unwrap());
            v[v.len() / 2]
        };
        // bounds frozen from the measured convergence rates
        for (m, bound_100) in [(2u64, 1e-20), (3, 1e-8)] {
            let s = series(SequenceSpec::fibonacci(), m);
            let analysis = find_root(&s, &tol80).unwrap();
            let table = build_count_table(&s, 1000).unwrap();
            let res = |n: u64| asymptotic_residual(&table, &analysis, n).unwrap().abs();
            let (r100, r1000) = (res(100), res(1000));
            assert!(r1000 < r100, "m={m}: residual grew: {r100:e} -> {r1000:e}");
            assert!(r1000 < 0.05, "m={m}: spec's provisional bound");
            assert!(r1000 < 1e-40, "m={m}: frozen bound, got {r1000:e}");
            assert!(r100 < bound_100, "m={m}: frozen bound, got {r100:e}");
            // the leading-order formula is decent almost immediately
            assert!(res(5) < 1.0);
            let early = median((200..=400).step_by(50).map(res).collect());
            let late = median((800..=1000).step_by(50).map(res).collect());
            assert!(late < early, "m={m}: medians {early:e} -> {late:e}");
        }
    });
}

// --- criterion 7 -----------------------------------------------------------

#[test]
fn a07_mean_summand_convergence() {
    criterion(7, "mean-summand-convergence", || {
        let table = build_count_table(&series(SequenceSpec::fibonacci(), 2), 1000).unwrap();
        let dev = |n: u64| {
            let w = table.summand_total(n).to_f64().unwrap();
            (w / (n as f64 * count_f64(&table, n)) - 0.5615856).abs()
        };
        assert!(dev(1000) < 1e-2);
        assert!(dev(1000) < dev(100));
    });
}

// --- criterion 8 -----------------------------------------------------------

#[test]
fn a08_ones_density() {
    criterion(8, "ones-density", || {
        let table = build_count_table(&series(SequenceSpec::fibonacci(), 2), 1000).unwrap();
        let dev = |n: u64| {
            let u = table.ones_total(n).to_f64().unwrap();
            let w = table.summand_total(n).to_f64().unwrap();
            (u / w - 0.5276125).abs()
        };
        assert!(dev(1000) < 1e-2);
        assert!(dev(1000) < dev(100));
    });
}

// --- criterion 9 -----------------------------------------------------------

/// All PLRS coefficient vectors with depth <= 3 and entries in {1, 2},
/// minus the degenerate [1]: thirteen in total.
fn criterion9_specs() -> Vec<Vec<u64>> {
    let mut out = vec![vec![2]];
    for a in 1..=2u64 {
        for b in 1..=2u64 {
            out.push(vec![a, b]);
        }
    }
    for a in 1..=2u64 {
        for b in 1..=2u64 {
            for c in 1..=2u64 {
                out.push(vec![a, b, c]);
            }
        }
    }
    out
}

#[test]
fn a09_plrs_classification() {
    criterion(9, "plrs-classification", || {
        let specs = criterion9_specs();
        assert_eq!(specs.len(), 13);
        let fib3_table = build_count_table(&series(SequenceSpec::fibonacci(), 3), 1000).unwrap();
        for coeffs in &specs {
            let spec = SequenceSpec::plrs(coeffs).unwrap();
            let finite = coeffs == &[1, 1];
            for m in 2..=6 {
                let c = classify_plrs_vs_fibonacci(&spec, m).unwrap();
                let expected = if finite { Verdict::FinitePositive } else { Verdict::Zero };
                assert_eq!(c.verdict, expected, "{spec} at m={m}");
                // structural verdict vs independent numerical roots: the
                // theorem compares against the value-aligned Fibonacci
                // stream, i.e. fib at cut m+1
                let h = find_root(&series(spec.clone(), m), &tol9()).unwrap();
                let g = fib_root(m + 1);
                if finite {
                    assert!(c.certified_margin.is_zero());
                    let gap = (h.gamma_f64() - g.gamma_f64()).abs();
                    assert!(gap < 2e-9, "{spec} m={m}: aligned roots differ by {gap:e}");
                } else {
                    assert!(c.certified_margin.signum() > 0);
                    assert!(
                        h.gamma_interval.lower > g.gamma_interval.upper,
                        "{spec} m={m}: root separation not certified"
                    );
                }
            }
            // empirical count-ratio trend at m=2 against the aligned pair
            let h_table = build_count_table(&series(spec.clone(), 2), 1000).unwrap();
            if finite {
                for n in 0..=50 {
                    assert_eq!(h_table.count(n), fib3_table.count(n));
                }
            } else {
                let ratio =
                    |n: u64| count_f64(&h_table, n) / fib3_table.count(n).to_f64().unwrap();
                assert!(
                    ratio(1000) <= ratio(200) / 10.0,
                    "{spec}: count ratio not collapsing"
                );
            }
        }
    });
}

// --- criterion 10 ----------------------------------------------------------

#[test]
fn a10_count_ratio_trends() {
    criterion(10, "count-ratio-trends", || {
        // ZERO direction with exact counts: PLRS [1,1,1] vs Fibonacci,
        // both at cut 2.
        let h = build_count_table(&series(SequenceSpec::plrs(&[1, 1, 1]).unwrap(), 2), 1000).unwrap();
        let f = build_count_table(&series(SequenceSpec::fibonacci(), 2), 1000).unwrap();
        let ratio = |n: u64| count_f64(&h, n) / count_f64(&f, n);
        assert!(ratio(1000) <= ratio(200) / 10.0);
        let mut prev = ratio(200);
        for n in (300..=1000).step_by(100) {
            let r = ratio(n);
            assert!(r < prev, "ratio not decreasing at n={n}");
            prev = r;
        }

        // INFINITE direction at (k^4, m=31). The smallest parts are
        // 31^4 = 923521 and F_31 = 1346269, so exact counts on the stated
        // window are identically zero — machine-check that defect, then
        // verify the claimed direction on the certified asymptotic ratio.
        let k4 = series(SequenceSpec::monomial(4).unwrap(), 31);
        let f31 = series(SequenceSpec::fibonacci(), 31);
        let k4_counts = build_count_table(&k4, 1000).unwrap();
        let f31_counts = build_count_table(&f31, 1000).unwrap();
        for n in 1..=1000 {
            assert!(k4_counts.count(n).is_zero());
            assert!(f31_counts.count(n).is_zero());
        }
        let gamma_p = find_root(&k4, &tol9()).unwrap();
        let alpha = find_root(&f31, &tol9()).unwrap();
        // certified: alpha/gamma_P > 1, so the asymptotic ratio
        // (1/S'_P) gamma_P^{-n-1} / ((1/S'_F) alpha^{-n-1}) must rise
        let q_low = alpha
            .gamma_interval
            .lower
            .div(&gamma_p.gamma_interval.upper, 192, Round::Down);
        assert!(q_low > Dyadic::one(), "root ratio at m=31 not certified above 1");
        let asymptotic = |n: u64| {
            let e = BigUint::from(n + 1);
            let num = alpha.gamma.pow_frac(&e, 192, Round::Down, -4000);
            let den = gamma_p.gamma.pow_frac(&e, 192, Round::Up, -4000);
            let scale = gamma_p.count_constant.div(&alpha.count_constant, 192, Round::Down);
            scale.mul(&num.div(&den, 192, Round::Down), 192, Round::Down)
        };
        let mut prev = asymptotic(200);
        for n in (300..=1000).step_by(100) {
            let r = asymptotic(n);
            assert!(r > prev, "asymptotic ratio not increasing at n={n}");
            prev = r;
        }

        // Desk-scale INFINITE witness with nonzero exact counts:
        // P(n) = n against Fibonacci at cut 6 (= certified threshold).
        let p = series(SequenceSpec::polynomial(&[1, 0]).unwrap(), 6);
        let f6 = series(SequenceSpec::fibonacci(), 6);
        assert_eq!(
            classify_ratio(p.clone(), f6.clone(), &tol9()).unwrap().verdict,
            Verdict::Infinite
        );
        let p_table = build_count_table(&p, 1000).unwrap();
        let f6_table = build_count_table(&f6, 1000).unwrap();
        let ratio = |n: u64| count_f64(&p_table, n) / count_f64(&f6_table, n);
        let (r200, r1000) = (ratio(200), ratio(1000));
        assert!(r200 > 1e13 && r200 < 1e14);
        assert!(r1000 > 9e69 && r1000 < 1e70);
        let mut prev = r200;
        for n in (300..=1000).step_by(100) {
            let r = ratio(n);
            assert!(r > prev, "witness ratio not increasing at n={n}");
            prev = r;
        }
    });
}

// --- criterion 11 ----------------------------------------------------------

#[test]
fn a11_threshold_certificate() {
    criterion(11, "threshold-certificate", || {
        let k2 = SequenceSpec::monomial(2).unwrap();
        assert_eq!(certified_fibonacci_threshold(&k2).unwrap(), 13);
        // exhaustive exact scan over the pinned window
        for k in 13u64..=213 {
            assert!(fibonacci_number(k) > BigUint::from(k * k), "F_{k} <= {k}^2");
        }
        // minimality witness: F_12 = 144 = 12^2 breaks strictness
        assert_eq!(fibonacci_number(12), BigUint::from(144u32));
        assert_eq!(
            outpacing_index(&SequenceSpec::fibonacci(), &k2, 200).unwrap(),
            Some(13)
        );
    });
}

// --- criterion 12 ----------------------------------------------------------

#[test]
fn a12_root_monotonicity_and_limits() {
    criterion(12, "root-monotonicity-and-limits", || {
        let battery = [
            SequenceSpec::fibonacci(),
            SequenceSpec::plrs(&[1, 1, 1]).unwrap(),
            SequenceSpec::plrs(&[2, 1]).unwrap(),
            SequenceSpec::monomial(2).unwrap(),
        ];
        let one = Dyadic::one();
        for spec in &battery {
            let start = spec.min_index().unwrap().max(2);
            let roots = root_sequence(spec, start, start + 10, &tol9()).unwrap();
            for pair in roots.windows(2) {
                assert!(pair[1].gamma > pair[0].gamma, "{spec}: gamma not increasing");
                assert!(pair[1].gamma_interval.upper >= pair[0].gamma_interval.lower);
                let d_prev = one.sub_exact(&pair[0].gamma);
                let d_next = one.sub_exact(&pair[1].gamma);
                assert!(d_next < d_prev && d_next.signum() > 0, "{spec}: 1-gamma not decreasing");
            }
        }

        // alpha_m / gamma_m for PLRS [1,1,1] climbs monotonically toward
        // 1 from below over m in [2, 20].
        let h = SequenceSpec::plrs(&[1, 1, 1]).unwrap();
        let mut prev: Option<Dyadic> = None;
        for m in 2..=20 {
            let alpha = fib_root(m);
            let gamma = find_root(&series(h.clone(), m), &tol9()).unwrap();
            let r = alpha.gamma.div(&gamma.gamma, 96, Round::Down);
            assert!(r < one, "ratio crossed 1 at m={m}");
            if m == 2 {
                assert!((r.to_f64() - 0.7108548).abs() < 1e-6);
            }
            if let Some(p) = &prev {
                assert!(r > *p, "ratio not climbing at m={m}");
            }
            prev = Some(r);
        }
        let last = prev.unwrap().to_f64();
        assert!(last > 0.9998 && last < 1.0);
    });
}
