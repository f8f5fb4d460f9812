//! Arbitrary-precision dyadic floating point with directed rounding.
//!
//! A [`Dyadic`] is an exact value `mant · 2^exp` with a `BigInt` mantissa.
//! Arithmetic takes an explicit precision (mantissa bits) and a rounding
//! direction, so `[op(..., Down), op(..., Up)]` brackets the exact result;
//! [`Interval`] builds interval arithmetic on top of that. Comparisons
//! between dyadics are always exact.
//!
//! The representation is canonical: a zero mantissa forces exponent 0, and
//! nonzero mantissas are odd (trailing zero bits are folded into the
//! exponent), so `==` is value equality.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

/// Rounding direction: toward −∞ or toward +∞.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Round {
    Down,
    Up,
}

impl Round {
    pub fn flip(self) -> Round {
        match self {
            Round::Down => Round::Up,
            Round::Up => Round::Down,
        }
    }
}

/// Exponent floor for power underflow: anything certain to be smaller than
/// 2^POW_FLOOR_EXP in magnitude may be replaced by the enclosure
/// [0, 2^POW_FLOOR_EXP].
pub const POW_FLOOR_EXP: i64 = -(1 << 40);

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Dyadic {
    mant: BigInt,
    exp: i64,
}

fn shr_floor(m: &BigInt, k: u64) -> BigInt {
    if m.sign() != Sign::Minus {
        m >> k
    } else {
        // floor(m / 2^k) = -ceil(|m| / 2^k)
        -(((-m) + ((BigInt::one() << k) - BigInt::one())) >> k)
    }
}

fn shr_ceil(m: &BigInt, k: u64) -> BigInt {
    -shr_floor(&-m, k)
}

impl Dyadic {
    fn normalized(mut mant: BigInt, mut exp: i64) -> Dyadic {
        if mant.is_zero() {
            return Dyadic { mant, exp: 0 };
        }
        let tz = mant.trailing_zeros().unwrap_or(0);
        if tz > 0 {
            mant >>= tz;
            exp = exp.checked_add(tz as i64).expect("exponent overflow");
        }
        Dyadic { mant, exp }
    }

    pub fn zero() -> Dyadic {
        Dyadic { mant: BigInt::zero(), exp: 0 }
    }

    pub fn one() -> Dyadic {
        Dyadic { mant: BigInt::one(), exp: 0 }
    }

    pub fn from_u64(v: u64) -> Dyadic {
        Dyadic::normalized(BigInt::from(v), 0)
    }

    pub fn from_i64(v: i64) -> Dyadic {
        Dyadic::normalized(BigInt::from(v), 0)
    }

    pub fn from_bigint(v: BigInt) -> Dyadic {
        Dyadic::normalized(v, 0)
    }

    pub fn from_biguint(v: &BigUint) -> Dyadic {
        Dyadic::normalized(BigInt::from(v.clone()), 0)
    }

    /// 2^e exactly.
    pub fn two_pow(e: i64) -> Dyadic {
        Dyadic { mant: BigInt::one(), exp: e }
    }

    /// Exact conversion of a finite f64 (every finite double is a dyadic
    /// rational). Panics on NaN or infinity.
    pub fn from_f64(v: f64) -> Dyadic {
        assert!(v.is_finite(), "from_f64 requires a finite value");
        if v == 0.0 {
            return Dyadic::zero();
        }
        let bits = v.to_bits();
        let sign = if bits >> 63 == 1 { -1 } else { 1 };
        let raw_exp = ((bits >> 52) & 0x7ff) as i64;
        let frac = bits & ((1u64 << 52) - 1);
        let (m, e) = if raw_exp == 0 {
            (frac, -1074) // subnormal
        } else {
            (frac | (1u64 << 52), raw_exp - 1075)
        };
        Dyadic::normalized(BigInt::from(sign) * BigInt::from(m), e)
    }

    /// num/den rounded toward `dir` at `prec` bits. `den` must be nonzero.
    pub fn from_ratio(num: &BigInt, den: &BigInt, prec: u32, dir: Round) -> Dyadic {
        Dyadic::from_bigint(num.clone()).div(&Dyadic::from_bigint(den.clone()), prec, dir)
    }

    pub fn is_zero(&self) -> bool {
        self.mant.is_zero()
    }

    /// −1, 0, or 1.
    pub fn signum(&self) -> i32 {
        match self.mant.sign() {
            Sign::Minus => -1,
            Sign::NoSign => 0,
            Sign::Plus => 1,
        }
    }

    pub fn neg(&self) -> Dyadic {
        Dyadic { mant: -&self.mant, exp: if self.mant.is_zero() { 0 } else { self.exp } }
    }

    pub fn abs(&self) -> Dyadic {
        Dyadic { mant: self.mant.abs(), exp: self.exp }
    }

    /// Exact halving.
    pub fn half(&self) -> Dyadic {
        self.scale2(-1)
    }

    /// Exact multiplication by 2^k.
    pub fn scale2(&self, k: i64) -> Dyadic {
        if self.is_zero() {
            return self.clone();
        }
        Dyadic {
            mant: self.mant.clone(),
            exp: self.exp.checked_add(k).expect("exponent overflow"),
        }
    }

    /// Mantissa bit length (0 for zero).
    pub fn bits(&self) -> u64 {
        self.mant.bits()
    }

    /// For nonzero values, `(lo, hi)` with 2^lo ≤ |v| < 2^hi (hi = lo + 1
    /// would mean the mantissa is a power of two; in general
    /// hi − lo = 1).
    pub fn mag_log2_range(&self) -> Option<(i64, i64)> {
        if self.is_zero() {
            return None;
        }
        let b = self.mant.bits() as i64;
        let lo = self.exp.checked_add(b - 1).expect("exponent overflow");
        Some((lo, lo + 1))
    }

    /// Nearest-or-directed reduction to at most `prec` mantissa bits.
    pub fn round(&self, prec: u32, dir: Round) -> Dyadic {
        let bits = self.mant.bits();
        if bits <= prec as u64 {
            return self.clone();
        }
        let k = bits - prec as u64;
        let m = match dir {
            Round::Down => shr_floor(&self.mant, k),
            Round::Up => shr_ceil(&self.mant, k),
        };
        Dyadic::normalized(m, self.exp.checked_add(k as i64).expect("exponent overflow"))
    }

    /// Exact sum; intended for operands with nearby exponents. Panics if
    /// alignment would need more than ~4 million bits (a sign of misuse).
    pub fn add_exact(&self, other: &Dyadic) -> Dyadic {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        let e = self.exp.min(other.exp);
        let da = (self.exp - e) as u64;
        let db = (other.exp - e) as u64;
        assert!(
            da.max(db) + self.bits().max(other.bits()) < 1 << 22,
            "add_exact alignment too large"
        );
        Dyadic::normalized((&self.mant << da) + (&other.mant << db), e)
    }

    pub fn sub_exact(&self, other: &Dyadic) -> Dyadic {
        self.add_exact(&other.neg())
    }

    /// Directed addition at `prec` bits. Sound for any exponent gap: when
    /// one operand is negligible against the other it is folded in as a
    /// one-sided nudge instead of being aligned bit by bit.
    pub fn add(&self, other: &Dyadic, prec: u32, dir: Round) -> Dyadic {
        if self.is_zero() {
            return other.round(prec, dir);
        }
        if other.is_zero() {
            return self.round(prec, dir);
        }
        let (la, ha) = self.mag_log2_range().unwrap();
        let (lb, hb) = other.mag_log2_range().unwrap();
        let p = prec as i64;
        if hb <= la - p - 3 {
            return self.nudged(other.signum(), hb, la, prec, dir);
        }
        if ha <= lb - p - 3 {
            return other.nudged(self.signum(), ha, lb, prec, dir);
        }
        self.add_exact(other).round(prec, dir)
    }

    /// `self` rounded at `prec`, then pushed one sub-ulp step toward `dir`
    /// if a discarded term of magnitude < 2^small_hi (and the given sign)
    /// could move it that way. `big_lo` is the floor log2 of |self|.
    fn nudged(&self, small_sign: i32, small_hi: i64, big_lo: i64, prec: u32, dir: Round) -> Dyadic {
        let r = self.round(prec, dir);
        let needs = match dir {
            Round::Down => small_sign < 0,
            Round::Up => small_sign > 0,
        };
        if !needs {
            return r;
        }
        // Any k ≥ small_hi keeps the bound sound; clamp so alignment stays
        // within a few bits of the result's ulp.
        let k = small_hi.max(big_lo - prec as i64 - 6);
        let step = Dyadic::two_pow(k);
        let nudged = match dir {
            Round::Down => r.sub_exact(&step),
            Round::Up => r.add_exact(&step),
        };
        nudged.round(prec + 8, dir)
    }

    pub fn sub(&self, other: &Dyadic, prec: u32, dir: Round) -> Dyadic {
        self.add(&other.neg(), prec, dir)
    }

    pub fn mul(&self, other: &Dyadic, prec: u32, dir: Round) -> Dyadic {
        if self.is_zero() || other.is_zero() {
            return Dyadic::zero();
        }
        let m = &self.mant * &other.mant;
        let e = self.exp.checked_add(other.exp).expect("exponent overflow");
        Dyadic::normalized(m, e).round(prec, dir)
    }

    /// Directed division. Panics on a zero divisor.
    pub fn div(&self, other: &Dyadic, prec: u32, dir: Round) -> Dyadic {
        assert!(!other.is_zero(), "division by zero");
        if self.is_zero() {
            return Dyadic::zero();
        }
        let extra = (prec as i64 + 2 + other.mant.bits() as i64 - self.mant.bits() as i64).max(0)
            as u64;
        let num = &self.mant << extra;
        let q = match dir {
            Round::Down => num.div_floor(&other.mant),
            Round::Up => -(&(-num)).div_floor(&other.mant),
        };
        let e = self
            .exp
            .checked_sub(other.exp)
            .and_then(|e| e.checked_sub(extra as i64))
            .expect("exponent overflow");
        Dyadic::normalized(q, e).round(prec, dir)
    }

    /// self^e for 0 ≤ self ≤ 1, by directed square-and-multiply. Once the
    /// accumulator is certainly below 2^floor_exp the enclosure
    /// [0, 2^floor_exp] stands in for the rest (further factors are ≤ 1,
    /// so the value can only shrink).
    pub fn pow_frac(&self, e: &BigUint, prec: u32, dir: Round, floor_exp: i64) -> Dyadic {
        assert!(self.signum() >= 0, "pow_frac base must be non-negative");
        debug_assert!(*self <= Dyadic::one());
        if e.is_zero() {
            return Dyadic::one();
        }
        if self.is_zero() {
            return Dyadic::zero();
        }
        let base = self.round(prec, dir);
        let nbits = e.bits();
        let mut acc = base.clone();
        for i in (0..nbits - 1).rev() {
            acc = acc.mul(&acc, prec, dir);
            if e.bit(i) {
                acc = acc.mul(&base, prec, dir);
            }
            if let Some((_, hi)) = acc.mag_log2_range() {
                if hi < floor_exp {
                    return match dir {
                        Round::Down => Dyadic::zero(),
                        Round::Up => Dyadic::two_pow(floor_exp),
                    };
                }
            }
        }
        acc
    }

    /// Compare against the rational num/den (den > 0), exactly.
    pub fn cmp_rational(&self, num: &BigInt, den: &BigInt) -> Ordering {
        assert!(den.sign() == Sign::Plus);
        let lhs_scaled = &self.mant * den;
        if self.exp >= 0 {
            (lhs_scaled << self.exp as u64).cmp(num)
        } else {
            lhs_scaled.cmp(&(num << (-self.exp) as u64))
        }
    }

    /// Round-half-even integer value of `self · 10^places`.
    pub fn decimal_units(&self, places: u32) -> BigInt {
        let scaled = &self.mant * BigInt::from(10u32).pow(places);
        if self.exp >= 0 {
            return scaled << self.exp as u64;
        }
        let k = (-self.exp) as u64;
        let q = shr_floor(&scaled, k);
        let r = &scaled - (&q << k);
        // 0 ≤ r < 2^k; compare 2r with 2^k
        let two_r = &r << 1u32;
        let d = BigInt::one() << k;
        match two_r.cmp(&d) {
            Ordering::Less => q,
            Ordering::Greater => q + 1,
            Ordering::Equal => {
                if q.is_even() {
                    q
                } else {
                    q + 1
                }
            }
        }
    }

    /// Fixed-point decimal rendering, round-half-even at `places` digits.
    pub fn to_decimal(&self, places: u32) -> String {
        let units = self.decimal_units(places);
        let neg = units.sign() == Sign::Minus;
        let mag = units.magnitude().clone();
        let scale = BigUint::from(10u32).pow(places);
        let (int, frac) = mag.div_rem(&scale);
        let sign = if neg { "-" } else { "" };
        if places == 0 {
            format!("{sign}{int}")
        } else {
            format!("{sign}{int}.{frac:0>width$}", width = places as usize)
        }
    }

    /// Best-effort f64 view, exact up to one final rounding (the power-of-
    /// two scaling is exact inside the normal range; extremes saturate).
    pub fn to_f64(&self) -> f64 {
        if self.is_zero() {
            return 0.0;
        }
        // Round to nearest-ish via a downward 54-bit rounding: error below
        // one part in 2^53, absorbed by the final double rounding.
        let r = self.round(54, Round::Down);
        let m = i64::try_from(&r.mant).expect("54-bit mantissa fits i64") as f64;
        let e = r.exp;
        if e > 2_000 {
            return if m > 0.0 { f64::INFINITY } else { f64::NEG_INFINITY };
        }
        if e < -2_200 {
            return if m > 0.0 { 0.0 } else { -0.0 };
        }
        let half = (e / 2) as i32;
        let rest = (e - half as i64) as i32;
        m * 2f64.powi(half) * 2f64.powi(rest)
    }

    /// Parse a decimal string (optional sign, optional fraction, optional
    /// `e`/`E` exponent) into a dyadic, rounding toward `dir` at `prec`
    /// bits. The result is exact whenever the value is a dyadic rational
    /// of at most `prec` bits.
    pub fn from_decimal(s: &str, prec: u32, dir: Round) -> Result<Dyadic, String> {
        let t = s.trim();
        let (sign, body) = match t.as_bytes().first() {
            Some(b'-') => (-1, &t[1..]),
            Some(b'+') => (1, &t[1..]),
            _ => (1, t),
        };
        let (digits_part, exp_part) = match body.find(['e', 'E']) {
            Some(i) => (&body[..i], Some(&body[i + 1..])),
            None => (body, None),
        };
        let (int_digits, frac_digits) = match digits_part.find('.') {
            Some(i) => (&digits_part[..i], &digits_part[i + 1..]),
            None => (digits_part, ""),
        };
        if int_digits.is_empty() && frac_digits.is_empty() {
            return Err(format!("no digits in number {s:?}"));
        }
        if !int_digits.bytes().all(|b| b.is_ascii_digit())
            || !frac_digits.bytes().all(|b| b.is_ascii_digit())
        {
            return Err(format!("invalid digits in number {s:?}"));
        }
        let exp10: i64 = match exp_part {
            Some(e) => e.parse().map_err(|_| format!("invalid exponent in number {s:?}"))?,
            None => 0,
        };
        if exp10.abs() > 1_000_000 {
            return Err(format!("exponent out of range in number {s:?}"));
        }
        let mut digits: BigInt =
            format!("{int_digits}{frac_digits}").parse().unwrap_or_else(|_| BigInt::zero());
        if sign < 0 {
            digits = -digits;
        }
        let net = exp10 - frac_digits.len() as i64;
        if net >= 0 {
            let v = digits * BigInt::from(10u32).pow(net as u32);
            Ok(Dyadic::from_bigint(v).round(prec, dir))
        } else {
            let den = BigInt::from(10u32).pow((-net) as u32);
            Ok(Dyadic::from_ratio(&digits, &den, prec, dir))
        }
    }
}

impl PartialOrd for Dyadic {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Dyadic {
    fn cmp(&self, other: &Self) -> Ordering {
        let sa = self.signum();
        let sb = other.signum();
        if sa != sb {
            return sa.cmp(&sb);
        }
        if sa == 0 {
            return Ordering::Equal;
        }
        // same nonzero sign: bracket magnitudes before aligning
        let (la, ha) = self.mag_log2_range().unwrap();
        let (lb, hb) = other.mag_log2_range().unwrap();
        let mag = if ha <= lb {
            Ordering::Less
        } else if hb <= la {
            Ordering::Greater
        } else {
            // exponent gap is bounded by the mantissa widths here
            let e = self.exp.min(other.exp);
            let ma = &self.mant << (self.exp - e) as u64;
            let mb = &other.mant << (other.exp - e) as u64;
            return ma.cmp(&mb);
        };
        if sa > 0 {
            mag
        } else {
            mag.reverse()
        }
    }
}

impl fmt::Debug for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Dyadic({} * 2^{} ≈ {})", self.mant, self.exp, self.to_f64())
    }
}

impl fmt::Display for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_f64())
    }
}

/// Closed interval [lo, hi] with exact dyadic endpoints. The invariant
/// lo ≤ hi is asserted; all operations round outward at the precision they
/// are given.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Interval {
    pub lo: Dyadic,
    pub hi: Dyadic,
}

impl Interval {
    pub fn new(lo: Dyadic, hi: Dyadic) -> Interval {
        assert!(lo <= hi, "inverted interval");
        Interval { lo, hi }
    }

    pub fn point(d: Dyadic) -> Interval {
        Interval { lo: d.clone(), hi: d }
    }

    pub fn add(&self, o: &Interval, prec: u32) -> Interval {
        Interval {
            lo: self.lo.add(&o.lo, prec, Round::Down),
            hi: self.hi.add(&o.hi, prec, Round::Up),
        }
    }

    pub fn sub(&self, o: &Interval, prec: u32) -> Interval {
        Interval {
            lo: self.lo.sub(&o.hi, prec, Round::Down),
            hi: self.hi.sub(&o.lo, prec, Round::Up),
        }
    }

    pub fn neg(&self) -> Interval {
        Interval { lo: self.hi.neg(), hi: self.lo.neg() }
    }

    pub fn mul(&self, o: &Interval, prec: u32) -> Interval {
        let pairs =
            [(&self.lo, &o.lo), (&self.lo, &o.hi), (&self.hi, &o.lo), (&self.hi, &o.hi)];
        let mut lo: Option<Dyadic> = None;
        let mut hi: Option<Dyadic> = None;
        for (a, b) in pairs {
            let d = a.mul(b, prec, Round::Down);
            let u = a.mul(b, prec, Round::Up);
            lo = Some(match lo {
                Some(cur) => cur.min(d),
                None => d,
            });
            hi = Some(match hi {
                Some(cur) => cur.max(u),
                None => u,
            });
        }
        Interval { lo: lo.unwrap(), hi: hi.unwrap() }
    }

    /// Reciprocal of an interval that excludes zero.
    pub fn recip(&self, prec: u32) -> Interval {
        assert!(
            self.lo.signum() == self.hi.signum() && self.lo.signum() != 0,
            "reciprocal of an interval containing zero"
        );
        let one = Dyadic::one();
        Interval {
            lo: one.div(&self.hi, prec, Round::Down),
            hi: one.div(&self.lo, prec, Round::Up),
        }
    }

    pub fn div(&self, o: &Interval, prec: u32) -> Interval {
        self.mul(&o.recip(prec), prec)
    }

    /// [lo^e, hi^e] for intervals inside [0, 1].
    pub fn pow_frac(&self, e: &BigUint, prec: u32) -> Interval {
        Interval {
            lo: self.lo.pow_frac(e, prec, Round::Down, POW_FLOOR_EXP),
            hi: self.hi.pow_frac(e, prec, Round::Up, POW_FLOOR_EXP),
        }
    }

    pub fn width(&self, prec: u32) -> Dyadic {
        self.hi.sub(&self.lo, prec, Round::Up)
    }

    pub fn midpoint(&self, prec: u32) -> Dyadic {
        self.lo.add(&self.hi, prec, Round::Down).half()
    }

    pub fn contains(&self, d: &Dyadic) -> bool {
        self.lo <= *d && *d <= self.hi
    }

    /// Intersection, or None when disjoint.
    pub fn intersect(&self, o: &Interval) -> Option<Interval> {
        let lo = if self.lo >= o.lo { self.lo.clone() } else { o.lo.clone() };
        let hi = if self.hi <= o.hi { self.hi.clone() } else { o.hi.clone() };
        if lo <= hi {
            Some(Interval { lo, hi })
        } else {
            None
        }
    }
}

impl Dyadic {
    fn min(self, other: Dyadic) -> Dyadic {
        if self <= other {
            self
        } else {
            other
        }
    }

    fn max(self, other: Dyadic) -> Dyadic {
        if self >= other {
            self
        } else {
            other
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn d(v: i64, e: i64) -> Dyadic {
        Dyadic::normalized(BigInt::from(v), e)
    }

    #[test]
    fn canonical_form_and_equality() {
        assert_eq!(d(4, 0), d(1, 2));
        assert_eq!(d(12, -2), d(3, 0));
        assert_eq!(Dyadic::zero(), d(0, 55));
    }

    #[test]
    fn exact_ordering_across_scales() {
        assert!(d(1, -100) > Dyadic::zero());
        assert!(d(-1, 100) < d(1, -1000));
        assert!(d(3, -2) < d(1, 0)); // 0.75 < 1
        assert!(d(5, -3) > d(9, -4)); // 0.625 > 0.5625
        assert_eq!(d(7, 3).cmp(&d(7, 3)), Ordering::Equal);
    }

    #[test]
    fn directed_rounding_brackets() {
        let v = d(0b101101, 0); // 45
        let down = v.round(3, Round::Down);
        let up = v.round(3, Round::Up);
        assert_eq!(down, d(0b101, 3)); // 40
        assert_eq!(up, d(0b110, 3)); // 48
        assert!(down <= v && v <= up);

        let n = v.neg();
        assert_eq!(n.round(3, Round::Down), d(-0b110, 3));
        assert_eq!(n.round(3, Round::Up), d(-0b101, 3));
    }

    #[test]
    fn add_with_huge_gap_nudges() {
        let big = Dyadic::one();
        let tiny = d(1, -1_000_000);
        let down = big.add(&tiny, 64, Round::Down);
        let up = big.add(&tiny, 64, Round::Up);
        assert!(down <= Dyadic::one() && up > Dyadic::one());
        // 1 + tiny really is in [down, up] and the bracket is narrow
        let w = up.sub(&down, 64, Round::Up);
        assert!(w <= Dyadic::two_pow(-64));

        let down2 = big.sub(&tiny, 64, Round::Down);
        let up2 = big.sub(&tiny, 64, Round::Up);
        assert!(down2 < Dyadic::one() && up2 >= Dyadic::one());
    }

    #[test]
    fn division_directed() {
        let one = Dyadic::one();
        let three = Dyadic::from_u64(3);
        let lo = one.div(&three, 20, Round::Down);
        let hi = one.div(&three, 20, Round::Up);
        assert!(lo < hi);
        // 1/3 lies between
        assert_eq!(lo.cmp_rational(&BigInt::one(), &BigInt::from(3)), Ordering::Less);
        assert_eq!(hi.cmp_rational(&BigInt::one(), &BigInt::from(3)), Ordering::Greater);
        let w = hi.sub(&lo, 64, Round::Up);
        assert!(w <= Dyadic::two_pow(-20));
    }

    #[test]
    fn pow_frac_brackets_and_underflows() {
        let half = d(1, -1);
        let e = BigUint::from(10u32);
        let lo = half.pow_frac(&e, 64, Round::Down, POW_FLOOR_EXP);
        let hi = half.pow_frac(&e, 64, Round::Up, POW_FLOOR_EXP);
        assert_eq!(lo, d(1, -10));
        assert_eq!(hi, d(1, -10));

        // 0.75^e with a shallow floor triggers the underflow clamp
        let x = d(3, -2);
        let e = BigUint::from(1_000_000u32);
        let lo = x.pow_frac(&e, 32, Round::Down, -1000);
        let hi = x.pow_frac(&e, 32, Round::Up, -1000);
        assert!(lo.is_zero());
        assert_eq!(hi, Dyadic::two_pow(-1000));
    }

    #[test]
    fn decimal_rendering_half_even() {
        assert_eq!(d(1, -1).to_decimal(7), "0.5000000");
        assert_eq!(d(1, -3).to_decimal(2), "0.12"); // 0.125 ties to even 0.12
        assert_eq!(d(3, -3).to_decimal(2), "0.38"); // 0.375 ties to even 0.38
        assert_eq!(d(-3, -3).to_decimal(2), "-0.38");
        assert_eq!(Dyadic::from_u64(5).to_decimal(3), "5.000");
        assert_eq!(d(-1, -1).to_decimal(0), "0"); // -0.5 ties to even 0
        assert_eq!(d(-3, -1).to_decimal(0), "-2"); // -1.5 ties to even -2
        assert_eq!(Dyadic::from_u64(1234).to_decimal(0), "1234");
    }

    #[test]
    fn decimal_parse_round_trip() {
        let x = Dyadic::from_decimal("0.5", 64, Round::Down).unwrap();
        assert_eq!(x, d(1, -1));
        let lo = Dyadic::from_decimal("1e-9", 96, Round::Down).unwrap();
        let hi = Dyadic::from_decimal("1e-9", 96, Round::Up).unwrap();
        assert!(lo < hi);
        assert_eq!(lo.cmp_rational(&BigInt::one(), &BigInt::from(10u64.pow(9))), Ordering::Less);
        assert_eq!(hi.cmp_rational(&BigInt::one(), &BigInt::from(10u64.pow(9))), Ordering::Greater);
        assert!(Dyadic::from_decimal("-2.75e2", 64, Round::Down).unwrap() == d(-275, 0));
        assert!(Dyadic::from_decimal("abc", 64, Round::Down).is_err());
        assert!(Dyadic::from_decimal("1.2.3", 64, Round::Down).is_err());
    }

    #[test]
    fn f64_view() {
        assert_eq!(d(1, -1).to_f64(), 0.5);
        assert_eq!(d(-3, -2).to_f64(), -0.75);
        assert_eq!(Dyadic::zero().to_f64(), 0.0);
        let tiny = Dyadic::two_pow(-4000);
        assert_eq!(tiny.to_f64(), 0.0);
    }

    #[test]
    fn interval_arithmetic_encloses() {
        let a = Interval::new(d(1, -1), d(3, -2)); // [0.5, 0.75]
        let b = Interval::new(d(1, -2), d(1, -1)); // [0.25, 0.5]
        let s = a.add(&b, 64);
        assert!(s.lo <= d(3, -2) && s.hi >= d(5, -2));
        let p = a.mul(&b, 64);
        assert!(p.lo <= d(1, -3) && p.hi >= d(3, -3));
        let q = a.div(&b, 64);
        assert!(q.lo <= Dyadic::one() && q.hi >= Dyadic::from_u64(3));
        let m = a.midpoint(64);
        assert!(a.contains(&m));
    }
}
