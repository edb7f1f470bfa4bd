//! Upper and lower bounds on the additive complexity of `B(p,q,n)`.
//!
//! Everything is exact: binomials are big integers and the upper bound lives
//! in `Z[√5]/2^e` via [`QuadraticNumber`].

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use serde::Serialize;

use crate::combinatorics::binomial;
use crate::error::{Error, Result};
use crate::matrices::{build_matrix, DEFAULT_PRIME};
use crate::synthesis::{naive_synth, recurrence_cost, synth};

/// `(a + b√5) / 2^e`, kept with the smallest exponent.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QuadraticNumber {
    a: BigInt,
    b: BigInt,
    e: u32,
}

impl QuadraticNumber {
    pub fn new(a: impl Into<BigInt>, b: impl Into<BigInt>, e: u32) -> Self {
        let mut x = QuadraticNumber {
            a: a.into(),
            b: b.into(),
            e,
        };
        x.normalize();
        x
    }

    /// `(a + b√5) / 2`.
    pub fn halves(a: impl Into<BigInt>, b: impl Into<BigInt>) -> Self {
        Self::new(a, b, 1)
    }

    pub fn from_int(m: impl Into<BigInt>) -> Self {
        Self::new(m, 0, 0)
    }

    pub fn zero() -> Self {
        Self::from_int(0)
    }

    pub fn one() -> Self {
        Self::from_int(1)
    }

    fn normalize(&mut self) {
        while self.e > 0 && self.a.is_even() && self.b.is_even() {
            self.a /= 2;
            self.b /= 2;
            self.e -= 1;
        }
    }

    /// Numerator pair `(a, b)` with the value equal to `(a + b√5) / 2`, if
    /// the denominator divides 2.
    pub fn to_halves(&self) -> Option<(BigInt, BigInt)> {
        match self.e {
            0 => Some((&self.a * 2, &self.b * 2)),
            1 => Some((self.a.clone(), self.b.clone())),
            _ => None,
        }
    }

    pub fn parts(&self) -> (&BigInt, &BigInt, u32) {
        (&self.a, &self.b, self.e)
    }

    fn aligned(&self, e: u32) -> (BigInt, BigInt) {
        let shift = e - self.e;
        (&self.a << shift, &self.b << shift)
    }

    /// Sign of `a + b√5`, exact.
    pub fn signum(&self) -> Ordering {
        let sa = self.a.sign();
        let sb = self.b.sign();
        match (sa, sb) {
            (Sign::NoSign, Sign::NoSign) => Ordering::Equal,
            (Sign::Minus, Sign::Minus) | (Sign::Minus, Sign::NoSign) | (Sign::NoSign, Sign::Minus) => Ordering::Less,
            (Sign::Plus, Sign::Plus) | (Sign::Plus, Sign::NoSign) | (Sign::NoSign, Sign::Plus) => Ordering::Greater,
            // opposite signs: compare a² with 5b²
            (sa, _) => {
                let lhs = &self.a * &self.a;
                let rhs = &self.b * &self.b * 5;
                match lhs.cmp(&rhs) {
                    Ordering::Equal => Ordering::Equal, // unreachable for integers, √5 irrational
                    Ordering::Greater => {
                        if sa == Sign::Plus {
                            Ordering::Greater
                        } else {
                            Ordering::Less
                        }
                    }
                    Ordering::Less => {
                        if sa == Sign::Plus {
                            Ordering::Less
                        } else {
                            Ordering::Greater
                        }
                    }
                }
            }
        }
    }

    pub fn cmp_int(&self, m: &BigInt) -> Ordering {
        (self.clone() - QuadraticNumber::from_int(m.clone())).signum()
    }

    pub fn to_f64(&self) -> f64 {
        let a = self.a.to_f64().unwrap_or(f64::NAN);
        let b = self.b.to_f64().unwrap_or(f64::NAN);
        (a + b * 5f64.sqrt()) / 2f64.powi(self.e as i32)
    }
}

impl Add for QuadraticNumber {
    type Output = QuadraticNumber;

    fn add(self, rhs: QuadraticNumber) -> QuadraticNumber {
        let e = self.e.max(rhs.e);
        let (a1, b1) = self.aligned(e);
        let (a2, b2) = rhs.aligned(e);
        QuadraticNumber::new(a1 + a2, b1 + b2, e)
    }
}

impl Neg for QuadraticNumber {
    type Output = QuadraticNumber;

    fn neg(self) -> QuadraticNumber {
        QuadraticNumber::new(-self.a, -self.b, self.e)
    }
}

impl Sub for QuadraticNumber {
    type Output = QuadraticNumber;

    fn sub(self, rhs: QuadraticNumber) -> QuadraticNumber {
        self + (-rhs)
    }
}

impl Mul for QuadraticNumber {
    type Output = QuadraticNumber;

    fn mul(self, rhs: QuadraticNumber) -> QuadraticNumber {
        // (a1 + b1√5)(a2 + b2√5) = a1a2 + 5b1b2 + (a1b2 + a2b1)√5
        let a = &self.a * &rhs.a + &self.b * &rhs.b * 5;
        let b = &self.a * &rhs.b + &rhs.a * &self.b;
        QuadraticNumber::new(a, b, self.e + rhs.e)
    }
}

impl Mul<&BigUint> for QuadraticNumber {
    type Output = QuadraticNumber;

    fn mul(self, rhs: &BigUint) -> QuadraticNumber {
        let m = BigInt::from(rhs.clone());
        QuadraticNumber::new(self.a * &m, self.b * m, self.e)
    }
}

impl PartialOrd for QuadraticNumber {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for QuadraticNumber {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.clone() - other.clone()).signum()
    }
}

impl fmt::Display for QuadraticNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({} + {}√5)/{}", self.a, self.b, BigInt::from(1) << self.e)
    }
}

/// `α^p` with `α = (3+√5)/2`, via `α² = 3α - 1`.
pub fn alpha_power(p: u32) -> QuadraticNumber {
    // α^k = u·α + v
    let (mut u, mut v) = (BigInt::zero(), BigInt::from(1));
    for _ in 0..p {
        let next_u = &u * 3 + &v;
        v = -u;
        u = next_u;
    }
    // u(3+√5)/2 + v = (3u + 2v + u√5)/2
    QuadraticNumber::halves(&u * 3 + &v * 2, u)
}

/// `(α^p - 1)·C(n,q) + α^q·C(n,p)`.
pub fn upper_bound_theorem1(p: usize, q: usize, n: usize) -> QuadraticNumber {
    let cq = binomial(n as u64, q as i64);
    let cp = binomial(n as u64, p as i64);
    (alpha_power(p as u32) - QuadraticNumber::one()) * &cq + alpha_power(q as u32) * &cp
}

fn clamp(v: BigInt) -> BigUint {
    v.to_biguint().unwrap_or_default()
}

fn big(n: usize, k: usize) -> BigInt {
    BigInt::from(binomial(n as u64, k as i64))
}

/// `(q - p + 1)·Σ_{k≤p} C(n,k) - 2^(p+q)`, clamped at 0; 0 outside
/// `1 ≤ p ≤ q`, `n > p + q`.
pub fn lower_bound_theorem2(p: usize, q: usize, n: usize) -> BigUint {
    if p < 1 || p > q || n <= p + q {
        return BigUint::zero();
    }
    let sum: BigInt = (0..=p).map(|k| big(n, k)).sum();
    clamp(BigInt::from(q - p + 1) * sum - (BigInt::from(1) << (p + q)))
}

/// `C(n,p) + Σ_{k≤p} (p + q - 2k + 1)·C(n,k) - 2^(p+q+1)`, clamped at 0, on
/// the same domain as [`lower_bound_theorem2`].
pub fn lower_bound_remark(p: usize, q: usize, n: usize) -> BigUint {
    if p < 1 || p > q || n <= p + q {
        return BigUint::zero();
    }
    let sum: BigInt = (0..=p)
        .map(|k| BigInt::from(p as i64 + q as i64 - 2 * k as i64 + 1) * big(n, k))
        .sum();
    clamp(big(n, p) + sum - (BigInt::from(1) << (p + q + 1)))
}

/// How `L(B(1,1,n))` is seeded in the lower-bound recursion.
#[derive(Copy, Clone, Debug, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ComplementBase {
    /// The known optimum `3n - 6`.
    #[default]
    Exact,
    /// The trivial `n - 3`.
    Weak,
}

/// Best lower bound obtainable from the closed-form cases, the recursion
/// `L(p,q,n) ≥ L(p,q-1,n-1) + L(p-1,q,n-1) + C(n-1, min(p,q))`, and the
/// transposition identity `L(p,q,n) = L(q,p,n) + C(n,p) - C(n,q)`.
pub fn lower_bound_lemma2_dp(p: usize, q: usize, n: usize, base: ComplementBase) -> BigUint {
    if n < p.max(q) {
        return BigUint::zero();
    }
    let top = p.max(q);
    // table[(p', q')] for the current n', every p', q' ≤ top
    let mut prev: HashMap<(usize, usize), BigInt> = HashMap::new();
    for m in 0..=n {
        let mut cur: HashMap<(usize, usize), BigInt> = HashMap::new();
        for a in 0..=top.min(m) {
            for b in 0..=top.min(m) {
                let v = if a == 0 {
                    BigInt::zero()
                } else if b == 0 {
                    big(m, a) - 1
                } else if m <= a + b {
                    BigInt::zero()
                } else if a == 1 && b == 1 {
                    match base {
                        ComplementBase::Exact => BigInt::from(3 * m as i64 - 6),
                        ComplementBase::Weak => BigInt::from(m as i64 - 3),
                    }
                } else {
                    prev[&(a, b - 1)].clone() + prev[&(a - 1, b)].clone() + big(m - 1, a.min(b))
                };
                cur.insert((a, b), v);
            }
        }
        // one symmetric pass reaches the fixpoint of the transposition closure
        for a in 0..=top.min(m) {
            for b in a + 1..=top.min(m) {
                if m < a + b {
                    continue;
                }
                let ab = cur[&(a, b)].clone();
                let ba = cur[&(b, a)].clone();
                let from_ba = &ba + big(m, a) - big(m, b);
                let from_ab = &ab + big(m, b) - big(m, a);
                if from_ba > ab {
                    cur.insert((a, b), from_ba);
                }
                if from_ab > ba {
                    cur.insert((b, a), from_ab);
                }
            }
        }
        prev = cur;
    }
    clamp(prev[&(p, q)].clone())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundsReport {
    pub p: usize,
    pub q: usize,
    pub n: usize,
    pub upper_theorem1: QuadraticNumber,
    pub gates_synth: usize,
    pub gates_predicted: BigUint,
    pub gates_naive: usize,
    pub lower_theorem2: BigUint,
    pub lower_remark: BigUint,
    pub lower_lemma2_dp: BigUint,
    pub rank: usize,
}

impl BoundsReport {
    /// `lemma2_dp ≤ synth ≤ upper` and `synth = predicted`.
    pub fn check(&self) -> Result<()> {
        let gates = BigUint::from(self.gates_synth);
        let fail = |what: String| {
            Err(Error::BoundInvariant {
                p: self.p,
                q: self.q,
                n: self.n,
                what,
            })
        };
        if self.lower_theorem2 > self.lower_lemma2_dp {
            return fail(format!("theorem2 {} > lemma2dp {}", self.lower_theorem2, self.lower_lemma2_dp));
        }
        if self.lower_lemma2_dp > gates {
            return fail(format!("lemma2dp {} > gates {}", self.lower_lemma2_dp, gates));
        }
        if self.upper_theorem1.cmp_int(&BigInt::from(gates.clone())) == Ordering::Less {
            return fail(format!("gates {} > upper {}", gates, self.upper_theorem1));
        }
        if self.gates_predicted != gates {
            return fail(format!("gates {} != predicted {}", gates, self.gates_predicted));
        }
        Ok(())
    }

    pub fn to_json(&self) -> serde_json::Value {
        let (a, b) = self
            .upper_theorem1
            .to_halves()
            .expect("upper bound has denominator 2");
        serde_json::json!({
            "p": self.p,
            "q": self.q,
            "n": self.n,
            "upper_theorem1": {
                "a": a.to_string(),
                "b": b.to_string(),
                "halves": true,
                "decimal": format!("{:.6}", self.upper_theorem1.to_f64()),
            },
            "gates_synth": self.gates_synth,
            "gates_predicted": self.gates_predicted.to_string(),
            "gates_naive": self.gates_naive,
            "lower_theorem2": self.lower_theorem2.to_string(),
            "lower_remark": self.lower_remark.to_string(),
            "lower_lemma2_dp": self.lower_lemma2_dp.to_string(),
            "rank": self.rank,
        })
    }

    pub fn to_text(&self) -> String {
        let (a, b) = self.upper_theorem1.to_halves().expect("denominator 2");
        format!(
            "p={} q={} n={}\n\
             gates_synth={}\n\
             gates_predicted={}\n\
             gates_naive={}\n\
             upper_theorem1=({a} + {b}*sqrt5)/2 ~ {:.6}\n\
             lower_theorem2={}\n\
             lower_remark={}\n\
             lower_lemma2_dp={}\n\
             rank={}\n",
            self.p,
            self.q,
            self.n,
            self.gates_synth,
            self.gates_predicted,
            self.gates_naive,
            self.upper_theorem1.to_f64(),
            self.lower_theorem2,
            self.lower_remark,
            self.lower_lemma2_dp,
            self.rank
        )
    }

    /// One row of the `table` CSV.
    pub fn csv_row(&self) -> String {
        let (a, b) = self.upper_theorem1.to_halves().expect("denominator 2");
        format!(
            "{},{},{},{},{},{},{},{},{},{},{},{}",
            self.p,
            self.q,
            self.n,
            self.gates_synth,
            self.gates_predicted,
            self.gates_naive,
            a,
            b,
            self.lower_theorem2,
            self.lower_remark,
            self.lower_lemma2_dp,
            self.rank
        )
    }
}

pub const CSV_HEADER: &str = "p,q,n,gates,predicted,naive,ub_num_a,ub_num_b,th2,remark,lemma2dp,rank";

/// Every bound and gate count for one triple, with the invariants checked.
pub fn bounds_report(p: usize, q: usize, n: usize, base: ComplementBase) -> Result<BoundsReport> {
    if n < p + q {
        return Err(Error::NotRepresentable);
    }
    let m = build_matrix(p, q, n)?;
    let report = BoundsReport {
        p,
        q,
        n,
        upper_theorem1: upper_bound_theorem1(p, q, n),
        gates_synth: synth(p, q, n)?.circuit.gate_count(),
        gates_predicted: recurrence_cost(p, q, n)?,
        gates_naive: naive_synth(&m)?.gate_count(),
        lower_theorem2: lower_bound_theorem2(p, q, n),
        lower_remark: lower_bound_remark(p, q, n),
        lower_lemma2_dp: lower_bound_lemma2_dp(p, q, n, base),
        rank: m.rank_mod_prime(DEFAULT_PRIME)?,
    };
    report.check()?;
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn u(v: u64) -> BigUint {
        BigUint::from(v)
    }

    #[test]
    fn alpha_powers() {
        assert_eq!(alpha_power(0), QuadraticNumber::one());
        assert_eq!(alpha_power(0).to_halves(), Some((BigInt::from(2), BigInt::zero())));
        assert_eq!(alpha_power(1), QuadraticNumber::halves(3, 1));
        assert_eq!(alpha_power(2), QuadraticNumber::halves(7, 3));
        let alpha = QuadraticNumber::halves(3, 1);
        let mut acc = QuadraticNumber::one();
        for p in 0..30 {
            assert_eq!(alpha_power(p), acc);
            acc = acc * alpha.clone();
        }
    }

    #[test]
    fn alpha_satisfies_its_quadratic() {
        let a = alpha_power(1);
        let three_a_minus_one = QuadraticNumber::from_int(3) * a.clone() - QuadraticNumber::one();
        assert_eq!(a.clone() * a.clone(), three_a_minus_one);
        // 1 + α/(α-1) = α  <=>  (α - 1) + α = α(α - 1)
        let lhs = (a.clone() - QuadraticNumber::one()) + a.clone();
        let rhs = a.clone() * (a - QuadraticNumber::one());
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn upper_bound_examples() {
        assert_eq!(upper_bound_theorem1(0, 0, 4), QuadraticNumber::one());
        let ub = upper_bound_theorem1(1, 1, 5);
        assert_eq!(ub, QuadraticNumber::new(10, 5, 0));
        assert!((ub.to_f64() - 21.180340).abs() < 1e-5);
        assert_eq!(ub.cmp_int(&BigInt::from(9)), Ordering::Greater);
        let ub = upper_bound_theorem1(2, 1, 5);
        assert!((ub.to_f64() - 55.450850).abs() < 1e-5);
        assert_eq!(ub.cmp_int(&BigInt::from(19)), Ordering::Greater);
    }

    #[test]
    fn exact_sign() {
        // 9 - 4√5 ≈ 0.0557 > 0 ; -9 + 4√5 < 0 ; 2 - √5 < 0
        assert_eq!(QuadraticNumber::new(9, -4, 0).signum(), Ordering::Greater);
        assert_eq!(QuadraticNumber::new(-9, 4, 0).signum(), Ordering::Less);
        assert_eq!(QuadraticNumber::new(2, -1, 0).signum(), Ordering::Less);
        assert_eq!(QuadraticNumber::new(0, 0, 3).signum(), Ordering::Equal);
        // (1+√5)/2 ≈ 1.618 between 1 and 2
        let phi = QuadraticNumber::halves(1, 1);
        assert_eq!(phi.cmp_int(&BigInt::from(1)), Ordering::Greater);
        assert_eq!(phi.cmp_int(&BigInt::from(2)), Ordering::Less);
    }

    #[test]
    fn theorem2_examples() {
        assert_eq!(lower_bound_theorem2(1, 2, 4), u(2));
        assert_eq!(lower_bound_theorem2(2, 3, 6), u(12));
        assert_eq!(lower_bound_theorem2(2, 2, 5), u(0));
        assert_eq!(lower_bound_theorem2(2, 1, 9), u(0));
        assert_eq!(lower_bound_theorem2(1, 1, 2), u(0));
    }

    #[test]
    fn remark_examples() {
        // 5 + 3·1 + 1·5 - 8
        assert_eq!(lower_bound_remark(1, 1, 5), u(5));
        assert_eq!(lower_bound_remark(1, 2, 6), u(6));
        assert_eq!(lower_bound_remark(1, 1, 20), u(35));
        assert_eq!(lower_bound_remark(2, 1, 9), u(0));
    }

    #[test]
    fn lemma2_dp_examples() {
        let dp = |p, q, n| lower_bound_lemma2_dp(p, q, n, ComplementBase::Exact);
        assert_eq!(dp(1, 1, 4), u(6));
        assert_eq!(dp(1, 2, 5), u(10));
        assert_eq!(dp(0, 3, 7), u(0));
        assert_eq!(dp(1, 1, 5), u(9));
        assert_eq!(lower_bound_lemma2_dp(1, 1, 5, ComplementBase::Weak), u(2));
    }

    #[test]
    fn theorem2_monotone_in_n() {
        for p in 1..=3 {
            let mut prev = BigUint::zero();
            for t in 0..=10 {
                let v = lower_bound_theorem2(p, p, 2 * p + 2 + t);
                assert!(v >= prev);
                prev = v;
            }
        }
    }

    #[test]
    fn superlinear_smoke() {
        assert!(lower_bound_theorem2(13, 13, 36) > binomial(36, 13));
    }

    #[test]
    fn report_examples() {
        let r = bounds_report(1, 1, 5, ComplementBase::Exact).unwrap();
        assert_eq!(r.gates_synth, 9);
        assert_eq!(r.lower_theorem2, u(2));
        assert_eq!(r.lower_lemma2_dp, u(9));
        assert!((r.upper_theorem1.to_f64() - 21.18034).abs() < 1e-4);

        let r = bounds_report(2, 1, 3, ComplementBase::Exact).unwrap();
        assert_eq!(r.gates_synth, 0);
        assert!(r.lower_theorem2.is_zero() && r.lower_remark.is_zero() && r.lower_lemma2_dp.is_zero());

        let r = bounds_report(2, 2, 6, ComplementBase::Exact).unwrap();
        r.check().unwrap();
        assert_eq!(r.rank, 15);
        assert!(r.csv_row().starts_with("2,2,6,"));
        assert_eq!(r.to_json()["upper_theorem1"]["halves"], true);

        assert!(matches!(bounds_report(1, 2, 2, ComplementBase::Exact), Err(Error::NotRepresentable)));
    }

    #[test]
    fn sandwich_on_grid_weak_and_exact() {
        for base in [ComplementBase::Exact, ComplementBase::Weak] {
            for p in 0..=3 {
                for q in 0..=3 {
                    for n in p + q..=9 {
                        bounds_report(p, q, n, base).unwrap();
                    }
                }
            }
        }
    }
}
