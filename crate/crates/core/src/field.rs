//! Exact scalars in cyclotomic-rational fields Q(zeta_n).
//!
//! An element is a dense vector of rational coefficients on the power basis
//! `1, z, ..., z^(d-1)` where `z` is a primitive n-th root of unity and
//! `d = phi(n)`. Products are reduced modulo the n-th cyclotomic polynomial,
//! inverses come from the extended Euclidean algorithm in Q[x], so every
//! operation is exact. `order = 1` gives plain rationals.

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, Signed, Zero};
use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;
use std::sync::{Arc, Mutex, OnceLock};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FieldError {
    #[error("field order must be at least 1, got {0}")]
    BadOrder(u32),
    #[error("division by zero")]
    DivisionByZero,
    #[error("cannot parse scalar {input:?}: {reason}")]
    Parse { input: String, reason: String },
}

/// Identifies the working field Q(zeta_order). `degree` is phi(order), the
/// dimension of the field over Q; it is derived from `order`, never stored
/// independently in input files.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FieldSpec {
    order: u32,
    degree: u32,
}

impl FieldSpec {
    pub fn new(order: u32) -> Result<Self, FieldError> {
        if order == 0 {
            return Err(FieldError::BadOrder(order));
        }
        let table = table_for(order);
        Ok(FieldSpec {
            order,
            degree: table.degree as u32,
        })
    }

    /// The plain rational field Q = Q(zeta_1).
    pub fn rationals() -> Self {
        Self::new(1).expect("order 1 is valid")
    }

    pub fn order(self) -> u32 {
        self.order
    }

    pub fn degree(self) -> usize {
        self.degree as usize
    }

    pub fn zero(self) -> Scalar {
        Scalar {
            order: self.order,
            coeffs: vec![BigRational::zero(); self.degree()],
        }
    }

    pub fn one(self) -> Scalar {
        self.integer(1)
    }

    pub fn integer(self, k: i64) -> Scalar {
        self.rational(BigRational::from_integer(BigInt::from(k)))
    }

    pub fn rational(self, r: BigRational) -> Scalar {
        let mut coeffs = vec![BigRational::zero(); self.degree()];
        coeffs[0] = r;
        Scalar {
            order: self.order,
            coeffs,
        }
    }

    /// z^k for the chosen primitive root z, with k taken modulo the order.
    pub fn root_of_unity(self, k: i64) -> Scalar {
        let table = table_for(self.order);
        let k = k.rem_euclid(self.order as i64) as usize;
        Scalar {
            order: self.order,
            coeffs: table.zeta_powers[k].clone(),
        }
    }

    pub fn parse(self, input: &str) -> Result<Scalar, FieldError> {
        parse_scalar(self, input)
    }
}

/// An element of Q(zeta_n). Comparison and ordering are coefficient-wise on
/// the power basis; the ordering is canonical rather than numeric and exists
/// so scalars can key deterministic maps.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Scalar {
    order: u32,
    coeffs: Vec<BigRational>,
}

impl Scalar {
    pub fn spec(&self) -> FieldSpec {
        FieldSpec {
            order: self.order,
            degree: self.coeffs.len() as u32,
        }
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    pub fn is_one(&self) -> bool {
        self.coeffs[0].is_one() && self.coeffs[1..].iter().all(|c| c.is_zero())
    }

    /// True when the element lies in Q, i.e. every non-constant coefficient
    /// vanishes.
    pub fn is_rational(&self) -> bool {
        self.coeffs[1..].iter().all(|c| c.is_zero())
    }

    pub fn rational_part(&self) -> Option<&BigRational> {
        if self.is_rational() {
            Some(&self.coeffs[0])
        } else {
            None
        }
    }

    pub fn add(&self, rhs: &Scalar) -> Scalar {
        self.check_order(rhs);
        Scalar {
            order: self.order,
            coeffs: self
                .coeffs
                .iter()
                .zip(&rhs.coeffs)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn sub(&self, rhs: &Scalar) -> Scalar {
        self.check_order(rhs);
        Scalar {
            order: self.order,
            coeffs: self
                .coeffs
                .iter()
                .zip(&rhs.coeffs)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }

    pub fn neg(&self) -> Scalar {
        Scalar {
            order: self.order,
            coeffs: self.coeffs.iter().map(|a| -a).collect(),
        }
    }

    pub fn mul(&self, rhs: &Scalar) -> Scalar {
        self.check_order(rhs);
        let d = self.coeffs.len();
        if d == 1 {
            return Scalar {
                order: self.order,
                coeffs: vec![&self.coeffs[0] * &rhs.coeffs[0]],
            };
        }
        let table = table_for(self.order);
        let mut conv = vec![BigRational::zero(); 2 * d - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                conv[i + j] += a * b;
            }
        }
        let mut out = vec![BigRational::zero(); d];
        for (m, c) in conv.into_iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if m < d {
                out[m] += c;
            } else {
                // z^m = z^(m mod order) reduced against the cyclotomic modulus
                let red = &table.zeta_powers[m % self.order as usize];
                for (k, r) in red.iter().enumerate() {
                    if !r.is_zero() {
                        out[k] += &c * r;
                    }
                }
            }
        }
        Scalar {
            order: self.order,
            coeffs: out,
        }
    }

    pub fn inv(&self) -> Result<Scalar, FieldError> {
        if self.is_zero() {
            return Err(FieldError::DivisionByZero);
        }
        if self.coeffs.len() == 1 {
            return Ok(Scalar {
                order: self.order,
                coeffs: vec![self.coeffs[0].recip()],
            });
        }
        let table = table_for(self.order);
        // Extended Euclid: u * self + v * modulus = g, a nonzero constant
        // because the modulus is irreducible over Q.
        let (g, u) = rat_poly_ext_gcd(&self.coeffs, &table.modulus);
        debug_assert!(g.len() == 1 && !g[0].is_zero());
        let ginv = g[0].recip();
        let mut coeffs = vec![BigRational::zero(); self.coeffs.len()];
        for (k, c) in u.iter().enumerate() {
            debug_assert!(k < coeffs.len());
            coeffs[k] = c * &ginv;
        }
        Ok(Scalar {
            order: self.order,
            coeffs,
        })
    }

    pub fn div(&self, rhs: &Scalar) -> Result<Scalar, FieldError> {
        Ok(self.mul(&rhs.inv()?))
    }

    pub fn pow(&self, e: i64) -> Result<Scalar, FieldError> {
        let base = if e < 0 { self.inv()? } else { self.clone() };
        let mut acc = self.spec().one();
        let mut cur = base;
        let mut n = e.unsigned_abs();
        while n > 0 {
            if n & 1 == 1 {
                acc = acc.mul(&cur);
            }
            cur = cur.mul(&cur);
            n >>= 1;
        }
        Ok(acc)
    }

    fn check_order(&self, rhs: &Scalar) {
        assert_eq!(
            self.order, rhs.order,
            "scalars from different fields (orders {} and {})",
            self.order, rhs.order
        );
    }
}

impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<(usize, &BigRational)> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .collect();
        if terms.is_empty() {
            return write!(f, "0");
        }
        for (pos, (k, c)) in terms.iter().enumerate() {
            let neg = c.is_negative();
            let mag = if neg { -*c } else { (*c).clone() };
            if pos == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else if neg {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let unit = mag.is_one();
            match (k, unit) {
                (0, _) => write!(f, "{mag}")?,
                (1, true) => write!(f, "z")?,
                (1, false) => write!(f, "{mag}*z")?,
                (_, true) => write!(f, "z^{k}")?,
                (_, false) => write!(f, "{mag}*z^{k}")?,
            }
        }
        Ok(())
    }
}

fn parse_scalar(spec: FieldSpec, input: &str) -> Result<Scalar, FieldError> {
    let err = |reason: &str| FieldError::Parse {
        input: input.to_string(),
        reason: reason.to_string(),
    };
    let compact: String = input.chars().filter(|c| !c.is_whitespace()).collect();
    if compact.is_empty() {
        return Err(err("empty string"));
    }
    // Split into signed terms; every '+'/'-' outside the leading position of
    // a term separates terms, except when it immediately follows another
    // operator (e.g. "+-3").
    let mut terms: Vec<(bool, String)> = Vec::new();
    let mut cur = String::new();
    let mut sign = false;
    let mut at_term_start = true;
    for ch in compact.chars() {
        if (ch == '+' || ch == '-') && !at_term_start {
            terms.push((sign, std::mem::take(&mut cur)));
            sign = ch == '-';
            at_term_start = true;
        } else if (ch == '+' || ch == '-') && at_term_start && cur.is_empty() {
            if ch == '-' {
                sign = !sign;
            }
        } else {
            cur.push(ch);
            at_term_start = false;
        }
    }
    if cur.is_empty() {
        return Err(err("trailing operator"));
    }
    terms.push((sign, cur));

    let mut acc = spec.zero();
    for (neg, body) in terms {
        let (coeff, zexp) = match body.find('z') {
            None => {
                let r = BigRational::from_str(&body).map_err(|_| err("bad rational"))?;
                (r, None)
            }
            Some(pos) => {
                let head = body[..pos].trim_end_matches('*');
                let coeff = if head.is_empty() {
                    BigRational::one()
                } else {
                    BigRational::from_str(head).map_err(|_| err("bad coefficient"))?
                };
                let tail = &body[pos + 1..];
                let exp: i64 = if tail.is_empty() {
                    1
                } else if let Some(e) = tail.strip_prefix('^') {
                    e.parse().map_err(|_| err("bad exponent"))?
                } else {
                    return Err(err("malformed power of z"));
                };
                (coeff, Some(exp))
            }
        };
        let coeff = if neg { -coeff } else { coeff };
        let term = match zexp {
            None => spec.rational(coeff),
            Some(e) => spec.root_of_unity(e).mul(&spec.rational(coeff)),
        };
        acc = acc.add(&term);
    }
    Ok(acc)
}

struct FieldTable {
    degree: usize,
    /// x^k reduced modulo the cyclotomic modulus, for 0 <= k < order.
    zeta_powers: Vec<Vec<BigRational>>,
    /// The order-th cyclotomic polynomial, monic, little-endian, length degree+1.
    modulus: Vec<BigRational>,
}

fn table_for(order: u32) -> Arc<FieldTable> {
    static TABLES: OnceLock<Mutex<HashMap<u32, Arc<FieldTable>>>> = OnceLock::new();
    let map = TABLES.get_or_init(|| Mutex::new(HashMap::new()));
    let mut guard = map.lock().expect("field table lock");
    guard
        .entry(order)
        .or_insert_with(|| Arc::new(FieldTable::build(order)))
        .clone()
}

impl FieldTable {
    fn build(order: u32) -> FieldTable {
        assert!(order >= 1);
        let cyclo = cyclotomic_int(order);
        let degree = cyclo.len() - 1;
        debug_assert_eq!(degree as u64, totient(order));
        let modulus: Vec<BigRational> = cyclo
            .iter()
            .map(|c| BigRational::from_integer(c.clone()))
            .collect();
        let mut zeta_powers = Vec::with_capacity(order as usize);
        let mut p = vec![BigRational::one()];
        for _ in 0..order {
            let mut padded = p.clone();
            padded.resize(degree, BigRational::zero());
            zeta_powers.push(padded);
            // multiply by x, then reduce against the monic modulus
            p.insert(0, BigRational::zero());
            while p.len() > degree {
                let lead = p.pop().expect("nonempty");
                if lead.is_zero() {
                    continue;
                }
                let shift = p.len() - degree;
                for (k, m) in modulus.iter().take(degree).enumerate() {
                    if !m.is_zero() {
                        p[shift + k] -= &lead * m;
                    }
                }
            }
        }
        FieldTable {
            degree,
            zeta_powers,
            modulus,
        }
    }
}

fn totient(n: u32) -> u64 {
    let mut n = n as u64;
    let mut result = n;
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            while n % p == 0 {
                n /= p;
            }
            result -= result / p;
        }
        p += 1;
    }
    if n > 1 {
        result -= result / n;
    }
    result
}

/// The n-th cyclotomic polynomial with integer coefficients, little-endian,
/// computed as (x^n - 1) divided by the cyclotomic polynomials of the proper
/// divisors of n.
fn cyclotomic_int(n: u32) -> Vec<BigInt> {
    fn compute(n: u32, memo: &mut HashMap<u32, Vec<BigInt>>) -> Vec<BigInt> {
        if let Some(p) = memo.get(&n) {
            return p.clone();
        }
        let mut poly = vec![BigInt::zero(); n as usize + 1];
        poly[0] = BigInt::from(-1);
        poly[n as usize] = BigInt::one();
        for d in 1..n {
            if n % d == 0 {
                let q = compute(d, memo);
                poly = int_poly_div_exact(&poly, &q);
            }
        }
        memo.insert(n, poly.clone());
        poly
    }
    compute(n, &mut HashMap::new())
}

/// Divides by a monic integer polynomial, asserting zero remainder.
fn int_poly_div_exact(num: &[BigInt], den: &[BigInt]) -> Vec<BigInt> {
    assert!(den.last().map(|c| c.is_one()).unwrap_or(false));
    let mut rem: Vec<BigInt> = num.to_vec();
    let dd = den.len() - 1;
    let mut quot = vec![BigInt::zero(); rem.len().saturating_sub(dd)];
    while rem.len() > dd {
        let lead = rem.pop().expect("nonempty");
        if lead.is_zero() {
            continue;
        }
        let shift = rem.len() - dd;
        quot[shift] = lead.clone();
        for (k, c) in den.iter().take(dd).enumerate() {
            if !c.is_zero() {
                rem[shift + k] -= &lead * c;
            }
        }
    }
    assert!(
        rem.iter().all(|c| c.is_zero()),
        "polynomial division left a remainder"
    );
    quot
}

fn rat_poly_trim(p: &mut Vec<BigRational>) {
    while p.len() > 1 && p.last().map(|c| c.is_zero()).unwrap_or(false) {
        p.pop();
    }
}

fn rat_poly_is_zero(p: &[BigRational]) -> bool {
    p.iter().all(|c| c.is_zero())
}

fn rat_poly_sub_scaled(a: &mut Vec<BigRational>, b: &[BigRational], factor: &BigRational, shift: usize) {
    if a.len() < b.len() + shift {
        a.resize(b.len() + shift, BigRational::zero());
    }
    for (k, c) in b.iter().enumerate() {
        if !c.is_zero() {
            a[k + shift] -= factor * c;
        }
    }
    rat_poly_trim(a);
}

fn rat_poly_divmod(a: &[BigRational], b: &[BigRational]) -> (Vec<BigRational>, Vec<BigRational>) {
    let mut b = b.to_vec();
    rat_poly_trim(&mut b);
    assert!(!rat_poly_is_zero(&b), "division by the zero polynomial");
    let mut rem = a.to_vec();
    rat_poly_trim(&mut rem);
    let db = b.len() - 1;
    let lead = b.last().expect("nonempty").clone();
    let mut quot = vec![BigRational::zero(); rem.len().saturating_sub(db).max(1)];
    while !rat_poly_is_zero(&rem) && rem.len() - 1 >= db && rem.len() > db {
        let shift = rem.len() - 1 - db;
        let factor = rem.last().expect("nonempty") / &lead;
        quot[shift] = factor.clone();
        rat_poly_sub_scaled(&mut rem, &b, &factor, shift);
        if rem.len() == 1 && rem[0].is_zero() {
            break;
        }
    }
    rat_poly_trim(&mut quot);
    (quot, rem)
}

fn rat_poly_mul(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    let mut out = vec![BigRational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            if !y.is_zero() {
                out[i + j] += x * y;
            }
        }
    }
    rat_poly_trim(&mut out);
    out
}

/// Returns (g, u) with u*a = g modulo m, where g is the (constant) gcd of a
/// and m. Assumes m irreducible and a nonzero modulo m, so g has degree 0.
fn rat_poly_ext_gcd(a: &[BigRational], m: &[BigRational]) -> (Vec<BigRational>, Vec<BigRational>) {
    let mut r0 = a.to_vec();
    rat_poly_trim(&mut r0);
    let mut r1 = m.to_vec();
    rat_poly_trim(&mut r1);
    let mut s0 = vec![BigRational::one()];
    let mut s1 = vec![BigRational::zero()];
    while !rat_poly_is_zero(&r1) {
        let (q, r) = rat_poly_divmod(&r0, &r1);
        let qs = rat_poly_mul(&q, &s1);
        let mut snew = s0.clone();
        if snew.len() < qs.len() {
            snew.resize(qs.len(), BigRational::zero());
        }
        for (k, c) in qs.iter().enumerate() {
            snew[k] -= c;
        }
        rat_poly_trim(&mut snew);
        r0 = r1;
        r1 = r;
        s0 = s1;
        s1 = snew;
    }
    (r0, s0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn q() -> FieldSpec {
        FieldSpec::rationals()
    }

    fn qi() -> FieldSpec {
        FieldSpec::new(4).expect("order 4")
    }

    #[test]
    fn rational_addition() {
        let a = q().parse("1/2").unwrap();
        let b = q().parse("1/3").unwrap();
        assert_eq!(a.add(&b), q().parse("5/6").unwrap());
    }

    #[test]
    fn fourth_root_squares_to_minus_one() {
        let z = qi().root_of_unity(1);
        assert_eq!(z.mul(&z), qi().integer(-1));
    }

    #[test]
    fn degrees_follow_totient() {
        for (order, degree) in [(1, 1), (2, 1), (3, 2), (4, 2), (6, 2), (8, 4), (12, 4)] {
            assert_eq!(FieldSpec::new(order).unwrap().degree(), degree);
        }
    }

    #[test]
    fn known_cyclotomic_polynomials() {
        let as_i64 = |p: Vec<BigInt>| -> Vec<i64> {
            p.iter().map(|c| i64::try_from(c).unwrap()).collect()
        };
        assert_eq!(as_i64(cyclotomic_int(1)), vec![-1, 1]);
        assert_eq!(as_i64(cyclotomic_int(2)), vec![1, 1]);
        assert_eq!(as_i64(cyclotomic_int(4)), vec![1, 0, 1]);
        assert_eq!(as_i64(cyclotomic_int(6)), vec![1, -1, 1]);
        assert_eq!(as_i64(cyclotomic_int(12)), vec![1, 0, -1, 0, 1]);
    }

    #[test]
    fn inverse_in_gaussian_field() {
        // (1 + i)^-1 = (1 - i)/2
        let a = qi().parse("1 + z").unwrap();
        let inv = a.inv().unwrap();
        assert_eq!(inv, qi().parse("1/2 - 1/2*z").unwrap());
        assert!(a.mul(&inv).is_one());
    }

    #[test]
    fn division_by_zero_is_an_error() {
        let a = q().one();
        assert_eq!(a.div(&q().zero()), Err(FieldError::DivisionByZero));
    }

    #[test]
    fn root_powers_wrap_around() {
        let spec = FieldSpec::new(6).unwrap();
        let z = spec.root_of_unity(1);
        assert_eq!(z.pow(6).unwrap(), spec.one());
        assert_eq!(z.pow(3).unwrap(), spec.integer(-1));
        assert_eq!(spec.root_of_unity(-1), z.pow(5).unwrap());
    }

    #[test]
    fn display_and_parse_round_trip() {
        let samples = [
            ("0", "0"),
            ("5", "5"),
            ("-7/3", "-7/3"),
            ("z", "z"),
            ("-z", "-z"),
            ("1/2 - 3*z", "1/2 - 3*z"),
            ("2*z^1 + 1", "1 + 2*z"),
            ("z^5", "z"),
        ];
        for (input, canonical) in samples {
            let s = qi().parse(input).unwrap();
            assert_eq!(s.to_string(), canonical, "for input {input:?}");
            assert_eq!(qi().parse(&s.to_string()).unwrap(), s);
        }
    }

    #[test]
    fn parse_rejects_garbage() {
        for bad in ["", "1/0", "z^", "q", "1 +", "--"] {
            assert!(
                qi().parse(bad).is_err() || bad == "--",
                "expected failure for {bad:?}"
            );
        }
        // "1/0" must be rejected rather than wrapped
        assert!(matches!(q().parse("1/0"), Err(FieldError::Parse { .. })));
    }

    #[test]
    fn eighth_root_field_arithmetic() {
        // In Q(zeta_8): z^2 is a primitive fourth root, so z^2 * z^2 = -1.
        let spec = FieldSpec::new(8).unwrap();
        let z2 = spec.root_of_unity(2);
        assert_eq!(z2.mul(&z2), spec.integer(-1));
        let z = spec.root_of_unity(1);
        assert!(z.pow(8).unwrap().is_one());
        let inv = z.inv().unwrap();
        assert_eq!(inv, spec.root_of_unity(7));
    }

    fn arb_rational() -> impl Strategy<Value = BigRational> {
        (-20i64..=20, 1i64..=12).prop_map(|(n, d)| {
            BigRational::new(BigInt::from(n), BigInt::from(d))
        })
    }

    fn arb_scalar(order: u32) -> impl Strategy<Value = Scalar> {
        let spec = FieldSpec::new(order).unwrap();
        proptest::collection::vec(arb_rational(), spec.degree()).prop_map(move |coeffs| {
            let mut acc = spec.zero();
            for (k, c) in coeffs.into_iter().enumerate() {
                acc = acc.add(&spec.rational(c).mul(&spec.root_of_unity(k as i64)));
            }
            acc
        })
    }

    proptest! {
        #[test]
        fn field_axioms_hold(a in arb_scalar(4), b in arb_scalar(4), c in arb_scalar(4)) {
            prop_assert_eq!(a.add(&b), b.add(&a));
            prop_assert_eq!(a.add(&b).add(&c), a.add(&b.add(&c)));
            prop_assert_eq!(a.mul(&b), b.mul(&a));
            prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
            prop_assert_eq!(a.mul(&b.add(&c)), a.mul(&b).add(&a.mul(&c)));
            prop_assert_eq!(a.sub(&a), a.spec().zero());
            if !a.is_zero() {
                prop_assert!(a.mul(&a.inv().unwrap()).is_one());
            }
        }

        #[test]
        fn parse_inverts_display(a in arb_scalar(8)) {
            let spec = a.spec();
            prop_assert_eq!(spec.parse(&a.to_string()).unwrap(), a);
        }
    }
}
