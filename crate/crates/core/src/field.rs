//! Exact scalar arithmetic: the rationals and odd prime fields.
//!
//! Every algorithm downstream is generic over [`Scalar`]. The two shipped
//! instantiations are [`Rat`] (arbitrary-precision rationals) and [`Fp`]
//! (residues modulo an odd prime, with the modulus carried per element so
//! that `Zero::zero()` and `One::one()` exist without a field context).
//! There is no floating point anywhere in this crate.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

/// Exact rational scalars.
pub type Rat = BigRational;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FieldError {
    #[error("characteristic must be 0 or an odd prime, got {0}")]
    BadCharacteristic(u64),
    #[error("denominator is zero")]
    ZeroDenominator,
    #[error("denominator {0} is not invertible modulo {1}")]
    NonInvertibleDenominator(String, u64),
    #[error("scalar kind does not match the field spec `{0}`")]
    KindMismatch(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FieldKind {
    Rationals,
    PrimeField,
}

/// The base field: `Q` or `F_p` with `p` an odd prime.
///
/// Characteristic 2 is rejected outright; the Koszul sign conventions and
/// graded commutators degenerate there.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct FieldSpec {
    kind: FieldKind,
    characteristic: u64,
}

impl FieldSpec {
    pub fn rationals() -> Self {
        FieldSpec { kind: FieldKind::Rationals, characteristic: 0 }
    }

    pub fn prime(p: u64) -> Result<Self, FieldError> {
        if p < 3 || p % 2 == 0 || !is_prime_u64(p) {
            return Err(FieldError::BadCharacteristic(p));
        }
        Ok(FieldSpec { kind: FieldKind::PrimeField, characteristic: p })
    }

    pub fn kind(&self) -> FieldKind {
        self.kind
    }

    pub fn characteristic(&self) -> u64 {
        self.characteristic
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            FieldKind::Rationals => write!(f, "Q"),
            FieldKind::PrimeField => write!(f, "F_{}", self.characteristic),
        }
    }
}

/// Deterministic Miller-Rabin for u64 (witness set valid below 2^64).
fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n == p {
            return true;
        }
        if n % p == 0 {
            return false;
        }
    }
    let mut d = n - 1;
    let mut s = 0u32;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1u64 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// An element of an exact field.
///
/// `from_ratio` is the only constructor that needs the [`FieldSpec`]; all
/// other operations are closed. `normalization_factor` is the hook that lets
/// the elimination code run fraction-free over `Q` (scale a pivot vector to
/// coprime integers) while staying monic over `F_p`.
pub trait Scalar:
    Clone
    + PartialEq
    + fmt::Debug
    + fmt::Display
    + Zero
    + One
    + Neg<Output = Self>
    + Sub<Output = Self>
    + Send
    + Sync
    + 'static
{
    /// Multiplicative inverse; `None` for zero (and for unbound integer
    /// literals over `F_p` other than ±1).
    fn inv(&self) -> Option<Self>;

    /// Exact element from a fraction in the given field.
    fn from_ratio(spec: &FieldSpec, num: &BigInt, den: &BigInt) -> Result<Self, FieldError>;

    /// Small-integer convenience constructor.
    fn from_int(spec: &FieldSpec, n: i64) -> Self {
        Self::from_ratio(spec, &BigInt::from(n), &BigInt::one())
            .expect("integer embeds in every field")
    }

    /// Canonical fraction string ("3/2", "-1", "4"); no floats, ever.
    fn ratio_string(&self) -> String {
        format!("{self}")
    }

    /// A nonzero factor `c` such that scaling the vector by `c` puts it in
    /// the shape elimination wants to store. Default: make the leading entry 1.
    fn normalization_factor(entries: &[(usize, Self)]) -> Self {
        match entries.first().and_then(|(_, c)| c.inv()) {
            Some(c) => c,
            None => Self::one(),
        }
    }

    /// Whether integer-valued matrices over this field may use the exact
    /// i128 fraction-free elimination fast path (characteristic-zero
    /// semantics only).
    const INTEGER_FAST_PATH: bool = false;

    /// The value as a small integer, when it is one.
    fn as_small_int(&self) -> Option<i64> {
        None
    }

    fn neg_if(self, negative: bool) -> Self {
        if negative {
            -self
        } else {
            self
        }
    }
}

impl Scalar for Rat {
    const INTEGER_FAST_PATH: bool = true;

    fn as_small_int(&self) -> Option<i64> {
        if self.is_integer() {
            self.numer().to_i64()
        } else {
            None
        }
    }

    fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            None
        } else {
            Some(self.recip())
        }
    }

    fn from_ratio(spec: &FieldSpec, num: &BigInt, den: &BigInt) -> Result<Self, FieldError> {
        if spec.kind() != FieldKind::Rationals {
            return Err(FieldError::KindMismatch(spec.to_string()));
        }
        if den.is_zero() {
            return Err(FieldError::ZeroDenominator);
        }
        Ok(BigRational::new(num.clone(), den.clone()))
    }

    /// Scale to integer entries with content 1 and positive leading entry.
    fn normalization_factor(entries: &[(usize, Self)]) -> Self {
        if entries.is_empty() {
            return Rat::one();
        }
        let mut den_lcm = BigInt::one();
        let mut num_gcd = BigInt::zero();
        for (_, c) in entries {
            den_lcm = den_lcm.lcm(c.denom());
            num_gcd = num_gcd.gcd(c.numer());
        }
        if num_gcd.is_zero() {
            return Rat::one();
        }
        let mut f = BigRational::new(den_lcm, num_gcd);
        if entries[0].1.is_negative() {
            f = -f;
        }
        f
    }
}

/// A prime-field element. `Int` is an unbound integer literal (what
/// `Zero::zero()`/`One::one()` produce); it binds to a modulus on first
/// contact with a `Mod` value. Category constructors always produce bound
/// values, so literals only survive in trivial corners (empty matrices,
/// unit companion vectors).
#[derive(Debug, Clone, Copy)]
pub enum Fp {
    Int(i64),
    Mod { v: u64, p: u64 },
}

impl Fp {
    fn reduce_int(n: i64, p: u64) -> u64 {
        let r = n.rem_euclid(p as i64);
        r as u64
    }

    fn bind(self, p: u64) -> u64 {
        match self {
            Fp::Int(n) => Self::reduce_int(n, p),
            Fp::Mod { v, p: q } => {
                assert_eq!(q, p, "mixed moduli {q} and {p}");
                v
            }
        }
    }

    pub fn modulus(&self) -> Option<u64> {
        match self {
            Fp::Int(_) => None,
            Fp::Mod { p, .. } => Some(*p),
        }
    }

    /// Extended Euclid inverse of `v` modulo `p`.
    fn inv_mod(v: u64, p: u64) -> Option<u64> {
        if v % p == 0 {
            return None;
        }
        let (mut r0, mut r1) = (p as i128, (v % p) as i128);
        let (mut t0, mut t1) = (0i128, 1i128);
        while r1 != 0 {
            let q = r0 / r1;
            (r0, r1) = (r1, r0 - q * r1);
            (t0, t1) = (t1, t0 - q * t1);
        }
        debug_assert_eq!(r0, 1, "{v} not invertible mod {p}");
        Some(t0.rem_euclid(p as i128) as u64)
    }
}

impl PartialEq for Fp {
    fn eq(&self, other: &Self) -> bool {
        match (self, other) {
            (Fp::Int(a), Fp::Int(b)) => a == b,
            (Fp::Mod { v, p }, Fp::Mod { v: w, p: q }) => p == q && v == w,
            (Fp::Int(a), Fp::Mod { v, p }) | (Fp::Mod { v, p }, Fp::Int(a)) => {
                Self::reduce_int(*a, *p) == *v
            }
        }
    }
}

impl Eq for Fp {}

impl fmt::Display for Fp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Fp::Int(n) => write!(f, "{n}"),
            Fp::Mod { v, .. } => write!(f, "{v}"),
        }
    }
}

impl Add for Fp {
    type Output = Fp;
    fn add(self, rhs: Fp) -> Fp {
        match (self, rhs) {
            (Fp::Int(a), Fp::Int(b)) => Fp::Int(a.checked_add(b).expect("literal overflow")),
            (a, b) => {
                let p = a.modulus().or(b.modulus()).unwrap();
                Fp::Mod { v: (a.bind(p) + b.bind(p)) % p, p }
            }
        }
    }
}

impl Sub for Fp {
    type Output = Fp;
    fn sub(self, rhs: Fp) -> Fp {
        self + (-rhs)
    }
}

impl Mul for Fp {
    type Output = Fp;
    fn mul(self, rhs: Fp) -> Fp {
        match (self, rhs) {
            (Fp::Int(a), Fp::Int(b)) => Fp::Int(a.checked_mul(b).expect("literal overflow")),
            (a, b) => {
                let p = a.modulus().or(b.modulus()).unwrap();
                Fp::Mod { v: mul_mod(a.bind(p), b.bind(p), p), p }
            }
        }
    }
}

impl Neg for Fp {
    type Output = Fp;
    fn neg(self) -> Fp {
        match self {
            Fp::Int(n) => Fp::Int(-n),
            Fp::Mod { v, p } => Fp::Mod { v: (p - v) % p, p },
        }
    }
}

impl Zero for Fp {
    fn zero() -> Self {
        Fp::Int(0)
    }
    fn is_zero(&self) -> bool {
        match self {
            Fp::Int(n) => *n == 0,
            Fp::Mod { v, .. } => *v == 0,
        }
    }
}

impl One for Fp {
    fn one() -> Self {
        Fp::Int(1)
    }
    fn is_one(&self) -> bool {
        match self {
            Fp::Int(n) => *n == 1,
            Fp::Mod { v, p } => *v == 1 % *p,
        }
    }
}

impl Scalar for Fp {
    fn inv(&self) -> Option<Self> {
        match self {
            Fp::Int(1) => Some(Fp::Int(1)),
            Fp::Int(-1) => Some(Fp::Int(-1)),
            Fp::Int(_) => None,
            Fp::Mod { v, p } => Fp::inv_mod(*v, *p).map(|v| Fp::Mod { v, p: *p }),
        }
    }

    fn from_ratio(spec: &FieldSpec, num: &BigInt, den: &BigInt) -> Result<Self, FieldError> {
        if spec.kind() != FieldKind::PrimeField {
            return Err(FieldError::KindMismatch(spec.to_string()));
        }
        if den.is_zero() {
            return Err(FieldError::ZeroDenominator);
        }
        let p = spec.characteristic();
        let pb = BigInt::from(p);
        let n = num.mod_floor(&pb).to_u64().unwrap();
        let d = den.mod_floor(&pb).to_u64().unwrap();
        let d_inv = Fp::inv_mod(d, p)
            .ok_or_else(|| FieldError::NonInvertibleDenominator(den.to_string(), p))?;
        Ok(Fp::Mod { v: mul_mod(n, d_inv, p), p })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn field_spec_rejects_char_two_and_composites() {
        assert!(FieldSpec::prime(2).is_err());
        assert!(FieldSpec::prime(9).is_err());
        assert!(FieldSpec::prime(1).is_err());
        assert!(FieldSpec::prime(5).is_ok());
        assert!(FieldSpec::prime(1_000_000_007).is_ok());
    }

    #[test]
    fn fp_arithmetic_is_exact() {
        let spec = FieldSpec::prime(5).unwrap();
        let a = Fp::from_int(&spec, 3);
        let b = Fp::from_int(&spec, 4);
        assert_eq!(a + b, Fp::from_int(&spec, 2));
        assert_eq!(a * b, Fp::from_int(&spec, 2));
        assert_eq!(a.inv().unwrap() * a, Fp::Int(1));
        // "1/3" over F_5 is 2.
        let c = Fp::from_ratio(&spec, &BigInt::from(1), &BigInt::from(3)).unwrap();
        assert_eq!(c, Fp::from_int(&spec, 2));
    }

    #[test]
    fn fp_literals_bind_on_contact() {
        let spec = FieldSpec::prime(7).unwrap();
        let x = Fp::from_int(&spec, 6);
        assert_eq!(Fp::one() + x, Fp::from_int(&spec, 0));
        assert_eq!(-Fp::one() * x, Fp::from_int(&spec, 1));
    }

    #[test]
    fn rational_normalization_clears_denominators() {
        let v: Vec<(usize, Rat)> = vec![
            (0, BigRational::new(BigInt::from(-3), BigInt::from(2))),
            (4, BigRational::new(BigInt::from(9), BigInt::from(4))),
        ];
        let f = <Rat as Scalar>::normalization_factor(&v);
        let scaled: Vec<Rat> = v.iter().map(|(_, c)| c * &f).collect();
        assert!(scaled.iter().all(|c| c.is_integer()));
        assert!(scaled[0].is_positive());
    }
}
