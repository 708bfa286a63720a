//! Exact field arithmetic over the rationals and prime fields GF(p).
//!
//! A [`Scalar`] carries its [`FieldSpec`] with it; mixing scalars from different
//! fields in a binary operation is a caller bug and panics rather than coercing.
//! Rational values are reduced fractions with a positive denominator, prime
//! field values are residues in `[0, p)`, so equality is plain representation
//! equality.

use std::fmt;
use std::sync::Arc;

use num::bigint::{BigInt, BigUint};
use num::integer::Integer;
use num::rational::BigRational;
use num::{One, Zero};

/// Errors from field construction and scalar parsing.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FieldError {
    /// The requested prime-field modulus failed the primality test.
    NotPrime(BigUint),
    /// The modulus must be at least 2.
    ModulusTooSmall(BigUint),
    /// The token does not match the scalar syntax of the field.
    MalformedScalar(String),
    /// A fraction with denominator zero.
    ZeroDenominator(String),
    /// Fraction syntax is only meaningful over the rationals.
    FractionOverPrimeField(String),
    /// Prime-field scalars are written as nonnegative integers.
    NegativeResidue(String),
}

impl fmt::Display for FieldError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldError::NotPrime(p) => write!(f, "{p} is not prime"),
            FieldError::ModulusTooSmall(p) => write!(f, "modulus {p} is too small"),
            FieldError::MalformedScalar(t) => write!(f, "malformed scalar token {t:?}"),
            FieldError::ZeroDenominator(t) => write!(f, "zero denominator in {t:?}"),
            FieldError::FractionOverPrimeField(t) => {
                write!(f, "fraction {t:?} is invalid over a prime field")
            }
            FieldError::NegativeResidue(t) => {
                write!(f, "negative value {t:?} is invalid over a prime field")
            }
        }
    }
}

impl std::error::Error for FieldError {}

/// The coefficient field: the rationals, or GF(p) for a prime p.
///
/// The prime modulus is verified at construction by a deterministic
/// Miller-Rabin test, so a `PrimeField` value always names a genuine field.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum FieldSpec {
    Rational,
    PrimeField(Arc<BigUint>),
}

impl FieldSpec {
    pub fn rational() -> Self {
        FieldSpec::Rational
    }

    /// A prime field with the given modulus. Fails if `p` is not prime.
    pub fn prime_field(p: BigUint) -> Result<Self, FieldError> {
        if p < BigUint::from(2u32) {
            return Err(FieldError::ModulusTooSmall(p));
        }
        if !is_prime(&p) {
            return Err(FieldError::NotPrime(p));
        }
        Ok(FieldSpec::PrimeField(Arc::new(p)))
    }

    pub fn prime_field_u64(p: u64) -> Result<Self, FieldError> {
        Self::prime_field(BigUint::from(p))
    }

    /// 0 for the rationals, p for GF(p).
    pub fn characteristic(&self) -> BigUint {
        match self {
            FieldSpec::Rational => BigUint::zero(),
            FieldSpec::PrimeField(p) => (**p).clone(),
        }
    }

    /// True iff the characteristic is zero or larger than `n`.
    pub fn characteristic_admits(&self, n: usize) -> bool {
        match self {
            FieldSpec::Rational => true,
            FieldSpec::PrimeField(p) => **p > BigUint::from(n),
        }
    }

    /// True iff the field contains at least `k` distinct nonzero elements.
    pub fn has_distinct_nonzero(&self, k: usize) -> bool {
        match self {
            FieldSpec::Rational => true,
            FieldSpec::PrimeField(p) => **p > BigUint::from(k),
        }
    }

    pub fn zero(&self) -> Scalar {
        match self {
            FieldSpec::Rational => Scalar {
                field: self.clone(),
                repr: Repr::Rational(BigRational::zero()),
            },
            FieldSpec::PrimeField(_) => Scalar {
                field: self.clone(),
                repr: Repr::Residue(BigUint::zero()),
            },
        }
    }

    pub fn one(&self) -> Scalar {
        self.from_i64(1)
    }

    /// Embeds a small integer: as itself over Q, reduced mod p over GF(p).
    pub fn from_i64(&self, v: i64) -> Scalar {
        match self {
            FieldSpec::Rational => Scalar {
                field: self.clone(),
                repr: Repr::Rational(BigRational::from_integer(BigInt::from(v))),
            },
            FieldSpec::PrimeField(p) => {
                let modulus = BigInt::from((**p).clone());
                let residue = BigInt::from(v).mod_floor(&modulus);
                Scalar {
                    field: self.clone(),
                    repr: Repr::Residue(residue.to_biguint().expect("mod_floor is nonnegative")),
                }
            }
        }
    }

    /// Builds a reduced fraction over Q; panics over a prime field or on a zero denominator.
    pub fn from_fraction(&self, numer: i64, denom: i64) -> Scalar {
        match self {
            FieldSpec::Rational => {
                assert!(denom != 0, "zero denominator");
                Scalar {
                    field: self.clone(),
                    repr: Repr::Rational(BigRational::new(BigInt::from(numer), BigInt::from(denom))),
                }
            }
            FieldSpec::PrimeField(_) => panic!("from_fraction is only defined over the rationals"),
        }
    }

    /// Parses a scalar token: `int` or `int/uint` over Q, a nonnegative
    /// integer (reduced mod p) over GF(p).
    pub fn parse_scalar(&self, text: &str) -> Result<Scalar, FieldError> {
        match self {
            FieldSpec::Rational => {
                let (numer_text, denom_text) = match text.split_once('/') {
                    Some((n, d)) => (n, Some(d)),
                    None => (text, None),
                };
                let numer = parse_signed_int(numer_text)
                    .ok_or_else(|| FieldError::MalformedScalar(text.to_string()))?;
                let denom = match denom_text {
                    None => BigUint::one(),
                    Some(d) => parse_unsigned_int(d)
                        .ok_or_else(|| FieldError::MalformedScalar(text.to_string()))?,
                };
                if denom.is_zero() {
                    return Err(FieldError::ZeroDenominator(text.to_string()));
                }
                Ok(Scalar {
                    field: self.clone(),
                    repr: Repr::Rational(BigRational::new(numer, BigInt::from(denom))),
                })
            }
            FieldSpec::PrimeField(p) => {
                if text.contains('/') {
                    return Err(FieldError::FractionOverPrimeField(text.to_string()));
                }
                if text.starts_with('-') {
                    return Err(FieldError::NegativeResidue(text.to_string()));
                }
                let value = parse_unsigned_int(text)
                    .ok_or_else(|| FieldError::MalformedScalar(text.to_string()))?;
                Ok(Scalar {
                    field: self.clone(),
                    repr: Repr::Residue(value % &**p),
                })
            }
        }
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldSpec::Rational => write!(f, "rational"),
            FieldSpec::PrimeField(p) => write!(f, "gf:{p}"),
        }
    }
}

fn parse_signed_int(text: &str) -> Option<BigInt> {
    let digits = text.strip_prefix('-').unwrap_or(text);
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    text.parse::<BigInt>().ok()
}

fn parse_unsigned_int(text: &str) -> Option<BigUint> {
    if text.is_empty() || !text.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    text.parse::<BigUint>().ok()
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
enum Repr {
    Rational(BigRational),
    Residue(BigUint),
}

/// An immutable exact field element tagged with its field.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Scalar {
    field: FieldSpec,
    repr: Repr,
}

impl Scalar {
    pub fn field(&self) -> &FieldSpec {
        &self.field
    }

    pub fn is_zero(&self) -> bool {
        match &self.repr {
            Repr::Rational(q) => q.is_zero(),
            Repr::Residue(r) => r.is_zero(),
        }
    }

    pub fn is_one(&self) -> bool {
        match &self.repr {
            Repr::Rational(q) => q.is_one(),
            Repr::Residue(r) => r.is_one(),
        }
    }

    /// True iff the value is the field's 0 or 1.
    pub fn is_zero_or_one(&self) -> bool {
        self.is_zero() || self.is_one()
    }

    /// Multiplicative inverse; `None` for zero. GF(p) inversion runs the
    /// extended Euclidean algorithm.
    pub fn inverse(&self) -> Option<Scalar> {
        if self.is_zero() {
            return None;
        }
        let repr = match &self.repr {
            Repr::Rational(q) => Repr::Rational(q.recip()),
            Repr::Residue(r) => {
                let p = match &self.field {
                    FieldSpec::PrimeField(p) => BigInt::from((**p).clone()),
                    FieldSpec::Rational => unreachable!("residue repr implies prime field"),
                };
                let a = BigInt::from(r.clone());
                let ext = a.extended_gcd(&p);
                debug_assert!(ext.gcd.is_one(), "residue is coprime to a prime modulus");
                let inv = ext.x.mod_floor(&p);
                Repr::Residue(inv.to_biguint().expect("mod_floor is nonnegative"))
            }
        };
        Some(Scalar {
            field: self.field.clone(),
            repr,
        })
    }

    /// `self^e` by binary exponentiation; `e = 0` gives 1.
    pub fn pow(&self, e: usize) -> Scalar {
        let mut result = self.field.one();
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                result = &result * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        result
    }

    /// Canonical text form: `n` or `n/d` over Q, the residue over GF(p).
    pub fn render(&self) -> String {
        match &self.repr {
            Repr::Rational(q) => {
                if q.denom().is_one() {
                    format!("{}", q.numer())
                } else {
                    format!("{}/{}", q.numer(), q.denom())
                }
            }
            Repr::Residue(r) => format!("{r}"),
        }
    }

    fn check_same_field(&self, other: &Scalar, op: &str) {
        assert!(
            self.field == other.field,
            "field mismatch in scalar {op}: {} vs {}",
            self.field,
            other.field
        );
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

impl std::ops::Add for &Scalar {
    type Output = Scalar;
    fn add(self, other: &Scalar) -> Scalar {
        self.check_same_field(other, "addition");
        let repr = match (&self.repr, &other.repr) {
            (Repr::Rational(a), Repr::Rational(b)) => Repr::Rational(a + b),
            (Repr::Residue(a), Repr::Residue(b)) => {
                let p = match &self.field {
                    FieldSpec::PrimeField(p) => &**p,
                    FieldSpec::Rational => unreachable!(),
                };
                Repr::Residue((a + b) % p)
            }
            _ => unreachable!("repr kind always matches field kind"),
        };
        Scalar {
            field: self.field.clone(),
            repr,
        }
    }
}

impl std::ops::Sub for &Scalar {
    type Output = Scalar;
    fn sub(self, other: &Scalar) -> Scalar {
        self.check_same_field(other, "subtraction");
        let repr = match (&self.repr, &other.repr) {
            (Repr::Rational(a), Repr::Rational(b)) => Repr::Rational(a - b),
            (Repr::Residue(a), Repr::Residue(b)) => {
                let p = match &self.field {
                    FieldSpec::PrimeField(p) => &**p,
                    FieldSpec::Rational => unreachable!(),
                };
                Repr::Residue((a + p - b) % p)
            }
            _ => unreachable!("repr kind always matches field kind"),
        };
        Scalar {
            field: self.field.clone(),
            repr,
        }
    }
}

impl std::ops::Mul for &Scalar {
    type Output = Scalar;
    fn mul(self, other: &Scalar) -> Scalar {
        self.check_same_field(other, "multiplication");
        let repr = match (&self.repr, &other.repr) {
            (Repr::Rational(a), Repr::Rational(b)) => Repr::Rational(a * b),
            (Repr::Residue(a), Repr::Residue(b)) => {
                let p = match &self.field {
                    FieldSpec::PrimeField(p) => &**p,
                    FieldSpec::Rational => unreachable!(),
                };
                Repr::Residue((a * b) % p)
            }
            _ => unreachable!("repr kind always matches field kind"),
        };
        Scalar {
            field: self.field.clone(),
            repr,
        }
    }
}

impl std::ops::Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        let repr = match &self.repr {
            Repr::Rational(a) => Repr::Rational(-a),
            Repr::Residue(a) => {
                let p = match &self.field {
                    FieldSpec::PrimeField(p) => &**p,
                    FieldSpec::Rational => unreachable!(),
                };
                if a.is_zero() {
                    Repr::Residue(BigUint::zero())
                } else {
                    Repr::Residue(p - a)
                }
            }
        };
        Scalar {
            field: self.field.clone(),
            repr,
        }
    }
}

/// Deterministic primality test.
///
/// Trial division by small primes, then Miller-Rabin with the fixed witness
/// set {2, ..., 37}, which decides every n below 3.3e24 (in particular every
/// u64). Larger moduli additionally run the next twenty prime witnesses.
fn is_prime(n: &BigUint) -> bool {
    const SMALL_PRIMES: [u64; 25] = [
        2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71, 73, 79, 83,
        89, 97,
    ];
    if *n < BigUint::from(2u32) {
        return false;
    }
    for q in SMALL_PRIMES {
        let q = BigUint::from(q);
        if *n == q {
            return true;
        }
        if (n % &q).is_zero() {
            return false;
        }
    }

    let one = BigUint::one();
    let n_minus_1 = n - &one;
    let s = n_minus_1.trailing_zeros().expect("n-1 > 0");
    let d = &n_minus_1 >> s;

    let mut witnesses: Vec<u64> = vec![2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    if n.bits() > 64 {
        witnesses.extend([
            41, 43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89, 97, 101, 103, 107, 109, 113, 127, 131,
        ]);
    }
    'witness: for a in witnesses {
        let a = BigUint::from(a);
        let mut x = a.modpow(&d, n);
        if x.is_one() || x == n_minus_1 {
            continue;
        }
        for _ in 1..s {
            x = x.modpow(&BigUint::from(2u32), n);
            if x == n_minus_1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn gf(p: u64) -> FieldSpec {
        FieldSpec::prime_field_u64(p).unwrap()
    }

    #[test]
    fn prime_field_rejects_composites() {
        assert!(matches!(
            FieldSpec::prime_field_u64(1),
            Err(FieldError::ModulusTooSmall(_))
        ));
        for composite in [4u64, 6, 9, 91, 561, 1_000_000, 25326001] {
            assert!(
                matches!(FieldSpec::prime_field_u64(composite), Err(FieldError::NotPrime(_))),
                "{composite} accepted"
            );
        }
        for prime in [2u64, 3, 5, 7, 11, 97, 101, 7919, 2_147_483_647, 18_446_744_073_709_551_557] {
            assert!(FieldSpec::prime_field_u64(prime).is_ok(), "{prime} rejected");
        }
    }

    #[test]
    fn prime_field_large_modulus() {
        // 2^89 - 1 is a Mersenne prime; 2^90 + 1 is divisible by 5.
        let p = (BigUint::one() << 89) - BigUint::one();
        assert!(FieldSpec::prime_field(p).is_ok());
        let c = (BigUint::one() << 90) + BigUint::one();
        assert!(FieldSpec::prime_field(c).is_err());
    }

    #[test]
    fn characteristic_admits_examples() {
        assert!(FieldSpec::rational().characteristic_admits(100));
        assert!(!gf(2).characteristic_admits(3));
        assert!(gf(7).characteristic_admits(5));
        assert!(!gf(7).characteristic_admits(7));
    }

    #[test]
    fn parse_scalar_examples() {
        let q = FieldSpec::rational();
        assert_eq!(q.parse_scalar("-3/6").unwrap(), q.from_fraction(-1, 2));
        assert_eq!(gf(3).parse_scalar("5").unwrap(), gf(3).from_i64(2));
        assert!(matches!(
            gf(3).parse_scalar("1/2"),
            Err(FieldError::FractionOverPrimeField(_))
        ));
        assert!(matches!(
            gf(3).parse_scalar("-1"),
            Err(FieldError::NegativeResidue(_))
        ));
        assert!(matches!(
            q.parse_scalar("3/0"),
            Err(FieldError::ZeroDenominator(_))
        ));
        for bad in ["", "1/2/3", "a", "1.5", "-", "2/-3", "+4"] {
            assert!(q.parse_scalar(bad).is_err(), "{bad:?} accepted over Q");
        }
    }

    #[test]
    fn render_is_canonical() {
        let q = FieldSpec::rational();
        assert_eq!(q.from_fraction(-1, 2).render(), "-1/2");
        assert_eq!(q.from_i64(7).render(), "7");
        assert_eq!(q.zero().render(), "0");
        assert_eq!(gf(5).from_i64(-1).render(), "4");
    }

    #[test]
    fn gf_inverse_by_extended_euclid() {
        let f = gf(11);
        for v in 1..11i64 {
            let s = f.from_i64(v);
            let inv = s.inverse().unwrap();
            assert!((&s * &inv).is_one(), "{v} * {inv} != 1 mod 11");
        }
        assert!(f.zero().inverse().is_none());
    }

    #[test]
    fn pow_matches_repeated_multiplication() {
        let q = FieldSpec::rational();
        let x = q.from_fraction(-2, 3);
        let mut acc = q.one();
        for e in 0..8 {
            assert_eq!(x.pow(e), acc);
            acc = &acc * &x;
        }
    }

    #[test]
    #[should_panic(expected = "field mismatch")]
    fn cross_field_addition_panics() {
        let _ = &FieldSpec::rational().one() + &gf(5).one();
    }

    fn arb_field() -> impl Strategy<Value = FieldSpec> {
        prop_oneof![
            Just(FieldSpec::rational()),
            Just(gf(2)),
            Just(gf(5)),
            Just(gf(101)),
        ]
    }

    fn arb_scalar(field: FieldSpec) -> impl Strategy<Value = Scalar> {
        match field {
            FieldSpec::Rational => (-30i64..=30, 1i64..=12)
                .prop_map(|(n, d)| FieldSpec::rational().from_fraction(n, d))
                .boxed(),
            f @ FieldSpec::PrimeField(_) => (0i64..=1000)
                .prop_map(move |v| f.from_i64(v))
                .boxed(),
        }
    }

    fn arb_scalar_triple() -> impl Strategy<Value = (Scalar, Scalar, Scalar)> {
        arb_field().prop_flat_map(|f| {
            (
                arb_scalar(f.clone()),
                arb_scalar(f.clone()),
                arb_scalar(f),
            )
        })
    }

    proptest! {
        #[test]
        fn field_axioms((a, b, c) in arb_scalar_triple()) {
            let f = a.field().clone();
            prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            prop_assert_eq!(&a + &b, &b + &a);
            prop_assert_eq!(&a * &b, &b * &a);
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
            prop_assert_eq!(&a + &f.zero(), a.clone());
            prop_assert_eq!(&a * &f.one(), a.clone());
            prop_assert_eq!(&a + &(-&a), f.zero());
            if !a.is_zero() {
                prop_assert_eq!(&a * &a.inverse().unwrap(), f.one());
            }
        }

        #[test]
        fn parse_render_roundtrip((a, _, _) in arb_scalar_triple()) {
            let back = a.field().parse_scalar(&a.render());
            prop_assert_eq!(back.unwrap(), a);
        }
    }
}
