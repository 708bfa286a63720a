//! Dense univariate polynomials over an exact field.
//!
//! Coefficient `i` is the coefficient of `x^i`; trailing zeros are trimmed so
//! the zero polynomial has an empty coefficient vector and `degree() == None`.

use std::fmt;

use crate::field::{FieldSpec, Scalar};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Polynomial {
    field: FieldSpec,
    coeffs: Vec<Scalar>,
}

impl Polynomial {
    pub fn zero(field: &FieldSpec) -> Self {
        Polynomial {
            field: field.clone(),
            coeffs: Vec::new(),
        }
    }

    pub fn one(field: &FieldSpec) -> Self {
        Polynomial {
            field: field.clone(),
            coeffs: vec![field.one()],
        }
    }

    /// The monomial `x`.
    pub fn x(field: &FieldSpec) -> Self {
        Polynomial {
            field: field.clone(),
            coeffs: vec![field.zero(), field.one()],
        }
    }

    /// Trims trailing zeros; panics if a coefficient is from another field.
    pub fn from_coeffs(field: &FieldSpec, mut coeffs: Vec<Scalar>) -> Self {
        for c in &coeffs {
            assert!(c.field() == field, "coefficient from a different field");
        }
        while coeffs.last().is_some_and(Scalar::is_zero) {
            coeffs.pop();
        }
        Polynomial {
            field: field.clone(),
            coeffs,
        }
    }

    /// Convenience for tests and fixtures: coefficients as small integers.
    pub fn from_i64_coeffs(field: &FieldSpec, coeffs: &[i64]) -> Self {
        Self::from_coeffs(field, coeffs.iter().map(|&c| field.from_i64(c)).collect())
    }

    pub fn field(&self) -> &FieldSpec {
        &self.field
    }

    pub fn coeffs(&self) -> &[Scalar] {
        &self.coeffs
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Coefficient of `x^i`, zero beyond the stored ones.
    pub fn coeff(&self, i: usize) -> Scalar {
        self.coeffs.get(i).cloned().unwrap_or_else(|| self.field.zero())
    }

    pub fn constant_term_is_zero(&self) -> bool {
        self.coeff(0).is_zero()
    }

    pub fn leading_coeff(&self) -> Option<&Scalar> {
        self.coeffs.last()
    }

    pub fn is_monic(&self) -> bool {
        self.leading_coeff().is_some_and(Scalar::is_one)
    }

    /// Horner evaluation at a scalar point.
    pub fn eval(&self, x: &Scalar) -> Scalar {
        assert!(x.field() == &self.field, "evaluation point from a different field");
        let mut acc = self.field.zero();
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * x) + c;
        }
        acc
    }

    pub fn scale(&self, c: &Scalar) -> Self {
        Polynomial::from_coeffs(
            &self.field,
            self.coeffs.iter().map(|a| a * c).collect(),
        )
    }

    /// Normalizes to leading coefficient 1; panics on the zero polynomial.
    pub fn make_monic(&self) -> Self {
        let lead = self.leading_coeff().expect("zero polynomial has no monic form");
        self.scale(&lead.inverse().expect("leading coefficient is nonzero"))
    }

    /// Euclidean division; panics if `divisor` is zero.
    pub fn div_rem(&self, divisor: &Polynomial) -> (Polynomial, Polynomial) {
        assert!(!divisor.is_zero(), "division by the zero polynomial");
        assert!(self.field == divisor.field, "field mismatch in polynomial division");
        let dd = divisor.degree().expect("nonzero divisor");
        let lead_inv = divisor
            .leading_coeff()
            .expect("nonzero divisor")
            .inverse()
            .expect("nonzero leading coefficient");

        let mut rem = self.coeffs.clone();
        let mut quot = vec![self.field.zero(); self.coeffs.len().saturating_sub(dd)];
        while rem.len() > dd {
            let pos = rem.len() - 1 - dd;
            let factor = &rem[rem.len() - 1] * &lead_inv;
            if !factor.is_zero() {
                for (i, dc) in divisor.coeffs.iter().enumerate() {
                    rem[pos + i] = &rem[pos + i] - &(&factor * dc);
                }
                quot[pos] = factor;
            }
            debug_assert!(rem.last().unwrap().is_zero());
            rem.pop();
        }
        (
            Polynomial::from_coeffs(&self.field, quot),
            Polynomial::from_coeffs(&self.field, rem),
        )
    }

    /// Monic greatest common divisor; `gcd(0, 0) = 0`.
    pub fn gcd(&self, other: &Polynomial) -> Polynomial {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b);
            a = b;
            b = r;
        }
        if a.is_zero() {
            a
        } else {
            a.make_monic()
        }
    }

    /// Monic least common multiple; zero if either argument is zero.
    pub fn lcm(&self, other: &Polynomial) -> Polynomial {
        if self.is_zero() || other.is_zero() {
            return Polynomial::zero(&self.field);
        }
        let g = self.gcd(other);
        let (q, r) = self.div_rem(&g);
        debug_assert!(r.is_zero());
        (&q * other).make_monic()
    }
}

impl std::ops::Add for &Polynomial {
    type Output = Polynomial;
    fn add(self, other: &Polynomial) -> Polynomial {
        assert!(self.field == other.field, "field mismatch in polynomial addition");
        let len = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..len).map(|i| &self.coeff(i) + &other.coeff(i)).collect();
        Polynomial::from_coeffs(&self.field, coeffs)
    }
}

impl std::ops::Sub for &Polynomial {
    type Output = Polynomial;
    fn sub(self, other: &Polynomial) -> Polynomial {
        assert!(self.field == other.field, "field mismatch in polynomial subtraction");
        let len = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..len).map(|i| &self.coeff(i) - &other.coeff(i)).collect();
        Polynomial::from_coeffs(&self.field, coeffs)
    }
}

impl std::ops::Mul for &Polynomial {
    type Output = Polynomial;
    fn mul(self, other: &Polynomial) -> Polynomial {
        assert!(self.field == other.field, "field mismatch in polynomial multiplication");
        if self.is_zero() || other.is_zero() {
            return Polynomial::zero(&self.field);
        }
        let mut coeffs = vec![self.field.zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                coeffs[i + j] = &coeffs[i + j] + &(a * b);
            }
        }
        Polynomial::from_coeffs(&self.field, coeffs)
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            if !first {
                f.write_str(" + ")?;
            }
            first = false;
            match i {
                0 => write!(f, "{c}")?,
                1 if c.is_one() => f.write_str("x")?,
                1 => write!(f, "{c}*x")?,
                _ if c.is_one() => write!(f, "x^{i}")?,
                _ => write!(f, "{c}*x^{i}")?,
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q() -> FieldSpec {
        FieldSpec::rational()
    }

    #[test]
    fn trailing_zeros_trimmed() {
        let p = Polynomial::from_i64_coeffs(&q(), &[1, 2, 0, 0]);
        assert_eq!(p.degree(), Some(1));
        assert!(Polynomial::from_i64_coeffs(&q(), &[0, 0]).is_zero());
    }

    #[test]
    fn eval_by_horner() {
        // x^3 - 5x^2 + 6x at x = 2 and x = 3 vanishes, at x = 1 gives 2.
        let p = Polynomial::from_i64_coeffs(&q(), &[0, 6, -5, 1]);
        assert!(p.eval(&q().from_i64(2)).is_zero());
        assert!(p.eval(&q().from_i64(3)).is_zero());
        assert_eq!(p.eval(&q().from_i64(1)), q().from_i64(2));
    }

    #[test]
    fn div_rem_recombines() {
        let a = Polynomial::from_i64_coeffs(&q(), &[2, 0, -3, 1, 5]);
        let b = Polynomial::from_i64_coeffs(&q(), &[1, 2]);
        let (quot, rem) = a.div_rem(&b);
        assert_eq!(&(&quot * &b) + &rem, a);
        assert!(rem.degree() < b.degree());
    }

    #[test]
    fn gcd_and_lcm_of_split_polynomials() {
        // (x)(x-2) and (x-2)(x-3): gcd = x-2, lcm = x(x-2)(x-3).
        let f = &Polynomial::from_i64_coeffs(&q(), &[0, 1]) * &Polynomial::from_i64_coeffs(&q(), &[-2, 1]);
        let g = &Polynomial::from_i64_coeffs(&q(), &[-2, 1]) * &Polynomial::from_i64_coeffs(&q(), &[-3, 1]);
        assert_eq!(f.gcd(&g), Polynomial::from_i64_coeffs(&q(), &[-2, 1]));
        assert_eq!(f.lcm(&g), Polynomial::from_i64_coeffs(&q(), &[0, 6, -5, 1]));
    }

    #[test]
    fn gcd_over_prime_field() {
        let f5 = FieldSpec::prime_field_u64(5).unwrap();
        // (x+1)^2 and (x+1)(x+2) over GF(5).
        let sq = &Polynomial::from_i64_coeffs(&f5, &[1, 1]) * &Polynomial::from_i64_coeffs(&f5, &[1, 1]);
        let mixed = &Polynomial::from_i64_coeffs(&f5, &[1, 1]) * &Polynomial::from_i64_coeffs(&f5, &[2, 1]);
        assert_eq!(sq.gcd(&mixed), Polynomial::from_i64_coeffs(&f5, &[1, 1]));
    }
}
