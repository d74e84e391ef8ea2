//! Dense univariate polynomials over the rationals.
//!
//! Degrees in this library stay below ~2·r∞, so a dense coefficient vector
//! (index = power of λ) is the right representation. Trailing zeros are
//! always trimmed; the zero polynomial has an empty coefficient vector.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::algebra::Rat;
use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq, Default)]
pub struct UniPoly {
    /// Coefficient of λ^i at index i; no trailing zeros.
    coeffs: Vec<Rat>,
}

impl UniPoly {
    pub fn zero() -> Self {
        UniPoly { coeffs: vec![] }
    }

    pub fn one() -> Self {
        UniPoly::constant(Rat::one())
    }

    pub fn constant(c: Rat) -> Self {
        UniPoly::from_coeffs(vec![c])
    }

    /// The monomial c·λ^k.
    pub fn monomial(c: Rat, k: usize) -> Self {
        let mut coeffs = vec![Rat::zero(); k + 1];
        coeffs[k] = c;
        UniPoly::from_coeffs(coeffs)
    }

    /// λ itself.
    pub fn var() -> Self {
        UniPoly::monomial(Rat::one(), 1)
    }

    pub fn from_coeffs(mut coeffs: Vec<Rat>) -> Self {
        while coeffs.last().is_some_and(Rat::is_zero) {
            coeffs.pop();
        }
        UniPoly { coeffs }
    }

    /// Monic polynomial with the given roots.
    pub fn from_roots(roots: &[Rat]) -> Self {
        let mut p = UniPoly::one();
        for r in roots {
            p = &p * &UniPoly::from_coeffs(vec![-r, Rat::one()]);
        }
        p
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeff(&self, k: usize) -> Rat {
        self.coeffs.get(k).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn coeffs(&self) -> &[Rat] {
        &self.coeffs
    }

    pub fn leading(&self) -> Rat {
        self.coeffs.last().cloned().unwrap_or_else(Rat::zero)
    }

    pub fn is_monic(&self) -> bool {
        self.leading().is_one()
    }

    pub fn eval(&self, x: &Rat) -> Rat {
        let mut acc = Rat::zero();
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * x) + c;
        }
        acc
    }

    pub fn derivative(&self) -> UniPoly {
        if self.coeffs.len() <= 1 {
            return UniPoly::zero();
        }
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| &Rat::from_int(i as i64) * c)
            .collect();
        UniPoly::from_coeffs(coeffs)
    }

    pub fn scale(&self, c: &Rat) -> UniPoly {
        UniPoly::from_coeffs(self.coeffs.iter().map(|a| a * c).collect())
    }

    /// Multiply by λ^k.
    pub fn shift_up(&self, k: usize) -> UniPoly {
        if self.is_zero() {
            return UniPoly::zero();
        }
        let mut coeffs = vec![Rat::zero(); k];
        coeffs.extend(self.coeffs.iter().cloned());
        UniPoly { coeffs }
    }

    /// Quotient and remainder of Euclidean division.
    pub fn div_rem(&self, d: &UniPoly) -> (UniPoly, UniPoly) {
        assert!(!d.is_zero(), "division by zero polynomial");
        let dd = d.degree().unwrap();
        let lead_inv = d.leading().recip();
        let mut rem = self.coeffs.clone();
        let mut quot = vec![Rat::zero(); self.coeffs.len().saturating_sub(dd)];
        while rem.len() > dd {
            let k = rem.len() - 1 - dd;
            let c = &rem.last().unwrap().clone() * &lead_inv;
            if !c.is_zero() {
                for i in 0..=dd {
                    let t = &c * &d.coeffs[i];
                    rem[k + i] = &rem[k + i] - &t;
                }
                quot[k] = c;
            }
            rem.pop();
        }
        (UniPoly::from_coeffs(quot), UniPoly::from_coeffs(rem))
    }

    /// Exact division; errors with the remainder when `d` does not divide `self`.
    pub fn exact_div(&self, d: &UniPoly) -> Result<UniPoly> {
        assert!(!d.is_zero(), "division by zero polynomial");
        let (q, r) = self.div_rem(d);
        if r.is_zero() {
            Ok(q)
        } else {
            Err(Error::NonDivisible {
                remainder: r.to_string(),
            })
        }
    }

    /// Monic greatest common divisor.
    pub fn gcd(&self, other: &UniPoly) -> UniPoly {
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
            let inv = a.leading().recip();
            a.scale(&inv)
        }
    }

    /// All rational roots with multiplicity, by deflation. Errors with
    /// `IrrationalRoots` when deflation cannot exhaust the polynomial.
    pub fn rational_roots(&self) -> Result<Vec<Rat>> {
        if self.is_zero() {
            return Err(Error::IrrationalRoots("zero polynomial".into()));
        }
        let mut p = self.clone();
        let mut roots = Vec::new();
        // strip λ^k factor
        while !p.is_zero() && p.coeff(0).is_zero() {
            roots.push(Rat::zero());
            p = UniPoly::from_coeffs(p.coeffs[1..].to_vec());
        }
        while p.degree().unwrap_or(0) >= 1 {
            let Some(r) = p.find_rational_root() else {
                return Err(Error::IrrationalRoots(self.to_string()));
            };
            roots.push(r.clone());
            let lin = UniPoly::from_coeffs(vec![-&r, Rat::one()]);
            p = p.exact_div(&lin).expect("root deflation");
        }
        Ok(roots)
    }

    fn find_rational_root(&self) -> Option<Rat> {
        use num_bigint::BigInt;
        use num_traits::{One, Signed, Zero};
        // clear denominators to a primitive integer polynomial
        let mut lcm = BigInt::one();
        for c in &self.coeffs {
            let d = c.denom();
            let g = num_integer::Integer::gcd(&lcm, d);
            lcm = &lcm / g * d;
        }
        let ints: Vec<BigInt> = self
            .coeffs
            .iter()
            .map(|c| c.numer() * (&lcm / c.denom()))
            .collect();
        let a0 = ints.iter().find(|c| !c.is_zero())?.abs();
        let an = ints.last()?.abs();
        let divisors = |n: &BigInt| -> Vec<BigInt> {
            // n is small in practice; trial division is fine
            let mut out = Vec::new();
            let mut d = BigInt::one();
            while &d * &d <= *n {
                if (n % &d).is_zero() {
                    out.push(d.clone());
                    out.push(n / &d);
                }
                d += 1;
            }
            out
        };
        for p in divisors(&a0) {
            for q in divisors(&an) {
                for sign in [1i64, -1] {
                    let cand = Rat::from_big(&p * BigInt::from(sign), q.clone());
                    if self.eval(&cand).is_zero() {
                        return Some(cand);
                    }
                }
            }
        }
        None
    }
}

impl Add for &UniPoly {
    type Output = UniPoly;
    fn add(self, rhs: &UniPoly) -> UniPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let coeffs = (0..n).map(|i| &self.coeff(i) + &rhs.coeff(i)).collect();
        UniPoly::from_coeffs(coeffs)
    }
}

impl Sub for &UniPoly {
    type Output = UniPoly;
    fn sub(self, rhs: &UniPoly) -> UniPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let coeffs = (0..n).map(|i| &self.coeff(i) - &rhs.coeff(i)).collect();
        UniPoly::from_coeffs(coeffs)
    }
}

impl Mul for &UniPoly {
    type Output = UniPoly;
    fn mul(self, rhs: &UniPoly) -> UniPoly {
        if self.is_zero() || rhs.is_zero() {
            return UniPoly::zero();
        }
        let mut coeffs = vec![Rat::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                coeffs[i + j] += &(a * b);
            }
        }
        UniPoly::from_coeffs(coeffs)
    }
}

impl Neg for &UniPoly {
    type Output = UniPoly;
    fn neg(self) -> UniPoly {
        UniPoly::from_coeffs(self.coeffs.iter().map(|c| -c).collect())
    }
}

impl fmt::Display for UniPoly {
    /// Canonical rendering, e.g. `3/2*l^2 - 1`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
                first = false;
            } else if c.is_negative() {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            match k {
                0 => write!(f, "{mag}")?,
                _ => {
                    if !mag.is_one() {
                        write!(f, "{mag}*")?;
                    }
                    if k == 1 {
                        write!(f, "l")?;
                    } else {
                        write!(f, "l^{k}")?;
                    }
                }
            }
        }
        Ok(())
    }
}

impl fmt::Debug for UniPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(coeffs: &[i64]) -> UniPoly {
        UniPoly::from_coeffs(coeffs.iter().map(|&c| Rat::from_int(c)).collect())
    }

    #[test]
    fn exact_div_factorization() {
        // (λ²−1)/(λ−1) = λ+1
        let q = p(&[-1, 0, 1]).exact_div(&p(&[-1, 1])).unwrap();
        assert_eq!(q, p(&[1, 1]));
    }

    #[test]
    fn exact_div_rejects_nonfactor() {
        let err = p(&[-1, 0, 1]).exact_div(&p(&[0, 1])).unwrap_err();
        assert!(matches!(err, Error::NonDivisible { .. }));
    }

    #[test]
    fn display_canonical() {
        let q = UniPoly::from_coeffs(vec![Rat::from_int(-1), Rat::zero(), Rat::new(3, 2)]);
        assert_eq!(q.to_string(), "3/2*l^2 - 1");
        assert_eq!(UniPoly::zero().to_string(), "0");
        assert_eq!(p(&[0, 1]).to_string(), "l");
    }

    #[test]
    fn roots_by_deflation() {
        let q = UniPoly::from_roots(&[Rat::from_int(1), Rat::from_int(2)]);
        assert_eq!(q, p(&[2, -3, 1]));
        let mut roots = q.rational_roots().unwrap();
        roots.sort();
        assert_eq!(roots, vec![Rat::from_int(1), Rat::from_int(2)]);
        // λ² − 2 has no rational roots
        assert!(matches!(
            p(&[-2, 0, 1]).rational_roots(),
            Err(Error::IrrationalRoots(_))
        ));
        // rational (non-integer) root
        let half = UniPoly::from_roots(&[Rat::new(1, 2), Rat::from_int(-3)]);
        let mut r = half.rational_roots().unwrap();
        r.sort();
        assert_eq!(r, vec![Rat::from_int(-3), Rat::new(1, 2)]);
    }

    #[test]
    fn gcd_is_monic() {
        let a = &p(&[-1, 0, 1]) * &p(&[2, 2]); // 2(λ−1)(λ+1)²
        let b = &p(&[1, 1]) * &p(&[3, 3]); // 3(λ+1)²
        let g = a.gcd(&b);
        assert_eq!(g, p(&[1, 2, 1]));
    }

    #[test]
    fn eval_and_derivative() {
        let q = p(&[1, -2, 3]); // 3λ²−2λ+1
        assert_eq!(q.eval(&Rat::from_int(2)), Rat::from_int(9));
        assert_eq!(q.derivative(), p(&[-2, 6]));
    }
}
