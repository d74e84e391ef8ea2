//! Truncated formal series in half-integer powers of λ, expanded at λ → ∞.
//!
//! Exponents are stored doubled (`2e` as an integer) to keep indexing exact.
//! A series carries an optional truncation order: `Some(t)` means every
//! coefficient with doubled exponent ≥ t is exact and anything below is
//! unknown; `None` means the series is exact (typically a polynomial).
//! Arithmetic propagates truncation so a result never reports a coefficient
//! it cannot know.

use std::collections::BTreeMap;
use std::fmt;

use crate::algebra::{Rat, UniPoly};
use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq)]
pub struct HalfSeries {
    /// doubled exponent → coefficient, nonzero values only
    coeffs: BTreeMap<i64, Rat>,
    /// doubled exponent below which coefficients are unknown; `None` = exact
    trunc: Option<i64>,
}

impl HalfSeries {
    pub fn zero() -> Self {
        HalfSeries {
            coeffs: BTreeMap::new(),
            trunc: None,
        }
    }

    /// c·λ^(e2/2).
    pub fn monomial(c: Rat, e2: i64) -> Self {
        let mut s = HalfSeries::zero();
        if !c.is_zero() {
            s.coeffs.insert(e2, c);
        }
        s
    }

    pub fn from_poly(p: &UniPoly) -> Self {
        let mut s = HalfSeries::zero();
        for (k, c) in p.coeffs().iter().enumerate() {
            if !c.is_zero() {
                s.coeffs.insert(2 * k as i64, c.clone());
            }
        }
        s
    }

    pub fn truncation(&self) -> Option<i64> {
        self.trunc
    }

    /// Leading (largest) doubled exponent, `None` when no terms are stored.
    pub fn leading_exp2(&self) -> Option<i64> {
        self.coeffs.keys().next_back().copied()
    }

    pub fn leading_coeff(&self) -> Option<&Rat> {
        self.coeffs.values().next_back()
    }

    pub fn is_zero_to_order(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Coefficient of λ^(e2/2); errors when e2 lies below the truncation order.
    pub fn coeff(&self, e2: i64) -> Result<Rat> {
        if let Some(t) = self.trunc {
            if e2 < t {
                return Err(Error::Truncated { exponent_times_2: e2 });
            }
        }
        Ok(self.coeffs.get(&e2).cloned().unwrap_or_else(Rat::zero))
    }

    /// Drop coefficients below doubled exponent `t` and record the truncation.
    pub fn truncate(&self, t: i64) -> HalfSeries {
        let coeffs = self
            .coeffs
            .iter()
            .filter(|(e, _)| **e >= t)
            .map(|(e, c)| (*e, c.clone()))
            .collect();
        let trunc = match self.trunc {
            Some(old) => Some(old.max(t)),
            None => Some(t),
        };
        HalfSeries { coeffs, trunc }
    }

    pub fn neg(&self) -> HalfSeries {
        HalfSeries {
            coeffs: self.coeffs.iter().map(|(e, c)| (*e, -c)).collect(),
            trunc: self.trunc,
        }
    }

    pub fn scale(&self, k: &Rat) -> HalfSeries {
        if k.is_zero() {
            return HalfSeries {
                coeffs: BTreeMap::new(),
                trunc: self.trunc,
            };
        }
        HalfSeries {
            coeffs: self.coeffs.iter().map(|(e, c)| (*e, c * k)).collect(),
            trunc: self.trunc,
        }
    }

    pub fn add(&self, rhs: &HalfSeries) -> HalfSeries {
        let trunc = Self::join_trunc(self.trunc, rhs.trunc);
        let mut coeffs = self.coeffs.clone();
        for (e, c) in &rhs.coeffs {
            let v = coeffs.entry(*e).or_insert_with(Rat::zero);
            *v += c;
        }
        coeffs.retain(|_, c| !c.is_zero());
        let mut s = HalfSeries { coeffs, trunc };
        s.enforce_trunc();
        s
    }

    pub fn sub(&self, rhs: &HalfSeries) -> HalfSeries {
        self.add(&rhs.neg())
    }

    pub fn mul(&self, rhs: &HalfSeries) -> HalfSeries {
        // upper bound on the exponent of any term, known or hidden below trunc
        let bound_hi = |s: &HalfSeries| -> Option<i64> {
            match (s.leading_exp2(), s.trunc) {
                (Some(l), _) => Some(l),
                (None, Some(t)) => Some(t - 1),
                (None, None) => None,
            }
        };
        // error terms of one factor meet any term of the other
        let cand = |t: Option<i64>, hi: Option<i64>| -> Option<i64> {
            match (t, hi) {
                (Some(t), Some(h)) => Some(t + h),
                _ => None,
            }
        };
        let trunc = Self::join_trunc(
            cand(self.trunc, bound_hi(rhs)),
            cand(rhs.trunc, bound_hi(self)),
        );
        let mut coeffs: BTreeMap<i64, Rat> = BTreeMap::new();
        for (e1, c1) in &self.coeffs {
            for (e2, c2) in &rhs.coeffs {
                let v = coeffs.entry(e1 + e2).or_insert_with(Rat::zero);
                *v += &(c1 * c2);
            }
        }
        coeffs.retain(|_, c| !c.is_zero());
        let mut s = HalfSeries { coeffs, trunc };
        s.enforce_trunc();
        s
    }

    fn join_trunc(a: Option<i64>, b: Option<i64>) -> Option<i64> {
        match (a, b) {
            (Some(x), Some(y)) => Some(x.max(y)),
            (Some(x), None) | (None, Some(x)) => Some(x),
            (None, None) => None,
        }
    }

    fn enforce_trunc(&mut self) {
        if let Some(t) = self.trunc {
            self.coeffs.retain(|e, _| *e >= t);
        }
    }

    /// Square root to the requested doubled order. The branch is fixed by
    /// taking the positive rational square root of the leading coefficient.
    pub fn sqrt(&self, order2: i64) -> Result<HalfSeries> {
        let Some(lead2) = self.leading_exp2() else {
            return Err(Error::NonSquareLeading("0".into()));
        };
        if lead2 % 2 != 0 {
            return Err(Error::NonSquareLeading(format!(
                "leading exponent {lead2}/2 is not twice a half-integer"
            )));
        }
        let c0 = self.leading_coeff().unwrap().clone();
        let Some(d) = c0.sqrt_exact() else {
            return Err(Error::NonSquareLeading(c0.to_string()));
        };
        let half = lead2 / 2;
        // enough input depth: s must be known down to half + order2
        if let Some(t) = self.trunc {
            if t > half + order2 {
                return Err(Error::Truncated {
                    exponent_times_2: half + order2,
                });
            }
        }
        let two_d = &Rat::from_int(2) * &d;
        let mut root = HalfSeries::monomial(d, half);
        root.trunc = Some(order2);
        // coefficient recursion: 2·d·r_e = s_{e+half} − Σ_{a+b=e+half} r_a r_b,
        // where the sum runs over coefficients already determined (all > e)
        let mut e = half - 1;
        while e >= order2 {
            let target = self.coeff(e + half).unwrap_or_else(|_| Rat::zero());
            let mut cross = Rat::zero();
            for (a, ca) in &root.coeffs {
                if let Some(cb) = root.coeffs.get(&(e + half - a)) {
                    cross += &(ca * cb);
                }
            }
            let c = &(&target - &cross) / &two_d;
            if !c.is_zero() {
                root.coeffs.insert(e, c);
            }
            e -= 1;
        }
        Ok(root)
    }

    /// Residue at the ramified point at infinity of `self · dλ`, computed on
    /// the double cover λ = z⁻²: the pullback of λ^e dλ is −2 z^(−2e−3) dz,
    /// so only the λ^(−1) coefficient contributes and the residue is −2·c(−1).
    /// Half-integer exponents pull back to even powers of z and contribute
    /// nothing.
    pub fn residue_at_infinity(&self) -> Result<Rat> {
        if let Some(t) = self.trunc {
            if t > -2 {
                return Err(Error::Truncated { exponent_times_2: -2 });
            }
        }
        Ok(&Rat::from_int(-2) * &self.coeff(-2)?)
    }

    /// True when both series have identical coefficients at every doubled
    /// exponent at or above the coarser truncation order.
    pub fn agrees_with(&self, rhs: &HalfSeries) -> bool {
        let t = Self::join_trunc(self.trunc, rhs.trunc);
        let lo = t.unwrap_or(i64::MIN);
        let keys: std::collections::BTreeSet<i64> = self
            .coeffs
            .keys()
            .chain(rhs.coeffs.keys())
            .copied()
            .filter(|e| *e >= lo)
            .collect();
        keys.into_iter().all(|e| {
            self.coeffs.get(&e).cloned().unwrap_or_else(Rat::zero)
                == rhs.coeffs.get(&e).cloned().unwrap_or_else(Rat::zero)
        })
    }

    pub fn terms(&self) -> impl Iterator<Item = (i64, &Rat)> {
        self.coeffs.iter().map(|(e, c)| (*e, c))
    }
}

impl fmt::Display for HalfSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            write!(f, "0")?;
        } else {
            let mut first = true;
            for (e2, c) in self.coeffs.iter().rev() {
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
                let mag = c.abs();
                if *e2 == 0 {
                    write!(f, "{mag}")?;
                } else {
                    if !mag.is_one() {
                        write!(f, "{mag}*")?;
                    }
                    if e2 % 2 == 0 {
                        let k = e2 / 2;
                        if k == 1 {
                            write!(f, "l")?;
                        } else {
                            write!(f, "l^{k}")?;
                        }
                    } else {
                        write!(f, "l^({e2}/2)")?;
                    }
                }
            }
        }
        if let Some(t) = self.trunc {
            write!(f, " + O(l^({t}/2))")?;
        }
        Ok(())
    }
}

impl fmt::Debug for HalfSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}
