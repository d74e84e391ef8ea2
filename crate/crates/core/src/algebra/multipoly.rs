//! Small sparse multivariate polynomials over a fixed, named variable set.
//!
//! Used for the time-shift polynomials (variables: odd irregular times and
//! the isospectral integration constants) and for symbolic elimination of
//! low-genus Hamiltonian flows. The variable set is fixed per instance and
//! operations require both operands to share it.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use crate::algebra::Rat;

pub type VarSet = Arc<Vec<String>>;

pub fn varset(names: &[&str]) -> VarSet {
    Arc::new(names.iter().map(|s| s.to_string()).collect())
}

#[derive(Clone, PartialEq, Eq)]
pub struct MultiPoly {
    vars: VarSet,
    /// exponent vector (one entry per variable) → nonzero coefficient
    terms: BTreeMap<Vec<u32>, Rat>,
}

impl MultiPoly {
    pub fn zero(vars: &VarSet) -> Self {
        MultiPoly {
            vars: vars.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(vars: &VarSet, c: Rat) -> Self {
        let mut p = MultiPoly::zero(vars);
        if !c.is_zero() {
            p.terms.insert(vec![0; vars.len()], c);
        }
        p
    }

    pub fn var(vars: &VarSet, name: &str) -> Self {
        let i = Self::index_of(vars, name);
        let mut exp = vec![0; vars.len()];
        exp[i] = 1;
        let mut p = MultiPoly::zero(vars);
        p.terms.insert(exp, Rat::one());
        p
    }

    fn index_of(vars: &VarSet, name: &str) -> usize {
        vars.iter()
            .position(|v| v == name)
            .unwrap_or_else(|| panic!("unknown variable {name}"))
    }

    pub fn vars(&self) -> &VarSet {
        &self.vars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|e| e.iter().all(|&k| k == 0))
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, exps: &[u32]) -> Rat {
        self.terms.get(exps).cloned().unwrap_or_else(Rat::zero)
    }

    /// Overwrite one monomial coefficient (used by mutation tests).
    pub fn set_coeff(&mut self, exps: Vec<u32>, c: Rat) {
        assert_eq!(exps.len(), self.vars.len());
        if c.is_zero() {
            self.terms.remove(&exps);
        } else {
            self.terms.insert(exps, c);
        }
    }

    fn check_vars(&self, rhs: &MultiPoly) {
        assert_eq!(self.vars, rhs.vars, "variable sets differ");
    }

    pub fn add(&self, rhs: &MultiPoly) -> MultiPoly {
        self.check_vars(rhs);
        let mut terms = self.terms.clone();
        for (e, c) in &rhs.terms {
            let v = terms.entry(e.clone()).or_insert_with(Rat::zero);
            *v += c;
        }
        terms.retain(|_, c| !c.is_zero());
        MultiPoly {
            vars: self.vars.clone(),
            terms,
        }
    }

    pub fn sub(&self, rhs: &MultiPoly) -> MultiPoly {
        self.add(&rhs.neg())
    }

    pub fn neg(&self) -> MultiPoly {
        MultiPoly {
            vars: self.vars.clone(),
            terms: self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect(),
        }
    }

    pub fn scale(&self, k: &Rat) -> MultiPoly {
        if k.is_zero() {
            return MultiPoly::zero(&self.vars);
        }
        MultiPoly {
            vars: self.vars.clone(),
            terms: self.terms.iter().map(|(e, c)| (e.clone(), c * k)).collect(),
        }
    }

    pub fn mul(&self, rhs: &MultiPoly) -> MultiPoly {
        self.check_vars(rhs);
        let mut terms: BTreeMap<Vec<u32>, Rat> = BTreeMap::new();
        for (e1, c1) in &self.terms {
            for (e2, c2) in &rhs.terms {
                let e: Vec<u32> = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                let v = terms.entry(e).or_insert_with(Rat::zero);
                *v += &(c1 * c2);
            }
        }
        terms.retain(|_, c| !c.is_zero());
        MultiPoly {
            vars: self.vars.clone(),
            terms,
        }
    }

    /// Partial derivative in `var`.
    pub fn partial(&self, var: &str) -> MultiPoly {
        let i = Self::index_of(&self.vars, var);
        let mut terms = BTreeMap::new();
        for (e, c) in &self.terms {
            if e[i] == 0 {
                continue;
            }
            let mut e2 = e.clone();
            e2[i] -= 1;
            let c2 = c * &Rat::from_int(e[i] as i64);
            let v = terms.entry(e2).or_insert_with(Rat::zero);
            *v += &c2;
        }
        terms.retain(|_, c: &mut Rat| !c.is_zero());
        MultiPoly {
            vars: self.vars.clone(),
            terms,
        }
    }

    /// Term-wise antiderivative in `var` with zero constant of integration.
    pub fn integrate(&self, var: &str) -> MultiPoly {
        let i = Self::index_of(&self.vars, var);
        let mut terms = BTreeMap::new();
        for (e, c) in &self.terms {
            let mut e2 = e.clone();
            e2[i] += 1;
            let c2 = c / &Rat::from_int(e2[i] as i64);
            terms.insert(e2, c2);
        }
        MultiPoly {
            vars: self.vars.clone(),
            terms,
        }
    }

    /// Full evaluation; every variable must be assigned.
    pub fn eval(&self, values: &BTreeMap<String, Rat>) -> Rat {
        let vals: Vec<&Rat> = self
            .vars
            .iter()
            .map(|v| {
                values
                    .get(v)
                    .unwrap_or_else(|| panic!("missing value for {v}"))
            })
            .collect();
        let mut acc = Rat::zero();
        for (e, c) in &self.terms {
            let mut term = c.clone();
            for (i, &k) in e.iter().enumerate() {
                if k > 0 {
                    term = &term * &vals[i].pow(k as i64);
                }
            }
            acc += &term;
        }
        acc
    }

    /// True when no monomial involves `var`.
    pub fn independent_of(&self, var: &str) -> bool {
        let i = Self::index_of(&self.vars, var);
        self.terms.keys().all(|e| e[i] == 0)
    }

    /// Constant term.
    pub fn constant_term(&self) -> Rat {
        self.coeff(&vec![0; self.vars.len()])
    }
}

impl fmt::Display for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (e, c) in self.terms.iter().rev() {
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
            let names: Vec<String> = e
                .iter()
                .enumerate()
                .filter(|(_, &k)| k > 0)
                .map(|(i, &k)| {
                    if k == 1 {
                        self.vars[i].clone()
                    } else {
                        format!("{}^{}", self.vars[i], k)
                    }
                })
                .collect();
            if names.is_empty() {
                write!(f, "{mag}")?;
            } else {
                if !mag.is_one() {
                    write!(f, "{mag}*")?;
                }
                write!(f, "{}", names.join("*"))?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn integrate_single_variable() {
        let vs = varset(&["t3", "t5"]);
        let t3 = MultiPoly::var(&vs, "t3");
        let int = t3.integrate("t3");
        // t3 ↦ t3²/2
        assert_eq!(int.coeff(&[2, 0]), Rat::new(1, 2));
        assert_eq!(int.num_terms(), 1);
    }

    #[test]
    fn integrate_mixed_term() {
        let vs = varset(&["u2", "t5"]);
        let p = MultiPoly::var(&vs, "u2").mul(&MultiPoly::var(&vs, "t5"));
        let int = p.integrate("t5");
        assert_eq!(int.coeff(&[1, 2]), Rat::new(1, 2));
    }

    #[test]
    fn display_terms() {
        let vs = varset(&["t3", "t5", "u0", "u2"]);
        let p = MultiPoly::var(&vs, "u2")
            .mul(&MultiPoly::var(&vs, "t5"))
            .scale(&Rat::new(1, 5))
            .add(&MultiPoly::var(&vs, "t3").scale(&Rat::new(1, 3)))
            .add(&MultiPoly::var(&vs, "u0"));
        let s = p.to_string();
        assert!(s.contains("1/5*t5*u2"));
        assert!(s.contains("1/3*t3"));
        assert!(s.contains("u0"));
    }

    #[test]
    fn eval_and_partial() {
        let vs = varset(&["x", "y"]);
        let x = MultiPoly::var(&vs, "x");
        let y = MultiPoly::var(&vs, "y");
        // x²y + 3y
        let p = x.mul(&x).mul(&y).add(&y.scale(&Rat::from_int(3)));
        let mut vals = BTreeMap::new();
        vals.insert("x".to_string(), Rat::from_int(2));
        vals.insert("y".to_string(), Rat::from_int(5));
        assert_eq!(p.eval(&vals), Rat::from_int(35));
        let px = p.partial("x"); // 2xy
        assert_eq!(px.coeff(&[1, 1]), Rat::from_int(2));
        assert!(p.partial("y").independent_of("y"));
    }
}
