use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_traits::{One, Signed, Zero};
use smallvec::SmallVec;

use super::Rat;
use crate::error::{Error, Result};

/// Dense exponent vector over the variable list of the owning polynomial.
pub type Exp = SmallVec<[u16; 16]>;

/// Ordered list of variable names shared by a family of polynomials.
#[derive(Clone)]
pub struct Vars(Arc<Vec<String>>);

impl Vars {
    pub fn new<I, S>(names: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        Vars(Arc::new(names.into_iter().map(Into::into).collect()))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn name(&self, i: usize) -> &str {
        &self.0[i]
    }

    pub fn names(&self) -> &[String] {
        &self.0
    }

    pub fn index(&self, name: &str) -> Option<usize> {
        self.0.iter().position(|n| n == name)
    }

    pub fn require(&self, name: &str) -> Result<usize> {
        self.index(name)
            .ok_or_else(|| Error::UnknownVariable(name.to_string()))
    }

    /// New list with `extra` prepended.
    pub fn prepend(&self, extra: &[&str]) -> Vars {
        Vars::new(
            extra
                .iter()
                .map(|s| s.to_string())
                .chain(self.0.iter().cloned()),
        )
    }

    /// New list with `extra` appended.
    pub fn append(&self, extra: &[&str]) -> Vars {
        Vars::new(
            self.0
                .iter()
                .cloned()
                .chain(extra.iter().map(|s| s.to_string())),
        )
    }
}

impl PartialEq for Vars {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0 == other.0
    }
}

impl Eq for Vars {}

impl fmt::Debug for Vars {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.0.iter()).finish()
    }
}

fn exp_add(a: &Exp, b: &Exp) -> Exp {
    a.iter().zip(b.iter()).map(|(x, y)| x + y).collect()
}

/// Sparse polynomial with exact rational coefficients.
#[derive(Clone, PartialEq, Eq)]
pub struct MPoly {
    vars: Vars,
    terms: BTreeMap<Exp, Rat>,
}

impl MPoly {
    pub fn zero(vars: &Vars) -> Self {
        MPoly {
            vars: vars.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(vars: &Vars, c: Rat) -> Self {
        let mut p = MPoly::zero(vars);
        if !c.is_zero() {
            p.terms.insert(Self::unit_exp(vars.len()), c);
        }
        p
    }

    pub fn one(vars: &Vars) -> Self {
        Self::constant(vars, Rat::one())
    }

    pub fn var(vars: &Vars, i: usize) -> Self {
        let mut e = Self::unit_exp(vars.len());
        e[i] = 1;
        Self::monomial(vars, e, Rat::one())
    }

    pub fn var_named(vars: &Vars, name: &str) -> Result<Self> {
        Ok(Self::var(vars, vars.require(name)?))
    }

    pub fn monomial(vars: &Vars, e: Exp, c: Rat) -> Self {
        assert_eq!(e.len(), vars.len(), "exponent length");
        let mut p = MPoly::zero(vars);
        if !c.is_zero() {
            p.terms.insert(e, c);
        }
        p
    }

    pub fn from_terms<I: IntoIterator<Item = (Exp, Rat)>>(vars: &Vars, terms: I) -> Self {
        let mut p = MPoly::zero(vars);
        for (e, c) in terms {
            p.add_term(e, c);
        }
        p
    }

    /// Parse an expression such as `3*a6*b1 - 2*a4*b3` or `x1^3/3`.
    pub fn parse(vars: &Vars, src: &str) -> Result<Self> {
        super::parse::parse(vars, src)
    }

    pub(crate) fn unit_exp(n: usize) -> Exp {
        SmallVec::from_elem(0, n)
    }

    pub fn vars(&self) -> &Vars {
        &self.vars
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exp, &Rat)> + '_ {
        self.terms.iter()
    }

    pub fn into_terms(self) -> BTreeMap<Exp, Rat> {
        self.terms
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|e| e.iter().all(|&x| x == 0))
    }

    /// Value at the origin.
    pub fn constant_term(&self) -> Rat {
        self.terms
            .get(&Self::unit_exp(self.vars.len()))
            .cloned()
            .unwrap_or_else(Rat::zero)
    }

    pub fn coeff(&self, e: &Exp) -> Rat {
        self.terms.get(e).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn total_degree(&self) -> u32 {
        self.terms
            .keys()
            .map(|e| e.iter().map(|&x| x as u32).sum())
            .max()
            .unwrap_or(0)
    }

    pub fn degree_in(&self, i: usize) -> u32 {
        self.terms.keys().map(|e| e[i] as u32).max().unwrap_or(0)
    }

    pub fn uses_var(&self, i: usize) -> bool {
        self.terms.keys().any(|e| e[i] > 0)
    }

    pub(crate) fn add_term(&mut self, e: Exp, c: Rat) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(e) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let s = o.get() + c;
                if s.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    fn check_vars(&self, other: &MPoly) {
        assert!(self.vars == other.vars, "{}", Error::VarMismatch);
    }

    pub fn scale(&self, c: &Rat) -> MPoly {
        if c.is_zero() {
            return MPoly::zero(&self.vars);
        }
        MPoly {
            vars: self.vars.clone(),
            terms: self.terms.iter().map(|(e, x)| (e.clone(), x * c)).collect(),
        }
    }

    pub fn mul_monomial(&self, e: &Exp, c: &Rat) -> MPoly {
        if c.is_zero() {
            return MPoly::zero(&self.vars);
        }
        MPoly {
            vars: self.vars.clone(),
            terms: self
                .terms
                .iter()
                .map(|(f, x)| (exp_add(f, e), x * c))
                .collect(),
        }
    }

    pub fn pow(&self, n: u32) -> MPoly {
        let mut acc = MPoly::one(&self.vars);
        let mut base = self.clone();
        let mut n = n;
        while n > 0 {
            if n & 1 == 1 {
                acc = &acc * &base;
            }
            n >>= 1;
            if n > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    pub fn derivative(&self, i: usize) -> MPoly {
        let mut p = MPoly::zero(&self.vars);
        for (e, c) in &self.terms {
            if e[i] > 0 {
                let mut f = e.clone();
                f[i] -= 1;
                p.add_term(f, c * Rat::from_integer(e[i].into()));
            }
        }
        p
    }

    /// Replace variable `name` by `value` (same variable list).
    pub fn substitute(&self, name: &str, value: &MPoly) -> Result<MPoly> {
        let i = self.vars.require(name)?;
        if value.vars != self.vars {
            return Err(Error::VarMismatch);
        }
        let images: Vec<MPoly> = (0..self.vars.len())
            .map(|j| {
                if j == i {
                    value.clone()
                } else {
                    MPoly::var(&self.vars, j)
                }
            })
            .collect();
        Ok(self.compose(&images, &self.vars))
    }

    /// Substitute `images[i]` (polynomials over `target`) for variable `i`.
    pub fn compose(&self, images: &[MPoly], target: &Vars) -> MPoly {
        assert_eq!(images.len(), self.vars.len());
        let mut powers: Vec<Vec<MPoly>> = vec![vec![MPoly::one(target)]; images.len()];
        let mut out = MPoly::zero(target);
        for (e, c) in &self.terms {
            let mut t = MPoly::constant(target, c.clone());
            for (i, &k) in e.iter().enumerate() {
                if k == 0 {
                    continue;
                }
                while powers[i].len() <= k as usize {
                    let next = powers[i].last().unwrap() * &images[i];
                    powers[i].push(next);
                }
                t = &t * &powers[i][k as usize];
            }
            out = &out + &t;
        }
        out
    }

    /// Re-express over `target`, matching variables by name. Variables that
    /// do not occur need not exist in `target`.
    pub fn embed(&self, target: &Vars) -> Result<MPoly> {
        let map: Vec<Option<usize>> = (0..self.vars.len())
            .map(|i| {
                let t = target.index(self.vars.name(i));
                match t {
                    None if self.uses_var(i) => {
                        Err(Error::UnknownVariable(self.vars.name(i).to_string()))
                    }
                    _ => Ok(t),
                }
            })
            .collect::<Result<_>>()?;
        let mut p = MPoly::zero(target);
        for (e, c) in &self.terms {
            let mut f = Self::unit_exp(target.len());
            for (i, &k) in e.iter().enumerate() {
                if let Some(j) = map[i] {
                    f[j] = k;
                }
            }
            p.add_term(f, c.clone());
        }
        Ok(p)
    }

    /// Set the flagged variables to zero.
    pub fn restrict_zero(&self, zero: &[bool]) -> MPoly {
        MPoly {
            vars: self.vars.clone(),
            terms: self
                .terms
                .iter()
                .filter(|(e, _)| e.iter().zip(zero).all(|(&k, &z)| !z || k == 0))
                .map(|(e, c)| (e.clone(), c.clone()))
                .collect(),
        }
    }

    pub fn eval(&self, point: &[Rat]) -> Rat {
        let mut s = Rat::zero();
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for (i, &k) in e.iter().enumerate() {
                if k > 0 {
                    t *= num_traits::pow(point[i].clone(), k as usize);
                }
            }
            s += t;
        }
        s
    }

    /// Largest m with var^m dividing every term.
    pub fn var_content(&self, i: usize) -> u32 {
        self.terms.keys().map(|e| e[i] as u32).min().unwrap_or(0)
    }

    /// Divide by `var^m` with `m` maximal and at most `kmax`; returns (quotient, m).
    pub fn exact_divide(&self, i: usize, kmax: u32) -> (MPoly, u32) {
        let m = self.var_content(i).min(kmax);
        if self.is_zero() || m == 0 {
            return (self.clone(), 0);
        }
        let terms = self
            .terms
            .iter()
            .map(|(e, c)| {
                let mut f = e.clone();
                f[i] -= m as u16;
                (f, c.clone())
            })
            .collect();
        (
            MPoly {
                vars: self.vars.clone(),
                terms,
            },
            m,
        )
    }

    /// Exact quotient by `h`, or `None` when `h` does not divide.
    pub fn div_exact(&self, h: &MPoly) -> Option<MPoly> {
        self.check_vars(h);
        let (he, hc) = h.terms.iter().next_back()?;
        let mut rem = self.clone();
        let mut quo = MPoly::zero(&self.vars);
        while let Some((e, c)) = rem.terms.iter().next_back() {
            if !e.iter().zip(he.iter()).all(|(a, b)| a >= b) {
                return None;
            }
            let qe: Exp = e.iter().zip(he.iter()).map(|(a, b)| a - b).collect();
            let qc = c / hc;
            rem = &rem - &h.mul_monomial(&qe, &qc);
            quo.add_term(qe, qc);
        }
        Some(quo)
    }

    /// Divide by the leading coefficient of the lexicographically largest term.
    pub fn normalized(&self) -> MPoly {
        match self.terms.iter().next_back() {
            Some((_, c)) => self.scale(&c.recip()),
            None => self.clone(),
        }
    }

    /// Same polynomial up to a nonzero constant factor.
    pub fn proportional(&self, other: &MPoly) -> bool {
        self.normalized() == other.normalized()
    }

    fn fmt_monomial(&self, e: &Exp) -> String {
        let parts: Vec<String> = e
            .iter()
            .enumerate()
            .filter(|(_, &k)| k > 0)
            .map(|(i, &k)| {
                if k == 1 {
                    self.vars.name(i).to_string()
                } else {
                    format!("{}^{}", self.vars.name(i), k)
                }
            })
            .collect();
        parts.join("*")
    }
}

impl fmt::Display for MPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (n, (e, c)) in self.terms.iter().rev().enumerate() {
            let mono = self.fmt_monomial(e);
            let neg = c.is_negative();
            let a = c.abs();
            if n == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { "-" } else { "+" })?;
            }
            match (mono.is_empty(), a.is_one()) {
                (true, _) => write!(f, "{a}")?,
                (false, true) => write!(f, "{mono}")?,
                (false, false) => write!(f, "{a}*{mono}")?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for MPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "MPoly({self})")
    }
}

impl Add for &MPoly {
    type Output = MPoly;
    fn add(self, o: &MPoly) -> MPoly {
        self.check_vars(o);
        let mut p = self.clone();
        for (e, c) in &o.terms {
            p.add_term(e.clone(), c.clone());
        }
        p
    }
}

impl Sub for &MPoly {
    type Output = MPoly;
    fn sub(self, o: &MPoly) -> MPoly {
        self.check_vars(o);
        let mut p = self.clone();
        for (e, c) in &o.terms {
            p.add_term(e.clone(), -c);
        }
        p
    }
}

impl Mul for &MPoly {
    type Output = MPoly;
    fn mul(self, o: &MPoly) -> MPoly {
        self.check_vars(o);
        let mut p = MPoly::zero(&self.vars);
        for (e, c) in &self.terms {
            for (f, d) in &o.terms {
                p.add_term(exp_add(e, f), c * d);
            }
        }
        p
    }
}

impl Neg for &MPoly {
    type Output = MPoly;
    fn neg(self) -> MPoly {
        self.scale(&-Rat::one())
    }
}

macro_rules! owned_binop {
    ($tr:ident, $m:ident) => {
        impl $tr for MPoly {
            type Output = MPoly;
            fn $m(self, o: MPoly) -> MPoly {
                (&self).$m(&o)
            }
        }
        impl $tr<&MPoly> for MPoly {
            type Output = MPoly;
            fn $m(self, o: &MPoly) -> MPoly {
                (&self).$m(o)
            }
        }
    };
}

owned_binop!(Add, add);
owned_binop!(Sub, sub);
owned_binop!(Mul, mul);

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{int, rat};

    fn ring() -> Vars {
        Vars::new(["x0", "x1", "x2", "x3"])
    }

    #[test]
    fn derivative_of_quadric() {
        let v = ring();
        let g = MPoly::parse(&v, "x0*x2 - x1^2/2").unwrap();
        assert_eq!(g.derivative(0), MPoly::var(&v, 2));
        assert_eq!(g.derivative(1), MPoly::parse(&v, "-x1").unwrap());
    }

    #[test]
    fn substitution_and_unknown_variable() {
        let v = Vars::new(["b1", "b2", "u2", "x0", "x2"]);
        let p = MPoly::parse(&v, "b2*x0*x2").unwrap();
        let val = MPoly::parse(&v, "b1*u2").unwrap();
        assert_eq!(
            p.substitute("b2", &val).unwrap(),
            MPoly::parse(&v, "b1*u2*x0*x2").unwrap()
        );
        assert_eq!(
            p.substitute("b7", &val),
            Err(Error::UnknownVariable("b7".into()))
        );
    }

    #[test]
    fn origin_value() {
        let v = Vars::new(["s0", "s1"]);
        assert_eq!(
            MPoly::parse(&v, "3*s0 - 2*s1").unwrap().constant_term(),
            int(0)
        );
        assert_eq!(
            MPoly::parse(&v, "s0 + 7/2").unwrap().constant_term(),
            rat(7, 2)
        );
    }

    #[test]
    fn exact_divide_examples() {
        let v = Vars::new(["u2", "s0", "x0"]);
        let p = MPoly::parse(&v, "u2^2*s0 + u2^3").unwrap();
        let (q, m) = p.exact_divide(0, 10);
        assert_eq!(m, 2);
        assert_eq!(q, MPoly::parse(&v, "s0 + u2").unwrap());
        let (q, m) = MPoly::var(&v, 2).exact_divide(0, 10);
        assert_eq!((q, m), (MPoly::var(&v, 2), 0));
        let (_, m) = p.exact_divide(0, 1);
        assert_eq!(m, 1);
    }

    #[test]
    fn div_exact_detects_remainders() {
        let v = ring();
        let p = MPoly::parse(&v, "x0^2*x1 - x0*x3^2").unwrap();
        let x0 = MPoly::var(&v, 0);
        assert_eq!(
            p.div_exact(&x0).unwrap(),
            MPoly::parse(&v, "x0*x1 - x3^2").unwrap()
        );
        assert!(MPoly::parse(&v, "x0 + x1")
            .unwrap()
            .div_exact(&x0)
            .is_none());
    }

    #[test]
    fn compose_into_other_ring() {
        let v = Vars::new(["a", "b"]);
        let w = Vars::new(["t"]);
        let p = MPoly::parse(&v, "a^2 - 3*b").unwrap();
        let images = [
            MPoly::parse(&w, "t + 1").unwrap(),
            MPoly::parse(&w, "t^2").unwrap(),
        ];
        assert_eq!(
            p.compose(&images, &w),
            MPoly::parse(&w, "-2*t^2 + 2*t + 1").unwrap()
        );
    }

    #[test]
    fn display_round_trips_through_parser() {
        let v = ring();
        let p = MPoly::parse(&v, "x1*x2^2 - 2*x1^2*x3 + x0*x2*x3 - 1/3").unwrap();
        assert_eq!(MPoly::parse(&v, &p.to_string()).unwrap(), p);
    }
}
