//! The twisted 1-form ω = (3f dg - 2g df)/h attached to a pair of forms, its
//! coefficient vector over a chart, and the class of the line bundle it spans.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::arith::{int, Exp, MPoly, Rat, Vars};
use crate::error::{Error, Result};
use crate::flags::{Character, FixedFlag, WeightVector};
use crate::ideals::Ideal;
use crate::tower::{Chart, FixedLocus};

pub const X_NAMES: [&str; 4] = ["x0", "x1", "x2", "x3"];

fn x_indices(vars: &Vars) -> Result<[usize; 4]> {
    Ok([
        vars.require(X_NAMES[0])?,
        vars.require(X_NAMES[1])?,
        vars.require(X_NAMES[2])?,
        vars.require(X_NAMES[3])?,
    ])
}

/// `A0 dx0 + A1 dx1 + A2 dx2 + A3 dx3` with coefficients over a ring containing x0..x3.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiffForm {
    coeffs: [MPoly; 4],
}

impl DiffForm {
    pub fn new(coeffs: [MPoly; 4]) -> Result<Self> {
        let vars = coeffs[0].vars();
        if coeffs.iter().any(|c| c.vars() != vars) {
            return Err(Error::VarMismatch);
        }
        x_indices(vars)?;
        Ok(DiffForm { coeffs })
    }

    pub fn coeffs(&self) -> &[MPoly; 4] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> &MPoly {
        &self.coeffs[i]
    }

    pub fn vars(&self) -> &Vars {
        self.coeffs[0].vars()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(MPoly::is_zero)
    }

    /// `Σ x_i A_i`.
    pub fn euler_contraction(&self) -> MPoly {
        let xs = x_indices(self.vars()).expect("checked at construction");
        let mut s = MPoly::zero(self.vars());
        for (i, a) in self.coeffs.iter().enumerate() {
            s = &s + &(&MPoly::var(self.vars(), xs[i]) * a);
        }
        s
    }

    /// Coefficients after substituting `images` (over `target`) for every variable.
    pub fn compose(&self, images: &[MPoly], target: &Vars) -> [MPoly; 4] {
        self.coeffs.clone().map(|c| c.compose(images, target))
    }
}

impl fmt::Display for DiffForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| format!("({c})*dx{i}"))
            .collect();
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

/// The numerator `3f dg - 2g df` before division.
pub fn omega_numerator(f: &MPoly, g: &MPoly) -> Result<[MPoly; 4]> {
    if f.vars() != g.vars() {
        return Err(Error::VarMismatch);
    }
    let xs = x_indices(f.vars())?;
    let three = int(3);
    let two = int(2);
    Ok(xs.map(|xi| &(f * &g.derivative(xi)).scale(&three) - &(g * &f.derivative(xi)).scale(&two)))
}

/// ω = (3f dg - 2g df)/h, failing with the first coefficient `h` does not divide.
pub fn omega_of_pair(f: &MPoly, g: &MPoly, h: &MPoly) -> Result<DiffForm> {
    if h.vars() != f.vars() {
        return Err(Error::VarMismatch);
    }
    let num = omega_numerator(f, g)?;
    let mut out = Vec::with_capacity(4);
    for (index, c) in num.iter().enumerate() {
        let q = c.div_exact(h).ok_or_else(|| Error::NotDivisible {
            divisor: h.to_string(),
            index,
            coeff: c.to_string(),
        })?;
        out.push(q);
    }
    let form = DiffForm::new(out.try_into().expect("four coefficients"))?;
    let e = form.euler_contraction();
    if !e.is_zero() {
        return Err(Error::Bookkeeping(format!("Euler contraction of ω is {e}")));
    }
    Ok(form)
}

/// The 1-form monomial `x^exp dx_dx`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct FormMonomial {
    pub dx: usize,
    pub exp: [u32; 4],
}

impl FormMonomial {
    pub fn character(&self) -> Character {
        Character::of_monomial(self.exp) + Character::basis(self.dx)
    }
}

impl fmt::Display for FormMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        for (i, &k) in self.exp.iter().enumerate() {
            match k {
                0 => {}
                1 => parts.push(format!("x{i}")),
                _ => parts.push(format!("x{i}^{k}")),
            }
        }
        parts.push(format!("dx{}", self.dx));
        write!(f, "{}", parts.join("*"))
    }
}

/// Coordinates of ω in the basis of form monomials, with entries in a chart ring.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OmegaVector {
    vars: Vars,
    entries: BTreeMap<FormMonomial, MPoly>,
}

impl OmegaVector {
    /// Split a form over `chart ++ x0..x3` into entries over `chart`.
    pub fn from_form(form: &DiffForm, chart: &Vars) -> Result<Self> {
        let src = form.vars();
        let xs = x_indices(src)?;
        let map: Vec<Option<usize>> = (0..src.len())
            .map(|i| {
                if xs.contains(&i) {
                    Ok(None)
                } else {
                    chart.require(src.name(i)).map(Some)
                }
            })
            .collect::<Result<_>>()?;
        let mut acc: BTreeMap<FormMonomial, Vec<_>> = BTreeMap::new();
        for (dx, c) in form.coeffs().iter().enumerate() {
            for (e, r) in c.terms() {
                let key = FormMonomial {
                    dx,
                    exp: xs.map(|i| e[i] as u32),
                };
                let mut ce: Exp = Exp::from_elem(0, chart.len());
                for (i, m) in map.iter().enumerate() {
                    if let Some(j) = m {
                        ce[*j] = e[i];
                    }
                }
                acc.entry(key).or_default().push((ce, r.clone()));
            }
        }
        let entries = acc
            .into_iter()
            .map(|(k, ts)| (k, MPoly::from_terms(chart, ts)))
            .filter(|(_, p)| !p.is_zero())
            .collect();
        Ok(OmegaVector {
            vars: chart.clone(),
            entries,
        })
    }

    pub fn vars(&self) -> &Vars {
        &self.vars
    }

    pub fn entries(&self) -> &BTreeMap<FormMonomial, MPoly> {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn compose(&self, images: &[MPoly], target: &Vars) -> Self {
        OmegaVector {
            vars: target.clone(),
            entries: self
                .entries
                .iter()
                .map(|(k, p)| (*k, p.compose(images, target)))
                .filter(|(_, p)| !p.is_zero())
                .collect(),
        }
    }

    /// Divide every entry by the largest common power of variable `i`.
    pub fn strip(&mut self, i: usize) -> u32 {
        let m = self
            .entries
            .values()
            .map(|p| p.var_content(i))
            .min()
            .unwrap_or(0);
        if m > 0 {
            for p in self.entries.values_mut() {
                *p = p.exact_divide(i, m).0;
            }
        }
        m
    }

    pub fn restrict_zero(&self, zero: &[bool]) -> Self {
        OmegaVector {
            vars: self.vars.clone(),
            entries: self
                .entries
                .iter()
                .map(|(k, p)| (*k, p.restrict_zero(zero)))
                .filter(|(_, p)| !p.is_zero())
                .collect(),
        }
    }

    /// Entries up to proportionality, as an ideal of the chart ring.
    pub fn ideal(&self) -> Ideal {
        let mut gens: Vec<MPoly> = Vec::new();
        for p in self.entries.values() {
            let n = p.normalized();
            if !gens.contains(&n) {
                gens.push(n);
            }
        }
        Ideal::new(&self.vars, gens)
    }

    /// The character λ with every term `c y^a x^m dx_i` satisfying
    /// `χ(y^a) = χ(x^m dx_i) - λ`; fails unless all terms agree.
    pub fn character(&self, chars: &[Character]) -> Result<Character> {
        let mut out: Option<Character> = None;
        for (k, p) in &self.entries {
            for (e, _) in p.terms() {
                let mut c = k.character();
                for (i, &m) in e.iter().enumerate() {
                    c = c - chars[i] * m as i32;
                }
                match out {
                    None => out = Some(c),
                    Some(o) if o != c => {
                        return Err(Error::Bookkeeping(format!(
                            "ω is not semi-invariant: characters {o} and {c}"
                        )))
                    }
                    _ => {}
                }
            }
        }
        out.ok_or_else(|| Error::Bookkeeping("ω vanishes identically".into()))
    }
}

/// Recompute ω over a chart from the forms at its Y point, replaying every
/// blowup substitution followed by content removal of its exceptional coordinate.
pub fn omega_in_chart(chart: &Chart) -> Result<OmegaVector> {
    let mut v = chart.y.omega_vector()?;
    for step in chart.steps() {
        v = v.compose(&step.images, &step.vars);
        v.strip(step.exc);
    }
    if v.is_empty() {
        return Err(Error::Bookkeeping(format!(
            "ω vanishes on chart {}",
            chart.label()
        )));
    }
    Ok(v)
}

/// Equivariant class λ + d·h of W restricted to a fixed locus.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WClass {
    pub lambda: i64,
    pub d: i64,
}

/// Character of W and degree on the locus, computed at the standard flag.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct WCharacter {
    pub character: Character,
    pub d: u32,
}

impl WCharacter {
    pub fn at(&self, flag: &FixedFlag, w: &WeightVector) -> WClass {
        WClass {
            lambda: flag.eval(self.character, w),
            d: self.d as i64,
        }
    }
}

/// Read W off the resolved ω vector of a chart whose origin (no zero-weight
/// coordinate) or axis (exactly one) is a fixed locus.
pub fn w_character_in_chart(chart: &Chart, v: &OmegaVector) -> Result<WCharacter> {
    let zero_coords: Vec<usize> = (0..chart.vars.len())
        .filter(|&i| chart.chars[i].is_zero())
        .collect();
    let mask: Vec<bool> = chart.chars.iter().map(|c| !c.is_zero()).collect();
    let r = v.restrict_zero(&mask);
    if r.is_empty() {
        return Err(Error::Bookkeeping(format!(
            "ω vanishes on the fixed locus of chart {}",
            chart.label()
        )));
    }
    let character = r.character(&chart.chars)?;
    let d = match zero_coords.as_slice() {
        [] => 0,
        [z] => {
            let polys: Vec<Vec<Rat>> = r.entries().values().map(|p| univariate(p, *z)).collect();
            let g = polys
                .iter()
                .fold(Vec::new(), |acc, p| crate::tower::upoly_gcd(&acc, p));
            if g.len() != 1 {
                return Err(Error::Bookkeeping(format!(
                    "ω entries share a root on the fixed line of chart {}",
                    chart.label()
                )));
            }
            polys.iter().map(|p| p.len() as u32 - 1).max().unwrap_or(0)
        }
        _ => {
            return Err(Error::Unsupported(format!(
                "fixed locus of dimension {} in chart {}",
                zero_coords.len(),
                chart.label()
            )))
        }
    };
    Ok(WCharacter { character, d })
}

/// Coefficients (lowest degree first) of a polynomial in variable `z` only.
pub(crate) fn univariate(p: &MPoly, z: usize) -> Vec<Rat> {
    let n = p.degree_in(z) as usize;
    let mut out = vec![Rat::zero(); n + 1];
    for (e, c) in p.terms() {
        out[e[z] as usize] += c;
    }
    out
}

/// W at a fixed locus, recomputed from scratch in the locus's chart.
pub fn w_class_at_locus(locus: &FixedLocus, w: &WeightVector) -> Result<WClass> {
    let chart = crate::tower::build_chart(&locus.chart_path)?;
    let v = omega_in_chart(&chart)?;
    Ok(w_character_in_chart(&chart, &v)?.at(&locus.flag, w))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn xvars() -> Vars {
        Vars::new(X_NAMES)
    }

    fn p(s: &str) -> MPoly {
        MPoly::parse(&xvars(), s).unwrap()
    }

    #[test]
    fn trivial_pair_gives_zero() {
        let w = omega_of_pair(&p("x0^3"), &p("x0^2"), &p("x0")).unwrap();
        assert!(w.is_zero());
    }

    #[test]
    fn monomial_pair() {
        let w = omega_of_pair(&p("x0^2*x3"), &p("x0*x2"), &p("x0")).unwrap();
        assert_eq!(w.coeff(0), &p("-x0*x2*x3"));
        assert_eq!(w.coeff(1), &p("0"));
        assert_eq!(w.coeff(2), &p("3*x0^2*x3"));
        assert_eq!(w.coeff(3), &p("-2*x0^2*x2"));
        assert!(w.euler_contraction().is_zero());
    }

    #[test]
    fn non_divisible_names_coefficient() {
        let e = omega_of_pair(&p("x1^3"), &p("x0*x2"), &p("x0")).unwrap_err();
        assert!(matches!(e, Error::NotDivisible { index: 0, .. }), "{e}");
    }

    #[test]
    fn vector_split_and_strip() {
        let v = Vars::new(["a", "x0", "x1", "x2", "x3"]);
        let f = MPoly::parse(&v, "x0^2*x3 + a*x0^3").unwrap();
        let g = MPoly::parse(&v, "x0*x2").unwrap();
        let h = MPoly::parse(&v, "x0").unwrap();
        let form = omega_of_pair(&f, &g, &h).unwrap();
        let chart = Vars::new(["a"]);
        let mut vec = OmegaVector::from_form(&form, &chart).unwrap();
        let key = FormMonomial {
            dx: 2,
            exp: [2, 0, 0, 1],
        };
        assert_eq!(vec.entries()[&key], MPoly::parse(&chart, "3").unwrap());
        assert_eq!(vec.strip(0), 0);
        let lam = vec.character(&[Character([1, 0, 0, -1])]).unwrap();
        assert_eq!(lam, Character([2, 0, 1, 1]));
    }
}
