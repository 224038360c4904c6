//! Affine charts of the tower F <- X <- X' <- Y <- Y1 <- Y2 <- Y3 <- Y4 over
//! the standard flag, the four blowup centers, and the enumeration of the
//! torus-fixed loci of Y4.

mod centers;
mod enumerate;

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::arith::{rat, MPoly, Vars};
use crate::bundles::{QuadricPoint, CUBIC_BASE, CUBIC_MONOMIALS, QUADRIC_MONOMIALS};
use crate::error::{Error, Result};
use crate::flags::Character;
use crate::ideals::Ideal;
use crate::omega::{omega_of_pair, OmegaVector, X_NAMES};

pub(crate) use centers::upoly_gcd;
pub use centers::{
    c_fixed_points, center_ideal_in_chart, poly_character, reference_center, Center, CenterGen,
    REFERENCE_CENTERS, REFERENCE_CHOICES, REFERENCE_Y,
};
pub use enumerate::{
    enumerate_fixed_loci, FixedLocus, Inventory, LineRecord, LocusData, NormalRoot, PointRecord,
    ProvStep, Provenance, RootClass,
};

/// The four blowup centers, in order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Stage {
    C,
    EPrime,
    R,
    L,
}

impl Stage {
    pub const ALL: [Stage; 4] = [Stage::C, Stage::EPrime, Stage::R, Stage::L];

    pub fn index(self) -> usize {
        self as usize
    }

    /// Prefix of the ratio coordinates created by this blowup.
    pub fn letter(self) -> char {
        ['s', 't', 'v', 'z'][self.index()]
    }

    pub fn codim(self) -> usize {
        [6, 5, 5, 6][self.index()]
    }
}

impl fmt::Display for Stage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(["C", "E'", "R", "L"][self.index()])
    }
}

/// A torus-fixed point of Y over the standard flag: the fiber point `j` of
/// P(B̄), the fixed point of P(B') over it and the basis vector `apt` of A'.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct YPoint {
    pub j: u8,
    pub quadric: QuadricPoint,
    pub apt: u8,
}

impl YPoint {
    pub fn new(j: u8, quadric: QuadricPoint, apt: u8) -> Result<Self> {
        if !(1..=3).contains(&j) || apt > 4 {
            return Err(Error::InvalidChart(format!("fixed point j={j}, a{apt}")));
        }
        Ok(YPoint { j, quadric, apt })
    }

    pub fn all() -> Vec<YPoint> {
        let mut out = Vec::with_capacity(30);
        for j in 1..=3 {
            for q in [QuadricPoint::X0Squared, QuadricPoint::GPrime] {
                for apt in 0..5 {
                    out.push(YPoint { j, quadric: q, apt });
                }
            }
        }
        out
    }

    /// The X' neighborhood, e.g. `[b0=u1=1]` or `[b2=1]`.
    pub fn neighborhood(&self) -> String {
        match self.quadric {
            QuadricPoint::X0Squared => format!("[b0=u{}=1]", self.j),
            QuadricPoint::GPrime => format!("[b{}=1]", self.j),
        }
    }

    pub fn label(&self) -> String {
        format!("{}[a{}=1]", self.neighborhood(), self.apt)
    }

    fn quadric_coordinate(&self, k: u8) -> String {
        match self.quadric {
            QuadricPoint::X0Squared => format!("u{k}"),
            QuadricPoint::GPrime => format!("b{k}"),
        }
    }

    fn normal_coordinate(&self) -> String {
        match self.quadric {
            QuadricPoint::X0Squared => format!("b{}", self.j),
            QuadricPoint::GPrime => "b0".to_string(),
        }
    }

    fn others(&self) -> impl Iterator<Item = u8> + '_ {
        (1..=3).filter(move |&k| k != self.j)
    }

    /// Chart coordinates: the quadric scale, the two remaining quadric
    /// directions, then the four remaining cubic coefficients.
    pub fn coordinate_names(&self) -> Vec<String> {
        let mut out = vec![self.normal_coordinate()];
        out.extend(self.others().map(|k| self.quadric_coordinate(k)));
        out.extend((0..5).filter(|&k| k != self.apt).map(|k| format!("a{k}")));
        out
    }

    fn cubic_weight(&self, k: u8) -> Character {
        if k < 4 {
            Character::of_monomial(CUBIC_BASE[k as usize])
        } else {
            Character::of_monomial(CUBIC_MONOMIALS[self.j as usize - 1])
        }
    }

    pub fn coordinate_characters(&self) -> Vec<Character> {
        let mb = |k: u8| Character::of_monomial(QUADRIC_MONOMIALS[k as usize - 1]);
        let x02 = Character::of_monomial([2, 0, 0, 0]);
        let mut out = vec![match self.quadric {
            QuadricPoint::X0Squared => mb(self.j) - x02,
            QuadricPoint::GPrime => x02 - mb(self.j),
        }];
        out.extend(self.others().map(|k| mb(k) - mb(self.j)));
        out.extend(
            (0..5)
                .filter(|&k| k != self.apt)
                .map(|k| self.cubic_weight(k) - self.cubic_weight(self.apt)),
        );
        out
    }

    /// The quadric g and cubic f over the chart coordinates followed by x0..x3.
    pub fn forms(&self) -> (Vars, MPoly, MPoly) {
        let mut names = self.coordinate_names();
        names.extend(X_NAMES.iter().map(|s| s.to_string()));
        let vars = Vars::new(names);
        let v = |s: &str| MPoly::var_named(&vars, s).expect("chart coordinate");
        let x = |i: usize| v(X_NAMES[i]);
        let u = |k: u8| {
            if k == self.j {
                MPoly::one(&vars)
            } else {
                v(&self.quadric_coordinate(k))
            }
        };
        let gp =
            &(&(&u(1) * &x(0)) * &x(1)) + &(&(&(&u(2) * &x(0)) * &x(2)) + &(&u(3) * &x(1).pow(2)));
        let ct = &(&(&(&u(1) * &x(0)) * &x(1).pow(2)) + &(&(&(&u(2) * &x(0)) * &x(1)) * &x(2)))
            + &(&u(3) * &x(1).pow(3)).scale(&rat(2, 3));
        let x02 = x(0).pow(2);
        let scale = v(&self.normal_coordinate());
        let g = match self.quadric {
            QuadricPoint::X0Squared => &x02 + &(&scale * &gp),
            QuadricPoint::GPrime => &(&scale * &x02) + &gp,
        };
        let basis = [x(0).pow(3), &x02 * &x(1), &x02 * &x(2), &x02 * &x(3), ct];
        let mut f = MPoly::zero(&vars);
        for (k, b) in basis.iter().enumerate() {
            let c = if k == self.apt as usize {
                MPoly::one(&vars)
            } else {
                v(&format!("a{k}"))
            };
            f = &f + &(&c * b);
        }
        (vars, f, g)
    }

    /// ω over this chart of Y, before any blowup.
    pub fn omega_vector(&self) -> Result<OmegaVector> {
        let (vars, f, g) = self.forms();
        let h = MPoly::var_named(&vars, X_NAMES[0])?;
        let form = omega_of_pair(&f, &g, &h)?;
        OmegaVector::from_form(&form, &Vars::new(self.coordinate_names()))
    }
}

impl fmt::Display for YPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}

/// A Y point plus, for each blowup stage so far, the chosen generator index
/// or `None` when the center was not blown up in this chart.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ChartPath {
    pub y: YPoint,
    pub choices: Vec<Option<usize>>,
}

impl ChartPath {
    pub fn label(&self) -> String {
        let mut s = self.y.label();
        for (stage, c) in Stage::ALL.iter().zip(&self.choices) {
            if let Some(k) = c {
                s.push_str(&format!("[{}{k}=1]", stage.letter()));
            }
        }
        s
    }
}

impl fmt::Display for ChartPath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}

/// An exceptional divisor that is still a coordinate hyperplane of the chart.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Exceptional {
    pub stage: Stage,
    pub name: String,
    pub character: Character,
}

/// One blowup: images of the parent coordinates over the child coordinates.
#[derive(Clone, Debug)]
pub struct BlowupStep {
    pub stage: Stage,
    pub vars: Vars,
    pub images: Vec<MPoly>,
    pub exc: usize,
}

#[derive(Clone, Debug)]
pub struct Chart {
    pub y: YPoint,
    /// Number of blowup stages already processed.
    pub stage: usize,
    pub vars: Vars,
    pub chars: Vec<Character>,
    subst: Vec<MPoly>,
    excs: Vec<Exceptional>,
    steps: Vec<BlowupStep>,
    path: ChartPath,
    omega: OmegaVector,
}

impl Chart {
    pub fn y_chart(y: YPoint) -> Result<Chart> {
        let vars = Vars::new(y.coordinate_names());
        let chars = y.coordinate_characters();
        let subst = (0..vars.len()).map(|i| MPoly::var(&vars, i)).collect();
        let omega = y.omega_vector()?;
        omega.character(&chars)?;
        Ok(Chart {
            y,
            stage: 0,
            vars,
            chars,
            subst,
            excs: Vec::new(),
            steps: Vec::new(),
            path: ChartPath {
                y,
                choices: Vec::new(),
            },
            omega,
        })
    }

    pub fn label(&self) -> String {
        self.path.label()
    }

    pub fn path(&self) -> &ChartPath {
        &self.path
    }

    pub fn steps(&self) -> &[BlowupStep] {
        &self.steps
    }

    /// Exceptional divisors that are coordinate hyperplanes here.
    pub fn exceptionals(&self) -> &[Exceptional] {
        &self.excs
    }

    /// The Y chart coordinates expressed in this chart's coordinates.
    pub fn substitution(&self) -> &[MPoly] {
        &self.subst
    }

    /// The resolved ω vector, maintained across blowups.
    pub fn omega(&self) -> &OmegaVector {
        &self.omega
    }

    pub fn names(&self) -> Vec<String> {
        self.vars.names().to_vec()
    }

    pub fn weights(&self) -> Vec<(String, Character)> {
        self.names()
            .into_iter()
            .zip(self.chars.iter().copied())
            .collect()
    }

    pub fn character_of(&self, name: &str) -> Result<Character> {
        Ok(self.chars[self.vars.require(name)?])
    }

    pub fn zero_coordinates(&self) -> Vec<usize> {
        (0..self.chars.len())
            .filter(|&i| self.chars[i].is_zero())
            .collect()
    }

    /// Pass a stage whose center does not meet the locus of interest.
    pub fn skip(&self) -> Result<Chart> {
        if self.stage >= 4 {
            return Err(Error::InvalidChart(format!(
                "{} is already final",
                self.label()
            )));
        }
        let mut c = self.clone();
        c.stage += 1;
        c.path.choices.push(None);
        Ok(c)
    }

    /// The chart of the blowup along `center` where generator `k` spans the
    /// exceptional direction.
    pub fn blowup(&self, center: &Center, k: usize) -> Result<Chart> {
        if center.stage.index() != self.stage || center.vars != self.vars {
            return Err(Error::InvalidChart(format!(
                "center {} does not belong to chart {}",
                center.stage,
                self.label()
            )));
        }
        let n = center.gens.len();
        if k >= n {
            return Err(Error::InvalidChart(format!(
                "generator {k} of a center with {n} generators"
            )));
        }
        let letter = center.stage.letter();
        let pivots: Vec<usize> = center.gens.iter().map(|g| g.pivot).collect();
        let chi_k = center.gens[k].character;
        let mut names = Vec::with_capacity(self.vars.len());
        let mut chars = Vec::with_capacity(self.vars.len());
        let mut ratio = vec![usize::MAX; n];
        for (i, g) in center.gens.iter().enumerate() {
            if i != k {
                ratio[i] = names.len();
                names.push(format!("{letter}{i}"));
                chars.push(g.character - chi_k);
            }
        }
        for v in 0..self.vars.len() {
            if v == pivots[k] {
                names.push(self.vars.name(v).to_string());
                chars.push(chi_k);
            } else if !pivots.contains(&v) {
                names.push(self.vars.name(v).to_string());
                chars.push(self.chars[v]);
            }
        }
        let vars = Vars::new(names);
        let exc = vars.require(self.vars.name(pivots[k]))?;
        let e = MPoly::var(&vars, exc);
        let mut images = Vec::with_capacity(self.vars.len());
        for v in 0..self.vars.len() {
            match pivots.iter().position(|&p| p == v) {
                Some(i) => {
                    let g = &center.gens[i];
                    let rest = g.rest.embed(&vars)?;
                    let lin = if i == k {
                        e.clone()
                    } else {
                        &MPoly::var(&vars, ratio[i]) * &e
                    };
                    images.push((&lin - &rest).scale(&g.coeff.recip()));
                }
                None => images.push(MPoly::var_named(&vars, self.vars.name(v))?),
            }
        }
        let subst = self
            .subst
            .iter()
            .map(|p| p.compose(&images, &vars))
            .collect();
        let mut omega = self.omega.compose(&images, &vars);
        omega.strip(exc);
        if omega.is_empty() {
            return Err(Error::Bookkeeping(format!(
                "ω vanishes identically after blowing up {}",
                self.label()
            )));
        }
        let pivot_names: Vec<&str> = pivots.iter().map(|&p| self.vars.name(p)).collect();
        let mut excs: Vec<Exceptional> = self
            .excs
            .iter()
            .filter(|x| !pivot_names.contains(&x.name.as_str()))
            .cloned()
            .collect();
        excs.push(Exceptional {
            stage: center.stage,
            name: vars.name(exc).to_string(),
            character: chi_k,
        });
        let mut steps = self.steps.clone();
        steps.push(BlowupStep {
            stage: center.stage,
            vars: vars.clone(),
            images,
            exc,
        });
        let mut path = self.path.clone();
        path.choices.push(Some(k));
        Ok(Chart {
            y: self.y,
            stage: self.stage + 1,
            vars,
            chars,
            subst,
            excs,
            steps,
            path,
            omega,
        })
    }
}

/// The center at `stage` with generators in graph form: the reference lists
/// along the reference path, the derived graph form of `ideal` elsewhere.
pub(crate) fn chart_center(chart: &Chart, stage: Stage, ideal: Ideal) -> Result<Center> {
    match reference_center(chart, stage) {
        Some(c) => c,
        None => Center::from_ideal(stage, &ideal, &chart.chars),
    }
}

/// Rebuild a chart from its path. Along the reference path the reference
/// generator lists fix the coordinate names; elsewhere the derived graph form does.
pub fn build_chart(path: &ChartPath) -> Result<Chart> {
    if path.choices.len() > 4 {
        return Err(Error::InvalidChart(format!(
            "{} stages requested",
            path.choices.len()
        )));
    }
    let mut chart = Chart::y_chart(path.y)?;
    for (s, choice) in path.choices.iter().enumerate() {
        let stage = Stage::ALL[s];
        chart = match choice {
            None => chart.skip()?,
            Some(k) => {
                let center = chart_center(&chart, stage, center_ideal_in_chart(stage, &chart)?)?;
                chart.blowup(&center, *k)?
            }
        };
    }
    Ok(chart)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::flags::{FixedFlag, WeightVector};

    fn reference(stages: usize, last: usize) -> ChartPath {
        let mut choices: Vec<Option<usize>> = REFERENCE_CHOICES.iter().map(|&k| Some(k)).collect();
        choices.push(Some(last));
        choices.truncate(stages);
        ChartPath {
            y: REFERENCE_Y,
            choices,
        }
    }

    fn sorted_names(c: &Chart) -> Vec<String> {
        let mut n = c.names();
        n.sort();
        n
    }

    fn names(s: &str) -> Vec<String> {
        let mut v: Vec<String> = s.split(',').map(str::to_string).collect();
        v.sort();
        v
    }

    #[test]
    fn thirty_y_points_with_nonzero_weights() {
        let w = WeightVector::new([0, 1, 4, 13]).unwrap();
        let all = YPoint::all();
        assert_eq!(all.len(), 30);
        for y in all {
            let c = Chart::y_chart(y).unwrap();
            assert_eq!(c.vars.len(), 7);
            assert!(c.chars.iter().all(|ch| ch.eval(&w) != 0), "{y}");
        }
    }

    #[test]
    fn reference_chart_coordinates() {
        let y = Chart::y_chart(REFERENCE_Y).unwrap();
        assert_eq!(y.names(), ["b1", "u2", "u3", "a1", "a2", "a3", "a4"]);
        let c1 = build_chart(&reference(1, 0)).unwrap();
        assert_eq!(sorted_names(&c1), names("s0,s1,s2,s3,s4,u2,u3"));
        let c2 = build_chart(&reference(2, 0)).unwrap();
        assert_eq!(sorted_names(&c2), names("t0,t2,t3,t4,u2,s1,s2"));
        let c3 = build_chart(&reference(3, 0)).unwrap();
        assert_eq!(sorted_names(&c3), names("v1,v2,v3,v4,u2,s2,t4"));
        for k in 0..6 {
            let c4 = build_chart(&reference(4, k)).unwrap();
            assert_eq!(c4.vars.len(), 7);
            assert!(c4.omega().ideal().is_unit(), "{}", c4.label());
        }
    }

    #[test]
    fn reference_chart_weights() {
        let e = Character::basis;
        let c1 = build_chart(&reference(1, 0)).unwrap();
        assert_eq!(c1.character_of("u2").unwrap(), e(2) - e(1));
        assert_eq!(c1.character_of("u3").unwrap(), e(1) - e(0));
        // s0 = (b1 - 4u3)/u2, where b1 - 4u3 has the weight of u3.
        assert_eq!(
            c1.character_of("s0").unwrap(),
            (e(1) - e(0)) - (e(2) - e(1))
        );
        assert_eq!(c1.exceptionals()[0].name, "u2");
    }

    #[test]
    fn blowup_rejects_bad_choice() {
        let c = Chart::y_chart(REFERENCE_Y).unwrap();
        let center = reference_center(&c, Stage::C).unwrap().unwrap();
        assert!(c.blowup(&center, 6).is_err());
        let bad = ChartPath {
            y: REFERENCE_Y,
            choices: vec![Some(9)],
        };
        assert!(matches!(build_chart(&bad), Err(Error::InvalidChart(_))));
    }

    #[test]
    fn flag_relabels_y_weights() {
        let w = WeightVector::new([0, 1, 4, 13]).unwrap();
        let c = Chart::y_chart(REFERENCE_Y).unwrap();
        let f = FixedFlag::parse("1023").unwrap();
        let u3 = c.character_of("u3").unwrap();
        assert_eq!(f.eval(u3, &w), 0 - 1);
    }
}
