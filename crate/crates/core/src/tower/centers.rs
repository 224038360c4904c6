//! The four blowup centers: their ideals in a chart and their graph form.

use num_traits::{One, Zero};

use super::{Chart, Stage, YPoint};
use crate::arith::{int, rat, MPoly, Rat, Vars};
use crate::bundles::QuadricPoint;
use crate::error::{Error, Result};
use crate::flags::Character;
use crate::ideals::{ideal_equal, Ideal};

/// The Y point `[b0=u1=1][a0=1]` of the reference chart chain.
pub const REFERENCE_Y: YPoint = YPoint {
    j: 1,
    quadric: QuadricPoint::X0Squared,
    apt: 0,
};

/// Generator chosen at the C, E' and R blowups along the reference chain.
pub const REFERENCE_CHOICES: [usize; 3] = [5, 1, 0];

/// The reference generator lists along the reference chain, each paired with
/// the coordinate it is solved for.
pub const REFERENCE_CENTERS: [&[(&str, &str)]; 4] = [
    &[
        ("b1-4*u3", "b1"),
        ("a1-6*u3", "a1"),
        ("a2", "a2"),
        ("a3", "a3"),
        ("a4-12*u3^2", "a4"),
        ("u2", "u2"),
    ],
    &[
        ("s3", "s3"),
        ("s2", "s2"),
        ("3*s0-2*s1", "s0"),
        ("6*u3+s1*u2", "u3"),
        ("3*s4+s1^2*u2", "s4"),
    ],
    &[
        ("u2", "u2"),
        ("t3-1", "t3"),
        ("t2", "t2"),
        ("t0", "t0"),
        ("3*s1-2*t4", "s1"),
    ],
    &[
        ("s2", "s2"),
        ("v1", "v1"),
        ("v2", "v2"),
        ("v3", "v3"),
        ("v4", "v4"),
        ("t4", "t4"),
    ],
];

/// Common character of all terms of `p`, if there is one.
pub fn poly_character(p: &MPoly, chars: &[Character]) -> Option<Character> {
    let mut out = None;
    for (e, _) in p.terms() {
        let mut c = Character::ZERO;
        for (i, &k) in e.iter().enumerate() {
            c = c + chars[i] * k as i32;
        }
        match out {
            None => out = Some(c),
            Some(o) if o != c => return None,
            _ => {}
        }
    }
    out
}

/// `p = c·x_v + rest` with `c` a nonzero constant and `rest` free of `x_v`.
fn linear_split(p: &MPoly, v: usize) -> Option<(Rat, MPoly)> {
    if p.degree_in(v) != 1 {
        return None;
    }
    let mut coeff = None;
    let mut rest = Vec::new();
    for (e, c) in p.terms() {
        if e[v] == 0 {
            rest.push((e.clone(), c.clone()));
        } else if e.iter().enumerate().all(|(i, &k)| i == v || k == 0) {
            coeff = Some(c.clone());
        } else {
            return None;
        }
    }
    Some((coeff?, MPoly::from_terms(p.vars(), rest)))
}

/// Generator `coeff·x_pivot + rest` of a center, with `rest` free of every pivot.
#[derive(Clone, Debug)]
pub struct CenterGen {
    pub pivot: usize,
    pub coeff: Rat,
    pub rest: MPoly,
    pub character: Character,
}

/// A smooth invariant center in graph form over a chart.
#[derive(Clone, Debug)]
pub struct Center {
    pub stage: Stage,
    pub vars: Vars,
    pub gens: Vec<CenterGen>,
}

impl Center {
    pub fn codim(&self) -> usize {
        self.gens.len()
    }

    pub fn polys(&self) -> Vec<MPoly> {
        self.gens
            .iter()
            .map(|g| &MPoly::var(&self.vars, g.pivot).scale(&g.coeff) + &g.rest)
            .collect()
    }

    pub fn ideal(&self) -> Ideal {
        Ideal::new(&self.vars, self.polys())
    }

    /// Normal characters, one per generator.
    pub fn characters(&self) -> Vec<Character> {
        self.gens.iter().map(|g| g.character).collect()
    }

    fn check(&self, chars: &[Character]) -> Result<()> {
        let pivots: Vec<usize> = self.gens.iter().map(|g| g.pivot).collect();
        for (g, p) in self.gens.iter().zip(self.polys()) {
            if pivots.iter().any(|&v| g.rest.uses_var(v)) {
                return Err(Error::Bookkeeping(format!(
                    "{} generator {p} is not solved for its pivot",
                    self.stage
                )));
            }
            if poly_character(&p, chars) != Some(g.character) {
                return Err(Error::Bookkeeping(format!(
                    "{} generator {p} is not semi-invariant",
                    self.stage
                )));
            }
        }
        Ok(())
    }

    /// Graph form of a center given by `(generator, pivot)` pairs.
    pub fn from_reference(
        stage: Stage,
        vars: &Vars,
        chars: &[Character],
        list: &[(&str, &str)],
    ) -> Result<Center> {
        let mut gens = Vec::with_capacity(list.len());
        for (src, pivot) in list {
            let p = MPoly::parse(vars, src)?;
            let v = vars.require(pivot)?;
            let (coeff, rest) = linear_split(&p, v)
                .ok_or_else(|| Error::Bookkeeping(format!("`{src}` is not linear in {pivot}")))?;
            gens.push(CenterGen {
                pivot: v,
                coeff,
                rest,
                character: chars[v],
            });
        }
        let c = Center {
            stage,
            vars: vars.clone(),
            gens,
        };
        c.check(chars)?;
        Ok(c)
    }

    /// Graph form of a smooth center: repeatedly solve a reduced Gröbner
    /// basis element for a coordinate it contains linearly.
    pub fn from_ideal(stage: Stage, ideal: &Ideal, chars: &[Character]) -> Result<Center> {
        let vars = ideal.vars().clone();
        let mut gens: Vec<MPoly> = ideal.groebner().to_vec();
        let mut solved: Vec<(usize, MPoly)> = Vec::new();
        loop {
            gens.retain(|g| !g.is_zero());
            if gens.is_empty() {
                break;
            }
            if gens.iter().any(MPoly::is_constant) {
                return Err(Error::Unsupported(format!(
                    "{stage} center is empty in this chart"
                )));
            }
            let mut order: Vec<usize> = (0..gens.len()).collect();
            order.sort_by_key(|&i| gens[i].num_terms());
            let found = order.iter().find_map(|&i| {
                (0..vars.len())
                    .filter(|v| solved.iter().all(|(s, _)| s != v))
                    .find_map(|v| {
                        linear_split(&gens[i], v).map(|(c, r)| (v, (-&r).scale(&c.recip())))
                    })
            });
            let (v, phi) = found.ok_or_else(|| {
                Error::Unsupported(format!("{stage} center {ideal} is not a graph"))
            })?;
            let name = vars.name(v).to_string();
            for (_, ph) in solved.iter_mut() {
                *ph = ph.substitute(&name, &phi)?;
            }
            gens = gens
                .iter()
                .map(|g| g.substitute(&name, &phi))
                .collect::<Result<_>>()?;
            solved.push((v, phi));
        }
        if solved.is_empty() {
            return Err(Error::Unsupported(format!(
                "{stage} center is the whole chart"
            )));
        }
        let c = Center {
            stage,
            vars,
            gens: solved
                .into_iter()
                .map(|(v, phi)| CenterGen {
                    pivot: v,
                    coeff: Rat::one(),
                    rest: -&phi,
                    character: chars[v],
                })
                .collect(),
        };
        c.check(chars)?;
        Ok(c)
    }
}

/// The fixed points of the curve C of triples (L^2, ., L^3), L = αx0 + βx1,
/// read off from its parametrization at (α:β) = (1:0) and (0:1).
pub fn c_fixed_points() -> Vec<YPoint> {
    let unique = |v: &[Rat]| -> Option<usize> {
        let nz: Vec<usize> = (0..v.len()).filter(|&i| !v[i].is_zero()).collect();
        (nz.len() == 1).then(|| nz[0])
    };
    let mut out = Vec::new();
    for (al, be) in [(Rat::one(), Rat::zero()), (Rat::zero(), Rat::one())] {
        let ubar = [&al * int(2), Rat::zero(), be.clone()];
        let j = unique(&ubar).expect("one quadric direction") + 1;
        let uj = ubar[j - 1].clone();
        let quadric = if (&be * &uj).is_zero() {
            QuadricPoint::X0Squared
        } else {
            QuadricPoint::GPrime
        };
        let a = [
            num_traits::pow(al.clone(), 3),
            &al * &al * &be * int(3),
            Rat::zero(),
            Rat::zero(),
            &be * &be * &uj * rat(3, 2),
        ];
        let apt = unique(&a).expect("one cubic direction");
        out.push(YPoint {
            j: j as u8,
            quadric,
            apt: apt as u8,
        });
    }
    out
}

/// Ideal of the closure of C in a chart of Y, by implicitizing its two
/// affine patches and intersecting.
fn c_ideal(y: YPoint) -> Ideal {
    let chart = Vars::new(y.coordinate_names());
    let ext = chart.prepend(&["_c"]);
    let c = MPoly::var(&ext, 0);
    let one = MPoly::one(&ext);
    let zero = MPoly::zero(&ext);
    let mut acc: Option<Ideal> = None;
    for (al, be) in [(one.clone(), c.clone()), (c.clone(), one.clone())] {
        let ubar = [al.scale(&int(2)), zero.clone(), be.clone()];
        let uj = ubar[y.j as usize - 1].clone();
        let a = [
            al.pow(3),
            (&al.pow(2) * &be).scale(&int(3)),
            zero.clone(),
            zero.clone(),
            (&be.pow(2) * &uj).scale(&rat(3, 2)),
        ];
        let mut fracs: Vec<(MPoly, MPoly)> = vec![match y.quadric {
            QuadricPoint::X0Squared => (&be * &uj, al.pow(2)),
            QuadricPoint::GPrime => (al.pow(2), &be * &uj),
        }];
        for k in (1..=3).filter(|&k| k != y.j as usize) {
            fracs.push((ubar[k - 1].clone(), uj.clone()));
        }
        for k in (0..5).filter(|&k| k != y.apt as usize) {
            fracs.push((a[k].clone(), a[y.apt as usize].clone()));
        }
        let patch = if fracs.iter().any(|(_, d)| d.is_zero()) {
            Ideal::unit(&chart)
        } else {
            let gens = fracs
                .iter()
                .enumerate()
                .map(|(i, (n, d))| &(d * &MPoly::var(&ext, i + 1)) - n)
                .collect();
            let prod = fracs.iter().fold(one.clone(), |acc, (_, d)| &acc * d);
            Ideal::new(&ext, gens)
                .saturate(&prod)
                .eliminate(&[0])
                .map_gens(|p| p.embed(&chart).expect("parameter eliminated"), &chart)
        };
        acc = Some(match acc {
            None => patch,
            Some(i) => i.intersect(&patch),
        });
    }
    acc.expect("two patches").to_groebner()
}

/// The exceptional plane over g = x0^2, f = x0^3: nonempty only in the
/// charts `[b0=u_j=1][a0=1]`.
fn e_ideal(y: YPoint) -> Ideal {
    let vars = Vars::new(y.coordinate_names());
    if y.quadric == QuadricPoint::X0Squared && y.apt == 0 {
        let names = [
            format!("b{}", y.j),
            "a1".into(),
            "a2".into(),
            "a3".into(),
            "a4".into(),
        ];
        let gens = names
            .iter()
            .map(|n| MPoly::var_named(&vars, n).expect("chart coordinate"))
            .collect();
        Ideal::new(&vars, gens)
    } else {
        Ideal::unit(&vars)
    }
}

fn saturate_by_stage(mut i: Ideal, chart: &Chart, stage: Stage) -> Result<Ideal> {
    for x in chart.exceptionals().iter().filter(|x| x.stage == stage) {
        i = i.saturate(&MPoly::var_named(&chart.vars, &x.name)?);
    }
    Ok(i)
}

/// The ideal of the center blown up at `stage`, in a chart at that stage:
/// C by implicitization, E' as the strict transform of the exceptional
/// plane, R as the base ideal of ω with the E' divisor removed, and L as
/// the remaining base ideal.
pub fn center_ideal_in_chart(stage: Stage, chart: &Chart) -> Result<Ideal> {
    if chart.stage != stage.index() {
        return Err(Error::InvalidChart(format!(
            "{} is at stage {}, not before {stage}",
            chart.label(),
            chart.stage
        )));
    }
    match stage {
        Stage::C => Ok(c_ideal(chart.y)),
        Stage::EPrime => {
            let i = e_ideal(chart.y).map_gens(
                |p| p.compose(chart.substitution(), &chart.vars),
                &chart.vars,
            );
            saturate_by_stage(i, chart, Stage::C)
        }
        Stage::R => saturate_by_stage(chart.omega().ideal(), chart, Stage::EPrime),
        Stage::L => Ok(chart.omega().ideal()),
    }
}

/// The reference center along the reference chain, after checking that it
/// generates the derived center ideal; `None` off that chain.
pub fn reference_center(chart: &Chart, stage: Stage) -> Option<Result<Center>> {
    let s = stage.index();
    let on_path = chart.y == REFERENCE_Y
        && chart.stage == s
        && chart.path().choices.iter().eq(REFERENCE_CHOICES[..s]
            .iter()
            .map(|&k| Some(k))
            .collect::<Vec<_>>()
            .iter());
    if !on_path {
        return None;
    }
    Some((|| {
        let center =
            Center::from_reference(stage, &chart.vars, &chart.chars, REFERENCE_CENTERS[s])?;
        let derived = center_ideal_in_chart(stage, chart)?;
        if !ideal_equal(&center.ideal(), &derived) {
            return Err(Error::Bookkeeping(format!(
                "reference {stage} center {} differs from the derived {}",
                center.ideal(),
                derived
            )));
        }
        Ok(center)
    })())
}

/// Monic gcd of two univariate polynomials given lowest degree first; the
/// empty vector is the zero polynomial.
pub(crate) fn upoly_gcd(a: &[Rat], b: &[Rat]) -> Vec<Rat> {
    fn trim(mut v: Vec<Rat>) -> Vec<Rat> {
        while v.last().is_some_and(Zero::is_zero) {
            v.pop();
        }
        v
    }
    let mut a = trim(a.to_vec());
    let mut b = trim(b.to_vec());
    while !b.is_empty() {
        let mut r = a.clone();
        let lb = b.last().unwrap().clone();
        while r.len() >= b.len() {
            let q = r.last().unwrap() / &lb;
            let shift = r.len() - b.len();
            for (i, c) in b.iter().enumerate() {
                r[shift + i] -= &q * c;
            }
            r.pop();
            r = trim(r);
        }
        a = b;
        b = r;
    }
    if let Some(l) = a.last().cloned() {
        for c in a.iter_mut() {
            *c /= &l;
        }
    }
    a
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ideals::ideal_equal;

    #[test]
    fn c_meets_two_y_points() {
        let pts = c_fixed_points();
        assert_eq!(
            pts,
            vec![
                REFERENCE_Y,
                YPoint {
                    j: 3,
                    quadric: QuadricPoint::GPrime,
                    apt: 4
                }
            ]
        );
    }

    #[test]
    fn c_ideal_in_reference_chart() {
        let chart = Chart::y_chart(REFERENCE_Y).unwrap();
        let derived = center_ideal_in_chart(Stage::C, &chart).unwrap();
        let reference = Ideal::parse(
            &chart.vars,
            &["b1-4*u3", "a1-6*u3", "a2", "a3", "a4-12*u3^2", "u2"],
        )
        .unwrap();
        assert!(ideal_equal(&derived, &reference));
    }

    #[test]
    fn c_misses_other_neighborhoods() {
        let y = YPoint {
            j: 2,
            quadric: QuadricPoint::GPrime,
            apt: 1,
        };
        let chart = Chart::y_chart(y).unwrap();
        assert!(center_ideal_in_chart(Stage::C, &chart).unwrap().is_unit());
    }

    #[test]
    fn graph_form_of_derived_center() {
        let chart = Chart::y_chart(REFERENCE_Y).unwrap();
        let ideal = center_ideal_in_chart(Stage::C, &chart).unwrap();
        let c = Center::from_ideal(Stage::C, &ideal, &chart.chars).unwrap();
        assert_eq!(c.codim(), Stage::C.codim());
        assert!(ideal_equal(&c.ideal(), &ideal));
    }

    #[test]
    fn stage_mismatch_is_rejected() {
        let chart = Chart::y_chart(REFERENCE_Y).unwrap();
        assert!(center_ideal_in_chart(Stage::R, &chart).is_err());
    }

    #[test]
    fn univariate_gcd() {
        let p = |v: &[i64]| v.iter().map(|&x| int(x)).collect::<Vec<_>>();
        // (z-1)(z-2) and (z-1)(z+3)
        assert_eq!(upoly_gcd(&p(&[2, -3, 1]), &p(&[-3, 2, 1])), p(&[-1, 1]));
        assert_eq!(upoly_gcd(&p(&[]), &p(&[4])), p(&[1]));
        assert_eq!(upoly_gcd(&p(&[1, 1]), &p(&[2, 1])), p(&[1]));
    }
}
