//! Independent replay of the symbolic facts the degree computation rests on:
//! the divisibility condition, the four-step resolution along the reference
//! chart chain, and the geometry of the orbit representative ω0.

use num_traits::Zero;
use rayon::prelude::*;
use serde::Serialize;

use crate::arith::{int, MPoly, Vars};
use crate::error::{Error, Result};
use crate::ideals::{ideal_equal, Ideal};
use crate::omega::{omega_numerator, omega_of_pair, OmegaVector, X_NAMES};
use crate::tower::{Inventory, REFERENCE_CENTERS};

/// One named check; a failing check carries a witness.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Report {
    pub name: String,
    pub checks: Vec<Check>,
}

impl Report {
    fn new(name: &str) -> Self {
        Report {
            name: name.into(),
            checks: Vec::new(),
        }
    }

    /// Record a check: `Ok(None)` passes, `Ok(Some(w))` fails with witness `w`,
    /// an error fails with the error text.
    fn run(&mut self, name: &str, f: impl FnOnce() -> Result<Option<String>>) {
        let witness = match f() {
            Ok(w) => w,
            Err(e) => Some(e.to_string()),
        };
        self.checks.push(Check {
            name: name.into(),
            pass: witness.is_none(),
            witness,
        });
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.pass)
    }
}

fn expect(ok: bool, witness: impl FnOnce() -> String) -> Option<String> {
    (!ok).then(witness)
}

fn same_poly(got: &MPoly, want: &MPoly) -> Option<String> {
    expect(got == want, || format!("got {got}, expected {want}"))
}

fn same_ideal(got: &Ideal, want: &Ideal) -> Option<String> {
    expect(ideal_equal(got, want), || {
        format!("got {got}, expected {want}")
    })
}

fn parse(vars: &Vars, src: &str) -> Result<MPoly> {
    MPoly::parse(vars, src)
}

fn parse_all(vars: &Vars, srcs: &[&str]) -> Result<Ideal> {
    Ideal::parse(vars, srcs)
}

fn with_x(names: &[&str]) -> Vars {
    Vars::new(names.iter().chain(X_NAMES.iter()).copied())
}

/// Every generator of `rhs` has a power in `lhs` (so `rad(lhs) ⊇ rhs`).
fn radical_covers(lhs: &Ideal, rhs: &Ideal) -> Option<String> {
    rhs.gens()
        .iter()
        .find(|g| !lhs.radical_contains(g))
        .map(|g| format!("no power of {g} lies in {lhs}"))
}

/// x0 divides 3f·dg − 2g·df exactly on the obstruction locus, which splits
/// into the components (⋆) and (⋆⋆); the linear system for (a4 : a5 : a6).
pub fn divisibility_equivalence() -> Report {
    let mut r = Report::new("divisibility_equivalence");
    let vars = with_x(&[
        "a0", "a1", "a2", "a3", "a4", "a5", "a6", "b0", "b1", "b2", "b3",
    ]);
    r.run("x0-remainder of 3f·dg − 2g·df", || {
        let f = parse(
            &vars,
            "(a0*x0+a1*x1+a2*x2+a3*x3)*x0^2+a4*x0*x1^2+a5*x0*x1*x2+a6*x1^3",
        )?;
        let g = parse(&vars, "b0*x0^2+b1*x0*x1+b2*x0*x2+b3*x1^2")?;
        let zero = MPoly::zero(&vars);
        let n = omega_numerator(&f, &g)?;
        let want = [
            parse(&vars, "(3*a6*b1-2*a4*b3)*x1^4+(3*a6*b2-2*a5*b3)*x1^3*x2")?,
            zero.clone(),
            zero.clone(),
            zero.clone(),
        ];
        for (i, c) in n.iter().enumerate() {
            if let Some(w) = same_poly(&c.substitute("x0", &zero)?, &want[i]) {
                return Ok(Some(format!("dx{i}: {w}")));
            }
        }
        Ok(None)
    });

    let b = Vars::new(["a4", "a5", "a6", "b1", "b2", "b3"]);
    let obs = || parse_all(&b, &["3*a6*b1-2*a4*b3", "3*a6*b2-2*a5*b3"]);
    let star = || parse_all(&b, &["3*a6*b1-2*a4*b3", "3*a6*b2-2*a5*b3", "a4*b2-a5*b1"]);
    let star2 = || parse_all(&b, &["a6", "b3"]);
    r.run("obstruction locus lies in (⋆) ∪ (⋆⋆)", || {
        let union = star()?.intersect(&star2()?);
        Ok(radical_covers(&obs()?, &union))
    });
    r.run("(⋆) and (⋆⋆) lie in the obstruction locus", || {
        let o = obs()?;
        Ok(expect(
            star()?.contains_ideal(&o) && star2()?.contains_ideal(&o),
            || "a component misses an obstruction equation".into(),
        ))
    });
    r.run("(⋆) and (⋆⋆) are distinct components", || {
        let (s, t) = (star()?, star2()?);
        Ok(expect(
            !s.contains_ideal(&t) && !t.contains_ideal(&s),
            || "one component contains the other".into(),
        ))
    });

    let bv = Vars::new(["b0", "b1", "b2", "b3"]);
    let matrix = || -> Result<Vec<Vec<MPoly>>> {
        [
            ["2*b3", "0", "-3*b1"],
            ["0", "-2*b3", "3*b2"],
            ["-b2", "b1", "0"],
        ]
        .iter()
        .map(|row| row.iter().map(|s| parse(&bv, s)).collect())
        .collect()
    };
    let minor = |m: &[Vec<MPoly>], r: [usize; 2], c: [usize; 2]| {
        &(&m[r[0]][c[0]] * &m[r[1]][c[1]]) - &(&m[r[0]][c[1]] * &m[r[1]][c[0]])
    };
    r.run("linear system: determinant vanishes", || {
        let m = matrix()?;
        let det = (0..3).fold(MPoly::zero(&bv), |acc, j| {
            let cols: Vec<usize> = (0..3).filter(|&c| c != j).collect();
            let t = &m[0][j] * &minor(&m, [1, 2], [cols[0], cols[1]]);
            if j % 2 == 0 {
                &acc + &t
            } else {
                &acc - &t
            }
        });
        Ok(expect(det.is_zero(), || format!("det = {det}")))
    });
    r.run("linear system: generic rank 2", || {
        let m = matrix()?;
        Ok(expect(!minor(&m, [0, 1], [0, 1]).is_zero(), || {
            "leading 2x2 minor vanishes".into()
        }))
    });
    r.run("linear system: rank 0 at b1 = b2 = b3 = 0", || {
        let m = matrix()?;
        let zero = MPoly::zero(&bv);
        for e in m.iter().flatten() {
            let mut e = e.clone();
            for v in ["b1", "b2", "b3"] {
                e = e.substitute(v, &zero)?;
            }
            if !e.is_zero() {
                return Ok(Some(format!("entry {e} survives")));
            }
        }
        Ok(None)
    });
    r.run("linear system: kernel (3b1 : 3b2 : 2b3)", || {
        let m = matrix()?;
        let k = [
            parse(&bv, "3*b1")?,
            parse(&bv, "3*b2")?,
            parse(&bv, "2*b3")?,
        ];
        for row in &m {
            let s = (0..3).fold(MPoly::zero(&bv), |acc, j| &acc + &(&row[j] * &k[j]));
            if !s.is_zero() {
                return Ok(Some(format!("row product {s}")));
            }
        }
        let cross = [
            minor(&m, [1, 2], [1, 2]),
            -&minor(&m, [1, 2], [0, 2]),
            minor(&m, [1, 2], [0, 1]),
        ];
        let b2 = parse(&bv, "-b2")?;
        for j in 0..3 {
            if let Some(w) = same_poly(&cross[j], &(&b2 * &k[j])) {
                return Ok(Some(format!("cross product of rows 2, 3: {w}")));
            }
        }
        Ok(None)
    });
    r
}

/// A chart of a blowup along the center `gens` (expression, pivot), taking
/// generator `k` as the exceptional equation.
struct Blowup {
    vars: Vars,
    images: Vec<MPoly>,
    exc: usize,
}

fn blow_up(src: &Vars, gens: &[(&str, &str)], letter: char, k: usize) -> Result<Blowup> {
    let pivots: Vec<&str> = gens.iter().map(|g| g.1).collect();
    let mut names: Vec<String> = (0..gens.len())
        .filter(|&i| i != k)
        .map(|i| format!("{letter}{i}"))
        .collect();
    names.extend(
        src.names()
            .iter()
            .filter(|n| n.as_str() == pivots[k] || !pivots.contains(&n.as_str()))
            .cloned(),
    );
    let vars = Vars::new(names);
    let exc = vars.require(pivots[k])?;
    let excp = MPoly::var(&vars, exc);
    let mut images: Vec<MPoly> = src
        .names()
        .iter()
        .map(|n| MPoly::var_named(&vars, n).or_else(|_| Ok(MPoly::zero(&vars))))
        .collect::<Result<_>>()?;
    for (i, (expr, pivot)) in gens.iter().enumerate() {
        if i == k {
            let e = parse(src, expr)?;
            if e != MPoly::var_named(src, pivot)? {
                return Err(Error::Bookkeeping(format!(
                    "exceptional equation {expr} is not a coordinate"
                )));
            }
            continue;
        }
        let e = parse(src, expr)?;
        let p = src.require(pivot)?;
        let c = e.derivative(p);
        if !c.is_constant() || c.is_zero() {
            return Err(Error::Bookkeeping(format!(
                "{expr} is not solvable for {pivot}"
            )));
        }
        let c = c.constant_term();
        let rest = (&e - &MPoly::var(src, p).scale(&c)).embed(&vars)?;
        let ratio = MPoly::var_named(&vars, &format!("{letter}{i}"))?;
        images[p] = (&(&ratio * &excp) - &rest).scale(&c.recip());
    }
    let b = Blowup { vars, images, exc };
    for (i, (expr, _)) in gens.iter().enumerate() {
        let lhs = parse(src, expr)?.compose(&b.images, &b.vars);
        let rhs = if i == k {
            excp.clone()
        } else {
            &MPoly::var_named(&b.vars, &format!("{letter}{i}"))? * &excp
        };
        if lhs != rhs {
            return Err(Error::Bookkeeping(format!(
                "{expr} does not pull back to {rhs}"
            )));
        }
    }
    Ok(b)
}

impl Blowup {
    fn pull(&self, i: &Ideal) -> Ideal {
        i.map_gens(|p| p.compose(&self.images, &self.vars), &self.vars)
    }

    fn strict(&self, i: &Ideal) -> Ideal {
        self.pull(i).saturate(&MPoly::var(&self.vars, self.exc))
    }

    fn omega(&self, v: &OmegaVector) -> OmegaVector {
        let mut out = v.compose(&self.images, &self.vars);
        out.strip(self.exc);
        out
    }

    fn has_coordinates(&self, reference: &[&str]) -> Option<String> {
        let mut got: Vec<&str> = self.vars.names().iter().map(|s| s.as_str()).collect();
        let mut want = reference.to_vec();
        got.sort_unstable();
        want.sort_unstable();
        expect(got == want, || {
            format!("coordinates {got:?}, expected {want:?}")
        })
    }
}

fn ideal_of_gens(vars: &Vars, gens: &[(&str, &str)]) -> Result<Ideal> {
    parse_all(vars, &gens.iter().map(|g| g.0).collect::<Vec<_>>())
}

fn reference_y_omega() -> Result<(Vars, OmegaVector)> {
    let chart = ["a1", "a2", "a3", "a4", "b1", "u2", "u3"];
    let vars = with_x(&chart);
    let f = parse(
        &vars,
        "(x0+a1*x1+a2*x2+a3*x3)*x0^2+a4*(x0*x1^2+u2*x0*x1*x2+2/3*u3*x1^3)",
    )?;
    let g = parse(&vars, "x0^2+b1*x0*x1+b1*u2*x0*x2+b1*u3*x1^2")?;
    let h = MPoly::var_named(&vars, "x0")?;
    let cv = Vars::new(chart);
    Ok((
        cv.clone(),
        OmegaVector::from_form(&omega_of_pair(&f, &g, &h)?, &cv)?,
    ))
}

/// The resolution of (g, f) ↦ ω along the reference charts, and the absence
/// of a base locus after the fourth blowup everywhere over the standard flag.
pub fn indeterminacy_pipeline() -> Report {
    let mut r = Report::new("indeterminacy_pipeline");
    let y = reference_y_omega();
    let (yv, omega) = match y {
        Ok(x) => x,
        Err(e) => {
            r.run("ω over [b0=u1=1][a0=1]", || Err(e));
            return r;
        }
    };
    let j = omega.ideal();
    let jc = ideal_of_gens(&yv, REFERENCE_CENTERS[0]);
    let je = parse_all(&yv, &["a1", "a2", "a3", "a4", "b1"]);
    let (jc, je) = match (jc, je) {
        (Ok(a), Ok(b)) => (a, b),
        (Err(e), _) | (_, Err(e)) => {
            r.run("reference J_C and J_E", || Err(e));
            return r;
        }
    };
    let jred = jc.intersect(&je);
    r.run("J ⊆ J_C ∩ J_E", || {
        Ok(expect(
            jc.contains_ideal(&j) && je.contains_ideal(&j),
            || format!("J = {j}"),
        ))
    });
    r.run("J_C ∩ J_E ⊆ rad(J)", || Ok(radical_covers(&j, &jred)));
    r.run("J is not reduced", || {
        Ok(expect(!ideal_equal(&j, &jred), || format!("J = {j} is radical")))
    });
    r.run("J_C + J_E is the point (x0^2, x0x1, x0^3)", || {
        let pt = parse_all(&yv, &["a1", "a2", "a3", "a4", "b1", "u2", "u3"])?;
        Ok(same_ideal(&jc.sum(&je), &pt))
    });

    let mut stages: Vec<(Blowup, OmegaVector)> = Vec::new();
    let mut src = (yv.clone(), omega.clone());
    for (s, (letter, k, reference)) in [
        ('s', 5, &["s0", "s1", "s2", "s3", "s4", "u2", "u3"]),
        ('t', 1, &["t0", "t2", "t3", "t4", "u2", "s1", "s2"]),
        ('v', 0, &["v1", "v2", "v3", "v4", "u2", "s2", "t4"]),
    ]
    .into_iter()
    .enumerate()
    {
        let b = match blow_up(&src.0, REFERENCE_CENTERS[s], letter, k) {
            Ok(b) => b,
            Err(e) => {
                r.run(&format!("blowup {} in chart {letter}{k}=1", s + 1), || {
                    Err(e)
                });
                return r;
            }
        };
        r.run(&format!("blowup {} coordinates", s + 1), || {
            Ok(b.has_coordinates(reference))
        });
        let w = b.omega(&src.1);
        src = (b.vars.clone(), w.clone());
        stages.push((b, w));
    }

    let (b1, _) = &stages[0];
    r.run("strict transform of E is K_E'", || {
        let ke = ideal_of_gens(&b1.vars, REFERENCE_CENTERS[1])?;
        Ok(same_ideal(&b1.strict(&je), &ke))
    });
    r.run("strict transform of rad(J) is K_E'", || {
        let ke = ideal_of_gens(&b1.vars, REFERENCE_CENTERS[1])?;
        Ok(same_ideal(&b1.strict(&jred), &ke))
    });

    let (b2, w2) = &stages[1];
    let j2 = w2.ideal();
    r.run("base ideal after two blowups lies in J_R", || {
        let jr = ideal_of_gens(&b2.vars, REFERENCE_CENTERS[2])?;
        Ok(expect(jr.contains_ideal(&j2), || format!("J2 = {j2}")))
    });
    r.run("base ideal after two blowups, off exc2, is J_R", || {
        let jr = ideal_of_gens(&b2.vars, REFERENCE_CENTERS[2])?;
        Ok(same_ideal(&j2.saturate(&MPoly::var(&b2.vars, b2.exc)), &jr))
    });
    r.run(
        "base locus after two blowups has a second component in exc2",
        || {
            let jr = ideal_of_gens(&b2.vars, REFERENCE_CENTERS[2])?;
            Ok(expect(!ideal_equal(&j2, &jr), || {
                format!("J2 = {j2} equals J_R")
            }))
        },
    );

    let (b3, w3) = &stages[2];
    r.run("base ideal after three blowups is J_L", || {
        let jl = ideal_of_gens(&b3.vars, REFERENCE_CENTERS[3])?;
        Ok(same_ideal(&w3.ideal(), &jl))
    });
    for k in 0..REFERENCE_CENTERS[3].len() {
        r.run(
            &format!("no base locus after blowing up L, chart z{k}=1"),
            || {
                let b4 = blow_up(&b3.vars, REFERENCE_CENTERS[3], 'z', k)?;
                let i = b4.omega(w3).ideal();
                Ok(expect(i.is_unit(), || format!("base ideal {i}")))
            },
        );
    }

    r.run("no base locus over [b2=1]", || {
        let chart = ["b0", "b1", "b3", "a0", "a1", "a2", "a3", "a5"];
        let vars = with_x(&chart);
        let (f, g) = b2_chart_forms(&vars)?;
        let h = MPoly::var_named(&vars, "x0")?;
        let v = OmegaVector::from_form(&omega_of_pair(&f, &g, &h)?, &Vars::new(chart))?;
        for a in ["a0", "a1", "a2", "a3", "a5"] {
            let i = v.ideal().map_gens(
                |p| {
                    p.substitute(a, &MPoly::one(v.vars()))
                        .expect("chart coordinate")
                },
                v.vars(),
            );
            if !i.is_unit() {
                return Ok(Some(format!("[b2=1][{a}=1]: base ideal {i}")));
            }
        }
        Ok(None)
    });
    r.run(
        "ω is nonzero at every fixed point of the resolved fiber",
        || {
            let inv = Inventory::standard()?;
            Ok(expect(!inv.points.is_empty(), || {
                "no fixed loci found".into()
            }))
        },
    );
    r
}

fn b2_chart_forms(vars: &Vars) -> Result<(MPoly, MPoly)> {
    let f = parse(
        vars,
        "(a0*x0+a1*x1+a2*x2+a3*x3)*x0^2+a5*(b1*x0*x1^2+x0*x1*x2+2/3*b3*x1^3)",
    )?;
    let g = parse(vars, "b0*x0^2+b1*x0*x1+x0*x2+b3*x1^2")?;
    Ok((f, g))
}

/// ω0 against its reference coefficients, its singular curves, and the
/// coefficient identities used to recover (g, f) from ω.
pub fn omega0_geometry() -> Report {
    let mut r = Report::new("omega0_geometry");
    let xv = Vars::new(X_NAMES);
    let reference = || -> Result<Vec<MPoly>> {
        [
            "x1*x2^2-2*x1^2*x3+x0*x2*x3",
            "x0*(3*x1*x3-2*x2^2)",
            "x0*(x1*x2-3*x0*x3)",
            "x0*(2*x0*x2-x1^2)",
        ]
        .iter()
        .map(|s| parse(&xv, s))
        .collect()
    };
    r.run("ω0 from f0, g0 is −1 times the reference form", || {
        let f0 = parse(&xv, "x0^2*x3-x0*x1*x2+x1^3/3")?;
        let g0 = parse(&xv, "x0*x2-x1^2/2")?;
        let w = omega_of_pair(&f0, &g0, &MPoly::var(&xv, 0))?;
        for (i, a) in reference()?.iter().enumerate() {
            if let Some(e) = same_poly(w.coeff(i), &-a) {
                return Ok(Some(format!("dx{i}: {e}")));
            }
        }
        Ok(None)
    });

    let curves: [(&str, &str, [&str; 4], &[&str]); 3] = [
        (
            "conic",
            "s",
            ["0", "1", "s", "s^2/2"],
            &["x0", "x2^2-2*x1*x3"],
        ),
        ("line", "s", ["0", "0", "s", "1"], &["x0", "x1"]),
        (
            "twisted cubic",
            "t",
            ["1", "t", "t^2/2", "t^3/6"],
            &["2*x2^2-3*x1*x3", "x1*x2-3*x0*x3", "x1^2-2*x0*x2"],
        ),
    ];
    for (name, param, images, ideal) in curves {
        r.run(
            &format!("{name} lies on its ideal and in the singular locus"),
            || {
                let pv = Vars::new([param]);
                let im: Vec<MPoly> = images
                    .iter()
                    .map(|s| parse(&pv, s))
                    .collect::<Result<_>>()?;
                for p in parse_all(&xv, ideal)?
                    .gens()
                    .iter()
                    .chain(reference()?.iter())
                {
                    let v = p.compose(&im, &pv);
                    if !v.is_zero() {
                        return Ok(Some(format!("{p} restricts to {v}")));
                    }
                }
                Ok(None)
            },
        );
        r.run(&format!("{name} passes through (0:0:0:1)"), || {
            let p0 = [int(0), int(0), int(0), int(1)];
            let i = parse_all(&xv, ideal)?;
            Ok(i.gens()
                .iter()
                .find(|g| !g.eval(&p0).is_zero())
                .map(|g| format!("{g} is nonzero there")))
        });
    }

    let vars = with_x(&["b0", "b1", "b3", "a0", "a1", "a2", "a3", "a5"]);
    r.run(
        "dx3 identity 2g·∂f/∂x3 − 3f·∂g/∂x3 = 2a3·g·x0^2",
        || {
            let (f, g) = b2_chart_forms(&vars)?;
            let x3 = vars.require("x3")?;
            let lhs =
                &(&g * &f.derivative(x3)).scale(&int(2)) - &(&f * &g.derivative(x3)).scale(&int(3));
            let rhs = (&g * &parse(&vars, "2*a3*x0^2")?).clone();
            Ok(same_poly(&lhs, &rhs))
        },
    );
    r.run("reference dx2 coefficient is −1 times that of ω", || {
        let (f, g) = b2_chart_forms(&vars)?;
        let x0 = MPoly::var_named(&vars, "x0")?;
        let display = parse(
            &vars,
            "(2*a2*b0-3*a0)*x0^3+(2*a5*b0+2*a2*b1-3*a1)*x0^2*x1+(-a5*b1+2*a2*b3)*x0*x1^2\
             -a2*x0^2*x2-a5*x0*x1*x2-3*a3*x0^2*x3",
        )?;
        let x2 = vars.require("x2")?;
        let lhs =
            &(&g * &f.derivative(x2)).scale(&int(2)) - &(&f * &g.derivative(x2)).scale(&int(3));
        if let Some(e) = same_poly(&lhs, &(&x0 * &display)) {
            return Ok(Some(format!("2g·∂f/∂x2 − 3f·∂g/∂x2: {e}")));
        }
        let w = omega_of_pair(&f, &g, &x0)?;
        Ok(same_poly(w.coeff(2), &-&display))
    });
    r
}

/// All three reports, computed in parallel and returned in a fixed order.
pub fn run_all() -> Vec<Report> {
    let jobs: [fn() -> Report; 3] = [
        divisibility_equivalence,
        indeterminacy_pipeline,
        omega0_geometry,
    ];
    jobs.par_iter().map(|f| f()).collect()
}
