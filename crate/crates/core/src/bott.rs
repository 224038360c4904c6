//! Bott's residue formula: localized contributions of fixed points and fixed
//! lines, the degree of E(3), and an oracle suite on spaces with known answers.
//!
//! A point contributes `(-λ)^n / Π t_i`; a fixed P^1 contributes the
//! h-coefficient of `(-λ + d·h)^n / Π (λ_i + a_i·h)`, where `λ + d·h` is W
//! there and h is the point class of the line.

use itertools::Itertools;
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::arith::{hclass_div, int, HClass, Rat};
use crate::error::{Error, Result};
use crate::flags::{enumerate_fixed_flags, flag_tangent_weights, FixedFlag, WeightVector};
use crate::omega::WClass;
use crate::tower::{enumerate_fixed_loci, FixedLocus, LocusData};

/// Dimension of Y4.
pub const DIM: u32 = 13;

fn point_term(dim: u32, tangent: &[i64], lambda: i64) -> Result<Rat> {
    if tangent.len() != dim as usize {
        return Err(Error::Bookkeeping(format!(
            "{} tangent weights in dimension {dim}",
            tangent.len()
        )));
    }
    let mut den = BigInt::one();
    for &t in tangent {
        if t == 0 {
            return Err(Error::DegenerateClass);
        }
        den *= t;
    }
    Ok(Rat::new(
        num_traits::pow(BigInt::from(-lambda), dim as usize),
        den,
    ))
}

fn line_term(dim: u32, roots: &[HClass], w: &WClass) -> Result<Rat> {
    if roots.len() + 1 != dim as usize {
        return Err(Error::Bookkeeping(format!(
            "{} normal roots in dimension {dim}",
            roots.len()
        )));
    }
    let num = HClass::from_ints(-w.lambda, w.d).pow(dim);
    let den = roots.iter().fold(HClass::one(), |acc, r| &acc * r);
    Ok(hclass_div(&num, &den)?.c1)
}

pub fn isolated_contribution(tangent: &[i64], w: &WClass) -> Result<Rat> {
    if w.d != 0 {
        return Err(Error::Bookkeeping("a fixed point carries a degree".into()));
    }
    point_term(DIM, tangent, w.lambda)
}

pub fn line_contribution(roots: &[HClass], w: &WClass) -> Result<Rat> {
    line_term(DIM, roots, w)
}

/// Contribution of one fixed locus.
#[derive(Clone, Debug, Serialize)]
pub struct Contribution {
    pub locus: String,
    #[serde(serialize_with = "rat_string")]
    pub value: Rat,
}

fn rat_string<S: serde::Serializer>(r: &Rat, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&r.to_string())
}

pub fn locus_contribution(l: &FixedLocus) -> Result<Contribution> {
    let value = match &l.data {
        LocusData::Point { tangent } => isolated_contribution(tangent, &l.w)?,
        LocusData::Line { roots, .. } => {
            let r: Vec<HClass> = roots.iter().map(|r| r.hclass()).collect();
            line_contribution(&r, &l.w)?
        }
    };
    Ok(Contribution {
        locus: format!("{} {}", l.flag.label(), l.provenance),
        value,
    })
}

fn int_json<S: serde::Serializer>(n: &BigInt, s: S) -> std::result::Result<S::Ok, S::Error> {
    match i64::try_from(n) {
        Ok(v) => s.serialize_i64(v),
        Err(_) => s.serialize_str(&n.to_string()),
    }
}

/// Sum of all contributions over one flag, in provenance order.
pub fn flag_sum(flag: &FixedFlag, w: &WeightVector) -> Result<(Rat, usize, usize)> {
    let loci = enumerate_fixed_loci(flag, w)?;
    let mut s = Rat::zero();
    let (mut points, mut lines) = (0, 0);
    for l in &loci {
        s += locus_contribution(l)?.value;
        if l.is_point() {
            points += 1;
        } else {
            lines += 1;
        }
    }
    Ok((s, points, lines))
}

#[derive(Clone, Debug, Serialize)]
pub struct FlagSum {
    pub flag: String,
    #[serde(serialize_with = "rat_string")]
    pub sum: Rat,
    pub isolated: usize,
    pub lines: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct DegreeReport {
    pub weights: [i64; 4],
    #[serde(serialize_with = "int_json")]
    pub degree: BigInt,
    pub flags: usize,
    pub isolated: usize,
    pub lines: usize,
    pub per_flag: Vec<FlagSum>,
}

/// `∫ -c1(W)^13` over Y4 by Bott's formula at the weight vector `w`.
pub fn total_degree(w: &WeightVector) -> Result<DegreeReport> {
    let flags = enumerate_fixed_flags();
    let sums: Vec<(Rat, usize, usize)> = flags
        .par_iter()
        .map(|f| flag_sum(f, w))
        .collect::<Result<_>>()?;
    let mut total = Rat::zero();
    let mut per_flag = Vec::with_capacity(flags.len());
    let (mut isolated, mut lines) = (0, 0);
    for (f, (s, p, l)) in flags.iter().zip(sums) {
        total += &s;
        isolated += p;
        lines += l;
        per_flag.push(FlagSum {
            flag: f.label(),
            sum: s,
            isolated: p,
            lines: l,
        });
    }
    if !total.is_integer() || !total.is_positive() {
        return Err(Error::Bookkeeping(format!(
            "Bott sum {total} is not a positive integer"
        )));
    }
    Ok(DegreeReport {
        weights: w.get(),
        degree: total.to_integer(),
        flags: flags.len(),
        isolated,
        lines,
        per_flag,
    })
}

/// Fails with `NonGeneric` when some tangent or normal weight vanishes at `w`.
pub fn check_generic(w: &WeightVector) -> Result<()> {
    enumerate_fixed_flags()
        .par_iter()
        .try_for_each(|f| enumerate_fixed_loci(f, w).map(|_| ()))
}

/// A generic vector near `w`: the first one among `w + k·e_i` for k = 1, 2, ...
/// and i = 3, 2, 1, 0.
pub fn suggest_generic(w: &WeightVector) -> WeightVector {
    let base = w.get();
    for k in 1.. {
        for i in (0..4).rev() {
            let mut c = base;
            c[i] += k;
            if let Ok(v) = WeightVector::new(c) {
                if check_generic(&v).is_ok() {
                    return v;
                }
            }
        }
    }
    unreachable!("generic vectors are dense")
}

/// `∫ H^n` over P^n with distinct weights.
pub fn projective_space_integral(weights: &[i64]) -> Result<Rat> {
    let n = weights.len() as u32 - 1;
    let mut s = Rat::zero();
    for (i, &wi) in weights.iter().enumerate() {
        let tangent: Vec<i64> = weights
            .iter()
            .enumerate()
            .filter(|&(k, _)| k != i)
            .map(|(_, &wk)| wk - wi)
            .collect();
        s += point_term(n, &tangent, wi)?;
    }
    Ok(s)
}

/// `∫ H^2` over P^2 with weights (a, a, b): the isolated point e2 and the
/// fixed line spanned by e0, e1.
pub fn p2_repeated_weight(a: i64, b: i64) -> Result<(Rat, Rat)> {
    let point = point_term(2, &[a - b, a - b], b)?;
    let line = line_term(
        2,
        &[HClass::from_ints(b - a, 1)],
        &WClass { lambda: a, d: 1 },
    )?;
    Ok((point, line))
}

/// `∫ c_top(T)` over the flag variety, localized at its 24 fixed flags.
pub fn flag_euler_characteristic(w: &WeightVector) -> Result<Rat> {
    let mut s = Rat::zero();
    for f in enumerate_fixed_flags() {
        let t = flag_tangent_weights(&f, w);
        let e: BigInt = t.iter().map(|&x| BigInt::from(x)).product();
        if e.is_zero() {
            return Err(Error::DegenerateClass);
        }
        s += Rat::new(e.clone(), e);
    }
    Ok(s)
}

/// `∫ e(Sym^3 S∨)` over the Grassmannian of lines in P^3.
pub fn lines_on_cubic_surface(w: &WeightVector) -> Result<Rat> {
    let w = w.get();
    let mut s = Rat::zero();
    for (i, j) in (0..4).tuple_combinations() {
        let sym3: BigInt = (0..=3)
            .map(|a| BigInt::from(-(a * w[i] + (3 - a) * w[j])))
            .product();
        let tangent: BigInt = (0..4)
            .filter(|&k| k != i && k != j)
            .flat_map(|k| [w[k] - w[i], w[k] - w[j]])
            .map(BigInt::from)
            .product();
        if tangent.is_zero() {
            return Err(Error::DegenerateClass);
        }
        s += Rat::new(sym3, tangent);
    }
    Ok(s)
}

#[derive(Clone, Debug, Serialize)]
pub struct OracleResult {
    pub name: String,
    #[serde(serialize_with = "rat_string")]
    pub value: Rat,
    #[serde(serialize_with = "rat_string")]
    pub expected: Rat,
    pub pass: bool,
}

fn oracle(name: &str, value: Result<Rat>, expected: i64) -> OracleResult {
    let expected = int(expected);
    match value {
        Ok(v) => OracleResult {
            name: name.into(),
            pass: v == expected,
            value: v,
            expected,
        },
        Err(_) => OracleResult {
            name: name.into(),
            value: Rat::zero(),
            expected,
            pass: false,
        },
    }
}

/// Every oracle, evaluated at `w` (the P^2 case uses weights (1, 1, 2)).
pub fn run_oracles(w: &WeightVector) -> Vec<OracleResult> {
    let ws = w.get();
    let p2 = p2_repeated_weight(1, 2);
    let (pt, ln) = match &p2 {
        Ok((p, l)) => (Ok(p.clone()), Ok(l.clone())),
        Err(e) => (Err(e.clone()), Err(e.clone())),
    };
    vec![
        oracle("P1: integral of H", projective_space_integral(&ws[..2]), 1),
        oracle("P3: integral of H^3", projective_space_integral(&ws), 1),
        oracle("P2 (1,1,2): isolated point", pt, 4),
        oracle("P2 (1,1,2): fixed line", ln, -3),
        oracle("P2 (1,1,2): integral of H^2", p2.map(|(p, l)| p + l), 1),
        oracle(
            "flag variety: Euler characteristic",
            flag_euler_characteristic(w),
            24,
        ),
        oracle("lines on a cubic surface", lines_on_cubic_surface(w), 27),
    ]
}
