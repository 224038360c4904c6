//! Torus-fixed loci of Y4 by walking each fixed point of Y through the four
//! blowups. Loci are keyed by provenance: the Y point, then at every blowup
//! whose center meets the locus, the normal character that spans the new
//! exceptional direction.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::OnceLock;

use rayon::prelude::*;
use serde::{Serialize, Serializer};

use super::{
    build_chart, center_ideal_in_chart, chart_center, upoly_gcd, Chart, ChartPath, Stage, YPoint,
};
use crate::arith::{HClass, MPoly, Rat};
use crate::error::{Error, Result};
use crate::flags::{flag_tangent_characters, Character, FixedFlag, WeightVector};
use crate::ideals::Ideal;
use crate::omega::{omega_in_chart, univariate, w_character_in_chart, WCharacter, WClass};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ProvStep {
    /// A fixed point of Y.
    Fixed(YPoint),
    /// The exceptional direction of the given normal character.
    Normal { stage: Stage, weight: Character },
    /// The point where the center of this stage meets a fixed line.
    Meet { stage: Stage },
}

impl fmt::Display for ProvStep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ProvStep::Fixed(y) => write!(f, "{y}"),
            ProvStep::Normal { stage, weight } => write!(f, "{stage}:{weight}"),
            ProvStep::Meet { stage } => write!(f, "{stage}:meet"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Provenance(pub Vec<ProvStep>);

impl Provenance {
    fn child(&self, step: ProvStep) -> Provenance {
        let mut v = self.0.clone();
        v.push(step);
        Provenance(v)
    }
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(ToString::to_string).collect();
        f.write_str(&parts.join(" / "))
    }
}

impl Serialize for Provenance {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// A normal Chern root `χ + degree·h` on a fixed line.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct NormalRoot {
    pub character: Character,
    pub degree: i64,
}

/// An isolated fixed point of Y4 over the standard flag.
#[derive(Clone, Debug, Serialize)]
pub struct PointRecord {
    pub provenance: Provenance,
    pub chart: ChartPath,
    /// Tangent characters along the fiber over the flag variety.
    pub tangent: Vec<Character>,
    pub w: WCharacter,
    pub charts: usize,
}

/// A fixed line of Y4 over the standard flag.
#[derive(Clone, Debug, Serialize)]
pub struct LineRecord {
    pub provenance: Provenance,
    pub chart: ChartPath,
    /// The zero-weight coordinate along the line in `chart`.
    pub axis: String,
    /// Normal roots along the fiber over the flag variety.
    pub roots: Vec<NormalRoot>,
    pub w: WCharacter,
    pub charts: usize,
}

/// Fixed loci of Y4 over the standard flag.
#[derive(Clone, Debug, Serialize)]
pub struct Inventory {
    pub points: Vec<PointRecord>,
    pub lines: Vec<LineRecord>,
    /// Charts of Y4 reached by the walk, one per visited fixed locus chart.
    pub final_charts: usize,
}

#[derive(Clone, Debug)]
enum Focus {
    Point(Provenance),
    Line(Provenance),
}

struct LineFinal {
    chart: ChartPath,
    axis: String,
    normals: Vec<Character>,
    w: WCharacter,
    charts: usize,
}

#[derive(Default)]
struct Walk {
    points: BTreeMap<Provenance, PointRecord>,
    roots: BTreeMap<Provenance, Vec<NormalRoot>>,
    finals: BTreeMap<Provenance, LineFinal>,
    met: BTreeSet<(Provenance, Stage)>,
    final_charts: usize,
}

enum Meeting {
    Misses,
    Meets,
}

fn nonzero_mask(chart: &Chart) -> Vec<bool> {
    chart.chars.iter().map(|c| !c.is_zero()).collect()
}

/// Whether the zero set of `ideal` meets the fixed locus in focus: the
/// origin, or the axis of the zero-weight coordinate.
fn meeting(ideal: &Ideal, chart: &Chart, focus: &Focus) -> Result<Meeting> {
    let mask = nonzero_mask(chart);
    let restricted: Vec<MPoly> = ideal
        .gens()
        .iter()
        .map(|g| g.restrict_zero(&mask))
        .filter(|g| !g.is_zero())
        .collect();
    match focus {
        Focus::Point(_) => Ok(if restricted.is_empty() {
            Meeting::Meets
        } else {
            Meeting::Misses
        }),
        Focus::Line(_) => {
            let z = match chart.zero_coordinates().as_slice() {
                [z] => *z,
                _ => {
                    return Err(Error::Bookkeeping(format!(
                        "line focus without a unique axis in {}",
                        chart.label()
                    )))
                }
            };
            if restricted.is_empty() {
                return Err(Error::Unsupported(format!(
                    "a center contains the fixed line of {}",
                    chart.label()
                )));
            }
            let g = restricted
                .iter()
                .fold(Vec::new(), |acc, p| upoly_gcd(&acc, &univariate(p, z)));
            Ok(if g.len() == 1 {
                Meeting::Misses
            } else {
                Meeting::Meets
            })
        }
    }
}

impl Walk {
    fn center(&self, chart: &Chart, focus: &Focus) -> Result<Option<Ideal>> {
        let stage = Stage::ALL[chart.stage];
        let ideal = if stage == Stage::R {
            let j = chart.omega().ideal();
            if let Meeting::Misses = meeting(&j, chart, focus)? {
                return Ok(None);
            }
            center_ideal_in_chart(stage, chart)?
        } else {
            center_ideal_in_chart(stage, chart)?
        };
        Ok(match meeting(&ideal, chart, focus)? {
            Meeting::Misses => None,
            Meeting::Meets => Some(ideal),
        })
    }

    fn process(&mut self, chart: Chart, focus: Focus) -> Result<()> {
        if chart.stage == 4 {
            return self.finish(&chart, &focus);
        }
        let stage = Stage::ALL[chart.stage];
        let Some(ideal) = self.center(&chart, &focus)? else {
            return self.process(chart.skip()?, focus);
        };
        let center = chart_center(&chart, stage, ideal)?;
        if center.codim() != stage.codim() {
            return Err(Error::Bookkeeping(format!(
                "{stage} center has codimension {} in {}",
                center.codim(),
                chart.label()
            )));
        }
        let chis = center.characters();
        let pivots: Vec<usize> = center.gens.iter().map(|g| g.pivot).collect();
        let free: Vec<Character> = (0..chart.vars.len())
            .filter(|v| !pivots.contains(v))
            .map(|v| chart.chars[v])
            .collect();
        let base = match &focus {
            Focus::Point(k) => k.clone(),
            Focus::Line(l) => {
                let zeros = chis.iter().filter(|c| c.is_zero()).count();
                if zeros != 1 {
                    return Err(Error::Unsupported(format!(
                        "{stage} center meets the fixed line of {} with {zeros} invariant generators",
                        chart.label()
                    )));
                }
                if self.met.insert((l.clone(), stage)) {
                    let roots = self
                        .roots
                        .get_mut(l)
                        .ok_or_else(|| Error::Bookkeeping(format!("unknown fixed line {l}")))?;
                    for &x in chis.iter().filter(|c| !c.is_zero()) {
                        let r = roots.iter_mut().find(|r| r.character == x).ok_or_else(|| {
                            Error::Bookkeeping(format!("{x} is not normal to the fixed line {l}"))
                        })?;
                        r.degree -= 1;
                    }
                }
                l.child(ProvStep::Meet { stage })
            }
        };
        for (k, &x) in chis.iter().enumerate() {
            let kid = chart.blowup(&center, k)?;
            if x.is_zero() {
                self.process(kid, focus.clone())?;
                continue;
            }
            let key = base.child(ProvStep::Normal { stage, weight: x });
            match chis.iter().filter(|&&y| y == x).count() {
                1 => self.process(kid, Focus::Point(key))?,
                2 => {
                    self.roots.entry(key.clone()).or_insert_with(|| {
                        let mut r: Vec<NormalRoot> = free
                            .iter()
                            .map(|&c| NormalRoot {
                                character: c,
                                degree: 0,
                            })
                            .collect();
                        r.extend(chis.iter().filter(|&&y| y != x).map(|&y| NormalRoot {
                            character: y - x,
                            degree: 1,
                        }));
                        r.push(NormalRoot {
                            character: x,
                            degree: -1,
                        });
                        r
                    });
                    self.process(kid, Focus::Line(key))?
                }
                m => {
                    return Err(Error::Unsupported(format!(
                        "normal character {x} of multiplicity {m} on the {stage} center in {}",
                        chart.label()
                    )))
                }
            }
        }
        Ok(())
    }

    fn finish(&mut self, chart: &Chart, focus: &Focus) -> Result<()> {
        self.final_charts += 1;
        chart.omega().character(&chart.chars)?;
        let w = w_character_in_chart(chart, chart.omega())?;
        let zeros = chart.zero_coordinates();
        match focus {
            Focus::Point(key) => {
                if !zeros.is_empty() {
                    return Err(Error::Bookkeeping(format!(
                        "point {key} lies on a fixed curve in {}",
                        chart.label()
                    )));
                }
                let mut tangent = chart.chars.clone();
                tangent.sort();
                match self.points.get_mut(key) {
                    Some(rec) => {
                        if rec.tangent != tangent || rec.w != w {
                            return Err(Error::Bookkeeping(format!(
                                "point {key} has different data in {} and {}",
                                rec.chart,
                                chart.label()
                            )));
                        }
                        rec.charts += 1;
                    }
                    None => {
                        self.points.insert(
                            key.clone(),
                            PointRecord {
                                provenance: key.clone(),
                                chart: chart.path().clone(),
                                tangent,
                                w,
                                charts: 1,
                            },
                        );
                    }
                }
            }
            Focus::Line(key) => {
                if zeros.len() != 1 {
                    return Err(Error::Bookkeeping(format!(
                        "line {key} is not a coordinate axis of {}",
                        chart.label()
                    )));
                }
                let mut normals: Vec<Character> = chart
                    .chars
                    .iter()
                    .copied()
                    .filter(|c| !c.is_zero())
                    .collect();
                normals.sort();
                match self.finals.get_mut(key) {
                    Some(rec) => {
                        if rec.normals != normals || rec.w.character != w.character {
                            return Err(Error::Bookkeeping(format!(
                                "line {key} has different data in {} and {}",
                                rec.chart,
                                chart.label()
                            )));
                        }
                        rec.w.d = rec.w.d.max(w.d);
                        rec.charts += 1;
                    }
                    None => {
                        self.finals.insert(
                            key.clone(),
                            LineFinal {
                                chart: chart.path().clone(),
                                axis: chart.vars.name(zeros[0]).to_string(),
                                normals,
                                w,
                                charts: 1,
                            },
                        );
                    }
                }
            }
        }
        Ok(())
    }

    fn lines(&self) -> Result<Vec<LineRecord>> {
        let mut out = Vec::new();
        for (key, roots) in &self.roots {
            let fin = self
                .finals
                .get(key)
                .ok_or_else(|| Error::Bookkeeping(format!("fixed line {key} never reaches Y4")))?;
            let mut chars: Vec<Character> = roots.iter().map(|r| r.character).collect();
            chars.sort();
            if chars != fin.normals {
                return Err(Error::Bookkeeping(format!(
                    "normal characters of line {key} disagree with chart {}",
                    fin.chart
                )));
            }
            out.push(LineRecord {
                provenance: key.clone(),
                chart: fin.chart.clone(),
                axis: fin.axis.clone(),
                roots: roots.clone(),
                w: fin.w,
                charts: fin.charts,
            });
        }
        Ok(out)
    }
}

fn walk_y_point(y: YPoint) -> Result<(Vec<PointRecord>, Vec<LineRecord>, usize)> {
    let mut walk = Walk::default();
    let chart = Chart::y_chart(y)?;
    walk.process(chart, Focus::Point(Provenance(vec![ProvStep::Fixed(y)])))?;
    let lines = walk.lines()?;
    Ok((
        walk.points.into_values().collect(),
        lines,
        walk.final_charts,
    ))
}

impl Inventory {
    /// Walk all thirty fixed points of Y in parallel.
    pub fn compute() -> Result<Inventory> {
        let parts: Vec<_> = YPoint::all()
            .into_par_iter()
            .map(walk_y_point)
            .collect::<Result<_>>()?;
        let mut inv = Inventory {
            points: Vec::new(),
            lines: Vec::new(),
            final_charts: 0,
        };
        for (p, l, n) in parts {
            inv.points.extend(p);
            inv.lines.extend(l);
            inv.final_charts += n;
        }
        inv.points.sort_by(|a, b| a.provenance.cmp(&b.provenance));
        inv.lines.sort_by(|a, b| a.provenance.cmp(&b.provenance));
        Ok(inv)
    }

    /// The inventory over the standard flag, computed once per process.
    pub fn standard() -> Result<&'static Inventory> {
        static INV: OnceLock<Result<Inventory>> = OnceLock::new();
        INV.get_or_init(Inventory::compute)
            .as_ref()
            .map_err(Clone::clone)
    }

    /// Rebuild every canonical chart from its path and read its locus off
    /// the chart alone: the origin or the zero-weight axis, its characters,
    /// and W from ω recomputed from scratch. Returns the number of charts.
    pub fn chart_scan(&self) -> Result<usize> {
        let mut seen = BTreeSet::new();
        let mismatch = |what: &str, key: &Provenance| {
            Error::Bookkeeping(format!("chart scan: {what} differs for {key}"))
        };
        for p in &self.points {
            let chart = build_chart(&p.chart)?;
            if !seen.insert(p.chart.clone()) || !chart.zero_coordinates().is_empty() {
                return Err(mismatch("canonical chart", &p.provenance));
            }
            let mut t = chart.chars.clone();
            t.sort();
            if t != p.tangent {
                return Err(mismatch("tangent", &p.provenance));
            }
            if w_character_in_chart(&chart, &omega_in_chart(&chart)?)? != p.w {
                return Err(mismatch("W", &p.provenance));
            }
        }
        for l in &self.lines {
            let chart = build_chart(&l.chart)?;
            let zeros = chart.zero_coordinates();
            if !seen.insert(l.chart.clone())
                || zeros.len() != 1
                || chart.vars.name(zeros[0]) != l.axis
            {
                return Err(mismatch("canonical chart", &l.provenance));
            }
            let mut n: Vec<Character> = chart
                .chars
                .iter()
                .copied()
                .filter(|c| !c.is_zero())
                .collect();
            let mut r: Vec<Character> = l.roots.iter().map(|r| r.character).collect();
            n.sort();
            r.sort();
            if n != r {
                return Err(mismatch("normal characters", &l.provenance));
            }
            let w = w_character_in_chart(&chart, &omega_in_chart(&chart)?)?;
            if w.character != l.w.character || w.d > l.w.d {
                return Err(mismatch("W", &l.provenance));
            }
        }
        Ok(seen.len())
    }

    /// Topological Euler characteristic of a fiber: points count 1, lines 2.
    pub fn euler_characteristic(&self) -> usize {
        self.points.len() + 2 * self.lines.len()
    }
}

/// A normal root `lambda + degree·h` at a chosen weight vector.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct RootClass {
    pub lambda: i64,
    pub degree: i64,
}

impl RootClass {
    pub fn hclass(&self) -> HClass {
        HClass::new(
            Rat::from_integer(self.lambda.into()),
            Rat::from_integer(self.degree.into()),
        )
    }
}

#[derive(Clone, Debug, Serialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum LocusData {
    /// 13 tangent weights: 6 along the flag variety, 7 along the fiber.
    Point { tangent: Vec<i64> },
    /// 12 normal roots: 6 along the flag variety, 6 along the fiber.
    Line { axis: String, roots: Vec<RootClass> },
}

/// A fixed component of Y4 over a given flag, evaluated at a weight vector.
#[derive(Clone, Debug, Serialize)]
pub struct FixedLocus {
    #[serde(serialize_with = "flag_label")]
    pub flag: FixedFlag,
    pub provenance: Provenance,
    pub chart: String,
    #[serde(skip)]
    pub chart_path: ChartPath,
    #[serde(flatten)]
    pub data: LocusData,
    pub w: WClass,
}

fn flag_label<S: Serializer>(f: &FixedFlag, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&f.label())
}

impl FixedLocus {
    pub fn is_point(&self) -> bool {
        matches!(self.data, LocusData::Point { .. })
    }

    pub fn normal_roots(&self) -> Vec<HClass> {
        match &self.data {
            LocusData::Point { tangent } => {
                tangent.iter().map(|&t| HClass::from_ints(t, 0)).collect()
            }
            LocusData::Line { roots, .. } => roots.iter().map(RootClass::hclass).collect(),
        }
    }
}

fn nonzero(
    c: Character,
    flag: &FixedFlag,
    w: &WeightVector,
    what: impl Fn() -> String,
) -> Result<i64> {
    match flag.eval(c, w) {
        0 => Err(Error::NonGeneric {
            w: w.get(),
            what: format!("{} ({})", what(), flag.relabel(c)),
        }),
        v => Ok(v),
    }
}

/// All fixed loci over `flag`, with weights evaluated at `w`.
pub fn enumerate_fixed_loci(flag: &FixedFlag, w: &WeightVector) -> Result<Vec<FixedLocus>> {
    let inv = Inventory::standard()?;
    let base = flag_tangent_characters();
    let mut out = Vec::with_capacity(inv.points.len() + inv.lines.len());
    let label = flag.label();
    for p in &inv.points {
        let what = |kind: &str| format!("{kind} at {} over flag {label}", p.provenance);
        let tangent = base
            .iter()
            .chain(&p.tangent)
            .map(|&c| nonzero(c, flag, w, || what("tangent weight")))
            .collect::<Result<_>>()?;
        out.push(FixedLocus {
            flag: *flag,
            provenance: p.provenance.clone(),
            chart: p.chart.label(),
            chart_path: p.chart.clone(),
            data: LocusData::Point { tangent },
            w: p.w.at(flag, w),
        });
    }
    for l in &inv.lines {
        let what = |kind: &str| format!("{kind} at {} over flag {label}", l.provenance);
        let roots = base
            .iter()
            .map(|&c| NormalRoot {
                character: c,
                degree: 0,
            })
            .chain(l.roots.iter().copied())
            .map(|r| {
                Ok(RootClass {
                    lambda: nonzero(r.character, flag, w, || what("normal weight"))?,
                    degree: r.degree,
                })
            })
            .collect::<Result<_>>()?;
        out.push(FixedLocus {
            flag: *flag,
            provenance: l.provenance.clone(),
            chart: l.chart.label(),
            chart_path: l.chart.clone(),
            data: LocusData::Line {
                axis: l.axis.clone(),
                roots,
            },
            w: l.w.at(flag, w),
        });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn census_per_flag() {
        let inv = Inventory::standard().unwrap();
        assert_eq!(inv.points.len(), 72);
        assert_eq!(inv.lines.len(), 5);
        assert_eq!(inv.euler_characteristic(), 82);
    }

    #[test]
    fn chart_scan_agrees_with_walk() {
        assert_eq!(Inventory::standard().unwrap().chart_scan().unwrap(), 77);
    }

    #[test]
    fn locus_dimensions() {
        let w = WeightVector::new(crate::flags::DEFAULT_WEIGHTS).unwrap();
        for l in enumerate_fixed_loci(&FixedFlag::identity(), &w).unwrap() {
            match &l.data {
                LocusData::Point { tangent } => assert_eq!(tangent.len(), 13),
                LocusData::Line { roots, .. } => assert_eq!(roots.len(), 12),
            }
        }
    }

    #[test]
    fn lines_have_trivial_w_degree() {
        let inv = Inventory::standard().unwrap();
        assert!(inv.lines.iter().all(|l| l.w.d == 0));
        assert_eq!(inv.final_charts, 116);
    }

    #[test]
    fn w_from_scratch_matches_walk() {
        let w = WeightVector::new(crate::flags::DEFAULT_WEIGHTS).unwrap();
        for flag in [FixedFlag::identity(), FixedFlag::parse("2103").unwrap()] {
            for l in enumerate_fixed_loci(&flag, &w).unwrap() {
                assert_eq!(
                    crate::omega::w_class_at_locus(&l, &w).unwrap(),
                    l.w,
                    "{}",
                    l.provenance
                );
            }
        }
    }

    #[test]
    fn untouched_y_point_carries_w_of_its_form() {
        let y = YPoint::new(2, crate::bundles::QuadricPoint::GPrime, 3).unwrap();
        let inv = Inventory::standard().unwrap();
        let p = inv
            .points
            .iter()
            .find(|p| p.provenance.0 == [ProvStep::Fixed(y)])
            .unwrap();
        assert_eq!(p.w.character, Character([2, 0, 1, 1]));
        assert_eq!(p.w.d, 0);
    }
}
