//! Gröbner bases over Q (Buchberger, sugar selection, Gebauer–Möller pair
//! pruning) and the ideal operations built on them.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::sync::OnceLock;

use num_traits::{One, Zero};
use smallvec::SmallVec;

use crate::arith::{Exp, MPoly, Rat, Vars};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum MonoOrder {
    #[default]
    Grevlex,
    Lex,
    /// Grevlex on the first `k` variables, ties broken by grevlex on the rest.
    /// Eliminates the first `k` variables.
    Block(usize),
}

type Key = SmallVec<[i32; 20]>;

impl MonoOrder {
    /// Integer vector whose lexicographic order is the monomial order.
    /// The map is additive, so monomial products are key sums.
    fn key(&self, e: &Exp) -> Key {
        fn grevlex(out: &mut Key, e: &[u16]) {
            out.push(e.iter().map(|&x| x as i32).sum());
            out.extend(e.iter().rev().map(|&x| -(x as i32)));
        }
        let mut k = Key::new();
        match *self {
            MonoOrder::Lex => k.extend(e.iter().map(|&x| x as i32)),
            MonoOrder::Grevlex => grevlex(&mut k, e),
            MonoOrder::Block(b) => {
                grevlex(&mut k, &e[..b]);
                grevlex(&mut k, &e[b..]);
            }
        }
        k
    }

    pub fn cmp(&self, a: &Exp, b: &Exp) -> Ordering {
        self.key(a).cmp(&self.key(b))
    }
}

fn divides(a: &Exp, b: &Exp) -> bool {
    a.iter().zip(b.iter()).all(|(x, y)| x <= y)
}

fn lcm(a: &Exp, b: &Exp) -> Exp {
    a.iter().zip(b.iter()).map(|(x, y)| *x.max(y)).collect()
}

fn coprime(a: &Exp, b: &Exp) -> bool {
    a.iter().zip(b.iter()).all(|(x, y)| *x == 0 || *y == 0)
}

fn deg(e: &Exp) -> u32 {
    e.iter().map(|&x| x as u32).sum()
}

fn sub_exp(a: &Exp, b: &Exp) -> Exp {
    a.iter().zip(b.iter()).map(|(x, y)| x - y).collect()
}

/// Monic polynomial with terms sorted by decreasing order key.
#[derive(Clone)]
struct GPoly {
    terms: Vec<(Key, Exp, Rat)>,
    sugar: u32,
}

impl GPoly {
    fn lead(&self) -> &Exp {
        &self.terms[0].1
    }
}

struct Engine {
    order: MonoOrder,
}

impl Engine {
    fn to_map(&self, p: &MPoly) -> BTreeMap<Key, (Exp, Rat)> {
        p.terms()
            .map(|(e, c)| (self.order.key(e), (e.clone(), c.clone())))
            .collect()
    }

    fn finish(&self, map: BTreeMap<Key, (Exp, Rat)>, sugar: u32) -> Option<GPoly> {
        let mut terms: Vec<(Key, Exp, Rat)> =
            map.into_iter().rev().map(|(k, (e, c))| (k, e, c)).collect();
        if terms.is_empty() {
            return None;
        }
        let inv = terms[0].2.recip();
        for t in &mut terms {
            t.2 = &t.2 * &inv;
        }
        Some(GPoly { terms, sugar })
    }

    /// Full reduction of `map` by the active basis elements.
    fn reduce(
        &self,
        mut map: BTreeMap<Key, (Exp, Rat)>,
        basis: &[GPoly],
        active: &[bool],
        mut sugar: u32,
        skip: Option<usize>,
    ) -> (BTreeMap<Key, (Exp, Rat)>, u32) {
        let mut rem: BTreeMap<Key, (Exp, Rat)> = BTreeMap::new();
        while let Some((k, (e, c))) = map.pop_last() {
            let found = basis
                .iter()
                .enumerate()
                .find(|(i, g)| active[*i] && Some(*i) != skip && divides(g.lead(), &e));
            match found {
                None => {
                    rem.insert(k, (e, c));
                }
                Some((_, g)) => {
                    let m = sub_exp(&e, g.lead());
                    let mk = self.order.key(&m);
                    sugar = sugar.max(g.sugar + deg(&m));
                    for (gk, ge, gc) in g.terms.iter().skip(1) {
                        let nk: Key = gk.iter().zip(mk.iter()).map(|(a, b)| a + b).collect();
                        let delta = &c * gc;
                        match map.entry(nk) {
                            std::collections::btree_map::Entry::Vacant(v) => {
                                let ne: Exp = ge.iter().zip(m.iter()).map(|(a, b)| a + b).collect();
                                v.insert((ne, -delta));
                            }
                            std::collections::btree_map::Entry::Occupied(mut o) => {
                                let s = &o.get().1 - delta;
                                if s.is_zero() {
                                    o.remove();
                                } else {
                                    o.get_mut().1 = s;
                                }
                            }
                        }
                    }
                }
            }
        }
        (rem, sugar)
    }

    fn spoly(&self, f: &GPoly, g: &GPoly) -> (BTreeMap<Key, (Exp, Rat)>, u32) {
        let l = lcm(f.lead(), g.lead());
        let mf = sub_exp(&l, f.lead());
        let mg = sub_exp(&l, g.lead());
        let mut map = BTreeMap::new();
        for (p, m, sign) in [(f, &mf, Rat::one()), (g, &mg, -Rat::one())] {
            let mk = self.order.key(m);
            for (k, e, c) in p.terms.iter().skip(1) {
                let nk: Key = k.iter().zip(mk.iter()).map(|(a, b)| a + b).collect();
                let ne: Exp = e.iter().zip(m.iter()).map(|(a, b)| a + b).collect();
                let entry = map.entry(nk).or_insert_with(|| (ne, Rat::zero()));
                entry.1 += c * &sign;
            }
        }
        map.retain(|_, (_, c)| !c.is_zero());
        let sugar = (f.sugar + deg(&mf)).max(g.sugar + deg(&mg));
        (map, sugar)
    }

    fn run(&self, input: &[MPoly]) -> Vec<GPoly> {
        let mut basis: Vec<GPoly> = Vec::new();
        let mut active: Vec<bool> = Vec::new();
        let mut pairs: Vec<Pair> = Vec::new();
        let mut inputs: Vec<&MPoly> = input.iter().filter(|p| !p.is_zero()).collect();
        inputs.sort_by_key(|p| p.total_degree());
        for p in inputs {
            let (r, s) = self.reduce(self.to_map(p), &basis, &active, p.total_degree(), None);
            if let Some(h) = self.finish(r, s) {
                if h.terms[0].1.iter().all(|&x| x == 0) {
                    return vec![h];
                }
                self.update(&mut basis, &mut active, &mut pairs, h);
            }
        }
        while !pairs.is_empty() {
            let idx = (0..pairs.len())
                .min_by(|&a, &b| {
                    let (pa, pb) = (&pairs[a], &pairs[b]);
                    pa.sugar
                        .cmp(&pb.sugar)
                        .then_with(|| self.order.cmp(&pa.lcm, &pb.lcm))
                })
                .unwrap();
            let pr = pairs.swap_remove(idx);
            let (s, sugar) = self.spoly(&basis[pr.i], &basis[pr.j]);
            let (r, sugar) = self.reduce(s, &basis, &active, sugar, None);
            if let Some(h) = self.finish(r, sugar) {
                if h.terms[0].1.iter().all(|&x| x == 0) {
                    return vec![h];
                }
                self.update(&mut basis, &mut active, &mut pairs, h);
            }
        }
        // Interreduce the minimal basis.
        let mut out: Vec<GPoly> = Vec::new();
        let idxs: Vec<usize> = (0..basis.len()).filter(|&i| active[i]).collect();
        for &i in &idxs {
            let map: BTreeMap<Key, (Exp, Rat)> = basis[i]
                .terms
                .iter()
                .map(|(k, e, c)| (k.clone(), (e.clone(), c.clone())))
                .collect();
            let (r, s) = self.reduce(map, &basis, &active, basis[i].sugar, Some(i));
            out.push(
                self.finish(r, s)
                    .expect("minimal basis element reduced to zero"),
            );
        }
        out.sort_by(|a, b| b.terms[0].0.cmp(&a.terms[0].0));
        out
    }

    /// Gebauer–Möller installation of a new element.
    fn update(
        &self,
        basis: &mut Vec<GPoly>,
        active: &mut Vec<bool>,
        pairs: &mut Vec<Pair>,
        h: GPoly,
    ) {
        let hn = basis.len();
        let hl = h.lead().clone();
        let cand: Vec<usize> = (0..basis.len()).filter(|&i| active[i]).collect();
        let lcms: Vec<Exp> = cand.iter().map(|&i| lcm(&hl, basis[i].lead())).collect();

        // Chain criterion among the new pairs; coprime pairs are kept only
        // to shadow others and dropped afterwards (product criterion).
        let mut keep = vec![true; cand.len()];
        for a in 0..cand.len() {
            let cop = coprime(&hl, basis[cand[a]].lead());
            if cop {
                continue;
            }
            for b in 0..cand.len() {
                if a == b || !keep[b] {
                    continue;
                }
                if divides(&lcms[b], &lcms[a]) && (lcms[b] != lcms[a] || b < a) {
                    keep[a] = false;
                    break;
                }
            }
        }
        let mut fresh = Vec::new();
        for a in 0..cand.len() {
            if keep[a] && !coprime(&hl, basis[cand[a]].lead()) {
                let g = &basis[cand[a]];
                let sugar = (h.sugar + deg(&sub_exp(&lcms[a], &hl)))
                    .max(g.sugar + deg(&sub_exp(&lcms[a], g.lead())));
                fresh.push(Pair {
                    i: cand[a],
                    j: hn,
                    lcm: lcms[a].clone(),
                    sugar,
                });
            }
        }

        // Drop old pairs whose lcm is strictly covered through h.
        pairs.retain(|p| {
            if !divides(&hl, &p.lcm) {
                return true;
            }
            let li = lcm(basis[p.i].lead(), &hl);
            let lj = lcm(basis[p.j].lead(), &hl);
            li == p.lcm || lj == p.lcm
        });
        pairs.extend(fresh);

        for i in 0..basis.len() {
            if active[i] && divides(&hl, basis[i].lead()) {
                active[i] = false;
            }
        }
        basis.push(h);
        active.push(true);
    }
}

struct Pair {
    i: usize,
    j: usize,
    lcm: Exp,
    sugar: u32,
}

fn gpoly_to_mpoly(vars: &Vars, g: &GPoly) -> MPoly {
    MPoly::from_terms(vars, g.terms.iter().map(|(_, e, c)| (e.clone(), c.clone())))
}

/// Reduced Gröbner basis of the polynomials in `gens` (monic, sorted by
/// decreasing leading monomial).
pub fn groebner_basis(vars: &Vars, gens: &[MPoly], order: MonoOrder) -> Vec<MPoly> {
    let eng = Engine { order };
    eng.run(gens)
        .iter()
        .map(|g| gpoly_to_mpoly(vars, g))
        .collect()
}

/// Leading monomial under `order`.
pub fn leading_exp(p: &MPoly, order: MonoOrder) -> Option<Exp> {
    p.terms()
        .map(|(e, _)| e.clone())
        .max_by(|a, b| order.cmp(a, b))
}

/// Ideal generated by a finite list of polynomials.
pub struct Ideal {
    vars: Vars,
    gens: Vec<MPoly>,
    order: MonoOrder,
    gb: OnceLock<Vec<MPoly>>,
}

impl Clone for Ideal {
    fn clone(&self) -> Self {
        let gb = OnceLock::new();
        if let Some(b) = self.gb.get() {
            let _ = gb.set(b.clone());
        }
        Ideal {
            vars: self.vars.clone(),
            gens: self.gens.clone(),
            order: self.order,
            gb,
        }
    }
}

impl fmt::Debug for Ideal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Ideal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.gens.iter().map(|g| g.to_string()).collect();
        write!(f, "<{}>", parts.join(", "))
    }
}

impl Ideal {
    pub fn new(vars: &Vars, gens: Vec<MPoly>) -> Self {
        Self::with_order(vars, gens, MonoOrder::Grevlex)
    }

    pub fn with_order(vars: &Vars, gens: Vec<MPoly>, order: MonoOrder) -> Self {
        for g in &gens {
            assert!(g.vars() == vars, "generator over a foreign variable list");
        }
        Ideal {
            vars: vars.clone(),
            gens: gens.into_iter().filter(|g| !g.is_zero()).collect(),
            order,
            gb: OnceLock::new(),
        }
    }

    pub fn unit(vars: &Vars) -> Self {
        Self::new(vars, vec![MPoly::one(vars)])
    }

    /// Parse each generator over `vars`.
    pub fn parse(vars: &Vars, gens: &[&str]) -> crate::error::Result<Self> {
        let gens = gens
            .iter()
            .map(|s| MPoly::parse(vars, s))
            .collect::<crate::error::Result<Vec<_>>>()?;
        Ok(Self::new(vars, gens))
    }

    pub fn vars(&self) -> &Vars {
        &self.vars
    }

    pub fn gens(&self) -> &[MPoly] {
        &self.gens
    }

    pub fn order(&self) -> MonoOrder {
        self.order
    }

    pub fn groebner(&self) -> &[MPoly] {
        self.gb
            .get_or_init(|| groebner_basis(&self.vars, &self.gens, self.order))
    }

    /// Ideal whose generators are the reduced Gröbner basis of `self`.
    pub fn to_groebner(&self) -> Ideal {
        let b = self.groebner().to_vec();
        let out = Ideal::with_order(&self.vars, b.clone(), self.order);
        let _ = out.gb.set(b);
        out
    }

    pub fn normal_form(&self, p: &MPoly) -> MPoly {
        let eng = Engine { order: self.order };
        let basis: Vec<GPoly> = self
            .groebner()
            .iter()
            .map(|g| eng.finish(eng.to_map(g), 0).unwrap())
            .collect();
        let active = vec![true; basis.len()];
        let (r, _) = eng.reduce(eng.to_map(p), &basis, &active, 0, None);
        MPoly::from_terms(&self.vars, r.into_values())
    }

    pub fn contains(&self, p: &MPoly) -> bool {
        self.normal_form(p).is_zero()
    }

    pub fn contains_ideal(&self, other: &Ideal) -> bool {
        other.gens.iter().all(|g| self.contains(g))
    }

    pub fn is_unit(&self) -> bool {
        let b = self.groebner();
        b.len() == 1 && b[0].is_constant()
    }

    pub fn is_zero(&self) -> bool {
        self.gens.is_empty()
    }

    pub fn sum(&self, other: &Ideal) -> Ideal {
        let mut g = self.gens.clone();
        g.extend(other.gens.iter().cloned());
        Ideal::with_order(&self.vars, g, self.order)
    }

    /// Polynomials of `self` not involving the variables in `elim`.
    pub fn eliminate(&self, elim: &[usize]) -> Ideal {
        let n = self.vars.len();
        let mut perm: Vec<usize> = elim.to_vec();
        perm.extend((0..n).filter(|i| !elim.contains(i)));
        let names: Vec<String> = perm
            .iter()
            .map(|&i| self.vars.name(i).to_string())
            .collect();
        let pv = Vars::new(names);
        let gens: Vec<MPoly> = self.gens.iter().map(|g| g.embed(&pv).unwrap()).collect();
        let gb = groebner_basis(&pv, &gens, MonoOrder::Block(elim.len()));
        let kept = gb
            .into_iter()
            .filter(|g| (0..elim.len()).all(|i| !g.uses_var(i)))
            .map(|g| g.embed(&self.vars).unwrap())
            .collect();
        Ideal::with_order(&self.vars, kept, self.order)
    }

    /// `self : f^∞`, via `self + <1 - t f>` with `t` eliminated.
    pub fn saturate(&self, f: &MPoly) -> Ideal {
        assert!(!f.is_zero(), "saturation by zero");
        let ext = self.vars.prepend(&["_t"]);
        let t = MPoly::var(&ext, 0);
        let mut gens: Vec<MPoly> = self.gens.iter().map(|g| g.embed(&ext).unwrap()).collect();
        gens.push(&MPoly::one(&ext) - &(&t * &f.embed(&ext).unwrap()));
        let gb = groebner_basis(&ext, &gens, MonoOrder::Block(1));
        let kept = gb
            .into_iter()
            .filter(|g| !g.uses_var(0))
            .map(|g| g.embed(&self.vars).unwrap())
            .collect();
        Ideal::with_order(&self.vars, kept, self.order)
    }

    /// `self ∩ other`, via `t·self + (1-t)·other` with `t` eliminated.
    pub fn intersect(&self, other: &Ideal) -> Ideal {
        let ext = self.vars.prepend(&["_t"]);
        let t = MPoly::var(&ext, 0);
        let omt = &MPoly::one(&ext) - &t;
        let mut gens: Vec<MPoly> = self
            .gens
            .iter()
            .map(|g| &t * &g.embed(&ext).unwrap())
            .collect();
        gens.extend(other.gens.iter().map(|g| &omt * &g.embed(&ext).unwrap()));
        let gb = groebner_basis(&ext, &gens, MonoOrder::Block(1));
        let kept = gb
            .into_iter()
            .filter(|g| !g.uses_var(0))
            .map(|g| g.embed(&self.vars).unwrap())
            .collect();
        Ideal::with_order(&self.vars, kept, self.order)
    }

    /// Whether some power of `f` lies in `self`.
    pub fn radical_contains(&self, f: &MPoly) -> bool {
        let ext = self.vars.prepend(&["_t"]);
        let t = MPoly::var(&ext, 0);
        let mut gens: Vec<MPoly> = self.gens.iter().map(|g| g.embed(&ext).unwrap()).collect();
        gens.push(&MPoly::one(&ext) - &(&t * &f.embed(&ext).unwrap()));
        Ideal::new(&ext, gens).is_unit()
    }

    pub fn map_gens(&self, f: impl Fn(&MPoly) -> MPoly, vars: &Vars) -> Ideal {
        Ideal::with_order(vars, self.gens.iter().map(f).collect(), self.order)
    }
}

pub fn groebner(i: &Ideal) -> Ideal {
    i.to_groebner()
}

pub fn saturate(i: &Ideal, f: &MPoly) -> Ideal {
    i.saturate(f)
}

pub fn ideal_equal(i: &Ideal, j: &Ideal) -> bool {
    assert!(i.vars == j.vars, "ideals over different variable lists");
    i.contains_ideal(j) && j.contains_ideal(i)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn xyz() -> Vars {
        Vars::new(["x", "y", "z"])
    }

    #[test]
    fn grevlex_basis_contains_y_cubed() {
        let v = xyz();
        let i = Ideal::parse(&v, &["x^2", "x*y + y^2"]).unwrap();
        let y3 = MPoly::parse(&v, "y^3").unwrap();
        assert!(i.groebner().iter().any(|g| g == &y3));
        assert!(i.contains(&y3));
    }

    #[test]
    fn membership() {
        let v = xyz();
        let i = Ideal::parse(&v, &["x - 1"]).unwrap();
        assert!(i.contains(&MPoly::parse(&v, "x^2 - 1").unwrap()));
        assert!(!i.contains(&MPoly::parse(&v, "x^2 + 1").unwrap()));
    }

    #[test]
    fn saturation_examples() {
        let v = xyz();
        let x = MPoly::var(&v, 0);
        let y = MPoly::var(&v, 1);
        let i = Ideal::parse(&v, &["x*y", "x*z"]).unwrap();
        assert!(ideal_equal(
            &i.saturate(&x),
            &Ideal::parse(&v, &["y", "z"]).unwrap()
        ));
        let j = Ideal::parse(&v, &["x"]).unwrap();
        assert!(ideal_equal(&j.saturate(&y), &j));
    }

    #[test]
    fn equality_examples() {
        let v = xyz();
        let a = Ideal::parse(&v, &["x", "y"]).unwrap();
        let b = Ideal::parse(&v, &["y", "x + y"]).unwrap();
        assert!(ideal_equal(&a, &b));
        let c = Ideal::parse(&v, &["x"]).unwrap();
        let d = Ideal::parse(&v, &["x^2"]).unwrap();
        assert!(!ideal_equal(&c, &d));
    }

    #[test]
    fn unit_detection() {
        let v = xyz();
        assert!(Ideal::parse(&v, &["x*y - 1", "x"]).unwrap().is_unit());
        assert!(!Ideal::parse(&v, &["x*y - 1"]).unwrap().is_unit());
    }

    #[test]
    fn intersection_and_radical() {
        let v = xyz();
        let a = Ideal::parse(&v, &["x", "y"]).unwrap();
        let b = Ideal::parse(&v, &["z"]).unwrap();
        let i = a.intersect(&b);
        assert!(ideal_equal(&i, &Ideal::parse(&v, &["x*z", "y*z"]).unwrap()));
        let sq = Ideal::parse(&v, &["x^3", "y^2"]).unwrap();
        assert!(sq.radical_contains(&MPoly::parse(&v, "x + y").unwrap()));
        assert!(!sq.radical_contains(&MPoly::parse(&v, "x + z").unwrap()));
    }

    #[test]
    fn elimination_gives_implicit_equation() {
        let v = Vars::new(["t", "x", "y"]);
        let i = Ideal::parse(&v, &["x - t^2", "y - t^3"]).unwrap();
        let e = i.eliminate(&[0]);
        assert!(e.contains(&MPoly::parse(&v, "x^3 - y^2").unwrap()));
        assert!(e.gens().iter().all(|g| !g.uses_var(0)));
    }

    #[test]
    fn lex_and_block_orders_agree_on_ideal() {
        let v = xyz();
        let gens = ["x^2 + y*z - 2", "y^2 - x*z + 1", "x*y - z"];
        let a = Ideal::with_order(
            &v,
            gens.iter().map(|s| MPoly::parse(&v, s).unwrap()).collect(),
            MonoOrder::Lex,
        );
        let b = Ideal::parse(&v, &gens).unwrap();
        for g in a.groebner() {
            assert!(b.contains(g));
        }
        for g in b.groebner() {
            assert!(a.contains(g));
        }
    }
}
