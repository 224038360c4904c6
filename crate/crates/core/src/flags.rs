//! The torus action on the dual P^3, its 24 fixed flags and weight bookkeeping.
//!
//! Sign convention: a coordinate that scales as `z -> t^m z` contributes the
//! tangent weight `m`; a line spanned by a vector of weight `m` has
//! equivariant first Chern class `m`. The oracles in `bott` pin this choice.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use itertools::Itertools;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const DEFAULT_WEIGHTS: [i64; 4] = [0, 1, 4, 13];
pub const DEFAULT_WEIGHTS2: [i64; 4] = [3, 17, 5, 41];

/// Four pairwise distinct integer weights of the coordinates x0..x3.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct WeightVector([i64; 4]);

impl WeightVector {
    pub fn new(w: [i64; 4]) -> Result<Self> {
        if w.iter().tuple_combinations().any(|(a, b)| a == b) {
            return Err(Error::NotDistinct(w));
        }
        Ok(WeightVector(w))
    }

    pub fn get(&self) -> [i64; 4] {
        self.0
    }

    pub fn permuted(&self, p: [usize; 4]) -> Self {
        WeightVector([self.0[p[0]], self.0[p[1]], self.0[p[2]], self.0[p[3]]])
    }

    pub fn translated(&self, c: i64) -> Self {
        WeightVector(self.0.map(|x| x + c))
    }

    pub fn scaled(&self, c: i64) -> Result<Self> {
        WeightVector::new(self.0.map(|x| x * c))
    }
}

impl fmt::Display for WeightVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "({},{},{},{})",
            self.0[0], self.0[1], self.0[2], self.0[3]
        )
    }
}

/// Integer combination of w0..w3; the weight of a torus character.
#[derive(
    Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize,
)]
pub struct Character(pub [i32; 4]);

impl Character {
    pub const ZERO: Character = Character([0; 4]);

    pub fn basis(i: usize) -> Self {
        let mut c = [0; 4];
        c[i] = 1;
        Character(c)
    }

    /// Character of the monomial with exponent vector `e` in x0..x3.
    pub fn of_monomial(e: [u32; 4]) -> Self {
        Character(e.map(|x| x as i32))
    }

    pub fn is_zero(&self) -> bool {
        self.0 == [0; 4]
    }

    pub fn eval(&self, w: &WeightVector) -> i64 {
        self.0
            .iter()
            .zip(w.0.iter())
            .map(|(&c, &x)| c as i64 * x)
            .sum()
    }
}

impl Add for Character {
    type Output = Character;
    fn add(self, o: Character) -> Character {
        Character([0, 1, 2, 3].map(|i| self.0[i] + o.0[i]))
    }
}

impl Sub for Character {
    type Output = Character;
    fn sub(self, o: Character) -> Character {
        Character([0, 1, 2, 3].map(|i| self.0[i] - o.0[i]))
    }
}

impl Neg for Character {
    type Output = Character;
    fn neg(self) -> Character {
        Character(self.0.map(|x| -x))
    }
}

impl Mul<i32> for Character {
    type Output = Character;
    fn mul(self, k: i32) -> Character {
        Character(self.0.map(|x| x * k))
    }
}

impl fmt::Display for Character {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut out = String::new();
        for (i, &c) in self.0.iter().enumerate() {
            if c == 0 {
                continue;
            }
            let sign = if c < 0 {
                "-"
            } else if out.is_empty() {
                ""
            } else {
                "+"
            };
            let mag = c.abs();
            if mag == 1 {
                out.push_str(&format!("{sign}w{i}"));
            } else {
                out.push_str(&format!("{sign}{mag}w{i}"));
            }
        }
        if out.is_empty() {
            out.push('0');
        }
        write!(f, "{out}")
    }
}

/// Flag `{x_{σ0}=x_{σ1}=x_{σ2}=0} ∈ {x_{σ0}=x_{σ1}=0} ⊂ {x_{σ0}=0}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct FixedFlag {
    pub perm: [usize; 4],
}

impl FixedFlag {
    pub fn identity() -> Self {
        FixedFlag { perm: [0, 1, 2, 3] }
    }

    /// Parse a label such as `0123`.
    pub fn parse(label: &str) -> Result<Self> {
        let digits: Vec<usize> = label
            .chars()
            .map(|c| c.to_digit(10).map(|d| d as usize))
            .collect::<Option<_>>()
            .ok_or_else(|| Error::Parse(format!("flag label `{label}`")))?;
        if digits.len() != 4 || !digits.iter().sorted().copied().eq(0..4) {
            return Err(Error::Parse(format!(
                "flag label `{label}` is not a permutation of 0123"
            )));
        }
        Ok(FixedFlag {
            perm: [digits[0], digits[1], digits[2], digits[3]],
        })
    }

    pub fn label(&self) -> String {
        self.perm.iter().map(|d| d.to_string()).collect()
    }

    /// Homogeneous coordinates of the point of the flag.
    pub fn point(&self) -> [u8; 4] {
        let mut p = [0; 4];
        p[self.perm[3]] = 1;
        p
    }

    /// Indices of the coordinates vanishing on the line.
    pub fn line(&self) -> [usize; 2] {
        [self.perm[0], self.perm[1]]
    }

    /// Index of the plane equation.
    pub fn plane(&self) -> usize {
        self.perm[0]
    }

    /// Transport a character from the standard flag to this one.
    pub fn relabel(&self, c: Character) -> Character {
        let mut out = [0; 4];
        for i in 0..4 {
            out[self.perm[i]] = c.0[i];
        }
        Character(out)
    }

    /// Weight at this flag of a character written for the standard flag.
    pub fn eval(&self, c: Character, w: &WeightVector) -> i64 {
        self.relabel(c).eval(w)
    }
}

pub fn enumerate_fixed_flags() -> Vec<FixedFlag> {
    (0..4)
        .permutations(4)
        .map(|p| FixedFlag {
            perm: [p[0], p[1], p[2], p[3]],
        })
        .collect()
}

pub fn monomial_weight(e: [u32; 4], w: &WeightVector) -> i64 {
    Character::of_monomial(e).eval(w)
}

/// Weight of the 1-form term `x^e dx_i`.
pub fn form_term_weight(e: [u32; 4], i: usize, w: &WeightVector) -> i64 {
    (Character::of_monomial(e) + Character::basis(i)).eval(w)
}

/// Tangent characters of the flag variety at the standard flag: the plane
/// piece Hom(<x0>, S1/<x0>), the line-in-plane piece Hom(<x1>, S1/<x0,x1>)
/// and the point-in-line piece Hom(<x2>, <x3>).
pub fn flag_tangent_characters() -> [Character; 6] {
    let e = Character::basis;
    [
        e(1) - e(0),
        e(2) - e(0),
        e(3) - e(0),
        e(2) - e(1),
        e(3) - e(1),
        e(3) - e(2),
    ]
}

pub fn flag_tangent_weights(flag: &FixedFlag, w: &WeightVector) -> Vec<i64> {
    flag_tangent_characters()
        .iter()
        .map(|&c| flag.eval(c, w))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w() -> WeightVector {
        WeightVector::new(DEFAULT_WEIGHTS).unwrap()
    }

    #[test]
    fn twenty_four_distinct_flags() {
        let f = enumerate_fixed_flags();
        assert_eq!(f.len(), 24);
        assert_eq!(f.iter().unique().count(), 24);
        assert_eq!(f[0], FixedFlag::identity());
    }

    #[test]
    fn standard_flag_geometry() {
        let s = FixedFlag::identity();
        assert_eq!(s.point(), [0, 0, 0, 1]);
        assert_eq!(s.line(), [0, 1]);
        assert_eq!(s.plane(), 0);
        let swapped = FixedFlag::parse("1023").unwrap();
        assert_eq!(swapped.plane(), 1);
    }

    #[test]
    fn monomial_and_form_weights() {
        let w = WeightVector::new([2, 3, 5, 7]).unwrap();
        assert_eq!(monomial_weight([2, 0, 0, 1], &w), 2 * 2 + 7);
        assert_eq!(form_term_weight([1, 1, 1, 0], 0, &w), 2 + 3 + 5 + 2);
    }

    #[test]
    fn tangent_weights_match_hom_description() {
        let w = WeightVector::new([2, 3, 5, 7]).unwrap();
        let mut t = flag_tangent_weights(&FixedFlag::identity(), &w);
        t.sort();
        let mut expect = vec![3 - 2, 5 - 2, 7 - 2, 5 - 3, 7 - 3, 7 - 5];
        expect.sort();
        assert_eq!(t, expect);
        for f in enumerate_fixed_flags() {
            let t = flag_tangent_weights(&f, &w);
            assert_eq!(t.len(), 6);
            assert!(t.iter().all(|&x| x != 0));
        }
    }

    #[test]
    fn relabeling_is_equivariant() {
        let w = w();
        for f in enumerate_fixed_flags() {
            let wp = w.permuted(f.perm);
            for c in flag_tangent_characters() {
                assert_eq!(f.eval(c, &w), c.eval(&wp));
            }
        }
    }

    #[test]
    fn rejects_repeated_weights() {
        assert!(WeightVector::new([1, 2, 2, 3]).is_err());
        assert!(FixedFlag::parse("0012").is_err());
    }

    #[test]
    fn character_display() {
        let c = Character([1, -2, 0, 1]);
        assert_eq!(c.to_string(), "w0-2w1+w3");
        assert_eq!(Character::ZERO.to_string(), "0");
    }
}
