//! Torus weights of the fibers of the equivariant bundles over the flag
//! variety, read off from their monomial bases at the standard flag
//! `<x0> ⊂ <x0,x1> ⊂ <x0,x1,x2>` of linear forms.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::flags::{Character, FixedFlag, WeightVector};

/// Monomials x0x1, x0x2, x1^2 spanning the quadric quotient, indexed by j-1.
pub const QUADRIC_MONOMIALS: [[u32; 4]; 3] = [[1, 1, 0, 0], [1, 0, 1, 0], [0, 2, 0, 0]];

/// Monomials x0x1^2, x0x1x2, x1^3 spanning the cubic quotient, indexed by j-1.
pub const CUBIC_MONOMIALS: [[u32; 4]; 3] = [[1, 2, 0, 0], [1, 1, 1, 0], [0, 3, 0, 0]];

/// x0^2 * x_i for i = 0..3.
pub const CUBIC_BASE: [[u32; 4]; 4] = [[3, 0, 0, 0], [2, 1, 0, 0], [2, 0, 1, 0], [2, 0, 0, 1]];

/// The two fixed points of a fiber of P(B').
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum QuadricPoint {
    /// g = x0^2
    X0Squared,
    /// g = the quadric g' determined by the fiber point of P(B̄)
    GPrime,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BundleSpec {
    S1,
    /// O(-k) on the dual P^3, fiber spanned by the k-th power of the plane equation.
    OPlane(u32),
    Qdual,
    Pdual,
    A,
    B,
    Abar,
    Bbar,
    /// A' at the fixed point `j` (1..=3) of P(B̄).
    Aprime(u8),
    /// B' at the fixed point `j` of P(B̄).
    Bprime(u8),
    /// Tautological line of P(B̄) at its fixed point `j`.
    TautBbar(u8),
    /// Tautological line of P(B') over the fixed point `j` of P(B̄).
    TautBprime(u8, QuadricPoint),
    /// Tautological line of P(A') at basis vector `k` (0..=4) over `j`.
    TautAprime(u8, u8),
}

impl BundleSpec {
    /// Look up a bundle by name; `j` is the fiber point of P(B̄) where needed.
    pub fn from_name(name: &str, j: Option<u8>) -> Result<Self> {
        let need_j = || {
            j.filter(|j| (1..=3).contains(j)).ok_or_else(|| {
                Error::UnknownBundle(format!("{name} needs a fiber point j in 1..=3"))
            })
        };
        Ok(match name {
            "S1" => BundleSpec::S1,
            "Qdual" => BundleSpec::Qdual,
            "Pdual" => BundleSpec::Pdual,
            "A" => BundleSpec::A,
            "B" => BundleSpec::B,
            "Abar" => BundleSpec::Abar,
            "Bbar" => BundleSpec::Bbar,
            "Aprime" => BundleSpec::Aprime(need_j()?),
            "Bprime" => BundleSpec::Bprime(need_j()?),
            "taut_sub(Bbar)" => BundleSpec::TautBbar(need_j()?),
            _ => {
                let k = name
                    .strip_prefix("O_plane(-")
                    .and_then(|s| s.strip_suffix(')'))
                    .and_then(|s| s.parse().ok())
                    .ok_or_else(|| Error::UnknownBundle(name.to_string()))?;
                BundleSpec::OPlane(k)
            }
        })
    }

    pub fn rank(&self) -> usize {
        self.monomials().len()
    }

    /// Monomial basis of the fiber at the standard flag.
    pub fn monomials(&self) -> Vec<[u32; 4]> {
        let lin = |i: usize| {
            let mut e = [0; 4];
            e[i] = 1;
            e
        };
        match *self {
            BundleSpec::S1 => (0..4).map(lin).collect(),
            BundleSpec::OPlane(k) => vec![[k, 0, 0, 0]],
            BundleSpec::Qdual => (0..2).map(lin).collect(),
            BundleSpec::Pdual => (0..3).map(lin).collect(),
            BundleSpec::A => CUBIC_BASE
                .iter()
                .chain(CUBIC_MONOMIALS.iter())
                .copied()
                .collect(),
            BundleSpec::B => std::iter::once([2, 0, 0, 0])
                .chain(QUADRIC_MONOMIALS.iter().copied())
                .collect(),
            BundleSpec::Abar => CUBIC_MONOMIALS.to_vec(),
            BundleSpec::Bbar => QUADRIC_MONOMIALS.to_vec(),
            BundleSpec::Aprime(j) => {
                let mut v = CUBIC_BASE.to_vec();
                v.push(CUBIC_MONOMIALS[j as usize - 1]);
                v
            }
            BundleSpec::Bprime(j) => vec![[2, 0, 0, 0], QUADRIC_MONOMIALS[j as usize - 1]],
            BundleSpec::TautBbar(j) => vec![QUADRIC_MONOMIALS[j as usize - 1]],
            BundleSpec::TautBprime(_, QuadricPoint::X0Squared) => vec![[2, 0, 0, 0]],
            BundleSpec::TautBprime(j, QuadricPoint::GPrime) => {
                vec![QUADRIC_MONOMIALS[j as usize - 1]]
            }
            BundleSpec::TautAprime(j, k) => {
                vec![BundleSpec::Aprime(j).monomials()[k as usize]]
            }
        }
    }

    pub fn characters(&self) -> Vec<Character> {
        self.monomials()
            .into_iter()
            .map(Character::of_monomial)
            .collect()
    }
}

impl fmt::Display for BundleSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

pub fn fiber_weights(spec: BundleSpec, flag: &FixedFlag, w: &WeightVector) -> Vec<i64> {
    let mut out: Vec<i64> = spec
        .characters()
        .into_iter()
        .map(|c| flag.eval(c, w))
        .collect();
    out.sort_unstable();
    out
}

fn shifted_multiset_equal(flag: &FixedFlag, w: &WeightVector, shift: Character) -> bool {
    let s = flag.eval(shift, w);
    let mut rhs: Vec<i64> = fiber_weights(BundleSpec::Bbar, flag, w)
        .into_iter()
        .map(|x| x + s)
        .collect();
    rhs.sort_unstable();
    fiber_weights(BundleSpec::Abar, flag, w) == rhs
}

/// Ā ≅ B̄ ⊗ (Q∨/O(-1)) at the level of fiber weights.
pub fn check_ov_a_ov_b(flag: &FixedFlag, w: &WeightVector) -> bool {
    let q = BundleSpec::Qdual.characters();
    let o = BundleSpec::OPlane(1).characters();
    let shift = q[0] + q[1] - o[0];
    shifted_multiset_equal(flag, w, shift)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::flags::enumerate_fixed_flags;

    fn w() -> WeightVector {
        WeightVector::new([2, 3, 5, 7]).unwrap()
    }

    #[test]
    fn ranks() {
        for (s, r) in [
            (BundleSpec::A, 7),
            (BundleSpec::B, 4),
            (BundleSpec::Abar, 3),
            (BundleSpec::Bbar, 3),
            (BundleSpec::Aprime(2), 5),
            (BundleSpec::Bprime(3), 2),
            (BundleSpec::Qdual, 2),
            (BundleSpec::Pdual, 3),
        ] {
            assert_eq!(s.rank(), r, "{s}");
        }
    }

    #[test]
    fn b_and_bprime_at_standard_flag() {
        let w = w();
        let id = FixedFlag::identity();
        assert_eq!(fiber_weights(BundleSpec::B, &id, &w), vec![4, 5, 6, 7]);
        assert_eq!(fiber_weights(BundleSpec::Bprime(2), &id, &w), vec![4, 7]);
        let mut a = vec![6, 7, 9, 11, 8, 10, 9];
        a.sort();
        assert_eq!(fiber_weights(BundleSpec::A, &id, &w), a);
    }

    #[test]
    fn ov_a_ov_b_lemma() {
        let w = w();
        for f in enumerate_fixed_flags() {
            assert!(check_ov_a_ov_b(&f, &w));
            assert!(!shifted_multiset_equal(&f, &w, Character::basis(0)));
        }
    }

    #[test]
    fn subquotient_additivity() {
        let w = w();
        for f in enumerate_fixed_flags() {
            let mut lhs = fiber_weights(BundleSpec::S1, &f, &w)
                .into_iter()
                .map(|x| x + fiber_weights(BundleSpec::OPlane(2), &f, &w)[0])
                .chain(fiber_weights(BundleSpec::Abar, &f, &w))
                .collect::<Vec<_>>();
            lhs.sort();
            assert_eq!(lhs, fiber_weights(BundleSpec::A, &f, &w));
            let mut b = fiber_weights(BundleSpec::Bbar, &f, &w);
            b.extend(fiber_weights(BundleSpec::OPlane(2), &f, &w));
            b.sort();
            assert_eq!(b, fiber_weights(BundleSpec::B, &f, &w));
        }
    }

    #[test]
    fn names() {
        assert_eq!(
            BundleSpec::from_name("O_plane(-2)", None).unwrap(),
            BundleSpec::OPlane(2)
        );
        assert_eq!(
            BundleSpec::from_name("Bprime", Some(1)).unwrap(),
            BundleSpec::Bprime(1)
        );
        assert!(BundleSpec::from_name("Bprime", None).is_err());
        assert!(BundleSpec::from_name("Cbar", None).is_err());
    }
}
