//! Rational homology of CW complexes and the rank of `H_1(X; Wh_K(F))`.
//!
//! Rationally the Atiyah-Hirzebruch spectral sequence for `H_1(X; Wh_K(F))` has only
//! two surviving terms: `H_0(X; Wh_1(G))` and `H_2(X; K_{-1}(Z[G]))`. The middle row
//! has finite coefficients and there is nothing below `K_{-1}`. Both terms are
//! untwisted, so their ranks are `b_0 * rank Wh_1(G)` and `b_2 * rank K_{-1}(Z[G])`.

mod complex;
mod matrix;
mod snf;

pub use complex::{betti, BettiProfile, ChainComplexData};
pub use matrix::IntMatrix;
pub use snf::{smith_normal_form, SmithForm};

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::ktheory::{k_minus_one_profile, wh1_rank};
use crate::numtheory::GroupSpec;

/// Sign `epsilon` in the involution `epsilon * tau_1` whose fixed points are counted.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Epsilon {
    Plus,
    Minus,
}

impl Epsilon {
    pub fn from_sign(e: i64) -> Result<Self> {
        match e {
            1 => Ok(Epsilon::Plus),
            -1 => Ok(Epsilon::Minus),
            _ => Err(Error::domain(format!("epsilon must be +1 or -1, got {e}"))),
        }
    }

    /// `(-1)^(n+1)` for a manifold of dimension `n`.
    pub fn from_dimension(n: u64) -> Self {
        if n % 2 == 1 {
            Epsilon::Plus
        } else {
            Epsilon::Minus
        }
    }

    pub fn sign(self) -> i64 {
        match self {
            Epsilon::Plus => 1,
            Epsilon::Minus => -1,
        }
    }
}

impl Serialize for Epsilon {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_i64(self.sign())
    }
}

/// How `tau_1` on `H_1(X; Wh_K(F))` acts on the `H_2(X; K_{-1})` quotient.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SignConvention {
    /// `-tau_{-1}`: a `+1`-eigenspace of `tau_1` there comes from the `-1`-eigenspace
    /// of `tau_{-1}`.
    #[default]
    NegatedKMinusOne,
    /// `tau_{-1}` unchanged.
    Direct,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct WhH1Profile {
    pub m: u64,
    pub epsilon: Epsilon,
    pub rank: u64,
    /// Dimension of the subspace fixed by `epsilon * tau_1`.
    pub dim_fixed: u64,
    /// Rank of the `H_0(X; Wh_1(G))` summand.
    pub wh_part_rank: u64,
    /// Rank of the `H_2(X; K_{-1}(Z[G]))` summand.
    pub k_minus_one_part_rank: u64,
    pub convention: SignConvention,
}

fn checked_mul(a: u64, b: u64) -> Result<u64> {
    a.checked_mul(b).ok_or(Error::Overflow("homology rank"))
}

fn checked_add(a: u64, b: u64) -> Result<u64> {
    a.checked_add(b).ok_or(Error::Overflow("homology rank"))
}

/// Rank of `H_1(X; Wh_K(F))` for `X` with Betti numbers `b0`, `b2`.
pub fn wh_h1_rank(b0: u64, b2: u64, spec: &GroupSpec) -> Result<u64> {
    let wh = checked_mul(b0, wh1_rank(spec)?)?;
    let k = checked_mul(b2, k_minus_one_profile(spec)?.rank)?;
    checked_add(wh, k)
}

pub fn wh_h1_fixed_dim(
    b0: u64,
    b2: u64,
    spec: &GroupSpec,
    epsilon: Epsilon,
) -> Result<WhH1Profile> {
    wh_h1_fixed_dim_with(b0, b2, spec, epsilon, SignConvention::default())
}

pub fn wh_h1_fixed_dim_with(
    b0: u64,
    b2: u64,
    spec: &GroupSpec,
    epsilon: Epsilon,
    convention: SignConvention,
) -> Result<WhH1Profile> {
    if !spec.is_odd() {
        return Err(Error::domain(format!(
            "eigenspaces of H_1(X; Wh) need odd group order, got {}",
            spec.m()
        )));
    }
    let wh_rank = wh1_rank(spec)?;
    let k = k_minus_one_profile(spec)?;
    let eigen = k
        .eigenspaces
        .ok_or_else(|| Error::Inconsistent("odd m without K_-1 eigenspaces".into()))?;
    // tau_1 is -1 on Wh_1(G); on the K_-1 quotient it is -tau_-1 or tau_-1
    let (k_plus_tau1, k_minus_tau1) = match convention {
        SignConvention::NegatedKMinusOne => (eigen.minus, eigen.plus),
        SignConvention::Direct => (eigen.plus, eigen.minus),
    };
    let wh_part_rank = checked_mul(b0, wh_rank)?;
    let k_minus_one_part_rank = checked_mul(b2, k.rank)?;
    let dim_fixed = match epsilon {
        Epsilon::Plus => checked_mul(b2, k_plus_tau1)?,
        Epsilon::Minus => checked_add(wh_part_rank, checked_mul(b2, k_minus_tau1)?)?,
    };
    let rank = checked_add(wh_part_rank, k_minus_one_part_rank)?;
    Ok(WhH1Profile {
        m: spec.m(),
        epsilon,
        rank,
        dim_fixed,
        wh_part_rank,
        k_minus_one_part_rank,
        convention,
    })
}

/// Settles `b_2` from a direct value, a complex, or both (which must agree).
pub fn resolve_b2(b2: Option<u64>, complex: Option<&ChainComplexData>) -> Result<u64> {
    let from_complex = complex.map(betti).transpose()?.map(|b| b.get(2));
    match (b2, from_complex) {
        (Some(a), Some(b)) if a != b => Err(Error::domain(format!(
            "b2 = {a} was given but the complex has b2 = {b}"
        ))),
        (Some(a), _) => Ok(a),
        (None, Some(b)) => Ok(b),
        (None, None) => Err(Error::domain("b2 needs a value or a complex")),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(m: u64) -> GroupSpec {
        GroupSpec::new(m).unwrap()
    }

    #[test]
    fn rank_examples() {
        assert_eq!(wh_h1_rank(1, 0, &spec(5)).unwrap(), 1);
        assert_eq!(wh_h1_rank(1, 1, &spec(33)).unwrap(), 15);
        for m in [1, 4, 33, 64] {
            assert_eq!(wh_h1_rank(0, 0, &spec(m)).unwrap(), 0);
        }
    }

    #[test]
    fn fixed_dim_examples() {
        let p = wh_h1_fixed_dim(1, 1, &spec(33), Epsilon::Minus).unwrap();
        assert_eq!(p.dim_fixed, 14);
        assert_eq!(
            (p.wh_part_rank, p.k_minus_one_part_rank, p.rank),
            (13, 2, 15)
        );
        assert_eq!(
            wh_h1_fixed_dim(1, 1, &spec(33), Epsilon::Plus)
                .unwrap()
                .dim_fixed,
            1
        );
        assert_eq!(
            wh_h1_fixed_dim(1, 1, &spec(15), Epsilon::Plus)
                .unwrap()
                .dim_fixed,
            0
        );
        assert!(matches!(
            wh_h1_fixed_dim(1, 1, &spec(12), Epsilon::Plus),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn direct_convention_swaps_the_k_part() {
        let s = spec(15);
        let plus = wh_h1_fixed_dim_with(1, 2, &s, Epsilon::Plus, SignConvention::Direct).unwrap();
        assert_eq!(plus.dim_fixed, 2);
        let minus = wh_h1_fixed_dim_with(1, 2, &s, Epsilon::Minus, SignConvention::Direct).unwrap();
        assert_eq!(minus.dim_fixed, plus.wh_part_rank);
    }

    #[test]
    fn epsilon_from_dimension() {
        assert_eq!(Epsilon::from_dimension(3), Epsilon::Plus);
        assert_eq!(Epsilon::from_dimension(4), Epsilon::Minus);
        assert!(Epsilon::from_sign(0).is_err());
        assert_eq!(serde_json::to_string(&Epsilon::Minus).unwrap(), "-1");
    }

    #[test]
    fn b2_resolution() {
        let sphere = ChainComplexData::from_facets(&[
            vec![0, 1, 2],
            vec![0, 1, 3],
            vec![0, 2, 3],
            vec![1, 2, 3],
        ])
        .unwrap();
        assert_eq!(resolve_b2(None, Some(&sphere)).unwrap(), 1);
        assert_eq!(resolve_b2(Some(1), Some(&sphere)).unwrap(), 1);
        assert!(resolve_b2(Some(2), Some(&sphere)).is_err());
        assert_eq!(resolve_b2(Some(3), None).unwrap(), 3);
        assert!(resolve_b2(None, None).is_err());
    }
}
