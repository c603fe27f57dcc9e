//! Arithmetic side of the criterion for infinitely many stably trivial
//! `G`-smoothings of a semifree `G`-manifold `X` with fixed component `M`.
//!
//! The geometric hypotheses cannot be checked here and enter as attestations. The
//! verdict only reaches a positive case when every attestation holds.

use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::homology::{wh_h1_fixed_dim_with, Epsilon, SignConvention};
use crate::ktheory::witness_pair;
use crate::numtheory::GroupSpec;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct HypothesisAttestation {
    /// `G` is cyclic of odd order at least 5.
    pub group_cyclic_odd_order_ge5: bool,
    /// `M` is closed, aspherical and `pi_1`-injective.
    pub fixed_component_closed_aspherical_pi1_injective: bool,
    /// `pi_1 M` and `pi_1 X` satisfy the K-theoretic Farrell-Jones conjecture.
    pub farrell_jones_holds: bool,
    /// Every component of `X^G` has codimension at least 2.
    pub codim_at_least_2: bool,
    /// `dim M`.
    pub manifold_dim: u64,
    /// `rank H_2(M; Q)`, standing in for `H^2(M; Q)` by duality on closed oriented `M`.
    pub b2: u64,
}

impl HypothesisAttestation {
    /// All four attestation flags set.
    pub fn all(manifold_dim: u64, b2: u64) -> Self {
        HypothesisAttestation {
            group_cyclic_odd_order_ge5: true,
            fixed_component_closed_aspherical_pi1_injective: true,
            farrell_jones_holds: true,
            codim_at_least_2: true,
            manifold_dim,
            b2,
        }
    }

    fn first_missing(&self) -> Option<&'static str> {
        [
            (
                self.group_cyclic_odd_order_ge5,
                "cyclic group of odd order >= 5",
            ),
            (
                self.fixed_component_closed_aspherical_pi1_injective,
                "fixed component closed, aspherical and pi_1-injective",
            ),
            (self.farrell_jones_holds, "Farrell-Jones conjecture"),
            (self.codim_at_least_2, "fixed set codimension >= 2"),
        ]
        .into_iter()
        .find(|(ok, _)| !ok)
        .map(|(_, name)| name)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", content = "detail", rename_all = "snake_case")]
pub enum InconclusiveReason {
    NotAttested(&'static str),
    EvenOrder,
    OrderBelowFive,
    VanishingSecondBetti,
    NoOddOrderPrimePair,
}

impl fmt::Display for InconclusiveReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            InconclusiveReason::NotAttested(what) => write!(f, "not attested: {what}"),
            InconclusiveReason::EvenOrder => f.write_str("even order"),
            InconclusiveReason::OrderBelowFive => f.write_str("order < 5"),
            InconclusiveReason::VanishingSecondBetti => f.write_str("H^2(M;Q) = 0"),
            InconclusiveReason::NoOddOrderPrimePair => f.write_str("no odd-order prime pair"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "case", rename_all = "snake_case")]
pub enum Outcome {
    /// `M` odd dimensional: smoothings from `H_0(M; Wh_1(G))`.
    Case1OddDim,
    /// `M` even dimensional with `H^2(M; Q) != 0` and a witness pair: smoothings from
    /// `H_2(M; K_{-1}(Z[G]))`.
    Case2EvenDim {
        witness: (u64, u64),
    },
    Inconclusive {
        reason: InconclusiveReason,
    },
}

impl Outcome {
    pub fn is_positive(&self) -> bool {
        !matches!(self, Outcome::Inconclusive { .. })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Verdict {
    pub m: u64,
    pub outcome: Outcome,
    /// Dimension of the fixed space of `epsilon * tau_1` on `H_1(M; Wh_K(F))` rationally
    /// with `b0 = 1`: a lower bound on independent directions of smoothings. `None` for
    /// even `m`.
    pub detected_rank: Option<u64>,
    pub epsilon: Epsilon,
    pub convention: SignConvention,
    pub attestation: HypothesisAttestation,
}

pub fn decide(spec: &GroupSpec, att: &HypothesisAttestation) -> Result<Verdict> {
    decide_with(spec, att, SignConvention::default())
}

pub fn decide_with(
    spec: &GroupSpec,
    att: &HypothesisAttestation,
    convention: SignConvention,
) -> Result<Verdict> {
    if att.manifold_dim == 0 {
        return Err(Error::domain("manifold dimension must be at least 1"));
    }
    let m = spec.m();
    let n = att.manifold_dim;
    let epsilon = Epsilon::from_dimension(n);
    let inconclusive = |reason| Outcome::Inconclusive { reason };
    let outcome = if let Some(flag) = att.first_missing() {
        inconclusive(InconclusiveReason::NotAttested(flag))
    } else if !spec.is_odd() {
        inconclusive(InconclusiveReason::EvenOrder)
    } else if m < 5 {
        inconclusive(InconclusiveReason::OrderBelowFive)
    } else if n % 2 == 1 {
        Outcome::Case1OddDim
    } else if att.b2 == 0 {
        inconclusive(InconclusiveReason::VanishingSecondBetti)
    } else {
        match witness_pair(spec)? {
            Some(witness) => Outcome::Case2EvenDim { witness },
            None => inconclusive(InconclusiveReason::NoOddOrderPrimePair),
        }
    };
    let detected_rank = if spec.is_odd() {
        Some(wh_h1_fixed_dim_with(1, att.b2, spec, epsilon, convention)?.dim_fixed)
    } else {
        None
    };
    Ok(Verdict {
        m,
        outcome,
        detected_rank,
        epsilon,
        convention,
        attestation: *att,
    })
}
