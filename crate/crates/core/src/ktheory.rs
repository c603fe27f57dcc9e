//! Rational ranks and duality eigenspaces of `K_{-1}(Z[Z/m])` and `Wh_1(Z/m)`.
//!
//! Two independent routes give the rank of `K_{-1}`:
//!
//! * [`carter_ledger`] reads it off Carter's resolution
//!   `0 -> K_0(Z) -> K_0(Q[G]) + sum_p K_0(Z_p[G]) -> sum_p K_0(Q_p[G]) -> K_{-1}(Z[G]) -> 0`
//!   where every rank is an orbit count of a Galois image on `Z/m`;
//! * [`localized_piece`] computes the part of `K_{-1}(Z[Z/d])` not induced from a
//!   proper subgroup, and [`k_minus_one_report`] sums these over `d | m`.
//!
//! The per-divisor route also carries the involution, so it is the one that
//! produces eigenspace dimensions; the ledger checks its rank.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::galoisrep::{gamma_subgroup, minus_one_in_cyclic, orbit_count, FieldTag, Prime};
use crate::numtheory::{mult_order, phi, GroupSpec};

/// Ranks for the Carter resolution at one prime `p | m`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LocalRanks {
    pub p: u64,
    /// Simple components of `Q_p[G]`.
    pub r_qp: u64,
    /// Simple components of `F_p[Z/m_p]`, i.e. the rank of `K_0(Z_p[G])`.
    pub r_fp: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CarterLedger {
    pub m: u64,
    pub r_q: u64,
    pub local: Vec<LocalRanks>,
    pub rank_k_minus_1: u64,
}

pub fn carter_ledger(spec: &GroupSpec) -> Result<CarterLedger> {
    let m = spec.m();
    let r_q = spec.divisors().len() as u64;
    let mut local = Vec::new();
    // 1 - r_Q + sum_p (r_Qp - r_Fp)
    let mut rank: i64 = 1 - r_q as i64;
    for p in spec.primes() {
        let prime = Prime::new(p)?;
        let gamma = gamma_subgroup(spec, FieldTag::Padic(prime))?;
        let r_qp = orbit_count(m, gamma.generators())? as u64;
        let reduced = spec.reduced(p);
        let frobenius = gamma_subgroup(&reduced, FieldTag::Finite(prime))?;
        let r_fp = orbit_count(reduced.m(), frobenius.generators())? as u64;
        rank += r_qp as i64 - r_fp as i64;
        local.push(LocalRanks { p, r_qp, r_fp });
    }
    let rank_k_minus_1 = u64::try_from(rank).map_err(|_| {
        Error::Inconsistent(format!(
            "Carter resolution gives negative rank {rank} for m={m}"
        ))
    })?;
    Ok(CarterLedger {
        m,
        r_q,
        local,
        rank_k_minus_1,
    })
}

/// How duality acts on the field components of `Q_p (x) Q(zeta_d)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum ModuleType {
    /// Components are swapped in pairs: a free `Z[Z/2]`-module.
    Free,
    /// Every component is fixed.
    Trivial,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PieceComponent {
    pub p: u64,
    /// Number of fields in `Q_p (x) Q(zeta_d)`: the index of `<p>` in `(Z/d_p)^x`.
    pub s: u64,
    pub module_type: ModuleType,
}

/// The `q(Z/d, 0)`-localized part of rational `K_{-1}(Z[Z/d])`: the cokernel of
/// `K_0(Q(zeta_d)) -> sum_{p | d} K_0(Q_p (x) Q(zeta_d))`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LocalizedPiece {
    pub d: u64,
    pub components: Vec<PieceComponent>,
    pub rank: u64,
    pub dim_plus: u64,
    pub dim_minus: u64,
}

pub fn localized_piece(d: &GroupSpec) -> Result<LocalizedPiece> {
    if d.m() == 1 {
        return Ok(LocalizedPiece {
            d: 1,
            components: Vec::new(),
            rank: 0,
            dim_plus: 0,
            dim_minus: 0,
        });
    }
    let mut components = Vec::new();
    for p in d.primes() {
        let d_p = d.prime_to_part(p);
        let s = phi(d_p)? / mult_order(p, d_p)?;
        let mut others = d.primes().filter(|&q| q != p).peekable();
        let mut free = others.peek().is_some();
        for q in others {
            if minus_one_in_cyclic(p, q)? {
                free = false;
                break;
            }
        }
        let module_type = if free {
            ModuleType::Free
        } else {
            ModuleType::Trivial
        };
        components.push(PieceComponent { p, s, module_type });
    }
    let total: u64 = components.iter().map(|c| c.s).sum();
    let rank = total - 1;
    // the subtracted K_0(Q(zeta_d)) class is self-dual, so it comes out of the +1 part
    let dim_minus: u64 = components
        .iter()
        .filter(|c| c.module_type == ModuleType::Free)
        .map(|c| c.s / 2)
        .sum();
    let dim_plus = rank.checked_sub(dim_minus).ok_or_else(|| {
        Error::Inconsistent(format!(
            "piece d={} has more anti-invariants than rank",
            d.m()
        ))
    })?;
    Ok(LocalizedPiece {
        d: d.m(),
        components,
        rank,
        dim_plus,
        dim_minus,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Eigenspaces {
    pub plus: u64,
    pub minus: u64,
}

/// A rationalized abelian group with involution. `eigenspaces` is `None` when the
/// splitting is not asserted (even group order for `K_{-1}`).
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct InvolutionProfile {
    pub label: &'static str,
    pub rank: u64,
    pub eigenspaces: Option<Eigenspaces>,
}

impl InvolutionProfile {
    fn new(label: &'static str, rank: u64, eigenspaces: Option<Eigenspaces>) -> Result<Self> {
        if let Some(e) = eigenspaces {
            if e.plus + e.minus != rank {
                return Err(Error::Inconsistent(format!(
                    "{label}: eigenspaces {} + {} do not add up to rank {rank}",
                    e.plus, e.minus
                )));
            }
        }
        Ok(InvolutionProfile {
            label,
            rank,
            eigenspaces,
        })
    }

    pub fn dim_plus(&self) -> Option<u64> {
        self.eigenspaces.map(|e| e.plus)
    }

    pub fn dim_minus(&self) -> Option<u64> {
        self.eigenspaces.map(|e| e.minus)
    }
}

pub const K_MINUS_ONE_LABEL: &str = "K_-1(Z[G])_(0) with tau_-1";
pub const WH1_LABEL: &str = "Wh_1(G)_(0) with tau_1";

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct KMinusOneReport {
    pub profile: InvolutionProfile,
    pub pieces: Vec<LocalizedPiece>,
}

/// Sums the localized pieces over all divisors of `m` and checks the total rank
/// against [`carter_ledger`].
pub fn k_minus_one_report(spec: &GroupSpec) -> Result<KMinusOneReport> {
    let pieces = spec
        .divisors()
        .into_iter()
        .map(|d| localized_piece(&GroupSpec::new(d)?))
        .collect::<Result<Vec<_>>>()?;
    let rank: u64 = pieces.iter().map(|p| p.rank).sum();
    let ledger = carter_ledger(spec)?;
    if ledger.rank_k_minus_1 != rank {
        return Err(Error::Inconsistent(format!(
            "m={}: Carter ledger rank {} but localized pieces sum to {rank}",
            spec.m(),
            ledger.rank_k_minus_1
        )));
    }
    let eigenspaces = spec.is_odd().then(|| {
        let minus: u64 = pieces.iter().map(|p| p.dim_minus).sum();
        Eigenspaces {
            plus: rank - minus,
            minus,
        }
    });
    Ok(KMinusOneReport {
        profile: InvolutionProfile::new(K_MINUS_ONE_LABEL, rank, eigenspaces)?,
        pieces,
    })
}

pub fn k_minus_one_profile(spec: &GroupSpec) -> Result<InvolutionProfile> {
    k_minus_one_report(spec).map(|r| r.profile)
}

/// Rank of `Wh_1(Z/m)`: real minus rational irreducible representations.
pub fn wh1_rank(spec: &GroupSpec) -> Result<u64> {
    let m = spec.m();
    let real = gamma_subgroup(spec, FieldTag::Real)?;
    let rational = gamma_subgroup(spec, FieldTag::Rational)?;
    let r_real = orbit_count(m, real.generators())? as u64;
    let r_rational = orbit_count(m, rational.generators())? as u64;
    Ok(r_real - r_rational)
}

/// `tau_1` on `Wh_1(Z/m)` rationally; it is multiplication by `-1` for odd `m`.
pub fn wh1_profile(spec: &GroupSpec) -> Result<InvolutionProfile> {
    if !spec.is_odd() {
        return Err(Error::domain(format!(
            "the involution on Wh_1(Z/{}) is only determined for odd order",
            spec.m()
        )));
    }
    let rank = wh1_rank(spec)?;
    InvolutionProfile::new(
        WH1_LABEL,
        rank,
        Some(Eigenspaces {
            plus: 0,
            minus: rank,
        }),
    )
}

/// Least ordered pair of distinct primes `(p_i, p_j)` dividing `m` with `p_i` of odd
/// order modulo `p_j`.
pub fn witness_pair(spec: &GroupSpec) -> Result<Option<(u64, u64)>> {
    for pi in spec.primes() {
        for pj in spec.primes().filter(|&q| q != pi) {
            if mult_order(pi, pj)? % 2 == 1 {
                return Ok(Some((pi, pj)));
            }
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(m: u64) -> GroupSpec {
        GroupSpec::new(m).unwrap()
    }

    #[test]
    fn ledger_examples() {
        assert_eq!(carter_ledger(&spec(1)).unwrap().rank_k_minus_1, 0);
        let l = carter_ledger(&spec(5)).unwrap();
        assert_eq!((l.r_q, l.rank_k_minus_1), (2, 0));
        assert_eq!(
            l.local,
            vec![LocalRanks {
                p: 5,
                r_qp: 2,
                r_fp: 1
            }]
        );
        let l = carter_ledger(&spec(33)).unwrap();
        assert_eq!(l.r_q, 4);
        assert_eq!(
            l.local,
            vec![
                LocalRanks {
                    p: 3,
                    r_qp: 6,
                    r_fp: 3
                },
                LocalRanks {
                    p: 11,
                    r_qp: 4,
                    r_fp: 2
                }
            ]
        );
        assert_eq!(l.rank_k_minus_1, 2);
    }

    #[test]
    fn piece_examples() {
        let p = localized_piece(&spec(1)).unwrap();
        assert_eq!((p.rank, p.dim_plus, p.dim_minus), (0, 0, 0));

        let p = localized_piece(&spec(15)).unwrap();
        assert_eq!(
            p.components,
            vec![
                PieceComponent {
                    p: 3,
                    s: 1,
                    module_type: ModuleType::Trivial
                },
                PieceComponent {
                    p: 5,
                    s: 1,
                    module_type: ModuleType::Trivial
                }
            ]
        );
        assert_eq!((p.rank, p.dim_plus, p.dim_minus), (1, 1, 0));

        let p = localized_piece(&spec(33)).unwrap();
        assert_eq!(
            p.components,
            vec![
                PieceComponent {
                    p: 3,
                    s: 2,
                    module_type: ModuleType::Free
                },
                PieceComponent {
                    p: 11,
                    s: 1,
                    module_type: ModuleType::Trivial
                }
            ]
        );
        assert_eq!((p.rank, p.dim_plus, p.dim_minus), (2, 1, 1));

        // prime powers: one field, vacuous freeness condition
        let p = localized_piece(&spec(27)).unwrap();
        assert_eq!(p.components[0].module_type, ModuleType::Trivial);
        assert_eq!(p.rank, 0);
    }

    #[test]
    fn profile_examples() {
        for p in [3u64, 5, 7, 97] {
            let prof = k_minus_one_profile(&spec(p)).unwrap();
            assert_eq!(
                (prof.rank, prof.dim_plus(), prof.dim_minus()),
                (0, Some(0), Some(0))
            );
        }
        let prof = k_minus_one_profile(&spec(15)).unwrap();
        assert_eq!(
            (prof.rank, prof.dim_plus(), prof.dim_minus()),
            (1, Some(1), Some(0))
        );
        let prof = k_minus_one_profile(&spec(33)).unwrap();
        assert_eq!(
            (prof.rank, prof.dim_plus(), prof.dim_minus()),
            (2, Some(1), Some(1))
        );
        let prof = k_minus_one_profile(&spec(30)).unwrap();
        assert!(prof.eigenspaces.is_none());
    }

    #[test]
    fn wh1_examples() {
        assert_eq!(wh1_rank(&spec(1)).unwrap(), 0);
        assert_eq!(wh1_rank(&spec(5)).unwrap(), 1);
        assert_eq!(wh1_rank(&spec(33)).unwrap(), 13);
        let prof = wh1_profile(&spec(5)).unwrap();
        assert_eq!(
            (prof.rank, prof.dim_plus(), prof.dim_minus()),
            (1, Some(0), Some(1))
        );
        let prof = wh1_profile(&spec(3)).unwrap();
        assert_eq!(prof.rank, 0);
        let prof = wh1_profile(&spec(33)).unwrap();
        assert_eq!(prof.dim_minus(), Some(13));
        assert!(matches!(wh1_profile(&spec(10)), Err(Error::Domain(_))));
    }

    #[test]
    fn wh1_rank_closed_form_for_odd_m() {
        for m in (1..=999u64).step_by(2) {
            let s = spec(m);
            assert_eq!(
                wh1_rank(&s).unwrap(),
                (m + 1) / 2 - s.divisors().len() as u64
            );
        }
    }

    #[test]
    fn witness_examples() {
        assert_eq!(witness_pair(&spec(15)).unwrap(), None);
        assert_eq!(witness_pair(&spec(21)).unwrap(), Some((7, 3)));
        assert_eq!(witness_pair(&spec(125)).unwrap(), None);
        assert_eq!(witness_pair(&spec(33)).unwrap(), Some((3, 11)));
    }

    #[test]
    fn free_components_have_even_count() {
        for m in (1..=1000u64).step_by(2) {
            let p = localized_piece(&spec(m)).unwrap();
            for c in p
                .components
                .iter()
                .filter(|c| c.module_type == ModuleType::Free)
            {
                assert_eq!(c.s % 2, 0, "d={m} p={}", c.p);
            }
        }
    }
}
