//! Images `Gamma_K` of Galois groups of `K(zeta_m)/K` inside `(Z/m)^x`, their orbits
//! on `Z/m` (which index the irreducible `K`-representations of `Z/m`), and the action
//! of duality `x -> -x` on those orbits.

use std::collections::{BTreeSet, VecDeque};

use num_integer::Integer;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::numtheory::{crt_pair, is_prime, mul_mod, GroupSpec};

/// A rational prime, checked by trial division.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(transparent)]
pub struct Prime(u64);

impl Prime {
    pub fn new(p: u64) -> Result<Self> {
        if is_prime(p) {
            Ok(Prime(p))
        } else {
            Err(Error::domain(format!("{p} is not prime")))
        }
    }

    pub fn get(self) -> u64 {
        self.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "field", content = "p")]
pub enum FieldTag {
    Rational,
    Real,
    Padic(Prime),
    Finite(Prime),
}

/// A subgroup of `(Z/m)^x`, stored as its sorted element list.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct UnitSubgroup {
    modulus: u64,
    elements: Vec<u64>,
    generators: Vec<u64>,
}

impl UnitSubgroup {
    /// Closure of `generators` under multiplication mod `modulus`.
    pub fn generated_by(modulus: u64, generators: &[u64]) -> Result<Self> {
        crate::numtheory::check_range("modulus", modulus)?;
        let generators: Vec<u64> = generators.iter().map(|g| g % modulus).collect();
        if let Some(g) = generators.iter().find(|g| g.gcd(&modulus) != 1) {
            return Err(Error::domain(format!("{g} is not a unit modulo {modulus}")));
        }
        let one = 1 % modulus;
        let mut seen = BTreeSet::from([one]);
        let mut queue = VecDeque::from([one]);
        while let Some(x) = queue.pop_front() {
            for &g in &generators {
                let y = mul_mod(x, g, modulus)?;
                if seen.insert(y) {
                    queue.push_back(y);
                }
            }
        }
        Ok(UnitSubgroup {
            modulus,
            elements: seen.into_iter().collect(),
            generators,
        })
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn elements(&self) -> &[u64] {
        &self.elements
    }

    pub fn generators(&self) -> &[u64] {
        &self.generators
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn contains(&self, x: u64) -> bool {
        self.elements.binary_search(&(x % self.modulus)).is_ok()
    }

    pub fn contains_minus_one(&self) -> bool {
        self.contains(self.modulus - 1)
    }
}

/// Generators of `(Z/q^r)^x` for a prime power.
fn unit_group_generators(q: u64, r: u32) -> Result<Vec<u64>> {
    let n = q.pow(r);
    if q == 2 {
        return Ok(match r {
            0 | 1 => vec![],
            2 => vec![3],
            _ => vec![n - 1, 5],
        });
    }
    // odd prime powers are cyclic; a primitive root mod q^2 is one mod every q^r
    let order = (q - 1) * q.pow(r - 1);
    let phi_factors = crate::numtheory::factorize(order)?;
    for g in 2..n {
        if g % q == 0 {
            continue;
        }
        let mut primitive = true;
        for &(f, _) in &phi_factors {
            if crate::numtheory::pow_mod(g, order / f, n)? == 1 {
                primitive = false;
                break;
            }
        }
        if primitive {
            return Ok(vec![g]);
        }
    }
    Err(Error::Inconsistent(format!("no primitive root modulo {n}")))
}

/// `Gamma_K` as a subgroup of `(Z/m)^x`.
///
/// For `Finite(p)` the caller passes the prime-to-`p` group `Z/m_p`; `p | m` is
/// rejected.
pub fn gamma_subgroup(spec: &GroupSpec, field: FieldTag) -> Result<UnitSubgroup> {
    let m = spec.m();
    match field {
        FieldTag::Rational => {
            let mut gens = Vec::new();
            for &(q, r) in spec.factors() {
                let qr = q.pow(r);
                let rest = m / qr;
                for g in unit_group_generators(q, r)? {
                    gens.push(crt_pair(g, qr, 1, rest)?);
                }
            }
            UnitSubgroup::generated_by(m, &gens)
        }
        FieldTag::Real => UnitSubgroup::generated_by(m, &[m - 1]),
        FieldTag::Padic(p) => {
            let p = p.get();
            let r = spec.exponent_of(p);
            if r == 0 {
                return Err(Error::domain(format!("{p} does not divide {m}")));
            }
            let pr = p.pow(r);
            let m_p = m / pr;
            // (Z/p^r)^x x <p mod m_p> under the CRT splitting
            let mut gens = Vec::new();
            for g in unit_group_generators(p, r)? {
                gens.push(crt_pair(g, pr, 1, m_p)?);
            }
            gens.push(crt_pair(1, pr, p % m_p, m_p)?);
            UnitSubgroup::generated_by(m, &gens)
        }
        FieldTag::Finite(p) => {
            let p = p.get();
            if m % p == 0 {
                return Err(Error::domain(format!(
                    "residue field F_{p} needs the prime-to-{p} part of {m}"
                )));
            }
            UnitSubgroup::generated_by(m, &[p])
        }
    }
}

/// Partition of `Z/m` into orbits of a unit subgroup acting by multiplication.
/// Blocks are sorted internally and ordered by least element.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OrbitPartition {
    modulus: u64,
    blocks: Vec<Vec<u64>>,
}

impl OrbitPartition {
    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn blocks(&self) -> &[Vec<u64>] {
        &self.blocks
    }

    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    /// Index of the block containing `x`.
    pub fn block_of(&self, x: u64) -> usize {
        let x = x % self.modulus;
        self.blocks
            .iter()
            .position(|b| b.binary_search(&x).is_ok())
            .expect("blocks cover Z/m")
    }
}

/// Orbits of `gamma` on `Z/m`.
pub fn gamma_orbits(spec: &GroupSpec, gamma: &UnitSubgroup) -> Result<OrbitPartition> {
    let m = spec.m();
    if gamma.modulus() != m {
        return Err(Error::domain(format!(
            "subgroup lives modulo {}, not {m}",
            gamma.modulus()
        )));
    }
    let mut label = vec![usize::MAX; m as usize];
    let mut blocks: Vec<Vec<u64>> = Vec::new();
    for x in 0..m {
        if label[x as usize] != usize::MAX {
            continue;
        }
        let id = blocks.len();
        let mut block = Vec::new();
        for &g in gamma.elements() {
            let y = mul_mod(x, g, m)?;
            if label[y as usize] == usize::MAX {
                label[y as usize] = id;
                block.push(y);
            }
        }
        block.sort_unstable();
        blocks.push(block);
    }
    Ok(OrbitPartition { modulus: m, blocks })
}

/// Number of orbits of `<generators>` on `Z/m`, via union-find over the generators.
/// Used where only the count matters.
pub fn orbit_count(m: u64, generators: &[u64]) -> Result<usize> {
    let n = m as usize;
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    let mut count = n;
    for &g in generators {
        for x in 0..m {
            let y = mul_mod(x, g, m)? as usize;
            let (a, b) = (find(&mut parent, x as usize), find(&mut parent, y));
            if a != b {
                parent[a] = b;
                count -= 1;
            }
        }
    }
    Ok(count)
}

/// Whether `-1` lies in `<p> <= (Z/q)^x`, by scanning the powers of `p` mod `q`.
pub fn minus_one_in_cyclic(p: u64, q: u64) -> Result<bool> {
    if p % q == 0 {
        return Err(Error::domain(format!("{p} is not a unit modulo {q}")));
    }
    let target = (q - 1) % q;
    let mut x = p % q;
    loop {
        if x == target {
            return Ok(true);
        }
        if x == 1 % q {
            return Ok(false);
        }
        x = mul_mod(x, p, q)?;
    }
}

/// Prime-by-prime criterion for `-1 in Gamma_{Q_p}`: for every prime `q | m` other
/// than `p`, the cyclic group `<p> <= (Z/q)^x` contains `-1`.
///
/// This tests each CRT component separately. The subgroup `<p mod m_p>` can miss `-1`
/// even when every component contains it (`m = 105`, `p = 3`); compare with
/// [`UnitSubgroup::contains_minus_one`] on [`gamma_subgroup`] for the direct answer.
pub fn contains_minus_one(spec: &GroupSpec, p: u64) -> Result<bool> {
    if spec.exponent_of(p) == 0 {
        return Err(Error::domain(format!("{p} does not divide {}", spec.m())));
    }
    for q in spec.primes().filter(|&q| q != p) {
        if !minus_one_in_cyclic(p, q)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// How negation permutes the blocks of an orbit partition.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DualPairing {
    /// Indices of blocks mapped to themselves.
    pub fixed_blocks: Vec<usize>,
    /// Index pairs `(i, j)`, `i < j`, swapped by negation.
    pub swapped_pairs: Vec<(usize, usize)>,
    /// The fixed blocks made of units of `Z/m`. Empty exactly when `-1` lies
    /// outside the acting subgroup (odd `m`); non-unit blocks can still be fixed
    /// because the subgroup may contain `-1` modulo a proper divisor.
    pub fixed_unit_blocks: Vec<usize>,
}

impl DualPairing {
    /// Fixed blocks other than `{0}`.
    pub fn fixed_nontrivial(&self) -> usize {
        self.fixed_blocks.iter().filter(|&&i| i != 0).count()
    }
}

pub fn dual_pairing(orbits: &OrbitPartition) -> DualPairing {
    let m = orbits.modulus();
    let mut fixed_blocks = Vec::new();
    let mut swapped_pairs = Vec::new();
    let mut fixed_unit_blocks = Vec::new();
    for (i, block) in orbits.blocks().iter().enumerate() {
        let j = orbits.block_of((m - block[0] % m) % m);
        match i.cmp(&j) {
            std::cmp::Ordering::Equal => {
                fixed_blocks.push(i);
                if block[0].gcd(&m) == 1 {
                    fixed_unit_blocks.push(i);
                }
            }
            std::cmp::Ordering::Less => swapped_pairs.push((i, j)),
            std::cmp::Ordering::Greater => {}
        }
    }
    DualPairing {
        fixed_blocks,
        swapped_pairs,
        fixed_unit_blocks,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numtheory::{divisors, mult_order, phi};

    fn spec(m: u64) -> GroupSpec {
        GroupSpec::new(m).unwrap()
    }

    fn padic(p: u64) -> FieldTag {
        FieldTag::Padic(Prime::new(p).unwrap())
    }

    #[test]
    fn subgroup_examples() {
        let g = gamma_subgroup(&spec(5), FieldTag::Rational).unwrap();
        assert_eq!(g.elements(), &[1, 2, 3, 4]);
        let g = gamma_subgroup(&spec(5), FieldTag::Real).unwrap();
        assert_eq!(g.elements(), &[1, 4]);
        let g = gamma_subgroup(&spec(33), padic(3)).unwrap();
        assert_eq!(g.order(), 10);
        let mod11: BTreeSet<u64> = g.elements().iter().map(|x| x % 11).collect();
        assert_eq!(mod11, BTreeSet::from([1, 3, 4, 5, 9]));
        let mod3: BTreeSet<u64> = g.elements().iter().map(|x| x % 3).collect();
        assert_eq!(mod3, BTreeSet::from([1, 2]));
        assert!(gamma_subgroup(&spec(10), padic(3)).is_err());
        let f = FieldTag::Finite(Prime::new(3).unwrap());
        assert_eq!(
            gamma_subgroup(&spec(11), f).unwrap().elements(),
            &[1, 3, 4, 5, 9]
        );
        assert!(gamma_subgroup(&spec(33), f).is_err());
        assert!(Prime::new(9).is_err());
    }

    #[test]
    fn rational_gamma_is_full_unit_group() {
        for m in 1..=300u64 {
            let g = gamma_subgroup(&spec(m), FieldTag::Rational).unwrap();
            assert_eq!(g.order() as u64, phi(m).unwrap(), "m={m}");
        }
    }

    #[test]
    fn orbit_examples() {
        let s = spec(5);
        let full = gamma_subgroup(&s, FieldTag::Rational).unwrap();
        let o = gamma_orbits(&s, &full).unwrap();
        assert_eq!(o.blocks(), &[vec![0], vec![1, 2, 3, 4]]);
        let real = gamma_subgroup(&s, FieldTag::Real).unwrap();
        let o = gamma_orbits(&s, &real).unwrap();
        assert_eq!(o.blocks(), &[vec![0], vec![1, 4], vec![2, 3]]);
        let s = spec(33);
        let g = gamma_subgroup(&s, padic(3)).unwrap();
        assert_eq!(gamma_orbits(&s, &g).unwrap().len(), 6);
        assert!(gamma_orbits(&spec(7), &g).is_err());
    }

    #[test]
    fn orbit_blocks_partition_and_divide_order() {
        for m in 1..=1000u64 {
            let s = spec(m);
            let mut fields = vec![FieldTag::Rational, FieldTag::Real];
            fields.extend(s.primes().map(padic));
            for field in fields {
                let g = gamma_subgroup(&s, field).unwrap();
                assert_eq!(phi(m).unwrap() % g.order() as u64, 0);
                let o = gamma_orbits(&s, &g).unwrap();
                let total: usize = o.blocks().iter().map(Vec::len).sum();
                assert_eq!(total as u64, m);
                assert_eq!(o.blocks()[0], vec![0]);
                assert!(o.blocks().iter().all(|b| g.order() % b.len() == 0));
                assert_eq!(orbit_count(m, g.generators()).unwrap(), o.len(), "m={m}");
            }
        }
    }

    #[test]
    fn padic_orbit_count_matches_product_formula() {
        for m in 2..=1000u64 {
            let s = spec(m);
            for p in s.primes() {
                let r = s.exponent_of(p) as u64;
                let m_p = s.prime_to_part(p);
                let per_level: u64 = divisors(m_p)
                    .unwrap()
                    .into_iter()
                    .map(|e| phi(e).unwrap() / mult_order(p, e).unwrap())
                    .sum();
                let g = gamma_subgroup(&s, padic(p)).unwrap();
                assert_eq!(
                    gamma_orbits(&s, &g).unwrap().len() as u64,
                    (r + 1) * per_level
                );
            }
        }
    }

    #[test]
    fn minus_one_examples() {
        assert!(contains_minus_one(&spec(27), 3).unwrap());
        assert!(contains_minus_one(&spec(15), 3).unwrap());
        assert!(!contains_minus_one(&spec(33), 3).unwrap());
        assert!(contains_minus_one(&spec(33), 5).is_err());
        for (m, p) in [(27, 3), (15, 3), (33, 3)] {
            let direct = gamma_subgroup(&spec(m), padic(p))
                .unwrap()
                .contains_minus_one();
            assert_eq!(direct, contains_minus_one(&spec(m), p).unwrap());
        }
    }

    #[test]
    fn prime_by_prime_criterion_misses_common_exponent() {
        // 3 has order 4 mod 5 and 6 mod 7: each component reaches -1, but at exponents
        // 2 mod 4 and 3 mod 6, which no single exponent satisfies.
        let s = spec(105);
        assert!(contains_minus_one(&s, 3).unwrap());
        assert!(!gamma_subgroup(&s, padic(3)).unwrap().contains_minus_one());
    }

    #[test]
    fn pairing_examples() {
        for m in [5u64, 9, 12, 33] {
            let s = spec(m);
            let g = gamma_subgroup(&s, FieldTag::Rational).unwrap();
            let o = gamma_orbits(&s, &g).unwrap();
            let pairing = dual_pairing(&o);
            assert_eq!(pairing.fixed_blocks.len(), o.len());
            assert!(pairing.swapped_pairs.is_empty());
        }
        let s = spec(5);
        let trivial = UnitSubgroup::generated_by(5, &[]).unwrap();
        let o = gamma_orbits(&s, &trivial).unwrap();
        let pairing = dual_pairing(&o);
        assert_eq!(pairing.fixed_blocks, vec![0]);
        assert_eq!(pairing.swapped_pairs, vec![(1, 4), (2, 3)]);

        let s = spec(33);
        let o = gamma_orbits(&s, &gamma_subgroup(&s, padic(3)).unwrap()).unwrap();
        let pairing = dual_pairing(&o);
        // {11, 22} is fixed: Gamma surjects onto (Z/3)^x; the unit blocks swap
        assert_eq!(o.blocks()[pairing.fixed_blocks[1]], vec![11, 22]);
        assert_eq!(pairing.fixed_nontrivial(), 1);
        assert!(pairing.fixed_unit_blocks.is_empty());
        assert_eq!(pairing.swapped_pairs.len(), 2);
    }

    #[test]
    fn negation_acts_freely_when_minus_one_missing() {
        for m in (3..=1000u64).step_by(2) {
            let s = spec(m);
            for p in s.primes() {
                let g = gamma_subgroup(&s, padic(p)).unwrap();
                if !g.contains_minus_one() {
                    let o = gamma_orbits(&s, &g).unwrap();
                    let pairing = dual_pairing(&o);
                    assert!(pairing.fixed_unit_blocks.is_empty(), "m={m} p={p}");
                    let units = o.blocks().iter().filter(|b| b[0].gcd(&m) == 1).count();
                    assert_eq!(units % 2, 0);
                }
            }
        }
    }
}
