//! Integer and modular arithmetic on the desk scale (moduli up to `10^6`).
//!
//! Every routine is exact. Products go through checked 64-bit multiplication and
//! report [`Error::Overflow`] rather than wrapping.

mod poly;

pub use poly::{
    cyclotomic_integer, factor_count_oracle_fp, trial_division_factor_count, PolyOverFp,
};

use num_integer::Integer;
use serde::Serialize;

use crate::error::{Error, Result};

/// Largest modulus for which the crate guarantees exact results.
pub const MAX_MODULUS: u64 = 1_000_000;

pub(crate) fn check_range(what: &'static str, n: u64) -> Result<()> {
    if n == 0 {
        return Err(Error::domain(format!("{what} must be positive")));
    }
    if n > MAX_MODULUS {
        return Err(Error::OutOfRange {
            what,
            value: n,
            limit: MAX_MODULUS,
        });
    }
    Ok(())
}

pub(crate) fn mul_mod(a: u64, b: u64, n: u64) -> Result<u64> {
    a.checked_mul(b)
        .map(|x| x % n)
        .ok_or(Error::Overflow("modular multiplication"))
}

pub(crate) fn pow_mod(base: u64, mut exp: u64, n: u64) -> Result<u64> {
    if n == 1 {
        return Ok(0);
    }
    let mut result = 1;
    let mut b = base % n;
    while exp > 0 {
        if exp & 1 == 1 {
            result = mul_mod(result, b, n)?;
        }
        b = mul_mod(b, b, n)?;
        exp >>= 1;
    }
    Ok(result)
}

/// Trial-division primality test.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Prime factorization `n = prod p^e`, primes strictly increasing.
pub fn factorize(n: u64) -> Result<Vec<(u64, u32)>> {
    check_range("n", n)?;
    let mut rest = n;
    let mut factors = Vec::new();
    let mut d = 2;
    while d * d <= rest {
        if rest % d == 0 {
            let mut e = 0;
            while rest % d == 0 {
                rest /= d;
                e += 1;
            }
            factors.push((d, e));
        }
        d += 1;
    }
    if rest > 1 {
        factors.push((rest, 1));
    }
    Ok(factors)
}

/// Euler's totient.
pub fn phi(n: u64) -> Result<u64> {
    Ok(factorize(n)?
        .into_iter()
        .map(|(p, e)| (p - 1) * p.pow(e - 1))
        .product())
}

/// All positive divisors of `n` in ascending order.
pub fn divisors(n: u64) -> Result<Vec<u64>> {
    let mut divs = vec![1u64];
    for (p, e) in factorize(n)? {
        let mut next = Vec::with_capacity(divs.len() * (e as usize + 1));
        for &d in &divs {
            let mut q = d;
            for _ in 0..=e {
                next.push(q);
                q *= p;
            }
        }
        divs = next;
    }
    divs.sort_unstable();
    Ok(divs)
}

/// Order of `a` in `(Z/n)^x`.
///
/// Computed by stripping prime factors off `phi(n)`; the result is the least
/// `t > 0` with `a^t = 1 (mod n)`.
pub fn mult_order(a: u64, n: u64) -> Result<u64> {
    check_range("modulus", n)?;
    if a.gcd(&n) != 1 {
        return Err(Error::domain(format!("{a} is not a unit modulo {n}")));
    }
    if n == 1 {
        return Ok(1);
    }
    let mut t = phi(n)?;
    for (q, _) in factorize(t)? {
        while t % q == 0 && pow_mod(a, t / q, n)? == 1 {
            t /= q;
        }
    }
    Ok(t)
}

/// The unique `x mod m1*m2` with `x = a (mod m1)` and `x = b (mod m2)`, for coprime moduli.
pub(crate) fn crt_pair(a: u64, m1: u64, b: u64, m2: u64) -> Result<u64> {
    let g = (m1 as i64).extended_gcd(&(m2 as i64));
    if g.gcd != 1 {
        return Err(Error::domain(format!(
            "moduli {m1} and {m2} are not coprime"
        )));
    }
    let modulus = m1.checked_mul(m2).ok_or(Error::Overflow("CRT modulus"))?;
    // x = a + m1 * ((b - a) * inv(m1) mod m2)
    let inv = g.x.rem_euclid(m2 as i64) as u64;
    let diff = (b % m2 + m2 - a % m2) % m2;
    let k = mul_mod(diff, inv, m2)?;
    let x = (a % m1)
        .checked_add(m1.checked_mul(k).ok_or(Error::Overflow("CRT lift"))?)
        .ok_or(Error::Overflow("CRT lift"))?;
    Ok(x % modulus)
}

/// Number of irreducible factors of the `d`-th cyclotomic polynomial over `F_p`.
///
/// Each factor has degree `mult_order(p, d)`, so the count is `phi(d) / mult_order(p, d)`.
pub fn cyclotomic_factor_count_fp(d: u64, p: u64) -> Result<u64> {
    check_range("d", d)?;
    check_range("p", p)?;
    if !is_prime(p) {
        return Err(Error::domain(format!("{p} is not prime")));
    }
    if d % p == 0 {
        return Err(Error::domain(format!("{p} divides {d}")));
    }
    Ok(phi(d)? / mult_order(p, d)?)
}

/// Degree of `Q_p(zeta_m)` over `Q_p`: `t (p-1) p^(r-1)` where `m = p^r m_p` and
/// `t` is the order of `p` modulo `m_p`.
pub fn local_cyclotomic_degree(spec: &GroupSpec, p: u64) -> Result<u64> {
    let r = spec.exponent_of(p);
    if r == 0 {
        return Err(Error::domain(format!("{p} does not divide {}", spec.m())));
    }
    let t = mult_order(p, spec.prime_to_part(p))?;
    Ok(t * (p - 1) * p.pow(r - 1))
}

/// The cyclic group `Z/m` together with the prime factorization of `m`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GroupSpec {
    m: u64,
    factors: Vec<(u64, u32)>,
}

impl GroupSpec {
    pub fn new(m: u64) -> Result<Self> {
        let factors = factorize(m)?;
        debug_assert!(factors.iter().all(|&(p, _)| is_prime(p)));
        Ok(GroupSpec { m, factors })
    }

    pub fn m(&self) -> u64 {
        self.m
    }

    pub fn factors(&self) -> &[(u64, u32)] {
        &self.factors
    }

    pub fn primes(&self) -> impl Iterator<Item = u64> + '_ {
        self.factors.iter().map(|&(p, _)| p)
    }

    pub fn is_odd(&self) -> bool {
        self.m % 2 == 1
    }

    /// Exponent of `p` in `m` (zero when `p` does not divide `m`).
    pub fn exponent_of(&self, p: u64) -> u32 {
        self.factors
            .iter()
            .find(|&&(q, _)| q == p)
            .map_or(0, |&(_, e)| e)
    }

    /// `m_p`, the largest divisor of `m` prime to `p`.
    pub fn prime_to_part(&self, p: u64) -> u64 {
        self.factors
            .iter()
            .filter(|&&(q, _)| q != p)
            .map(|&(q, e)| q.pow(e))
            .product()
    }

    /// The group `Z/m_p`.
    pub fn reduced(&self, p: u64) -> GroupSpec {
        GroupSpec {
            m: self.prime_to_part(p),
            factors: self
                .factors
                .iter()
                .copied()
                .filter(|&(q, _)| q != p)
                .collect(),
        }
    }

    pub fn divisors(&self) -> Vec<u64> {
        divisors(self.m).expect("m validated at construction")
    }
}
