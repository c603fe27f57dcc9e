//! Dense univariate polynomials over `Z` and `F_p`, used as a literal factorization
//! oracle for cyclotomic polynomials. Coefficient vectors are stored lowest degree
//! first; over `F_p` every coefficient lies in `[0, p)`.

use super::{check_range, divisors, is_prime, mul_mod, pow_mod};
use crate::error::{Error, Result};

/// Largest characteristic accepted by the factorization oracles.
pub const ORACLE_MAX_PRIME: u64 = 13;
/// Largest degree accepted by the factorization oracles.
pub const ORACLE_MAX_DEGREE: usize = 40;
/// Candidate budget for the exhaustive trial-division counter.
const TRIAL_DIVISION_BUDGET: u64 = 1 << 16;

/// A nonzero polynomial over the field with `p` elements.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolyOverFp {
    p: u64,
    coeffs: Vec<u64>,
}

impl PolyOverFp {
    pub fn new(p: u64, coeffs: Vec<u64>) -> Result<Self> {
        check_range("p", p)?;
        if !is_prime(p) {
            return Err(Error::domain(format!("{p} is not prime")));
        }
        if let Some(&c) = coeffs.iter().find(|&&c| c >= p) {
            return Err(Error::domain(format!(
                "coefficient {c} is not reduced mod {p}"
            )));
        }
        let coeffs = trim(coeffs);
        if coeffs.is_empty() {
            return Err(Error::domain("the zero polynomial has no factorization"));
        }
        Ok(PolyOverFp { p, coeffs })
    }

    /// Reduces an integer polynomial modulo `p`.
    pub fn from_integer_coeffs(p: u64, coeffs: &[i64]) -> Result<Self> {
        let reduced = coeffs
            .iter()
            .map(|&c| c.rem_euclid(p as i64) as u64)
            .collect();
        Self::new(p, reduced)
    }

    /// The `d`-th cyclotomic polynomial reduced mod `p`.
    pub fn cyclotomic(d: u64, p: u64) -> Result<Self> {
        Self::from_integer_coeffs(p, &cyclotomic_integer(d)?)
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    fn check_oracle_bounds(&self) -> Result<()> {
        if self.degree() == 0 {
            return Err(Error::domain(
                "constant polynomials have no irreducible factors",
            ));
        }
        if self.p > ORACLE_MAX_PRIME {
            return Err(Error::OutOfRange {
                what: "oracle characteristic",
                value: self.p,
                limit: ORACLE_MAX_PRIME,
            });
        }
        if self.degree() > ORACLE_MAX_DEGREE {
            return Err(Error::OutOfRange {
                what: "oracle degree",
                value: self.degree() as u64,
                limit: ORACLE_MAX_DEGREE as u64,
            });
        }
        Ok(())
    }
}

/// Cyclotomic polynomial `Phi_n` over `Z`, built by exact division
/// `Phi_n = (x^n - 1) / prod_{d | n, d < n} Phi_d`.
pub fn cyclotomic_integer(n: u64) -> Result<Vec<i64>> {
    check_range("n", n)?;
    let divs = divisors(n)?;
    let mut table: Vec<(u64, Vec<i64>)> = Vec::with_capacity(divs.len());
    for &d in &divs {
        let mut num = vec![0i64; d as usize + 1];
        num[0] = -1;
        num[d as usize] = 1;
        for (e, phi_e) in &table {
            if d % e == 0 {
                num = exact_div_monic_z(&num, phi_e)?;
            }
        }
        table.push((d, num));
    }
    Ok(table.pop().expect("n has at least one divisor").1)
}

fn exact_div_monic_z(num: &[i64], den: &[i64]) -> Result<Vec<i64>> {
    let mut rem = num.to_vec();
    let dd = den.len() - 1;
    debug_assert_eq!(den[dd], 1);
    if rem.len() <= dd {
        return Err(Error::Inconsistent("cyclotomic division degree".into()));
    }
    let mut quot = vec![0i64; rem.len() - dd];
    for i in (0..quot.len()).rev() {
        let c = rem[i + dd];
        quot[i] = c;
        for (j, &b) in den.iter().enumerate() {
            let t = c
                .checked_mul(b)
                .ok_or(Error::Overflow("cyclotomic coefficients"))?;
            rem[i + j] = rem[i + j]
                .checked_sub(t)
                .ok_or(Error::Overflow("cyclotomic coefficients"))?;
        }
    }
    if rem.iter().any(|&c| c != 0) {
        return Err(Error::Inconsistent(
            "cyclotomic division left a remainder".into(),
        ));
    }
    Ok(quot)
}

fn trim(mut v: Vec<u64>) -> Vec<u64> {
    while v.last() == Some(&0) {
        v.pop();
    }
    v
}

fn inv_mod(a: u64, p: u64) -> Result<u64> {
    pow_mod(a, p - 2, p)
}

fn make_monic(f: &[u64], p: u64) -> Result<Vec<u64>> {
    let lead = *f.last().expect("nonzero polynomial");
    let inv = inv_mod(lead, p)?;
    f.iter().map(|&c| mul_mod(c, inv, p)).collect()
}

/// Quotient and remainder for a monic divisor.
fn divrem(f: &[u64], g: &[u64], p: u64) -> Result<(Vec<u64>, Vec<u64>)> {
    let dg = g.len() - 1;
    debug_assert_eq!(g[dg], 1);
    if f.len() <= dg {
        return Ok((Vec::new(), f.to_vec()));
    }
    let mut rem = f.to_vec();
    let mut quot = vec![0u64; f.len() - dg];
    for i in (0..quot.len()).rev() {
        let c = rem[i + dg];
        if c == 0 {
            continue;
        }
        quot[i] = c;
        for (j, &b) in g.iter().enumerate() {
            let t = mul_mod(c, b, p)?;
            rem[i + j] = (rem[i + j] + p - t) % p;
        }
    }
    Ok((trim(quot), trim(rem)))
}

fn rem_monic(f: &[u64], g: &[u64], p: u64) -> Result<Vec<u64>> {
    divrem(f, g, p).map(|(_, r)| r)
}

/// Monic gcd; zero polynomials are empty vectors.
fn gcd(a: &[u64], b: &[u64], p: u64) -> Result<Vec<u64>> {
    let mut a = trim(a.to_vec());
    let mut b = trim(b.to_vec());
    while !b.is_empty() {
        let bm = make_monic(&b, p)?;
        let r = rem_monic(&a, &bm, p)?;
        a = bm;
        b = r;
    }
    if a.is_empty() {
        return Ok(a);
    }
    make_monic(&a, p)
}

fn mul(a: &[u64], b: &[u64], p: u64) -> Result<Vec<u64>> {
    if a.is_empty() || b.is_empty() {
        return Ok(Vec::new());
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + mul_mod(x, y, p)?) % p;
        }
    }
    Ok(trim(out))
}

fn sub(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let n = a.len().max(b.len());
    let out = (0..n)
        .map(|i| {
            let x = a.get(i).copied().unwrap_or(0);
            let y = b.get(i).copied().unwrap_or(0);
            (x + p - y) % p
        })
        .collect();
    trim(out)
}

fn derivative(f: &[u64], p: u64) -> Result<Vec<u64>> {
    let out = f
        .iter()
        .enumerate()
        .skip(1)
        .map(|(i, &c)| mul_mod(c, i as u64 % p, p))
        .collect::<Result<Vec<_>>>()?;
    Ok(trim(out))
}

/// `base^exp mod modulus` for a monic modulus.
fn powmod_poly(base: &[u64], mut exp: u64, modulus: &[u64], p: u64) -> Result<Vec<u64>> {
    let mut result = rem_monic(&[1], modulus, p)?;
    let mut b = rem_monic(base, modulus, p)?;
    while exp > 0 {
        if exp & 1 == 1 {
            result = rem_monic(&mul(&result, &b, p)?, modulus, p)?;
        }
        b = rem_monic(&mul(&b, &b, p)?, modulus, p)?;
        exp >>= 1;
    }
    Ok(result)
}

/// Number of irreducible factors of a squarefree monic polynomial, by distinct-degree
/// factorization: the degree-`k` part is `gcd(x^(p^k) - x, f)`.
fn distinct_degree_count(f: &[u64], p: u64) -> Result<usize> {
    let x = [0, 1];
    let mut rest = f.to_vec();
    let mut frob = rem_monic(&x, &rest, p)?;
    let mut count = 0;
    let mut k = 1;
    while rest.len() > 2 * k {
        frob = powmod_poly(&frob, p, &rest, p)?;
        let g = gcd(&sub(&frob, &x, p), &rest, p)?;
        let dg = g.len() - 1;
        if dg > 0 {
            count += dg / k;
            rest = divrem(&rest, &g, p)?.0;
            frob = rem_monic(&frob, &rest, p)?;
        }
        k += 1;
    }
    if rest.len() > 1 {
        count += 1;
    }
    Ok(count)
}

fn factor_count_monic(f: &[u64], p: u64) -> Result<usize> {
    if f.len() <= 1 {
        return Ok(0);
    }
    let df = derivative(f, p)?;
    if df.is_empty() {
        // f = h(x^p) = h(x)^p over F_p
        let h: Vec<u64> = f.iter().step_by(p as usize).copied().collect();
        return Ok(p as usize * factor_count_monic(&h, p)?);
    }
    let g = gcd(f, &df, p)?;
    let squarefree = divrem(f, &g, p)?.0;
    Ok(distinct_degree_count(&squarefree, p)? + factor_count_monic(&g, p)?)
}

/// Number of irreducible factors of `poly` over `F_p`, counted with multiplicity.
///
/// The count comes from an actual factorization (squarefree splitting followed by
/// distinct-degree factorization) and never looks at multiplicative orders.
pub fn factor_count_oracle_fp(poly: &PolyOverFp) -> Result<usize> {
    poly.check_oracle_bounds()?;
    let f = make_monic(&poly.coeffs, poly.p)?;
    factor_count_monic(&f, poly.p)
}

/// Exhaustive variant of [`factor_count_oracle_fp`]: strips monic divisors of
/// increasing degree by trial division. Fails with [`Error::OutOfRange`] when the
/// candidate count for the next degree exceeds a fixed budget.
pub fn trial_division_factor_count(poly: &PolyOverFp) -> Result<usize> {
    poly.check_oracle_bounds()?;
    let p = poly.p;
    let mut f = make_monic(&poly.coeffs, p)?;
    let mut count = 0;
    let mut k = 1usize;
    while f.len() > 2 * k {
        let candidates = p.checked_pow(k as u32).unwrap_or(u64::MAX);
        if candidates > TRIAL_DIVISION_BUDGET {
            return Err(Error::OutOfRange {
                what: "trial division candidates",
                value: candidates,
                limit: TRIAL_DIVISION_BUDGET,
            });
        }
        let mut found = false;
        for idx in 0..candidates {
            let mut g = Vec::with_capacity(k + 1);
            let mut v = idx;
            for _ in 0..k {
                g.push(v % p);
                v /= p;
            }
            g.push(1);
            loop {
                let (q, r) = divrem(&f, &g, p)?;
                if !r.is_empty() {
                    break;
                }
                f = q;
                count += 1;
                found = true;
            }
            if f.len() - 1 < 2 * k {
                break;
            }
        }
        if !found || f.len() - 1 < 2 * k {
            k += 1;
        }
    }
    if f.len() > 1 {
        count += 1;
    }
    Ok(count)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_cyclotomics_over_z() {
        assert_eq!(cyclotomic_integer(1).unwrap(), vec![-1, 1]);
        assert_eq!(cyclotomic_integer(4).unwrap(), vec![1, 0, 1]);
        assert_eq!(cyclotomic_integer(6).unwrap(), vec![1, -1, 1]);
        assert_eq!(cyclotomic_integer(5).unwrap(), vec![1, 1, 1, 1, 1]);
        // first cyclotomic with a coefficient outside {-1, 0, 1}
        assert!(cyclotomic_integer(105).unwrap().contains(&-2));
    }

    #[test]
    fn oracle_examples() {
        let phi4 = PolyOverFp::cyclotomic(4, 5).unwrap();
        assert_eq!(factor_count_oracle_fp(&phi4).unwrap(), 2);
        for p in [2, 3, 5, 7, 11, 13] {
            let lin = PolyOverFp::new(p, vec![p - 1, 1]).unwrap();
            assert_eq!(factor_count_oracle_fp(&lin).unwrap(), 1);
        }
        let phi11 = PolyOverFp::cyclotomic(11, 3).unwrap();
        assert_eq!(factor_count_oracle_fp(&phi11).unwrap(), 2);
        assert_eq!(trial_division_factor_count(&phi11).unwrap(), 2);
    }

    #[test]
    fn multiplicities_are_counted() {
        // (x - 1)^3 (x + 1) over F_5
        let f = mul(
            &mul(&mul(&[4, 1], &[4, 1], 5).unwrap(), &[4, 1], 5).unwrap(),
            &[1, 1],
            5,
        )
        .unwrap();
        let poly = PolyOverFp::new(5, f).unwrap();
        assert_eq!(factor_count_oracle_fp(&poly).unwrap(), 4);
        assert_eq!(trial_division_factor_count(&poly).unwrap(), 4);
        // x^4 - 1 = (x - 1)^4 over F_2, a p-th power times x - 1
        let poly = PolyOverFp::from_integer_coeffs(2, &[-1, 0, 0, 0, 1]).unwrap();
        assert_eq!(factor_count_oracle_fp(&poly).unwrap(), 4);
        // x^6 - 1 = (x - 1)^3 (x + 1)^3 over F_3
        let poly = PolyOverFp::from_integer_coeffs(3, &[-1, 0, 0, 0, 0, 0, 1]).unwrap();
        assert_eq!(factor_count_oracle_fp(&poly).unwrap(), 6);
        assert_eq!(trial_division_factor_count(&poly).unwrap(), 6);
    }

    #[test]
    fn bounds_are_enforced() {
        let big_p = PolyOverFp::new(17, vec![1, 1]).unwrap();
        assert!(matches!(
            factor_count_oracle_fp(&big_p),
            Err(Error::OutOfRange { .. })
        ));
        let mut coeffs = vec![0; 42];
        coeffs[41] = 1;
        coeffs[0] = 1;
        let big_deg = PolyOverFp::new(2, coeffs).unwrap();
        assert!(factor_count_oracle_fp(&big_deg).is_err());
        let constant = PolyOverFp::new(3, vec![2]).unwrap();
        assert!(factor_count_oracle_fp(&constant).is_err());
        assert!(PolyOverFp::new(4, vec![1, 1]).is_err());
        assert!(PolyOverFp::new(5, vec![0, 0]).is_err());
        assert!(PolyOverFp::new(5, vec![7, 1]).is_err());
    }

    #[test]
    fn trial_division_agrees_with_ddf_where_feasible() {
        for p in [2u64, 3, 5, 7, 11, 13] {
            for d in 1..=30u64 {
                if d % p == 0 {
                    continue;
                }
                let poly = PolyOverFp::cyclotomic(d, p).unwrap();
                if let Ok(trial) = trial_division_factor_count(&poly) {
                    assert_eq!(trial, factor_count_oracle_fp(&poly).unwrap(), "d={d} p={p}");
                }
            }
        }
    }
}
