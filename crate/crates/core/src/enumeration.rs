//! Counting one-generator t-CIS codes and the codes that contain a given vector.

use std::collections::HashSet;

use num_bigint::BigUint;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::code::GeneratorSpec;
use crate::error::{Error, Result};
use crate::field::is_prime;
use crate::poly::Poly;
use crate::ring::{CrtDecomposition, QuotientRing, ResidueElement, Ring};

/// Default cap on the exhaustive scans.
pub const ORACLE_BUDGET: u128 = 1 << 24;

/// Hard cap on the size of `R^{t-1}` walked by the oracle.
const SCAN_LIMIT: u128 = 1 << 32;

/// Tuples beyond this are not probed for module collisions.
const PROBE_LIMIT: u128 = 1 << 16;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CountReport {
    pub q: u32,
    pub t: usize,
    pub h: String,
    pub family: String,
    pub factor_degrees: Vec<usize>,
    /// Decimal string, since the count can exceed 64 bits.
    pub formula_count: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub oracle_count: Option<String>,
    /// Number of distinct codes among the oracle's tuples, when probed.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub distinct_codes: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub matches: Option<bool>,
}

fn check_q(q: u64, h: &Poly) -> Result<()> {
    if h.field().size() as u64 != q {
        return Err(Error::FieldMismatch);
    }
    Ok(())
}

/// Product over the irreducible factors of `h` of `(q^{d_i} - 1)^{t-1}`.
pub fn count_cis(q: u64, t: usize, h: &Poly) -> Result<BigUint> {
    check_q(q, h)?;
    if t < 2 {
        return Err(Error::BadIndex(t));
    }
    let factorization = h.factorize()?;
    if !factorization.is_squarefree() {
        return Err(Error::NotSeparable);
    }
    Ok(factorization
        .degrees()
        .into_iter()
        .map(|d| (BigUint::from(q).pow(d as u32) - 1u32).pow(t as u32 - 1))
        .product())
}

/// Counts `(t-1)`-tuples of `R` whose every entry has an invertible
/// expansion matrix. This uses the rank test, not the gcd test, so it is
/// independent of the factorization.
pub fn count_cis_exhaustive(q: u64, t: usize, h: &Poly, budget: u128) -> Result<BigUint> {
    Ok(oracle(q, t, h, budget, false)?.0)
}

/// Exhaustive count together with the number of distinct codes those tuples
/// generate (probed on canonical generator matrices when the count is small).
pub fn count_cis_exhaustive_probe(q: u64, t: usize, h: &Poly, budget: u128) -> Result<(BigUint, Option<BigUint>)> {
    oracle(q, t, h, budget, true)
}

fn oracle(q: u64, t: usize, h: &Poly, budget: u128, probe: bool) -> Result<(BigUint, Option<BigUint>)> {
    check_q(q, h)?;
    if t < 2 {
        return Err(Error::BadIndex(t));
    }
    let ring = QuotientRing::new(h)?;
    let size = ring.size();
    let unit: Vec<bool> = (0..size as u64).map(|i| ring.from_index(i).expansion_matrix().is_invertible()).collect();
    let units = unit.iter().filter(|&&u| u).count() as u128;
    let needed = units.checked_pow(t as u32 - 1).unwrap_or(u128::MAX);
    if needed > budget {
        return Err(Error::BudgetExceeded { needed, budget });
    }
    let scan = size.checked_pow(t as u32 - 1).unwrap_or(u128::MAX);
    if scan > SCAN_LIMIT {
        return Err(Error::BudgetExceeded { needed: scan, budget: SCAN_LIMIT });
    }
    // scan the whole of R^{t-1}
    let mut count = 0u128;
    let mut slots = vec![0u64; t - 1];
    let mut seen = HashSet::new();
    let probing = probe && needed <= PROBE_LIMIT;
    'scan: loop {
        if slots.iter().all(|&s| unit[s as usize]) {
            count += 1;
            if probing {
                let spec = GeneratorSpec::from_indices(&ring, t, &slots)?;
                seen.insert(spec.build_code().gen_matrix().rref().0.to_rows());
            }
        }
        for s in slots.iter_mut() {
            *s += 1;
            if (*s as u128) < size {
                continue 'scan;
            }
            *s = 0;
        }
        break;
    }
    let distinct = probing.then(|| BigUint::from(seen.len()));
    Ok((BigUint::from(count), distinct))
}

/// Formula count with the optional oracle and collision probe.
pub fn count_report(q: u64, t: usize, h: &Poly, with_oracle: bool) -> Result<CountReport> {
    let formula = count_cis(q, t, h)?;
    let ring = QuotientRing::new(h)?;
    let (oracle_count, distinct) = if with_oracle {
        let (c, d) = count_cis_exhaustive_probe(q, t, h, ORACLE_BUDGET)?;
        (Some(c), d)
    } else {
        (None, None)
    };
    Ok(CountReport {
        q: q as u32,
        t,
        h: h.to_string(),
        family: ring.family().label().to_string(),
        factor_degrees: h.factorize()?.degrees(),
        matches: oracle_count.as_ref().map(|c| *c == formula),
        formula_count: formula.to_string(),
        oracle_count: oracle_count.map(|c| c.to_string()),
        distinct_codes: distinct.map(|c| c.to_string()),
    })
}

fn validate_vector(b: &[ResidueElement], t: usize, ring: &Ring) -> Result<()> {
    if t < 2 {
        return Err(Error::BadIndex(t));
    }
    if b.len() != t {
        return Err(Error::LengthMismatch { expected: t, got: b.len() });
    }
    if b.iter().any(|c| !c.ring().same_as(ring)) {
        return Err(Error::RingMismatch);
    }
    if b.iter().all(ResidueElement::is_zero) {
        return Err(Error::ZeroVector);
    }
    Ok(())
}

/// Number of t-CIS codes `<(1, a_1, ..., a_{t-1})>` containing `b`, counted
/// one constituent at a time. Requires all factor degrees equal.
pub fn count_containing(b: &[ResidueElement], t: usize, crt: &CrtDecomposition) -> Result<BigUint> {
    validate_vector(b, t, crt.ring())?;
    if crt.equal_degree().is_none() {
        return Err(Error::UnequalDegrees);
    }
    containing(b, t, crt)
}

fn containing(b: &[ResidueElement], t: usize, crt: &CrtDecomposition) -> Result<BigUint> {
    let images = b.iter().map(|c| crt.project_raw(c)).collect::<Result<Vec<_>>>()?;
    let q = BigUint::from(crt.ring().field().size());
    let mut total = BigUint::one();
    for (i, constituent) in crt.constituents().iter().enumerate() {
        let b0 = images[0][i];
        let rest = images[1..].iter().map(|v| v[i]);
        let factor = if b0 != 0 {
            // a_j = b_j / b_0 is forced and must be nonzero
            if rest.clone().all(|v| v != 0) {
                BigUint::one()
            } else {
                BigUint::zero()
            }
        } else if rest.clone().all(|v| v == 0) {
            (q.pow(constituent.degree() as u32) - 1u32).pow(t as u32 - 1)
        } else {
            BigUint::zero()
        };
        total *= factor;
    }
    Ok(total)
}

/// Brute-force count: every unit tuple `a` with `b_j = b_0 a_j` for all `j`.
pub fn count_containing_bruteforce(b: &[ResidueElement], t: usize, ring: &Ring, budget: u128) -> Result<BigUint> {
    validate_vector(b, t, ring)?;
    let units: Vec<ResidueElement> = ring.unit_indices().into_iter().map(|i| ring.from_index(i)).collect();
    let needed = (units.len() as u128).checked_pow(t as u32 - 1).unwrap_or(u128::MAX);
    if needed > budget {
        return Err(Error::BudgetExceeded { needed, budget });
    }
    // slots are independent, so count per slot and multiply
    let mut total = BigUint::one();
    for bj in &b[1..] {
        let mut per_slot = 0u64;
        for a in &units {
            if b[0].mul(a)? == *bj {
                per_slot += 1;
            }
        }
        total *= per_slot;
    }
    Ok(total)
}

/// Number of CIS QC codes over `F_q[x]/(x^n - 1)` containing `b`, for prime
/// `n` with `x^n - 1 = (x - 1) * irreducible` and every nonzero `b_i` of
/// weight `< n`. The count is at most one when `q = 2`.
pub fn verify_unique_containment(q: u64, n: usize, t: usize, b: &[ResidueElement]) -> Result<u32> {
    if !is_prime(n as u64) {
        return Err(Error::Hypothesis(format!("n = {n} is not prime")));
    }
    let ring = b.first().ok_or(Error::ZeroVector)?.ring().clone();
    check_q(q, ring.modulus())?;
    if *ring.modulus() != Poly::binomial(ring.field(), n, 1) {
        return Err(Error::Hypothesis(format!("ring modulus is not x^{n} - 1")));
    }
    validate_vector(b, t, &ring)?;
    if let Some(i) = b.iter().position(|c| c.value().weight() >= n) {
        return Err(Error::Hypothesis(format!("coordinate {i} has weight {n}")));
    }
    let crt = ring.crt()?;
    if crt.factorization().degrees() != [1, n - 1] {
        return Err(Error::Hypothesis(format!("x^{n} - 1 is not (x - 1) times an irreducible over F{q}")));
    }
    let count = containing(b, t, &crt)?;
    u32::try_from(count).map_err(|_| Error::Invalid("containment count overflow".into()))
}
