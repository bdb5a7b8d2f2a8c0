//! Entropy, Gilbert-Varshamov style floors, and the arithmetic predicates on
//! binomials and cyclotomic shapes used by the existence arguments.

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{field_of_size, gcd_u64, is_prime, Elem, Field};
use crate::poly::{count_irreducibles, prime_factors, Poly};

/// `H_q(y) = y log_q(q-1) - y log_q y - (1-y) log_q(1-y)`.
///
/// Defined on `0 < y <= (q-1)/q`; the right endpoint, where the value is 1,
/// is admitted.
pub fn entropy_q(q: u64, y: f64) -> Result<f64> {
    if q < 2 {
        return Err(Error::Invalid(format!("alphabet size {q} < 2")));
    }
    let qf = q as f64;
    if !(y > 0.0 && y <= (qf - 1.0) / qf) {
        return Err(Error::EntropyDomain(y));
    }
    let ln_q = qf.ln();
    let tail = if y < 1.0 { (1.0 - y) * (1.0 - y).ln() } else { 0.0 };
    Ok((y * (qf - 1.0).ln() - y * y.ln() - tail) / ln_q)
}

/// The `delta` in `(0, (q-1)/q)` with `H_q(delta) = (t-1)/(r t)`, by bisection.
pub fn gv_delta(q: u64, t: usize, r: usize) -> Result<f64> {
    if t < 2 {
        return Err(Error::BadIndex(t));
    }
    if r < 1 {
        return Err(Error::Invalid("r must be at least 1".into()));
    }
    let target = (t - 1) as f64 / (r * t) as f64;
    if target >= 1.0 {
        return Err(Error::UnreachableTarget(target));
    }
    solve_entropy(q, target)
}

/// Inverse of `H_q` on `(0, (q-1)/q)`.
pub fn solve_entropy(q: u64, target: f64) -> Result<f64> {
    if !(target > 0.0 && target < 1.0) {
        return Err(Error::UnreachableTarget(target));
    }
    let (mut lo, mut hi) = (0.0f64, (q as f64 - 1.0) / q as f64);
    while hi - lo > 1e-13 {
        let mid = 0.5 * (lo + hi);
        if entropy_q(q, mid)? < target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BinomialVerdict {
    pub q: u32,
    pub n: usize,
    pub alpha: Elem,
    /// Multiplicative order of `alpha`.
    pub order: u64,
    /// Every prime factor of `n` divides the order but not `(q-1)/order`.
    pub condition_i: bool,
    /// `q = 1 mod 4` whenever `4 | n`.
    pub condition_ii: bool,
    pub irreducible: bool,
    /// Direct irreducibility test of `x^n - alpha`, for comparison.
    pub by_factorization: bool,
    pub reason: String,
}

/// Irreducibility of `x^n - alpha` from the order conditions, with the
/// direct test alongside.
pub fn binomial_irreducible(field: &Field, n: usize, alpha: Elem) -> Result<BinomialVerdict> {
    if n == 0 {
        return Err(Error::ZeroDegree);
    }
    if alpha == 0 {
        return Err(Error::ZeroInverse);
    }
    field.check(alpha as u64)?;
    let q = field.size() as u64;
    let order = field.order(alpha)?;
    let cofactor = (q - 1) / order;
    let primes = prime_factors(n as u64);
    let bad_prime = primes.iter().copied().find(|&p| order % p != 0 || cofactor % p == 0);
    let condition_i = bad_prime.is_none();
    let condition_ii = n % 4 != 0 || q % 4 == 1;
    let irreducible = condition_i && condition_ii;
    let reason = match (bad_prime, condition_ii) {
        (Some(p), _) if order % p != 0 => format!("(i) fails: prime {p} of n does not divide ord(alpha) = {order}"),
        (Some(p), _) => format!("(i) fails: prime {p} of n divides (q-1)/ord(alpha) = {cofactor}"),
        (None, false) => format!("(ii) fails: 4 | n but q = {q} is not 1 mod 4"),
        (None, true) => "(i) and (ii) hold".to_string(),
    };
    let by_factorization = Poly::binomial(field, n, alpha).is_irreducible()?;
    Ok(BinomialVerdict { q: q as u32, n, alpha, order, condition_i, condition_ii, irreducible, by_factorization, reason })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ShapeCheck {
    pub q: u64,
    pub n: u64,
    /// Multiplicative order of `q` modulo `n`.
    pub order_of_q: u64,
    /// `q` is a primitive root mod `n`.
    pub primitive_root: bool,
    /// `x^n - 1 = (x - 1) * (irreducible of degree n - 1)` by factoring.
    pub by_factorization: bool,
}

impl ShapeCheck {
    pub fn holds(&self) -> bool {
        self.primitive_root && self.by_factorization
    }

    pub fn agree(&self) -> bool {
        self.primitive_root == self.by_factorization
    }
}

/// Whether `x^n - 1` over `F_q` has exactly the two factors `x - 1` and an
/// irreducible of degree `n - 1`, checked both ways.
pub fn qc_two_factor_shape(q: u64, n: u64) -> Result<ShapeCheck> {
    if !is_prime(n) {
        return Err(Error::Hypothesis(format!("n = {n} is not prime")));
    }
    let field = field_of_size(q)?;
    if q % n == 0 {
        return Err(Error::Hypothesis(format!("n = {n} divides q = {q}")));
    }
    let order_of_q = multiplicative_order(q % n, n);
    let factorization = Poly::binomial(&field, n as usize, 1).factorize()?;
    let by_factorization = factorization.is_squarefree() && factorization.degrees() == [1, n as usize - 1];
    Ok(ShapeCheck { q, n, order_of_q, primitive_root: order_of_q == n - 1, by_factorization })
}

/// Primes `n <= bound` with the two-factor shape over `F_q`.
pub fn two_factor_primes(q: u64, bound: u64) -> Result<Vec<ShapeCheck>> {
    let mut out = Vec::new();
    for n in 2..=bound {
        if !is_prime(n) || q % n == 0 {
            continue;
        }
        out.push(qc_two_factor_shape(q, n)?);
    }
    Ok(out)
}

fn multiplicative_order(a: u64, n: u64) -> u64 {
    let mut x = a % n;
    let mut k = 1;
    while x != 1 {
        x = x * a % n;
        k += 1;
        if k > n {
            return 0;
        }
    }
    k
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QtFamily {
    pub q: u64,
    pub e: u64,
    pub p: u64,
    pub alpha: Elem,
    /// `(n, irreducible)` for `n = p^i <= bound`, `i >= 1`.
    pub members: Vec<(usize, bool)>,
}

impl QtFamily {
    pub fn all_irreducible(&self) -> bool {
        self.members.iter().all(|&(_, ok)| ok)
    }
}

/// Prime-power co-indices `n = p^i` for which `x^n - alpha` is tested, with
/// `alpha` of order `e`, `e | q - 1`, `gcd(e, (q-1)/e) = 1`, `p | e`. Picks the
/// smallest qualifying `e > 1` unless one is given. `Ok(None)` when no `e` qualifies.
pub fn qt_irreducible_family(q: u64, bound: usize, e: Option<u64>) -> Result<Option<QtFamily>> {
    let field = field_of_size(q)?;
    let qualifies = |e: u64| e > 1 && (q - 1) % e == 0 && gcd_u64(e, (q - 1) / e) == 1;
    let e = match e {
        Some(e) if qualifies(e) => e,
        Some(e) => return Err(Error::Hypothesis(format!("e = {e} does not qualify for q = {q}"))),
        None => match (2..q).find(|&e| qualifies(e)) {
            Some(e) => e,
            None => return Ok(None),
        },
    };
    let p = prime_factors(e)[0];
    let alpha = field.elements().skip(1).find(|&a| field.order(a).ok() == Some(e)).expect("cyclic group has every order dividing q-1");
    let mut members = Vec::new();
    let mut n = p as usize;
    while n <= bound {
        members.push((n, Poly::binomial(&field, n, alpha).is_irreducible()?));
        n *= p as usize;
    }
    Ok(Some(QtFamily { q, e, p, alpha, members }))
}

/// Both sides of the finite-length expurgation comparison for t-CIS codes
/// over `F_q[x]/(h)`, `h` a product of `r` distinct irreducibles of degree `n/r`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExpurgationReport {
    pub q: u64,
    pub t: usize,
    pub r: usize,
    pub n: usize,
    pub delta: f64,
    pub applicable: bool,
    pub note: String,
    /// Largest weight treated as "low".
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub radius: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub total_codes: Option<String>,
    /// Nonzero vectors of `F_q^{tn}` of weight `<= radius`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub low_weight_vectors: Option<String>,
    /// Most codes that any single nonzero vector lies in.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_containing: Option<String>,
    /// `low_weight_vectors * max_containing`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bad_codes_bound: Option<String>,
    /// `bad_codes_bound < total_codes`: some code has distance `> radius`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub survivor_guaranteed: Option<bool>,
    /// `log_q(total / bad)`, positive when survivors are guaranteed.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub margin_log_q: Option<f64>,
}

fn binomial_coefficient(n: usize, k: usize) -> BigUint {
    let k = k.min(n - k);
    (0..k).fold(BigUint::one(), |acc, i| acc * (n - i) / (i + 1))
}

/// Nonzero vectors of length `len` over `F_q` of weight at most `radius`.
pub fn hamming_ball(q: u64, len: usize, radius: usize) -> BigUint {
    let qm1 = BigUint::from(q - 1);
    (1..=radius.min(len)).map(|i| binomial_coefficient(len, i) * qm1.pow(i as u32)).sum()
}

fn log_q(x: &BigUint, q: u64) -> f64 {
    let bits = x.bits();
    let shift = bits.saturating_sub(52);
    let mantissa = (x >> shift).to_f64().unwrap_or(f64::INFINITY);
    (mantissa.ln() + shift as f64 * std::f64::consts::LN_2) / (q as f64).ln()
}

/// Expurgation comparison at relative distance `delta` (default: the
/// `gv_delta` floor for `(q, t, r)`).
pub fn expurgation_report(q: u64, t: usize, r: usize, n: usize, delta: Option<f64>) -> Result<ExpurgationReport> {
    field_of_size(q)?;
    let delta = match delta {
        Some(d) => d,
        None => gv_delta(q, t, r)?,
    };
    let mut report = ExpurgationReport {
        q,
        t,
        r,
        n,
        delta,
        applicable: false,
        note: String::new(),
        radius: None,
        total_codes: None,
        low_weight_vectors: None,
        max_containing: None,
        bad_codes_bound: None,
        survivor_guaranteed: None,
        margin_log_q: None,
    };
    if r == 0 || n == 0 || n % r != 0 {
        report.note = format!("not applicable: r = {r} does not divide n = {n}");
        return Ok(report);
    }
    let d = n / r;
    if count_irreducibles(q, d as u64)? < BigUint::from(r) {
        report.note = format!("not applicable: fewer than {r} monic irreducibles of degree {d} over F{q}");
        return Ok(report);
    }
    let len = t * n;
    let radius = (delta * len as f64).floor() as usize;
    let unit = BigUint::from(q).pow(d as u32) - 1u32;
    let total = unit.pow((r * (t - 1)) as u32);
    let containing = unit.pow(((t - 1) * (r - 1)) as u32);
    let ball = hamming_ball(q, len, radius);
    let bad = &ball * &containing;
    let survivors = bad < total;
    let margin = if bad.is_zero() { f64::INFINITY } else { log_q(&total, q) - log_q(&bad, q) };
    report.applicable = true;
    report.note = format!("h = product of {r} irreducibles of degree {d}");
    report.radius = Some(radius);
    report.total_codes = Some(total.to_string());
    report.low_weight_vectors = Some(ball.to_string());
    report.max_containing = Some(containing.to_string());
    report.bad_codes_bound = Some(bad.to_string());
    report.survivor_guaranteed = Some(survivors);
    report.margin_log_q = Some(margin);
    Ok(report)
}
