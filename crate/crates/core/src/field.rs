//! Finite fields `F_{p^m}` with `q = p^m <= 2^16`.
//!
//! Elements are plain `u32` indices. Index `i` stands for the polynomial
//! `c_0 + c_1 w + ... + c_{m-1} w^{m-1}` where `i = c_0 + c_1 p + ... `, so the
//! enumeration `0, 1, ..., q-1` is the deterministic element order (zero
//! first, prime subfield next). Multiplication goes through log/antilog
//! tables built once per field.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::poly::Poly;

/// Element of a [`FiniteField`], stored as its enumeration index.
pub type Elem = u32;

/// Shared handle to a field context.
pub type Field = Arc<FiniteField>;

pub const MAX_FIELD_SIZE: u64 = 1 << 16;

pub struct FiniteField {
    p: u32,
    m: u32,
    q: u32,
    /// Ascending coefficients over `F_p`, monic, length `m + 1`.
    modulus: Vec<u32>,
    exp: Vec<u32>,
    log: Vec<u32>,
    primitive: Elem,
}

impl fmt::Debug for FiniteField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FiniteField")
            .field("p", &self.p)
            .field("m", &self.m)
            .field("modulus", &self.modulus)
            .finish()
    }
}

impl PartialEq for FiniteField {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.m == other.m && self.modulus == other.modulus
    }
}

impl Eq for FiniteField {}

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

/// Splits `q` into `(p, m)` with `q = p^m`, or `None` if `q` is not a prime power.
pub fn prime_power(q: u64) -> Option<(u32, u32)> {
    if q < 2 {
        return None;
    }
    let mut p = 2;
    while q % p != 0 {
        p += 1;
    }
    let (mut rest, mut m) = (q, 0);
    while rest % p == 0 {
        rest /= p;
        m += 1;
    }
    (rest == 1).then_some((p as u32, m))
}

/// Builds `F_{p^m}` whose modulus is the smallest monic irreducible of degree `m`
/// over `F_p` in the index order.
pub fn make_field(p: u64, m: u32) -> Result<Field> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if m == 0 {
        return Err(Error::ZeroDegree);
    }
    let size = (p as u128).checked_pow(m).unwrap_or(u128::MAX);
    if size > MAX_FIELD_SIZE as u128 {
        return Err(Error::FieldTooLarge { p, m });
    }
    let p = p as u32;
    if m == 1 {
        return Ok(Arc::new(FiniteField::with_modulus(p, vec![0, 1])));
    }
    let prime = make_field(p as u64, 1)?;
    let modulus = smallest_irreducible(&prime, m as usize);
    Ok(Arc::new(FiniteField::with_modulus(p, modulus)))
}

/// Builds the field of size `q`, which must be a prime power.
pub fn field_of_size(q: u64) -> Result<Field> {
    let (p, m) = prime_power(q).ok_or(Error::NotPrime(q))?;
    make_field(p as u64, m)
}

fn smallest_irreducible(prime: &Field, degree: usize) -> Vec<u32> {
    let p = prime.p as u64;
    let count = p.pow(degree as u32);
    for low in 0..count {
        let mut coeffs: Vec<u32> = digits_of(low, p as u32, degree);
        coeffs.push(1);
        if coeffs[0] == 0 {
            continue;
        }
        let candidate = Poly::from_coeffs(prime, coeffs.clone());
        if candidate.is_irreducible().unwrap_or(false) {
            return coeffs;
        }
    }
    unreachable!("irreducible polynomials exist in every degree")
}

fn digits_of(mut value: u64, p: u32, len: usize) -> Vec<u32> {
    let mut out = Vec::with_capacity(len);
    for _ in 0..len {
        out.push((value % p as u64) as u32);
        value /= p as u64;
    }
    out
}

impl FiniteField {
    fn with_modulus(p: u32, modulus: Vec<u32>) -> Self {
        let m = (modulus.len() - 1) as u32;
        let q = p.pow(m);
        let mut field = FiniteField {
            p,
            m,
            q,
            modulus,
            exp: Vec::new(),
            log: Vec::new(),
            primitive: 1,
        };
        field.build_tables();
        field
    }

    fn build_tables(&mut self) {
        let order = self.q - 1;
        if order == 1 {
            self.exp = vec![1, 1];
            self.log = vec![0, 0];
            self.primitive = 1;
            return;
        }
        let mut seen = vec![false; self.q as usize];
        for candidate in 2..self.q {
            seen.iter_mut().for_each(|s| *s = false);
            let mut exp = Vec::with_capacity(2 * order as usize);
            let mut acc = 1;
            let mut full = true;
            for _ in 0..order {
                if seen[acc as usize] {
                    full = false;
                    break;
                }
                seen[acc as usize] = true;
                exp.push(acc);
                acc = self.slow_mul(acc, candidate);
            }
            if !full || acc != 1 {
                continue;
            }
            let mut log = vec![0; self.q as usize];
            for (k, &e) in exp.iter().enumerate() {
                log[e as usize] = k as u32;
            }
            let doubled: Vec<u32> = exp.iter().chain(exp.iter()).copied().collect();
            self.exp = doubled;
            self.log = log;
            self.primitive = candidate;
            return;
        }
        unreachable!("multiplicative group of a finite field is cyclic");
    }

    fn slow_mul(&self, a: Elem, b: Elem) -> Elem {
        let m = self.m as usize;
        let p = self.p as u64;
        let da = self.digits(a);
        let db = self.digits(b);
        let mut prod = vec![0u64; 2 * m];
        for (i, &x) in da.iter().enumerate() {
            for (j, &y) in db.iter().enumerate() {
                prod[i + j] = (prod[i + j] + x as u64 * y as u64) % p;
            }
        }
        for k in (m..2 * m).rev() {
            let c = prod[k];
            if c == 0 {
                continue;
            }
            for (j, &mc) in self.modulus.iter().enumerate().take(m) {
                let idx = k - m + j;
                prod[idx] = (prod[idx] + (p - c) * mc as u64) % p;
            }
            prod[k] = 0;
        }
        self.from_digits(prod[..m].iter().map(|&c| c as u32))
    }

    pub fn characteristic(&self) -> u32 {
        self.p
    }

    pub fn degree(&self) -> u32 {
        self.m
    }

    pub fn size(&self) -> u32 {
        self.q
    }

    /// Ascending coefficient list of the defining polynomial over `F_p`.
    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    /// A generator of the multiplicative group (first one in index order).
    pub fn primitive_element(&self) -> Elem {
        self.primitive
    }

    /// The class of the indeterminate in `F_p[w]/(modulus)`, written `w`.
    /// Equals the index `p` for proper extensions and is `None` for prime fields.
    pub fn w(&self) -> Option<Elem> {
        (self.m > 1).then_some(self.p)
    }

    pub fn contains(&self, a: Elem) -> bool {
        a < self.q
    }

    pub fn check(&self, a: u64) -> Result<Elem> {
        if a < self.q as u64 {
            Ok(a as Elem)
        } else {
            Err(Error::InvalidElement { index: a, q: self.q })
        }
    }

    pub fn digits(&self, a: Elem) -> Vec<u32> {
        digits_of(a as u64, self.p, self.m as usize)
    }

    pub fn from_digits<I: IntoIterator<Item = u32>>(&self, digits: I) -> Elem {
        let mut acc = 0u32;
        let mut scale = 1u32;
        for d in digits {
            acc += (d % self.p) * scale;
            scale = scale.wrapping_mul(self.p);
        }
        acc
    }

    /// Image of an integer under `Z -> F_p -> F_q`.
    pub fn from_int(&self, k: i64) -> Elem {
        k.rem_euclid(self.p as i64) as Elem
    }

    pub fn zero(&self) -> Elem {
        0
    }

    pub fn one(&self) -> Elem {
        1
    }

    #[inline]
    pub fn add(&self, a: Elem, b: Elem) -> Elem {
        if self.p == 2 {
            return a ^ b;
        }
        if self.m == 1 {
            let s = a + b;
            return if s >= self.p { s - self.p } else { s };
        }
        let (mut a, mut b) = (a, b);
        let (mut acc, mut scale) = (0, 1);
        for _ in 0..self.m {
            let s = (a % self.p + b % self.p) % self.p;
            acc += s * scale;
            scale *= self.p;
            a /= self.p;
            b /= self.p;
        }
        acc
    }

    #[inline]
    pub fn neg(&self, a: Elem) -> Elem {
        if self.p == 2 {
            return a;
        }
        if self.m == 1 {
            return if a == 0 { 0 } else { self.p - a };
        }
        let mut a = a;
        let (mut acc, mut scale) = (0, 1);
        for _ in 0..self.m {
            let d = a % self.p;
            acc += ((self.p - d) % self.p) * scale;
            scale *= self.p;
            a /= self.p;
        }
        acc
    }

    #[inline]
    pub fn sub(&self, a: Elem, b: Elem) -> Elem {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        if a == 0 || b == 0 {
            return 0;
        }
        self.exp[(self.log[a as usize] + self.log[b as usize]) as usize]
    }

    pub fn inv(&self, a: Elem) -> Result<Elem> {
        if a == 0 {
            return Err(Error::ZeroInverse);
        }
        let order = self.q - 1;
        Ok(self.exp[((order - self.log[a as usize]) % order) as usize])
    }

    pub fn div(&self, a: Elem, b: Elem) -> Result<Elem> {
        Ok(self.mul(a, self.inv(b)?))
    }

    /// `a^k`; negative exponents invert. `0^0 = 1`, `0^k = 0` for `k > 0`.
    pub fn pow(&self, a: Elem, k: i64) -> Result<Elem> {
        if a == 0 {
            return match k {
                0 => Ok(1),
                k if k > 0 => Ok(0),
                _ => Err(Error::ZeroInverse),
            };
        }
        let order = (self.q - 1) as i64;
        let e = (self.log[a as usize] as i64 * k.rem_euclid(order)).rem_euclid(order);
        Ok(self.exp[e as usize])
    }

    /// Multiplicative order of a nonzero element.
    pub fn order(&self, a: Elem) -> Result<u64> {
        if a == 0 {
            return Err(Error::ZeroInverse);
        }
        let order = (self.q - 1) as u64;
        let l = self.log[a as usize] as u64;
        Ok(order / gcd_u64(order, l))
    }

    /// All `q` elements, zero first.
    pub fn elements(&self) -> impl Iterator<Item = Elem> {
        0..self.q
    }

    /// Renders an element as a polynomial in `w` (or an integer for prime fields).
    pub fn format(&self, a: Elem) -> String {
        if self.m == 1 {
            return a.to_string();
        }
        let digits = self.digits(a);
        let mut terms = Vec::new();
        for (k, &c) in digits.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            let var = match k {
                0 => String::new(),
                1 => "w".to_string(),
                _ => format!("w^{k}"),
            };
            terms.push(match (c, k) {
                (_, 0) => c.to_string(),
                (1, _) => var,
                _ => format!("{c}*{var}"),
            });
        }
        if terms.is_empty() {
            "0".into()
        } else {
            terms.join("+")
        }
    }
}

pub(crate) fn gcd_u64(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd_u64(b, a % b)
    }
}

/// Field element bundled with its field, for mixed-field-checked arithmetic.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FieldElement {
    field: Field,
    value: Elem,
}

impl FieldElement {
    pub fn new(field: &Field, value: u64) -> Result<Self> {
        let value = field.check(value)?;
        Ok(FieldElement { field: field.clone(), value })
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn value(&self) -> Elem {
        self.value
    }

    pub fn is_zero(&self) -> bool {
        self.value == 0
    }

    /// Coefficient vector over `F_p` in the polynomial basis.
    pub fn repr(&self) -> Vec<u32> {
        self.field.digits(self.value)
    }

    fn same(&self, other: &Self) -> Result<()> {
        if Arc::ptr_eq(&self.field, &other.field) || self.field == other.field {
            Ok(())
        } else {
            Err(Error::FieldMismatch)
        }
    }

    fn wrap(&self, value: Elem) -> Self {
        FieldElement { field: self.field.clone(), value }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.same(other)?;
        Ok(self.wrap(self.field.add(self.value, other.value)))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.same(other)?;
        Ok(self.wrap(self.field.sub(self.value, other.value)))
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.same(other)?;
        Ok(self.wrap(self.field.mul(self.value, other.value)))
    }

    pub fn inv(&self) -> Result<Self> {
        Ok(self.wrap(self.field.inv(self.value)?))
    }

    pub fn pow(&self, k: i64) -> Result<Self> {
        Ok(self.wrap(self.field.pow(self.value, k)?))
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.field.format(self.value))
    }
}
