//! Dense univariate polynomials over a [`FiniteField`] and their factorization.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_bigint::BigUint;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::field::{Elem, Field, FieldElement, FiniteField};

/// Fixed seed for equal-degree splitting, so factorization is a pure function.
const SPLIT_SEED: u64 = 0x5eed_c15f_0f9e_0001;

/// Polynomial with coefficients indexed by ascending power of `x`.
/// The coefficient vector carries no trailing zeros; the zero polynomial is empty.
#[derive(Clone)]
pub struct Poly {
    field: Field,
    coeffs: Vec<Elem>,
}

impl PartialEq for Poly {
    fn eq(&self, other: &Self) -> bool {
        self.coeffs == other.coeffs && same_field(&self.field, &other.field)
    }
}

impl Eq for Poly {}

impl std::hash::Hash for Poly {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.coeffs.hash(state);
    }
}

fn same_field(a: &Field, b: &Field) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly({})", self)
    }
}

impl Poly {
    pub fn from_coeffs(field: &Field, mut coeffs: Vec<Elem>) -> Self {
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        Poly { field: field.clone(), coeffs }
    }

    /// Builds a polynomial from element indices, validating each one.
    pub fn from_indices(field: &Field, indices: &[u64]) -> Result<Self> {
        let coeffs = indices.iter().map(|&i| field.check(i)).collect::<Result<Vec<_>>>()?;
        Ok(Self::from_coeffs(field, coeffs))
    }

    pub fn zero(field: &Field) -> Self {
        Poly { field: field.clone(), coeffs: Vec::new() }
    }

    pub fn one(field: &Field) -> Self {
        Self::constant(field, 1)
    }

    pub fn constant(field: &Field, c: Elem) -> Self {
        Self::from_coeffs(field, vec![c])
    }

    pub fn x(field: &Field) -> Self {
        Self::monomial(field, 1, 1)
    }

    /// `c * x^k`.
    pub fn monomial(field: &Field, c: Elem, k: usize) -> Self {
        let mut coeffs = vec![0; k + 1];
        coeffs[k] = c;
        Self::from_coeffs(field, coeffs)
    }

    /// `x^n - alpha`.
    pub fn binomial(field: &Field, n: usize, alpha: Elem) -> Self {
        let mut coeffs = vec![0; n + 1];
        coeffs[n] = 1;
        coeffs[0] = field.neg(alpha);
        Self::from_coeffs(field, coeffs)
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn coeffs(&self) -> &[Elem] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> Elem {
        self.coeffs.get(i).copied().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs == [1]
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn lead(&self) -> Elem {
        self.coeffs.last().copied().unwrap_or(0)
    }

    pub fn is_monic(&self) -> bool {
        self.lead() == 1
    }

    /// Number of nonzero coefficients.
    pub fn weight(&self) -> usize {
        self.coeffs.iter().filter(|&&c| c != 0).count()
    }

    pub fn monic(&self) -> Self {
        if self.is_zero() || self.is_monic() {
            return self.clone();
        }
        let inv = self.field.inv(self.lead()).expect("nonzero lead");
        self.scale(inv)
    }

    pub fn scale(&self, c: Elem) -> Self {
        let f = &self.field;
        Self::from_coeffs(f, self.coeffs.iter().map(|&a| f.mul(a, c)).collect())
    }

    fn check_field(&self, other: &Self) -> Result<()> {
        if same_field(&self.field, &other.field) {
            Ok(())
        } else {
            Err(Error::FieldMismatch)
        }
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.check_field(other)?;
        Ok(self.add_unchecked(other))
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.check_field(other)?;
        Ok(self.add_unchecked(&-other))
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        self.check_field(other)?;
        Ok(self.mul_unchecked(other))
    }

    fn add_unchecked(&self, other: &Self) -> Self {
        let f = &self.field;
        let len = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..len).map(|i| f.add(self.coeff(i), other.coeff(i))).collect();
        Self::from_coeffs(f, coeffs)
    }

    fn mul_unchecked(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero(&self.field);
        }
        let f = &self.field;
        let mut out = vec![0; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                out[i + j] = f.add(out[i + j], f.mul(a, b));
            }
        }
        Self::from_coeffs(f, out)
    }

    /// Euclidean division: `(quotient, remainder)` with `deg r < deg divisor`.
    pub fn div_rem(&self, divisor: &Self) -> Result<(Self, Self)> {
        self.check_field(divisor)?;
        if divisor.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let f = &self.field;
        let dd = divisor.coeffs.len() - 1;
        if self.coeffs.len() <= dd {
            return Ok((Self::zero(f), self.clone()));
        }
        let lead_inv = f.inv(divisor.lead())?;
        let mut rem = self.coeffs.clone();
        let mut quot = vec![0; rem.len() - dd];
        for k in (dd..rem.len()).rev() {
            let c = rem[k];
            if c == 0 {
                continue;
            }
            let factor = f.mul(c, lead_inv);
            quot[k - dd] = factor;
            for (j, &dc) in divisor.coeffs.iter().enumerate() {
                let idx = k - dd + j;
                rem[idx] = f.sub(rem[idx], f.mul(factor, dc));
            }
        }
        rem.truncate(dd);
        Ok((Self::from_coeffs(f, quot), Self::from_coeffs(f, rem)))
    }

    pub fn rem(&self, divisor: &Self) -> Result<Self> {
        Ok(self.div_rem(divisor)?.1)
    }

    /// Horner evaluation at a point of the coefficient field.
    pub fn eval(&self, point: Elem) -> Elem {
        let f = &self.field;
        self.coeffs.iter().rev().fold(0, |acc, &c| f.add(f.mul(acc, point), c))
    }

    pub fn eval_checked(&self, point: &FieldElement) -> Result<FieldElement> {
        if !same_field(&self.field, point.field()) {
            return Err(Error::FieldMismatch);
        }
        FieldElement::new(&self.field, self.eval(point.value()) as u64)
    }

    /// Formal derivative.
    pub fn derivative(&self) -> Self {
        let f = &self.field;
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, &c)| f.mul(f.from_int(i as i64), c))
            .collect();
        Self::from_coeffs(f, coeffs)
    }

    /// Monic greatest common divisor; `gcd(a, 0) = monic(a)`.
    pub fn gcd(&self, other: &Self) -> Result<Self> {
        self.check_field(other)?;
        if self.is_zero() && other.is_zero() {
            return Err(Error::GcdOfZeros);
        }
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.rem(&b)?;
            a = b;
            b = r;
        }
        Ok(a.monic())
    }

    /// Extended Euclid: returns `(g, s, t)` with `s*self + t*other = g`, `g` monic.
    pub fn ext_gcd(&self, other: &Self) -> Result<(Self, Self, Self)> {
        self.check_field(other)?;
        if self.is_zero() && other.is_zero() {
            return Err(Error::GcdOfZeros);
        }
        let f = &self.field;
        let (mut r0, mut r1) = (self.clone(), other.clone());
        let (mut s0, mut s1) = (Self::one(f), Self::zero(f));
        let (mut t0, mut t1) = (Self::zero(f), Self::one(f));
        while !r1.is_zero() {
            let (q, r) = r0.div_rem(&r1)?;
            let s2 = &s0 - &(&q * &s1);
            let t2 = &t0 - &(&q * &t1);
            r0 = std::mem::replace(&mut r1, r);
            s0 = std::mem::replace(&mut s1, s2);
            t0 = std::mem::replace(&mut t1, t2);
        }
        let inv = f.inv(r0.lead())?;
        Ok((r0.scale(inv), s0.scale(inv), t0.scale(inv)))
    }

    /// `self^exp mod modulus`.
    pub fn pow_mod(&self, exp: &BigUint, modulus: &Self) -> Result<Self> {
        let mut result = Self::one(&self.field).rem(modulus)?;
        let base = self.rem(modulus)?;
        for i in (0..exp.bits()).rev() {
            result = (&result * &result).rem(modulus)?;
            if exp.bit(i) {
                result = (&result * &base).rem(modulus)?;
            }
        }
        Ok(result)
    }

    pub fn pow_mod_u64(&self, exp: u64, modulus: &Self) -> Result<Self> {
        self.pow_mod(&BigUint::from(exp), modulus)
    }

    pub fn pow(&self, k: usize) -> Self {
        let mut acc = Self::one(&self.field);
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    /// Divisibility test, `other | self`.
    pub fn is_divisible_by(&self, other: &Self) -> Result<bool> {
        Ok(self.rem(other)?.is_zero())
    }

    /// True iff `gcd(h, h') = 1`.
    pub fn is_separable(&self) -> Result<bool> {
        self.require_nonconstant()?;
        Ok(self.gcd(&self.derivative())?.is_one())
    }

    fn require_nonconstant(&self) -> Result<()> {
        match self.degree() {
            Some(d) if d >= 1 => Ok(()),
            _ => Err(Error::ConstantPolynomial),
        }
    }

    /// Rabin's test: `x^{q^n} = x mod f` and `gcd(x^{q^{n/r}} - x, f) = 1` for primes `r | n`.
    pub fn is_irreducible(&self) -> Result<bool> {
        self.require_nonconstant()?;
        let f = self.monic();
        let n = f.degree().unwrap();
        if n == 1 {
            return Ok(true);
        }
        let q = self.field.size() as u64;
        let x = Self::x(&self.field);
        let mut frob = vec![x.rem(&f)?];
        for _ in 0..n {
            let next = frob.last().unwrap().pow_mod_u64(q, &f)?;
            frob.push(next);
        }
        if frob[n] != x.rem(&f)? {
            return Ok(false);
        }
        for r in prime_factors(n as u64) {
            let k = n / r as usize;
            let g = (&frob[k] - &x).gcd(&f)?;
            if !g.is_one() {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Complete factorization into monic irreducibles with multiplicities.
    pub fn factorize(&self) -> Result<Factorization> {
        self.require_nonconstant()?;
        let constant = self.lead();
        let monic = self.monic();
        let mut rng = ChaCha8Rng::seed_from_u64(SPLIT_SEED);
        let mut factors = Vec::new();
        for (part, mult) in squarefree_decomposition(&monic)? {
            for (block, d) in distinct_degree(&part)? {
                for irreducible in equal_degree(&block, d, &mut rng)? {
                    factors.push((irreducible, mult));
                }
            }
        }
        factors.sort_by(|a, b| a.0.canonical_cmp(&b.0));
        Ok(Factorization {
            constant: FieldElement::new(&self.field, constant as u64)?,
            factors,
        })
    }

    /// Orders by degree, then by coefficients from the top down (the index order).
    pub fn canonical_cmp(&self, other: &Self) -> Ordering {
        self.coeffs
            .len()
            .cmp(&other.coeffs.len())
            .then_with(|| self.coeffs.iter().rev().cmp(other.coeffs.iter().rev()))
    }

    /// `p`-th root of a polynomial whose derivative vanishes.
    fn pth_root(&self) -> Self {
        let f = &self.field;
        let p = f.characteristic() as usize;
        // a^(1/p) = a^(q/p) in F_q
        let root_exp = (f.size() / f.characteristic()) as i64;
        let coeffs = self
            .coeffs
            .iter()
            .step_by(p)
            .map(|&c| f.pow(c, root_exp).expect("nonnegative exponent"))
            .collect();
        Self::from_coeffs(f, coeffs)
    }

    /// Replaces every coefficient by its image under `map`.
    pub fn map_coeffs(&self, target: &Field, map: impl Fn(Elem) -> Elem) -> Self {
        Self::from_coeffs(target, self.coeffs.iter().map(|&c| map(c)).collect())
    }
}

impl<'a> Add for &'a Poly {
    type Output = Poly;
    /// Panics on mixed fields; use [`Poly::try_add`] for a checked version.
    fn add(self, other: &'a Poly) -> Poly {
        self.try_add(other).expect("polynomials over different fields")
    }
}

impl<'a> Sub for &'a Poly {
    type Output = Poly;
    fn sub(self, other: &'a Poly) -> Poly {
        self.try_sub(other).expect("polynomials over different fields")
    }
}

impl<'a> Mul for &'a Poly {
    type Output = Poly;
    fn mul(self, other: &'a Poly) -> Poly {
        self.try_mul(other).expect("polynomials over different fields")
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        let f = &self.field;
        Poly::from_coeffs(f, self.coeffs.iter().map(|&c| f.neg(c)).collect())
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return out.write_str("0");
        }
        let f: &FiniteField = &self.field;
        let mut terms = Vec::new();
        for (k, &c) in self.coeffs.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            let var = match k {
                0 => String::new(),
                1 => "x".into(),
                _ => format!("x^{k}"),
            };
            let coef = f.format(c);
            let term = if k == 0 {
                coef
            } else if c == 1 {
                var
            } else if coef.contains('+') {
                format!("({coef})*{var}")
            } else {
                format!("{coef}*{var}")
            };
            terms.push(term);
        }
        out.write_str(&terms.join("+"))
    }
}

/// `constant * prod factor^multiplicity`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Factorization {
    pub constant: FieldElement,
    pub factors: Vec<(Poly, usize)>,
}

impl Factorization {
    /// Multiplies the factorization back out.
    pub fn product(&self) -> Poly {
        let field = self.constant.field();
        let mut acc = Poly::constant(field, self.constant.value());
        for (f, k) in &self.factors {
            acc = &acc * &f.pow(*k);
        }
        acc
    }

    pub fn degrees(&self) -> Vec<usize> {
        self.factors.iter().map(|(f, _)| f.degree().unwrap()).collect()
    }

    pub fn is_squarefree(&self) -> bool {
        self.factors.iter().all(|&(_, k)| k == 1)
    }

    /// Number of distinct irreducible factors.
    pub fn len(&self) -> usize {
        self.factors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.factors.is_empty()
    }
}

fn squarefree_decomposition(f: &Poly) -> Result<Vec<(Poly, usize)>> {
    let mut out = Vec::new();
    let p = f.field.characteristic() as usize;
    let mut c = f.gcd(&f.derivative())?;
    let mut w = f.div_rem(&c)?.0;
    let mut i = 1;
    while !w.is_one() {
        let y = w.gcd(&c)?;
        let fac = w.div_rem(&y)?.0;
        if !fac.is_one() {
            out.push((fac.monic(), i));
        }
        c = c.div_rem(&y)?.0;
        w = y;
        i += 1;
    }
    if !c.is_one() {
        let root = c.pth_root();
        for (g, k) in squarefree_decomposition(&root.monic())? {
            out.push((g, k * p));
        }
    }
    Ok(out)
}

/// Splits a squarefree monic polynomial into products of equal-degree irreducibles.
fn distinct_degree(f: &Poly) -> Result<Vec<(Poly, usize)>> {
    let field = f.field.clone();
    let q = field.size() as u64;
    let x = Poly::x(&field);
    let mut rest = f.clone();
    let mut h = x.rem(&rest)?;
    let mut out = Vec::new();
    let mut d = 1;
    while rest.degree().unwrap_or(0) >= 2 * d {
        h = h.pow_mod_u64(q, &rest)?;
        let g = (&h - &x).gcd(&rest)?;
        if !g.is_one() {
            rest = rest.div_rem(&g)?.0;
            h = h.rem(&rest)?;
            out.push((g, d));
        }
        d += 1;
    }
    if rest.degree().unwrap_or(0) > 0 {
        let d = rest.degree().unwrap();
        out.push((rest, d));
    }
    Ok(out)
}

/// Cantor-Zassenhaus splitting of a product of distinct degree-`d` irreducibles.
fn equal_degree(f: &Poly, d: usize, rng: &mut ChaCha8Rng) -> Result<Vec<Poly>> {
    let n = f.degree().unwrap();
    if n == d {
        return Ok(vec![f.clone()]);
    }
    let field = f.field.clone();
    let q = field.size() as u64;
    let even = field.characteristic() == 2;
    let odd_exp = if even {
        BigUint::zero()
    } else {
        (BigUint::from(q).pow(d as u32) - BigUint::one()) / BigUint::from(2u32)
    };
    let trace_len = field.degree() as usize * d;
    loop {
        let coeffs: Vec<Elem> = (0..n).map(|_| rng.random_range(0..field.size())).collect();
        let a = Poly::from_coeffs(&field, coeffs);
        if a.degree().unwrap_or(0) < 1 {
            continue;
        }
        let b = if even {
            // absolute trace a + a^2 + ... + a^(2^(md-1))
            let mut term = a.rem(f)?;
            let mut acc = term.clone();
            for _ in 1..trace_len {
                term = (&term * &term).rem(f)?;
                acc = &acc + &term;
            }
            acc
        } else {
            &a.pow_mod(&odd_exp, f)? - &Poly::one(&field)
        };
        if b.is_zero() {
            continue;
        }
        let g = b.gcd(f)?;
        let dg = g.degree().unwrap();
        if dg > 0 && dg < n {
            let other = f.div_rem(&g)?.0;
            let mut out = equal_degree(&g, d, rng)?;
            out.extend(equal_degree(&other, d, rng)?);
            return Ok(out);
        }
    }
}

pub(crate) fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Möbius function.
pub fn mobius(n: u64) -> i32 {
    let mut n = n;
    let mut sign = 1;
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            n /= d;
            if n % d == 0 {
                return 0;
            }
            sign = -sign;
        }
        d += 1;
    }
    if n > 1 {
        sign = -sign;
    }
    sign
}

/// Number of monic irreducible polynomials of degree `d` over `F_q`:
/// `(1/d) * sum_{e | d} mu(d/e) q^e`.
pub fn count_irreducibles(q: u64, d: u64) -> Result<BigUint> {
    if d < 1 {
        return Err(Error::Invalid("degree must be at least 1".into()));
    }
    let mut positive = BigUint::zero();
    let mut negative = BigUint::zero();
    for e in (1..=d).filter(|e| d % e == 0) {
        let term = BigUint::from(q).pow(e as u32);
        match mobius(d / e) {
            1 => positive += term,
            -1 => negative += term,
            _ => {}
        }
    }
    Ok((positive - negative) / BigUint::from(d))
}
