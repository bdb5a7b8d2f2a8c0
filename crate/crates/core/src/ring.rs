//! The quotient ring `R = F_q[x]/(h)` and its CRT decomposition into fields.

use std::fmt;
use std::sync::{Arc, OnceLock};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{make_field, Elem, Field, FieldElement};
use crate::matrix::Matrix;
use crate::poly::{Factorization, Poly};

/// Code family, derived from the shape of `h`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Family {
    /// `h = x^n - 1`
    #[serde(rename = "QC")]
    QuasiCyclic,
    /// `h = x^n - alpha`, `alpha` not in `{0, 1}`
    #[serde(rename = "QT")]
    QuasiTwisted { alpha: Elem },
    /// any other separable `h`
    #[serde(rename = "QPC")]
    QuasiPolycyclic,
    #[serde(rename = "generic")]
    Generic,
}

impl Family {
    pub fn label(&self) -> &'static str {
        match self {
            Family::QuasiCyclic => "QC",
            Family::QuasiTwisted { .. } => "QT",
            Family::QuasiPolycyclic => "QPC",
            Family::Generic => "generic",
        }
    }

    pub fn alpha(&self) -> Option<Elem> {
        match self {
            Family::QuasiTwisted { alpha } => Some(*alpha),
            _ => None,
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

pub type Ring = Arc<QuotientRing>;

impl PartialEq for QuotientRing {
    fn eq(&self, other: &Self) -> bool {
        self.same_as(other)
    }
}

impl Eq for QuotientRing {}

#[derive(Debug)]
pub struct QuotientRing {
    field: Field,
    h: Poly,
    n: usize,
}

impl QuotientRing {
    /// `h` must be monic of degree at least 1.
    pub fn new(h: &Poly) -> Result<Ring> {
        match h.degree() {
            Some(d) if d >= 1 && h.is_monic() => Ok(Arc::new(QuotientRing {
                field: h.field().clone(),
                h: h.clone(),
                n: d,
            })),
            got => Err(Error::BadModulus { min: 1, got }),
        }
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn modulus(&self) -> &Poly {
        &self.h
    }

    /// Co-index `n = deg h`.
    pub fn n(&self) -> usize {
        self.n
    }

    /// `q^n`, saturating.
    pub fn size(&self) -> u128 {
        (self.field.size() as u128).checked_pow(self.n as u32).unwrap_or(u128::MAX)
    }

    pub fn family(&self) -> Family {
        let h = self.h.coeffs();
        let binomial = h[1..self.n].iter().all(|&c| c == 0);
        if binomial {
            let alpha = self.field.neg(h[0]);
            match alpha {
                1 => return Family::QuasiCyclic,
                0 => {}
                _ => return Family::QuasiTwisted { alpha },
            }
        }
        if self.h.is_separable().unwrap_or(false) {
            Family::QuasiPolycyclic
        } else {
            Family::Generic
        }
    }

    pub fn same_as(&self, other: &QuotientRing) -> bool {
        std::ptr::eq(self, other) || self.h == other.h
    }

    /// Reduces `p` modulo `h`.
    pub fn element(self: &Ring, p: &Poly) -> Result<ResidueElement> {
        Ok(ResidueElement { ring: self.clone(), value: p.rem(&self.h)? })
    }

    pub fn zero(self: &Ring) -> ResidueElement {
        ResidueElement { ring: self.clone(), value: Poly::zero(&self.field) }
    }

    pub fn one(self: &Ring) -> ResidueElement {
        ResidueElement { ring: self.clone(), value: Poly::one(&self.field) }
    }

    pub fn x(self: &Ring) -> ResidueElement {
        self.element(&Poly::x(&self.field)).expect("same field")
    }

    /// Residue whose coefficient vector is the base-`q` expansion of `index`.
    pub fn from_index(self: &Ring, mut index: u64) -> ResidueElement {
        let q = self.field.size() as u64;
        let mut coeffs = Vec::with_capacity(self.n);
        for _ in 0..self.n {
            coeffs.push((index % q) as Elem);
            index /= q;
        }
        ResidueElement { ring: self.clone(), value: Poly::from_coeffs(&self.field, coeffs) }
    }

    /// Coefficient vectors (length `n`) of all units, in index order.
    pub fn unit_indices(self: &Ring) -> Vec<u64> {
        let total = self.size() as u64;
        (0..total).filter(|&i| self.from_index(i).is_unit()).collect()
    }

    pub fn crt(self: &Ring) -> Result<CrtDecomposition> {
        CrtDecomposition::new(self)
    }
}

#[derive(Clone)]
pub struct ResidueElement {
    ring: Ring,
    value: Poly,
}

impl PartialEq for ResidueElement {
    fn eq(&self, other: &Self) -> bool {
        self.ring.same_as(&other.ring) && self.value == other.value
    }
}

impl Eq for ResidueElement {}

impl fmt::Debug for ResidueElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}] mod ({})", self.value, self.ring.h)
    }
}

impl fmt::Display for ResidueElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

impl ResidueElement {
    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn value(&self) -> &Poly {
        &self.value
    }

    pub fn is_zero(&self) -> bool {
        self.value.is_zero()
    }

    /// Coefficients padded to length `n`.
    pub fn coeff_vector(&self) -> Vec<Elem> {
        (0..self.ring.n).map(|i| self.value.coeff(i)).collect()
    }

    pub fn index(&self) -> u64 {
        let q = self.ring.field.size() as u64;
        self.value.coeffs().iter().rev().fold(0, |acc, &c| acc * q + c as u64)
    }

    fn check(&self, other: &Self) -> Result<()> {
        if self.ring.same_as(&other.ring) {
            Ok(())
        } else {
            Err(Error::RingMismatch)
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        Ok(ResidueElement { ring: self.ring.clone(), value: &self.value + &other.value })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        Ok(ResidueElement { ring: self.ring.clone(), value: &self.value - &other.value })
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        self.ring.element(&(&self.value * &other.value))
    }

    /// Unit test via `gcd(a, h) = 1`.
    pub fn is_unit(&self) -> bool {
        !self.value.is_zero() && self.value.gcd(&self.ring.h).map(|g| g.is_one()).unwrap_or(false)
    }

    pub fn inverse(&self) -> Option<Self> {
        if self.value.is_zero() {
            return None;
        }
        let (g, s, _) = self.value.ext_gcd(&self.ring.h).ok()?;
        g.is_one().then(|| self.ring.element(&s).expect("same field"))
    }

    /// `n x n` matrix whose row `k` is the coefficient vector of `x^k a mod h`.
    pub fn expansion_matrix(&self) -> Matrix {
        let field = &self.ring.field;
        let n = self.ring.n;
        let h = self.ring.h.coeffs();
        let mut rows = Vec::with_capacity(n);
        let mut cur = self.coeff_vector();
        for _ in 0..n {
            rows.push(cur.clone());
            // multiply by x and fold the overflow back with h (monic)
            let top = cur[n - 1];
            for i in (1..n).rev() {
                cur[i] = cur[i - 1];
            }
            cur[0] = 0;
            if top != 0 {
                for i in 0..n {
                    cur[i] = field.sub(cur[i], field.mul(top, h[i]));
                }
            }
        }
        Matrix::from_rows(field, rows).expect("rectangular")
    }
}

/// One field component `F_q[x]/(h_i) ~ F_{q^{d_i}}` of the CRT decomposition.
#[derive(Debug)]
pub struct Constituent {
    pub factor: Poly,
    pub field: Field,
    /// Chosen root of `factor` in `field`.
    pub root: Elem,
    /// Image of each base-field element in `field`.
    embedding: Vec<Elem>,
    /// Inverse of evaluation at `root`, built on first use.
    lift: OnceLock<Vec<u64>>,
}

impl Constituent {
    pub fn degree(&self) -> usize {
        self.factor.degree().unwrap()
    }

    pub fn embed(&self, c: Elem) -> Elem {
        self.embedding[c as usize]
    }

    /// `p(root)` for `p` over the base field.
    pub fn evaluate(&self, p: &Poly) -> Elem {
        let k = &self.field;
        p.coeffs().iter().rev().fold(0, |acc, &c| k.add(k.mul(acc, self.root), self.embed(c)))
    }

    /// Residue index `c mod h_i` (base-`q` digits, degree `< d_i`) with `c(root) = value`.
    fn lift_index(&self, base: &Field, value: Elem) -> u64 {
        let table = self.lift.get_or_init(|| {
            let q = base.size() as u64;
            let d = self.degree();
            let mut table = vec![0u64; self.field.size() as usize];
            for idx in 0..q.pow(d as u32) {
                let coeffs = (0..d).map(|i| ((idx / q.pow(i as u32)) % q) as Elem).collect();
                let v = self.evaluate(&Poly::from_coeffs(base, coeffs));
                table[v as usize] = idx;
            }
            table
        });
        table[value as usize]
    }
}

/// `R ~ F_{q^{d_1}} + ... + F_{q^{d_r}}` for separable `h`.
#[derive(Debug)]
pub struct CrtDecomposition {
    ring: Ring,
    factorization: Factorization,
    constituents: Vec<Constituent>,
    idempotents: Vec<Poly>,
}

impl CrtDecomposition {
    pub fn new(ring: &Ring) -> Result<Self> {
        let h = ring.modulus();
        let factorization = h.factorize()?;
        if !factorization.is_squarefree() {
            return Err(Error::NotSeparable);
        }
        let base = ring.field().clone();
        let (p, m) = (base.characteristic() as u64, base.degree());
        let mut constituents = Vec::with_capacity(factorization.len());
        let mut idempotents = Vec::with_capacity(factorization.len());
        for (factor, _) in &factorization.factors {
            let d = factor.degree().unwrap() as u32;
            let field = make_field(p, m * d)?;
            let embedding = embed_base(&base, &field);
            let root = field
                .elements()
                .find(|&z| {
                    factor.coeffs().iter().rev().fold(0, |acc, &c| field.add(field.mul(acc, z), embedding[c as usize])) == 0
                })
                .expect("an irreducible of degree d splits in the field of size q^d");
            constituents.push(Constituent { factor: factor.clone(), field, root, embedding, lift: OnceLock::new() });

            let cofactor = h.div_rem(factor)?.0;
            let (_, s, _) = cofactor.rem(factor)?.ext_gcd(factor)?;
            idempotents.push((&cofactor * &s).rem(h)?);
        }
        Ok(CrtDecomposition { ring: ring.clone(), factorization, constituents, idempotents })
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn factorization(&self) -> &Factorization {
        &self.factorization
    }

    pub fn constituents(&self) -> &[Constituent] {
        &self.constituents
    }

    /// Number of constituents `r`.
    pub fn len(&self) -> usize {
        self.constituents.len()
    }

    pub fn is_empty(&self) -> bool {
        self.constituents.is_empty()
    }

    /// Common degree `n / r` if all factor degrees agree.
    pub fn equal_degree(&self) -> Option<usize> {
        let d = self.constituents.first()?.degree();
        self.constituents.iter().all(|c| c.degree() == d).then_some(d)
    }

    /// `a(xi_i)` in each constituent field, as raw indices.
    pub fn project_raw(&self, a: &ResidueElement) -> Result<Vec<Elem>> {
        if !self.ring.same_as(a.ring()) {
            return Err(Error::RingMismatch);
        }
        Ok(self.constituents.iter().map(|c| c.evaluate(a.value())).collect())
    }

    pub fn project(&self, a: &ResidueElement) -> Result<Vec<FieldElement>> {
        self.project_raw(a)?
            .into_iter()
            .zip(&self.constituents)
            .map(|(v, c)| FieldElement::new(&c.field, v as u64))
            .collect()
    }

    /// Inverse CRT: the residue whose projection is `values`.
    pub fn reconstruct(&self, values: &[Elem]) -> Result<ResidueElement> {
        if values.len() != self.constituents.len() {
            return Err(Error::LengthMismatch { expected: self.constituents.len(), got: values.len() });
        }
        let base = self.ring.field();
        let q = base.size() as u64;
        let mut acc = Poly::zero(base);
        for ((c, e), &v) in self.constituents.iter().zip(&self.idempotents).zip(values) {
            c.field.check(v as u64)?;
            let mut idx = c.lift_index(base, v);
            let mut coeffs = Vec::with_capacity(c.degree());
            for _ in 0..c.degree() {
                coeffs.push((idx % q) as Elem);
                idx /= q;
            }
            acc = &acc + &(&Poly::from_coeffs(base, coeffs) * e);
        }
        self.ring.element(&acc)
    }

    /// `(factor, constituent field size, root index)` per constituent.
    pub fn summary(&self) -> Vec<(String, u32, Elem)> {
        self.constituents.iter().map(|c| (c.factor.to_string(), c.field.size(), c.root)).collect()
    }
}

impl fmt::Display for CrtDecomposition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (factor, size, root) in self.summary() {
            writeln!(f, "({factor}, {size}, {root})")?;
        }
        Ok(())
    }
}

/// Embeds `F_{p^m}` into a field `F_{p^{md}}` by sending `w` to the first root
/// of the base modulus in the target's element order.
fn embed_base(base: &Field, target: &Field) -> Vec<Elem> {
    if base.degree() == 1 {
        return base.elements().collect();
    }
    let modulus = base.modulus();
    let gamma = target
        .elements()
        .find(|&z| modulus.iter().rev().fold(0, |acc, &c| target.add(target.mul(acc, z), c)) == 0)
        .expect("base field embeds into its extension");
    base.elements()
        .map(|c| {
            base.digits(c)
                .iter()
                .rev()
                .fold(0, |acc, &d| target.add(target.mul(acc, gamma), d))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::field_of_size;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn ring(q: u64, h: &[u32]) -> Ring {
        let f = field_of_size(q).unwrap();
        QuotientRing::new(&Poly::from_coeffs(&f, h.to_vec())).unwrap()
    }

    fn el(r: &Ring, c: &[u32]) -> ResidueElement {
        r.element(&Poly::from_coeffs(r.field(), c.to_vec())).unwrap()
    }

    #[test]
    fn multiplication_examples() {
        let r = ring(2, &[1, 0, 0, 1]);
        assert!(el(&r, &[0, 1]).mul(&el(&r, &[0, 0, 1])).unwrap().value().is_one());
        let a = el(&r, &[1, 1, 0]);
        assert_eq!(r.one().mul(&a).unwrap(), a);
        let r2 = ring(2, &[1, 1, 1]);
        assert_eq!(el(&r2, &[0, 1]).mul(&el(&r2, &[0, 1])).unwrap(), el(&r2, &[1, 1]));
        assert_eq!(el(&r, &[1]).mul(&el(&r2, &[1])), Err(Error::RingMismatch));
    }

    #[test]
    fn unit_examples() {
        let r = ring(2, &[1, 0, 0, 1]);
        assert!(r.one().is_unit());
        assert!(!el(&r, &[1, 1]).is_unit());
        assert!(el(&r, &[0, 1]).is_unit());
        assert!(!r.zero().is_unit());
        let inv = el(&r, &[0, 1]).inverse().unwrap();
        assert_eq!(inv, el(&r, &[0, 0, 1]));
    }

    #[test]
    fn expansion_examples() {
        let r = ring(2, &[1, 0, 0, 1]);
        assert_eq!(r.one().expansion_matrix(), Matrix::identity(r.field(), 3));
        assert_eq!(r.x().expansion_matrix().to_rows(), vec![vec![0, 1, 0], vec![0, 0, 1], vec![1, 0, 0]]);
        let f4 = field_of_size(4).unwrap();
        let alpha = f4.w().unwrap();
        let r4 = QuotientRing::new(&Poly::binomial(&f4, 2, alpha)).unwrap();
        assert_eq!(r4.x().expansion_matrix().to_rows(), vec![vec![0, 1], vec![alpha, 0]]);
        assert_eq!(r4.family(), Family::QuasiTwisted { alpha });
    }

    #[test]
    fn families() {
        assert_eq!(ring(2, &[1, 0, 0, 1]).family(), Family::QuasiCyclic);
        assert_eq!(ring(2, &[1, 1, 0, 1]).family(), Family::QuasiPolycyclic);
        assert_eq!(ring(3, &[2, 0, 1]).family(), Family::QuasiCyclic);
        assert_eq!(ring(3, &[1, 0, 1]).family(), Family::QuasiTwisted { alpha: 2 });
        assert_eq!(ring(2, &[0, 0, 1]).family(), Family::Generic);
        assert_eq!(ring(2, &[0, 1, 1]).family(), Family::QuasiPolycyclic);
        assert_eq!(ring(2, &[1, 0, 1, 1, 1]).family(), Family::QuasiPolycyclic);
        // (x^2+1)(x^2+x+1) has a repeated root
        assert_eq!(ring(2, &[1, 1, 0, 1, 1]).family(), Family::Generic);
    }

    #[test]
    fn bad_moduli() {
        let f = field_of_size(3).unwrap();
        assert!(QuotientRing::new(&Poly::from_coeffs(&f, vec![1, 2])).is_err());
        assert!(QuotientRing::new(&Poly::one(&f)).is_err());
    }

    #[test]
    fn crt_examples() {
        let r = ring(2, &[1, 0, 0, 1]);
        let d = r.crt().unwrap();
        let sizes: Vec<u32> = d.constituents().iter().map(|c| c.field.size()).collect();
        assert_eq!(sizes, vec![2, 4]);
        // x maps to 1 at x+1 and to a root of x^2+x+1 in F4
        let proj = d.project_raw(&r.x()).unwrap();
        assert_eq!(proj[0], 1);
        assert_eq!(proj[1], d.constituents()[1].root);
        assert_eq!(d.project_raw(&r.one()).unwrap(), vec![1, 1]);
        // a = x^2+x+1 vanishes on the second component
        assert_eq!(d.project_raw(&el(&r, &[1, 1, 1])).unwrap()[1], 0);

        let irreducible = ring(2, &[1, 1, 0, 1]);
        assert_eq!(irreducible.crt().unwrap().len(), 1);
        assert_eq!(irreducible.crt().unwrap().constituents()[0].field.size(), 8);

        assert_eq!(ring(2, &[1, 0, 1]).crt().unwrap_err(), Error::NotSeparable);
    }

    #[test]
    fn crt_over_extension_base() {
        // x^5 - 1 over F4 splits as (x+1)(x^2+wx+1)(x^2+w^2x+1)
        let f4 = field_of_size(4).unwrap();
        let r = QuotientRing::new(&Poly::binomial(&f4, 5, 1)).unwrap();
        let d = r.crt().unwrap();
        assert_eq!(d.factorization().degrees(), vec![1, 2, 2]);
        for c in d.constituents() {
            assert_eq!(c.evaluate(&c.factor), 0);
            assert_eq!(c.field.size(), 4u32.pow(c.degree() as u32));
        }
    }

    /// Rank of the expansion matrix, unit test by gcd and CRT nonvanishing agree.
    #[test]
    fn unit_criteria_agree_exhaustively() {
        for n in 1..=7usize {
            let f = field_of_size(2).unwrap();
            let r = QuotientRing::new(&Poly::binomial(&f, n, 1)).unwrap();
            let crt = r.crt().ok();
            for idx in 0..r.size() as u64 {
                let a = r.from_index(idx);
                let by_gcd = a.is_unit();
                let by_rank = a.expansion_matrix().rank() == n;
                assert_eq!(by_gcd, by_rank, "n={n} a={a}");
                if let Some(d) = &crt {
                    let by_crt = d.project_raw(&a).unwrap().iter().all(|&v| v != 0);
                    assert_eq!(by_gcd, by_crt, "n={n} a={a}");
                }
            }
        }
    }

    #[test]
    fn crt_is_a_ring_homomorphism_and_invertible() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for (q, h) in [(2u64, vec![1, 0, 0, 0, 0, 0, 0, 0, 0, 1]), (3, vec![2, 0, 0, 0, 1]), (4, vec![1, 0, 0, 0, 0, 1]), (2, vec![1, 1, 0, 1, 0, 1, 1])] {
            let r = ring(q, &h);
            let Ok(d) = r.crt() else { continue };
            let size = r.size() as u64;
            for _ in 0..500 {
                let a = r.from_index(rng.random_range(0..size));
                let b = r.from_index(rng.random_range(0..size));
                let pa = d.project_raw(&a).unwrap();
                let pb = d.project_raw(&b).unwrap();
                let pab = d.project_raw(&a.mul(&b).unwrap()).unwrap();
                let psum = d.project_raw(&a.add(&b).unwrap()).unwrap();
                for (i, c) in d.constituents().iter().enumerate() {
                    assert_eq!(pab[i], c.field.mul(pa[i], pb[i]));
                    assert_eq!(psum[i], c.field.add(pa[i], pb[i]));
                }
                assert_eq!(d.reconstruct(&pa).unwrap(), a);
            }
        }
    }

    #[test]
    fn expansion_matrix_is_multiplicative() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for (q, h) in [(2u64, vec![1, 0, 0, 0, 0, 0, 1]), (3, vec![1, 2, 0, 1]), (4, vec![2, 0, 0, 1])] {
            let r = ring(q, &h);
            for _ in 0..100 {
                let a = r.from_index(rng.random_range(0..r.size() as u64));
                let b = r.from_index(rng.random_range(0..r.size() as u64));
                let lhs = a.mul(&b).unwrap().expansion_matrix();
                let rhs = a.expansion_matrix().mul(&b.expansion_matrix()).unwrap();
                assert_eq!(lhs, rhs);
            }
        }
    }

    #[test]
    fn index_round_trip() {
        let r = ring(3, &[1, 2, 0, 1]);
        for i in 0..27 {
            assert_eq!(r.from_index(i).index(), i);
        }
    }
}
