//! Binary images of t-CIS codes over `F_{2^m}` by basis expansion.
//!
//! Coordinate `i` of a length-`N` vector becomes the `m` bits at positions
//! `s * N + i`, `s = 0..m`: the image is `m` consecutive slices, slice `s`
//! holding the `e_s`-coefficients.

use crate::code::LinearCode;
use crate::error::{Error, Result};
use crate::field::{Elem, Field};
use crate::matrix::Matrix;

#[derive(Clone, Debug)]
pub struct DescentBasis {
    field: Field,
    basis: Vec<Elem>,
    /// Maps the F2 digit vector of an element to its coordinates in `basis`.
    to_coords: Matrix,
}

impl DescentBasis {
    pub fn new(field: &Field, basis: Vec<Elem>) -> Result<Self> {
        if field.characteristic() != 2 {
            return Err(Error::NotCharacteristicTwo(field.characteristic()));
        }
        let m = field.degree() as usize;
        if basis.len() != m {
            return Err(Error::LengthMismatch { expected: m, got: basis.len() });
        }
        let f2 = crate::field::make_field(2, 1)?;
        let mut rows = Vec::with_capacity(m);
        for &e in &basis {
            field.check(e as u64)?;
            rows.push(field.digits(e));
        }
        let to_coords = Matrix::from_rows(&f2, rows)?.inverse().ok_or(Error::DependentBasis)?;
        Ok(DescentBasis { field: field.clone(), basis, to_coords })
    }

    /// `{1, w, ..., w^{m-1}}` for the field's own modulus.
    pub fn polynomial(field: &Field) -> Result<Self> {
        let basis = (0..field.degree()).map(|i| 1 << i).collect();
        Self::new(field, basis)
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn elements(&self) -> &[Elem] {
        &self.basis
    }

    pub fn m(&self) -> usize {
        self.basis.len()
    }

    /// Coordinates `c` with `a = sum c_s e_s`.
    pub fn coordinates(&self, a: Elem) -> Vec<Elem> {
        self.to_coords.left_mul_vec(&self.field.digits(a)).expect("m digits")
    }
}

/// Slice-major binary expansion of `v`.
pub fn expand_vector(v: &[Elem], basis: &DescentBasis) -> Result<Vec<Elem>> {
    let len = v.len();
    let mut out = vec![0; basis.m() * len];
    for (i, &a) in v.iter().enumerate() {
        basis.field.check(a as u64)?;
        for (s, c) in basis.coordinates(a).into_iter().enumerate() {
            out[s * len + i] = c;
        }
    }
    Ok(out)
}

/// Binary code spanned by the expansions of `e_s g_i` over all basis elements
/// `e_s` and generator rows `g_i`, with information sets `I_j x {slices}`.
pub fn descend(code: &LinearCode, basis: &DescentBasis) -> Result<LinearCode> {
    let field = code.field();
    if field.characteristic() != 2 {
        return Err(Error::NotCharacteristicTwo(field.characteristic()));
    }
    if **field != *basis.field {
        return Err(Error::FieldMismatch);
    }
    if !code.partition_is_cis() {
        return Err(Error::NotCis);
    }
    let gen = code.gen_matrix();
    let len = code.length();
    let mut rows = Vec::with_capacity(basis.m() * code.dimension());
    for &e in &basis.basis {
        for r in 0..gen.rows() {
            let scaled: Vec<Elem> = gen.row(r).iter().map(|&g| field.mul(e, g)).collect();
            rows.push(expand_vector(&scaled, basis)?);
        }
    }
    let f2 = crate::field::make_field(2, 1)?;
    let partition = code
        .partition()
        .iter()
        .map(|set| (0..basis.m()).flat_map(|s| set.iter().map(move |&c| s * len + c)).collect())
        .collect();
    LinearCode::from_matrix(Matrix::from_rows(&f2, rows)?, partition)
}
