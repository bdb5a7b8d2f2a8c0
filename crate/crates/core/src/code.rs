//! One-generator codes `<(1, a_1, ..., a_{t-1})>` in `R^t` and general linear codes.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::distance::{min_distance_exhaustive, DistanceKernel, Sweep, DEFAULT_BUDGET};
use crate::error::{Error, Result};
use crate::field::{field_of_size, Elem, Field};
use crate::matrix::Matrix;
use crate::poly::Poly;
use crate::ring::{Family, QuotientRing, ResidueElement, Ring};

/// The tuple `(q, t, h, [a_1 .. a_{t-1}])`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeneratorSpec {
    ring: Ring,
    t: usize,
    generators: Vec<ResidueElement>,
}

impl GeneratorSpec {
    pub fn new(ring: &Ring, t: usize, generators: Vec<ResidueElement>) -> Result<Self> {
        if t < 2 {
            return Err(Error::BadIndex(t));
        }
        if generators.len() != t - 1 {
            return Err(Error::GeneratorCount { expected: t - 1, got: generators.len() });
        }
        if generators.iter().any(|a| !a.ring().same_as(ring)) {
            return Err(Error::RingMismatch);
        }
        Ok(GeneratorSpec { ring: ring.clone(), t, generators })
    }

    /// Builds a spec from residue indices (base-`q` coefficient expansions).
    pub fn from_indices(ring: &Ring, t: usize, indices: &[u64]) -> Result<Self> {
        let gens = indices.iter().map(|&i| ring.from_index(i)).collect();
        Self::new(ring, t, gens)
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn t(&self) -> usize {
        self.t
    }

    pub fn n(&self) -> usize {
        self.ring.n()
    }

    pub fn generators(&self) -> &[ResidueElement] {
        &self.generators
    }

    pub fn generator_indices(&self) -> Vec<u64> {
        self.generators.iter().map(ResidueElement::index).collect()
    }

    /// CIS test through `gcd(a_i, h) = 1` for every `i`.
    pub fn is_cis(&self) -> bool {
        self.generators.iter().all(ResidueElement::is_unit)
    }

    /// CIS test through the rank of every block `A_i` of the generator matrix.
    pub fn is_cis_by_rank(&self) -> bool {
        let n = self.n();
        let code = self.build_code();
        (1..self.t).all(|j| {
            let cols: Vec<usize> = (j * n..(j + 1) * n).collect();
            code.gen.select_columns(&cols).map(|b| b.rank() == n).unwrap_or(false)
        })
    }

    /// `G = (I_n | A_1 | ... | A_{t-1})`.
    pub fn build_code(&self) -> LinearCode {
        let field = self.ring.field().clone();
        let n = self.n();
        let mut blocks = vec![Matrix::identity(&field, n)];
        blocks.extend(self.generators.iter().map(ResidueElement::expansion_matrix));
        let gen = Matrix::hstack(&blocks).expect("square blocks");
        LinearCode {
            field,
            gen,
            family: self.ring.family(),
            info_sets: natural_blocks(n, self.t),
            spec: Some(self.clone()),
        }
    }

    /// Distance kernel with one systematic form per block. Form `j` is the
    /// generator scaled by `a_j^{-1}`, so no matrix inversion is needed.
    /// Falls back to the generic construction when some `a_j` is not a unit.
    pub fn kernel(&self) -> Result<DistanceKernel> {
        let inverses: Option<Vec<ResidueElement>> = self.generators.iter().map(ResidueElement::inverse).collect();
        let Some(inverses) = inverses else {
            return self.build_code().kernel();
        };
        let one = self.ring.one();
        let row: Vec<&ResidueElement> = std::iter::once(&one).chain(&self.generators).collect();
        let mut forms = vec![self.build_code().gen];
        for inv in &inverses {
            let blocks = row.iter().map(|g| Ok(g.mul(inv)?.expansion_matrix())).collect::<Result<Vec<_>>>()?;
            forms.push(Matrix::hstack(&blocks)?);
        }
        let n = self.n();
        Ok(DistanceKernel::from_forms(self.ring.field(), n, n * self.t, &forms))
    }

    /// Minimum distance of the code, stopping once a word of weight `<= floor` is seen.
    pub fn sweep(&self, floor: usize, budget: u128) -> Result<Sweep> {
        check_budget(self.ring.field().size(), self.n(), budget)?;
        Ok(self.kernel()?.sweep(floor))
    }

    pub fn min_distance(&self) -> Result<usize> {
        match self.sweep(0, DEFAULT_BUDGET)? {
            Sweep::Exact(d) | Sweep::AtMost(d) => Ok(d),
        }
    }

    pub fn to_record(&self, d: Option<usize>) -> CodeRecord {
        CodeRecord {
            q: self.ring.field().size(),
            n: self.n(),
            t: self.t,
            h: Some(self.ring.modulus().coeffs().to_vec()),
            generators: Some(self.generators.iter().map(ResidueElement::coeff_vector).collect()),
            family: self.ring.family().label().to_string(),
            alpha: self.ring.family().alpha(),
            d,
            gen_matrix: None,
        }
    }
}

impl fmt::Display for GeneratorSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let gens: Vec<String> = self.generators.iter().map(|a| a.to_string()).collect();
        write!(f, "h = {}, t = {}, a = [{}]", self.ring.modulus(), self.t, gens.join(", "))
    }
}

fn check_budget(q: u32, k: usize, budget: u128) -> Result<()> {
    let needed = (q as u128).checked_pow(k as u32).unwrap_or(u128::MAX);
    if needed > budget {
        return Err(Error::BudgetExceeded { needed, budget });
    }
    Ok(())
}

fn natural_blocks(k: usize, t: usize) -> Vec<Vec<usize>> {
    (0..t).map(|j| (j * k..(j + 1) * k).collect()).collect()
}

/// Linear code given by a full-rank generator matrix.
#[derive(Clone, Debug)]
pub struct LinearCode {
    field: Field,
    gen: Matrix,
    family: Family,
    /// Natural partition of the coordinates into `t` candidate information sets.
    info_sets: Vec<Vec<usize>>,
    spec: Option<GeneratorSpec>,
}

impl LinearCode {
    /// Wraps an arbitrary generator matrix. `partition` is the intended
    /// information-set partition; pass an empty vector when there is none.
    pub fn from_matrix(gen: Matrix, partition: Vec<Vec<usize>>) -> Result<Self> {
        if gen.rank() != gen.rows() {
            return Err(Error::RankDeficient);
        }
        for set in &partition {
            if let Some(&c) = set.iter().find(|&&c| c >= gen.cols()) {
                return Err(Error::ColumnOutOfRange(c));
            }
        }
        Ok(LinearCode { field: gen.field().clone(), gen, family: Family::Generic, info_sets: partition, spec: None })
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn length(&self) -> usize {
        self.gen.cols()
    }

    pub fn dimension(&self) -> usize {
        self.gen.rows()
    }

    pub fn gen_matrix(&self) -> &Matrix {
        &self.gen
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn partition(&self) -> &[Vec<usize>] {
        &self.info_sets
    }

    pub fn spec(&self) -> Option<&GeneratorSpec> {
        self.spec.as_ref()
    }

    /// `message * G`.
    pub fn encode(&self, message: &[Elem]) -> Result<Vec<Elem>> {
        if message.len() != self.dimension() {
            return Err(Error::LengthMismatch { expected: self.dimension(), got: message.len() });
        }
        for &m in message {
            self.field.check(m as u64)?;
        }
        self.gen.left_mul_vec(message)
    }

    /// True iff the submatrix on `cols` is invertible.
    pub fn is_information_set(&self, cols: &[usize]) -> Result<bool> {
        if cols.len() != self.dimension() {
            return Err(Error::WrongSetSize { expected: self.dimension(), got: cols.len() });
        }
        Ok(self.gen.select_columns(cols)?.is_invertible())
    }

    /// Whether every set of the stored partition is an information set and the
    /// sets partition the coordinates.
    pub fn partition_is_cis(&self) -> bool {
        let mut seen = vec![false; self.length()];
        for set in &self.info_sets {
            for &c in set {
                if seen[c] {
                    return false;
                }
                seen[c] = true;
            }
            if !self.is_information_set(set).unwrap_or(false) {
                return false;
            }
        }
        !self.info_sets.is_empty() && seen.iter().all(|&s| s)
    }

    fn check_budget(&self, budget: u128) -> Result<()> {
        check_budget(self.field.size(), self.dimension(), budget)
    }

    pub fn kernel(&self) -> Result<DistanceKernel> {
        DistanceKernel::new(&self.gen, &self.info_sets)
    }

    /// Minimum Hamming distance with the default budget of `2^26` codewords.
    pub fn min_distance(&self) -> Result<usize> {
        self.min_distance_with_budget(DEFAULT_BUDGET)
    }

    pub fn min_distance_with_budget(&self, budget: u128) -> Result<usize> {
        self.check_budget(budget)?;
        Ok(self.kernel()?.min_distance())
    }

    /// Sweep that gives up as soon as some codeword of weight `<= floor` appears.
    pub fn min_distance_above(&self, floor: usize, budget: u128) -> Result<Sweep> {
        self.check_budget(budget)?;
        Ok(self.kernel()?.sweep(floor))
    }

    /// Plain sweep over all `q^k` messages.
    pub fn min_distance_exhaustive(&self, budget: u128) -> Result<usize> {
        min_distance_exhaustive(&self.gen, budget)
    }

    pub fn to_record(&self, d: Option<usize>) -> CodeRecord {
        if let Some(spec) = &self.spec {
            return spec.to_record(d);
        }
        let k = self.dimension();
        CodeRecord {
            q: self.field.size(),
            n: k,
            t: if k == 0 { 0 } else { self.length() / k },
            h: None,
            generators: None,
            family: self.family.label().to_string(),
            alpha: None,
            d,
            gen_matrix: Some(self.gen.to_rows()),
        }
    }

    /// Generator matrix as text, one row per line. Symbols are digits for
    /// `q <= 10` and space-separated indices otherwise.
    pub fn matrix_text(&self) -> String {
        let q = self.field.size();
        let mut out = String::new();
        for r in 0..self.dimension() {
            let row = self.gen.row(r);
            let line = if q <= 10 {
                row.iter().map(|v| char::from_digit(*v, 10).unwrap()).collect::<String>()
            } else {
                row.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(" ")
            };
            out.push_str(&line);
            out.push('\n');
        }
        out
    }
}

/// Hamming weight.
pub fn weight(word: &[Elem]) -> usize {
    word.iter().filter(|&&v| v != 0).count()
}

/// JSON form of a code: `{q, n, t, h, generators, family, d}` for one-generator
/// codes, with `gen_matrix` instead of `h`/`generators` for generic codes.
/// Polynomials are ascending coefficient lists of element indices.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CodeRecord {
    pub q: u32,
    pub n: usize,
    pub t: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub h: Option<Vec<Elem>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub generators: Option<Vec<Vec<Elem>>>,
    pub family: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha: Option<Elem>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub d: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gen_matrix: Option<Vec<Vec<Elem>>>,
}

impl CodeRecord {
    /// Rebuilds the code. The family tag is recomputed from `h`, never trusted.
    pub fn to_code(&self) -> Result<LinearCode> {
        let field = field_of_size(self.q as u64)?;
        match (&self.h, &self.generators, &self.gen_matrix) {
            (Some(h), Some(gens), _) => {
                let indices: Vec<u64> = h.iter().map(|&c| c as u64).collect();
                let ring = QuotientRing::new(&Poly::from_indices(&field, &indices)?)?;
                let gens = gens
                    .iter()
                    .map(|g| {
                        let idx: Vec<u64> = g.iter().map(|&c| c as u64).collect();
                        ring.element(&Poly::from_indices(&field, &idx)?)
                    })
                    .collect::<Result<Vec<_>>>()?;
                Ok(GeneratorSpec::new(&ring, self.t, gens)?.build_code())
            }
            (_, _, Some(rows)) => {
                let gen = Matrix::from_rows(&field, rows.clone())?;
                let k = gen.rows();
                let partition = if k > 0 && self.t * k == gen.cols() { natural_blocks(k, self.t) } else { Vec::new() };
                LinearCode::from_matrix(gen, partition)
            }
            _ => Err(Error::Invalid("code record needs h and generators, or gen_matrix".into())),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::field_of_size;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn ring(q: u64, h: &[u32]) -> Ring {
        let f = field_of_size(q).unwrap();
        QuotientRing::new(&Poly::from_coeffs(&f, h.to_vec())).unwrap()
    }

    fn spec(r: &Ring, t: usize, gens: &[&[u32]]) -> GeneratorSpec {
        let gens = gens.iter().map(|g| r.element(&Poly::from_coeffs(r.field(), g.to_vec())).unwrap()).collect();
        GeneratorSpec::new(r, t, gens).unwrap()
    }

    fn x3m1() -> Ring {
        ring(2, &[1, 0, 0, 1])
    }

    #[test]
    fn spec_validation() {
        let r = x3m1();
        assert_eq!(GeneratorSpec::new(&r, 1, vec![]).unwrap_err(), Error::BadIndex(1));
        assert_eq!(
            GeneratorSpec::new(&r, 3, vec![r.one()]).unwrap_err(),
            Error::GeneratorCount { expected: 2, got: 1 }
        );
        let other = ring(2, &[1, 1, 0, 1]);
        assert_eq!(GeneratorSpec::new(&r, 2, vec![other.one()]).unwrap_err(), Error::RingMismatch);
    }

    #[test]
    fn build_examples() {
        let r = x3m1();
        let c = spec(&r, 2, &[&[1]]).build_code();
        assert_eq!(c.gen_matrix().to_rows(), vec![vec![1, 0, 0, 1, 0, 0], vec![0, 1, 0, 0, 1, 0], vec![0, 0, 1, 0, 0, 1]]);
        assert_eq!(c.min_distance().unwrap(), 2);
        assert_eq!(c.family(), Family::QuasiCyclic);

        let c = spec(&r, 2, &[&[0, 1]]).build_code();
        assert_eq!(c.gen_matrix().row(0), &[1, 0, 0, 0, 1, 0]);
        assert_eq!(c.gen_matrix().row(2), &[0, 0, 1, 1, 0, 0]);

        // t=3, a_1 = a_2 = 1 at n=2: every codeword is (u, u, u)
        let r2 = ring(2, &[1, 0, 1]);
        let c = spec(&r2, 3, &[&[1], &[1]]).build_code();
        assert_eq!(c.min_distance().unwrap(), 3);
        assert_eq!(c.min_distance_exhaustive(1 << 10).unwrap(), 3);
    }

    #[test]
    fn cis_examples() {
        let r = x3m1();
        assert!(spec(&r, 2, &[&[1]]).is_cis());
        assert!(!spec(&r, 2, &[&[1, 1]]).is_cis());
        assert!(!spec(&r, 2, &[&[1, 1]]).is_cis_by_rank());
        assert!(!spec(&r, 2, &[&[1, 1, 1]]).is_cis());
        assert!(spec(&r, 2, &[&[0, 0, 1]]).is_cis());
        assert!(spec(&r, 2, &[&[1]]).is_cis_by_rank());
    }

    #[test]
    fn information_sets() {
        let r = x3m1();
        let good = spec(&r, 2, &[&[0, 1]]).build_code();
        assert!(good.is_information_set(&[0, 1, 2]).unwrap());
        assert!(good.is_information_set(&[3, 4, 5]).unwrap());
        assert!(good.partition_is_cis());
        let bad = spec(&r, 2, &[&[1, 1]]).build_code();
        assert!(!bad.is_information_set(&[3, 4, 5]).unwrap());
        assert!(!bad.partition_is_cis());
        assert_eq!(bad.is_information_set(&[0, 1]), Err(Error::WrongSetSize { expected: 3, got: 2 }));
        assert_eq!(bad.is_information_set(&[0, 1, 9]), Err(Error::ColumnOutOfRange(9)));
    }

    #[test]
    fn encode_and_weights() {
        let r = x3m1();
        let c = spec(&r, 2, &[&[1]]).build_code();
        assert_eq!(c.encode(&[0, 0, 0]).unwrap(), vec![0; 6]);
        assert_eq!(c.encode(&[1, 0, 0]).unwrap(), c.gen_matrix().row(0));
        assert_eq!(weight(&c.encode(&[1, 0, 0]).unwrap()), 2);
        assert!(c.encode(&[1, 0]).is_err());
        assert!(c.encode(&[2, 0, 0]).is_err());
    }

    #[test]
    fn best_binary_codes_at_n2() {
        // exhaustive over all units {1, x} of F2[x]/(x^2-1): t=2 reaches 2.
        // For t=3 the message 1 always encodes to weight 1 + wt(a_1) + wt(a_2) = 3.
        let r = ring(2, &[1, 0, 1]);
        let units = r.unit_indices();
        let best2 = units
            .iter()
            .map(|&a| GeneratorSpec::from_indices(&r, 2, &[a]).unwrap().build_code().min_distance().unwrap())
            .max();
        assert_eq!(best2, Some(2));
        let mut best3 = 0;
        for &a in &units {
            for &b in &units {
                let d = GeneratorSpec::from_indices(&r, 3, &[a, b]).unwrap().build_code().min_distance().unwrap();
                best3 = best3.max(d);
            }
        }
        assert_eq!(best3, 3);
    }

    #[test]
    fn spec_kernel_matches_generic_kernel() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for (q, h) in [(2u64, vec![1u32, 0, 0, 0, 0, 1]), (4, vec![2, 0, 0, 1]), (3, vec![1, 1, 0, 1]), (2, vec![1, 1, 0, 1, 1])] {
            let r = ring(q, &h);
            let size = r.size() as u64;
            for _ in 0..30 {
                let t = rng.random_range(2..=3);
                let idx: Vec<u64> = (0..t - 1).map(|_| rng.random_range(0..size)).collect();
                let s = GeneratorSpec::from_indices(&r, t, &idx).unwrap();
                let code = s.build_code();
                let expected = code.min_distance_exhaustive(1 << 16).unwrap();
                assert_eq!(s.min_distance().unwrap(), expected, "{s}");
                assert_eq!(code.min_distance().unwrap(), expected);
            }
        }
    }

    #[test]
    fn budget_error() {
        let f = field_of_size(2).unwrap();
        let r = QuotientRing::new(&Poly::binomial(&f, 30, 1)).unwrap();
        let c = GeneratorSpec::new(&r, 2, vec![r.one()]).unwrap().build_code();
        assert!(matches!(c.min_distance(), Err(Error::BudgetExceeded { .. })));
    }

    #[test]
    fn record_round_trip() {
        let f4 = field_of_size(4).unwrap();
        let r = QuotientRing::new(&Poly::binomial(&f4, 3, 2)).unwrap();
        let s = GeneratorSpec::new(&r, 2, vec![r.x()]).unwrap();
        let rec = s.to_record(Some(3));
        assert_eq!(rec.family, "QT");
        assert_eq!(rec.alpha, Some(2));
        let json = serde_json::to_string(&rec).unwrap();
        let back: CodeRecord = serde_json::from_str(&json).unwrap();
        assert_eq!(back, rec);
        assert_eq!(back.to_code().unwrap().gen_matrix(), s.build_code().gen_matrix());
    }

    #[test]
    fn exhaustive_cis_equivalence_small() {
        let f = field_of_size(2).unwrap();
        for n in 1..=5 {
            let r = QuotientRing::new(&Poly::binomial(&f, n, 1)).unwrap();
            let size = r.size() as u64;
            for a in 0..size {
                let s = GeneratorSpec::from_indices(&r, 2, &[a]).unwrap();
                assert_eq!(s.is_cis(), s.is_cis_by_rank());
                for b in 0..size {
                    let s = GeneratorSpec::from_indices(&r, 3, &[a, b]).unwrap();
                    assert_eq!(s.is_cis(), s.is_cis_by_rank(), "n={n} {s}");
                }
            }
        }
    }

    #[test]
    fn cis_codes_satisfy_partition_and_singleton() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for q in [2u64, 3, 4] {
            let f = field_of_size(q).unwrap();
            for _ in 0..60 {
                let n = rng.random_range(1..=5usize);
                let t = rng.random_range(2..=3usize);
                let mut h: Vec<u32> = (0..n).map(|_| rng.random_range(0..q as u32)).collect();
                h.push(1);
                let r = QuotientRing::new(&Poly::from_coeffs(&f, h)).unwrap();
                let idx: Vec<u64> = (0..t - 1).map(|_| rng.random_range(0..r.size() as u64)).collect();
                let s = GeneratorSpec::from_indices(&r, t, &idx).unwrap();
                let code = s.build_code();
                assert_eq!(s.is_cis(), code.partition_is_cis());
                let d = code.min_distance().unwrap();
                assert!(d <= t * n - n + 1);
                assert_eq!(d, code.min_distance_exhaustive(1 << 16).unwrap());
            }
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        /// Row operations do not change the minimum distance.
        #[test]
        fn distance_invariant_under_row_operations(seed in any::<u64>()) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let q = [2u64, 3, 4][rng.random_range(0..3)];
            let f = field_of_size(q).unwrap();
            let n = rng.random_range(2..=4usize);
            let r = QuotientRing::new(&Poly::binomial(&f, n, 1)).unwrap();
            let a = rng.random_range(0..r.size() as u64);
            let code = GeneratorSpec::from_indices(&r, 2, &[a]).unwrap().build_code();
            let d = code.min_distance().unwrap();
            // random invertible mixing matrix
            let mix = loop {
                let rows = (0..n).map(|_| (0..n).map(|_| rng.random_range(0..q as u32)).collect()).collect();
                let m = Matrix::from_rows(&f, rows).unwrap();
                if m.is_invertible() { break m; }
            };
            let mixed = LinearCode::from_matrix(mix.mul(code.gen_matrix()).unwrap(), vec![]).unwrap();
            prop_assert_eq!(mixed.min_distance().unwrap(), d);
        }
    }
}
