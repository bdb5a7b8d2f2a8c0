//! Minimum distance kernel.
//!
//! Codewords are enumerated by increasing message weight in one systematic
//! form per known disjoint information set. After all forms have finished
//! weight `w`, every codeword not yet seen has weight at least `w + 1` on each
//! of those sets, which gives an exact stopping rule. A t-CIS code supplies t
//! such sets, so only a thin slice of the `q^k` message space is visited.
//!
//! Over characteristic-2 fields with `length * m <= 128` codewords are packed
//! into a `u128`, `m` bits per symbol, so that adding a scaled row is a XOR.

use crate::error::{Error, Result};
use crate::field::{Elem, Field};
use crate::matrix::Matrix;

/// Default cap on the `q^k` worst-case codeword evaluations.
pub const DEFAULT_BUDGET: u128 = 1 << 26;

/// Result of a sweep that may stop early once a codeword of weight `<= floor` appears.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Sweep {
    Exact(usize),
    /// Some nonzero codeword has at most this weight; the sweep stopped there.
    AtMost(usize),
}

impl Sweep {
    pub fn exact(self) -> Option<usize> {
        match self {
            Sweep::Exact(d) => Some(d),
            Sweep::AtMost(_) => None,
        }
    }
}

enum Rows {
    /// `scaled[form][i * q + c]` = packed `c * row_i`.
    Packed { scaled: Vec<Vec<u128>>, low: u128, bits: u32 },
    Plain { scaled: Vec<Vec<Vec<Elem>>> },
}

pub struct DistanceKernel {
    field: Field,
    k: usize,
    len: usize,
    q: usize,
    rows: Rows,
}

impl DistanceKernel {
    /// `info_sets` lists candidate disjoint information sets; those that are
    /// not actually information sets are skipped, and a pivot set from row
    /// reduction is used when none qualifies.
    pub fn new(gen: &Matrix, info_sets: &[Vec<usize>]) -> Result<Self> {
        let field = gen.field().clone();
        let (k, len) = (gen.rows(), gen.cols());
        let mut forms: Vec<Matrix> = Vec::new();
        let mut used = vec![false; len];
        for set in info_sets {
            if set.len() != k || set.iter().any(|&c| c >= len || used[c]) {
                continue;
            }
            if let Some(inv) = gen.select_columns(set)?.inverse() {
                forms.push(inv.mul(gen)?);
                set.iter().for_each(|&c| used[c] = true);
            }
        }
        if forms.is_empty() {
            let (red, pivots) = gen.rref();
            if pivots.len() < k {
                return Err(Error::RankDeficient);
            }
            forms.push(red);
        }
        Ok(Self::from_forms(&field, k, len, &forms))
    }

    /// Builds the kernel from generator matrices of one code that are already
    /// systematic on pairwise disjoint coordinate sets.
    pub(crate) fn from_forms(field: &Field, k: usize, len: usize, forms: &[Matrix]) -> Self {
        let field = field.clone();
        let q = field.size() as usize;
        let m = field.degree();
        let rows = if field.characteristic() == 2 && len * m as usize <= 128 {
            let mut low = 0u128;
            for j in 0..len {
                low |= 1u128 << (j as u32 * m);
            }
            let scaled = forms
                .iter()
                .map(|form| {
                    let mut out = Vec::with_capacity(k * q);
                    for i in 0..k {
                        for c in 0..q as Elem {
                            out.push(pack(form.row(i).iter().map(|&g| field.mul(c, g)), m));
                        }
                    }
                    out
                })
                .collect();
            Rows::Packed { scaled, low, bits: m }
        } else {
            let scaled = forms
                .iter()
                .map(|form| {
                    let mut out = Vec::with_capacity(k * q);
                    for i in 0..k {
                        for c in 0..q as Elem {
                            out.push(form.row(i).iter().map(|&g| field.mul(c, g)).collect());
                        }
                    }
                    out
                })
                .collect();
            Rows::Plain { scaled }
        };
        DistanceKernel { field, k, len, q, rows }
    }

    pub fn forms(&self) -> usize {
        match &self.rows {
            Rows::Packed { scaled, .. } => scaled.len(),
            Rows::Plain { scaled } => scaled.len(),
        }
    }

    /// Minimum nonzero weight, stopping early once a codeword of weight `<= floor` shows up.
    pub fn sweep(&self, floor: usize) -> Sweep {
        if self.k == 0 {
            return Sweep::Exact(0);
        }
        let forms = self.forms();
        let mut best = self.len + 1;
        for w in 1..=self.k {
            for form in 0..forms {
                let stop = match &self.rows {
                    Rows::Packed { scaled, low, bits } => {
                        let ctx = PackedCtx { rows: &scaled[form], q: self.q, k: self.k, low: *low, bits: *bits, floor };
                        ctx.dfs(0, w, 0, &mut best)
                    }
                    Rows::Plain { scaled } => {
                        let ctx = PlainCtx { rows: &scaled[form], q: self.q, k: self.k, field: &self.field, floor };
                        let mut acc = vec![vec![0; self.len]; w + 1];
                        ctx.dfs(0, w, &mut acc, &mut best)
                    }
                };
                if stop {
                    return Sweep::AtMost(best);
                }
            }
            if best <= forms * (w + 1) {
                return Sweep::Exact(best);
            }
        }
        Sweep::Exact(best)
    }

    pub fn min_distance(&self) -> usize {
        match self.sweep(0) {
            Sweep::Exact(d) | Sweep::AtMost(d) => d,
        }
    }
}

fn pack(symbols: impl Iterator<Item = Elem>, bits: u32) -> u128 {
    symbols.enumerate().fold(0u128, |acc, (j, s)| acc | ((s as u128) << (j as u32 * bits)))
}

struct PackedCtx<'a> {
    rows: &'a [u128],
    q: usize,
    k: usize,
    low: u128,
    bits: u32,
    floor: usize,
}

impl PackedCtx<'_> {
    #[inline]
    fn weight(&self, v: u128) -> usize {
        let mut folded = v;
        for b in 1..self.bits {
            folded |= v >> b;
        }
        (folded & self.low).count_ones() as usize
    }

    /// Visits all messages with exactly `left` more nonzero positions at indices `>= start`.
    fn dfs(&self, start: usize, left: usize, acc: u128, best: &mut usize) -> bool {
        for i in start..=self.k - left {
            let base = i * self.q;
            for c in 1..self.q {
                let v = acc ^ self.rows[base + c];
                if left == 1 {
                    let wt = self.weight(v);
                    if wt < *best {
                        *best = wt;
                        if wt <= self.floor {
                            return true;
                        }
                    }
                } else if self.dfs(i + 1, left - 1, v, best) {
                    return true;
                }
            }
        }
        false
    }
}

struct PlainCtx<'a> {
    rows: &'a [Vec<Elem>],
    q: usize,
    k: usize,
    field: &'a Field,
    floor: usize,
}

impl PlainCtx<'_> {
    fn dfs(&self, start: usize, left: usize, acc: &mut [Vec<Elem>], best: &mut usize) -> bool {
        let depth = acc.len() - 1 - left;
        for i in start..=self.k - left {
            for c in 1..self.q {
                let row = &self.rows[i * self.q + c];
                let (head, tail) = acc.split_at_mut(depth + 1);
                let next = &mut tail[0];
                for ((o, &a), &r) in next.iter_mut().zip(&head[depth]).zip(row) {
                    *o = self.field.add(a, r);
                }
                if left == 1 {
                    let wt = next.iter().filter(|&&v| v != 0).count();
                    if wt < *best {
                        *best = wt;
                        if wt <= self.floor {
                            return true;
                        }
                    }
                } else if self.dfs(i + 1, left - 1, acc, best) {
                    return true;
                }
            }
        }
        false
    }
}

/// Enumerates all `q^k` messages directly; the unoptimized reference route.
pub fn min_distance_exhaustive(gen: &Matrix, budget: u128) -> Result<usize> {
    let field = gen.field();
    let (k, len) = (gen.rows(), gen.cols());
    let q = field.size() as u128;
    let total = q.checked_pow(k as u32).unwrap_or(u128::MAX);
    if total > budget {
        return Err(Error::BudgetExceeded { needed: total, budget });
    }
    let mut msg = vec![0 as Elem; k];
    let mut best = len + 1;
    for _ in 1..total {
        // odometer increment
        for digit in msg.iter_mut() {
            *digit += 1;
            if *digit < q as Elem {
                break;
            }
            *digit = 0;
        }
        let word = gen.left_mul_vec(&msg)?;
        best = best.min(word.iter().filter(|&&v| v != 0).count());
    }
    Ok(best)
}
