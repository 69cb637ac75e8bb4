//! Multi-index bookkeeping: monomial enumeration under truncation and the
//! effective-order computation that turns a multifoliation plus multiorder
//! into per-target-component truncation orders.

use std::cmp::Ordering;
use std::collections::BTreeSet;

use crate::error::{JetError, Result};

/// Exponent vector of a monomial in `len()` variables.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct MultiIndex {
    exponents: Vec<usize>,
}

impl MultiIndex {
    pub fn new(exponents: Vec<usize>) -> Self {
        MultiIndex { exponents }
    }

    /// The constant monomial in `m` variables.
    pub fn zero(m: usize) -> Self {
        MultiIndex {
            exponents: vec![0; m],
        }
    }

    /// The monomial `x_i` (0-based variable index).
    pub fn unit(m: usize, i: usize) -> Self {
        let mut exponents = vec![0; m];
        exponents[i] = 1;
        MultiIndex { exponents }
    }

    pub fn exponents(&self) -> &[usize] {
        &self.exponents
    }

    pub fn len(&self) -> usize {
        self.exponents.len()
    }

    pub fn is_empty(&self) -> bool {
        self.exponents.is_empty()
    }

    pub fn degree(&self) -> usize {
        self.exponents.iter().sum()
    }

    pub fn is_constant(&self) -> bool {
        self.degree() == 0
    }

    pub fn add(&self, other: &Self) -> Self {
        debug_assert_eq!(self.len(), other.len());
        MultiIndex {
            exponents: self
                .exponents
                .iter()
                .zip(&other.exponents)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }
}

// Canonical monomial order: graded-lexicographic. Gives stable
// serialization and reproducible golden files.
impl Ord for MultiIndex {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.exponents.cmp(&other.exponents))
    }
}

impl PartialOrd for MultiIndex {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Binomial coefficient as u64; panics on overflow, which the bounded
/// orders used here never reach.
pub fn binomial(n: usize, k: usize) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u64 = 1;
    for i in 0..k {
        acc = acc
            .checked_mul((n - i) as u64)
            .expect("binomial overflow")
            / (i as u64 + 1);
    }
    acc
}

/// All monomials in `m` variables with total degree at most `r`, sorted in
/// the canonical graded-lexicographic order. The list has `C(m+r, r)`
/// entries and is closed under exponent decrease.
pub fn enumerate_monomials(m: usize, r: usize) -> Vec<MultiIndex> {
    let mut out = Vec::with_capacity(binomial(m + r, r) as usize);
    let mut current = vec![0usize; m];
    fill(&mut out, &mut current, 0, r);
    out.sort();
    out
}

fn fill(out: &mut Vec<MultiIndex>, current: &mut Vec<usize>, pos: usize, budget: usize) {
    if pos == current.len() {
        out.push(MultiIndex::new(current.clone()));
        return;
    }
    for e in 0..=budget {
        current[pos] = e;
        fill(out, current, pos + 1, budget - e);
    }
    current[pos] = 0;
}

/// Per-target-component truncation orders induced by a multifoliation on a
/// model of dimension `m` and a multiorder. `groups` holds 1-based
/// coordinate sets; component `i` receives the maximum order over the
/// groups containing it and 0 when no group covers it.
pub fn effective_orders(
    m: usize,
    groups: &[BTreeSet<usize>],
    orders: &[usize],
) -> Result<Vec<usize>> {
    if groups.len() != orders.len() {
        return Err(JetError::MultiOrderLenMismatch {
            expected: groups.len(),
            got: orders.len(),
        });
    }
    let mut eff = vec![0usize; m];
    for (group, &order) in groups.iter().zip(orders) {
        for &coord in group {
            debug_assert!((1..=m).contains(&coord));
            let slot = &mut eff[coord - 1];
            *slot = (*slot).max(order);
        }
    }
    Ok(eff)
}

/// Stirling numbers of the second kind, `S2(k, j)`.
pub fn stirling2(k: usize, j: usize) -> u64 {
    if j > k {
        return 0;
    }
    if k == 0 {
        return u64::from(j == 0);
    }
    if j == 0 {
        return 0;
    }
    stirling2(k - 1, j - 1) + j as u64 * stirling2(k - 1, j)
}
