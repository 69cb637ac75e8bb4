//! Exact-rational subspace arithmetic, cap/cup transversality over all
//! index subsets, subfoliation order, and the (P,p) structure group with
//! its pseudogroup spot-check.
//!
//! Everything here runs on exact rational elimination: transversality is
//! rank-discontinuous, so there are no tolerances anywhere in this module.

use std::collections::BTreeSet;

use num_traits::{One, Zero};

use crate::error::{JetError, Result};
use crate::scalar::Rat;
use crate::tjet::JetMap;

pub type RatMatrix = Vec<Vec<Rat>>;

/// Reduced row echelon form; returns the nonzero rows (a canonical basis
/// of the row span).
pub fn rref(rows: &[Vec<Rat>], width: usize) -> Vec<Vec<Rat>> {
    let mut work: Vec<Vec<Rat>> = rows.to_vec();
    let mut pivot_row = 0;
    for col in 0..width {
        let Some(found) = (pivot_row..work.len()).find(|&r| !work[r][col].is_zero()) else {
            continue;
        };
        work.swap(pivot_row, found);
        let pivot = work[pivot_row][col].clone();
        for x in work[pivot_row].iter_mut() {
            *x = &*x / &pivot;
        }
        for r in 0..work.len() {
            if r != pivot_row && !work[r][col].is_zero() {
                let factor = work[r][col].clone();
                for c in 0..width {
                    let delta = &factor * &work[pivot_row][c];
                    work[r][c] = &work[r][c] - &delta;
                }
            }
        }
        pivot_row += 1;
        if pivot_row == work.len() {
            break;
        }
    }
    work.truncate(pivot_row);
    work
}

pub fn rank(rows: &[Vec<Rat>], width: usize) -> usize {
    rref(rows, width).len()
}

/// Basis of the right null space `{ y : rows * y = 0 }`.
pub fn nullspace(rows: &[Vec<Rat>], width: usize) -> Vec<Vec<Rat>> {
    let reduced = rref(rows, width);
    let mut pivot_cols = Vec::new();
    for row in &reduced {
        if let Some(col) = (0..width).find(|&c| !row[c].is_zero()) {
            pivot_cols.push(col);
        }
    }
    let free_cols: Vec<usize> = (0..width).filter(|c| !pivot_cols.contains(c)).collect();
    let mut basis = Vec::with_capacity(free_cols.len());
    for &free in &free_cols {
        let mut v = vec![Rat::zero(); width];
        v[free] = Rat::one();
        for (row, &pc) in reduced.iter().zip(&pivot_cols) {
            v[pc] = -row[free].clone();
        }
        basis.push(v);
    }
    basis
}

pub fn mat_mul(a: &RatMatrix, b: &RatMatrix) -> RatMatrix {
    let n = a.len();
    let m = b.first().map_or(0, |r| r.len());
    let mut out = vec![vec![Rat::zero(); m]; n];
    for i in 0..n {
        for (l, b_row) in b.iter().enumerate() {
            if a[i][l].is_zero() {
                continue;
            }
            for j in 0..m {
                let delta = &a[i][l] * &b_row[j];
                out[i][j] = &out[i][j] + &delta;
            }
        }
    }
    out
}

/// A subspace of the ambient rational model, stored through its canonical
/// reduced row-echelon basis. Spanning vectors need not be independent.
#[derive(Clone, Debug, PartialEq)]
pub struct Subspace {
    ambient: usize,
    basis: Vec<Vec<Rat>>,
}

impl Subspace {
    pub fn new(ambient: usize, spanning: &[Vec<Rat>]) -> Result<Self> {
        for v in spanning {
            if v.len() != ambient {
                return Err(JetError::AmbientMismatch {
                    left: ambient,
                    right: v.len(),
                });
            }
        }
        Ok(Subspace {
            ambient,
            basis: rref(spanning, ambient),
        })
    }

    /// Span of the coordinate axes listed in `coords` (1-based).
    pub fn coordinate(ambient: usize, coords: &BTreeSet<usize>) -> Result<Self> {
        let mut spanning = Vec::with_capacity(coords.len());
        for &c in coords {
            if c < 1 || c > ambient {
                return Err(JetError::AmbientMismatch {
                    left: ambient,
                    right: c,
                });
            }
            let mut v = vec![Rat::zero(); ambient];
            v[c - 1] = Rat::one();
            spanning.push(v);
        }
        Self::new(ambient, &spanning)
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn codim(&self) -> usize {
        self.ambient - self.basis.len()
    }

    pub fn basis(&self) -> &[Vec<Rat>] {
        &self.basis
    }

    /// Basis of the annihilator `{ y : x . y = 0 for all x in self }`.
    fn annihilator(&self) -> Vec<Vec<Rat>> {
        nullspace(&self.basis, self.ambient)
    }
}

/// Exact dimensions of the intersection and the sum of the subspaces
/// selected by `indices`. The sum comes from stacked bases, the
/// intersection from the kernel of the concatenated annihilator system.
pub fn subspace_dims(spaces: &[Subspace], indices: &[usize]) -> Result<(usize, usize)> {
    if indices.is_empty() {
        return Err(JetError::EmptySubset);
    }
    let ambient = spaces
        .first()
        .map(|s| s.ambient)
        .ok_or(JetError::EmptySubset)?;
    for s in spaces {
        if s.ambient != ambient {
            return Err(JetError::AmbientMismatch {
                left: ambient,
                right: s.ambient,
            });
        }
    }
    let mut stacked = Vec::new();
    let mut annihilators = Vec::new();
    for &i in indices {
        stacked.extend(spaces[i].basis.iter().cloned());
        annihilators.extend(spaces[i].annihilator());
    }
    let sum_dim = rank(&stacked, ambient);
    let inter_dim = ambient - rank(&annihilators, ambient);
    Ok((inter_dim, sum_dim))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TransversalityMode {
    Cap,
    Cup,
}

/// Verdict for one index subset `E`: the two sides of the defining
/// identity, in codimension terms for cap and dimension terms for cup.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubsetCheck {
    /// 1-based indices of the subset members.
    pub subset: Vec<usize>,
    pub lhs: usize,
    pub rhs: usize,
    pub ok: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TransversalityReport {
    pub mode_cap: bool,
    pub transversal: bool,
    pub subsets_checked: usize,
    pub first_failure: Option<Vec<usize>>,
    pub checks: Vec<SubsetCheck>,
}

/// Checks the cap (codimensions add under intersection) or cup (dimensions
/// add under span) identity over every non-empty subset of the family.
pub fn is_transversal(
    spaces: &[Subspace],
    mode: TransversalityMode,
) -> Result<TransversalityReport> {
    let delta = spaces.len();
    if delta < 2 {
        return Err(JetError::DeltaTooSmall(delta));
    }
    let ambient = spaces[0].ambient;
    let mut checks = Vec::with_capacity((1usize << delta) - 1);
    let mut first_failure = None;
    for mask in 1u32..(1u32 << delta) {
        let indices: Vec<usize> = (0..delta).filter(|i| mask & (1 << i) != 0).collect();
        let (inter, sum) = subspace_dims(spaces, &indices)?;
        let (lhs, rhs) = match mode {
            TransversalityMode::Cap => {
                let codim_sum: usize = indices.iter().map(|&i| spaces[i].codim()).sum();
                (ambient - inter, codim_sum)
            }
            TransversalityMode::Cup => {
                let dim_sum: usize = indices.iter().map(|&i| spaces[i].dim()).sum();
                (dim_sum, sum)
            }
        };
        let ok = lhs == rhs;
        let subset: Vec<usize> = indices.iter().map(|i| i + 1).collect();
        if !ok && first_failure.is_none() {
            first_failure = Some(subset.clone());
        }
        checks.push(SubsetCheck {
            subset,
            lhs,
            rhs,
            ok,
        });
    }
    Ok(TransversalityReport {
        mode_cap: mode == TransversalityMode::Cap,
        transversal: first_failure.is_none(),
        subsets_checked: checks.len(),
        first_failure,
        checks,
    })
}

/// Arithmetic feasibility of the two transversality notions for given leaf
/// dimensions, including the Delta = 2 coincidence flag.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FeasibilityReport {
    pub m: usize,
    pub dims: Vec<usize>,
    pub codims: Vec<usize>,
    pub cap_feasible: bool,
    pub cup_feasible: bool,
    pub both_feasible: bool,
    /// Set exactly when Delta = 2 and the two sums both equal m; in that
    /// case the two transversality concepts coincide.
    pub delta2_coincidence: bool,
    /// Some leaf dimension is 0 or m, so the family is degenerate and the
    /// coincidence claim does not apply to it.
    pub degenerate: bool,
}

pub fn feasibility(dims: &[usize], m: usize) -> FeasibilityReport {
    let codims: Vec<usize> = dims.iter().map(|&p| m - p).collect();
    let codim_sum: usize = codims.iter().sum();
    let dim_sum: usize = dims.iter().sum();
    let cap_feasible = codim_sum <= m;
    let cup_feasible = dim_sum <= m;
    let both = cap_feasible && cup_feasible;
    FeasibilityReport {
        m,
        dims: dims.to_vec(),
        codims,
        cap_feasible,
        cup_feasible,
        both_feasible: both,
        delta2_coincidence: dims.len() == 2 && both && codim_sum == m && dim_sum == m,
        degenerate: dims.iter().any(|&p| p == 0 || p == m),
    }
}

/// Subfoliation order on coordinate foliations: in the coordinate model,
/// leaf containment is containment of the leaf-coordinate index sets.
pub fn is_subfoliation(sub: &BTreeSet<usize>, sup: &BTreeSet<usize>, m: usize) -> Result<bool> {
    for &c in sub.iter().chain(sup.iter()) {
        if c < 1 || c > m {
            return Err(JetError::AmbientMismatch { left: m, right: c });
        }
    }
    Ok(sub.is_subset(sup))
}

/// Finite poset given by its reflexive order relation `leq`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Poset {
    size: usize,
    leq: Vec<bool>,
}

impl Poset {
    pub fn new(size: usize, pairs: &[(usize, usize)]) -> Result<Self> {
        let mut leq = vec![false; size * size];
        for i in 0..size {
            leq[i * size + i] = true;
        }
        for &(a, b) in pairs {
            if a >= size || b >= size {
                return Err(JetError::InvalidPoset(format!(
                    "relation ({a},{b}) out of range for {size} elements"
                )));
            }
            leq[a * size + b] = true;
        }
        let poset = Poset { size, leq };
        poset.validate()?;
        Ok(poset)
    }

    fn validate(&self) -> Result<()> {
        let n = self.size;
        for a in 0..n {
            for b in 0..n {
                if self.le(a, b) && self.le(b, a) && a != b {
                    return Err(JetError::InvalidPoset(format!(
                        "antisymmetry fails on {a} and {b}"
                    )));
                }
                for c in 0..n {
                    if self.le(a, b) && self.le(b, c) && !self.le(a, c) {
                        return Err(JetError::InvalidPoset(format!(
                            "transitivity fails on ({a},{b},{c})"
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn le(&self, a: usize, b: usize) -> bool {
        self.leq[a * self.size + b]
    }

    /// A total order 0 < 1 < ... < n-1.
    pub fn chain(n: usize) -> Self {
        let mut leq = vec![false; n * n];
        for a in 0..n {
            for b in a..n {
                leq[a * n + b] = true;
            }
        }
        Poset { size: n, leq }
    }

    /// No relations except reflexivity.
    pub fn antichain(n: usize) -> Self {
        let mut leq = vec![false; n * n];
        for a in 0..n {
            leq[a * n + a] = true;
        }
        Poset { size: n, leq }
    }

    pub fn pairs(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for a in 0..self.size {
            for b in 0..self.size {
                if a != b && self.le(a, b) {
                    out.push((a, b));
                }
            }
        }
        out
    }
}

/// The (P,p) data: a finite poset and a surjection from coordinates onto
/// it. `assignment[i]` is the poset element of coordinate i+1.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PosetMap {
    poset: Poset,
    assignment: Vec<usize>,
}

impl PosetMap {
    pub fn new(poset: Poset, assignment: Vec<usize>) -> Result<Self> {
        if assignment.iter().any(|&e| e >= poset.size()) {
            return Err(JetError::InvalidPoset(
                "coordinate assigned to a nonexistent poset element".into(),
            ));
        }
        let mut hit = vec![false; poset.size()];
        for &e in &assignment {
            hit[e] = true;
        }
        if !hit.iter().all(|&h| h) {
            return Err(JetError::NotSurjective);
        }
        Ok(PosetMap { poset, assignment })
    }

    pub fn m(&self) -> usize {
        self.assignment.len()
    }

    pub fn poset(&self) -> &Poset {
        &self.poset
    }

    pub fn assignment(&self) -> &[usize] {
        &self.assignment
    }

    /// Entry (i, j) is allowed iff p(j) >= p(i); forbidden entries must
    /// vanish for membership in GL(m; P, p).
    pub fn allowed(&self, row: usize, col: usize) -> bool {
        self.poset.le(self.assignment[row], self.assignment[col])
    }
}

/// Membership in the pattern group: `a` must be invertible and vanish at
/// every forbidden position.
pub fn in_pp_group(a: &RatMatrix, pm: &PosetMap) -> Result<bool> {
    let m = pm.m();
    if a.len() != m || a.iter().any(|row| row.len() != m) {
        return Err(JetError::ShapeMismatch {
            expected_rows: m,
            expected_cols: m,
            rows: a.len(),
            cols: a.first().map_or(0, |r| r.len()),
        });
    }
    for (i, row) in a.iter().enumerate() {
        for (j, entry) in row.iter().enumerate() {
            if !pm.allowed(i, j) && !entry.is_zero() {
                return Ok(false);
            }
        }
    }
    Ok(rank(a, m) == m)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PseudogroupReport {
    pub ok: bool,
    /// Index of the first sample whose Jacobian leaves the group.
    pub failing_point: Option<usize>,
    pub sampled: usize,
}

/// Samples the pseudogroup condition: every supplied jet's Jacobian must
/// lie in GL(m; P, p). This is a spot-check at the sample points, not a
/// proof over a domain.
pub fn pp_pseudogroup_check(jets: &[JetMap<Rat>], pm: &PosetMap) -> Result<PseudogroupReport> {
    for jet in jets {
        if jet.orders().min() < 1 {
            return Err(JetError::JetOrderZero);
        }
    }
    let mut failing_point = None;
    for (k, jet) in jets.iter().enumerate() {
        let jac = jet.jacobian()?;
        if !in_pp_group(&jac, pm)? {
            failing_point = Some(k);
            break;
        }
    }
    Ok(PseudogroupReport {
        ok: failing_point.is_none(),
        failing_point,
        sampled: jets.len(),
    })
}
