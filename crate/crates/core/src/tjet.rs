//! Truncated polynomial arithmetic and holonomic jets of maps between
//! coordinate models.
//!
//! A jet is stored in displacement coordinates: the source and target
//! points are carried separately and every component polynomial has no
//! constant term. Coefficients are Taylor-normalized (derivative divided
//! by factorial), so composition of jets is plain polynomial substitution.

use std::collections::{BTreeMap, HashMap};

use crate::error::{JetError, Result};
use crate::expr::Expr;
use crate::multiindex::MultiIndex;
use crate::scalar::Scalar;

use num_traits::Zero;

/// Sparse polynomial in `num_vars` variables, truncated at total degree
/// `order`. Stored coefficients are nonzero and within the order bound.
#[derive(Clone, Debug, PartialEq)]
pub struct TruncatedPoly<S> {
    num_vars: usize,
    order: usize,
    coeffs: BTreeMap<MultiIndex, S>,
}

impl<S: Scalar> TruncatedPoly<S> {
    pub fn zero(num_vars: usize, order: usize) -> Self {
        TruncatedPoly {
            num_vars,
            order,
            coeffs: BTreeMap::new(),
        }
    }

    pub fn constant(num_vars: usize, order: usize, value: S) -> Self {
        let mut poly = Self::zero(num_vars, order);
        if !value.is_zero() {
            poly.coeffs.insert(MultiIndex::zero(num_vars), value);
        }
        poly
    }

    /// The variable `x_i` (0-based), truncated: at order 0 this is the zero
    /// polynomial.
    pub fn variable(num_vars: usize, order: usize, i: usize) -> Self {
        let mut poly = Self::zero(num_vars, order);
        if order >= 1 {
            poly.coeffs.insert(MultiIndex::unit(num_vars, i), S::one());
        }
        poly
    }

    pub fn from_terms<I>(num_vars: usize, order: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (MultiIndex, S)>,
    {
        let mut coeffs = BTreeMap::new();
        for (index, coeff) in terms {
            if index.len() != num_vars {
                return Err(JetError::NumVarsMismatch {
                    left: num_vars,
                    right: index.len(),
                });
            }
            if index.degree() > order {
                return Err(JetError::IndexAboveOrder {
                    degree: index.degree(),
                    order,
                });
            }
            if coeff.is_zero() {
                continue;
            }
            let entry = coeffs.entry(index).or_insert_with(S::zero);
            *entry = entry.clone() + coeff;
        }
        coeffs.retain(|_, c: &mut S| !c.is_zero());
        Ok(TruncatedPoly {
            num_vars,
            order,
            coeffs,
        })
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn terms(&self) -> impl Iterator<Item = (&MultiIndex, &S)> {
        self.coeffs.iter()
    }

    pub fn is_zero_poly(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeff(&self, index: &MultiIndex) -> S {
        self.coeffs.get(index).cloned().unwrap_or_else(S::zero)
    }

    pub fn constant_term(&self) -> S {
        self.coeff(&MultiIndex::zero(self.num_vars))
    }

    pub fn without_constant(&self) -> Self {
        let mut out = self.clone();
        out.coeffs.remove(&MultiIndex::zero(self.num_vars));
        out
    }

    fn check_compatible(&self, other: &Self) -> Result<()> {
        if self.num_vars != other.num_vars {
            return Err(JetError::NumVarsMismatch {
                left: self.num_vars,
                right: other.num_vars,
            });
        }
        if self.order != other.order {
            return Err(JetError::OrderMismatch {
                left: self.order,
                right: other.order,
            });
        }
        Ok(())
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        let mut coeffs = self.coeffs.clone();
        for (index, coeff) in &other.coeffs {
            let entry = coeffs.entry(index.clone()).or_insert_with(S::zero);
            *entry = entry.clone() + coeff.clone();
        }
        coeffs.retain(|_, c| !c.is_zero());
        Ok(TruncatedPoly {
            num_vars: self.num_vars,
            order: self.order,
            coeffs,
        })
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.try_add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .map(|(i, c)| (i.clone(), -c.clone()))
            .collect();
        TruncatedPoly {
            num_vars: self.num_vars,
            order: self.order,
            coeffs,
        }
    }

    pub fn scale(&self, factor: &S) -> Self {
        if factor.is_zero() {
            return Self::zero(self.num_vars, self.order);
        }
        let coeffs = self
            .coeffs
            .iter()
            .map(|(i, c)| (i.clone(), c.clone() * factor.clone()))
            .collect();
        TruncatedPoly {
            num_vars: self.num_vars,
            order: self.order,
            coeffs,
        }
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        let mut coeffs: BTreeMap<MultiIndex, S> = BTreeMap::new();
        for (ia, ca) in &self.coeffs {
            let da = ia.degree();
            for (ib, cb) in &other.coeffs {
                if da + ib.degree() > self.order {
                    continue;
                }
                let index = ia.add(ib);
                let entry = coeffs.entry(index).or_insert_with(S::zero);
                *entry = entry.clone() + ca.clone() * cb.clone();
            }
        }
        coeffs.retain(|_, c| !c.is_zero());
        Ok(TruncatedPoly {
            num_vars: self.num_vars,
            order: self.order,
            coeffs,
        })
    }

    /// Drops every coefficient above `new_order`.
    pub fn truncated(&self, new_order: usize) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .filter(|(i, _)| i.degree() <= new_order)
            .map(|(i, c)| (i.clone(), c.clone()))
            .collect();
        TruncatedPoly {
            num_vars: self.num_vars,
            order: new_order,
            coeffs,
        }
    }

    /// Substitutes `args[j]` for variable `j` and truncates the expansion
    /// at the arguments' order. All arguments share a variable count and
    /// order; powers are cached per call.
    pub fn substitute(&self, args: &[Self]) -> Result<Self> {
        if args.len() != self.num_vars {
            return Err(JetError::DimMismatch {
                what: "substitution arguments",
                expected: self.num_vars,
                got: args.len(),
            });
        }
        let (out_vars, out_order) = match args.first() {
            Some(first) => {
                for a in args {
                    first.check_compatible(a)?;
                }
                (first.num_vars, first.order)
            }
            // Zero source variables: only the constant term can exist, and
            // the result lives in a caller-irrelevant empty model.
            None => (0, self.order),
        };
        let mut cache: HashMap<(usize, usize), TruncatedPoly<S>> = HashMap::new();
        let mut acc = TruncatedPoly::zero(out_vars, out_order);
        for (index, coeff) in &self.coeffs {
            let mut term = TruncatedPoly::constant(out_vars, out_order, coeff.clone());
            for (var, &exp) in index.exponents().iter().enumerate() {
                if exp == 0 {
                    continue;
                }
                let power = power_cached(&mut cache, args, var, exp)?;
                term = term.try_mul(&power)?;
            }
            acc = acc.try_add(&term)?;
        }
        Ok(acc)
    }

    /// 1/self as a truncated series; the constant term must be nonzero.
    pub fn reciprocal(&self) -> Result<Self> {
        let c = self.constant_term();
        if c.is_zero() {
            return Err(JetError::EvaluationSingularity(
                "division by a quantity vanishing at the point".into(),
            ));
        }
        let inv_c = S::one().try_div(&c)?;
        // self/c = 1 + n with n nilpotent; 1/(1+n) = 1 - n + n^2 - ...
        let n = self
            .scale(&inv_c)
            .try_sub(&Self::constant(self.num_vars, self.order, S::one()))?;
        let one = Self::constant(self.num_vars, self.order, S::one());
        let mut acc = one.clone();
        for _ in 0..self.order {
            acc = one.try_sub(&n.try_mul(&acc)?)?;
        }
        Ok(acc.scale(&inv_c))
    }

    pub fn pow(&self, exp: u32) -> Result<Self> {
        let mut acc = Self::constant(self.num_vars, self.order, S::one());
        for _ in 0..exp {
            acc = acc.try_mul(self)?;
        }
        Ok(acc)
    }
}

fn power_cached<S: Scalar>(
    cache: &mut HashMap<(usize, usize), TruncatedPoly<S>>,
    args: &[TruncatedPoly<S>],
    var: usize,
    exp: usize,
) -> Result<TruncatedPoly<S>> {
    if exp == 1 {
        return Ok(args[var].clone());
    }
    if let Some(hit) = cache.get(&(var, exp)) {
        return Ok(hit.clone());
    }
    let lower = power_cached(cache, args, var, exp - 1)?;
    let value = lower.try_mul(&args[var])?;
    cache.insert((var, exp), value.clone());
    Ok(value)
}

/// Truncation orders of a jet: one shared order, or one order per target
/// component for the anisotropic jets arising from multifoliations.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum JetOrders {
    Uniform(usize),
    PerComponent(Vec<usize>),
}

impl JetOrders {
    pub fn component(&self, i: usize) -> usize {
        match self {
            JetOrders::Uniform(r) => *r,
            JetOrders::PerComponent(v) => v[i],
        }
    }

    pub fn max(&self) -> usize {
        match self {
            JetOrders::Uniform(r) => *r,
            JetOrders::PerComponent(v) => v.iter().copied().max().unwrap_or(0),
        }
    }

    pub fn min(&self) -> usize {
        match self {
            JetOrders::Uniform(r) => *r,
            JetOrders::PerComponent(v) => v.iter().copied().min().unwrap_or(0),
        }
    }

    pub fn as_uniform(&self) -> Option<usize> {
        match self {
            JetOrders::Uniform(r) => Some(*r),
            JetOrders::PerComponent(_) => None,
        }
    }
}

/// The r-jet of a map between coordinate models, in displacement
/// coordinates: `source_point` and `target_point` carry the value, the
/// component polynomials carry only positive-degree Taylor coefficients.
#[derive(Clone, Debug)]
pub struct JetMap<S> {
    source_dim: usize,
    source_point: Vec<S>,
    target_point: Vec<S>,
    components: Vec<TruncatedPoly<S>>,
    orders: JetOrders,
}

impl<S: Scalar> JetMap<S> {
    pub fn new(
        source_point: Vec<S>,
        target_point: Vec<S>,
        components: Vec<TruncatedPoly<S>>,
        orders: JetOrders,
    ) -> Result<Self> {
        let source_dim = source_point.len();
        if components.len() != target_point.len() {
            return Err(JetError::DimMismatch {
                what: "jet components",
                expected: target_point.len(),
                got: components.len(),
            });
        }
        if let JetOrders::PerComponent(v) = &orders {
            if v.len() != components.len() {
                return Err(JetError::DimMismatch {
                    what: "per-component orders",
                    expected: components.len(),
                    got: v.len(),
                });
            }
        }
        for (i, comp) in components.iter().enumerate() {
            if comp.num_vars() != source_dim {
                return Err(JetError::NumVarsMismatch {
                    left: source_dim,
                    right: comp.num_vars(),
                });
            }
            if comp.order() != orders.component(i) {
                return Err(JetError::OrderMismatch {
                    left: orders.component(i),
                    right: comp.order(),
                });
            }
            if !comp.constant_term().is_zero() {
                return Err(JetError::ConstantTermPresent { component: i });
            }
        }
        Ok(JetMap {
            source_dim,
            source_point,
            target_point,
            components,
            orders,
        })
    }

    pub fn identity(point: Vec<S>, order: usize) -> Self {
        let dim = point.len();
        let components = (0..dim)
            .map(|i| TruncatedPoly::variable(dim, order, i))
            .collect();
        JetMap {
            source_dim: dim,
            source_point: point.clone(),
            target_point: point,
            components,
            orders: JetOrders::Uniform(order),
        }
    }

    pub fn source_dim(&self) -> usize {
        self.source_dim
    }

    pub fn target_dim(&self) -> usize {
        self.components.len()
    }

    pub fn source_point(&self) -> &[S] {
        &self.source_point
    }

    pub fn target_point(&self) -> &[S] {
        &self.target_point
    }

    pub fn components(&self) -> &[TruncatedPoly<S>] {
        &self.components
    }

    pub fn orders(&self) -> &JetOrders {
        &self.orders
    }

    pub fn uniform_order(&self) -> Result<usize> {
        self.orders
            .as_uniform()
            .ok_or(JetError::AnisotropicUnsupported)
    }

    /// Degree-1 coefficient matrix, `target_dim x source_dim`.
    pub fn jacobian(&self) -> Result<Vec<Vec<S>>> {
        if self.orders.min() < 1 {
            return Err(JetError::JetOrderZero);
        }
        Ok(self
            .components
            .iter()
            .map(|comp| {
                (0..self.source_dim)
                    .map(|j| comp.coeff(&MultiIndex::unit(self.source_dim, j)))
                    .collect()
            })
            .collect())
    }

    /// Coefficient-map equality. Jets with different truncation orders are
    /// not comparable: that is an error, not `false`.
    pub fn try_eq(&self, other: &Self) -> Result<bool> {
        if self.source_dim != other.source_dim {
            return Err(JetError::DimMismatch {
                what: "source dimension",
                expected: self.source_dim,
                got: other.source_dim,
            });
        }
        if self.target_dim() != other.target_dim() {
            return Err(JetError::DimMismatch {
                what: "target dimension",
                expected: self.target_dim(),
                got: other.target_dim(),
            });
        }
        if self.orders != other.orders {
            return Err(JetError::OrderMismatch {
                left: self.orders.max(),
                right: other.orders.max(),
            });
        }
        Ok(self.source_point == other.source_point
            && self.target_point == other.target_point
            && self.components == other.components)
    }
}

/// Taylor jet of the maps given by `exprs` at `point`, in displacement
/// coordinates. The source dimension is the length of `point`.
pub fn jet_of_expression<S: Scalar>(exprs: &[Expr], point: &[S], order: usize) -> Result<JetMap<S>> {
    let h = point.len();
    for e in exprs {
        let used = e.max_var();
        if used > h {
            return Err(JetError::DimMismatch {
                what: "expression variables",
                expected: h,
                got: used,
            });
        }
    }
    // x_i evaluates to point_i + t_i.
    let vars: Vec<TruncatedPoly<S>> = (0..h)
        .map(|i| {
            TruncatedPoly::constant(h, order, point[i].clone())
                .try_add(&TruncatedPoly::variable(h, order, i))
        })
        .collect::<Result<_>>()?;
    let mut target_point = Vec::with_capacity(exprs.len());
    let mut components = Vec::with_capacity(exprs.len());
    for e in exprs {
        let value = eval_expr(e, &vars, h, order)?;
        target_point.push(value.constant_term());
        components.push(value.without_constant());
    }
    JetMap::new(
        point.to_vec(),
        target_point,
        components,
        JetOrders::Uniform(order),
    )
}

fn eval_expr<S: Scalar>(
    e: &Expr,
    vars: &[TruncatedPoly<S>],
    h: usize,
    order: usize,
) -> Result<TruncatedPoly<S>> {
    match e {
        Expr::Num(r) => Ok(TruncatedPoly::constant(h, order, S::from_rational(r)?)),
        Expr::Var(i) => Ok(vars[*i].clone()),
        Expr::Neg(a) => Ok(eval_expr(a, vars, h, order)?.neg()),
        Expr::Add(a, b) => eval_expr(a, vars, h, order)?.try_add(&eval_expr(b, vars, h, order)?),
        Expr::Sub(a, b) => eval_expr(a, vars, h, order)?.try_sub(&eval_expr(b, vars, h, order)?),
        Expr::Mul(a, b) => eval_expr(a, vars, h, order)?.try_mul(&eval_expr(b, vars, h, order)?),
        Expr::Div(a, b) => {
            let denom = eval_expr(b, vars, h, order)?;
            eval_expr(a, vars, h, order)?.try_mul(&denom.reciprocal()?)
        }
        Expr::Pow(a, exp) => eval_expr(a, vars, h, order)?.pow(*exp),
        Expr::Func(func, a) => {
            let arg = eval_expr(a, vars, h, order)?;
            let center = arg.constant_term();
            let series = S::taylor_series(*func, &center, order)?;
            let tilde = arg.without_constant();
            // Horner evaluation of sum_k c_k * tilde^k.
            let mut acc = TruncatedPoly::constant(h, order, series[order].clone());
            for k in (0..order).rev() {
                acc = acc
                    .try_mul(&tilde)?
                    .try_add(&TruncatedPoly::constant(h, order, series[k].clone()))?;
            }
            Ok(acc)
        }
    }
}

/// Jet of the composed representative: substitutes `inner`'s components
/// into `outer`'s and truncates at `inner`'s order. Requires the chain to
/// match: `inner` targets where `outer` is based, and `outer`'s order is
/// at least `inner`'s.
pub fn compose_jets<S: Scalar>(outer: &JetMap<S>, inner: &JetMap<S>) -> Result<JetMap<S>> {
    if inner.target_dim() != outer.source_dim() {
        return Err(JetError::DimMismatch {
            what: "composition chain",
            expected: outer.source_dim(),
            got: inner.target_dim(),
        });
    }
    let r_outer = outer.uniform_order()?;
    let r_inner = inner.uniform_order()?;
    if r_outer < r_inner {
        return Err(JetError::OrderMismatch {
            left: r_outer,
            right: r_inner,
        });
    }
    let matches = inner
        .target_point
        .iter()
        .zip(&outer.source_point)
        .all(|(a, b)| a.point_eq(b));
    if !matches {
        return Err(JetError::PointMismatch);
    }
    let args: Vec<TruncatedPoly<S>> = inner
        .components
        .iter()
        .map(|c| c.truncated(r_inner))
        .collect();
    let components = outer
        .components
        .iter()
        .map(|comp| comp.truncated(r_inner.min(r_outer)).substitute(&args))
        .collect::<Result<Vec<_>>>()?;
    JetMap::new(
        inner.source_point.clone(),
        outer.target_point.clone(),
        components,
        JetOrders::Uniform(r_inner),
    )
}

/// Inverse jet, solved degree by degree from the triangular system that
/// composing with an unknown series produces. Exact in the rational
/// domain; errors when the linear part is singular.
pub fn invert_jet<S: Scalar>(jet: &JetMap<S>) -> Result<JetMap<S>> {
    let m = jet.source_dim();
    if jet.target_dim() != m {
        return Err(JetError::DimMismatch {
            what: "invertible jet",
            expected: m,
            got: jet.target_dim(),
        });
    }
    let r = jet.uniform_order()?;
    if r < 1 {
        return Err(JetError::InsufficientOrder { needed: 1, got: 0 });
    }
    let a = jet.jacobian()?;
    let a_inv = invert_matrix(&a).ok_or(JetError::SingularLinearPart)?;
    // Split off the linear part: p(t) = A t + h(t), h of valuation >= 2.
    let identity: Vec<TruncatedPoly<S>> = (0..m)
        .map(|i| TruncatedPoly::variable(m, r, i))
        .collect();
    let linear: Vec<TruncatedPoly<S>> = (0..m)
        .map(|i| {
            let mut acc = TruncatedPoly::zero(m, r);
            for (j, id) in identity.iter().enumerate() {
                acc = acc.try_add(&id.scale(&a[i][j]))?;
            }
            Ok(acc)
        })
        .collect::<Result<_>>()?;
    let higher: Vec<TruncatedPoly<S>> = jet
        .components
        .iter()
        .zip(&linear)
        .map(|(comp, lin)| comp.try_sub(lin))
        .collect::<Result<_>>()?;
    // q_{k+1} = A^{-1}(t - h(q_k)) gains one correct degree per step.
    let apply_inv = |polys: &[TruncatedPoly<S>]| -> Result<Vec<TruncatedPoly<S>>> {
        (0..m)
            .map(|i| {
                let mut acc = TruncatedPoly::zero(m, r);
                for (j, p) in polys.iter().enumerate() {
                    acc = acc.try_add(&p.scale(&a_inv[i][j]))?;
                }
                Ok(acc)
            })
            .collect()
    };
    let mut q = apply_inv(&identity)?;
    for _ in 1..r {
        let corrected: Vec<TruncatedPoly<S>> = higher
            .iter()
            .zip(&identity)
            .map(|(h_comp, id)| Ok(id.try_sub(&h_comp.substitute(&q)?)?))
            .collect::<Result<_>>()?;
        q = apply_inv(&corrected)?;
    }
    JetMap::new(
        jet.target_point.clone(),
        jet.source_point.clone(),
        q,
        JetOrders::Uniform(r),
    )
}

/// Gauss-Jordan inverse over the scalar domain; `None` when singular.
pub fn invert_matrix<S: Scalar>(a: &[Vec<S>]) -> Option<Vec<Vec<S>>> {
    let n = a.len();
    if a.iter().any(|row| row.len() != n) {
        return None;
    }
    let mut work: Vec<Vec<S>> = a.to_vec();
    let mut inv: Vec<Vec<S>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| if i == j { S::one() } else { S::zero() })
                .collect()
        })
        .collect();
    for col in 0..n {
        let pivot_row = (col..n)
            .max_by(|&i, &j| {
                work[i][col]
                    .pivot_score()
                    .partial_cmp(&work[j][col].pivot_score())
                    .unwrap_or(std::cmp::Ordering::Equal)
            })
            .unwrap();
        if work[pivot_row][col].pivot_score() == 0.0 {
            return None;
        }
        work.swap(col, pivot_row);
        inv.swap(col, pivot_row);
        let pivot = work[col][col].clone();
        for j in 0..n {
            work[col][j] = work[col][j].try_div(&pivot).ok()?;
            inv[col][j] = inv[col][j].try_div(&pivot).ok()?;
        }
        for row in 0..n {
            if row == col || work[row][col].is_zero() {
                continue;
            }
            let factor = work[row][col].clone();
            for j in 0..n {
                work[row][j] = work[row][j].clone() - factor.clone() * work[col][j].clone();
                inv[row][j] = inv[row][j].clone() - factor.clone() * inv[col][j].clone();
            }
        }
    }
    Some(inv)
}

/// Restricts a jet to lower truncation orders, uniformly or per component.
pub fn restrict_order<S: Scalar>(jet: &JetMap<S>, new_orders: &JetOrders) -> Result<JetMap<S>> {
    if let JetOrders::PerComponent(v) = new_orders {
        if v.len() != jet.target_dim() {
            return Err(JetError::DimMismatch {
                what: "per-component orders",
                expected: jet.target_dim(),
                got: v.len(),
            });
        }
    }
    for i in 0..jet.target_dim() {
        let current = jet.orders().component(i);
        let requested = new_orders.component(i);
        if requested > current {
            return Err(JetError::OrderExceeds { requested, current });
        }
    }
    let components = jet
        .components
        .iter()
        .enumerate()
        .map(|(i, c)| c.truncated(new_orders.component(i)))
        .collect();
    JetMap::new(
        jet.source_point.clone(),
        jet.target_point.clone(),
        components,
        new_orders.clone(),
    )
}

/// Prolongation of a fibered morphism applied to a jet `X`: composes
/// `f . X . f0^{-1}`, with `f0` inverted as a jet. `f0` must be a local
/// diffeomorphism (invertible linear part) based at `X`'s source.
pub fn prolong_morphism<S: Scalar>(
    x: &JetMap<S>,
    f: &JetMap<S>,
    f0: &JetMap<S>,
) -> Result<JetMap<S>> {
    let matches = f0
        .source_point()
        .iter()
        .zip(x.source_point())
        .all(|(a, b)| a.point_eq(b));
    if !matches {
        return Err(JetError::PointMismatch);
    }
    let f0_inv = invert_jet(f0)?;
    let shifted = compose_jets(x, &f0_inv)?;
    compose_jets(f, &shifted)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse;
    use crate::scalar::{rat, rat_int, Rat};

    fn poly(num_vars: usize, order: usize, terms: &[(&[usize], Rat)]) -> TruncatedPoly<Rat> {
        TruncatedPoly::from_terms(
            num_vars,
            order,
            terms
                .iter()
                .map(|(e, c)| (MultiIndex::new(e.to_vec()), c.clone())),
        )
        .unwrap()
    }

    fn jet1(map: &str, at: i64, order: usize) -> JetMap<Rat> {
        jet_of_expression(&[parse(map).unwrap()], &[rat_int(at)], order).unwrap()
    }

    #[test]
    fn ring_ops_examples() {
        let x = poly(1, 2, &[(&[1], rat_int(1))]);
        assert_eq!(x.try_mul(&x).unwrap(), poly(1, 2, &[(&[2], rat_int(1))]));

        let x_plus_x2 = poly(1, 2, &[(&[1], rat_int(1)), (&[2], rat_int(1))]);
        // The x^3 term is truncated away.
        assert_eq!(
            x_plus_x2.try_mul(&x).unwrap(),
            poly(1, 2, &[(&[2], rat_int(1))])
        );

        let a = poly(1, 2, &[(&[1], rat(1, 2)), (&[2], rat_int(1))]);
        let b = poly(1, 2, &[(&[1], rat(1, 2)), (&[2], rat_int(-1))]);
        assert_eq!(a.try_add(&b).unwrap(), poly(1, 2, &[(&[1], rat_int(1))]));
    }

    #[test]
    fn ring_ops_mismatches_error() {
        let a = poly(1, 2, &[(&[1], rat_int(1))]);
        let b = poly(1, 3, &[(&[1], rat_int(1))]);
        assert!(matches!(
            a.try_add(&b),
            Err(JetError::OrderMismatch { .. })
        ));
        let c = poly(2, 2, &[(&[1, 0], rat_int(1))]);
        assert!(matches!(
            a.try_mul(&c),
            Err(JetError::NumVarsMismatch { .. })
        ));
    }

    #[test]
    fn jet_of_square_at_one() {
        let j = jet1("x1^2", 1, 2);
        assert_eq!(j.target_point(), &[rat_int(1)]);
        assert_eq!(
            j.components()[0],
            poly(1, 2, &[(&[1], rat_int(2)), (&[2], rat_int(1))])
        );
    }

    #[test]
    fn jet_of_constant() {
        let j = jet1("7/2", 3, 4);
        assert_eq!(j.target_point(), &[rat(7, 2)]);
        assert!(j.components()[0].is_zero_poly());
    }

    #[test]
    fn jet_rejects_transcendental_in_rational_mode() {
        let err =
            jet_of_expression(&[parse("sin(x1)").unwrap()], &[rat_int(0)], 2).unwrap_err();
        assert_eq!(err, JetError::TranscendentalInExactMode("sin"));
    }

    #[test]
    fn jet_division_singularity() {
        let err = jet_of_expression(&[parse("1/x1").unwrap()], &[rat_int(0)], 2).unwrap_err();
        assert!(matches!(err, JetError::EvaluationSingularity(_)));
        // Away from the pole the expansion is the geometric series.
        let j = jet_of_expression(&[parse("1/(1-x1)").unwrap()], &[rat_int(0)], 3).unwrap();
        assert_eq!(
            j.components()[0],
            poly(
                1,
                3,
                &[(&[1], rat_int(1)), (&[2], rat_int(1)), (&[3], rat_int(1))]
            )
        );
    }

    #[test]
    fn float_exp_jet_coefficients() {
        let j = jet_of_expression(&[parse("exp(x1)").unwrap()], &[0.0_f64], 2).unwrap();
        assert!((j.target_point()[0] - 1.0).abs() < 1e-15);
        let c1 = j.components()[0].coeff(&MultiIndex::new(vec![1]));
        let c2 = j.components()[0].coeff(&MultiIndex::new(vec![2]));
        assert!((c1 - 1.0).abs() < 1e-15);
        assert!((c2 - 0.5).abs() < 1e-15);
    }

    #[test]
    fn compose_with_identity_is_identity_law() {
        let inner = jet1("x1 + x1^2", 0, 2);
        let outer = JetMap::identity(inner.target_point().to_vec(), 2);
        let composed = compose_jets(&outer, &inner).unwrap();
        assert!(composed.try_eq(&inner).unwrap());
    }

    #[test]
    fn compose_example_cancels_quadratic() {
        // f(x) = x + x^2, g(y) = y - y^2 at 0, r = 2: g(f(x)) = x + O(x^3).
        let f = jet1("x1 + x1^2", 0, 2);
        let g = jet1("x1 - x1^2", 0, 2);
        let gf = compose_jets(&g, &f).unwrap();
        assert_eq!(gf.components()[0], poly(1, 2, &[(&[1], rat_int(1))]));
    }

    #[test]
    fn order_one_composition_is_matrix_product() {
        let f = jet_of_expression(
            &[parse("x1 + 2*x2").unwrap(), parse("3*x1 - x2").unwrap()],
            &[rat_int(0), rat_int(0)],
            1,
        )
        .unwrap();
        let g = jet_of_expression(
            &[parse("x1 - x2").unwrap(), parse("x1 + x2").unwrap()],
            &[rat_int(0), rat_int(0)],
            1,
        )
        .unwrap();
        let gf = compose_jets(&g, &f).unwrap();
        let a = g.jacobian().unwrap();
        let b = f.jacobian().unwrap();
        let product = gf.jacobian().unwrap();
        for i in 0..2 {
            for j in 0..2 {
                let mut expected = rat_int(0);
                for (k, b_row) in b.iter().enumerate() {
                    expected += a[i][k].clone() * b_row[j].clone();
                }
                assert_eq!(product[i][j], expected);
            }
        }
    }

    #[test]
    fn compose_rejects_point_mismatch() {
        let f = jet1("x1 + 1", 0, 2); // targets 1
        let g = jet1("x1^2", 0, 2); // based at 0
        assert_eq!(compose_jets(&g, &f).unwrap_err(), JetError::PointMismatch);
    }

    #[test]
    fn compose_rejects_low_outer_order() {
        let f = jet1("x1 + x1^2", 0, 3);
        let g = jet1("x1", 0, 2);
        assert!(matches!(
            compose_jets(&g, &f),
            Err(JetError::OrderMismatch { .. })
        ));
    }

    #[test]
    fn invert_identity_and_linear() {
        let id = JetMap::<Rat>::identity(vec![rat_int(2)], 3);
        assert!(invert_jet(&id).unwrap().try_eq(&id).unwrap());

        let double = jet1("2*x1", 0, 3);
        let inv = invert_jet(&double).unwrap();
        assert_eq!(inv.components()[0], poly(1, 3, &[(&[1], rat(1, 2))]));
    }

    #[test]
    fn invert_quadratic_series() {
        let j = jet1("x1 + x1^2", 0, 3);
        let inv = invert_jet(&j).unwrap();
        assert_eq!(
            inv.components()[0],
            poly(
                1,
                3,
                &[(&[1], rat_int(1)), (&[2], rat_int(-1)), (&[3], rat_int(2))]
            )
        );
        // Two-sided identity, exactly.
        let left = compose_jets(&inv, &j).unwrap();
        let right = compose_jets(&j, &inv).unwrap();
        assert!(left.try_eq(&JetMap::identity(vec![rat_int(0)], 3)).unwrap());
        assert!(right.try_eq(&JetMap::identity(vec![rat_int(0)], 3)).unwrap());
    }

    #[test]
    fn invert_singular_linear_part() {
        let j = jet1("x1^2", 0, 2);
        assert_eq!(invert_jet(&j).unwrap_err(), JetError::SingularLinearPart);
    }

    #[test]
    fn restrict_examples() {
        let j = jet1("x1 + x1^2 + x1^3", 0, 3);
        let same = restrict_order(&j, &JetOrders::Uniform(3)).unwrap();
        assert!(same.try_eq(&j).unwrap());
        let lin = restrict_order(&j, &JetOrders::Uniform(1)).unwrap();
        assert_eq!(lin.components()[0], poly(1, 1, &[(&[1], rat_int(1))]));
        assert!(matches!(
            restrict_order(&j, &JetOrders::Uniform(4)),
            Err(JetError::OrderExceeds { .. })
        ));
    }

    #[test]
    fn restrict_then_restrict_is_direct() {
        let j = jet_of_expression(
            &[
                parse("x1 + x1^2*x2 - x2^3").unwrap(),
                parse("x2 + x1*x2").unwrap(),
            ],
            &[rat_int(0), rat_int(0)],
            4,
        )
        .unwrap();
        let via = restrict_order(
            &restrict_order(&j, &JetOrders::Uniform(3)).unwrap(),
            &JetOrders::Uniform(2),
        )
        .unwrap();
        let direct = restrict_order(&j, &JetOrders::Uniform(2)).unwrap();
        assert!(via.try_eq(&direct).unwrap());
    }

    #[test]
    fn equality_across_orders_is_an_error() {
        let a = jet1("x1", 0, 2);
        let b = jet1("x1", 0, 3);
        assert!(matches!(a.try_eq(&b), Err(JetError::OrderMismatch { .. })));
    }

    #[test]
    fn prolong_identity_morphism_fixes_jets() {
        // X = jet of the section s(x) = (x, x^2) into R x R at 0.
        let x = jet_of_expression(
            &[parse("x1").unwrap(), parse("x1^2").unwrap()],
            &[rat_int(0)],
            2,
        )
        .unwrap();
        let f = JetMap::identity(vec![rat_int(0), rat_int(0)], 2);
        let f0 = JetMap::identity(vec![rat_int(0)], 2);
        let out = prolong_morphism(&x, &f, &f0).unwrap();
        assert!(out.try_eq(&x).unwrap());
    }

    #[test]
    fn prolong_scales_fiber() {
        // f(x, y) = (x, 2y), f0 = id: sections map s(x) = (x, x^2) to (x, 2x^2).
        let x = jet_of_expression(
            &[parse("x1").unwrap(), parse("x1^2").unwrap()],
            &[rat_int(0)],
            2,
        )
        .unwrap();
        let f = jet_of_expression(
            &[parse("x1").unwrap(), parse("2*x2").unwrap()],
            &[rat_int(0), rat_int(0)],
            2,
        )
        .unwrap();
        let f0 = JetMap::identity(vec![rat_int(0)], 2);
        let out = prolong_morphism(&x, &f, &f0).unwrap();
        let expected = jet_of_expression(
            &[parse("x1").unwrap(), parse("2*x1^2").unwrap()],
            &[rat_int(0)],
            2,
        )
        .unwrap();
        assert!(out.try_eq(&expected).unwrap());
    }

    #[test]
    fn prolong_rebases_along_base_map() {
        // f0(x) = 2x, f(x, y) = (2x, y): s(x) = (x, x^2) becomes u -> (u, u^2/4).
        let x = jet_of_expression(
            &[parse("x1").unwrap(), parse("x1^2").unwrap()],
            &[rat_int(0)],
            2,
        )
        .unwrap();
        let f = jet_of_expression(
            &[parse("2*x1").unwrap(), parse("x2").unwrap()],
            &[rat_int(0), rat_int(0)],
            2,
        )
        .unwrap();
        let f0 = jet_of_expression(&[parse("2*x1").unwrap()], &[rat_int(0)], 2).unwrap();
        let out = prolong_morphism(&x, &f, &f0).unwrap();
        let expected = jet_of_expression(
            &[parse("x1").unwrap(), parse("x1^2/4").unwrap()],
            &[rat_int(0)],
            2,
        )
        .unwrap();
        assert!(out.try_eq(&expected).unwrap());
        // The result of prolonging a section jet is again a section jet.
        assert_eq!(
            out.components()[0],
            poly(1, 2, &[(&[1], rat_int(1))])
        );
    }

    #[test]
    fn prolong_rejects_singular_base() {
        let x = jet_of_expression(
            &[parse("x1").unwrap(), parse("x1^2").unwrap()],
            &[rat_int(0)],
            2,
        )
        .unwrap();
        let f = JetMap::identity(vec![rat_int(0), rat_int(0)], 2);
        let f0 = jet1("x1^2", 0, 2);
        assert_eq!(
            prolong_morphism(&x, &f, &f0).unwrap_err(),
            JetError::SingularLinearPart
        );
    }
}
