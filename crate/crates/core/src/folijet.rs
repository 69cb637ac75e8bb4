//! Jets modulo multifoliations with multiorders, their projections and
//! degenerations, and the (R,S,Q)-jet data of fibered morphisms together
//! with the representation map between the two.
//!
//! All multifoliations live in a single fixed adapted chart: each
//! foliation is the coordinate foliation of its leaf-index set, so class
//! equality is decidable by coefficient comparison of the canonical
//! (effective-order truncated) representative.

use std::collections::BTreeSet;

use crate::error::{JetError, Result};
use crate::multiindex::{binomial, effective_orders, MultiIndex};
use crate::scalar::Scalar;
use crate::tjet::{restrict_order, JetMap, JetOrders, TruncatedPoly};
use crate::transversal::{is_transversal, Subspace, TransversalityMode};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FoliationKind {
    Cap,
    Cup,
    Pp,
    Unchecked,
}

impl FoliationKind {
    pub fn name(self) -> &'static str {
        match self {
            FoliationKind::Cap => "cap",
            FoliationKind::Cup => "cup",
            FoliationKind::Pp => "pp",
            FoliationKind::Unchecked => "unchecked",
        }
    }
}

/// A family of coordinate foliations of the m-dimensional model. Group
/// `delta` collects the 1-based leaf-coordinate indices of foliation
/// `delta`; its leaf dimension is the group size. Groups may overlap and
/// need not cover.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Multifoliation {
    m: usize,
    groups: Vec<BTreeSet<usize>>,
    kind: FoliationKind,
}

impl Multifoliation {
    /// Builds and, for the cap/cup kinds, geometrically validates the
    /// family through its coordinate tangent subspaces.
    pub fn new(m: usize, groups: Vec<BTreeSet<usize>>, kind: FoliationKind) -> Result<Self> {
        if groups.is_empty() {
            return Err(JetError::InvalidMultifoliation(
                "a multifoliation needs at least one foliation".into(),
            ));
        }
        for g in &groups {
            for &c in g {
                if c < 1 || c > m {
                    return Err(JetError::InvalidMultifoliation(format!(
                        "coordinate {c} out of range 1..={m}"
                    )));
                }
            }
        }
        let mf = Multifoliation { m, groups, kind };
        match kind {
            FoliationKind::Cap => mf.validate_transversal(TransversalityMode::Cap)?,
            FoliationKind::Cup => mf.validate_transversal(TransversalityMode::Cup)?,
            FoliationKind::Pp | FoliationKind::Unchecked => {}
        }
        Ok(mf)
    }

    fn validate_transversal(&self, mode: TransversalityMode) -> Result<()> {
        let spaces = self.tangent_spaces()?;
        let report = is_transversal(&spaces, mode)?;
        if !report.transversal {
            return Err(JetError::InvalidMultifoliation(format!(
                "family is not {}-transversal; first failing subset {:?}",
                if mode == TransversalityMode::Cap {
                    "cap"
                } else {
                    "cup"
                },
                report.first_failure.unwrap_or_default()
            )));
        }
        // Total multifoliations (as many foliations as dimensions) force
        // the extreme leaf sizes.
        if self.groups.len() == self.m {
            let bad = match mode {
                TransversalityMode::Cap => self.groups.iter().any(|g| self.m - g.len() != 1),
                TransversalityMode::Cup => self.groups.iter().any(|g| g.len() != 1),
            };
            if bad {
                return Err(JetError::InvalidMultifoliation(
                    "total multifoliation with a leaf size other than the forced one".into(),
                ));
            }
        }
        Ok(())
    }

    /// Coordinate tangent subspaces span{e_i : i in I_delta}.
    pub fn tangent_spaces(&self) -> Result<Vec<Subspace>> {
        self.groups
            .iter()
            .map(|g| Subspace::coordinate(self.m, g))
            .collect()
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn delta(&self) -> usize {
        self.groups.len()
    }

    pub fn groups(&self) -> &[BTreeSet<usize>] {
        &self.groups
    }

    pub fn kind(&self) -> FoliationKind {
        self.kind
    }

    /// Leaf dimensions p_delta.
    pub fn leaf_dims(&self) -> Vec<usize> {
        self.groups.iter().map(|g| g.len()).collect()
    }

    pub fn effective_orders(&self, orders: &MultiOrder) -> Result<Vec<usize>> {
        effective_orders(self.m, &self.groups, orders.orders())
    }
}

/// One contact order per foliation of the family.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MultiOrder(Vec<usize>);

impl MultiOrder {
    pub fn new(orders: Vec<usize>) -> Self {
        MultiOrder(orders)
    }

    pub fn orders(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn max(&self) -> usize {
        self.0.iter().copied().max().unwrap_or(0)
    }
}

/// The fibration multifoliation of a trivialized fibered model with
/// base-first coordinates: the fiber foliation (leaves = fibers) comes
/// first, the section foliation of the constant-section trivialization
/// (leaves = sections) second. It is simultaneously cap- and
/// cup-transversal; the stored kind tag is cap.
pub fn fibration_multifoliation(p: usize, q: usize) -> Result<Multifoliation> {
    let m = p + q;
    if m == 0 {
        return Err(JetError::InvalidMultifoliation(
            "fibration needs a positive total dimension".into(),
        ));
    }
    let fiber: BTreeSet<usize> = (q + 1..=q + p).collect();
    let base: BTreeSet<usize> = (1..=q).collect();
    let mf = Multifoliation::new(m, vec![fiber, base], FoliationKind::Cap)?;
    mf.validate_transversal(TransversalityMode::Cup)?;
    Ok(mf)
}

/// A jet modulo a multifoliation: the canonical representative keeps, in
/// each target component, exactly the coefficients up to that component's
/// effective order. The target point survives even at multiorder zero.
#[derive(Clone, Debug)]
pub struct FoliJet<S> {
    foliation: Multifoliation,
    multiorder: MultiOrder,
    data: JetMap<S>,
}

impl<S: Scalar> FoliJet<S> {
    pub fn foliation(&self) -> &Multifoliation {
        &self.foliation
    }

    pub fn multiorder(&self) -> &MultiOrder {
        &self.multiorder
    }

    /// Canonical representative, truncated to the effective orders.
    pub fn data(&self) -> &JetMap<S> {
        &self.data
    }

    pub fn source_point(&self) -> &[S] {
        self.data.source_point()
    }

    pub fn target_point(&self) -> &[S] {
        self.data.target_point()
    }
}

/// Class of `jet` modulo the multifoliation: truncates component `i` to
/// its effective order. The input must carry at least the largest group
/// order in every component.
pub fn folijet_of_map<S: Scalar>(
    jet: &JetMap<S>,
    foliation: &Multifoliation,
    multiorder: &MultiOrder,
) -> Result<FoliJet<S>> {
    if jet.target_dim() != foliation.m() {
        return Err(JetError::DimMismatch {
            what: "jet target vs multifoliation model",
            expected: foliation.m(),
            got: jet.target_dim(),
        });
    }
    let eff = foliation.effective_orders(multiorder)?;
    let needed = multiorder.max();
    let available = (0..jet.target_dim())
        .map(|i| jet.orders().component(i))
        .min()
        .unwrap_or(0);
    if jet.target_dim() > 0 && available < needed {
        return Err(JetError::InsufficientOrder {
            needed,
            got: available,
        });
    }
    let data = restrict_order(jet, &JetOrders::PerComponent(eff))?;
    Ok(FoliJet {
        foliation: foliation.clone(),
        multiorder: multiorder.clone(),
        data,
    })
}

/// Equality of jet classes. Jets over different multifoliations or
/// multiorders are not comparable; jets with different source or target
/// points are comparable and unequal.
pub fn folijet_equal<S: Scalar>(a: &FoliJet<S>, b: &FoliJet<S>) -> Result<bool> {
    if a.foliation != b.foliation {
        return Err(JetError::FoliationMismatch);
    }
    if a.multiorder != b.multiorder {
        return Err(JetError::MultiOrderMismatch);
    }
    a.data.try_eq(&b.data)
}

/// Canonical projection obtained by restricting the multiorder.
pub fn restrict_multiorder<S: Scalar>(a: &FoliJet<S>, target: &MultiOrder) -> Result<FoliJet<S>> {
    if target.len() != a.multiorder.len() {
        return Err(JetError::MultiOrderLenMismatch {
            expected: a.multiorder.len(),
            got: target.len(),
        });
    }
    for (index, (&requested, &current)) in target
        .orders()
        .iter()
        .zip(a.multiorder.orders())
        .enumerate()
    {
        if requested > current {
            return Err(JetError::MultiOrderExceeds {
                index,
                requested,
                current,
            });
        }
    }
    let eff = a.foliation.effective_orders(target)?;
    let data = restrict_order(&a.data, &JetOrders::PerComponent(eff))?;
    Ok(FoliJet {
        foliation: a.foliation.clone(),
        multiorder: target.clone(),
        data,
    })
}

/// Dimension of the fiber of the jet space over fixed source and target
/// points: positive-degree coefficients of the canonical representative.
pub fn folijet_fiber_dim(
    foliation: &Multifoliation,
    multiorder: &MultiOrder,
    source_dim: usize,
) -> Result<u64> {
    let eff = foliation.effective_orders(multiorder)?;
    Ok(eff.iter().map(|&e| binomial(source_dim + e, e) - 1).sum())
}

/// Base-first fibered coordinate model: coordinates 1..base are the base,
/// base+1..base+fiber the fiber.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FiberedModel {
    pub base: usize,
    pub fiber: usize,
}

impl FiberedModel {
    pub fn new(base: usize, fiber: usize) -> Self {
        FiberedModel { base, fiber }
    }

    pub fn total(self) -> usize {
        self.base + self.fiber
    }
}

/// The (R,S,Q)-jet data of a fibered morphism: the R-jet of the whole map,
/// the S-jet of its restriction to the fiber through the point, and the
/// Q-jet of the base map, with R <= S and R <= Q.
#[derive(Clone, Debug)]
pub struct RSQJet<S> {
    r: usize,
    s: usize,
    q: usize,
    source: FiberedModel,
    target: FiberedModel,
    whole_r: JetMap<S>,
    fiber_s: JetMap<S>,
    base_q: JetMap<S>,
}

impl<S: Scalar> RSQJet<S> {
    #[allow(clippy::too_many_arguments)]
    fn new(
        r: usize,
        s: usize,
        q: usize,
        source: FiberedModel,
        target: FiberedModel,
        whole_r: JetMap<S>,
        fiber_s: JetMap<S>,
        base_q: JetMap<S>,
    ) -> Result<Self> {
        if r > s || r > q {
            return Err(JetError::RsqOrderViolation { r, s, q });
        }
        let jet = RSQJet {
            r,
            s,
            q,
            source,
            target,
            whole_r,
            fiber_s,
            base_q,
        };
        jet.validate()?;
        Ok(jet)
    }

    fn validate(&self) -> Result<()> {
        // Fiberedness of the whole R-jet's base components.
        for (i, comp) in self.whole_r.components()[..self.target.base]
            .iter()
            .enumerate()
        {
            check_base_free_of_fiber(comp, self.source, i)?;
        }
        // The fiber S-jet restricted to R agrees with the pure-fiber part
        // of the whole R-jet.
        let fiber_restricted = restrict_order(&self.fiber_s, &JetOrders::Uniform(self.r))?;
        let fiber_of_whole = fiber_restriction(&self.whole_r, self.source, self.target, self.r)?;
        if !fiber_restricted.try_eq(&fiber_of_whole)? {
            return Err(JetError::InvalidMultifoliation(
                "fiber jet disagrees with the whole jet at order R".into(),
            ));
        }
        // Same for the base part.
        let base_restricted = restrict_order(&self.base_q, &JetOrders::Uniform(self.r))?;
        let base_of_whole = base_extraction(&self.whole_r, self.source, self.target, self.r)?;
        if !base_restricted.try_eq(&base_of_whole)? {
            return Err(JetError::InvalidMultifoliation(
                "base jet disagrees with the whole jet at order R".into(),
            ));
        }
        Ok(())
    }

    pub fn orders(&self) -> (usize, usize, usize) {
        (self.r, self.s, self.q)
    }

    pub fn source_model(&self) -> FiberedModel {
        self.source
    }

    pub fn target_model(&self) -> FiberedModel {
        self.target
    }

    pub fn whole_r(&self) -> &JetMap<S> {
        &self.whole_r
    }

    pub fn fiber_s(&self) -> &JetMap<S> {
        &self.fiber_s
    }

    pub fn base_q(&self) -> &JetMap<S> {
        &self.base_q
    }

    pub fn try_eq(&self, other: &Self) -> Result<bool> {
        if (self.r, self.s, self.q) != (other.r, other.s, other.q) {
            return Err(JetError::RsqOrderViolation {
                r: other.r,
                s: other.s,
                q: other.q,
            });
        }
        Ok(self.whole_r.try_eq(&other.whole_r)?
            && self.fiber_s.try_eq(&other.fiber_s)?
            && self.base_q.try_eq(&other.base_q)?)
    }
}

fn check_base_free_of_fiber<S: Scalar>(
    comp: &TruncatedPoly<S>,
    source: FiberedModel,
    component: usize,
) -> Result<()> {
    for (index, _) in comp.terms() {
        for (var, &e) in index.exponents().iter().enumerate() {
            if var >= source.base && e > 0 {
                return Err(JetError::NotFibered {
                    component: component + 1,
                    variable: var + 1,
                });
            }
        }
    }
    Ok(())
}

/// Keeps only pure-fiber monomials of the fiber components and re-expresses
/// them in the fiber variables: the jet of the restriction to the fiber
/// through the source point.
fn fiber_restriction<S: Scalar>(
    jet: &JetMap<S>,
    source: FiberedModel,
    target: FiberedModel,
    order: usize,
) -> Result<JetMap<S>> {
    let comps = jet.components()[target.base..]
        .iter()
        .map(|comp| {
            let terms = comp
                .terms()
                .filter(|(index, _)| {
                    index.exponents()[..source.base].iter().all(|&e| e == 0)
                        && index.degree() <= order
                })
                .map(|(index, coeff)| {
                    (
                        MultiIndex::new(index.exponents()[source.base..].to_vec()),
                        coeff.clone(),
                    )
                });
            TruncatedPoly::from_terms(source.fiber, order, terms)
        })
        .collect::<Result<Vec<_>>>()?;
    JetMap::new(
        jet.source_point()[source.base..].to_vec(),
        jet.target_point()[target.base..].to_vec(),
        comps,
        JetOrders::Uniform(order),
    )
}

/// Re-expresses the base components in the base variables; the components
/// must already be free of fiber variables.
fn base_extraction<S: Scalar>(
    jet: &JetMap<S>,
    source: FiberedModel,
    target: FiberedModel,
    order: usize,
) -> Result<JetMap<S>> {
    let comps = jet.components()[..target.base]
        .iter()
        .enumerate()
        .map(|(i, comp)| {
            check_base_free_of_fiber(comp, source, i)?;
            let terms = comp
                .terms()
                .filter(|(index, _)| index.degree() <= order)
                .map(|(index, coeff)| {
                    (
                        MultiIndex::new(index.exponents()[..source.base].to_vec()),
                        coeff.clone(),
                    )
                });
            TruncatedPoly::from_terms(source.base, order, terms)
        })
        .collect::<Result<Vec<_>>>()?;
    JetMap::new(
        jet.source_point()[..source.base].to_vec(),
        jet.target_point()[..target.base].to_vec(),
        comps,
        JetOrders::Uniform(order),
    )
}

/// Extracts the (R,S,Q)-jet of a fibered morphism given as a plain jet of
/// order at least max(S, Q) on base-first models.
pub fn rsq_of_morphism<S: Scalar>(
    jet: &JetMap<S>,
    source: FiberedModel,
    target: FiberedModel,
    r: usize,
    s: usize,
    q: usize,
) -> Result<RSQJet<S>> {
    if r > s || r > q {
        return Err(JetError::RsqOrderViolation { r, s, q });
    }
    if jet.source_dim() != source.total() {
        return Err(JetError::DimMismatch {
            what: "morphism source",
            expected: source.total(),
            got: jet.source_dim(),
        });
    }
    if jet.target_dim() != target.total() {
        return Err(JetError::DimMismatch {
            what: "morphism target",
            expected: target.total(),
            got: jet.target_dim(),
        });
    }
    let have = jet.uniform_order()?;
    let needed = s.max(q);
    if have < needed {
        return Err(JetError::InsufficientOrder { needed, got: have });
    }
    for (i, comp) in jet.components()[..target.base].iter().enumerate() {
        check_base_free_of_fiber(comp, source, i)?;
    }
    let whole_r = restrict_order(jet, &JetOrders::Uniform(r))?;
    let fiber_s = fiber_restriction(jet, source, target, s)?;
    let base_q = base_extraction(jet, source, target, q)?;
    RSQJet::new(r, s, q, source, target, whole_r, fiber_s, base_q)
}

/// Theorem-2 style representation: reads the (R,S,Q)-jet off a jet modulo
/// the fibration multifoliation taken at multiorder (S, Q). Well defined
/// on classes: equal inputs produce equal outputs, because every retained
/// piece is a function of the canonical representative.
pub fn rsq_from_folijet<S: Scalar>(
    a: &FoliJet<S>,
    source: FiberedModel,
    r: usize,
) -> Result<RSQJet<S>> {
    let target = fibration_target_model(a.foliation())?;
    let s = a.multiorder().orders()[0];
    let q = a.multiorder().orders()[1];
    if r > s || r > q {
        return Err(JetError::RsqOrderViolation { r, s, q });
    }
    if a.data.source_dim() != source.total() {
        return Err(JetError::DimMismatch {
            what: "morphism source",
            expected: source.total(),
            got: a.data.source_dim(),
        });
    }
    for (i, comp) in a.data.components()[..target.base].iter().enumerate() {
        check_base_free_of_fiber(comp, source, i)?;
    }
    let whole_r = restrict_order(&a.data, &JetOrders::Uniform(r))?;
    let fiber_s = fiber_restriction(&a.data, source, target, s)?;
    let base_q = base_extraction(&a.data, source, target, q)?;
    RSQJet::new(r, s, q, source, target, whole_r, fiber_s, base_q)
}

/// Recovers (p, q) from a multifoliation produced by
/// `fibration_multifoliation`; errors when the group pattern is not the
/// fibration one.
pub fn fibration_target_model(foliation: &Multifoliation) -> Result<FiberedModel> {
    let m = foliation.m();
    if foliation.delta() != 2 {
        return Err(JetError::InvalidMultifoliation(
            "fibration multifoliation has exactly two foliations".into(),
        ));
    }
    let p = foliation.groups()[0].len();
    let q = foliation.groups()[1].len();
    if p + q != m {
        return Err(JetError::InvalidMultifoliation(
            "fibration groups must partition the coordinates".into(),
        ));
    }
    let fiber: BTreeSet<usize> = (q + 1..=q + p).collect();
    let base: BTreeSet<usize> = (1..=q).collect();
    if foliation.groups()[0] != fiber || foliation.groups()[1] != base {
        return Err(JetError::InvalidMultifoliation(
            "groups are not the base-first fibration pattern".into(),
        ));
    }
    Ok(FiberedModel::new(q, p))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse;
    use crate::scalar::{rat_int, Rat};
    use crate::tjet::jet_of_expression;
    use crate::transversal::subspace_dims;

    fn set(v: &[usize]) -> BTreeSet<usize> {
        v.iter().copied().collect()
    }

    fn jet_r(maps: &[&str], at: &[i64], order: usize) -> JetMap<Rat> {
        let exprs: Vec<_> = maps.iter().map(|m| parse(m).unwrap()).collect();
        let point: Vec<Rat> = at.iter().map(|&a| rat_int(a)).collect();
        jet_of_expression(&exprs, &point, order).unwrap()
    }

    #[test]
    fn fibration_examples() {
        let f = fibration_multifoliation(1, 1).unwrap();
        assert_eq!(f.groups(), &[set(&[2]), set(&[1])]);
        let f = fibration_multifoliation(2, 1).unwrap();
        assert_eq!(f.groups(), &[set(&[2, 3]), set(&[1])]);
        // Rank cross-check: complementary coordinate subspaces.
        let spaces = f.tangent_spaces().unwrap();
        let (inter, sum) = subspace_dims(&spaces, &[0, 1]).unwrap();
        assert_eq!((inter, sum), (0, 3));
        assert_eq!(spaces[0].codim() + spaces[1].codim(), 3);
        assert_eq!(spaces[0].dim() + spaces[1].dim(), 3);
    }

    #[test]
    fn fibration_needs_positive_dimension() {
        assert!(fibration_multifoliation(0, 0).is_err());
    }

    #[test]
    fn invalid_cap_family_is_rejected() {
        // Two identical hyperplanes are not cap-transversal.
        let err =
            Multifoliation::new(3, vec![set(&[1, 2]), set(&[1, 2])], FoliationKind::Cap)
                .unwrap_err();
        assert!(matches!(err, JetError::InvalidMultifoliation(_)));
    }

    #[test]
    fn folijet_of_map_truncates_per_component() {
        let jet = jet_r(&["x1 + x1^3", "x1^2", "x1 + x1^2"], &[0], 3);
        let f = Multifoliation::new(3, vec![set(&[1, 2]), set(&[3])], FoliationKind::Unchecked)
            .unwrap();
        let r = MultiOrder::new(vec![2, 1]);
        let fj = folijet_of_map(&jet, &f, &r).unwrap();
        let expected = jet_r(&["x1", "x1^2", "x1"], &[0], 3);
        // Components keep (t, t^2, t) at orders (2, 2, 1).
        assert_eq!(
            fj.data().components()[0],
            expected.components()[0].truncated(2)
        );
        assert_eq!(
            fj.data().components()[1],
            expected.components()[1].truncated(2)
        );
        assert_eq!(
            fj.data().components()[2],
            expected.components()[2].truncated(1)
        );
    }

    #[test]
    fn folijet_zero_multiorder_keeps_only_the_points() {
        let jet = jet_r(&["x1 + x1^3", "x1^2"], &[0], 3);
        let f = Multifoliation::new(2, vec![set(&[1]), set(&[2])], FoliationKind::Unchecked)
            .unwrap();
        let fj = folijet_of_map(&jet, &f, &MultiOrder::new(vec![0, 0])).unwrap();
        assert!(fj.data().components().iter().all(|c| c.is_zero_poly()));
        assert_eq!(fj.target_point(), jet.target_point());
    }

    #[test]
    fn folijet_single_cover_is_classical_jet() {
        let jet = jet_r(&["x1 + x1^2", "x1^3"], &[0], 2);
        let f = Multifoliation::new(2, vec![set(&[1, 2])], FoliationKind::Unchecked).unwrap();
        let fj = folijet_of_map(&jet, &f, &MultiOrder::new(vec![2])).unwrap();
        for i in 0..2 {
            assert_eq!(&fj.data().components()[i], &jet.components()[i]);
        }
    }

    #[test]
    fn folijet_insufficient_order() {
        let jet = jet_r(&["x1"], &[0], 1);
        let f = Multifoliation::new(1, vec![set(&[1])], FoliationKind::Unchecked).unwrap();
        assert!(matches!(
            folijet_of_map(&jet, &f, &MultiOrder::new(vec![2])),
            Err(JetError::InsufficientOrder { .. })
        ));
    }

    #[test]
    fn folijet_equality_ignores_data_beyond_effective_orders() {
        let f = Multifoliation::new(3, vec![set(&[1, 2]), set(&[3])], FoliationKind::Unchecked)
            .unwrap();
        let r = MultiOrder::new(vec![2, 1]);
        let a = folijet_of_map(&jet_r(&["x1 + x1^3", "x1^2", "x1 + x1^2"], &[0], 4), &f, &r)
            .unwrap();
        let b = folijet_of_map(
            &jet_r(&["x1 + 5*x1^3", "x1^2 + x1^4", "x1 + 7*x1^2"], &[0], 4),
            &f,
            &r,
        )
        .unwrap();
        assert!(folijet_equal(&a, &b).unwrap());
        assert!(folijet_equal(&a, &a).unwrap());
        let c = folijet_of_map(&jet_r(&["2*x1", "x1^2", "x1"], &[0], 4), &f, &r).unwrap();
        assert!(!folijet_equal(&a, &c).unwrap());
    }

    #[test]
    fn folijet_equality_across_structures_errors() {
        let f1 = Multifoliation::new(1, vec![set(&[1])], FoliationKind::Unchecked).unwrap();
        let f2 = Multifoliation::new(1, vec![set(&[])], FoliationKind::Unchecked).unwrap();
        let jet = jet_r(&["x1"], &[0], 2);
        let a = folijet_of_map(&jet, &f1, &MultiOrder::new(vec![1])).unwrap();
        let b = folijet_of_map(&jet, &f2, &MultiOrder::new(vec![1])).unwrap();
        assert_eq!(
            folijet_equal(&a, &b).unwrap_err(),
            JetError::FoliationMismatch
        );
        let c = folijet_of_map(&jet, &f1, &MultiOrder::new(vec![2])).unwrap();
        assert_eq!(
            folijet_equal(&a, &c).unwrap_err(),
            JetError::MultiOrderMismatch
        );
    }

    #[test]
    fn restrict_multiorder_examples() {
        let f = Multifoliation::new(2, vec![set(&[1]), set(&[2])], FoliationKind::Unchecked)
            .unwrap();
        let jet = jet_r(&["x1 + x1^2", "x1 - x1^2"], &[0], 2);
        let a = folijet_of_map(&jet, &f, &MultiOrder::new(vec![2, 2])).unwrap();

        let same = restrict_multiorder(&a, &MultiOrder::new(vec![2, 2])).unwrap();
        assert!(folijet_equal(&a, &same).unwrap());

        let zero = restrict_multiorder(&a, &MultiOrder::new(vec![0, 0])).unwrap();
        assert!(zero.data().components().iter().all(|c| c.is_zero_poly()));

        // Chain (2,2) -> (2,1) -> (1,1) equals the direct restriction.
        let chained = restrict_multiorder(
            &restrict_multiorder(&a, &MultiOrder::new(vec![2, 1])).unwrap(),
            &MultiOrder::new(vec![1, 1]),
        )
        .unwrap();
        let direct = restrict_multiorder(&a, &MultiOrder::new(vec![1, 1])).unwrap();
        assert!(folijet_equal(&chained, &direct).unwrap());

        assert!(matches!(
            restrict_multiorder(&a, &MultiOrder::new(vec![3, 0])),
            Err(JetError::MultiOrderExceeds { .. })
        ));
    }

    #[test]
    fn fiber_dims() {
        let f = Multifoliation::new(3, vec![set(&[1, 2]), set(&[3])], FoliationKind::Unchecked)
            .unwrap();
        // h = 1, effective orders (2, 2, 1): 2 + 2 + 1.
        assert_eq!(
            folijet_fiber_dim(&f, &MultiOrder::new(vec![2, 1]), 1).unwrap(),
            5
        );
        assert_eq!(
            folijet_fiber_dim(&f, &MultiOrder::new(vec![0, 0]), 3).unwrap(),
            0
        );
        // Single full cover: the classical jet fiber dimension.
        for (m, h, r) in [(2usize, 1usize, 3usize), (3, 2, 2)] {
            let full =
                Multifoliation::new(m, vec![(1..=m).collect()], FoliationKind::Unchecked)
                    .unwrap();
            let expected = m as u64 * (binomial(h + r, r) - 1);
            assert_eq!(
                folijet_fiber_dim(&full, &MultiOrder::new(vec![r]), h).unwrap(),
                expected
            );
        }
    }

    #[test]
    fn rsq_extraction_example() {
        // f(x, y) = (x + x^3, y + x y + y^2) at (0, 0), (R,S,Q) = (1,2,3).
        let jet = jet_r(&["x1 + x1^3", "x2 + x1*x2 + x2^2"], &[0, 0], 3);
        let model = FiberedModel::new(1, 1);
        let rsq = rsq_of_morphism(&jet, model, model, 1, 2, 3).unwrap();
        let whole = jet_r(&["x1", "x2"], &[0, 0], 1);
        assert!(rsq.whole_r().try_eq(&whole).unwrap());
        let fiber = jet_r(&["x1 + x1^2"], &[0], 2);
        assert!(rsq.fiber_s().try_eq(&fiber).unwrap());
        let base = jet_r(&["x1 + x1^3"], &[0], 3);
        assert!(rsq.base_q().try_eq(&base).unwrap());
    }

    #[test]
    fn rsq_identity_morphism() {
        let jet = jet_r(&["x1", "x2"], &[0, 0], 3);
        let model = FiberedModel::new(1, 1);
        let rsq = rsq_of_morphism(&jet, model, model, 2, 2, 3).unwrap();
        assert!(rsq
            .whole_r()
            .try_eq(&JetMap::identity(vec![rat_int(0), rat_int(0)], 2))
            .unwrap());
        assert!(rsq
            .fiber_s()
            .try_eq(&JetMap::identity(vec![rat_int(0)], 2))
            .unwrap());
        assert!(rsq
            .base_q()
            .try_eq(&JetMap::identity(vec![rat_int(0)], 3))
            .unwrap());
    }

    #[test]
    fn rsq_rejects_non_fibered_input() {
        let jet = jet_r(&["x1 + x2", "x2"], &[0, 0], 2);
        let model = FiberedModel::new(1, 1);
        assert!(matches!(
            rsq_of_morphism(&jet, model, model, 1, 2, 2),
            Err(JetError::NotFibered {
                component: 1,
                variable: 2
            })
        ));
    }

    #[test]
    fn rsq_order_violations() {
        let jet = jet_r(&["x1", "x2"], &[0, 0], 3);
        let model = FiberedModel::new(1, 1);
        assert!(matches!(
            rsq_of_morphism(&jet, model, model, 3, 2, 3),
            Err(JetError::RsqOrderViolation { .. })
        ));
        assert!(matches!(
            rsq_of_morphism(&jet, model, model, 1, 2, 4),
            Err(JetError::InsufficientOrder { .. })
        ));
    }

    #[test]
    fn rsq_from_folijet_matches_direct_extraction() {
        let jet = jet_r(&["x1", "x2 + x1*x2"], &[0, 0], 2);
        let f = fibration_multifoliation(1, 1).unwrap();
        let folijet = folijet_of_map(&jet, &f, &MultiOrder::new(vec![2, 2])).unwrap();
        let model = FiberedModel::new(1, 1);
        let via_folijet = rsq_from_folijet(&folijet, model, 1).unwrap();
        let direct = rsq_of_morphism(&jet, model, model, 1, 2, 2).unwrap();
        assert!(via_folijet.try_eq(&direct).unwrap());
        let whole = jet_r(&["x1", "x2"], &[0, 0], 1);
        assert!(via_folijet.whole_r().try_eq(&whole).unwrap());
        let fiber = jet_r(&["x1"], &[0], 2);
        assert!(via_folijet.fiber_s().try_eq(&fiber).unwrap());
        let base = jet_r(&["x1"], &[0], 2);
        assert!(via_folijet.base_q().try_eq(&base).unwrap());
    }

    #[test]
    fn strictness_witness_refinement_not_bijection() {
        // f = (x, y + xy) and g = (x, y): equal (R,S,Q)-jets at (1,2,2),
        // unequal (2,2)-jets modulo the fibration (the xy term).
        let f_jet = jet_r(&["x1", "x2 + x1*x2"], &[0, 0], 2);
        let g_jet = jet_r(&["x1", "x2"], &[0, 0], 2);
        let f = fibration_multifoliation(1, 1).unwrap();
        let order = MultiOrder::new(vec![2, 2]);
        let a = folijet_of_map(&f_jet, &f, &order).unwrap();
        let b = folijet_of_map(&g_jet, &f, &order).unwrap();
        assert!(!folijet_equal(&a, &b).unwrap());
        let model = FiberedModel::new(1, 1);
        let rsq_a = rsq_from_folijet(&a, model, 1).unwrap();
        let rsq_b = rsq_from_folijet(&b, model, 1).unwrap();
        assert!(rsq_a.try_eq(&rsq_b).unwrap());
    }

    #[test]
    fn identity_from_folijet() {
        let jet = jet_r(&["x1", "x2"], &[0, 0], 2);
        let f = fibration_multifoliation(1, 1).unwrap();
        let folijet = folijet_of_map(&jet, &f, &MultiOrder::new(vec![2, 2])).unwrap();
        let rsq = rsq_from_folijet(&folijet, FiberedModel::new(1, 1), 2).unwrap();
        assert!(rsq
            .whole_r()
            .try_eq(&JetMap::identity(vec![rat_int(0), rat_int(0)], 2))
            .unwrap());
    }
}
