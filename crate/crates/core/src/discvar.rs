//! The minimal discriminant variety of a parametric system.
//!
//! [`preprocess`] saturates the equalities by the product of the
//! inequations, projects onto the parameters and computes `W_F`. The
//! remaining components are independent of each other once preprocessing is
//! done: properness defects (`W_inf`), the critical locus (`W_c`, via the
//! Jacobian of the *input* equalities rather than of the saturated ideal) and
//! the singular locus of the projection closure (`W_sing`). [`assemble`]
//! joins them into `W_D`, kept as a union of component ideals.

use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::groebner::{buchberger, GroebnerBasis};
use crate::ideal::{
    dimension, eliminate_basis, ideal_contains, jacobian, minors_ideal, product, saturate, Ideal,
};
use crate::order::{split_leading_x, BlockOrder};
use crate::poly::Polynomial;
use crate::ring::{same_ring, Ring};

/// Equalities `E` and inequations `F` over a ring split into parameters and
/// unknowns.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParametricSystem {
    ring: Arc<Ring>,
    equalities: Vec<Polynomial>,
    inequations: Vec<Polynomial>,
}

impl ParametricSystem {
    pub fn new(ring: Arc<Ring>, equalities: Vec<Polynomial>, inequations: Vec<Polynomial>) -> Result<Self> {
        if equalities.is_empty() {
            return Err(Error::NoGenerators);
        }
        if equalities
            .iter()
            .chain(&inequations)
            .any(|p| !same_ring(&ring, p.ring()))
        {
            return Err(Error::RingMismatch);
        }
        Ok(ParametricSystem {
            ring,
            equalities,
            inequations,
        })
    }

    pub fn ring(&self) -> &Arc<Ring> {
        &self.ring
    }

    pub fn equalities(&self) -> &[Polynomial] {
        &self.equalities
    }

    pub fn inequations(&self) -> &[Polynomial] {
        &self.inequations
    }

    /// `prod F`, which is 1 when there are no inequations.
    pub fn inequation_product(&self) -> Result<Polynomial> {
        product(&self.ring, &self.inequations)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ComponentLabel {
    WInfinity,
    WF,
    WC,
    WSing,
    WSd,
}

impl ComponentLabel {
    pub const ALL: [ComponentLabel; 5] = [
        ComponentLabel::WInfinity,
        ComponentLabel::WF,
        ComponentLabel::WC,
        ComponentLabel::WSing,
        ComponentLabel::WSd,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            ComponentLabel::WInfinity => "w_infinity",
            ComponentLabel::WF => "w_f",
            ComponentLabel::WC => "w_c",
            ComponentLabel::WSing => "w_sing",
            ComponentLabel::WSd => "w_sd",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ComponentStatus {
    Computed,
    Empty,
    AssumedEmpty,
    UserSupplied,
}

impl ComponentStatus {
    pub fn as_str(self) -> &'static str {
        match self {
            ComponentStatus::Computed => "computed",
            ComponentStatus::Empty => "empty",
            ComponentStatus::AssumedEmpty => "assumed_empty",
            ComponentStatus::UserSupplied => "user_supplied",
        }
    }
}

/// One piece of the discriminant variety: the zero set of `generators`,
/// which only involve parameters. Empty pieces carry the generator `1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VarietyComponent {
    pub label: ComponentLabel,
    pub status: ComponentStatus,
    pub generators: Vec<Polynomial>,
}

impl VarietyComponent {
    /// A computed component given by a reduced basis; the unit ideal yields
    /// status `Empty`.
    pub fn from_basis(label: ComponentLabel, basis: GroebnerBasis) -> Self {
        let status = if basis.is_unit() {
            ComponentStatus::Empty
        } else {
            ComponentStatus::Computed
        };
        VarietyComponent {
            label,
            status,
            generators: basis.into_elements(),
        }
    }

    pub fn empty(label: ComponentLabel, ring: &Arc<Ring>) -> Self {
        VarietyComponent {
            label,
            status: ComponentStatus::Empty,
            generators: alloc::vec![Polynomial::one(ring.clone())],
        }
    }

    /// `W_sd` when it is not computed.
    pub fn assumed_empty_sd(ring: &Arc<Ring>) -> Self {
        VarietyComponent {
            label: ComponentLabel::WSd,
            status: ComponentStatus::AssumedEmpty,
            generators: alloc::vec![Polynomial::one(ring.clone())],
        }
    }

    /// `W_sd` from caller-supplied parameter-only generators. The generators
    /// are replaced by their reduced basis; a unit ideal is reported empty.
    pub fn user_supplied_sd(ring: &Arc<Ring>, generators: Vec<Polynomial>) -> Result<Self> {
        let params = ring.parameters();
        if let Some(bad) = generators.iter().find(|g| !g.only_in(&params)) {
            return Err(Error::UnknownVariable(alloc::format!(
                "W_sd generator `{bad}` involves an unknown"
            )));
        }
        let basis = Ideal::new(ring.clone(), generators)?.basis(&BlockOrder::elimination(ring))?;
        let mut c = VarietyComponent::from_basis(ComponentLabel::WSd, basis);
        if c.status == ComponentStatus::Computed {
            c.status = ComponentStatus::UserSupplied;
        }
        Ok(c)
    }

    /// The component's variety is empty (computed or assumed).
    pub fn is_empty(&self) -> bool {
        matches!(
            self.status,
            ComponentStatus::Empty | ComponentStatus::AssumedEmpty
        )
    }
}

/// Output of [`preprocess`].
#[derive(Debug, Clone)]
pub struct PreprocessResult {
    /// `<E> : (prod F)^inf`.
    pub ideal: Ideal,
    /// Reduced basis of `ideal` under the `(X > U)` order.
    pub basis: GroebnerBasis,
    /// Reduced basis of `ideal ∩ Q[U]`, the closure of the projection.
    pub projection_closure: GroebnerBasis,
    /// Dimension of the projection closure; `-1` when it is empty.
    pub delta: i64,
    pub w_f: VarietyComponent,
}

pub fn preprocess(sys: &ParametricSystem) -> Result<PreprocessResult> {
    let ring = sys.ring();
    let order = BlockOrder::elimination(ring);
    let ideal = saturate(ring, sys.equalities(), &sys.inequation_product()?)?;
    let basis = ideal.basis(&order)?;
    let projection_closure = eliminate_basis(&basis, &ring.unknowns())?;
    let delta = dimension(&projection_closure, &ring.parameters());
    let w_f = w_f_component(&ideal, sys.inequations())?;
    Ok(PreprocessResult {
        ideal,
        basis,
        projection_closure,
        delta,
        w_f,
    })
}

/// `W_F`: the projection of `V(I) ∩ V(prod F)`, i.e. the elimination ideal
/// of `I + <prod F>`.
pub fn w_f_component(ideal: &Ideal, inequations: &[Polynomial]) -> Result<VarietyComponent> {
    let ring = ideal.ring();
    if inequations.is_empty() {
        return Ok(VarietyComponent::empty(ComponentLabel::WF, ring));
    }
    let order = BlockOrder::elimination(ring);
    let mut gens = ideal.generators().to_vec();
    gens.push(product(ring, inequations)?);
    let gb = buchberger(&gens, &order)?;
    Ok(VarietyComponent::from_basis(
        ComponentLabel::WF,
        eliminate_basis(&gb, &ring.unknowns())?,
    ))
}

/// `W_inf` from the leading-coefficient criterion on the `(X > U)` basis.
///
/// For each unknown `x_i`, the basis elements whose leading monomial has a
/// pure positive power of `x_i` as unknowns' part are collected together with
/// their parameter coefficients `c_i`. If some unknown has no such element the
/// projection is nowhere proper and the whole closure is returned; otherwise
/// the defect locus is the union over `i` of `V(c_i) ∩ closure`.
pub fn properness_defects(pre: &PreprocessResult) -> Result<VarietyComponent> {
    let ring = pre.basis.ring();
    let order = BlockOrder::elimination(ring);
    let unknowns = ring.unknowns();
    if unknowns.is_empty() {
        return Ok(VarietyComponent::empty(ComponentLabel::WInfinity, ring));
    }

    let mut coefficient_ideals: Vec<Vec<Polynomial>> = alloc::vec![Vec::new(); unknowns.len()];
    for g in pre.basis.elements() {
        let (x_part, lc) = split_leading_x(g, &order)?;
        let support: Vec<usize> = x_part.support().collect();
        if let [v] = support.as_slice() {
            let i = unknowns.iter().position(|u| u == v).expect("support lies in X");
            coefficient_ideals[i].push(lc);
        }
    }
    let closure = pre.projection_closure.elements();
    if coefficient_ideals.iter().any(Vec::is_empty) {
        return Ok(VarietyComponent::from_basis(
            ComponentLabel::WInfinity,
            pre.projection_closure.clone(),
        ));
    }

    let mut union: Option<Ideal> = None;
    for mut cs in coefficient_ideals {
        cs.extend_from_slice(closure);
        let mut piece = Ideal::new(ring.clone(), cs)?;
        if piece.is_unit()? {
            continue;
        }
        union = Some(match union {
            None => piece,
            Some(acc) => acc.product(&piece)?,
        });
    }
    match union {
        None => Ok(VarietyComponent::empty(ComponentLabel::WInfinity, ring)),
        Some(ideal) => Ok(VarietyComponent::from_basis(
            ComponentLabel::WInfinity,
            ideal.basis(&order)?,
        )),
    }
}

/// Minor ideal of the Jacobian of `gens` in `vars`, treating a matrix with
/// no columns like any other oversized request.
fn jacobian_minors(ring: &Arc<Ring>, gens: &[Polynomial], vars: &[usize], k: i64) -> Result<Ideal> {
    if vars.is_empty() {
        return Ok(Ideal::unit(ring.clone()));
    }
    minors_ideal(&jacobian(ring, gens, vars)?, k)
}

/// `G_c`: the parameter part of the reduced basis of
/// `<G> + Jac_X^{n - delta}(<E>)`.
///
/// Together with `W_F` it describes `W_c`: `W_F ∪ W_c = W_F ∪ V(G_c)`.
pub fn critical(equalities: &[Polynomial], basis: &GroebnerBasis, delta: i64) -> Result<GroebnerBasis> {
    let ring = basis.ring();
    let order = BlockOrder::elimination(ring);
    if basis.order() != &order {
        return Err(Error::OrderMismatch("critical expects the (X > U) basis".into()));
    }
    let unknowns = ring.unknowns();
    let k = ring.nvars() as i64 - delta;
    let minors = jacobian_minors(ring, equalities, &unknowns, k)?;
    let mut gens = basis.elements().to_vec();
    gens.extend_from_slice(minors.generators());
    if gens.is_empty() {
        return Ok(GroebnerBasis::zero_ideal(ring.clone(), order));
    }
    let g_jac = buchberger(&gens, &order)?;
    eliminate_basis(&g_jac, &unknowns)
}

/// `G_sing`: the reduced basis of `<G_II> + Jac_U^{d - delta}(<G_II>)`, or
/// `{1}` straight away when `delta = d`.
pub fn singular(g_ii: &GroebnerBasis, delta: i64, d: usize) -> Result<GroebnerBasis> {
    singular_counted(g_ii, delta, d, &mut 0)
}

/// [`singular`], adding the number of Buchberger runs to `groebner_calls`.
pub fn singular_counted(
    g_ii: &GroebnerBasis,
    delta: i64,
    d: usize,
    groebner_calls: &mut usize,
) -> Result<GroebnerBasis> {
    let ring = g_ii.ring();
    if delta >= d as i64 {
        return Ok(GroebnerBasis::unit_ideal(ring.clone(), g_ii.order().clone()));
    }
    let params = ring.parameters();
    let minors = jacobian_minors(ring, g_ii.elements(), &params, d as i64 - delta)?;
    let mut gens = g_ii.elements().to_vec();
    gens.extend_from_slice(minors.generators());
    if gens.is_empty() {
        return Ok(GroebnerBasis::zero_ideal(ring.clone(), g_ii.order().clone()));
    }
    *groebner_calls += 1;
    buchberger(&gens, g_ii.order())
}

/// The assembled minimal discriminant variety.
#[derive(Debug, Clone)]
pub struct DiscriminantVarietyResult {
    pub preprocess: PreprocessResult,
    /// Components sorted by label; `W_sd` is always present.
    pub components: Vec<VarietyComponent>,
    /// `W_D` as a union: one generator list per surviving component.
    pub w_d: Vec<Vec<Polynomial>>,
    pub warnings: Vec<String>,
}

impl DiscriminantVarietyResult {
    pub fn component(&self, label: ComponentLabel) -> Option<&VarietyComponent> {
        self.components.iter().find(|c| c.label == label)
    }
}

pub const ASSUMED_EMPTY_WARNING: &str =
    "w_sd (projection of lower-dimensional components) was not computed and is assumed empty";

/// Joins the components into `W_D`.
///
/// Empty components are skipped. A component is dropped when the ideal of
/// another surviving component is contained in its own ideal, since its
/// variety is then covered; among equal ideals the first by label is kept.
/// Without a `W_sd` entry, an assumed-empty one is added with a warning.
pub fn assemble(pre: PreprocessResult, mut components: Vec<VarietyComponent>) -> Result<DiscriminantVarietyResult> {
    let ring = pre.basis.ring().clone();
    let order = BlockOrder::elimination(&ring);
    let params = ring.parameters();
    if let Some(c) = components
        .iter()
        .find(|c| c.generators.iter().any(|g| !g.only_in(&params)))
    {
        return Err(Error::OrderMismatch(alloc::format!(
            "component {} involves unknowns",
            c.label.as_str()
        )));
    }
    let mut warnings = Vec::new();
    if !components.iter().any(|c| c.label == ComponentLabel::WSd) {
        components.push(VarietyComponent::assumed_empty_sd(&ring));
    }
    if components
        .iter()
        .any(|c| c.label == ComponentLabel::WSd && c.status == ComponentStatus::AssumedEmpty)
    {
        warnings.push(String::from(ASSUMED_EMPTY_WARNING));
    }
    components.sort_by_key(|c| c.label);

    let candidates: Vec<&VarietyComponent> = components.iter().filter(|c| !c.is_empty()).collect();
    let mut ideals = candidates
        .iter()
        .map(|c| Ideal::new(ring.clone(), c.generators.clone()))
        .collect::<Result<Vec<_>>>()?;
    let mut keep = alloc::vec![true; candidates.len()];
    for i in 0..candidates.len() {
        for j in 0..candidates.len() {
            if i == j || !keep[j] {
                continue;
            }
            let (ji, ij) = {
                let (a, b) = pair_mut(&mut ideals, i, j);
                let j_in_i = ideal_contains(a, b, &order)?;
                let i_in_j = j_in_i && ideal_contains(b, a, &order)?;
                (j_in_i, i_in_j)
            };
            // V(I_i) ⊆ V(I_j): drop i, unless the ideals coincide and j is later
            if ji && (!ij || j < i) {
                keep[i] = false;
                break;
            }
        }
    }
    let w_d = candidates
        .iter()
        .zip(&keep)
        .filter(|(_, k)| **k)
        .map(|(c, _)| c.generators.clone())
        .collect();

    Ok(DiscriminantVarietyResult {
        preprocess: pre,
        components,
        w_d,
        warnings,
    })
}

fn pair_mut<T>(v: &mut [T], i: usize, j: usize) -> (&mut T, &mut T) {
    assert_ne!(i, j);
    if i < j {
        let (a, b) = v.split_at_mut(j);
        (&mut a[i], &mut b[0])
    } else {
        let (a, b) = v.split_at_mut(i);
        (&mut b[0], &mut a[j])
    }
}

/// Which components to compute, and an optional caller-supplied `W_sd`.
#[derive(Debug, Clone)]
pub struct Pipeline {
    pub w_infinity: bool,
    pub w_f: bool,
    pub w_c: bool,
    pub w_sing: bool,
    pub w_sd: Option<Vec<Polynomial>>,
}

impl Default for Pipeline {
    fn default() -> Self {
        Pipeline {
            w_infinity: true,
            w_f: true,
            w_c: true,
            w_sing: true,
            w_sd: None,
        }
    }
}

impl Pipeline {
    pub fn run(&self, sys: &ParametricSystem) -> Result<DiscriminantVarietyResult> {
        let ring = sys.ring();
        let pre = preprocess(sys)?;
        let mut components = Vec::new();
        if self.w_infinity {
            components.push(properness_defects(&pre)?);
        }
        if self.w_f {
            components.push(pre.w_f.clone());
        }
        if self.w_c {
            let g_c = critical(sys.equalities(), &pre.basis, pre.delta)?;
            components.push(VarietyComponent::from_basis(ComponentLabel::WC, g_c));
        }
        if self.w_sing {
            let g_sing = singular(&pre.projection_closure, pre.delta, ring.parameters().len())?;
            components.push(VarietyComponent::from_basis(ComponentLabel::WSing, g_sing));
        }
        if let Some(gens) = &self.w_sd {
            components.push(VarietyComponent::user_supplied_sd(ring, gens.clone())?);
        }
        assemble(pre, components)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::parse_test_poly;

    fn system(params: &[&str], unknowns: &[&str], e: &[&str], f: &[&str]) -> ParametricSystem {
        let ring = Ring::new(params, unknowns).unwrap();
        let p = |t: &&str| parse_test_poly(&ring, t);
        ParametricSystem::new(ring.clone(), e.iter().map(p).collect(), f.iter().map(p).collect()).unwrap()
    }

    fn worked_example() -> ParametricSystem {
        system(
            &["r", "a"],
            &["x", "y"],
            &["a*x^2*y + 5*a*y^3 - r^3", "a - r^2"],
            &["r"],
        )
    }

    fn strings(ps: &[Polynomial]) -> Vec<String> {
        ps.iter().map(|p| alloc::format!("{p}")).collect()
    }

    #[test]
    fn preprocess_worked_example() {
        let pre = preprocess(&worked_example()).unwrap();
        assert_eq!(pre.delta, 1);
        assert_eq!(strings(pre.projection_closure.elements()), ["r^2 - a"]);
        assert_eq!(strings(pre.ideal.generators()), ["r^2 - a", "x^2*y + 5*y^3 - r"]);
        assert_eq!(strings(&pre.w_f.generators), ["a", "r"]);
        assert_eq!(pre.w_f.status, ComponentStatus::Computed);
    }

    #[test]
    fn w_f_examples() {
        let pre = preprocess(&system(&["u"], &["x"], &["x^2 - u"], &[])).unwrap();
        assert_eq!(pre.w_f.status, ComponentStatus::Empty);
        let pre = preprocess(&system(&["u"], &["x"], &["x - u"], &["x"])).unwrap();
        assert_eq!(strings(&pre.w_f.generators), ["u"]);
    }

    #[test]
    fn properness_examples() {
        let w = properness_defects(&preprocess(&worked_example()).unwrap()).unwrap();
        assert_eq!(strings(&w.generators), ["r^2 - a"]);
        assert_eq!(w.status, ComponentStatus::Computed);

        let w = properness_defects(&preprocess(&system(&["u"], &["x"], &["x^2 - u"], &[])).unwrap()).unwrap();
        assert_eq!(w.status, ComponentStatus::Empty);

        let w = properness_defects(&preprocess(&system(&["u"], &["x"], &["u*x - 1"], &[])).unwrap()).unwrap();
        assert_eq!(strings(&w.generators), ["u"]);
    }

    #[test]
    fn properness_union_over_unknowns() {
        // x escapes at u = 0, y escapes at v = 0
        let sys = system(&["u", "v"], &["x", "y"], &["u*x - 1", "v*y - 1"], &[]);
        let w = properness_defects(&preprocess(&sys).unwrap()).unwrap();
        assert_eq!(strings(&w.generators), ["u*v"]);
    }

    #[test]
    fn critical_examples() {
        let sys = worked_example();
        let pre = preprocess(&sys).unwrap();
        let g_c = critical(sys.equalities(), &pre.basis, pre.delta).unwrap();
        assert!(g_c.is_unit());

        let sys = system(&["u"], &["x"], &["x^2 - u"], &[]);
        let pre = preprocess(&sys).unwrap();
        assert_eq!(pre.delta, 1);
        let g_c = critical(sys.equalities(), &pre.basis, pre.delta).unwrap();
        assert_eq!(strings(g_c.elements()), ["u"]);

        let sys = system(&["u"], &["x"], &["x - u"], &[]);
        let pre = preprocess(&sys).unwrap();
        assert!(critical(sys.equalities(), &pre.basis, pre.delta).unwrap().is_unit());
    }

    #[test]
    fn singular_examples() {
        let pre = preprocess(&worked_example()).unwrap();
        let mut calls = 0;
        let g = singular_counted(&pre.projection_closure, pre.delta, 2, &mut calls).unwrap();
        assert!(g.is_unit());
        assert_eq!(calls, 1);

        let sys = system(&["u"], &["x"], &["x - u"], &[]);
        let pre = preprocess(&sys).unwrap();
        let mut calls = 0;
        let g = singular_counted(&pre.projection_closure, pre.delta, 1, &mut calls).unwrap();
        assert!(g.is_unit());
        assert_eq!(calls, 0);

        let ring = Ring::new::<&str>(&["u1", "u2"], &[]).unwrap();
        let order = BlockOrder::elimination(&ring);
        let g_ii = buchberger(&[parse_test_poly(&ring, "u1*u2")], &order).unwrap();
        let g = singular(&g_ii, 1, 2).unwrap();
        assert_eq!(strings(g.elements()), ["u2", "u1"]);
    }

    #[test]
    fn assemble_absorbs_covered_components() {
        let result = Pipeline::default().run(&worked_example()).unwrap();
        assert_eq!(result.w_d.len(), 1);
        assert_eq!(strings(&result.w_d[0]), ["r^2 - a"]);
        assert_eq!(
            result.component(ComponentLabel::WSd).unwrap().status,
            ComponentStatus::AssumedEmpty
        );
        assert_eq!(result.warnings, [ASSUMED_EMPTY_WARNING]);
        let labels: Vec<_> = result.components.iter().map(|c| c.label).collect();
        assert_eq!(labels, ComponentLabel::ALL);
    }

    #[test]
    fn assemble_edge_cases() {
        let sys = system(&["u"], &["x"], &["x - u"], &[]);
        let pre = preprocess(&sys).unwrap();
        let ring = sys.ring().clone();
        let all_empty = assemble(
            pre.clone(),
            alloc::vec![
                VarietyComponent::empty(ComponentLabel::WC, &ring),
                VarietyComponent::empty(ComponentLabel::WSing, &ring)
            ],
        )
        .unwrap();
        assert!(all_empty.w_d.is_empty());

        let single = VarietyComponent::user_supplied_sd(&ring, alloc::vec![parse_test_poly(&ring, "u^2 - 1")]).unwrap();
        let out = assemble(pre.clone(), alloc::vec![single.clone()]).unwrap();
        assert_eq!(out.w_d, alloc::vec![single.generators.clone()]);
        assert!(out.warnings.is_empty());

        // identical ideals keep only the first label
        let c = VarietyComponent::from_basis(
            ComponentLabel::WC,
            buchberger(&[parse_test_poly(&ring, "u")], &BlockOrder::elimination(&ring)).unwrap(),
        );
        let mut d = c.clone();
        d.label = ComponentLabel::WSing;
        let out = assemble(pre, alloc::vec![d, c]).unwrap();
        assert_eq!(out.w_d.len(), 1);
    }

    #[test]
    fn user_supplied_sd_must_avoid_unknowns() {
        let sys = system(&["u"], &["x"], &["x - u"], &[]);
        let ring = sys.ring().clone();
        assert!(VarietyComponent::user_supplied_sd(&ring, alloc::vec![parse_test_poly(&ring, "x")]).is_err());
    }

    #[test]
    fn pipeline_is_deterministic() {
        let a = Pipeline::default().run(&worked_example()).unwrap();
        let b = Pipeline::default().run(&worked_example()).unwrap();
        assert_eq!(a.components, b.components);
        assert_eq!(a.w_d, b.w_d);
    }
}
