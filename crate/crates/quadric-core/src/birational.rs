//! Verifying a birational map between two projective bundles chart by
//! chart.
//!
//! The data under test: a coordinate map between product varieties, the
//! loci where it is undefined, and for each blow-up chart a change of
//! variables, a strict-transform equation, an exceptional divisor, an
//! extension of the map, and the claimed image of the exceptional divisor.
//! Every check is an exact polynomial identity. Printed source data can
//! carry transcription slips, so each displayed datum may come with a
//! corrected variant; the report says which variant matched and never
//! applies a correction silently.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use crate::field::Rationals;
use crate::groebner::{groebner_basis, normal_form};
use crate::poly::{Poly, PolyError};
use crate::vars::{same_table, Var, VarTable};

type QPoly = Poly<Rationals>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BirationalError {
    ComponentCount { expected: usize, got: usize },
    AllZero,
    TableMismatch,
    UnknownCoordinate(String),
    UnknownParent(String),
    Poly(PolyError),
}

impl fmt::Display for BirationalError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BirationalError::ComponentCount { expected, got } => {
                write!(f, "expected {expected} map components, got {got}")
            }
            BirationalError::AllZero => write!(f, "all map components are zero"),
            BirationalError::TableMismatch => write!(f, "polynomial belongs to a different table"),
            BirationalError::UnknownCoordinate(name) => {
                write!(f, "coordinate {name} is not declared in the relevant table")
            }
            BirationalError::UnknownParent(name) => write!(f, "chart parent {name} not seen yet"),
            BirationalError::Poly(e) => write!(f, "{e}"),
        }
    }
}

impl std::error::Error for BirationalError {}

impl From<PolyError> for BirationalError {
    fn from(e: PolyError) -> Self {
        BirationalError::Poly(e)
    }
}

/// A polynomial map: one component over the source ring per target
/// coordinate, mu-block components first.
#[derive(Debug, Clone)]
pub struct PolyMap {
    source: Arc<VarTable>,
    target: Arc<VarTable>,
    components: Vec<QPoly>,
    assign: BTreeMap<Var, QPoly>,
}

impl PolyMap {
    pub fn new(
        source: Arc<VarTable>,
        target: Arc<VarTable>,
        components: Vec<QPoly>,
    ) -> Result<PolyMap, BirationalError> {
        if components.len() != target.len() {
            return Err(BirationalError::ComponentCount {
                expected: target.len(),
                got: components.len(),
            });
        }
        if components.iter().all(|p| p.is_zero()) {
            return Err(BirationalError::AllZero);
        }
        for p in &components {
            if !same_table(p.table(), &source) {
                return Err(BirationalError::TableMismatch);
            }
        }
        let assign = components
            .iter()
            .enumerate()
            .map(|(i, p)| (Var(i as u32), p.clone()))
            .collect();
        Ok(PolyMap { source, target, components, assign })
    }

    pub fn source(&self) -> &Arc<VarTable> {
        &self.source
    }

    pub fn target(&self) -> &Arc<VarTable> {
        &self.target
    }

    pub fn components(&self) -> &[QPoly] {
        &self.components
    }

    /// Components filling the x-block of the target, the ones that must
    /// not vanish simultaneously for the map to be defined.
    pub fn x_components(&self) -> &[QPoly] {
        &self.components[self.target.mu_len()..]
    }

    /// Pull a polynomial over the target ring back along the map.
    pub fn compose(&self, f: &QPoly) -> Result<QPoly, BirationalError> {
        if !same_table(f.table(), &self.target) {
            return Err(BirationalError::TableMismatch);
        }
        Ok(f.map_into(&self.source, &self.assign)?)
    }

    /// Apply a substitution on the source ring to every component.
    pub fn substituted(&self, assign: &BTreeMap<Var, QPoly>) -> PolyMap {
        let components: Vec<QPoly> =
            self.components.iter().map(|p| p.substitute(assign)).collect();
        let assign = components
            .iter()
            .enumerate()
            .map(|(i, p)| (Var(i as u32), p.clone()))
            .collect();
        PolyMap {
            source: self.source.clone(),
            target: self.target.clone(),
            components,
            assign,
        }
    }
}

/// One composed target equation: either it vanished, or it factored
/// through the domain equation with the recorded quotient, or it left a
/// residual and the containment fails.
#[derive(Debug, Clone)]
pub enum Composite {
    Zero,
    Multiple { quotient: QPoly },
    Residual { composed: QPoly },
}

#[derive(Debug, Clone)]
pub struct MapsIntoReport {
    pub composites: Vec<Composite>,
}

impl MapsIntoReport {
    pub fn holds(&self) -> bool {
        self.composites
            .iter()
            .all(|c| !matches!(c, Composite::Residual { .. }))
    }
}

/// Does the map send the hypersurface cut out by `domain_eq` into the
/// common zero locus of `target_eqs`? True iff every composed equation is
/// zero or exactly divisible by `domain_eq`.
pub fn maps_into(
    domain_eq: &QPoly,
    map: &PolyMap,
    target_eqs: &[QPoly],
) -> Result<MapsIntoReport, BirationalError> {
    assert!(!domain_eq.is_zero(), "domain equation must be nonzero");
    let mut composites = Vec::new();
    for eq in target_eqs {
        let composed = map.compose(eq)?;
        let c = if composed.is_zero() {
            Composite::Zero
        } else {
            match composed.exact_divide(domain_eq) {
                Some(quotient) => Composite::Multiple { quotient },
                None => Composite::Residual { composed },
            }
        };
        composites.push(c);
    }
    Ok(MapsIntoReport { composites })
}

/// Membership of `f` in the ideal spanned by `gens`: plain divisibility
/// for a principal ideal, a rational Groebner basis otherwise.
pub fn reduces_to_zero(f: &QPoly, gens: &[QPoly]) -> bool {
    if f.is_zero() {
        return true;
    }
    match gens {
        [] => false,
        [g] => f.exact_divide(g).is_some(),
        _ => {
            let basis = groebner_basis(gens);
            normal_form(f, &basis).is_zero()
        }
    }
}

#[derive(Debug, Clone)]
pub struct LocusCheck {
    pub generators: Vec<QPoly>,
    /// Every x-block component of the map lies in the locus ideal.
    pub components_contained: bool,
    /// The domain equation lies in the locus ideal, i.e. the locus sits on
    /// the domain hypersurface.
    pub domain_contained: bool,
    pub failures: Vec<String>,
}

impl LocusCheck {
    pub fn holds(&self) -> bool {
        self.components_contained && self.domain_contained
    }
}

/// Check that each stated locus is contained in the common vanishing of
/// the map's x-block components intersected with the domain hypersurface:
/// membership of every component and of the domain equation in each locus
/// ideal.
pub fn indeterminacy_components(
    map: &PolyMap,
    domain_eq: &QPoly,
    stated_loci: &[Vec<QPoly>],
) -> Vec<LocusCheck> {
    stated_loci
        .iter()
        .map(|gens| {
            let basis = groebner_basis(gens);
            let mut failures = Vec::new();
            let mut components_contained = true;
            for (i, comp) in map.x_components().iter().enumerate() {
                let r = normal_form(comp, &basis);
                if !r.is_zero() {
                    components_contained = false;
                    failures.push(format!("component {i} leaves residual {r}"));
                }
            }
            let domain_r = normal_form(domain_eq, &basis);
            let domain_contained = domain_r.is_zero();
            if !domain_contained {
                failures.push(format!("domain equation leaves residual {domain_r}"));
            }
            LocusCheck {
                generators: gens.clone(),
                components_contained,
                domain_contained,
                failures,
            }
        })
        .collect()
}

/// A named substitution entry: coordinate name in the ring being
/// substituted into, and its image.
pub type NamedSubst = Vec<(String, QPoly)>;

/// One blow-up chart as printed: a change of variables from the parent
/// ring, the asserted chart equation, the exceptional divisor, the map
/// extension, and the claimed exceptional image. Each `*_erratum` field
/// holds a corrected variant of a printed datum; the verifier tries the
/// printed form first and reports when only the correction matches.
#[derive(Debug, Clone)]
pub struct ChartSpec {
    pub name: String,
    /// Chart this one refines; the pullback check then starts from the
    /// parent's verified equation instead of the global domain equation.
    pub parent: Option<String>,
    pub table: Arc<VarTable>,
    /// Parent coordinate name -> expression in this chart's coordinates.
    /// Coordinates not listed carry over by name.
    pub substitution: NamedSubst,
    pub equation: QPoly,
    pub equation_erratum: Option<QPoly>,
    /// Local equation of the exceptional divisor (the blown-up center's
    /// pulled-back defining parameter).
    pub exceptional: QPoly,
    /// How to restrict a polynomial on the chart to the exceptional
    /// divisor, e.g. setting its parameter to zero.
    pub exc_subst: NamedSubst,
    /// Printed equation of the exceptional divisor inside the chart
    /// hypersurface, when one is given; checked informationally.
    pub exc_equation: Option<QPoly>,
    pub exc_equation_erratum: Option<QPoly>,
    /// Extension of the map to this chart: one component per target
    /// coordinate.
    pub extension: Vec<QPoly>,
    pub extension_erratum: Option<Vec<QPoly>>,
    /// Claimed image of the exceptional divisor, same component layout.
    pub image: Vec<QPoly>,
    pub image_erratum: Option<Vec<QPoly>>,
    /// Dehomogenization applied to the restricted extension before
    /// comparing with the claimed image (the printed image may fix a
    /// coordinate to 1).
    pub specialize: NamedSubst,
    pub notes: Vec<String>,
}

#[derive(Debug, Clone)]
pub struct PullbackMatch {
    /// Exponent of the exceptional parameter split off the pullback.
    pub power: u32,
    /// The matched identity carries this sign on the chart equation.
    pub negated: bool,
    pub used_erratum: bool,
}

#[derive(Debug, Clone)]
pub struct ChartReport {
    pub name: String,
    /// Check 1: pullback of the domain equation equals (unit) x
    /// (exceptional parameter)^k x (chart equation).
    pub pullback_matches: bool,
    pub pullback: Option<PullbackMatch>,
    /// Check 2: every target equation composed with the extension reduces
    /// to zero modulo the chart equation.
    pub extension_lands_in_target: bool,
    pub extension_used_erratum: bool,
    /// Quotients (composed equation) / (chart equation), zero components
    /// recorded as zero polynomials.
    pub extension_quotients: Vec<QPoly>,
    /// Check 3: the extension restricted to the exceptional divisor equals
    /// the claimed image coordinate-wise after the stated specialization.
    pub exceptional_image_matches: bool,
    pub image_used_erratum: bool,
    /// Informational: the printed exceptional-divisor equation against the
    /// chart equation restricted to the divisor. None when not printed.
    pub exc_equation_matches: Option<bool>,
    pub exc_equation_used_erratum: bool,
    /// Every printed datum that only matched after correction.
    pub errata_applied: Vec<String>,
    /// Residual witnesses for failed checks.
    pub residuals: Vec<String>,
    pub notes: Vec<String>,
}

impl ChartReport {
    /// The three gating checks; the informational ones do not gate.
    pub fn holds(&self) -> bool {
        self.pullback_matches && self.extension_lands_in_target && self.exceptional_image_matches
    }
}

fn resolve_subst(
    table: &Arc<VarTable>,
    target: &Arc<VarTable>,
    entries: &NamedSubst,
) -> Result<BTreeMap<Var, QPoly>, BirationalError> {
    let mut out = BTreeMap::new();
    for (name, image) in entries {
        let v = table
            .var(name)
            .ok_or_else(|| BirationalError::UnknownCoordinate(name.clone()))?;
        if !same_table(image.table(), target) {
            return Err(BirationalError::TableMismatch);
        }
        out.insert(v, image.clone());
    }
    Ok(out)
}

struct EquationMatch {
    report_part: Option<PullbackMatch>,
    effective: QPoly,
    residual: Option<String>,
}

const MAX_EXCEPTIONAL_POWER: u32 = 8;

fn match_pullback(chart: &ChartSpec, pullback: &QPoly) -> EquationMatch {
    let candidates: Vec<(&QPoly, bool)> = std::iter::once((&chart.equation, false))
        .chain(chart.equation_erratum.iter().map(|q| (q, true)))
        .collect();
    for (eq, used_erratum) in &candidates {
        let mut scaled = (*eq).clone();
        for power in 0..=MAX_EXCEPTIONAL_POWER {
            if *pullback == scaled {
                return EquationMatch {
                    report_part: Some(PullbackMatch { power, negated: false, used_erratum: *used_erratum }),
                    effective: (*eq).clone(),
                    residual: None,
                };
            }
            if *pullback == scaled.negated() {
                return EquationMatch {
                    report_part: Some(PullbackMatch { power, negated: true, used_erratum: *used_erratum }),
                    effective: (*eq).clone(),
                    residual: None,
                };
            }
            scaled = &scaled * &chart.exceptional;
        }
    }
    // Nothing matched; fall back to the corrected equation if present so
    // downstream checks still run against the best candidate.
    let effective = chart.equation_erratum.clone().unwrap_or_else(|| chart.equation.clone());
    EquationMatch {
        report_part: None,
        effective,
        residual: Some(format!("pullback {pullback} matches no power of the exceptional parameter")),
    }
}

/// Run the three chart checks against a domain equation over the parent
/// ring and the target equations over the map's target ring.
pub fn verify_chart(
    chart: &ChartSpec,
    domain_eq: &QPoly,
    target_table: &Arc<VarTable>,
    target_eqs: &[QPoly],
) -> Result<ChartReport, BirationalError> {
    let mut residuals = Vec::new();
    let mut errata_applied = Vec::new();

    // Check 1: pull the domain equation into the chart and split off the
    // exceptional parameter.
    let subst = resolve_subst(domain_eq.table(), &chart.table, &chart.substitution)?;
    let pullback = domain_eq.map_into(&chart.table, &subst)?;
    let matched = match_pullback(chart, &pullback);
    let pullback_matches = matched.report_part.is_some();
    if let Some(m) = &matched.report_part {
        if m.used_erratum {
            errata_applied.push("equation".to_string());
        }
    }
    if let Some(r) = matched.residual {
        residuals.push(r);
    }
    let effective_eq = matched.effective;

    // Check 2: compose the target equations with the extension; each must
    // die modulo the chart equation. Modulo a single equation, membership
    // is divisibility.
    let ext_candidates: Vec<(&Vec<QPoly>, bool)> = std::iter::once((&chart.extension, false))
        .chain(chart.extension_erratum.iter().map(|e| (e, true)))
        .collect();
    let mut chosen_ext: Option<(PolyMap, bool, Vec<QPoly>)> = None;
    let mut ext_failure = String::new();
    for (components, used_erratum) in &ext_candidates {
        let map = PolyMap::new(chart.table.clone(), target_table.clone(), (*components).clone())?;
        let mut quotients = Vec::new();
        let mut ok = true;
        for eq in target_eqs {
            let composed = map.compose(eq)?;
            if composed.is_zero() {
                quotients.push(composed);
                continue;
            }
            match composed.exact_divide(&effective_eq) {
                Some(q) => quotients.push(q),
                None => {
                    ok = false;
                    ext_failure = format!("composition {composed} is not a multiple of the chart equation");
                    break;
                }
            }
        }
        if ok {
            chosen_ext = Some((map, *used_erratum, quotients));
            break;
        }
    }
    let (extension_lands_in_target, extension_used_erratum, extension_quotients, ext_map) =
        match chosen_ext {
            Some((map, used_erratum, quotients)) => {
                if used_erratum {
                    errata_applied.push("extension".to_string());
                }
                (true, used_erratum, quotients, map)
            }
            None => {
                residuals.push(ext_failure);
                // Still need a map for check 3; prefer the corrected form.
                let components = chart
                    .extension_erratum
                    .clone()
                    .unwrap_or_else(|| chart.extension.clone());
                let map = PolyMap::new(chart.table.clone(), target_table.clone(), components)?;
                (false, chart.extension_erratum.is_some(), Vec::new(), map)
            }
        };

    // Check 3: restrict the extension to the exceptional divisor,
    // dehomogenize as stated, and compare with the claimed image.
    let exc_assign = resolve_subst(&chart.table, &chart.table, &chart.exc_subst)?;
    let spec_assign = resolve_subst(&chart.table, &chart.table, &chart.specialize)?;
    let restricted: Vec<QPoly> = ext_map
        .components()
        .iter()
        .map(|p| p.substitute(&exc_assign).substitute(&spec_assign))
        .collect();
    let image_candidates: Vec<(&Vec<QPoly>, bool)> = std::iter::once((&chart.image, false))
        .chain(chart.image_erratum.iter().map(|e| (e, true)))
        .collect();
    let mut exceptional_image_matches = false;
    let mut image_used_erratum = false;
    for (claimed, used_erratum) in &image_candidates {
        if claimed.len() == restricted.len()
            && claimed.iter().zip(&restricted).all(|(a, b)| a == b)
        {
            exceptional_image_matches = true;
            image_used_erratum = *used_erratum;
            if *used_erratum {
                errata_applied.push("image".to_string());
            }
            break;
        }
    }
    if !exceptional_image_matches {
        let got: Vec<String> = restricted.iter().map(|p| p.to_string()).collect();
        residuals.push(format!("restricted extension is ({})", got.join(", ")));
    }

    // Informational: the printed divisor equation against the restricted
    // chart equation.
    let restricted_eq = effective_eq.substitute(&exc_assign);
    let mut exc_equation_matches = None;
    let mut exc_equation_used_erratum = false;
    if chart.exc_equation.is_some() {
        let cands: Vec<(&QPoly, bool)> = chart
            .exc_equation
            .iter()
            .map(|q| (q, false))
            .chain(chart.exc_equation_erratum.iter().map(|q| (q, true)))
            .collect();
        let mut matched = false;
        for (cand, used_erratum) in cands {
            if restricted_eq == *cand || restricted_eq == cand.negated() {
                matched = true;
                exc_equation_used_erratum = used_erratum;
                if used_erratum {
                    errata_applied.push("exc_equation".to_string());
                }
                break;
            }
        }
        if !matched {
            residuals.push(format!(
                "chart equation restricted to the divisor is {restricted_eq}"
            ));
        }
        exc_equation_matches = Some(matched);
    }

    Ok(ChartReport {
        name: chart.name.clone(),
        pullback_matches,
        pullback: matched.report_part,
        extension_lands_in_target,
        extension_used_erratum,
        extension_quotients,
        exceptional_image_matches,
        image_used_erratum,
        exc_equation_matches,
        exc_equation_used_erratum,
        errata_applied,
        residuals,
        notes: chart.notes.clone(),
    })
}

/// The equation a child chart pulls back: the parent's equation as
/// verified (corrected form if only that matched).
fn effective_equation(chart: &ChartSpec, report: &ChartReport) -> QPoly {
    match &report.pullback {
        Some(m) if m.used_erratum => chart.equation_erratum.clone().unwrap(),
        Some(_) => chart.equation.clone(),
        None => chart
            .equation_erratum
            .clone()
            .unwrap_or_else(|| chart.equation.clone()),
    }
}

/// Verify a family of charts; children pull back their parent's verified
/// equation, so parents must appear before their children.
pub fn verify_chart_tree(
    charts: &[ChartSpec],
    domain_eq: &QPoly,
    target_table: &Arc<VarTable>,
    target_eqs: &[QPoly],
) -> Result<Vec<ChartReport>, BirationalError> {
    let mut reports = Vec::new();
    let mut verified: BTreeMap<String, QPoly> = BTreeMap::new();
    for chart in charts {
        let base = match &chart.parent {
            None => domain_eq.clone(),
            Some(name) => verified
                .get(name)
                .cloned()
                .ok_or_else(|| BirationalError::UnknownParent(name.clone()))?,
        };
        let report = verify_chart(chart, &base, target_table, target_eqs)?;
        verified.insert(chart.name.clone(), effective_equation(chart, &report));
        reports.push(report);
    }
    Ok(reports)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_poly;

    fn y_table() -> Arc<VarTable> {
        VarTable::new(&["l0", "l1", "l2"], &["x2", "x3", "x4", "x5"])
    }

    fn q_table() -> Arc<VarTable> {
        VarTable::new(&["l0", "l1", "l2"], &["x2", "x3", "x4", "x5", "x6", "x7"])
    }

    fn qp(t: &Arc<VarTable>, s: &str) -> QPoly {
        parse_poly(s, Rationals, t).unwrap()
    }

    fn polys(t: &Arc<VarTable>, srcs: &[&str]) -> Vec<QPoly> {
        srcs.iter().map(|s| qp(t, s)).collect()
    }

    fn the_map() -> PolyMap {
        let yt = y_table();
        PolyMap::new(
            yt.clone(),
            q_table(),
            polys(
                &yt,
                &[
                    "l0", "l1", "l2", "l2*x2", "l2*x3", "l2*x4", "l2*x5", "l1*x4",
                    "(l0-l1)*x5",
                ],
            ),
        )
        .unwrap()
    }

    fn target_eqs(qt: &Arc<VarTable>) -> Vec<QPoly> {
        polys(
            qt,
            &[
                "(l0-l1)*x5 - l2*x7",
                "l1*x4 - l2*x6",
                "l1*x2^2 + l0*x3^2 + l0*x4*x6 + (l2-2*l0-2*l1)*x5^2 + l2*x7^2",
            ],
        )
    }

    fn domain_eq(yt: &Arc<VarTable>) -> QPoly {
        qp(
            yt,
            "l1*l2*x2^2 + l0*l2*x3^2 + l0*l1*x4^2 \
             + (l0^2+l1^2+l2^2-2*l0*l1-2*l0*l2-2*l1*l2)*x5^2",
        )
    }

    #[test]
    fn composition_basics() {
        let yt = y_table();
        let id = PolyMap::new(
            yt.clone(),
            yt.clone(),
            polys(&yt, &["l0", "l1", "l2", "x2", "x3", "x4", "x5"]),
        )
        .unwrap();
        let f = qp(&yt, "l0*x2^2 - 3*x4*x5");
        assert_eq!(id.compose(&f).unwrap(), f);

        let phi = the_map();
        let qt = q_table();
        let eqs = target_eqs(&qt);
        assert!(phi.compose(&eqs[0]).unwrap().is_zero());
        assert!(phi.compose(&eqs[1]).unwrap().is_zero());
        // Composing with a polynomial over the wrong table is refused.
        assert!(matches!(
            phi.compose(&qp(&yt, "x2")),
            Err(BirationalError::TableMismatch)
        ));
    }

    #[test]
    fn map_constructor_validates() {
        let yt = y_table();
        let qt = q_table();
        assert!(matches!(
            PolyMap::new(yt.clone(), qt.clone(), polys(&yt, &["l0"])),
            Err(BirationalError::ComponentCount { expected: 9, got: 1 })
        ));
        let zeroes = vec![Poly::zero(Rationals, yt.clone()); 9];
        assert!(matches!(
            PolyMap::new(yt.clone(), qt.clone(), zeroes),
            Err(BirationalError::AllZero)
        ));
    }

    #[test]
    fn the_map_lands_in_the_target() {
        let yt = y_table();
        let qt = q_table();
        let report = maps_into(&domain_eq(&yt), &the_map(), &target_eqs(&qt)).unwrap();
        assert!(report.holds());
        assert!(matches!(report.composites[0], Composite::Zero));
        assert!(matches!(report.composites[1], Composite::Zero));
        match &report.composites[2] {
            Composite::Multiple { quotient } => assert_eq!(*quotient, qp(&yt, "l2")),
            other => panic!("expected a clean multiple, got {other:?}"),
        }
    }

    #[test]
    fn maps_into_is_stable_under_scaling_and_detects_perturbations() {
        let yt = y_table();
        let qt = q_table();
        let scaled: Vec<QPoly> = target_eqs(&qt)
            .iter()
            .enumerate()
            .map(|(i, e)| e.scaled(&num_rational::BigRational::from_integer((2 + i as i64).into())))
            .collect();
        assert!(maps_into(&domain_eq(&yt), &the_map(), &scaled).unwrap().holds());

        let mut bad = the_map().components().to_vec();
        bad[8] = qp(&yt, "(l1-l0)*x5");
        let bad_map = PolyMap::new(yt.clone(), qt.clone(), bad).unwrap();
        let report = maps_into(&domain_eq(&yt), &bad_map, &target_eqs(&qt)).unwrap();
        assert!(!report.holds());
        assert!(matches!(report.composites[0], Composite::Residual { .. }));
    }

    #[test]
    fn stated_indeterminacy_loci_are_contained() {
        let yt = y_table();
        let loci = vec![
            polys(&yt, &["l2", "x4", "x5"]),
            polys(&yt, &["l1", "l2", "x5"]),
            polys(&yt, &["l0 - l1", "l2", "x4"]),
        ];
        let checks = indeterminacy_components(&the_map(), &domain_eq(&yt), &loci);
        assert!(checks.iter().all(|c| c.holds()));

        let wrong = vec![polys(&yt, &["l0", "x4"])];
        let checks = indeterminacy_components(&the_map(), &domain_eq(&yt), &wrong);
        assert!(!checks[0].holds());
        assert!(!checks[0].failures.is_empty());
    }

    #[test]
    fn membership_helper_handles_two_generators() {
        let yt = y_table();
        let gens = polys(&yt, &["l2", "x4 - x5"]);
        let inside = qp(&yt, "l2*x2 + l0*(x4 - x5)");
        let outside = qp(&yt, "l2*x2 + l0*(x4 - x5) + x3");
        assert!(reduces_to_zero(&inside, &gens));
        assert!(!reduces_to_zero(&outside, &gens));
        assert!(reduces_to_zero(&Poly::zero(Rationals, yt.clone()), &[]));
        assert!(!reduces_to_zero(&qp(&yt, "x2"), &[]));
    }

    fn first_chart() -> ChartSpec {
        let ct = VarTable::new::<&str>(&[], &["l0", "l1", "l2", "x2", "x3", "u4", "u5"]);
        let f = "l0^2+l1^2+l2^2-2*l0*l1-2*l0*l2-2*l1*l2";
        ChartSpec {
            name: "U1".into(),
            parent: None,
            table: ct.clone(),
            substitution: vec![
                ("x4".into(), qp(&ct, "l2*u4")),
                ("x5".into(), qp(&ct, "l2*u5")),
            ],
            equation: qp(
                &ct,
                &format!("l1*x2^2 + l0*x3^2 + l0*l1*l2*u4^2 + ({f})*l2*u5^2"),
            ),
            equation_erratum: None,
            exceptional: qp(&ct, "l2"),
            exc_subst: vec![("l2".into(), qp(&ct, "0"))],
            exc_equation: Some(qp(&ct, "l1*x2^2 + l0*x3^2")),
            exc_equation_erratum: None,
            extension: polys(
                &ct,
                &[
                    "l0", "l1", "l2", "x2", "x3", "l2*u4", "l2*u5", "l1*u4",
                    "(l0-l1)*u5",
                ],
            ),
            extension_erratum: None,
            image: polys(
                &ct,
                &["l0", "l1", "0", "x2", "x3", "0", "0", "l1*u4", "(l0-l1)*u5"],
            ),
            image_erratum: None,
            specialize: Vec::new(),
            notes: Vec::new(),
        }
    }

    #[test]
    fn first_chart_passes_all_checks() {
        let yt = y_table();
        let qt = q_table();
        let report = verify_chart(&first_chart(), &domain_eq(&yt), &qt, &target_eqs(&qt)).unwrap();
        assert!(report.holds(), "residuals: {:?}", report.residuals);
        let m = report.pullback.as_ref().unwrap();
        assert_eq!(m.power, 1);
        assert!(!m.negated);
        assert_eq!(report.exc_equation_matches, Some(true));
        assert!(report.errata_applied.is_empty());
        // The third quotient is the leftover exceptional factor.
        assert!(!report.extension_quotients[2].is_zero());
    }

    #[test]
    fn chart_faults_are_caught() {
        let yt = y_table();
        let qt = q_table();
        let eqs = target_eqs(&qt);

        let mut bad = first_chart();
        bad.equation = &bad.equation + &qp(&bad.table.clone(), "x2^2");
        let report = verify_chart(&bad, &domain_eq(&yt), &qt, &eqs).unwrap();
        assert!(!report.pullback_matches);
        assert!(!report.holds());

        let mut bad = first_chart();
        bad.extension[7] = qp(&bad.table, "l1*u4 + x2");
        let report = verify_chart(&bad, &domain_eq(&yt), &qt, &eqs).unwrap();
        assert!(!report.extension_lands_in_target);

        let mut bad = first_chart();
        bad.image[3] = qp(&bad.table, "x3");
        let report = verify_chart(&bad, &domain_eq(&yt), &qt, &eqs).unwrap();
        assert!(!report.exceptional_image_matches);
    }

    #[test]
    fn erratum_use_is_reported_not_silent() {
        let yt = y_table();
        let qt = q_table();
        let mut chart = first_chart();
        // Miscopy the printed equation, supply the correction.
        let true_eq = chart.equation.clone();
        chart.equation = &true_eq + &qp(&chart.table, "x2^2");
        chart.equation_erratum = Some(true_eq);
        let report = verify_chart(&chart, &domain_eq(&yt), &qt, &target_eqs(&qt)).unwrap();
        assert!(report.holds());
        assert!(report.pullback.as_ref().unwrap().used_erratum);
        assert_eq!(report.errata_applied, vec!["equation".to_string()]);
    }

    #[test]
    fn chart_tree_threads_parent_equations() {
        let yt = y_table();
        let qt = q_table();
        let eqs = target_eqs(&qt);
        // A child of U1 that re-scales u5; its pullback starts from the U1
        // equation rather than from the domain equation.
        let u1 = first_chart();
        let ct = VarTable::new::<&str>(&[], &["l0", "l1", "l2", "x2", "x3", "u4", "w"]);
        let f = "l0^2+l1^2+l2^2-2*l0*l1-2*l0*l2-2*l1*l2";
        let child = ChartSpec {
            name: "U1.scaled".into(),
            parent: Some("U1".into()),
            table: ct.clone(),
            substitution: vec![("u5".into(), qp(&ct, "2*w"))],
            equation: qp(
                &ct,
                &format!("l1*x2^2 + l0*x3^2 + l0*l1*l2*u4^2 + 4*({f})*l2*w^2"),
            ),
            equation_erratum: None,
            exceptional: qp(&ct, "l2"),
            exc_subst: vec![("l2".into(), qp(&ct, "0"))],
            exc_equation: None,
            exc_equation_erratum: None,
            extension: polys(
                &ct,
                &[
                    "l0", "l1", "l2", "x2", "x3", "l2*u4", "2*l2*w", "l1*u4",
                    "2*(l0-l1)*w",
                ],
            ),
            extension_erratum: None,
            image: polys(
                &ct,
                &["l0", "l1", "0", "x2", "x3", "0", "0", "l1*u4", "2*(l0-l1)*w"],
            ),
            image_erratum: None,
            specialize: Vec::new(),
            notes: Vec::new(),
        };
        let reports =
            verify_chart_tree(&[u1, child], &domain_eq(&yt), &qt, &eqs).unwrap();
        assert!(reports.iter().all(|r| r.holds()));
        // The child pullback picks up no exceptional factor at all.
        assert_eq!(reports[1].pullback.as_ref().unwrap().power, 0);

        let orphan = ChartSpec { parent: Some("missing".into()), ..first_chart() };
        assert!(matches!(
            verify_chart_tree(&[orphan], &domain_eq(&yt), &qt, &eqs),
            Err(BirationalError::UnknownParent(_))
        ));
    }
}
