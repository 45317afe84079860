//! Fibration-level bookkeeping: singular-fiber catalogs, the generic census,
//! residual monodromy orders, Euler budgets, and assembly of the fibers over
//! `z1 = 0` and `z2 = 0` from strata and junior-simplex data.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::{self, Write as _};

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::singloc::{self, Stratum};
use crate::toric::{self, JuniorLocation, JuniorTriangulation};
use crate::twist::{self, TwistImage, TwistInput};
use crate::wps::{self, WeightedForm};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FiberContext {
    /// Fibers are K3 surfaces of a Calabi-Yau threefold (generic Euler 24).
    K3,
    /// Fibers are elliptic curves of a K3 surface (generic Euler 0).
    Elliptic,
}

impl FiberContext {
    pub fn generic_euler(self) -> i64 {
        match self {
            FiberContext::K3 => 24,
            FiberContext::Elliptic => 0,
        }
    }

    /// Context of a hypersurface with `n` homogeneous coordinates.
    pub fn for_coordinates(n: usize) -> Result<Self> {
        match n {
            5 => Ok(FiberContext::K3),
            4 => Ok(FiberContext::Elliptic),
            _ => Err(Error::InvalidInput(format!(
                "fibrations are modelled for 4 or 5 coordinates, got {n}"
            ))),
        }
    }
}

/// A singular fiber with affine model `sum z_i^(n_i) = 0`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FiberType {
    pub name: String,
    pub context: FiberContext,
    pub exponents: Vec<u64>,
    pub milnor: u64,
    pub euler: i64,
    pub monodromy_order: u64,
}

impl FiberType {
    fn new(name: &str, context: FiberContext, exponents: &[u64], monodromy_order: u64) -> Self {
        let milnor = wps::milnor_number(exponents);
        let euler = match context {
            FiberContext::K3 => 24 - milnor as i64,
            FiberContext::Elliptic => milnor as i64,
        };
        Self {
            name: name.to_string(),
            context,
            exponents: exponents.to_vec(),
            milnor,
            euler,
            monodromy_order,
        }
    }

    /// `lcm` of the exponents: the order of the monodromy of the affine model.
    pub fn exponent_lcm(&self) -> u64 {
        self.exponents.iter().fold(1, |l, n| l.lcm(n))
    }

    fn sorted_exponents(&self) -> Vec<u64> {
        let mut e = self.exponents.clone();
        e.sort_unstable();
        e
    }
}

/// Degenerate K3 fibers. The monodromy orders are the tabulated ones, not
/// recomputed; VI1 is listed with order 15.
pub fn k3_catalog() -> Vec<FiberType> {
    let k3 = FiberContext::K3;
    [
        ("IV1", [6, 3, 3], 6),
        ("III1", [8, 4, 2], 8),
        ("II1", [12, 3, 2], 12),
        ("IX1", [6, 4, 2], 12),
        ("VIII1", [9, 3, 2], 18),
        ("XII1", [4, 3, 3], 12),
        ("X1", [8, 3, 2], 24),
        ("XII2", [5, 4, 2], 20),
        ("XII3", [7, 3, 2], 42),
        ("VI1", [10, 3, 2], 15),
    ]
    .iter()
    .map(|(name, e, k)| FiberType::new(name, k3, e, *k))
    .collect()
}

/// Kodaira fibers of the affine form `x^n + y^m = 0`; orders are those of the
/// monodromy matrices `A` (3), `B` (4) and `C` (6).
pub fn elliptic_catalog() -> Vec<FiberType> {
    let ell = FiberContext::Elliptic;
    vec![
        FiberType::new("II", ell, &[3, 2], 6),
        FiberType::new("III", ell, &[4, 2], 4),
        FiberType::new("IV", ell, &[3, 3], 3),
    ]
}

pub fn find_fiber_type(context: FiberContext, exponents: &[u64]) -> Result<FiberType> {
    let mut key = exponents.to_vec();
    key.sort_unstable();
    let catalog = match context {
        FiberContext::K3 => k3_catalog(),
        FiberContext::Elliptic => elliptic_catalog(),
    };
    catalog
        .into_iter()
        .find(|t| t.sorted_exponents() == key)
        .ok_or_else(|| Error::UnknownFiberType(exponents.to_vec()))
}

/// Kodaira symbol from the component count and Euler number of a fiber.
pub fn kodaira_symbol(components: usize, euler: i64) -> Option<String> {
    let name = match (components, euler) {
        (1, 0) => "I0".to_string(),
        (1, 2) => "II".to_string(),
        (2, 3) => "III".to_string(),
        (3, 4) => "IV".to_string(),
        (5, 6) => "I0*".to_string(),
        (7, 8) => "IV*".to_string(),
        (8, 9) => "III*".to_string(),
        (9, 10) => "II*".to_string(),
        (n, e) if n >= 2 && e == n as i64 => format!("I{n}"),
        (n, e) if n >= 5 && e == n as i64 + 1 => format!("I{}*", n - 5),
        _ => return None,
    };
    Some(name)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GenericCensus {
    pub fiber_type: FiberType,
    pub count: u64,
}

/// Generic singular fibers: they sit over the zeros of `z1^(d/k1) + z2^(d/k2)`,
/// and their affine model uses the remaining Fermat exponents.
pub fn generic_census(img: &TwistImage) -> Result<GenericCensus> {
    census_for_form(&WeightedForm::fermat(
        img.image_weights.clone(),
        img.degree,
    )?)
}

pub fn census_for_form(form: &WeightedForm) -> Result<GenericCensus> {
    let context = FiberContext::for_coordinates(form.len())?;
    let count = wps::point_count(&form.restrict(&[0, 1])?)?;
    let exponents = form.fermat_exponents()?[2..].to_vec();
    Ok(GenericCensus {
        fiber_type: find_fiber_type(context, &exponents)?,
        count,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FiberLocation {
    /// The fiber over `z1 = 0`.
    Infinity,
    /// The fiber over `z2 = 0`.
    Zero,
}

impl FiberLocation {
    pub const BOTH: [FiberLocation; 2] = [FiberLocation::Infinity, FiberLocation::Zero];

    /// Coordinate cutting out the special section.
    pub fn coordinate(self) -> usize {
        match self {
            FiberLocation::Infinity => 0,
            FiberLocation::Zero => 1,
        }
    }

    fn sign(self) -> i64 {
        match self {
            FiberLocation::Infinity => 1,
            FiberLocation::Zero => -1,
        }
    }
}

impl fmt::Display for FiberLocation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FiberLocation::Infinity => "C∞",
            FiberLocation::Zero => "C0",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SpecialSection {
    pub location: FiberLocation,
    pub form: WeightedForm,
    pub reduced: WeightedForm,
    pub is_star: bool,
}

/// The two special sections and whether each carries an extra singular fiber
/// (it does when the section is not itself Calabi-Yau).
pub fn star_fiber_locations(form: &WeightedForm) -> Result<Vec<SpecialSection>> {
    form.require_fermat()?;
    FiberLocation::BOTH
        .iter()
        .map(|&location| {
            let keep: Vec<usize> = (0..form.len())
                .filter(|&i| i != location.coordinate())
                .collect();
            let restricted = form.restrict(&keep)?;
            let reduced = wps::reduce_form(&restricted)?.terminal;
            Ok(SpecialSection {
                location,
                is_star: !wps::is_calabi_yau(&reduced),
                form: restricted,
                reduced,
            })
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Census {
    pub generic: GenericCensus,
    pub sections: Vec<SpecialSection>,
    pub star_count: usize,
    pub total: u64,
}

pub fn census(form: &WeightedForm) -> Result<Census> {
    let generic = census_for_form(form)?;
    let sections = star_fiber_locations(form)?;
    let star_count = sections.iter().filter(|s| s.is_star).count();
    Ok(Census {
        total: generic.count + star_count as u64,
        generic,
        sections,
        star_count,
    })
}

/// Order of `M` in a cyclic group of order `k` when `g^N · M = 1`.
pub fn residual_monodromy_order(k: u64, n: u64, star_count: usize) -> Result<u64> {
    if star_count >= 2 {
        return Err(Error::MultipleResiduals(star_count));
    }
    if k == 0 {
        return Err(Error::InvalidInput(
            "monodromy order must be positive".into(),
        ));
    }
    Ok(k / n.gcd(&k))
}

/// `e(X) = e_gen·(2 - (N + S)) + N·e(generic type) + Σ e(star)`.
pub fn euler_budget_total(context: FiberContext, generic: &GenericCensus, stars: &[i64]) -> i64 {
    let fibers = generic.count as i64 + stars.len() as i64;
    context.generic_euler() * (2 - fibers)
        + generic.count as i64 * generic.fiber_type.euler
        + stars.iter().sum::<i64>()
}

/// Fills in at most one unknown star Euler number from the total.
pub fn solve_euler_budget(
    context: FiberContext,
    e_total: i64,
    generic: &GenericCensus,
    stars: &[Option<i64>],
) -> Result<Vec<i64>> {
    let unknown: Vec<usize> = (0..stars.len()).filter(|&i| stars[i].is_none()).collect();
    if unknown.len() >= 2 {
        return Err(Error::Underdetermined(unknown.len()));
    }
    let mut known: Vec<i64> = stars.iter().map(|s| s.unwrap_or(0)).collect();
    if let [i] = unknown[..] {
        known[i] = e_total - euler_budget_total(context, generic, &known);
    }
    Ok(known)
}

pub fn verify_euler_budget(
    context: FiberContext,
    e_total: i64,
    generic: &GenericCensus,
    stars: &[i64],
) -> bool {
    euler_budget_total(context, generic, stars) == e_total
}

/// Fixture describing one fibration to analyse.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CaseSpec {
    pub name: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub twist: Option<TwistInput>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ambient: Option<WeightedForm>,
    /// Euler number of the proper transform of the special section, if it
    /// should not be computed.
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub theta_euler: BTreeMap<FiberLocation, i64>,
    /// Order of vanishing of the base coordinate along `z_i = 0`; defaults to
    /// `(k2, -k1, 0, ..)` for the base function `z1^k2 / z2^k1`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub valuation: Option<Vec<i64>>,
    /// Expected Euler number of the total space, checked against the budget.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub euler_total: Option<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl CaseSpec {
    pub fn from_twist(name: &str, twist: TwistInput) -> Self {
        Self {
            name: name.to_string(),
            twist: Some(twist),
            ambient: None,
            theta_euler: BTreeMap::new(),
            valuation: None,
            euler_total: None,
            note: None,
        }
    }

    pub fn from_ambient(name: &str, ambient: WeightedForm) -> Self {
        Self {
            ambient: Some(ambient),
            twist: None,
            ..Self::from_twist(name, TwistInput::new(vec![], vec![], 0))
        }
    }

    /// The Fermat hypersurface the case lives on.
    pub fn ambient_form(&self) -> Result<WeightedForm> {
        let form = match (&self.ambient, &self.twist) {
            (Some(form), _) => form.clone(),
            (None, Some(t)) => {
                let img = twist::twist_image(t)?;
                WeightedForm::fermat(img.image_weights, img.degree)?
            }
            (None, None) => {
                return Err(Error::InvalidInput(format!(
                    "case {} has neither twist data nor an ambient form",
                    self.name
                )))
            }
        };
        form.require_fermat()?;
        Ok(form)
    }

    pub fn valuation_vector(&self, form: &WeightedForm) -> Result<Vec<i64>> {
        match &self.valuation {
            Some(v) if v.len() == form.len() => Ok(v.clone()),
            Some(v) => Err(Error::InvalidInput(format!(
                "valuation vector has {} entries for {} coordinates",
                v.len(),
                form.len()
            ))),
            None => Ok(default_valuation(form.weights())),
        }
    }
}

pub fn default_valuation(weights: &[u64]) -> Vec<i64> {
    let mut v = vec![0; weights.len()];
    if weights.len() >= 2 {
        v[0] = weights[1] as i64;
        v[1] = -(weights[0] as i64);
    }
    v
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ComponentKind {
    ProperTransform,
    RuledOverCurve,
    PointResolutionDivisor,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Component {
    pub label: String,
    pub kind: ComponentKind,
    /// Genus of the base curve of a ruled component.
    pub genus: Option<u64>,
    pub euler: i64,
}

/// `count` copies of an intersection between two components. `genus` is the
/// genus of the intersection curve, or `None` when components meet in points.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Adjacency {
    pub from: usize,
    pub to: usize,
    pub genus: Option<u64>,
    pub euler: i64,
    pub count: u64,
}

/// An exceptional divisor that is not part of this fiber.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Divisor {
    pub label: String,
    pub kind: ComponentKind,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FiberGraph {
    pub name: String,
    pub location: FiberLocation,
    pub ambient: WeightedForm,
    pub components: Vec<Component>,
    pub edges: Vec<Adjacency>,
    pub triple_points: u64,
    /// Horizontal exceptional divisors (valuation zero).
    pub sections: Vec<Divisor>,
    /// Exceptional divisors lying in the opposite special fiber.
    pub elsewhere: Vec<Divisor>,
    pub euler: i64,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
enum Key {
    Theta,
    Curve(usize, Vec<u64>),
    Point(usize, Vec<u64>, u64),
}

struct Builder {
    components: Vec<Component>,
    index: BTreeMap<Key, usize>,
    edges: BTreeMap<(usize, usize, Option<u64>), u64>,
    triple_points: u64,
    sections: Vec<Divisor>,
    elsewhere: Vec<Divisor>,
}

impl Builder {
    fn new() -> Self {
        Self {
            components: Vec::new(),
            index: BTreeMap::new(),
            edges: BTreeMap::new(),
            triple_points: 0,
            sections: Vec::new(),
            elsewhere: Vec::new(),
        }
    }

    fn add(&mut self, key: Key, component: Component) -> usize {
        let i = self.components.len();
        self.components.push(component);
        self.index.insert(key, i);
        i
    }

    fn classify(
        &mut self,
        value: i64,
        key: Key,
        label: String,
        kind: ComponentKind,
        genus: Option<u64>,
        euler: i64,
    ) {
        match value.signum() {
            1 => {
                self.add(
                    key,
                    Component {
                        label,
                        kind,
                        genus,
                        euler,
                    },
                );
            }
            0 => self.sections.push(Divisor { label, kind }),
            _ => self.elsewhere.push(Divisor { label, kind }),
        }
    }

    fn connect(&mut self, a: usize, b: usize, genus: Option<u64>, count: u64) {
        *self.edges.entry((a.min(b), a.max(b), genus)).or_insert(0) += count;
    }
}

fn scaled_label(scaled: &[u64]) -> String {
    wps::join(scaled)
}

fn pairing(valuation: &[i64], zero_set: &[usize], scaled: &[u64]) -> i64 {
    zero_set
        .iter()
        .zip(scaled)
        .map(|(&i, &x)| valuation[i] * x as i64)
        .sum()
}

/// Builds the fiber over `z1 = 0` or `z2 = 0` of the crepant resolution.
pub fn assemble_star_fiber(case: &CaseSpec, location: FiberLocation) -> Result<FiberGraph> {
    let form = case.ambient_form()?;
    let valuation = case.valuation_vector(&form)?;
    match FiberContext::for_coordinates(form.len())? {
        FiberContext::K3 => assemble_threefold(case, &form, &valuation, location),
        FiberContext::Elliptic => assemble_surface(case, &form, &valuation, location),
    }
}

fn theta_form(form: &WeightedForm, location: FiberLocation) -> Result<WeightedForm> {
    let keep: Vec<usize> = (0..form.len())
        .filter(|&i| i != location.coordinate())
        .collect();
    form.restrict(&keep)
}

fn base_theta_euler(
    case: &CaseSpec,
    form: &WeightedForm,
    location: FiberLocation,
) -> Result<(i64, bool)> {
    if let Some(&e) = case.theta_euler.get(&location) {
        return Ok((e, true));
    }
    let section = theta_form(form, location)?;
    if !section.is_fermat() {
        return Err(Error::MissingThetaEuler(case.name.clone()));
    }
    Ok((wps::fermat_euler(&section)?, false))
}

fn relevant_strata(
    form: &WeightedForm,
    location: FiberLocation,
    support: usize,
) -> Vec<(usize, Stratum)> {
    singloc::strata(form.weights())
        .into_iter()
        .enumerate()
        .filter(|(_, s)| s.support.len() == support && s.zero_set.contains(&location.coordinate()))
        .collect()
}

/// Triangulation of a point type; when both base coordinates vanish at the
/// point, the valuation-zero segment from the third corner is forced in.
fn point_triangulation(
    stratum: &Stratum,
    q: &singloc::QuotientSingularity,
    valuation: &[i64],
) -> Result<JuniorTriangulation> {
    let z = &stratum.zero_set;
    let (Some(a), Some(b)) = (
        z.iter().position(|&i| i == 0),
        z.iter().position(|&i| i == 1),
    ) else {
        return toric::triangulate(q);
    };
    let c = 3 - a - b;
    let (va, vb) = (valuation[z[a]], valuation[z[b]]);
    if valuation[z[c]] != 0 || va.signum() * vb.signum() >= 0 {
        return toric::triangulate(q);
    }
    let m = q.order as i64;
    let numerator = m * vb;
    let denominator = vb - va;
    if numerator % denominator != 0 {
        return Err(Error::InvalidInput(format!(
            "valuation-zero segment of {q} does not end at a lattice point"
        )));
    }
    let mut scaled = [0u64; 3];
    scaled[a] = (numerator / denominator) as u64;
    scaled[b] = q.order - scaled[a];
    let points = toric::junior_points(q)?;
    let target = points
        .iter()
        .position(|p| p.scaled == scaled)
        .ok_or_else(|| Error::InvalidInput(format!("{q}: no junior point at {scaled:?}")))?;
    toric::triangulate_with_chord(q, c, target)
}

fn assemble_threefold(
    case: &CaseSpec,
    form: &WeightedForm,
    valuation: &[i64],
    location: FiberLocation,
) -> Result<FiberGraph> {
    let weights = form.weights();
    let t = location.coordinate();
    let sgn = location.sign();
    let mut b = Builder::new();
    let (theta_base, theta_fixed) = base_theta_euler(case, form, location)?;
    let theta = b.add(
        Key::Theta,
        Component {
            label: "Θ".into(),
            kind: ComponentKind::ProperTransform,
            genus: None,
            euler: theta_base,
        },
    );

    let curves = relevant_strata(form, location, 3);
    let mut curve_info: BTreeMap<Vec<usize>, (usize, u64)> = BTreeMap::new();
    for (si, s) in &curves {
        let q = singloc::transverse_type(weights, s)?;
        let curve = form.restrict(&s.support)?;
        let genus = wps::curve_genus(&curve)?;
        let e_curve = 2 - 2 * genus as i64;
        curve_info.insert(s.support.clone(), (*si, s.order));
        let segment = toric::junior_segment(&q)?;
        for p in &segment {
            b.classify(
                sgn * pairing(valuation, &s.zero_set, p),
                Key::Curve(*si, p.to_vec()),
                format!("R{}({})", s.label(), scaled_label(p)),
                ComponentKind::RuledOverCurve,
                Some(genus),
                2 * e_curve,
            );
        }
        // corners [0, m] and [m, 0] are the divisors {z = 0} of the zero set
        let m = s.order;
        let mut chain: Vec<Option<usize>> = vec![(s.zero_set[1] == t).then_some(theta)];
        chain.extend(
            segment
                .iter()
                .map(|p| b.index.get(&Key::Curve(*si, p.to_vec())).copied()),
        );
        chain.push((s.zero_set[0] == t).then_some(theta));
        debug_assert_eq!(chain.len() as u64, m + 1);
        for w in chain.windows(2) {
            if let (Some(x), Some(y)) = (w[0], w[1]) {
                b.connect(x, y, Some(genus), 1);
            }
        }
    }

    let mut theta_extra = 0i64;
    let mut euler_extra: BTreeMap<usize, i64> = BTreeMap::new();
    for (si, s) in relevant_strata(form, location, 2) {
        let npts = wps::point_count(&form.restrict(&s.support)?)?;
        let q = singloc::transverse_type(weights, &s)?;
        let tri = point_triangulation(&s, &q, valuation)?;
        let mut slot: Vec<Option<Key>> = Vec::with_capacity(tri.points.len());
        for (i, p) in tri.points.iter().enumerate() {
            let key = match p.location {
                JuniorLocation::Corner(j) => (s.zero_set[j] == t).then_some(Key::Theta),
                JuniorLocation::Edge(j) => {
                    let mut support = s.support.clone();
                    support.push(s.zero_set[j]);
                    support.sort_unstable();
                    curve_info.get(&support).and_then(|&(ci, order)| {
                        let scaled: Vec<u64> = (0..3)
                            .filter(|&r| r != j)
                            .map(|r| p.scaled[r] * order / q.order)
                            .collect();
                        let key = Key::Curve(ci, scaled);
                        b.index.contains_key(&key).then_some(key)
                    })
                }
                JuniorLocation::Interior => {
                    let value = sgn * pairing(valuation, &s.zero_set, &p.scaled);
                    let label = format!("P{}({})", s.label(), scaled_label(&p.scaled));
                    for copy in 0..npts {
                        b.classify(
                            value,
                            Key::Point(si, p.scaled.to_vec(), copy),
                            format!("{label}#{}", copy + 1),
                            ComponentKind::PointResolutionDivisor,
                            None,
                            tri.triangles_at(i) as i64,
                        );
                    }
                    (value > 0).then(|| Key::Point(si, p.scaled.to_vec(), 0))
                }
            };
            match &key {
                Some(Key::Theta) => theta_extra += npts as i64 * (tri.triangles_at(i) as i64 - 1),
                Some(k @ Key::Curve(..)) => {
                    *euler_extra.entry(b.index[k]).or_insert(0) +=
                        npts as i64 * (tri.triangles_at(i) as i64 - 2)
                }
                _ => {}
            }
            slot.push(key);
        }
        let component = |b: &Builder, i: usize, copy: u64| -> Option<usize> {
            match slot[i].as_ref()? {
                Key::Point(si, scaled, _) => Some(b.index[&Key::Point(*si, scaled.clone(), copy)]),
                key => Some(b.index[key]),
            }
        };
        let zeros = |i: usize| -> BTreeSet<usize> {
            (0..3).filter(|&r| tri.points[i].scaled[r] == 0).collect()
        };
        let is_point = |i: usize| matches!(slot[i], Some(Key::Point(..)));
        for copy in 0..npts {
            for &(u, v) in &tri.edges {
                let (Some(cu), Some(cv)) = (component(&b, u, copy), component(&b, v, copy)) else {
                    continue;
                };
                let along_curve = !is_point(u) && !is_point(v) && !zeros(u).is_disjoint(&zeros(v));
                if !along_curve {
                    b.connect(cu, cv, Some(0), 1);
                }
            }
            for tr in &tri.triangles {
                if tr.iter().all(|&i| component(&b, i, copy).is_some()) {
                    b.triple_points += 1;
                }
            }
        }
    }
    if !theta_fixed {
        b.components[theta].euler += theta_extra;
    }
    for (i, extra) in euler_extra {
        b.components[i].euler += extra;
    }
    finish(case, form, location, b)
}

fn assemble_surface(
    case: &CaseSpec,
    form: &WeightedForm,
    valuation: &[i64],
    location: FiberLocation,
) -> Result<FiberGraph> {
    let weights = form.weights();
    let t = location.coordinate();
    let sgn = location.sign();
    let mut b = Builder::new();
    let (theta_euler, _) = base_theta_euler(case, form, location)?;
    let theta = b.add(
        Key::Theta,
        Component {
            label: "Θ".into(),
            kind: ComponentKind::ProperTransform,
            genus: None,
            euler: theta_euler,
        },
    );
    for (si, s) in relevant_strata(form, location, 2) {
        let npts = wps::point_count(&form.restrict(&s.support)?)?;
        let q = singloc::transverse_type(weights, &s)?;
        let j = s
            .zero_set
            .iter()
            .position(|&i| i == t)
            .expect("stratum lies on the section");
        let mut segment = toric::junior_segment(&q)?;
        segment.sort_by_key(|p| std::cmp::Reverse(p[j]));
        for copy in 0..npts {
            let mut previous = Some(theta);
            for p in &segment {
                let key = Key::Point(si, p.to_vec(), copy);
                b.classify(
                    sgn * pairing(valuation, &s.zero_set, p),
                    key.clone(),
                    format!("E{}({})#{}", s.label(), scaled_label(p), copy + 1),
                    ComponentKind::PointResolutionDivisor,
                    None,
                    2,
                );
                let current = b.index.get(&key).copied();
                if let (Some(x), Some(y)) = (previous, current) {
                    b.connect(x, y, None, 1);
                }
                previous = current;
            }
        }
    }
    finish(case, form, location, b)
}

fn finish(
    case: &CaseSpec,
    form: &WeightedForm,
    location: FiberLocation,
    b: Builder,
) -> Result<FiberGraph> {
    let edges: Vec<Adjacency> = b
        .edges
        .into_iter()
        .map(|((from, to, genus), count)| Adjacency {
            from,
            to,
            genus,
            euler: genus.map_or(1, |g| 2 - 2 * g as i64),
            count,
        })
        .collect();
    let euler = b.components.iter().map(|c| c.euler).sum::<i64>()
        - edges.iter().map(|e| e.euler * e.count as i64).sum::<i64>()
        + b.triple_points as i64;
    let graph = FiberGraph {
        name: case.name.clone(),
        location,
        ambient: form.clone(),
        components: b.components,
        edges,
        triple_points: b.triple_points,
        sections: b.sections,
        elsewhere: b.elsewhere,
        euler,
    };
    if !graph.is_connected() {
        return Err(Error::InvalidInput(format!(
            "fiber of {} over {location} is disconnected",
            case.name
        )));
    }
    Ok(graph)
}

impl FiberGraph {
    pub fn component_count(&self) -> usize {
        self.components.len()
    }

    pub fn is_connected(&self) -> bool {
        let n = self.components.len();
        let mut seen = vec![false; n];
        let mut stack = vec![0];
        while let Some(i) = stack.pop() {
            if n == 0 || seen[i] {
                continue;
            }
            seen[i] = true;
            for e in &self.edges {
                if e.from == i {
                    stack.push(e.to);
                } else if e.to == i {
                    stack.push(e.from);
                }
            }
        }
        seen.into_iter().all(|s| s)
    }

    /// Kodaira symbol of an elliptic fiber (surfaces only).
    pub fn kodaira_symbol(&self) -> Option<String> {
        (self.ambient.len() == 4)
            .then(|| kodaira_symbol(self.components.len(), self.euler))
            .flatten()
    }

    pub fn to_dot(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "graph \"{} {}\" {{", self.name, self.location);
        for (i, c) in self.components.iter().enumerate() {
            let shape = match c.kind {
                ComponentKind::ProperTransform => "doublecircle",
                ComponentKind::RuledOverCurve => "box",
                ComponentKind::PointResolutionDivisor => "circle",
            };
            let genus = c.genus.map(|g| format!(" g={g}")).unwrap_or_default();
            let _ = writeln!(
                out,
                "  n{i} [label=\"{} e={}{genus}\", shape={shape}];",
                c.label, c.euler
            );
        }
        for e in &self.edges {
            let what = match e.genus {
                Some(g) => format!("g={g}"),
                None => "pt".into(),
            };
            let times = if e.count > 1 {
                format!(" x{}", e.count)
            } else {
                String::new()
            };
            let _ = writeln!(out, "  n{} -- n{} [label=\"{what}{times}\"];", e.from, e.to);
        }
        out.push_str("}\n");
        out
    }
}

/// Euler numbers of the fibers over the star locations, in location order.
pub fn star_fiber_graphs(case: &CaseSpec) -> Result<Vec<FiberGraph>> {
    let form = case.ambient_form()?;
    star_fiber_locations(&form)?
        .into_iter()
        .filter(|s| s.is_star)
        .map(|s| assemble_star_fiber(case, s.location))
        .collect()
}

/// Assembles every star fiber and, when the case carries a total Euler
/// number, checks it against the budget.
pub fn check_case_budget(case: &CaseSpec) -> Result<Vec<FiberGraph>> {
    let form = case.ambient_form()?;
    let graphs = star_fiber_graphs(case)?;
    if let Some(total) = case.euler_total {
        let context = FiberContext::for_coordinates(form.len())?;
        let generic = census_for_form(&form)?;
        let stars: Vec<i64> = graphs.iter().map(|g| g.euler).collect();
        let computed = euler_budget_total(context, &generic, &stars);
        if computed != total {
            return Err(Error::InconsistentBudget {
                graph: computed,
                budget: total,
            });
        }
    }
    Ok(graphs)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn twist_case(name: &str, w: &[u64], v: &[u64], ell: u64) -> CaseSpec {
        CaseSpec::from_twist(name, TwistInput::new(w.to_vec(), v.to_vec(), ell))
    }

    fn form(w: &[u64], d: u64) -> WeightedForm {
        WeightedForm::new(w.to_vec(), d).unwrap()
    }

    #[test]
    fn catalog_is_consistent() {
        for t in k3_catalog() {
            assert_eq!(t.milnor, t.exponents.iter().map(|n| n - 1).product::<u64>());
            assert_eq!(t.euler, 24 - t.milnor as i64);
        }
        let by_name = |n: &str| k3_catalog().into_iter().find(|t| t.name == n).unwrap();
        assert_eq!((by_name("IV1").milnor, by_name("IV1").euler), (20, 4));
        assert_eq!((by_name("II1").milnor, by_name("II1").euler), (22, 2));
        assert_eq!(by_name("VI1").exponent_lcm(), 30);
        for t in elliptic_catalog() {
            assert_eq!(t.euler, t.milnor as i64);
        }
    }

    #[test]
    fn generic_censuses() {
        let c = census_for_form(&form(&[1, 2, 3, 6], 12)).unwrap();
        assert_eq!((c.fiber_type.name.as_str(), c.count), ("III", 6));
        let c = census_for_form(&form(&[1, 2, 3, 6, 6], 18)).unwrap();
        assert_eq!((c.fiber_type.name.as_str(), c.count), ("IV1", 9));
        let c = census_for_form(&form(&[1, 1, 12, 28, 42], 84)).unwrap();
        assert_eq!((c.fiber_type.name.as_str(), c.count), ("XII3", 84));
        assert!(matches!(
            find_fiber_type(FiberContext::K3, &[11, 2, 2]),
            Err(Error::UnknownFiberType(_))
        ));
    }

    #[test]
    fn star_locations() {
        let s = star_fiber_locations(&form(&[1, 2, 3, 6], 12)).unwrap();
        assert_eq!(s[0].reduced, form(&[1, 1, 1], 2));
        assert!(s[0].is_star);
        assert_eq!(s[1].reduced, form(&[1, 1, 2], 4));
        assert!(!s[1].is_star);
        let s = star_fiber_locations(&form(&[1, 2, 3, 6, 6], 18)).unwrap();
        assert_eq!(s[0].reduced, form(&[1, 1, 1, 1], 3));
        assert!(s[0].is_star);
        let s = star_fiber_locations(&form(&[1, 1, 2, 4, 4], 12)).unwrap();
        assert!(s.iter().all(|s| !s.is_star));
    }

    #[test]
    fn residual_orders() {
        assert_eq!(residual_monodromy_order(4, 6, 1).unwrap(), 2);
        assert_eq!(residual_monodromy_order(6, 9, 1).unwrap(), 2);
        assert_eq!(residual_monodromy_order(12, 15, 1).unwrap(), 4);
        assert_eq!(residual_monodromy_order(42, 49, 1).unwrap(), 6);
        assert!(matches!(
            residual_monodromy_order(6, 5, 2),
            Err(Error::MultipleResiduals(2))
        ));
    }

    #[test]
    fn budgets() {
        let k3 = FiberContext::K3;
        let iv1 = GenericCensus {
            fiber_type: find_fiber_type(k3, &[6, 3, 3]).unwrap(),
            count: 9,
        };
        assert_eq!(
            solve_euler_budget(k3, -144, &iv1, &[None]).unwrap(),
            vec![12]
        );
        let ix1 = GenericCensus {
            fiber_type: find_fiber_type(k3, &[6, 4, 2]).unwrap(),
            count: 18,
        };
        assert_eq!(
            solve_euler_budget(k3, -228, &ix1, &[None]).unwrap(),
            vec![18]
        );
        let five = GenericCensus { count: 5, ..iv1 };
        assert!(verify_euler_budget(k3, -72, &five, &[12, 16]));
        assert!(matches!(
            solve_euler_budget(k3, -72, &five, &[None, None]),
            Err(Error::Underdetermined(2))
        ));
        let ell = FiberContext::Elliptic;
        let ii = GenericCensus {
            fiber_type: find_fiber_type(ell, &[3, 2]).unwrap(),
            count: 7,
        };
        assert!(verify_euler_budget(ell, 24, &ii, &[10]));
    }

    #[test]
    fn iv1_star_inventory() {
        let case = twist_case("IV1*", &[3, 1, 2], &[1, 1, 2, 2], 6);
        let g = assemble_star_fiber(&case, FiberLocation::Infinity).unwrap();
        assert_eq!(g.component_count(), 3);
        assert_eq!(g.sections.len(), 4);
        assert_eq!(g.euler, 12);
        assert_eq!(g.components[0].euler, 12);
        let ruled: Vec<_> = g
            .components
            .iter()
            .filter(|c| c.kind == ComponentKind::RuledOverCurve)
            .collect();
        assert!(ruled.iter().all(|c| c.genus == Some(1) && c.euler == 0));
    }

    #[test]
    fn smooth_special_fiber() {
        let case = twist_case("row1", &[2, 1, 1], &[1, 1, 2, 2], 6);
        let g = assemble_star_fiber(&case, FiberLocation::Infinity).unwrap();
        assert_eq!((g.component_count(), g.euler), (1, 24));
    }

    #[test]
    #[allow(clippy::type_complexity)]
    fn elliptic_star_fibers() {
        let cases: [(&[u64], &[u64], u64, &str, usize); 4] = [
            (&[3, 1, 2], &[1, 1, 2], 4, "I0*", 2),
            (&[4, 1, 3], &[1, 1, 1], 3, "IV*", 3),
            (&[5, 1, 4], &[1, 1, 2], 4, "III*", 2),
            (&[7, 1, 6], &[1, 2, 3], 6, "II*", 1),
        ];
        for (w, v, ell, symbol, sections) in cases {
            let g = assemble_star_fiber(&twist_case(symbol, w, v, ell), FiberLocation::Infinity)
                .unwrap();
            assert_eq!(g.kodaira_symbol().as_deref(), Some(symbol));
            assert_eq!(g.sections.len(), sections, "{symbol}");
        }
    }

    #[test]
    fn two_star_surface() {
        let case = twist_case("row10", &[5, 2, 3], &[1, 2, 3], 6);
        let inf = assemble_star_fiber(&case, FiberLocation::Infinity).unwrap();
        let zero = assemble_star_fiber(&case, FiberLocation::Zero).unwrap();
        assert_eq!(inf.kodaira_symbol().as_deref(), Some("IV*"));
        assert_eq!(zero.kodaira_symbol().as_deref(), Some("I0*"));
    }

    #[test]
    fn budget_check_detects_mismatch() {
        let mut case = twist_case("IV1*", &[3, 1, 2], &[1, 1, 2, 2], 6);
        case.euler_total = Some(-144);
        assert_eq!(check_case_budget(&case).unwrap().len(), 1);
        case.euler_total = Some(-140);
        assert!(matches!(
            check_case_budget(&case),
            Err(Error::InconsistentBudget { .. })
        ));
    }

    #[test]
    fn theta_override_is_used() {
        let mut case = twist_case("IV1*", &[3, 1, 2], &[1, 1, 2, 2], 6);
        case.theta_euler.insert(FiberLocation::Infinity, 20);
        let g = assemble_star_fiber(&case, FiberLocation::Infinity).unwrap();
        assert_eq!(g.components[0].euler, 20);
        assert_eq!(g.euler, 20);
    }

    #[test]
    fn case_spec_round_trips() {
        let mut case = twist_case("IX1*", &[3, 1, 2], &[1, 2, 3, 6], 12);
        case.theta_euler.insert(FiberLocation::Zero, 24);
        case.euler_total = Some(-228);
        let json = serde_json::to_string(&case).unwrap();
        let back: CaseSpec = serde_json::from_str(&json).unwrap();
        assert_eq!(back, case);
    }

    #[test]
    fn dot_output() {
        let case = twist_case("IV1*", &[3, 1, 2], &[1, 1, 2, 2], 6);
        let dot = assemble_star_fiber(&case, FiberLocation::Infinity)
            .unwrap()
            .to_dot();
        assert!(dot.starts_with("graph \"IV1* C∞\" {"));
        assert_eq!(dot.matches(" -- ").count(), 2);
    }

    #[test]
    fn exceptional_divisors_are_conserved() {
        let ambients: [&[u64]; 6] = [
            &[1, 2, 3, 6, 6],
            &[1, 2, 18, 42, 63],
            &[1, 3, 8, 12, 24],
            &[1, 6, 14, 21, 42],
            &[1, 6, 42, 98, 147],
            &[2, 3, 10, 15, 30],
        ];
        for w in ambients {
            let x = form(w, w.iter().sum());
            for loc in FiberLocation::BOTH {
                let mut expected = 0;
                for s in singloc::strata(w) {
                    if !s.zero_set.contains(&loc.coordinate()) {
                        continue;
                    }
                    let q = singloc::transverse_type(w, &s).unwrap();
                    match s.support.len() {
                        3 => expected += s.order - 1,
                        2 => {
                            let c = toric::lemma_counts(&q).unwrap();
                            let boundary: u64 = q.gcds.iter().sum();
                            let npts = wps::point_count(&x.restrict(&s.support).unwrap()).unwrap();
                            expected += npts * (c.v - boundary);
                        }
                        _ => {}
                    }
                }
                let g = assemble_star_fiber(&CaseSpec::from_ambient("x", x.clone()), loc).unwrap();
                let found = g.component_count() - 1 + g.sections.len() + g.elsewhere.len();
                assert_eq!(found as u64, expected, "{x} {loc}");
            }
        }
    }

    #[test]
    fn kodaira_symbols() {
        assert_eq!(kodaira_symbol(9, 10).as_deref(), Some("II*"));
        assert_eq!(kodaira_symbol(4, 4).as_deref(), Some("I4"));
        assert_eq!(kodaira_symbol(6, 7).as_deref(), Some("I1*"));
        assert_eq!(kodaira_symbol(2, 7), None);
    }
}
