//! Weighted projective spaces and Fermat-type weighted hypersurfaces.
//!
//! A [`WeightedForm`] `P_(w0,..,wn)[d]` stands for the Fermat hypersurface
//! `sum z_i^(d/w_i) = 0` whenever every weight divides the degree. Two rewrite
//! rules bring such a form to a well-formed one without changing the variety:
//!
//! - divide every weight and the degree by a prime `p` dividing all weights;
//! - if `p` divides every weight except `w_i`, divide those weights and the
//!   degree by `p` (the coordinate change `z_i' = z_i^p`).

use std::cmp::Reverse;
use std::collections::{BTreeSet, VecDeque};
use std::fmt;

use num_integer::Integer;
use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "RawForm")]
pub struct WeightedForm {
    weights: Vec<u64>,
    degree: u64,
}

#[derive(Deserialize)]
struct RawForm {
    weights: Vec<u64>,
    degree: u64,
}

impl TryFrom<RawForm> for WeightedForm {
    type Error = Error;

    fn try_from(raw: RawForm) -> Result<Self> {
        WeightedForm::new(raw.weights, raw.degree)
    }
}

impl WeightedForm {
    pub fn new(weights: Vec<u64>, degree: u64) -> Result<Self> {
        if weights.is_empty() {
            return Err(Error::InvalidInput("empty weight vector".into()));
        }
        if weights.contains(&0) {
            return Err(Error::InvalidInput(format!("zero weight in {weights:?}")));
        }
        if degree == 0 {
            return Err(Error::InvalidInput("degree must be positive".into()));
        }
        Ok(Self { weights, degree })
    }

    /// Like [`WeightedForm::new`], additionally requiring `w_i | d` for all `i`.
    pub fn fermat(weights: Vec<u64>, degree: u64) -> Result<Self> {
        let form = Self::new(weights, degree)?;
        form.require_fermat()?;
        Ok(form)
    }

    pub fn weights(&self) -> &[u64] {
        &self.weights
    }

    pub fn degree(&self) -> u64 {
        self.degree
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn weight_sum(&self) -> u64 {
        self.weights.iter().sum()
    }

    pub fn is_fermat(&self) -> bool {
        self.weights.iter().all(|w| self.degree.is_multiple_of(*w))
    }

    pub fn require_fermat(&self) -> Result<()> {
        if self.is_fermat() {
            Ok(())
        } else {
            Err(Error::NotFermat(self.to_string()))
        }
    }

    /// Exponents `d / w_i` of the Fermat polynomial.
    pub fn fermat_exponents(&self) -> Result<Vec<u64>> {
        self.require_fermat()?;
        Ok(self.weights.iter().map(|w| self.degree / w).collect())
    }

    /// The form obtained by keeping only the listed coordinates (same degree).
    pub fn restrict(&self, indices: &[usize]) -> Result<Self> {
        let weights = indices
            .iter()
            .map(|&i| {
                self.weights.get(i).copied().ok_or_else(|| {
                    Error::InvalidInput(format!("coordinate {i} out of range for {self}"))
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(weights, self.degree)
    }

    /// Same form with weights sorted ascending; equal keys mean isomorphic
    /// ambient data up to relabelling coordinates.
    pub fn sorted(&self) -> Self {
        let mut weights = self.weights.clone();
        weights.sort_unstable();
        Self {
            weights,
            degree: self.degree,
        }
    }

    pub fn is_well_formed(&self) -> bool {
        next_rule(&self.weights).is_none()
    }
}

impl fmt::Display for WeightedForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "P_({})[{}]", join(&self.weights), self.degree)
    }
}

pub(crate) fn join(values: &[u64]) -> String {
    values
        .iter()
        .map(u64::to_string)
        .collect::<Vec<_>>()
        .join(",")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "rule", rename_all = "snake_case")]
pub enum ReductionRule {
    DivideAll { prime: u64 },
    DivideAllButOne { index: usize, prime: u64 },
}

impl fmt::Display for ReductionRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ReductionRule::DivideAll { prime } => write!(f, "divide all by {prime}"),
            ReductionRule::DivideAllButOne { index, prime } => {
                write!(f, "divide all but coordinate {index} by {prime}")
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ReductionStep {
    pub rule: ReductionRule,
    pub before: WeightedForm,
    pub after: WeightedForm,
}

/// A reduction trace from `start` to a well-formed `terminal`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Reduction {
    pub start: WeightedForm,
    pub terminal: WeightedForm,
    pub steps: Vec<ReductionStep>,
}

impl Reduction {
    /// The chain as it is usually written: repeated applications of the same
    /// rule (e.g. dividing twice by 2) collapse into one link.
    pub fn links(&self) -> Vec<WeightedForm> {
        let mut out = vec![self.start.clone()];
        let mut previous: Option<ReductionRule> = None;
        for step in &self.steps {
            if previous == Some(step.rule) {
                *out.last_mut().expect("chain is never empty") = step.after.clone();
            } else {
                out.push(step.after.clone());
            }
            previous = Some(step.rule);
        }
        out
    }

    pub fn chain_notation(&self) -> String {
        self.links()
            .iter()
            .map(WeightedForm::to_string)
            .collect::<Vec<_>>()
            .join(" ≅ ")
    }
}

pub(crate) fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            out.push(p);
            while n.is_multiple_of(p) {
                n /= p;
            }
        }
        p += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

fn gcd_all(values: impl IntoIterator<Item = u64>) -> u64 {
    values.into_iter().fold(0, |acc, x| acc.gcd(&x))
}

/// Every rewrite rule that applies to the weight vector.
pub fn applicable_rules(weights: &[u64]) -> Vec<ReductionRule> {
    let mut rules = Vec::new();
    for p in prime_factors(gcd_all(weights.iter().copied())) {
        rules.push(ReductionRule::DivideAll { prime: p });
    }
    if weights.len() >= 2 {
        for (i, &wi) in weights.iter().enumerate() {
            let others = gcd_all(
                weights
                    .iter()
                    .enumerate()
                    .filter(|&(j, _)| j != i)
                    .map(|(_, &w)| w),
            );
            for p in prime_factors(others) {
                if wi % p != 0 {
                    rules.push(ReductionRule::DivideAllButOne { index: i, prime: p });
                }
            }
        }
    }
    rules
}

/// Deterministic choice: a common factor of all weights goes first (smallest
/// prime), then the largest prime of an all-but-one rule, lowest index on ties.
fn next_rule(weights: &[u64]) -> Option<ReductionRule> {
    let rules = applicable_rules(weights);
    let divide_all = rules
        .iter()
        .filter_map(|r| match r {
            ReductionRule::DivideAll { prime } => Some(*prime),
            _ => None,
        })
        .min();
    if let Some(prime) = divide_all {
        return Some(ReductionRule::DivideAll { prime });
    }
    rules
        .into_iter()
        .filter_map(|r| match r {
            ReductionRule::DivideAllButOne { index, prime } => Some((prime, Reverse(index))),
            _ => None,
        })
        .max()
        .map(|(prime, Reverse(index))| ReductionRule::DivideAllButOne { index, prime })
}

fn apply_to_weights(weights: &[u64], rule: ReductionRule) -> Vec<u64> {
    match rule {
        ReductionRule::DivideAll { prime } => weights.iter().map(|w| w / prime).collect(),
        ReductionRule::DivideAllButOne { index, prime } => weights
            .iter()
            .enumerate()
            .map(|(j, &w)| if j == index { w } else { w / prime })
            .collect(),
    }
}

fn rule_applies(weights: &[u64], rule: ReductionRule) -> bool {
    match rule {
        ReductionRule::DivideAll { prime } => weights.iter().all(|w| w % prime == 0),
        ReductionRule::DivideAllButOne { index, prime } => {
            index < weights.len()
                && weights.len() >= 2
                && !weights[index].is_multiple_of(prime)
                && weights
                    .iter()
                    .enumerate()
                    .all(|(j, w)| j == index || w % prime == 0)
        }
    }
}

/// Applies one rule to a form; `None` if the rule does not apply.
pub fn apply_rule(form: &WeightedForm, rule: ReductionRule) -> Option<WeightedForm> {
    let prime = match rule {
        ReductionRule::DivideAll { prime } | ReductionRule::DivideAllButOne { prime, .. } => prime,
    };
    if !rule_applies(&form.weights, rule) || !form.degree.is_multiple_of(prime) {
        return None;
    }
    Some(WeightedForm {
        weights: apply_to_weights(&form.weights, rule),
        degree: form.degree / prime,
    })
}

/// Well-formed representative of a weight vector (no degree attached).
pub fn normalize_weights(weights: &[u64]) -> Vec<u64> {
    let mut current = weights.to_vec();
    while let Some(rule) = next_rule(&current) {
        current = apply_to_weights(&current, rule);
    }
    current
}

/// Reduces a Fermat form to a well-formed one, recording every step.
pub fn reduce_form(form: &WeightedForm) -> Result<Reduction> {
    form.require_fermat()?;
    let mut steps = Vec::new();
    let mut current = form.clone();
    while let Some(rule) = next_rule(&current.weights) {
        let after = apply_rule(&current, rule).expect("rules preserve Fermat divisibility");
        steps.push(ReductionStep {
            rule,
            before: current,
            after: after.clone(),
        });
        current = after;
    }
    Ok(Reduction {
        start: form.clone(),
        terminal: current,
        steps,
    })
}

/// Whether `target` (up to permuting coordinates) can be reached from `from`
/// by some sequence of rule applications, including the empty one.
pub fn is_reachable(from: &WeightedForm, target: &WeightedForm) -> bool {
    let goal = target.sorted();
    let mut seen = BTreeSet::new();
    let mut queue = VecDeque::from([from.clone()]);
    while let Some(form) = queue.pop_front() {
        if form.sorted() == goal {
            return true;
        }
        if !seen.insert(form.clone()) {
            continue;
        }
        for rule in applicable_rules(&form.weights) {
            if let Some(next) = apply_rule(&form, rule) {
                queue.push_back(next);
            }
        }
    }
    false
}

pub fn is_calabi_yau(form: &WeightedForm) -> bool {
    form.degree == form.weight_sum()
}

/// Point count of a two-weight Fermat form as `d / lcm(a, b)`.
pub fn point_count_by_lcm(form: &WeightedForm) -> Result<u64> {
    two_weights(form)?;
    let lcm = form.weights[0].lcm(&form.weights[1]);
    Ok(form.degree / lcm)
}

/// Point count of a two-weight Fermat form by reducing to `P_(1,1)[k]`.
pub fn point_count_by_reduction(form: &WeightedForm) -> Result<u64> {
    two_weights(form)?;
    let terminal = reduce_form(form)?.terminal;
    debug_assert_eq!(terminal.weights, [1, 1]);
    Ok(terminal.degree)
}

/// Number of points of the Fermat locus in `P_(a,b)`, checked by two routes.
pub fn point_count(form: &WeightedForm) -> Result<u64> {
    let by_lcm = point_count_by_lcm(form)?;
    let by_reduction = point_count_by_reduction(form)?;
    if by_lcm != by_reduction {
        return Err(Error::RouteMismatch {
            what: "point count",
            first: by_lcm.to_string(),
            second: by_reduction.to_string(),
        });
    }
    Ok(by_lcm)
}

fn two_weights(form: &WeightedForm) -> Result<()> {
    if form.len() != 2 {
        return Err(Error::InvalidInput(format!(
            "point count needs two weights, got {form}"
        )));
    }
    form.require_fermat()
}

/// Genus of a Fermat curve, from `2g - 2 = d(d - a - b - c) / abc` on the
/// well-formed reduction.
pub fn curve_genus(form: &WeightedForm) -> Result<u64> {
    if form.len() != 3 {
        return Err(Error::InvalidInput(format!(
            "curve genus needs three weights, got {form}"
        )));
    }
    let reduced = reduce_form(form)?.terminal;
    let d = i128::from(reduced.degree);
    let product: i128 = reduced.weights.iter().map(|&w| i128::from(w)).product();
    let sum: i128 = reduced.weights.iter().map(|&w| i128::from(w)).sum();
    let numerator = d * (d - sum);
    if numerator % product != 0 {
        return Err(Error::NonIntegerGenus(form.to_string()));
    }
    let two_g_minus_two = numerator / product;
    if two_g_minus_two < -2 || two_g_minus_two % 2 != 0 {
        return Err(Error::NonIntegerGenus(form.to_string()));
    }
    Ok(((two_g_minus_two + 2) / 2) as u64)
}

/// Milnor number `prod (n_i - 1)` of `sum z_i^(n_i)`.
pub fn milnor_number(exponents: &[u64]) -> u64 {
    exponents.iter().map(|n| n.saturating_sub(1)).product()
}

/// Topological Euler number of the Fermat hypersurface.
///
/// The hypersurface is cut into the loci where exactly the coordinates in `S`
/// are nonzero. Such a piece is the quotient of `{sum_S z^n = 0} ∩ (C*)^S` by
/// `C*`; counting through an étale cover gives the contribution
/// `(-1)^|S| d^(|S|-1) gcd(w_S) / prod(w_S)` for `|S| >= 2`.
pub fn fermat_euler(form: &WeightedForm) -> Result<i64> {
    form.require_fermat()?;
    if form.len() < 2 {
        return Err(Error::InvalidInput(format!(
            "Euler number needs at least two weights, got {form}"
        )));
    }
    let n = form.len();
    let d = i128::from(form.degree);
    let mut total = Ratio::<i128>::from_integer(0);
    for mask in 1u32..(1 << n) {
        let size = mask.count_ones();
        if size < 2 {
            continue;
        }
        let chosen: Vec<u64> = (0..n)
            .filter(|i| mask & (1 << i) != 0)
            .map(|i| form.weights[i])
            .collect();
        let product: i128 = chosen.iter().map(|&w| i128::from(w)).product();
        let g = i128::from(gcd_all(chosen.iter().copied()));
        let sign = if size % 2 == 0 { 1 } else { -1 };
        total += Ratio::new(sign * d.pow(size - 1) * g, product);
    }
    if !total.is_integer() {
        return Err(Error::RouteMismatch {
            what: "Euler number integrality",
            first: total.to_string(),
            second: "an integer".into(),
        });
    }
    Ok(total.to_integer() as i64)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn form(w: &[u64], d: u64) -> WeightedForm {
        WeightedForm::new(w.to_vec(), d).unwrap()
    }

    #[test]
    fn reduces_the_introductory_chain() {
        let r = reduce_form(&form(&[2, 3, 6], 12)).unwrap();
        assert_eq!(r.terminal, form(&[1, 1, 1], 2));
        assert_eq!(
            r.chain_notation(),
            "P_(2,3,6)[12] ≅ P_(2,1,2)[4] ≅ P_(1,1,1)[2]"
        );
        assert_eq!(r.steps.len(), 2);
    }

    #[test]
    fn reduce_form_examples() {
        let cases: [(&[u64], u64, &[u64], u64); 3] = [
            (&[2, 18, 42], 126, &[1, 3, 7], 21),
            (&[1, 1, 1], 3, &[1, 1, 1], 3),
            (&[6, 14, 21], 42, &[1, 1, 1], 1),
        ];
        for (w, d, tw, td) in cases {
            let r = reduce_form(&form(w, d)).unwrap();
            assert_eq!(r.terminal, form(tw, td), "{}", r.chain_notation());
        }
        assert!(reduce_form(&form(&[1, 1, 1], 3)).unwrap().steps.is_empty());
    }

    #[test]
    fn rejects_non_fermat() {
        assert!(matches!(
            reduce_form(&form(&[5, 6, 22, 33], 66)),
            Err(Error::NotFermat(_))
        ));
        assert!(WeightedForm::new(vec![1, 1], 0).is_err());
        assert!(WeightedForm::new(vec![1, 0], 3).is_err());
    }

    #[test]
    fn normalizes_weights() {
        assert_eq!(normalize_weights(&[2, 3, 6]), vec![1, 1, 1]);
        assert_eq!(normalize_weights(&[1, 1, 1]), vec![1, 1, 1]);
        assert_eq!(normalize_weights(&[4, 5, 10]), vec![2, 1, 1]);
        assert_eq!(normalize_weights(&[18, 42, 63]), vec![1, 1, 1]);
    }

    #[test]
    fn calabi_yau_examples() {
        assert!(is_calabi_yau(&form(&[1, 1, 2], 4)));
        assert!(!is_calabi_yau(&form(&[1, 1, 1], 2)));
        assert!(is_calabi_yau(&form(&[1, 1, 4, 6, 12], 24)));
    }

    #[test]
    fn point_counts() {
        assert_eq!(point_count(&form(&[2, 6], 12)).unwrap(), 2);
        assert_eq!(point_count(&form(&[8, 8], 24)).unwrap(), 3);
        assert_eq!(point_count(&form(&[22, 33], 66)).unwrap(), 1);
        assert!(point_count(&form(&[2, 6, 1], 12)).is_err());
        assert!(point_count(&form(&[4, 6], 18)).is_err());
    }

    #[test]
    fn genera() {
        assert_eq!(curve_genus(&form(&[1, 1, 3], 6)).unwrap(), 2);
        assert_eq!(curve_genus(&form(&[1, 2, 7], 14)).unwrap(), 3);
        assert_eq!(curve_genus(&form(&[1, 1, 1], 3)).unwrap(), 1);
        assert_eq!(curve_genus(&form(&[2, 18, 42], 126)).unwrap(), 6);
        assert_eq!(curve_genus(&form(&[1, 1, 2], 6)).unwrap(), 4);
        assert_eq!(curve_genus(&form(&[1, 1, 1], 2)).unwrap(), 0);
    }

    #[test]
    fn genus_rejects_nonsense() {
        assert!(curve_genus(&form(&[1, 1, 2], 3)).is_err());
        assert_eq!(curve_genus(&form(&[1, 1, 1], 1)).unwrap(), 0);
    }

    #[test]
    fn milnor_numbers() {
        assert_eq!(milnor_number(&[6, 3, 3]), 20);
        assert_eq!(milnor_number(&[12, 3, 2]), 22);
        assert_eq!(milnor_number(&[2, 2, 2]), 1);
        assert_eq!(milnor_number(&[5, 1, 2]), 0);
    }

    #[test]
    fn euler_numbers_of_classical_examples() {
        assert_eq!(fermat_euler(&form(&[1, 1, 1], 3)).unwrap(), 0);
        assert_eq!(fermat_euler(&form(&[1, 1, 1, 1], 4)).unwrap(), 24);
        assert_eq!(fermat_euler(&form(&[1, 1, 1, 1], 3)).unwrap(), 9);
        assert_eq!(fermat_euler(&form(&[2, 3, 6, 6], 18)).unwrap(), 9);
        assert_eq!(fermat_euler(&form(&[1, 1, 3], 6)).unwrap(), -2);
        assert_eq!(fermat_euler(&form(&[1, 1], 5)).unwrap(), 5);
    }

    #[test]
    fn links_merge_repeated_rules() {
        let r = reduce_form(&form(&[4, 4], 12)).unwrap();
        assert_eq!(r.steps.len(), 2);
        assert_eq!(r.links(), vec![form(&[4, 4], 12), form(&[1, 1], 3)]);
    }

    #[test]
    fn reachability_is_up_to_permutation() {
        assert!(is_reachable(
            &form(&[3, 10, 15], 30),
            &form(&[1, 10, 5], 10)
        ));
        assert!(is_reachable(
            &form(&[3, 4, 8, 8], 24),
            &form(&[1, 2, 3, 2], 6)
        ));
        assert!(!is_reachable(
            &form(&[3, 8, 12, 24], 48),
            &form(&[1, 1, 2, 2], 3)
        ));
    }
}

#[cfg(test)]
mod props {
    use super::*;
    use proptest::prelude::*;

    fn fermat_form() -> impl Strategy<Value = WeightedForm> {
        (prop::collection::vec(1u64..=30, 2..=5), 1u64..=3).prop_filter_map(
            "lcm too large",
            |(weights, k)| {
                let lcm = weights.iter().fold(1u64, |l, w| l.lcm(w));
                (lcm <= 5_000).then(|| WeightedForm::new(weights, lcm * k).unwrap())
            },
        )
    }

    fn reduce_in_order(form: &WeightedForm, picks: &[usize]) -> WeightedForm {
        let mut current = form.clone();
        let mut i = 0;
        loop {
            let rules = applicable_rules(current.weights());
            if rules.is_empty() {
                return current;
            }
            let pick = picks.get(i).copied().unwrap_or(0) % rules.len();
            i += 1;
            current = apply_rule(&current, rules[pick]).unwrap();
        }
    }

    proptest! {
        #[test]
        fn reduction_is_confluent(
            form in fermat_form(),
            picks in prop::collection::vec(0usize..16, 0..40),
        ) {
            let canonical = reduce_form(&form).unwrap().terminal;
            prop_assert_eq!(reduce_in_order(&form, &picks), canonical);
        }

        #[test]
        fn euler_number_is_invariant_under_every_step(form in fermat_form()) {
            let e = fermat_euler(&form).unwrap();
            for step in reduce_form(&form).unwrap().steps {
                prop_assert_eq!(fermat_euler(&step.after).unwrap(), e);
            }
        }

        #[test]
        fn terminal_forms_are_well_formed(form in fermat_form()) {
            let t = reduce_form(&form).unwrap().terminal;
            prop_assert!(t.is_well_formed());
            prop_assert!(t.is_fermat());
            prop_assert_eq!(normalize_weights(form.weights()), t.weights().to_vec());
        }

        #[test]
        fn genus_matches_euler_number(form in fermat_form()) {
            prop_assume!(form.len() == 3);
            let g = curve_genus(&form).unwrap() as i64;
            prop_assert_eq!(fermat_euler(&form).unwrap(), 2 - 2 * g);
        }

        #[test]
        fn milnor_vanishes_exactly_at_linear_terms(exps in prop::collection::vec(1u64..=12, 1..=4)) {
            prop_assert_eq!(milnor_number(&exps) == 0, exps.contains(&1));
        }
    }

    #[test]
    fn point_count_routes_agree_exhaustively() {
        for a in 1..=200u64 {
            for b in 1..=200u64 {
                let lcm = a.lcm(&b);
                let mut d = lcm;
                while d <= 2000 {
                    let f = WeightedForm::new(vec![a, b], d).unwrap();
                    assert_eq!(
                        point_count_by_lcm(&f).unwrap(),
                        point_count_by_reduction(&f).unwrap(),
                        "{f}"
                    );
                    d += lcm;
                }
            }
        }
    }

    #[test]
    fn calabi_yau_curves_have_genus_one() {
        let mut seen = 0;
        for a in 1..=60u64 {
            for b in a..=60 {
                for c in b..=60 {
                    let d = a + b + c;
                    if d % a == 0 && d % b == 0 && d % c == 0 {
                        let f = WeightedForm::new(vec![a, b, c], d).unwrap();
                        assert_eq!(curve_genus(&f).unwrap(), 1, "{f}");
                        seen += 1;
                    }
                }
            }
        }
        assert!(seen > 20);
    }

    #[test]
    fn calabi_yau_is_not_a_reduction_invariant() {
        let start = WeightedForm::new(vec![1, 3, 6], 12).unwrap();
        let end = reduce_form(&start).unwrap().terminal;
        assert!(!is_calabi_yau(&start));
        assert!(is_calabi_yau(&end));
    }
}
