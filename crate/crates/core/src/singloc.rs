//! Singular strata of weighted projective space and the cyclic quotient
//! singularities they induce on a Fermat hypersurface.

use std::fmt;

use num_integer::Integer;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::wps::{self, join, WeightedForm};

/// The locus where exactly the `support` coordinates may be nonzero, with
/// stabilizer `Z/order`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct Stratum {
    pub zero_set: Vec<usize>,
    pub support: Vec<usize>,
    pub order: u64,
    pub dim: usize,
}

impl Stratum {
    /// Builds the stratum with the given support, computing its stabilizer.
    pub fn with_support(weights: &[u64], support: &[usize]) -> Result<Self> {
        let mut support = support.to_vec();
        support.sort_unstable();
        support.dedup();
        if support.is_empty() || support.iter().any(|&i| i >= weights.len()) {
            return Err(Error::InvalidInput(format!(
                "bad support {support:?} for {} coordinates",
                weights.len()
            )));
        }
        let zero_set = (0..weights.len())
            .filter(|i| !support.contains(i))
            .collect();
        let order = support.iter().fold(0, |g, &i| weights[i].gcd(&g));
        Ok(Self {
            zero_set,
            dim: support.len() - 1,
            support,
            order,
        })
    }

    pub fn support_weights(&self, weights: &[u64]) -> Vec<u64> {
        self.support.iter().map(|&i| weights[i]).collect()
    }

    pub fn zero_weights(&self, weights: &[u64]) -> Vec<u64> {
        self.zero_set.iter().map(|&i| weights[i]).collect()
    }

    /// Human-readable name such as `{z1=z2=0}_Z7` (coordinates 1-based).
    pub fn label(&self) -> String {
        let zeros = self
            .zero_set
            .iter()
            .map(|i| format!("z{}", i + 1))
            .collect::<Vec<_>>()
            .join("=");
        if zeros.is_empty() {
            format!("everything_Z{}", self.order)
        } else {
            format!("{{{zeros}=0}}_Z{}", self.order)
        }
    }
}

/// Every coordinate stratum with nontrivial stabilizer.
///
/// A support is recorded when enlarging it by any coordinate strictly drops
/// the stabilizer, so each recorded stratum is the closure of a locus with
/// constant stabilizer. Sorted by descending dimension, then descending order,
/// then zero set.
pub fn strata(weights: &[u64]) -> Vec<Stratum> {
    let n = weights.len();
    let mut out = Vec::new();
    for mask in 1u64..(1 << n) {
        let support: Vec<usize> = (0..n).filter(|i| mask & (1 << i) != 0).collect();
        let stratum = Stratum::with_support(weights, &support).expect("support in range");
        if stratum.order <= 1 {
            continue;
        }
        let maximal = stratum
            .zero_set
            .iter()
            .all(|&j| weights[j].gcd(&stratum.order) < stratum.order);
        if maximal {
            out.push(stratum);
        }
    }
    out.sort_by(|a, b| {
        b.dim
            .cmp(&a.dim)
            .then(b.order.cmp(&a.order))
            .then(a.zero_set.cmp(&b.zero_set))
    });
    out
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum GeometricLocus {
    Points {
        count: u64,
        form: WeightedForm,
    },
    Curve {
        form: WeightedForm,
        reduced: WeightedForm,
        genus: u64,
    },
    Surface {
        form: WeightedForm,
        reduced: WeightedForm,
        is_calabi_yau: bool,
    },
}

impl GeometricLocus {
    pub fn dim(&self) -> usize {
        match self {
            GeometricLocus::Points { .. } => 0,
            GeometricLocus::Curve { .. } => 1,
            GeometricLocus::Surface { .. } => 2,
        }
    }

    pub fn form(&self) -> &WeightedForm {
        match self {
            GeometricLocus::Points { form, .. }
            | GeometricLocus::Curve { form, .. }
            | GeometricLocus::Surface { form, .. } => form,
        }
    }
}

impl fmt::Display for GeometricLocus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GeometricLocus::Points { count, form } => write!(f, "{form} = {count} point(s)"),
            GeometricLocus::Curve {
                form,
                reduced,
                genus,
            } => write!(f, "{form} ≅ {reduced}, genus {genus}"),
            GeometricLocus::Surface {
                form,
                reduced,
                is_calabi_yau,
            } => {
                let cy = if *is_calabi_yau { "CY" } else { "not CY" };
                write!(f, "{form} ≅ {reduced}, {cy}")
            }
        }
    }
}

/// `X ∩ S` for a Fermat hypersurface `X` and a stratum `S` of its ambient.
pub fn stratum_intersection(form: &WeightedForm, stratum: &Stratum) -> Result<GeometricLocus> {
    form.require_fermat()?;
    let restricted = form.restrict(&stratum.support)?;
    match stratum.support.len() {
        1 => Err(Error::EmptyIntersection(format!(
            "{} misses the hypersurface {form}",
            stratum.label()
        ))),
        2 => Ok(GeometricLocus::Points {
            count: wps::point_count(&restricted)?,
            form: restricted,
        }),
        3 => Ok(GeometricLocus::Curve {
            reduced: wps::reduce_form(&restricted)?.terminal,
            genus: wps::curve_genus(&restricted)?,
            form: restricted,
        }),
        4 => {
            let reduced = wps::reduce_form(&restricted)?.terminal;
            Ok(GeometricLocus::Surface {
                is_calabi_yau: wps::is_calabi_yau(&reduced),
                reduced,
                form: restricted,
            })
        }
        k => Err(Error::InvalidInput(format!(
            "intersections of dimension {} are not supported",
            k - 2
        ))),
    }
}

/// The cyclic quotient `C^k / Z_order` acting with the given weights.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct QuotientSingularity {
    pub order: u64,
    pub weights: Vec<u64>,
    pub gcds: Vec<u64>,
}

impl QuotientSingularity {
    /// Reduces weights modulo `order`.
    pub fn new(order: u64, weights: &[u64]) -> Result<Self> {
        if order < 2 {
            return Err(Error::InvalidInput(format!(
                "quotient order must be at least 2, got {order}"
            )));
        }
        let weights: Vec<u64> = weights.iter().map(|w| w % order).collect();
        let gcds = weights.iter().map(|w| w.gcd(&order)).collect();
        Ok(Self {
            order,
            weights,
            gcds,
        })
    }

    /// Gorenstein (Calabi-Yau) condition: the weights sum to 0 mod the order.
    pub fn is_gorenstein(&self) -> bool {
        self.weights.iter().sum::<u64>() % self.order == 0
    }

    pub fn require_gorenstein(&self) -> Result<()> {
        if self.is_gorenstein() {
            Ok(())
        } else {
            Err(Error::NotGorenstein {
                order: self.order,
                weights: self.weights.clone(),
            })
        }
    }

    fn units(&self) -> impl Iterator<Item = u64> + '_ {
        (1..self.order).filter(move |u| u.gcd(&self.order) == 1)
    }

    /// Sorted representatives `sort(u·weights mod order)` for every unit `u`.
    pub fn orbit(&self) -> Vec<Vec<u64>> {
        let mut out: Vec<Vec<u64>> = self
            .units()
            .map(|u| {
                let mut ws: Vec<u64> = self.weights.iter().map(|w| w * u % self.order).collect();
                ws.sort_unstable();
                ws
            })
            .collect();
        out.sort();
        out.dedup();
        out
    }

    pub fn orbit_contains(&self, weights: &[u64]) -> bool {
        let mut target: Vec<u64> = weights.iter().map(|w| w % self.order).collect();
        target.sort_unstable();
        self.orbit().contains(&target)
    }

    pub fn canonical(&self) -> Self {
        let weights = self
            .orbit()
            .into_iter()
            .next()
            .expect("the unit 1 always contributes");
        Self::new(self.order, &weights).expect("order already validated")
    }

    pub fn sorted_gcds(&self) -> Vec<u64> {
        let mut g = self.gcds.clone();
        g.sort_unstable();
        g
    }
}

impl fmt::Display for QuotientSingularity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "1/{}({})", self.order, join(&self.weights))
    }
}

pub fn canonical_sing_type(q: &QuotientSingularity) -> QuotientSingularity {
    let c = q.canonical();
    debug_assert_eq!(c.sorted_gcds(), q.sorted_gcds());
    c
}

/// Action of the stabilizer on the coordinates normal to the stratum.
pub fn transverse_type(weights: &[u64], stratum: &Stratum) -> Result<QuotientSingularity> {
    QuotientSingularity::new(stratum.order, &stratum.zero_weights(weights))
}

/// Local type of `X` at the points of a zero-dimensional intersection. The
/// hypersurface is a graph over the zero-set coordinates there, so the type
/// is the stabilizer acting on those coordinates.
pub fn point_singularity_type(
    form: &WeightedForm,
    stratum: &Stratum,
) -> Result<QuotientSingularity> {
    match stratum_intersection(form, stratum)? {
        GeometricLocus::Points { .. } => transverse_type(form.weights(), stratum),
        other => Err(Error::NotIsolatedOnX(format!(
            "{} meets {form} in {other}",
            stratum.label()
        ))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn orders_and_zeros(w: &[u64]) -> Vec<(u64, Vec<usize>)> {
        strata(w)
            .into_iter()
            .map(|s| (s.order, s.zero_set))
            .collect()
    }

    #[test]
    fn strata_of_case_nine_ambient() {
        let s = orders_and_zeros(&[1, 6, 14, 21]);
        assert_eq!(
            &s[..3],
            &[(7, vec![0, 1]), (3, vec![0, 2]), (2, vec![0, 3])]
        );
        assert!(strata(&[1, 1, 1, 1]).is_empty());
    }

    #[test]
    fn strata_include_pairwise_intersections() {
        let s = strata(&[1, 6, 14, 21, 42]);
        let points: Vec<u64> = s.iter().filter(|s| s.dim == 1).map(|s| s.order).collect();
        for m in [21, 14, 6] {
            assert!(points.contains(&m), "missing Z{m} in {points:?}");
        }
    }

    #[test]
    fn strata_are_sorted() {
        let s = strata(&[1, 6, 42, 98, 147]);
        let keys: Vec<_> = s
            .iter()
            .map(|s| {
                (
                    std::cmp::Reverse(s.dim),
                    std::cmp::Reverse(s.order),
                    s.zero_set.clone(),
                )
            })
            .collect();
        let mut sorted = keys.clone();
        sorted.sort();
        assert_eq!(keys, sorted);
    }

    #[test]
    fn intersections() {
        let x = WeightedForm::new(vec![1, 4, 5, 10], 20).unwrap();
        let s = Stratum::with_support(x.weights(), &[1, 3]).unwrap();
        assert_eq!(s.order, 2);
        match stratum_intersection(&x, &s).unwrap() {
            GeometricLocus::Points { count, .. } => assert_eq!(count, 1),
            other => panic!("{other}"),
        }

        let x = WeightedForm::new(vec![1, 2, 3, 6, 6], 18).unwrap();
        let s = Stratum::with_support(x.weights(), &[2, 3, 4]).unwrap();
        match stratum_intersection(&x, &s).unwrap() {
            GeometricLocus::Curve { reduced, genus, .. } => {
                assert_eq!(reduced, WeightedForm::new(vec![1, 1, 1], 3).unwrap());
                assert_eq!(genus, 1);
            }
            other => panic!("{other}"),
        }

        let x = WeightedForm::new(vec![1, 3, 8, 12, 24], 48).unwrap();
        let s = Stratum::with_support(x.weights(), &[1, 3, 4]).unwrap();
        match stratum_intersection(&x, &s).unwrap() {
            GeometricLocus::Curve { reduced, genus, .. } => {
                assert_eq!(reduced, WeightedForm::new(vec![1, 1, 2], 4).unwrap());
                assert_eq!(genus, 1);
            }
            other => panic!("{other}"),
        }
    }

    #[test]
    fn vertex_strata_miss_the_hypersurface() {
        let x = WeightedForm::new(vec![1, 2, 3, 6, 6], 18).unwrap();
        let s = Stratum::with_support(x.weights(), &[2]).unwrap();
        assert!(matches!(
            stratum_intersection(&x, &s),
            Err(Error::EmptyIntersection(_))
        ));
    }

    #[test]
    #[allow(clippy::type_complexity)]
    fn point_types() {
        let cases: [(&[u64], u64, &[usize], u64, &[u64]); 4] = [
            (&[1, 2, 6, 9, 18], 36, &[3, 4], 9, &[1, 2, 6]),
            (&[1, 3, 24, 56, 84], 168, &[3, 4], 28, &[1, 3, 24]),
            (&[1, 6, 14, 21, 42], 84, &[2, 4], 14, &[1, 6, 7]),
            (&[1, 6, 42, 98, 147], 294, &[3, 4], 49, &[1, 6, 42]),
        ];
        for (w, d, support, m, expect) in cases {
            let x = WeightedForm::new(w.to_vec(), d).unwrap();
            let s = Stratum::with_support(w, support).unwrap();
            let q = point_singularity_type(&x, &s).unwrap();
            assert_eq!(q.order, m);
            assert_eq!(q.weights, expect);
            assert!(q.is_gorenstein());
        }
    }

    #[test]
    fn curve_strata_are_not_isolated() {
        let x = WeightedForm::new(vec![1, 2, 3, 6, 6], 18).unwrap();
        let s = Stratum::with_support(x.weights(), &[2, 3, 4]).unwrap();
        assert!(matches!(
            point_singularity_type(&x, &s),
            Err(Error::NotIsolatedOnX(_))
        ));
    }

    #[test]
    fn canonical_forms() {
        let q = QuotientSingularity::new(9, &[1, 2, 6]).unwrap();
        assert_eq!(canonical_sing_type(&q).weights, vec![1, 2, 6]);
        assert!(q.orbit_contains(&[1, 3, 5]));
        let q = QuotientSingularity::new(6, &[1, 2, 3]).unwrap();
        assert_eq!(canonical_sing_type(&q).weights, vec![1, 2, 3]);
        let q = QuotientSingularity::new(12, &[1, 3, 8]).unwrap();
        assert!(!q.orbit_contains(&[1, 2, 9]));
    }

    #[test]
    fn unit_orbit_oracle_by_brute_force() {
        // Independent enumeration: every unit and every permutation.
        let q = QuotientSingularity::new(12, &[1, 3, 8]).unwrap();
        let perms = [
            [0, 1, 2],
            [0, 2, 1],
            [1, 0, 2],
            [1, 2, 0],
            [2, 0, 1],
            [2, 1, 0],
        ];
        for u in [1u64, 5, 7, 11] {
            for p in perms {
                let image: Vec<u64> = p.iter().map(|&i| q.weights[i] * u % 12).collect();
                assert_ne!(image, vec![1, 2, 9]);
                assert!(q.orbit_contains(&image));
            }
        }
    }

    #[test]
    fn point_gcds_match_curve_strata() {
        let ambients: [&[u64]; 12] = [
            &[1, 2, 3, 6, 6],
            &[1, 2, 6, 9, 18],
            &[1, 2, 18, 42, 63],
            &[1, 3, 4, 8, 8],
            &[1, 3, 8, 12, 24],
            &[1, 3, 24, 56, 84],
            &[1, 4, 10, 15, 30],
            &[1, 6, 14, 21, 42],
            &[1, 6, 42, 98, 147],
            &[2, 3, 5, 10, 10],
            &[2, 3, 10, 15, 30],
            &[2, 3, 30, 70, 105],
        ];
        let mut seen = 0;
        for w in ambients {
            let form = WeightedForm::fermat(w.to_vec(), w.iter().sum()).unwrap();
            let all = strata(w);
            for s in &all {
                let Ok(q) = point_singularity_type(&form, s) else {
                    continue;
                };
                let mut through: Vec<u64> = s
                    .zero_set
                    .iter()
                    .map(|&j| {
                        all.iter()
                            .filter(|t| t.support.contains(&j))
                            .filter(|t| s.support.iter().all(|i| t.support.contains(i)))
                            .map(|t| t.order)
                            .max()
                            .unwrap_or(1)
                    })
                    .collect();
                through.sort_unstable();
                assert_eq!(q.sorted_gcds(), through, "{w:?} {}", s.label());
                seen += 1;
            }
        }
        assert!(seen >= 20);
    }
}
