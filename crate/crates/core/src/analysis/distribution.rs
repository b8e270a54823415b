use std::fmt;

use rand::Rng;

use crate::bitcore::BitString;
use crate::{Error, Result, Scalar};

/// A probability distribution on `X_t`.
#[derive(Debug, Clone, PartialEq)]
pub enum DistributionSpec<S> {
    Uniform,
    /// Finitely many atoms with their weights.
    PointMassMixture(Vec<(BitString, S)>),
    /// Independent bits, each `1` with the given probability.
    ProductBernoulli(S),
    /// One weight per string of `X_t`, in lexicographic order.
    Explicit(Vec<S>),
}

impl<S: Scalar> DistributionSpec<S> {
    pub fn point_mass(x: BitString) -> Self {
        DistributionSpec::PointMassMixture(vec![(x, S::one())])
    }

    /// Weights of all `2^t` strings, validated to be a probability vector.
    pub fn weights(&self, t: usize) -> Result<Vec<S>> {
        if t > 24 {
            return Err(Error::OutOfRange(format!("distributions on X_t need t <= 24, got {t}")));
        }
        let size = 1usize << t;
        let w = match self {
            DistributionSpec::Uniform => vec![S::from_ratio(1, size as u64); size],
            DistributionSpec::PointMassMixture(atoms) => {
                let mut w = vec![S::zero(); size];
                for (x, p) in atoms {
                    if x.len() != t {
                        return Err(Error::WrongLength { expected: t, got: x.len() });
                    }
                    let i = x.bits().iter().fold(0usize, |a, &b| (a << 1) | b as usize);
                    w[i] = w[i].clone() + p.clone();
                }
                w
            }
            DistributionSpec::ProductBernoulli(p) => {
                if *p < S::zero() || *p > S::one() {
                    return Err(Error::Domain(format!("Bernoulli parameter {p} outside [0, 1]")));
                }
                let q = S::one() - p.clone();
                (0..size)
                    .map(|i| {
                        (0..t).fold(S::one(), |acc, bit| acc * if i >> bit & 1 == 1 { p.clone() } else { q.clone() })
                    })
                    .collect()
            }
            DistributionSpec::Explicit(w) => {
                if w.len() != size {
                    return Err(Error::WrongLength { expected: size, got: w.len() });
                }
                w.clone()
            }
        };
        if w.iter().any(|p| *p < S::zero()) {
            return Err(Error::Domain("negative probability weight".into()));
        }
        let total = w.iter().fold(S::zero(), |a, p| a + p.clone());
        let slack = S::tolerance();
        if total.clone() > S::one() + slack.clone() || total.clone() + slack < S::one() {
            return Err(Error::Domain(format!("weights sum to {total}, not 1")));
        }
        Ok(w)
    }

    /// Short identifier used in reports.
    pub fn label(&self) -> String {
        match self {
            DistributionSpec::Uniform => "uniform".into(),
            DistributionSpec::PointMassMixture(atoms) if atoms.len() == 1 => format!("point-mass({})", atoms[0].0),
            DistributionSpec::PointMassMixture(atoms) => {
                let parts: Vec<String> = atoms.iter().map(|(x, p)| format!("{x}:{p}")).collect();
                format!("mixture({})", parts.join(","))
            }
            DistributionSpec::ProductBernoulli(p) => format!("bernoulli({p})"),
            DistributionSpec::Explicit(w) => {
                let parts: Vec<String> = w.iter().map(|p| p.to_string()).collect();
                format!("explicit({})", parts.join(","))
            }
        }
    }
}

impl<S: Scalar> fmt::Display for DistributionSpec<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}

/// The family standing in for "all distributions": uniform, every point
/// mass, and product Bernoulli with `p ∈ {1/10, 1/4, 1/2}`.
pub fn default_family<S: Scalar>(t: usize) -> Vec<DistributionSpec<S>> {
    let mut family = vec![DistributionSpec::Uniform];
    family.extend(crate::bitcore::all_strings(t).into_iter().map(DistributionSpec::point_mass));
    family.extend([(1, 10), (1, 4), (1, 2)].map(|(a, b)| DistributionSpec::ProductBernoulli(S::from_ratio(a, b))));
    family
}

/// Inverse-CDF sampler over indices of a weight vector.
#[derive(Debug, Clone)]
pub(crate) struct IndexSampler {
    cumulative: Vec<f64>,
    last_positive: usize,
}

impl IndexSampler {
    pub fn new<S: Scalar>(weights: &[S]) -> Self {
        let mut acc = 0.0;
        let cumulative = weights
            .iter()
            .map(|w| {
                acc += w.to_f64();
                acc
            })
            .collect();
        let last_positive = weights.iter().rposition(|w| w.to_f64() > 0.0).unwrap_or(0);
        Self { cumulative, last_positive }
    }

    pub fn draw(&self, rng: &mut impl Rng) -> usize {
        let total = *self.cumulative.last().expect("nonempty support");
        let u = rng.gen::<f64>() * total;
        self.cumulative.partition_point(|&c| c <= u).min(self.last_positive)
    }
}
